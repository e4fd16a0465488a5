//! Special functions: gamma (Lanczos), Riemann zeta, standard normal.

use core::f64::consts::{PI, SQRT_2};

use crate::math;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return math::ln(PI / math::abs(math::sin(PI * x))) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * math::ln(2.0 * PI) + (x + 0.5) * math::ln(t) - t + math::ln(acc)
}

/// `Γ(x)` for positive arguments.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (math::sin(PI * x) * gamma(1.0 - x));
    }
    math::exp(ln_gamma(x))
}

// B_{2j} / (2j)!
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

/// Riemann zeta for real `s > 1`, by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    debug_assert!(s > 1.0);
    const N: usize = 12;
    let nf = N as f64;
    let mut sum = 0.0;
    for k in 1..N {
        sum += math::powf(k as f64, -s);
    }
    let n_pow = math::powf(nf, -s);
    sum += nf * n_pow / (s - 1.0) + 0.5 * n_pow;
    // rising product s(s+1)...(s+2j-2) times N^{-s-2j+1}
    let mut rising = s;
    let mut n_term = n_pow / nf;
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += b * rising * n_term;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        n_term /= nf * nf;
    }
    sum
}

/// `ζ(-a)` for `a > 0` through the functional equation.
pub fn zeta_negative(a: f64) -> f64 {
    debug_assert!(a > 0.0);
    let s = 1.0 + a;
    2.0 * math::powf(2.0 * PI, -s) * math::cos(0.5 * PI * s) * gamma(s) * zeta(s)
}

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * math::exp(-0.5 * z * z)
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * math::erfc(-z / SQRT_2)
}

/// Standard normal quantile: Acklam's rational approximation followed by a
/// Halley step against `erfc`.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let x = if p < P_LOW {
        let q = math::sqrt(-2.0 * math::ln(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = math::sqrt(-2.0 * math::ln(1.0 - p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    let e = normal_cdf(x) - p;
    let u = e / normal_pdf(x);
    x - u / (1.0 + 0.5 * x * u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((ln_gamma(101.0) - 363.739_375_555_563_5).abs() < 1e-9);
        // Γ(0.1) = 9.513507698668732
        assert!((gamma(0.1) - 9.513_507_698_668_732).abs() < 1e-11);
    }

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        // ζ(1.5) = 2.612375348685488
        assert!((zeta(1.5) - 2.612_375_348_685_488).abs() < 1e-12);
        // ζ(1.01) = 100.57794333849678
        assert!((zeta(1.01) - 100.577_943_338_496_78).abs() < 1e-9);
    }

    #[test]
    fn zeta_at_negative_arguments() {
        assert!((zeta_negative(1.0) + 1.0 / 12.0).abs() < 1e-14);
        assert!(zeta_negative(2.0).abs() < 1e-15);
        assert!((zeta_negative(3.0) - 1.0 / 120.0).abs() < 1e-14);
        // ζ(-1/2) = -0.20788622497735457
        assert!((zeta_negative(0.5) + 0.207_886_224_977_354_57).abs() < 1e-12);
    }

    #[test]
    fn normal_quantile_inverts_cdf() {
        assert!((normal_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-13);
        assert!((normal_quantile(0.75) - 0.674_489_750_196_081_7).abs() < 1e-13);
        for &p in &[1e-10, 1e-4, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9] {
            let z = normal_quantile(p);
            assert!((normal_cdf(z) - p).abs() <= 1e-14 * p.max(1e-3), "p = {p}");
        }
    }
}

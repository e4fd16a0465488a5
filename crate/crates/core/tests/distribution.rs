use std::f64::consts::PI;

use qcvstable_core::stable::{
    char_function, quantile, sample, tail_constants, tail_quantile_approx,
};
use qcvstable_core::{IntegrationConfig, StableParams, SymmetricStable};

fn dist(alpha: f64) -> SymmetricStable {
    SymmetricStable::new(alpha, &IntegrationConfig::default()).unwrap()
}

#[test]
fn cdf_quantile_round_trip() {
    for alpha in [0.5, 1.0, 1.5, 1.9, 2.0] {
        let d = dist(alpha);
        for i in 1..=99 {
            let p = i as f64 / 100.0;
            let x = d.quantile(p).unwrap();
            assert!((d.cdf(x) - p).abs() <= 1e-6, "alpha {alpha} p {p}");
        }
    }
}

#[test]
fn reference_quantiles() {
    let cfg = IntegrationConfig::default();
    assert!((quantile(2.0, 0.975, &cfg).unwrap() - 2.0f64.sqrt() * 1.959_963_984_540_054).abs() < 1e-9);
    assert!((quantile(1.0, 0.75, &cfg).unwrap() - 1.0).abs() < 1e-12);
    for alpha in [0.7, 1.3, 2.0] {
        assert_eq!(quantile(alpha, 0.5, &cfg).unwrap(), 0.0);
    }
}

#[test]
fn tail_law_at_extreme_quantile() {
    for alpha in [0.8, 1.2, 1.6] {
        let d = dist(alpha);
        let x = d.quantile(0.9999).unwrap();
        let c = tail_constants(alpha).unwrap().c_alpha;
        let ratio = (1.0 - d.cdf(x)) / (c * x.powf(-alpha));
        assert!((ratio - 1.0).abs() < 0.02, "alpha {alpha}: {ratio}");
    }
}

#[test]
fn tail_quantile_approximation() {
    assert!((tail_quantile_approx(1.0, 0.999).unwrap() - 1000.0 / PI).abs() < 1e-9);
    let exact = (PI * 0.4999).tan();
    assert!((tail_quantile_approx(1.0, 0.9999).unwrap() / exact - 1.0).abs() < 1e-4);
    // c̄_{0.5} = (sin(π/4) Γ(1/2) / π)^2 = 1 / (2π)
    let expect = 1e4 / (2.0 * PI);
    assert!((tail_quantile_approx(0.5, 0.99).unwrap() - expect).abs() < 1e-9 * expect);
}

#[test]
fn quantiles_ordered_in_alpha() {
    let alphas = [1.0, 1.25, 1.5, 1.75, 2.0];
    let ps: Vec<f64> = (0..=4).map(|i| 0.75 + 0.05 * i as f64).chain([0.99]).collect();
    let dists: Vec<_> = alphas.iter().map(|&a| dist(a)).collect();
    for w in dists.windows(2) {
        for &p in &ps {
            let (q1, q2) = (w[0].quantile(p).unwrap(), w[1].quantile(p).unwrap());
            assert!(q1 > q2, "alpha {} vs {} at p {p}", w[0].alpha(), w[1].alpha());
        }
    }
}

/// Simpson integral of the density over `|x| <= X` in `x = sinh(s)`, plus
/// the asymptotic mass beyond `X`.
fn total_mass(d: &SymmetricStable, x_max: f64) -> f64 {
    let s_max = x_max.asinh();
    let m = 4000;
    let h = s_max / m as f64;
    let f = |s: f64| d.pdf(s.sinh()) * s.cosh();
    let mut acc = f(0.0) + f(s_max);
    for i in 1..m {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    let inner = 2.0 * acc * h / 3.0;
    let tail = match d.tail_constants() {
        Some(tc) => 2.0 * tc.c_alpha * x_max.powf(-d.alpha()),
        None => 0.0,
    };
    inner + tail
}

#[test]
fn density_integrates_to_one() {
    for alpha in [0.6, 0.9, 1.2, 1.5, 1.8, 2.0] {
        let d = dist(alpha);
        let x_max = if alpha == 2.0 { 20.0 } else { d.quantile(0.99999).unwrap() };
        let mass = total_mass(&d, x_max);
        assert!((mass - 1.0).abs() < 1e-4, "alpha {alpha}: {mass}");
    }
}

#[test]
fn sampler_moments() {
    let g = sample(&StableParams::symmetric(2.0).unwrap(), 1_000_000, 11);
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    let var = g.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (g.len() - 1) as f64;
    assert!((var - 2.0).abs() < 0.02, "{var}");

    let mut c = sample(&StableParams::symmetric(1.0).unwrap(), 1_000_000, 12);
    c.sort_by(f64::total_cmp);
    let q75 = c[750_000];
    assert!((q75 - 1.0).abs() < 0.02, "{q75}");

    let s = sample(&StableParams::symmetric(1.5).unwrap(), 1_000_000, 13);
    let x = tail_quantile_approx(1.5, 0.999).unwrap();
    let frac = s.iter().filter(|&&v| v > x).count() as f64 / s.len() as f64;
    assert!((frac - 0.001).abs() < 2e-4, "{frac}");
}

#[test]
fn skewed_sampler_matches_char_function() {
    // empirical characteristic function against the closed form
    for (alpha, beta) in [(1.5, 0.5), (1.2, -1.0), (1.0, 0.7), (0.8, 0.3)] {
        let params = StableParams::new(alpha, beta, 1.0, 0.0).unwrap();
        let xs = sample(&params, 400_000, 21);
        for u in [0.3, 1.0, 2.0] {
            let (mut re, mut im) = (0.0, 0.0);
            for &x in &xs {
                re += (u * x).cos();
                im += (u * x).sin();
            }
            let n = xs.len() as f64;
            let phi = char_function(&params, u);
            let err = ((re / n - phi.re).powi(2) + (im / n - phi.im).powi(2)).sqrt();
            // standard error is at most 1/sqrt(n) per component
            assert!(err < 5.0 / n.sqrt(), "alpha {alpha} beta {beta} u {u}: {err}");
        }
    }
}

#[test]
fn scale_and_location_act_affinely() {
    let base = sample(&StableParams::symmetric(1.7).unwrap(), 500, 5);
    let moved = sample(&StableParams::new(1.7, 0.0, 2.0, -3.0).unwrap(), 500, 5);
    for (x, y) in base.iter().zip(&moved) {
        assert!((2.0 * x - 3.0 - y).abs() < 1e-12 * (1.0 + y.abs()));
    }
}

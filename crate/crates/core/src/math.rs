//! Float intrinsics that resolve to `std` when available and to `libm`
//! otherwise.

macro_rules! unary {
    ($($name:ident => $libm:ident),* $(,)?) => {
        $(
            #[inline(always)]
            pub(crate) fn $name(x: f64) -> f64 {
                #[cfg(feature = "std")]
                {
                    x.$name()
                }
                #[cfg(not(feature = "std"))]
                {
                    libm::$libm(x)
                }
            }
        )*
    };
}

unary!(
    sin => sin,
    cos => cos,
    tan => tan,
    atan => atan,
    exp => exp,
    ln => log,
    sqrt => sqrt,
    floor => floor,
    ceil => ceil,
    round => round,
    sinh => sinh,
    asinh => asinh,
    abs => fabs,
);

#[inline(always)]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powf(y)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, y)
    }
}

#[inline(always)]
pub(crate) fn sin_cos(x: f64) -> (f64, f64) {
    #[cfg(feature = "std")]
    {
        x.sin_cos()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sincos(x)
    }
}

/// `erfc` is not part of `std`, so both builds use `libm` here.
#[inline(always)]
pub(crate) fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

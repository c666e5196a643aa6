//! Thin wrappers over `libm` plus the numerically safe hyperbolic forms used
//! throughout the physics modules.

pub(crate) use core::f64::consts::PI;

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `1/(e^y - 1)` for `y > 0`.
#[inline]
pub(crate) fn bose(y: f64) -> f64 {
    1.0 / exp_m1(y)
}

/// `tanh(y/2)` for `y >= 0`, accurate for small and large `y`.
#[inline]
pub(crate) fn tanh_half(y: f64) -> f64 {
    let e = exp(-y);
    -exp_m1(-y) / (1.0 + e)
}

/// `ln tanh(y/2)` for `y > 0`.
#[inline]
pub(crate) fn ln_tanh_half(y: f64) -> f64 {
    ln(-exp_m1(-y)) - ln_1p(exp(-y))
}

/// `ln(1 - e^{-y})` for `y > 0`.
#[inline]
pub(crate) fn ln_one_minus_exp(y: f64) -> f64 {
    ln(-exp_m1(-y))
}

/// `coth(y)` for `y > 0`.
#[inline]
pub(crate) fn coth(y: f64) -> f64 {
    1.0 + 2.0 / exp_m1(2.0 * y)
}

/// `1/sinh(y)` for `y > 0`; underflows cleanly to zero.
#[inline]
pub(crate) fn csch(y: f64) -> f64 {
    2.0 * exp(-y) / -exp_m1(-2.0 * y)
}

/// `1/sinh²(y)` for `y > 0`.
#[inline]
pub(crate) fn csch2(y: f64) -> f64 {
    let c = csch(y);
    c * c
}

/// `1/cosh²(y)`.
#[inline]
pub(crate) fn sech2(y: f64) -> f64 {
    let e = exp(-2.0 * y.abs());
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

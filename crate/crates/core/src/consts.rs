//! Algebraic constants shared by the closed forms.
//!
//! These are evaluated from `cbrt` at full double precision rather than stored
//! as truncated decimals.

/// `2^(1/3)`.
#[inline]
pub fn cbrt2() -> f64 {
    libm::cbrt(2.0)
}

/// `2^(2/3)`.
#[inline]
pub fn cbrt4() -> f64 {
    let c = cbrt2();
    c * c
}

/// `δ = 2 + 2^(1/3) ≈ 3.25992`, the regime boundary of the EC and WEC solutions.
///
/// It is the unique real root of `10 - 12x + 6x^2 - x^3`.
#[inline]
pub fn delta() -> f64 {
    2.0 + cbrt2()
}

/// The cubic whose unique real root is [`delta`].
pub fn delta_cubic(x: f64) -> f64 {
    10.0 - 12.0 * x + 6.0 * x * x - x * x * x
}

/// Plateau of the EC competitive ratio, `(2 + 2^(1/3))^3 / 2 ≈ 17.3217`.
#[inline]
pub fn ec_ratio_plateau() -> f64 {
    let d = delta();
    0.5 * d * d * d
}

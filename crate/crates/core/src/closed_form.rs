//! Closed-form optimal speeds, feasibility conditions and performance factors
//! for Simple Wireless Search, plus the functional-speed construction for
//! constant energy budgets.
//!
//! WEC and WE are solved for maximum speed `b = 1` only.

use crate::consts::{cbrt4, delta, ec_ratio_plateau};
use crate::error::{positive, Error, Result};
use crate::model::SpeedPair;

#[cfg(feature = "serde")]
use serde::Serialize;

/// Which piece of a piecewise optimal solution applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "snake_case"))]
pub enum Regime {
    /// `3 <= cb <= δ`: rescue speed pinned at `b`.
    EcTightSpeedBound,
    /// `cb > δ`: only the time bound is tight.
    EcInterior,
    /// `e < δ`.
    WecLowEnergy,
    /// `δ <= e < 4`.
    WecMidEnergy,
    /// `e >= 4`: both speeds at 1.
    WecSaturated,
    /// `e < 3`.
    WeLowEnergy,
    /// `e >= 3`.
    WeSaturated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct OptimalSpeeds {
    pub pair: SpeedPair,
    pub regime: Regime,
}

/// EC(b, c) is solvable (by any online algorithm) iff `bc >= 3`.
pub fn ec_feasible(b: f64, c: f64) -> bool {
    b * c >= 3.0
}

fn ec_params(b: f64, c: f64) -> Result<(f64, f64)> {
    let b = positive("b", b)?;
    let c = positive("c", c)?;
    if !ec_feasible(b, c) {
        return Err(Error::Infeasible("bc < 3"));
    }
    Ok((b, c))
}

/// Energy-optimal `SWS(s, r)` speeds for EC(b, c).
///
/// The boundary `cb = δ` is assigned to the tight-speed-bound branch; both
/// branches coincide there.
pub fn ec_optimal_speeds(b: f64, c: f64) -> Result<OptimalSpeeds> {
    let (b, c) = ec_params(b, c)?;
    let x = b * c;
    let (s, r, regime) = if x <= delta() {
        (b / (x - 2.0), b, Regime::EcTightSpeedBound)
    } else {
        ((1.0 + cbrt4()) / c, delta() / c, Regime::EcInterior)
    };
    Ok(OptimalSpeeds {
        pair: SpeedPair::new(s, r)?,
        regime,
    })
}

/// Competitive ratio `f(cb)` of the optimal `SWS` for EC; total energy is
/// `f(cb) * 2d / c^2`.
pub fn ec_ratio_f(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 3.0) {
        return Err(Error::Infeasible("bc < 3"));
    }
    if x <= delta() {
        let y = x - 2.0;
        Ok(x * x / (y * y) + x * x)
    } else {
        Ok(ec_ratio_plateau())
    }
}

/// Time-optimal speeds for WEC(1, e·d) (total energy budget linear in `d`).
pub fn wec_optimal_speeds(e: f64) -> Result<OptimalSpeeds> {
    let e = positive("e", e)?;
    let (s, r, regime) = if e < delta() {
        (
            libm::sqrt(e / (2.0 * (1.0 + cbrt4()))),
            libm::sqrt(e / delta()),
            Regime::WecLowEnergy,
        )
    } else if e < 4.0 {
        (libm::sqrt((e - 2.0) / 2.0), 1.0, Regime::WecMidEnergy)
    } else {
        (1.0, 1.0, Regime::WecSaturated)
    };
    Ok(OptimalSpeeds {
        pair: SpeedPair::new(s, r)?,
        regime,
    })
}

/// Evacuation time factor `g(e)` for WEC(1, e·d): time is `g(e)·d`.
pub fn wec_time_factor_g(e: f64) -> Result<f64> {
    let e = positive("e", e)?;
    let dl = delta();
    Ok(if e < dl {
        libm::sqrt(dl * dl * dl / e)
    } else if e < 4.0 {
        2.0 + libm::sqrt(2.0 / (e - 2.0))
    } else {
        3.0
    })
}

/// Time-optimal speeds for WE(1, e·d) (makespan energy budget linear in `d`).
pub fn we_optimal_speeds(e: f64) -> Result<OptimalSpeeds> {
    let e = positive("e", e)?;
    let (v, regime) = if e < 3.0 {
        (libm::sqrt(e / 3.0), Regime::WeLowEnergy)
    } else {
        (1.0, Regime::WeSaturated)
    };
    Ok(OptimalSpeeds {
        pair: SpeedPair::new(v, v)?,
        regime,
    })
}

/// Evacuation time factor `g(e)` for WE(1, e·d).
///
/// For `e >= 3` this is 3 (`1/s + 2/r` at `s = r = 1`, and the left limit at 3).
pub fn we_time_factor_g(e: f64) -> Result<f64> {
    let e = positive("e", e)?;
    Ok(if e < 3.0 {
        3.0 * libm::sqrt(3.0 / e)
    } else {
        3.0
    })
}

/// Constant rescue speed that spends exactly the energy left over after the
/// functional exploration: `sqrt(e / (2d(e·ln(d+1) + 1)))`.
///
/// At most 1 whenever `d >= 1` and `e <= 1`.
pub fn functional_rescue_speed(e: f64, d: f64) -> Result<f64> {
    let e = positive("e", e)?;
    let d = positive("d", d)?;
    Ok(libm::sqrt(e / (2.0 * d * (e * libm::log1p(d) + 1.0))))
}

/// Energy `e/(e·ln(d+1) + 1)` left for the non-finder's rescue leg.
pub fn functional_leftover_energy(e: f64, d: f64) -> Result<f64> {
    let e = positive("e", e)?;
    let d = positive("d", d)?;
    Ok(e / (e * libm::log1p(d) + 1.0))
}

/// Exact exploration energy of the (uncapped) functional profile over `[0, d]`:
/// `e/2 - e/(2e·ln(d+1) + 2)`.
pub fn functional_exploration_energy(e: f64, d: f64) -> Result<f64> {
    let e = positive("e", e)?;
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::param("d", "must be finite and nonnegative"));
    }
    Ok(0.5 * e - e / (2.0 * e * libm::log1p(d) + 2.0))
}

/// Exact time for the (uncapped) functional profile to reach distance `d`:
/// `2√2((d+1)^{3/2}(3e·ln(d+1) − 2e + 3) + 2e − 3) / (9e)`.
pub fn functional_finder_time(e: f64, d: f64) -> Result<f64> {
    let e = positive("e", e)?;
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::param("d", "must be finite and nonnegative"));
    }
    let big = libm::pow(d + 1.0, 1.5) * (3.0 * e * libm::log1p(d) - 2.0 * e + 3.0);
    Ok(2.0 * core::f64::consts::SQRT_2 * (big + 2.0 * e - 3.0) / (9.0 * e))
}

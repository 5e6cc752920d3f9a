//! Adversarial exit placement against a fixed two-robot strategy.
//!
//! Any strategy with speed bound `b` is forced to evacuation time at least
//! `3d/b` for some exit at distance (about) `d`: wait until time `d/b`, see which
//! of `±d` has been reached, and put the exit where the robots are not.

mod strategy;

use alloc::vec::Vec;

pub use strategy::Strategy;

use crate::error::{positive, Error, Result};
use crate::model::{simulate_functional, Constraint, EnergyBudget, ProblemInstance, Side};

#[cfg(feature = "serde")]
use serde::Serialize;

/// Relative offset of the exit from `-d` (or `+d`) when only the opposite side
/// has been reached by time `d/b`.
pub const CASE_TWO_EPSILON: f64 = 1e-6;

/// Geometric grid density used by [`infeasibility_witness`].
pub const WITNESS_POINTS_PER_DECADE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct AdversaryReport {
    pub exit_distance: f64,
    pub exit_side: Side,
    pub induced_time: f64,
    /// `induced_time / exit_distance`.
    pub ratio: f64,
    pub violated_bound: Option<Constraint>,
}

/// Earliest times at which any robot reaches `+d` and `-d`.
pub fn first_visit_times(strategy: &Strategy, d: f64) -> (Option<f64>, Option<f64>) {
    (
        strategy.first_visit_any(d).map(|(_, t)| t),
        strategy.first_visit_any(-d).map(|(_, t)| t),
    )
}

/// Places the exit at distance about `d` so as to force a slow evacuation.
///
/// * both `±d` reached at time `d/b`, or neither: the exit goes on the side
///   reached later (ties go to `-d`);
/// * exactly one side reached at `d/b`: the exit goes just inside the other
///   side, at `∓(d − ε)` with `ε = d·CASE_TWO_EPSILON`, pulled closer to `∓d`
///   if that point was already visited.
///
/// The non-finder is charged straight-line travel at the maximum speed.
pub fn adversarial_exit(strategy: &Strategy, d: f64) -> Result<AdversaryReport> {
    let d = positive("d", d)?;
    let b = strategy.max_speed();
    let tau = d / b;
    let (t_plus, t_minus) = first_visit_times(strategy, d);
    let reached = |t: Option<f64>| t.is_some_and(|t| t <= tau * (1.0 + 1e-12));

    let exit = match (reached(t_plus), reached(t_minus)) {
        (true, false) => case_two(strategy, d, tau, Side::Negative),
        (false, true) => case_two(strategy, d, tau, Side::Positive),
        _ => match (t_plus, t_minus) {
            (Some(tp), Some(tm)) if tp > tm => d,
            (Some(_), Some(_)) => -d,
            _ => return Err(Error::HorizonTooShort { distance: d }),
        },
    };

    let induced_time = strategy
        .evacuation_time(exit)
        .ok_or(Error::HorizonTooShort { distance: d })?;
    let exit_distance = exit.abs();
    Ok(AdversaryReport {
        exit_distance,
        exit_side: if exit < 0.0 {
            Side::Negative
        } else {
            Side::Positive
        },
        induced_time,
        ratio: induced_time / exit_distance,
        violated_bound: None,
    })
}

fn case_two(strategy: &Strategy, d: f64, tau: f64, side: Side) -> f64 {
    let (lo, hi) = strategy.extent_until(tau);
    let gap = match side {
        Side::Negative => lo + d,
        Side::Positive => d - hi,
    };
    let mut eps = d * CASE_TWO_EPSILON;
    if gap > 0.0 && gap < 2.0 * eps {
        eps = 0.5 * gap;
    }
    side.sign() * (d - eps)
}

/// Finds an exit for which `strategy` misses the EC(b, c) time bound `c·d`.
///
/// Scans distances on a geometric grid over `[1, horizon·max_speed/3]`; for
/// `bc < 3` every resolvable distance yields a violation.
pub fn infeasibility_witness(b: f64, c: f64, strategy: &Strategy) -> Result<AdversaryReport> {
    let b = positive("b", b)?;
    let c = positive("c", c)?;
    if b * c >= 3.0 {
        return Err(Error::Precondition("infeasibility witness requires bc < 3"));
    }
    if strategy.max_speed() > b {
        return Err(Error::InvalidStrategy(
            "strategy is faster than the speed bound b",
        ));
    }
    let upper = strategy.horizon() * strategy.max_speed() / 3.0;
    if upper < 1.0 {
        return Err(Error::HorizonTooShort { distance: 1.0 });
    }

    let step = 1.0 / WITNESS_POINTS_PER_DECADE as f64;
    let mut k = 0u32;
    loop {
        let d = libm::pow(10.0, k as f64 * step);
        if d > upper {
            break;
        }
        match adversarial_exit(strategy, d) {
            Ok(mut report) => {
                if report.induced_time > c * report.exit_distance {
                    report.violated_bound = Some(Constraint::TimeBound);
                    return Ok(report);
                }
            }
            Err(Error::HorizonTooShort { .. }) => {}
            Err(e) => return Err(e),
        }
        k += 1;
    }
    Err(Error::HorizonTooShort { distance: upper })
}

/// One row of [`empirical_growth_exponent`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct GrowthRow {
    pub d: f64,
    pub time: f64,
    /// `time / (d^{3/2} ln d)`.
    pub normalized: f64,
    /// `d^{3/2} / e`, the lower bound for any algorithm with budget `e`.
    pub lower_floor: f64,
}

/// Evacuation times of the functional-speed algorithm under a constant budget
/// `e <= 1`, normalized by `d^{3/2} ln d`.
pub fn empirical_growth_exponent(e: f64, d_values: &[f64], tol: f64) -> Result<Vec<GrowthRow>> {
    let e = positive("e", e)?;
    if e > 1.0 {
        return Err(Error::Precondition(
            "growth rows require a constant budget e <= 1",
        ));
    }
    d_values
        .iter()
        .map(|&d| {
            if !(d >= 10.0 && d.is_finite()) {
                return Err(Error::Precondition("growth rows require d >= 10"));
            }
            let inst = ProblemInstance::wec(EnergyBudget::Constant(e), d)?;
            let out = simulate_functional(e, &inst, tol)?;
            let d32 = d * libm::sqrt(d);
            Ok(GrowthRow {
                d,
                time: out.evacuation_time,
                normalized: out.evacuation_time / (d32 * libm::log(d)),
                lower_floor: d32 / e,
            })
        })
        .collect()
}

/// Exit distance that no robot restricted to the finite `speeds` can reach
/// within a constant budget: `Δ/s_min² + 1`.
pub fn finite_speed_witness(speeds: &[f64], budget: f64) -> Result<f64> {
    let budget = positive("budget", budget)?;
    let mut slowest = f64::INFINITY;
    for &s in speeds {
        slowest = slowest.min(positive("speed", s)?);
    }
    if !slowest.is_finite() {
        return Err(Error::param("speeds", "must be nonempty"));
    }
    Ok(budget / (slowest * slowest) + 1.0)
}

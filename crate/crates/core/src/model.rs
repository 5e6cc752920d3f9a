//! Domain types, the drag-energy functional and exact evaluation of Simple
//! Wireless Search.
//!
//! Motion is analytic throughout: either piecewise-constant speed
//! ([`TrajectorySegment`]) or a closed-form position-dependent profile
//! ([`SpeedProfile`]). Energy to cover `[a, b]` with speed `s(x)` is
//! `∫ s(x)^2 dx`; time is `∫ 1/s(x) dx`.

use alloc::vec::Vec;

use crate::closed_form;
use crate::error::{positive, Error, Result};
use crate::quadrature;

#[cfg(feature = "serde")]
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "lowercase"))]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "lowercase"))]
pub enum ProblemKind {
    /// Minimize total energy under a time bound `c*d`.
    Ec,
    /// Minimize time under a total-energy budget.
    Wec,
    /// Minimize time under a makespan-energy budget.
    We,
}

/// Energy budget `Δ`, either fixed or proportional to the exit distance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "lowercase"))]
pub enum EnergyBudget {
    Constant(f64),
    Linear(f64),
}

impl EnergyBudget {
    pub fn coefficient(self) -> f64 {
        match self {
            EnergyBudget::Constant(e) | EnergyBudget::Linear(e) => e,
        }
    }

    /// `Δ` for an exit at distance `d`.
    pub fn limit(self, d: f64) -> f64 {
        match self {
            EnergyBudget::Constant(e) => e,
            EnergyBudget::Linear(e) => e * d,
        }
    }
}

/// One problem instance: objective, bounds and the exit location.
///
/// The time bound and energy budget are optional; only declared bounds are
/// checked when an outcome's feasibility is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct ProblemInstance {
    kind: ProblemKind,
    max_speed: f64,
    time_factor: Option<f64>,
    energy_budget: Option<EnergyBudget>,
    exit_distance: f64,
    exit_side: Side,
}

impl ProblemInstance {
    /// EC(b, c) with the exit at `+d`.
    pub fn ec(max_speed: f64, time_factor: f64, exit_distance: f64) -> Result<Self> {
        Ok(Self {
            kind: ProblemKind::Ec,
            max_speed: positive("max_speed", max_speed)?,
            time_factor: Some(positive("time_factor", time_factor)?),
            energy_budget: None,
            exit_distance: positive("exit_distance", exit_distance)?,
            exit_side: Side::Positive,
        })
    }

    /// WEC(1, Δ) with the exit at `+d`.
    pub fn wec(budget: EnergyBudget, exit_distance: f64) -> Result<Self> {
        Self::budgeted(ProblemKind::Wec, budget, exit_distance)
    }

    /// WE(1, Δ) with the exit at `+d`.
    pub fn we(budget: EnergyBudget, exit_distance: f64) -> Result<Self> {
        Self::budgeted(ProblemKind::We, budget, exit_distance)
    }

    /// An instance that only declares a speed bound (no time or energy limits).
    pub fn unconstrained(kind: ProblemKind, max_speed: f64, exit_distance: f64) -> Result<Self> {
        Ok(Self {
            kind,
            max_speed: positive("max_speed", max_speed)?,
            time_factor: None,
            energy_budget: None,
            exit_distance: positive("exit_distance", exit_distance)?,
            exit_side: Side::Positive,
        })
    }

    fn budgeted(kind: ProblemKind, budget: EnergyBudget, exit_distance: f64) -> Result<Self> {
        positive("energy_budget", budget.coefficient())?;
        Ok(Self {
            kind,
            max_speed: 1.0,
            time_factor: None,
            energy_budget: Some(budget),
            exit_distance: positive("exit_distance", exit_distance)?,
            exit_side: Side::Positive,
        })
    }

    pub fn with_max_speed(mut self, max_speed: f64) -> Result<Self> {
        self.max_speed = positive("max_speed", max_speed)?;
        Ok(self)
    }

    pub fn with_time_factor(mut self, time_factor: f64) -> Result<Self> {
        self.time_factor = Some(positive("time_factor", time_factor)?);
        Ok(self)
    }

    pub fn with_energy_budget(mut self, budget: EnergyBudget) -> Result<Self> {
        positive("energy_budget", budget.coefficient())?;
        self.energy_budget = Some(budget);
        Ok(self)
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.exit_side = side;
        self
    }

    pub fn with_exit_distance(mut self, exit_distance: f64) -> Result<Self> {
        self.exit_distance = positive("exit_distance", exit_distance)?;
        Ok(self)
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }
    pub fn max_speed(&self) -> f64 {
        self.max_speed
    }
    pub fn time_factor(&self) -> Option<f64> {
        self.time_factor
    }
    pub fn energy_budget(&self) -> Option<EnergyBudget> {
        self.energy_budget
    }
    pub fn exit_distance(&self) -> f64 {
        self.exit_distance
    }
    pub fn exit_side(&self) -> Side {
        self.exit_side
    }

    /// Signed exit position.
    pub fn exit_position(&self) -> f64 {
        self.exit_side.sign() * self.exit_distance
    }

    /// `Δ` for this instance, if a budget is declared.
    pub fn energy_limit(&self) -> Option<f64> {
        self.energy_budget.map(|b| b.limit(self.exit_distance))
    }
}

/// Exploration speed `s` and rescue speed `r` of `SWS(s, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct SpeedPair {
    s: f64,
    r: f64,
}

impl SpeedPair {
    pub fn new(s: f64, r: f64) -> Result<Self> {
        Ok(Self {
            s: positive("s", s)?,
            r: positive("r", r)?,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Evacuation time per unit exit distance, `1/s + 2/r`.
    pub fn time_per_distance(&self) -> f64 {
        1.0 / self.s + 2.0 / self.r
    }

    /// `s^2 + r^2`; total energy is `2d` times this.
    pub fn energy_sum(&self) -> f64 {
        self.s * self.s + self.r * self.r
    }

    /// Largest coordinate difference to another pair.
    pub fn max_abs_diff(&self, other: &SpeedPair) -> f64 {
        (self.s - other.s).abs().max((self.r - other.r).abs())
    }
}

/// Exploration speed as a function of the distance `x >= 0` from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "lowercase"))]
pub enum SpeedProfile {
    Constant(f64),
    /// `s(x) = 1 / (sqrt(2 + 2x) * (1/e + ln(1 + x)))`.
    Functional(f64),
    /// `min(s(x), 1)`.
    Capped(f64),
}

impl SpeedProfile {
    fn validate(&self) -> Result<()> {
        match *self {
            SpeedProfile::Constant(v) => positive("speed", v).map(|_| ()),
            SpeedProfile::Functional(e) | SpeedProfile::Capped(e) => positive("e", e).map(|_| ()),
        }
    }

    pub fn speed_at(&self, x: f64) -> f64 {
        match *self {
            SpeedProfile::Constant(v) => v,
            SpeedProfile::Functional(e) => functional_speed(e, x),
            SpeedProfile::Capped(e) => functional_speed(e, x).min(1.0),
        }
    }

    /// Largest speed the profile ever uses on `x >= 0`.
    pub fn peak_speed(&self) -> f64 {
        // Functional profiles are decreasing in x.
        self.speed_at(0.0)
    }
}

fn functional_speed(e: f64, x: f64) -> f64 {
    1.0 / (libm::sqrt(2.0 + 2.0 * x) * (1.0 / e + libm::log1p(x)))
}

/// Point where the functional profile drops to speed 1, or `None` when it
/// never exceeds 1 (`e <= sqrt(2)`). Found by bisection to `1e-12`.
pub fn capped_crossover(e: f64) -> Option<f64> {
    if functional_speed(e, 0.0) <= 1.0 {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while functional_speed(e, hi) > 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if functional_speed(e, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Energy of moving a distance `length` at constant `speed`: `length * speed^2`.
#[inline]
pub fn segment_energy(length: f64, speed: f64) -> f64 {
    length * speed * speed
}

#[derive(Clone, Copy)]
enum Integrand {
    Energy,
    Time,
}

impl Integrand {
    fn eval(self, speed: f64) -> f64 {
        match self {
            Integrand::Energy => speed * speed,
            Integrand::Time => 1.0 / speed,
        }
    }
}

/// `∫ f(s(x)) dx` over `[a, b]` for the functional profile, integrated in
/// `u = ln(1 + x)` so the integrand stays smooth across many decades of `x`.
fn functional_integral(e: f64, a: f64, b: f64, tol: f64, what: Integrand) -> Result<f64> {
    if a >= b {
        return Ok(0.0);
    }
    let integrand = |u: f64| {
        let x = libm::expm1(u);
        what.eval(functional_speed(e, x)) * libm::exp(u)
    };
    quadrature::integrate(integrand, libm::log1p(a), libm::log1p(b), tol).map(|q| q.value)
}

fn profile_integral(
    profile: SpeedProfile,
    a: f64,
    b: f64,
    tol: f64,
    what: Integrand,
) -> Result<f64> {
    profile.validate()?;
    positive("tol", tol)?;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::param("interval", "requires finite a <= b"));
    }
    match profile {
        SpeedProfile::Constant(v) => Ok((b - a) * what.eval(v)),
        SpeedProfile::Functional(_) | SpeedProfile::Capped(_) if a < 0.0 => Err(Error::param(
            "interval",
            "position-dependent profiles are defined for x >= 0",
        )),
        SpeedProfile::Functional(e) => functional_integral(e, a, b, tol, what),
        SpeedProfile::Capped(e) => match capped_crossover(e) {
            None => functional_integral(e, a, b, tol, what),
            Some(cross) => {
                // Unit speed on [0, cross): both integrands equal the length.
                let capped_len = (b.min(cross) - a).max(0.0);
                let rest = functional_integral(e, a.max(cross), b, tol, what)?;
                Ok(capped_len + rest)
            }
        },
    }
}

/// Energy `∫ s(x)^2 dx` to traverse `[a, b]`.
pub fn profile_energy(profile: SpeedProfile, a: f64, b: f64, tol: f64) -> Result<f64> {
    profile_integral(profile, a, b, tol, Integrand::Energy)
}

/// Time `∫ 1/s(x) dx` to traverse `[a, b]`.
pub fn profile_traversal_time(profile: SpeedProfile, a: f64, b: f64, tol: f64) -> Result<f64> {
    profile_integral(profile, a, b, tol, Integrand::Time)
}

/// Identifier of a bound an outcome can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "snake_case"))]
pub enum Constraint {
    SpeedBound,
    TimeBound,
    TotalEnergy,
    MakespanEnergy,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct EvacuationOutcome {
    pub evacuation_time: f64,
    pub finder_energy: f64,
    pub nonfinder_energy: f64,
    pub total_energy: f64,
    pub makespan_energy: f64,
    pub feasible: bool,
    pub violated_constraints: Vec<Constraint>,
}

/// Relative slack applied to every bound check to absorb rounding.
const BOUND_RTOL: f64 = 1e-12;

fn exceeds(value: f64, bound: f64, abs_slack: f64) -> bool {
    value > bound + bound.abs() * BOUND_RTOL + abs_slack
}

impl EvacuationOutcome {
    fn assemble(
        inst: &ProblemInstance,
        evacuation_time: f64,
        finder_energy: f64,
        nonfinder_energy: f64,
        peak_speed: f64,
        energy_slack: f64,
    ) -> Self {
        let total_energy = finder_energy + nonfinder_energy;
        let makespan_energy = finder_energy.max(nonfinder_energy);
        let d = inst.exit_distance;

        let mut violated = Vec::new();
        if peak_speed > inst.max_speed {
            violated.push(Constraint::SpeedBound);
        }
        if let Some(c) = inst.time_factor {
            if exceeds(evacuation_time, c * d, 0.0) {
                violated.push(Constraint::TimeBound);
            }
        }
        if let Some(limit) = inst.energy_limit() {
            match inst.kind {
                ProblemKind::Wec if exceeds(total_energy, limit, energy_slack) => {
                    violated.push(Constraint::TotalEnergy)
                }
                ProblemKind::We if exceeds(makespan_energy, limit, energy_slack) => {
                    violated.push(Constraint::MakespanEnergy)
                }
                _ => {}
            }
        }

        Self {
            evacuation_time,
            finder_energy,
            nonfinder_energy,
            total_energy,
            makespan_energy,
            feasible: violated.is_empty(),
            violated_constraints: violated,
        }
    }
}

/// Exact outcome of `SWS(s, r)` for the exit of `inst`.
///
/// The finder covers `d` at speed `s`; the non-finder covers `d` at `s` and then
/// `2d` at `r`. Speeds above the instance bound are not rejected: the outcome is
/// populated and flagged infeasible.
pub fn simulate_naive(pair: SpeedPair, inst: &ProblemInstance) -> EvacuationOutcome {
    let d = inst.exit_distance;
    let (s, r) = (pair.s, pair.r);
    let explore = segment_energy(d, s);
    let rescue = segment_energy(2.0 * d, r);
    EvacuationOutcome::assemble(
        inst,
        d * pair.time_per_distance(),
        explore,
        explore + rescue,
        s.max(r),
        0.0,
    )
}

/// Outcome of Simple Wireless Search with the functional exploration profile
/// (capped at speed 1 when `e > 1`) and the constant rescue speed that spends
/// exactly the energy left over from a budget `e`.
///
/// Exploration time and energy come from quadrature at tolerance `tol`.
pub fn simulate_functional(e: f64, inst: &ProblemInstance, tol: f64) -> Result<EvacuationOutcome> {
    positive("e", e)?;
    let d = inst.exit_distance;
    let profile = if e <= 1.0 {
        SpeedProfile::Functional(e)
    } else {
        SpeedProfile::Capped(e)
    };
    let explore_time = profile_traversal_time(profile, 0.0, d, tol)?;
    let explore_energy = profile_energy(profile, 0.0, d, tol)?;
    let r = closed_form::functional_rescue_speed(e, d)?;
    let rescue_energy = segment_energy(2.0 * d, r);

    let slack = 2.0 * tol * inst.energy_limit().unwrap_or(1.0).max(1.0);
    Ok(EvacuationOutcome::assemble(
        inst,
        explore_time + 2.0 * d / r,
        explore_energy,
        explore_energy + rescue_energy,
        profile.peak_speed().max(r),
        slack,
    ))
}

/// A stretch of motion at constant velocity.
///
/// `velocity` is signed; zero means the robot waits in place.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct TrajectorySegment {
    pub start_time: f64,
    pub duration: f64,
    pub start_pos: f64,
    pub velocity: f64,
}

impl TrajectorySegment {
    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }

    pub fn end_pos(&self) -> f64 {
        self.start_pos + self.velocity * self.duration
    }

    pub fn speed(&self) -> f64 {
        self.velocity.abs()
    }

    /// Position at time `t`, clamped to the segment's time span.
    pub fn position_at(&self, t: f64) -> f64 {
        let dt = (t - self.start_time).clamp(0.0, self.duration);
        self.start_pos + self.velocity * dt
    }

    /// Earliest time within the segment at which position `x` is occupied.
    pub fn first_time_at(&self, x: f64) -> Option<f64> {
        if self.start_pos == x {
            return Some(self.start_time);
        }
        if self.velocity == 0.0 {
            return None;
        }
        let dt = (x - self.start_pos) / self.velocity;
        (dt >= 0.0 && dt <= self.duration).then_some(self.start_time + dt)
    }

    pub fn energy(&self) -> f64 {
        segment_energy(self.velocity.abs() * self.duration, self.velocity)
    }
}

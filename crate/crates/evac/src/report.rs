//! JSON documents emitted by `optimize` and `simulate`. Field names are listed
//! in `schema/output.schema.json`.

use evac_core::closed_form::{
    ec_optimal_speeds, ec_ratio_f, we_optimal_speeds, we_time_factor_g, wec_optimal_speeds,
    wec_time_factor_g, OptimalSpeeds, Regime,
};
use evac_core::numopt::{
    kkt_certificate_ec, kkt_certificate_we, kkt_certificate_wec, solve_nlp, KktCertificate, NlpSpec,
};
use evac_core::{EvacuationOutcome, ProblemInstance, SpeedPair};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Largest accepted coordinate gap between closed-form and numerical speeds.
pub const AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Ec,
    Wec,
    We,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Ec { b: f64, c: f64 },
    Energy { e: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormSummary {
    pub s: f64,
    pub r: f64,
    pub regime: Regime,
    /// Competitive ratio `f(cb)` for EC, time factor `g(e)` otherwise.
    pub factor: f64,
    /// `1/s + 2/r`.
    pub time_per_distance: f64,
    /// `2(s^2 + r^2)`.
    pub total_energy_per_distance: f64,
    /// `s^2 + 2r^2`.
    pub makespan_energy_per_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericalSummary {
    pub s: f64,
    pub r: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeReport {
    pub problem: Problem,
    pub params: Params,
    pub closed_form: ClosedFormSummary,
    pub numerical: NumericalSummary,
    /// Largest coordinate difference between the two solutions.
    pub agreement: f64,
    pub kkt: KktCertificate,
}

impl OptimizeReport {
    pub fn passed(&self) -> bool {
        self.agreement <= AGREEMENT_TOL && self.kkt.verdict
    }
}

fn summary(opt: &OptimalSpeeds, factor: f64) -> ClosedFormSummary {
    let (s, r) = (opt.pair.s(), opt.pair.r());
    ClosedFormSummary {
        s,
        r,
        regime: opt.regime,
        factor,
        time_per_distance: opt.pair.time_per_distance(),
        total_energy_per_distance: 2.0 * opt.pair.energy_sum(),
        makespan_energy_per_distance: s * s + 2.0 * r * r,
    }
}

/// Solves `problem` both in closed form and numerically and certifies the
/// closed-form point.
pub fn optimize(problem: Problem, params: Params) -> Result<OptimizeReport> {
    let (spec, opt, factor, kkt) = match (problem, params) {
        (Problem::Ec, Params::Ec { b, c }) => (
            NlpSpec::MinEnergyEc { b, c },
            ec_optimal_speeds(b, c)?,
            ec_ratio_f(b * c)?,
            kkt_certificate_ec(b, c)?,
        ),
        (Problem::Wec, Params::Energy { e }) => (
            NlpSpec::MinTimeWec { e },
            wec_optimal_speeds(e)?,
            wec_time_factor_g(e)?,
            kkt_certificate_wec(e)?,
        ),
        (Problem::We, Params::Energy { e }) => (
            NlpSpec::MinTimeWe { e },
            we_optimal_speeds(e)?,
            we_time_factor_g(e)?,
            kkt_certificate_we(e)?,
        ),
        _ => {
            return Err(CliError::Invalid(
                "ec takes --b and --c; wec and we take --e".into(),
            ))
        }
    };
    finish(problem, params, spec, opt, factor, kkt)
}

fn finish(
    problem: Problem,
    params: Params,
    spec: NlpSpec,
    opt: OptimalSpeeds,
    factor: f64,
    kkt: KktCertificate,
) -> Result<OptimizeReport> {
    let num = solve_nlp(&spec)?;
    Ok(OptimizeReport {
        problem,
        params,
        closed_form: summary(&opt, factor),
        numerical: NumericalSummary {
            s: num.s(),
            r: num.r(),
            objective: spec.objective(num.s(), num.r()),
        },
        agreement: num.max_abs_diff(&opt.pair),
        kkt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Naive,
    Functional,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub algorithm: Algorithm,
    pub instance: ProblemInstance,
    /// Present for `naive`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub speeds: Option<SpeedPair>,
    /// Budget coefficient, present for `functional`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
    /// Quadrature tolerance, present for `functional`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub outcome: EvacuationOutcome,
}

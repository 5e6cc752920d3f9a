use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::nlp::{ConstraintId, NlpSpec, ACTIVE_TOL};
use crate::closed_form::{ec_optimal_speeds, we_optimal_speeds, wec_optimal_speeds, Regime};
use crate::error::Result;
use crate::model::SpeedPair;

#[cfg(feature = "serde")]
use serde::Serialize;

/// Multipliers below this are treated as negative.
pub const MULTIPLIER_FLOOR: f64 = -1e-10;

/// Largest accepted norm of `∇f + Σ λ_i ∇g_i`.
pub const STATIONARITY_TOL: f64 = 1e-8;

/// First-order optimality certificate for a candidate optimizer.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct KktCertificate {
    pub point: SpeedPair,
    /// Constraints whose slack is at most [`ACTIVE_TOL`] at `point`.
    pub active_set: Vec<ConstraintId>,
    pub multipliers: BTreeMap<ConstraintId, f64>,
    pub stationarity_residual: f64,
    pub verdict: bool,
}

impl KktCertificate {
    /// Checks `multipliers` at `point` for `spec`.
    ///
    /// The verdict requires primal feasibility, multipliers only on tight
    /// constraints, every multiplier `>= MULTIPLIER_FLOOR`, and a stationarity
    /// residual `<= STATIONARITY_TOL`.
    pub fn evaluate(spec: &NlpSpec, point: SpeedPair, multipliers: &[(ConstraintId, f64)]) -> Self {
        let (s, r) = (point.s(), point.r());
        let active_set = spec.active_constraints(&point, ACTIVE_TOL);

        let mut balance = spec.objective_gradient(s, r);
        for &(id, lambda) in multipliers {
            let g = spec.constraint_gradient(id, s, r);
            balance[0] += lambda * g[0];
            balance[1] += lambda * g[1];
        }
        let stationarity_residual = libm::hypot(balance[0], balance[1]);

        let primal = spec
            .constraints()
            .iter()
            .all(|&id| spec.constraint_value(id, s, r) <= ACTIVE_TOL);
        let slackness = multipliers.iter().all(|(id, _)| active_set.contains(id));
        let dual = multipliers.iter().all(|&(_, l)| l >= MULTIPLIER_FLOOR);

        Self {
            point,
            active_set,
            multipliers: multipliers.iter().copied().collect(),
            stationarity_residual,
            verdict: primal && slackness && dual && stationarity_residual <= STATIONARITY_TOL,
        }
    }

    pub fn multiplier(&self, id: ConstraintId) -> Option<f64> {
        self.multipliers.get(&id).copied()
    }
}

/// Multipliers `(λ_time, λ_r)` of the tight-speed-bound EC candidate
/// `s = b/(bc−2), r = b`, evaluated for any `bc > 2`.
///
/// `λ_r = b(10 − 12x + 6x² − x³)/(x−2)³` with `x = bc` changes sign exactly at `x = δ`.
pub fn ec_speed_bound_multipliers(b: f64, c: f64) -> (f64, f64) {
    let y = b * c - 2.0;
    let y3 = y * y * y;
    let lambda_time = 2.0 * b * b * b / y3;
    let (b2, c2) = (b * b, c * c);
    let poly = b2 * b2 * c2 * c - 6.0 * b2 * b * c2 + 12.0 * b2 * c - 10.0 * b;
    (lambda_time, -2.0 * poly / y3)
}

/// Certificate for the closed-form EC optimizer.
pub fn kkt_certificate_ec(b: f64, c: f64) -> Result<KktCertificate> {
    let opt = ec_optimal_speeds(b, c)?;
    let spec = NlpSpec::MinEnergyEc { b, c };
    let multipliers: Vec<(ConstraintId, f64)> = match opt.regime {
        Regime::EcTightSpeedBound => {
            let (l1, l2) = ec_speed_bound_multipliers(b, c);
            alloc::vec![(ConstraintId::TimeBound, l1), (ConstraintId::SpeedR, l2)]
        }
        _ => {
            let s = opt.pair.s();
            alloc::vec![(ConstraintId::TimeBound, 2.0 * s * s * s)]
        }
    };
    Ok(KktCertificate::evaluate(&spec, opt.pair, &multipliers))
}

/// Certificate for the closed-form WEC optimizer.
///
/// At exactly `e = 4` all three constraints are tight and the multipliers
/// `(1/4, 0, 1)` on (energy, `s<=1`, `r<=1`) are reported; above 4 the energy
/// constraint is slack and only the speed caps carry multipliers `(1, 2)`.
pub fn kkt_certificate_wec(e: f64) -> Result<KktCertificate> {
    let opt = wec_optimal_speeds(e)?;
    let spec = NlpSpec::MinTimeWec { e };
    let s = opt.pair.s();
    let s3 = s * s * s;
    let multipliers: Vec<(ConstraintId, f64)> = match opt.regime {
        Regime::WecLowEnergy => alloc::vec![(ConstraintId::TotalEnergy, 1.0 / (4.0 * s3))],
        Regime::WecMidEnergy => alloc::vec![
            (ConstraintId::TotalEnergy, 1.0 / (4.0 * s3)),
            (ConstraintId::SpeedR, 2.0 - 1.0 / s3),
        ],
        _ if e == 4.0 => alloc::vec![
            (ConstraintId::TotalEnergy, 0.25),
            (ConstraintId::SpeedS, 0.0),
            (ConstraintId::SpeedR, 1.0),
        ],
        _ => alloc::vec![(ConstraintId::SpeedS, 1.0), (ConstraintId::SpeedR, 2.0)],
    };
    Ok(KktCertificate::evaluate(&spec, opt.pair, &multipliers))
}

/// Certificate for the closed-form WE optimizer.
pub fn kkt_certificate_we(e: f64) -> Result<KktCertificate> {
    let opt = we_optimal_speeds(e)?;
    let spec = NlpSpec::MinTimeWe { e };
    let s = opt.pair.s();
    let multipliers: Vec<(ConstraintId, f64)> = match opt.regime {
        Regime::WeLowEnergy => alloc::vec![(ConstraintId::MakespanEnergy, 1.0 / (2.0 * s * s * s))],
        _ => alloc::vec![(ConstraintId::SpeedS, 1.0), (ConstraintId::SpeedR, 2.0)],
    };
    Ok(KktCertificate::evaluate(&spec, opt.pair, &multipliers))
}

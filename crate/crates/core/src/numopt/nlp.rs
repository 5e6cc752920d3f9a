use crate::error::{positive, Error, Result};
use crate::model::SpeedPair;

#[cfg(feature = "serde")]
use serde::Serialize;

/// Grid points per axis in the coarse search (spacing `box/GRID_RESOLUTION`).
pub const GRID_RESOLUTION: usize = 1000;

/// Slack below which a constraint counts as tight.
pub const ACTIVE_TOL: f64 = 1e-8;

const MAX_BRACKET_EXPANSIONS: usize = 12;
const FEASIBILITY_RTOL: f64 = 1e-12;

/// Constraint of one of the programs, in `g(s, r) <= 0` form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "snake_case"))]
pub enum ConstraintId {
    /// `1/s + 2/r <= c`
    TimeBound,
    /// `2(s^2 + r^2) <= e`
    TotalEnergy,
    /// `s^2 + 2r^2 <= e`
    MakespanEnergy,
    /// `s <= b`
    SpeedS,
    /// `r <= b`
    SpeedR,
}

/// The three convex programs over `(s, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize), serde(rename_all = "snake_case"))]
pub enum NlpSpec {
    /// min `s^2 + r^2` s.t. `1/s + 2/r <= c`, `s, r <= b`.
    MinEnergyEc { b: f64, c: f64 },
    /// min `1/s + 2/r` s.t. `2(s^2 + r^2) <= e`, `s, r <= 1`.
    MinTimeWec { e: f64 },
    /// min `1/s + 2/r` s.t. `s^2 + 2r^2 <= e`, `s, r <= 1`.
    MinTimeWe { e: f64 },
}

impl NlpSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NlpSpec::MinEnergyEc { b, c } => {
                positive("b", b)?;
                positive("c", c)?;
                if b * c < 3.0 {
                    return Err(Error::Infeasible("bc < 3"));
                }
            }
            NlpSpec::MinTimeWec { e } | NlpSpec::MinTimeWe { e } => {
                positive("e", e)?;
            }
        }
        Ok(())
    }

    /// Upper bound on both speeds.
    pub fn speed_cap(&self) -> f64 {
        match *self {
            NlpSpec::MinEnergyEc { b, .. } => b,
            _ => 1.0,
        }
    }

    pub fn constraints(&self) -> [ConstraintId; 3] {
        let budget = match self {
            NlpSpec::MinEnergyEc { .. } => ConstraintId::TimeBound,
            NlpSpec::MinTimeWec { .. } => ConstraintId::TotalEnergy,
            NlpSpec::MinTimeWe { .. } => ConstraintId::MakespanEnergy,
        };
        [budget, ConstraintId::SpeedS, ConstraintId::SpeedR]
    }

    pub fn objective(&self, s: f64, r: f64) -> f64 {
        match self {
            NlpSpec::MinEnergyEc { .. } => s * s + r * r,
            _ => 1.0 / s + 2.0 / r,
        }
    }

    pub fn objective_gradient(&self, s: f64, r: f64) -> [f64; 2] {
        match self {
            NlpSpec::MinEnergyEc { .. } => [2.0 * s, 2.0 * r],
            _ => [-1.0 / (s * s), -2.0 / (r * r)],
        }
    }

    /// `g(s, r)`; feasible iff `<= 0`. Constraints that do not belong to this
    /// program evaluate to `-inf`.
    pub fn constraint_value(&self, id: ConstraintId, s: f64, r: f64) -> f64 {
        let cap = self.speed_cap();
        match (id, *self) {
            (ConstraintId::TimeBound, NlpSpec::MinEnergyEc { c, .. }) => 1.0 / s + 2.0 / r - c,
            (ConstraintId::TotalEnergy, NlpSpec::MinTimeWec { e }) => 2.0 * (s * s + r * r) - e,
            (ConstraintId::MakespanEnergy, NlpSpec::MinTimeWe { e }) => s * s + 2.0 * r * r - e,
            (ConstraintId::SpeedS, _) => s - cap,
            (ConstraintId::SpeedR, _) => r - cap,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn constraint_gradient(&self, id: ConstraintId, s: f64, r: f64) -> [f64; 2] {
        match id {
            ConstraintId::TimeBound => [-1.0 / (s * s), -2.0 / (r * r)],
            ConstraintId::TotalEnergy => [4.0 * s, 4.0 * r],
            ConstraintId::MakespanEnergy => [2.0 * s, 4.0 * r],
            ConstraintId::SpeedS => [1.0, 0.0],
            ConstraintId::SpeedR => [0.0, 1.0],
        }
    }

    /// Feasibility with a small relative allowance for rounding.
    pub fn is_feasible(&self, s: f64, r: f64) -> bool {
        if !(s > 0.0 && r > 0.0) {
            return false;
        }
        self.constraints().iter().all(|&id| {
            let scale = match (id, *self) {
                (ConstraintId::TimeBound, NlpSpec::MinEnergyEc { c, .. }) => c,
                (ConstraintId::TotalEnergy | ConstraintId::MakespanEnergy, _) => match *self {
                    NlpSpec::MinTimeWec { e } | NlpSpec::MinTimeWe { e } => e,
                    _ => 1.0,
                },
                _ => self.speed_cap(),
            };
            self.constraint_value(id, s, r) <= scale * FEASIBILITY_RTOL
        })
    }

    /// Constraints with slack at most `tol` at `pair`.
    pub fn active_constraints(&self, pair: &SpeedPair, tol: f64) -> alloc::vec::Vec<ConstraintId> {
        self.constraints()
            .into_iter()
            .filter(|&id| self.constraint_value(id, pair.s(), pair.r()).abs() <= tol)
            .collect()
    }

    /// Best `r` for a fixed `s`: the objective is monotone in `r` and the
    /// coupling constraint is monotone too, so the optimum over `r` is the
    /// boundary value (or the speed cap).
    fn best_r(&self, s: f64) -> Option<f64> {
        let cap = self.speed_cap();
        let r = match *self {
            NlpSpec::MinEnergyEc { c, .. } => {
                let room = c - 1.0 / s;
                if room <= 0.0 {
                    return None;
                }
                2.0 / room
            }
            NlpSpec::MinTimeWec { e } => {
                let left = 0.5 * e - s * s;
                if left <= 0.0 {
                    return None;
                }
                libm::sqrt(left).min(cap)
            }
            NlpSpec::MinTimeWe { e } => {
                let left = 0.5 * (e - s * s);
                if left <= 0.0 {
                    return None;
                }
                libm::sqrt(left).min(cap)
            }
        };
        if let NlpSpec::MinEnergyEc { .. } = self {
            // Past the cap the time bound cannot be met with this s.
            if r > cap * (1.0 + FEASIBILITY_RTOL) {
                return None;
            }
            return Some(r.min(cap));
        }
        Some(r)
    }

    /// Range of `s` for which some feasible `r` exists.
    fn s_domain(&self) -> (f64, f64) {
        let cap = self.speed_cap();
        match *self {
            NlpSpec::MinEnergyEc { b, c } => ((b / (b * c - 2.0)).min(cap), cap),
            NlpSpec::MinTimeWec { e } => (cap * 1e-12, libm::sqrt(0.5 * e).min(cap)),
            NlpSpec::MinTimeWe { e } => (cap * 1e-12, libm::sqrt(e).min(cap)),
        }
    }

    /// Objective after exact minimization over `r`; `+inf` where no `r` works.
    fn reduced(&self, s: f64) -> f64 {
        match self.best_r(s) {
            Some(r) if r > 0.0 => self.objective(s, r),
            _ => f64::INFINITY,
        }
    }
}

fn grid_search(spec: &NlpSpec) -> Option<(f64, f64)> {
    let cap = spec.speed_cap();
    let h = cap / GRID_RESOLUTION as f64;
    let mut best: Option<(f64, f64, f64)> = None;
    for i in 1..=GRID_RESOLUTION {
        let s = h * i as f64;
        for j in 1..=GRID_RESOLUTION {
            let r = h * j as f64;
            if !spec.is_feasible(s, r) {
                continue;
            }
            let v = spec.objective(s, r);
            if best.is_none_or(|(_, _, bv)| v < bv) {
                best = Some((s, r, v));
            }
        }
    }
    best.map(|(s, r, _)| (s, r))
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, width: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if b - a <= width {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    [a, x1, x2, b]
        .into_iter()
        .map(|x| (x, f(x)))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .map(|p| p.0)
        .unwrap_or(0.5 * (a + b))
}

/// Minimizes one of the programs numerically.
///
/// A `GRID_RESOLUTION`² grid over `(0, cap]²` locates the basin; the result is
/// then refined in `s` by golden section on the objective minimized exactly over
/// `r`. Convexity makes the local optimum global.
pub fn solve_nlp(spec: &NlpSpec) -> Result<SpeedPair> {
    spec.validate()?;
    let cap = spec.speed_cap();
    let h = cap / GRID_RESOLUTION as f64;
    let (dom_lo, dom_hi) = spec.s_domain();

    let (s_grid, _) = match grid_search(spec) {
        Some(p) => p,
        // The region is nonempty but thinner than a grid cell.
        None => (dom_hi, dom_hi),
    };

    let edge_tol = 1e-9 * cap;
    let mut half_width = 2.0 * h;
    for _ in 0..MAX_BRACKET_EXPANSIONS {
        let lo = (s_grid - half_width).max(dom_lo);
        let hi = (s_grid + half_width).min(dom_hi);
        let mut s = golden_section(|x| spec.reduced(x), lo, hi, 1e-13 * cap);

        let at_inner_lo = lo > dom_lo && s - lo < edge_tol;
        let at_inner_hi = hi < dom_hi && hi - s < edge_tol;
        if at_inner_lo || at_inner_hi {
            half_width *= 4.0;
            continue;
        }
        if dom_hi - s < edge_tol && spec.reduced(dom_hi) <= spec.reduced(s) {
            s = dom_hi;
        } else if s - dom_lo < edge_tol && spec.reduced(dom_lo) <= spec.reduced(s) {
            s = dom_lo;
        }
        let r = spec.best_r(s).ok_or(Error::NonConvergence {
            what: "nlp refinement (left feasible region)",
            iterations: 0,
        })?;
        if !spec.reduced(s).is_finite() {
            break;
        }
        return SpeedPair::new(s, r);
    }
    Err(Error::NonConvergence {
        what: "nlp refinement",
        iterations: MAX_BRACKET_EXPANSIONS,
    })
}

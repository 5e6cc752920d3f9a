//! Parameter sweeps rendered as CSV.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use evac_core::closed_form::{
    ec_optimal_speeds, ec_ratio_f, we_optimal_speeds, we_time_factor_g, wec_optimal_speeds,
    wec_time_factor_g,
};
use evac_core::{simulate_functional, EnergyBudget, ProblemInstance};

use crate::error::{CliError, Result};
use crate::numfmt::sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Product `cb` for EC, evaluated at `b = 1`.
    Cb,
    /// Energy coefficient `e` for WEC or WE.
    E,
    /// Exit distance for the functional-speed algorithm.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Linear,
    Geometric,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lin" | "linear" => Ok(Scale::Linear),
            "geo" | "geometric" => Ok(Scale::Geometric),
            _ => Err(format!("unknown scale {s:?} (expected lin or geo)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyProblem {
    #[default]
    Wec,
    We,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub scale: Scale,
    /// `None` writes to standard output.
    pub out: Option<PathBuf>,
    /// Program for `e` sweeps.
    pub problem: EnergyProblem,
    /// Budget for `d` sweeps.
    pub e: f64,
    pub tol: f64,
}

/// Parses `lo:hi`.
pub fn parse_range(raw: &str) -> Result<(f64, f64)> {
    let bad = || CliError::Parse(format!("range must be lo:hi, got {raw:?}"));
    let (lo, hi) = raw.split_once(':').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(CliError::Invalid(format!(
                "range needs lo < hi, got {}:{}",
                self.lo, self.hi
            )));
        }
        if self.points < 2 {
            return Err(CliError::Invalid("points must be at least 2".into()));
        }
        if self.scale == Scale::Geometric && self.lo <= 0.0 {
            return Err(CliError::Invalid("geometric range must be positive".into()));
        }
        match self.param {
            SweepParam::Cb if self.lo < 3.0 => Err(CliError::Infeasible("bc < 3".into())),
            SweepParam::E if self.lo <= 0.0 => Err(CliError::Invalid("e must be positive".into())),
            SweepParam::D if self.lo <= 1.0 => Err(CliError::Invalid(
                "d sweep needs d > 1 for the d^1.5 ln d column".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Sample points in ascending order; both endpoints are exact.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.hi;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.lo + t * (self.hi - self.lo),
                    Scale::Geometric => self.lo * (self.hi / self.lo).powf(t),
                }
            })
            .collect()
    }

    pub fn header(&self) -> &'static str {
        match self.param {
            SweepParam::Cb => "cb,s,r,ratio_f",
            SweepParam::E => "e,s,r,g",
            SweepParam::D => "d,time,energy,time_over_d32logd",
        }
    }

    fn row(&self, x: f64) -> Result<[f64; 4]> {
        Ok(match self.param {
            SweepParam::Cb => {
                let p = ec_optimal_speeds(1.0, x)?.pair;
                [x, p.s(), p.r(), ec_ratio_f(x)?]
            }
            SweepParam::E => {
                let (p, g) = match self.problem {
                    EnergyProblem::Wec => (wec_optimal_speeds(x)?.pair, wec_time_factor_g(x)?),
                    EnergyProblem::We => (we_optimal_speeds(x)?.pair, we_time_factor_g(x)?),
                };
                [x, p.s(), p.r(), g]
            }
            SweepParam::D => {
                let inst = ProblemInstance::wec(EnergyBudget::Constant(self.e), x)?;
                let out = simulate_functional(self.e, &inst, self.tol)?;
                let norm = out.evacuation_time / (x.powf(1.5) * x.ln());
                [x, out.evacuation_time, out.total_energy, norm]
            }
        })
    }

    /// Full CSV document, LF line endings, header first.
    pub fn render(&self) -> Result<String> {
        self.validate()?;
        let mut csv = String::new();
        csv.push_str(self.header());
        csv.push('\n');
        for x in self.values() {
            let cols = self.row(x)?.map(sig12);
            writeln!(csv, "{}", cols.join(",")).expect("writing to a String");
        }
        Ok(csv)
    }
}

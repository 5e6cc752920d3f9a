//! Self-check suites run by `evac verify`.

use std::fmt;

use evac_core::adversary::{
    adversarial_exit, empirical_growth_exponent, infeasibility_witness, Strategy,
};
use evac_core::closed_form::{
    ec_optimal_speeds, ec_ratio_f, functional_exploration_energy, functional_finder_time,
    functional_leftover_energy, we_optimal_speeds, we_time_factor_g, wec_optimal_speeds,
    wec_time_factor_g,
};
use evac_core::consts::{delta, delta_cubic, ec_ratio_plateau};
use evac_core::numopt::{
    ec_speed_bound_multipliers, kkt_certificate_ec, kkt_certificate_we, kkt_certificate_wec,
    solve_nlp, ConstraintId, NlpSpec,
};
use evac_core::{
    profile_energy, profile_traversal_time, simulate_functional, EnergyBudget, ProblemInstance,
    SpeedProfile,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::report::AGREEMENT_TOL;
use crate::sampling::{ec_draws, energy_draws, random_strategy};

pub const SUITES: [&str; 8] = [
    "delta",
    "continuity",
    "oracle",
    "kkt",
    "quadrature",
    "functional",
    "growth",
    "adversary",
];

/// Printed by every `verify` run.
pub const WE_FACTOR_NOTE: &str = "note: WE time factor g(e) = 3 for e >= 3 (s = r = 1 gives \
1/s + 2/r = 3, and 3*sqrt(3/e) -> 3 as e -> 3); a published table lists 1 for this range, \
which is treated as a misprint";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Draws per program for the oracle and kkt suites.
    pub grid: usize,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: 200,
            tol: evac_core::DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn outcome(name: &'static str, passed: bool, detail: String) -> SuiteOutcome {
    SuiteOutcome {
        name,
        passed,
        detail,
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteOutcome> {
    match name {
        "delta" => delta_suite(),
        "continuity" => continuity_suite(),
        "oracle" => oracle_suite(opts.grid),
        "kkt" => kkt_suite(opts.grid),
        "quadrature" => quadrature_suite(opts.tol),
        "functional" => functional_suite(opts.tol),
        "growth" => growth_suite(opts.tol),
        "adversary" => adversary_suite(),
        _ => Err(CliError::Invalid(format!(
            "unknown suite {name:?} (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

fn delta_suite() -> Result<SuiteOutcome> {
    let d = delta();
    let residual = delta_cubic(d).abs();
    let plateau_gap = (ec_ratio_plateau() - 0.5 * d * d * d).abs();
    Ok(outcome(
        "delta",
        residual <= 1e-9 && plateau_gap <= 1e-12,
        format!(
            "delta = {d:.15}, |10 - 12d + 6d^2 - d^3| = {residual:.1e}, plateau {:.10}",
            ec_ratio_plateau()
        ),
    ))
}

fn continuity_suite() -> Result<SuiteOutcome> {
    const H: f64 = 1e-12;
    let d = delta();
    let gaps = [
        (
            "f at delta",
            (ec_ratio_f(d - H)? - ec_ratio_f(d + H)?).abs(),
        ),
        (
            "wec g at delta",
            (wec_time_factor_g(d - H)? - wec_time_factor_g(d)?).abs(),
        ),
        (
            "wec g at 4",
            (wec_time_factor_g(4.0 - H)? - wec_time_factor_g(4.0)?).abs(),
        ),
        (
            "we g at 3",
            (we_time_factor_g(3.0 - H)? - we_time_factor_g(3.0)?).abs(),
        ),
        (
            "ec speeds at delta",
            ec_optimal_speeds(1.0, d - H)?
                .pair
                .max_abs_diff(&ec_optimal_speeds(1.0, d + H)?.pair),
        ),
        (
            "wec speeds at delta",
            wec_optimal_speeds(d - H)?
                .pair
                .max_abs_diff(&wec_optimal_speeds(d)?.pair),
        ),
        (
            "wec speeds at 4",
            wec_optimal_speeds(4.0 - H)?
                .pair
                .max_abs_diff(&wec_optimal_speeds(4.0)?.pair),
        ),
        (
            "we speeds at 3",
            we_optimal_speeds(3.0 - H)?
                .pair
                .max_abs_diff(&we_optimal_speeds(3.0)?.pair),
        ),
    ];
    let (worst_name, worst) =
        gaps.iter()
            .copied()
            .fold(("", 0.0_f64), |acc, g| if g.1 > acc.1 { g } else { acc });
    Ok(outcome(
        "continuity",
        worst <= 1e-9,
        format!(
            "{} boundary checks, largest jump {worst:.1e} ({worst_name})",
            gaps.len()
        ),
    ))
}

fn oracle_suite(grid: usize) -> Result<SuiteOutcome> {
    let mut worst = [0.0_f64; 3];
    for (b, c) in ec_draws(grid) {
        let cf = ec_optimal_speeds(b, c)?.pair;
        worst[0] = worst[0].max(solve_nlp(&NlpSpec::MinEnergyEc { b, c })?.max_abs_diff(&cf));
    }
    for e in energy_draws(grid) {
        let cf = wec_optimal_speeds(e)?.pair;
        worst[1] = worst[1].max(solve_nlp(&NlpSpec::MinTimeWec { e })?.max_abs_diff(&cf));
        let cf = we_optimal_speeds(e)?.pair;
        worst[2] = worst[2].max(solve_nlp(&NlpSpec::MinTimeWe { e })?.max_abs_diff(&cf));
    }
    Ok(outcome(
        "oracle",
        worst.iter().all(|&w| w <= AGREEMENT_TOL),
        format!(
            "{grid} draws per program, max coordinate gap ec {:.1e} wec {:.1e} we {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    ))
}

fn kkt_suite(grid: usize) -> Result<SuiteOutcome> {
    let mut failures = Vec::new();
    let mut worst_residual = 0.0_f64;
    let mut check = |label: String, cert: evac_core::numopt::KktCertificate| {
        worst_residual = worst_residual.max(cert.stationarity_residual);
        if !cert.verdict {
            failures.push(label);
        }
    };
    for (b, c) in ec_draws(grid) {
        check(format!("ec b={b} c={c}"), kkt_certificate_ec(b, c)?);
    }
    for e in energy_draws(grid) {
        check(format!("wec e={e}"), kkt_certificate_wec(e)?);
        check(format!("we e={e}"), kkt_certificate_we(e)?);
    }
    let d = delta();
    let flip = ec_speed_bound_multipliers(1.0, d - 1e-6).1 > 0.0
        && ec_speed_bound_multipliers(1.0, d + 1e-6).1 < 0.0
        && ec_speed_bound_multipliers(1.0, d).1.abs() <= 1e-10;
    let wec_zero = kkt_certificate_wec(d)?
        .multiplier(ConstraintId::SpeedR)
        .is_some_and(|l| l.abs() <= 1e-10);
    let passed = failures.is_empty() && flip && wec_zero;
    let mut detail = format!(
        "{} certificates, max residual {worst_residual:.1e}, ec r-bound multiplier flips at delta: {flip}, wec r-bound multiplier zero at delta: {wec_zero}",
        3 * grid
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!(", {} invalid (first: {first})", failures.len()));
    }
    Ok(outcome("kkt", passed, detail))
}

fn quadrature_suite(tol: f64) -> Result<SuiteOutcome> {
    let mut worst = 0.0_f64;
    for e in [0.1, 0.5, 1.0] {
        for d in [1.0, 10.0, 1e3, 1e6] {
            let p = SpeedProfile::Functional(e);
            let en = profile_energy(p, 0.0, d, tol)?;
            let exact = functional_exploration_energy(e, d)?;
            worst = worst.max((en - exact).abs() / exact);
            let t = profile_traversal_time(p, 0.0, d, tol)?;
            let exact = functional_finder_time(e, d)?;
            worst = worst.max((t - exact).abs() / exact);
        }
    }
    Ok(outcome(
        "quadrature",
        worst <= 1e-8,
        format!("12 (e, d) pairs, max relative gap {worst:.1e}"),
    ))
}

fn functional_suite(tol: f64) -> Result<SuiteOutcome> {
    let mut worst_over = f64::NEG_INFINITY;
    let mut worst_share = 0.0_f64;
    for e in [0.2, 1.0] {
        for d in [10.0, 1e3, 1e6] {
            let inst = ProblemInstance::wec(EnergyBudget::Constant(e), d)?;
            let out = simulate_functional(e, &inst, tol)?;
            worst_over = worst_over.max(out.total_energy - e);
            let rescue = out.nonfinder_energy - out.finder_energy;
            worst_share = worst_share.max((rescue - functional_leftover_energy(e, d)?).abs());
        }
    }
    Ok(outcome(
        "functional",
        worst_over <= 1e-8 && worst_share <= 1e-8,
        format!("max total - e = {worst_over:.1e}, max rescue-leg error {worst_share:.1e}"),
    ))
}

fn growth_suite(tol: f64) -> Result<SuiteOutcome> {
    let rows = empirical_growth_exponent(1.0, &[1e2, 1e4, 1e6, 1e8], tol)?;
    let floor = rows.iter().all(|r| r.time >= r.lower_floor);
    let upper = rows
        .iter()
        .filter(|r| r.d >= 1e4)
        .all(|r| r.time <= 2.0 * r.d.powf(1.5) * r.d.ln());
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| {
        (lo.min(r.normalized), hi.max(r.normalized))
    });
    Ok(outcome(
        "growth",
        floor && upper && hi / lo <= 10.0,
        format!(
            "e = 1, d in 1e2..1e8: floor {floor}, upper bound (d >= 1e4) {upper}, time/(d^1.5 ln d) in [{lo:.4}, {hi:.4}]"
        ),
    ))
}

fn adversary_suite() -> Result<SuiteOutcome> {
    let mut worst = 0.0_f64;
    for b in [0.5, 1.0, 2.0] {
        let st = Strategy::simple_wireless(b, b, 1e4 / b)?;
        for k in 0..20 {
            let d = 10f64.powf(k as f64 * 3.0 / 19.0);
            let rep = adversarial_exit(&st, d)?;
            worst = worst.max((rep.ratio - 3.0 / b).abs());
        }
    }
    let mut found = 0;
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_strategy(&mut rng, 1.0, 1000.0);
        if infeasibility_witness(1.0, 2.9, &st).is_ok() {
            found += 1;
        }
    }
    Ok(outcome(
        "adversary",
        worst <= 1e-9 && found == 10,
        format!(
            "naive(b, b) forced ratio 3/b for b in {{0.5, 1, 2}}: max error {worst:.1e}; witnesses for b = 1, c = 2.9: {found}/10"
        ),
    ))
}

//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Reference values are computed here from the defining formulas rather than
//! through the library where that is possible.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use evac::sampling::{ec_draws, energy_draws, random_strategy};
use evac::verify::WE_FACTOR_NOTE;
use evac_core::adversary::{
    adversarial_exit, empirical_growth_exponent, infeasibility_witness, Strategy,
};
use evac_core::closed_form::{
    ec_optimal_speeds, ec_ratio_f, we_optimal_speeds, we_time_factor_g, wec_optimal_speeds,
    wec_time_factor_g,
};
use evac_core::numopt::{
    ec_speed_bound_multipliers, kkt_certificate_ec, kkt_certificate_we, kkt_certificate_wec,
    solve_nlp, ConstraintId, NlpSpec,
};
use evac_core::{
    profile_energy, profile_traversal_time, simulate_functional, EnergyBudget, ProblemInstance,
    SpeedProfile, DEFAULT_TOL,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn delta() -> f64 {
    2.0 + 2f64.cbrt()
}

fn evac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evac"))
        .args(args)
        .env_remove("EVAC_TOL")
        .output()
        .expect("run evac binary")
}

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Verdict {
    Verdict { ok, detail }
}

fn exit_case() -> Verdict {
    let out = evac(&["optimize", "ec", "--b", "1", "--c", "3"]);
    let json: Value = serde_json::from_slice(&out.stdout).expect("optimize prints JSON");
    let cf = &json["closed_form"];
    let get = |k: &str| cf[k].as_f64().unwrap_or(f64::NAN);
    let (s, r, energy, f) = (
        get("s"),
        get("r"),
        get("total_energy_per_distance"),
        get("factor"),
    );
    let ok = out.status.code() == Some(0)
        && (s - 1.0).abs() <= 1e-12
        && (r - 1.0).abs() <= 1e-12
        && (energy - 4.0).abs() <= 1e-12
        && (f - 18.0).abs() <= 1e-12
        && json["kkt"]["verdict"] == Value::Bool(true);
    verdict(
        ok,
        format!("s = {s}, r = {r}, energy factor {energy}, f = {f}"),
    )
}

fn plateau() -> Verdict {
    let d = delta();
    let flat = 0.5 * d * d * d;
    let mut worst = 0.0_f64;
    for k in 1..=50 {
        let x = d * (20.0 / d).powf(k as f64 / 50.0);
        worst = worst.max((ec_ratio_f(x).unwrap() - flat).abs());
    }
    for k in 0..50 {
        let x = 3.0 * (d / 3.0).powf(k as f64 / 49.0);
        let expect = x * x * (1.0 + 1.0 / ((x - 2.0) * (x - 2.0)));
        worst = worst.max((ec_ratio_f(x).unwrap() - expect).abs());
    }
    verdict(
        worst <= 1e-9,
        format!("100 samples, plateau {flat:.10}, max error {worst:.1e}"),
    )
}

fn oracle() -> Verdict {
    let mut worst = 0.0_f64;
    for (b, c) in ec_draws(200) {
        let num = solve_nlp(&NlpSpec::MinEnergyEc { b, c }).unwrap();
        worst = worst.max(num.max_abs_diff(&ec_optimal_speeds(b, c).unwrap().pair));
    }
    for e in energy_draws(200) {
        let num = solve_nlp(&NlpSpec::MinTimeWec { e }).unwrap();
        worst = worst.max(num.max_abs_diff(&wec_optimal_speeds(e).unwrap().pair));
        let num = solve_nlp(&NlpSpec::MinTimeWe { e }).unwrap();
        worst = worst.max(num.max_abs_diff(&we_optimal_speeds(e).unwrap().pair));
    }
    verdict(
        worst <= 1e-6,
        format!("600 solves, max coordinate gap {worst:.1e}"),
    )
}

fn kkt() -> Verdict {
    let mut invalid = 0;
    let mut worst_res = 0.0_f64;
    let mut worst_neg = 0.0_f64;
    let mut tally = |cert: evac_core::numopt::KktCertificate| {
        worst_res = worst_res.max(cert.stationarity_residual);
        for &l in cert.multipliers.values() {
            worst_neg = worst_neg.min(l);
        }
        if !cert.verdict {
            invalid += 1;
        }
    };
    for (b, c) in ec_draws(200) {
        tally(kkt_certificate_ec(b, c).unwrap());
    }
    for e in energy_draws(200) {
        tally(kkt_certificate_wec(e).unwrap());
        tally(kkt_certificate_we(e).unwrap());
    }
    let d = delta();
    let flip = ec_speed_bound_multipliers(1.0, d - 1e-6).1 > 0.0
        && ec_speed_bound_multipliers(1.0, d + 1e-6).1 < 0.0;
    let zero = kkt_certificate_wec(d)
        .unwrap()
        .multiplier(ConstraintId::SpeedR)
        .unwrap()
        .abs();
    verdict(
        invalid == 0 && worst_res <= 1e-8 && worst_neg >= -1e-10 && flip && zero <= 1e-10,
        format!(
            "{invalid}/600 invalid, max residual {worst_res:.1e}, min multiplier {worst_neg:.1e}, \
             sign flip at delta {flip}, wec r-multiplier at delta {zero:.1e}"
        ),
    )
}

fn quadrature() -> Verdict {
    let mut worst = 0.0_f64;
    for e in [0.1_f64, 0.5, 1.0] {
        for d in [1.0_f64, 10.0, 1e3, 1e6] {
            let l = (1.0 + d).ln();
            let energy = e / 2.0 - e / (2.0 * e * l + 2.0);
            let time = (2.0 / 3.0)
                * 2f64.sqrt()
                * ((1.0 + d).powf(1.5) * (1.0 / e + l - 2.0 / 3.0) - (1.0 / e - 2.0 / 3.0));
            let p = SpeedProfile::Functional(e);
            let qe = profile_energy(p, 0.0, d, DEFAULT_TOL).unwrap();
            let qt = profile_traversal_time(p, 0.0, d, DEFAULT_TOL).unwrap();
            worst = worst
                .max((qe - energy).abs() / energy)
                .max((qt - time).abs() / time);
        }
    }
    verdict(
        worst <= 1e-8,
        format!("12 (e, d) pairs, max relative gap {worst:.1e}"),
    )
}

fn functional_budget() -> Verdict {
    let (mut over, mut share) = (f64::NEG_INFINITY, 0.0_f64);
    for e in [0.2, 1.0] {
        for d in [10.0_f64, 1e3, 1e6] {
            let inst = ProblemInstance::wec(EnergyBudget::Constant(e), d).unwrap();
            let out = simulate_functional(e, &inst, DEFAULT_TOL).unwrap();
            let leftover = e / (e * (d + 1.0).ln() + 1.0);
            over = over.max(out.total_energy - e);
            share = share.max((out.nonfinder_energy - out.finder_energy - leftover).abs());
        }
    }
    verdict(
        over <= 1e-8 && share <= 1e-8,
        format!("max total - e = {over:.1e}, max rescue-leg error {share:.1e}"),
    )
}

fn growth() -> Verdict {
    let rows = empirical_growth_exponent(1.0, &[1e2, 1e4, 1e6, 1e8], DEFAULT_TOL).unwrap();
    let floor = rows.iter().all(|r| r.time >= r.d.powf(1.5));
    let upper = rows
        .iter()
        .filter(|r| r.d >= 1e4)
        .all(|r| r.time <= 2.0 * r.d.powf(1.5) * r.d.ln());
    let norm: Vec<f64> = rows
        .iter()
        .map(|r| r.time / (r.d.powf(1.5) * r.d.ln()))
        .collect();
    let spread = norm.iter().cloned().fold(0.0, f64::max)
        / norm.iter().cloned().fold(f64::INFINITY, f64::min);
    verdict(
        floor && upper && spread <= 10.0,
        format!("floor {floor}, upper bound for d >= 1e4 {upper}, normalized {norm:.4?}, max/min {spread:.3}"),
    )
}

fn adversary() -> Verdict {
    let mut worst = 0.0_f64;
    for b in [0.5, 1.0, 2.0] {
        let st = Strategy::simple_wireless(b, b, 1e4 / b).unwrap();
        for k in 0..20 {
            let d = 10f64.powf(3.0 * k as f64 / 19.0);
            worst = worst.max((adversarial_exit(&st, d).unwrap().ratio - 3.0 / b).abs());
        }
    }
    let found = (0..10)
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let st = random_strategy(&mut rng, 1.0, 1000.0);
            infeasibility_witness(1.0, 2.9, &st)
                .is_ok_and(|rep| rep.induced_time > 2.9 * rep.exit_distance)
        })
        .count();
    verdict(
        worst <= 1e-9 && found == 10,
        format!("forced ratio error {worst:.1e} over 60 (b, d), witnesses {found}/10"),
    )
}

fn time_factors() -> Verdict {
    let d = delta();
    // Left-branch formulas evaluated at the boundary against the right branch.
    let (e3, e4) = (3.0_f64, 4.0_f64);
    let formula_gaps = [
        (d * d / ((d - 2.0) * (d - 2.0)) + d * d - 0.5 * d * d * d).abs(),
        ((d * d * d / d).sqrt() - (2.0 + (2.0 / (d - 2.0)).sqrt())).abs(),
        ((2.0 + (2.0 / (e4 - 2.0)).sqrt()) - 3.0).abs(),
        (3.0 * (3.0 / e3).sqrt() - 3.0).abs(),
    ];
    let h = 1e-12;
    let library_gaps = [
        (ec_ratio_f(d - h).unwrap() - ec_ratio_f(d + h).unwrap()).abs(),
        (wec_time_factor_g(d - h).unwrap() - wec_time_factor_g(d).unwrap()).abs(),
        (wec_time_factor_g(4.0 - h).unwrap() - wec_time_factor_g(4.0).unwrap()).abs(),
        (we_time_factor_g(3.0 - h).unwrap() - we_time_factor_g(3.0).unwrap()).abs(),
    ];
    let worst = formula_gaps
        .iter()
        .chain(&library_gaps)
        .cloned()
        .fold(0.0, f64::max);
    let out = evac(&["verify", "--suite", "continuity"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let note = stdout.lines().any(|l| l == WE_FACTOR_NOTE);
    verdict(
        worst <= 1e-9 && note && out.status.success(),
        format!("max boundary jump {worst:.1e}, verify prints table note: {note}"),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let cases: [&[&str]; 3] = [
        &["sweep", "cb", "--range", "3:6", "--points", "50"],
        &[
            "sweep",
            "e",
            "--problem",
            "we",
            "--range",
            "0.5:4",
            "--points",
            "40",
        ],
        &[
            "sweep", "d", "--e", "1", "--range", "10:1e6", "--points", "11", "--scale", "geo",
        ],
    ];
    let mut same = 0;
    for (i, args) in cases.iter().enumerate() {
        let runs: Vec<Vec<u8>> = (0..2)
            .map(|k| {
                let path = dir.path().join(format!("sweep{i}_{k}.csv"));
                let mut full = args.to_vec();
                let p = path.to_str().unwrap();
                full.extend(["--out", p]);
                assert!(evac(&full).status.success(), "sweep {args:?} failed");
                std::fs::read(&path).unwrap()
            })
            .collect();
        if runs[0] == runs[1] && !runs[0].is_empty() {
            same += 1;
        }
    }
    verdict(
        same == cases.len(),
        format!("{same}/{} sweeps byte-identical", cases.len()),
    )
}

type Criterion = (&'static str, Option<Duration>, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 EC exact case", Some(Duration::from_secs(1)), exit_case),
        ("2 EC ratio plateau", Some(Duration::from_secs(1)), plateau),
        ("3 oracle agreement", Some(Duration::from_secs(30)), oracle),
        ("4 KKT grids", Some(Duration::from_secs(5)), kkt),
        (
            "5 quadrature vs closed form",
            Some(Duration::from_secs(10)),
            quadrature,
        ),
        (
            "6 functional budget",
            Some(Duration::from_secs(5)),
            functional_budget,
        ),
        ("7 growth rate", Some(Duration::from_secs(5)), growth),
        ("8 adversary", Some(Duration::from_secs(10)), adversary),
        ("9 time factor continuity", None, time_factors),
        ("10 sweep determinism", None, determinism),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let v = check();
        let took = start.elapsed();
        let ok = v.ok && limit.is_none_or(|l| took <= l);
        if !ok {
            failed += 1;
        }
        let limit = limit.map_or("no limit".to_string(), |l| {
            format!("limit {} s", l.as_secs())
        });
        println!(
            "{} criterion {name}: {} ({:.3} s, {limit})",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

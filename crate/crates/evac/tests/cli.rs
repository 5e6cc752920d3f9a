use std::path::Path;
use std::process::{Command, Output};

use evac_core::closed_form::{ec_optimal_speeds, ec_ratio_f, we_optimal_speeds, we_time_factor_g};
use serde_json::Value;

fn evac_with(args: &[&str], env_tol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_evac"));
    cmd.args(args).env_remove("EVAC_TOL");
    if let Some(t) = env_tol {
        cmd.env("EVAC_TOL", t);
    }
    cmd.output().expect("run evac binary")
}

fn evac(args: &[&str]) -> Output {
    evac_with(args, None)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn optimize_examples() {
    let out = evac(&["optimize", "we", "--e", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((f(&v["closed_form"]["s"]) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    assert!((f(&v["closed_form"]["factor"]) - 4.242_641).abs() < 1e-6);
    assert!(f(&v["agreement"]) <= 1e-6);

    let out = evac(&["optimize", "wec", "--e", "3.6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["closed_form"]["regime"], "wec_mid_energy");

    let out = evac(&["optimize", "ec", "--b", "1", "--c", "2.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible: bc < 3"));

    assert_eq!(evac(&["optimize", "ec", "--b", "1"]).status.code(), Some(2));
    assert_eq!(
        evac(&["optimize", "wec", "--e", "-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn simulate_examples() {
    let v = json(&evac(&[
        "simulate", "naive", "--s", "1", "--r", "1", "--d", "5",
    ]));
    assert_eq!(f(&v["outcome"]["evacuation_time"]), 15.0);
    assert_eq!(f(&v["outcome"]["total_energy"]), 20.0);

    let out = evac(&[
        "simulate",
        "naive",
        "--s",
        "2",
        "--r",
        "1",
        "--d",
        "1",
        "--maxspeed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["outcome"]["feasible"], false);
    assert_eq!(v["outcome"]["violated_constraints"][0], "speed_bound");

    let v = json(&evac(&["simulate", "functional", "--e", "1", "--d", "100"]));
    assert!(f(&v["outcome"]["total_energy"]) <= 1.0 + 1e-8);
    assert_eq!(v["outcome"]["feasible"], true);

    // Over-budget naive speeds are reported, not rejected.
    let out = evac(&[
        "simulate", "naive", "--s", "1", "--r", "1", "--d", "2", "--e", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["outcome"]["violated_constraints"][0],
        "total_energy"
    );

    let pos = evac(&[
        "simulate", "naive", "--s", "0.7", "--r", "0.9", "--d", "3", "--c", "5",
    ]);
    let neg = evac(&[
        "simulate", "naive", "--s", "0.7", "--r", "0.9", "--d", "3", "--c", "5", "--side",
        "negative",
    ]);
    assert_eq!(json(&pos)["outcome"], json(&neg)["outcome"]);
}

#[test]
fn sweep_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cb.csv");
    let p = path.to_str().unwrap();
    assert!(
        evac(&["sweep", "cb", "--range", "3:6", "--points", "31", "--out", p])
            .status
            .success()
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("cb,s,r,ratio_f\n"));
    assert!(!text.contains('\r'));
    let rows = csv_rows(&text);
    assert_eq!(rows[0][3], 18.0);
    assert!((rows.last().unwrap()[3] - 17.3217).abs() < 1e-4);
    for row in &rows {
        let opt = ec_optimal_speeds(1.0, row[0]).unwrap().pair;
        assert!((row[1] - opt.s()).abs() <= 1e-9 * opt.s().max(1.0));
        assert!((row[2] - opt.r()).abs() <= 1e-9 * opt.r().max(1.0));
        assert!((row[3] - ec_ratio_f(row[0]).unwrap()).abs() <= 1e-9 * row[3]);
    }
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));

    let out = evac(&[
        "sweep",
        "e",
        "--problem",
        "we",
        "--range",
        "0.5:4",
        "--points",
        "36",
    ]);
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    for row in &rows {
        let opt = we_optimal_speeds(row[0]).unwrap().pair;
        assert!((row[1] - opt.s()).abs() <= 1e-9);
        assert!((row[3] - we_time_factor_g(row[0]).unwrap()).abs() <= 1e-9 * row[3]);
        if row[0] >= 3.0 {
            assert_eq!(row[3], 3.0);
        }
    }

    let out = evac(&[
        "sweep", "d", "--range", "10:1e6", "--points", "6", "--scale", "geo",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("d,time,energy,time_over_d32logd\n"));
    for row in csv_rows(&text) {
        assert!(row[3] > 0.5 && row[3] < 5.0, "{row:?}");
        assert!(row[2] <= 1.0 + 1e-8);
    }
}

#[test]
fn sweep_rejects_bad_input() {
    assert_eq!(
        evac(&["sweep", "cb", "--range", "2:6"]).status.code(),
        Some(2)
    );
    assert_eq!(
        evac(&["sweep", "cb", "--range", "6:3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        evac(&["sweep", "cb", "--range", "3-6"]).status.code(),
        Some(3)
    );
    assert_eq!(
        evac(&["sweep", "cb", "--range", "3:6", "--points", "1"])
            .status
            .code(),
        Some(2)
    );
    let out = evac(&[
        "sweep",
        "cb",
        "--range",
        "3:6",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(evac(&["sweep", "cb", "--bogus"]).status.code(), Some(3));
}

#[test]
fn config_file_and_env_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("evac.conf");
    std::fs::write(&cfg, "# test\ntol = 1e-9\npoints = 5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let tol_of = |out: Output| f(&json(&out)["tol"]);

    let base = ["simulate", "functional", "--e", "1", "--d", "10"];
    assert_eq!(tol_of(evac(&base)), 1e-10);
    assert_eq!(tol_of(evac_with(&base, Some("1e-8"))), 1e-8);
    let with_cfg: Vec<&str> = base.iter().copied().chain(["--config", c]).collect();
    assert_eq!(tol_of(evac_with(&with_cfg, Some("1e-8"))), 1e-9);
    let with_flag: Vec<&str> = with_cfg.iter().copied().chain(["--tol", "1e-7"]).collect();
    assert_eq!(tol_of(evac_with(&with_flag, Some("1e-8"))), 1e-7);

    let out = evac(&["sweep", "cb", "--range", "3:4", "--config", c]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);

    std::fs::write(&cfg, "volume = 11\n").unwrap();
    assert_eq!(
        evac(&["verify", "--suite", "delta", "--config", c])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        evac(&["verify", "--config", "/nonexistent.conf"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(evac_with(&base, Some("fast")).status.code(), Some(3));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn adversary_commands() {
    let v = json(&evac(&[
        "adversary",
        "exit",
        "--strategy",
        "naive",
        "--b",
        "2",
        "--d",
        "7",
    ]));
    assert!((f(&v["ratio"]) - 1.5).abs() < 1e-12);

    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "zigzag.txt",
        "maxspeed 1 horizon 500\n0 0 1 1\n0 1 3 -1\n0 4 496 1\n1 0 500 -0.5\n",
    );
    let out = evac(&["adversary", "exit", "--strategy", &good, "--d", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(f(&json(&out)["ratio"]) >= 3.0 - 1e-4);

    let out = evac(&[
        "adversary",
        "witness",
        "--strategy",
        &good,
        "--b",
        "1",
        "--c",
        "2.9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["violated_bound"], "time_bound");
    assert!(f(&v["report"]["induced_time"]) > 2.9 * f(&v["report"]["exit_distance"]));

    let out = evac(&["adversary", "witness", "--b", "1", "--c", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let overlap = write(
        dir.path(),
        "bad.txt",
        "maxspeed 1 horizon 10\n0 0 2 1\n0 1 2 1\n",
    );
    let out = evac(&["adversary", "exit", "--strategy", &overlap, "--d", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlaps"));
    let out = evac(&[
        "adversary",
        "exit",
        "--strategy",
        "/nonexistent",
        "--d",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_suites() {
    let out = evac(&["verify", "--suite", "kkt", "--grid", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS kkt: 600 certificates"));
    assert!(text.contains("published table lists 1"));

    let out = evac(&["verify", "--suite", "adversary"]);
    assert_eq!(out.status.code(), Some(0));
    let out = evac(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 8);

    assert_eq!(evac(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["optimize", "wec", "--e", "2.5"][..],
        &["simulate", "functional", "--e", "0.4", "--d", "1000"],
        &[
            "sweep", "d", "--range", "10:1000", "--points", "4", "--scale", "geo",
        ],
    ] {
        assert_eq!(evac(args).stdout, evac(args).stdout);
    }
}

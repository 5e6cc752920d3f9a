//! Deterministic parameter draws shared by `verify` and the test suites.

use evac_core::adversary::Strategy;
use rand::Rng;

/// Radical-inverse of `index` in `base` (the Halton sequence); `index` starts at 1.
pub fn halton(mut index: usize, base: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// `n` EC parameter pairs `(b, c)` with `b ∈ [0.1, 5]` and `bc ∈ [3, 10]`.
pub fn ec_draws(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let b = 0.1 + 4.9 * halton(i, 2);
            let x = 3.0 + 7.0 * halton(i, 3);
            (b, x / b)
        })
        .collect()
}

/// `n` energy coefficients in `[0.05, 10]`.
pub fn energy_draws(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 0.05 + 9.95 * halton(i, 5)).collect()
}

/// Random two-robot strategy with speed bound `b`: each robot makes up to
/// three turns at random speeds, then heads outward (robot 0 right, robot 1
/// left) until `horizon`.
pub fn random_strategy<R: Rng>(rng: &mut R, b: f64, horizon: f64) -> Strategy {
    let mut robots: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for (i, moves) in robots.iter_mut().enumerate() {
        let outward = if i == 0 { 1.0 } else { -1.0 };
        let mut dir = outward;
        let mut t = 0.0;
        for _ in 0..rng.gen_range(0..4) {
            let dur = rng.gen_range(0.5..5.0);
            moves.push((dur, dir * b * rng.gen_range(0.2..=1.0)));
            t += dur;
            dir = -dir;
        }
        moves.push((horizon - t, outward * b * rng.gen_range(0.5..=1.0)));
    }
    Strategy::from_moves(b, horizon, [&robots[0], &robots[1]])
        .expect("generated moves respect the speed bound")
}

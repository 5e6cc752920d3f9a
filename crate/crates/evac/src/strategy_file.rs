//! Line-oriented strategy files.
//!
//! ```text
//! maxspeed 1 horizon 100
//! # robot start duration velocity
//! 0 0 100 1
//! 1 0 40 -1
//! 1 40 60 1
//! ```
//!
//! Each robot's segments must be listed in time order, start at time 0 and
//! follow each other without gaps or overlaps. Positions are implied by the
//! velocities, starting from the origin.

use std::fmt::Write as _;
use std::path::Path;

use evac_core::adversary::Strategy;
use evac_core::TrajectorySegment;

use crate::error::{CliError, Result};

const TIME_TOL: f64 = 1e-9;

fn err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("strategy line {line}: {msg}"))
}

fn num(line: usize, what: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| err(line, format!("bad {what} {raw:?}")))?;
    if !v.is_finite() {
        return Err(err(line, format!("{what} must be finite")));
    }
    Ok(v)
}

pub fn parse_strategy(text: &str) -> Result<Strategy> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (n, header) = lines
        .next()
        .ok_or_else(|| CliError::Parse("strategy file is empty".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (max_speed, horizon) = match fields.as_slice() {
        ["maxspeed", b, "horizon", t] => (num(n, "maxspeed", b)?, num(n, "horizon", t)?),
        _ => return Err(err(n, "expected header `maxspeed <b> horizon <T>`")),
    };

    let mut robots: [Vec<TrajectorySegment>; 2] = [Vec::new(), Vec::new()];
    for (n, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [id, start, duration, velocity] = fields.as_slice() else {
            return Err(err(
                n,
                "expected `robot_id start_time duration signed_speed`",
            ));
        };
        let robot = match *id {
            "0" => 0,
            "1" => 1,
            _ => return Err(err(n, format!("robot id must be 0 or 1, got {id:?}"))),
        };
        let start = num(n, "start_time", start)?;
        let duration = num(n, "duration", duration)?;
        let velocity = num(n, "signed_speed", velocity)?;
        if duration <= 0.0 {
            return Err(err(n, "duration must be positive"));
        }

        let (t, x) = robots[robot]
            .last()
            .map_or((0.0, 0.0), |s| (s.end_time(), s.end_pos()));
        let slack = TIME_TOL * t.abs().max(1.0);
        if start < t - slack {
            return Err(err(
                n,
                format!("segment overlaps the previous one (ends at {t})"),
            ));
        }
        if start > t + slack {
            return Err(err(n, format!("gap after time {t}")));
        }
        robots[robot].push(TrajectorySegment {
            start_time: t,
            duration,
            start_pos: x,
            velocity,
        });
    }
    Ok(Strategy::new(max_speed, horizon, robots)?)
}

pub fn load_strategy(path: &Path) -> Result<Strategy> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_strategy(&text)
}

/// Inverse of [`parse_strategy`]; floats use the shortest round-trip form.
pub fn format_strategy(strategy: &Strategy) -> String {
    let mut out = format!(
        "maxspeed {} horizon {}\n",
        strategy.max_speed(),
        strategy.horizon()
    );
    for robot in 0..2 {
        for s in strategy.segments(robot) {
            writeln!(
                out,
                "{robot} {} {} {}",
                s.start_time, s.duration, s.velocity
            )
            .expect("writing to a String");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOUBLING: &str = "maxspeed 1 horizon 20\n\
        # zig-zag\n\
        0 0 1 1\n\
        0 1 3 -1\n\
        0 4 16 1\n\
        1 0 20 -0.5\n";

    #[test]
    fn parses_and_round_trips() {
        let st = parse_strategy(DOUBLING).unwrap();
        assert_eq!(st.segments(0).len(), 3);
        assert_eq!(st.segments(0)[2].start_pos, -2.0);
        assert_eq!(st.first_visit_any(-2.0), Some((0, 4.0)));
        assert_eq!(parse_strategy(&format_strategy(&st)).unwrap(), st);
    }

    #[test]
    fn rejects_overlap_gap_and_junk() {
        let overlap = "maxspeed 1 horizon 20\n0 0 2 1\n0 1 2 1\n";
        assert!(
            matches!(parse_strategy(overlap), Err(CliError::Parse(m)) if m.contains("overlaps"))
        );
        let gap = "maxspeed 1 horizon 20\n0 0 2 1\n0 3 2 1\n";
        assert!(matches!(parse_strategy(gap), Err(CliError::Parse(m)) if m.contains("gap")));
        let late_start = "maxspeed 1 horizon 20\n1 0.5 2 1\n";
        assert!(parse_strategy(late_start).is_err());
        assert!(parse_strategy("maxspeed 1\n").is_err());
        assert!(parse_strategy("maxspeed 1 horizon 20\n2 0 1 1\n").is_err());
        assert!(parse_strategy("maxspeed 1 horizon 20\n0 0 1 1.5\n").is_err());
        assert!(parse_strategy("maxspeed 1 horizon 20\n0 0 30 1\n").is_err());
        assert!(parse_strategy("").is_err());
    }
}

use alloc::vec::Vec;

use crate::error::{positive, Error, Result};
use crate::model::TrajectorySegment;

const CONTIGUITY_TOL: f64 = 1e-9;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= CONTIGUITY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// A two-robot search strategy as piecewise-constant-velocity trajectories.
///
/// Both robots start at the origin at time 0. Each robot's segments are
/// contiguous in time and position; after its last segment a robot stays put.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Strategy {
    max_speed: f64,
    horizon: f64,
    robots: [Vec<TrajectorySegment>; 2],
}

impl Strategy {
    pub fn new(max_speed: f64, horizon: f64, robots: [Vec<TrajectorySegment>; 2]) -> Result<Self> {
        let max_speed = positive("max_speed", max_speed)?;
        let horizon = positive("horizon", horizon)?;
        for segments in &robots {
            let (mut t, mut x) = (0.0, 0.0);
            for seg in segments {
                if !(seg.duration.is_finite() && seg.duration > 0.0) {
                    return Err(Error::InvalidStrategy("segment duration must be positive"));
                }
                if !seg.velocity.is_finite() {
                    return Err(Error::InvalidStrategy("segment velocity must be finite"));
                }
                if seg.speed() > max_speed * (1.0 + 1e-12) {
                    return Err(Error::InvalidStrategy("segment exceeds the maximum speed"));
                }
                if !near(seg.start_time, t) {
                    return Err(Error::InvalidStrategy(
                        "segments overlap or leave a gap in time",
                    ));
                }
                if !near(seg.start_pos, x) {
                    return Err(Error::InvalidStrategy(
                        "segments are discontinuous in position",
                    ));
                }
                t = seg.end_time();
                x = seg.end_pos();
            }
            if t > horizon * (1.0 + CONTIGUITY_TOL) {
                return Err(Error::InvalidStrategy("segments extend past the horizon"));
            }
        }
        Ok(Self {
            max_speed,
            horizon,
            robots,
        })
    }

    /// Builds contiguous segments from `(duration, signed velocity)` moves.
    pub fn from_moves(max_speed: f64, horizon: f64, moves: [&[(f64, f64)]; 2]) -> Result<Self> {
        let build = |list: &[(f64, f64)]| {
            let (mut t, mut x) = (0.0, 0.0);
            list.iter()
                .map(|&(duration, velocity)| {
                    let seg = TrajectorySegment {
                        start_time: t,
                        duration,
                        start_pos: x,
                        velocity,
                    };
                    t = seg.end_time();
                    x = seg.end_pos();
                    seg
                })
                .collect::<Vec<_>>()
        };
        Self::new(max_speed, horizon, [build(moves[0]), build(moves[1])])
    }

    /// Pre-discovery motion of `SWS(speed, ·)`: robot 0 heads right and robot 1
    /// heads left at `speed` until the horizon.
    pub fn simple_wireless(speed: f64, max_speed: f64, horizon: f64) -> Result<Self> {
        Self::from_moves(
            max_speed,
            horizon,
            [&[(horizon, speed)], &[(horizon, -speed)]],
        )
    }

    pub fn max_speed(&self) -> f64 {
        self.max_speed
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn segments(&self, robot: usize) -> &[TrajectorySegment] {
        &self.robots[robot]
    }

    pub fn position_at(&self, robot: usize, t: f64) -> f64 {
        let segs = &self.robots[robot];
        match segs.iter().find(|s| t <= s.end_time()) {
            Some(seg) => seg.position_at(t),
            None => segs.last().map_or(0.0, |s| s.end_pos()),
        }
    }

    /// Earliest time within the horizon at which `robot` occupies `x`.
    pub fn first_visit(&self, robot: usize, x: f64) -> Option<f64> {
        let segs = &self.robots[robot];
        if segs.is_empty() {
            return (x == 0.0).then_some(0.0);
        }
        segs.iter()
            .find_map(|s| s.first_time_at(x))
            .filter(|&t| t <= self.horizon)
    }

    /// Earliest visit of `x` by either robot, with the index of the visitor.
    pub fn first_visit_any(&self, x: f64) -> Option<(usize, f64)> {
        match (self.first_visit(0, x), self.first_visit(1, x)) {
            (Some(a), Some(b)) if b < a => Some((1, b)),
            (Some(a), _) => Some((0, a)),
            (None, Some(b)) => Some((1, b)),
            (None, None) => None,
        }
    }

    /// Leftmost and rightmost positions occupied by any robot up to time `t`.
    pub fn extent_until(&self, t: f64) -> (f64, f64) {
        let mut lo: f64 = 0.0;
        let mut hi: f64 = 0.0;
        for segs in &self.robots {
            for seg in segs.iter().take_while(|s| s.start_time <= t) {
                let end = seg.position_at(t.min(seg.end_time()));
                lo = lo.min(seg.start_pos).min(end);
                hi = hi.max(seg.start_pos).max(end);
            }
        }
        (lo, hi)
    }

    /// Evacuation time for an exit at `x`: first discovery, then the other robot
    /// heads straight to the exit at maximum speed.
    pub fn evacuation_time(&self, x: f64) -> Option<f64> {
        let (finder, t) = self.first_visit_any(x)?;
        let other = 1 - finder;
        let gap = (self.position_at(other, t) - x).abs();
        Some(t + gap / self.max_speed)
    }
}

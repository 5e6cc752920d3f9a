//! Time/energy trade-offs for evacuating two wireless robots from the infinite line.
//!
//! Two robots start at the origin and search for an exit at unknown distance `d`.
//! Moving a distance `x` at constant speed `s` costs `x * s^2` energy. The crate
//! covers three optimization problems over the *Simple Wireless Search* family
//! `SWS(s, r)` (explore in opposite directions at speed `s`, the non-finder
//! returns at speed `r` once the exit is announced):
//!
//! * **EC** – minimize total energy subject to evacuation time `<= c*d` and speed `<= b`;
//! * **WEC** – minimize evacuation time subject to total energy `<= Δ`;
//! * **WE** – minimize evacuation time subject to makespan energy `<= Δ`.
//!
//! Modules:
//!
//! * [`model`] – domain types, the drag-energy functional and exact simulation;
//! * [`quadrature`] – adaptive Gauss–Kronrod integration used to cross-check closed forms;
//! * [`closed_form`] – optimal speeds, feasibility conditions and ratio/time factors;
//! * [`numopt`] – an independent grid-plus-refinement solver and KKT certificates;
//! * [`adversary`] – exit placement against arbitrary piecewise strategies.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod adversary;
pub mod closed_form;
pub mod consts;
mod error;
pub mod model;
pub mod numopt;
pub mod quadrature;

pub use error::{Error, Result};
pub use model::{
    profile_energy, profile_traversal_time, segment_energy, simulate_functional, simulate_naive,
    Constraint, EnergyBudget, EvacuationOutcome, ProblemInstance, ProblemKind, Side, SpeedPair,
    SpeedProfile, TrajectorySegment,
};

/// Default absolute quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

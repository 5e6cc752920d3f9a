//! Independent numerical oracle for the three two-variable convex programs.
//!
//! [`solve_nlp`] never consults the closed forms; [`kkt`] checks the closed-form
//! optimizers against first-order optimality conditions.

mod kkt;
mod nlp;

pub use kkt::{
    ec_speed_bound_multipliers, kkt_certificate_ec, kkt_certificate_we, kkt_certificate_wec,
    KktCertificate, MULTIPLIER_FLOOR, STATIONARITY_TOL,
};
pub use nlp::{solve_nlp, ConstraintId, NlpSpec, ACTIVE_TOL, GRID_RESOLUTION};

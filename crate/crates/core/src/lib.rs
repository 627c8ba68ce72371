//! Explicit bound verification for character sums, partial Gaussian sums,
//! mean-value estimates, geometry-of-numbers lemmas and real Dirichlet
//! L-functions, at desk scale and against independent brute-force oracles.
//!
//! Every inequality checker produces a [`report::VerificationRecord`] with
//! the evaluated left/right hand sides and a margin, so that sweeps over
//! parameter ranges are auditable after the fact. Checks whose hypotheses
//! are unreachable at desk scale (thresholds like `log q >= e^{16 l^2}`)
//! are reported as `hypotheses-unmet` rather than silently skipped.

pub mod arith;
pub mod charsum;
pub mod congruence;
pub mod dirichlet;
pub mod lattice;
pub mod lfunc;
pub mod meanvalue;
pub mod report;
pub mod sweep;
pub(crate) mod util;

pub use report::{Status, VerificationRecord};

//! Certified computation of mixed subordinate norms `||A||_{beta -> alpha}`
//! of nonnegative matrices by the nonlinear power method, plus log-Sobolev
//! bounds for finite Markov chains built on the same contraction machinery.

// NaN must fail every range check, so `!(x > 0.0)` is intended throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cone;
pub mod corollaries;
mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod log_sobolev;
pub mod matrix;
pub mod norms;
pub mod oracle;
pub mod power;

pub use error::{Error, Result};
pub use log_sobolev::{LscReport, MarkovChain};
pub use matrix::{NonnegMatrix, NonnegVector};
pub use norms::{NormSpec, Side, WeightedPTerm};
pub use power::{Certificate, PowerResult, ProblemInstance, SolveOptions};

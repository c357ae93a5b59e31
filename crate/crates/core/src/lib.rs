//! Large-argument asymptotics of a function known only through its Taylor
//! coefficients at a finite center.
//!
//! Given `c_0, c_1, ...` of `f` about `x0`, the inverse-power approximant
//!
//! ```text
//! R_m(x) = q_{0,m} + sum_{k=1..m} q_{k,m} / (x - x0 + 1)^k
//! ```
//!
//! matches the first `m + 1` coefficients, and as `m` grows `q_{0,m}` and
//! `q_{1,m}` tend to the coefficients of `f(x) = q0 + q1/x + O(1/x^2)`.
//! Every closed form used here is paired with an independent brute-force
//! route, and exact rational arithmetic is the default throughout.

pub mod approximant;
pub mod asymptotics;
pub mod binomial;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod identities;
pub mod scalar;
pub mod series;
pub mod transforms;

pub use approximant::{
    build_matrix_a, coeffs_closed_form, coeffs_oracle_solve, coeffs_via_matrix,
    InversePowerApproximant, SignedBinomialMatrix,
};
pub use asymptotics::{convergence_table, estimate_limits, AsymptoticEstimate, ConvergenceTable};
pub use binomial::{binom, BigBinomial};
pub use corpus::{CoefficientFile, CorpusFunction, HypothesisRadius};
pub use error::{Error, Result};
pub use identities::{run_suite, IdentityCase, IdentityId, SuiteRanges, SuiteReport};
pub use scalar::{Scalar, ScalarError};
pub use series::TaylorSeries;
pub use transforms::{
    binomial_convolve, sequential_transform, sequential_transform_closed, transform_k, CountableSet,
};

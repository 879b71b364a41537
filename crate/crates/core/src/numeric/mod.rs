//! Floating-point Magnus machinery for `Y'(t) = A(t) Y(t)`: quadrature,
//! Magnus terms, the time-ordered exponential oracle, the permutation-sum
//! form, chronological and half-shuffle products, convergence studies.

mod chrono;
mod convergence;
mod function;
mod magnus;
mod matrix;
mod problems;
mod quadrature;

use thiserror::Error;

pub use chrono::{
    chronological_identity_residual, chronological_product, dendriform_residuals, half_shuffles,
    left_half_shuffle, right_half_shuffle, shuffle_product, sup_norm_on_grid,
};
pub use convergence::{convergence_study, fit_polynomial, ConvergenceRow, Report};
pub use function::{cumulative_integral, MatrixFunction};
pub use magnus::{
    chen_strichartz_term, omega_recursion, omega_terms, reference_solution, time_ordered_exp,
    Reference,
};
pub use matrix::{commutator, elementary, matrix_exp, max_abs, Matrix};
pub use problems::{identity_suite, Problem};
pub use quadrature::QuadratureRule;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("empty mesh")]
    EmptyMesh,
    #[error("mesh must be strictly increasing and start at 0")]
    BadMesh,
    #[error("time horizon must be positive and finite, got {0}")]
    Horizon(f64),
    #[error("{what} = {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: &'static str,
    },
    #[error("step sizes: {0}")]
    Steps(String),
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("malformed problem spec: {0}")]
    ProblemSpec(String),
}

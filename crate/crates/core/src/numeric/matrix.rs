use nalgebra::DMatrix;

use super::NumericError;

/// Dense square matrix of doubles.
pub type Matrix = DMatrix<f64>;

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

/// Largest absolute entry.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Elementary matrix `E_ij` (zero based) of size `dim`.
pub fn elementary(dim: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(dim, dim);
    m[(i, j)] = 1.0;
    m
}

fn norm1(m: &Matrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

const TAYLOR_DEGREE: usize = 18;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The matrix is scaled by `2^-s` until its 1-norm is at most 1/2, where the
/// degree-18 Taylor remainder is below `1e-22`, then squared `s` times.
pub fn matrix_exp(m: &Matrix) -> Result<Matrix, NumericError> {
    if !m.is_square() {
        return Err(NumericError::NotSquare(m.nrows(), m.ncols()));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(NumericError::NonFinite);
    }
    let n = m.nrows();
    let norm = norm1(m);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let a = m / 2f64.powi(squarings as i32);
    let mut result = Matrix::identity(n, n);
    let mut term = Matrix::identity(n, n);
    for k in 1..=TAYLOR_DEGREE {
        term = &term * &a / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

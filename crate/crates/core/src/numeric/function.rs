use std::fmt;
use std::sync::Arc;

use super::quadrature::QuadratureRule;
use super::{Matrix, NumericError};

type Evaluator = Arc<dyn Fn(f64) -> Matrix + Send + Sync>;

/// Matrix-valued function on `[0, horizon]`.
#[derive(Clone)]
pub struct MatrixFunction {
    eval: Evaluator,
    dim: usize,
    horizon: f64,
}

impl fmt::Debug for MatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixFunction")
            .field("dim", &self.dim)
            .field("horizon", &self.horizon)
            .finish()
    }
}

fn check_horizon(horizon: f64) -> Result<(), NumericError> {
    if horizon.is_finite() && horizon > 0.0 {
        Ok(())
    } else {
        Err(NumericError::Horizon(horizon))
    }
}

impl MatrixFunction {
    /// Wraps a closed-form evaluator. The closure must return `dim x dim`
    /// matrices.
    pub fn new<F>(dim: usize, horizon: f64, f: F) -> Result<Self, NumericError>
    where
        F: Fn(f64) -> Matrix + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(NumericError::EmptyDimension);
        }
        check_horizon(horizon)?;
        Ok(MatrixFunction {
            eval: Arc::new(f),
            dim,
            horizon,
        })
    }

    pub fn constant(m: Matrix, horizon: f64) -> Result<Self, NumericError> {
        check_square(&m)?;
        let dim = m.nrows();
        Self::new(dim, horizon, move |_| m.clone())
    }

    /// `t ↦ Σ_i coeffs[i] tⁱ`.
    pub fn polynomial(coeffs: Vec<Matrix>, horizon: f64) -> Result<Self, NumericError> {
        let first = coeffs.first().ok_or(NumericError::EmptyMesh)?;
        check_square(first)?;
        let dim = first.nrows();
        for c in &coeffs {
            check_square(c)?;
            if c.nrows() != dim {
                return Err(NumericError::Dimension {
                    expected: dim,
                    found: c.nrows(),
                });
            }
        }
        Self::new(dim, horizon, move |t| {
            // Horner
            let mut acc = Matrix::zeros(dim, dim);
            for c in coeffs.iter().rev() {
                acc = acc * t + c;
            }
            acc
        })
    }

    /// Piecewise-linear interpolation of samples on a strictly increasing
    /// mesh starting at 0. The horizon is the last mesh point.
    pub fn sampled(mesh: Vec<f64>, values: Vec<Matrix>) -> Result<Self, NumericError> {
        if mesh.is_empty() || values.is_empty() {
            return Err(NumericError::EmptyMesh);
        }
        if mesh.len() != values.len() {
            return Err(NumericError::Dimension {
                expected: mesh.len(),
                found: values.len(),
            });
        }
        if mesh[0] != 0.0 || mesh.windows(2).any(|w| w[1] <= w[0] || !w[1].is_finite()) {
            return Err(NumericError::BadMesh);
        }
        check_square(&values[0])?;
        let dim = values[0].nrows();
        for v in &values {
            check_square(v)?;
            if v.nrows() != dim {
                return Err(NumericError::Dimension {
                    expected: dim,
                    found: v.nrows(),
                });
            }
        }
        let horizon = *mesh.last().expect("nonempty");
        Self::new(dim, horizon, move |t| {
            let i = match mesh.binary_search_by(|m| m.total_cmp(&t)) {
                Ok(i) => return values[i].clone(),
                Err(i) => i.clamp(1, mesh.len() - 1),
            };
            let (t0, t1) = (mesh[i - 1], mesh[i]);
            let w = (t - t0) / (t1 - t0);
            &values[i - 1] * (1.0 - w) + &values[i] * w
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn eval(&self, t: f64) -> Matrix {
        (self.eval)(t)
    }

    /// Same evaluator on `[0, horizon]`.
    pub fn restricted(&self, horizon: f64) -> Result<Self, NumericError> {
        check_horizon(horizon)?;
        Ok(MatrixFunction {
            eval: self.eval.clone(),
            dim: self.dim,
            horizon,
        })
    }

    /// `s ↦ self(offset + s)` on `[0, horizon]`.
    pub fn shifted(&self, offset: f64, horizon: f64) -> Result<Self, NumericError> {
        let inner = self.eval.clone();
        Self::new(self.dim, horizon, move |s| inner(offset + s))
    }

    /// Pointwise combination with another function of the same dimension.
    pub fn zip_with<F>(&self, other: &MatrixFunction, f: F) -> Result<Self, NumericError>
    where
        F: Fn(Matrix, Matrix) -> Matrix + Send + Sync + 'static,
    {
        if self.dim != other.dim {
            return Err(NumericError::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self::new(self.dim, self.horizon.min(other.horizon), move |t| {
            f(a(t), b(t))
        })
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(Matrix) -> Matrix + Send + Sync + 'static,
    {
        let a = self.eval.clone();
        MatrixFunction {
            eval: Arc::new(move |t| f(a(t))),
            dim: self.dim,
            horizon: self.horizon,
        }
    }
}

fn check_square(m: &Matrix) -> Result<(), NumericError> {
    if !m.is_square() {
        return Err(NumericError::NotSquare(m.nrows(), m.ncols()));
    }
    if m.nrows() == 0 {
        return Err(NumericError::EmptyDimension);
    }
    Ok(())
}

/// `t ↦ ∫₀ᵗ f(s) ds`.
///
/// The integral at every panel boundary of `[0, horizon]` is accumulated once,
/// left to right. Evaluating at `t` adds the rule applied to the partial panel
/// `[boundary, t]`, so the result is smooth in `t` and nesting stays accurate.
pub fn cumulative_integral(f: &MatrixFunction, rule: &QuadratureRule) -> MatrixFunction {
    let panels = rule.panels();
    let width = f.horizon / panels as f64;
    let dim = f.dim;
    let mut boundary = Vec::with_capacity(panels + 1);
    let mut acc = Matrix::zeros(dim, dim);
    boundary.push(acc.clone());
    for p in 0..panels {
        let lo = width * p as f64;
        for (x, w) in rule.panel_points(lo, lo + width) {
            acc += f.eval(x) * w;
        }
        boundary.push(acc.clone());
    }
    let rule = rule.clone();
    let inner = f.eval.clone();
    MatrixFunction {
        eval: Arc::new(move |t| {
            let p = ((t / width).floor().max(0.0) as usize).min(panels - 1);
            let lo = width * p as f64;
            let mut out = boundary[p].clone();
            if t != lo {
                for (x, w) in rule.panel_points(lo, t) {
                    out += inner(x) * w;
                }
            }
            out
        }),
        dim,
        horizon: f.horizon,
    }
}

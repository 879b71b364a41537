use super::function::MatrixFunction;
use super::matrix::{elementary, Matrix};
use super::NumericError;

/// A named linear IVP `Y' = A(t) Y` on `[0, horizon]` with `Y(0) = I`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub id: String,
    pub a: MatrixFunction,
}

impl Problem {
    pub const NAMES: [&'static str; 3] = ["xty", "commuting", "skew3"];

    /// `A(t) = X + tY` with `X = E₁₂`, `Y = E₂₁`.
    pub fn xty() -> Self {
        let a = MatrixFunction::polynomial(vec![elementary(2, 0, 1), elementary(2, 1, 0)], 1.0)
            .expect("valid coefficients");
        Problem {
            id: "xty".into(),
            a,
        }
    }

    /// `A(t) = (1 + 2t) X` for a fixed `X`. The midpoint oracle is exact here.
    pub fn commuting() -> Self {
        let x = Matrix::from_row_slice(2, 2, &[0.3, 1.0, -1.0, 0.2]);
        let a = MatrixFunction::polynomial(vec![x.clone(), x * 2.0], 1.0).expect("valid");
        Problem {
            id: "commuting".into(),
            a,
        }
    }

    /// Quadratic skew-symmetric 3x3 family with fixed pseudo-random
    /// coefficients.
    pub fn skew3() -> Self {
        let coeffs = (0..3).map(|k| skew_coefficient(k, 3)).collect();
        let a = MatrixFunction::polynomial(coeffs, 1.0).expect("valid");
        Problem {
            id: "skew3".into(),
            a,
        }
    }

    /// A named problem, or `poly:<json>` where the json is a list of
    /// coefficient matrices (rows of numbers) of `A(t) = Σ Cᵢ tⁱ` on `[0, 1]`.
    pub fn parse(spec: &str) -> Result<Self, NumericError> {
        match spec {
            "xty" => return Ok(Self::xty()),
            "commuting" => return Ok(Self::commuting()),
            "skew3" => return Ok(Self::skew3()),
            _ => {}
        }
        let Some(json) = spec.strip_prefix("poly:") else {
            return Err(NumericError::UnknownProblem(spec.to_string()));
        };
        let raw: Vec<Vec<Vec<f64>>> =
            serde_json::from_str(json).map_err(|e| NumericError::ProblemSpec(e.to_string()))?;
        if raw.is_empty() {
            return Err(NumericError::ProblemSpec("no coefficients".into()));
        }
        let mut coeffs = Vec::with_capacity(raw.len());
        for rows in &raw {
            let n = rows.len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(NumericError::ProblemSpec(
                    "every coefficient must be a nonempty square matrix".into(),
                ));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            if flat.iter().any(|v| !v.is_finite()) {
                return Err(NumericError::ProblemSpec("non-finite coefficient".into()));
            }
            coeffs.push(Matrix::from_row_slice(n, n, &flat));
        }
        let a = MatrixFunction::polynomial(coeffs, 1.0)
            .map_err(|e| NumericError::ProblemSpec(e.to_string()))?;
        Ok(Problem {
            id: spec.to_string(),
            a,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.a.horizon()
    }
}

// deterministic filler in [-1, 1]
fn filler(seed: usize) -> f64 {
    ((seed as f64) * 12.9898 + 78.233).sin()
}

fn skew_coefficient(k: usize, dim: usize) -> Matrix {
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v = filler(100 * k + 10 * i + j);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

fn general_coefficient(seed: usize, dim: usize) -> Matrix {
    Matrix::from_fn(dim, dim, |i, j| filler(seed * 97 + i * dim + j))
}

/// Fixed triples of quadratic 3x3 matrix polynomials on `[0, 1]` used by the
/// identity residual checks.
pub fn identity_suite() -> Vec<[MatrixFunction; 3]> {
    let poly = |seed: usize| {
        MatrixFunction::polynomial(
            (0..3)
                .map(|k| general_coefficient(seed * 3 + k, 3))
                .collect(),
            1.0,
        )
        .expect("valid")
    };
    (0..3)
        .map(|s| [poly(3 * s), poly(3 * s + 1), poly(3 * s + 2)])
        .collect()
}

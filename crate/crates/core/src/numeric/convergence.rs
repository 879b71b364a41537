use serde::Serialize;

use super::magnus::{omega_terms, reference_solution};
use super::matrix::{matrix_exp, max_abs, Matrix};
use super::problems::Problem;
use super::quadrature::QuadratureRule;
use super::NumericError;

/// Midpoint steps of the coarsest oracle product; the reference uses four
/// times as many.
pub const ORACLE_BASE_STEPS: usize = 4096;

/// Errors below this are treated as rounding noise.
pub const EXACT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub steps: usize,
    pub error: f64,
}

/// Outcome of a convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub problem: String,
    pub horizon: f64,
    pub truncation: usize,
    pub rule: String,
    pub omega_evaluation: String,
    pub oracle: String,
    pub oracle_steps: usize,
    pub oracle_error_estimate: f64,
    /// Smallest measured error divided by the oracle error estimate.
    pub oracle_margin: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of log(error) against log(h); absent when exact.
    pub fitted_slope: Option<f64>,
    pub exact: bool,
}

impl Report {
    pub fn to_csv(&self) -> String {
        let slope = match self.fitted_slope {
            Some(s) => format!("{s:.6}"),
            None => "exact".to_string(),
        };
        let mut out = String::from("h,error,fitted_slope\n");
        for row in &self.rows {
            out.push_str(&format!("{:e},{:e},{}\n", row.h, row.error, slope));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

fn check_steps(horizon: f64, steps: &[f64]) -> Result<Vec<usize>, NumericError> {
    if steps.len() < 3 {
        return Err(NumericError::Steps(format!(
            "need at least 3 step sizes, got {}",
            steps.len()
        )));
    }
    let mut counts = Vec::with_capacity(steps.len());
    for &h in steps {
        if !(h.is_finite() && h > 0.0) {
            return Err(NumericError::Steps(format!("step {h} is not positive")));
        }
        let n = (horizon / h).round();
        if n < 1.0 || ((n * h - horizon) / horizon).abs() > 1e-9 {
            return Err(NumericError::Steps(format!(
                "step {h} does not divide the horizon {horizon}"
            )));
        }
        counts.push(n as usize);
    }
    let ratio = steps[1] / steps[0];
    if steps
        .windows(2)
        .any(|w| ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-6 || (w[1] / w[0] - 1.0).abs() < 1e-9)
    {
        return Err(NumericError::Steps(
            "step sizes must be geometrically spaced".into(),
        ));
    }
    Ok(counts)
}

/// Propagates `Y(0) = I` with `exp(Ω₁ + ⋯ + Ω_k)` on each step, every Ω term
/// computed afresh on the subinterval with `rule`, and compares `Y(T)` with
/// the extrapolated midpoint oracle in the max-entry norm.
pub fn convergence_study(
    problem: &Problem,
    truncation: usize,
    steps: &[f64],
    rule: &QuadratureRule,
) -> Result<Report, NumericError> {
    if !(1..=3).contains(&truncation) {
        return Err(NumericError::OutOfRange {
            what: "truncation",
            value: truncation,
            range: "1..=3",
        });
    }
    let a = &problem.a;
    let horizon = a.horizon();
    let counts = check_steps(horizon, steps)?;
    let oracle = reference_solution(a, horizon, ORACLE_BASE_STEPS)?;
    let dim = a.dim();
    let mut rows = Vec::with_capacity(steps.len());
    for (&h, &n) in steps.iter().zip(&counts) {
        let h_exact = horizon / n as f64;
        let mut y = Matrix::identity(dim, dim);
        for i in 0..n {
            let sub = a.shifted(h_exact * i as f64, h_exact)?;
            let mut omega = Matrix::zeros(dim, dim);
            for k in 1..=truncation {
                omega += omega_terms(&sub, h_exact, k, rule)?;
            }
            y = matrix_exp(&omega)? * y;
        }
        rows.push(ConvergenceRow {
            h,
            steps: n,
            error: max_abs(&(y - &oracle.value)),
        });
    }
    let exact = rows.iter().all(|r| r.error <= EXACT_THRESHOLD);
    let fitted_slope = if exact {
        None
    } else {
        let xs: Vec<f64> = rows.iter().map(|r| r.h.ln()).collect();
        let ys: Vec<f64> = rows
            .iter()
            .map(|r| r.error.max(f64::MIN_POSITIVE).ln())
            .collect();
        Some(least_squares_slope(&xs, &ys))
    };
    let min_error = rows.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
    let oracle_margin =
        (!exact && oracle.error_estimate > 0.0).then(|| min_error / oracle.error_estimate);
    Ok(Report {
        problem: problem.id.clone(),
        horizon,
        truncation,
        rule: rule.to_string(),
        omega_evaluation: format!("Omega_1..Omega_{truncation} by nested {rule} on every step"),
        oracle: "midpoint exponential product, Richardson extrapolated".into(),
        oracle_steps: oracle.steps,
        oracle_error_estimate: oracle.error_estimate,
        oracle_margin,
        rows,
        fitted_slope,
        exact,
    })
}

/// Least-squares fit of `values[i] ≈ Σ_j C_j ts[i]^j` entry by entry;
/// returns `C_0..C_degree`.
pub fn fit_polynomial(ts: &[f64], values: &[Matrix], degree: usize) -> Vec<Matrix> {
    assert_eq!(ts.len(), values.len(), "one value per sample time");
    assert!(ts.len() > degree, "need more samples than coefficients");
    let dim = values[0].nrows();
    let vandermonde = nalgebra::DMatrix::from_fn(ts.len(), degree + 1, |i, j| ts[i].powi(j as i32));
    let svd = vandermonde.svd(true, true);
    let mut coeffs = vec![Matrix::zeros(dim, dim); degree + 1];
    for r in 0..dim {
        for c in 0..dim {
            let rhs = nalgebra::DVector::from_iterator(ts.len(), values.iter().map(|v| v[(r, c)]));
            let sol = svd.solve(&rhs, 1e-14).expect("svd has both factors");
            for (j, coeff) in coeffs.iter_mut().enumerate() {
                coeff[(r, c)] = sol[j];
            }
        }
    }
    coeffs
}

use serde::Serialize;

use super::function::{cumulative_integral, MatrixFunction};
use super::matrix::{commutator, matrix_exp, max_abs, Matrix};
use super::quadrature::QuadratureRule;
use super::NumericError;
use crate::exact::{
    bernoulli, chen_strichartz_coeff, descent_number, enumerate_permutations, inv_factorial, to_f64,
};

fn check_time(t: f64) -> Result<(), NumericError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(NumericError::Horizon(t))
    }
}

fn integrate(f: &MatrixFunction, t: f64, rule: &QuadratureRule) -> Matrix {
    let mut acc = Matrix::zeros(f.dim(), f.dim());
    for (x, w) in rule.composite_points(0.0, t) {
        acc += f.eval(x) * w;
    }
    acc
}

/// The `k`-th Magnus term at time `t` (k = 1, 2, 3) from nested cumulative
/// integrals:
///
/// * `Ω₁ = ∫A`
/// * `Ω₂ = −½ ∫[∫A, A]`
/// * `Ω₃ = ¼ ∫[∫[∫A, A], A] + 1/12 ∫[∫A, [∫A, A]]`
pub fn omega_terms(
    a: &MatrixFunction,
    t: f64,
    k: usize,
    rule: &QuadratureRule,
) -> Result<Matrix, NumericError> {
    if !(1..=3).contains(&k) {
        return Err(NumericError::OutOfRange {
            what: "Magnus term index",
            value: k,
            range: "1..=3",
        });
    }
    check_time(t)?;
    let dim = a.dim();
    if t == 0.0 {
        return Ok(Matrix::zeros(dim, dim));
    }
    let a = a.restricted(t)?;
    let int_a = cumulative_integral(&a, rule);
    if k == 1 {
        return Ok(int_a.eval(t));
    }
    let inner = int_a.zip_with(&a, |x, y| commutator(&x, &y))?;
    if k == 2 {
        return Ok(integrate(&inner, t, rule) * -0.5);
    }
    let int_inner = cumulative_integral(&inner, rule);
    let first = int_inner.zip_with(&a, |x, y| commutator(&x, &y))?;
    let second = int_a.zip_with(&inner, |x, y| commutator(&x, &y))?;
    Ok(integrate(&first, t, rule) * 0.25 + integrate(&second, t, rule) * (1.0 / 12.0))
}

/// Right-hand side of the coupled system for `Ω₁..Ω_K`:
/// `Ω̇_k = Σ_m B_m/m! Σ_{r₁+⋯+r_m=k−1} ad_{Ω_{r₁}}⋯ad_{Ω_{r_m}}(A)`.
fn omega_rhs(omegas: &[Matrix], a: &Matrix, weights: &[f64]) -> Vec<Matrix> {
    let k_max = omegas.len();
    let dim = a.nrows();
    // nested[m][j]: sum of m-fold ad chains of total index j applied to A
    let mut nested = vec![vec![Matrix::zeros(dim, dim); k_max]; k_max];
    nested[0][0] = a.clone();
    for m in 1..k_max {
        for j in m..k_max {
            let mut acc = Matrix::zeros(dim, dim);
            for r in 1..=j - (m - 1) {
                acc += commutator(&omegas[r - 1], &nested[m - 1][j - r]);
            }
            nested[m][j] = acc;
        }
    }
    (0..k_max)
        .map(|k| {
            let mut out = Matrix::zeros(dim, dim);
            for (m, row) in nested.iter().enumerate().take(k + 1) {
                if weights[m] != 0.0 {
                    out += &row[k] * weights[m];
                }
            }
            out
        })
        .collect()
}

/// `Ω₁(t)..Ω_K(t)` by integrating the coupled Magnus system with classical
/// fourth-order Runge–Kutta on `n_steps` equal steps.
pub fn omega_recursion(
    a: &MatrixFunction,
    t: f64,
    k_max: usize,
    n_steps: usize,
) -> Result<Vec<Matrix>, NumericError> {
    if !(1..=5).contains(&k_max) {
        return Err(NumericError::OutOfRange {
            what: "Magnus order",
            value: k_max,
            range: "1..=5",
        });
    }
    if n_steps < 1 {
        return Err(NumericError::Steps("need at least one step".into()));
    }
    check_time(t)?;
    let weights: Vec<f64> = (0..k_max)
        .map(|m| to_f64(&(bernoulli(m) * inv_factorial(m))))
        .collect();
    let dim = a.dim();
    let h = t / n_steps as f64;
    let mut state = vec![Matrix::zeros(dim, dim); k_max];
    let axpy = |x: &[Matrix], y: &[Matrix], s: f64| -> Vec<Matrix> {
        x.iter().zip(y).map(|(u, v)| u + v * s).collect()
    };
    for i in 0..n_steps {
        let s = h * i as f64;
        let a0 = a.eval(s);
        let am = a.eval(s + 0.5 * h);
        let a1 = a.eval(s + h);
        let k1 = omega_rhs(&state, &a0, &weights);
        let k2 = omega_rhs(&axpy(&state, &k1, 0.5 * h), &am, &weights);
        let k3 = omega_rhs(&axpy(&state, &k2, 0.5 * h), &am, &weights);
        let k4 = omega_rhs(&axpy(&state, &k3, h), &a1, &weights);
        for j in 0..k_max {
            state[j] += (&k1[j] + &k2[j] * 2.0 + &k3[j] * 2.0 + &k4[j]) * (h / 6.0);
        }
    }
    Ok(state)
}

/// Product of `exp(A(midpoint) Δt)` over `n_steps` equal steps, later steps
/// multiplied on the left.
pub fn time_ordered_exp(
    a: &MatrixFunction,
    t: f64,
    n_steps: usize,
) -> Result<Matrix, NumericError> {
    if n_steps < 1 {
        return Err(NumericError::Steps("need at least one step".into()));
    }
    check_time(t)?;
    let h = t / n_steps as f64;
    let mut y = Matrix::identity(a.dim(), a.dim());
    for i in 0..n_steps {
        let mid = h * (i as f64 + 0.5);
        y = matrix_exp(&(a.eval(mid) * h))? * y;
    }
    Ok(y)
}

/// Reference solution of `Y' = AY, Y(0) = I`.
#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    #[serde(skip)]
    pub value: Matrix,
    /// Finest midpoint product resolution used.
    pub steps: usize,
    /// Difference between the two extrapolated values, bounding the error.
    pub error_estimate: f64,
}

/// The midpoint product has an error expansion in even powers of the step,
/// so `(4 Y(2n) − Y(n)) / 3` is fourth-order accurate. Two extrapolations at
/// `n` and `2n` give the returned value and its error estimate.
pub fn reference_solution(
    a: &MatrixFunction,
    t: f64,
    n_steps: usize,
) -> Result<Reference, NumericError> {
    let y1 = time_ordered_exp(a, t, n_steps)?;
    let y2 = time_ordered_exp(a, t, 2 * n_steps)?;
    let y4 = time_ordered_exp(a, t, 4 * n_steps)?;
    let coarse = (&y2 * 4.0 - &y1) / 3.0;
    let fine = (&y4 * 4.0 - &y2) / 3.0;
    Ok(Reference {
        error_estimate: max_abs(&(&fine - &coarse)),
        value: fine,
        steps: 4 * n_steps,
    })
}

/// Permutation-sum form of the `n`-th Magnus term (n = 1, 2, 3):
/// `Σ_σ c(n, d_σ) ∫_{t ≥ s₁ ≥ ⋯ ≥ s_n ≥ 0} [A(s_σ1), [⋯, A(s_σn)]]`.
///
/// The simplex is mapped onto the unit cube by `s₁ = t u₁`, `s_j = s_{j−1} u_j`
/// with Jacobian `t s₁ ⋯ s_{n−1}`, and the cube is integrated with `rule` in
/// every coordinate, so the cost is `(nodes · panels)^n` evaluations.
pub fn chen_strichartz_term(
    a: &MatrixFunction,
    t: f64,
    n: usize,
    rule: &QuadratureRule,
) -> Result<Matrix, NumericError> {
    if !(1..=3).contains(&n) {
        return Err(NumericError::OutOfRange {
            what: "permutation-sum order",
            value: n,
            range: "1..=3",
        });
    }
    check_time(t)?;
    let dim = a.dim();
    let perms: Vec<(Vec<usize>, f64)> = enumerate_permutations(n)
        .expect("n <= 3 is below the permutation cap")
        .into_iter()
        .map(|p| {
            let c = chen_strichartz_coeff(n, descent_number(&p)).expect("descents < n");
            (p.images().to_vec(), to_f64(&c))
        })
        .collect();
    let unit = rule.composite_points(0.0, 1.0);
    let mut out = Matrix::zeros(dim, dim);
    let mut idx = vec![0usize; n];
    loop {
        let mut s = Vec::with_capacity(n);
        let mut weight = 1.0;
        let mut upper = t;
        for &i in &idx {
            let (u, w) = unit[i];
            weight *= w * upper;
            upper *= u;
            s.push(upper);
        }
        let values: Vec<Matrix> = s.iter().map(|&x| a.eval(x)).collect();
        let mut integrand = Matrix::zeros(dim, dim);
        for (images, c) in &perms {
            let mut nested = values[images[n - 1] - 1].clone();
            for &j in images[..n - 1].iter().rev() {
                nested = commutator(&values[j - 1], &nested);
            }
            integrand += nested * *c;
        }
        out += integrand * weight;
        // odometer over the tensor mesh
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < unit.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

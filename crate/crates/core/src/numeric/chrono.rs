use super::function::{cumulative_integral, MatrixFunction};
use super::matrix::{commutator, max_abs};
use super::quadrature::QuadratureRule;
use super::NumericError;

/// `(X ▷ Y)(t) = [∫₀ᵗ X, Y(t)]`.
pub fn chronological_product(
    x: &MatrixFunction,
    y: &MatrixFunction,
    rule: &QuadratureRule,
) -> Result<MatrixFunction, NumericError> {
    cumulative_integral(x, rule).zip_with(y, |ix, yt| commutator(&ix, &yt))
}

/// `(X ≻ Y)(t) = (∫₀ᵗ X) Y(t)`.
pub fn left_half_shuffle(
    x: &MatrixFunction,
    y: &MatrixFunction,
    rule: &QuadratureRule,
) -> Result<MatrixFunction, NumericError> {
    cumulative_integral(x, rule).zip_with(y, |ix, yt| ix * yt)
}

/// `(X ≺ Y)(t) = X(t) (∫₀ᵗ Y)`.
pub fn right_half_shuffle(
    x: &MatrixFunction,
    y: &MatrixFunction,
    rule: &QuadratureRule,
) -> Result<MatrixFunction, NumericError> {
    x.zip_with(&cumulative_integral(y, rule), |xt, iy| xt * iy)
}

/// The pair `(X ≻ Y, X ≺ Y)`.
pub fn half_shuffles(
    x: &MatrixFunction,
    y: &MatrixFunction,
    rule: &QuadratureRule,
) -> Result<(MatrixFunction, MatrixFunction), NumericError> {
    Ok((
        left_half_shuffle(x, y, rule)?,
        right_half_shuffle(x, y, rule)?,
    ))
}

/// `X ∗ Y = X ≻ Y + X ≺ Y`.
pub fn shuffle_product(
    x: &MatrixFunction,
    y: &MatrixFunction,
    rule: &QuadratureRule,
) -> Result<MatrixFunction, NumericError> {
    let (l, r) = half_shuffles(x, y, rule)?;
    l.zip_with(&r, |a, b| a + b)
}

fn difference(a: &MatrixFunction, b: &MatrixFunction) -> Result<MatrixFunction, NumericError> {
    a.zip_with(b, |x, y| x - y)
}

/// Largest entry of `f` over `points + 1` equally spaced times in
/// `[0, horizon]`.
pub fn sup_norm_on_grid(f: &MatrixFunction, points: usize) -> f64 {
    let points = points.max(1);
    (0..=points)
        .map(|i| max_abs(&f.eval(f.horizon() * i as f64 / points as f64)))
        .fold(0.0, f64::max)
}

const GRID: usize = 32;

/// Sup norm of
/// `(X▷Y)▷Z − X▷(Y▷Z) − (Y▷X)▷Z + Y▷(X▷Z)`.
pub fn chronological_identity_residual(
    x: &MatrixFunction,
    y: &MatrixFunction,
    z: &MatrixFunction,
    rule: &QuadratureRule,
) -> Result<f64, NumericError> {
    let p = |a: &MatrixFunction, b: &MatrixFunction| chronological_product(a, b, rule);
    let lhs = difference(&p(&p(x, y)?, z)?, &p(x, &p(y, z)?)?)?;
    let rhs = difference(&p(&p(y, x)?, z)?, &p(y, &p(x, z)?)?)?;
    Ok(sup_norm_on_grid(&difference(&lhs, &rhs)?, GRID))
}

/// Sup norms of the three half-shuffle identities
///
/// * `(X≺Y)≺Z − X≺(Y∗Z)`
/// * `(X≻Y)≺Z − X≻(Y≺Z)`
/// * `(X∗Y)≻Z − X≻(Y≻Z)`
pub fn dendriform_residuals(
    x: &MatrixFunction,
    y: &MatrixFunction,
    z: &MatrixFunction,
    rule: &QuadratureRule,
) -> Result<[f64; 3], NumericError> {
    let succ = |a: &MatrixFunction, b: &MatrixFunction| left_half_shuffle(a, b, rule);
    let prec = |a: &MatrixFunction, b: &MatrixFunction| right_half_shuffle(a, b, rule);
    let star = |a: &MatrixFunction, b: &MatrixFunction| shuffle_product(a, b, rule);
    let first = difference(&prec(&prec(x, y)?, z)?, &prec(x, &star(y, z)?)?)?;
    let second = difference(&prec(&succ(x, y)?, z)?, &succ(x, &prec(y, z)?)?)?;
    let third = difference(&succ(&star(x, y)?, z)?, &succ(x, &succ(y, z)?)?)?;
    Ok([
        sup_norm_on_grid(&first, GRID),
        sup_norm_on_grid(&second, GRID),
        sup_norm_on_grid(&third, GRID),
    ])
}

#[cfg(test)]
mod tests {
    use super::super::{elementary, Matrix};
    use super::*;

    fn xty() -> MatrixFunction {
        MatrixFunction::polynomial(vec![elementary(2, 0, 1), elementary(2, 1, 0)], 1.0).unwrap()
    }

    #[test]
    fn constants() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.5]);
        let fa = MatrixFunction::constant(a.clone(), 2.0).unwrap();
        let fb = MatrixFunction::constant(b.clone(), 2.0).unwrap();
        let rule = QuadratureRule::default();
        let p = chronological_product(&fa, &fb, &rule).unwrap();
        let (succ, _) = half_shuffles(&fa, &fb, &rule).unwrap();
        for t in [0.25, 1.0, 2.0] {
            assert!(max_abs(&(p.eval(t) - commutator(&a, &b) * t)) < 1e-13);
            assert!(max_abs(&(succ.eval(t) - &a * &b * t)) < 1e-13);
        }
    }

    #[test]
    fn self_product_nonzero() {
        let a = xty();
        let p = chronological_product(&a, &a, &QuadratureRule::default()).unwrap();
        // [tX + t²/2 Y, X + tY] = t²/2 [X, Y]
        let xy = commutator(&elementary(2, 0, 1), &elementary(2, 1, 0));
        assert!(max_abs(&(p.eval(1.0) - xy * 0.5)) < 1e-14);
    }

    #[test]
    fn chronological_from_half_shuffles() {
        let a = xty();
        let b = MatrixFunction::new(2, 1.0, |t| {
            Matrix::from_row_slice(2, 2, &[t, 1.0 - t, t * t, 0.5])
        })
        .unwrap();
        let rule = QuadratureRule::default();
        let p = chronological_product(&a, &b, &rule).unwrap();
        let via = left_half_shuffle(&a, &b, &rule)
            .unwrap()
            .zip_with(&right_half_shuffle(&b, &a, &rule).unwrap(), |u, v| u - v)
            .unwrap();
        assert!(sup_norm_on_grid(&difference(&p, &via).unwrap(), 16) < 1e-12);
    }

    #[test]
    fn identities_hold_on_xty() {
        let a = xty();
        let b = a.map(|m| m.transpose());
        let rule = QuadratureRule::default();
        assert!(chronological_identity_residual(&a, &b, &a, &rule).unwrap() < 1e-10);
        for r in dendriform_residuals(&a, &b, &a, &rule).unwrap() {
            assert!(r < 1e-10);
        }
    }
}

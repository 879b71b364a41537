//! Named identity suites. Exact suites compare rational elements and report
//! the largest surviving coefficient; numeric suites report the worst
//! residual against a tolerance.

use num_traits::Signed;
use serde::Serialize;

use crate::engine::{Algebra, Element, Fault, Mode, Monomial, DEFAULT_ORDER};
use crate::exact::{rational, to_f64};
use crate::numeric::{
    chen_strichartz_term, chronological_identity_residual, commutator, convergence_study,
    dendriform_residuals, fit_polynomial, identity_suite, max_abs, omega_recursion, omega_terms,
    time_ordered_exp, Matrix, Problem, QuadratureRule,
};
use crate::tree::{enumerate_trees, PlanarTree};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub scope: String,
    pub tolerance: String,
    pub worst_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Truncation order for the order-dependent exact suites.
    pub order: Option<usize>,
    /// Case-insensitive substring of the suite names to run.
    pub only: Option<String>,
    pub fault: Option<Fault>,
}

struct Ctx {
    order: usize,
    fault: Option<Fault>,
}

impl Ctx {
    fn algebra(&self, mode: Mode, order: usize) -> Algebra {
        let a = Algebra::new(mode, order).expect("suite orders are in range");
        match self.fault {
            Some(f) => a.with_fault(f),
            None => a,
        }
    }

    fn post(&self, order: usize) -> Algebra {
        self.algebra(Mode::PostLie, order)
    }
}

struct Check {
    scope: String,
    tolerance: String,
    residual: f64,
    passed: bool,
}

fn exact(scope: impl Into<String>, residual: f64) -> Check {
    Check {
        scope: scope.into(),
        tolerance: "exact".into(),
        residual,
        passed: residual == 0.0,
    }
}

fn within(scope: impl Into<String>, residual: f64, tol: f64) -> Check {
    Check {
        scope: scope.into(),
        tolerance: format!("{tol:e}"),
        residual,
        passed: residual.is_finite() && residual <= tol,
    }
}

/// Largest absolute coefficient, as a double.
fn size(e: &Element) -> f64 {
    e.terms().map(|(_, c)| to_f64(&c.abs())).fold(0.0, f64::max)
}

fn diff_size(a: &Element, b: &Element) -> f64 {
    size(&(a - b))
}

type SuiteFn = fn(&Ctx) -> Check;

const SUITES: &[(&str, SuiteFn)] = &[
    ("PL1 derivation", pl1),
    ("PL2 bracket action", pl2),
    ("GL associativity", gl_associativity),
    ("Theta set-partition expansion", theta_partitions),
    ("Theta inverse round trip", theta_round_trip),
    ("Chi coefficients", chi_coefficients),
    ("Chi recursion vs log-exp", chi_recursion),
    ("Chi and Phi inverse", chi_phi_inverse),
    ("BCH concatenation coefficients", bch_coefficients),
    ("BCH degree-4 matrix substitution", bch_matrix),
    ("BCH group morphism", bch_group_morphism),
    ("Star product consistency", star_consistency),
    ("Pre-Lie degeneration", prelie_degeneration),
    ("Magnus second term closed form", omega_two_closed_form),
    (
        "Magnus recursion vs nested integrals",
        omega_recursion_suite,
    ),
    ("Chen-Strichartz permutation sum", chen_strichartz_suite),
    ("Liouville determinant", liouville),
    ("Chronological identity", chronological),
    ("Dendriform identities", dendriform),
    ("Magnus convergence slope", convergence_slopes),
    ("Pre-Lie bridge t^3 coefficient", bridge),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs every selected suite in a fixed order.
pub fn run_verification(opts: &VerifyOptions) -> Vec<SuiteOutcome> {
    let ctx = Ctx {
        order: opts.order.unwrap_or(DEFAULT_ORDER),
        fault: opts.fault,
    };
    let filter = opts.only.as_ref().map(|s| s.to_lowercase());
    SUITES
        .iter()
        .filter(|(name, _)| {
            filter
                .as_ref()
                .is_none_or(|f| name.to_lowercase().contains(f.as_str()))
        })
        .map(|(name, run)| {
            let c = run(&ctx);
            SuiteOutcome {
                name,
                scope: c.scope,
                tolerance: c.tolerance,
                worst_residual: c.residual,
                passed: c.passed,
            }
        })
        .collect()
}

pub fn render_text(outcomes: &[SuiteOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{}\t{}\t{}\ttol {}\tworst {:.3e}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.scope,
            o.tolerance,
            o.worst_residual
        ));
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    if failed.is_empty() {
        out.push_str(&format!("all {} suites passed\n", outcomes.len()));
    } else {
        out.push_str(&format!("FAILED: {}\n", failed.join(", ")));
    }
    out
}

// ---- exact suites ----

fn small_primitives(a: &Algebra) -> Vec<Element> {
    vec![a.generator(), a.tree(PlanarTree::chain(2))]
}

fn pl1(ctx: &Ctx) -> Check {
    let a = ctx.post(6);
    let basis = small_primitives(&a);
    let mut worst: f64 = 0.0;
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let lhs = a.post_lie_prod(x, &a.hbracket(y, z));
                let rhs =
                    &a.hbracket(&a.post_lie_prod(x, y), z) + &a.hbracket(y, &a.post_lie_prod(x, z));
                worst = worst.max(diff_size(&lhs, &rhs));
            }
        }
    }
    exact("x,y,z in {[], [[]]}, order 6", worst)
}

fn pl2(ctx: &Ctx) -> Check {
    let a = ctx.post(6);
    let basis = small_primitives(&a);
    let assoc = |x: &Element, y: &Element, z: &Element| {
        &a.post_lie_prod(x, &a.post_lie_prod(y, z)) - &a.post_lie_prod(&a.post_lie_prod(x, y), z)
    };
    let mut worst: f64 = 0.0;
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let lhs = a.post_lie_prod(&a.hbracket(x, y), z);
                let rhs = &assoc(x, y, z) - &assoc(y, x, z);
                worst = worst.max(diff_size(&lhs, &rhs));
            }
        }
    }
    exact("x,y,z in {[], [[]]}, order 6", worst)
}

/// Every word of planar trees with total degree `1..=max_degree`.
fn forests(a: &Algebra, max_degree: usize) -> Vec<Monomial> {
    let mut by_degree: Vec<Vec<Vec<PlanarTree>>> = vec![vec![Vec::new()]];
    for d in 1..=max_degree {
        let mut words = Vec::new();
        for first in 1..=d {
            for t in enumerate_trees(first).expect("small degree") {
                for rest in &by_degree[d - first] {
                    let mut w = vec![t.clone()];
                    w.extend(rest.iter().cloned());
                    words.push(w);
                }
            }
        }
        by_degree.push(words);
    }
    let mut out: Vec<Monomial> = by_degree
        .into_iter()
        .skip(1)
        .flatten()
        .map(|w| a.monomial(w))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn gl_associativity(ctx: &Ctx) -> Check {
    let order = 5;
    let a = ctx.post(order);
    let words = forests(&a, 3);
    let el = |m: &Monomial| a.word(m.word().to_vec());
    let mut worst: f64 = 0.0;
    for x in &words {
        for y in &words {
            for z in &words {
                if x.degree() + y.degree() + z.degree() > order {
                    continue;
                }
                let (x, y, z) = (el(x), el(y), el(z));
                let l = a.gl_mul(&a.gl_mul(&x, &y), &z);
                let r = a.gl_mul(&x, &a.gl_mul(&y, &z));
                worst = worst.max(diff_size(&l, &r));
            }
        }
    }
    exact("all monomial triples of total degree <= 5", worst)
}

fn theta_partitions(ctx: &Ctx) -> Check {
    let a = ctx.post(6);
    let mut worst: f64 = 0.0;
    for m in forests(&a, 6) {
        let w = a.word(m.word().to_vec());
        let by_gl = a.theta(&w);
        let by_partitions = a
            .theta_via_partitions(&m)
            .expect("length <= 6 is below the partition cap");
        worst = worst.max(diff_size(&by_gl, &by_partitions));
    }
    exact("all words of degree <= 6 (length <= 6), order 6", worst)
}

fn theta_round_trip(ctx: &Ctx) -> Check {
    let a = ctx.post(5);
    let mut worst: f64 = 0.0;
    for m in forests(&a, 5) {
        let w = a.word(m.word().to_vec());
        worst = worst.max(diff_size(&a.theta_inverse(&a.theta(&w)), &w));
    }
    exact("all words of degree <= 5", worst)
}

fn chi_coefficients(ctx: &Ctx) -> Check {
    let a = ctx.post(4);
    let x = a.generator();
    let chi = match a.post_lie_magnus(&x) {
        Ok(c) => c,
        Err(_) => return exact("order 4", f64::INFINITY),
    };
    let tri = |u: &Element, v: &Element| a.post_lie_prod(u, v);
    let xx = tri(&x, &x);
    let xx_x = tri(&xx, &x);
    let x_xx = tri(&x, &xx);
    // product form through order 3
    let third = &(&(&(&x - &xx.scale(&rational(1, 2))) + &xx_x.scale(&rational(1, 4)))
        + &x_xx.scale(&rational(1, 12)))
        + &a.hbracket(&xx, &x).scale(&rational(1, 12));
    let mut worst = diff_size(&chi.truncated(3), &third);
    // product form of the degree-4 part
    let four = [
        tri(&xx_x, &x),
        tri(&x_xx, &x),
        tri(&xx, &xx).scale(&rational(2, 1)),
        tri(&x, &xx_x),
        tri(&x, &x_xx),
        -a.gbracket(&x, &x_xx),
        -a.gbracket(&x, &xx_x),
    ]
    .iter()
    .fold(a.zero(), |acc, t| &acc + t)
    .scale(&rational(-1, 24));
    worst = worst.max(diff_size(&chi.degree_part(4), &four));
    // tree form
    let trees = a
        .parse_element(
            "[] - 1/2*[[]] + 1/3*[[[]]] + 1/12*[[][]] + 1/12*[[]] [] - 1/12*[] [[]] \
             - 1/4*[[[[]]]] - 1/12*[[[][]]] - 1/12*[[[]][]] \
             + 1/24*[] [[][]] - 1/24*[[][]] [] + 1/12*[] [[[]]] - 1/12*[[[]]] []",
        )
        .expect("literal parses");
    worst = worst.max(diff_size(&chi, &trees));
    exact(
        "chi of the generator through order 4, tree and product forms",
        worst,
    )
}

fn chi_recursion(ctx: &Ctx) -> Check {
    let a = ctx.post(5);
    let x = a.generator();
    let worst = match (a.post_lie_magnus_recursive(&x), a.post_lie_magnus(&x)) {
        (Ok(r), Ok(l)) => diff_size(&r, &l),
        _ => f64::INFINITY,
    };
    exact("generator, order 5", worst)
}

fn chi_phi_inverse(ctx: &Ctx) -> Check {
    let a = ctx.post(ctx.order);
    let x = a.generator();
    let worst = (|| -> Result<f64, crate::engine::AlgebraError> {
        let l = a.post_lie_magnus(&a.inverse_magnus(&x)?)?;
        let r = a.inverse_magnus(&a.post_lie_magnus(&x)?)?;
        Ok(diff_size(&l, &x).max(diff_size(&r, &x)))
    })()
    .unwrap_or(f64::INFINITY);
    exact(format!("generator, order {}", ctx.order), worst)
}

fn bch_pair(a: &Algebra) -> (Element, Element) {
    (a.generator(), a.tree(PlanarTree::chain(2)))
}

fn bch_coefficients(ctx: &Ctx) -> Check {
    // word-length <= 3 terms; at order 5 no other term survives
    let a = ctx.post(5);
    let (p, q) = bch_pair(&a);
    let pq = a.hbracket(&p, &q);
    let expected = &(&(&p + &q) + &pq.scale(&rational(1, 2)))
        + &(&a.hbracket(&p, &pq) + &a.hbracket(&q, &a.hbracket(&q, &p))).scale(&rational(1, 12));
    let worst = a
        .bch_h(&p, &q)
        .map(|b| diff_size(&b, &expected))
        .unwrap_or(f64::INFINITY);
    exact("a = [], b = [[]], order 5", worst)
}

/// Coefficients `s^0..s^degree` of a matrix power series.
type Series = Vec<Matrix>;

fn series_mul(a: &Series, b: &Series) -> Series {
    let n = a.len();
    let dim = a[0].nrows();
    let mut out = vec![Matrix::zeros(dim, dim); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

fn series_exp(m: &Matrix, degree: usize) -> Series {
    let mut out = vec![Matrix::identity(m.nrows(), m.nrows())];
    for k in 1..=degree {
        let next = &out[k - 1] * m / k as f64;
        out.push(next);
    }
    out
}

fn series_log(g: &Series) -> Series {
    let n = g.len();
    let dim = g[0].nrows();
    let mut h = g.clone();
    h[0] = Matrix::zeros(dim, dim);
    let mut out = vec![Matrix::zeros(dim, dim); n];
    let mut power = h.clone();
    for k in 1..n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p * (sign / k as f64);
        }
        power = series_mul(&power, &h);
    }
    out
}

fn substitute(e: &Element, letters: &[(PlanarTree, Matrix)]) -> Matrix {
    let dim = letters[0].1.nrows();
    let mut out = Matrix::zeros(dim, dim);
    for (m, c) in e.terms() {
        let mut prod = Matrix::identity(dim, dim);
        for t in m.word() {
            let (_, mat) = letters
                .iter()
                .find(|(l, _)| l == t)
                .expect("letter is substituted");
            prod *= mat;
        }
        out += prod * to_f64(c);
    }
    out
}

fn fixed_matrix(seed: usize, dim: usize) -> Matrix {
    Matrix::from_fn(dim, dim, |i, j| {
        ((seed * 31 + i * dim + j) as f64 * 7.31 + 0.5).sin()
    })
}

fn bch_matrix(ctx: &Ctx) -> Check {
    // all words of length 4 in a = [] and b = [[]] have degree <= 8
    let a = ctx.post(8);
    let (p, q) = bch_pair(&a);
    let Ok(bch) = a.bch_h(&p, &q) else {
        return within("word length 4", f64::INFINITY, 1e-10);
    };
    let mut length_four = a.zero();
    for (m, c) in bch.terms() {
        if m.len() == 4 {
            length_four.add_term(m.clone(), c.clone());
        }
    }
    let mut worst: f64 = 0.0;
    for seed in 0..3 {
        let (pm, qm) = (fixed_matrix(2 * seed, 3), fixed_matrix(2 * seed + 1, 3));
        let symbolic = substitute(
            &length_four,
            &[
                (PlanarTree::vertex(), pm.clone()),
                (PlanarTree::chain(2), qm.clone()),
            ],
        );
        let z = series_log(&series_mul(&series_exp(&pm, 4), &series_exp(&qm, 4)));
        worst = worst.max(max_abs(&(symbolic - &z[4])));
    }
    within("word-length-4 part on three 3x3 matrix pairs", worst, 1e-10)
}

fn bch_group_morphism(ctx: &Ctx) -> Check {
    let a = ctx.post(4);
    let elems = [
        a.generator(),
        a.tree(PlanarTree::chain(2)),
        a.parse_element("[] - 2*[[]] + 1/3*[[][]]")
            .expect("literal parses"),
    ];
    let mut worst: f64 = 0.0;
    for x in &elems {
        for y in &elems {
            let r = (|| -> Result<f64, crate::engine::AlgebraError> {
                let chi_x = a.post_lie_magnus(x)?;
                let lhs = a.post_lie_magnus(&a.bch_h(x, &a.upsilon(&chi_x, y))?)?;
                let rhs = a.bch_g(&chi_x, &a.post_lie_magnus(y)?)?;
                Ok(diff_size(&lhs, &rhs))
            })();
            worst = worst.max(r.unwrap_or(f64::INFINITY));
        }
    }
    exact(
        "chi(a bch_h Upsilon(b)) = chi(a) bch_g chi(b), order 4",
        worst,
    )
}

fn star_consistency(ctx: &Ctx) -> Check {
    let a = ctx.post(4);
    let elems = [
        a.generator(),
        a.tree(PlanarTree::chain(2)),
        a.parse_element("[] - [[]] + [] [[]] - [[]] []")
            .expect("literal parses"),
    ];
    let mut worst: f64 = 0.0;
    for x in &elems {
        for y in &elems {
            let r = (|| -> Result<f64, crate::engine::AlgebraError> {
                let chi_x = a.post_lie_magnus(x)?;
                let via_action = a.bch_h(x, &a.upsilon(&chi_x, y))?;
                Ok(diff_size(&a.star_group(x, y)?, &via_action))
            })();
            worst = worst.max(r.unwrap_or(f64::INFINITY));
        }
    }
    exact("log(exp a * exp b) = a bch_h Upsilon(b), order 4", worst)
}

fn prelie_degeneration(ctx: &Ctx) -> Check {
    let order = ctx.order;
    let a = ctx.algebra(Mode::PreLie, order);
    let p = ctx.post(order);
    let x = a.generator();
    let worst = (|| -> Result<f64, crate::engine::AlgebraError> {
        let chi = a.post_lie_magnus(&x)?;
        let phi = a.inverse_magnus(&x)?;
        let mut w = diff_size(&chi, &a.prelie_magnus(&x)?);
        w = w.max(diff_size(&phi, &a.cumulant_series(&x)?));
        w = w.max(diff_size(&a.post_lie_magnus(&phi)?, &x));
        w = w.max(diff_size(
            &a.project(&p.post_lie_magnus(&p.generator())?),
            &chi,
        ));
        Ok(w)
    })()
    .unwrap_or(f64::INFINITY);
    exact(
        format!("fixed point, cumulants, projection, order {order}"),
        worst,
    )
}

// ---- numeric suites ----

fn omega_two_closed_form(_: &Ctx) -> Check {
    let p = Problem::xty();
    let rule = QuadratureRule::default();
    let xy = commutator(&p.a.eval(0.0), &(p.a.eval(1.0) - p.a.eval(0.0)));
    let residual = omega_terms(&p.a, 1.0, 2, &rule)
        .map(|o| max_abs(&(o + xy / 12.0)))
        .unwrap_or(f64::INFINITY);
    within("A = E12 + t E21, t = 1", residual, 1e-6)
}

fn omega_recursion_suite(_: &Ctx) -> Check {
    let rule = QuadratureRule::default();
    let mut worst: f64 = 0.0;
    for p in [Problem::xty(), Problem::skew3()] {
        let r = (|| -> Result<f64, crate::numeric::NumericError> {
            let rec = omega_recursion(&p.a, 1.0, 3, 200)?;
            let mut w: f64 = 0.0;
            for k in 1..=3 {
                w = w.max(max_abs(&(&rec[k - 1] - omega_terms(&p.a, 1.0, k, &rule)?)));
            }
            Ok(w)
        })();
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    within("k <= 3, 200 RK4 steps, xty and skew3", worst, 1e-7)
}

fn chen_strichartz_suite(_: &Ctx) -> Check {
    let rule = QuadratureRule::default();
    let cube = QuadratureRule::gauss_legendre(6, 2);
    let mut worst: f64 = 0.0;
    for p in [Problem::xty(), Problem::skew3()] {
        for n in 2..=3 {
            let r = chen_strichartz_term(&p.a, 1.0, n, &cube)
                .and_then(|cs| Ok(max_abs(&(cs - omega_terms(&p.a, 1.0, n, &rule)?))));
            worst = worst.max(r.unwrap_or(f64::INFINITY));
        }
    }
    within("n = 2, 3 against nested integrals", worst, 1e-5)
}

fn liouville(_: &Ctx) -> Check {
    let rule = QuadratureRule::default();
    let mut worst: f64 = 0.0;
    for p in [Problem::xty(), Problem::commuting(), Problem::skew3()] {
        let t = p.horizon();
        let a = p.a.clone();
        let expected = rule
            .integrate_scalar(0.0, t, move |s| a.eval(s).trace())
            .exp();
        let r = time_ordered_exp(&p.a, t, 1000).map(|y| (y.determinant() - expected).abs());
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    within("det Y(T) = exp(int tr A), all named problems", worst, 1e-8)
}

fn chronological(_: &Ctx) -> Check {
    let rule = QuadratureRule::default();
    let mut worst: f64 = 0.0;
    for [x, y, z] in identity_suite() {
        let r = chronological_identity_residual(&x, &y, &z, &rule);
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    within("fixed quadratic 3x3 suite, sup norm", worst, 1e-8)
}

fn dendriform(_: &Ctx) -> Check {
    let rule = QuadratureRule::default();
    let mut worst: f64 = 0.0;
    for [x, y, z] in identity_suite() {
        let r =
            dendriform_residuals(&x, &y, &z, &rule).map(|rs| rs.into_iter().fold(0.0, f64::max));
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    within(
        "all three identities, fixed quadratic 3x3 suite",
        worst,
        1e-8,
    )
}

fn convergence_slopes(_: &Ctx) -> Check {
    let steps = [0.1, 0.05, 0.025, 0.0125];
    let rule = QuadratureRule::gauss_legendre(4, 1);
    let mut worst: f64 = 0.0;
    for (k, want) in [(1, 2.0), (3, 4.0)] {
        let r = convergence_study(&Problem::xty(), k, &steps, &rule);
        let dev = match r {
            Ok(rep) => rep.fitted_slope.map_or(f64::INFINITY, |s| (s - want).abs()),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    within("xty, k = 1 slope 2 and k = 3 slope 4", worst, 0.3)
}

// Omega_1..Omega_5 of X + tY are polynomials of degree <= 10
const BRIDGE_DEGREE: usize = 10;
const BRIDGE_SAMPLES: usize = 24;

fn bridge(ctx: &Ctx) -> Check {
    // The pre-Lie coefficient of x▷x in chi, applied to the chronological
    // product, predicts the t^3 term of Omega for A = X + tY.
    let a = ctx.algebra(Mode::PreLie, 2);
    let x = a.generator();
    let c = a
        .post_lie_magnus(&x)
        .map(|chi| to_f64(&chi.coeff(&a.monomial(vec![PlanarTree::chain(2)]))))
        .unwrap_or(f64::NAN);
    let p = Problem::xty();
    let xy = commutator(&p.a.eval(0.0), &(p.a.eval(1.0) - p.a.eval(0.0)));
    // ∫₀ᵗ [∫A, A] = ∫₀ᵗ s²/2 [X,Y] ds = t³/6 [X,Y]
    let predicted = xy * (c / 6.0);
    let ts: Vec<f64> = (1..=BRIDGE_SAMPLES)
        .map(|i| i as f64 / BRIDGE_SAMPLES as f64)
        .collect();
    let omegas: Result<Vec<Matrix>, _> = ts
        .iter()
        .map(|&t| {
            omega_recursion(&p.a, t, 5, 200)
                .map(|os| os.into_iter().fold(Matrix::zeros(2, 2), |acc, o| acc + o))
        })
        .collect();
    let residual = match omegas {
        Ok(vals) => {
            let fit = fit_polynomial(&ts, &vals, BRIDGE_DEGREE);
            max_abs(&(&fit[3] - predicted))
        }
        Err(_) => f64::INFINITY,
    };
    within(
        format!("degree-{BRIDGE_DEGREE} fit of Omega_1..Omega_5 on xty"),
        residual,
        1e-6,
    )
}

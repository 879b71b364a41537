//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Oracles here are written independently of the library
//! algorithms they check.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use postlie_magnus::cli::verify::{run_verification, VerifyOptions};
use postlie_magnus::exact::{rational, to_f64};
use postlie_magnus::numeric::{
    chen_strichartz_term, chronological_identity_residual, convergence_study, dendriform_residuals,
    identity_suite, matrix_exp, omega_terms, reference_solution, Problem, QuadratureRule,
};
use postlie_magnus::{Algebra, Element, PlanarTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Matrix = DMatrix<f64>;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn is_equal(a: &Element, b: &Element) -> bool {
    (a - b).is_zero()
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn comm(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

// ---- 1 ----

fn chi_reproduction() -> Outcome {
    let a = Algebra::post_lie(4).unwrap();
    let x = a.generator();
    let chi = a.post_lie_magnus(&x).unwrap();
    let t = |u: &Element, v: &Element| a.post_lie_prod(u, v);
    let xx = t(&x, &x);
    let xx_x = t(&xx, &x);
    let x_xx = t(&x, &xx);

    let third = x.clone() - xx.scale(&rational(1, 2))
        + xx_x.scale(&rational(1, 4))
        + x_xx.scale(&rational(1, 12))
        + a.hbracket(&xx, &x).scale(&rational(1, 12));
    let product_form = is_equal(&chi.truncated(3), &third);

    let tree_form = a
        .parse_element(
            "[] - 1/2*[[]] + 1/3*[[[]]] + 1/12*[[][]] + 1/12*[[]] [] - 1/12*[] [[]] \
             - 1/4*[[[[]]]] - 1/12*[[[][]]] - 1/12*[[[]][]] \
             + 1/24*[] [[][]] - 1/24*[[][]] [] + 1/12*[] [[[]]] - 1/12*[[[]]] []",
        )
        .unwrap();
    let trees = is_equal(&chi, &tree_form);

    // the displayed degree-4 bracket expansion, with g-brackets
    let four = [
        t(&xx_x, &x),
        t(&x_xx, &x),
        t(&xx, &xx).scale(&rational(2, 1)),
        t(&x, &xx_x),
        t(&x, &x_xx),
        -a.gbracket(&x, &x_xx),
        -a.gbracket(&x, &xx_x),
    ]
    .iter()
    .fold(a.zero(), |acc, e| &acc + e)
    .scale(&rational(-1, 24));
    let degree_four = is_equal(&chi.degree_part(4), &four);

    let coeff = |word: &str| {
        let m = a.monomial(a.parse_word(word).unwrap());
        chi.coeff(&m).to_string()
    };
    let signs = format!(
        "chi4 signs: [[[][]]] {}, [[[]][]] {}, [] [[][]] {}, [] [[[]]] {}",
        coeff("[[[][]]]"),
        coeff("[[[]][]]"),
        coeff("[] [[][]]"),
        coeff("[] [[[]]]"),
    );
    outcome(
        product_form && trees && degree_four,
        format!(
            "order-3 product form {}, tree display {}, degree-4 brackets {}; {signs}",
            ok(product_form),
            ok(trees),
            ok(degree_four)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

// ---- 2 ----

fn recursion_equivalence() -> Outcome {
    let a = Algebra::post_lie(5).unwrap();
    let x = a.generator();
    let rec = a.post_lie_magnus_recursive(&x).unwrap();
    let log_exp = a.post_lie_magnus(&x).unwrap();
    let same = is_equal(&rec, &log_exp);
    outcome(same, format!("order 5, {} terms", log_exp.len()))
}

// ---- 3 ----

/// Unordered rooted tree with canonically sorted children.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Tree(Vec<Tree>);

impl Tree {
    fn encode(&self) -> String {
        let mut s = String::from("[");
        for c in &self.0 {
            s.push_str(&c.encode());
        }
        s.push(']');
        s
    }

    /// Every way of attaching `scion` as a new child of a vertex.
    fn grafts(&self, scion: &Tree) -> Vec<Tree> {
        let mut out = Vec::new();
        let mut here = self.0.clone();
        here.push(scion.clone());
        here.sort();
        out.push(Tree(here));
        for (i, c) in self.0.iter().enumerate() {
            for g in c.grafts(scion) {
                let mut kids = self.0.clone();
                kids[i] = g;
                kids.sort();
                out.push(Tree(kids));
            }
        }
        out
    }
}

/// `Σ_{n ≤ order} φ_n(•)/n!` with `φ_1 = •`, `φ_{n+1} = • ▷ φ_n`, as
/// `(encoding, coefficient)` pairs.
fn cumulants_by_grafting(order: usize) -> BTreeMap<String, (i64, i64)> {
    let dot = Tree(vec![]);
    let mut layer: BTreeMap<Tree, i64> = BTreeMap::from([(dot.clone(), 1)]);
    let mut out = BTreeMap::new();
    let mut fact = 1i64;
    for n in 1..=order {
        fact *= n as i64;
        for (t, c) in &layer {
            out.insert(t.encode(), (*c, fact));
        }
        let mut next = BTreeMap::new();
        for (t, c) in &layer {
            for g in t.grafts(&dot) {
                *next.entry(g).or_insert(0) += c;
            }
        }
        layer = next;
    }
    out
}

fn prelie_degeneration() -> Outcome {
    let a = Algebra::pre_lie(6).unwrap();
    let x = a.generator();
    let chi = a.post_lie_magnus(&x).unwrap();
    let xx = a.post_lie_prod(&x, &x);
    let third = x.clone() - xx.scale(&rational(1, 2))
        + a.post_lie_prod(&xx, &x).scale(&rational(1, 4))
        + a.post_lie_prod(&x, &xx).scale(&rational(1, 12));
    let chi_ok = is_equal(&chi.truncated(3), &third.truncated(3));

    let phi = a.inverse_magnus(&x).unwrap();
    let expected = cumulants_by_grafting(6)
        .into_iter()
        .map(|(enc, (num, den))| {
            let t = PlanarTree::parse(&enc).unwrap();
            (vec![t], rational(num, den))
        });
    let phi_ok = is_equal(&phi, &a.from_terms(expected));

    let round_trip = is_equal(&a.post_lie_magnus(&phi).unwrap(), &x)
        && is_equal(&a.inverse_magnus(&chi).unwrap(), &x);
    outcome(
        chi_ok && phi_ok && round_trip,
        format!(
            "chi order 3 {}, Phi vs grafted cumulants order 6 {}, chi(Phi) = Phi(chi) = id {}",
            ok(chi_ok),
            ok(phi_ok),
            ok(round_trip)
        ),
    )
}

// ---- 4 ----

/// Coefficients in `s` of a matrix power series, truncated.
fn ps_mul(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    let n = a.len();
    let d = a[0].nrows();
    let mut out = vec![Matrix::zeros(d, d); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

fn ps_exp(m: &Matrix, degree: usize) -> Vec<Matrix> {
    let mut out = vec![Matrix::identity(m.nrows(), m.nrows())];
    for k in 1..=degree {
        let next = &out[k - 1] * m / k as f64;
        out.push(next);
    }
    out
}

fn ps_log(g: &[Matrix]) -> Vec<Matrix> {
    let d = g[0].nrows();
    let mut h = g.to_vec();
    h[0] = Matrix::zeros(d, d);
    let mut out = vec![Matrix::zeros(d, d); g.len()];
    let mut power = h.clone();
    for k in 1..g.len() {
        let c = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p * c;
        }
        power = ps_mul(&power, &h);
    }
    out
}

fn bch_reproduction() -> Outcome {
    let a = Algebra::post_lie(8).unwrap();
    let p = a.generator();
    let q = a.tree(PlanarTree::chain(2));
    let bch = a.bch_h(&p, &q).unwrap();

    let pq = a.hbracket(&p, &q);
    let third = p.clone()
        + q.clone()
        + pq.scale(&rational(1, 2))
        + (a.hbracket(&p, &pq) + a.hbracket(&q, &a.hbracket(&q, &p))).scale(&rational(1, 12));
    let mut up_to_three = a.zero();
    let mut length_four = a.zero();
    for (m, c) in bch.terms() {
        let part = a.term(m.word().to_vec(), c.clone());
        match m.len() {
            0..=3 => up_to_three = &up_to_three + &part,
            4 => length_four = &length_four + &part,
            _ => {}
        }
    }
    let coeff_ok = is_equal(&up_to_three, &third);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let pm = Matrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
        let qm = Matrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
        let oracle = &ps_log(&ps_mul(&ps_exp(&pm, 4), &ps_exp(&qm, 4)))[4];
        let mut symbolic = Matrix::zeros(4, 4);
        for (m, c) in length_four.terms() {
            let prod = m.word().iter().fold(Matrix::identity(4, 4), |acc, t| {
                acc * if t.degree() == 1 { &pm } else { &qm }
            });
            symbolic += prod * to_f64(c);
        }
        worst = worst.max(max_abs(&(symbolic - oracle)));
    }
    let matrix_ok = worst <= 1e-10;
    outcome(
        coeff_ok && matrix_ok,
        format!(
            "coefficients through word length 3 {}, length-4 part vs random 4x4 matrices: {worst:.2e} (tol 1e-10)",
            ok(coeff_ok)
        ),
    )
}

// ---- 5 ----

fn structural_suites() -> Outcome {
    let names = [
        "PL1 derivation",
        "PL2 bracket action",
        "GL associativity",
        "Theta set-partition expansion",
        "Theta inverse round trip",
        "BCH group morphism",
        "Star product consistency",
    ];
    let mut failed = Vec::new();
    for name in names {
        let out = run_verification(&VerifyOptions {
            only: Some(name.to_string()),
            ..Default::default()
        });
        if out.is_empty() || out.iter().any(|o| !o.passed) {
            failed.push(name);
        }
    }
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} suites exact", names.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

// ---- 6 ----

fn rk4(a: &Problem, n: usize) -> Matrix {
    let d = a.a.dim();
    let h = a.horizon() / n as f64;
    let mut y = Matrix::identity(d, d);
    for i in 0..n {
        let t = h * i as f64;
        let f = |s: f64, y: &Matrix| a.a.eval(s) * y;
        let k1 = f(t, &y);
        let k2 = f(t + h / 2.0, &(&y + &k1 * (h / 2.0)));
        let k3 = f(t + h / 2.0, &(&y + &k2 * (h / 2.0)));
        let k4 = f(t + h, &(&y + &k3 * h));
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    y
}

fn numeric_magnus() -> Outcome {
    let p = Problem::xty();
    let rule = QuadratureRule::default();
    let x = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let y = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
    let omega2 = omega_terms(&p.a, 1.0, 2, &rule).unwrap();
    let r_omega2 = max_abs(&(omega2 + comm(&x, &y) / 12.0));

    let cube = QuadratureRule::gauss_legendre(8, 4);
    let mut r_cs: f64 = 0.0;
    for n in [2, 3] {
        let cs = chen_strichartz_term(&p.a, 1.0, n, &cube).unwrap();
        r_cs = r_cs.max(max_abs(&(cs - omega_terms(&p.a, 1.0, n, &rule).unwrap())));
    }

    let steps = [0.1, 0.05, 0.025, 0.0125];
    let report = convergence_study(&p, 3, &steps, &QuadratureRule::gauss_legendre(4, 1)).unwrap();
    let slope = report.fitted_slope.unwrap_or(f64::NAN);
    let oracle = reference_solution(&p.a, 1.0, 1024).unwrap().value;
    let r_oracle = max_abs(&(oracle - rk4(&p, 4000)));

    // tr A(t) = 0.3 + 0.3 t, so det Y(1) = exp(0.45)
    let traced = Problem::parse("poly:[[[0.5,1],[0,-0.2]],[[0,0],[1,0.3]]]").unwrap();
    let mut omega = Matrix::zeros(2, 2);
    for k in 1..=3 {
        omega += omega_terms(&traced.a, 1.0, k, &rule).unwrap();
    }
    let det = matrix_exp(&omega).unwrap().determinant();
    let r_liouville = (det - 0.45f64.exp()).abs();

    let passed = r_omega2 <= 1e-6
        && r_cs <= 1e-5
        && (slope - 4.0).abs() <= 0.3
        && r_oracle <= 1e-10
        && r_liouville <= 1e-8;
    outcome(
        passed,
        format!(
            "Omega2 {r_omega2:.1e}, Chen-Strichartz {r_cs:.1e}, slope {slope:.3}, \
             oracle vs RK4 {r_oracle:.1e}, Liouville {r_liouville:.1e}"
        ),
    )
}

// ---- 7 ----

fn identity_residuals() -> Outcome {
    let rule = QuadratureRule::default();
    let mut chrono: f64 = 0.0;
    let mut dendri: f64 = 0.0;
    for [x, y, z] in identity_suite() {
        chrono = chrono.max(chronological_identity_residual(&x, &y, &z, &rule).unwrap());
        for r in dendriform_residuals(&x, &y, &z, &rule).unwrap() {
            dendri = dendri.max(r);
        }
    }
    outcome(
        chrono <= 1e-8 && dendri <= 1e-8,
        format!("chronological {chrono:.1e}, dendriform {dendri:.1e} (tol 1e-8)"),
    )
}

// ---- 8 ----

fn golden_stability() -> Outcome {
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut bad = Vec::new();
    for mode in ["postlie", "prelie"] {
        for order in [2, 3, 4] {
            let name = format!("chi-{mode}-{order}.json");
            let expected = std::fs::read(golden.join(&name)).unwrap_or_default();
            let run = || {
                Command::new(env!("CARGO_BIN_EXE_postlie-magnus"))
                    .args(["chi", "--order", &order.to_string(), "--mode", mode])
                    .args(["--format", "json"])
                    .output()
                    .expect("binary runs")
                    .stdout
            };
            let (first, second) = (run(), run());
            if expected.is_empty() || first != expected || second != expected {
                bad.push(name);
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "6 golden files byte-identical over two runs".to_string()
        } else {
            format!("differs: {}", bad.join(", "))
        },
    )
}

fn main() {
    // the default libtest flags are accepted and ignored
    let criteria: [Criterion; 8] = [
        ("chi coefficient reproduction", chi_reproduction, secs(5)),
        ("recursion equivalence", recursion_equivalence, secs(30)),
        ("pre-Lie degeneration", prelie_degeneration, secs(60)),
        ("BCH reproduction", bch_reproduction, secs(60)),
        ("structural suites", structural_suites, secs(120)),
        ("numeric Magnus", numeric_magnus, secs(60)),
        ("identity residuals", identity_residuals, secs(60)),
        ("CLI determinism", golden_stability, secs(60)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let passed = out.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "{} {}: {} | {} | {:.2}s (budget {}s{})",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", exceeded" }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

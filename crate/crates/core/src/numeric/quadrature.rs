use std::f64::consts::PI;
use std::fmt;

/// Composite Gauss–Legendre rule: `nodes` points on each of `panels` equal
/// panels.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl QuadratureRule {
    pub const DEFAULT_NODES: usize = 4;
    pub const DEFAULT_PANELS: usize = 64;

    pub fn gauss_legendre(nodes: usize, panels: usize) -> Self {
        assert!(
            nodes >= 1 && panels >= 1,
            "rule needs at least one node and one panel"
        );
        let (x, w) = gauss_legendre_nodes(nodes);
        QuadratureRule {
            nodes: x,
            weights: w,
            panels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// Nodes and weights of the plain rule mapped to `[a, b]`.
    pub fn panel_points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// Composite nodes and weights on `[a, b]`, panel by panel.
    pub fn composite_points(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let width = (b - a) / self.panels as f64;
        let mut out = Vec::with_capacity(self.panels * self.nodes.len());
        for p in 0..self.panels {
            let lo = a + width * p as f64;
            out.extend(self.panel_points(lo, lo + width));
        }
        out
    }

    /// Composite rule on `[a, b]` applied to a scalar integrand.
    pub fn integrate_scalar(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.composite_points(a, b)
            .into_iter()
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::gauss_legendre(Self::DEFAULT_NODES, Self::DEFAULT_PANELS)
    }
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gauss-legendre {} nodes x {} panels",
            self.nodes.len(),
            self.panels
        )
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre polynomial, nodes in increasing order.
fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

// P_n(z) and P_n'(z)
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

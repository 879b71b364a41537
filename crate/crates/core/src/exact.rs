//! Exact rational arithmetic and the small enumerative combinatorics used by
//! the symbolic engine: Bernoulli numbers, set partitions and permutation
//! descents.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use parking_lot::Mutex;
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Default cap on the ground set size for set-partition enumeration.
pub const DEFAULT_PARTITION_CAP: usize = 10;
/// Default cap on the length of enumerated permutations.
pub const DEFAULT_PERMUTATION_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("{what} size {n} exceeds the configured cap {cap}")]
    SizeCap {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("{what}: argument {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: String,
    },
    #[error("not a permutation of 1..{0}")]
    InvalidPermutation(usize),
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `1 / n!` as a rational.
pub fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
///
/// Uses the recurrence `sum_{k=0}^{n} C(n+1, k) B_k = 0`; computed values are
/// memoized in a process-wide table.
pub fn bernoulli(n: usize) -> Rational {
    let mut table = bernoulli_table().lock();
    while table.len() <= n {
        let m = table.len();
        let mut acc = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, k)) * b;
        }
        let b_m = -acc / Rational::from_integer(BigInt::from(m + 1));
        table.push(b_m);
    }
    table[n].clone()
}

/// A set partition of `{1..n}`.
///
/// Blocks are ordered by increasing maximum and every block lists its
/// elements in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Size of the ground set.
    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// All set partitions of `{1..n}` under the default cap.
pub fn enumerate_set_partitions(n: usize) -> Result<Vec<SetPartition>, ExactError> {
    enumerate_set_partitions_with_cap(n, DEFAULT_PARTITION_CAP)
}

/// All set partitions of `{1..n}`, each already in canonical block order.
///
/// Elements are inserted from `n` down to `1`: a new element either opens a
/// block (whose maximum is then smaller than every existing maximum, so it is
/// prepended) or joins an existing block at its front, which keeps the
/// ordering invariants without a sorting pass.
pub fn enumerate_set_partitions_with_cap(
    n: usize,
    cap: usize,
) -> Result<Vec<SetPartition>, ExactError> {
    if n == 0 {
        return Err(ExactError::OutOfRange {
            what: "set partition ground size",
            value: n,
            range: format!("1..={cap}"),
        });
    }
    if n > cap {
        return Err(ExactError::SizeCap {
            what: "set partition",
            n,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = vec![vec![n]];
    extend_partitions(n - 1, &mut blocks, &mut out);
    Ok(out)
}

fn extend_partitions(next: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<SetPartition>) {
    if next == 0 {
        out.push(SetPartition {
            blocks: blocks.clone(),
        });
        return;
    }
    blocks.insert(0, vec![next]);
    extend_partitions(next - 1, blocks, out);
    blocks.remove(0);
    for i in 0..blocks.len() {
        blocks[i].insert(0, next);
        extend_partitions(next - 1, blocks, out);
        blocks[i].remove(0);
    }
}

/// A permutation of `{1..n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, ExactError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if p == 0 || p > n || seen[p - 1] {
                return Err(ExactError::InvalidPermutation(n));
            }
            seen[p - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut images = self.images.clone();
        images.reverse();
        Permutation { images }
    }
}

/// Number of positions `i` with `p(i) > p(i+1)`.
pub fn descent_number(p: &Permutation) -> usize {
    p.images.windows(2).filter(|w| w[0] > w[1]).count()
}

/// All permutations of `{1..n}` in lexicographic order, subject to `cap`.
pub fn enumerate_permutations_with_cap(
    n: usize,
    cap: usize,
) -> Result<Vec<Permutation>, ExactError> {
    if n > cap {
        return Err(ExactError::SizeCap {
            what: "permutation",
            n,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    permute(n, &mut current, &mut used, &mut out);
    Ok(out)
}

pub fn enumerate_permutations(n: usize) -> Result<Vec<Permutation>, ExactError> {
    enumerate_permutations_with_cap(n, DEFAULT_PERMUTATION_CAP)
}

fn permute(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
    if current.len() == n {
        out.push(Permutation {
            images: current.clone(),
        });
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            current.push(v + 1);
            permute(n, current, used, out);
            current.pop();
            used[v] = false;
        }
    }
}

/// Weight `(-1)^d / (n^2 C(n-1, d))` attached to a permutation with `d`
/// descents in the permutation-sum form of the Magnus series.
pub fn chen_strichartz_coeff(n: usize, d: usize) -> Result<Rational, ExactError> {
    if n == 0 || d >= n {
        return Err(ExactError::OutOfRange {
            what: "descent count",
            value: d,
            range: format!("0..{n} with n >= 1"),
        });
    }
    let den = BigInt::from(n * n) * binomial(n - 1, d);
    let r = Rational::new(BigInt::one(), den);
    Ok(if d % 2 == 1 { -r } else { r })
}

/// Formats a rational as `p/q`, dropping `/q` when `q == 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Converts to `f64`, for numeric cross-checks only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // very large operands: fall back to a scaled division
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        if r.is_negative() {
            -(n.abs() / d)
        } else {
            n / d
        }
    })
}

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{format_rational, Rational};
use crate::tree::PlanarTree;

/// Which algebra an [`Element`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Mode {
    #[default]
    /// Tensor algebra over planar trees: the enveloping algebra of the free
    /// post-Lie algebra on one generator.
    PostLie,
    /// Symmetric algebra over non-planar trees: the enveloping algebra of the
    /// free pre-Lie algebra on one generator. Words are sorted multisets of
    /// abelianized trees and the commutator bracket vanishes.
    PreLie,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::PostLie => "postlie",
            Mode::PreLie => "prelie",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "postlie" | "post-lie" => Ok(Mode::PostLie),
            "prelie" | "pre-lie" => Ok(Mode::PreLie),
            other => Err(format!(
                "unknown mode '{other}' (expected postlie or prelie)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A word of planar trees. The empty word is the unit.
///
/// Ordered by total degree, then word length, then lexicographically letter
/// by letter using the tree order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    word: Vec<PlanarTree>,
    degree: usize,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial {
            word: Vec::new(),
            degree: 0,
        }
    }

    /// Builds a monomial without normalizing. Callers in pre-Lie mode should go
    /// through [`crate::engine::Algebra::monomial`].
    pub fn from_word(word: Vec<PlanarTree>) -> Self {
        let degree = word.iter().map(PlanarTree::degree).sum();
        Monomial { word, degree }
    }

    pub fn letter(t: PlanarTree) -> Self {
        Monomial::from_word(vec![t])
    }

    pub fn word(&self) -> &[PlanarTree] {
        &self.word
    }

    pub fn into_word(self) -> Vec<PlanarTree> {
        self.word
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_unit(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Whitespace separated tree encodings; the unit prints as `1`.
    pub fn to_text(&self) -> String {
        if self.word.is_empty() {
            return "1".to_string();
        }
        self.word
            .iter()
            .map(PlanarTree::encoding)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.to_text())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A finitely supported rational combination of monomials, truncated at a
/// total degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    pub(crate) terms: BTreeMap<Monomial, Rational>,
    pub(crate) order: usize,
    pub(crate) mode: Mode,
}

impl Element {
    pub fn zero(mode: Mode, order: usize) -> Self {
        Element {
            terms: BTreeMap::new(),
            order,
            mode,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the unit (the counit).
    pub fn epsilon(&self) -> Rational {
        self.coeff(&Monomial::unit())
    }

    /// Adds `c * m`, dropping the term when it cancels or exceeds the
    /// truncation order. The monomial must already be normalized for the mode.
    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.degree() > self.order {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &Element, scale: &Rational) {
        self.check_mode(other);
        if scale.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }

    pub(crate) fn check_mode(&self, other: &Element) {
        assert_eq!(
            self.mode, other.mode,
            "cannot mix {} and {} elements in one expression",
            self.mode, other.mode
        );
    }

    /// Copy truncated at `order` (never raises the order).
    pub fn truncated(&self, order: usize) -> Element {
        let order = order.min(self.order);
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            order,
            mode: self.mode,
        }
    }

    /// Homogeneous component of the given total degree.
    pub fn degree_part(&self, degree: usize) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            order: self.order,
            mode: self.mode,
        }
    }

    /// Highest degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn scale(&self, c: &Rational) -> Element {
        let mut out = Element::zero(self.mode, self.order);
        out.add_scaled_assign(self, c);
        out
    }

    pub fn with_order(mut self, order: usize) -> Element {
        self.order = order.min(self.order);
        self.terms.retain(|m, _| m.degree() <= order);
        self
    }

    /// `c1 m1 + c2 m2 + ...` with unit coefficients omitted.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if abs.is_one() && !m.is_unit() {
                out.push_str(&m.to_text());
            } else if m.is_unit() {
                out.push_str(&format_rational(&abs));
            } else {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&m.to_text());
            }
        }
        out
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Element[{} N={}]({})",
            self.mode,
            self.order,
            self.to_text()
        )
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        self.check_mode(rhs);
        let mut out = self.clone().with_order(self.order.min(rhs.order));
        out.add_scaled_assign(rhs, &Rational::one());
        out
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.check_mode(rhs);
        let mut out = self.clone().with_order(self.order.min(rhs.order));
        out.add_scaled_assign(rhs, &-Rational::one());
        out
    }
}

impl Add for Element {
    type Output = Element;

    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;

    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

impl Neg for Element {
    type Output = Element;

    fn neg(self) -> Element {
        -&self
    }
}

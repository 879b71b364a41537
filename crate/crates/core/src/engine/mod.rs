//! Truncated enveloping algebra of the free post-Lie algebra on one generator.
//!
//! Elements are rational combinations of words of planar trees. The algebra
//! carries two associative products (concatenation and Grossman–Larson), the
//! deshuffle coproduct, the extended post-Lie action of words on words, and
//! the series built on top of them: exponentials and logarithms, the
//! isomorphism Θ, the post-Lie Magnus expansion χ and its inverse Φ, the
//! action Υ, the ★ group law and both BCH products.
//!
//! An [`Algebra`] fixes the mode (planar post-Lie or abelianized pre-Lie) and
//! the default truncation order. Every operation truncates its output at the
//! smallest truncation order among its inputs.

mod element;
mod products;
mod series;

use std::collections::HashMap;

use num_traits::One;
use parking_lot::Mutex;
use thiserror::Error;

pub use element::{Element, Mode, Monomial};
pub use products::deshuffle;

use crate::exact::{parse_rational, Rational};
use crate::tree::{abelianize, PlanarTree, TreeError, TreeSum};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 6;
/// Largest supported truncation order.
pub const MAX_ORDER: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("truncation order {0} outside 1..={MAX_ORDER}")]
    Order(usize),
    #[error("{op}: expected counit {expected}, found {found}")]
    Augmentation {
        op: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("{0}: input is not primitive")]
    NotPrimitive(&'static str),
    #[error("{op} requires {expected} mode")]
    WrongMode { op: &'static str, expected: Mode },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("cannot parse element at byte {position}: {reason}")]
    Parse { position: usize, reason: String },
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

/// Deliberate defects used to check that the verification harness catches
/// broken products.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the post-Lie part of the Grossman–Larson product.
    GlSign,
}

type ActionKey = (Vec<PlanarTree>, PlanarTree);

/// Algebra context: mode, default order and a memo table for the action of
/// words on single trees.
pub struct Algebra {
    mode: Mode,
    order: usize,
    action_cache: Mutex<HashMap<ActionKey, TreeSum>>,
    fault: Option<Fault>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra")
            .field("mode", &self.mode)
            .field("order", &self.order)
            .finish()
    }
}

impl Algebra {
    pub fn new(mode: Mode, order: usize) -> Result<Self, AlgebraError> {
        if order == 0 || order > MAX_ORDER {
            return Err(AlgebraError::Order(order));
        }
        Ok(Algebra {
            mode,
            order,
            action_cache: Mutex::new(HashMap::new()),
            fault: None,
        })
    }

    pub fn post_lie(order: usize) -> Result<Self, AlgebraError> {
        Algebra::new(Mode::PostLie, order)
    }

    pub fn pre_lie(order: usize) -> Result<Self, AlgebraError> {
        Algebra::new(Mode::PreLie, order)
    }

    #[doc(hidden)]
    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn check(&self, e: &Element) {
        assert_eq!(
            e.mode, self.mode,
            "element of {} mode used with a {} algebra",
            e.mode, self.mode
        );
    }

    pub(crate) fn normalize_tree(&self, t: PlanarTree) -> PlanarTree {
        match self.mode {
            Mode::PostLie => t,
            Mode::PreLie => abelianize(&t),
        }
    }

    pub(crate) fn normalize_word(&self, mut word: Vec<PlanarTree>) -> Vec<PlanarTree> {
        if self.mode == Mode::PreLie {
            for t in word.iter_mut() {
                *t = abelianize(t);
            }
            word.sort();
        }
        word
    }

    /// Normalized monomial for this algebra's mode.
    pub fn monomial(&self, word: Vec<PlanarTree>) -> Monomial {
        Monomial::from_word(self.normalize_word(word))
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.mode, self.order)
    }

    pub fn one(&self) -> Element {
        let mut e = self.zero();
        e.add_term(Monomial::unit(), Rational::one());
        e
    }

    /// The generator `[]`.
    pub fn generator(&self) -> Element {
        self.tree(PlanarTree::vertex())
    }

    pub fn tree(&self, t: PlanarTree) -> Element {
        self.word(vec![t])
    }

    pub fn word(&self, word: Vec<PlanarTree>) -> Element {
        self.term(word, Rational::one())
    }

    pub fn term(&self, word: Vec<PlanarTree>, c: Rational) -> Element {
        let mut e = self.zero();
        e.add_term(self.monomial(word), c);
        e
    }

    /// Element from `(word, coefficient)` pairs; repeated words are summed.
    pub fn from_terms<I>(&self, terms: I) -> Element
    where
        I: IntoIterator<Item = (Vec<PlanarTree>, Rational)>,
    {
        let mut e = self.zero();
        for (w, c) in terms {
            e.add_term(self.monomial(w), c);
        }
        e
    }

    /// Re-expresses an element of another mode in this algebra. Mapping a
    /// post-Lie element into a pre-Lie algebra abelianizes every tree and
    /// sorts every word, which is the quotient map between the two algebras.
    pub fn project(&self, e: &Element) -> Element {
        let mut out = Element::zero(self.mode, e.order.min(self.order));
        for (m, c) in e.terms() {
            out.add_term(self.monomial(m.word().to_vec()), c.clone());
        }
        out
    }

    /// Parses a tree word such as `"[] [[]]"`; `"1"` or the empty string is
    /// the unit.
    pub fn parse_word(&self, s: &str) -> Result<Vec<PlanarTree>, AlgebraError> {
        let s_trim = s.trim();
        if s_trim.is_empty() || s_trim == "1" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let base = s.as_ptr() as usize;
        for tok in s.split_whitespace() {
            let offset = tok.as_ptr() as usize - base;
            let t = PlanarTree::parse(tok).map_err(|e| match e {
                TreeError::Parse { position, reason } => AlgebraError::Parse {
                    position: offset + position,
                    reason: reason.to_string(),
                },
                other => AlgebraError::Tree(other),
            })?;
            out.push(t);
        }
        Ok(out)
    }

    /// Parses `term (+|-) term ...` where a term is an optional `p/q*`
    /// coefficient followed by a tree word, e.g. `"[] [[]] - [[]] [] + 1/2*[[[]]]"`.
    pub fn parse_element(&self, s: &str) -> Result<Element, AlgebraError> {
        let mut e = self.zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut sign = Rational::one();
        let mut depth = 0usize;
        let mut pieces: Vec<(usize, usize, Rational)> = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'[' => depth += 1,
                b']' => depth = depth.saturating_sub(1),
                b'+' | b'-' if depth == 0 => {
                    // a sign directly attached to a coefficient, e.g. "-1/2*[]"
                    let before = s[start..i].trim();
                    if before.is_empty() {
                        if b == b'-' {
                            sign = -sign;
                        }
                        start = i + 1;
                        continue;
                    }
                    pieces.push((start, i, sign.clone()));
                    sign = if b == b'-' {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push((start, bytes.len(), sign));
        for (lo, hi, sign) in pieces {
            let text = &s[lo..hi];
            if text.trim().is_empty() {
                return Err(AlgebraError::Parse {
                    position: lo,
                    reason: "empty term".to_string(),
                });
            }
            let (coeff, word_text, word_offset) = match text.find('*') {
                Some(star) => {
                    let c = parse_rational(&text[..star]).ok_or_else(|| AlgebraError::Parse {
                        position: lo,
                        reason: format!("bad coefficient '{}'", text[..star].trim()),
                    })?;
                    (c, &text[star + 1..], lo + star + 1)
                }
                None => match parse_rational(text) {
                    Some(c) => (c, "", hi),
                    None => (Rational::one(), text, lo),
                },
            };
            let word = self.parse_word(word_text).map_err(|err| match err {
                AlgebraError::Parse { position, reason } => AlgebraError::Parse {
                    position: word_offset + position,
                    reason,
                },
                other => other,
            })?;
            e.add_term(self.monomial(word), sign * coeff);
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests;

//! Concatenation, deshuffle coproduct, the post-Lie action and the
//! Grossman–Larson product.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Algebra, Element, Fault, Monomial};
use crate::exact::Rational;
use crate::tree::{left_graft_sum, PlanarTree, TreeSum};

type WordSum = BTreeMap<Vec<PlanarTree>, Rational>;

fn add_word(sum: &mut WordSum, w: Vec<PlanarTree>, c: Rational) {
    if c.is_zero() {
        return;
    }
    let entry = sum.entry(w).or_insert_with(Rational::zero);
    *entry += c;
}

/// Deshuffle coproduct of a monomial: for every subset `S` of positions, the
/// pair (letters in `S`, letters outside `S`), both in their original order.
/// Returns `2^len` pairs with multiplicity, starting with `(m, 1)` and ending
/// with `(1, m)`.
pub fn deshuffle(m: &Monomial) -> Vec<(Monomial, Monomial)> {
    split_positions(m.word())
        .into_iter()
        .map(|(a, b)| (Monomial::from_word(a), Monomial::from_word(b)))
        .collect()
}

fn split_positions(word: &[PlanarTree]) -> Vec<(Vec<PlanarTree>, Vec<PlanarTree>)> {
    let n = word.len();
    assert!(n < usize::BITS as usize);
    let mut out = Vec::with_capacity(1 << n);
    for mask in (0..(1usize << n)).rev() {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, t) in word.iter().enumerate() {
            if mask & (1 << (n - 1 - i)) != 0 {
                left.push(t.clone());
            } else {
                right.push(t.clone());
            }
        }
        out.push((left, right));
    }
    out
}

impl Algebra {
    fn graft(&self, x: &PlanarTree, y: &PlanarTree) -> TreeSum {
        let raw = left_graft_sum(x, y);
        match self.mode {
            super::Mode::PostLie => raw,
            super::Mode::PreLie => {
                let mut out = TreeSum::new();
                for (t, c) in raw.iter() {
                    out.add(self.normalize_tree(t.clone()), c.clone());
                }
                out
            }
        }
    }

    /// Action of a word on a single tree. The result is a combination of
    /// single trees.
    ///
    /// Empty word acts as the identity, a single letter grafts, and a longer
    /// word `x·X` expands as `x▷(X▷y) − (x▷X)▷y` where `x▷X` acts on `X` as a
    /// derivation.
    pub(crate) fn word_on_tree(&self, x: &[PlanarTree], y: &PlanarTree) -> TreeSum {
        match x.len() {
            0 => return TreeSum::single(y.clone()),
            1 => return self.graft(&x[0], y),
            _ => {}
        }
        let key = (x.to_vec(), y.clone());
        if let Some(hit) = self.action_cache.lock().get(&key) {
            return hit.clone();
        }
        let (first, rest) = x.split_first().expect("nonempty word");
        let mut out = TreeSum::new();
        for (t, c) in self.word_on_tree(rest, y).iter() {
            out.add_scaled(&self.graft(first, t), c);
        }
        let minus_one = -Rational::one();
        for i in 0..rest.len() {
            for (t, c) in self.graft(first, &rest[i]).iter() {
                let mut w = rest.to_vec();
                w[i] = t.clone();
                let w = self.normalize_word(w);
                out.add_scaled(&self.word_on_tree(&w, y), &(c * &minus_one));
            }
        }
        self.action_cache.lock().insert(key, out.clone());
        out
    }

    /// Action of a word on a word: the unit acts trivially, any word acts on
    /// the unit through the counit, and on a product the action distributes
    /// over the deshuffle of the acting word.
    fn word_on_word(&self, x: &[PlanarTree], y: &[PlanarTree]) -> WordSum {
        let mut out = WordSum::new();
        if y.is_empty() {
            if x.is_empty() {
                out.insert(Vec::new(), Rational::one());
            }
            return out;
        }
        if x.is_empty() {
            out.insert(y.to_vec(), Rational::one());
            return out;
        }
        let (head, tail) = y.split_first().expect("nonempty word");
        for (x1, x2) in split_positions(x) {
            let left = self.word_on_tree(&x1, head);
            if left.is_empty() {
                continue;
            }
            let right = self.word_on_word(&x2, tail);
            for (t, c1) in left.iter() {
                for (w, c2) in &right {
                    let mut word = Vec::with_capacity(w.len() + 1);
                    word.push(t.clone());
                    word.extend(w.iter().cloned());
                    add_word(&mut out, word, c1 * c2);
                }
            }
        }
        out
    }

    /// Concatenation product, truncated.
    pub fn concat_mul(&self, a: &Element, b: &Element) -> Element {
        self.check(a);
        self.check(b);
        let mut out = Element::zero(self.mode, a.order.min(b.order));
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if ma.degree() + mb.degree() > out.order {
                    continue;
                }
                let mut w = ma.word().to_vec();
                w.extend(mb.word().iter().cloned());
                out.add_term(self.monomial(w), ca * cb);
            }
        }
        out
    }

    /// Commutator of the concatenation product.
    pub fn hbracket(&self, a: &Element, b: &Element) -> Element {
        &self.concat_mul(a, b) - &self.concat_mul(b, a)
    }

    /// The post-Lie product `a ▷ b` extended to the whole enveloping algebra.
    pub fn post_lie_prod(&self, a: &Element, b: &Element) -> Element {
        self.check(a);
        self.check(b);
        let mut out = Element::zero(self.mode, a.order.min(b.order));
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if ma.degree() + mb.degree() > out.order {
                    continue;
                }
                let cab = ca * cb;
                for (w, c) in self.word_on_word(ma.word(), mb.word()) {
                    out.add_term(self.monomial(w), &cab * c);
                }
            }
        }
        out
    }

    /// Grossman–Larson product `A ∗ B = A(1) · (A(2) ▷ B)`.
    pub fn gl_mul(&self, a: &Element, b: &Element) -> Element {
        self.check(a);
        self.check(b);
        let mut out = Element::zero(self.mode, a.order.min(b.order));
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if ma.degree() + mb.degree() > out.order {
                    continue;
                }
                let cab = ca * cb;
                for (a1, a2) in split_positions(ma.word()) {
                    let flip = self.fault == Some(Fault::GlSign) && !a2.is_empty();
                    for (w, c) in self.word_on_word(&a2, mb.word()) {
                        let mut word = a1.clone();
                        word.extend(w);
                        let c = &cab * c;
                        out.add_term(self.monomial(word), if flip { -c } else { c });
                    }
                }
            }
        }
        out
    }

    /// Second Lie bracket `a▷b − b▷a + [a, b]`.
    pub fn gbracket(&self, a: &Element, b: &Element) -> Element {
        let ab = self.post_lie_prod(a, b);
        let ba = self.post_lie_prod(b, a);
        &(&ab - &ba) + &self.hbracket(a, b)
    }

    /// Coproduct as a map on pairs of monomials.
    pub(crate) fn coproduct(&self, a: &Element) -> BTreeMap<(Monomial, Monomial), Rational> {
        let mut out: BTreeMap<(Monomial, Monomial), Rational> = BTreeMap::new();
        for (m, c) in a.terms() {
            for (l, r) in split_positions(m.word()) {
                let key = (self.monomial(l), self.monomial(r));
                *out.entry(key).or_insert_with(Rational::zero) += c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `Δa = a⊗1 + 1⊗a` (and no unit component).
    pub fn is_primitive(&self, a: &Element) -> bool {
        self.check(a);
        if !a.epsilon().is_zero() {
            return false;
        }
        let mut delta = self.coproduct(a);
        for (m, c) in a.terms() {
            for key in [(m.clone(), Monomial::unit()), (Monomial::unit(), m.clone())] {
                let e = delta.entry(key).or_insert_with(Rational::zero);
                *e -= c;
            }
        }
        delta.values().all(Zero::is_zero)
    }

    /// `Δg = g⊗g` up to the truncation order, with `ε(g) = 1`.
    pub fn is_grouplike(&self, g: &Element) -> bool {
        self.check(g);
        if !g.epsilon().is_one() {
            return false;
        }
        let mut delta = self.coproduct(g);
        for (m1, c1) in g.terms() {
            for (m2, c2) in g.terms() {
                if m1.degree() + m2.degree() > g.order {
                    continue;
                }
                let e = delta
                    .entry((m1.clone(), m2.clone()))
                    .or_insert_with(Rational::zero);
                *e -= c1 * c2;
            }
        }
        delta.values().all(Zero::is_zero)
    }
}

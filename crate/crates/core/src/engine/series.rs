//! Exponentials, logarithms and the Magnus-type series built from them.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Algebra, AlgebraError, Element, Mode, Monomial};
use crate::exact::{bernoulli, enumerate_set_partitions, format_rational, inv_factorial, Rational};

#[derive(Clone, Copy)]
enum Product {
    Concat,
    GrossmanLarson,
}

impl Algebra {
    fn mul(&self, p: Product, a: &Element, b: &Element) -> Element {
        match p {
            Product::Concat => self.concat_mul(a, b),
            Product::GrossmanLarson => self.gl_mul(a, b),
        }
    }

    fn exp_with(&self, p: Product, x: &Element, op: &'static str) -> Result<Element, AlgebraError> {
        self.check(x);
        if !x.epsilon().is_zero() {
            return Err(AlgebraError::Augmentation {
                op,
                expected: "0",
                found: format_rational(&x.epsilon()),
            });
        }
        let mut out = self.one().with_order(x.order);
        let mut power = self.one().with_order(x.order);
        for n in 1..=x.order {
            power = self.mul(p, &power, x);
            if power.is_zero() {
                break;
            }
            out.add_scaled_assign(&power, &inv_factorial(n));
        }
        Ok(out)
    }

    fn log_with(&self, p: Product, g: &Element, op: &'static str) -> Result<Element, AlgebraError> {
        self.check(g);
        if !g.epsilon().is_one() {
            return Err(AlgebraError::Augmentation {
                op,
                expected: "1",
                found: format_rational(&g.epsilon()),
            });
        }
        let h = g - &self.one();
        let mut out = Element::zero(self.mode, g.order);
        let mut power = self.one().with_order(g.order);
        for n in 1..=g.order {
            power = self.mul(p, &power, &h);
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out.add_scaled_assign(&power, &Rational::new(BigInt::from(sign), BigInt::from(n)));
        }
        Ok(out)
    }

    /// Exponential series for the concatenation product.
    pub fn exp_concat(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.exp_with(Product::Concat, x, "exp_concat")
    }

    /// Logarithm series for the concatenation product.
    pub fn log_concat(&self, g: &Element) -> Result<Element, AlgebraError> {
        self.log_with(Product::Concat, g, "log_concat")
    }

    /// Exponential series for the Grossman–Larson product.
    pub fn exp_gl(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.exp_with(Product::GrossmanLarson, x, "exp_gl")
    }

    /// Logarithm series for the Grossman–Larson product.
    pub fn log_gl(&self, g: &Element) -> Result<Element, AlgebraError> {
        self.log_with(Product::GrossmanLarson, g, "log_gl")
    }

    fn require_primitive(&self, x: &Element, op: &'static str) -> Result<(), AlgebraError> {
        if self.is_primitive(x) {
            Ok(())
        } else {
            Err(AlgebraError::NotPrimitive(op))
        }
    }

    /// Θ: each word maps to the Grossman–Larson product of its letters.
    pub fn theta(&self, a: &Element) -> Element {
        self.check(a);
        let mut out = Element::zero(self.mode, a.order);
        for (m, c) in a.terms() {
            out.add_scaled_assign(&self.theta_monomial(m, a.order), c);
        }
        out
    }

    fn theta_monomial(&self, m: &Monomial, order: usize) -> Element {
        let mut acc = self.one().with_order(order);
        for t in m.word().iter().rev() {
            let letter = self.tree(t.clone()).with_order(order);
            acc = self.gl_mul(&letter, &acc);
        }
        acc
    }

    /// Θ of a word by the set-partition formula: every partition contributes
    /// the concatenation of its blocks, each block being the right-nested
    /// post-Lie product of its letters, blocks ordered by their maxima.
    pub fn theta_via_partitions(&self, m: &Monomial) -> Result<Element, AlgebraError> {
        let letters: Vec<Element> = m.word().iter().map(|t| self.tree(t.clone())).collect();
        self.theta_of_letters(&letters)
    }

    /// Set-partition expansion of `x_1 ∗ ⋯ ∗ x_n` for primitive letters.
    pub fn theta_of_letters(&self, letters: &[Element]) -> Result<Element, AlgebraError> {
        let order = letters
            .iter()
            .map(Element::order)
            .min()
            .unwrap_or(self.order);
        if letters.is_empty() {
            return Ok(self.one().with_order(order));
        }
        let mut out = Element::zero(self.mode, order);
        for partition in enumerate_set_partitions(letters.len())? {
            let mut product = self.one().with_order(order);
            for block in partition.blocks() {
                let (last, init) = block.split_last().expect("blocks are nonempty");
                let mut nested = letters[*last - 1].clone();
                for &i in init.iter().rev() {
                    nested = self.post_lie_prod(&letters[i - 1], &nested);
                }
                product = self.concat_mul(&product, &nested);
                if product.is_zero() {
                    break;
                }
            }
            out.add_scaled_assign(&product, &Rational::one());
        }
        Ok(out)
    }

    /// Inverse of Θ, solved by induction on word length: Θ(w) is `w` plus
    /// strictly shorter words.
    pub fn theta_inverse(&self, b: &Element) -> Element {
        self.check(b);
        let mut result = Element::zero(self.mode, b.order);
        let mut residual = b.clone();
        while let Some(len) = residual.terms().map(|(m, _)| m.len()).max() {
            let mut top = Element::zero(self.mode, b.order);
            for (m, c) in residual.terms() {
                if m.len() == len {
                    top.add_term(m.clone(), c.clone());
                }
            }
            residual = &residual - &self.theta(&top);
            result = &result + &top;
        }
        result
    }

    /// Post-Lie Magnus expansion χ(x) = log_∗(exp(x)).
    pub fn post_lie_magnus(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.require_primitive(x, "post_lie_magnus")?;
        self.log_gl(&self.exp_concat(x)?)
    }

    /// χ from the recursion obtained by matching `exp_∗(χ(tx))` with
    /// `exp(tx)` order by order in `t`:
    /// `χ_n = xⁿ/n! − Σ_{k≥2} 1/k! Σ_{p_1+⋯+p_k=n} χ_{p_1} ∗ ⋯ ∗ χ_{p_k}`.
    pub fn post_lie_magnus_recursive(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.require_primitive(x, "post_lie_magnus_recursive")?;
        let order = x.order;
        // products[1][n] is the t^n component of χ; products[k][n] sums all
        // k-fold ∗-products of components with total t-degree n.
        let zero = Element::zero(self.mode, order);
        let mut products: Vec<Vec<Element>> = vec![vec![zero.clone(); order + 1]; order + 1];
        let mut power = self.one().with_order(order);
        for n in 1..=order {
            power = self.concat_mul(&power, x);
            let mut chi_n = power.scale(&inv_factorial(n));
            // products[k][n] only needs components of t-degree below n
            for k in 2..=n {
                let mut sum = zero.clone();
                for p in 1..n {
                    let (head, tail) = (&products[1][p], &products[k - 1][n - p]);
                    if !head.is_zero() && !tail.is_zero() {
                        sum = &sum + &self.gl_mul(head, tail);
                    }
                }
                chi_n.add_scaled_assign(&sum, &-inv_factorial(k));
                products[k][n] = sum;
            }
            products[1][n] = chi_n;
        }
        let chi = &products[1];
        let mut out = Element::zero(self.mode, order);
        for c in chi {
            out = &out + c;
        }
        Ok(out)
    }

    /// Φ(x) = log(exp_∗(x)), the inverse of χ.
    pub fn inverse_magnus(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.require_primitive(x, "inverse_magnus")?;
        self.log_concat(&self.exp_gl(x)?)
    }

    /// Υ_x(y) = Σ_n (x▷)ⁿ(y) / n!.
    pub fn upsilon(&self, x: &Element, y: &Element) -> Element {
        self.check(x);
        self.check(y);
        let order = x.order.min(y.order);
        let mut out = y.clone().with_order(order);
        let mut term = out.clone();
        for n in 1..=order {
            term = self.post_lie_prod(x, &term);
            if term.is_zero() {
                break;
            }
            out.add_scaled_assign(&term, &inv_factorial(n));
        }
        out
    }

    /// `a ★ b = log(exp(a) ∗ exp(b))`.
    pub fn star_group(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.require_primitive(a, "star_group")?;
        self.require_primitive(b, "star_group")?;
        self.log_concat(&self.gl_mul(&self.exp_concat(a)?, &self.exp_concat(b)?))
    }

    /// BCH product for concatenation: `log(exp(a) · exp(b))`.
    pub fn bch_h(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.require_primitive(a, "bch_h")?;
        self.require_primitive(b, "bch_h")?;
        self.log_concat(&self.concat_mul(&self.exp_concat(a)?, &self.exp_concat(b)?))
    }

    /// BCH product for Grossman–Larson: `log_∗(exp_∗(a) ∗ exp_∗(b))`.
    pub fn bch_g(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.require_primitive(a, "bch_g")?;
        self.require_primitive(b, "bch_g")?;
        self.log_gl(&self.gl_mul(&self.exp_gl(a)?, &self.exp_gl(b)?))
    }

    /// Pre-Lie Magnus expansion as the degree-by-degree fixed point of
    /// `χ = x + Σ_{n≥1} B_n/n! (χ▷)ⁿ(x)`.
    pub fn prelie_magnus(&self, x: &Element) -> Result<Element, AlgebraError> {
        if self.mode != Mode::PreLie {
            return Err(AlgebraError::WrongMode {
                op: "prelie_magnus",
                expected: Mode::PreLie,
            });
        }
        self.require_primitive(x, "prelie_magnus")?;
        let order = x.order;
        let mut chi = x.clone();
        // each pass fixes one more degree
        for _ in 1..order {
            let mut next = x.clone();
            let mut term = x.clone();
            for n in 1..order {
                term = self.post_lie_prod(&chi, &term);
                if term.is_zero() {
                    break;
                }
                let b = bernoulli(n);
                if !b.is_zero() {
                    next.add_scaled_assign(&term, &(b * inv_factorial(n)));
                }
            }
            chi = next;
        }
        Ok(chi)
    }

    /// Closed form `Σ_{n≥1} φ_n(x)/n!` with `φ_1 = x`, `φ_{n+1} = x ▷ φ_n`,
    /// which equals Φ(x) in pre-Lie mode.
    pub fn cumulant_series(&self, x: &Element) -> Result<Element, AlgebraError> {
        if self.mode != Mode::PreLie {
            return Err(AlgebraError::WrongMode {
                op: "cumulant_series",
                expected: Mode::PreLie,
            });
        }
        self.check(x);
        let mut out = x.clone();
        let mut term = x.clone();
        for n in 2..=x.order {
            term = self.post_lie_prod(x, &term);
            if term.is_zero() {
                break;
            }
            out.add_scaled_assign(&term, &inv_factorial(n));
        }
        Ok(out)
    }
}

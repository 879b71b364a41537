use proptest::prelude::*;

use super::*;
use crate::exact::rational;
use crate::tree::enumerate_trees;

fn post(order: usize) -> Algebra {
    Algebra::post_lie(order).unwrap()
}

fn pre(order: usize) -> Algebra {
    Algebra::pre_lie(order).unwrap()
}

fn el(alg: &Algebra, s: &str) -> Element {
    alg.parse_element(s).unwrap()
}

// ---- basic products ----

#[test]
fn concat_examples() {
    let a = post(6);
    let x = el(&a, "[]");
    assert_eq!(a.concat_mul(&a.one(), &x), x);
    assert_eq!(a.concat_mul(&x, &x), el(&a, "[] []"));
    let lhs = a.concat_mul(&el(&a, "[] + [[]]"), &el(&a, "[[][]]"));
    assert_eq!(lhs, el(&a, "[] [[][]] + [[]] [[][]]"));
}

#[test]
fn hbracket_examples() {
    let a = post(6);
    let x = el(&a, "[]");
    assert!(a.hbracket(&x, &x).is_zero());
    assert_eq!(a.hbracket(&x, &el(&a, "[[]]")), el(&a, "[] [[]] - [[]] []"));
}

#[test]
fn deshuffle_examples() {
    let a = post(6);
    let unit = Monomial::unit();
    assert_eq!(deshuffle(&unit), vec![(unit.clone(), unit.clone())]);
    let x = a.monomial(a.parse_word("[]").unwrap());
    assert_eq!(
        deshuffle(&x),
        vec![(x.clone(), unit.clone()), (unit.clone(), x.clone())]
    );
    let xy = a.monomial(a.parse_word("[] [[]]").unwrap());
    let y = a.monomial(a.parse_word("[[]]").unwrap());
    assert_eq!(
        deshuffle(&xy),
        vec![
            (xy.clone(), unit.clone()),
            (x.clone(), y.clone()),
            (y.clone(), x.clone()),
            (unit.clone(), xy.clone())
        ]
    );
}

#[test]
fn post_lie_prod_examples() {
    let a = post(6);
    let y = el(&a, "[[]] [] + 2*[[][]]");
    assert_eq!(a.post_lie_prod(&a.one(), &y), y);
    // word acting on a tree: •▷(•▷•) − (•▷•)▷• leaves the corolla
    assert_eq!(
        a.post_lie_prod(&el(&a, "[] []"), &el(&a, "[]")),
        el(&a, "[[][]]")
    );
    assert_eq!(
        a.post_lie_prod(&el(&a, "[]"), &el(&a, "[] []")),
        el(&a, "[[]] [] + [] [[]]")
    );
    // X ▷ 1 = ε(X)
    assert_eq!(a.post_lie_prod(&el(&a, "3 + [[]]"), &a.one()), el(&a, "3"));
}

#[test]
fn gl_examples() {
    let a = post(6);
    assert_eq!(
        a.gl_mul(&el(&a, "[]"), &el(&a, "[]")),
        el(&a, "[] [] + [[]]")
    );
    // (xy) ∗ z = xyz + x(y▷z) + y(x▷z) + x▷(y▷z) − (x▷y)▷z
    let (x, y, z) = (el(&a, "[]"), el(&a, "[[]]"), el(&a, "[[][]]"));
    let lhs = a.gl_mul(&a.concat_mul(&x, &y), &z);
    let xyz = a.concat_mul(&a.concat_mul(&x, &y), &z);
    let t1 = a.concat_mul(&x, &a.post_lie_prod(&y, &z));
    let t2 = a.concat_mul(&y, &a.post_lie_prod(&x, &z));
    let t3 = a.post_lie_prod(&x, &a.post_lie_prod(&y, &z));
    let t4 = a.post_lie_prod(&a.post_lie_prod(&x, &y), &z);
    assert_eq!(lhs, &(&(&(&xyz + &t1) + &t2) + &t3) - &t4);
    // x ∗ Y = xY + x▷Y
    let w = el(&a, "[[]] []");
    assert_eq!(
        a.gl_mul(&x, &w),
        &a.concat_mul(&x, &w) + &a.post_lie_prod(&x, &w)
    );
}

// ---- exp / log ----

#[test]
fn exp_log_concat() {
    let a = post(6);
    assert_eq!(a.exp_concat(&a.zero()).unwrap(), a.one());
    let x = el(&a, "[]");
    assert_eq!(a.log_concat(&a.exp_concat(&x).unwrap()).unwrap(), x);
    let a2 = post(2);
    assert_eq!(
        a2.exp_concat(&el(&a2, "[]")).unwrap(),
        el(&a2, "1 + [] + 1/2*[] []")
    );
    assert!(matches!(
        a.exp_concat(&a.one()),
        Err(AlgebraError::Augmentation { .. })
    ));
    assert!(matches!(
        a.log_concat(&x),
        Err(AlgebraError::Augmentation { .. })
    ));
}

#[test]
fn exp_log_gl() {
    let a = post(5);
    assert_eq!(a.exp_gl(&a.zero()).unwrap(), a.one());
    let x = el(&a, "[]");
    assert_eq!(a.log_gl(&a.exp_gl(&x).unwrap()).unwrap(), x);
    let a2 = post(2);
    assert_eq!(
        a2.exp_gl(&el(&a2, "[]")).unwrap(),
        el(&a2, "1 + [] + 1/2*[] [] + 1/2*[[]]")
    );
}

// ---- Θ ----

#[test]
fn theta_examples() {
    let a = post(6);
    let (x, y, z) = (el(&a, "[]"), el(&a, "[[]]"), el(&a, "[[][]]"));
    assert_eq!(a.theta(&x), x);
    assert_eq!(a.theta(&a.one()), a.one());
    let xy = a.concat_mul(&x, &y);
    assert_eq!(a.theta(&xy), &xy + &a.post_lie_prod(&x, &y));
    // five-term expansion
    let xyz = a.concat_mul(&xy, &z);
    let expected = [
        xyz.clone(),
        a.concat_mul(&a.post_lie_prod(&x, &y), &z),
        a.concat_mul(&y, &a.post_lie_prod(&x, &z)),
        a.concat_mul(&x, &a.post_lie_prod(&y, &z)),
        a.post_lie_prod(&x, &a.post_lie_prod(&y, &z)),
    ]
    .iter()
    .fold(a.zero(), |acc, t| &acc + t);
    assert_eq!(a.theta(&xyz), expected);
}

#[test]
fn theta_partitions_agree_with_iterated_gl() {
    let a = post(6);
    for n in 1..=6 {
        let word = vec![PlanarTree::vertex(); n];
        let m = a.monomial(word);
        let e = a.word(m.word().to_vec());
        assert_eq!(
            a.theta_via_partitions(&m).unwrap(),
            a.theta(&e),
            "length {n}"
        );
    }
    // mixed letters
    let w = a.parse_word("[[]] [] [[]]").unwrap();
    let m = a.monomial(w.clone());
    assert_eq!(a.theta_via_partitions(&m).unwrap(), a.theta(&a.word(w)));
}

#[test]
fn theta_inverse_examples() {
    let a = post(6);
    let x = el(&a, "[]");
    assert_eq!(a.theta_inverse(&x), x);
    let xy = el(&a, "[] [[]]");
    let b = a.theta(&xy);
    assert_eq!(a.theta_inverse(&b), xy);
}

// ---- χ and friends ----

#[test]
fn chi_order_two() {
    let a = post(2);
    let chi = a.post_lie_magnus(&a.generator()).unwrap();
    assert_eq!(chi, el(&a, "[] - 1/2*[[]]"));
}

#[test]
fn chi_order_three() {
    let a = post(3);
    let chi = a.post_lie_magnus(&a.generator()).unwrap();
    let expected = el(
        &a,
        "[] - 1/2*[[]] + 1/3*[[[]]] + 1/12*[[][]] + 1/12*[[]] [] - 1/12*[] [[]]",
    );
    assert_eq!(chi, expected);
}

#[test]
fn chi_rejects_non_primitive() {
    let a = post(4);
    assert!(matches!(
        a.post_lie_magnus(&el(&a, "[] []")),
        Err(AlgebraError::NotPrimitive(_))
    ));
    assert!(a.inverse_magnus(&el(&a, "1 + []")).is_err());
}

#[test]
fn chi_recursion_base_cases() {
    let a = post(1);
    assert_eq!(
        a.post_lie_magnus_recursive(&a.generator()).unwrap(),
        a.generator()
    );
    let a = post(2);
    let x = a.generator();
    let expected = &x - &a.post_lie_prod(&x, &x).scale(&rational(1, 2));
    assert_eq!(a.post_lie_magnus_recursive(&x).unwrap(), expected);
}

#[test]
fn chi_recursion_matches_log_exp() {
    let a = post(5);
    let x = a.generator();
    assert_eq!(
        a.post_lie_magnus_recursive(&x).unwrap(),
        a.post_lie_magnus(&x).unwrap()
    );
    // a non-generator primitive input
    let y = el(&a, "[] + 1/3*[[]] + [[]] [] - [] [[]]");
    assert_eq!(
        a.post_lie_magnus_recursive(&y).unwrap(),
        a.post_lie_magnus(&y).unwrap()
    );
}

#[test]
fn phi_examples() {
    let a = post(2);
    assert_eq!(
        a.inverse_magnus(&a.generator()).unwrap(),
        el(&a, "[] + 1/2*[[]]")
    );
    let a = post(6);
    let x = a.generator();
    let chi = a.post_lie_magnus(&x).unwrap();
    assert_eq!(a.inverse_magnus(&chi).unwrap(), x);
    assert_eq!(
        a.post_lie_magnus(&a.inverse_magnus(&x).unwrap()).unwrap(),
        x
    );
}

#[test]
fn upsilon_examples() {
    let a = post(3);
    let y = el(&a, "[[]] + [] [[]]");
    assert_eq!(a.upsilon(&a.zero(), &y), y);
    let x = a.generator();
    assert_eq!(
        a.upsilon(&x, &x),
        el(&a, "[] + [[]] + 1/2*[[][]] + 1/2*[[[]]]")
    );
}

#[test]
fn upsilon_is_multiplicative() {
    let a = post(5);
    let x = el(&a, "[] + 1/2*[[]]");
    let y = el(&a, "[] - [[]]");
    let z = el(&a, "[[]] + 2*[]");
    let lhs = a.upsilon(&x, &a.concat_mul(&y, &z));
    let rhs = a.concat_mul(&a.upsilon(&x, &y), &a.upsilon(&x, &z));
    assert!((&lhs - &rhs).is_zero());
}

#[test]
fn star_examples() {
    let a = post(4);
    let x = a.generator();
    assert_eq!(a.star_group(&x, &a.zero()).unwrap(), x);
    let a2 = post(2);
    let g = a2.generator();
    assert_eq!(a2.star_group(&g, &g).unwrap(), el(&a2, "2*[] + [[]]"));
    // a★b = a + b + a▷b + ½[a,b] + higher
    let p = el(&a2, "[]");
    let q = el(&a2, "[[]]");
    let p1 = post(3);
    let (pa, qa) = (p1.project(&p), p1.project(&q));
    let got = p1.star_group(&pa, &qa).unwrap();
    let expected = &(&(&pa + &qa) + &p1.post_lie_prod(&pa, &qa))
        + &p1.hbracket(&pa, &qa).scale(&rational(1, 2));
    assert_eq!(got, expected);
}

#[test]
fn star_consistency() {
    let a = post(4);
    for (sa, sb) in [("[]", "[]"), ("[]", "[[]]"), ("[] - [[]]", "2*[] + [[]]")] {
        let (x, y) = (el(&a, sa), el(&a, sb));
        let chi = a.post_lie_magnus(&x).unwrap();
        let rhs = a.bch_h(&x, &a.upsilon(&chi, &y)).unwrap();
        assert_eq!(a.star_group(&x, &y).unwrap(), rhs, "{sa} ★ {sb}");
    }
}

#[test]
fn bch_low_order() {
    let a = post(6);
    let x = el(&a, "[]");
    assert_eq!(a.bch_h(&x, &a.zero()).unwrap(), x);
    let (p, q) = (el(&a, "[]"), el(&a, "[[]]"));
    let bch = a.bch_h(&p, &q).unwrap();
    let pq = a.hbracket(&p, &q);
    let expected_to_4 = &(&(&p + &q) + &pq.scale(&rational(1, 2)))
        + &(&a.hbracket(&p, &pq) + &a.hbracket(&q, &a.hbracket(&q, &p))).scale(&rational(1, 12));
    // degree 4 and 5 contain only the terms shown above (brackets with [[]] have degree 4+)
    assert_eq!(bch.truncated(4), expected_to_4.truncated(4));
}

#[test]
fn bch_g_of_zero() {
    let a = post(4);
    let x = el(&a, "[[]] + []");
    assert_eq!(a.bch_g(&x, &a.zero()).unwrap(), x);
}

#[test]
fn gbracket_examples() {
    let a = post(6);
    let x = el(&a, "[]");
    assert!(a.gbracket(&x, &x).is_zero());
    let y = el(&a, "[[]]");
    let expected = &(&el(&a, "[[[]]] + [[][]]") - &el(&a, "[[[]]]")) + &a.hbracket(&x, &y);
    assert_eq!(a.gbracket(&x, &y), expected);
}

#[test]
fn primitive_and_grouplike() {
    let a = post(5);
    assert!(a.is_primitive(&el(&a, "[[][]]")));
    assert!(!a.is_primitive(&el(&a, "[] []")));
    assert!(a.is_primitive(&el(&a, "[] [[]] - [[]] []")));
    assert!(!a.is_primitive(&a.one()));
    assert!(a.is_grouplike(&a.exp_concat(&a.generator()).unwrap()));
    assert!(a.is_grouplike(&a.exp_gl(&a.generator()).unwrap()));
    assert!(!a.is_grouplike(&el(&a, "1 + []")));
}

#[test]
fn outputs_stay_primitive() {
    let a = post(5);
    let x = a.generator();
    let y = el(&a, "[[]] - 1/2*[]");
    assert!(a.is_primitive(&a.post_lie_magnus(&x).unwrap()));
    assert!(a.is_primitive(&a.inverse_magnus(&x).unwrap()));
    assert!(a.is_primitive(&a.gbracket(&x, &y)));
    assert!(a.is_primitive(&a.bch_h(&x, &y).unwrap()));
    assert!(a.is_primitive(&a.bch_g(&x, &y).unwrap()));
    assert!(a.is_primitive(&a.star_group(&x, &y).unwrap()));
}

#[test]
fn monomial_counts_are_catalan() {
    // Independent Catalan recurrence.
    let mut catalan = vec![1u64];
    for m in 1..=7 {
        catalan.push((0..m).map(|i| catalan[i] * catalan[m - 1 - i]).sum());
    }
    // words of total degree n over trees, counted by composition
    for n in 1..=7usize {
        let mut count = vec![0u64; n + 1];
        count[0] = 1;
        for d in 1..=n {
            for k in 1..=d {
                count[d] += count[d - k] * enumerate_trees(k).unwrap().len() as u64;
            }
        }
        assert_eq!(count[n], catalan[n], "degree {n}");
    }
}

// ---- pre-Lie mode ----

#[test]
fn prelie_magnus_low_orders() {
    let a = pre(3);
    let x = a.generator();
    let chi = a.prelie_magnus(&x).unwrap();
    let xx = a.post_lie_prod(&x, &x);
    let expected = &(&(&x - &xx.scale(&rational(1, 2)))
        + &a.post_lie_prod(&xx, &x).scale(&rational(1, 4)))
        + &a.post_lie_prod(&x, &xx).scale(&rational(1, 12));
    assert_eq!(chi, expected);
    assert_eq!(a.post_lie_magnus(&x).unwrap(), chi);
}

#[test]
fn prelie_magnus_requires_prelie_mode() {
    let a = post(3);
    assert!(matches!(
        a.prelie_magnus(&a.generator()),
        Err(AlgebraError::WrongMode { .. })
    ));
}

#[test]
fn prelie_degeneration_through_six() {
    let a = pre(6);
    let x = a.generator();
    let chi = a.post_lie_magnus(&x).unwrap();
    assert_eq!(a.prelie_magnus(&x).unwrap(), chi);
    let phi = a.inverse_magnus(&x).unwrap();
    assert_eq!(phi, a.cumulant_series(&x).unwrap());
    assert_eq!(a.prelie_magnus(&phi).unwrap(), x);
    // abelianizing the planar χ gives the pre-Lie χ
    let p = post(6);
    assert_eq!(a.project(&p.post_lie_magnus(&p.generator()).unwrap()), chi);
}

#[test]
fn prelie_words_are_commutative() {
    let a = pre(5);
    let (x, y) = (el(&a, "[]"), el(&a, "[[]]"));
    assert!(a.hbracket(&x, &y).is_zero());
    assert_eq!(el(&a, "[[]] []"), el(&a, "[] [[]]"));
    assert_eq!(el(&a, "[[[]][]]"), el(&a, "[[][[]]]"));
}

#[test]
#[should_panic(expected = "cannot mix")]
fn mixing_modes_panics() {
    let p = post(3);
    let q = pre(3);
    let _ = &p.generator() + &q.generator();
}

// ---- orders ----

#[test]
fn order_is_minimum_of_inputs() {
    let a = post(6);
    let x = a.generator();
    let y = a.generator().with_order(3);
    assert_eq!(a.concat_mul(&x, &y).order(), 3);
    assert_eq!(a.gl_mul(&x, &y).order(), 3);
    assert_eq!((&x + &y).order(), 3);
    assert!(Algebra::post_lie(10).is_err());
    assert!(Algebra::post_lie(0).is_err());
}

#[test]
fn parse_errors_carry_position() {
    let a = post(4);
    match a.parse_element("[] + [[]") {
        Err(AlgebraError::Parse { position, .. }) => assert_eq!(position, 8),
        other => panic!("unexpected {other:?}"),
    }
    match a.parse_element("[] [x]") {
        Err(AlgebraError::Parse { position, .. }) => assert_eq!(position, 4),
        other => panic!("unexpected {other:?}"),
    }
    assert!(a.parse_element("x*[]").is_err());
    assert_eq!(el(&a, "-1/2*[[]] + []").to_text(), "[] - 1/2*[[]]");
}

// ---- structural identities on random inputs ----

fn primitive_basis(a: &Algebra) -> Vec<Element> {
    vec![
        el(a, "[]"),
        el(a, "[[]]"),
        el(a, "[[][]]"),
        el(a, "[[[]]]"),
        el(a, "[] [[]] - [[]] []"),
    ]
}

fn combo(a: &Algebra, basis: &[Element], coeffs: &[i64]) -> Element {
    basis
        .iter()
        .zip(coeffs)
        .fold(a.zero(), |acc, (b, &c)| &acc + &b.scale(&rational(c, 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pl1_derivation(ca in prop::collection::vec(-3i64..4, 2),
                      cb in prop::collection::vec(-3i64..4, 2),
                      cc in prop::collection::vec(-3i64..4, 2)) {
        let a = post(6);
        let basis = primitive_basis(&a);
        let (x, y, z) = (combo(&a, &basis[..2], &ca), combo(&a, &basis[..2], &cb), combo(&a, &basis[..2], &cc));
        let lhs = a.post_lie_prod(&x, &a.hbracket(&y, &z));
        let rhs = &a.hbracket(&a.post_lie_prod(&x, &y), &z) + &a.hbracket(&y, &a.post_lie_prod(&x, &z));
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn pl2_bracket_action(ca in prop::collection::vec(-3i64..4, 3),
                          cb in prop::collection::vec(-3i64..4, 3),
                          cc in prop::collection::vec(-3i64..4, 2)) {
        let a = post(7);
        let basis = primitive_basis(&a);
        let (x, y) = (combo(&a, &basis[..3], &ca), combo(&a, &basis[..3], &cb));
        let z = combo(&a, &basis[..2], &cc);
        let lhs = a.post_lie_prod(&a.hbracket(&x, &y), &z);
        let rhs = &(&(&a.post_lie_prod(&x, &a.post_lie_prod(&y, &z))
            - &a.post_lie_prod(&a.post_lie_prod(&x, &y), &z))
            - &a.post_lie_prod(&y, &a.post_lie_prod(&x, &z)))
            + &a.post_lie_prod(&a.post_lie_prod(&y, &x), &z);
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn theta_round_trip(coeffs in prop::collection::vec(-3i64..4, 6)) {
        let a = post(4);
        let words = ["[]", "[] []", "[[]] []", "[] [] [[]]", "[[][]]", "[] [[]]"];
        let e = words.iter().zip(&coeffs).fold(a.zero(), |acc, (w, &c)| {
            &acc + &el(&a, w).scale(&rational(c, 1))
        });
        prop_assert_eq!(a.theta_inverse(&a.theta(&e)), e);
    }

    #[test]
    fn jacobi_for_hbracket(ca in prop::collection::vec(-3i64..4, 2),
                           cb in prop::collection::vec(-3i64..4, 2),
                           cc in prop::collection::vec(-3i64..4, 2)) {
        let a = post(6);
        let basis = [el(&a, "[]"), el(&a, "[[]]")];
        let (x, y, z) = (combo(&a, &basis, &ca), combo(&a, &basis, &cb), combo(&a, &basis, &cc));
        let j = &(&a.hbracket(&x, &a.hbracket(&y, &z)) + &a.hbracket(&y, &a.hbracket(&z, &x)))
            + &a.hbracket(&z, &a.hbracket(&x, &y));
        prop_assert!(j.is_zero());
    }
}

#[test]
fn gl_is_associative_on_small_monomials() {
    let a = post(5);
    let mut basis = Vec::new();
    for d in 1..=3 {
        for t in enumerate_trees(d).unwrap() {
            basis.push(a.tree(t));
        }
    }
    basis.push(el(&a, "[] []"));
    basis.push(el(&a, "[] [[]]"));
    basis.push(el(&a, "[[]] []"));
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let l = a.gl_mul(&a.gl_mul(x, y), z);
                let r = a.gl_mul(x, &a.gl_mul(y, z));
                assert_eq!(l, r, "({x})*({y})*({z})");
            }
        }
    }
}

#[test]
fn theta_is_multiplicative() {
    let a = post(5);
    let words = ["[]", "[] []", "[[]]", "[[]] []", "[] [[]]", "[[][]]"];
    for u in words {
        for v in words {
            let (x, y) = (el(&a, u), el(&a, v));
            assert_eq!(
                a.theta(&a.concat_mul(&x, &y)),
                a.gl_mul(&a.theta(&x), &a.theta(&y)),
                "{u} | {v}"
            );
        }
    }
}

#[test]
fn gl_sign_fault_breaks_associativity() {
    let a = post(4).with_fault(Fault::GlSign);
    let x = a.generator();
    let l = a.gl_mul(&a.gl_mul(&x, &x), &x);
    let r = a.gl_mul(&x, &a.gl_mul(&x, &x));
    assert_ne!(l, r);
}

#[test]
fn chi_four_matches_bracket_form() {
    // Order-4 part written with ▷ and the second bracket:
    // −1/24 ( ((x▷x)▷x)▷x + (x▷(x▷x))▷x + 2 (x▷x)▷(x▷x) + x▷((x▷x)▷x)
    //         + x▷(x▷(x▷x)) − ⟦x, x▷(x▷x)⟧ − ⟦x, (x▷x)▷x⟧ )
    let a = post(4);
    let x = a.generator();
    let tri = |u: &Element, v: &Element| a.post_lie_prod(u, v);
    let xx = tri(&x, &x);
    let xx_x = tri(&xx, &x);
    let x_xx = tri(&x, &xx);
    let terms = [
        tri(&xx_x, &x),
        tri(&x_xx, &x),
        tri(&xx, &xx).scale(&rational(2, 1)),
        tri(&x, &xx_x),
        tri(&x, &x_xx),
        -a.gbracket(&x, &x_xx),
        -a.gbracket(&x, &xx_x),
    ];
    let sum = terms.iter().fold(a.zero(), |acc, t| &acc + t);
    let chi = a.post_lie_magnus(&x).unwrap();
    assert_eq!(chi.degree_part(4), sum.scale(&rational(-1, 24)));
}

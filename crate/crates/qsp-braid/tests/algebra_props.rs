//! Structural invariants of the root datum, the quantum group and the
//! Lusztig braid group action, checked on random elements.

use proptest::prelude::*;
use qsp_braid::coeffield::FieldElem;
use qsp_braid::expr::{Evaluator, Expr};
use qsp_braid::lusztig::{apply_t, apply_t_inv, apply_t_word, BraidWord};
use qsp_braid::rep_oracle::RepAlgebra;
use qsp_braid::rootdata::{alpha, reflect, reflect_word, tau_weight, varpi, SatakeDatum, Weight};
use qsp_braid::uqcore::elim::Elim;
use qsp_braid::uqcore::{Algebra, NormalElement, Pbw};

fn weight(n: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(-3i32..=3, n).prop_map(|c| Weight::from_coords(&c))
}

/// A random generator E_i, F_i or K_{±ϖ_i}.
fn generator(n: usize) -> impl Strategy<Value = Expr> {
    (0usize..4, 1..=n).prop_map(move |(kind, i)| match kind {
        0 => Expr::e(i),
        1 => Expr::f(i),
        2 => Expr::k(varpi(n, i)),
        _ => Expr::k(varpi(n, i).neg()),
    })
}

/// A random sum of up to three short monomials with small coefficients.
fn element(n: usize) -> impl Strategy<Value = Expr> {
    prop::collection::vec((-2i32..=2, prop::collection::vec(generator(n), 0..4)), 1..4).prop_map(|terms| {
        Expr::sum(
            terms
                .into_iter()
                .map(|(k, word)| Expr::scale(FieldElem::q_pow(k), Expr::prod(word)))
                .collect(),
        )
    })
}

fn pbw(e: &Expr, n: usize) -> NormalElement {
    Evaluator::new(&Pbw { n }).eval(e).expect("free expressions evaluate")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reflections_are_involutions(n in 2usize..6, i in 1usize..6, mu in weight(5)) {
        let mu = Weight::from_coords(&mu.coords()[..n]);
        let i = 1 + (i - 1) % n;
        prop_assert_eq!(reflect(i, &reflect(i, &mu).unwrap()).unwrap(), mu.clone());
        // σ_i negates α_i and fixes ϖ_j for j ≠ i.
        prop_assert_eq!(reflect(i, &alpha(n, i)).unwrap(), alpha(n, i).neg());
        for j in (1..=n).filter(|&j| j != i) {
            prop_assert_eq!(reflect(i, &varpi(n, j)).unwrap(), varpi(n, j));
        }
    }

    #[test]
    fn reflections_satisfy_braid_relations(mu in weight(4), i in 1usize..4) {
        prop_assert_eq!(reflect_word(&[i, i + 1, i], &mu), reflect_word(&[i + 1, i, i + 1], &mu));
        if i + 2 <= 4 {
            prop_assert_eq!(reflect_word(&[i, i + 2], &mu), reflect_word(&[i + 2, i], &mu));
        }
    }

    #[test]
    fn theta_is_a_linear_involution(idx in 0usize..5, mu in weight(7), nu in weight(7)) {
        let (n, r) = [(3, 1), (5, 2), (6, 2), (7, 3), (7, 2)][idx];
        let d = SatakeDatum::new(n, r).unwrap();
        let mu = Weight::from_coords(&mu.coords()[..n]);
        let nu = Weight::from_coords(&nu.coords()[..n]);
        prop_assert_eq!(d.theta(&d.theta(&mu)), mu.clone());
        prop_assert_eq!(d.theta(&mu.add(&nu)), d.theta(&mu).add(&d.theta(&nu)));
        prop_assert_eq!(tau_weight(&tau_weight(&mu)), mu.clone());
        // μ + θ(μ) is always θ-fixed.
        prop_assert!(d.theta_fixed(&mu.add(&d.theta(&mu))));
    }

    #[test]
    fn pbw_multiplication_is_associative(a in element(3), b in element(3), c in element(3)) {
        let (a, b, c) = (pbw(&a, 3), pbw(&b, 3), pbw(&c, 3));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn pbw_terms_are_homogeneous_for_homogeneous_input(word in prop::collection::vec(generator(3), 1..6)) {
        let x = pbw(&Expr::prod(word), 3);
        let degrees = x.term_degrees();
        prop_assert!(degrees.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn elimination_oracle_agrees_with_pbw(a in element(2), b in element(2)) {
        let n = 2;
        let commutator = Expr::sum(vec![a.mul(&b), b.mul(&a).neg()]);
        let elim = Elim::new(n);
        let e = Evaluator::new(&elim).eval(&commutator).unwrap();
        prop_assert_eq!(elim.is_zero(&e), pbw(&commutator, n).is_zero());
        let distributed = Expr::sum(vec![a.mul(&a.add(&b)), a.mul(&a).neg(), a.mul(&b).neg()]);
        prop_assert!(elim.is_zero(&Evaluator::new(&elim).eval(&distributed).unwrap()));
    }

    #[test]
    fn representation_is_multiplicative(a in element(3), b in element(3), power in 1u32..3) {
        let rep = RepAlgebra::new(3, power).unwrap();
        let (x, y) = (pbw(&a, 3), pbw(&b, 3));
        prop_assert_eq!(rep.lift_normal(&x.mul(&y)), rep.lift_normal(&x).mul(&rep.lift_normal(&y)));
        prop_assert_eq!(rep.lift(&a.mul(&b)).unwrap(), rep.lift_normal(&x.mul(&y)));
    }

    #[test]
    fn braid_operators_are_algebra_automorphisms(a in element(3), b in element(3), i in 1usize..=3) {
        let (x, y) = (pbw(&a, 3), pbw(&b, 3));
        let tx = apply_t(i, &x).unwrap();
        prop_assert_eq!(apply_t(i, &x.mul(&y)).unwrap(), tx.mul(&apply_t(i, &y).unwrap()));
        prop_assert_eq!(apply_t_inv(i, &tx).unwrap(), x.clone());
        prop_assert_eq!(apply_t(i, &apply_t_inv(i, &x).unwrap()).unwrap(), x);
    }

    #[test]
    fn braid_operators_satisfy_braid_relations(a in element(3)) {
        let x = pbw(&a, 3);
        let t = |w: &[usize]| apply_t_word(&BraidWord::positive(w), &x).unwrap();
        prop_assert_eq!(t(&[1, 2, 1]), t(&[2, 1, 2]));
        prop_assert_eq!(t(&[2, 3, 2]), t(&[3, 2, 3]));
        prop_assert_eq!(t(&[1, 3]), t(&[3, 1]));
    }

    #[test]
    fn braid_operators_act_on_the_torus_by_reflections(mu in weight(4), i in 1usize..=4) {
        let k = NormalElement::gen_k(4, &mu);
        prop_assert_eq!(apply_t(i, &k).unwrap(), NormalElement::gen_k(4, &reflect(i, &mu).unwrap()));
    }
}

#[test]
fn braid_words_reject_out_of_range_nodes() {
    let x = NormalElement::gen_e(3, 1);
    assert!(apply_t(4, &x).is_err());
    assert!(apply_t_word(&BraidWord::positive(&[1, 0]), &x).is_err());
}

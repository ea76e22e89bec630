//! Field axioms for the rational-function coefficient field, and the
//! homomorphism property of specialization and modular evaluation.

use std::collections::HashMap;

use proptest::prelude::*;
use qsp_braid::coeffield::{eta_sym, t_sym, FieldElem, Symbol, U};

fn laurent() -> impl Strategy<Value = FieldElem> {
    prop::collection::vec((-3i64..=3, -3i16..=3, 0i16..=2, 0usize..2), 0..4).prop_map(|terms| {
        terms.into_iter().fold(FieldElem::zero(), |acc, (c, a, b, which)| {
            let s = if which == 0 { t_sym(1) } else { eta_sym(2) };
            let m = FieldElem::monomial(U, a, c).mul(&FieldElem::monomial(s, b, 1));
            acc.add(&m)
        })
    })
}

fn elem() -> impl Strategy<Value = FieldElem> {
    (laurent(), laurent()).prop_map(|(a, b)| if b.is_zero() { a.clone() } else { a.div(&b).expect("nonzero divisor") })
}

fn nonzero() -> impl Strategy<Value = FieldElem> {
    elem().prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_an_abelian_group(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&FieldElem::zero()), a.clone());
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.sub(&b), a.add(&b.neg()));
    }

    #[test]
    fn multiplication_is_commutative_associative_distributive(a in elem(), b in elem(), c in elem()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&FieldElem::one()), a.clone());
    }

    #[test]
    fn nonzero_elements_are_invertible(a in nonzero(), b in nonzero()) {
        prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
        prop_assert_eq!(a.pow(-2).unwrap(), a.mul(&a).inv().unwrap());
    }

    #[test]
    fn equal_values_have_equal_representations(a in elem(), b in nonzero()) {
        // (a·b)/b is canonicalized back to exactly a.
        let round = a.mul(&b).div(&b).unwrap();
        prop_assert_eq!(format!("{round:?}"), format!("{a:?}"));
    }

    #[test]
    fn specialization_is_a_ring_homomorphism(a in elem(), b in elem(), v in 2i64..6) {
        let bind: HashMap<Symbol, FieldElem> =
            [(t_sym(1), FieldElem::from_int(v)), (eta_sym(2), FieldElem::q_pow(1))].into_iter().collect();
        let (Ok(sa), Ok(sb)) = (a.specialize(&bind), b.specialize(&bind)) else { return Ok(()); };
        if let Ok(sum) = a.add(&b).specialize(&bind) {
            prop_assert_eq!(sum, sa.add(&sb));
        }
        if let Ok(prod) = a.mul(&b).specialize(&bind) {
            prop_assert_eq!(prod, sa.mul(&sb));
        }
    }

    #[test]
    fn modular_evaluation_is_a_ring_homomorphism(a in elem(), b in elem(), x in 2u64..1000) {
        const P: u64 = 1_000_000_007;
        let values = |s: Symbol| if s == U { x } else { x + s as u64 + 3 };
        let (Some(ea), Some(eb)) = (a.eval_mod(P, &values), b.eval_mod(P, &values)) else { return Ok(()); };
        if let Some(s) = a.add(&b).eval_mod(P, &values) {
            prop_assert_eq!(s, (ea + eb) % P);
        }
        if let Some(m) = a.mul(&b).eval_mod(P, &values) {
            prop_assert_eq!(m, ea * eb % P);
        }
    }

    #[test]
    fn inflation_is_multiplicative(a in elem(), b in elem(), k in 1i16..4) {
        prop_assert_eq!(a.mul(&b).inflate(U, k), a.inflate(U, k).mul(&b.inflate(U, k)));
        prop_assert_eq!(a.add(&b).inflate(U, k), a.inflate(U, k).add(&b.inflate(U, k)));
    }
}

#[test]
fn binding_the_base_variable_is_rejected() {
    let bind: HashMap<Symbol, FieldElem> = [(U, FieldElem::one())].into_iter().collect();
    assert!(FieldElem::q().specialize(&bind).is_err());
}

#[test]
fn division_by_zero_is_an_error() {
    assert!(FieldElem::q().div(&FieldElem::zero()).is_err());
    assert!(FieldElem::zero().inv().is_err());
}

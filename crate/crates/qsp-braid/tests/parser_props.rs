//! Rendering followed by parsing reproduces an expression exactly.

use proptest::prelude::*;
use qsp_braid::braidaction::MapSet;
use qsp_braid::coeffield::{t_sym, FieldElem};
use qsp_braid::expr::Expr;
use qsp_braid::parser::{parse, Scope};
use qsp_braid::qsp::Params;
use qsp_braid::rootdata::{SatakeDatum, Weight};
use qsp_braid::suites::{suite_checks, Ctx, Suite};

const N: usize = 5;

fn scalar() -> impl Strategy<Value = FieldElem> {
    (-3i64..=3, -3i16..=3, 0i16..=2).prop_filter_map("nonzero", |(c, a, b)| {
        (c != 0).then(|| FieldElem::monomial(0, a, c).mul(&FieldElem::monomial(t_sym(2), b, 1)))
    })
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (1..=N).prop_map(Expr::e),
        (1..=N).prop_map(Expr::f),
        (1..=N).prop_map(Expr::b),
        prop::collection::vec(-2i32..=2, N).prop_map(|c| Expr::k(Weight::from_coords(&c))),
        scalar().prop_map(Expr::scalar),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::prod),
            (scalar(), inner.clone()).prop_map(|(c, x)| Expr::scale(c, x)),
            (inner.clone(), inner.clone(), scalar()).prop_map(|(a, b, c)| Expr::qc(&a, &b, c)),
            (inner, 2u32..4).prop_map(|(x, k)| Expr::pow(&x, k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_then_parse_is_the_identity(e in expr()) {
        let src = e.render();
        let back = parse(&src, &Scope::rank(N)).map_err(|err| TestCaseError::fail(format!("{src}: {err}")))?;
        prop_assert_eq!(back.render(), src);
        prop_assert_eq!(back, e);
    }
}

/// Every expression built by the verification suites survives a textual
/// round trip, so a failing check can always be replayed through `qspb eval`.
#[test]
fn suite_expressions_round_trip() {
    let d = SatakeDatum::new(5, 2).unwrap();
    let ctx = Ctx::new(d);
    let maps = MapSet::new(Params::generic(d));
    let scope = Scope::with_maps(&maps);
    let mut seen = 0;
    for suite in [Suite::UqDefining, Suite::QspDefining, Suite::Lusztig, Suite::CommuteWx, Suite::Appendix] {
        for check in suite_checks(suite, &d) {
            let Some(Ok(e)) = check.expression(&ctx) else { continue };
            if e.dag_size() > 400 {
                continue;
            }
            let src = e.render();
            let back = parse(&src, &scope).unwrap_or_else(|err| panic!("{}: {err}\n{src}", check.id));
            assert_eq!(back.render(), src, "{}", check.id);
            seen += 1;
        }
    }
    assert!(seen > 50, "only {seen} expressions exercised");
}

use gwloc::parse::{parse_expr, render};
use gwloc_core::arith::Rational;
use gwloc_core::cohomology::Expr;
use proptest::prelude::*;

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..50).prop_map(|n| Expr::Num(Rational::from_integer(n.into()))),
        Just(Expr::BaseHyperplane),
        Just(Expr::Tautological),
        Just(Expr::Psi),
        Just(Expr::Lambda),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner, -3i64..6).prop_map(|(a, k)| Expr::pow(a, k)),
        ]
    })
}

proptest! {
    #[test]
    fn rendering_parses_back(e in expr()) {
        prop_assert_eq!(parse_expr(&render(&e)).unwrap(), e);
    }

    #[test]
    fn arbitrary_text_never_panics(s in "[-+*/^() 0-9Hhpsilambdax.]{0,40}") {
        if let Err(e) = parse_expr(&s) {
            prop_assert!(e.pos <= s.len());
        }
    }

    #[test]
    fn arbitrary_unicode_never_panics(s in "\\PC{0,24}") {
        let _ = parse_expr(&s);
    }
}

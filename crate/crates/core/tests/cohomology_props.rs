use gwloc_core::arith::{int, rat, RationalFunction};
use gwloc_core::cohomology::{
    chern_total, det_relative_tangent, pullback, pushforward, pushforward_monomial, segre, BundleSpec, CohClass, Ring,
};
use proptest::prelude::*;

fn spec() -> impl Strategy<Value = BundleSpec> {
    (0u32..=3, prop::collection::vec(-3i64..=4, 1..=4)).prop_map(|(m, a)| BundleSpec::new(m, a).unwrap())
}

fn class(ring: Ring) -> impl Strategy<Value = CohClass> {
    let (m, r) = (ring.base_dim(), ring.fiber_rank().max(1));
    prop::collection::vec((0..=m, 0..r, -5i64..6, 1i64..4), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(CohClass::zero(&ring), |acc, (a, b, n, d)| {
            acc.add(&CohClass::monomial(&ring, a, b, RationalFunction::constant(rat(n, d))))
        })
    })
}

fn base_and_bundle_class() -> impl Strategy<Value = (BundleSpec, CohClass, CohClass)> {
    spec().prop_flat_map(|s| {
        let base = Ring::Base { dim: s.base_dim };
        let bundle = Ring::Bundle(s.clone());
        (Just(s), class(base), class(bundle))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chern_times_segre_is_one(s in spec()) {
        let base = Ring::Base { dim: s.base_dim };
        let total_segre = (0..=s.base_dim).fold(CohClass::zero(&base), |acc, j| acc.add(&segre(&s, j)));
        prop_assert_eq!(chern_total(&s).mul(&total_segre), CohClass::one(&base));
    }

    #[test]
    fn reduction_commutes_with_pushforward(s in spec(), a in 0u32..3, extra in 0u32..4) {
        let ring = Ring::Bundle(s.clone());
        let b = s.rank() - 1 + extra;
        let reduced = CohClass::monomial(&ring, a, b, RationalFunction::one());
        prop_assert_eq!(pushforward(&reduced).unwrap(), pushforward_monomial(&s, a, b));
        if extra == 1 && a == 0 {
            prop_assert_eq!(pushforward(&reduced).unwrap(), segre(&s, 1));
        }
    }

    #[test]
    fn projection_formula((s, beta, c) in base_and_bundle_class()) {
        let lhs = pushforward(&pullback(&s, &beta).mul(&c)).unwrap();
        let rhs = beta.mul(&pushforward(&c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn relative_tangent_has_degree_rank_on_fiber_lines(s in spec()) {
        prop_assume!(s.rank() >= 2);
        let det = det_relative_tangent(&s);
        prop_assert_eq!(det.coefficient(0, 1), RationalFunction::constant(int(s.rank() as i64)));
    }
}

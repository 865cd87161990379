use gwloc_core::cohomology::Expr;
use gwloc_core::engine::EngineOptions;
use gwloc_core::error::Error;
use gwloc_core::identities::{check_cor_main, check_rel1, IdentityCase, IdentityId};
use proptest::prelude::*;

fn h_power(k: u32) -> Expr {
    Expr::pow(Expr::BaseHyperplane, k as i64)
}

fn small_case() -> impl Strategy<Value = (Vec<i64>, i64, Vec<u32>)> {
    prop_oneof![(Just(vec![0, 0]), 1i64..=2), (Just(vec![0, 1]), Just(1i64)), (Just(vec![1, 1]), Just(1i64)),]
        .prop_flat_map(|(a, d)| (Just(a), Just(d), prop::collection::vec(0u32..=1, 0..=2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn lift_identity_holds_and_implies_corollary((twists, d, sig) in small_case()) {
        let sigmas: Vec<Expr> = sig.iter().map(|&k| h_power(k)).collect();
        let opts = EngineOptions::default();
        let rel1 = IdentityCase::new(IdentityId::Rel1, 1, twists.clone(), d).unwrap().with_sigmas(sigmas.clone());
        let r1 = check_rel1(&rel1, &opts).unwrap();
        prop_assert!(r1.pass, "{}: {:?}", r1.label, r1.diff());
        let cor = IdentityCase::new(IdentityId::CorMain, 1, twists, d).unwrap().with_sigmas(sigmas);
        let rc = check_cor_main(&cor, &opts).unwrap();
        prop_assert!(rc.pass, "{}: {:?}", rc.label, rc.diff());
    }

    #[test]
    fn negative_twists_are_refused(mut twists in prop::collection::vec(-3i64..=3, 1..=4), i in 0usize..4, neg in -3i64..=-1) {
        let i = i % twists.len();
        twists[i] = neg;
        for id in IdentityId::ALL {
            prop_assert_eq!(
                IdentityCase::new(id, 1, twists.clone(), 1),
                Err(Error::NotGloballyGenerated(twists.clone()))
            );
        }
    }
}

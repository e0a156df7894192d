use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use selgame_core::families::{measure_exhaust, FamilySpec, Hsop, Member, ResidualSet, Schedule};
use selgame_core::functions::TestFunction;
use selgame_core::intervalsets::IntervalSet;
use selgame_core::numerics::{EpPoint, Rat};
use selgame_core::treesets::{samples, TreeAutomaton};

fn q(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((0i64..16, 1i64..5), 1..3).prop_map(|v| {
        IntervalSet::from_pairs(v.into_iter().map(|(l, w)| (q(l, 16), q((l + w).min(16), 16)))).unwrap()
    })
}

fn member() -> impl Strategy<Value = (FamilySpec, Member)> {
    prop_oneof![
        interval_set().prop_map(|s| (FamilySpec::Clo, Member::Interval(s))),
        interval_set().prop_map(|s| (FamilySpec::Measure, Member::Interval(s))),
        prop::collection::vec(any::<bool>(), 0..4).prop_map(|u| {
            (FamilySpec::Tree, Member::Tree(TreeAutomaton::full().cylinder(&u).unwrap()))
        }),
        Just((FamilySpec::Tree, Member::Tree(samples::mod3()))),
        interval_set().prop_map(|s| {
            (
                FamilySpec::Residual(Schedule::Dyadics),
                Member::Residual(ResidualSet { carrier: s, schedule: Schedule::Dyadics }),
            )
        }),
    ]
}

fn pick_point(sigma: &FamilySpec, m: &Member, i: usize) -> EpPoint {
    let pts = sigma.sample_points(m, m.resolution() + 3);
    pts[i % pts.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn refine_dense_gives_a_legal_subset_in_the_ball((sigma, p) in member(), i in 0usize..64, rd in 1i64..8) {
        let x = pick_point(&sigma, &p, i);
        let r = q(1, 1 << rd);
        let out = sigma.refine_dense(&p, &x, &r).unwrap();
        prop_assert!(sigma.is_legal(&out));
        prop_assert!(out.subset(&p));
        prop_assert!(out.within_ball(&x, &r));
    }

    #[test]
    fn hsop_success_is_exact((sigma, p) in member(), ad in 1i64..12) {
        let alpha = q(1, ad);
        for f in [TestFunction::ThomaeLike, TestFunction::Constant(Rat::one())] {
            if matches!(sigma, FamilySpec::Residual(_)) {
                continue;
            }
            if let Hsop::Refined(out) = sigma.hsop_refine(&f, &p, &alpha, 14).unwrap() {
                prop_assert!(sigma.value_diam(&f, &out).unwrap() < alpha);
                prop_assert!(out.subset(&p));
                prop_assert!(sigma.is_legal(&out));
            }
        }
    }

    #[test]
    fn dirichlet_witness_holds_on_every_subinterval(p in interval_set(), cells in prop::collection::vec((0usize..64, 0u64..5), 100)) {
        let f: TestFunction = "dirichlet 1 0".parse().unwrap();
        let Hsop::Witness(w) = FamilySpec::Clo.hsop_refine(&f, &Member::Interval(p.clone()), &q(1, 2), 14).unwrap() else {
            return Err(TestCaseError::fail("expected a witness"));
        };
        prop_assert_eq!(&w.set, &Member::Interval(p.clone()));
        for (i, extra) in cells {
            let subs = p.grid_cells(4 + extra);
            let sub = &subs[i % subs.len()];
            prop_assert!(sub.subset(&p));
            prop_assert_eq!(f.value_diam(sub), Rat::one());
        }
    }

    #[test]
    fn exhaustion_chain_inequalities(p in interval_set(), n in 1u32..=4) {
        let chain = measure_exhaust(&TestFunction::ThomaeLike, &p, n).unwrap();
        let total = p.lebesgue();
        let mut prev = p.clone();
        for (k, s) in chain.iter().enumerate() {
            let k = k as u32 + 1;
            prop_assert!(s.subset(&prev));
            prop_assert!(prev.lebesgue() - s.lebesgue() < &total / Rat::from_integer(BigInt::from(1u64 << (k + 1))));
            for c in s.components() {
                let piece = IntervalSet::interval(c.left().clone(), c.right().clone()).unwrap();
                prop_assert!(TestFunction::ThomaeLike.value_diam(&piece) < q(1, k as i64));
            }
            prev = s.clone();
        }
        prop_assert!(chain.last().unwrap().lebesgue() > &total / Rat::from_integer(2.into()));
        prop_assert!(!total.is_negative());
    }
}

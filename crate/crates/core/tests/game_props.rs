use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use selgame_core::families::FamilySpec;
use selgame_core::functions::TestFunction;
use selgame_core::game::{cauchy_holds, play, value_cauchy_holds, verify_transcript, Certificate, GameVariant, Player, Transcript};
use selgame_core::numerics::Rat;
use selgame_core::strategies::parse;
use selgame_core::transcript::{from_jsonl, to_jsonl};

fn run(sigma: &str, f: &str, variant: &str, i: &str, ii: &str, horizon: u32, seed: u64) -> (Transcript, Certificate) {
    let sigma: FamilySpec = sigma.parse().unwrap();
    let f: TestFunction = f.parse().unwrap();
    let variant: GameVariant = variant.parse().unwrap();
    let si = parse(i, Player::I).unwrap();
    let sii = parse(ii, Player::II).unwrap();
    play(&sigma, &f, &variant, si.as_ref(), sii.as_ref(), horizon, seed, 14).unwrap()
}

const PAIRS: [(&str, &str, &str); 3] = [
    ("clo", "thomae", "ii-hsop"),
    ("tree", "dirichlet 1 0", "ii-hsop"),
    ("measure", "thomae", "ii-hsop"),
];

const ADVERSARIES: [&str; 3] = ["random", "sweep", "dbar_probe"];

fn scenario() -> impl Strategy<Value = (usize, usize, String, u64)> {
    (0usize..5, 0usize..3, prop_oneof![Just("g1".to_string()), Just("gfin".to_string()), Just("gm 2".to_string()), Just("glambda squares".to_string())], any::<u64>())
}

fn setup(kind: usize, adv: usize, variant: &str) -> (&'static str, &'static str, String, String) {
    let a = ADVERSARIES[adv];
    match kind {
        0..=2 => {
            let (s, f, ii) = PAIRS[kind];
            let ii = if variant == "g1" { ii.to_string() } else { format!("transfer-ii {ii}") };
            (s, f, format!("adversary:{a}:3"), ii)
        }
        3 => ("residual dyadics", "dirichlet 1 0", format!("adversary:{a}:3"), "ii-baire".into()),
        _ => ("clo", "dirichlet 1 0", "i-gap alpha=1/2".into(), format!("adversary:{a}:3")),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn replay_matches_play((kind, adv, variant, seed) in scenario()) {
        let (s, f, i, ii) = setup(kind, adv, &variant);
        let (t, cert) = run(s, f, &variant, &i, &ii, 8, seed);
        prop_assert_eq!(verify_transcript(&t), cert.clone());
        let text = to_jsonl(&t, &cert);
        let (back, stored) = from_jsonl(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(stored, Some(cert.clone()));
        let (t2, cert2) = run(s, f, &variant, &i, &ii, 8, seed);
        prop_assert_eq!(to_jsonl(&t2, &cert2), text);
        match &cert {
            Certificate::Convergence { .. } => {
                prop_assert!(cauchy_holds(&t));
                prop_assert!(value_cauchy_holds(&t));
            }
            Certificate::Divergence { alpha, gaps } => {
                let quarter = alpha / Rat::from_integer(BigInt::from(4));
                let pts = t.points();
                for k in 1..pts.len() {
                    prop_assert!((t.f.eval(&pts[k - 1]) - t.f.eval(&pts[k])).abs() >= quarter);
                }
                prop_assert_eq!(gaps.len() + 1, pts.len());
            }
            other => prop_assert!(false, "unexpected certificate {:?}", other),
        }
    }
}

#[test]
fn ii_hsop_never_plays_illegally() {
    for (s, f, ii) in PAIRS {
        for seed in 0..50u64 {
            let adv = ADVERSARIES[seed as usize % 3];
            let (t, cert) = run(s, f, "g1", &format!("adversary:{adv}:{seed}"), ii, 32, seed);
            assert!(t.forfeit.is_none(), "{s} {f} seed {seed}: {:?}", t.forfeit);
            assert!(matches!(cert, Certificate::Convergence { .. }));
        }
    }
}

#[test]
fn gap_strategy_against_every_adversary() {
    for adv in ADVERSARIES {
        for variant in ["g1", "gfin", "gm 3"] {
            let (t, cert) = run("clo", "dirichlet 1 0", variant, "i-gap alpha=1/2", &format!("adversary:{adv}:1"), 16, 9);
            assert!(matches!(cert, Certificate::Divergence { .. }), "{adv} {variant}: {cert:?}");
            assert_eq!(t.points().len(), t.blocks().iter().map(|b| b.len()).sum::<usize>());
        }
    }
}

#[test]
fn transferred_gap_strategy_displaces_at_least_the_inner_gap() {
    for seed in 0..5 {
        let (t, _) = run("clo", "dirichlet 1 0", "g1", "transfer-i i-gap alpha=1/2", "adversary:random:2", 16, seed);
        let pts = t.points();
        for k in 1..pts.len() {
            let gap = (t.f.eval(&pts[k - 1]) - t.f.eval(&pts[k])).abs();
            assert!(selgame_core::numerics::dbar(&pts[k - 1], &pts[k], &t.f) >= gap);
            assert!(gap >= Rat::new(1.into(), 8.into()));
        }
    }
}

#[test]
fn transfer_ii_on_singletons_is_the_inner_strategy() {
    for seed in 0..5 {
        let (a, ca) = run("tree", "dirichlet 1 0", "gfin", &format!("adversary:sweep:{seed}:1"), "transfer-ii ii-hsop", 12, seed);
        let (b, cb) = run("tree", "dirichlet 1 0", "g1", &format!("adversary:sweep:{seed}"), "ii-hsop", 12, seed);
        assert_eq!(a.moves, b.moves);
        assert_eq!(ca, cb);
    }
}

#[test]
fn baire_points_avoid_the_schedule() {
    let schedule: selgame_core::families::Schedule = "dyadics".parse().unwrap();
    for seed in 0..6 {
        let adv = ADVERSARIES[seed as usize % 3];
        let (t, cert) = run("residual dyadics", "dirichlet 1 0", "g1", &format!("adversary:{adv}:{seed}"), "ii-baire", 16, seed);
        assert!(matches!(cert, Certificate::Convergence { .. }));
        let blocks = t.blocks();
        for k in 1..=blocks.len() as u64 {
            let fk = schedule.f_n(k);
            for b in &blocks[k as usize..] {
                assert!(b.iter().all(|x| !fk.contains(x)));
            }
        }
        let responses = t.responses();
        for (k, p) in responses.iter().enumerate().skip(1) {
            assert!(p.diameter() < selgame_core::numerics::pow2_neg(k as u64));
        }
    }
}

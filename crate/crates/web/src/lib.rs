//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every function returns a JSON string; failures come back as `{"error": ...}`.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use selgame_core::families::{fuse_perfect, DEFAULT_DEPTH_CAP};
use selgame_core::game::{value_gaps, Certificate};
use selgame_core::intervalsets::IntervalSet;
use selgame_core::numerics::{EpPoint, Rat};
use selgame_core::scenario::{preset_named, presets};
use selgame_core::transcript::to_jsonl;
use selgame_core::{Error, TestFunction, TreeAutomaton};

fn float(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn reply(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

#[wasm_bindgen]
pub fn preset_names() -> String {
    Value::from(presets().into_iter().map(|s| s.name).collect::<Vec<_>>()).to_string()
}

/// Plays a built-in preset; the reply lists Player I's points with their values,
/// Player II's sets as hull intervals, and the certificate.
#[wasm_bindgen]
pub fn play_preset(name: &str, seed: u32, horizon: u32) -> String {
    reply((|| {
        let mut s = preset_named(name).ok_or_else(|| Error::Parse(format!("no preset `{name}`")))?;
        s.seed = seed as u64;
        s.horizon = horizon;
        let (t, cert) = s.run()?;
        let points: Vec<Value> = t
            .blocks()
            .iter()
            .enumerate()
            .flat_map(|(k, b)| b.iter().map(move |x| (k + 1, x)))
            .map(|(round, x)| json!({ "round": round, "x": float(&x.to_rat()), "text": x.to_string(), "value": float(&t.f.eval(x)) }))
            .collect();
        let sets: Vec<Value> = t
            .responses()
            .iter()
            .map(|m| {
                let (l, r) = m.hull();
                json!({ "left": float(&l), "right": float(&r), "text": m.text() })
            })
            .collect();
        let gaps: Vec<f64> = value_gaps(&t.f, &t.points()).iter().map(float).collect();
        let summary = match &cert {
            Certificate::Convergence { facts } => format!("convergence: {} rounds, final radius {}", facts.len(), facts.last().map(|f| f.radius.to_string()).unwrap_or_default()),
            Certificate::Divergence { alpha, gaps } => format!("divergence: every one of {} gaps is at least {}", gaps.len(), alpha / Rat::from_integer(4.into())),
            Certificate::Undecided { rounds, .. } => format!("undecided after {rounds} rounds"),
            Certificate::Forfeit { player, index, rule } => format!("forfeit by {player:?} at move {index}: {rule}"),
        };
        Ok(json!({
            "name": s.name,
            "family": t.sigma.to_string(),
            "function": t.f.to_string(),
            "certificate": cert.kind(),
            "summary": summary,
            "points": points,
            "sets": sets,
            "gaps": gaps,
            "jsonl": to_jsonl(&t, &cert),
        }))
    })())
}

/// Values and exact oscillation on `[0,1]` at the odd dyadics of depth `depth`
/// and at the midpoints between them (which are not dyadic).
#[wasm_bindgen]
pub fn oscillation_profile(function: &str, depth: u32) -> String {
    reply((|| {
        let f: TestFunction = function.parse()?;
        let unit = IntervalSet::unit();
        let depth = depth.clamp(1, 10);
        let n = 1i64 << depth;
        let mut samples = Vec::new();
        for k in 0..=3 * n {
            let x = EpPoint::from_rat(&Rat::new(k.into(), (3 * n).into()))?;
            let osc = f.osc_at(&unit, &x)?;
            samples.push(json!({
                "x": float(&x.to_rat()),
                "text": x.to_string(),
                "value": float(&f.eval(&x)),
                "osc": float(&osc.lower),
                "exact": osc.is_exact(),
            }));
        }
        Ok(json!({ "function": f.to_string(), "samples": samples }))
    })())
}

/// The pieces of each fusion generation as hull intervals.
#[wasm_bindgen]
pub fn fusion_pieces(function: &str, generations: u32) -> String {
    reply((|| {
        let f: TestFunction = function.parse()?;
        let fusion = fuse_perfect(&f, &TreeAutomaton::full(), generations.min(5), DEFAULT_DEPTH_CAP)?;
        let gens: Vec<Value> = fusion
            .generations
            .iter()
            .map(|g| {
                Value::from(
                    g.iter()
                        .map(|t| {
                            let (l, r) = t.hull();
                            json!({ "left": float(&l), "right": float(&r), "diam": t.hull_diameter().to_string() })
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Ok(json!({ "function": f.to_string(), "generations": gens, "perfect": fusion.union.is_perfect().perfect }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn presets_play_to_their_expectation() {
        let v = parse(play_preset("cliquish-thomae", 3, 12));
        assert_eq!(v["certificate"], "convergence");
        assert_eq!(v["sets"].as_array().unwrap().len(), 13);
        let v = parse(play_preset("non-cliquish-dirichlet", 3, 12));
        assert_eq!(v["certificate"], "divergence");
        assert!(v["gaps"].as_array().unwrap().iter().all(|g| g.as_f64().unwrap() >= 0.125));
        assert!(parse(play_preset("nope", 1, 4))["error"].is_string());
    }

    #[test]
    fn profile_separates_dyadics() {
        let v = parse(oscillation_profile("thomae", 3));
        let s = v["samples"].as_array().unwrap();
        assert_eq!(s.len(), 25);
        // x = 1/3 is not dyadic: Thomae is continuous there.
        let third = s.iter().find(|p| p["text"] == ":01").unwrap();
        assert_eq!(third["osc"], 0.0);
        let half = s.iter().find(|p| p["text"] == "1:0").unwrap();
        assert!(half["osc"].as_f64().unwrap() > 0.0);
        assert!(parse(oscillation_profile("wobbly", 3))["error"].is_string());
    }

    #[test]
    fn fusion_generation_sizes() {
        let v = parse(fusion_pieces("dirichlet 1 0", 3));
        let g = v["generations"].as_array().unwrap();
        assert_eq!(g.iter().map(|x| x.as_array().unwrap().len()).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
        assert_eq!(v["perfect"], true);
    }
}

//! Named plays: which family, function, variant and strategies, and the expected outcome.

use serde::{Deserialize, Serialize};

use crate::families::FamilySpec;
use crate::functions::TestFunction;
use crate::game::{play, Certificate, GameVariant, Player, Transcript};
use crate::families::DEFAULT_DEPTH_CAP;
use crate::strategies;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub family: String,
    pub function: String,
    pub variant: String,
    #[serde(rename = "player_I", default, skip_serializing_if = "Option::is_none")]
    pub player_i: Option<String>,
    #[serde(rename = "player_II")]
    pub player_ii: String,
    pub horizon: u32,
    pub seed: u64,
    /// `convergence` or `divergence`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth_cap: Option<u32>,
}

/// Parsed and cross-checked scenario fields.
pub struct Prepared {
    pub sigma: FamilySpec,
    pub f: TestFunction,
    pub variant: GameVariant,
    pub player_i: Option<Box<dyn strategies::Strategy>>,
    pub player_ii: Box<dyn strategies::Strategy>,
    pub depth_cap: u32,
}

impl Scenario {
    pub fn prepare(&self) -> Result<Prepared, Error> {
        let sigma: FamilySpec = self.family.parse()?;
        let f: TestFunction = self.function.parse()?;
        let variant: GameVariant = self.variant.parse()?;
        let player_i = self.player_i.as_deref().map(|s| strategies::parse(s, Player::I)).transpose()?;
        let player_ii = strategies::parse(&self.player_ii, Player::II)?;
        if self.horizon == 0 {
            return Err(Error::Parse("horizon must be at least 1".into()));
        }
        if let Some(e) = &self.expect {
            if e != "convergence" && e != "divergence" {
                return Err(Error::Parse(format!("expect must be convergence or divergence, not `{e}`")));
            }
        }
        if self.player_ii.starts_with("ii-baire") && !sigma.is_residual() {
            return Err(Error::Parse("ii-baire needs a residual family".into()));
        }
        Ok(Prepared { sigma, f, variant, player_i, player_ii, depth_cap: self.depth_cap.unwrap_or(DEFAULT_DEPTH_CAP) })
    }

    pub fn run(&self) -> Result<(Transcript, Certificate), Error> {
        let p = self.prepare()?;
        let player_i = p.player_i.ok_or_else(|| Error::Parse("scenario has no player_I".into()))?;
        play(&p.sigma, &p.f, &p.variant, player_i.as_ref(), p.player_ii.as_ref(), self.horizon, self.seed, p.depth_cap)
    }

    /// Whether a certificate is the outcome the scenario expects.
    pub fn matches(&self, cert: &Certificate) -> bool {
        self.expect.as_deref().is_none_or(|e| e == cert.kind())
    }
}

fn preset(name: &str, family: &str, function: &str, i: &str, ii: &str, expect: &str) -> Scenario {
    Scenario {
        name: name.into(),
        family: family.into(),
        function: function.into(),
        variant: "g1".into(),
        player_i: Some(i.into()),
        player_ii: ii.into(),
        horizon: 32,
        seed: 1,
        expect: Some(expect.into()),
        depth_cap: None,
    }
}

/// Built-in scenarios, one per predicted winner of the standard examples.
pub fn presets() -> Vec<Scenario> {
    vec![
        preset("cliquish-thomae", "clo", "thomae", "adversary:random:0", "ii-hsop", "convergence"),
        preset("non-cliquish-dirichlet", "clo", "dirichlet 1 0", "i-gap alpha=1/2", "adversary:random:0", "divergence"),
        preset("measure-thomae", "measure", "thomae", "adversary:random:0", "ii-hsop", "convergence"),
        preset("marczewski-dirichlet", "tree", "dirichlet 1 0", "adversary:random:0", "ii-hsop", "convergence"),
        preset("baire-dirichlet", "residual dyadics", "dirichlet 1 0", "adversary:random:0", "ii-baire", "convergence"),
    ]
}

pub fn preset_named(name: &str) -> Option<Scenario> {
    presets().into_iter().find(|s| s.name == name)
}

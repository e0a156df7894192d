//! The referee: move legality for every variant, play to a horizon, and certificates.
//!
//! Move `0` is Player I's initial set `P`, move `1` is Player II's `P_0`, and from
//! then on block `n` sits at index `2n` and the response `P_n` at index `2n+1`.
//! Block `n` must lie in `P_{n-1}`, the set played immediately before it.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::families::{FamilySpec, Member};
use crate::functions::TestFunction;
use crate::numerics::{dist, pow2_neg, EpPoint, Rat};
use crate::strategies::{Context, Strategy};
use crate::transcript::{rat_opt, rat_text, rat_vec};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaSchedule {
    /// `λ(n) = n²`.
    Squares,
    /// `λ(1), λ(2), …` listed; later values continue with the last difference.
    Explicit(Vec<u64>),
}

impl LambdaSchedule {
    pub fn lambda(&self, n: u64) -> u64 {
        match self {
            Self::Squares => n * n,
            Self::Explicit(vals) => {
                if n == 0 {
                    return 0;
                }
                let len = vals.len() as u64;
                if n <= len {
                    return vals[n as usize - 1];
                }
                let last = vals[vals.len() - 1];
                let prev = if len >= 2 { vals[vals.len() - 2] } else { 0 };
                last + (n - len) * (last - prev)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameVariant {
    G1,
    Gfin,
    Glambda(LambdaSchedule),
    Gm(u64),
}

impl GameVariant {
    /// Required size of block `n >= 1`; `None` means any non-empty size.
    pub fn block_size(&self, n: u64) -> Option<u64> {
        match self {
            Self::G1 => Some(1),
            Self::Gfin => None,
            Self::Gm(m) => Some(*m),
            Self::Glambda(s) => Some(s.lambda(n) - s.lambda(n - 1)),
        }
    }
}

impl fmt::Display for GameVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::G1 => write!(f, "g1"),
            Self::Gfin => write!(f, "gfin"),
            Self::Gm(m) => write!(f, "gm {m}"),
            Self::Glambda(LambdaSchedule::Squares) => write!(f, "glambda squares"),
            Self::Glambda(LambdaSchedule::Explicit(v)) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "glambda {}", parts.join(","))
            }
        }
    }
}

impl FromStr for GameVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("unknown game variant `{s}`"));
        let s = s.trim().to_ascii_lowercase();
        let mut words = s.split_whitespace();
        let head = words.next().ok_or_else(bad)?;
        let rest: Vec<&str> = words.collect();
        let variant = match (head, rest.as_slice()) {
            ("g1", []) => Self::G1,
            ("gfin", []) => Self::Gfin,
            ("gm", [m]) => Self::Gm(m.parse().map_err(|_| bad())?),
            ("glambda", ["squares"]) => Self::Glambda(LambdaSchedule::Squares),
            ("glambda", [list]) => Self::Glambda(LambdaSchedule::Explicit(
                list.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?,
            )),
            (g, []) if g.len() > 1 && g.starts_with('g') => Self::Gm(g[1..].parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        match &variant {
            Self::Gm(0) => Err(Error::Parse("block size m must be positive".into())),
            Self::Glambda(LambdaSchedule::Explicit(v))
                if v.is_empty() || v[0] == 0 || v.windows(2).any(|w| w[0] >= w[1]) =>
            {
                Err(Error::Parse("λ must be strictly increasing and positive".into()))
            }
            _ => Ok(variant),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    I,
    II,
}

impl Player {
    /// Whose turn it is at move `index`.
    pub fn at(index: usize) -> Self {
        if index.is_multiple_of(2) {
            Self::I
        } else {
            Self::II
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::I => write!(f, "I"),
            Self::II => write!(f, "II"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    InitialSet(Member),
    Response(Member),
    Points(Vec<EpPoint>),
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::InitialSet(_) => "initial_set",
            Self::Response(_) => "response",
            Self::Points(_) => "points",
        }
    }

    pub fn set(&self) -> Option<&Member> {
        match self {
            Self::InitialSet(m) | Self::Response(m) => Some(m),
            Self::Points(_) => None,
        }
    }

    pub fn points(&self) -> Option<&[EpPoint]> {
        match self {
            Self::Points(p) => Some(p),
            _ => None,
        }
    }
}

/// A broken rule and the index of the offending move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "move {}: {}", self.index, self.rule)
    }
}

pub mod rules {
    pub const ALTERNATION: &str = "alternation";
    pub const INITIAL_NOT_IN_SIGMA: &str = "P ∉ Σ";
    pub const RESPONSE_NOT_IN_SIGMA: &str = "P_n ∉ Σ";
    pub const NOT_SUBSET: &str = "P_n ⊄ P";
    pub const EMPTY_BLOCK: &str = "non-empty block";
    pub const BLOCK_SIZE: &str = "block size";
    pub const POINT_OUTSIDE: &str = "x ∉ P_n";
    pub const STRATEGY_ERROR: &str = "strategy error";
}

/// Checks that `mv` may follow the legal prefix `prefix`.
pub fn check_legal(sigma: &FamilySpec, variant: &GameVariant, prefix: &[Move], mv: &Move) -> Result<(), Violation> {
    let index = prefix.len();
    let fail = |rule| Err(Violation { index, rule });
    match (index, mv) {
        (0, Move::InitialSet(p)) => {
            if !sigma.is_legal(p) {
                return fail(rules::INITIAL_NOT_IN_SIGMA);
            }
        }
        (i, Move::Response(p)) if i % 2 == 1 => {
            if !sigma.is_legal(p) {
                return fail(rules::RESPONSE_NOT_IN_SIGMA);
            }
            let initial = prefix[0].set().expect("prefix starts with the initial set");
            if !p.subset(initial) {
                return fail(rules::NOT_SUBSET);
            }
        }
        (i, Move::Points(pts)) if i >= 2 && i % 2 == 0 => {
            if pts.is_empty() {
                return fail(rules::EMPTY_BLOCK);
            }
            if let Some(k) = variant.block_size(i as u64 / 2) {
                if pts.len() as u64 != k {
                    return fail(rules::BLOCK_SIZE);
                }
            }
            let last = prefix[i - 1].set().expect("a response precedes every block");
            if !pts.iter().all(|x| last.contains(x)) {
                return fail(rules::POINT_OUTSIDE);
            }
        }
        _ => return fail(rules::ALTERNATION),
    }
    Ok(())
}

/// Replays a move list, returning the first violation.
pub fn check_moves(sigma: &FamilySpec, variant: &GameVariant, moves: &[Move]) -> Result<(), Violation> {
    (0..moves.len()).try_for_each(|i| check_legal(sigma, variant, &moves[..i], &moves[i]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forfeit {
    pub player: Player,
    pub index: usize,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub sigma: FamilySpec,
    pub f: TestFunction,
    pub variant: GameVariant,
    pub moves: Vec<Move>,
    pub seed: u64,
    pub horizon: u32,
    pub depth_cap: u32,
    pub player_i: String,
    pub player_ii: String,
    /// The gap scale Player I commits to, when it plays for divergence.
    pub alpha: Option<Rat>,
    pub forfeit: Option<Forfeit>,
}

impl Transcript {
    pub fn check_legal(&self, mv: &Move) -> Result<(), Violation> {
        check_legal(&self.sigma, &self.variant, &self.moves, mv)
    }

    pub fn blocks(&self) -> Vec<&[EpPoint]> {
        self.moves.iter().filter_map(Move::points).collect()
    }

    /// Player I's points in play order.
    pub fn points(&self) -> Vec<EpPoint> {
        self.blocks().into_iter().flatten().cloned().collect()
    }

    /// `P_0, P_1, …`.
    pub fn responses(&self) -> Vec<&Member> {
        self.moves.iter().skip(1).filter_map(|m| match m {
            Move::Response(p) => Some(p),
            _ => None,
        }).collect()
    }
}

/// The referee-checked facts of round `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundFact {
    pub round: u64,
    /// A point of block `k` whose closed `2^-k` ball holds `P_k`.
    pub anchor: EpPoint,
    #[serde(with = "rat_text")]
    pub radius: Rat,
    #[serde(with = "rat_text")]
    pub value_diam: Rat,
    #[serde(with = "rat_text")]
    pub bound: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Convergence {
        facts: Vec<RoundFact>,
    },
    Divergence {
        #[serde(with = "rat_text")]
        alpha: Rat,
        #[serde(with = "rat_vec")]
        gaps: Vec<Rat>,
    },
    Undecided {
        rounds: u64,
        #[serde(with = "rat_opt")]
        tail_max_gap: Option<Rat>,
        #[serde(with = "rat_opt")]
        tail_min_gap: Option<Rat>,
    },
    Forfeit {
        player: Player,
        index: usize,
        rule: String,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Convergence { .. } => "convergence",
            Self::Divergence { .. } => "divergence",
            Self::Undecided { .. } => "undecided",
            Self::Forfeit { .. } => "forfeit",
        }
    }
}

fn convergence_facts(t: &Transcript) -> Option<Vec<RoundFact>> {
    let blocks = t.blocks();
    let responses = t.responses();
    let rounds = responses.len().saturating_sub(1).min(blocks.len());
    if rounds == 0 {
        return None;
    }
    let mut facts = Vec::with_capacity(rounds);
    for k in 1..=rounds {
        let p_k = responses[k];
        if !p_k.subset(responses[k - 1]) {
            return None;
        }
        let radius = pow2_neg(k as u64);
        let anchor = blocks[k - 1].iter().find(|x| p_k.within_ball(x, &radius))?;
        let bound = Rat::new(One::one(), (k as i64).into());
        let value_diam = t.sigma.value_diam(&t.f, p_k).ok()?;
        if value_diam > bound {
            return None;
        }
        facts.push(RoundFact { round: k as u64, anchor: anchor.clone(), radius, value_diam, bound });
    }
    Some(facts)
}

/// Consecutive value gaps `|f(x_{j-1}) - f(x_j)|` along Player I's points.
pub fn value_gaps(f: &TestFunction, points: &[EpPoint]) -> Vec<Rat> {
    let vals: Vec<Rat> = points.iter().map(|p| f.eval(p)).collect();
    vals.windows(2).map(|w| (&w[0] - &w[1]).abs()).collect()
}

/// Certificate for a legal transcript.
pub fn certify(t: &Transcript) -> Certificate {
    if let Some(facts) = convergence_facts(t) {
        return Certificate::Convergence { facts };
    }
    let gaps = value_gaps(&t.f, &t.points());
    if let Some(alpha) = &t.alpha {
        let quarter = alpha / Rat::from_integer(4.into());
        if !gaps.is_empty() && gaps.iter().all(|g| *g >= quarter) {
            return Certificate::Divergence { alpha: alpha.clone(), gaps };
        }
    }
    let tail = &gaps[gaps.len() - gaps.len().div_ceil(4)..];
    Certificate::Undecided {
        rounds: t.responses().len().saturating_sub(1) as u64,
        tail_max_gap: tail.iter().max().cloned(),
        tail_min_gap: tail.iter().min().cloned(),
    }
}

/// Recomputes legality and the certificate from the moves alone.
pub fn verify_transcript(t: &Transcript) -> Certificate {
    if let Err(v) = check_moves(&t.sigma, &t.variant, &t.moves) {
        return Certificate::Forfeit { player: Player::at(v.index), index: v.index, rule: v.rule.to_string() };
    }
    match &t.forfeit {
        Some(fo) if fo.index == t.moves.len() => Certificate::Forfeit {
            player: fo.player,
            index: fo.index,
            rule: fo.rule.clone(),
        },
        _ => certify(t),
    }
}

/// Plays `horizon` rounds after `P_0`, or until the first violation or strategy failure.
#[allow(clippy::too_many_arguments)]
pub fn play(
    sigma: &FamilySpec,
    f: &TestFunction,
    variant: &GameVariant,
    strat_i: &dyn Strategy,
    strat_ii: &dyn Strategy,
    horizon: u32,
    seed: u64,
    depth_cap: u32,
) -> Result<(Transcript, Certificate), Error> {
    if horizon == 0 {
        return Err(Error::OutOfRange("horizon must be at least 1".into()));
    }
    let ctx = Context { sigma: sigma.clone(), f: f.clone(), variant: variant.clone(), depth_cap };
    let mut t = Transcript {
        sigma: sigma.clone(),
        f: f.clone(),
        variant: variant.clone(),
        moves: Vec::new(),
        seed,
        horizon,
        depth_cap,
        player_i: strat_i.name(),
        player_ii: strat_ii.name(),
        alpha: strat_i.claimed_alpha(),
        forfeit: None,
    };
    let total = 2 * horizon as usize + 2;
    while t.moves.len() < total {
        let index = t.moves.len();
        let player = Player::at(index);
        let strat = if player == Player::I { strat_i } else { strat_ii };
        let mv = match strat.next_move(&ctx, &t.moves, seed) {
            Ok(mv) => mv,
            Err(e) => {
                let rule = format!("{}: {e}", rules::STRATEGY_ERROR);
                t.forfeit = Some(Forfeit { player, index, rule: rule.clone() });
                return Ok((t, Certificate::Forfeit { player, index, rule }));
            }
        };
        let verdict = t.check_legal(&mv);
        t.moves.push(mv);
        if let Err(v) = verdict {
            let rule = v.rule.to_string();
            t.forfeit = Some(Forfeit { player, index, rule: rule.clone() });
            return Ok((t, Certificate::Forfeit { player, index, rule }));
        }
    }
    let cert = certify(&t);
    Ok((t, cert))
}

/// The Cauchy estimate implied by a Convergence certificate, rechecked on every
/// pair of recorded points: `d(x_m, x_n) <= 2^(2-m)` for points of blocks `m <= n`,
/// and `< 2^(1-m)` when every block is a single point.
pub fn cauchy_holds(t: &Transcript) -> bool {
    let blocks = t.blocks();
    let singletons = blocks.iter().all(|b| b.len() == 1);
    for (m, bm) in blocks.iter().enumerate() {
        let m = m as u64 + 1;
        for bn in blocks.iter().skip(m as usize) {
            for x in bm.iter() {
                for y in bn.iter() {
                    let d = dist(x, y);
                    let ok = if singletons {
                        d < pow2_neg(m - 1)
                    } else {
                        d <= pow2_neg(m) * Rat::from_integer(4.into())
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `|f(x_i) - f(x_j)| <= 2/k` for all points of blocks after `k`.
pub fn value_cauchy_holds(t: &Transcript) -> bool {
    let blocks = t.blocks();
    (1..=blocks.len()).all(|k| {
        let vals: Vec<Rat> = blocks[k..].iter().flat_map(|b| b.iter()).map(|x| t.f.eval(x)).collect();
        let (Some(lo), Some(hi)) = (vals.iter().min(), vals.iter().max()) else {
            return true;
        };
        hi - lo <= Rat::new(2.into(), (k as i64).into())
    })
}

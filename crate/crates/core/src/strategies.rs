//! Strategies for both players: the two constructions behind the dichotomy,
//! the Baire strategy for residual families, both transfers, and baselines.
//!
//! A strategy is a pure function of `(seed, transcript prefix)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::families::{FamilySpec, Hsop, Member, ResidualSet, Schedule};
use crate::functions::TestFunction;
use crate::game::{GameVariant, Move, Player};
use crate::intervalsets::IntervalSet;
use crate::numerics::{dbar, int, pow2_neg, EpPoint, Rat};
use crate::Error;

/// What every strategy sees besides the prefix.
#[derive(Debug, Clone)]
pub struct Context {
    pub sigma: FamilySpec,
    pub f: TestFunction,
    pub variant: GameVariant,
    pub depth_cap: u32,
}

pub trait Strategy: Send + Sync {
    fn role(&self) -> Player;
    /// Text form that [`parse`] maps back to this strategy.
    fn name(&self) -> String;
    /// The `α` a Player I strategy keeps its value gaps above (by `α/4`).
    fn claimed_alpha(&self) -> Option<Rat> {
        None
    }
    fn next_move(&self, ctx: &Context, prefix: &[Move], seed: u64) -> Result<Move, Error>;
}

fn rng_for(seed: u64, salt: u64, prefix_len: usize, role: Player) -> ChaCha8Rng {
    let role_bits = match role {
        Player::I => 0x5151_0000_0000_0001,
        Player::II => 0xA2A2_0000_0000_0002,
    };
    let mixed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ salt.rotate_left(17)
        ^ (prefix_len as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ role_bits;
    ChaCha8Rng::seed_from_u64(mixed)
}

fn turn_check(prefix: &[Move], role: Player) -> Result<(), Error> {
    if Player::at(prefix.len()) != role {
        return Err(Error::Strategy(format!("not Player {role}'s turn at move {}", prefix.len())));
    }
    Ok(())
}

fn set_at(prefix: &[Move], i: usize) -> Result<&Member, Error> {
    prefix
        .get(i)
        .and_then(Move::set)
        .ok_or_else(|| Error::Strategy(format!("move {i} is not a set")))
}

fn block_at(prefix: &[Move], i: usize) -> Result<&[EpPoint], Error> {
    prefix
        .get(i)
        .and_then(Move::points)
        .filter(|b| !b.is_empty())
        .ok_or_else(|| Error::Strategy(format!("move {i} is not a block")))
}

/// Index of the first maximiser of `dbar(b, ·)`.
fn argmax_dbar(b: &EpPoint, block: &[EpPoint], f: &TestFunction) -> usize {
    let (bq, fb) = (b.to_rat(), f.eval(b));
    let score = |a: &EpPoint| (a.to_rat() - &bq).abs() + (f.eval(a) - &fb).abs();
    let mut best = 0;
    let mut best_val = score(&block[0]);
    for (j, a) in block.iter().enumerate().skip(1) {
        let v = score(a);
        if v > best_val {
            best = j;
            best_val = v;
        }
    }
    debug_assert_eq!(best_val, dbar(b, &block[best], f));
    best
}

fn refined(h: Hsop) -> Result<Member, Error> {
    match h {
        Hsop::Refined(m) => Ok(m),
        Hsop::Witness(w) => Err(Error::Strategy(format!(
            "no sub-member with value spread below {} exists",
            w.alpha
        ))),
    }
}

/// Player II: shrink into the ball around the newest point, then cut the value spread below `1/k`.
#[derive(Debug, Clone, Default)]
pub struct IiHsop;

impl Strategy for IiHsop {
    fn role(&self) -> Player {
        Player::II
    }

    fn name(&self) -> String {
        "ii-hsop".into()
    }

    fn next_move(&self, ctx: &Context, prefix: &[Move], _seed: u64) -> Result<Move, Error> {
        turn_check(prefix, Player::II)?;
        let idx = prefix.len();
        if idx == 1 {
            let p = set_at(prefix, 0)?;
            return Ok(Move::Response(refined(ctx.sigma.hsop_refine(&ctx.f, p, &Rat::one(), ctx.depth_cap)?)?));
        }
        let k = (idx as u64 - 1) / 2;
        let x = block_at(prefix, idx - 1)?.last().expect("non-empty");
        let prev = set_at(prefix, idx - 2)?;
        let q = ctx.sigma.refine_dense(prev, x, &pow2_neg(k))?;
        let alpha = Rat::new(BigInt::one(), BigInt::from(k));
        Ok(Move::Response(refined(ctx.sigma.hsop_refine(&ctx.f, &q, &alpha, ctx.depth_cap)?)?))
    }
}

/// Player II on a residual family: stay near the newest point and keep the closure
/// of the answer clear of `F_k` and of the endpoints `0, 1`.
#[derive(Debug, Clone, Default)]
pub struct IiBaire;

impl IiBaire {
    fn avoid(schedule: &Schedule, k: u64) -> Vec<EpPoint> {
        let mut pts = match schedule {
            Schedule::Dyadics => schedule.f_n(k),
            Schedule::Points(all) => all.clone(),
        };
        pts.push(EpPoint::zero());
        pts.push(EpPoint::one());
        pts
    }
}

fn nearest_component(s: &IntervalSet, x: &Rat) -> IntervalSet {
    let gap = |l: &Rat, r: &Rat| {
        if x < l {
            l - x
        } else if x > r {
            x - r
        } else {
            Rat::zero()
        }
    };
    let best = s
        .components()
        .iter()
        .min_by(|a, b| gap(a.left(), a.right()).cmp(&gap(b.left(), b.right())))
        .expect("non-empty set");
    IntervalSet::interval(best.left().clone(), best.right().clone()).expect("component")
}

impl Strategy for IiBaire {
    fn role(&self) -> Player {
        Player::II
    }

    fn name(&self) -> String {
        "ii-baire".into()
    }

    fn next_move(&self, _ctx: &Context, prefix: &[Move], _seed: u64) -> Result<Move, Error> {
        turn_check(prefix, Player::II)?;
        let idx = prefix.len();
        let residual = |m: &Member| match m {
            Member::Residual(r) => Ok(r.clone()),
            _ => Err(Error::Strategy("ii-baire needs a residual family".into())),
        };
        let carrier = if idx == 1 {
            let r = residual(set_at(prefix, 0)?)?;
            let budget = r.carrier.lebesgue() / int(2);
            let u = r
                .carrier
                .remove_point_nbhds(&Self::avoid(&r.schedule, 1), &budget)
                .ok_or(Error::Empty)?;
            ResidualSet { carrier: u, schedule: r.schedule }
        } else {
            let k = (idx as u64 - 1) / 2;
            let x = block_at(prefix, idx - 1)?.last().expect("non-empty");
            let r = residual(set_at(prefix, idx - 2)?)?;
            let c = r.carrier.clip_ball(x, &pow2_neg(k + 1)).ok_or(Error::Empty)?;
            let budget = c.lebesgue() / int(2);
            let u = c.remove_point_nbhds(&Self::avoid(&r.schedule, k), &budget).ok_or(Error::Empty)?;
            ResidualSet { carrier: nearest_component(&u, &x.to_rat()), schedule: r.schedule }
        };
        Ok(Move::Response(Member::Residual(carrier)))
    }
}

/// Points of a member to test, the ones the gap rule looks at first leading.
fn probe(sigma: &FamilySpec, p: &Member) -> Vec<EpPoint> {
    let mut out = Vec::new();
    if let Member::Interval(s) = p {
        let c = &s.components()[0];
        let len = c.right() - c.left();
        for q in [c.midpoint(), c.left() + len * Rat::new(2.into(), 3.into())] {
            out.push(EpPoint::from_rat(&q).expect("inside [0,1]"));
        }
    }
    out.extend(sigma.sample_points(p, p.resolution() + 4));
    out
}

/// Player I against a function without small oscillation: play the witness set,
/// then keep consecutive values at least `α/4` apart.
#[derive(Debug, Clone)]
pub struct IGap {
    pub alpha: Rat,
}

impl IGap {
    fn pick(&self, f: &TestFunction, cands: &[EpPoint], prev: Option<&EpPoint>) -> Result<EpPoint, Error> {
        let x = cands.first().ok_or_else(|| Error::Strategy("nothing to probe".into()))?;
        let Some(prev) = prev else {
            return Ok(x.clone());
        };
        let fx = f.eval(x);
        let quarter = &self.alpha / int(4);
        if (&fx - f.eval(prev)).abs() > quarter {
            return Ok(x.clone());
        }
        let half = &self.alpha / int(2);
        cands
            .iter()
            .find(|y| (&fx - f.eval(y)).abs() >= half)
            .cloned()
            .ok_or_else(|| Error::Strategy("probe found no point with a large enough value change".into()))
    }
}

impl Strategy for IGap {
    fn role(&self) -> Player {
        Player::I
    }

    fn name(&self) -> String {
        format!("i-gap alpha={}", self.alpha)
    }

    fn claimed_alpha(&self) -> Option<Rat> {
        Some(self.alpha.clone())
    }

    fn next_move(&self, ctx: &Context, prefix: &[Move], _seed: u64) -> Result<Move, Error> {
        turn_check(prefix, Player::I)?;
        let idx = prefix.len();
        if idx == 0 {
            let full = ctx.sigma.full_member();
            return match ctx.sigma.hsop_refine(&ctx.f, &full, &self.alpha, ctx.depth_cap)? {
                Hsop::Witness(w) => Ok(Move::InitialSet(w.set)),
                Hsop::Refined(_) => Err(Error::Strategy(format!(
                    "{} has small oscillation at scale {}",
                    ctx.f.name(),
                    self.alpha
                ))),
            };
        }
        let n = idx as u64 / 2;
        let p = set_at(prefix, idx - 1)?;
        let size = ctx.variant.block_size(n).unwrap_or(2);
        let cands = probe(&ctx.sigma, p);
        let mut prev = if idx >= 4 { block_at(prefix, idx - 2)?.last().cloned() } else { None };
        let mut block = Vec::with_capacity(size as usize);
        for _ in 0..size {
            let x = self.pick(&ctx.f, &cands, prev.as_ref())?;
            prev = Some(x.clone());
            block.push(x);
        }
        Ok(Move::Points(block))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryKind {
    Random,
    Sweep,
    DbarProbe,
}

impl AdversaryKind {
    fn label(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::Sweep => "sweep",
            Self::DbarProbe => "dbar_probe",
        }
    }
}

/// Baseline play for either side.
#[derive(Debug, Clone)]
pub struct Adversary {
    pub kind: AdversaryKind,
    pub salt: u64,
    pub role: Player,
    /// Largest block Player I plays when the variant leaves the size free.
    pub max_block: u64,
}

impl Adversary {
    pub fn new(kind: AdversaryKind, salt: u64, role: Player) -> Self {
        Self { kind, salt, role, max_block: 4 }
    }

    fn depth(&self, m: &Member) -> u64 {
        m.resolution() + if self.kind == AdversaryKind::DbarProbe { 6 } else { 4 }
    }

    fn play_i(&self, ctx: &Context, prefix: &[Move], rng: &mut ChaCha8Rng) -> Result<Move, Error> {
        let idx = prefix.len();
        if idx == 0 {
            return Ok(Move::InitialSet(ctx.sigma.full_member()));
        }
        let p = set_at(prefix, idx - 1)?;
        let size = match ctx.variant.block_size(idx as u64 / 2) {
            Some(k) => k,
            None if self.max_block > 1 => 1 + rng.gen_range(0..self.max_block),
            None => 1,
        };
        let cands = ctx.sigma.sample_points(p, self.depth(p));
        if cands.is_empty() {
            return Err(Error::Strategy("no legal sample point".into()));
        }
        let played: usize = prefix.iter().filter_map(Move::points).map(<[EpPoint]>::len).sum();
        let mut prev = prefix.iter().rev().find_map(Move::points).and_then(|b| b.last().cloned());
        let mut block = Vec::new();
        for j in 0..size as usize {
            let x = match self.kind {
                AdversaryKind::Random => cands[rng.gen_range(0..cands.len())].clone(),
                AdversaryKind::Sweep => cands[(played + j) % cands.len()].clone(),
                AdversaryKind::DbarProbe => match &prev {
                    Some(b) => cands[argmax_dbar(b, &cands, &ctx.f)].clone(),
                    None => cands[0].clone(),
                },
            };
            prev = Some(x.clone());
            block.push(x);
        }
        Ok(Move::Points(block))
    }

    fn play_ii(&self, ctx: &Context, prefix: &[Move], rng: &mut ChaCha8Rng) -> Result<Move, Error> {
        let idx = prefix.len();
        let prev = set_at(prefix, if idx == 1 { 0 } else { idx - 2 })?;
        let subs: Vec<Member> = ctx.sigma.sub_members(prev, 2).into_iter().filter(|m| ctx.sigma.is_legal(m)).collect();
        if subs.is_empty() {
            return Err(Error::Strategy("no legal sub-member".into()));
        }
        let pick = match self.kind {
            AdversaryKind::Random => rng.gen_range(0..subs.len()),
            AdversaryKind::Sweep => 0,
            AdversaryKind::DbarProbe => {
                let last = prefix.iter().rev().find_map(Move::points).and_then(|b| b.last());
                match last {
                    None => 0,
                    Some(b) => {
                        let reps: Vec<EpPoint> = subs
                            .iter()
                            .map(|m| ctx.sigma.sample_points(m, m.resolution() + 2).swap_remove(0))
                            .collect();
                        argmax_dbar(b, &reps, &ctx.f)
                    }
                }
            }
        };
        Ok(Move::Response(subs[pick].clone()))
    }
}

impl Strategy for Adversary {
    fn role(&self) -> Player {
        self.role
    }

    fn name(&self) -> String {
        let mut s = format!("adversary:{}:{}", self.kind.label(), self.salt);
        if self.max_block != 4 {
            s.push_str(&format!(":{}", self.max_block));
        }
        s
    }

    fn next_move(&self, ctx: &Context, prefix: &[Move], seed: u64) -> Result<Move, Error> {
        turn_check(prefix, self.role)?;
        let mut rng = rng_for(seed, self.salt, prefix.len(), self.role);
        match self.role {
            Player::I => self.play_i(ctx, prefix, &mut rng),
            Player::II => self.play_ii(ctx, prefix, &mut rng),
        }
    }
}

/// A `G_<ω` strategy for Player I played in `G_1`: simulate it and keep, from each
/// of its blocks, the point farthest in `d̄` from the previous selection.
pub struct TransferI {
    pub inner: Box<dyn Strategy>,
}

impl Strategy for TransferI {
    fn role(&self) -> Player {
        Player::I
    }

    fn name(&self) -> String {
        format!("transfer-i {}", self.inner.name())
    }

    fn claimed_alpha(&self) -> Option<Rat> {
        self.inner.claimed_alpha()
    }

    fn next_move(&self, ctx: &Context, prefix: &[Move], seed: u64) -> Result<Move, Error> {
        turn_check(prefix, Player::I)?;
        let inner_ctx = Context { variant: GameVariant::Gfin, ..ctx.clone() };
        let mut inner_prefix: Vec<Move> = Vec::with_capacity(prefix.len() + 1);
        for (i, mv) in prefix.iter().enumerate() {
            if i >= 2 && i % 2 == 0 {
                let block = self.inner.next_move(&inner_ctx, &inner_prefix, seed)?;
                inner_prefix.push(block);
            } else {
                inner_prefix.push(mv.clone());
            }
        }
        let mv = self.inner.next_move(&inner_ctx, &inner_prefix, seed)?;
        let Move::Points(block) = mv else {
            return Ok(mv);
        };
        if block.is_empty() {
            return Err(Error::Strategy("inner strategy played an empty block".into()));
        }
        let idx = prefix.len();
        let chosen = if idx >= 4 {
            let b = block_at(prefix, idx - 2)?.last().expect("non-empty");
            argmax_dbar(b, &block, &ctx.f)
        } else {
            0
        };
        Ok(Move::Points(vec![block[chosen].clone()]))
    }
}

/// A `G_1` strategy for Player II played in `G_<ω`: each block is replaced by one
/// representative, the point farthest in `d̄` from the previous representative.
pub struct TransferII {
    pub inner: Box<dyn Strategy>,
}

/// `x̄_1, x̄_2, …` for the blocks of a prefix, starting from `x̄_0` = first point of block 1.
pub fn representatives(blocks: &[&[EpPoint]], f: &TestFunction) -> Vec<EpPoint> {
    let mut out: Vec<EpPoint> = Vec::with_capacity(blocks.len());
    for block in blocks {
        let prev = out.last().cloned().unwrap_or_else(|| block[0].clone());
        out.push(block[argmax_dbar(&prev, block, f)].clone());
    }
    out
}

impl Strategy for TransferII {
    fn role(&self) -> Player {
        Player::II
    }

    fn name(&self) -> String {
        format!("transfer-ii {}", self.inner.name())
    }

    fn next_move(&self, ctx: &Context, prefix: &[Move], seed: u64) -> Result<Move, Error> {
        turn_check(prefix, Player::II)?;
        let blocks: Vec<&[EpPoint]> = prefix.iter().filter_map(Move::points).collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::Strategy("empty block in prefix".into()));
        }
        let mut reps = representatives(&blocks, &ctx.f).into_iter();
        let g1_prefix: Vec<Move> = prefix
            .iter()
            .map(|mv| match mv {
                Move::Points(_) => Move::Points(vec![reps.next().expect("one per block")]),
                other => other.clone(),
            })
            .collect();
        let inner_ctx = Context { variant: GameVariant::G1, ..ctx.clone() };
        self.inner.next_move(&inner_ctx, &g1_prefix, seed)
    }
}

/// Builds a strategy from its text form for the given side.
///
/// Accepted: `ii-hsop`, `ii-baire`, `i-gap alpha=1/2`, `adversary:<random|sweep|dbar_probe>:<salt>[:<max block>]`
/// (or just `random`, `sweep`, `dbar_probe`), `transfer-i [inner]`, `transfer-ii [inner]`.
pub fn parse(desc: &str, role: Player) -> Result<Box<dyn Strategy>, Error> {
    let desc = desc.trim();
    let (head, rest) = desc.split_once(char::is_whitespace).unwrap_or((desc, ""));
    let rest = rest.trim();
    let wrong_side = |name: &str| Error::Parse(format!("`{name}` is not a Player {role} strategy"));
    let strategy: Box<dyn Strategy> = match head {
        "ii-hsop" => Box::new(IiHsop),
        "ii-baire" => Box::new(IiBaire),
        "i-gap" => {
            let alpha = match rest.strip_prefix("alpha=") {
                Some(a) => crate::numerics::parse_rat(a)?,
                None if rest.is_empty() => Rat::new(1.into(), 2.into()),
                None => return Err(Error::Parse(format!("bad i-gap options `{rest}`"))),
            };
            if !alpha.is_positive() {
                return Err(Error::Parse("alpha must be positive".into()));
            }
            Box::new(IGap { alpha })
        }
        "transfer-i" => Box::new(TransferI { inner: parse(if rest.is_empty() { "i-gap alpha=1/2" } else { rest }, Player::I)? }),
        "transfer-ii" => Box::new(TransferII { inner: parse(if rest.is_empty() { "ii-hsop" } else { rest }, Player::II)? }),
        _ => {
            let parts: Vec<&str> = head.split(':').collect();
            let parts = if parts[0] == "adversary" { &parts[1..] } else { &parts[..] };
            let kind = match parts.first().copied() {
                Some("random") => AdversaryKind::Random,
                Some("sweep") => AdversaryKind::Sweep,
                Some("dbar_probe" | "dbar-probe") => AdversaryKind::DbarProbe,
                _ => return Err(Error::Parse(format!("unknown strategy `{desc}`"))),
            };
            let num = |i: usize, default: u64| -> Result<u64, Error> {
                parts.get(i).map_or(Ok(default), |s| s.parse().map_err(|_| Error::Parse(format!("bad number in `{desc}`"))))
            };
            let mut adv = Adversary::new(kind, num(1, 0)?, role);
            adv.max_block = num(2, 4)?;
            if adv.max_block == 0 || !rest.is_empty() {
                return Err(Error::Parse(format!("bad adversary `{desc}`")));
            }
            Box::new(adv)
        }
    };
    if strategy.role() != role {
        return Err(wrong_side(head));
    }
    Ok(strategy)
}

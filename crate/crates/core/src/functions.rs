//! The test-function catalog: exact values, oscillation and value diameters.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intervalsets::{DyadicInterval, IntervalSet};
use crate::numerics::{ceil_at, dyadic_depth, floor_at, parse_rat, pow2_int, pow2_neg, EpPoint, Rat};
use crate::treesets::TreeAutomaton;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestFunction {
    Constant(Rat),
    /// Consecutive pieces covering `[0,1]`; a shared endpoint takes the left piece's value.
    Step(Vec<(DyadicInterval, Rat)>),
    /// `1/n` at the `n`-th dyadic of `(0,1)` in the order of [`enum_dyadic`], `0` elsewhere.
    ThomaeLike,
    /// `a` on every dyadic rational of `[0,1]`, `b` elsewhere.
    DirichletLike { a: Rat, b: Rat },
    IndicatorOfTree(TreeAutomaton),
}

/// Bounds on an oscillation value; `upper == None` stands for `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OscBound {
    pub lower: Rat,
    pub upper: Option<Rat>,
}

impl OscBound {
    pub fn exact(v: Rat) -> Self {
        Self { lower: v.clone(), upper: Some(v) }
    }

    pub fn is_exact(&self) -> bool {
        self.upper.as_ref() == Some(&self.lower)
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lower <= v && self.upper.as_ref().is_none_or(|u| v <= u)
    }
}

/// The `n`-th dyadic of `(0,1)`: with `n = 2^(d-1) + j`, `0 <= j < 2^(d-1)`, it is `(2j+1)/2^d`.
pub fn enum_dyadic(n: u64) -> EpPoint {
    assert!(n >= 1, "dyadic enumeration starts at 1");
    let d = 64 - n.leading_zeros() as u64;
    let j = BigInt::from(n) - pow2_int(d - 1);
    EpPoint::from_rat(&Rat::new(2 * j + 1, pow2_int(d))).expect("in (0,1)")
}

/// Inverse of [`enum_dyadic`]; `None` off the dyadics of `(0,1)`.
pub fn dyadic_index(q: &Rat) -> Option<BigInt> {
    let d = dyadic_depth(q)?;
    if d == 0 {
        return None;
    }
    let j = (q.numer() - BigInt::one()) / 2;
    Some(pow2_int(d - 1) + j)
}

/// Index of the first dyadic `k/2^d` (odd `k`) in the set, searching depth by depth.
fn first_dyadic_in(ivs: &[(Rat, bool, Rat, bool)]) -> Option<BigInt> {
    let nonempty = ivs.iter().any(|(l, _, r, _)| l < r);
    if !nonempty {
        return None;
    }
    for d in 1u64.. {
        let scale = Rat::from_integer(pow2_int(d));
        let mut best: Option<BigInt> = None;
        for (l, lc, r, rc) in ivs {
            if l >= r {
                continue;
            }
            let mut k = (l * &scale).ceil().to_integer();
            if !lc && Rat::from_integer(k.clone()) == l * &scale {
                k += 1;
            }
            if k.is_even() {
                k += 1;
            }
            let q = Rat::new(k.clone(), pow2_int(d));
            let inside = if *rc { &q <= r } else { &q < r };
            if inside && q.is_positive() && q < Rat::one() && best.as_ref().is_none_or(|b| &k < b) {
                best = Some(k);
            }
        }
        if let Some(k) = best {
            return Some(pow2_int(d - 1) + (k - 1) / 2);
        }
    }
    unreachable!()
}

/// Open/closed interval pieces as `(lo, lo_closed, hi, hi_closed)`.
pub(crate) type Piece = (Rat, bool, Rat, bool);

pub(crate) fn meet(a: &Piece, b: &Piece) -> Option<Piece> {
    let (lo, lc) = match a.0.cmp(&b.0) {
        std::cmp::Ordering::Less => (b.0.clone(), b.1),
        std::cmp::Ordering::Greater => (a.0.clone(), a.1),
        std::cmp::Ordering::Equal => (a.0.clone(), a.1 && b.1),
    };
    let (hi, hc) = match a.2.cmp(&b.2) {
        std::cmp::Ordering::Less => (a.2.clone(), a.3),
        std::cmp::Ordering::Greater => (b.2.clone(), b.3),
        std::cmp::Ordering::Equal => (a.2.clone(), a.3 && b.3),
    };
    (lo < hi || (lo == hi && lc && hc)).then_some((lo, lc, hi, hc))
}

fn closed_pieces(s: &IntervalSet) -> Vec<Piece> {
    s.components()
        .iter()
        .map(|c| (c.left().clone(), true, c.right().clone(), true))
        .collect()
}

pub(crate) fn diam_of<'a>(vals: impl IntoIterator<Item = &'a Rat>) -> Rat {
    let mut it = vals.into_iter();
    let Some(first) = it.next() else {
        return Rat::zero();
    };
    let (mut lo, mut hi) = (first.clone(), first.clone());
    for v in it {
        if v < &lo {
            lo = v.clone();
        }
        if v > &hi {
            hi = v.clone();
        }
    }
    hi - lo
}

impl TestFunction {
    pub fn dirichlet(a: Rat, b: Rat) -> Result<Self, Error> {
        if a == b {
            return Err(Error::OutOfRange("dirichlet values must differ".into()));
        }
        Ok(Self::DirichletLike { a, b })
    }

    pub fn step(pieces: Vec<(DyadicInterval, Rat)>) -> Result<Self, Error> {
        let ok = !pieces.is_empty()
            && pieces[0].0.left().is_zero()
            && pieces[pieces.len() - 1].0.right().is_one()
            && pieces.windows(2).all(|w| w[0].0.right() == w[1].0.left());
        if !ok {
            return Err(Error::OutOfRange("step pieces must tile [0,1] left to right".into()));
        }
        Ok(Self::Step(pieces))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant(_) => "constant",
            Self::Step(_) => "step",
            Self::ThomaeLike => "thomae",
            Self::DirichletLike { .. } => "dirichlet",
            Self::IndicatorOfTree(_) => "indicator",
        }
    }

    pub fn eval(&self, p: &EpPoint) -> Rat {
        match self {
            Self::Constant(c) => c.clone(),
            Self::Step(pieces) => {
                let x = p.to_rat();
                pieces
                    .iter()
                    .find(|(iv, _)| iv.contains_rat(&x))
                    .map(|(_, v)| v.clone())
                    .expect("step pieces cover [0,1]")
            }
            Self::ThomaeLike => match dyadic_index(&p.to_rat()) {
                Some(n) => Rat::new(BigInt::one(), n),
                None => Rat::zero(),
            },
            Self::DirichletLike { a, b } => {
                if p.is_dyadic() {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            Self::IndicatorOfTree(t) => {
                if t.member(p) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }
        }
    }

    /// Step pieces with the region each one owns.
    fn step_regions(pieces: &[(DyadicInterval, Rat)]) -> Vec<(Piece, Rat)> {
        pieces
            .iter()
            .enumerate()
            .map(|(i, (iv, v))| ((iv.left().clone(), i == 0, iv.right().clone(), true), v.clone()))
            .collect()
    }

    pub(crate) fn step_values_on(pieces: &[(DyadicInterval, Rat)], set: &[Piece]) -> Vec<Rat> {
        Self::step_regions(pieces)
            .into_iter()
            .filter(|(region, _)| set.iter().any(|s| meet(region, s).is_some()))
            .map(|(_, v)| v)
            .collect()
    }

    /// Exact `sup f - inf f` over a union of (open or closed) pieces.
    pub(crate) fn diam_on_pieces(&self, set: &[Piece]) -> Result<Rat, Error> {
        match self {
            Self::Constant(_) => Ok(Rat::zero()),
            Self::DirichletLike { a, b } => Ok((a - b).abs()),
            Self::ThomaeLike => Ok(match first_dyadic_in(set) {
                Some(n) => Rat::new(BigInt::one(), n),
                None => Rat::zero(),
            }),
            Self::Step(pieces) => Ok(diam_of(&Self::step_values_on(pieces, set))),
            Self::IndicatorOfTree(_) => Err(Error::Unsupported("indicator over open pieces".into())),
        }
    }

    /// `sup - inf` of `f` over the set.
    pub fn value_diam(&self, a: &IntervalSet) -> Rat {
        match self {
            Self::IndicatorOfTree(t) => {
                let s = TreeAutomaton::from_interval_set(a);
                if s.subset(t) || s.intersect_real(t).is_err() {
                    Rat::zero()
                } else {
                    Rat::one()
                }
            }
            _ => self.diam_on_pieces(&closed_pieces(a)).expect("decided variant"),
        }
    }

    /// `sup - inf` of `f` over the set of a tree automaton. Thomae-like
    /// functions need a point with value 0 in the set (any perfect set has one).
    pub fn value_diam_tree(&self, a: &TreeAutomaton) -> Result<Rat, Error> {
        match self {
            Self::Constant(_) => Ok(Rat::zero()),
            Self::DirichletLike { a: va, b: vb } => {
                if !a.is_dyadic_free() && a.has_non_dyadic() {
                    Ok((va - vb).abs())
                } else {
                    Ok(Rat::zero())
                }
            }
            Self::ThomaeLike => {
                let has_zero = a.has_non_dyadic()
                    || a.member(&EpPoint::zero())
                    || a.member(&EpPoint::one());
                match (a.first_dyadic(), has_zero) {
                    (None, _) => Ok(Rat::zero()),
                    (Some((d, k)), true) => Ok(Rat::new(BigInt::one(), pow2_int(d - 1) + (k - 1) / 2)),
                    (Some(_), false) => Err(Error::Unsupported("thomae on a set of dyadics only".into())),
                }
            }
            Self::Step(pieces) => {
                let mut vals = Vec::new();
                for (i, (iv, v)) in pieces.iter().enumerate() {
                    if let Ok(part) = a.intersect_interval(iv) {
                        if i == 0 || part.max_point().to_rat() > *iv.left() {
                            vals.push(v.clone());
                        }
                    }
                }
                Ok(diam_of(&vals))
            }
            Self::IndicatorOfTree(t) => {
                if a.subset(t) || a.intersect_real(t).is_err() {
                    Ok(Rat::zero())
                } else {
                    Ok(Rat::one())
                }
            }
        }
    }

    /// Exact oscillation of `f` restricted to `a` at `x` (bounds only for indicators).
    pub fn osc_at(&self, a: &IntervalSet, x: &EpPoint) -> Result<OscBound, Error> {
        if !a.contains(x) {
            return Err(Error::NotMember(x.to_string()));
        }
        let xq = x.to_rat();
        Ok(match self {
            Self::Constant(_) => OscBound::exact(Rat::zero()),
            Self::DirichletLike { a: va, b: vb } => OscBound::exact((va - vb).abs()),
            Self::ThomaeLike => OscBound::exact(self.eval(x)),
            Self::Step(pieces) => {
                let i = pieces.iter().position(|(iv, _)| iv.contains_rat(&xq)).unwrap();
                let right_side = a
                    .components()
                    .iter()
                    .any(|c| c.contains_rat(&xq) && c.right() > &xq);
                if i + 1 < pieces.len() && pieces[i].0.right() == &xq && right_side {
                    OscBound::exact((&pieces[i].1 - &pieces[i + 1].1).abs())
                } else {
                    OscBound::exact(Rat::zero())
                }
            }
            Self::IndicatorOfTree(t) => {
                const DEPTH: u64 = 12;
                let r = pow2_neg(DEPTH);
                let lo = std::cmp::max(floor_at(&xq, DEPTH) - &r, Rat::zero());
                let hi = std::cmp::min(ceil_at(&xq, DEPTH) + &r, Rat::one());
                let near = a.restrict(&lo, &hi).expect("x is in a non-degenerate component");
                let s = TreeAutomaton::from_interval_set(&near);
                if s.subset(t) || s.intersect_real(t).is_err() {
                    OscBound::exact(Rat::zero())
                } else {
                    OscBound { lower: Rat::zero(), upper: Some(Rat::one()) }
                }
            }
        })
    }

    /// Sampled oscillation bracket, independent of [`Self::osc_at`].
    ///
    /// Samples are the points with preperiod at most `L` and period length at
    /// most 3 in `a ∩ B(x, 2^-L)`, for `L = depth ..= depth + 4`. The lower
    /// bound is the value spread of `f(x)` together with every value seen at
    /// all five levels; isolated nearby values that vanish under refinement
    /// are discarded. It is a sound lower bound when `x` itself has
    /// preperiod at most `depth` and period at most 3 and step boundaries
    /// have depth at most `depth + 1`. The upper bound is symbolic.
    pub fn osc_brute(&self, a: &IntervalSet, x: &EpPoint, depth: u64) -> Result<OscBound, Error> {
        if !a.contains(x) {
            return Err(Error::NotMember(x.to_string()));
        }
        let xq = x.to_rat();
        let mut common: Option<BTreeSet<Rat>> = None;
        for level in depth..=depth + 4 {
            let vals: BTreeSet<Rat> = ball_samples(a, x, level).iter().map(|y| self.eval(y)).collect();
            common = Some(match common {
                None => vals,
                Some(c) => c.intersection(&vals).cloned().collect(),
            });
        }
        let mut vals = common.unwrap_or_default();
        vals.insert(self.eval(x));
        let lower = diam_of(&vals);

        let r = pow2_neg(depth);
        let ball: Vec<Piece> = closed_pieces(a)
            .iter()
            .filter_map(|p| meet(p, &(&xq - &r, false, &xq + &r, false)))
            .collect();
        let upper = match self {
            Self::Constant(_) => Some(Rat::zero()),
            Self::DirichletLike { a: va, b: vb } => Some((va - vb).abs()),
            Self::Step(pieces) => Some(diam_of(&Self::step_values_on(pieces, &ball))),
            Self::IndicatorOfTree(_) => Some(Rat::one()),
            Self::ThomaeLike => {
                // Dropping x and the single lowest-index dyadic near it does
                // not change the limit of the value spread.
                let fx = self.eval(x);
                let second = nth_dyadics_excluding(&ball, std::slice::from_ref(&xq), 2).pop();
                let rest = second.map_or(Rat::zero(), |n| Rat::new(BigInt::one(), n));
                Some(std::cmp::max(fx, rest))
            }
        };
        Ok(OscBound { lower, upper })
    }

    pub fn cliquish_decide(&self) -> Result<bool, Error> {
        match self {
            Self::Constant(_) | Self::Step(_) | Self::ThomaeLike => Ok(true),
            Self::DirichletLike { .. } => Ok(false),
            Self::IndicatorOfTree(_) => Err(Error::Undecidable("cliquishness of a tree indicator".into())),
        }
    }
}

/// Indices of the `count` lowest-index dyadics in the pieces, skipping `excluded`.
pub(crate) fn nth_dyadics_excluding(set: &[Piece], excluded: &[Rat], count: usize) -> Vec<BigInt> {
    let mut found = Vec::new();
    if set.iter().all(|(l, _, r, _)| l >= r) {
        return found;
    }
    for d in 1u64.. {
        let scale = pow2_int(d);
        let mut at_depth: BTreeSet<BigInt> = BTreeSet::new();
        for (l, lc, r, rc) in set {
            let s = Rat::from_integer(scale.clone());
            let mut k = (l * &s).ceil().to_integer();
            let kmax = (r * &s).floor().to_integer();
            while k <= kmax {
                let q = Rat::new(k.clone(), scale.clone());
                let ok = k.is_odd()
                    && (q > *l || *lc)
                    && (q < *r || *rc)
                    && q.is_positive()
                    && q < Rat::one()
                    && !excluded.contains(&q);
                if ok {
                    at_depth.insert(k.clone());
                    if at_depth.len() + found.len() >= count {
                        break;
                    }
                }
                k += 1;
            }
        }
        for k in at_depth {
            if found.len() < count {
                found.push(pow2_int(d - 1) + (k - 1) / 2);
            }
        }
        if found.len() >= count {
            return found;
        }
    }
    unreachable!()
}

/// Points with preperiod `level`, period length 1 to 3, near `x` and inside `a`.
pub fn ball_samples(a: &IntervalSet, x: &EpPoint, level: u64) -> Vec<EpPoint> {
    let xq = x.to_rat();
    let r = pow2_neg(level);
    let top = pow2_int(level);
    let k = (&xq * Rat::from_integer(top.clone())).floor().to_integer();
    let mut out = Vec::new();
    for dk in [-1i64, 0, 1] {
        let kk = &k + dk;
        if kk.is_negative() || kk >= top {
            continue;
        }
        let bits: Vec<bool> = (0..level).rev().map(|i| kk.bit(i)).collect();
        for len in 1..=3u32 {
            for pat in 0..(1u32 << len) {
                let period: Vec<bool> = (0..len).rev().map(|i| pat >> i & 1 == 1).collect();
                let y = EpPoint::new(bits.clone(), period).expect("non-empty period");
                let yq = y.to_rat();
                if (&yq - &xq).abs() < r && a.contains_rat(&yq) {
                    out.push(y);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "constant {c}"),
            Self::ThomaeLike => write!(f, "thomae"),
            Self::DirichletLike { a, b } => write!(f, "dirichlet {a} {b}"),
            Self::Step(pieces) => {
                let parts: Vec<String> = pieces
                    .iter()
                    .map(|(iv, v)| format!("({},{},{v})", iv.left(), iv.right()))
                    .collect();
                write!(f, "step [{}]", parts.join(","))
            }
            Self::IndicatorOfTree(t) => {
                let lines: Vec<String> = t.to_string().lines().map(str::to_string).collect();
                write!(f, "indicator {}", lines.join("; "))
            }
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// `constant c`, `thomae`, `dirichlet a b`, `step [(l,r,v),...]`, `indicator <automaton>`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest = rest.trim();
        match head {
            "thomae" if rest.is_empty() => Ok(Self::ThomaeLike),
            "constant" => Ok(Self::Constant(parse_rat(rest)?)),
            "dirichlet" => {
                let vals: Vec<&str> = rest.split_whitespace().collect();
                match vals.as_slice() {
                    [a, b] => Self::dirichlet(parse_rat(a)?, parse_rat(b)?),
                    _ => Err(Error::Parse(format!("expected `dirichlet a b`, got `{s}`"))),
                }
            }
            "step" => {
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("bad step list `{rest}`")))?;
                let mut pieces = Vec::new();
                for tuple in inner.split(')') {
                    let tuple = tuple.trim().trim_start_matches(',').trim();
                    if tuple.is_empty() {
                        continue;
                    }
                    let body = tuple
                        .strip_prefix('(')
                        .ok_or_else(|| Error::Parse(format!("bad step piece `{tuple}`")))?;
                    let fields: Vec<&str> = body.split(',').collect();
                    let [l, r, v] = fields.as_slice() else {
                        return Err(Error::Parse(format!("bad step piece `{tuple}`")));
                    };
                    let iv = DyadicInterval::new(parse_rat(l)?, parse_rat(r)?)?;
                    pieces.push((iv, parse_rat(v)?));
                }
                Self::step(pieces)
            }
            "indicator" => Ok(Self::IndicatorOfTree(rest.parse()?)),
            _ => Err(Error::Parse(format!("unknown function `{s}`"))),
        }
    }
}

/// Thomae-like value at the `n`-th dyadic, for callers holding an index.
pub fn thomae_value(n: &BigInt) -> Rat {
    Rat::new(BigInt::one(), n.clone())
}

/// Depth of the `n`-th dyadic.
pub fn index_depth(n: u64) -> u64 {
    (64 - n.leading_zeros()) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    fn pt(s: &str) -> EpPoint {
        s.parse().unwrap()
    }

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    fn two_step() -> TestFunction {
        "step [(0,1/2,0),(1/2,1,1)]".parse().unwrap()
    }

    #[test]
    fn enum_dyadic_examples() {
        assert_eq!(enum_dyadic(1), pt("1/2"));
        assert_eq!(enum_dyadic(3), pt("3/4"));
        assert_eq!(enum_dyadic(6), pt("5/8"));
    }

    #[test]
    fn enum_dyadic_is_a_bijection_to_depth_10() {
        let mut seen = BTreeSet::new();
        for n in 1..=1023u64 {
            let p = enum_dyadic(n);
            let q = p.to_rat();
            assert!(dyadic_depth(&q).unwrap() <= 10);
            assert_eq!(dyadic_index(&q), Some(BigInt::from(n)));
            assert!(seen.insert(p));
        }
        for d in 1..=10u64 {
            for k in (1..(1i64 << d)).step_by(2) {
                assert!(seen.contains(&EpPoint::from_rat(&rat(k, 1 << d)).unwrap()));
            }
        }
    }

    #[test]
    fn eval_examples() {
        let t = TestFunction::ThomaeLike;
        assert_eq!(t.eval(&pt("1/2")), int(1));
        assert_eq!(t.eval(&pt("1/3")), int(0));
        assert_eq!(t.eval(&pt("3/4")), rat(1, 3));
        assert_eq!(t.eval(&EpPoint::zero()), int(0));
        assert_eq!(t.eval(&EpPoint::one()), int(0));
        let d = TestFunction::dirichlet(int(1), int(0)).unwrap();
        assert_eq!(d.eval(&pt("3/4")), int(1));
        assert_eq!(d.eval(&pt("1/3")), int(0));
        assert_eq!(d.eval(&EpPoint::one()), int(1));
        let s = two_step();
        assert_eq!(s.eval(&pt("1/2")), int(0));
        assert_eq!(s.eval(&pt("5/8")), int(1));
    }

    #[test]
    fn osc_at_examples() {
        let unit = IntervalSet::unit();
        let d = TestFunction::dirichlet(int(1), int(0)).unwrap();
        assert_eq!(d.osc_at(&unit, &pt("1/3")).unwrap(), OscBound::exact(int(1)));
        let t = TestFunction::ThomaeLike;
        assert_eq!(t.osc_at(&unit, &pt("1/2")).unwrap(), OscBound::exact(int(1)));
        assert_eq!(t.osc_at(&unit, &pt("1/3")).unwrap(), OscBound::exact(int(0)));
        assert!(t.osc_at(&set("[0,1/4]"), &pt("1/2")).is_err());
    }

    #[test]
    fn step_oscillation_depends_on_right_side() {
        let s = two_step();
        assert_eq!(s.osc_at(&IntervalSet::unit(), &pt("1/2")).unwrap(), OscBound::exact(int(1)));
        assert_eq!(s.osc_at(&set("[0,1/2]"), &pt("1/2")).unwrap(), OscBound::exact(int(0)));
        assert_eq!(s.osc_at(&IntervalSet::unit(), &pt("1/4")).unwrap(), OscBound::exact(int(0)));
    }

    #[test]
    fn osc_brute_examples() {
        let unit = IntervalSet::unit();
        let c = TestFunction::Constant(int(5));
        assert_eq!(c.osc_brute(&unit, &pt("1/3"), 6).unwrap(), OscBound::exact(int(0)));
        let d = TestFunction::dirichlet(int(1), int(0)).unwrap();
        assert!(d.osc_brute(&unit, &pt("1/2"), 6).unwrap().lower >= int(1));
        let t = TestFunction::ThomaeLike;
        let b = t.osc_brute(&unit, &pt("1/2"), 8).unwrap();
        assert!(b.lower >= int(1) - rat(2, 128));
        let b = t.osc_brute(&unit, &pt("1/3"), 12).unwrap();
        assert_eq!(b.lower, int(0));
        assert!(b.upper.unwrap() < pow2_neg(10));
    }

    #[test]
    fn value_diam_examples() {
        let t = TestFunction::ThomaeLike;
        assert_eq!(t.value_diam(&set("[1/16,3/16]")), rat(1, 4));
        assert_eq!(t.value_diam(&IntervalSet::unit()), int(1));
        let d = TestFunction::dirichlet(int(1), int(0)).unwrap();
        assert_eq!(d.value_diam(&set("[3/8,1/2]")), int(1));
        assert_eq!(TestFunction::Constant(int(3)).value_diam(&IntervalSet::unit()), int(0));
        let s = two_step();
        assert_eq!(s.value_diam(&set("[0,1/2]")), int(0));
        assert_eq!(s.value_diam(&set("[1/4,3/4]")), int(1));
    }

    #[test]
    fn value_diam_on_trees() {
        use crate::treesets::samples::mod3;
        let d = TestFunction::dirichlet(int(1), int(0)).unwrap();
        assert_eq!(d.value_diam_tree(&mod3()).unwrap(), int(0));
        assert_eq!(d.value_diam_tree(&TreeAutomaton::full()).unwrap(), int(1));
        let t = TestFunction::ThomaeLike;
        assert_eq!(t.value_diam_tree(&TreeAutomaton::full()).unwrap(), int(1));
        assert_eq!(t.value_diam_tree(&mod3()).unwrap(), int(0));
        let s = two_step();
        assert_eq!(s.value_diam_tree(&mod3()).unwrap(), int(0));
        assert_eq!(s.value_diam_tree(&TreeAutomaton::full()).unwrap(), int(1));
    }

    #[test]
    fn cliquish_examples() {
        assert_eq!(TestFunction::ThomaeLike.cliquish_decide(), Ok(true));
        assert_eq!(TestFunction::dirichlet(int(1), int(0)).unwrap().cliquish_decide(), Ok(false));
        assert_eq!(TestFunction::Constant(int(0)).cliquish_decide(), Ok(true));
        assert!(TestFunction::IndicatorOfTree(TreeAutomaton::full()).cliquish_decide().is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["thomae", "dirichlet 1 0", "constant 5", "step [(0,1/2,0),(1/2,1,1)]"] {
            let f: TestFunction = s.parse().unwrap();
            assert_eq!(f.to_string().parse::<TestFunction>().unwrap(), f);
        }
        assert!("dirichlet 1 1".parse::<TestFunction>().is_err());
        assert!("step [(0,1/2,0),(3/4,1,1)]".parse::<TestFunction>().is_err());
    }
}

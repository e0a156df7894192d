//! The families `Σ`: legality, dense refinement, small-oscillation
//! refinement, and the fusion and exhaustion constructions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::functions::{enum_dyadic, nth_dyadics_excluding, Piece, TestFunction};
use crate::intervalsets::IntervalSet;
use crate::numerics::{int, pow2_int, pow2_neg, EpPoint, Rat};
use crate::treesets::TreeAutomaton;
use crate::Error;

/// Default cap on the relative depth of refinement searches.
pub const DEFAULT_DEPTH_CAP: u32 = 14;

/// The meager part of a residual presentation: `M = ⋃ F_n` with `F_n ⊆ F_{n+1}` finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// `F_n` holds the first `n` dyadics of `(0,1)` in enumeration order.
    Dyadics,
    /// `F_n` holds the first `n` listed points; `M` is the whole list.
    Points(Vec<EpPoint>),
}

impl Schedule {
    pub fn f_n(&self, n: u64) -> Vec<EpPoint> {
        match self {
            Self::Dyadics => (1..=n).map(enum_dyadic).collect(),
            Self::Points(pts) => pts.iter().take(n as usize).cloned().collect(),
        }
    }

    pub fn in_meager(&self, p: &EpPoint) -> bool {
        match self {
            Self::Dyadics => p.is_dyadic() && *p != EpPoint::zero() && *p != EpPoint::one(),
            Self::Points(pts) => pts.contains(p),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dyadics => write!(f, "dyadics"),
            Self::Points(pts) => {
                write!(f, "points")?;
                for p in pts {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut words = s.split_whitespace();
        match words.next() {
            Some("dyadics") if words.clone().next().is_none() => Ok(Self::Dyadics),
            Some("points") => Ok(Self::Points(words.map(str::parse).collect::<Result<_, _>>()?)),
            _ => Err(Error::Parse(format!("unknown schedule `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Clo,
    Measure,
    Tree,
    Residual(Schedule),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Clo => write!(f, "clo"),
            Self::Measure => write!(f, "measure"),
            Self::Tree => write!(f, "tree"),
            Self::Residual(s) => write!(f, "residual {s}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "clo" => Ok(Self::Clo),
            "measure" => Ok(Self::Measure),
            "tree" => Ok(Self::Tree),
            _ => match s.strip_prefix("residual ") {
                Some(rest) => Ok(Self::Residual(rest.trim().parse()?)),
                None => Err(Error::Parse(format!("unknown family `{s}`"))),
            },
        }
    }
}

/// `int(U) ∖ M` for a closed carrier `U`, interior taken inside `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualSet {
    pub carrier: IntervalSet,
    pub schedule: Schedule,
}

impl ResidualSet {
    pub fn contains(&self, p: &EpPoint) -> bool {
        self.carrier.interior_contains(&p.to_rat()) && !self.schedule.in_meager(p)
    }

    fn interior_pieces(&self) -> Vec<Piece> {
        self.carrier
            .components()
            .iter()
            .map(|c| (c.left().clone(), c.left().is_zero(), c.right().clone(), c.right().is_one()))
            .collect()
    }

    /// Value spread of `f` on `int(U) ∖ M`.
    pub fn value_diam(&self, f: &TestFunction) -> Result<Rat, Error> {
        let pieces = self.interior_pieces();
        let interior_has = |q: &Rat| self.carrier.interior_contains(q);
        match (f, &self.schedule) {
            (TestFunction::Constant(_), _) => Ok(Rat::zero()),
            (TestFunction::IndicatorOfTree(_), _) => {
                Err(Error::Unsupported("indicator on a residual family".into()))
            }
            (TestFunction::Step(steps), _) => {
                Ok(crate::functions::diam_of(&TestFunction::step_values_on(steps, &pieces)))
            }
            (TestFunction::DirichletLike { a, b }, Schedule::Dyadics) => {
                if interior_has(&int(0)) || interior_has(&int(1)) {
                    Ok((a - b).abs())
                } else {
                    Ok(Rat::zero())
                }
            }
            (TestFunction::DirichletLike { a, b }, Schedule::Points(_)) => Ok((a - b).abs()),
            (TestFunction::ThomaeLike, Schedule::Dyadics) => Ok(Rat::zero()),
            (TestFunction::ThomaeLike, Schedule::Points(pts)) => {
                let excluded: Vec<Rat> = pts.iter().map(EpPoint::to_rat).collect();
                Ok(nth_dyadics_excluding(&pieces, &excluded, 1)
                    .pop()
                    .map_or(Rat::zero(), |n| Rat::new(BigInt::one(), n)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Member {
    Interval(IntervalSet),
    Tree(TreeAutomaton),
    Residual(ResidualSet),
}

impl Member {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Interval(_) => "interval",
            Self::Tree(_) => "tree",
            Self::Residual(_) => "residual",
        }
    }

    /// Membership of a point, exact for every carrier.
    pub fn contains(&self, p: &EpPoint) -> bool {
        match self {
            Self::Interval(s) => s.contains(p),
            Self::Tree(t) => t.member(p),
            Self::Residual(r) => r.contains(p),
        }
    }

    /// Exact inclusion between members of the same carrier.
    pub fn subset(&self, other: &Member) -> bool {
        match (self, other) {
            (Self::Interval(a), Self::Interval(b)) => a.subset(b),
            (Self::Tree(a), Self::Tree(b)) => a.subset(b),
            (Self::Residual(a), Self::Residual(b)) => {
                a.schedule == b.schedule && a.carrier.subset(&b.carrier)
            }
            _ => false,
        }
    }

    /// Closed hull `[min, max]` of the member (of its carrier for residual sets).
    pub fn hull(&self) -> (Rat, Rat) {
        match self {
            Self::Interval(s) => s.hull(),
            Self::Tree(t) => t.hull(),
            Self::Residual(r) => r.carrier.hull(),
        }
    }

    pub fn diameter(&self) -> Rat {
        let (l, r) = self.hull();
        r - l
    }

    /// Contained in the closed ball of radius `r` around `x`.
    pub fn within_ball(&self, x: &EpPoint, r: &Rat) -> bool {
        let (lo, hi) = self.hull();
        let xq = x.to_rat();
        &xq - r <= lo && hi <= &xq + r
    }

    /// Smallest `d` with `2^-d <= diameter`.
    pub fn resolution(&self) -> u64 {
        let diam = self.diameter();
        let mut d = 0;
        while pow2_neg(d) > diam {
            d += 1;
        }
        d
    }

    /// Text form used in transcripts; parse back with [`Member::decode`].
    pub fn text(&self) -> String {
        match self {
            Self::Interval(s) => s.to_string(),
            Self::Tree(t) => t.to_string().trim_end().lines().collect::<Vec<_>>().join("; "),
            Self::Residual(r) => r.carrier.to_string(),
        }
    }

    pub fn decode(kind: &str, text: &str, family: &FamilySpec) -> Result<Self, Error> {
        match kind {
            "interval" => Ok(Self::Interval(text.parse()?)),
            "tree" => Ok(Self::Tree(text.parse()?)),
            "residual" => match family {
                FamilySpec::Residual(schedule) => Ok(Self::Residual(ResidualSet {
                    carrier: text.parse()?,
                    schedule: schedule.clone(),
                })),
                _ => Err(Error::Parse("residual member outside a residual family".into())),
            },
            _ => Err(Error::Parse(format!("unknown member kind `{kind}`"))),
        }
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsopWitness {
    pub set: Member,
    pub alpha: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hsop {
    Refined(Member),
    Witness(HsopWitness),
}

/// The bits of an expansion `pre period^ω`, first `n` of them.
fn expansion_prefix(pre: &[bool], period: &[bool], n: usize) -> Vec<bool> {
    (0..n)
        .map(|i| if i < pre.len() { pre[i] } else { period[(i - pre.len()) % period.len()] })
        .collect()
}

/// `floor(1/alpha)`: how many leading dyadics carry a Thomae value `>= alpha`.
fn thomae_count(alpha: &Rat) -> u64 {
    (Rat::one() / alpha).floor().to_integer().to_u64().expect("alpha not too small")
}

impl FamilySpec {
    pub fn is_residual(&self) -> bool {
        matches!(self, Self::Residual(_))
    }

    /// The largest member: `[0,1]` in the appropriate carrier.
    pub fn full_member(&self) -> Member {
        match self {
            Self::Clo | Self::Measure => Member::Interval(IntervalSet::unit()),
            Self::Tree => Member::Tree(TreeAutomaton::full()),
            Self::Residual(s) => Member::Residual(ResidualSet {
                carrier: IntervalSet::unit(),
                schedule: s.clone(),
            }),
        }
    }

    pub fn is_legal(&self, m: &Member) -> bool {
        match (self, m) {
            (Self::Clo, Member::Interval(_)) => true,
            (Self::Measure, Member::Interval(s)) => s.lebesgue().is_positive(),
            (Self::Tree, Member::Tree(t)) => t.is_perfect().perfect,
            (Self::Residual(s), Member::Residual(r)) => &r.schedule == s,
            _ => false,
        }
    }

    /// Exact value spread of `f` on a member (residual sets: off the meager part).
    pub fn value_diam(&self, f: &TestFunction, m: &Member) -> Result<Rat, Error> {
        match m {
            Member::Interval(s) => Ok(f.value_diam(s)),
            Member::Tree(t) => f.value_diam_tree(t),
            Member::Residual(r) => r.value_diam(f),
        }
    }

    /// A member inside `P ∩ B(x, r)`.
    pub fn refine_dense(&self, p: &Member, x: &EpPoint, r: &Rat) -> Result<Member, Error> {
        if !p.contains(x) {
            return Err(Error::NotMember(x.to_string()));
        }
        match p {
            Member::Interval(s) => s.clip_ball(x, r).map(Member::Interval).ok_or(Error::Empty),
            Member::Residual(res) => Ok(Member::Residual(ResidualSet {
                carrier: res.carrier.clip_ball(x, r).ok_or(Error::Empty)?,
                schedule: res.schedule.clone(),
            })),
            Member::Tree(t) => {
                // The cylinder of depth d around a run of x lies within 2^-d of x.
                let mut d = 0;
                while pow2_neg(d) >= *r {
                    d += 1;
                }
                let (pre, period) = x
                    .expansions()
                    .into_iter()
                    .find(|(pre, period)| {
                        let probe = EpPoint::new(pre.clone(), period.clone()).expect("period");
                        t.member(&probe)
                            && t.cylinder(&expansion_prefix(pre, period, d as usize)).is_ok()
                    })
                    .ok_or_else(|| Error::NotMember(x.to_string()))?;
                Ok(Member::Tree(t.cylinder(&expansion_prefix(&pre, &period, d as usize))?))
            }
        }
    }

    /// A sub-member with value spread `< alpha`, or a witness that none exists.
    pub fn hsop_refine(
        &self,
        f: &TestFunction,
        p: &Member,
        alpha: &Rat,
        depth_cap: u32,
    ) -> Result<Hsop, Error> {
        assert!(alpha.is_positive(), "alpha must be positive");
        if &self.value_diam(f, p)? < alpha {
            return Ok(Hsop::Refined(p.clone()));
        }
        match (p, f) {
            (Member::Interval(_), TestFunction::DirichletLike { a, b }) if &(a - b).abs() >= alpha => {
                Ok(Hsop::Witness(HsopWitness { set: p.clone(), alpha: alpha.clone() }))
            }
            (Member::Interval(s), TestFunction::ThomaeLike) if *self == Self::Measure => {
                let pts: Vec<EpPoint> = (1..=thomae_count(alpha)).map(enum_dyadic).collect();
                let budget = s.lebesgue() / int(2);
                let q = s.remove_point_nbhds(&pts, &budget).ok_or(Error::Empty)?;
                debug_assert!(&f.value_diam(&q) < alpha);
                Ok(Hsop::Refined(Member::Interval(q)))
            }
            (Member::Interval(s), _) => {
                let base = s.resolution();
                for rel in 0..=depth_cap as u64 {
                    for cell in s.grid_cells(base + rel) {
                        if &f.value_diam(&cell) < alpha {
                            return Ok(Hsop::Refined(Member::Interval(cell)));
                        }
                    }
                }
                Err(Error::DepthCapReached(depth_cap))
            }
            (Member::Residual(r), _) => {
                let base = r.carrier.resolution();
                for rel in 0..=depth_cap as u64 {
                    for cell in r.carrier.grid_cells(base + rel) {
                        let m = ResidualSet { carrier: cell, schedule: r.schedule.clone() };
                        if &m.value_diam(f)? < alpha {
                            return Ok(Hsop::Refined(Member::Residual(m)));
                        }
                    }
                }
                Err(Error::DepthCapReached(depth_cap))
            }
            (Member::Tree(t), TestFunction::DirichletLike { .. }) => {
                Ok(Hsop::Refined(Member::Tree(t.dyadic_free_subset()?)))
            }
            (Member::Tree(t), TestFunction::ThomaeLike) => {
                let pts: Vec<EpPoint> = (1..=thomae_count(alpha)).map(enum_dyadic).collect();
                Ok(Hsop::Refined(Member::Tree(t.avoid_points(&pts)?)))
            }
            (Member::Tree(t), TestFunction::Step(_)) => {
                let mut frontier = vec![Vec::new()];
                for _ in 0..=depth_cap {
                    let mut next = Vec::new();
                    for u in frontier {
                        let c = t.cylinder(&u)?;
                        if &f.value_diam_tree(&c)? < alpha {
                            return Ok(Hsop::Refined(Member::Tree(c)));
                        }
                        for b in [false, true] {
                            let mut v = u.clone();
                            v.push(b);
                            if t.cylinder(&v).is_ok() {
                                next.push(v);
                            }
                        }
                    }
                    frontier = next;
                }
                Err(Error::DepthCapReached(depth_cap))
            }
            (Member::Tree(_), TestFunction::IndicatorOfTree(_)) => {
                Err(Error::Undecidable("small-oscillation refinement for a tree indicator".into()))
            }
            _ => Err(Error::Unsupported(format!("refinement of {} for {}", p.kind(), f.name()))),
        }
    }

    /// Legal points of the member on the dyadic grid of the given depth,
    /// together with one non-dyadic point per grid cell, left to right.
    pub fn sample_points(&self, m: &Member, depth: u64) -> Vec<EpPoint> {
        match m {
            Member::Tree(t) => t.sample_points(depth as usize),
            Member::Interval(s) => grid_points(s, depth),
            Member::Residual(r) => grid_points(&r.carrier, depth)
                .into_iter()
                .filter(|p| r.contains(p))
                .collect(),
        }
    }

    /// Legal sub-members of the member at the given relative depth.
    pub fn sub_members(&self, m: &Member, depth: u64) -> Vec<Member> {
        match m {
            Member::Interval(s) => s.grid_cells(s.resolution() + depth).into_iter().map(Member::Interval).collect(),
            Member::Residual(r) => r
                .carrier
                .grid_cells(r.carrier.resolution() + depth)
                .into_iter()
                .map(|c| Member::Residual(ResidualSet { carrier: c, schedule: r.schedule.clone() }))
                .collect(),
            Member::Tree(t) => {
                let Some((u, _)) = t.first_branch() else {
                    return vec![m.clone()];
                };
                let mut words = vec![u];
                for _ in 0..depth.max(1) {
                    let mut next = Vec::new();
                    for w in words {
                        for b in [false, true] {
                            let mut v = w.clone();
                            v.push(b);
                            if t.cylinder(&v).is_ok() {
                                next.push(v);
                            }
                        }
                    }
                    words = next;
                }
                words.iter().filter_map(|w| t.cylinder(w).ok()).map(Member::Tree).collect()
            }
        }
    }
}

fn grid_points(s: &IntervalSet, depth: u64) -> Vec<EpPoint> {
    let scale = pow2_int(depth);
    let step = pow2_neg(depth);
    let third = Rat::new(BigInt::one(), BigInt::from(3)) * &step;
    let mut out = Vec::new();
    for c in s.components() {
        let mut k = (c.left() * Rat::from_integer(scale.clone())).ceil().to_integer();
        loop {
            let q = Rat::new(k.clone(), scale.clone());
            if &q > c.right() {
                break;
            }
            out.push(EpPoint::from_rat(&q).expect("in [0,1]"));
            let off = &q + &third;
            if &off <= c.right() {
                out.push(EpPoint::from_rat(&off).expect("in [0,1]"));
            }
            k += 1;
        }
    }
    out
}

/// Result of the fusion construction: every generation's pieces and the final union.
#[derive(Debug, Clone)]
pub struct Fusion {
    pub generations: Vec<Vec<TreeAutomaton>>,
    pub union: TreeAutomaton,
}

/// Generation `k` splits each piece of generation `k-1` into two disjoint
/// perfect pieces of hull diameter `< 1/k` on which `f` spreads by `< 1/k`.
pub fn fuse_perfect(f: &TestFunction, p: &TreeAutomaton, n: u32, depth_cap: u32) -> Result<Fusion, Error> {
    if n == 0 {
        return Ok(Fusion { generations: vec![vec![p.clone()]], union: p.clone() });
    }
    let refine = |t: TreeAutomaton, alpha: &Rat| -> Result<TreeAutomaton, Error> {
        match FamilySpec::Tree.hsop_refine(f, &Member::Tree(t), alpha, depth_cap)? {
            Hsop::Refined(Member::Tree(t)) => Ok(t),
            _ => Err(Error::Unsupported(format!("no small-oscillation refinement for {}", f.name()))),
        }
    };
    let mut generations = vec![vec![refine(p.perfect_kernel()?, &Rat::one())?]];
    for k in 1..=n as i64 {
        let alpha = Rat::new(BigInt::one(), BigInt::from(k));
        let mut next = Vec::new();
        for piece in generations.last().unwrap() {
            let (u, _) = piece
                .first_branch()
                .ok_or_else(|| Error::Undecidable("piece is not perfect".into()))?;
            let mut mid_bits = u.clone();
            mid_bits.push(true);
            let mid = EpPoint::new(mid_bits, vec![false])?;
            for b in [false, true] {
                let mut w = u.clone();
                w.push(b);
                let mut child = piece.cylinder(&w)?.avoid_points(std::slice::from_ref(&mid))?;
                while child.hull_diameter() >= alpha {
                    let (mut v, _) = child
                        .first_branch()
                        .ok_or_else(|| Error::Undecidable("piece is not perfect".into()))?;
                    v.push(false);
                    child = child.cylinder(&v)?;
                }
                next.push(refine(child, &alpha)?);
            }
        }
        generations.push(next);
    }
    let union = TreeAutomaton::union_all(generations.last().unwrap());
    Ok(Fusion { generations, union })
}

/// Chain `S_1 ⊇ … ⊇ S_n` inside `P`: stage `k` cuts out small neighbourhoods of the
/// points where `f` jumps by `>= 1/k`, losing less than `λ(P)/2^(k+1)` of measure.
pub fn measure_exhaust(f: &TestFunction, p: &IntervalSet, n: u32) -> Result<Vec<IntervalSet>, Error> {
    let total = p.lebesgue();
    let mut cur = p.clone();
    let mut out = Vec::with_capacity(n as usize);
    for k in 1..=n as u64 {
        let pts: Vec<EpPoint> = match f {
            TestFunction::Constant(_) => Vec::new(),
            TestFunction::ThomaeLike => (1..=k).map(enum_dyadic).collect(),
            TestFunction::Step(pieces) => pieces[1..]
                .iter()
                .map(|(iv, _)| EpPoint::from_rat(iv.left()))
                .collect::<Result<_, _>>()?,
            _ => return Err(Error::Unsupported(format!("measure exhaustion for {}", f.name()))),
        };
        let budget = &total * pow2_neg(k + 1);
        cur = cur.remove_point_nbhds(&pts, &budget).ok_or(Error::Empty)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Whether the piece pieces of a generation are pairwise disjoint as sets of reals.
pub fn pairwise_disjoint(pieces: &[TreeAutomaton]) -> bool {
    pieces.iter().enumerate().all(|(i, a)| {
        pieces[i + 1..].iter().all(|b| a.intersect_real(b).is_err())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::meet;
    use crate::numerics::rat;
    use crate::treesets::samples::mod3;

    fn pt(s: &str) -> EpPoint {
        s.parse().unwrap()
    }

    fn iset(s: &str) -> Member {
        Member::Interval(s.parse().unwrap())
    }

    fn dirichlet() -> TestFunction {
        TestFunction::dirichlet(int(1), int(0)).unwrap()
    }

    #[test]
    fn refine_dense_examples() {
        let got = FamilySpec::Clo.refine_dense(&iset("[0,1]"), &pt("1/2"), &rat(1, 4)).unwrap();
        assert_eq!(got, iset("[3/8,5/8]"));

        let full = Member::Tree(TreeAutomaton::full());
        let got = FamilySpec::Tree.refine_dense(&full, &pt("1/3"), &rat(1, 8)).unwrap();
        assert!(FamilySpec::Tree.is_legal(&got));
        assert!(got.subset(&full));
        let (lo, hi) = got.hull();
        assert!(lo > rat(1, 3) - rat(1, 8) && hi < rat(1, 3) + rat(1, 8));

        let res = FamilySpec::Residual(Schedule::Dyadics);
        let got = res.refine_dense(&res.full_member(), &pt("1/3"), &rat(1, 2)).unwrap();
        let Member::Residual(r) = &got else { panic!() };
        assert_eq!(r.schedule, Schedule::Dyadics);
        assert!(got.contains(&pt("1/3")));
    }

    #[test]
    fn refine_dense_rejects_outside_points() {
        assert!(FamilySpec::Clo.refine_dense(&iset("[0,1/4]"), &pt("3/4"), &rat(1, 8)).is_err());
    }

    #[test]
    fn hsop_examples() {
        let t = TestFunction::ThomaeLike;
        let Hsop::Refined(Member::Interval(q)) =
            FamilySpec::Clo.hsop_refine(&t, &iset("[0,1]"), &rat(1, 2), DEFAULT_DEPTH_CAP).unwrap()
        else {
            panic!()
        };
        assert!(t.value_diam(&q) < rat(1, 2));

        let w = FamilySpec::Clo.hsop_refine(&dirichlet(), &iset("[0,1]"), &rat(1, 2), 14).unwrap();
        assert_eq!(w, Hsop::Witness(HsopWitness { set: iset("[0,1]"), alpha: rat(1, 2) }));

        let full = Member::Tree(TreeAutomaton::full());
        let got = FamilySpec::Tree.hsop_refine(&dirichlet(), &full, &rat(1, 4), 14).unwrap();
        assert_eq!(got, Hsop::Refined(Member::Tree(mod3())));
    }

    #[test]
    fn measure_hsop_keeps_half_the_measure() {
        let t = TestFunction::ThomaeLike;
        let p: IntervalSet = "[0,1]".parse().unwrap();
        let Hsop::Refined(Member::Interval(q)) =
            FamilySpec::Measure.hsop_refine(&t, &Member::Interval(p.clone()), &rat(1, 5), 14).unwrap()
        else {
            panic!()
        };
        assert!(t.value_diam(&q) < rat(1, 5));
        assert!(q.lebesgue() > p.lebesgue() / int(2));
    }

    #[test]
    fn hsop_cap_is_an_error() {
        let err = FamilySpec::Clo.hsop_refine(&TestFunction::ThomaeLike, &iset("[0,1]"), &rat(1, 100), 2);
        assert_eq!(err, Err(Error::DepthCapReached(2)));
    }

    #[test]
    fn fusion_examples() {
        let fused = fuse_perfect(&dirichlet(), &TreeAutomaton::full(), 2, 14).unwrap();
        let last = fused.generations.last().unwrap();
        assert_eq!(last.len(), 4);
        assert!(pairwise_disjoint(last));
        for piece in last {
            assert!(piece.is_perfect().perfect);
            assert_eq!(dirichlet().value_diam_tree(piece).unwrap(), int(0));
        }

        let t = TestFunction::ThomaeLike;
        let fused = fuse_perfect(&t, &TreeAutomaton::full(), 1, 14).unwrap();
        let last = fused.generations.last().unwrap();
        assert_eq!(last.len(), 2);
        assert!(pairwise_disjoint(last));
        for piece in last {
            assert!(t.value_diam_tree(piece).unwrap() < int(1));
        }

        let fused = fuse_perfect(&t, &mod3(), 0, 14).unwrap();
        assert_eq!(fused.union, mod3());
    }

    #[test]
    fn exhaustion_examples() {
        let unit = IntervalSet::unit();
        let chain = measure_exhaust(&TestFunction::ThomaeLike, &unit, 1).unwrap();
        assert_eq!(chain[0], "[0,7/16]∪[9/16,1]".parse().unwrap());

        let chain = measure_exhaust(&TestFunction::Constant(int(2)), &unit, 3).unwrap();
        assert!(chain.iter().all(|s| *s == unit));

        let step: TestFunction = "step [(0,1/2,0),(1/2,1,1)]".parse().unwrap();
        let chain = measure_exhaust(&step, &unit, 1).unwrap();
        assert_eq!(chain[0].components().len(), 2);
        for c in chain[0].components() {
            let piece = IntervalSet::interval(c.left().clone(), c.right().clone()).unwrap();
            assert_eq!(step.value_diam(&piece), int(0));
        }
    }

    #[test]
    fn residual_membership_uses_interior_and_schedule() {
        let r = ResidualSet { carrier: "[0,1/2]".parse().unwrap(), schedule: Schedule::Dyadics };
        assert!(r.contains(&pt("1/3")));
        assert!(!r.contains(&pt("1/4")));
        assert!(!r.contains(&pt("1/2")));
        assert!(r.contains(&EpPoint::zero()));
        assert_eq!(r.value_diam(&dirichlet()).unwrap(), int(1));
        let inner = ResidualSet { carrier: "[1/8,1/2]".parse().unwrap(), schedule: Schedule::Dyadics };
        assert_eq!(inner.value_diam(&dirichlet()).unwrap(), int(0));
    }

    #[test]
    fn family_text_round_trip() {
        for s in ["clo", "measure", "tree", "residual dyadics", "residual points 1:0 :01"] {
            let f: FamilySpec = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("cl0".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn cliquish_matches_hsop_on_clo() {
        for f in [TestFunction::ThomaeLike, dirichlet(), TestFunction::Constant(int(1))] {
            let hsop = FamilySpec::Clo.hsop_refine(&f, &iset("[0,1]"), &rat(1, 3), 14).unwrap();
            assert_eq!(matches!(hsop, Hsop::Refined(_)), f.cliquish_decide().unwrap());
        }
    }

    #[test]
    fn step_hsop_on_trees() {
        let step: TestFunction = "step [(0,1/2,0),(1/2,1,1)]".parse().unwrap();
        let full = Member::Tree(TreeAutomaton::full());
        let Hsop::Refined(q) = FamilySpec::Tree.hsop_refine(&step, &full, &rat(1, 2), 14).unwrap() else {
            panic!()
        };
        assert!(FamilySpec::Tree.value_diam(&step, &q).unwrap() < rat(1, 2));
        assert!(q.subset(&full));
    }

    #[test]
    fn pieces_meet_helper() {
        let a: Piece = (int(0), true, rat(1, 2), false);
        let b: Piece = (rat(1, 2), true, int(1), true);
        assert!(meet(&a, &b).is_none());
    }
}

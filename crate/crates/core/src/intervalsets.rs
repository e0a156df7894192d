//! Finite unions of non-degenerate closed dyadic intervals.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::numerics::{
    above_at, below_at, dyadic_depth, fmt_dyadic, int, parse_rat, pow2_neg, EpPoint, Rat,
};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    left: Rat,
    right: Rat,
}

impl DyadicInterval {
    pub fn new(left: Rat, right: Rat) -> Result<Self, Error> {
        if left.is_negative() || right > Rat::one() || left >= right {
            return Err(Error::OutOfRange(format!("[{left},{right}]")));
        }
        if dyadic_depth(&left).is_none() || dyadic_depth(&right).is_none() {
            return Err(Error::Parse(format!("non-dyadic endpoint in [{left},{right}]")));
        }
        Ok(Self { left, right })
    }

    pub fn unit() -> Self {
        Self { left: int(0), right: int(1) }
    }

    pub fn left(&self) -> &Rat {
        &self.left
    }

    pub fn right(&self) -> &Rat {
        &self.right
    }

    pub fn len(&self) -> Rat {
        &self.right - &self.left
    }

    pub fn contains_rat(&self, q: &Rat) -> bool {
        &self.left <= q && q <= &self.right
    }

    pub fn midpoint(&self) -> Rat {
        (&self.left + &self.right) / int(2)
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", fmt_dyadic(&self.left), fmt_dyadic(&self.right))
    }
}

/// Sorted, pairwise separated, non-empty list of closed dyadic intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    comps: Vec<DyadicInterval>,
}

impl IntervalSet {
    /// Normalizes arbitrary intervals: sorts, merges overlapping or touching ones.
    pub fn new(mut parts: Vec<DyadicInterval>) -> Result<Self, Error> {
        if parts.is_empty() {
            return Err(Error::Empty);
        }
        parts.sort_by(|a, b| a.left.cmp(&b.left).then(a.right.cmp(&b.right)));
        let mut comps: Vec<DyadicInterval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match comps.last_mut() {
                Some(last) if iv.left <= last.right => {
                    if iv.right > last.right {
                        last.right = iv.right;
                    }
                }
                _ => comps.push(iv),
            }
        }
        Ok(Self { comps })
    }

    /// Builds from endpoint pairs, silently dropping degenerate pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rat, Rat)>) -> Result<Self, Error> {
        let parts = pairs
            .into_iter()
            .filter(|(l, r)| l < r)
            .map(|(l, r)| DyadicInterval::new(l, r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(parts)
    }

    pub fn unit() -> Self {
        Self { comps: vec![DyadicInterval::unit()] }
    }

    pub fn interval(left: Rat, right: Rat) -> Result<Self, Error> {
        Ok(Self { comps: vec![DyadicInterval::new(left, right)?] })
    }

    pub fn components(&self) -> &[DyadicInterval] {
        &self.comps
    }

    pub fn contains_rat(&self, q: &Rat) -> bool {
        self.comps.iter().any(|c| c.contains_rat(q))
    }

    pub fn contains(&self, p: &EpPoint) -> bool {
        self.contains_rat(&p.to_rat())
    }

    /// Membership in the interior relative to `[0,1]`.
    pub fn interior_contains(&self, q: &Rat) -> bool {
        self.comps.iter().any(|c| {
            let left_ok = &c.left < q || (c.left.is_zero() && q.is_zero());
            let right_ok = q < &c.right || (c.right.is_one() && q.is_one());
            left_ok && right_ok && c.contains_rat(q)
        })
    }

    /// Exact inclusion. Components of `other` are separated by gaps, so each
    /// component of `self` must sit inside a single one of them.
    pub fn subset(&self, other: &IntervalSet) -> bool {
        self.comps.iter().all(|a| {
            other.comps.iter().any(|b| b.left <= a.left && a.right <= b.right)
        })
    }

    pub fn hull(&self) -> (Rat, Rat) {
        (self.comps[0].left.clone(), self.comps[self.comps.len() - 1].right.clone())
    }

    pub fn diameter(&self) -> Rat {
        let (l, r) = self.hull();
        r - l
    }

    pub fn lebesgue(&self) -> Rat {
        self.comps.iter().fold(Rat::zero(), |acc, c| acc + c.len())
    }

    /// `self ∩ [lo, hi]`, dropping pieces without interior.
    pub fn restrict(&self, lo: &Rat, hi: &Rat) -> Option<IntervalSet> {
        let pairs = self.comps.iter().map(|c| {
            (
                std::cmp::max(c.left.clone(), lo.clone()),
                std::cmp::min(c.right.clone(), hi.clone()),
            )
        });
        Self::from_pairs(pairs).ok()
    }

    /// Closure of the interior of `self ∩ other`.
    pub fn intersect(&self, other: &IntervalSet) -> Option<IntervalSet> {
        let mut pairs = Vec::new();
        for a in &self.comps {
            for b in &other.comps {
                pairs.push((
                    std::cmp::max(a.left.clone(), b.left.clone()),
                    std::cmp::min(a.right.clone(), b.right.clone()),
                ));
            }
        }
        Self::from_pairs(pairs).ok()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = self.comps.clone();
        parts.extend(other.comps.iter().cloned());
        Self::new(parts).expect("union of non-empty sets")
    }

    /// `self` minus the open interval `(a, b)`.
    pub fn remove_open(&self, a: &Rat, b: &Rat) -> Option<IntervalSet> {
        let mut pairs = Vec::new();
        for c in &self.comps {
            pairs.push((c.left.clone(), std::cmp::min(c.right.clone(), a.clone())));
            pairs.push((std::cmp::max(c.left.clone(), b.clone()), c.right.clone()));
        }
        Self::from_pairs(pairs).ok()
    }

    /// A member of the family inside `self ∩ (x-r, x+r)`, with endpoints
    /// snapped strictly inside the open ball at the smallest dyadic depth
    /// that leaves a non-degenerate piece. `None` when that intersection has
    /// empty interior.
    pub fn clip_ball(&self, x: &EpPoint, r: &Rat) -> Option<IntervalSet> {
        assert!(r.is_positive(), "ball radius must be positive");
        let xq = x.to_rat();
        let lo_open = &xq - r;
        let hi_open = &xq + r;
        let has_interior = self.comps.iter().any(|c| {
            std::cmp::max(&c.left, &lo_open) < std::cmp::min(&c.right, &hi_open)
        });
        if !has_interior {
            return None;
        }
        let zero = int(0);
        let one = int(1);
        for depth in 1u64.. {
            let lo = std::cmp::max(above_at(&lo_open, depth), zero.clone());
            let hi = std::cmp::min(below_at(&hi_open, depth), one.clone());
            if let Some(s) = self.restrict(&lo, &hi) {
                return Some(s);
            }
        }
        unreachable!()
    }

    /// Removes a small open dyadic neighbourhood around every point of `pts`
    /// lying in `self`; the total measure removed stays below `budget`.
    pub fn remove_point_nbhds(&self, pts: &[EpPoint], budget: &Rat) -> Option<IntervalSet> {
        assert!(budget.is_positive(), "budget must be positive");
        let inside: Vec<Rat> = pts
            .iter()
            .map(EpPoint::to_rat)
            .filter(|q| self.contains_rat(q))
            .collect();
        if inside.is_empty() {
            return Some(self.clone());
        }
        // 2 * m * 2^-depth < budget
        let m = int(2 * inside.len() as i64);
        let mut depth = 0u64;
        while &m * pow2_neg(depth) >= *budget {
            depth += 1;
        }
        let mut cur = self.clone();
        for q in &inside {
            cur = cur.remove_open(&below_at(q, depth), &above_at(q, depth))?;
        }
        Some(cur)
    }

    /// Smallest depth `d` such that the first component has length at least `2^-d`.
    pub fn resolution(&self) -> u64 {
        let len = self.comps[0].len();
        let mut d = 0;
        while pow2_neg(d) > len {
            d += 1;
        }
        d
    }

    /// Dyadic grid intervals `[k/2^d, (k+1)/2^d]` contained in `self`, left to right.
    pub fn grid_cells(&self, depth: u64) -> Vec<IntervalSet> {
        let step = pow2_neg(depth);
        let mut out = Vec::new();
        for c in &self.comps {
            let mut l = crate::numerics::ceil_at(&c.left, depth);
            while &l + &step <= c.right {
                let r = &l + &step;
                out.push(IntervalSet { comps: vec![DyadicInterval { left: l.clone(), right: r.clone() }] });
                l = r;
            }
        }
        out
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, "∪")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntervalSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parts = Vec::new();
        for piece in s.split(['∪', 'U']) {
            let piece = piece.trim();
            let inner = piece
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("bad interval `{piece}`")))?;
            let (l, r) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad interval `{piece}`")))?;
            parts.push(DyadicInterval::new(parse_rat(l)?, parse_rat(r)?)?);
        }
        Self::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn s(text: &str) -> IntervalSet {
        text.parse().unwrap()
    }

    fn pt(text: &str) -> EpPoint {
        text.parse().unwrap()
    }

    #[test]
    fn contains_examples() {
        assert!(s("[0,1/2]").contains(&pt("1/2")));
        assert!(!s("[0,1/4]∪[1/2,3/4]").contains(&pt("1/3")));
        assert!(s("[0,1]").contains(&pt("1/3")));
    }

    #[test]
    fn subset_examples() {
        assert!(s("[1/4,3/8]").subset(&s("[0,1/2]")));
        assert!(!s("[1/4,5/8]").subset(&s("[0,1/2]")));
        let a = s("[0,1/4]∪[1/2,3/4]");
        assert!(a.subset(&a));
    }

    #[test]
    fn normalization_merges_touching() {
        assert_eq!(s("[1/2,1]∪[0,1/2]"), IntervalSet::unit());
        assert_eq!(s("[0,1/4]∪[1/8,3/8]").components().len(), 1);
        assert!("[1/2,1/2]".parse::<IntervalSet>().is_err());
        assert!("[0,1/3]".parse::<IntervalSet>().is_err());
    }

    fn check_clip(set: &IntervalSet, x: &EpPoint, r: &Rat, got: &IntervalSet) {
        let xq = x.to_rat();
        assert!(got.subset(set));
        assert!(got.diameter() < int(2) * r);
        for c in got.components() {
            assert!(c.left() > &(&xq - r) && c.right() < &(&xq + r));
        }
    }

    #[test]
    fn clip_ball_examples() {
        let unit = IntervalSet::unit();
        let got = unit.clip_ball(&pt("1/2"), &rat(1, 4)).unwrap();
        check_clip(&unit, &pt("1/2"), &rat(1, 4), &got);
        assert_eq!(got, s("[3/8,5/8]"));

        assert!(s("[0,1/4]").clip_ball(&pt("3/4"), &rat(1, 8)).is_none());

        let got = unit.clip_ball(&EpPoint::zero(), &rat(1, 2)).unwrap();
        check_clip(&unit, &EpPoint::zero(), &rat(1, 2), &got);
        assert_eq!(got, s("[0,1/4]"));
    }

    #[test]
    fn measure_and_diameter() {
        assert_eq!(IntervalSet::unit().diameter(), int(1));
        assert_eq!(s("[1/4,3/8]").diameter(), rat(1, 8));
        assert_eq!(s("[0,1/8]∪[7/8,1]").diameter(), int(1));
        assert_eq!(s("[0,1/4]∪[1/2,3/4]").lebesgue(), rat(1, 2));
        assert_eq!(s("[3/8,1/2]").lebesgue(), rat(1, 8));
    }

    #[test]
    fn remove_point_nbhds_examples() {
        let unit = IntervalSet::unit();
        let got = unit.remove_point_nbhds(&[pt("1/2")], &rat(1, 8)).unwrap();
        assert_eq!(got, s("[0,15/32]∪[17/32,1]"));
        assert!(!got.contains(&pt("1/2")));
        assert!(unit.lebesgue() - got.lebesgue() < rat(1, 8));

        assert_eq!(unit.remove_point_nbhds(&[], &int(1)).unwrap(), unit);

        let quarter = s("[0,1/4]");
        let got = quarter
            .remove_point_nbhds(&[EpPoint::zero(), pt("1/4")], &rat(1, 8))
            .unwrap();
        assert!(!got.contains(&EpPoint::zero()) && !got.contains(&pt("1/4")));
        assert!(quarter.lebesgue() - got.lebesgue() < rat(1, 8));
    }

    #[test]
    fn removes_non_dyadic_points_with_dyadic_endpoints() {
        let got = IntervalSet::unit().remove_point_nbhds(&[pt("1/3")], &rat(1, 10)).unwrap();
        assert!(!got.contains(&pt("1/3")));
        assert_eq!(got.components().len(), 2);
    }

    #[test]
    fn interior_membership() {
        let a = s("[0,1/4]∪[1/2,1]");
        assert!(a.interior_contains(&int(0)));
        assert!(a.interior_contains(&int(1)));
        assert!(!a.interior_contains(&rat(1, 4)));
        assert!(!a.interior_contains(&rat(1, 2)));
        assert!(a.interior_contains(&rat(3, 4)));
    }

    #[test]
    fn display_round_trip() {
        let a = s("[0,1/8]∪[7/8,1]");
        assert_eq!(a.to_string(), "[0,1/2^3]∪[7/2^3,1]");
        assert_eq!(a.to_string().parse::<IntervalSet>().unwrap(), a);
    }
}

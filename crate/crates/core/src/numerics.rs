//! Exact scalars and points of `[0,1]`.
//!
//! Every real quantity handled by the referee is a [`Rat`]. Points are
//! rationals written as eventually periodic binary expansions
//! `0.pre (period)^ω`, kept in a canonical form so that equality of points
//! is equality of their bit strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::functions::TestFunction;
use crate::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `2^e` as a big integer.
pub fn pow2_int(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `2^-e`.
pub fn pow2_neg(e: u64) -> Rat {
    Rat::new(BigInt::one(), pow2_int(e))
}

/// Depth of a dyadic rational: the exponent of its (power-of-two) denominator.
/// `None` when the denominator is not a power of two.
pub fn dyadic_depth(q: &Rat) -> Option<u64> {
    let den = q.denom();
    if den.is_zero() {
        return None;
    }
    let tz = den.trailing_zeros().unwrap_or(0);
    if (den >> tz) == BigInt::one() {
        Some(tz)
    } else {
        None
    }
}

pub fn is_dyadic_rat(q: &Rat) -> bool {
    dyadic_depth(q).is_some()
}

/// Largest multiple of `2^-depth` that is `<= q`.
pub fn floor_at(q: &Rat, depth: u64) -> Rat {
    let scale = pow2_int(depth);
    let scaled = q * Rat::from_integer(scale.clone());
    Rat::new(scaled.floor().to_integer(), scale)
}

/// Smallest multiple of `2^-depth` that is `>= q`.
pub fn ceil_at(q: &Rat, depth: u64) -> Rat {
    let scale = pow2_int(depth);
    let scaled = q * Rat::from_integer(scale.clone());
    Rat::new(scaled.ceil().to_integer(), scale)
}

/// Largest multiple of `2^-depth` strictly below `q`.
pub fn below_at(q: &Rat, depth: u64) -> Rat {
    let f = floor_at(q, depth);
    if &f == q {
        f - pow2_neg(depth)
    } else {
        f
    }
}

/// Smallest multiple of `2^-depth` strictly above `q`.
pub fn above_at(q: &Rat, depth: u64) -> Rat {
    let c = ceil_at(q, depth);
    if &c == q {
        c + pow2_neg(depth)
    } else {
        c
    }
}

/// Formats a dyadic rational as `k/2^d` (`0` and `1` are written bare).
pub fn fmt_dyadic(q: &Rat) -> String {
    match dyadic_depth(q) {
        Some(0) => q.numer().to_string(),
        Some(d) => format!("{}/2^{}", q.numer(), d),
        None => q.to_string(),
    }
}

/// Parses `k/2^d`, `a/b` or an integer.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = d.trim();
        let den = if let Some(e) = d.strip_prefix("2^") {
            pow2_int(e.parse::<u64>().map_err(|_| bad())?)
        } else {
            BigInt::from_str(d).map_err(|_| bad())?
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(num, den))
    } else {
        Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

/// Resolution parameter for finite-depth approximations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicDepth(pub u32);

/// A point of `[0,1]` given by the binary expansion `0.pre (period)^ω`.
///
/// Canonical form: shortest period, shortest preperiod, and no `1^ω` tail
/// except for the point `1` itself, which has no other expansion inside
/// `[0,1]` and is stored as `:1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpPoint {
    pre: Vec<bool>,
    period: Vec<bool>,
}

impl EpPoint {
    /// Builds a point from raw bits and canonicalizes it. The period must be non-empty.
    pub fn new(pre: Vec<bool>, period: Vec<bool>) -> Result<Self, Error> {
        if period.is_empty() {
            return Err(Error::Parse("period must be non-empty".into()));
        }
        Ok(Self::canonical(pre, period))
    }

    pub fn zero() -> Self {
        Self { pre: vec![], period: vec![false] }
    }

    pub fn one() -> Self {
        Self { pre: vec![], period: vec![true] }
    }

    pub fn pre(&self) -> &[bool] {
        &self.pre
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    fn canonical(mut pre: Vec<bool>, period: Vec<bool>) -> Self {
        let mut period = primitive_root(period);
        absorb(&mut pre, &mut period);
        if period.iter().all(|&b| b) {
            // w 0 1^ω == w 1 0^ω; the all-ones word is the point 1.
            match pre.iter().rposition(|&b| !b) {
                None => return Self::one(),
                Some(i) => {
                    pre.truncate(i);
                    pre.push(true);
                    period = vec![false];
                    absorb(&mut pre, &mut period);
                }
            }
        }
        Self { pre, period }
    }

    /// Canonical point for a rational in `[0,1]`.
    pub fn from_rat(q: &Rat) -> Result<Self, Error> {
        if q.is_negative() || q > &Rat::one() {
            return Err(Error::OutOfRange(q.to_string()));
        }
        if q.is_one() {
            return Ok(Self::one());
        }
        // With den = 2^e·m, m odd, the expansion is periodic from bit e on.
        let den = q.denom().clone();
        let e = den.trailing_zeros().unwrap_or(0) as usize;
        let mut rem = q.numer().clone();
        let mut bits = Vec::new();
        let step = |rem: &mut BigInt, bits: &mut Vec<bool>| {
            *rem <<= 1;
            if *rem >= den {
                bits.push(true);
                *rem -= &den;
            } else {
                bits.push(false);
            }
        };
        for _ in 0..e {
            step(&mut rem, &mut bits);
        }
        let start = rem.clone();
        loop {
            step(&mut rem, &mut bits);
            if rem == start {
                let period = bits.split_off(e);
                return Ok(Self::canonical(bits, period));
            }
        }
    }

    pub fn to_rat(&self) -> Rat {
        let n = self.pre.len() as u64;
        let p = self.period.len() as u64;
        let cyc = pow2_int(p) - BigInt::one();
        let num = bits_value(&self.pre) * &cyc + bits_value(&self.period);
        Rat::new(num, pow2_int(n) * cyc)
    }

    pub fn is_dyadic(&self) -> bool {
        self.period == [false] || self.period == [true]
    }

    /// The other binary expansion of a dyadic point in `(0,1)`, as raw
    /// `(pre, period)` bits (`w 1 0^ω` becomes `w 0 1^ω`).
    pub fn dual_expansion(&self) -> Option<(Vec<bool>, Vec<bool>)> {
        if self.period != [false] || self.pre.is_empty() {
            return None;
        }
        let mut pre = self.pre.clone();
        pre.pop();
        pre.push(false);
        Some((pre, vec![true]))
    }

    /// All binary expansions of the point (one or two).
    pub fn expansions(&self) -> Vec<(Vec<bool>, Vec<bool>)> {
        let mut out = vec![(self.pre.clone(), self.period.clone())];
        out.extend(self.dual_expansion());
        out
    }

    /// The bit at position `i` (0-based) of the canonical expansion.
    pub fn bit(&self, i: usize) -> bool {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }
}

fn bits_value(bits: &[bool]) -> BigInt {
    let mut v = BigInt::zero();
    for &b in bits {
        v <<= 1;
        if b {
            v += 1;
        }
    }
    v
}

fn primitive_root(period: Vec<bool>) -> Vec<bool> {
    let n = period.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (0..n).all(|i| period[i] == period[i % d]) {
            return period[..d].to_vec();
        }
    }
    period
}

/// Moves trailing preperiod bits into the period while they match.
fn absorb(pre: &mut Vec<bool>, period: &mut [bool]) {
    while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
        if a != b {
            break;
        }
        pre.pop();
        period.rotate_right(1);
    }
}

fn fmt_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Result<Vec<bool>, Error> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad bit `{c}` in `{s}`"))),
        })
        .collect()
}

impl fmt::Display for EpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", fmt_bits(&self.pre), fmt_bits(&self.period))
    }
}

impl FromStr for EpPoint {
    type Err = Error;

    /// Accepts `pre:period` bit strings, and as a convenience plain rationals like `1/3`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s.split_once(':') {
            Some((pre, period)) => Self::new(parse_bits(pre)?, parse_bits(period)?),
            None => Self::from_rat(&parse_rat(s)?),
        }
    }
}

pub fn to_rat(p: &EpPoint) -> Rat {
    p.to_rat()
}

pub fn is_dyadic(p: &EpPoint) -> bool {
    p.is_dyadic()
}

/// The metric `|x - y|`.
pub fn dist(x: &EpPoint, y: &EpPoint) -> Rat {
    (x.to_rat() - y.to_rat()).abs()
}

/// The augmented metric `d(x,y) + |f(x) - f(y)|`.
pub fn dbar(x: &EpPoint, y: &EpPoint, f: &TestFunction) -> Rat {
    dist(x, y) + (f.eval(x) - f.eval(y)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> EpPoint {
        s.parse().unwrap()
    }

    #[test]
    fn to_rat_examples() {
        assert_eq!(p("1:0").to_rat(), rat(1, 2));
        assert_eq!(p(":01").to_rat(), rat(1, 3));
        assert_eq!(p("11:0").to_rat(), rat(3, 4));
    }

    #[test]
    fn canonical_forms() {
        // trailing ones become the zero tail
        assert_eq!(p("0:1"), p("1:0"));
        assert_eq!(p("10:0"), p("1:0"));
        assert_eq!(p(":0101"), p(":01"));
        assert_eq!(p("0:10"), p(":01"));
        assert_eq!(p("1:1"), EpPoint::one());
        assert_eq!(p(":1").to_string(), ":1");
        assert_eq!(p(":0").to_string(), ":0");
        assert_eq!(p("1/3").to_string(), ":01");
        assert_eq!(p("5/8").to_string(), "101:0");
    }

    #[test]
    fn dyadic_examples() {
        assert!(p("1:0").is_dyadic());
        assert!(!p(":01").is_dyadic());
        assert!(EpPoint::zero().is_dyadic());
        assert!(EpPoint::one().is_dyadic());
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(&p("1/2"), &p("3/4")), rat(1, 4));
        assert_eq!(dist(&p("1/3"), &p("1/3")), int(0));
        assert_eq!(dist(&p("1/3"), &p("1/2")), rat(1, 6));
    }

    #[test]
    fn dbar_examples() {
        let zero = TestFunction::Constant(int(0));
        assert_eq!(dbar(&p("1/2"), &p("3/4"), &zero), rat(1, 4));
        assert_eq!(dbar(&p("1/2"), &p("3/4"), &TestFunction::ThomaeLike), rat(11, 12));
        let dir = TestFunction::dirichlet(int(1), int(0)).unwrap();
        assert_eq!(dbar(&p("1/2"), &p("1/3"), &dir), rat(7, 6));
    }

    #[test]
    fn rejects_out_of_range_and_garbage() {
        assert!(EpPoint::from_rat(&rat(3, 2)).is_err());
        assert!("1:".parse::<EpPoint>().is_err());
        assert!("12:0".parse::<EpPoint>().is_err());
    }

    #[test]
    fn dyadic_helpers() {
        assert_eq!(dyadic_depth(&rat(3, 8)), Some(3));
        assert_eq!(dyadic_depth(&rat(1, 3)), None);
        assert_eq!(below_at(&rat(1, 2), 2), rat(1, 4));
        assert_eq!(above_at(&rat(1, 3), 2), rat(1, 2));
        assert_eq!(fmt_dyadic(&rat(3, 8)), "3/2^3");
        assert_eq!(parse_rat("3/2^3").unwrap(), rat(3, 8));
    }
}

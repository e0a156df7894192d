//! Closed subsets of `[0,1]` presented by deterministic safety automata over `{0,1}`.
//!
//! A real belongs to the denoted set when one of its binary expansions is an
//! infinite run from the start state. Automata are kept trimmed (every state
//! reachable and live) and numbered breadth-first from the start, bit 0
//! before bit 1, so structurally equal automata print identically.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::intervalsets::{DyadicInterval, IntervalSet};
use crate::numerics::{above_at, below_at, int, pow2_int, pow2_neg, EpPoint, Rat};
use crate::Error;

type Row = [Option<usize>; 2];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeAutomaton {
    delta: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectnessReport {
    pub perfect: bool,
    /// A cycle of out-degree-1 states, present iff `perfect` is false.
    pub witness: Option<Vec<usize>>,
}

/// Breadth-first construction of an automaton from an implicit state space.
fn explore<S: Clone + Eq + Hash>(
    init: S,
    mut step: impl FnMut(&S, bool) -> Option<S>,
) -> Result<TreeAutomaton, Error> {
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    index.insert(init, 0);
    let mut delta: Vec<Row> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        let mut row = [None, None];
        for (b, slot) in row.iter_mut().enumerate() {
            if let Some(t) = step(&s, b == 1) {
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        states.push(t.clone());
                        index.insert(t, states.len() - 1);
                        states.len() - 1
                    }
                };
                *slot = Some(id);
            }
        }
        delta.push(row);
        i += 1;
    }
    TreeAutomaton::trim_raw(0, delta)
}

/// Strongly connected component id of every state.
fn scc_ids(delta: &[Row]) -> Vec<usize> {
    let n = delta.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (q, i) = *top;
            if i < 2 {
                top.1 += 1;
                if let Some(t) = delta[q][i] {
                    if !visited[t] {
                        visited[t] = true;
                        stack.push((t, 0));
                    }
                }
            } else {
                order.push(q);
                stack.pop();
            }
        }
    }
    let mut rev = vec![Vec::new(); n];
    for (q, row) in delta.iter().enumerate() {
        for t in row.iter().flatten() {
            rev[*t].push(q);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut c = 0;
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = c;
        let mut st = vec![s];
        while let Some(q) = st.pop() {
            for &p in &rev[q] {
                if comp[p] == usize::MAX {
                    comp[p] = c;
                    st.push(p);
                }
            }
        }
        c += 1;
    }
    comp
}

/// Cycle in the functional graph `q -> next(q)` restricted to states where `next` is defined.
fn functional_cycle(n: usize, next: impl Fn(usize) -> Option<usize>) -> Option<Vec<usize>> {
    // 0 = unseen, 1 = on current walk, 2 = done
    let mut color = vec![0u8; n];
    for s in 0..n {
        if color[s] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut q = s;
        loop {
            if color[q] == 1 {
                let start = walk.iter().position(|&w| w == q).unwrap();
                return Some(walk[start..].to_vec());
            }
            if color[q] == 2 {
                break;
            }
            color[q] = 1;
            walk.push(q);
            match next(q) {
                Some(t) => q = t,
                None => break,
            }
        }
        for w in walk {
            color[w] = 2;
        }
    }
    None
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Lasso {
    Prefix(usize),
    Node(usize),
}

impl TreeAutomaton {
    /// Removes unreachable and dead states and renumbers breadth-first.
    pub fn trim_raw(start: usize, delta: Vec<Row>) -> Result<Self, Error> {
        let n = delta.len();
        if start >= n {
            return Err(Error::Empty);
        }
        for row in &delta {
            for t in row.iter().flatten() {
                if *t >= n {
                    return Err(Error::Parse(format!("transition to unknown state {t}")));
                }
            }
        }
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for q in 0..n {
                if alive[q] && !delta[q].iter().flatten().any(|&t| alive[t]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !alive[start] {
            return Err(Error::Empty);
        }
        let mut new_id = vec![usize::MAX; n];
        let mut order = vec![start];
        new_id[start] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for t in delta[q].iter().flatten() {
                if alive[*t] && new_id[*t] == usize::MAX {
                    new_id[*t] = order.len();
                    order.push(*t);
                }
            }
            i += 1;
        }
        let out = order
            .iter()
            .map(|&q| {
                let mut row = [None, None];
                for b in 0..2 {
                    if let Some(t) = delta[q][b] {
                        if alive[t] {
                            row[b] = Some(new_id[t]);
                        }
                    }
                }
                row
            })
            .collect();
        Ok(Self { delta: out })
    }

    /// Builds from `(state, bit, state)` triples and trims.
    pub fn from_transitions(start: usize, edges: &[(usize, bool, usize)]) -> Result<Self, Error> {
        let n = edges
            .iter()
            .map(|&(p, _, q)| p.max(q) + 1)
            .max()
            .unwrap_or(0)
            .max(start + 1);
        let mut delta = vec![[None, None]; n];
        for &(p, b, q) in edges {
            let slot = &mut delta[p][b as usize];
            if slot.is_some_and(|t| t != q) {
                return Err(Error::Parse(format!("state {p} has two transitions on bit {}", b as u8)));
            }
            *slot = Some(q);
        }
        Self::trim_raw(start, delta)
    }

    /// Trimming is idempotent on already-trimmed automata.
    pub fn trim(&self) -> Result<Self, Error> {
        Self::trim_raw(0, self.delta.clone())
    }

    pub fn full() -> Self {
        Self { delta: vec![[Some(0), Some(0)]] }
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn succ(&self, q: usize, b: bool) -> Option<usize> {
        self.delta[q][b as usize]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, bool, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(q, row)| {
            (0..2).filter_map(move |b| row[b].map(|t| (q, b == 1, t)))
        })
    }

    fn run_word(&self, q: usize, word: &[bool]) -> Option<usize> {
        word.iter().try_fold(q, |s, &b| self.succ(s, b))
    }

    pub fn is_perfect(&self) -> PerfectnessReport {
        let witness = functional_cycle(self.num_states(), |q| match self.delta[q] {
            [Some(t), None] | [None, Some(t)] => Some(t),
            _ => None,
        });
        PerfectnessReport { perfect: witness.is_none(), witness }
    }

    /// No run ends in a constant tail, so no dyadic rational is in the set.
    pub fn is_dyadic_free(&self) -> bool {
        let n = self.num_states();
        functional_cycle(n, |q| self.delta[q][0]).is_none()
            && functional_cycle(n, |q| self.delta[q][1]).is_none()
    }

    /// Some run is not eventually constant.
    pub fn has_non_dyadic(&self) -> bool {
        let comp = scc_ids(&self.delta);
        let mut labels: HashMap<usize, [bool; 2]> = HashMap::new();
        for (q, b, t) in self.transitions() {
            if comp[q] == comp[t] {
                labels.entry(comp[q]).or_default()[b as usize] = true;
            }
        }
        labels.values().any(|l| l[0] && l[1])
    }

    /// States from which continuum many runs start.
    fn rich_states(&self) -> Vec<bool> {
        let comp = scc_ids(&self.delta);
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for (q, _, t) in self.transitions() {
            rev[t].push(q);
        }
        let mut rich = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&q| match self.delta[q] {
                [Some(a), Some(b)] => comp[a] == comp[q] && comp[b] == comp[q],
                _ => false,
            })
            .collect();
        for &q in &queue {
            rich[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &p in &rev[q] {
                if !rich[p] {
                    rich[p] = true;
                    queue.push_back(p);
                }
            }
        }
        rich
    }

    /// Largest sub-automaton all of whose states are rich; it is perfect.
    pub fn perfect_kernel(&self) -> Result<Self, Error> {
        let rich = self.rich_states();
        let delta = self
            .delta
            .iter()
            .map(|row| row.map(|t| t.filter(|&t| rich[t])))
            .collect();
        if !rich[0] {
            return Err(Error::Empty);
        }
        Self::trim_raw(0, delta)
    }

    fn accepts(&self, pre: &[bool], period: &[bool]) -> bool {
        let Some(mut q) = self.run_word(0, pre) else {
            return false;
        };
        let mut seen = HashSet::new();
        let mut phase = 0;
        loop {
            if !seen.insert((q, phase)) {
                return true;
            }
            match self.succ(q, period[phase]) {
                Some(t) => q = t,
                None => return false,
            }
            phase = (phase + 1) % period.len();
        }
    }

    pub fn member(&self, p: &EpPoint) -> bool {
        p.expansions().iter().any(|(pre, period)| self.accepts(pre, period))
    }

    /// `(#admissible words of length n) / 2^n`.
    pub fn measure_upper(&self, n: u64) -> Rat {
        let mut counts = vec![BigInt::zero(); self.num_states()];
        counts[0] = BigInt::one();
        for _ in 0..n {
            let mut next = vec![BigInt::zero(); self.num_states()];
            for (q, _, t) in self.transitions() {
                next[t] += &counts[q];
            }
            counts = next;
        }
        let total: BigInt = counts.into_iter().sum();
        Rat::new(total, pow2_int(n))
    }

    /// Greedy run preferring `first`, as a point.
    fn extreme_from(&self, mut bits: Vec<bool>, mut q: usize, first: bool) -> EpPoint {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        loop {
            if let Some(&i) = seen.get(&q) {
                let period = bits.split_off(i);
                return EpPoint::new(bits, period).expect("non-empty period");
            }
            seen.insert(q, bits.len());
            let b = if self.succ(q, first).is_some() { first } else { !first };
            bits.push(b);
            q = self.succ(q, b).expect("trimmed automaton has a successor");
        }
    }

    pub fn min_point(&self) -> EpPoint {
        self.extreme_from(Vec::new(), 0, false)
    }

    pub fn max_point(&self) -> EpPoint {
        self.extreme_from(Vec::new(), 0, true)
    }

    pub fn hull(&self) -> (Rat, Rat) {
        (self.min_point().to_rat(), self.max_point().to_rat())
    }

    pub fn hull_diameter(&self) -> Rat {
        let (l, r) = self.hull();
        r - l
    }

    /// Points of the set obtained by completing every admissible prefix of
    /// length `depth` with its lex-least and lex-greatest continuation.
    pub fn sample_points(&self, depth: usize) -> Vec<EpPoint> {
        let mut out = Vec::new();
        let mut frontier = vec![(Vec::new(), 0usize)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (w, q) in frontier {
                for b in [false, true] {
                    if let Some(t) = self.succ(q, b) {
                        let mut w2 = w.clone();
                        w2.push(b);
                        next.push((w2, t));
                    }
                }
            }
            frontier = next;
        }
        for (w, q) in frontier {
            for first in [false, true] {
                let p = self.extreme_from(w.clone(), q, first);
                if out.last() != Some(&p) {
                    out.push(p);
                }
            }
        }
        out.dedup();
        out
    }

    /// Words lexicographically `<=` (or `>=`) the expansion `pre period^ω`.
    fn lex_ray(pre: Vec<bool>, period: Vec<bool>, upper: bool) -> Self {
        let len = pre.len() + period.len();
        let split = pre.len();
        let bit_at = |i: usize| if i < split { pre[i] } else { period[i - split] };
        let next = |i: usize| if i + 1 < len { i + 1 } else { split };
        explore(Some(0usize), |s, b| match *s {
            None => Some(None),
            Some(i) => {
                let e = bit_at(i);
                if b == e {
                    Some(Some(next(i)))
                } else if (!b & e) == upper {
                    Some(None)
                } else {
                    None
                }
            }
        })
        .expect("a ray contains its bounding word")
    }

    /// The exact preimage of `[0, r]`.
    pub fn ray_le(r: &Rat) -> Result<Self, Error> {
        let p = EpPoint::from_rat(r)?;
        Ok(Self::lex_ray(p.pre().to_vec(), p.period().to_vec(), true))
    }

    /// The exact preimage of `[l, 1]`.
    pub fn ray_ge(l: &Rat) -> Result<Self, Error> {
        let p = EpPoint::from_rat(l)?;
        let (pre, period) = p.dual_expansion().unwrap_or((p.pre().to_vec(), p.period().to_vec()));
        Ok(Self::lex_ray(pre, period, false))
    }

    /// Every binary expansion of every point of `[l, r]`.
    pub fn interval_exact(l: &Rat, r: &Rat) -> Result<Self, Error> {
        Self::ray_ge(l)?.intersect(&Self::ray_le(r)?)
    }

    /// A cylinder-union presentation of a dyadic interval: one expansion of
    /// each point, and a perfect automaton.
    pub fn from_interval(iv: &DyadicInterval) -> Self {
        let lo = EpPoint::from_rat(iv.left()).expect("in range");
        let hi = EpPoint::from_rat(iv.right()).expect("in range");
        let (hpre, hper) = hi.dual_expansion().unwrap_or((hi.pre().to_vec(), hi.period().to_vec()));
        Self::lex_ray(lo.pre().to_vec(), lo.period().to_vec(), false)
            .intersect(&Self::lex_ray(hpre, hper, true))
            .expect("non-degenerate interval")
    }

    pub fn from_interval_set(s: &IntervalSet) -> Self {
        let parts: Vec<Self> = s.components().iter().map(Self::from_interval).collect();
        Self::union_all(&parts)
    }

    /// Branch-level product; exact as sets of reals when `other` contains all
    /// expansions of its points (as interval and saturated automata do).
    pub fn intersect(&self, other: &Self) -> Result<Self, Error> {
        explore((0usize, 0usize), |&(p, q), b| Some((self.succ(p, b)?, other.succ(q, b)?)))
    }

    pub fn union_all(parts: &[Self]) -> Self {
        assert!(!parts.is_empty(), "union of no automata");
        explore(vec![Some(0usize); parts.len()], |s, b| {
            let next: Vec<Option<usize>> = s
                .iter()
                .zip(parts)
                .map(|(q, a)| q.and_then(|q| a.succ(q, b)))
                .collect();
            next.iter().any(Option::is_some).then_some(next)
        })
        .expect("union of non-empty automata")
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::union_all(&[self.clone(), other.clone()])
    }

    /// One step of the dual-expansion tracking used by inclusion and
    /// saturation: `(q, h0, h1)` where `h_e` follows the dual expansion under
    /// the hypothesis that the word continues with `e` forever.
    fn dual_step(&self, s: &DualState, c: bool) -> DualState {
        let (q, h0, h1) = *s;
        let h = |h: Option<usize>, bit: bool| h.and_then(|h| self.succ(h, bit));
        let spawn = q.and_then(|q| self.succ(q, !c));
        let q2 = q.and_then(|q| self.succ(q, c));
        if c {
            // w reads 1: the all-ones hypothesis advances on its dual's 0-edge.
            (q2, spawn, h(h1, false))
        } else {
            (q2, h(h0, true), spawn)
        }
    }

    /// Automaton accepting every expansion of every point of the set.
    pub fn saturate(&self) -> Self {
        explore((Some(0usize), None, None), |s, c| {
            let n = self.dual_step(s, c);
            (n.0.is_some() || n.1.is_some() || n.2.is_some()).then_some(n)
        })
        .expect("saturation keeps the original runs")
    }

    /// `⟦self⟧ ∩ ⟦other⟧` as sets of reals.
    pub fn intersect_real(&self, other: &Self) -> Result<Self, Error> {
        self.saturate().intersect(&other.saturate())
    }

    pub fn intersect_interval(&self, iv: &DyadicInterval) -> Result<Self, Error> {
        self.intersect(&Self::interval_exact(iv.left(), iv.right())?)
    }

    /// `⟦self⟧ ⊆ ⟦other⟧`, identifying the two expansions of a dyadic point.
    pub fn subset(&self, other: &Self) -> bool {
        let init = (0usize, (Some(0usize), None, None));
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([init]);
        seen.insert(init);
        while let Some((qa, d)) = queue.pop_front() {
            if d.0.is_none() && d.1.is_none() && d.2.is_none() {
                return false;
            }
            for c in [false, true] {
                if let Some(ta) = self.succ(qa, c) {
                    let next = (ta, other.dual_step(&d, c));
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        true
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.subset(other) && other.subset(self)
    }

    /// The part of the set read after the prefix `u`, kept under `u`.
    pub fn cylinder(&self, u: &[bool]) -> Result<Self, Error> {
        let q = self.run_word(0, u).ok_or(Error::Empty)?;
        let init = if u.is_empty() { Lasso::Node(q) } else { Lasso::Prefix(0) };
        explore(init, |s, b| match *s {
            Lasso::Prefix(i) => (u[i] == b).then(|| {
                if i + 1 == u.len() {
                    Lasso::Node(q)
                } else {
                    Lasso::Prefix(i + 1)
                }
            }),
            Lasso::Node(p) => self.succ(p, b).map(Lasso::Node),
        })
    }

    /// The forced prefix up to the first state with two successors.
    pub fn first_branch(&self) -> Option<(Vec<bool>, usize)> {
        let mut q = 0;
        let mut u = Vec::new();
        for _ in 0..=self.num_states() {
            match self.delta[q] {
                [Some(_), Some(_)] => return Some((u, q)),
                [Some(t), None] => {
                    u.push(false);
                    q = t;
                }
                [None, Some(t)] => {
                    u.push(true);
                    q = t;
                }
                [None, None] => unreachable!("trimmed automaton has no dead states"),
            }
        }
        None
    }

    fn shortest_word(&self, from: usize, to: usize) -> Option<Vec<bool>> {
        let mut parent: HashMap<usize, (usize, bool)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = HashSet::from([from]);
        while let Some(q) = queue.pop_front() {
            if q == to {
                let mut w = Vec::new();
                let mut cur = q;
                while cur != from {
                    let (p, b) = parent[&cur];
                    w.push(b);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for b in [false, true] {
                if let Some(t) = self.succ(q, b) {
                    if seen.insert(t) {
                        parent.insert(t, (q, b));
                        queue.push_back(t);
                    }
                }
            }
        }
        None
    }

    /// A perfect subset containing no dyadic rational.
    ///
    /// Picks a state `q` whose two successors both return to it, with return
    /// loops `α` (leaving by 0) and `β` (leaving by 1), and keeps
    /// `u·{βαα, βαβ}^ω` for a shortest access word `u`. Every block contains
    /// both a 0 and a 1, so no run has a constant tail.
    pub fn dyadic_free_subset(&self) -> Result<Self, Error> {
        if self.is_dyadic_free() && self.is_perfect().perfect {
            return Ok(self.clone());
        }
        let comp = scc_ids(&self.delta);
        let q = (0..self.num_states())
            .find(|&q| match self.delta[q] {
                [Some(a), Some(b)] => comp[a] == comp[q] && comp[b] == comp[q],
                _ => false,
            })
            .ok_or(Error::Empty)?;
        let u = self.shortest_word(0, q).expect("trimmed automaton is reachable");
        let back = |b: bool| {
            let t = self.succ(q, b).unwrap();
            let mut w = vec![b];
            w.extend(self.shortest_word(t, q).expect("same component"));
            w
        };
        let alpha = back(false);
        let beta = back(true);
        let x: Vec<bool> = [&beta[..], &alpha[..], &alpha[..]].concat();
        let y: Vec<bool> = [&beta[..], &alpha[..], &beta[..]].concat();
        Self::code_power(&u, &[x, y])
    }

    /// `u · {words}^ω` for a prefix code of equal-length words.
    fn code_power(u: &[bool], words: &[Vec<bool>]) -> Result<Self, Error> {
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum S {
            Pre(usize),
            Code(Vec<bool>),
        }
        let init = if u.is_empty() { S::Code(Vec::new()) } else { S::Pre(0) };
        explore(init, |s, b| match s {
            S::Pre(i) => (u[*i] == b).then(|| {
                if i + 1 == u.len() {
                    S::Code(Vec::new())
                } else {
                    S::Pre(i + 1)
                }
            }),
            S::Code(w) => {
                let mut w = w.clone();
                w.push(b);
                if words.contains(&w) {
                    Some(S::Code(Vec::new()))
                } else if words.iter().any(|x| x.starts_with(&w)) {
                    Some(S::Code(w))
                } else {
                    None
                }
            }
        })
    }

    /// `⟦self⟧ ∖ (l, r)` for `l < r`, with bounds outside `[0,1]` ignored.
    fn remove_open_interval(&self, l: &Rat, r: &Rat) -> Result<Self, Error> {
        let zero = int(0);
        let one = int(1);
        let guard = match (l < &zero, r > &one) {
            (true, true) => return Err(Error::Empty),
            (true, false) => Self::ray_ge(r)?,
            (false, true) => Self::ray_le(l)?,
            (false, false) => Self::ray_le(l)?.union(&Self::ray_ge(r)?),
        };
        self.intersect(&guard)
    }

    /// A perfect subset avoiding every point of `pts`. Each point present is
    /// cut out with the narrowest dyadic window `(k/2^d, (k+2)/2^d)` whose
    /// removal leaves a non-empty perfect kernel.
    pub fn avoid_points(&self, pts: &[EpPoint]) -> Result<Self, Error> {
        let mut cur = self.perfect_kernel()?;
        for p in pts {
            if !cur.member(p) {
                continue;
            }
            let log_states = usize::BITS - cur.num_states().leading_zeros();
            let spec_cap = (p.pre().len() + 2 * p.period().len()) as u64 + log_states as u64 + 4;
            let diam = cur.hull_diameter();
            let mut hull_cap = 1u64;
            while pow2_neg(hull_cap - 1) >= diam {
                hull_cap += 1;
            }
            let cap = spec_cap.max(hull_cap);
            let x = p.to_rat();
            let mut found = None;
            for d in 1..=cap {
                let cut = cur
                    .remove_open_interval(&below_at(&x, d), &above_at(&x, d))
                    .and_then(|t| t.perfect_kernel());
                if let Ok(t) = cut {
                    found = Some(t);
                    break;
                }
            }
            cur = found.ok_or(Error::DepthCapReached(cap as u32))?;
        }
        Ok(cur)
    }

    /// Smallest-index dyadic point of `(0,1)` in the set, as `(depth, numerator)`.
    pub fn first_dyadic(&self) -> Option<(u64, BigInt)> {
        let n = self.num_states();
        let const_tail = |q: usize, b: bool| {
            let mut s = q;
            for _ in 0..=n {
                match self.succ(s, b) {
                    Some(t) => s = t,
                    None => return false,
                }
            }
            true
        };
        // q admits 0.u1 when the run can read u then 1 0^ω or 0 1^ω.
        let good: Vec<bool> = (0..n)
            .map(|q| {
                self.succ(q, true).is_some_and(|t| const_tail(t, false))
                    || self.succ(q, false).is_some_and(|t| const_tail(t, true))
            })
            .collect();
        let mut rev = vec![Vec::new(); n];
        for (q, _, t) in self.transitions() {
            rev[t].push(q);
        }
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for q in 0..n {
            if good[q] {
                dist[q] = 0;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &p in &rev[q] {
                if dist[p] == usize::MAX {
                    dist[p] = dist[q] + 1;
                    queue.push_back(p);
                }
            }
        }
        if dist[0] == usize::MAX {
            return None;
        }
        let mut q = 0;
        let mut num = BigInt::zero();
        let mut m = dist[0];
        while m > 0 {
            let b = !self.succ(q, false).is_some_and(|t| dist[t] == m - 1);
            num = (num << 1) + if b { 1 } else { 0 };
            q = self.succ(q, b).unwrap();
            m -= 1;
        }
        num = (num << 1) + 1;
        Some((dist[0] as u64 + 1, num))
    }
}

impl fmt::Display for TreeAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start 0")?;
        for (q, b, t) in self.transitions() {
            writeln!(f, "{q} {} {t}", b as u8)?;
        }
        Ok(())
    }
}

impl FromStr for TreeAutomaton {
    type Err = Error;

    /// Lines (or `;`-separated items) `start s` and `p b q`; `#` starts a comment.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut start = None;
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let id = |name: &str, ids: &mut HashMap<String, usize>| {
            let next = ids.len();
            *ids.entry(name.to_string()).or_insert(next)
        };
        for item in s.split(['\n', ';']) {
            let item = item.split('#').next().unwrap().trim();
            if item.is_empty() {
                continue;
            }
            let parts: Vec<&str> = item.split_whitespace().collect();
            match parts.as_slice() {
                ["start", q] => start = Some(id(q, &mut ids)),
                [p, b, q] => {
                    let bit = match *b {
                        "0" => false,
                        "1" => true,
                        _ => return Err(Error::Parse(format!("bad bit in `{item}`"))),
                    };
                    let p = id(p, &mut ids);
                    let q = id(q, &mut ids);
                    edges.push((p, bit, q));
                }
                _ => return Err(Error::Parse(format!("bad automaton line `{item}`"))),
            }
        }
        let start = start.ok_or_else(|| Error::Parse("missing `start` line".into()))?;
        Self::from_transitions(start, &edges)
    }
}

/// `(q, h0, h1)`: the run itself and the two dual-expansion hypotheses.
type DualState = (Option<usize>, Option<usize>, Option<usize>);

/// Small named automata used in examples and tests.
pub mod samples {
    use super::TreeAutomaton;

    /// Consecutive bits must differ: `{1/3, 2/3}`.
    pub fn alternating() -> TreeAutomaton {
        TreeAutomaton::from_transitions(0, &[(0, false, 1), (0, true, 2), (1, true, 2), (2, false, 1)])
            .unwrap()
    }

    /// Every second bit is 0.
    pub fn odd_zero() -> TreeAutomaton {
        TreeAutomaton::from_transitions(0, &[(0, false, 1), (0, true, 1), (1, false, 0)]).unwrap()
    }

    /// Bits in positions `0, 1, 2 (mod 3)` are `1`, `0`, free.
    pub fn mod3() -> TreeAutomaton {
        TreeAutomaton::from_transitions(0, &[(0, true, 1), (1, false, 2), (2, false, 0), (2, true, 0)])
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use crate::numerics::rat;

    fn pt(s: &str) -> EpPoint {
        s.parse().unwrap()
    }

    fn iv(l: Rat, r: Rat) -> DyadicInterval {
        DyadicInterval::new(l, r).unwrap()
    }

    #[test]
    fn trim_examples() {
        assert_eq!(TreeAutomaton::full().trim().unwrap(), TreeAutomaton::full());
        let finite = TreeAutomaton::from_transitions(0, &[(0, false, 1), (1, true, 2)]);
        assert_eq!(finite, Err(Error::Empty));
        let extra = TreeAutomaton::from_transitions(
            0,
            &[(0, false, 1), (0, true, 1), (1, false, 0), (2, true, 2)],
        )
        .unwrap();
        assert_eq!(extra.num_states(), 2);
        assert_eq!(extra, odd_zero());
    }

    #[test]
    fn perfectness_examples() {
        assert!(TreeAutomaton::full().is_perfect().perfect);
        let rep = alternating().is_perfect();
        assert!(!rep.perfect);
        let mut cyc = rep.witness.unwrap();
        cyc.sort();
        assert_eq!(cyc, vec![1, 2]);
        assert!(odd_zero().is_perfect().perfect);
    }

    #[test]
    fn alternating_denotes_two_points() {
        let a = alternating();
        assert!(a.member(&pt("1/3")));
        assert!(a.member(&pt("2/3")));
        assert!(!a.member(&pt("1/2")));
        assert!(!a.member(&pt("1/4")));
    }

    #[test]
    fn dyadic_free_examples() {
        assert!(!TreeAutomaton::full().is_dyadic_free());
        assert!(mod3().is_dyadic_free());
        assert!(!odd_zero().is_dyadic_free());
    }

    #[test]
    fn intersect_interval_examples() {
        let half = TreeAutomaton::full().intersect_interval(&iv(int(0), rat(1, 2))).unwrap();
        let expect = TreeAutomaton::from_interval(&iv(int(0), rat(1, 2)));
        assert!(half.set_eq(&expect));
        assert!(mod3().intersect_interval(&iv(int(0), rat(1, 4))).is_err());
        let a = odd_zero();
        assert!(a.intersect_interval(&DyadicInterval::unit()).unwrap().set_eq(&a));
    }

    #[test]
    fn subset_examples() {
        let full = TreeAutomaton::full();
        for a in [alternating(), odd_zero(), mod3()] {
            assert!(a.subset(&full));
            assert!(a.subset(&a));
        }
        assert!(!full.subset(&odd_zero()));
    }

    #[test]
    fn subset_identifies_dual_expansions() {
        // [0,1/2] written with 1/2 as 0.0111.. versus 0.1000..
        let low = TreeAutomaton::from_interval(&iv(int(0), rat(1, 2)));
        let exact = TreeAutomaton::interval_exact(&int(0), &rat(1, 2)).unwrap();
        assert!(exact.subset(&low));
        assert!(low.subset(&exact));
        let point_half = TreeAutomaton::from_transitions(0, &[(0, true, 1), (1, false, 1)]).unwrap();
        assert!(point_half.subset(&low));
        assert!(!point_half.subset(&TreeAutomaton::from_interval(&iv(int(0), rat(1, 4)))));
    }

    #[test]
    fn member_examples() {
        assert!(TreeAutomaton::full().member(&pt("5/7")));
        assert!(alternating().member(&pt(":01")));
        assert!(!alternating().member(&pt("1:0")));
        assert!(TreeAutomaton::full().member(&EpPoint::one()));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(TreeAutomaton::full().measure_upper(5), int(1));
        assert_eq!(TreeAutomaton::from_interval(&iv(int(0), rat(1, 2))).measure_upper(3), rat(1, 2));
        assert_eq!(odd_zero().measure_upper(4), rat(1, 4));
        let a = odd_zero();
        for n in 0..16 {
            assert!(a.measure_upper(n + 1) <= a.measure_upper(n));
        }
    }

    #[test]
    fn avoid_points_examples() {
        let full = TreeAutomaton::full();
        let got = full.avoid_points(&[pt("1/2")]).unwrap();
        assert!(!got.member(&pt("1/2")));
        assert!(got.is_perfect().perfect);
        assert!(got.subset(&full));
        assert_eq!(full.avoid_points(&[]).unwrap(), full);
        let got = odd_zero().avoid_points(&[EpPoint::zero()]).unwrap();
        assert!(!got.member(&EpPoint::zero()));
        assert!(got.is_perfect().perfect);
        assert!(got.subset(&odd_zero()));
    }

    #[test]
    fn dyadic_free_subset_of_full_is_mod3() {
        let got = TreeAutomaton::full().dyadic_free_subset().unwrap();
        assert_eq!(got, mod3());
        let got = odd_zero().dyadic_free_subset().unwrap();
        assert!(got.is_dyadic_free() && got.is_perfect().perfect && got.subset(&odd_zero()));
    }

    #[test]
    fn hull_and_first_dyadic() {
        assert_eq!(mod3().hull(), (rat(4, 7), rat(5, 7)));
        let a = TreeAutomaton::from_interval(&iv(rat(1, 16), rat(3, 16)));
        assert_eq!(a.first_dyadic(), Some((3, BigInt::from(1))));
        assert_eq!(mod3().first_dyadic(), None);
        assert_eq!(TreeAutomaton::full().first_dyadic(), Some((1, BigInt::from(1))));
    }

    #[test]
    fn text_round_trip() {
        let a = odd_zero();
        let text = a.to_string();
        assert_eq!(text.parse::<TreeAutomaton>().unwrap(), a);
        assert_eq!("start s; s 0 t; s 1 t; t 0 s".parse::<TreeAutomaton>().unwrap(), a);
    }

    #[test]
    fn saturation_and_real_intersection() {
        let low = TreeAutomaton::from_interval(&iv(int(0), rat(1, 2)));
        let high = TreeAutomaton::from_interval(&iv(rat(1, 2), int(1)));
        assert!(low.intersect(&high).is_err());
        let meet = low.intersect_real(&high).unwrap();
        assert!(meet.member(&pt("1/2")));
        assert!(!meet.member(&pt("1/4")));
    }
}

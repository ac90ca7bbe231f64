//! Slope stability with respect to movable classes over a finite family of
//! candidate subsheaves.
//!
//! A [`SubsheafFamily`] is the computational stand-in for "all subsheaves of
//! E": a finite list of numerical classes together with an optional
//! containment DAG. The top element `E` is always present and contains every
//! member.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::chern::{tensor_class, SheafClass};
use crate::cone::{segment, Membership, RationalCone};
use crate::error::{Error, Result};
use crate::lattice::NumClass;
use crate::rational::{int, Rational};

/// A node of the family: one of the listed members or the top sheaf `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subobject {
    Member(usize),
    Top,
}

impl fmt::Display for Subobject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subobject::Member(i) => write!(f, "F{i}"),
            Subobject::Top => write!(f, "E"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubsheafFamily {
    top: SheafClass,
    members: Vec<SheafClass>,
    contains: Option<Vec<(usize, usize)>>,
    saturated: bool,
    // closure[i][j]: member i ⊂ member j, transitively
    closure: Vec<Vec<bool>>,
}

impl SubsheafFamily {
    /// `contains` lists edges `(i, j)` meaning member `i` ⊂ member `j`.
    pub fn new(
        top: SheafClass,
        members: Vec<SheafClass>,
        contains: Option<Vec<(usize, usize)>>,
        saturated: bool,
    ) -> Result<Self> {
        let n = members.len();
        for (k, m) in members.iter().enumerate() {
            top.c1().same_lattice(m.c1())?;
            if m.rank() > top.rank() {
                return Err(Error::InvalidInput(format!(
                    "member {k} has rank {} > rank of E = {}",
                    m.rank(),
                    top.rank()
                )));
            }
        }
        if saturated {
            for i in 0..n {
                for j in 0..i {
                    if members[i].rank() == members[j].rank() && members[i].c1() == members[j].c1()
                    {
                        return Err(Error::InvalidInput(format!(
                            "saturated family repeats (rank, c1) in members {j} and {i}"
                        )));
                    }
                }
            }
        }
        let mut closure = vec![vec![false; n]; n];
        for &(i, j) in contains.iter().flatten() {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("containment edge ({i}, {j}) out of range")));
            }
            if members[i].rank() >= members[j].rank() {
                return Err(Error::InvalidInput(format!(
                    "containment edge ({i}, {j}) does not increase rank"
                )));
            }
            closure[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if closure[i][k] {
                    for j in 0..n {
                        if closure[k][j] {
                            closure[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(SubsheafFamily { top, members, contains, saturated, closure })
    }

    /// Family without any candidate subsheaves.
    pub fn trivial(top: SheafClass) -> Self {
        SubsheafFamily {
            top,
            members: Vec::new(),
            contains: Some(Vec::new()),
            saturated: true,
            closure: Vec::new(),
        }
    }

    pub fn top(&self) -> &SheafClass {
        &self.top
    }

    pub fn members(&self) -> &[SheafClass] {
        &self.members
    }

    pub fn contains(&self) -> Option<&[(usize, usize)]> {
        self.contains.as_deref()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn class_of(&self, s: Subobject) -> &SheafClass {
        match s {
            Subobject::Member(i) => &self.members[i],
            Subobject::Top => &self.top,
        }
    }

    /// Members of rank strictly smaller than `E`.
    pub fn strict_members(&self) -> impl Iterator<Item = usize> + '_ {
        let r = self.top.rank();
        (0..self.members.len()).filter(move |&i| self.members[i].rank() < r)
    }

    /// `i ⊂ j` in the transitive closure of the containment edges.
    pub fn is_contained(&self, i: usize, j: usize) -> bool {
        self.closure[i][j]
    }

    /// Nodes that may follow `from` in a chain ending at `E`.
    pub fn successors(&self, from: Option<usize>) -> Vec<Subobject> {
        let mut out: Vec<Subobject> = self
            .strict_members()
            .filter(|&j| from.is_none_or(|i| self.closure[i][j]))
            .map(Subobject::Member)
            .collect();
        out.push(Subobject::Top);
        out
    }

    /// Product family for `E ⊗ F`: all `A ⊗ B` with `A ⊆ E`, `B ⊆ F`
    /// taken from the two families (the top product excluded).
    pub fn tensor_product(&self, other: &SubsheafFamily) -> Result<SubsheafFamily> {
        let left: Vec<&SheafClass> = self.members.iter().chain([&self.top]).collect();
        let right: Vec<&SheafClass> = other.members.iter().chain([&other.top]).collect();
        let mut members = Vec::new();
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if i + 1 == left.len() && j + 1 == right.len() {
                    continue;
                }
                members.push(tensor_class(a, b)?);
            }
        }
        let top = tensor_class(&self.top, &other.top)?;
        SubsheafFamily::new(top, members, None, false)
    }
}

/// Maximum slope and where it is attained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremum {
    pub value: Rational,
    pub witness: Subobject,
    /// Every node attaining the maximum, in input order (`E` last).
    pub attained_by: Vec<Subobject>,
}

/// Quotient `E_{i+1} / E_i` of a filtration, recorded numerically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub rank: u32,
    pub c1: NumClass,
    pub slope: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationKind {
    HarderNarasimhan,
    JordanHolder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub kind: FiltrationKind,
    /// `E_1 ⊊ … ⊊ E_k = E`
    pub steps: Vec<Subobject>,
    pub quotients: Vec<Quotient>,
    /// Quotient slopes strictly decrease.
    pub strictly_decreasing: bool,
    /// Positions `i` where quotient `i` and `i+1` have equal slope.
    pub refined_at: Vec<usize>,
    /// More than one chain attains the optimum.
    pub ambiguous: bool,
}

/// Where a candidate subsheaf meets the segment's wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallPosition {
    At(Rational),
    /// The member has the same slope as `E` along the whole segment.
    Everywhere,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCrossing {
    pub member: usize,
    pub position: WallPosition,
}

/// Interval inside `[0, 1]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Interval {
    fn unit() -> Self {
        Interval { lo: int(0), lo_closed: true, hi: int(1), hi_closed: true }
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = match t.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match t.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn non_empty(self) -> Option<Self> {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => Some(self),
            Ordering::Equal if self.lo_closed && self.hi_closed => Some(self),
            _ => None,
        }
    }

    /// Intersects with `{t : t ≥ x}` (or `>` when `strict`).
    fn at_least(self, x: &Rational, strict: bool) -> Option<Self> {
        let mut s = self;
        match x.cmp(&s.lo) {
            Ordering::Greater => {
                s.lo = x.clone();
                s.lo_closed = !strict;
            }
            Ordering::Equal => s.lo_closed &= !strict,
            Ordering::Less => {}
        }
        s.non_empty()
    }

    fn at_most(self, x: &Rational, strict: bool) -> Option<Self> {
        let mut s = self;
        match x.cmp(&s.hi) {
            Ordering::Less => {
                s.hi = x.clone();
                s.hi_closed = !strict;
            }
            Ordering::Equal => s.hi_closed &= !strict,
            Ordering::Greater => {}
        }
        s.non_empty()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Stable => "stable",
            PointClass::StrictlySemistable => "strictly-semistable",
            PointClass::Unstable => "unstable",
        })
    }
}

/// Exact stability along `(1-ε)·a + ε·b`, `ε ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentReport {
    pub stable: Option<Interval>,
    pub semistable: Option<Interval>,
    pub walls: Vec<WallCrossing>,
    /// Classification at `0`, `1`, every interval endpoint and every wall.
    pub points: Vec<(Rational, PointClass)>,
}

/// Hyperplane `{α : μ_α(F) = μ_α(E)}` as a functional through the pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub member: usize,
    pub functional: NumClass,
}

/// For each strict-rank member `F`, the functional `c1(F)/rk F - c1(E)/rk E`.
/// Members with a zero functional never cross `E` and are dropped.
pub fn wall_hyperplanes(family: &SubsheafFamily) -> Result<Vec<Wall>> {
    let top = family.top();
    let normalized_top = top.c1().scale(&int(top.rank().into()).recip());
    let strict: Vec<usize> = family.strict_members().collect();
    let walls: Vec<Option<Wall>> = strict
        .par_iter()
        .map(|&i| {
            let m = &family.members()[i];
            let f = m
                .c1()
                .scale(&int(m.rank().into()).recip())
                .sub(&normalized_top)?;
            Ok((!f.is_zero()).then_some(Wall { member: i, functional: f }))
        })
        .collect::<Result<_>>()?;
    Ok(walls.into_iter().flatten().collect())
}

/// Stability queries for one family against one movable cone.
#[derive(Debug, Clone, Copy)]
pub struct Stability<'a> {
    family: &'a SubsheafFamily,
    mov: &'a RationalCone,
}

impl<'a> Stability<'a> {
    pub fn new(family: &'a SubsheafFamily, mov: &'a RationalCone) -> Result<Self> {
        if family.top().lattice().id() != mov.lattice().id() {
            return Err(Error::IncompatibleLattices);
        }
        Ok(Stability { family, mov })
    }

    pub fn family(&self) -> &'a SubsheafFamily {
        self.family
    }

    pub fn mov(&self) -> &'a RationalCone {
        self.mov
    }

    fn check_movable(&self, a: &NumClass) -> Result<()> {
        if self.mov.contains(a, Membership::Closed)? {
            Ok(())
        } else {
            Err(Error::NotMovable)
        }
    }

    fn slope_of(&self, s: Subobject, a: &NumClass) -> Result<Rational> {
        self.family.class_of(s).slope(a)
    }

    fn extremum(&self, a: &NumClass, candidates: Vec<Subobject>) -> Result<Extremum> {
        let slopes: Vec<Rational> =
            candidates.iter().map(|&s| self.slope_of(s, a)).collect::<Result<_>>()?;
        let value = slopes.iter().max().cloned().ok_or(Error::EmptyStrictFamily)?;
        let attained_by: Vec<Subobject> = candidates
            .iter()
            .zip(&slopes)
            .filter(|(_, v)| **v == value)
            .map(|(s, _)| *s)
            .collect();
        // members before E, then higher rank, then input order
        let witness = *attained_by
            .iter()
            .min_by_key(|&&s| {
                let rank = self.family.class_of(s).rank();
                (s == Subobject::Top, std::cmp::Reverse(rank), s)
            })
            .expect("non-empty");
        Ok(Extremum { value, witness, attained_by })
    }

    /// `μ^max_α(E)`: the largest slope among the members and `E` itself.
    pub fn mu_max(&self, a: &NumClass) -> Result<Extremum> {
        self.check_movable(a)?;
        let mut candidates: Vec<Subobject> =
            (0..self.family.members().len()).map(Subobject::Member).collect();
        candidates.push(Subobject::Top);
        self.extremum(a, candidates)
    }

    /// Maximum over members of rank strictly below `rank E`.
    pub fn mu_max_sc(&self, a: &NumClass) -> Result<Extremum> {
        self.check_movable(a)?;
        let candidates: Vec<Subobject> = self.family.strict_members().map(Subobject::Member).collect();
        if candidates.is_empty() {
            return Err(Error::EmptyStrictFamily);
        }
        self.extremum(a, candidates)
    }

    pub fn is_semistable(&self, a: &NumClass) -> Result<bool> {
        let max = self.mu_max(a)?;
        Ok(max.value <= self.family.top().slope(a)?)
    }

    /// Stable when every strict-rank member has smaller slope; vacuous
    /// without strict-rank members.
    pub fn is_stable(&self, a: &NumClass) -> Result<bool> {
        match self.mu_max_sc(a) {
            Ok(max) => Ok(max.value < self.family.top().slope(a)?),
            Err(Error::EmptyStrictFamily) => Ok(true),
            Err(e) => Err(e),
        }
    }

    /// Members with `μ_β ≥ c`, in input order.
    pub fn destabilizers(&self, b: &NumClass, c: &Rational) -> Result<Vec<usize>> {
        self.check_movable(b)?;
        let mut out = Vec::new();
        for (i, m) in self.family.members().iter().enumerate() {
            if m.slope(b)? >= *c {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn quotient(&self, from: Option<usize>, to: Subobject, a: &NumClass) -> Result<Quotient> {
        let upper = self.family.class_of(to);
        let (rank, c1) = match from {
            None => (upper.rank(), upper.c1().clone()),
            Some(i) => {
                let lower = &self.family.members()[i];
                (upper.rank() - lower.rank(), upper.c1().sub(lower.c1())?)
            }
        };
        let slope = c1.pair(a)? / int(rank.into());
        Ok(Quotient { rank, c1, slope })
    }

    fn finish(
        &self,
        kind: FiltrationKind,
        steps: Vec<Subobject>,
        a: &NumClass,
        ambiguous: bool,
    ) -> Result<Filtration> {
        let mut quotients = Vec::with_capacity(steps.len());
        let mut prev = None;
        for &s in &steps {
            quotients.push(self.quotient(prev, s, a)?);
            if let Subobject::Member(i) = s {
                prev = Some(i);
            }
        }
        let mut refined_at = Vec::new();
        for (i, w) in quotients.windows(2).enumerate() {
            match w[0].slope.cmp(&w[1].slope) {
                Ordering::Greater => {}
                Ordering::Equal => refined_at.push(i),
                Ordering::Less => {
                    return Err(Error::invariant(format!(
                        "filtration quotient slopes increase at step {i}"
                    )))
                }
            }
        }
        Ok(Filtration {
            kind,
            strictly_decreasing: refined_at.is_empty(),
            steps,
            quotients,
            refined_at,
            ambiguous,
        })
    }

    /// Harder-Narasimhan filtration by greedy maximal destabilization.
    ///
    /// From the current step the next one is a member containing it (or `E`)
    /// whose quotient has the largest slope, ties going to larger rank. Nodes
    /// tied on both are advanced together, so the result is the
    /// lexicographically best chain; if several chains reach it the
    /// lexicographically smallest index path is returned and `ambiguous` set.
    pub fn hn_filtration(&self, a: &NumClass) -> Result<Filtration> {
        self.check_movable(a)?;
        struct Node {
            at: Option<usize>,
            path: Vec<Subobject>,
            count: BigUint,
        }
        let mut frontier = vec![Node { at: None, path: Vec::new(), count: BigUint::one() }];
        loop {
            let mut best: Option<(Rational, u32)> = None;
            let mut moves: Vec<(usize, Subobject, (Rational, u32))> = Vec::new();
            for (k, node) in frontier.iter().enumerate() {
                for next in self.family.successors(node.at) {
                    let q = self.quotient(node.at, next, a)?;
                    let key = (q.slope, self.family.class_of(next).rank());
                    if best.as_ref().is_none_or(|b| key > *b) {
                        best = Some(key.clone());
                    }
                    moves.push((k, next, key));
                }
            }
            let best = best.expect("E is always a successor");
            let mut next_frontier: Vec<Node> = Vec::new();
            for (k, next, key) in moves {
                if key != best {
                    continue;
                }
                let src = &frontier[k];
                let mut path = src.path.clone();
                path.push(next);
                let at = match next {
                    Subobject::Member(i) => Some(i),
                    Subobject::Top => None,
                };
                match next_frontier.iter_mut().find(|n| n.path.last() == Some(&next)) {
                    Some(n) => {
                        n.count += &src.count;
                        if path < n.path {
                            n.path = path;
                        }
                    }
                    None => next_frontier.push(Node { at, path, count: src.count.clone() }),
                }
            }
            if next_frontier.iter().any(|n| n.path.last() == Some(&Subobject::Top)) {
                // E has the strictly largest rank, so it is alone in the frontier
                let done = next_frontier.swap_remove(0);
                let ambiguous = done.count > BigUint::one();
                return self.finish(FiltrationKind::HarderNarasimhan, done.path, a, ambiguous);
            }
            next_frontier.sort_by(|x, y| x.path.cmp(&y.path));
            frontier = next_frontier;
        }
    }

    /// Longest chain whose quotients all have slope `μ_α(E)`.
    pub fn jh_filtration(&self, a: &NumClass) -> Result<Filtration> {
        if !self.is_semistable(a)? {
            return Err(Error::precondition("Jordan-Hölder filtration needs a semistable sheaf"));
        }
        let stable = self.is_stable(a)?;
        if self.family.contains().is_none() && !stable {
            return Err(Error::NotJhClosed);
        }
        let target = self.family.top().slope(a)?;
        // best[i]: (length, lexicographically smallest path, count) from member i to E
        let n = self.family.members().len();
        let mut memo: Vec<Option<(usize, Vec<Subobject>, BigUint)>> = vec![None; n];
        let (_, path, count) = self.jh_best(None, a, &target, &mut memo)?;
        self.finish(FiltrationKind::JordanHolder, path, a, count > BigUint::one())
    }

    fn jh_best(
        &self,
        from: Option<usize>,
        a: &NumClass,
        target: &Rational,
        memo: &mut Vec<Option<(usize, Vec<Subobject>, BigUint)>>,
    ) -> Result<(usize, Vec<Subobject>, BigUint)> {
        if let Some(i) = from {
            if let Some(hit) = &memo[i] {
                return Ok(hit.clone());
            }
        }
        let mut best: Option<(usize, Vec<Subobject>, BigUint)> = None;
        for next in self.family.successors(from) {
            if self.quotient(from, next, a)?.slope != *target {
                continue;
            }
            let (len, path, count) = match next {
                Subobject::Top => (1, vec![Subobject::Top], BigUint::one()),
                Subobject::Member(j) => {
                    let (l, p, c) = self.jh_best(Some(j), a, target, memo)?;
                    let mut full = vec![next];
                    full.extend(p);
                    (l + 1, full, c)
                }
            };
            best = match best {
                None => Some((len, path, count)),
                Some((bl, bp, bc)) => match len.cmp(&bl) {
                    Ordering::Greater => Some((len, path, count)),
                    Ordering::Less => Some((bl, bp, bc)),
                    Ordering::Equal => {
                        let c = bc + count;
                        Some((bl, if path < bp { path } else { bp }, c))
                    }
                },
            };
        }
        // the direct step to E always has slope μ(E/F) = μ(E) once μ(F) = μ(E)
        let best = best.ok_or(Error::NotJhClosed)?;
        if let Some(i) = from {
            memo[i] = Some(best.clone());
        }
        Ok(best)
    }

    /// Largest `e` such that `E` stays stable at `(1-ε)·a + ε·b` for all
    /// `0 ≤ ε < e`: with `d = μ_a(E) - μ^max,sc_a(E)` and
    /// `g = μ^max_b(E) - μ_b(E)` this is the solution `d / (d + g)` of
    /// `ε·g = (1-ε)·d`, and `1` when `g = 0`.
    pub fn openness_epsilon(&self, a: &NumClass, b: &NumClass) -> Result<Rational> {
        if !self.is_stable(a)? {
            return Err(Error::precondition("openness radius needs a stable sheaf at α"));
        }
        self.check_movable(b)?;
        let gap_b = self.mu_max(b)?.value - self.family.top().slope(b)?;
        let g = if gap_b.is_negative() { Rational::zero() } else { gap_b };
        let e = match self.mu_max_sc(a) {
            Err(Error::EmptyStrictFamily) => Rational::one(),
            Err(err) => return Err(err),
            Ok(max) => {
                let d = self.family.top().slope(a)? - max.value;
                if g.is_zero() {
                    Rational::one()
                } else {
                    &d / (&d + &g)
                }
            }
        };
        let probe = segment(a, b, &(&e / int(2)))?;
        if !self.is_stable(&probe)? {
            return Err(Error::invariant(format!("not stable at ε = {} < e = {e}", &e / int(2))));
        }
        Ok(e)
    }

    /// Exact stable and semistable parameter sets along the segment `a → b`.
    pub fn segment_stability(&self, a: &NumClass, b: &NumClass) -> Result<SegmentReport> {
        self.check_movable(a)?;
        self.check_movable(b)?;
        let top = self.family.top();
        let (ea, eb) = (top.slope(a)?, top.slope(b)?);
        let members = self.family.members();
        // g_F(ε) = (1-ε)·g0 + ε·g1 with g = μ(E) - μ(F)
        let affine: Vec<(Rational, Rational)> = members
            .par_iter()
            .map(|m| Ok((&ea - m.slope(a)?, &eb - m.slope(b)?)))
            .collect::<Result<_>>()?;

        let mut stable = Some(Interval::unit());
        let mut semistable = Some(Interval::unit());
        let mut walls = Vec::new();
        for (i, (g0, g1)) in affine.iter().enumerate() {
            let strict_rank = members[i].rank() < top.rank();
            semistable = semistable.and_then(|s| restrict(s, g0, g1, false));
            if strict_rank {
                stable = stable.and_then(|s| restrict(s, g0, g1, true));
                if g0 == g1 {
                    if g0.is_zero() {
                        walls.push(WallCrossing { member: i, position: WallPosition::Everywhere });
                    }
                } else {
                    let root = g0 / (g0 - g1);
                    if !root.is_negative() && root <= Rational::one() {
                        walls.push(WallCrossing { member: i, position: WallPosition::At(root) });
                    }
                }
            }
        }

        let mut marks: Vec<Rational> = vec![Rational::zero(), Rational::one()];
        for iv in stable.iter().chain(semistable.iter()) {
            marks.push(iv.lo.clone());
            marks.push(iv.hi.clone());
        }
        for w in &walls {
            if let WallPosition::At(t) = &w.position {
                marks.push(t.clone());
            }
        }
        marks.sort();
        marks.dedup();
        let classify = |t: &Rational| -> PointClass {
            let semi = semistable.as_ref().is_some_and(|s| s.contains(t));
            let st = stable.as_ref().is_some_and(|s| s.contains(t));
            match (semi, st) {
                (false, _) => PointClass::Unstable,
                (true, true) => PointClass::Stable,
                (true, false) => PointClass::StrictlySemistable,
            }
        };
        let points: Vec<(Rational, PointClass)> =
            marks.iter().map(|t| (t.clone(), classify(t))).collect();

        // cross-check the interval model against the pointwise predicates
        let mut probes = marks.clone();
        probes.extend(marks.windows(2).map(|w| (&w[0] + &w[1]) / int(2)));
        for t in &probes {
            let x = segment(a, b, t)?;
            let semi = semistable.as_ref().is_some_and(|s| s.contains(t));
            let st = stable.as_ref().is_some_and(|s| s.contains(t));
            if semi != self.is_semistable(&x)? || st != self.is_stable(&x)? {
                return Err(Error::invariant(format!(
                    "segment model disagrees with pointwise stability at ε = {t}"
                )));
            }
        }
        Ok(SegmentReport { stable, semistable, walls, points })
    }
}

/// Restricts `s` to `{ε : (1-ε)·g0 + ε·g1 ≥ 0}` (`> 0` when `strict`).
fn restrict(s: Interval, g0: &Rational, g1: &Rational, strict: bool) -> Option<Interval> {
    if g0 == g1 {
        let keep = if strict { g0.is_positive() } else { !g0.is_negative() };
        return keep.then_some(s);
    }
    let root = g0 / (g0 - g1);
    if g1 > g0 {
        s.at_least(&root, strict)
    } else {
        s.at_most(&root, strict)
    }
}

//! Degree-two Chern calculus for sheaf classes on a surface.
//!
//! A [`SheafClass`] records `(rank, c1, c2)` with `c2` already evaluated
//! against the fundamental class. Products go through the truncated Chern
//! character `ch = (r, c1, c1²/2 - c2)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{NsLattice, NumClass};
use crate::rational::{int, Rational};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafClass {
    rank: u32,
    c1: NumClass,
    c2: Rational,
}

impl SheafClass {
    pub fn new(rank: u32, c1: NumClass, c2: Rational) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("sheaf classes must have rank ≥ 1".into()));
        }
        Ok(SheafClass { rank, c1, c2 })
    }

    /// `O^{⊕ r}`
    pub fn trivial(lattice: &Arc<NsLattice>, rank: u32) -> Result<Self> {
        Self::new(rank, NumClass::zero(lattice), Rational::zero())
    }

    /// Line bundle with first Chern class `c1`.
    pub fn line(c1: NumClass) -> Self {
        SheafClass { rank: 1, c1, c2: Rational::zero() }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn c1(&self) -> &NumClass {
        &self.c1
    }

    pub fn c2(&self) -> &Rational {
        &self.c2
    }

    pub fn lattice(&self) -> &Arc<NsLattice> {
        self.c1.lattice()
    }

    /// Degree-two part of the Chern character, `c1²/2 - c2`.
    pub fn ch2(&self) -> Rational {
        self.c1.square() / int(2) - &self.c2
    }

    /// `μ_α = (c1 · α) / rank`
    pub fn slope(&self, alpha: &NumClass) -> Result<Rational> {
        Ok(self.c1.pair(alpha)? / int(self.rank.into()))
    }

    pub fn discriminant(&self) -> Rational {
        bg_discriminant(self)
    }
}

impl fmt::Display for SheafClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[r={}, c1={}, c2={}]", self.rank, self.c1, self.c2)
    }
}

/// Class of `E ⊗ F` from the product of truncated Chern characters.
pub fn tensor_class(e: &SheafClass, f: &SheafClass) -> Result<SheafClass> {
    e.c1.same_lattice(&f.c1)?;
    let (re, rf) = (int(e.rank.into()), int(f.rank.into()));
    let c1 = e.c1.scale(&rf).add(&f.c1.scale(&re))?;
    let ch2 = &rf * e.ch2() + &re * f.ch2() + e.c1.pair(&f.c1)?;
    let c2 = c1.square() / int(2) - ch2;
    SheafClass::new(e.rank * f.rank, c1, c2)
}

/// Class of `E^*`: `c1` changes sign, `ch2` and hence `c2` are unchanged.
pub fn dual_class(e: &SheafClass) -> SheafClass {
    SheafClass { rank: e.rank, c1: e.c1.neg(), c2: e.c2.clone() }
}

/// Middle term of `0 → F → E → Q → 0`.
pub fn whitney_extension(f: &SheafClass, q: &SheafClass) -> Result<SheafClass> {
    let c1 = f.c1.add(&q.c1)?;
    let c2 = &f.c2 + &q.c2 + f.c1.pair(&q.c1)?;
    SheafClass::new(f.rank + q.rank, c1, c2)
}

/// Bogomolov-Gieseker discriminant `2r·c2 - (r-1)·c1²`.
pub fn bg_discriminant(e: &SheafClass) -> Rational {
    let r = int(e.rank.into());
    int(2) * &r * &e.c2 - (r - Rational::one()) * e.c1.square()
}

/// A direct sum of line bundles, given by their first Chern classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBundle {
    summands: Vec<NumClass>,
}

impl SplitBundle {
    pub fn new(summands: Vec<NumClass>) -> Result<Self> {
        let first = summands
            .first()
            .ok_or_else(|| Error::InvalidInput("split bundle needs a summand".into()))?;
        for s in &summands {
            first.same_lattice(s)?;
        }
        Ok(SplitBundle { summands })
    }

    pub fn summands(&self) -> &[NumClass] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// `(s, Σ L_i, Σ_{i<j} L_i·L_j)`
    pub fn class(&self) -> SheafClass {
        let lat = self.summands[0].lattice();
        let mut c1 = NumClass::zero(lat);
        let mut c2 = Rational::zero();
        for (i, a) in self.summands.iter().enumerate() {
            c1 = c1.add(a).expect("same lattice");
            for b in &self.summands[i + 1..] {
                c2 += a.pair(b).expect("same lattice");
            }
        }
        SheafClass { rank: self.summands.len() as u32, c1, c2 }
    }

    pub fn dual(&self) -> SplitBundle {
        SplitBundle { summands: self.summands.iter().map(NumClass::neg).collect() }
    }

    pub fn direct_sum(&self, other: &SplitBundle) -> Result<SplitBundle> {
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        SplitBundle::new(summands)
    }

    /// Pairwise sums `L_i + M_j`.
    pub fn tensor(&self, other: &SplitBundle) -> Result<SplitBundle> {
        let mut summands = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.summands {
            for b in &other.summands {
                summands.push(a.add(b)?);
            }
        }
        SplitBundle::new(summands)
    }
}

/// `Sym^m` of a split bundle: one summand `Σ a_i L_i` per multiset
/// `a_1 + … + a_s = m`, in lexicographic order of the exponent vectors
/// (largest power of the first summand first).
pub fn sym_split(b: &SplitBundle, m: u32) -> Result<SplitBundle> {
    if m == 0 {
        return Err(Error::precondition("symmetric power needs m ≥ 1"));
    }
    let s = b.rank();
    let mut out = Vec::new();
    let mut exps = vec![0u32; s];
    compositions(&mut exps, 0, m, &mut |e| {
        let mut c = NumClass::zero(b.summands[0].lattice());
        for (k, &a) in e.iter().enumerate() {
            if a > 0 {
                c = c.add_scaled(&b.summands[k], &int(a.into())).expect("same lattice");
            }
        }
        out.push(c);
    });
    SplitBundle::new(out)
}

fn compositions(exps: &mut [u32], pos: usize, left: u32, emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == exps.len() {
        exps[pos] = left;
        emit(exps);
        return;
    }
    for a in (0..=left).rev() {
        exps[pos] = a;
        compositions(exps, pos + 1, left - a, emit);
    }
    exps[pos] = 0;
}

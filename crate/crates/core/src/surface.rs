//! Criteria specific to surfaces: Zariski decomposition, the
//! pseudo-effectivity trichotomy, Bogomolov-Gieseker verdicts and the numeric
//! gates for (projective) flatness and torus quotients.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::chern::{bg_discriminant, SheafClass};
use crate::cone::{Membership, RationalCone};
use crate::error::{Error, Result};
use crate::lattice::{certify_signature, hodge_bound, restricted_gram, HodgeCertificate, NumClass};
use crate::linalg;
use crate::rational::{int, Rational};
use crate::stability::{Stability, SubsheafFamily};

/// Candidate irreducible curves for the Zariski support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCurveSet {
    curves: Vec<NumClass>,
}

impl NegativeCurveSet {
    /// Curves must have integer coordinates; duplicates are dropped.
    pub fn new(curves: Vec<NumClass>) -> Result<Self> {
        let mut out: Vec<NumClass> = Vec::with_capacity(curves.len());
        for (k, c) in curves.into_iter().enumerate() {
            if let Some(first) = out.first() {
                first.same_lattice(&c)?;
            }
            if !c.coords().iter().all(Rational::is_integer) {
                return Err(Error::InvalidInput(format!("curve {k} is not integral")));
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(NegativeCurveSet { curves: out })
    }

    pub fn curves(&self) -> &[NumClass] {
        &self.curves
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }
}

/// `D = P + Σ aᵢ Nᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiPair {
    pub positive: NumClass,
    /// Support curves with their coefficients, sorted by curve coordinates.
    pub negative: Vec<(NumClass, Rational)>,
}

impl ZariskiPair {
    /// `N = Σ aᵢ Nᵢ`.
    pub fn negative_part(&self) -> NumClass {
        let mut n = NumClass::zero(self.positive.lattice());
        for (c, a) in &self.negative {
            n = n.add_scaled(c, a).expect("support shares the lattice");
        }
        n
    }

    /// Re-checks every defining condition against `d`, the curve set and
    /// the nef cone `eff^∨`.
    pub fn verify(&self, d: &NumClass, curves: &NegativeCurveSet, eff: &RationalCone) -> Result<()> {
        let p = &self.positive;
        for c in curves.curves() {
            if p.pair(c)?.is_negative() {
                return Err(Error::invariant(format!("P · {c} < 0")));
            }
        }
        if !eff.dual().contains(p, Membership::Closed)? {
            return Err(Error::invariant("positive part is not nef"));
        }
        if self.negative.iter().any(|(_, a)| !a.is_positive()) {
            return Err(Error::invariant("non-positive support coefficient"));
        }
        let support: Vec<NumClass> = self.negative.iter().map(|(c, _)| c.clone()).collect();
        if !support.is_empty()
            && !certify_signature(&restricted_gram(&support)?)?.is_negative_definite()
        {
            return Err(Error::invariant("support is not negative definite"));
        }
        for c in &support {
            if !p.pair(c)?.is_zero() {
                return Err(Error::invariant(format!("P · {c} ≠ 0")));
            }
        }
        if p.add(&self.negative_part())? != *d {
            return Err(Error::invariant("P + N does not reconstruct D"));
        }
        Ok(())
    }
}

/// Zariski decomposition by support growth: while some candidate curve meets
/// the current positive part negatively, all such curves join the support and
/// the coefficients are re-solved from `(D - Σ aᵢ Cᵢ) · Cⱼ = 0`.
pub fn zariski_decomposition(
    d: &NumClass,
    curves: &NegativeCurveSet,
    eff: &RationalCone,
) -> Result<ZariskiPair> {
    if !eff.contains(d, Membership::Closed)? {
        return Err(Error::precondition(format!("{d} is not pseudo-effective")));
    }
    let mut support: Vec<NumClass> = Vec::new();
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut p = d.clone();
    loop {
        let mut grew = false;
        for c in curves.curves() {
            if !support.contains(c) && p.pair(c)?.is_negative() {
                support.push(c.clone());
                grew = true;
            }
        }
        if !grew {
            break;
        }
        support.sort_by(|x, y| x.coords().cmp(y.coords()));
        let gram = restricted_gram(&support)?;
        if !certify_signature(&gram)?.is_negative_definite() {
            return Err(Error::precondition("inconsistent curve data: support not negative definite"));
        }
        let rhs: Vec<Rational> = support.iter().map(|c| d.pair(c)).collect::<Result<_>>()?;
        coeffs = linalg::solve(&gram, &rhs)
            .ok_or_else(|| Error::invariant("negative definite system is singular"))?;
        if coeffs.iter().any(|a| !a.is_positive()) {
            return Err(Error::precondition(
                "candidate list not irreducible-consistent: non-positive coefficient",
            ));
        }
        p = d.clone();
        for (c, a) in support.iter().zip(&coeffs) {
            p = p.add_scaled(c, &-a)?;
        }
    }
    if !eff.dual().contains(&p, Membership::Closed)? {
        return Err(Error::precondition(format!(
            "candidate list insufficient: positive part {p} is not nef"
        )));
    }
    let pair = ZariskiPair { positive: p, negative: support.into_iter().zip(coeffs).collect() };
    pair.verify(d, curves, eff)?;
    Ok(pair)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NefVerdict {
    /// Zariski negative part vanishes.
    Nef,
    /// A non-zero negative part appeared: the supplied cone or curve data
    /// contradicts the hypotheses.
    InputInconsistent(ZariskiPair),
}

/// For pseudo-effective `D` with `D² = 0` and `α · D = 0` for a non-zero
/// movable `α`, `D` is nef.
pub fn nef_from_zero_square(
    d: &NumClass,
    a: &NumClass,
    curves: &NegativeCurveSet,
    eff: &RationalCone,
    mov: &RationalCone,
) -> Result<NefVerdict> {
    if !eff.contains(d, Membership::Closed)? {
        return Err(Error::precondition(format!("{d} is not pseudo-effective")));
    }
    if !d.square().is_zero() {
        return Err(Error::precondition(format!("D² = {} ≠ 0", d.square())));
    }
    if a.is_zero() {
        return Err(Error::precondition("α = 0"));
    }
    if !mov.contains(a, Membership::Closed)? {
        return Err(Error::NotMovable);
    }
    if !a.pair(d)?.is_zero() {
        return Err(Error::precondition(format!("α · D = {} ≠ 0", a.pair(d)?)));
    }
    let z = zariski_decomposition(d, curves, eff)?;
    Ok(if z.negative.is_empty() { NefVerdict::Nef } else { NefVerdict::InputInconsistent(z) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Effectivity {
    /// `D = 0`.
    Degenerate,
    /// An integral ample `H` with `H · D = 0`.
    AmpleOrthogonal(NumClass),
    /// `D` (`Plus`) or `-D` (`Minus`) is pseudo-effective.
    PseudoEffective(Side),
}

/// Either `D^⊥` meets the ample cone (interior of `nef`) or one of `±D` is
/// pseudo-effective.
pub fn effectivity_classifier(
    d: &NumClass,
    nef: &RationalCone,
    eff: &RationalCone,
) -> Result<Effectivity> {
    if d.is_zero() {
        return Ok(Effectivity::Degenerate);
    }
    if let Some(h) = nef.orthogonal_interior_point(d)? {
        return Ok(Effectivity::AmpleOrthogonal(h));
    }
    // D has constant sign on the ample cone; pick it from any generator
    let positive = nef
        .generators()
        .iter()
        .map(|g| g.pair(d))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|v| !v.is_zero())
        .ok_or_else(|| Error::invariant("non-zero D vanishes on a full-dimensional cone"))?
        .is_positive();
    let (side, x) = if positive { (Side::Plus, d.clone()) } else { (Side::Minus, d.neg()) };
    if !eff.contains(&x, Membership::Closed)? {
        return Err(Error::precondition(format!(
            "cone data inconsistent: {x} is positive on the ample cone but not pseudo-effective"
        )));
    }
    Ok(Effectivity::PseudoEffective(side))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BgiStatus {
    Consistent,
    /// Semistable with `Δ < 0`: no sheaf realizes this data.
    FamilyIncompleteOrNongeometric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BgiVerdict {
    pub discriminant: Rational,
    pub semistable: bool,
    pub status: BgiStatus,
    /// `Δ = 0`, the projective-flatness case.
    pub equality: bool,
}

/// Bogomolov-Gieseker check for `E` semistable with respect to a non-zero
/// movable class.
pub fn bgi_verdict(fam: &SubsheafFamily, a: &NumClass, mov: &RationalCone) -> Result<BgiVerdict> {
    if a.is_zero() {
        return Err(Error::precondition("α = 0"));
    }
    let semistable = Stability::new(fam, mov)?.is_semistable(a)?;
    let discriminant = bg_discriminant(fam.top());
    let status = if semistable && discriminant.is_negative() {
        BgiStatus::FamilyIncompleteOrNongeometric
    } else {
        BgiStatus::Consistent
    };
    Ok(BgiVerdict { equality: discriminant.is_zero(), discriminant, semistable, status })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatCondition {
    C1DotAlpha,
    C1SquareMinusC2,
    AlphaSquareZero,
    AlphaSquareNegative,
    AlphaNotMovable,
    NotSemistable,
}

impl fmt::Display for FlatCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlatCondition::C1DotAlpha => "c1 · α ≠ 0",
            FlatCondition::C1SquareMinusC2 => "c1² - c2 ≠ 0",
            FlatCondition::AlphaSquareZero => "α² = 0",
            FlatCondition::AlphaSquareNegative => "α² < 0",
            FlatCondition::AlphaNotMovable => "α not movable",
            FlatCondition::NotSemistable => "not α-semistable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatnessVerdict {
    /// All hypotheses hold; `c1² ≤ 0` by Hodge index, then `c1² = c2 = 0`
    /// and `c1 = 0`.
    Certified { hodge: HodgeCertificate, discriminant: Rational },
    NotCertified(FlatCondition),
    /// The hypotheses hold but the numeric consequences fail, so the
    /// family cannot be complete.
    InconsistentFamilyData { discriminant: Rational, c1_square: Rational },
}

/// Numeric flatness criterion on a surface: `c1 · α = 0`, `c1² = c2`,
/// `α² > 0` and `α`-semistability.
pub fn flatness_surface(
    fam: &SubsheafFamily,
    a: &NumClass,
    mov: &RationalCone,
) -> Result<FlatnessVerdict> {
    let e = fam.top();
    let c1 = e.c1();
    if !c1.pair(a)?.is_zero() {
        return Ok(FlatnessVerdict::NotCertified(FlatCondition::C1DotAlpha));
    }
    if c1.square() != *e.c2() {
        return Ok(FlatnessVerdict::NotCertified(FlatCondition::C1SquareMinusC2));
    }
    let a2 = a.square();
    if a2.is_zero() {
        return Ok(FlatnessVerdict::NotCertified(FlatCondition::AlphaSquareZero));
    }
    if a2.is_negative() {
        return Ok(FlatnessVerdict::NotCertified(FlatCondition::AlphaSquareNegative));
    }
    if !mov.contains(a, Membership::Closed)? {
        return Ok(FlatnessVerdict::NotCertified(FlatCondition::AlphaNotMovable));
    }
    if !Stability::new(fam, mov)?.is_semistable(a)? {
        return Ok(FlatnessVerdict::NotCertified(FlatCondition::NotSemistable));
    }
    let discriminant = bg_discriminant(e);
    if discriminant.is_negative() {
        return Ok(FlatnessVerdict::InconsistentFamilyData {
            discriminant,
            c1_square: c1.square(),
        });
    }
    // Δ = (r+1)·c1² ≥ 0 with c1² ≤ 0 forces c1² = 0, and Hodge equality c1 = 0
    let hodge = hodge_bound(c1, a)?;
    if !hodge.equality {
        return Ok(FlatnessVerdict::InconsistentFamilyData { discriminant, c1_square: hodge.square });
    }
    Ok(FlatnessVerdict::Certified { hodge, discriminant })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjFlatBranch {
    /// `c1 = 0` or `c1^⊥` meets the ample cone: `E` is flat.
    Flat(Option<NumClass>),
    ENef,
    DualNef,
    /// The Zariski step returned a non-zero negative part.
    InputInconsistent(ZariskiPair),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjFlatVerdict {
    /// `None` unless `c1 · α = 0` and `c1² = 0`.
    pub branch: Option<ProjFlatBranch>,
}

/// Criterion for projective flatness: `E` stable with `Δ(E) = 0`. When also
/// `c1 · α = c1² = 0`, decides whether `E` is flat or `E`/`E^*` is nef.
pub fn proj_flatness_surface(
    fam: &SubsheafFamily,
    a: &NumClass,
    mov: &RationalCone,
    eff: &RationalCone,
    curves: &NegativeCurveSet,
) -> Result<ProjFlatVerdict> {
    let e = fam.top();
    let delta = bg_discriminant(e);
    if !delta.is_zero() {
        return Err(Error::precondition(format!("equality fails: Δ = {delta}")));
    }
    if a.is_zero() {
        return Err(Error::precondition("α = 0"));
    }
    if !Stability::new(fam, mov)?.is_stable(a)? {
        return Err(Error::precondition("E is not α-stable"));
    }
    let c1 = e.c1();
    if !c1.pair(a)?.is_zero() || !c1.square().is_zero() {
        return Ok(ProjFlatVerdict { branch: None });
    }
    let nef = eff.dual();
    let branch = match effectivity_classifier(c1, &nef, eff)? {
        Effectivity::Degenerate => ProjFlatBranch::Flat(None),
        Effectivity::AmpleOrthogonal(h) => ProjFlatBranch::Flat(Some(h)),
        Effectivity::PseudoEffective(side) => {
            let d = if side == Side::Plus { c1.clone() } else { c1.neg() };
            match nef_from_zero_square(&d, a, curves, eff, mov)? {
                NefVerdict::Nef if side == Side::Plus => ProjFlatBranch::ENef,
                NefVerdict::Nef => ProjFlatBranch::DualNef,
                NefVerdict::InputInconsistent(z) => ProjFlatBranch::InputInconsistent(z),
            }
        }
    };
    Ok(ProjFlatVerdict { branch: Some(branch) })
}

/// Where `c1²·H - λ·c2·H` vanishes as a function of `λ > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaVanishing {
    Everywhere,
    Nowhere,
    At(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaReport {
    pub rank: u32,
    /// `2r/(r-1)`; `None` (unbounded) for rank one.
    pub upper: Option<Rational>,
    /// `Δ·H ≥ 0` and `c1²·H ≤ 0`.
    pub premises: bool,
    pub vanishing: LambdaVanishing,
    /// Vanishing at `λ = 1` and `λ = 2`.
    pub at_one: bool,
    pub at_two: bool,
}

impl LambdaReport {
    /// Whether `λ` lies in `(0, 2r/(r-1))`.
    pub fn in_range(&self, lambda: &Rational) -> bool {
        lambda.is_positive() && self.upper.as_ref().is_none_or(|u| lambda < u)
    }

    /// Under the premises, vanishing at one admissible `λ` forces vanishing
    /// at all of them: the only possible isolated root lies outside the range.
    pub fn equivalence_holds(&self) -> bool {
        match &self.vanishing {
            LambdaVanishing::At(l) => !self.in_range(l),
            _ => true,
        }
    }
}

pub fn lambda_report(rank: u32, c1sq_h: &Rational, c2_h: &Rational) -> Result<LambdaReport> {
    if rank == 0 {
        return Err(Error::InvalidInput("rank must be positive".into()));
    }
    let r = int(rank.into());
    let upper = (rank > 1).then(|| int(2) * &r / (&r - int(1)));
    let delta = int(2) * &r * c2_h - (&r - int(1)) * c1sq_h;
    let vanishing = match (c1sq_h.is_zero(), c2_h.is_zero()) {
        (true, true) => LambdaVanishing::Everywhere,
        (_, true) => LambdaVanishing::Nowhere,
        _ => {
            let l = c1sq_h / c2_h;
            if l.is_positive() {
                LambdaVanishing::At(l)
            } else {
                LambdaVanishing::Nowhere
            }
        }
    };
    Ok(LambdaReport {
        rank,
        upper,
        premises: !delta.is_negative() && !c1sq_h.is_positive(),
        at_one: c1sq_h == c2_h,
        at_two: *c1sq_h == int(2) * c2_h,
        vanishing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherFlatVerdict {
    pub c1_vanishes: bool,
    pub coefficient_vanishes: bool,
    pub lambda: Option<LambdaReport>,
}

impl HigherFlatVerdict {
    pub fn passed(&self) -> bool {
        self.c1_vanishes && self.coefficient_vanishes
    }
}

/// Numeric gate of the higher-dimensional flatness criterion, from
/// precomputed intersection numbers `c1·H^{n-1}`, `c1²·H^{n-2}`, `c2·H^{n-2}`.
pub fn flatness_higher(
    n: u32,
    c1_h: &Rational,
    c1sq_h: &Rational,
    c2_h: &Rational,
    rank: Option<u32>,
) -> Result<HigherFlatVerdict> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension n = {n} < 2")));
    }
    Ok(HigherFlatVerdict {
        c1_vanishes: c1_h.is_zero(),
        coefficient_vanishes: c1sq_h == c2_h,
        lambda: rank.map(|r| lambda_report(r, c1sq_h, c2_h)).transpose()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusGate {
    HypothesesMet,
    C2Nonzero,
    CanonicalNotTrivial,
}

pub fn torus_quotient_gate(n: u32, c2_h: &Rational, kx_trivial: bool) -> Result<TorusGate> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension n = {n} < 2")));
    }
    Ok(if !c2_h.is_zero() {
        TorusGate::C2Nonzero
    } else if !kx_trivial {
        TorusGate::CanonicalNotTrivial
    } else {
        TorusGate::HypothesesMet
    })
}

/// `E = O(D) ⊕ O(-D)` as a sheaf class: rank 2, `c1 = 0`, `c2 = -D²`.
pub fn split_pair(d: &NumClass) -> SheafClass {
    SheafClass::new(2, NumClass::zero(d.lattice()), -d.square()).expect("rank 2")
}

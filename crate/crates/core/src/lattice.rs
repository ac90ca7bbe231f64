//! Néron-Severi lattices with an exact intersection pairing.
//!
//! A lattice is a rank-ρ free module with a nondegenerate symmetric Gram
//! matrix of signature `(1, ρ-1)`. On a surface divisor and curve classes
//! live in the same lattice, so [`NumClass`] stands for both.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};
use crate::smith;

/// Inertia of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_hyperbolic(&self) -> bool {
        self.positive == 1 && self.zero == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positive == 0 && self.zero == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Exact signature of a symmetric rational matrix by fraction-free
/// congruence diagonalization.
///
/// After clearing denominators the active block `M` is eliminated with the
/// congruence `e_i ↦ p·e_i - m_ik·e_k`, which turns the trailing block into
/// `p · (p·m_ij - m_ik·m_jk)`. The sign of the accumulated scalar is
/// tracked so that every pivot is attributed its true sign.
pub fn certify_signature(gram: &Matrix) -> Result<Signature> {
    if !linalg::is_symmetric(gram) {
        return Err(Error::InvalidLattice("gram matrix is not symmetric".into()));
    }
    let n = gram.len();
    let mut den = BigInt::one();
    for x in gram.iter().flatten() {
        den = den.lcm(x.denom());
    }
    let mut m: Vec<Vec<BigInt>> = gram
        .iter()
        .map(|row| row.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();

    let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
    let mut scalar_sign = 1i8;
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                swap_sym(&mut m, k, j);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_zero())
            {
                // all remaining diagonal entries vanish: e_i ↦ e_i + e_j gives 2·m_ij
                for c in 0..n {
                    let v = m[j][c].clone();
                    m[i][c] += v;
                }
                for r in 0..n {
                    let v = m[r][j].clone();
                    m[r][i] += v;
                }
                swap_sym(&mut m, k, i);
            } else {
                sig.zero += n - k;
                break;
            }
        }
        let p = m[k][k].clone();
        let s = scalar_sign * if p.is_positive() { 1 } else { -1 };
        if s > 0 {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        let mut g = BigInt::zero();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &p * &m[i][j] - &m[i][k] * &m[j][k];
                m[i][j] = v;
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                g = g.gcd(&m[i][j]);
            }
        }
        if !g.is_zero() && !g.is_one() {
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = &m[i][j] / &g;
                }
            }
        }
        for i in k + 1..n {
            m[i][k] = BigInt::zero();
            m[k][i] = BigInt::zero();
        }
        if p.is_negative() {
            scalar_sign = -scalar_sign;
        }
    }
    Ok(sig)
}

fn swap_sym(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    m.swap(a, b);
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Stable identifier derived from the lattice contents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeId(u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsLattice {
    id: LatticeId,
    gram: Matrix,
    labels: Vec<String>,
}

impl NsLattice {
    /// Validates symmetry and the hyperbolic signature `(1, ρ-1)`.
    pub fn new(gram: Matrix, labels: Vec<String>) -> Result<Arc<Self>> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::InvalidLattice("rank must be positive".into()));
        }
        if gram.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidLattice("gram matrix is not square".into()));
        }
        let labels = if labels.is_empty() {
            (1..=rank).map(|i| format!("e{i}")).collect()
        } else {
            labels
        };
        if labels.len() != rank {
            return Err(Error::InvalidLattice(format!(
                "{} basis labels for rank {rank}",
                labels.len()
            )));
        }
        let sig = certify_signature(&gram)?;
        if sig.zero > 0 {
            return Err(Error::InvalidLattice(format!("degenerate pairing, signature {sig}")));
        }
        if !sig.is_hyperbolic() {
            return Err(Error::InvalidLattice(format!(
                "signature {sig} is not (1, {}, 0)",
                rank - 1
            )));
        }
        let mut h = DefaultHasher::new();
        for x in gram.iter().flatten() {
            x.hash(&mut h);
        }
        labels.hash(&mut h);
        Ok(Arc::new(NsLattice { id: LatticeId(h.finish()), gram, labels }))
    }

    pub fn from_ints(gram: &[&[i64]], labels: &[&str]) -> Result<Arc<Self>> {
        Self::new(
            linalg::from_ints(gram),
            labels.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn id(&self) -> LatticeId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn signature(&self) -> Signature {
        Signature { positive: 1, negative: self.rank() - 1, zero: 0 }
    }

    fn pair_coords(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let gb = linalg::mat_vec(&self.gram, b);
        rational::dot(a, &gb)
    }
}

/// A numerical divisor or curve class: exact coordinates in a lattice basis.
#[derive(Clone)]
pub struct NumClass {
    lattice: Arc<NsLattice>,
    coords: Vec<Rational>,
}

impl NumClass {
    pub fn new(lattice: &Arc<NsLattice>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), found: coords.len() });
        }
        Ok(NumClass { lattice: Arc::clone(lattice), coords })
    }

    pub fn from_ints(lattice: &Arc<NsLattice>, coords: &[i64]) -> Result<Self> {
        Self::new(lattice, rational::ints(coords))
    }

    pub fn zero(lattice: &Arc<NsLattice>) -> Self {
        NumClass { lattice: Arc::clone(lattice), coords: vec![Rational::zero(); lattice.rank()] }
    }

    pub fn basis(lattice: &Arc<NsLattice>, i: usize) -> Self {
        let mut c = Self::zero(lattice);
        c.coords[i] = Rational::one();
        c
    }

    pub fn lattice(&self) -> &Arc<NsLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn same_lattice(&self, other: &NumClass) -> Result<()> {
        if self.lattice.id == other.lattice.id {
            Ok(())
        } else {
            Err(Error::IncompatibleLattices)
        }
    }

    /// Intersection number `self · other`.
    pub fn pair(&self, other: &NumClass) -> Result<Rational> {
        self.same_lattice(other)?;
        Ok(self.lattice.pair_coords(&self.coords, &other.coords))
    }

    pub fn square(&self) -> Rational {
        self.lattice.pair_coords(&self.coords, &self.coords)
    }

    pub fn add(&self, other: &NumClass) -> Result<NumClass> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &NumClass) -> Result<NumClass> {
        self.add_scaled(other, &-Rational::one())
    }

    /// `self + t · other`
    pub fn add_scaled(&self, other: &NumClass, t: &Rational) -> Result<NumClass> {
        self.same_lattice(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + t * b)
            .collect();
        Ok(NumClass { lattice: Arc::clone(&self.lattice), coords })
    }

    pub fn scale(&self, t: &Rational) -> NumClass {
        NumClass {
            lattice: Arc::clone(&self.lattice),
            coords: self.coords.iter().map(|a| a * t).collect(),
        }
    }

    pub fn neg(&self) -> NumClass {
        self.scale(&-Rational::one())
    }

    /// Positive multiple with primitive integer coordinates.
    pub fn primitive(&self) -> NumClass {
        NumClass { lattice: Arc::clone(&self.lattice), coords: rational::primitive(&self.coords) }
    }
}

impl PartialEq for NumClass {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.id == other.lattice.id && self.coords == other.coords
    }
}

impl Eq for NumClass {}

impl fmt::Debug for NumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumClass{self}")
    }
}

impl fmt::Display for NumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `a · b`, erroring on lattice mismatch.
pub fn pairing(a: &NumClass, b: &NumClass) -> Result<Rational> {
    a.pair(b)
}

/// Outcome of [`hodge_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeCertificate {
    /// `D²`, never positive.
    pub square: Rational,
    /// `D² = 0`, which happens exactly when `D = 0`.
    pub equality: bool,
}

/// For `a² > 0` and `D · a = 0`, returns `D²` after checking `D² ≤ 0` with
/// equality only for `D = 0`.
pub fn hodge_bound(d: &NumClass, a: &NumClass) -> Result<HodgeCertificate> {
    d.same_lattice(a)?;
    if !a.square().is_positive() {
        return Err(Error::precondition("hodge bound needs a² > 0"));
    }
    if !d.pair(a)?.is_zero() {
        return Err(Error::precondition("hodge bound needs D · a = 0"));
    }
    let square = d.square();
    if square.is_positive() || (square.is_zero() != d.is_zero()) {
        return Err(Error::invariant(format!(
            "Hodge index violated: D = {d}, D² = {square}"
        )));
    }
    Ok(HodgeCertificate { equality: square.is_zero(), square })
}

/// Basis of `a^⊥` with respect to the pairing.
pub fn orthogonal_complement(a: &NumClass) -> Vec<NumClass> {
    let lat = a.lattice();
    let row = linalg::mat_vec(lat.gram(), a.coords());
    linalg::kernel(&vec![row], lat.rank())
        .into_iter()
        .map(|v| NumClass { lattice: Arc::clone(lat), coords: v })
        .collect()
}

/// Gram matrix of the pairing restricted to the span of `classes`.
pub fn restricted_gram(classes: &[NumClass]) -> Result<Matrix> {
    classes
        .iter()
        .map(|x| classes.iter().map(|y| x.pair(y)).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Divisor-side push forward, source → target.
    Push,
    /// Curve-side pull back, target → source.
    Pull,
}

/// Linear maps between lattices that satisfy the projection formula
/// `x · pull(y) = push(x) · y`.
#[derive(Debug, Clone)]
pub struct LatticeMorphism {
    source: Arc<NsLattice>,
    target: Arc<NsLattice>,
    push: Matrix,
    pull: Matrix,
}

impl LatticeMorphism {
    pub fn new(
        source: &Arc<NsLattice>,
        target: &Arc<NsLattice>,
        push: Matrix,
        pull: Matrix,
    ) -> Result<Self> {
        let (s, t) = (source.rank(), target.rank());
        let shape_ok = |m: &Matrix, rows: usize, cols: usize| {
            m.len() == rows && m.iter().all(|r| r.len() == cols)
        };
        if !shape_ok(&push, t, s) || !shape_ok(&pull, s, t) {
            return Err(Error::InvalidInput(format!(
                "morphism matrices must be push {t}x{s} and pull {s}x{t}"
            )));
        }
        let lhs = linalg::mat_mul(&linalg::transpose(&pull), source.gram());
        let rhs = linalg::mat_mul(target.gram(), &push);
        if lhs != rhs {
            return Err(Error::InvalidInput(
                "push and pull are not adjoint for the pairings".into(),
            ));
        }
        Ok(LatticeMorphism {
            source: Arc::clone(source),
            target: Arc::clone(target),
            push,
            pull,
        })
    }

    pub fn identity(lattice: &Arc<NsLattice>) -> Self {
        let id = linalg::identity(lattice.rank());
        LatticeMorphism {
            source: Arc::clone(lattice),
            target: Arc::clone(lattice),
            push: id.clone(),
            pull: id,
        }
    }

    pub fn source(&self) -> &Arc<NsLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<NsLattice> {
        &self.target
    }

    pub fn transport(&self, x: &NumClass, direction: Direction) -> Result<NumClass> {
        let (from, to, m) = match direction {
            Direction::Push => (&self.source, &self.target, &self.push),
            Direction::Pull => (&self.target, &self.source, &self.pull),
        };
        if x.lattice().id() != from.id() {
            return Err(Error::IncompatibleLattices);
        }
        NumClass::new(to, linalg::mat_vec(m, x.coords()))
    }
}

/// Exponent `m` of the finite group `span(ambient) / span(sub)`: the least
/// positive integer with `m · span(ambient) ⊆ span(sub)`, read off as the
/// largest elementary divisor of the Smith normal form.
pub fn cartier_index(ambient: &[NumClass], sub: &[NumClass]) -> Result<BigInt> {
    let first = ambient
        .first()
        .ok_or_else(|| Error::InvalidInput("empty ambient list".into()))?;
    let to_int = |x: &NumClass| -> Result<Vec<BigInt>> {
        first.same_lattice(x)?;
        if !rational::is_integral(x.coords()) {
            return Err(Error::InvalidInput(format!("class {x} is not integral")));
        }
        Ok(x.coords().iter().map(|c| c.to_integer()).collect())
    };
    let a: Vec<_> = ambient.iter().map(to_int).collect::<Result<_>>()?;
    let s: Vec<_> = sub.iter().map(to_int).collect::<Result<_>>()?;
    smith::quotient_exponent(&a, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ints};
    use proptest::prelude::*;

    fn p1p1() -> Arc<NsLattice> {
        NsLattice::from_ints(&[&[0, 1], &[1, 0]], &["F1", "F2"]).unwrap()
    }

    fn blowup() -> Arc<NsLattice> {
        NsLattice::from_ints(&[&[1, 0], &[0, -1]], &["H", "E"]).unwrap()
    }

    fn p2() -> Arc<NsLattice> {
        NsLattice::from_ints(&[&[1]], &["H"]).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let l = p1p1();
        let x = NumClass::from_ints(&l, &[1, 1]).unwrap();
        let y = NumClass::from_ints(&l, &[1, 0]).unwrap();
        assert_eq!(pairing(&x, &y).unwrap(), int(1));
        assert_eq!(pairing(&x, &NumClass::zero(&l)).unwrap(), int(0));
        let b = blowup();
        let e = NumClass::from_ints(&b, &[0, 1]).unwrap();
        assert_eq!(e.square(), int(-1));
        assert_eq!(pairing(&x, &e), Err(Error::IncompatibleLattices));
    }

    #[test]
    fn signature_examples() {
        let sig = |rows: &[&[i64]]| certify_signature(&linalg::from_ints(rows)).unwrap();
        assert_eq!(sig(&[&[0, 1], &[1, 0]]), Signature { positive: 1, negative: 1, zero: 0 });
        assert_eq!(sig(&[&[1]]), Signature { positive: 1, negative: 0, zero: 0 });
        assert_eq!(
            sig(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]),
            Signature { positive: 1, negative: 2, zero: 0 }
        );
        assert_eq!(sig(&[&[1, 1], &[1, 1]]), Signature { positive: 1, negative: 0, zero: 1 });
        assert_eq!(sig(&[&[0, 0], &[0, 0]]), Signature { positive: 0, negative: 0, zero: 2 });
        assert!(certify_signature(&linalg::from_ints(&[&[0, 1], &[2, 0]])).is_err());
    }

    #[test]
    fn lattice_construction_rejects_bad_grams() {
        assert!(NsLattice::from_ints(&[&[1, 0], &[0, 0]], &[]).is_err());
        assert!(NsLattice::from_ints(&[&[1, 0], &[0, 1]], &[]).is_err());
        assert!(NsLattice::from_ints(&[&[-1]], &[]).is_err());
        assert!(NsLattice::from_ints(&[&[1, 2], &[3, 1]], &[]).is_err());
        assert!(NsLattice::from_ints(&[&[1]], &["a", "b"]).is_err());
        assert_eq!(p2().labels(), ["H"]);
        let l = NsLattice::from_ints(&[&[1, 0], &[0, -1]], &[]).unwrap();
        assert_eq!(l.labels(), ["e1", "e2"]);
    }

    #[test]
    fn hodge_bound_examples() {
        let b = blowup();
        let a = NumClass::from_ints(&b, &[1, 0]).unwrap();
        let d = NumClass::from_ints(&b, &[0, 3]).unwrap();
        let cert = hodge_bound(&d, &a).unwrap();
        assert_eq!(cert.square, int(-9));
        assert!(!cert.equality);

        let zero = hodge_bound(&NumClass::zero(&b), &a).unwrap();
        assert_eq!(zero.square, int(0));
        assert!(zero.equality);

        let l = p1p1();
        let a = NumClass::from_ints(&l, &[1, 1]).unwrap();
        let d = NumClass::from_ints(&l, &[1, -1]).unwrap();
        assert_eq!(hodge_bound(&d, &a).unwrap().square, int(-2));
    }

    #[test]
    fn hodge_bound_preconditions() {
        let l = p1p1();
        let fibre = NumClass::from_ints(&l, &[1, 0]).unwrap();
        assert!(matches!(hodge_bound(&fibre, &fibre), Err(Error::Precondition(_))));
        let a = NumClass::from_ints(&l, &[1, 1]).unwrap();
        assert!(matches!(hodge_bound(&fibre, &a), Err(Error::Precondition(_))));
    }

    #[test]
    fn transport_blowdown() {
        let x = blowup();
        let p = p2();
        let m = LatticeMorphism::new(
            &x,
            &p,
            linalg::from_ints(&[&[1, 0]]),
            linalg::from_ints(&[&[1], &[0]]),
        )
        .unwrap();
        let d = NumClass::new(&x, vec![frac(3, 2), int(-5)]).unwrap();
        let pushed = m.transport(&d, Direction::Push).unwrap();
        assert_eq!(pushed.coords(), &[frac(3, 2)]);
        assert!(m.transport(&d, Direction::Pull).is_err());

        // projection formula on all basis pairs
        for i in 0..2 {
            for j in 0..1 {
                let xi = NumClass::basis(&x, i);
                let yj = NumClass::basis(&p, j);
                let lhs = xi.pair(&m.transport(&yj, Direction::Pull).unwrap()).unwrap();
                let rhs = m.transport(&xi, Direction::Push).unwrap().pair(&yj).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn morphism_rejects_non_adjoint_pair() {
        let x = blowup();
        let p = p2();
        let bad = LatticeMorphism::new(
            &x,
            &p,
            linalg::from_ints(&[&[1, 1]]),
            linalg::from_ints(&[&[1], &[0]]),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn identity_transport() {
        let l = p1p1();
        let id = LatticeMorphism::identity(&l);
        let v = NumClass::new(&l, vec![frac(1, 3), int(2)]).unwrap();
        assert_eq!(id.transport(&v, Direction::Push).unwrap(), v);
        assert_eq!(id.transport(&v, Direction::Pull).unwrap(), v);
    }

    #[test]
    fn cartier_index_examples() {
        let l = p1p1();
        let c = |v: &[i64]| NumClass::from_ints(&l, v).unwrap();
        let amb = vec![c(&[1, 0]), c(&[0, 1])];
        assert_eq!(cartier_index(&amb, &[c(&[2, 0]), c(&[0, 2])]).unwrap(), BigInt::from(2));
        assert_eq!(cartier_index(&amb, &amb).unwrap(), BigInt::from(1));
        assert_eq!(cartier_index(&amb, &[c(&[1, 0]), c(&[0, 3])]).unwrap(), BigInt::from(3));
        assert!(cartier_index(&[c(&[2, 0]), c(&[0, 2])], &amb).is_err());
        let half = NumClass::new(&l, vec![frac(1, 2), int(0)]).unwrap();
        assert!(cartier_index(&amb, &[half, c(&[0, 1])]).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| frac(n, d))
    }

    fn blowup3() -> Arc<NsLattice> {
        NsLattice::from_ints(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]], &["H", "E1", "E2"]).unwrap()
    }

    fn m_small(m: &Rational) -> i64 {
        m.to_integer().try_into().unwrap()
    }

    proptest! {
        #[test]
        fn pairing_is_bilinear_and_symmetric(
            x in prop::collection::vec(small_rational(), 3),
            y in prop::collection::vec(small_rational(), 3),
            z in prop::collection::vec(small_rational(), 3),
            t in small_rational(),
        ) {
            let l = blowup3();
            let x = NumClass::new(&l, x).unwrap();
            let y = NumClass::new(&l, y).unwrap();
            let z = NumClass::new(&l, z).unwrap();
            let lhs = x.add_scaled(&y, &t).unwrap().pair(&z).unwrap();
            let rhs = x.pair(&z).unwrap() + &t * y.pair(&z).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(x.pair(&y).unwrap(), y.pair(&x).unwrap());
        }

        #[test]
        fn cartier_multiple_lands_in_sub(
            a in prop::collection::vec(-4i64..=4, 4),
            s in prop::collection::vec(-6i64..=6, 4),
        ) {
            let l = p1p1();
            let amb = vec![
                NumClass::from_ints(&l, &a[0..2]).unwrap(),
                NumClass::from_ints(&l, &a[2..4]).unwrap(),
            ];
            let det_a = a[0] * a[3] - a[1] * a[2];
            prop_assume!(det_a != 0);
            // sub generators expressed in the ambient basis
            let sub: Vec<NumClass> = [(s[0], s[1]), (s[2], s[3])]
                .iter()
                .map(|&(u, v)| amb[0].scale(&int(u)).add(&amb[1].scale(&int(v))).unwrap())
                .collect();
            prop_assume!(s[0] * s[3] - s[1] * s[2] != 0);
            let m = cartier_index(&amb, &sub).unwrap();
            let basis = linalg::from_ints(&[&[s[0], s[2]], &[s[1], s[3]]]);
            let inv = linalg::inverse(&basis).unwrap();
            let mq = Rational::from_integer(m);
            for e in [ints(&[1, 0]), ints(&[0, 1])] {
                // m·e (ambient coordinates) has integral coordinates in the sub basis
                let scaled: Vec<Rational> = e.iter().map(|x| x * &mq).collect();
                prop_assert!(rational::is_integral(&linalg::mat_vec(&inv, &scaled)));
            }
            // and no smaller multiple does
            for k in 1..m_small(&mq) {
                let kq = int(k);
                let fits = [ints(&[1, 0]), ints(&[0, 1])].iter().all(|e| {
                    let scaled: Vec<Rational> = e.iter().map(|x| x * &kq).collect();
                    rational::is_integral(&linalg::mat_vec(&inv, &scaled))
                });
                prop_assert!(!fits);
            }
        }
    }
}

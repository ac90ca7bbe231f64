//! Rational polyhedral cones in a Néron-Severi lattice.
//!
//! Every cone carries both descriptions: generators (V) and facet
//! functionals (H), where a facet `f` cuts out `{x : x · f ≥ 0}` through the
//! intersection pairing. The conversion between the two is the double
//! description method run over the plain dot product; facets are moved to
//! pairing form by applying the inverse Gram matrix.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{NsLattice, NumClass};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

/// V-representation of `{y : a·y ≥ 0 for all a}`: extreme rays modulo the
/// lineality space, plus a basis of the lineality space.
#[derive(Debug, Clone, Default)]
struct Generators {
    rays: Vec<Vec<Rational>>,
    lineality: Vec<Vec<Rational>>,
}

fn tight_rank(constraints: &[Vec<Rational>], points: &[&Vec<Rational>]) -> usize {
    let rows: Matrix = constraints
        .iter()
        .filter(|a| points.iter().all(|p| rational::dot(a, p).is_zero()))
        .cloned()
        .collect();
    if rows.is_empty() {
        0
    } else {
        linalg::rank(&rows)
    }
}

/// Double description: converts an H-representation into generators.
fn double_description(constraints: &[Vec<Rational>], dim: usize) -> Generators {
    let mut lineality: Vec<Vec<Rational>> = linalg::identity(dim);
    let mut rays: Vec<Vec<Rational>> = Vec::new();
    let mut processed: Vec<Vec<Rational>> = Vec::new();

    for a in constraints {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(k) = lineality.iter().position(|l| !rational::dot(a, l).is_zero()) {
            // the constraint cuts the lineality space: one direction becomes a ray
            let mut l0 = lineality.remove(k);
            let mut s = rational::dot(a, &l0);
            if s.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s = -s;
            }
            let project = |v: &Vec<Rational>| -> Vec<Rational> {
                let t = rational::dot(a, v) / &s;
                v.iter().zip(&l0).map(|(x, y)| x - &t * y).collect()
            };
            lineality = lineality.iter().map(project).collect();
            rays = rays.iter().map(|r| rational::primitive(&project(r))).collect();
            rays.push(rational::primitive(&l0));
        } else {
            let values: Vec<Rational> = rays.iter().map(|r| rational::dot(a, r)).collect();
            let pointed_dim = dim - lineality.len();
            let mut next: Vec<Vec<Rational>> = Vec::new();
            for (r, v) in rays.iter().zip(&values) {
                if !v.is_negative() {
                    next.push(r.clone());
                }
            }
            for (p, vp) in rays.iter().zip(&values) {
                if !vp.is_positive() {
                    continue;
                }
                for (n, vn) in rays.iter().zip(&values) {
                    if !vn.is_negative() {
                        continue;
                    }
                    // algebraic adjacency test
                    if pointed_dim < 2 || tight_rank(&processed, &[p, n]) != pointed_dim - 2 {
                        continue;
                    }
                    let combo: Vec<Rational> = p
                        .iter()
                        .zip(n)
                        .map(|(x, y)| vp * y - vn * x)
                        .collect();
                    next.push(rational::primitive(&combo));
                }
            }
            rays = next;
        }
        processed.push(a.clone());
        rays.sort();
        rays.dedup();
    }

    // keep only extreme rays
    let pointed_dim = dim - lineality.len();
    let rays = rays
        .iter()
        .filter(|r| !r.iter().all(Zero::is_zero))
        .filter(|r| tight_rank(&processed, &[r]) + 1 == pointed_dim)
        .cloned()
        .collect();
    Generators { rays, lineality }
}

/// Canonical list of generators: primitive rays plus `±` lineality basis,
/// sorted and deduplicated.
fn canonical(g: Generators) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = g.rays;
    for l in g.lineality {
        let l = rational::primitive(&l);
        out.push(l.iter().map(|x| -x).collect());
        out.push(l);
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Closed,
    Interior,
}

/// A finitely generated rational polyhedral cone with both descriptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCone {
    lattice: Arc<NsLattice>,
    generators: Vec<NumClass>,
    facets: Vec<NumClass>,
    dimension: usize,
}

impl RationalCone {
    /// Non-negative span of `gens`, with facets computed by double description.
    pub fn from_generators(gens: &[NumClass]) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::InvalidInput("cone needs at least one generator".into()))?;
        let lattice = Arc::clone(first.lattice());
        for g in gens {
            first.same_lattice(g)?;
        }
        Self::build(&lattice, gens.iter().map(|g| g.coords().to_vec()).collect())
    }

    /// The cone `{x : x · f ≥ 0 for every f in facets}`.
    pub fn from_facets(lattice: &Arc<NsLattice>, facets: &[NumClass]) -> Result<Self> {
        for f in facets {
            if f.lattice().id() != lattice.id() {
                return Err(Error::IncompatibleLattices);
            }
        }
        let covectors: Vec<Vec<Rational>> = facets
            .iter()
            .map(|f| linalg::mat_vec(lattice.gram(), f.coords()))
            .collect();
        let gens = canonical(double_description(&covectors, lattice.rank()));
        Self::build(lattice, gens)
    }

    /// The zero cone `{0}`.
    pub fn zero(lattice: &Arc<NsLattice>) -> Result<Self> {
        Self::build(lattice, Vec::new())
    }

    /// The whole space.
    pub fn full(lattice: &Arc<NsLattice>) -> Result<Self> {
        Self::from_facets(lattice, &[])
    }

    fn build(lattice: &Arc<NsLattice>, raw: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = lattice.rank();
        // dot-dual of the generated cone; its generators are the facet covectors
        let covectors = canonical(double_description(&raw, dim));
        // re-derive minimal generators from the facets
        let gens = canonical(double_description(&covectors, dim));
        let ginv = linalg::inverse(lattice.gram())
            .ok_or_else(|| Error::invariant("gram matrix not invertible"))?;
        let mut facets: Vec<Vec<Rational>> = covectors
            .iter()
            .map(|y| rational::primitive(&linalg::mat_vec(&ginv, y)))
            .collect();
        facets.sort();
        facets.dedup();
        let dimension = if gens.is_empty() { 0 } else { linalg::rank(&gens) };
        let to_class =
            |v: Vec<Rational>| NumClass::new(lattice, v).expect("length checked by construction");
        let cone = RationalCone {
            lattice: Arc::clone(lattice),
            generators: gens.into_iter().map(to_class).collect(),
            facets: facets.into_iter().map(to_class).collect(),
            dimension,
        };
        cone.check_consistency()?;
        Ok(cone)
    }

    fn check_consistency(&self) -> Result<()> {
        for g in &self.generators {
            for f in &self.facets {
                if g.pair(f)?.is_negative() {
                    return Err(Error::invariant(format!(
                        "generator {g} violates facet {f}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> &Arc<NsLattice> {
        &self.lattice
    }

    pub fn generators(&self) -> &[NumClass] {
        &self.generators
    }

    pub fn facets(&self) -> &[NumClass] {
        &self.facets
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension == self.lattice.rank()
    }

    /// Dual cone `{y : x · y ≥ 0 for all x in self}`.
    pub fn dual(&self) -> RationalCone {
        RationalCone {
            lattice: Arc::clone(&self.lattice),
            generators: self.facets.clone(),
            facets: self.generators.clone(),
            dimension: if self.facets.is_empty() {
                0
            } else {
                linalg::rank(&self.facets.iter().map(|f| f.coords().to_vec()).collect())
            },
        }
    }

    pub fn contains(&self, x: &NumClass, mode: Membership) -> Result<bool> {
        x.same_lattice(&NumClass::zero(&self.lattice))?;
        match mode {
            Membership::Closed => {
                for f in &self.facets {
                    if x.pair(f)?.is_negative() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Membership::Interior => {
                if !self.is_full_dimensional() {
                    return Err(Error::ConeNotFullDimensional);
                }
                for f in &self.facets {
                    if !x.pair(f)?.is_positive() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// A primitive integral point `H` in the interior with `H · d = 0`, if
    /// the hyperplane `d^⊥` meets the interior at all.
    ///
    /// Strictly positive combinations of the generators are exactly the
    /// interior, so the hyperplane meets it iff `d` pairs to zero with every
    /// generator or takes both signs on them.
    pub fn orthogonal_interior_point(&self, d: &NumClass) -> Result<Option<NumClass>> {
        if !self.is_full_dimensional() {
            return Err(Error::ConeNotFullDimensional);
        }
        let values: Vec<Rational> =
            self.generators.iter().map(|g| g.pair(d)).collect::<Result<_>>()?;
        let mut base = NumClass::zero(&self.lattice);
        for g in &self.generators {
            base = base.add(g)?;
        }
        let total = base.pair(d)?;
        if total.is_zero() {
            return Ok(Some(base.primitive()));
        }
        // push the barycentre across the hyperplane along an opposite-sign generator
        let Some(k) = values
            .iter()
            .position(|v| !v.is_zero() && v.is_negative() != total.is_negative())
        else {
            return Ok(None);
        };
        let t = -&total / &values[k];
        Ok(Some(base.add_scaled(&self.generators[k], &t)?.primitive()))
    }
}

/// `(1 - t)·a + t·b` for `0 ≤ t ≤ 1`.
pub fn segment(a: &NumClass, b: &NumClass, t: &Rational) -> Result<NumClass> {
    if t.is_negative() || *t > Rational::from_integer(1.into()) {
        return Err(Error::precondition(format!("segment parameter {t} outside [0, 1]")));
    }
    let diff = b.sub(a)?;
    a.add_scaled(&diff, t)
}

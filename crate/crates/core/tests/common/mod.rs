#![allow(dead_code)]

use std::sync::Arc;

use movstab_core::{NsLattice, NumClass, RationalCone, SheafClass, SubsheafFamily};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn cls(l: &Arc<NsLattice>, v: &[i64]) -> NumClass {
    NumClass::from_ints(l, v).unwrap()
}

/// A lattice with its effective cone and movable (= nef) cone.
pub struct Surface {
    pub lattice: Arc<NsLattice>,
    pub eff: RationalCone,
    pub mov: RationalCone,
}

/// P², P¹×P¹, the blow-up of P² in one point and in two points.
pub fn surface(kind: usize) -> Surface {
    let (l, gens): (Arc<NsLattice>, Vec<Vec<i64>>) = match kind % 4 {
        0 => (NsLattice::from_ints(&[&[1]], &["H"]).unwrap(), vec![vec![1]]),
        1 => (
            NsLattice::from_ints(&[&[0, 1], &[1, 0]], &["F1", "F2"]).unwrap(),
            vec![vec![1, 0], vec![0, 1]],
        ),
        2 => (
            NsLattice::from_ints(&[&[1, 0], &[0, -1]], &["H", "E"]).unwrap(),
            vec![vec![0, 1], vec![1, -1]],
        ),
        _ => (
            NsLattice::from_ints(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]], &["H", "E1", "E2"])
                .unwrap(),
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, -1, -1]],
        ),
    };
    let gens: Vec<NumClass> = gens.iter().map(|g| cls(&l, g)).collect();
    let eff = RationalCone::from_generators(&gens).unwrap();
    let mov = eff.dual();
    Surface { lattice: l, eff, mov }
}

pub fn random_class(rng: &mut ChaCha8Rng, l: &Arc<NsLattice>, bound: i64) -> NumClass {
    let v: Vec<i64> = (0..l.rank()).map(|_| rng.gen_range(-bound..=bound)).collect();
    cls(l, &v)
}

/// Non-zero non-negative integer combination of the cone's generators.
pub fn random_in_cone(rng: &mut ChaCha8Rng, cone: &RationalCone, bound: i64) -> NumClass {
    loop {
        let mut x = NumClass::zero(cone.lattice());
        for g in cone.generators() {
            x = x.add(&g.scale(&q(rng.gen_range(0..=bound)))).unwrap();
        }
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_sheaf(rng: &mut ChaCha8Rng, l: &Arc<NsLattice>, rank: u32) -> SheafClass {
    SheafClass::new(rank, random_class(rng, l, 3), q(rng.gen_range(-4..=4))).unwrap()
}

/// Up to `max_members` members of rank `1..=rank E` and a random DAG (or no
/// DAG at all, one time in five).
pub fn random_family(rng: &mut ChaCha8Rng, l: &Arc<NsLattice>, max_members: usize) -> SubsheafFamily {
    let r = rng.gen_range(2..=4u32);
    let top = random_sheaf(rng, l, r);
    let n = rng.gen_range(0..=max_members);
    let members: Vec<SheafClass> = (0..n)
        .map(|_| {
            let rank = rng.gen_range(1..=r);
            random_sheaf(rng, l, rank)
        })
        .collect();
    let contains = if rng.gen_ratio(1, 5) {
        None
    } else {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if members[i].rank() < members[j].rank() && rng.gen_ratio(2, 5) {
                    edges.push((i, j));
                }
            }
        }
        Some(edges)
    };
    SubsheafFamily::new(top, members, contains, false).unwrap()
}

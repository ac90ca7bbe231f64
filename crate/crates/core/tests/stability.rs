mod common;

use common::*;
use movstab_core::{
    segment, tensor_class, Membership, NumClass, SheafClass, Stability, SubsheafFamily, Subobject,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every chain `0 ⊊ F_1 ⊊ … ⊊ E` through strict-rank members, by brute force.
fn all_chains(fam: &SubsheafFamily) -> Vec<Vec<Subobject>> {
    fn extend(fam: &SubsheafFamily, prefix: &mut Vec<Subobject>, out: &mut Vec<Vec<Subobject>>) {
        let last = match prefix.last() {
            Some(Subobject::Member(i)) => Some(*i),
            _ => None,
        };
        let mut full = prefix.clone();
        full.push(Subobject::Top);
        out.push(full);
        let r = fam.top().rank();
        for j in 0..fam.members().len() {
            if fam.members()[j].rank() >= r {
                continue;
            }
            if let Some(i) = last {
                if !fam.is_contained(i, j) {
                    continue;
                }
            }
            prefix.push(Subobject::Member(j));
            extend(fam, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(fam, &mut Vec::new(), &mut out);
    out
}

fn keys(fam: &SubsheafFamily, chain: &[Subobject], a: &NumClass) -> Vec<(Q, u32)> {
    let mut prev: Option<&SheafClass> = None;
    chain
        .iter()
        .map(|s| {
            let c = fam.class_of(*s);
            let (r, c1) = match prev {
                None => (c.rank(), c.c1().clone()),
                Some(p) => (c.rank() - p.rank(), c.c1().sub(p.c1()).unwrap()),
            };
            prev = Some(c);
            (c1.pair(a).unwrap() / q(r.into()), c.rank())
        })
        .collect()
}

/// Lexicographically largest key sequence; among its chains the smallest
/// index path, and whether it is unique.
fn hn_oracle(fam: &SubsheafFamily, a: &NumClass) -> (Vec<Subobject>, bool) {
    let chains = all_chains(fam);
    let scored: Vec<_> = chains.iter().map(|c| (keys(fam, c, a), c)).collect();
    let best = scored.iter().map(|(k, _)| k).max().unwrap().clone();
    let mut winners: Vec<&Vec<Subobject>> =
        scored.iter().filter(|(k, _)| *k == best).map(|(_, c)| *c).collect();
    winners.sort();
    (winners[0].clone(), winners.len() > 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hn_matches_exhaustive_search(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = surface(rng.gen_range(0..4));
        let fam = random_family(&mut rng, &s.lattice, 6);
        let a = random_in_cone(&mut rng, &s.mov, 3);
        let st = Stability::new(&fam, &s.mov).unwrap();
        let hn = st.hn_filtration(&a).unwrap();
        let (path, ambiguous) = hn_oracle(&fam, &a);
        prop_assert_eq!(&hn.steps, &path);
        prop_assert_eq!(hn.ambiguous, ambiguous);
        for w in hn.quotients.windows(2) {
            prop_assert!(w[0].slope >= w[1].slope);
        }
        // the first step realizes μ^max among chain-eligible nodes
        let first = hn.quotients[0].slope.clone();
        for i in fam.strict_members() {
            prop_assert!(fam.members()[i].slope(&a).unwrap() <= first);
        }
    }

    #[test]
    fn semistability_is_scale_invariant(seed in any::<u64>(), k in 1i64..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = surface(rng.gen_range(0..4));
        let fam = random_family(&mut rng, &s.lattice, 6);
        let a = random_in_cone(&mut rng, &s.mov, 3);
        let st = Stability::new(&fam, &s.mov).unwrap();
        let ka = a.scale(&q(k));
        prop_assert_eq!(st.is_semistable(&a).unwrap(), st.is_semistable(&ka).unwrap());
        prop_assert_eq!(st.is_stable(&a).unwrap(), st.is_stable(&ka).unwrap());
        prop_assert_eq!(st.mu_max(&a).unwrap().value * q(k), st.mu_max(&ka).unwrap().value);
    }

    #[test]
    fn segment_matches_grid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = surface(rng.gen_range(0..4));
        let fam = random_family(&mut rng, &s.lattice, 6);
        let a = random_in_cone(&mut rng, &s.mov, 3);
        let b = random_in_cone(&mut rng, &s.mov, 3);
        let st = Stability::new(&fam, &s.mov).unwrap();
        let report = st.segment_stability(&a, &b).unwrap();
        for k in 0..=64 {
            let t = qf(k, 64);
            let x = segment(&a, &b, &t).unwrap();
            let semi = report.semistable.as_ref().is_some_and(|i| i.contains(&t));
            let stable = report.stable.as_ref().is_some_and(|i| i.contains(&t));
            prop_assert_eq!(semi, st.is_semistable(&x).unwrap());
            prop_assert_eq!(stable, st.is_stable(&x).unwrap());
        }
        // semistable at both ends forces semistable throughout
        if st.is_semistable(&a).unwrap() && st.is_semistable(&b).unwrap() {
            let i = report.semistable.unwrap();
            prop_assert!(i.contains(&q(0)) && i.contains(&q(1)));
        }
    }

    #[test]
    fn openness_is_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = surface(rng.gen_range(0..4));
        let fam = random_family(&mut rng, &s.lattice, 6);
        let a = random_in_cone(&mut rng, &s.mov, 3);
        let b = random_in_cone(&mut rng, &s.mov, 3);
        let st = Stability::new(&fam, &s.mov).unwrap();
        prop_assume!(st.is_stable(&a).unwrap());
        let e = st.openness_epsilon(&a, &b).unwrap();
        prop_assert!(e.is_positive() && e <= q(1));
        for _ in 0..20 {
            let t = &e * qf(rng.gen_range(0..1000), 1000);
            prop_assert!(st.is_stable(&segment(&a, &b, &t).unwrap()).unwrap());
        }
    }

    #[test]
    fn saturation_does_not_lower_slope(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = surface(rng.gen_range(0..4));
        let rank = rng.gen_range(1..4);
        let f = random_sheaf(&mut rng, &s.lattice, rank);
        let d = random_in_cone(&mut rng, &s.eff, 3);
        let sat = SheafClass::new(f.rank(), f.c1().add(&d).unwrap(), q(0)).unwrap();
        let a = random_in_cone(&mut rng, &s.mov, 3);
        prop_assert!(f.slope(&a).unwrap() <= sat.slope(&a).unwrap());
    }

    #[test]
    fn tensor_slopes_add(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = surface(rng.gen_range(0..4));
        let fe = random_family(&mut rng, &s.lattice, 3);
        let ff = random_family(&mut rng, &s.lattice, 3);
        let a = random_in_cone(&mut rng, &s.mov, 3);
        let prod = fe.tensor_product(&ff).unwrap();
        let t = tensor_class(fe.top(), ff.top()).unwrap();
        prop_assert_eq!(
            t.slope(&a).unwrap(),
            fe.top().slope(&a).unwrap() + ff.top().slope(&a).unwrap()
        );
        let me = Stability::new(&fe, &s.mov).unwrap().mu_max(&a).unwrap().value;
        let mf = Stability::new(&ff, &s.mov).unwrap().mu_max(&a).unwrap().value;
        let mp = Stability::new(&prod, &s.mov).unwrap().mu_max(&a).unwrap().value;
        prop_assert_eq!(mp, me + mf);
    }
}

#[test]
fn non_movable_polarization_is_rejected() {
    let s = surface(2);
    let fam = SubsheafFamily::trivial(SheafClass::trivial(&s.lattice, 2).unwrap());
    let st = Stability::new(&fam, &s.mov).unwrap();
    let e = cls(&s.lattice, &[0, 1]);
    assert!(!s.mov.contains(&e, Membership::Closed).unwrap());
    assert!(st.is_semistable(&e).is_err());
}

#[test]
fn zero_polarization_makes_everything_semistable() {
    let s = surface(1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let fam = random_family(&mut rng, &s.lattice, 6);
        let st = Stability::new(&fam, &s.mov).unwrap();
        let zero = NumClass::zero(&s.lattice);
        assert!(st.is_semistable(&zero).unwrap());
        assert!(st.mu_max(&zero).unwrap().value.is_zero());
    }
}

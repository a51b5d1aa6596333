//! Property tests over randomly shaped credal sets: hull membership of
//! convex mixtures and sublinearity of the evaluator.

use credal::measure::{CredalSet, FiniteSupport, ProbabilityMeasure, ValueTable};
use credal::polytope::{is_member, PointSet};
use credal::{hull, Rat, Scalar};
use proptest::prelude::*;

fn grid(n: usize) -> FiniteSupport<Rat> {
    FiniteSupport::scalar((0..n as i64).map(Rat::from_int).collect()).unwrap()
}

fn normalize(parts: &[u8]) -> Option<Vec<Rat>> {
    let total: i64 = parts.iter().map(|&p| p as i64).sum();
    if total == 0 {
        return None;
    }
    Some(parts.iter().map(|&p| Rat::ratio(p as i64, total)).collect())
}

fn credal_from(n: usize, gens: &[Vec<u8>]) -> Option<CredalSet<Rat>> {
    let g = grid(n);
    let measures = gens
        .iter()
        .map(|parts| {
            normalize(parts).map(|w| ProbabilityMeasure::new(g.clone(), w).unwrap())
        })
        .collect::<Option<Vec<_>>>()?;
    Some(CredalSet::new(measures).unwrap())
}

fn instances() -> impl Strategy<Value = (usize, Vec<Vec<u8>>, Vec<u8>, Vec<i8>, Vec<i8>)> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u8..16, n), 1..4).prop_flat_map(
            move |gens| {
                let k = gens.len();
                (
                    Just(n),
                    Just(gens),
                    prop::collection::vec(0u8..16, k),
                    prop::collection::vec(-16i8..=16, n),
                    prop::collection::vec(-16i8..=16, n),
                )
            },
        )
    })
}

fn table(n: usize, vals: &[i8]) -> ValueTable<Rat> {
    ValueTable::new(
        grid(n),
        vals.iter().map(|&v| Rat::ratio(v as i64, 8)).collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn convex_mixtures_stay_inside((n, gens, mix, _, _) in instances()) {
        let Some(credal) = credal_from(n, &gens) else { return Ok(()) };
        let cloud = hull::weight_cloud(&credal);
        for g in credal.generators() {
            prop_assert!(is_member(g.weights(), &cloud).unwrap());
        }
        if let Some(coeffs) = normalize(&mix[..credal.generators().len()]) {
            let mut mixed = vec![Rat::zero(); n];
            for (c, g) in coeffs.iter().zip(credal.generators()) {
                for (m, w) in mixed.iter_mut().zip(g.weights()) {
                    *m += c.clone() * w.clone();
                }
            }
            prop_assert!(is_member(&mixed, &cloud).unwrap());
        }
    }

    #[test]
    fn evaluator_is_sublinear((n, gens, _, fv, gv) in instances()) {
        let Some(credal) = credal_from(n, &gens) else { return Ok(()) };
        let f = table(n, &fv);
        let g = table(n, &gv);
        let vf = credal.sup_expect(&f).unwrap();
        let vg = credal.sup_expect(&g).unwrap();
        let vsum = credal.sup_expect(&f.add(&g).unwrap()).unwrap();
        prop_assert!(vsum <= vf.clone() + vg.clone());
        // positive homogeneity with lambda = 3/2
        let lam = Rat::ratio(3, 2);
        let vs = credal.sup_expect(&f.scale(&lam)).unwrap();
        prop_assert_eq!(vs, lam * vf);
    }

    #[test]
    fn vertices_preserve_the_hull((n, gens, _, _, _) in instances()) {
        let Some(credal) = credal_from(n, &gens) else { return Ok(()) };
        let cloud = hull::weight_cloud(&credal);
        let verts = credal::polytope::vertices(&cloud).unwrap();
        prop_assert!(credal::polytope::hulls_equal(&cloud, &verts).unwrap());
        prop_assert!(verts.len() <= PointSet::new(cloud.points().to_vec()).unwrap().dedup().len());
    }
}

//! Credal-set level geometry: generator weight vectors are points of a
//! polytope in the probability simplex, so hull questions about credal sets
//! reduce to the polytope module. A separating functional in weight space is
//! itself a value table on the support (E_P[f] is the dot product of the
//! weight vector with the table), which is what makes refutations
//! self-checking.

use crate::error::{Error, Result};
use crate::measure::{CredalSet, ProbabilityMeasure, ValueTable};
use crate::polytope::{self, PointSet};
use crate::scalar::Scalar;

/// The generator weight vectors as a point cloud.
pub fn weight_cloud<T: Scalar>(m: &CredalSet<T>) -> PointSet<T> {
    PointSet::new(
        m.generators()
            .iter()
            .map(|g| g.weights().to_vec())
            .collect(),
    )
    .expect("credal set has at least one generator")
}

/// Reduce a credal set to the extreme points of its hull.
pub fn credal_vertices<T: Scalar>(m: &CredalSet<T>) -> Result<CredalSet<T>> {
    let verts = polytope::vertices(&weight_cloud(m))?;
    let gens = verts
        .points()
        .iter()
        .map(|w| ProbabilityMeasure::new(m.support().clone(), w.clone()))
        .collect::<Result<Vec<_>>>()?;
    CredalSet::new(gens)
}

/// A table on which two credal sets' sublinear expectations provably differ.
#[derive(Debug, Clone)]
pub struct SeparatingTable<T: Scalar> {
    pub table: ValueTable<T>,
    pub lhs_value: T,
    pub rhs_value: T,
}

/// Semantic equality of two credal sets on the same support: conv hulls of
/// the generator families coincide.
pub fn credal_hulls_equal<T: Scalar>(a: &CredalSet<T>, b: &CredalSet<T>) -> Result<bool> {
    Ok(credal_hulls_equal_witness(a, b)?.is_none())
}

/// `None` when semantically equal; otherwise a separating table with the two
/// differing sup-expectations (lhs = value under `a`, rhs = under `b`).
pub fn credal_hulls_equal_witness<T: Scalar>(
    a: &CredalSet<T>,
    b: &CredalSet<T>,
) -> Result<Option<SeparatingTable<T>>> {
    if a.support() != b.support() {
        return Err(Error::SupportMismatch);
    }
    let ca = weight_cloud(a);
    let cb = weight_cloud(b);
    match polytope::hulls_equal_witness(&ca, &cb)? {
        None => Ok(None),
        Some((_, cert)) => {
            let table = ValueTable::new(a.support().clone(), cert.normal)?;
            let lhs_value = a.sup_expect(&table)?;
            let rhs_value = b.sup_expect(&table)?;
            Ok(Some(SeparatingTable { table, lhs_value, rhs_value }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::FiniteSupport;
    use crate::scalar::Rat;

    #[test]
    fn separating_table_differs() {
        let s = FiniteSupport::scalar(vec![Rat::from_int(0), Rat::from_int(1)]).unwrap();
        let a = CredalSet::all_diracs(s.clone()).unwrap();
        let b = CredalSet::new(vec![ProbabilityMeasure::dirac(s, 0).unwrap()]).unwrap();
        let w = credal_hulls_equal_witness(&a, &b).unwrap().unwrap();
        assert_ne!(w.lhs_value, w.rhs_value);
        // re-evaluating the witness reproduces the recorded values
        assert_eq!(a.sup_expect(&w.table).unwrap(), w.lhs_value);
        assert_eq!(b.sup_expect(&w.table).unwrap(), w.rhs_value);
    }

    #[test]
    fn reduction_preserves_hull() {
        let s = FiniteSupport::scalar(vec![Rat::from_int(0), Rat::from_int(1)]).unwrap();
        let d0 = ProbabilityMeasure::dirac(s.clone(), 0).unwrap();
        let d1 = ProbabilityMeasure::dirac(s.clone(), 1).unwrap();
        let mix = ProbabilityMeasure::new(s, vec![Rat::ratio(1, 2), Rat::ratio(1, 2)]).unwrap();
        let m = CredalSet::new(vec![d0, d1, mix]).unwrap();
        let v = credal_vertices(&m).unwrap();
        assert_eq!(v.generators().len(), 2);
        assert!(credal_hulls_equal(&m, &v).unwrap());
    }
}

//! Maximal-distribution detection with extraction of the supporting point
//! set, the one-dimensional G-map machinery, and the nested-identity
//! verifier built on the uncertainty witness.

use crate::error::{Error, Result};
use crate::hull;
use crate::independence::{peng_product, product_table, nested_expect, ProductOrder};
use crate::measure::{ProbabilityMeasure, ValueTable};
use crate::rng::SplitMix64;
use crate::scalar::{Mode, Scalar};
use crate::space::{uncertainty_witness, Distribution};

/// Verdict of the maximality check. When maximal, `gamma` is the set of grid
/// points whose Diracs span the hull; otherwise `violator` is an extreme
/// measure of the hull that is not a Dirac.
#[derive(Debug, Clone)]
pub struct MaximalityCertificate<T: Scalar> {
    pub maximal: bool,
    pub mode: Mode,
    pub gamma: Option<Vec<Vec<T>>>,
    pub violator: Option<ProbabilityMeasure<T>>,
}

/// A distribution is maximal iff every extreme point of its credal hull is a
/// Dirac measure; on a finite grid every subset is closed, so the extracted
/// point set needs no closure step.
pub fn is_maximal<T: Scalar>(d: &Distribution<T>) -> Result<MaximalityCertificate<T>> {
    let verts = hull::credal_vertices(d.credal())?;
    let mut gamma_indices = Vec::new();
    for v in verts.generators() {
        match v.is_dirac() {
            Some(idx) => gamma_indices.push(idx),
            None => {
                return Ok(MaximalityCertificate {
                    maximal: false,
                    mode: T::MODE,
                    gamma: None,
                    violator: Some(v.clone()),
                })
            }
        }
    }
    gamma_indices.sort_unstable();
    let gamma = gamma_indices
        .into_iter()
        .map(|i| d.grid().point(i).to_vec())
        .collect();
    Ok(MaximalityCertificate {
        maximal: true,
        mode: T::MODE,
        gamma: Some(gamma),
        violator: None,
    })
}

/// The scaled-witness functional a -> a+ - eps * a-.
#[derive(Debug, Clone, PartialEq)]
pub struct GMap<T: Scalar> {
    epsilon: T,
}

impl<T: Scalar> GMap<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        if epsilon < T::zero() || epsilon >= T::one() {
            return Err(Error::InvalidInput(format!(
                "epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        Ok(GMap { epsilon })
    }

    pub fn epsilon(&self) -> &T {
        &self.epsilon
    }

    pub fn apply(&self, a: &T) -> T {
        a.pos_part() - self.epsilon.clone() * a.neg_part()
    }

    /// Closed form of the n-fold composition: a+ - eps^n * a-.
    pub fn iterate(&self, a: &T, n: u32) -> T {
        assert!(n >= 1);
        let mut eps_n = T::one();
        for _ in 0..n {
            eps_n = eps_n * self.epsilon.clone();
        }
        a.pos_part() - eps_n * a.neg_part()
    }
}

/// One failed identity in a verification report.
#[derive(Debug, Clone)]
pub struct IdentityFailure {
    pub psi_index: usize,
    pub identity: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct NestedIdentityReport<T: Scalar> {
    pub mode: Mode,
    pub epsilon: T,
    pub psi_checked: usize,
    /// Truncation depth chosen for the limit identity from the error bound
    /// eps^n * (upper expectation of psi-).
    pub n_for_limit: u32,
    pub failures: Vec<IdentityFailure>,
}

impl<T: Scalar> NestedIdentityReport<T> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn limit_tol<T: Scalar>() -> T {
    T::ratio(1, 1_000_000_000)
}

/// Verify the nested-identity chain on a mutually independent pair: the
/// witness-product identities, their n-fold iterates, the positive-part
/// collapse in the limit, the centered-positive-part identity, and the
/// capacity collapse of strict upper-level sets.
///
/// Deterministic psi shapes (identity, |y|, y+, y-, shifted indicators) are
/// checked first, then `psi_samples` random tables.
pub fn verify_nested_identities<T: Scalar>(
    d_x: &Distribution<T>,
    d_y: &Distribution<T>,
    psi_samples: usize,
    n_max: u32,
    seed: u64,
) -> Result<NestedIdentityReport<T>> {
    if !d_x.has_distributional_uncertainty() {
        return Err(Error::HypothesisViolated(
            "X-law has no distributional uncertainty".into(),
        ));
    }
    let prod_yx = peng_product(d_x, d_y, ProductOrder::YFromX)?;
    let prod_xy = peng_product(d_x, d_y, ProductOrder::XFromY)?;
    if !hull::credal_hulls_equal(prod_yx.credal(), prod_xy.credal())? {
        return Err(Error::HypothesisViolated(
            "the two product orders have different hulls".into(),
        ));
    }

    let witness = uncertainty_witness(d_x)?;
    let g = GMap::new(witness.epsilon.clone())?;
    let tol = limit_tol::<T>();

    // psi family: deterministic shapes plus seeded random tables
    let mut psis: Vec<ValueTable<T>> = Vec::new();
    let y0 = |p: &[T]| p[0].clone();
    psis.push(ValueTable::from_fn(d_y.grid(), |p| y0(p)));
    psis.push(ValueTable::from_fn(d_y.grid(), |p| y0(p).abs()));
    psis.push(ValueTable::from_fn(d_y.grid(), |p| y0(p).pos_part()));
    psis.push(ValueTable::from_fn(d_y.grid(), |p| y0(p).neg_part()));
    for i in 0..d_y.grid().len() {
        let ind = ValueTable::indicator(d_y.grid(), &[i])?;
        psis.push(ind.add(&ValueTable::constant(d_y.grid(), T::ratio(-1, 2)))?);
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..psi_samples {
        psis.push(crate::space::random_table(d_y.grid(), &mut rng));
    }

    let psi_checked = psis.len();
    let mut n_for_limit = 1;
    let results = crate::par::map_indexed(psis.len(), |k| {
        check_psi(&psis[k], k, d_x, d_y, &witness.phi_star, &g, n_max, &tol)
    });
    let mut failures = Vec::new();
    for r in results {
        let (fs, n) = r?;
        failures.extend(fs);
        n_for_limit = n_for_limit.max(n);
    }

    Ok(NestedIdentityReport {
        mode: T::MODE,
        epsilon: witness.epsilon,
        psi_checked,
        n_for_limit,
        failures,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_psi<T: Scalar>(
    psi: &ValueTable<T>,
    psi_index: usize,
    d_x: &Distribution<T>,
    d_y: &Distribution<T>,
    phi_star: &ValueTable<T>,
    g: &GMap<T>,
    n_max: u32,
    tol: &T,
) -> Result<(Vec<IdentityFailure>, u32)> {
    let mut failures = Vec::new();
    let fail = |identity: &'static str, lhs: &T, rhs: &T, failures: &mut Vec<IdentityFailure>| {
        failures.push(IdentityFailure {
            psi_index,
            identity,
            detail: format!("lhs = {lhs}, rhs = {rhs}"),
        });
    };

    // exact in rational mode, 1e-9 absolute in float mode
    let eq_tol = match T::MODE {
        Mode::Rational => T::zero(),
        Mode::Float => T::from_f64(1e-9),
    };

    let e_psi = d_y.eval(psi)?;
    let phi_psi = product_table(d_x.grid(), d_y.grid(), |x, y| {
        phi_star.values()[d_x.grid().find(x).expect("grid point")].clone()
            * psi.values()[d_y.grid().find(y).expect("grid point")].clone()
    });

    // witness-product evaluated through the Y-from-X nesting
    let lhs1 = nested_expect(d_x, d_y, &phi_psi, ProductOrder::YFromX)?;
    let rhs1 = g.apply(&e_psi);
    if !lhs1.close_to(&rhs1, &eq_tol) {
        fail("witness-product-yx", &lhs1, &rhs1, &mut failures);
    }

    // same product through the X-from-Y nesting
    let lhs2 = nested_expect(d_x, d_y, &phi_psi, ProductOrder::XFromY)?;
    let g_psi = psi.map(|v| g.apply(v));
    let rhs2 = d_y.eval(&g_psi)?;
    if !lhs2.close_to(&rhs2, &eq_tol) {
        fail("witness-product-xy", &lhs2, &rhs2, &mut failures);
    }

    // the two routes agree
    if !lhs1.close_to(&lhs2, &eq_tol) {
        fail("order-agreement", &lhs1, &lhs2, &mut failures);
    }

    // iterated map commutes with the evaluator
    for n in 1..=n_max {
        let mut iterated = psi.clone();
        for _ in 0..n {
            iterated = iterated.map(|v| g.apply(v));
        }
        let lhs = d_y.eval(&iterated)?;
        let rhs = g.iterate(&e_psi, n);
        if !lhs.close_to(&rhs, &eq_tol) {
            fail("iterate-commutation", &lhs, &rhs, &mut failures);
            break;
        }
    }

    // limit identity: upper expectation of psi+ equals (upper expectation)+,
    // with the truncation depth justified by eps^n * E[psi-].
    let bound = d_y.eval(&psi.map(|v| v.neg_part()))?;
    let eps_f = g.epsilon().to_f64();
    let n_limit: u32 = if eps_f <= 0.0 {
        1
    } else {
        let b = bound.to_f64().max(1.0);
        ((tol.to_f64() / b).ln() / eps_f.ln()).ceil().max(1.0) as u32
    };
    let lhs5 = d_y.eval(&psi.map(|v| v.pos_part()))?;
    let rhs5 = e_psi.pos_part();
    if !lhs5.close_to(&rhs5, tol) {
        fail("positive-part-collapse", &lhs5, &rhs5, &mut failures);
    }

    // centered positive part vanishes exactly
    let centered = psi.add(&ValueTable::constant(d_y.grid(), -e_psi.clone()))?;
    let lhs6 = d_y.eval(&centered.map(|v| v.pos_part()))?;
    let zero = T::zero();
    if !lhs6.close_to(&zero, &eq_tol) {
        fail("centered-positive-part", &lhs6, &zero, &mut failures);
    }

    // capacity collapse: the strict upper-level set of psi above its upper
    // expectation carries zero capacity
    let above: Vec<usize> = (0..d_y.grid().len())
        .filter(|&i| psi.values()[i] > e_psi)
        .collect();
    let cap = d_y.credal().capacity(&above)?;
    if !cap.close_to(&zero, &eq_tol) {
        fail("capacity-collapse", &cap, &zero, &mut failures);
    }

    Ok((failures, n_limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{CredalSet, FiniteSupport};
    use crate::scalar::Rat;

    fn r(n: i64, d: i64) -> Rat {
        Rat::ratio(n, d)
    }

    fn maximal_dist(points: &[i64]) -> Distribution<Rat> {
        let grid =
            FiniteSupport::scalar(points.iter().map(|&p| Rat::from_int(p)).collect()).unwrap();
        Distribution::new(CredalSet::all_diracs(grid).unwrap())
    }

    fn p1p2_dist() -> Distribution<Rat> {
        let grid = FiniteSupport::scalar(vec![
            Rat::from_int(-1),
            Rat::from_int(0),
            Rat::from_int(1),
        ])
        .unwrap();
        let p1 =
            ProbabilityMeasure::new(grid.clone(), vec![r(1, 4), r(1, 2), r(1, 4)]).unwrap();
        let p2 = ProbabilityMeasure::new(grid, vec![r(2, 5), r(1, 5), r(2, 5)]).unwrap();
        Distribution::new(CredalSet::new(vec![p1, p2]).unwrap())
    }

    #[test]
    fn dirac_family_is_maximal() {
        let d = maximal_dist(&[3, 7]);
        let cert = is_maximal(&d).unwrap();
        assert!(cert.maximal);
        let gamma = cert.gamma.unwrap();
        assert_eq!(gamma, vec![vec![Rat::from_int(3)], vec![Rat::from_int(7)]]);
    }

    #[test]
    fn mixed_singleton_is_not_maximal() {
        let grid = FiniteSupport::scalar(vec![Rat::from_int(0), Rat::from_int(1)]).unwrap();
        let p = ProbabilityMeasure::new(grid, vec![r(1, 2), r(1, 2)]).unwrap();
        let d = Distribution::new(CredalSet::new(vec![p.clone()]).unwrap());
        let cert = is_maximal(&d).unwrap();
        assert!(!cert.maximal);
        assert_eq!(cert.violator.unwrap().weights(), p.weights());
    }

    #[test]
    fn p1p2_is_not_maximal() {
        let cert = is_maximal(&p1p2_dist()).unwrap();
        assert!(!cert.maximal);
        let v = cert.violator.unwrap();
        assert!(v.is_dirac().is_none());
    }

    #[test]
    fn maximal_eval_is_pointwise_sup() {
        // the defining identity: evaluation equals max over gamma
        let d = maximal_dist(&[-2, 0, 3]);
        let cert = is_maximal(&d).unwrap();
        let gamma = cert.gamma.unwrap();
        let mut rng = SplitMix64::new(77);
        for _ in 0..200 {
            let phi = crate::space::random_table(d.grid(), &mut rng);
            let by_eval = d.eval(&phi).unwrap();
            let by_sup = gamma
                .iter()
                .map(|p| phi.values()[d.grid().find(p).unwrap()].clone())
                .max()
                .unwrap();
            assert_eq!(by_eval, by_sup);
        }
    }

    #[test]
    fn maximality_closed_under_pushforward() {
        let d = maximal_dist(&[-1, 0, 2]);
        let images: Vec<Vec<Rat>> = d
            .grid()
            .points()
            .iter()
            .map(|p| vec![p[0].clone() * p[0].clone()])
            .collect();
        let pd = d.pushforward(&images).unwrap();
        let cert = is_maximal(&pd).unwrap();
        assert!(cert.maximal);
        let gamma = cert.gamma.unwrap();
        assert_eq!(gamma.len(), 3); // {1, 0, 4}
    }

    #[test]
    fn g_map_values() {
        let g = GMap::new(r(1, 2)).unwrap();
        assert_eq!(g.apply(&Rat::from_int(2)), Rat::from_int(2));
        assert_eq!(g.apply(&Rat::from_int(-2)), Rat::from_int(-1));
        for eps_num in 0..2 {
            let g = GMap::new(r(eps_num, 2)).unwrap();
            assert_eq!(g.apply(&Rat::zero()), Rat::zero());
        }
    }

    #[test]
    fn g_iterate_closed_form_matches_composition() {
        let g = GMap::new(r(1, 2)).unwrap();
        assert_eq!(g.iterate(&Rat::from_int(-1), 3), r(-1, 8));
        assert_eq!(g.iterate(&Rat::from_int(5), 4), Rat::from_int(5));
        let g0 = GMap::new(Rat::zero()).unwrap();
        assert_eq!(g0.iterate(&Rat::from_int(-1), 1), Rat::zero());

        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let a = r(rng.next_range_i64(-32, 32), 8);
            let eps = r(rng.next_range_i64(0, 7), 8);
            let g = GMap::new(eps).unwrap();
            for n in 1..=4u32 {
                let mut composed = a.clone();
                for _ in 0..n {
                    composed = g.apply(&composed);
                }
                assert_eq!(g.iterate(&a, n), composed);
            }
        }
    }

    #[test]
    fn g_iterate_error_bound() {
        // |G^n(a) - a+| <= eps^n * a-
        let g = GMap::new(r(3, 4)).unwrap();
        for k in -16..=16i64 {
            let a = r(k, 4);
            for n in 1..=6u32 {
                let diff = (g.iterate(&a, n) - a.pos_part()).abs();
                let mut eps_n = Rat::one();
                for _ in 0..n {
                    eps_n = eps_n * r(3, 4);
                }
                assert!(diff <= eps_n * a.neg_part());
            }
        }
    }

    #[test]
    fn epsilon_domain() {
        assert!(GMap::new(Rat::one()).is_err());
        assert!(GMap::new(r(-1, 2)).is_err());
        assert!(GMap::new(Rat::zero()).is_ok());
    }

    #[test]
    fn nested_identities_pass_on_maximal_pair() {
        let dx = maximal_dist(&[0, 1]);
        let dy = maximal_dist(&[-1, 1]);
        let report = verify_nested_identities(&dx, &dy, 50, 4, 123).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(report.epsilon < Rat::one());
    }

    #[test]
    fn nested_identities_trivial_when_y_constant() {
        let dx = maximal_dist(&[0, 1]);
        let dy = maximal_dist(&[5]);
        let report = verify_nested_identities(&dx, &dy, 30, 3, 7).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
    }

    #[test]
    fn nested_identities_reject_dependent_pair() {
        let d = p1p2_dist();
        let err = verify_nested_identities(&d, &d, 10, 2, 1).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));
    }
}

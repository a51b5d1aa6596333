//! Sublinear expectation spaces on finite sample spaces, random variables,
//! distributions, triviality classifiers, and the uncertainty-witness
//! construction.

use crate::error::{Error, Result};
use crate::measure::{points_close, CredalSet, FiniteSupport, ValueTable};
use crate::rng::SplitMix64;
use crate::scalar::Scalar;

/// Finite sample space together with a credal set on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SublinearSpace<T: Scalar> {
    omega: FiniteSupport<T>,
    credal: CredalSet<T>,
}

impl<T: Scalar> SublinearSpace<T> {
    pub fn new(credal: CredalSet<T>) -> Self {
        SublinearSpace { omega: credal.support().clone(), credal }
    }

    pub fn omega(&self) -> &FiniteSupport<T> {
        &self.omega
    }

    pub fn credal(&self) -> &CredalSet<T> {
        &self.credal
    }

    pub fn eval(&self, f: &ValueTable<T>) -> Result<T> {
        self.credal.sup_expect(f)
    }
}

/// A map from sample points to d-dimensional values.
#[derive(Debug, Clone)]
pub struct RandomVariable<T: Scalar> {
    space: SublinearSpace<T>,
    values: Vec<Vec<T>>,
}

impl<T: Scalar> RandomVariable<T> {
    pub fn new(space: SublinearSpace<T>, values: Vec<Vec<T>>) -> Result<Self> {
        if values.len() != space.omega.len() {
            return Err(Error::DimensionMismatch {
                expected: space.omega.len(),
                got: values.len(),
            });
        }
        Ok(RandomVariable { space, values })
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    /// The pushforward credal set on the grid of distinct values.
    pub fn distribution(&self) -> Result<Distribution<T>> {
        Ok(Distribution::new(self.space.credal.pushforward(&self.values)?))
    }
}

/// Credal set on the value grid of a random variable; the operational form of
/// the distribution functional.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T: Scalar> {
    credal: CredalSet<T>,
}

impl<T: Scalar> Distribution<T> {
    pub fn new(credal: CredalSet<T>) -> Self {
        Distribution { credal }
    }

    pub fn grid(&self) -> &FiniteSupport<T> {
        self.credal.support()
    }

    pub fn credal(&self) -> &CredalSet<T> {
        &self.credal
    }

    /// The sublinear evaluation of a test table on the grid.
    pub fn eval(&self, phi: &ValueTable<T>) -> Result<T> {
        self.credal.sup_expect(phi)
    }

    /// True iff the hull contains more than one measure, i.e. the functional
    /// is not a linear expectation. For a finitely generated hull this is
    /// equivalent to some two generators being distinct.
    pub fn has_distributional_uncertainty(&self) -> bool {
        let gens = self.credal.generators();
        let tol = T::dedup_tol();
        gens.iter()
            .skip(1)
            .any(|g| !points_close(g.weights(), gens[0].weights(), &tol))
    }

    /// True iff the hull is a single Dirac measure.
    pub fn is_constant(&self) -> bool {
        !self.has_distributional_uncertainty()
            && self.credal.generators()[0].is_dirac().is_some()
    }

    /// Pushforward of the distribution along a pointwise map on the grid.
    pub fn pushforward(&self, images: &[Vec<T>]) -> Result<Distribution<T>> {
        Ok(Distribution::new(self.credal.pushforward(images)?))
    }
}

/// Uncertainty witness: a nonnegative table with sup-expectation
/// exactly 1 and strictly smaller lower expectation.
#[derive(Debug, Clone)]
pub struct UncertaintyWitness<T: Scalar> {
    pub phi_star: ValueTable<T>,
    /// The lower expectation of `phi_star`, in [0, 1).
    pub epsilon: T,
    /// The grid index whose singleton mass is undetermined.
    pub grid_index: usize,
}

/// Scan the grid for a point whose singleton mass differs across the hull
/// (max over generators vs. min over generators; both linear in the measure,
/// so generator extrema are hull extrema). Ties break to the lowest index.
/// The witness is the indicator of that point scaled to sup-expectation 1.
pub fn uncertainty_witness<T: Scalar>(d: &Distribution<T>) -> Result<UncertaintyWitness<T>> {
    if !d.has_distributional_uncertainty() {
        return Err(Error::NoUncertainty);
    }
    let gens = d.credal().generators();
    let gap_tol = T::pivot_tol();
    for idx in 0..d.grid().len() {
        let masses: Vec<T> = gens.iter().map(|g| g.weights()[idx].clone()).collect();
        let mut mx = masses[0].clone();
        let mut mn = masses[0].clone();
        for m in &masses[1..] {
            if *m > mx {
                mx = m.clone();
            }
            if *m < mn {
                mn = m.clone();
            }
        }
        if mx.clone() - mn.clone() > gap_tol {
            let phi_star = ValueTable::indicator(d.grid(), &[idx])?
                .scale(&(T::one() / mx.clone()));
            let epsilon = mn / mx;
            return Ok(UncertaintyWitness { phi_star, epsilon, grid_index: idx });
        }
    }
    // Unreachable for a valid distribution: two distinct measures on a finite
    // grid must disagree on some singleton mass.
    Err(Error::NoUncertainty)
}

/// One recorded axiom violation.
#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub trial: usize,
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub trials: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn table_tol<T: Scalar>() -> T {
    match T::MODE {
        crate::scalar::Mode::Rational => T::zero(),
        crate::scalar::Mode::Float => T::from_f64(1e-9),
    }
}

/// Random table with entries k/16, k in [-16, 16].
pub(crate) fn random_table<T: Scalar>(
    grid: &FiniteSupport<T>,
    rng: &mut SplitMix64,
) -> ValueTable<T> {
    let values = (0..grid.len())
        .map(|_| T::ratio(rng.next_range_i64(-16, 16), 16))
        .collect();
    ValueTable::new(grid.clone(), values).expect("aligned")
}

/// Seeded randomized check of the sublinear-expectation axioms on a
/// distribution's evaluator: monotonicity, constant preserving,
/// sub-additivity, positive homogeneity, signed homogeneity, translation, and
/// the additivity trigger (a certainly-linear summand adds exactly).
pub fn check_axioms<T: Scalar>(d: &Distribution<T>, trials: usize, seed: u64) -> AxiomReport {
    check_axioms_on(d.credal(), trials, seed)
}

pub(crate) fn check_axioms_on<T: Scalar>(
    credal: &CredalSet<T>,
    trials: usize,
    seed: u64,
) -> AxiomReport {
    assert!(trials >= 1);
    let grid = credal.support();
    let tol = table_tol::<T>();
    let mut rng = SplitMix64::new(seed);
    let mut violations = Vec::new();
    let record = |trial: usize, axiom: &'static str, lhs: &T, rhs: &T,
                      violations: &mut Vec<AxiomViolation>| {
        violations.push(AxiomViolation {
            trial,
            axiom,
            detail: format!("lhs = {lhs}, rhs = {rhs}"),
        });
    };

    for trial in 0..trials {
        let f = random_table(grid, &mut rng);
        let g = random_table(grid, &mut rng);
        let vf = credal.sup_expect(&f).expect("aligned");
        let vg = credal.sup_expect(&g).expect("aligned");

        // (a) monotonicity via f2 = g + nonnegative bump
        let bump = ValueTable::new(
            grid.clone(),
            (0..grid.len())
                .map(|_| T::ratio(rng.next_range_i64(0, 16), 8))
                .collect(),
        )
        .expect("aligned");
        let f2 = g.add(&bump).expect("same support");
        let vf2 = credal.sup_expect(&f2).expect("aligned");
        if !(vf2.clone() + tol.clone() >= vg) {
            record(trial, "monotonicity", &vf2, &vg, &mut violations);
        }

        // (b) constant preserving
        let c = T::ratio(rng.next_range_i64(-16, 16), 8);
        let vc = credal
            .sup_expect(&ValueTable::constant(grid, c.clone()))
            .expect("aligned");
        if !vc.close_to(&c, &tol) {
            record(trial, "constant-preserving", &vc, &c, &mut violations);
        }

        // (c) sub-additivity
        let vsum = credal.sup_expect(&f.add(&g).expect("same support")).expect("aligned");
        if !(vsum.clone() <= vf.clone() + vg.clone() + tol.clone()) {
            let bound = vf.clone() + vg.clone();
            record(trial, "sub-additivity", &vsum, &bound, &mut violations);
        }

        // (d) positive homogeneity, and signed homogeneity for arbitrary sign
        let lam = T::ratio(rng.next_range_i64(-16, 16), 8);
        let vneg = credal.sup_expect(&f.neg()).expect("aligned");
        let vscaled = credal.sup_expect(&f.scale(&lam)).expect("aligned");
        if lam >= T::zero() {
            let expected = lam.clone() * vf.clone();
            if !vscaled.close_to(&expected, &tol) {
                record(trial, "positive-homogeneity", &vscaled, &expected, &mut violations);
            }
        }
        let expected = lam.pos_part() * vf.clone() + lam.neg_part() * vneg.clone();
        if !vscaled.close_to(&expected, &tol) {
            record(trial, "signed-homogeneity", &vscaled, &expected, &mut violations);
        }

        // translation
        let shifted = f.add(&ValueTable::constant(grid, c.clone())).expect("same support");
        let vshift = credal.sup_expect(&shifted).expect("aligned");
        let expected = vf.clone() + c.clone();
        if !vshift.close_to(&expected, &tol) {
            record(trial, "translation", &vshift, &expected, &mut violations);
        }

        // additivity trigger: a summand whose upper and lower expectations
        // coincide adds exactly. Constants always qualify; a random table
        // qualifies whenever its two one-sided values agree.
        for h in [ValueTable::constant(grid, c.clone()), g.clone()] {
            let vh = credal.sup_expect(&h).expect("aligned");
            let vhn = credal.sup_expect(&h.neg()).expect("aligned");
            if vh.close_to(&(-vhn.clone()), &tol) {
                let vfh = credal.sup_expect(&f.add(&h).expect("same support")).expect("aligned");
                let expected = vf.clone() + vh.clone();
                if !vfh.close_to(&expected, &tol) {
                    record(trial, "linear-summand-additivity", &vfh, &expected, &mut violations);
                }
            }
        }
    }
    AxiomReport { trials, violations }
}

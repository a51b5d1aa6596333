//! Randomized theorem verification, paper-scale example reproduction, the
//! weak-vs-full probe search, and seeded instance generation.
//!
//! All instance streams come from the documented SplitMix64 generator; a
//! (seed, config) pair reproduces identical reports, and counterexample
//! entries carry re-runnable instance serializations.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::hull;
use crate::independence::{
    self, nested_expect, peng_product, product_table, structured_tables, ProductOrder,
};
use crate::maximality::{self, verify_nested_identities};
use crate::measure::{CredalSet, FiniteSupport, ProbabilityMeasure, ValueTable};
use crate::rng::SplitMix64;
use crate::scalar::{Mode, Rat, Scalar};
use crate::space::Distribution;

/// Sampling ranges for randomized trials; ranges stay within the
/// materialization guard of the independence module.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    pub grid_size_min: usize,
    pub grid_size_max: usize,
    pub generator_count_min: usize,
    pub generator_count_max: usize,
    /// Random tables probed per trial before falling back to the exact
    /// polytope check.
    pub probe_tables: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 1000,
            seed: 42,
            grid_size_min: 2,
            grid_size_max: 4,
            generator_count_min: 1,
            generator_count_max: 4,
            probe_tables: 48,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be >= 1".into()));
        }
        if self.grid_size_min < 1
            || self.grid_size_max < self.grid_size_min
            || self.grid_size_max > independence::GUARD_MAX_GRID
        {
            return Err(Error::InvalidInput(format!(
                "grid size range must lie in 1..={}",
                independence::GUARD_MAX_GRID
            )));
        }
        if self.generator_count_min < 1
            || self.generator_count_max < self.generator_count_min
            || self.generator_count_max > independence::GUARD_MAX_VERTICES
        {
            return Err(Error::InvalidInput(format!(
                "generator count range must lie in 1..={}",
                independence::GUARD_MAX_VERTICES
            )));
        }
        Ok(())
    }
}

/// Classification flags of a sampled distribution, decided in rational mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceFlags {
    pub uncertain: bool,
    pub constant: bool,
    pub maximal: bool,
}

/// Draw a random distribution: a grid of distinct integer points and
/// generators with rational weights over a common denominator of at most 16.
pub fn random_distribution(rng: &mut SplitMix64, config: &TrialConfig) -> Distribution<Rat> {
    let span = config.grid_size_max - config.grid_size_min + 1;
    let size = config.grid_size_min + rng.next_below(span as u64) as usize;
    let grid = random_grid(rng, size);
    let gspan = config.generator_count_max - config.generator_count_min + 1;
    let n_gens = config.generator_count_min + rng.next_below(gspan as u64) as usize;
    let generators = (0..n_gens)
        .map(|_| random_measure(rng, &grid))
        .collect::<Vec<_>>();
    Distribution::new(CredalSet::new(generators).expect("shared grid"))
}

fn random_grid(rng: &mut SplitMix64, size: usize) -> FiniteSupport<Rat> {
    // distinct integers from a window a little wider than the grid
    let mut points: Vec<i64> = Vec::with_capacity(size);
    while points.len() < size {
        let candidate = rng.next_range_i64(-4, 4);
        if !points.contains(&candidate) {
            points.push(candidate);
        }
    }
    FiniteSupport::scalar(points.into_iter().map(Rat::from_int).collect()).expect("distinct")
}

fn random_measure(rng: &mut SplitMix64, grid: &FiniteSupport<Rat>) -> ProbabilityMeasure<Rat> {
    // weights k_i / d with a shared denominator d <= 16, summing to d
    let d = 1 + rng.next_below(16) as i64;
    let n = grid.len();
    // sample an ordered composition of d into n nonnegative parts
    let mut cuts: Vec<i64> = (0..n - 1).map(|_| rng.next_range_i64(0, d)).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts {
        parts.push(c - prev);
        prev = c;
    }
    parts.push(d - prev);
    let weights = parts.into_iter().map(|k| Rat::ratio(k, d)).collect();
    ProbabilityMeasure::new(grid.clone(), weights).expect("valid composition")
}

pub fn classify(d: &Distribution<Rat>) -> Result<InstanceFlags> {
    Ok(InstanceFlags {
        uncertain: d.has_distributional_uncertainty(),
        constant: d.is_constant(),
        maximal: maximality::is_maximal(d)?.maximal,
    })
}

/// A random maximal distribution: all Diracs on a random grid.
pub fn random_maximal_distribution(rng: &mut SplitMix64, max_points: usize) -> Distribution<Rat> {
    let size = 1 + rng.next_below(max_points as u64) as usize;
    let grid = random_grid(rng, size);
    Distribution::new(CredalSet::all_diracs(grid).expect("nonempty"))
}

/// Outcome of one theorem trial.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: usize,
    pub discarded_before_accept: usize,
    pub flags_x: InstanceFlags,
    pub flags_y: InstanceFlags,
    pub mutually_independent: bool,
    /// serialized witness values when the products differ
    pub separating_values: Option<(String, String)>,
    pub counterexample: Option<String>,
    /// JSON of the (dX, dY) pair for re-running, present on counterexamples.
    pub instance_json: Option<String>,
}

#[derive(Debug)]
pub struct TrialReport {
    pub mode: Mode,
    pub trials: usize,
    pub records: Vec<TrialRecord>,
    pub counterexamples: usize,
    pub mutual_count: usize,
    pub discarded: usize,
    pub wall_ms: u128,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }
}

/// Decide whether the two product orders have the same hull; probe tables
/// first (any disagreement is already an exact refutation in rational mode),
/// then fall back to the polytope certificate.
fn products_hull_equal(
    d_x: &Distribution<Rat>,
    d_y: &Distribution<Rat>,
    probe_tables: usize,
    rng: &mut SplitMix64,
) -> Result<(bool, Option<(ValueTable<Rat>, Rat, Rat)>)> {
    // structured discriminators first, then random tables; evaluated lazily
    // through the nesting (equal to the materialized sup by construction)
    let mut tables = structured_tables(d_x.grid(), d_y.grid());
    let support = independence::product_support(d_x.grid(), d_y.grid())?;
    for _ in 0..probe_tables {
        let values = (0..support.len())
            .map(|_| Rat::ratio(rng.next_range_i64(-16, 16), 16))
            .collect();
        tables.push(ValueTable::new(support.clone(), values)?);
    }
    for t in tables {
        let vyx = nested_expect(d_x, d_y, &t, ProductOrder::YFromX)?;
        let vxy = nested_expect(d_x, d_y, &t, ProductOrder::XFromY)?;
        if vyx != vxy {
            return Ok((false, Some((t, vyx, vxy))));
        }
    }
    // exact certificate
    let prod_yx = peng_product(d_x, d_y, ProductOrder::YFromX)?;
    let prod_xy = peng_product(d_x, d_y, ProductOrder::XFromY)?;
    match hull::credal_hulls_equal_witness(prod_yx.credal(), prod_xy.credal())? {
        None => Ok((true, None)),
        Some(w) => Ok((false, Some((w.table, w.lhs_value, w.rhs_value)))),
    }
}

/// The main randomized suite: sample non-trivial pairs, decide mutual
/// independence exactly, and check the implication "mutual independence =>
/// both marginals maximal" together with its contrapositive. Each trial is an
/// independent function of its derived seed, so the loop parallelizes with a
/// deterministic merge.
pub fn verify_theorem(config: &TrialConfig) -> Result<TrialReport> {
    config.validate()?;
    let start = Instant::now();
    let results = crate::par::map_indexed(config.trials, |trial| {
        run_trial(trial, config)
    });
    let mut records = Vec::with_capacity(config.trials);
    for r in results {
        records.push(r?);
    }
    let counterexamples = records.iter().filter(|r| r.counterexample.is_some()).count();
    let mutual_count = records.iter().filter(|r| r.mutually_independent).count();
    let discarded = records.iter().map(|r| r.discarded_before_accept).sum();
    Ok(TrialReport {
        mode: Mode::Rational,
        trials: config.trials,
        records,
        counterexamples,
        mutual_count,
        discarded,
        wall_ms: start.elapsed().as_millis(),
    })
}

fn run_trial(trial: usize, config: &TrialConfig) -> Result<TrialRecord> {
    let mut rng = SplitMix64::derive(config.seed, trial as u64);

    // Theorem hypothesis sampling: X with distributional uncertainty, Y not
    // constant. Anything else is one of the excluded trivial cases.
    let mut discarded = 0;
    let (d_x, d_y, flags_x, flags_y) = loop {
        let d_x = random_distribution(&mut rng, config);
        let d_y = random_distribution(&mut rng, config);
        let fx = classify(&d_x)?;
        let fy = classify(&d_y)?;
        if fx.uncertain && !fy.constant {
            break (d_x, d_y, fx, fy);
        }
        discarded += 1;
    };

    let (equal, witness) = products_hull_equal(&d_x, &d_y, config.probe_tables, &mut rng)?;

    let mut counterexample = None;
    let mut separating_values = None;

    if equal {
        // forward implication of the trial
        if !(flags_x.maximal && flags_y.maximal) {
            counterexample = Some(format!(
                "mutually independent pair with non-maximal marginal (maximal_x = {}, maximal_y = {})",
                flags_x.maximal, flags_y.maximal
            ));
        }
    } else {
        let (table, vyx, vxy) = witness.expect("inequality carries a witness");
        // the witness must re-evaluate to two different values
        let again_yx = nested_expect(&d_x, &d_y, &table, ProductOrder::YFromX)?;
        let again_xy = nested_expect(&d_x, &d_y, &table, ProductOrder::XFromY)?;
        let consistent = if again_yx != again_xy {
            true
        } else {
            // witness came from the materialized clouds; re-check there
            let prod_yx = peng_product(&d_x, &d_y, ProductOrder::YFromX)?;
            let prod_xy = peng_product(&d_x, &d_y, ProductOrder::XFromY)?;
            prod_yx.credal().sup_expect(&table)? != prod_xy.credal().sup_expect(&table)?
        };
        if !consistent {
            counterexample = Some(
                "products reported unequal but the witness does not separate them".into(),
            );
        }
        separating_values = Some((format!("{vyx}"), format!("{vxy}")));
        // contrapositive bookkeeping: a non-maximal marginal (with the
        // non-triviality flags) must land exactly here, which it did.
    }

    let instance_json = counterexample.as_ref().map(|_| {
        crate::json::instance_pair_to_json(&d_x, &d_y).to_string()
    });
    Ok(TrialRecord {
        trial,
        discarded_before_accept: discarded,
        flags_x,
        flags_y,
        mutually_independent: equal,
        separating_values,
        counterexample,
        instance_json,
    })
}

#[derive(Debug)]
pub struct ForwardReport {
    pub trials: usize,
    pub failures: Vec<String>,
    pub wall_ms: u128,
}

impl ForwardReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Forward direction: random maximal pairs always yield hull-equal products
/// in both orders, and the joint is maximal with the product point set.
pub fn verify_forward(trials: usize, seed: u64, max_points: usize) -> Result<ForwardReport> {
    let start = Instant::now();
    let results = crate::par::map_indexed(trials, |trial| -> Result<Option<String>> {
        let mut rng = SplitMix64::derive(seed, trial as u64);
        let d_x = random_maximal_distribution(&mut rng, max_points);
        let d_y = random_maximal_distribution(&mut rng, max_points);
        let prod_yx = peng_product(&d_x, &d_y, ProductOrder::YFromX)?;
        let prod_xy = peng_product(&d_x, &d_y, ProductOrder::XFromY)?;
        if !hull::credal_hulls_equal(prod_yx.credal(), prod_xy.credal())? {
            return Ok(Some(format!("trial {trial}: product orders differ")));
        }
        let joint_dist = Distribution::new(prod_yx.credal().clone());
        let cert = maximality::is_maximal(&joint_dist)?;
        if !cert.maximal {
            return Ok(Some(format!("trial {trial}: joint of maximal pair not maximal")));
        }
        // the joint point set is exactly the product of the marginal sets
        let gx = maximality::is_maximal(&d_x)?.gamma.expect("maximal");
        let gy = maximality::is_maximal(&d_y)?.gamma.expect("maximal");
        let mut expected: Vec<Vec<Rat>> = Vec::new();
        for px in &gx {
            for py in &gy {
                let mut p = px.clone();
                p.extend_from_slice(py);
                expected.push(p);
            }
        }
        let mut got = cert.gamma.expect("maximal");
        expected.sort();
        got.sort();
        if expected != got {
            return Ok(Some(format!("trial {trial}: joint point set is not the product set")));
        }
        Ok(None)
    });
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    Ok(ForwardReport { trials, failures, wall_ms: start.elapsed().as_millis() })
}

#[derive(Debug)]
pub struct ExampleReport {
    pub checks: Vec<(String, bool)>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// The fixed two-generator instance on {-1, 0, 1} whose product orders
/// disagree on x * y^2: one order gives 3/25 = (upper variance - lower
/// variance) * (upper expectation of x+), the other gives 0.
pub fn reproduce_example_xy2() -> Result<ExampleReport> {
    let grid = FiniteSupport::scalar(vec![
        Rat::from_int(-1),
        Rat::from_int(0),
        Rat::from_int(1),
    ])?;
    let p1 = ProbabilityMeasure::new(
        grid.clone(),
        vec![Rat::ratio(1, 4), Rat::ratio(1, 2), Rat::ratio(1, 4)],
    )?;
    let p2 = ProbabilityMeasure::new(
        grid.clone(),
        vec![Rat::ratio(2, 5), Rat::ratio(1, 5), Rat::ratio(2, 5)],
    )?;
    let d = Distribution::new(CredalSet::new(vec![p1, p2])?);

    let mut checks = Vec::new();
    let identity = ValueTable::from_fn(d.grid(), |x| x[0].clone());
    let mean_up = d.eval(&identity)?;
    let mean_down = d.eval(&identity.neg())?;
    checks.push(("upper mean = 0".to_string(), mean_up == Rat::zero()));
    checks.push(("upper mean of -x = 0".to_string(), mean_down == Rat::zero()));

    let sq = ValueTable::from_fn(d.grid(), |x| x[0].clone() * x[0].clone());
    let var_up = d.eval(&sq)?;
    let var_down = -d.eval(&sq.neg())?;
    checks.push(("upper variance = 4/5".to_string(), var_up == Rat::ratio(4, 5)));
    checks.push(("lower variance = 1/2".to_string(), var_down == Rat::ratio(1, 2)));

    let xplus = ValueTable::from_fn(d.grid(), |x| x[0].pos_part());
    let e_xplus = d.eval(&xplus)?;
    checks.push(("upper expectation of x+ = 2/5".to_string(), e_xplus == Rat::ratio(2, 5)));

    let phi = product_table(d.grid(), d.grid(), |x, y| {
        x[0].clone() * y[0].clone() * y[0].clone()
    });
    let v_yx = nested_expect(&d, &d, &phi, ProductOrder::YFromX)?;
    let v_xy = nested_expect(&d, &d, &phi, ProductOrder::XFromY)?;
    checks.push(("y-from-x value = 3/25".to_string(), v_yx == Rat::ratio(3, 25)));
    checks.push(("x-from-y value = 0".to_string(), v_xy == Rat::zero()));
    let algebra = (var_up - var_down) * e_xplus;
    checks.push(("3/25 = variance gap times x+ mean".to_string(), algebra == v_yx));
    checks.push(("y-from-x value strictly positive".to_string(), v_yx > Rat::zero()));

    Ok(ExampleReport { checks })
}

/// Build maximal marginals on two explicit point sets and check mutual
/// independence and maximality of the joint.
pub fn reproduce_maximal_product(gamma1: &[i64], gamma2: &[i64]) -> Result<ExampleReport> {
    if gamma1.is_empty() || gamma2.is_empty() {
        return Err(Error::InvalidInput("point sets must be nonempty".into()));
    }
    let g1 = FiniteSupport::scalar(gamma1.iter().map(|&p| Rat::from_int(p)).collect())?;
    let g2 = FiniteSupport::scalar(gamma2.iter().map(|&p| Rat::from_int(p)).collect())?;
    let d_x = Distribution::new(CredalSet::all_diracs(g1)?);
    let d_y = Distribution::new(CredalSet::all_diracs(g2)?);

    let mut checks = Vec::new();
    let prod_yx = peng_product(&d_x, &d_y, ProductOrder::YFromX)?;
    let prod_xy = peng_product(&d_x, &d_y, ProductOrder::XFromY)?;
    checks.push((
        "product orders hull-equal".to_string(),
        hull::credal_hulls_equal(prod_yx.credal(), prod_xy.credal())?,
    ));
    checks.push((
        "independent y-from-x".to_string(),
        independence::is_independent(&prod_yx, ProductOrder::YFromX)?.is_independent(),
    ));
    checks.push((
        "independent x-from-y".to_string(),
        independence::is_independent(&prod_yx, ProductOrder::XFromY)?.is_independent(),
    ));
    let cert = maximality::is_maximal(&Distribution::new(prod_yx.credal().clone()))?;
    let expected = gamma1.len() * gamma2.len();
    checks.push(("joint maximal".to_string(), cert.maximal));
    checks.push((
        format!("joint point set has {expected} points"),
        cert.gamma.map(|g| g.len()) == Some(expected),
    ));
    Ok(ExampleReport { checks })
}

/// One candidate from the weak-vs-full search: passed the weak falsifier at
/// the budget yet certifiably fails full independence in the same order.
#[derive(Debug)]
pub struct ProbeCandidate {
    pub trial: usize,
    pub order: ProductOrder,
    pub weak_pairs_tried: usize,
    pub instance_json: String,
}

#[derive(Debug)]
pub struct ProbeReport {
    pub trials: usize,
    pub candidates: Vec<ProbeCandidate>,
    pub skipped_guard: usize,
    pub wall_ms: u128,
}

/// Exploratory search for a joint that weak independence does not falsify
/// but full independence refutes. Either outcome is informative; the
/// surrounding theory leaves the question open, so no pass/fail number is
/// attached.
pub fn probe_weak_vs_full(config: &TrialConfig) -> Result<ProbeReport> {
    config.validate()?;
    let start = Instant::now();
    let results = crate::par::map_indexed(config.trials, |trial| -> Result<(Option<ProbeCandidate>, bool)> {
        let mut rng = SplitMix64::derive(config.seed, trial as u64);
        let d_x = random_distribution(&mut rng, config);
        let d_y = random_distribution(&mut rng, config);
        // candidate joints: one order's Peng product checked in the other
        // order, the regime where the two notions can come apart
        let build_order = if rng.next_below(2) == 0 {
            ProductOrder::YFromX
        } else {
            ProductOrder::XFromY
        };
        let joint = match peng_product(&d_x, &d_y, build_order) {
            Ok(j) => j,
            Err(Error::SizeGuardExceeded(_)) => return Ok((None, true)),
            Err(e) => return Err(e),
        };
        let check_order = build_order.flip();
        let weak =
            independence::is_weakly_independent(&joint, check_order, 64, rng.next_u64())?;
        if weak.is_falsified() {
            return Ok((None, false));
        }
        let full = match independence::is_independent(&joint, check_order) {
            Ok(v) => v,
            Err(Error::SizeGuardExceeded(_)) => return Ok((None, true)),
            Err(e) => return Err(e),
        };
        if full.is_independent() {
            return Ok((None, false));
        }
        let pairs = match weak {
            independence::WeakOutcome::NotFalsified { pairs_tried } => pairs_tried,
            _ => unreachable!(),
        };
        Ok((
            Some(ProbeCandidate {
                trial,
                order: check_order,
                weak_pairs_tried: pairs,
                instance_json: crate::json::instance_pair_to_json(&d_x, &d_y).to_string(),
            }),
            false,
        ))
    });
    let mut candidates = Vec::new();
    let mut skipped_guard = 0;
    for r in results {
        let (cand, skipped) = r?;
        if let Some(c) = cand {
            candidates.push(c);
        }
        if skipped {
            skipped_guard += 1;
        }
    }
    Ok(ProbeReport {
        trials: config.trials,
        candidates,
        skipped_guard,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Run the nested-identity suite over freshly sampled mutually independent
/// pairs (maximal marginals), as a batch.
pub fn verify_nested_identities_batch(
    instances: usize,
    psi_samples: usize,
    seed: u64,
) -> Result<Vec<maximality::NestedIdentityReport<Rat>>> {
    let results = crate::par::map_indexed(instances, |k| {
        let mut rng = SplitMix64::derive(seed, k as u64);
        // X maximal with at least two points so the witness exists
        let d_x = loop {
            let d = random_maximal_distribution(&mut rng, 4);
            if d.grid().len() >= 2 {
                break d;
            }
        };
        let d_y = random_maximal_distribution(&mut rng, 4);
        verify_nested_identities(&d_x, &d_y, psi_samples, 4, rng.next_u64())
    });
    results.into_iter().collect()
}

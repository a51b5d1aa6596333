//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`; a failed assertion prints its
//! line automatically). All certifying checks run on exact rationals.

use std::time::Instant;

use credal::harness::{
    self, probe_weak_vs_full, random_distribution, reproduce_example_xy2, verify_forward,
    verify_nested_identities_batch, verify_theorem, TrialConfig,
};
use credal::hull;
use credal::independence::{nested_expect, product_table, ProductOrder};
use credal::measure::{CredalSet, FiniteSupport, ProbabilityMeasure, ValueTable};
use credal::rng::SplitMix64;
use credal::space::{check_axioms, uncertainty_witness, Distribution};
use credal::{Rat, Scalar};

fn pass(name: &str, start: Instant) {
    println!("[PASS] {name} ({} ms)", start.elapsed().as_millis());
}

fn xy2_instance<T: Scalar>() -> Distribution<T> {
    let grid = FiniteSupport::scalar(vec![T::from_int(-1), T::from_int(0), T::from_int(1)])
        .unwrap();
    let p1 = ProbabilityMeasure::new(
        grid.clone(),
        vec![T::ratio(1, 4), T::ratio(1, 2), T::ratio(1, 4)],
    )
    .unwrap();
    let p2 = ProbabilityMeasure::new(
        grid,
        vec![T::ratio(2, 5), T::ratio(1, 5), T::ratio(2, 5)],
    )
    .unwrap();
    Distribution::new(CredalSet::new(vec![p1, p2]).unwrap())
}

#[test]
fn example_reproduction() {
    let start = Instant::now();
    let report = reproduce_example_xy2().unwrap();
    assert!(report.passed(), "failed checks: {:?}", report.checks);

    // same instance in float mode, within 1e-9
    let d = xy2_instance::<f64>();
    let phi = product_table(d.grid(), d.grid(), |x, y| x[0] * y[0] * y[0]);
    let v_yx = nested_expect(&d, &d, &phi, ProductOrder::YFromX).unwrap();
    let v_xy = nested_expect(&d, &d, &phi, ProductOrder::XFromY).unwrap();
    assert!((v_yx - 3.0 / 25.0).abs() < 1e-9);
    assert!(v_xy.abs() < 1e-9);

    assert!(start.elapsed().as_secs() < 1, "runtime budget exceeded");
    pass("example reproduction: x*y^2 is 3/25 then 0, algebra identity holds", start);
}

#[test]
fn theorem_property_suite() {
    let start = Instant::now();
    let config = TrialConfig { trials: 1000, seed: 42, ..Default::default() };
    let report = verify_theorem(&config).unwrap();
    assert_eq!(
        report.counterexamples,
        0,
        "counterexamples: {:?}",
        report
            .records
            .iter()
            .filter(|r| r.counterexample.is_some())
            .collect::<Vec<_>>()
    );
    // every refutation shipped a witness with two distinct values
    for r in &report.records {
        if !r.mutually_independent {
            let (a, b) = r.separating_values.as_ref().expect("witness recorded");
            assert_ne!(a, b, "trial {} witness does not separate", r.trial);
        }
    }
    assert!(start.elapsed().as_secs() < 300, "runtime budget exceeded");
    pass("theorem suite: 1000 trials, seed 42, zero counterexamples", start);
}

#[test]
fn forward_direction() {
    let start = Instant::now();
    let report = verify_forward(200, 42, 5).unwrap();
    assert!(report.passed(), "failures: {:?}", report.failures);
    assert!(start.elapsed().as_secs() < 60, "runtime budget exceeded");
    pass("forward direction: 200 maximal pairs, product hulls equal, joint maximal", start);
}

#[test]
fn nested_identity_suite() {
    let start = Instant::now();
    let reports = verify_nested_identities_batch(50, 200, 1729).unwrap();
    assert_eq!(reports.len(), 50);
    for r in &reports {
        assert!(r.passed(), "epsilon = {}, failures: {:?}", r.epsilon, r.failures);
        // 200 sampled tables plus the fixed structured family
        assert!(r.psi_checked >= 200);
    }
    assert!(start.elapsed().as_secs() < 120, "runtime budget exceeded");
    pass("nested identities: 50 instances x 200 test functions, iterates collapse", start);
}

#[test]
fn axiom_suite() {
    let start = Instant::now();
    let config = TrialConfig::default();
    let mut rng = SplitMix64::new(99);
    let mut total = 0;
    for k in 0..100 {
        let d = random_distribution(&mut rng, &config);
        let report = check_axioms(&d, 10, 1000 + k);
        assert!(report.passed(), "violations: {:?}", report.violations);
        total += report.trials;
    }
    assert_eq!(total, 1000);
    pass("axioms: 1000 samples, zero violations", start);
}

#[test]
fn polytope_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(271828);
    let config = TrialConfig { grid_size_min: 2, grid_size_max: 5, ..Default::default() };
    for pair in 0..200 {
        let a = random_distribution(&mut rng, &config);
        let b = if pair % 2 == 0 {
            // same hull, different presentation: reversed generators plus
            // pairwise midpoints
            let gens = a.credal().generators();
            let mut mixed: Vec<_> = gens.iter().rev().cloned().collect();
            for i in 0..gens.len() {
                for j in (i + 1)..gens.len() {
                    let w = gens[i]
                        .weights()
                        .iter()
                        .zip(gens[j].weights())
                        .map(|(u, v)| (u.clone() + v.clone()) * Rat::ratio(1, 2))
                        .collect();
                    mixed.push(
                        ProbabilityMeasure::new(a.grid().clone(), w).unwrap(),
                    );
                }
            }
            Distribution::new(CredalSet::new(mixed).unwrap())
        } else {
            let mut fresh;
            loop {
                fresh = random_distribution(&mut rng, &config);
                if fresh.grid().len() == a.grid().len() {
                    break;
                }
            }
            // transplant onto a's grid so the supports match
            let gens = fresh
                .credal()
                .generators()
                .iter()
                .map(|g| {
                    ProbabilityMeasure::new(a.grid().clone(), g.weights().to_vec()).unwrap()
                })
                .collect();
            Distribution::new(CredalSet::new(gens).unwrap())
        };

        let verdict = hull::credal_hulls_equal_witness(a.credal(), b.credal()).unwrap();

        // brute force: 1000 random tables, equal iff no functional disagrees
        let mut brute_equal = true;
        for _ in 0..1000 {
            let values = (0..a.grid().len())
                .map(|_| Rat::ratio(rng.next_range_i64(-16, 16), 16))
                .collect();
            let t = ValueTable::new(a.grid().clone(), values).unwrap();
            if a.credal().sup_expect(&t).unwrap() != b.credal().sup_expect(&t).unwrap() {
                brute_equal = false;
                break;
            }
        }

        match verdict {
            None => assert!(brute_equal, "pair {pair}: certificate says equal, brute force disagrees"),
            Some(w) => {
                assert!(!brute_equal, "pair {pair}: certificate says unequal, brute force found no separating table");
                let gap = (w.lhs_value.to_f64() - w.rhs_value.to_f64()).abs();
                assert!(gap > 1e-9, "pair {pair}: witness gap {gap} too small");
            }
        }
    }
    pass("polytope oracle: 200 pairs, certificate agrees with 1000-table brute force", start);
}

#[test]
fn uncertainty_witness_properties() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(5417);
    let config = TrialConfig::default();
    let mut found = 0;
    while found < 500 {
        let d = random_distribution(&mut rng, &config);
        if !d.has_distributional_uncertainty() {
            continue;
        }
        found += 1;
        let w = uncertainty_witness(&d).unwrap();
        assert!(
            w.phi_star.values().iter().all(|v| *v >= Rat::zero()),
            "witness table must be nonnegative"
        );
        assert_eq!(d.eval(&w.phi_star).unwrap(), Rat::one());
        assert!(w.epsilon >= Rat::zero() && w.epsilon < Rat::one());
    }
    pass("uncertainty witness: 500 instances, phi* >= 0, value 1, epsilon in [0,1)", start);
}

#[test]
fn weak_vs_full_probe_exploratory() {
    let start = Instant::now();
    let config = TrialConfig { trials: 150, seed: 7, ..Default::default() };
    let report = probe_weak_vs_full(&config).unwrap();
    // exploratory: the candidate count is recorded, not asserted
    println!(
        "[INFO] weak-vs-full probe: {} trials, {} candidates, {} skipped by size guard",
        report.trials,
        report.candidates.len(),
        report.skipped_guard
    );
    pass("weak-vs-full probe ran and recorded its report", start);
}

#[test]
fn instances_round_trip_through_json() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(31415);
    let config = TrialConfig::default();
    for _ in 0..50 {
        let d_x = random_distribution(&mut rng, &config);
        let d_y = random_distribution(&mut rng, &config);
        let v = credal::json::instance_pair_to_json(&d_x, &d_y);
        let (bx, by) = credal::json::instance_pair_from_json::<Rat>(&v).unwrap();
        assert_eq!(bx.credal(), d_x.credal());
        assert_eq!(by.credal(), d_y.credal());
        // verdicts are functions of the values, so equality suffices; spot
        // check one anyway
        assert_eq!(
            harness::classify(&bx).unwrap(),
            harness::classify(&d_x).unwrap()
        );
    }
    pass("instances round-trip through JSON without changing verdicts", start);
}

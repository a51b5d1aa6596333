//! Compares the rayon-backed loops against the sequential fallback on the
//! two dominant workloads: theorem trials (sample a pair, materialize both
//! product orders, decide hull equality) and vertex filtering of product
//! clouds. With `--no-default-features` the dispatching path is itself
//! sequential and the two sides coincide.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use credal::harness::{random_distribution, TrialConfig};
use credal::hull;
use credal::independence::{peng_product, ProductOrder};
use credal::par;
use credal::rng::SplitMix64;
use credal::space::Distribution;
use credal::Rat;

fn trial(seed: u64, index: usize) -> bool {
    let config = TrialConfig::default();
    let mut rng = SplitMix64::derive(seed, index as u64);
    let d_x = random_distribution(&mut rng, &config);
    let d_y = random_distribution(&mut rng, &config);
    let yx = peng_product(&d_x, &d_y, ProductOrder::YFromX).unwrap();
    let xy = peng_product(&d_x, &d_y, ProductOrder::XFromY).unwrap();
    hull::credal_hulls_equal(yx.credal(), xy.credal()).unwrap()
}

fn bench_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("theorem-trials-32");
    group.sample_size(10);
    group.bench_function("dispatching", |b| {
        b.iter(|| par::map_indexed(32, |i| trial(7, i)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| par::map_indexed_seq(32, |i| trial(7, i)))
    });
    group.finish();
}

fn product_cloud() -> Distribution<Rat> {
    let config = TrialConfig::default();
    let mut rng = SplitMix64::new(3);
    loop {
        let d_x = random_distribution(&mut rng, &config);
        let d_y = random_distribution(&mut rng, &config);
        let joint = peng_product(&d_x, &d_y, ProductOrder::YFromX).unwrap();
        if joint.credal().generators().len() >= 16 {
            return Distribution::new(joint.credal().clone());
        }
    }
}

fn bench_vertices(c: &mut Criterion) {
    let cloud = product_cloud();
    let mut group = c.benchmark_group("vertex-filtering");
    group.sample_size(10);
    // credal_vertices fans out through the same dispatching helpers; the
    // sequential comparison point runs the identical membership tests inline
    group.bench_function("dispatching", |b| {
        b.iter_batched(
            || cloud.clone(),
            |d| hull::credal_vertices(d.credal()).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || hull::weight_cloud(cloud.credal()),
            |points| {
                let rows = points.points().to_vec();
                par::map_indexed_seq(rows.len(), |i| {
                    let mut rest = rows.clone();
                    let probe = rest.remove(i);
                    let rest = credal::polytope::PointSet::new(rest).unwrap();
                    credal::polytope::is_member(&probe, &rest).unwrap()
                })
            },
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_trials, bench_vertices);
criterion_main!(benches);

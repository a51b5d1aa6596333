//! Peng independence products in both orders, the nested-expectation
//! evaluator, and certified / probe independence checks.
//!
//! Product grids are paired row-major: the joint index of (ix, iy) is
//! `ix * |gridY| + iy`, and every table on a product grid uses this layout.

use crate::error::{Error, Result};
use crate::hull::{self, SeparatingTable};
use crate::measure::{CredalSet, FiniteSupport, ProbabilityMeasure, ValueTable};
use crate::rng::SplitMix64;
use crate::scalar::{Mode, Scalar};
use crate::space::Distribution;

/// Which variable's law is nested inside which. `YFromX` reads "Y is
/// independent from X": inner sup over Y's law for each fixed x, outer sup
/// over X's law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductOrder {
    YFromX,
    XFromY,
}

impl ProductOrder {
    pub fn flip(self) -> ProductOrder {
        match self {
            ProductOrder::YFromX => ProductOrder::XFromY,
            ProductOrder::XFromY => ProductOrder::YFromX,
        }
    }
}

impl std::fmt::Display for ProductOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProductOrder::YFromX => write!(f, "y-from-x"),
            ProductOrder::XFromY => write!(f, "x-from-y"),
        }
    }
}

/// Credal set on a product grid, row-major over (gridX, gridY).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T: Scalar> {
    grid_x: FiniteSupport<T>,
    grid_y: FiniteSupport<T>,
    credal: CredalSet<T>,
}

/// The row-major product support of two grids.
pub fn product_support<T: Scalar>(
    grid_x: &FiniteSupport<T>,
    grid_y: &FiniteSupport<T>,
) -> Result<FiniteSupport<T>> {
    let mut points = Vec::with_capacity(grid_x.len() * grid_y.len());
    for px in grid_x.points() {
        for py in grid_y.points() {
            let mut p = px.clone();
            p.extend_from_slice(py);
            points.push(p);
        }
    }
    FiniteSupport::new(points)
}

impl<T: Scalar> JointDistribution<T> {
    pub fn new(
        grid_x: FiniteSupport<T>,
        grid_y: FiniteSupport<T>,
        credal: CredalSet<T>,
    ) -> Result<Self> {
        let expected = product_support(&grid_x, &grid_y)?;
        if credal.support() != &expected {
            return Err(Error::SupportMismatch);
        }
        Ok(JointDistribution { grid_x, grid_y, credal })
    }

    pub fn grid_x(&self) -> &FiniteSupport<T> {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &FiniteSupport<T> {
        &self.grid_y
    }

    pub fn credal(&self) -> &CredalSet<T> {
        &self.credal
    }

    pub fn eval(&self, phi: &ValueTable<T>) -> Result<T> {
        self.credal.sup_expect(phi)
    }

    /// Marginal along the X coordinate (pushforward keeps grid order because
    /// the product support is row-major).
    pub fn marginal_x(&self) -> Result<Distribution<T>> {
        let nx = self.grid_x.len();
        let ny = self.grid_y.len();
        let images: Vec<Vec<T>> = (0..nx * ny)
            .map(|k| self.grid_x.point(k / ny).to_vec())
            .collect();
        Ok(Distribution::new(self.credal.pushforward(&images)?))
    }

    pub fn marginal_y(&self) -> Result<Distribution<T>> {
        let nx = self.grid_x.len();
        let ny = self.grid_y.len();
        let images: Vec<Vec<T>> = (0..nx * ny)
            .map(|k| self.grid_y.point(k % ny).to_vec())
            .collect();
        Ok(Distribution::new(self.credal.pushforward(&images)?))
    }

    /// Row-major table on the product grid from a function of the two points.
    pub fn table_from_fn(&self, f: impl Fn(&[T], &[T]) -> T) -> ValueTable<T> {
        product_table(&self.grid_x, &self.grid_y, f)
    }
}

/// Row-major table on a product grid built pointwise.
pub fn product_table<T: Scalar>(
    grid_x: &FiniteSupport<T>,
    grid_y: &FiniteSupport<T>,
    f: impl Fn(&[T], &[T]) -> T,
) -> ValueTable<T> {
    let support = product_support(grid_x, grid_y).expect("valid grids");
    let mut values = Vec::with_capacity(grid_x.len() * grid_y.len());
    for px in grid_x.points() {
        for py in grid_y.points() {
            values.push(f(px, py));
        }
    }
    ValueTable::new(support, values).expect("aligned")
}

/// The nesting evaluator: for `YFromX`, g(x) = sup over Y's law of phi(x, .),
/// then sup over X's law of g; symmetric for `XFromY`. This is the lazy form
/// of the Peng product.
pub fn nested_expect<T: Scalar>(
    d_x: &Distribution<T>,
    d_y: &Distribution<T>,
    phi: &ValueTable<T>,
    order: ProductOrder,
) -> Result<T> {
    let nx = d_x.grid().len();
    let ny = d_y.grid().len();
    if phi.values().len() != nx * ny {
        return Err(Error::DimensionMismatch { expected: nx * ny, got: phi.values().len() });
    }
    let vals = phi.values();
    match order {
        ProductOrder::YFromX => {
            let inner = (0..nx)
                .map(|ix| {
                    let row = ValueTable::new(
                        d_y.grid().clone(),
                        vals[ix * ny..(ix + 1) * ny].to_vec(),
                    )?;
                    d_y.eval(&row)
                })
                .collect::<Result<Vec<_>>>()?;
            d_x.eval(&ValueTable::new(d_x.grid().clone(), inner)?)
        }
        ProductOrder::XFromY => {
            let inner = (0..ny)
                .map(|iy| {
                    let col: Vec<T> =
                        (0..nx).map(|ix| vals[ix * ny + iy].clone()).collect();
                    d_x.eval(&ValueTable::new(d_x.grid().clone(), col)?)
                })
                .collect::<Result<Vec<_>>>()?;
            d_y.eval(&ValueTable::new(d_y.grid().clone(), inner)?)
        }
    }
}

/// Materialization size guard: outer grid at most 6 points and a generator
/// family |V_outer| * |V_inner|^|grid_outer| of at most 16384 measures.
/// Beyond it the product is refused rather than silently degraded.
/// `GUARD_MAX_VERTICES` is the per-marginal generator budget that keeps
/// random sampling inside the family cap.
pub const GUARD_MAX_GRID: usize = 6;
pub const GUARD_MAX_VERTICES: usize = 4;
pub const GUARD_MAX_FAMILY: usize = 16384;

/// Materialized Peng product. For `YFromX` the generator family is
/// { P (x) (Q_x)_x : P in vertices(X-law), each Q_x in vertices(Y-law) },
/// joint weight at (x, y) = P(x) * Q_x(y). Duplicate generators are merged.
pub fn peng_product<T: Scalar>(
    d_x: &Distribution<T>,
    d_y: &Distribution<T>,
    order: ProductOrder,
) -> Result<JointDistribution<T>> {
    let vx = hull::credal_vertices(d_x.credal())?;
    let vy = hull::credal_vertices(d_y.credal())?;
    let (outer, inner, outer_grid) = match order {
        ProductOrder::YFromX => (&vx, &vy, d_x.grid().len()),
        ProductOrder::XFromY => (&vy, &vx, d_y.grid().len()),
    };
    let family = (inner.generators().len() as u128)
        .checked_pow(outer_grid as u32)
        .unwrap_or(u128::MAX)
        .saturating_mul(outer.generators().len() as u128);
    if outer_grid > GUARD_MAX_GRID || family > GUARD_MAX_FAMILY as u128 {
        return Err(Error::SizeGuardExceeded(format!(
            "outer grid {outer_grid} (max {GUARD_MAX_GRID}), generator family {family} (max {GUARD_MAX_FAMILY})"
        )));
    }

    let support = product_support(d_x.grid(), d_y.grid())?;
    let nx = d_x.grid().len();
    let ny = d_y.grid().len();
    let n_inner = inner.generators().len();
    let mut weight_rows: Vec<Vec<T>> = Vec::new();

    // Enumerate assignments outer-point -> inner vertex as base-n_inner words.
    let mut selection = vec![0usize; outer_grid];
    loop {
        for p in outer.generators() {
            let mut w = vec![T::zero(); nx * ny];
            for (o_idx, &q_idx) in selection.iter().enumerate() {
                let p_mass = p.weights()[o_idx].clone();
                if p_mass.is_zero() {
                    continue;
                }
                let q = &inner.generators()[q_idx];
                for (i_idx, q_mass) in q.weights().iter().enumerate() {
                    let (ix, iy) = match order {
                        ProductOrder::YFromX => (o_idx, i_idx),
                        ProductOrder::XFromY => (i_idx, o_idx),
                    };
                    w[ix * ny + iy] = p_mass.clone() * q_mass.clone();
                }
            }
            weight_rows.push(w);
        }
        // next selection
        let mut carry = 0;
        while carry < outer_grid {
            selection[carry] += 1;
            if selection[carry] < n_inner {
                break;
            }
            selection[carry] = 0;
            carry += 1;
        }
        if carry == outer_grid {
            break;
        }
    }

    // Merge duplicate weight vectors (mass-zero outer points make many
    // selections collapse). Sort-and-dedup keeps this O(n log n) on the up to
    // |V|^|grid| rows.
    weight_rows.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    weight_rows.dedup();
    let unique = weight_rows;
    let generators = unique
        .into_iter()
        .map(|w| ProbabilityMeasure::new(support.clone(), w))
        .collect::<Result<Vec<_>>>()?;
    JointDistribution::new(
        d_x.grid().clone(),
        d_y.grid().clone(),
        CredalSet::new(generators)?,
    )
}

/// Certified independence verdict.
#[derive(Debug, Clone)]
pub enum IndependenceVerdict<T: Scalar> {
    Independent { mode: Mode },
    Dependent { mode: Mode, witness: SeparatingTable<T> },
}

impl<T: Scalar> IndependenceVerdict<T> {
    pub fn is_independent(&self) -> bool {
        matches!(self, IndependenceVerdict::Independent { .. })
    }
}

/// Certificate-mode check: rebuild the Peng product in order `which` from the
/// joint's own marginals and decide hull equality; refutations carry a
/// separating table on which the two functionals provably differ.
pub fn is_independent<T: Scalar>(
    joint: &JointDistribution<T>,
    which: ProductOrder,
) -> Result<IndependenceVerdict<T>> {
    let mx = joint.marginal_x()?;
    let my = joint.marginal_y()?;
    let product = peng_product(&mx, &my, which)?;
    match hull::credal_hulls_equal_witness(joint.credal(), product.credal())? {
        None => Ok(IndependenceVerdict::Independent { mode: T::MODE }),
        Some(witness) => Ok(IndependenceVerdict::Dependent { mode: T::MODE, witness }),
    }
}

/// Structured discriminator family on a product grid; first coordinates are
/// used when points are multi-dimensional. `x * y^2` heads the list.
pub fn structured_tables<T: Scalar>(
    grid_x: &FiniteSupport<T>,
    grid_y: &FiniteSupport<T>,
) -> Vec<ValueTable<T>> {
    let x0 = |p: &[T]| p[0].clone();
    let mut tables = vec![
        product_table(grid_x, grid_y, |x, y| x0(x) * x0(y) * x0(y)),
        product_table(grid_x, grid_y, |x, y| x0(x).pos_part() * x0(y)),
        product_table(grid_x, grid_y, |x, y| x0(x).pos_part() * x0(y) * x0(y)),
        product_table(grid_x, grid_y, |x, y| x0(x).pos_part() * x0(y).abs()),
        product_table(grid_x, grid_y, |x, y| sign(&x0(x)) * sign(&x0(y))),
        product_table(grid_x, grid_y, |x, y| x0(x) * x0(y)),
        product_table(grid_x, grid_y, |x, y| (x0(x) + x0(y)).abs()),
    ];
    // swapped roles
    tables.push(product_table(grid_x, grid_y, |x, y| x0(y) * x0(x) * x0(x)));
    tables.push(product_table(grid_x, grid_y, |x, y| x0(y).pos_part() * x0(x)));
    tables
}

fn sign<T: Scalar>(x: &T) -> T {
    if *x > T::zero() {
        T::one()
    } else if *x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Probe-mode outcome: a violating table or "not falsified at this budget".
#[derive(Debug, Clone)]
pub enum ProbeOutcome<T: Scalar> {
    Falsified { table: ValueTable<T>, joint_value: T, nested_value: T },
    NotFalsified { tables_tried: usize },
}

impl<T: Scalar> ProbeOutcome<T> {
    pub fn is_falsified(&self) -> bool {
        matches!(self, ProbeOutcome::Falsified { .. })
    }
}

fn probe_tol<T: Scalar>() -> T {
    match T::MODE {
        Mode::Rational => T::zero(),
        Mode::Float => T::from_f64(1e-9),
    }
}

/// Sampling check of the defining identity on the structured family plus
/// `trials` random tables; any size, no certificate.
pub fn probe_independence<T: Scalar>(
    joint: &JointDistribution<T>,
    which: ProductOrder,
    trials: usize,
    seed: u64,
) -> Result<ProbeOutcome<T>> {
    let mx = joint.marginal_x()?;
    let my = joint.marginal_y()?;
    let tol = probe_tol::<T>();
    let mut tables = structured_tables(joint.grid_x(), joint.grid_y());
    let mut rng = SplitMix64::new(seed);
    let support = product_support(joint.grid_x(), joint.grid_y())?;
    for _ in 0..trials {
        let values = (0..support.len())
            .map(|_| T::ratio(rng.next_range_i64(-16, 16), 16))
            .collect();
        tables.push(ValueTable::new(support.clone(), values)?);
    }
    let count = tables.len();
    for table in tables {
        let jv = joint.eval(&table)?;
        let nv = nested_expect(&mx, &my, &table, which)?;
        if !jv.close_to(&nv, &tol) {
            return Ok(ProbeOutcome::Falsified { table, joint_value: jv, nested_value: nv });
        }
    }
    Ok(ProbeOutcome::NotFalsified { tables_tried: count })
}

/// Weak-independence falsifier outcome.
#[derive(Debug, Clone)]
pub enum WeakOutcome<T: Scalar> {
    Falsified {
        phi: ValueTable<T>,
        psi: ValueTable<T>,
        joint_value: T,
        nested_value: T,
    },
    NotFalsified {
        pairs_tried: usize,
    },
}

impl<T: Scalar> WeakOutcome<T> {
    pub fn is_falsified(&self) -> bool {
        matches!(self, WeakOutcome::Falsified { .. })
    }
}

/// Check the nesting identity on product test functions phi(x) * psi(y) only:
/// all signed indicator pairs plus `trials` random pairs. A falsifier, not a
/// certificate (the closing problem of the theory is whether one exists).
pub fn is_weakly_independent<T: Scalar>(
    joint: &JointDistribution<T>,
    which: ProductOrder,
    trials: usize,
    seed: u64,
) -> Result<WeakOutcome<T>> {
    assert!(trials >= 1);
    let mx = joint.marginal_x()?;
    let my = joint.marginal_y()?;
    let tol = probe_tol::<T>();
    let nx = joint.grid_x().len();
    let ny = joint.grid_y().len();

    let mut pairs: Vec<(ValueTable<T>, ValueTable<T>)> = Vec::new();
    // all +/- indicator pairs
    for ix in 0..nx {
        for iy in 0..ny {
            let phi = ValueTable::indicator(joint.grid_x(), &[ix])?;
            let psi = ValueTable::indicator(joint.grid_y(), &[iy])?;
            for (sx, sy) in [(false, false), (false, true), (true, false), (true, true)] {
                let p = if sx { phi.neg() } else { phi.clone() };
                let q = if sy { psi.neg() } else { psi.clone() };
                pairs.push((p, q));
            }
        }
    }
    // the canonical asymmetry pair and friends
    let x0 = |p: &[T]| p[0].clone();
    pairs.push((
        ValueTable::from_fn(joint.grid_x(), |x| x0(x)),
        ValueTable::from_fn(joint.grid_y(), |y| x0(y) * x0(y)),
    ));
    pairs.push((
        ValueTable::from_fn(joint.grid_x(), |x| x0(x).pos_part()),
        ValueTable::from_fn(joint.grid_y(), |y| x0(y).abs()),
    ));
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        let phi = crate::space::random_table(joint.grid_x(), &mut rng);
        let psi = crate::space::random_table(joint.grid_y(), &mut rng);
        pairs.push((phi, psi));
    }

    let count = pairs.len();
    for (phi, psi) in pairs {
        let table = product_table(joint.grid_x(), joint.grid_y(), |x, y| {
            phi.values()[joint.grid_x().find(x).expect("grid point")].clone()
                * psi.values()[joint.grid_y().find(y).expect("grid point")].clone()
        });
        let jv = joint.eval(&table)?;
        let nv = nested_expect(&mx, &my, &table, which)?;
        if !jv.close_to(&nv, &tol) {
            return Ok(WeakOutcome::Falsified {
                phi,
                psi,
                joint_value: jv,
                nested_value: nv,
            });
        }
    }
    Ok(WeakOutcome::NotFalsified { pairs_tried: count })
}

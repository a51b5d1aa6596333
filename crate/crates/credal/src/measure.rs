//! Finite supports, probability measures, credal sets, and the sublinear
//! evaluator `sup_expect`.
//!
//! A credal set is kept in generator form: a finite family of measures on a
//! shared support. The represented object is the convex hull of the
//! generators, and the sublinear expectation of a value table is the maximum
//! of the linear expectations over the generators (attained at a generator
//! since expectation is linear in the measure).

use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

/// Ordered list of distinct points in d-dimensional space. Indices are stable
/// identifiers; point coordinates are payload only.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupport<T: Scalar> {
    dim: usize,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> FiniteSupport<T> {
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("support must be nonempty".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("support points must have dimension >= 1".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
        }
        let tol = T::dedup_tol();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points_close(&points[i], &points[j], &tol) {
                    return Err(Error::InvalidInput(format!(
                        "support points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(FiniteSupport { dim, points })
    }

    /// 1-dimensional support from scalar points.
    pub fn scalar(points: Vec<T>) -> Result<Self> {
        Self::new(points.into_iter().map(|x| vec![x]).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &[T] {
        &self.points[index]
    }

    /// Index of the point matching `p` within dedup tolerance, if any.
    pub fn find(&self, p: &[T]) -> Option<usize> {
        let tol = T::dedup_tol();
        self.points.iter().position(|q| points_close(q, p, &tol))
    }
}

pub(crate) fn points_close<T: Scalar>(a: &[T], b: &[T], tol: &T) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.close_to(y, tol))
}

/// Weights over a finite support; the linear expectation E_P.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure<T: Scalar> {
    support: FiniteSupport<T>,
    weights: Vec<T>,
}

impl<T: Scalar> ProbabilityMeasure<T> {
    /// Validated measure: nonnegative weights summing to 1 (exactly in
    /// rational mode, within 1e-12 in float mode).
    pub fn new(support: FiniteSupport<T>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != support.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                got: weights.len(),
            });
        }
        for (i, w) in weights.iter().enumerate() {
            if *w < T::zero() {
                return Err(Error::NegativeWeight(i));
            }
        }
        let sum = weights.iter().fold(T::zero(), |a, w| a + w.clone());
        let tol = normalization_tol::<T>();
        if !sum.close_to(&T::one(), &tol) {
            return Err(Error::NotNormalized(format!("{sum}")));
        }
        Ok(ProbabilityMeasure { support, weights })
    }

    /// Unit mass at one support point.
    pub fn dirac(support: FiniteSupport<T>, index: usize) -> Result<Self> {
        if index >= support.len() {
            return Err(Error::IndexOutOfRange { index, size: support.len() });
        }
        let weights = (0..support.len())
            .map(|i| if i == index { T::one() } else { T::zero() })
            .collect();
        Ok(ProbabilityMeasure { support, weights })
    }

    /// Bypasses validation; only for deliberate negative controls in tests.
    #[cfg(test)]
    pub(crate) fn new_unchecked(support: FiniteSupport<T>, weights: Vec<T>) -> Self {
        ProbabilityMeasure { support, weights }
    }

    pub fn support(&self) -> &FiniteSupport<T> {
        &self.support
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// E_P[f] = dot(weights, values).
    pub fn expect(&self, f: &ValueTable<T>) -> Result<T> {
        if f.support != self.support {
            return Err(Error::SupportMismatch);
        }
        Ok(dot(&self.weights, &f.values))
    }

    /// True iff all mass sits on a single point.
    pub fn is_dirac(&self) -> Option<usize> {
        let tol = T::dedup_tol();
        let mut hit = None;
        for (i, w) in self.weights.iter().enumerate() {
            if !w.close_to(&T::zero(), &tol) {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            }
        }
        hit
    }
}

fn normalization_tol<T: Scalar>() -> T {
    match T::MODE {
        crate::scalar::Mode::Rational => T::zero(),
        crate::scalar::Mode::Float => T::from_f64(1e-12),
    }
}

/// Function values aligned with a support; the concrete test functions.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable<T: Scalar> {
    support: FiniteSupport<T>,
    values: Vec<T>,
}

impl<T: Scalar> ValueTable<T> {
    pub fn new(support: FiniteSupport<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != support.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                got: values.len(),
            });
        }
        Ok(ValueTable { support, values })
    }

    /// Table built pointwise from the support coordinates.
    pub fn from_fn(support: &FiniteSupport<T>, f: impl Fn(&[T]) -> T) -> Self {
        let values = support.points().iter().map(|p| f(p)).collect();
        ValueTable { support: support.clone(), values }
    }

    pub fn constant(support: &FiniteSupport<T>, c: T) -> Self {
        let values = vec![c; support.len()];
        ValueTable { support: support.clone(), values }
    }

    /// Indicator of a set of support indices.
    pub fn indicator(support: &FiniteSupport<T>, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            if i >= support.len() {
                return Err(Error::IndexOutOfRange { index: i, size: support.len() });
            }
        }
        let values = (0..support.len())
            .map(|i| if indices.contains(&i) { T::one() } else { T::zero() })
            .collect();
        Ok(ValueTable { support: support.clone(), values })
    }

    pub fn support(&self) -> &FiniteSupport<T> {
        &self.support
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        ValueTable {
            support: self.support.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.support != self.support {
            return Err(Error::SupportMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(ValueTable { support: self.support.clone(), values })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }
}

/// Finite generating family of measures on a shared support. Semantically the
/// convex hull of the generators; generators are not deduplicated or reduced
/// at construction (reduction is an explicit polytope-module call).
#[derive(Debug, Clone, PartialEq)]
pub struct CredalSet<T: Scalar> {
    support: FiniteSupport<T>,
    generators: Vec<ProbabilityMeasure<T>>,
}

impl<T: Scalar> CredalSet<T> {
    pub fn new(generators: Vec<ProbabilityMeasure<T>>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidInput("credal set needs at least one generator".into()))?;
        let support = first.support.clone();
        for g in &generators {
            if g.support != support {
                return Err(Error::SupportMismatch);
            }
        }
        Ok(CredalSet { support, generators })
    }

    /// Hull consisting of all Dirac measures on the support.
    pub fn all_diracs(support: FiniteSupport<T>) -> Result<Self> {
        let generators = (0..support.len())
            .map(|i| ProbabilityMeasure::dirac(support.clone(), i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(generators)
    }

    pub fn support(&self) -> &FiniteSupport<T> {
        &self.support
    }

    pub fn generators(&self) -> &[ProbabilityMeasure<T>] {
        &self.generators
    }

    /// The sublinear expectation: max over generators of E_P[f].
    pub fn sup_expect(&self, f: &ValueTable<T>) -> Result<T> {
        let mut best: Option<T> = None;
        for g in &self.generators {
            let v = g.expect(f)?;
            best = Some(match best {
                Some(b) if b >= v => b,
                _ => v,
            });
        }
        Ok(best.expect("nonempty generator family"))
    }

    /// Lower expectation -sup(-f), for convenience.
    pub fn inf_expect(&self, f: &ValueTable<T>) -> Result<T> {
        Ok(-self.sup_expect(&f.neg())?)
    }

    /// Upper probability c(A) = max over generators of P(A).
    pub fn capacity(&self, indices: &[usize]) -> Result<T> {
        let f = ValueTable::indicator(&self.support, indices)?;
        self.sup_expect(&f)
    }

    /// Transport each generator's mass along a pointwise image map.
    /// `images[i]` is the image of support point `i`; the target support is
    /// the list of distinct images in first-occurrence order.
    pub fn pushforward(&self, images: &[Vec<T>]) -> Result<CredalSet<T>> {
        if images.len() != self.support.len() {
            return Err(Error::DimensionMismatch {
                expected: self.support.len(),
                got: images.len(),
            });
        }
        let tol = T::dedup_tol();
        let mut grid: Vec<Vec<T>> = Vec::new();
        let mut target_index = Vec::with_capacity(images.len());
        for img in images {
            match grid.iter().position(|q| points_close(q, img, &tol)) {
                Some(j) => target_index.push(j),
                None => {
                    grid.push(img.clone());
                    target_index.push(grid.len() - 1);
                }
            }
        }
        let target = FiniteSupport::new(grid)?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let mut w = vec![T::zero(); target.len()];
                for (i, wi) in g.weights.iter().enumerate() {
                    w[target_index[i]] = w[target_index[i]].clone() + wi.clone();
                }
                Ok(ProbabilityMeasure { support: target.clone(), weights: w })
            })
            .collect::<Result<Vec<_>>>()?;
        CredalSet::new(generators)
    }
}

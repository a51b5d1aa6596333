//! Convex geometry over measure polytopes: membership, vertex filtering, and
//! hull equality.
//!
//! Membership in a convex hull is decided by a small phase-1 simplex over the
//! feasibility program `find lambda >= 0, sum lambda = 1, sum lambda_i v_i = z`.
//! Exact mode pivots on rationals; float mode uses the same algorithm with a
//! 1e-9 pivot threshold. Infeasibility ships a Farkas certificate, which is
//! exactly a separating value table: a linear functional strictly larger at
//! `z` than anywhere on the hull.

use crate::error::{Error, Result};
use crate::measure::points_close;
use crate::scalar::{dot, Scalar};

/// Nonempty list of equal-dimension vectors; measure weight vectors live here.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T: Scalar> {
    dim: usize,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidInput("point set must be nonempty".into()))?;
        let dim = first.len();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    /// Duplicate removal: exact equality in rational mode, coordinate-wise
    /// tolerance 1e-12 in float mode.
    pub fn dedup(&self) -> PointSet<T> {
        let tol = T::dedup_tol();
        let mut kept: Vec<Vec<T>> = Vec::new();
        for p in &self.points {
            if !kept.iter().any(|q| points_close(q, p, &tol)) {
                kept.push(p.clone());
            }
        }
        PointSet { dim: self.dim, points: kept }
    }
}

/// Separating functional from an infeasible membership query:
/// `normal . v <= offset` for every hull point `v`, while `normal . z > offset`.
#[derive(Debug, Clone)]
pub struct SeparatingFunctional<T: Scalar> {
    pub normal: Vec<T>,
    pub offset: T,
    /// `normal . z - offset`, strictly positive.
    pub gap: T,
}

#[derive(Debug, Clone)]
pub enum Membership<T: Scalar> {
    Inside,
    Outside(SeparatingFunctional<T>),
}

impl<T: Scalar> Membership<T> {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside)
    }
}

/// Decide whether `z` lies in the convex hull of `points`, with a separating
/// certificate on failure.
pub fn conv_membership<T: Scalar>(z: &[T], points: &PointSet<T>) -> Result<Membership<T>> {
    if z.len() != points.dim {
        return Err(Error::DimensionMismatch { expected: points.dim, got: z.len() });
    }
    let m = points.dim + 1; // equality rows: coordinates plus normalization
    let n = points.len();
    let tol = T::pivot_tol();

    // Row i of the original system: sum_j lambda_j v_j[i] = z[i]; last row:
    // sum lambda = 1. Flip row signs so every rhs is nonnegative.
    let mut sign = vec![T::one(); m];
    let mut rhs: Vec<T> = (0..m)
        .map(|i| if i < points.dim { z[i].clone() } else { T::one() })
        .collect();
    for i in 0..m {
        if rhs[i] < T::zero() {
            sign[i] = -T::one();
            rhs[i] = -rhs[i].clone();
        }
    }
    let column = |j: usize, i: usize| -> T {
        let a = if i < points.dim { points.points[j][i].clone() } else { T::one() };
        sign[i].clone() * a
    };

    // Revised phase-1 simplex: artificial basis, minimize the artificial sum.
    // Bland's rule throughout, so termination is unconditional.
    let mut binv: Vec<Vec<T>> = (0..m)
        .map(|r| (0..m).map(|c| if r == c { T::one() } else { T::zero() }).collect())
        .collect();
    // basis[r]: column index; structural columns are 0..n, artificial n..n+m.
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Simplex multipliers pi = c_B * Binv (artificial cost 1, structural 0).
        let pi: Vec<T> = (0..m)
            .map(|c| {
                let mut s = T::zero();
                for r in 0..m {
                    if basis[r] >= n {
                        s = s + binv[r][c].clone();
                    }
                }
                s
            })
            .collect();

        // Entering column: smallest structural index with negative reduced
        // cost, then artificials (reduced cost 1 - pi_i).
        let mut entering: Option<(usize, Vec<T>)> = None;
        for j in 0..n + m {
            if basis.contains(&j) {
                continue;
            }
            let (cost, a_j): (T, Vec<T>) = if j < n {
                (T::zero(), (0..m).map(|i| column(j, i)).collect())
            } else {
                let i = j - n;
                (T::one(), (0..m).map(|r| if r == i { T::one() } else { T::zero() }).collect())
            };
            let reduced = cost - dot(&pi, &a_j);
            if reduced < -tol.clone() {
                entering = Some((j, a_j));
                break;
            }
        }

        let Some((j, a_j)) = entering else {
            // Optimal. Objective = sum of artificial basic values.
            let x_b: Vec<T> = (0..m).map(|r| dot(&binv[r], &rhs)).collect();
            let obj = (0..m)
                .filter(|&r| basis[r] >= n)
                .fold(T::zero(), |a, r| a + x_b[r].clone());
            if obj <= tol {
                // Feasible; for float mode re-verify the residual directly.
                if T::MODE == crate::scalar::Mode::Float {
                    // lambda from the basis
                    let mut lambda = vec![T::zero(); n];
                    for r in 0..m {
                        if basis[r] < n {
                            lambda[basis[r]] = x_b[r].clone();
                        }
                    }
                    let res_tol = T::pivot_tol();
                    for i in 0..points.dim {
                        let mut s = T::zero();
                        for (lj, p) in lambda.iter().zip(points.points.iter()) {
                            s = s + lj.clone() * p[i].clone();
                        }
                        if !(s.clone() - z[i].clone()).abs().close_to(&T::zero(), &res_tol) {
                            return Ok(outside_certificate(z, points, &pi, &sign));
                        }
                    }
                }
                return Ok(Membership::Inside);
            }
            return Ok(outside_certificate(z, points, &pi, &sign));
        };

        // u = Binv * a_j; ratio test on x_B / u over u > tol, Bland ties.
        let u: Vec<T> = (0..m).map(|r| dot(&binv[r], &a_j)).collect();
        let x_b: Vec<T> = (0..m).map(|r| dot(&binv[r], &rhs)).collect();
        let mut leave: Option<usize> = None;
        for r in 0..m {
            if u[r] > tol {
                let better = match leave {
                    None => true,
                    Some(lr) => {
                        let lhs = x_b[r].clone() * u[lr].clone();
                        let rhs_ = x_b[lr].clone() * u[r].clone();
                        lhs < rhs_ || (lhs == rhs_ && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some(r);
                }
            }
        }
        let Some(lr) = leave else {
            // Unbounded phase-1 cannot happen (objective bounded below by 0);
            // in float mode a degenerate pivot may land here. Treat as outside.
            return Ok(outside_certificate(z, points, &pi, &sign));
        };

        // Pivot: eliminate u from all rows of Binv against row lr.
        let pivot = u[lr].clone();
        for c in 0..m {
            binv[lr][c] = binv[lr][c].clone() / pivot.clone();
        }
        for r in 0..m {
            if r != lr && !u[r].is_zero() {
                let factor = u[r].clone();
                for c in 0..m {
                    binv[r][c] = binv[r][c].clone() - factor.clone() * binv[lr][c].clone();
                }
            }
        }
        basis[lr] = j;
    }
}

fn outside_certificate<T: Scalar>(
    z: &[T],
    points: &PointSet<T>,
    pi: &[T],
    sign: &[T],
) -> Membership<T> {
    // Map the multipliers back through the row flips: the functional
    // w_i = sign_i * pi_i (coordinates) with affine part w0 = sign_last *
    // pi_last satisfies w . v + w0 <= 0 on all hull points and > 0 at z.
    let d = points.dim;
    let normal: Vec<T> = (0..d).map(|i| sign[i].clone() * pi[i].clone()).collect();
    let w0 = sign[d].clone() * pi[d].clone();
    // offset = max over hull points of normal . v; by the certificate it is
    // <= -w0 < normal . z.
    let offset = points
        .points
        .iter()
        .map(|v| dot(&normal, v))
        .fold(None::<T>, |acc, x| match acc {
            Some(a) if a >= x => Some(a),
            _ => Some(x),
        })
        .expect("nonempty");
    let _ = w0; // absorbed into `offset`, kept for the derivation above
    let at_z = dot(&normal, z);
    let gap = at_z - offset.clone();
    Membership::Outside(SeparatingFunctional { normal, offset, gap })
}

/// True iff `z` lies in conv(points).
pub fn is_member<T: Scalar>(z: &[T], points: &PointSet<T>) -> Result<bool> {
    Ok(conv_membership(z, points)?.is_inside())
}

/// Extreme points of conv(points): duplicates removed, then each survivor is
/// kept iff it is outside the hull of the others.
pub fn vertices<T: Scalar>(points: &PointSet<T>) -> Result<PointSet<T>> {
    let deduped = points.dedup();
    if deduped.len() == 1 {
        return Ok(deduped);
    }
    let keep = crate::par::map_indexed(deduped.len(), |i| {
        let others: Vec<Vec<T>> = deduped
            .points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let others = PointSet { dim: deduped.dim, points: others };
        is_member(&deduped.points[i], &others).map(|inside| !inside)
    });
    let mut kept = Vec::new();
    for (i, k) in keep.into_iter().enumerate() {
        if k? {
            kept.push(deduped.points[i].clone());
        }
    }
    if kept.is_empty() {
        // All points coincide after dedup-tolerance effects; keep the first.
        kept.push(deduped.points[0].clone());
    }
    PointSet::new(kept)
}

/// First point of `a` outside conv(b), with its separating functional.
pub fn first_outside<T: Scalar>(
    a: &PointSet<T>,
    b: &PointSet<T>,
) -> Result<Option<(usize, SeparatingFunctional<T>)>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: b.dim, got: a.dim });
    }
    let results = crate::par::find_first(a.len(), |i| {
        match conv_membership(&a.points[i], b) {
            Ok(Membership::Inside) => Ok(None),
            Ok(Membership::Outside(cert)) => Ok(Some((i, cert))),
            Err(e) => Err(e),
        }
    });
    results
}

/// conv(a) == conv(b), by mutual membership of the generating points.
pub fn hulls_equal<T: Scalar>(a: &PointSet<T>, b: &PointSet<T>) -> Result<bool> {
    Ok(hulls_equal_witness(a, b)?.is_none())
}

/// `None` when the hulls coincide; otherwise a separating functional with the
/// side it separates (`true` = a point of `a` escapes conv(b)).
pub fn hulls_equal_witness<T: Scalar>(
    a: &PointSet<T>,
    b: &PointSet<T>,
) -> Result<Option<(bool, SeparatingFunctional<T>)>> {
    let da = a.dedup();
    let db = b.dedup();
    if let Some((_, cert)) = first_outside(&da, &db)? {
        return Ok(Some((true, cert)));
    }
    if let Some((_, cert)) = first_outside(&db, &da)? {
        return Ok(Some((false, cert)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn pt(coords: &[(i64, i64)]) -> Vec<Rat> {
        coords.iter().map(|&(n, d)| Rat::ratio(n, d)).collect()
    }

    fn ps(rows: &[&[(i64, i64)]]) -> PointSet<Rat> {
        PointSet::new(rows.iter().map(|r| pt(r)).collect()).unwrap()
    }

    #[test]
    fn member_generator_and_midpoint() {
        let v = ps(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        assert!(is_member(&pt(&[(1, 1), (0, 1)]), &v).unwrap());
        assert!(is_member(&pt(&[(1, 2), (1, 2)]), &v).unwrap());
        assert!(!is_member(&pt(&[(3, 5), (1, 2)]), &v).unwrap());
    }

    #[test]
    fn outside_certificate_separates() {
        let v = ps(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let z = pt(&[(3, 5), (1, 2)]);
        match conv_membership(&z, &v).unwrap() {
            Membership::Outside(c) => {
                for p in v.points() {
                    assert!(dot(&c.normal, p) <= c.offset);
                }
                assert!(dot(&c.normal, &z) > c.offset);
                assert!(c.gap > Rat::zero());
            }
            Membership::Inside => panic!("expected outside"),
        }
    }

    #[test]
    fn vertices_filtering() {
        // three collinear measures, middle one a mixture -> endpoints only
        let v = ps(&[
            &[(1, 1), (0, 1)],
            &[(1, 2), (1, 2)],
            &[(0, 1), (1, 1)],
        ]);
        let verts = vertices(&v).unwrap();
        assert_eq!(verts.len(), 2);

        // all identical -> single point
        let v = ps(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        assert_eq!(vertices(&v).unwrap().len(), 1);

        // unit simplex plus barycenter -> three unit vectors
        let v = ps(&[
            &[(1, 1), (0, 1), (0, 1)],
            &[(0, 1), (1, 1), (0, 1)],
            &[(0, 1), (0, 1), (1, 1)],
            &[(1, 3), (1, 3), (1, 3)],
        ]);
        let verts = vertices(&v).unwrap();
        assert_eq!(verts.len(), 3);
        for p in verts.points() {
            assert!(p.iter().any(|x| *x == Rat::one()));
        }
    }

    #[test]
    fn vertices_idempotent() {
        let v = ps(&[
            &[(1, 1), (0, 1)],
            &[(1, 2), (1, 2)],
            &[(0, 1), (1, 1)],
            &[(1, 4), (3, 4)],
        ]);
        let v1 = vertices(&v).unwrap();
        let v2 = vertices(&v1).unwrap();
        assert_eq!(v1.len(), v2.len());
        assert!(hulls_equal(&v, &v1).unwrap());
    }

    #[test]
    fn hulls_equal_cases() {
        let a = ps(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        assert!(hulls_equal(&a, &a).unwrap());

        let b = ps(&[
            &[(1, 1), (0, 1)],
            &[(0, 1), (1, 1)],
            &[(9, 10), (1, 10)],
        ]);
        assert!(hulls_equal(&a, &b).unwrap());

        let c = ps(&[
            &[(1, 1), (0, 1)],
            &[(0, 1), (1, 1)],
            &[(11, 10), (-1, 10)],
        ]);
        assert!(!hulls_equal(&a, &c).unwrap());
        let (_, cert) = hulls_equal_witness(&a, &c).unwrap().unwrap();
        assert!(cert.gap > Rat::zero());
    }

    #[test]
    fn float_mode_agrees_on_eighths() {
        use crate::rng::SplitMix64;
        // Randomized cross-check: coordinates in {k/8}, dimension <= 6.
        let mut g = SplitMix64::new(2024);
        for _ in 0..60 {
            let dim = 2 + g.next_below(5) as usize;
            let n = 2 + g.next_below(5) as usize;
            let mut ratpts = Vec::new();
            for _ in 0..n {
                ratpts.push(
                    (0..dim)
                        .map(|_| Rat::ratio(g.next_below(9) as i64, 8))
                        .collect::<Vec<_>>(),
                );
            }
            let z: Vec<Rat> = (0..dim)
                .map(|_| Rat::ratio(g.next_below(9) as i64, 8))
                .collect();
            let rset = PointSet::new(ratpts.clone()).unwrap();
            let fset = PointSet::new(
                ratpts
                    .iter()
                    .map(|p| p.iter().map(|x| x.to_f64()).collect())
                    .collect(),
            )
            .unwrap();
            let zf: Vec<f64> = z.iter().map(|x| x.to_f64()).collect();
            assert_eq!(
                is_member(&z, &rset).unwrap(),
                is_member(&zf, &fset).unwrap()
            );
        }
    }
}

//! Classical seminorms on `R^d`, their Minkowski functionals and separating
//! families.

use std::ops::{Add, Index, Sub};

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_positive, Error, Result};
use crate::sampling;

/// A finite point of `R^d`, `d >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "a point needs at least one coordinate".into(),
            ));
        }
        if let Some(&bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain {
                what: "coordinate",
                value: bad,
                expected: "finite reals",
            });
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim.max(1)])
    }

    /// The `axis`-th canonical basis vector.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut p = Point::zeros(dim);
        p.0[axis] = 1.0;
        p
    }

    /// Internal constructor for coordinates already known to be finite.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn scale(&self, c: f64) -> Point {
        Point(self.0.iter().map(|x| c * x).collect())
    }

    /// `max_i |self_i - other_i|`.
    pub fn sup_distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Point::new(v).map_err(serde::de::Error::custom)
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SeminormKind {
    /// `weight * |y_axis|`
    WeightedAbs { axis: usize, weight: f64 },
    /// `max_i w_i |y_i|`
    WeightedSup { weights: Vec<f64> },
    /// `sqrt(sum (y_i / a_i)^2)`, the gauge of an axis-aligned ellipsoid.
    EllipsoidGauge { semi_axes: Vec<f64> },
}

/// A seminorm on `R^dim` with a closed-form gauge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalSeminorm {
    kind: SeminormKind,
    dim: usize,
}

impl ClassicalSeminorm {
    pub fn weighted_abs(dim: usize, axis: usize, weight: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if axis >= dim {
            return Err(Error::InvalidArgument(format!(
                "axis {axis} out of range for dimension {dim}"
            )));
        }
        check_positive("weight", weight)?;
        Ok(ClassicalSeminorm {
            kind: SeminormKind::WeightedAbs { axis, weight },
            dim,
        })
    }

    pub fn weighted_sup(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("weights must be nonempty".into()));
        }
        for &w in &weights {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Domain {
                    what: "weight",
                    value: w,
                    expected: "[0, inf)",
                });
            }
        }
        Ok(ClassicalSeminorm {
            dim: weights.len(),
            kind: SeminormKind::WeightedSup { weights },
        })
    }

    pub fn ellipsoid(semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.is_empty() {
            return Err(Error::InvalidArgument("semi_axes must be nonempty".into()));
        }
        for &a in &semi_axes {
            check_positive("semi_axis", a)?;
        }
        Ok(ClassicalSeminorm {
            dim: semi_axes.len(),
            kind: SeminormKind::EllipsoidGauge { semi_axes },
        })
    }

    pub fn kind(&self) -> &SeminormKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `q(y)`, rejecting points of the wrong dimension.
    pub fn eval(&self, y: &Point) -> Result<f64> {
        check_dim(self.dim, y.dim())?;
        Ok(self.eval_slice(y.coords()))
    }

    /// `q(y)` on a raw coordinate slice of the right length.
    pub fn eval_slice(&self, y: &[f64]) -> f64 {
        match &self.kind {
            SeminormKind::WeightedAbs { axis, weight } => weight * y[*axis].abs(),
            SeminormKind::WeightedSup { weights } => weights
                .iter()
                .zip(y)
                .map(|(w, x)| w * x.abs())
                .fold(0.0, f64::max),
            SeminormKind::EllipsoidGauge { semi_axes } => {
                // hypot-style scaling so large coordinates do not overflow
                let scaled = semi_axes.iter().zip(y).map(|(a, x)| (x / a).abs());
                let m = scaled.clone().fold(0.0, f64::max);
                if m == 0.0 || !m.is_finite() {
                    return m;
                }
                m * scaled.map(|s| (s / m) * (s / m)).sum::<f64>().sqrt()
            }
        }
    }

    /// Axes `i` with `q(e_i) > 0`. For the shipped kinds the kernel of `q` is
    /// exactly the span of the remaining basis vectors.
    pub fn covered_axes(&self) -> Vec<usize> {
        match &self.kind {
            SeminormKind::WeightedAbs { axis, .. } => vec![*axis],
            SeminormKind::WeightedSup { weights } => weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(i, _)| i)
                .collect(),
            SeminormKind::EllipsoidGauge { .. } => (0..self.dim).collect(),
        }
    }

    /// Whether `q` vanishes only at the origin.
    pub fn is_norm(&self) -> bool {
        self.covered_axes().len() == self.dim
    }
}

/// Minkowski functional `inf { t > 0 : y in t B }` of the unit ball
/// `B = { x : q(x) <= 1 }`, computed by bracketing and bisection on the
/// membership predicate only.
///
/// The result is within `tol` of the closed-form [`ClassicalSeminorm::eval`],
/// which makes the two a cross-check of each other.
pub fn minkowski_functional(ball: &ClassicalSeminorm, y: &Point, tol: f64) -> Result<f64> {
    check_dim(ball.dim(), y.dim())?;
    check_positive("tol", tol)?;
    let inside = |t: f64| {
        let scaled: Vec<f64> = y.coords().iter().map(|x| x / t).collect();
        ball.eval_slice(&scaled) <= 1.0
    };
    if y.is_zero() {
        return Ok(0.0);
    }
    // gauge <= tol / 2, which also covers the kernel of q
    let mut lo = tol / 2.0;
    if inside(lo) {
        return Ok(0.0);
    }
    let mut hi = lo.max(1.0);
    while !inside(hi) {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidArgument("gauge bracket overflowed".into()));
        }
    }
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo + (hi - lo) / 2.0)
}

/// Nonempty list of seminorms on a common `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormFamily {
    members: Vec<ClassicalSeminorm>,
}

impl SeminormFamily {
    pub fn new(members: Vec<ClassicalSeminorm>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("seminorm family must be nonempty".into()))?;
        let dim = first.dim();
        for m in &members {
            check_dim(dim, m.dim())?;
        }
        Ok(SeminormFamily { members })
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn members(&self) -> &[ClassicalSeminorm] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Outcome of a separation check.
#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// Decided algebraically: every coordinate axis is seen by some member.
    Separating,
    /// No candidate lies in the common kernel; not a proof.
    SeparatingOnSamples,
    /// A nonzero point on which every member vanishes.
    Witness(Point),
}

impl Separation {
    pub fn is_separating(&self) -> bool {
        !matches!(self, Separation::Witness(_))
    }
}

/// Canonical basis vectors followed by `random` seeded points in `[-1, 1]^d`.
pub fn canonical_candidates(dim: usize, random: usize, seed: u64) -> Vec<Point> {
    let mut out: Vec<Point> = (0..dim).map(|i| Point::basis(dim, i)).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..random).map(|_| Point::from_vec_unchecked(sampling::vector(&mut rng, dim, 1.0))));
    out
}

/// Searches `candidates` for a nonzero point invisible to every member.
///
/// Families made only of [`SeminormKind::WeightedAbs`] members are decided
/// exactly (separating iff every axis is covered); otherwise the answer is
/// only as good as the candidate set.
pub fn is_separating(fam: &SeminormFamily, candidates: &[Point]) -> Result<Separation> {
    for c in candidates {
        check_dim(fam.dim(), c.dim())?;
    }
    let in_kernel = |y: &Point| !y.is_zero() && fam.members().iter().all(|q| q.eval_slice(y.coords()) == 0.0);
    if let Some(w) = candidates.iter().find(|y| in_kernel(y)) {
        return Ok(Separation::Witness(w.clone()));
    }
    let all_abs = fam
        .members()
        .iter()
        .all(|q| matches!(q.kind(), SeminormKind::WeightedAbs { .. }));
    if !all_abs {
        return Ok(Separation::SeparatingOnSamples);
    }
    let mut covered = vec![false; fam.dim()];
    for q in fam.members() {
        for a in q.covered_axes() {
            covered[a] = true;
        }
    }
    Ok(match covered.iter().position(|&c| !c) {
        Some(axis) => Separation::Witness(Point::basis(fam.dim(), axis)),
        None => Separation::Separating,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn point_rejects_empty_and_non_finite() {
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn closed_forms() {
        let sup = ClassicalSeminorm::weighted_sup(vec![1.0, 1.0]).unwrap();
        assert_eq!(sup.eval(&p(&[2.0, 1.0])).unwrap(), 2.0);
        let ell = ClassicalSeminorm::ellipsoid(vec![2.0, 1.0]).unwrap();
        assert!((ell.eval(&p(&[2.0, 2.0])).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        let abs = ClassicalSeminorm::weighted_abs(3, 1, 2.5).unwrap();
        assert_eq!(abs.eval(&p(&[7.0, -2.0, 9.0])).unwrap(), 5.0);
    }

    #[test]
    fn origin_maps_to_zero() {
        for q in [
            ClassicalSeminorm::weighted_sup(vec![1.0, 3.0]).unwrap(),
            ClassicalSeminorm::ellipsoid(vec![0.5, 2.0]).unwrap(),
            ClassicalSeminorm::weighted_abs(2, 0, 1.0).unwrap(),
        ] {
            assert_eq!(q.eval(&Point::zeros(2)).unwrap(), 0.0);
            assert_eq!(minkowski_functional(&q, &Point::zeros(2), 1e-10).unwrap(), 0.0);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let sup = ClassicalSeminorm::weighted_sup(vec![1.0, 1.0]).unwrap();
        assert_eq!(
            sup.eval(&p(&[1.0])).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 1 }
        );
        assert!(minkowski_functional(&sup, &p(&[1.0, 2.0, 3.0]), 1e-9).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(ClassicalSeminorm::weighted_abs(2, 2, 1.0).is_err());
        assert!(ClassicalSeminorm::weighted_abs(2, 0, 0.0).is_err());
        assert!(ClassicalSeminorm::weighted_sup(vec![1.0, -1.0]).is_err());
        assert!(ClassicalSeminorm::ellipsoid(vec![1.0, 0.0]).is_err());
        assert!(SeminormFamily::new(vec![]).is_err());
        assert!(SeminormFamily::new(vec![
            ClassicalSeminorm::weighted_sup(vec![1.0]).unwrap(),
            ClassicalSeminorm::weighted_sup(vec![1.0, 1.0]).unwrap(),
        ])
        .is_err());
    }

    #[test]
    fn bisection_matches_closed_form() {
        let sup = ClassicalSeminorm::weighted_sup(vec![1.0, 1.0]).unwrap();
        let g = minkowski_functional(&sup, &p(&[2.0, 1.0]), 1e-10).unwrap();
        assert!((g - 2.0).abs() <= 1e-10);
        let ell = ClassicalSeminorm::ellipsoid(vec![2.0, 1.0]).unwrap();
        let g = minkowski_functional(&ell, &p(&[2.0, 2.0]), 1e-10).unwrap();
        assert!((g - 5f64.sqrt()).abs() <= 1e-10);
        let tiny = minkowski_functional(&ell, &p(&[1e-4, 0.0]), 1e-10).unwrap();
        assert!((tiny - 5e-5).abs() <= 1e-10);
        let big = minkowski_functional(&ell, &p(&[0.0, 1e6]), 1e-6).unwrap();
        assert!((big - 1e6).abs() <= 1e-6);
    }

    #[test]
    fn gauge_vanishes_on_kernel() {
        let abs = ClassicalSeminorm::weighted_abs(2, 0, 1.0).unwrap();
        assert_eq!(minkowski_functional(&abs, &p(&[0.0, 1.0]), 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn separation_examples() {
        let a0 = ClassicalSeminorm::weighted_abs(2, 0, 1.0).unwrap();
        let a1 = ClassicalSeminorm::weighted_abs(2, 1, 1.0).unwrap();
        let cands = canonical_candidates(2, 32, 0);

        let both = SeminormFamily::new(vec![a0.clone(), a1]).unwrap();
        assert_eq!(is_separating(&both, &cands).unwrap(), Separation::Separating);

        let only0 = SeminormFamily::new(vec![a0.clone()]).unwrap();
        assert_eq!(
            is_separating(&only0, &cands).unwrap(),
            Separation::Witness(p(&[0.0, 1.0]))
        );
        // the algebraic check still finds the gap with no useful candidates
        assert_eq!(
            is_separating(&only0, &[p(&[1.0, 1.0])]).unwrap(),
            Separation::Witness(p(&[0.0, 1.0]))
        );

        let ell = SeminormFamily::new(vec![ClassicalSeminorm::ellipsoid(vec![1.0, 1.0]).unwrap()]).unwrap();
        assert!(is_separating(&ell, &cands).unwrap().is_separating());

        let sup =
            SeminormFamily::new(vec![ClassicalSeminorm::weighted_sup(vec![1.0, 0.0]).unwrap()]).unwrap();
        assert_eq!(
            is_separating(&sup, &cands).unwrap(),
            Separation::Witness(p(&[0.0, 1.0]))
        );
    }

    #[test]
    fn candidates_start_with_basis() {
        let c = canonical_candidates(3, 5, 9);
        assert_eq!(c.len(), 8);
        assert_eq!(c[2], p(&[0.0, 0.0, 1.0]));
        assert_eq!(c, canonical_candidates(3, 5, 9));
    }
}

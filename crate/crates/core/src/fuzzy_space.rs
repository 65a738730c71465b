//! Fuzzy seminorms induced by classical seminorms, fuzzy balls, and the
//! fuzzy seminorm axiom checker.

use rand::Rng;
use serde::Serialize;

use crate::axioms::{AxiomId, AxiomReport, Witness};
use crate::error::{check_dim, check_open_unit, check_positive, Error, Result};
use crate::parallel;
use crate::sampling;
use crate::seminorms::{ClassicalSeminorm, Point};
use crate::tnorm::TNorm;

/// Slack allowed on the inequalities and identities checked by
/// [`check_fuzzy_axioms`] other than nullity, which is exact.
pub const FUZZY_AXIOM_TOL: f64 = 1e-12;

/// `epsilon` used by the tail check `p(y, T) >= 1 - epsilon`.
pub const TAIL_EPSILON: f64 = 1e-3;

/// Standard membership `t / (t + q)` for `t > 0`, and `0` otherwise.
#[inline]
pub fn standard_membership(q: f64, t: f64) -> f64 {
    if t > 0.0 {
        t / (t + q)
    } else {
        0.0
    }
}

/// Classical radius below which `t / (t + q)` exceeds `1 - alpha`:
/// `q < t * alpha / (1 - alpha)`.
pub fn classical_radius(t: f64, alpha: f64) -> f64 {
    t * alpha / (1.0 - alpha)
}

/// The fuzzy seminorm `p(y, t) = t / (t + q(y))` induced by `base`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzySeminorm {
    base: ClassicalSeminorm,
}

impl FuzzySeminorm {
    pub fn standard(base: ClassicalSeminorm) -> Self {
        FuzzySeminorm { base }
    }

    pub fn base(&self) -> &ClassicalSeminorm {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn eval(&self, y: &Point, t: f64) -> Result<f64> {
        check_dim(self.base.dim(), y.dim())?;
        if !t.is_finite() {
            return Err(Error::Domain {
                what: "t",
                value: t,
                expected: "finite reals",
            });
        }
        Ok(self.eval_slice(y.coords(), t))
    }

    #[inline]
    pub fn eval_slice(&self, y: &[f64], t: f64) -> f64 {
        standard_membership(self.base.eval_slice(y), t)
    }
}

/// `B(center, alpha, t) = { z : p(center - z, t) > 1 - alpha }`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyBall {
    center: Point,
    alpha: f64,
    t: f64,
    seminorm: FuzzySeminorm,
}

impl FuzzyBall {
    pub fn new(center: Point, alpha: f64, t: f64, seminorm: FuzzySeminorm) -> Result<Self> {
        check_dim(seminorm.dim(), center.dim())?;
        check_open_unit("alpha", alpha)?;
        check_positive("t", t)?;
        Ok(FuzzyBall {
            center,
            alpha,
            t,
            seminorm,
        })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Strict membership test, no tolerance.
    pub fn contains(&self, z: &Point) -> Result<bool> {
        check_dim(self.center.dim(), z.dim())?;
        let diff = &self.center - z;
        Ok(self.seminorm.eval_slice(diff.coords(), self.t) > 1.0 - self.alpha)
    }
}

/// One sample of the fuzzy axiom checker.
#[derive(Debug, Clone)]
struct Sample {
    y: Vec<f64>,
    z: Vec<f64>,
    t: f64,
    s: f64,
    v: f64,
}

impl Sample {
    fn witness(&self) -> Witness {
        Witness::Fuzzy {
            y: self.y.clone(),
            z: self.z.clone(),
            t: self.t,
            s: self.s,
            v: self.v,
        }
    }
}

fn samples(dim: usize, count: usize, seed: u64) -> Vec<Sample> {
    let mut rng = sampling::rng(seed);
    (0..count)
        .map(|i| {
            let mut y = sampling::vector(&mut rng, dim, 5.0);
            let z = sampling::vector(&mut rng, dim, 5.0);
            let mut t = rng.gen_range(-2.0..=10.0);
            let s = rng.gen_range(-2.0..=10.0);
            let v = sampling::nonzero_scalar(&mut rng, 5.0);
            // pin a share of the samples to the boundary cases
            match i % 8 {
                0 => t = 0.0,
                1 => y.iter_mut().for_each(|c| *c = 0.0),
                _ => {}
            }
            Sample { y, z, t, s, v }
        })
        .collect()
}

/// The four fuzzy seminorm axiom reports plus the literal variant of the
/// scaling axiom, which is evaluated and reported but not part of
/// [`FuzzyAxiomSuite::all_passed`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzyAxiomSuite {
    /// Null-below-zero, scaling, triangle, monotone-tail, in that order.
    pub reports: Vec<AxiomReport>,
    pub literal_scaling: AxiomReport,
}

impl FuzzyAxiomSuite {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

/// Checks the fuzzy seminorm axioms for `p` relative to the t-norm `tn`.
pub fn check_fuzzy_axioms(
    p: &FuzzySeminorm,
    tn: TNorm,
    sample_count: usize,
    seed: u64,
) -> Result<FuzzyAxiomSuite> {
    check_membership_axioms(p.base(), |y, t| p.eval_slice(y, t), tn, sample_count, seed)
}

/// Axiom engine for an arbitrary membership function built over `base`.
///
/// `base` is only used to place the tail probe at
/// `T = q(y) (1 - eps) / eps`, where the standard construction equals
/// `1 - eps` exactly.
pub fn check_membership_axioms<F>(
    base: &ClassicalSeminorm,
    membership: F,
    tn: TNorm,
    sample_count: usize,
    seed: u64,
) -> Result<FuzzyAxiomSuite>
where
    F: Fn(&[f64], f64) -> f64 + Sync + Send,
{
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample_count must be at least 1".into()));
    }
    let set = samples(base.dim(), sample_count, seed);
    let n = set.len();
    let p = &membership;
    let scale = |y: &[f64], v: f64| y.iter().map(|c| v * c).collect::<Vec<_>>();
    let positive = |t: f64| if t > 0.0 { t } else { t.abs() + 0.5 };

    let null = parallel::scan(&set, 0.0, |s| if s.t <= 0.0 { p(&s.y, s.t).abs() } else { 0.0 });
    let scaling = parallel::scan(&set, FUZZY_AXIOM_TOL, |s| {
        let t = positive(s.t);
        (p(&scale(&s.y, s.v), t) - p(&s.y, t / s.v.abs())).abs()
    });
    let literal = parallel::scan(&set, FUZZY_AXIOM_TOL, |s| {
        let t = positive(s.t);
        (p(&s.y, t) - p(&scale(&s.y, s.v), t / s.v.abs())).abs()
    });
    let triangle = parallel::scan(&set, FUZZY_AXIOM_TOL, |s| {
        let sum: Vec<f64> = s.y.iter().zip(&s.z).map(|(a, b)| a + b).collect();
        tn.apply(p(&s.y, s.t), p(&s.z, s.s)) - p(&sum, s.t + s.s)
    });
    let tail = parallel::scan(&set, FUZZY_AXIOM_TOL, |s| {
        let lower = p(&s.y, s.t);
        let upper = p(&s.y, s.t + s.s.abs());
        let q = base.eval_slice(&s.y);
        let threshold = q * (1.0 - TAIL_EPSILON) / TAIL_EPSILON;
        let far = if threshold > 0.0 { threshold } else { 1.0 };
        (lower - upper).max((1.0 - TAIL_EPSILON) - p(&s.y, far))
    });

    let w = |i: usize| set[i].witness();
    // scaling checks ran at the positive stand-in for t
    let ws = |i: usize| {
        Sample {
            t: positive(set[i].t),
            ..set[i].clone()
        }
        .witness()
    };
    Ok(FuzzyAxiomSuite {
        reports: vec![
            AxiomReport::from_scan(AxiomId::NullBelowZero, null, n, w),
            AxiomReport::from_scan(AxiomId::Scaling, scaling, n, ws),
            AxiomReport::from_scan(AxiomId::Triangle, triangle, n, w),
            AxiomReport::from_scan(AxiomId::MonotoneTail, tail, n, w),
        ],
        literal_scaling: AxiomReport::from_scan(AxiomId::ScalingLiteral, literal, n, ws),
    })
}

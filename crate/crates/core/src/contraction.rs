//! Self-maps, Lipschitz estimates relative to a seminorm, analytic
//! `(delta, beta)` certificates for affine maps and the empirical
//! contractivity check.
//!
//! Under the standard fuzzification `p(x, t) = t / (t + q(x))` the
//! contraction implication reduces to classical radii:
//!
//! ```text
//! p(y - z, eps + delta) > 1 - (alpha + beta)  <=>  q(y - z) < (eps + delta)(alpha + beta) / (1 - alpha - beta)
//! p(F y - F z, eps)     > 1 - alpha           <=   q(y - z) < eps alpha / (L (1 - alpha))
//! ```
//!
//! so a certificate only has to order the two radii.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_open_unit, check_positive, Error, Result};
use crate::fuzzy_space::FuzzySeminorm;
use crate::linalg::{self, Matrix};
use crate::parallel;
use crate::sampling;
use crate::seminorms::{ClassicalSeminorm, Point, SeminormFamily, SeminormKind};

/// `beta` is at most this fraction of `1 - alpha`.
pub const BETA_FRACTION: f64 = 0.1;
/// `beta` is at most this fraction of the largest `beta` admitting `delta > 0`.
pub const BETA_SLACK: f64 = 0.5;
/// Relative amount by which the certified `delta` stays below the maximum.
pub const DELTA_SAFETY: f64 = 1e-9;
/// Upper bound on `delta / epsilon`; only binds for (near-)constant maps.
pub const DELTA_CAP: f64 = 1e3;
/// Relative margin added to power-iteration spectral norms.
pub const SPECTRAL_MARGIN: f64 = 1e-9;

pub type RegisteredFn = fn(&[f64]) -> Vec<f64>;

const REGISTRY: &[(&str, RegisteredFn)] = &[
    ("identity", |y| y.to_vec()),
    ("negate", |y| y.iter().map(|x| -x).collect()),
    ("half_tanh", |y| y.iter().map(|x| 0.5 * x.tanh() + 0.25).collect()),
    ("cosine", |y| y.iter().map(|x| x.cos()).collect()),
];

/// Looks up a registered componentwise map by name.
pub fn registered(name: &str) -> Option<RegisteredFn> {
    REGISTRY.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
}

pub fn registered_names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|(n, _)| *n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MapKind {
    /// `y -> A y + b`
    Affine { matrix: Matrix, offset: Point },
    /// A named entry of the map registry, applied componentwise.
    Registered(String),
}

/// The self-map whose fixed point is sought.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapSpec {
    kind: MapKind,
    dim: usize,
}

impl MapSpec {
    pub fn affine(matrix: Matrix, offset: Point) -> Result<Self> {
        check_dim(matrix.dim(), offset.dim())?;
        Ok(MapSpec {
            dim: matrix.dim(),
            kind: MapKind::Affine { matrix, offset },
        })
    }

    pub fn registered(name: &str, dim: usize) -> Result<Self> {
        if registered(name).is_none() {
            return Err(Error::UnknownMap(name.to_owned()));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(MapSpec {
            kind: MapKind::Registered(name.to_owned()),
            dim,
        })
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.kind, MapKind::Affine { .. })
    }

    pub fn apply(&self, y: &Point) -> Result<Point> {
        check_dim(self.dim, y.dim())?;
        let out = self.apply_slice(y.coords())?;
        Point::new(out)
    }

    /// Applies the map without wrapping the result; the output may contain
    /// non-finite values when the input is huge.
    pub fn apply_slice(&self, y: &[f64]) -> Result<Vec<f64>> {
        match &self.kind {
            MapKind::Affine { matrix, offset } => {
                let mut out = matrix.mul_vec(y);
                out.iter_mut().zip(offset.coords()).for_each(|(o, b)| *o += b);
                Ok(out)
            }
            MapKind::Registered(name) => {
                let f = registered(name).ok_or_else(|| Error::UnknownMap(name.clone()))?;
                Ok(f(y))
            }
        }
    }
}

/// Estimate of `sup q(F y - F z) / q(y - z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzEstimate {
    pub value: f64,
    /// `true` for closed-form upper bounds usable in certificates; `false`
    /// for sampled suprema, which are only lower bounds.
    pub certifying: bool,
}

/// Lipschitz constant of `map` relative to `q`.
///
/// Affine maps get closed forms: weighted max row sums for sup and abs
/// seminorms, and the scaled spectral norm (power iteration plus
/// [`SPECTRAL_MARGIN`]) for ellipsoid gauges. Registered maps get a sampled
/// ratio supremum over `sample_count` seeded pairs.
pub fn operator_lipschitz(
    map: &MapSpec,
    q: &ClassicalSeminorm,
    sample_count: usize,
    seed: u64,
) -> Result<LipschitzEstimate> {
    check_dim(map.dim(), q.dim())?;
    let MapKind::Affine { matrix, .. } = map.kind() else {
        return Ok(LipschitzEstimate {
            value: sampled_lipschitz(map, q, sample_count, seed)?,
            certifying: false,
        });
    };
    let n = matrix.dim();
    let covered = q.covered_axes();
    let mut seen = vec![false; n];
    covered.iter().for_each(|&i| seen[i] = true);
    // q(y) = 0 must force q(A y) = 0; kernels are coordinate subspaces, so
    // covered rows must ignore uncovered columns
    for &i in &covered {
        if let Some(j) = (0..n).find(|&j| !seen[j] && matrix.get(i, j) != 0.0) {
            return Err(Error::CertificationRefused(format!(
                "A[{i}][{j}] = {} maps the seminorm's kernel outside itself",
                matrix.get(i, j)
            )));
        }
    }
    let value = match q.kind() {
        SeminormKind::WeightedAbs { axis, .. } => matrix.get(*axis, *axis).abs(),
        SeminormKind::WeightedSup { weights } => covered
            .iter()
            .map(|&i| {
                covered
                    .iter()
                    .map(|&j| weights[i] * matrix.get(i, j).abs() / weights[j])
                    .sum::<f64>()
            })
            .fold(0.0, f64::max),
        SeminormKind::EllipsoidGauge { semi_axes } => {
            let d: Vec<f64> = semi_axes.iter().map(|a| 1.0 / a).collect();
            linalg::spectral_norm(&matrix.similarity_diag(&d), 1e-13, 100_000) * (1.0 + SPECTRAL_MARGIN)
        }
    };
    Ok(LipschitzEstimate {
        value,
        certifying: true,
    })
}

/// Largest observed `q(F y - F z) / q(y - z)` over seeded pairs in `[-5, 5]^d`.
pub fn sampled_lipschitz(
    map: &MapSpec,
    q: &ClassicalSeminorm,
    sample_count: usize,
    seed: u64,
) -> Result<f64> {
    check_dim(map.dim(), q.dim())?;
    let mut rng = sampling::rng(seed);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..sample_count.max(1))
        .map(|k| {
            let y = sampling::vector(&mut rng, map.dim(), 5.0);
            // every other pair is a small perturbation, probing local slope
            let r = if k % 2 == 0 { 5.0 } else { 1e-3 };
            let z = y.iter().map(|c| c + rng.gen_range(-r..=r)).collect();
            (y, z)
        })
        .collect();
    let ratios = parallel::map(&pairs, |(y, z)| -> Result<f64> {
        let dq = q.eval_slice(&diff(y, z));
        if dq == 0.0 {
            return Ok(0.0);
        }
        let fy = map.apply_slice(y)?;
        let fz = map.apply_slice(z)?;
        Ok(q.eval_slice(&diff(&fy, &fz)) / dq)
    });
    ratios
        .into_iter()
        .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r)))
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Parameters making the fuzzy B-contraction implication hold for one
/// seminorm of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionCertificate {
    pub seminorm_index: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub delta: f64,
    pub beta: f64,
    pub lipschitz: f64,
}

impl ContractionCertificate {
    /// Classical radius below which the hypothesis lower bound holds.
    pub fn hypothesis_radius(&self) -> f64 {
        (self.epsilon + self.delta) * (self.alpha + self.beta) / (1.0 - self.alpha - self.beta)
    }

    /// Classical radius below which the conclusion is guaranteed.
    pub fn conclusion_radius(&self) -> f64 {
        if self.lipschitz == 0.0 {
            f64::INFINITY
        } else {
            self.epsilon * self.alpha / (self.lipschitz * (1.0 - self.alpha))
        }
    }

    pub fn invariant_holds(&self) -> bool {
        self.alpha + self.beta < 1.0
            && self.delta > 0.0
            && self.beta > 0.0
            && self.hypothesis_radius() <= self.conclusion_radius()
    }
}

impl fmt::Display for ContractionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate seminorm={}", self.seminorm_index)?;
        writeln!(f, "  lipschitz  = {:.16e}", self.lipschitz)?;
        writeln!(f, "  epsilon    = {:.16e}", self.epsilon)?;
        writeln!(f, "  alpha      = {:.16e}", self.alpha)?;
        writeln!(f, "  delta      = {:.16e}", self.delta)?;
        writeln!(f, "  beta       = {:.16e}", self.beta)?;
        writeln!(f, "  hypothesis_radius = {:.16e}", self.hypothesis_radius())?;
        write!(f, "  conclusion_radius = {:.16e}", self.conclusion_radius())
    }
}

/// Largest `beta` for which some `delta > 0` satisfies the certificate
/// inequality at Lipschitz constant `l`.
pub fn critical_beta(alpha: f64, l: f64) -> f64 {
    alpha * (1.0 - alpha) * (1.0 - l) / (alpha + l * (1.0 - alpha))
}

/// The `delta` at which `(eps + delta)(alpha + beta)/(1 - alpha - beta)`
/// meets `eps alpha / (l (1 - alpha))`. Infinite when `l == 0`.
pub fn max_delta(epsilon: f64, alpha: f64, beta: f64, l: f64) -> f64 {
    if l == 0.0 {
        return f64::INFINITY;
    }
    epsilon * alpha * (1.0 - alpha - beta) / (l * (1.0 - alpha) * (alpha + beta)) - epsilon
}

/// Certifies an affine map against a single seminorm.
pub fn certify_affine_contraction(
    map: &MapSpec,
    q: &ClassicalSeminorm,
    epsilon: f64,
    alpha: f64,
) -> Result<ContractionCertificate> {
    check_positive("epsilon", epsilon)?;
    check_open_unit("alpha", alpha)?;
    if !map.is_affine() {
        return Err(Error::InvalidArgument(
            "analytic certification needs an affine map; use check_contractive".into(),
        ));
    }
    let l = operator_lipschitz(map, q, 0, 0)?.value;
    if l >= 1.0 {
        return Err(Error::NotAContraction { lipschitz: l });
    }
    let beta = (BETA_FRACTION * (1.0 - alpha)).min(BETA_SLACK * critical_beta(alpha, l));
    let mut delta = (max_delta(epsilon, alpha, beta, l) * (1.0 - DELTA_SAFETY)).min(DELTA_CAP * epsilon);
    let mut cert = ContractionCertificate {
        seminorm_index: 0,
        epsilon,
        alpha,
        delta,
        beta,
        lipschitz: l,
    };
    while !cert.invariant_holds() && delta > 0.0 {
        delta = delta.next_down();
        cert.delta = delta;
    }
    if !cert.invariant_holds() {
        return Err(Error::InvalidArgument(format!(
            "no admissible delta for epsilon={epsilon}, alpha={alpha}, L={l}"
        )));
    }
    Ok(cert)
}

/// Certifies `map` against every member of `family`; entry `i` is the
/// outcome for member `i`.
pub fn certify_family(
    map: &MapSpec,
    family: &SeminormFamily,
    epsilon: f64,
    alpha: f64,
) -> Vec<Result<ContractionCertificate>> {
    family
        .members()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            certify_affine_contraction(map, q, epsilon, alpha).map(|c| ContractionCertificate {
                seminorm_index: i,
                ..c
            })
        })
        .collect()
}

/// Outcome of checking the contraction implication on sample pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub pairs: usize,
    /// Pairs satisfying both hypothesis bounds.
    pub active: usize,
    /// Pairs with `p(y - z, eps + delta) > 1 - (alpha + beta)` that were
    /// excluded only by the upper cap `1 - alpha >= p(y - z, eps + delta)`.
    pub excluded_by_cap: usize,
    pub violations: usize,
    pub first_violation: Option<usize>,
}

impl ImplicationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Evaluates the implication
/// `1 - alpha >= p(y - z, eps + delta) > 1 - (alpha + beta)  =>  p(F y - F z, eps) > 1 - alpha`
/// on every pair.
pub fn check_implication(
    map: &MapSpec,
    p: &FuzzySeminorm,
    cert: &ContractionCertificate,
    pairs: &[(Point, Point)],
) -> Result<ImplicationReport> {
    let ContractionCertificate {
        epsilon,
        alpha,
        delta,
        beta,
        ..
    } = *cert;
    #[derive(Clone, Copy)]
    enum Outcome {
        Inactive,
        Capped,
        Holds,
        Fails,
    }
    let outcomes = parallel::map(pairs, |(y, z)| -> Result<Outcome> {
        let before = p.eval_slice(&diff(y.coords(), z.coords()), epsilon + delta);
        if before <= 1.0 - (alpha + beta) {
            return Ok(Outcome::Inactive);
        }
        if before > 1.0 - alpha {
            return Ok(Outcome::Capped);
        }
        let after = p.eval_slice(
            &diff(&map.apply_slice(y.coords())?, &map.apply_slice(z.coords())?),
            epsilon,
        );
        Ok(if after > 1.0 - alpha {
            Outcome::Holds
        } else {
            Outcome::Fails
        })
    });
    let mut report = ImplicationReport {
        pairs: pairs.len(),
        active: 0,
        excluded_by_cap: 0,
        violations: 0,
        first_violation: None,
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o? {
            Outcome::Inactive => {}
            Outcome::Capped => report.excluded_by_cap += 1,
            Outcome::Holds => report.active += 1,
            Outcome::Fails => {
                report.active += 1;
                report.violations += 1;
                report.first_violation.get_or_insert(i);
            }
        }
    }
    Ok(report)
}

/// Outcome of [`check_contractive`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractiveReport {
    pub passed: bool,
    pub checked: usize,
    pub first_violation: Option<(Point, Point)>,
    /// Largest `p(y - z, eps + delta) - p(F y - F z, eps)` seen.
    pub max_violation: f64,
    /// Set for registered (nonlinear) maps, whose contractivity is only
    /// ever sampled, never proven.
    pub sampled_not_proven: bool,
}

/// Checks `p(F y - F z, eps) > p(y - z, eps + delta)` wherever the right side
/// is below 1, and `p(F y - F z, eps) = 1` where it equals 1.
pub fn check_contractive(
    map: &MapSpec,
    p: &FuzzySeminorm,
    epsilon: f64,
    delta: f64,
    pairs: &[(Point, Point)],
) -> Result<ContractiveReport> {
    check_positive("epsilon", epsilon)?;
    check_positive("delta", delta)?;
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("pairs must be nonempty".into()));
    }
    for (y, z) in pairs {
        check_dim(map.dim(), y.dim())?;
        check_dim(map.dim(), z.dim())?;
    }
    let scan = parallel::scan(pairs, 0.0, |(y, z)| {
        let before = p.eval_slice(&diff(y.coords(), z.coords()), epsilon + delta);
        let (Ok(fy), Ok(fz)) = (map.apply_slice(y.coords()), map.apply_slice(z.coords())) else {
            return f64::NAN;
        };
        let after = p.eval_slice(&diff(&fy, &fz), epsilon);
        if before == 1.0 {
            1.0 - after
        } else if after > before {
            0.0
        } else {
            // equality is a failure of the strict inequality too
            (before - after).max(f64::MIN_POSITIVE)
        }
    });
    Ok(ContractiveReport {
        passed: scan.first_failure.is_none(),
        checked: pairs.len(),
        first_violation: scan.first_failure.map(|i| pairs[i].clone()),
        max_violation: scan.max_violation,
        sampled_not_proven: !map.is_affine(),
    })
}

/// Seeded pairs concentrated around the classical radius `radius` of `q`:
/// a quarter uniform in `[-5, 5]^d`, a tenth with `y = z`, the rest at
/// `q(y - z) = radius * (1 + u)` with `u` spread over `[-0.5, 0.5]` and a
/// share within `1e-9` of the threshold.
pub fn threshold_pairs(q: &ClassicalSeminorm, radius: f64, count: usize, seed: u64) -> Vec<(Point, Point)> {
    let dim = q.dim();
    let mut rng = sampling::rng(seed);
    let covered = q.covered_axes();
    (0..count)
        .map(|k| {
            let z = sampling::vector(&mut rng, dim, 5.0);
            let y = match k % 20 {
                0..=4 => sampling::vector(&mut rng, dim, 5.0),
                5 | 6 => z.clone(),
                slot => {
                    let mut dir = sampling::vector(&mut rng, dim, 1.0);
                    if q.eval_slice(&dir) == 0.0 {
                        dir[covered[k % covered.len()]] = 1.0;
                    }
                    let u = if slot < 12 {
                        rng.gen_range(-1e-9..=1e-9)
                    } else {
                        rng.gen_range(-0.5..=0.5)
                    };
                    let scale = radius * (1.0 + u) / q.eval_slice(&dir);
                    z.iter().zip(&dir).map(|(a, d)| a + scale * d).collect()
                }
            };
            (Point::from_vec_unchecked(y), Point::from_vec_unchecked(z))
        })
        .collect()
}

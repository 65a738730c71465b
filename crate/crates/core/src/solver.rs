//! The averaged fixed-point iteration `y_{n+1} = l_n y_n + (1 - l_n) F(y_n)`
//! with fuzzy stopping, trace diagnostics and a classical oracle.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::contraction::{MapKind, MapSpec};
use crate::error::{check_dim, check_open_unit, check_positive, Error, Result};
use crate::fuzzy_space::{classical_radius, standard_membership};
use crate::linalg;
use crate::parallel;
use crate::sampling;
use crate::seminorms::{
    canonical_candidates, is_separating, ClassicalSeminorm, Point, SeminormFamily, Separation,
};
use crate::tnorm::TNorm;

/// Any coordinate beyond this magnitude aborts the run as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e150;
/// Slack on `membership_fix` nondecreasing along a trace.
pub const MONOTONICITY_TOL: f64 = 1e-12;
/// Relative slack on the geometric envelope `L^n q(y_1 - y_0)`.
pub const ENVELOPE_SLACK: f64 = 1e-9;
/// Residuals are computed in floating point, so the envelope also allows
/// `ROUNDOFF_ULPS * EPSILON * (1 + q(y_n))` of absolute error.
pub const ROUNDOFF_ULPS: f64 = 64.0;

/// Averaging weights `l_n`, all in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LambdaSchedule {
    /// Plain Picard iteration, `l_n = 0`.
    Zero,
    Constant(f64),
    /// `l_n = 1 - 1/(n+1)`, kept strictly below 1.
    Harmonic,
}

impl LambdaSchedule {
    pub fn constant(value: f64) -> Result<Self> {
        if (0.0..1.0).contains(&value) {
            Ok(LambdaSchedule::Constant(value))
        } else {
            Err(Error::Domain {
                what: "lambda",
                value,
                expected: "[0, 1)",
            })
        }
    }

    pub fn lambda(&self, n: usize) -> f64 {
        match *self {
            LambdaSchedule::Zero => 0.0,
            LambdaSchedule::Constant(v) => v,
            LambdaSchedule::Harmonic => (1.0 - 1.0 / (n as f64 + 1.0)).min(1.0 - f64::EPSILON),
        }
    }
}

/// Everything [`iterate`] needs. Fields are public; [`SolverConfig::validate`]
/// runs before every solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub family: SeminormFamily,
    pub tnorm: TNorm,
    pub map: MapSpec,
    pub y0: Point,
    pub schedule: LambdaSchedule,
    pub t_probe: f64,
    pub alpha_tol: f64,
    pub max_iters: usize,
    pub cauchy_window: usize,
    /// Allowed sup-distance to the oracle; defaults to ten times
    /// [`SolverConfig::classical_tolerance`].
    pub oracle_tol: Option<f64>,
}

impl SolverConfig {
    pub const DEFAULT_T_PROBE: f64 = 1.0;
    pub const DEFAULT_ALPHA_TOL: f64 = 1e-9;
    pub const DEFAULT_MAX_ITERS: usize = 1000;
    pub const DEFAULT_CAUCHY_WINDOW: usize = 64;

    pub fn new(family: SeminormFamily, map: MapSpec, y0: Point) -> Result<Self> {
        let cfg = SolverConfig {
            family,
            tnorm: TNorm::default(),
            map,
            y0,
            schedule: LambdaSchedule::Zero,
            t_probe: Self::DEFAULT_T_PROBE,
            alpha_tol: Self::DEFAULT_ALPHA_TOL,
            max_iters: Self::DEFAULT_MAX_ITERS,
            cauchy_window: Self::DEFAULT_CAUCHY_WINDOW,
            oracle_tol: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.family.dim();
        check_dim(d, self.map.dim())?;
        check_dim(d, self.y0.dim())?;
        check_positive("t_probe", self.t_probe)?;
        check_open_unit("alpha_tol", self.alpha_tol)?;
        if let LambdaSchedule::Constant(v) = self.schedule {
            LambdaSchedule::constant(v)?;
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be positive".into()));
        }
        if self.cauchy_window == 0 {
            return Err(Error::InvalidArgument("cauchy_window must be positive".into()));
        }
        if let Some(tol) = self.oracle_tol {
            check_positive("oracle_tol", tol)?;
        }
        if let Separation::Witness(w) = is_separating(&self.family, &canonical_candidates(d, 64, 0))? {
            return Err(Error::InvalidArgument(format!(
                "seminorm family is not separating: every member vanishes at {:?}",
                w.coords()
            )));
        }
        Ok(())
    }

    /// Classical residual at which the membership `t / (t + q)` reaches the
    /// stopping threshold `1 - alpha_tol`.
    pub fn classical_tolerance(&self) -> f64 {
        classical_radius(self.t_probe, self.alpha_tol)
    }

    pub fn effective_oracle_tol(&self) -> f64 {
        self.oracle_tol.unwrap_or(10.0 * self.classical_tolerance())
    }
}

/// One iteration of the trace. Vectors are indexed by seminorm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub n: usize,
    pub y: Point,
    /// `q(y_{n+1} - y_n)`
    pub residual_step: Vec<f64>,
    /// `q(y_n - F(y_n))`
    pub residual_fix: Vec<f64>,
    pub membership_step: Vec<f64>,
    pub membership_fix: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    Converged,
    MaxIters,
    /// The iterate produced at `step` left the finite range.
    Diverged {
        step: usize,
    },
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Converged => f.write_str("converged"),
            Termination::MaxIters => f.write_str("max-iters"),
            Termination::Diverged { step } => write!(f, "diverged at step {step}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub steps: Vec<StepRecord>,
    pub terminated: Termination,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// CSV with one row per step and 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let Some(first) = self.steps.first() else {
            return String::from("n\n");
        };
        let d = first.y.dim();
        let k = first.residual_step.len();
        let mut out = String::from("n");
        for i in 0..d {
            write!(out, ",y_{i}").unwrap();
        }
        for i in 0..k {
            write!(out, ",q{i}_step,q{i}_fix,p{i}_step,p{i}_fix").unwrap();
        }
        out.push('\n');
        for s in &self.steps {
            write!(out, "{}", s.n).unwrap();
            for c in s.y.coords() {
                write!(out, ",{c:.16e}").unwrap();
            }
            for i in 0..k {
                write!(
                    out,
                    ",{:.16e},{:.16e},{:.16e},{:.16e}",
                    s.residual_step[i], s.residual_fix[i], s.membership_step[i], s.membership_fix[i]
                )
                .unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointResult {
    pub point: Point,
    pub trace: IterationTrace,
    pub oracle_point: Option<Point>,
    /// Sup-distance between `point` and `oracle_point`.
    pub oracle_gap: Option<f64>,
    pub oracle_tol: f64,
}

impl FixedPointResult {
    pub fn converged(&self) -> bool {
        self.trace.terminated == Termination::Converged
    }

    /// `None` when there is no oracle.
    pub fn oracle_ok(&self) -> Option<bool> {
        self.oracle_gap.map(|g| g <= self.oracle_tol)
    }
}

fn in_range(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite() && x.abs() <= DIVERGENCE_BOUND)
}

/// Runs the iteration until every seminorm sees both
/// `p(y_{n+1} - y_n, t_probe)` and `p(y_n - F(y_n), t_probe)` above
/// `1 - alpha_tol`, or `max_iters` steps have been taken.
///
/// On convergence the returned point is the `y_n` of the last record. After
/// `max_iters` it is the newest iterate; after divergence, the last finite one.
pub fn iterate(cfg: &SolverConfig) -> Result<FixedPointResult> {
    cfg.validate()?;
    let members = cfg.family.members();
    let threshold = 1.0 - cfg.alpha_tol;
    let mut y = cfg.y0.coords().to_vec();
    let mut steps = Vec::new();
    let mut terminated = Termination::MaxIters;

    for n in 0..cfg.max_iters {
        let fy = cfg.map.apply_slice(&y)?;
        let lambda = cfg.schedule.lambda(n);
        let next: Vec<f64> = if lambda == 0.0 {
            fy.clone()
        } else {
            y.iter()
                .zip(&fy)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect()
        };
        if !in_range(&fy) || !in_range(&next) {
            terminated = Termination::Diverged { step: n + 1 };
            break;
        }
        let fix: Vec<f64> = y.iter().zip(&fy).map(|(a, b)| a - b).collect();
        let step: Vec<f64> = next.iter().zip(&y).map(|(a, b)| a - b).collect();
        let residual_step: Vec<f64> = members.iter().map(|q| q.eval_slice(&step)).collect();
        let residual_fix: Vec<f64> = members.iter().map(|q| q.eval_slice(&fix)).collect();
        let membership_step: Vec<f64> = residual_step
            .iter()
            .map(|&r| standard_membership(r, cfg.t_probe))
            .collect();
        let membership_fix: Vec<f64> = residual_fix
            .iter()
            .map(|&r| standard_membership(r, cfg.t_probe))
            .collect();
        let done = membership_step
            .iter()
            .chain(&membership_fix)
            .all(|&m| m > threshold);
        steps.push(StepRecord {
            n,
            y: Point::from_vec_unchecked(y.clone()),
            residual_step,
            residual_fix,
            membership_step,
            membership_fix,
        });
        if done {
            terminated = Termination::Converged;
            break;
        }
        y = next;
    }
    log::debug!("iteration finished after {} steps: {terminated}", steps.len());

    let point = Point::from_vec_unchecked(y);
    let oracle_point = match cfg.map.kind() {
        MapKind::Affine { .. } => match oracle_affine_fixed_point(&cfg.map) {
            Ok(p) => Some(p),
            Err(e) => {
                log::info!("no oracle: {e}");
                None
            }
        },
        MapKind::Registered(_) => None,
    };
    let oracle_gap = oracle_point.as_ref().map(|o| o.sup_distance(&point));
    Ok(FixedPointResult {
        point,
        trace: IterationTrace { steps, terminated },
        oracle_point,
        oracle_gap,
        oracle_tol: cfg.effective_oracle_tol(),
    })
}

/// Solves `(I - A) x = b` directly, without any fuzzy machinery.
pub fn oracle_affine_fixed_point(map: &MapSpec) -> Result<Point> {
    let MapKind::Affine { matrix, offset } = map.kind() else {
        return Err(Error::InvalidArgument("the oracle needs an affine map".into()));
    };
    Point::new(linalg::solve_fixed_point(matrix, offset.coords())?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    /// Per seminorm, the first `n` with `membership_fix[n] < membership_fix[n-1] - tol`.
    pub first_violation: Vec<Option<usize>>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.first_violation.iter().all(Option::is_none)
    }
}

/// Checks that `p(y_n - F(y_n), t_probe)` never decreases along the trace.
pub fn residual_monotonicity(trace: &IterationTrace) -> Result<MonotonicityReport> {
    if trace.len() < 2 {
        return Err(Error::InvalidArgument(
            "monotonicity needs at least two steps".into(),
        ));
    }
    let k = trace.steps[0].membership_fix.len();
    let first_violation = (0..k)
        .map(|i| {
            trace
                .steps
                .windows(2)
                .find(|w| w[1].membership_fix[i] < w[0].membership_fix[i] - MONOTONICITY_TOL)
                .map(|w| w[1].n)
        })
        .collect();
    Ok(MonotonicityReport { first_violation })
}

/// First `n` at which `residual_step[n] > L^n residual_step[0] (1 + slack)`
/// plus a roundoff floor, for member `seminorm` (evaluated by `q`), if any.
pub fn geometric_envelope_violation(
    trace: &IterationTrace,
    seminorm: usize,
    q: &ClassicalSeminorm,
    lipschitz: f64,
) -> Option<usize> {
    let s0 = trace.steps.first()?.residual_step[seminorm];
    let mut bound = s0;
    for s in &trace.steps {
        let floor = ROUNDOFF_ULPS * f64::EPSILON * (1.0 + q.eval_slice(s.y.coords()));
        if s.residual_step[seminorm] > bound * (1.0 + ENVELOPE_SLACK) + floor {
            return Some(s.n);
        }
        bound *= lipschitz;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyParams {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl CauchyParams {
    /// `q(y_n - y_m)` at or above which
    /// `p(y_n - y_m, eps + delta/2) <= 1 - (alpha + beta/2)`.
    pub fn classical_threshold(&self) -> f64 {
        classical_radius(self.epsilon + self.delta / 2.0, self.alpha + self.beta / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffendingPair {
    pub n: usize,
    pub m: usize,
    pub seminorm: usize,
    pub membership: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyReport {
    pub burn_in: usize,
    pub pairs_checked: usize,
    pub offending: Option<OffendingPair>,
}

impl CauchyReport {
    pub fn clean(&self) -> bool {
        self.offending.is_none()
    }
}

/// Scans `n < m <= n + window` with `n >= burn_in` for pairs with
/// `p(y_n - y_m, eps + delta/2) <= 1 - (alpha + beta/2)`.
///
/// With per-seminorm Lipschitz constants `L < 1` the burn-in is the first `N`
/// with `L^N q(y_1 - y_0) / (1 - L)` below the classical threshold, beyond
/// which a contraction cannot produce such a pair. Without them the whole
/// trace is scanned.
pub fn cauchy_diagnostic(
    trace: &IterationTrace,
    family: &SeminormFamily,
    params: CauchyParams,
    lipschitz: Option<&[f64]>,
    window: usize,
) -> Result<CauchyReport> {
    let CauchyParams {
        epsilon,
        delta,
        alpha,
        beta,
    } = params;
    check_positive("epsilon", epsilon)?;
    check_positive("delta", delta)?;
    check_open_unit("alpha", alpha)?;
    check_open_unit("beta", beta)?;
    if alpha + beta >= 1.0 {
        return Err(Error::InvalidArgument("alpha + beta must be below 1".into()));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    if let Some(ls) = lipschitz {
        check_dim(family.len(), ls.len())?;
    }
    let len = trace.len();
    let theta = params.classical_threshold();
    let burn_in = match (lipschitz, trace.steps.first()) {
        (Some(ls), Some(first)) => ls
            .iter()
            .zip(&first.residual_step)
            .map(|(&l, &s0)| {
                if l.is_nan() || l >= 1.0 {
                    return 0;
                }
                let mut n = 0;
                let mut tail = s0 / (1.0 - l);
                while tail >= theta && n < len {
                    tail *= l;
                    n += 1;
                }
                n
            })
            .max()
            .unwrap_or(0),
        _ => 0,
    };

    let t = epsilon + delta / 2.0;
    let level = 1.0 - (alpha + beta / 2.0);
    let members = family.members();
    let offending_at = |n: usize| -> Option<OffendingPair> {
        let yn = trace.steps[n].y.coords();
        (n + 1..len.min(n + window + 1)).find_map(|m| {
            let d: Vec<f64> = yn
                .iter()
                .zip(trace.steps[m].y.coords())
                .map(|(a, b)| a - b)
                .collect();
            members.iter().enumerate().find_map(|(i, q)| {
                let membership = standard_membership(q.eval_slice(&d), t);
                (membership <= level).then_some(OffendingPair {
                    n,
                    m,
                    seminorm: i,
                    membership,
                })
            })
        })
    };
    let start = burn_in.min(len);
    let first = parallel::find_first(len - start, |k| offending_at(start + k).is_some());
    let offending = first.and_then(|k| offending_at(start + k));
    let pairs_checked = (start..len).map(|n| len.min(n + window + 1) - (n + 1)).sum();
    Ok(CauchyReport {
        burn_in,
        pairs_checked,
        offending,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointCheck {
    pub holds: bool,
    pub membership: f64,
    pub classical_residual: f64,
}

/// `p(U - F(U), t) > 1 - alpha_tol`, with the classical residual alongside.
pub fn verify_fixed_point(
    u: &Point,
    map: &MapSpec,
    p: &crate::fuzzy_space::FuzzySeminorm,
    t: f64,
    alpha_tol: f64,
) -> Result<FixedPointCheck> {
    check_dim(map.dim(), u.dim())?;
    check_dim(p.dim(), u.dim())?;
    check_positive("t", t)?;
    check_open_unit("alpha_tol", alpha_tol)?;
    let fu = map.apply_slice(u.coords())?;
    let r: Vec<f64> = u.coords().iter().zip(&fu).map(|(a, b)| a - b).collect();
    let classical_residual = p.base().eval_slice(&r);
    let membership = standard_membership(classical_residual, t);
    Ok(FixedPointCheck {
        holds: membership > 1.0 - alpha_tol,
        membership,
        classical_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRun {
    pub start: Point,
    pub terminated: Termination,
    pub iterations: usize,
    /// Absent for diverged runs.
    pub point: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub runs: Vec<ProbeRun>,
    /// Over non-diverged runs; `None` with fewer than two.
    pub max_pairwise_distance: Option<f64>,
    /// `min p(U_i - U_j, t_probe)` over pairs and seminorms.
    pub min_pairwise_membership: Option<f64>,
    pub t_probe: f64,
}

impl UniquenessReport {
    pub fn all_converged(&self) -> bool {
        self.runs.iter().all(|r| r.terminated == Termination::Converged)
    }

    pub fn any_diverged(&self) -> bool {
        self.runs
            .iter()
            .any(|r| matches!(r.terminated, Termination::Diverged { .. }))
    }

    /// Whether every pair of limits sits in one fuzzy ball of level `alpha`.
    pub fn pairwise_within(&self, alpha: f64) -> bool {
        self.min_pairwise_membership.is_some_and(|m| m >= 1.0 - alpha)
    }
}

/// Seeded starting points uniform in `[-radius, radius]^dim`.
pub fn seeded_starts(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<Point> {
    let mut rng = sampling::rng(seed);
    (0..count)
        .map(|_| Point::from_vec_unchecked(sampling::vector(&mut rng, dim, radius)))
        .collect()
}

/// Runs [`iterate`] from every start (concurrently when enabled) and
/// compares the limits pairwise. The report lists runs in `starts` order.
pub fn uniqueness_probe(cfg: &SolverConfig, starts: &[Point]) -> Result<UniquenessReport> {
    cfg.validate()?;
    if starts.len() < 2 {
        return Err(Error::InvalidArgument(
            "uniqueness probe needs at least two starts".into(),
        ));
    }
    for s in starts {
        check_dim(cfg.family.dim(), s.dim())?;
    }
    let outcomes = parallel::map(starts, |s| {
        let mut c = cfg.clone();
        c.y0 = s.clone();
        iterate(&c)
    });
    let mut runs = Vec::with_capacity(starts.len());
    for (start, out) in starts.iter().zip(outcomes) {
        let r = out?;
        let diverged = matches!(r.trace.terminated, Termination::Diverged { .. });
        runs.push(ProbeRun {
            start: start.clone(),
            terminated: r.trace.terminated,
            iterations: r.trace.len(),
            point: (!diverged).then_some(r.point),
        });
    }
    let limits: Vec<&Point> = runs.iter().filter_map(|r| r.point.as_ref()).collect();
    let mut max_d: Option<f64> = None;
    let mut min_p: Option<f64> = None;
    for (i, a) in limits.iter().enumerate() {
        for b in &limits[i + 1..] {
            let d = a.sup_distance(b);
            max_d = Some(max_d.map_or(d, |m| m.max(d)));
            let diff = *a - *b;
            for q in cfg.family.members() {
                let p = standard_membership(q.eval_slice(diff.coords()), cfg.t_probe);
                min_p = Some(min_p.map_or(p, |m| m.min(p)));
            }
        }
    }
    Ok(UniquenessReport {
        runs,
        max_pairwise_distance: max_d,
        min_pairwise_membership: min_p,
        t_probe: cfg.t_probe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy_space::FuzzySeminorm;
    use crate::linalg::Matrix;
    use crate::seminorms::ClassicalSeminorm;

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn abs_family() -> SeminormFamily {
        SeminormFamily::new(vec![ClassicalSeminorm::weighted_sup(vec![1.0]).unwrap()]).unwrap()
    }

    fn halving(y0: f64) -> SolverConfig {
        let map = MapSpec::affine(Matrix::from_rows(vec![vec![0.5]]).unwrap(), pt(&[0.0])).unwrap();
        SolverConfig::new(abs_family(), map, pt(&[y0])).unwrap()
    }

    fn affine_2d() -> SolverConfig {
        let map = MapSpec::affine(
            Matrix::from_rows(vec![vec![0.5, 0.1], vec![0.0, 0.3]]).unwrap(),
            pt(&[1.0, 1.0]),
        )
        .unwrap();
        let fam =
            SeminormFamily::new(vec![ClassicalSeminorm::weighted_sup(vec![1.0, 1.0]).unwrap()]).unwrap();
        SolverConfig::new(fam, map, Point::zeros(2)).unwrap()
    }

    #[test]
    fn schedules() {
        assert_eq!(LambdaSchedule::Zero.lambda(5), 0.0);
        assert_eq!(LambdaSchedule::Harmonic.lambda(0), 0.0);
        assert_eq!(LambdaSchedule::Harmonic.lambda(3), 0.75);
        assert!(LambdaSchedule::Harmonic.lambda(usize::MAX) < 1.0);
        assert!(LambdaSchedule::constant(1.0).is_err());
        assert!(LambdaSchedule::constant(-0.1).is_err());
    }

    #[test]
    fn halving_trace_matches_closed_form() {
        let r = iterate(&halving(1.0)).unwrap();
        assert!(r.converged());
        let s10 = &r.trace.steps[10];
        assert_eq!(s10.y[0], 2f64.powi(-10));
        // q(y_10 - F(y_10)) = 2^-11
        assert_eq!(s10.membership_fix[0], 1.0 / (1.0 + 2f64.powi(-11)));
        assert!((s10.membership_fix[0] - 0.99951).abs() < 1e-5);
        assert!(r.oracle_ok().unwrap());
    }

    #[test]
    fn starting_at_fixed_point_converges_immediately() {
        let r = iterate(&halving(0.0)).unwrap();
        assert!(r.converged());
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.point, pt(&[0.0]));
    }

    #[test]
    fn constant_schedule_is_three_quarters_recurrence() {
        let mut cfg = halving(1.0);
        cfg.schedule = LambdaSchedule::constant(0.5).unwrap();
        let r = iterate(&cfg).unwrap();
        assert!(r.converged());
        for s in &r.trace.steps {
            assert!((s.y[0] - 0.75f64.powi(s.n as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn affine_2d_reaches_oracle() {
        let r = iterate(&affine_2d()).unwrap();
        assert!(r.converged());
        assert!((r.point[0] - 16.0 / 7.0).abs() < 1e-8);
        assert!((r.point[1] - 10.0 / 7.0).abs() < 1e-8);
        assert!(r.oracle_gap.unwrap() < 1e-8);
    }

    #[test]
    fn divergence_is_reported() {
        let map = MapSpec::affine(Matrix::from_rows(vec![vec![1e10]]).unwrap(), pt(&[0.0])).unwrap();
        let cfg = SolverConfig::new(abs_family(), map, pt(&[1.0])).unwrap();
        let r = iterate(&cfg).unwrap();
        assert_eq!(r.trace.terminated, Termination::Diverged { step: 16 });
        assert!(r.point[0].is_finite());
    }

    #[test]
    fn non_separating_family_rejected() {
        let fam = SeminormFamily::new(vec![ClassicalSeminorm::weighted_abs(2, 0, 1.0).unwrap()]).unwrap();
        let map = MapSpec::registered("identity", 2).unwrap();
        assert!(SolverConfig::new(fam, map, Point::zeros(2)).is_err());
    }

    #[test]
    fn monotonicity_examples() {
        let r = iterate(&halving(1.0)).unwrap();
        assert!(residual_monotonicity(&r.trace).unwrap().passed());

        let konst = MapSpec::affine(Matrix::zeros(1), pt(&[3.0])).unwrap();
        let mut cfg = halving(1.0);
        cfg.map = konst;
        let r = iterate(&cfg).unwrap();
        assert!(r.trace.steps[1..].iter().all(|s| s.membership_fix[0] == 1.0));
        assert!(residual_monotonicity(&r.trace).unwrap().passed());

        // identity linear part with a nonzero offset: a translation, never
        // settling (with b = 0 every point would already be fixed)
        let mut cfg = halving(1.0);
        cfg.map = MapSpec::affine(Matrix::identity(1), pt(&[1.0])).unwrap();
        cfg.max_iters = 50;
        let r = iterate(&cfg).unwrap();
        assert_eq!(r.trace.terminated, Termination::MaxIters);
        assert!(r.trace.steps.iter().all(|s| s.membership_fix[0] == 0.5));
        assert!(r.oracle_point.is_none());

        let mut cfg = halving(1.0);
        cfg.map = MapSpec::registered("identity", 1).unwrap();
        assert!(iterate(&cfg).unwrap().converged());
        assert!(residual_monotonicity(&r.trace).unwrap().passed());

        let single = IterationTrace {
            steps: r.trace.steps[..1].to_vec(),
            terminated: Termination::MaxIters,
        };
        assert!(residual_monotonicity(&single).is_err());
    }

    #[test]
    fn cauchy_examples() {
        let params = CauchyParams {
            epsilon: 0.1,
            delta: 0.1,
            alpha: 0.1,
            beta: 0.1,
        };
        let r = iterate(&halving(1.0)).unwrap();
        let fam = abs_family();
        let rep = cauchy_diagnostic(&r.trace, &fam, params, Some(&[0.5]), 64).unwrap();
        // theta = 0.15 * 0.15 / 0.85; 0.5^N * 0.5 / 0.5 < theta first at N = 6
        assert_eq!(rep.burn_in, 6);
        assert!(rep.clean());
        // without the contraction constant the early pairs are visible
        let rep = cauchy_diagnostic(&r.trace, &fam, params, None, 64).unwrap();
        assert_eq!(rep.offending.map(|o| (o.n, o.m)), Some((0, 1)));

        let mut cfg = halving(1.0);
        cfg.map = MapSpec::registered("negate", 1).unwrap();
        cfg.max_iters = 20;
        let r = iterate(&cfg).unwrap();
        let rep = cauchy_diagnostic(&r.trace, &fam, params, Some(&[1.0]), 64).unwrap();
        let o = rep.offending.unwrap();
        assert_eq!((o.n, o.m), (0, 1));

        let single = IterationTrace {
            steps: r.trace.steps[..1].to_vec(),
            terminated: Termination::MaxIters,
        };
        let rep = cauchy_diagnostic(&single, &fam, params, None, 64).unwrap();
        assert!(rep.clean());
        assert_eq!(rep.pairs_checked, 0);

        let bad = CauchyParams {
            alpha: 0.6,
            beta: 0.5,
            ..params
        };
        assert!(cauchy_diagnostic(&r.trace, &fam, bad, None, 64).is_err());
    }

    #[test]
    fn verify_examples() {
        let map = halving(0.0).map;
        let p = FuzzySeminorm::standard(ClassicalSeminorm::weighted_sup(vec![1.0]).unwrap());
        let v = verify_fixed_point(&pt(&[0.0]), &map, &p, 1.0, 1e-12).unwrap();
        assert!(v.holds);
        assert_eq!(v.membership, 1.0);
        // residual 0.5 gives membership 1/1.5
        let v = verify_fixed_point(&pt(&[1.0]), &map, &p, 1.0, 0.4).unwrap();
        assert!(v.holds);
        assert_eq!(v.classical_residual, 0.5);
        let v = verify_fixed_point(&pt(&[1.0]), &map, &p, 1.0, 0.1).unwrap();
        assert!(!v.holds);

        let cfg = affine_2d();
        let p2 = FuzzySeminorm::standard(cfg.family.members()[0].clone());
        let v = verify_fixed_point(&pt(&[2.285714, 1.428571]), &cfg.map, &p2, 1.0, 1e-5).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn uniqueness_examples() {
        let starts: Vec<Point> = [-10.0, -1.0, 0.0, 1.0, 10.0].iter().map(|&x| pt(&[x])).collect();
        let mut cfg = halving(0.0);
        cfg.alpha_tol = 1e-12;
        let rep = uniqueness_probe(&cfg, &starts).unwrap();
        assert!(rep.all_converged());
        assert!(rep.max_pairwise_distance.unwrap() <= 1e-8);
        assert!(rep.pairwise_within(1e-9));

        cfg.map = MapSpec::affine(Matrix::zeros(1), pt(&[2.0])).unwrap();
        let rep = uniqueness_probe(&cfg, &starts).unwrap();
        assert_eq!(rep.max_pairwise_distance, Some(0.0));
        assert!(rep.runs.iter().all(|r| r.iterations == 2));

        assert!(uniqueness_probe(&cfg, &starts[..1]).is_err());
    }

    #[test]
    fn csv_layout() {
        let r = iterate(&affine_2d()).unwrap();
        let csv = r.trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,y_0,y_1,q0_step,q0_fix,p0_step,p0_fix");
        let row0: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row0.len(), 7);
        assert_eq!(row0[0], "0");
        assert_eq!(row0[1], "0.0000000000000000e0");
        assert_eq!(csv.lines().count(), r.trace.len() + 1);
    }
}

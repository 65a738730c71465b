//! Triangular norms on the unit interval.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::{AxiomId, AxiomReport, Witness};
use crate::error::{check_unit, Error, Result};
use crate::parallel;
use crate::sampling;

/// Tolerance on `|T(u, T(v,w)) - T(T(u,v), w)|`, absorbing re-association.
pub const ASSOCIATIVITY_TOL: f64 = 1e-12;

/// Points per axis of the boundary grid that is always checked in addition
/// to the random samples.
pub const BOUNDARY_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum TNorm {
    /// `min(u, v)`
    #[default]
    #[serde(rename = "min")]
    StandardIntersection,
    /// `u v`
    #[serde(rename = "product")]
    AlgebraicProduct,
    /// `max(0, u + v - 1)`
    #[serde(rename = "lukasiewicz")]
    BoundedDifference,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [
        TNorm::StandardIntersection,
        TNorm::AlgebraicProduct,
        TNorm::BoundedDifference,
    ];

    /// Evaluates the t-norm, rejecting arguments outside `[0, 1]`.
    pub fn eval(self, u: f64, v: f64) -> Result<f64> {
        check_unit("u", u)?;
        check_unit("v", v)?;
        Ok(self.apply(u, v))
    }

    /// Unchecked evaluation for callers that already hold unit-interval values.
    #[inline]
    pub fn apply(self, u: f64, v: f64) -> f64 {
        match self {
            TNorm::StandardIntersection => u.min(v),
            TNorm::AlgebraicProduct => u * v,
            TNorm::BoundedDifference => {
                // a - (1 - b) with a <= b keeps u*1 = u bit-exact, which
                // (u + v) - 1 does not.
                let (a, b) = if u <= v { (u, v) } else { (v, u) };
                (a - (1.0 - b)).max(0.0)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TNorm::StandardIntersection => "min",
            TNorm::AlgebraicProduct => "product",
            TNorm::BoundedDifference => "lukasiewicz",
        }
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(TNorm::StandardIntersection),
            "product" => Ok(TNorm::AlgebraicProduct),
            "lukasiewicz" => Ok(TNorm::BoundedDifference),
            other => Err(Error::InvalidArgument(format!(
                "unknown t-norm `{other}` (expected min, product or lukasiewicz)"
            ))),
        }
    }
}

/// The boundary grid `{0, .25, .5, .75, 1}^3` followed by `sample_count`
/// seeded uniform triples.
pub fn axiom_samples(sample_count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(BOUNDARY_GRID.len().pow(3) + sample_count);
    for &u in &BOUNDARY_GRID {
        for &v in &BOUNDARY_GRID {
            for &w in &BOUNDARY_GRID {
                out.push([u, v, w]);
            }
        }
    }
    let mut rng = sampling::rng(seed);
    out.extend((0..sample_count).map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()]));
    out
}

/// Checks the four t-norm axioms for `t`.
pub fn check_tnorm_axioms(t: TNorm, sample_count: usize, seed: u64) -> Result<Vec<AxiomReport>> {
    check_operation_axioms(|u, v| t.apply(u, v), sample_count, seed)
}

/// Runs the t-norm axiom engine on an arbitrary binary operation on `[0,1]`.
///
/// Commutativity, monotonicity and the boundary conditions are demanded
/// exactly; associativity within [`ASSOCIATIVITY_TOL`]. Each report's witness
/// is the lowest-indexed failing sample, so reruns with the same seed return
/// the same witness.
pub fn check_operation_axioms<F>(op: F, sample_count: usize, seed: u64) -> Result<Vec<AxiomReport>>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample_count must be at least 1".into()));
    }
    let samples = axiom_samples(sample_count, seed);
    let n = samples.len();
    let witness = |i: usize| Witness::Triple(samples[i]);

    let comm = parallel::scan(&samples, 0.0, |&[u, v, _]| (op(u, v) - op(v, u)).abs());
    let assoc = parallel::scan(&samples, ASSOCIATIVITY_TOL, |&[u, v, w]| {
        (op(u, op(v, w)) - op(op(u, v), w)).abs()
    });
    let mono = parallel::scan(&samples, 0.0, |&[u, v, w]| {
        let (lo, hi) = if v <= w { (v, w) } else { (w, v) };
        op(u, lo) - op(u, hi)
    });
    let bound = parallel::scan(&samples, 0.0, |&[u, v, _]| {
        let range = |x: f64| (-x).max(x - 1.0).max(0.0);
        (op(u, 1.0) - u).abs().max(op(u, 0.0).abs()).max(range(op(u, v)))
    });

    Ok(vec![
        AxiomReport::from_scan(AxiomId::Commutativity, comm, n, witness),
        AxiomReport::from_scan(AxiomId::Associativity, assoc, n, witness),
        AxiomReport::from_scan(AxiomId::Monotonicity, mono, n, witness),
        AxiomReport::from_scan(AxiomId::BoundaryConditions, bound, n, witness),
    ])
}

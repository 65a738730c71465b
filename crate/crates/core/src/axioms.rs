//! Reports produced by the sampled axiom checkers.

use std::fmt;

use serde::Serialize;

use crate::parallel::Scan;

/// Which axiom a report is about. The first four are the t-norm axioms; the
/// rest belong to fuzzy seminorms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxiomId {
    Commutativity,
    Associativity,
    Monotonicity,
    BoundaryConditions,
    /// `p(y,t) = 0` for `t <= 0`.
    NullBelowZero,
    /// `p(v y, t) = p(y, t/|v|)`.
    Scaling,
    /// `p(y, t) = p(v y, t/|v|)`, the variant with `t` scaled on the other side.
    ScalingLiteral,
    /// `p(y+z, t+s) >= p(y,t) * p(z,s)`.
    Triangle,
    /// `p(y, .)` nondecreasing with `p(y,t) -> 1`.
    MonotoneTail,
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomId::Commutativity => "commutativity",
            AxiomId::Associativity => "associativity",
            AxiomId::Monotonicity => "monotonicity",
            AxiomId::BoundaryConditions => "boundary-conditions",
            AxiomId::NullBelowZero => "null-below-zero",
            AxiomId::Scaling => "scaling",
            AxiomId::ScalingLiteral => "scaling-literal",
            AxiomId::Triangle => "triangle",
            AxiomId::MonotoneTail => "monotone-tail",
        };
        f.write_str(s)
    }
}

/// Sample exhibiting a violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Witness {
    /// `(u, v, w)` for t-norm axioms.
    Triple([f64; 3]),
    /// Vectors and scalars for fuzzy seminorm axioms. Unused slots are zero.
    Fuzzy {
        y: Vec<f64>,
        z: Vec<f64>,
        t: f64,
        s: f64,
        v: f64,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Triple([u, v, w]) => write!(f, "(u, v, w) = ({u:?}, {v:?}, {w:?})"),
            Witness::Fuzzy { y, z, t, s, v } => {
                write!(f, "y = {y:?}, z = {z:?}, t = {t:?}, s = {s:?}, v = {v:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub max_violation: f64,
    /// Number of samples evaluated.
    pub samples: usize,
}

impl AxiomReport {
    pub(crate) fn from_scan(
        axiom: AxiomId,
        scan: Scan,
        samples: usize,
        witness: impl FnOnce(usize) -> Witness,
    ) -> Self {
        AxiomReport {
            axiom,
            passed: scan.first_failure.is_none(),
            witness: scan.first_failure.map(witness),
            max_violation: scan.max_violation,
            samples,
        }
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<20} {} samples={} max_violation={:e}",
            self.axiom.to_string(),
            if self.passed { "PASS" } else { "FAIL" },
            self.samples,
            self.max_violation
        )?;
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}

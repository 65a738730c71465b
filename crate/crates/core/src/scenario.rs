//! Strict JSON scenario files.
//!
//! Unknown keys are rejected everywhere, and every validation failure names
//! the offending field path (`map.A`, `seminorms[1].weights`, ...).

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contraction::MapSpec;
use crate::linalg::{self, Matrix};
use crate::seminorms::{ClassicalSeminorm, Point, SeminormFamily};
use crate::solver::{LambdaSchedule, SolverConfig};
use crate::tnorm::TNorm;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("unknown key at `{path}`: {message}")]
    UnknownKey { path: String, message: String },
    #[error("invalid value at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("dimension error at `{path}`: {message}")]
    Dimension { path: String, message: String },
    #[error("out of range at `{path}`: {message}")]
    Range { path: String, message: String },
    #[error("invalid scenario: {0}")]
    Invalid(#[from] crate::Error),
}

impl ScenarioError {
    /// Configuration problems all exit with status 2.
    pub fn exit_code(&self) -> i32 {
        2
    }

    /// Field path the error refers to, if any.
    pub fn path(&self) -> Option<&str> {
        match self {
            ScenarioError::UnknownKey { path, .. }
            | ScenarioError::Schema { path, .. }
            | ScenarioError::Dimension { path, .. }
            | ScenarioError::Range { path, .. } => Some(path),
            _ => None,
        }
    }
}

fn dim_err(path: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Dimension {
        path: path.into(),
        message: message.into(),
    }
}

fn range_err(path: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Range {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeminormSpec {
    Abs { axis: usize, weight: f64 },
    Sup { weights: Vec<f64> },
    Ellipsoid { semi_axes: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDescriptor {
    Affine {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    /// Symmetric `dim x dim` matrix with the given spectral radius and a
    /// random offset, both drawn from the scenario seed.
    RandomAffine {
        spectral_radius: f64,
    },
    Registered {
        name: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Zero,
    Constant { lambda: f64 },
    Harmonic,
}

fn default_t_probe() -> f64 {
    SolverConfig::DEFAULT_T_PROBE
}
fn default_alpha_tol() -> f64 {
    SolverConfig::DEFAULT_ALPHA_TOL
}
fn default_max_iters() -> usize {
    SolverConfig::DEFAULT_MAX_ITERS
}
fn default_window() -> usize {
    SolverConfig::DEFAULT_CAUCHY_WINDOW
}
fn default_schedule() -> ScheduleSpec {
    ScheduleSpec::Zero
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub dim: usize,
    pub seminorms: Vec<SeminormSpec>,
    #[serde(default)]
    pub tnorm: TNorm,
    pub map: MapDescriptor,
    /// Defaults to the origin.
    #[serde(default)]
    pub y0: Option<Vec<f64>>,
    #[serde(default = "default_schedule")]
    pub schedule: ScheduleSpec,
    #[serde(default = "default_t_probe")]
    pub t_probe: f64,
    #[serde(default = "default_alpha_tol")]
    pub alpha_tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_window")]
    pub cauchy_window: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_tol: Option<f64>,
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_owned(),
        source,
    })?;
    Scenario::from_json(&text)
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ScenarioError::Syntax(e.to_string()))?;
        let scenario: Scenario = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            let message = e.into_inner().to_string();
            if message.starts_with("unknown field") || message.starts_with("unknown variant") {
                ScenarioError::UnknownKey { path, message }
            } else {
                ScenarioError::Schema { path, message }
            }
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Pretty JSON with every field spelled out; parses back to an equal value.
    pub fn to_canonical_json(&self) -> String {
        let mut canonical = self.clone();
        canonical.y0 = Some(self.start().coords().to_vec());
        serde_json::to_string_pretty(&canonical).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let d = self.dim;
        if d == 0 {
            return Err(range_err("dim", "must be at least 1"));
        }
        if self.seminorms.is_empty() {
            return Err(ScenarioError::Schema {
                path: "seminorms".into(),
                message: "at least one seminorm is required".into(),
            });
        }
        for (i, s) in self.seminorms.iter().enumerate() {
            let path = |f: &str| format!("seminorms[{i}].{f}");
            match s {
                SeminormSpec::Abs { axis, weight } => {
                    if *axis >= d {
                        return Err(dim_err(path("axis"), format!("axis {axis} but dim is {d}")));
                    }
                    if !(*weight > 0.0 && weight.is_finite()) {
                        return Err(range_err(path("weight"), format!("{weight} is not positive")));
                    }
                }
                SeminormSpec::Sup { weights } => {
                    if weights.len() != d {
                        return Err(dim_err(
                            path("weights"),
                            format!("{} entries but dim is {d}", weights.len()),
                        ));
                    }
                    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
                        return Err(range_err(
                            path("weights"),
                            format!("{w} is negative or not finite"),
                        ));
                    }
                }
                SeminormSpec::Ellipsoid { semi_axes } => {
                    if semi_axes.len() != d {
                        return Err(dim_err(
                            path("semi_axes"),
                            format!("{} entries but dim is {d}", semi_axes.len()),
                        ));
                    }
                    if let Some(a) = semi_axes.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
                        return Err(range_err(path("semi_axes"), format!("{a} is not positive")));
                    }
                }
            }
        }
        match &self.map {
            MapDescriptor::Affine { a, b } => {
                if a.len() != d || a.iter().any(|row| row.len() != d) {
                    let shape = a.iter().map(Vec::len).collect::<Vec<_>>();
                    return Err(dim_err(
                        "map.A",
                        format!("rows {shape:?} do not form a {d}x{d} matrix"),
                    ));
                }
                if a.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(range_err("map.A", "entries must be finite"));
                }
                if b.len() != d {
                    return Err(dim_err("map.b", format!("{} entries but dim is {d}", b.len())));
                }
                if b.iter().any(|x| !x.is_finite()) {
                    return Err(range_err("map.b", "entries must be finite"));
                }
            }
            MapDescriptor::RandomAffine { spectral_radius } => {
                if !(0.0..1.0).contains(spectral_radius) {
                    return Err(range_err(
                        "map.spectral_radius",
                        format!("{spectral_radius} is outside [0, 1)"),
                    ));
                }
            }
            MapDescriptor::Registered { name } => {
                if crate::contraction::registered(name).is_none() {
                    let known: Vec<_> = crate::contraction::registered_names().collect();
                    return Err(ScenarioError::Schema {
                        path: "map.name".into(),
                        message: format!("unknown map `{name}`, expected one of {known:?}"),
                    });
                }
            }
        }
        if let Some(y0) = &self.y0 {
            if y0.len() != d {
                return Err(dim_err("y0", format!("{} entries but dim is {d}", y0.len())));
            }
            if y0.iter().any(|x| !x.is_finite()) {
                return Err(range_err("y0", "entries must be finite"));
            }
        }
        if let ScheduleSpec::Constant { lambda } = self.schedule {
            if !(0.0..1.0).contains(&lambda) {
                return Err(range_err(
                    "schedule.lambda",
                    format!("{lambda} is outside [0, 1)"),
                ));
            }
        }
        if !(self.t_probe > 0.0 && self.t_probe.is_finite()) {
            return Err(range_err("t_probe", format!("{} is not positive", self.t_probe)));
        }
        if !(self.alpha_tol > 0.0 && self.alpha_tol < 1.0) {
            return Err(range_err(
                "alpha_tol",
                format!("{} is outside (0, 1)", self.alpha_tol),
            ));
        }
        if self.max_iters == 0 {
            return Err(range_err("max_iters", "must be at least 1"));
        }
        if self.cauchy_window == 0 {
            return Err(range_err("cauchy_window", "must be at least 1"));
        }
        if let Some(tol) = self.oracle_tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(range_err("oracle_tol", format!("{tol} is not positive")));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Result<SeminormFamily, ScenarioError> {
        let members = self
            .seminorms
            .iter()
            .map(|s| match s {
                SeminormSpec::Abs { axis, weight } => {
                    ClassicalSeminorm::weighted_abs(self.dim, *axis, *weight)
                }
                SeminormSpec::Sup { weights } => ClassicalSeminorm::weighted_sup(weights.clone()),
                SeminormSpec::Ellipsoid { semi_axes } => ClassicalSeminorm::ellipsoid(semi_axes.clone()),
            })
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(SeminormFamily::new(members)?)
    }

    pub fn map_spec(&self) -> Result<MapSpec, ScenarioError> {
        Ok(match &self.map {
            MapDescriptor::Affine { a, b } => {
                MapSpec::affine(Matrix::from_rows(a.clone())?, Point::new(b.clone())?)?
            }
            MapDescriptor::RandomAffine { spectral_radius } => {
                let a = linalg::random_symmetric_contraction(self.dim, *spectral_radius, self.seed);
                let b: Vec<f64> = (0..self.dim).map(|i| 1.0 + i as f64 * 0.5).collect();
                MapSpec::affine(a, Point::new(b)?)?
            }
            MapDescriptor::Registered { name } => MapSpec::registered(name, self.dim)?,
        })
    }

    pub fn start(&self) -> Point {
        match &self.y0 {
            Some(v) => Point::new(v.clone()).expect("validated"),
            None => Point::zeros(self.dim),
        }
    }

    pub fn schedule(&self) -> LambdaSchedule {
        match self.schedule {
            ScheduleSpec::Zero => LambdaSchedule::Zero,
            ScheduleSpec::Constant { lambda } => LambdaSchedule::Constant(lambda),
            ScheduleSpec::Harmonic => LambdaSchedule::Harmonic,
        }
    }

    pub fn solver_config(&self) -> Result<SolverConfig, ScenarioError> {
        let cfg = SolverConfig {
            family: self.family()?,
            tnorm: self.tnorm,
            map: self.map_spec()?,
            y0: self.start(),
            schedule: self.schedule(),
            t_probe: self.t_probe,
            alpha_tol: self.alpha_tol,
            max_iters: self.max_iters,
            cauchy_window: self.cauchy_window,
            oracle_tol: self.oracle_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SeminormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeminormSpec::Abs { axis, weight } => write!(f, "abs(axis={axis}, weight={weight})"),
            SeminormSpec::Sup { weights } => write!(f, "sup(weights={weights:?})"),
            SeminormSpec::Ellipsoid { semi_axes } => write!(f, "ellipsoid(semi_axes={semi_axes:?})"),
        }
    }
}

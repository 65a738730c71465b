#![allow(dead_code)]

use std::path::PathBuf;

use fuzzy_fixpoint::scenario::{parse_scenario, Scenario};

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.json"))
}

pub fn scenario(name: &str) -> Scenario {
    parse_scenario(&scenario_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Scenarios whose map is a contraction for every seminorm of the family.
pub const CONTRACTIONS: [&str; 4] = ["halving", "affine2d", "random5", "half_tanh"];

/// Shipped scenarios with affine contraction maps.
pub const AFFINE_CONTRACTIONS: [&str; 3] = ["halving", "affine2d", "random5"];

/// Independent closed-form seminorms for oracle checks, written without the
/// library so they can cross-check it.
#[derive(Debug, Clone)]
pub enum Oracle {
    Abs { axis: usize, weight: f64 },
    Sup(Vec<f64>),
    Ellipsoid(Vec<f64>),
}

impl Oracle {
    pub fn q(&self, y: &[f64]) -> f64 {
        match self {
            Oracle::Abs { axis, weight } => weight * y[*axis].abs(),
            Oracle::Sup(w) => w.iter().zip(y).map(|(w, x)| w * x.abs()).fold(0.0, f64::max),
            Oracle::Ellipsoid(a) => a.iter().zip(y).map(|(a, x)| (x / a).powi(2)).sum::<f64>().sqrt(),
        }
    }

    pub fn p(&self, y: &[f64], t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            t / (t + self.q(y))
        }
    }
}

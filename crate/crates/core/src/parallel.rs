//! Execution mode for the sampling-heavy checks.
//!
//! With the `parallel` feature the scans below fan out over rayon; without it
//! (or after [`set_mode`]`(Mode::Sequential)`) they run on the calling thread.
//! Every reduction is order-independent (max, min-index), so both modes
//! produce identical reports.

use std::sync::atomic::{AtomicU8, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

static MODE: AtomicU8 = AtomicU8::new(1);

/// Selects the process-wide execution mode. `Parallel` degrades to
/// sequential when the crate is built without the `parallel` feature.
pub fn set_mode(mode: Mode) {
    MODE.store(matches!(mode, Mode::Parallel) as u8, Ordering::Relaxed);
}

/// The mode scans will actually use.
pub fn mode() -> Mode {
    if cfg!(feature = "parallel") && MODE.load(Ordering::Relaxed) == 1 {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

/// Result of scanning a sample set for violations of a tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scan {
    pub max_violation: f64,
    /// Lowest sample index whose violation exceeds the tolerance.
    pub first_failure: Option<usize>,
}

impl Scan {
    const EMPTY: Scan = Scan {
        max_violation: 0.0,
        first_failure: None,
    };

    fn merge(self, other: Scan) -> Scan {
        let first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Scan {
            max_violation: self.max_violation.max(other.max_violation),
            first_failure,
        }
    }
}

/// Evaluates `violation` on every item and reduces to the largest violation
/// and the first index exceeding `tol`. NaN violations count as failures.
pub fn scan<T, F>(items: &[T], tol: f64, violation: F) -> Scan
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    let one = |(i, item): (usize, &T)| {
        let v = violation(item);
        if v.is_nan() {
            Scan {
                max_violation: f64::INFINITY,
                first_failure: Some(i),
            }
        } else {
            Scan {
                max_violation: v.max(0.0),
                first_failure: (v > tol).then_some(i),
            }
        }
    };
    match mode() {
        #[cfg(feature = "parallel")]
        Mode::Parallel => items
            .par_iter()
            .enumerate()
            .map(one)
            .reduce(|| Scan::EMPTY, Scan::merge),
        _ => items.iter().enumerate().map(one).fold(Scan::EMPTY, Scan::merge),
    }
}

/// Order-preserving map.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode() {
        #[cfg(feature = "parallel")]
        Mode::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Smallest index `i` in `0..len` for which `pred(i)` holds.
pub fn find_first<F>(len: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match mode() {
        #[cfg(feature = "parallel")]
        Mode::Parallel => (0..len).into_par_iter().find_first(|&i| pred(i)),
        _ => (0..len).find(|&i| pred(i)),
    }
}

//! Sequential and parallel execution must produce identical reports. This
//! lives in its own test binary because the execution mode is process-wide.

mod common;

use common::{scenario, AFFINE_CONTRACTIONS, CONTRACTIONS};
use fuzzy_fixpoint::contraction::{certify_family, check_contractive, check_implication, threshold_pairs};
use fuzzy_fixpoint::fuzzy_space::{check_fuzzy_axioms, FuzzySeminorm};
use fuzzy_fixpoint::parallel::{self, Mode};
use fuzzy_fixpoint::seminorms::{canonical_candidates, is_separating};
use fuzzy_fixpoint::solver::{seeded_starts, uniqueness_probe};
use fuzzy_fixpoint::tnorm::{check_operation_axioms, check_tnorm_axioms, TNorm};

/// Debug output of everything the library reports for the shipped
/// scenarios. Debug formatting of `f64` round-trips, so equal strings mean
/// bit-identical values.
fn everything() -> Vec<String> {
    let mut out = Vec::new();
    for t in TNorm::ALL {
        out.push(format!("{:?}", check_tnorm_axioms(t, 5_000, 3).unwrap()));
    }
    out.push(format!(
        "{:?}",
        check_operation_axioms(|u, v| (u + v) / 2.0, 5_000, 3).unwrap()
    ));
    for name in CONTRACTIONS {
        let s = scenario(name);
        let cfg = s.solver_config().unwrap();
        for q in cfg.family.members() {
            let p = FuzzySeminorm::standard(q.clone());
            out.push(format!(
                "{:?}",
                check_fuzzy_axioms(&p, cfg.tnorm, 5_000, s.seed).unwrap()
            ));
        }
        let candidates = canonical_candidates(s.dim, 64, s.seed);
        out.push(format!("{:?}", is_separating(&cfg.family, &candidates).unwrap()));
        let starts = seeded_starts(s.dim, 10, 10.0, s.seed);
        out.push(format!("{:?}", uniqueness_probe(&cfg, &starts).unwrap()));
    }
    for name in AFFINE_CONTRACTIONS {
        let s = scenario(name);
        let cfg = s.solver_config().unwrap();
        for cert in certify_family(&cfg.map, &cfg.family, 1.0, 0.5) {
            let cert = cert.unwrap();
            let q = &cfg.family.members()[cert.seminorm_index];
            let p = FuzzySeminorm::standard(q.clone());
            let pairs = threshold_pairs(q, cert.hypothesis_radius(), 5_000, s.seed);
            out.push(format!(
                "{:?}",
                check_contractive(&cfg.map, &p, cert.epsilon, cert.delta, &pairs).unwrap()
            ));
            out.push(format!(
                "{:?}",
                check_implication(&cfg.map, &p, &cert, &pairs).unwrap()
            ));
        }
    }
    out
}

#[test]
fn modes_agree_bit_for_bit() {
    parallel::set_mode(Mode::Sequential);
    assert_eq!(parallel::mode(), Mode::Sequential);
    let sequential = everything();

    parallel::set_mode(Mode::Parallel);
    let expected = if cfg!(feature = "parallel") {
        Mode::Parallel
    } else {
        Mode::Sequential
    };
    assert_eq!(parallel::mode(), expected);
    let parallel = everything();

    assert_eq!(sequential.len(), parallel.len());
    for (i, (s, p)) in sequential.iter().zip(&parallel).enumerate() {
        assert_eq!(s, p, "report {i} differs between modes");
    }
}

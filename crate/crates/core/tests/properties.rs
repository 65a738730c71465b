mod common;

use proptest::prelude::*;

use common::Oracle;
use fuzzy_fixpoint::contraction::{certify_affine_contraction, check_implication, threshold_pairs, MapSpec};
use fuzzy_fixpoint::fuzzy_space::{classical_radius, FuzzyBall, FuzzySeminorm};
use fuzzy_fixpoint::linalg::Matrix;
use fuzzy_fixpoint::seminorms::{minkowski_functional, ClassicalSeminorm, Point, SeminormFamily};
use fuzzy_fixpoint::solver::{iterate, LambdaSchedule, SolverConfig, Termination};
use fuzzy_fixpoint::tnorm::TNorm;

const DIM: usize = 3;

fn coord() -> impl Strategy<Value = f64> {
    -100.0..100.0f64
}

fn vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(coord(), DIM)
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1..10.0f64, DIM)
}

fn seminorm() -> impl Strategy<Value = (ClassicalSeminorm, Oracle)> {
    prop_oneof![
        (0..DIM, 0.1..10.0f64).prop_map(|(axis, weight)| (
            ClassicalSeminorm::weighted_abs(DIM, axis, weight).unwrap(),
            Oracle::Abs { axis, weight }
        )),
        weights().prop_map(|w| (
            ClassicalSeminorm::weighted_sup(w.clone()).unwrap(),
            Oracle::Sup(w)
        )),
        weights().prop_map(|a| (
            ClassicalSeminorm::ellipsoid(a.clone()).unwrap(),
            Oracle::Ellipsoid(a)
        )),
    ]
}

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

/// 2x2 matrices with sup-norm row sums at most 0.9.
fn contraction_matrix() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0..1.0f64, 4).prop_map(|e| {
        let scale = 0.9 / (e[0].abs() + e[1].abs()).max(e[2].abs() + e[3].abs()).max(1e-3);
        let s = scale.min(1.0);
        Matrix::from_rows(vec![vec![e[0] * s, e[1] * s], vec![e[2] * s, e[3] * s]]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn seminorm_matches_closed_form((q, oracle) in seminorm(), y in vector()) {
        let got = q.eval_slice(&y);
        let want = oracle.q(&y);
        prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0), "{got} vs {want}");
    }

    #[test]
    fn absolute_homogeneity((q, _) in seminorm(), y in vector(), c in -50.0..50.0f64) {
        let scaled: Vec<f64> = y.iter().map(|x| c * x).collect();
        let lhs = q.eval_slice(&scaled);
        let rhs = c.abs() * q.eval_slice(&y);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn subadditivity((q, _) in seminorm(), y in vector(), z in vector()) {
        let sum: Vec<f64> = y.iter().zip(&z).map(|(a, b)| a + b).collect();
        let rhs = q.eval_slice(&y) + q.eval_slice(&z);
        prop_assert!(q.eval_slice(&sum) <= rhs + 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn minkowski_gauge_agrees((q, _) in seminorm(), y in vector()) {
        let tol = 1e-9;
        let gauge = minkowski_functional(&q, &Point::new(y.clone()).unwrap(), tol).unwrap();
        let exact = q.eval_slice(&y);
        prop_assert!((gauge - exact).abs() <= tol + 1e-12 * exact.max(1.0), "{gauge} vs {exact}");
    }

    #[test]
    fn membership_is_a_monotone_grade((q, oracle) in seminorm(), y in vector(), t in -5.0..50.0f64, dt in 0.0..50.0f64) {
        let p = FuzzySeminorm::standard(q);
        let a = p.eval_slice(&y, t);
        let b = p.eval_slice(&y, t + dt);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(a <= b);
        prop_assert!((a - oracle.p(&y, t)).abs() <= 1e-15);
        if t > 0.0 {
            prop_assert_eq!(p.eval_slice(&[0.0; DIM], t), 1.0);
        } else {
            prop_assert_eq!(a, 0.0);
        }
    }

    #[test]
    fn fuzzy_triangle_with_min((q, _) in seminorm(), y in vector(), z in vector(), t in 0.0..20.0f64, s in 0.0..20.0f64) {
        let p = FuzzySeminorm::standard(q);
        let sum: Vec<f64> = y.iter().zip(&z).map(|(a, b)| a + b).collect();
        let lhs = p.eval_slice(&sum, t + s);
        let rhs = TNorm::StandardIntersection.apply(p.eval_slice(&y, t), p.eval_slice(&z, s));
        prop_assert!(lhs >= rhs - 1e-12);
    }

    #[test]
    fn balls_nest_in_alpha_and_t(
        (q, _) in seminorm(),
        c in vector(),
        z in vector(),
        a1 in 0.01..0.98f64,
        da in 0.0..0.01f64,
        t1 in 0.1..50.0f64,
        dt in 0.0..50.0f64,
    ) {
        let p = FuzzySeminorm::standard(q.clone());
        let center = Point::new(c.clone()).unwrap();
        let z = Point::new(z).unwrap();
        let small = FuzzyBall::new(center.clone(), a1, t1, p.clone()).unwrap();
        let wider = FuzzyBall::new(center.clone(), a1 + da, t1, p.clone()).unwrap();
        let later = FuzzyBall::new(center, a1, t1 + dt, p).unwrap();
        if small.contains(&z).unwrap() {
            prop_assert!(wider.contains(&z).unwrap());
            prop_assert!(later.contains(&z).unwrap());
        }
        let d: Vec<f64> = z.coords().iter().zip(&c).map(|(a, b)| a - b).collect();
        let r = classical_radius(t1, a1);
        let qd = q.eval_slice(&d);
        // Away from the boundary the ball is the classical ball of radius r.
        if (qd - r).abs() > 1e-9 * r.max(1.0) {
            prop_assert_eq!(small.contains(&z).unwrap(), qd < r);
        }
    }

    #[test]
    fn tnorm_ordering(u in unit(), v in unit()) {
        let luk = TNorm::BoundedDifference.apply(u, v);
        let prod = TNorm::AlgebraicProduct.apply(u, v);
        let min = TNorm::StandardIntersection.apply(u, v);
        prop_assert!(luk <= prod && prod <= min);
        prop_assert!(luk >= 0.0 && min <= 1.0);
    }

    #[test]
    fn tnorm_identity_and_annihilator(u in unit()) {
        for t in TNorm::ALL {
            prop_assert_eq!(t.apply(u, 1.0), u);
            prop_assert_eq!(t.apply(1.0, u), u);
            prop_assert_eq!(t.apply(u, 0.0), 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_are_sound(
        a in contraction_matrix(),
        b in prop::collection::vec(-5.0..5.0f64, 2),
        w in prop::collection::vec(0.2..5.0f64, 2),
        epsilon in 0.01..10.0f64,
        alpha in 0.01..0.99f64,
        seed in any::<u64>(),
    ) {
        let map = MapSpec::affine(a, Point::new(b).unwrap()).unwrap();
        let q = ClassicalSeminorm::weighted_sup(w).unwrap();
        let cert = match certify_affine_contraction(&map, &q, epsilon, alpha) {
            Ok(c) => c,
            // The weighted norm can exceed 1 even when the plain one does not.
            Err(fuzzy_fixpoint::Error::NotAContraction { lipschitz }) => {
                prop_assert!(lipschitz >= 1.0);
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(cert.invariant_holds());
        prop_assert!(cert.delta > 0.0 && cert.beta > 0.0 && cert.alpha + cert.beta < 1.0);
        let pairs = threshold_pairs(&q, cert.hypothesis_radius(), 400, seed);
        let p = FuzzySeminorm::standard(q);
        let report = check_implication(&map, &p, &cert, &pairs).unwrap();
        prop_assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn zero_lambda_is_bitwise_picard(
        a in contraction_matrix(),
        b in prop::collection::vec(-5.0..5.0f64, 2),
        y0 in prop::collection::vec(-20.0..20.0f64, 2),
    ) {
        let map = MapSpec::affine(a, Point::new(b).unwrap()).unwrap();
        let family = SeminormFamily::new(vec![ClassicalSeminorm::weighted_sup(vec![1.0, 1.0]).unwrap()]).unwrap();
        let mut cfg = SolverConfig::new(family, map.clone(), Point::new(y0.clone()).unwrap()).unwrap();
        cfg.schedule = LambdaSchedule::constant(0.0).unwrap();
        cfg.max_iters = 80;
        let result = iterate(&cfg).unwrap();
        let mut y = y0;
        for step in &result.trace.steps {
            prop_assert_eq!(step.y.coords(), y.as_slice(), "step {}", step.n);
            y = map.apply_slice(&y).unwrap();
        }
        cfg.schedule = LambdaSchedule::Zero;
        let zero = iterate(&cfg).unwrap();
        prop_assert_eq!(&zero.trace, &result.trace);
        let diverged = matches!(zero.trace.terminated, Termination::Diverged { .. });
        prop_assert!(!diverged);
    }
}

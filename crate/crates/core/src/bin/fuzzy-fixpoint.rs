//! Command-line front end: scenario files in, reports and traces out.
//!
//! Exit status is 0 on success, 1 on a mathematical failure (divergence,
//! axiom violation, non-contraction, Cauchy witness) and 2 on usage or
//! configuration errors. Results go to stdout, diagnostics to stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{info, LevelFilter};

use fuzzy_fixpoint::contraction::{
    certify_family, check_contractive, check_implication, operator_lipschitz, threshold_pairs, MapSpec,
};
use fuzzy_fixpoint::fuzzy_space::{check_fuzzy_axioms, FuzzySeminorm};
use fuzzy_fixpoint::scenario::{parse_scenario, Scenario, ScenarioError};
use fuzzy_fixpoint::seminorms::SeminormFamily;
use fuzzy_fixpoint::solver::{
    cauchy_diagnostic, iterate, seeded_starts, uniqueness_probe, verify_fixed_point, CauchyParams,
};
use fuzzy_fixpoint::tnorm::check_tnorm_axioms;

const PAIR_SAMPLES: usize = 10_000;
const LIPSCHITZ_SAMPLES: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "fuzzy-fixpoint",
    version,
    about = "Fixed points of fuzzy B-contractions on R^d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate to a fixed point, verify it and compare with the oracle.
    Run {
        scenario: PathBuf,
        /// Write the iteration trace as CSV.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Certify the map as a fuzzy B-contraction for every seminorm.
    Certify {
        scenario: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Check the t-norm and fuzzy seminorm axioms.
    CheckAxioms {
        scenario: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Iterate from seeded starts and compare the limits.
    ProbeUniqueness {
        scenario: PathBuf,
        #[arg(long)]
        starts: usize,
        /// Largest acceptable pairwise sup-distance between limits.
        #[arg(long, default_value_t = 1e-8)]
        max_distance: f64,
        /// Limits must satisfy p(U_i - U_j, t_probe) >= 1 - pairwise_alpha.
        #[arg(long, default_value_t = 1e-9)]
        pairwise_alpha: f64,
    },
    /// Search the iteration trace for non-Cauchy index pairs.
    Cauchy {
        scenario: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
    },
    /// Print the scenario with every default spelled out.
    Canonical { scenario: PathBuf },
}

enum Failure {
    /// Mathematical failure; the report is already on stdout.
    Math,
    Config(String),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<fuzzy_fixpoint::Error> for Failure {
    fn from(e: fuzzy_fixpoint::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<String, (String, Failure)>;

fn init_logging() {
    let level = match std::env::var("FUZZY_FIXPOINT_LOG").as_deref() {
        Ok("debug") => LevelFilter::Debug,
        Ok("info") => LevelFilter::Info,
        _ => LevelFilter::Off,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, trace_out } => run(&scenario, trace_out.as_deref()),
        Command::Certify {
            scenario,
            epsilon,
            alpha,
        } => certify(&scenario, epsilon, alpha),
        Command::CheckAxioms { scenario, samples } => check_axioms(&scenario, samples),
        Command::ProbeUniqueness {
            scenario,
            starts,
            max_distance,
            pairwise_alpha,
        } => probe(&scenario, starts, max_distance, pairwise_alpha),
        Command::Cauchy {
            scenario,
            epsilon,
            delta,
            alpha,
            beta,
        } => cauchy(
            &scenario,
            CauchyParams {
                epsilon,
                delta,
                alpha,
                beta,
            },
        ),
        Command::Canonical { scenario } => load(&scenario).map(|s| s.to_canonical_json() + "\n"),
    };
    match result {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err((report, Failure::Math)) => {
            print!("{report}");
            ExitCode::from(1)
        }
        Err((report, Failure::Config(msg))) => {
            print!("{report}");
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Lifts a configuration error into an [`Outcome`] error with no report.
fn cfg<T, E: Into<Failure>>(r: Result<T, E>) -> Result<T, (String, Failure)> {
    r.map_err(|e| (String::new(), e.into()))
}

fn load(path: &Path) -> Result<Scenario, (String, Failure)> {
    info!("loading {}", path.display());
    cfg(parse_scenario(path))
}

fn verdict(out: String, ok: bool) -> Outcome {
    if ok {
        Ok(out)
    } else {
        Err((out, Failure::Math))
    }
}

fn fuzzy_members(family: &SeminormFamily) -> Vec<FuzzySeminorm> {
    family
        .members()
        .iter()
        .cloned()
        .map(FuzzySeminorm::standard)
        .collect()
}

fn run(path: &Path, trace_out: Option<&Path>) -> Outcome {
    let scenario = load(path)?;
    let cfg_ = cfg(scenario.solver_config())?;
    let result = cfg(iterate(&cfg_))?;
    if let Some(out) = trace_out {
        std::fs::write(out, result.trace.to_csv()).map_err(|e| {
            (
                String::new(),
                Failure::Config(format!("cannot write {}: {e}", out.display())),
            )
        })?;
    }
    let mut out = String::new();
    writeln!(out, "status: {}", result.trace.terminated).unwrap();
    writeln!(out, "iterations: {}", result.trace.len()).unwrap();
    writeln!(out, "U: {}", fmt_vec(result.point.coords())).unwrap();
    let mut ok = result.converged();
    for (i, p) in fuzzy_members(&cfg_.family).iter().enumerate() {
        let check = cfg(verify_fixed_point(
            &result.point,
            &cfg_.map,
            p,
            cfg_.t_probe,
            cfg_.alpha_tol,
        ))?;
        writeln!(
            out,
            "seminorm {i}: residual={:.16e} membership={:.16e} fixed_point={}",
            check.classical_residual, check.membership, check.holds
        )
        .unwrap();
        ok &= check.holds;
    }
    match (&result.oracle_point, result.oracle_gap) {
        (Some(o), Some(gap)) => {
            writeln!(out, "oracle: {}", fmt_vec(o.coords())).unwrap();
            writeln!(out, "oracle_gap: {gap:.16e} (tol {:.16e})", result.oracle_tol).unwrap();
            ok &= gap <= result.oracle_tol;
        }
        _ => writeln!(out, "oracle: none").unwrap(),
    }
    verdict(out, ok)
}

fn certify(path: &Path, epsilon: f64, alpha: f64) -> Outcome {
    let scenario = load(path)?;
    let family = cfg(scenario.family())?;
    let map = cfg(scenario.map_spec())?;
    let in_range = epsilon > 0.0 && epsilon.is_finite() && alpha > 0.0 && alpha < 1.0;
    if !in_range {
        return Err((
            String::new(),
            Failure::Config("need epsilon > 0 and alpha in (0, 1)".into()),
        ));
    }
    let mut out = String::new();
    if !map.is_affine() {
        return certify_sampled(&scenario, &family, &map, epsilon, out);
    }
    let mut ok = true;
    for (i, cert) in certify_family(&map, &family, epsilon, alpha)
        .into_iter()
        .enumerate()
    {
        match cert {
            Ok(c) => {
                writeln!(out, "{c}").unwrap();
                let p = FuzzySeminorm::standard(family.members()[i].clone());
                let pairs = threshold_pairs(p.base(), c.hypothesis_radius(), PAIR_SAMPLES, scenario.seed);
                let imp = cfg(check_implication(&map, &p, &c, &pairs))?;
                writeln!(
                    out,
                    "  implication: pairs={} active={} excluded_by_cap={} violations={}",
                    imp.pairs, imp.active, imp.excluded_by_cap, imp.violations
                )
                .unwrap();
                let contractive = cfg(check_contractive(&map, &p, c.epsilon, c.delta, &pairs))?;
                writeln!(
                    out,
                    "  contractive: passed={} checked={}",
                    contractive.passed, contractive.checked
                )
                .unwrap();
                ok &= imp.passed() && contractive.passed;
            }
            Err(e) => {
                writeln!(out, "seminorm {i}: {e}").unwrap();
                ok = false;
            }
        }
    }
    verdict(out, ok)
}

fn certify_sampled(
    scenario: &Scenario,
    family: &SeminormFamily,
    map: &MapSpec,
    epsilon: f64,
    mut out: String,
) -> Outcome {
    let mut ok = true;
    for (i, q) in family.members().iter().enumerate() {
        let l = cfg(operator_lipschitz(map, q, LIPSCHITZ_SAMPLES, scenario.seed))?;
        writeln!(
            out,
            "seminorm {i}: sampled lipschitz >= {:.16e} (sampled, not proven)",
            l.value
        )
        .unwrap();
        let p = FuzzySeminorm::standard(q.clone());
        let delta = 0.1 * epsilon;
        let pairs = threshold_pairs(q, epsilon, PAIR_SAMPLES, scenario.seed);
        let r = cfg(check_contractive(map, &p, epsilon, delta, &pairs))?;
        writeln!(
            out,
            "  contractive(delta={delta:.16e}): passed={} checked={}",
            r.passed, r.checked
        )
        .unwrap();
        ok &= r.passed && l.value < 1.0;
    }
    if !ok {
        writeln!(out, "not-a-contraction").unwrap();
    }
    verdict(out, ok)
}

fn check_axioms(path: &Path, samples: usize) -> Outcome {
    let scenario = load(path)?;
    let family = cfg(scenario.family())?;
    if samples == 0 {
        return Err((
            String::new(),
            Failure::Config("--samples must be at least 1".into()),
        ));
    }
    let mut out = String::new();
    let mut ok = true;
    writeln!(out, "t-norm {}", scenario.tnorm).unwrap();
    for r in cfg(check_tnorm_axioms(scenario.tnorm, samples, scenario.seed))? {
        writeln!(out, "  {r}").unwrap();
        ok &= r.passed;
    }
    for (i, (p, spec)) in fuzzy_members(&family).iter().zip(&scenario.seminorms).enumerate() {
        writeln!(out, "fuzzy seminorm {i} over {spec}").unwrap();
        let suite = cfg(check_fuzzy_axioms(p, scenario.tnorm, samples, scenario.seed))?;
        for r in &suite.reports {
            writeln!(out, "  {r}").unwrap();
        }
        writeln!(out, "  (informational) {}", suite.literal_scaling).unwrap();
        ok &= suite.all_passed();
    }
    verdict(out, ok)
}

fn probe(path: &Path, count: usize, max_distance: f64, pairwise_alpha: f64) -> Outcome {
    let scenario = load(path)?;
    let cfg_ = cfg(scenario.solver_config())?;
    let starts = seeded_starts(scenario.dim, count, 10.0, scenario.seed);
    let report = cfg(uniqueness_probe(&cfg_, &starts))?;
    let mut out = String::new();
    for (k, r) in report.runs.iter().enumerate() {
        let point = r.point.as_ref().map_or("-".to_string(), |p| fmt_vec(p.coords()));
        writeln!(
            out,
            "run {k}: start={} status={} iterations={} U={point}",
            fmt_vec(r.start.coords()),
            r.terminated,
            r.iterations
        )
        .unwrap();
    }
    let fmt_opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.16e}"));
    writeln!(
        out,
        "max_pairwise_distance: {}",
        fmt_opt(report.max_pairwise_distance)
    )
    .unwrap();
    writeln!(
        out,
        "min_pairwise_membership: {}",
        fmt_opt(report.min_pairwise_membership)
    )
    .unwrap();
    let ok = report.all_converged()
        && report.max_pairwise_distance.is_some_and(|d| d <= max_distance)
        && report.pairwise_within(pairwise_alpha);
    writeln!(out, "unique: {ok}").unwrap();
    verdict(out, ok)
}

fn cauchy(path: &Path, params: CauchyParams) -> Outcome {
    let scenario = load(path)?;
    let cfg_ = cfg(scenario.solver_config())?;
    let result = cfg(iterate(&cfg_))?;
    let lipschitz: Option<Vec<f64>> = cfg_.map.is_affine().then(|| {
        cfg_.family
            .members()
            .iter()
            .map(|q| operator_lipschitz(&cfg_.map, q, 0, 0).map_or(f64::INFINITY, |l| l.value))
            .collect()
    });
    let report = cfg(cauchy_diagnostic(
        &result.trace,
        &cfg_.family,
        params,
        lipschitz.as_deref(),
        cfg_.cauchy_window,
    ))?;
    let mut out = String::new();
    writeln!(out, "status: {}", result.trace.terminated).unwrap();
    writeln!(out, "burn_in: {}", report.burn_in).unwrap();
    writeln!(out, "pairs_checked: {}", report.pairs_checked).unwrap();
    match report.offending {
        Some(o) => writeln!(
            out,
            "offending: n={} m={} seminorm={} membership={:.16e}",
            o.n, o.m, o.seminorm, o.membership
        )
        .unwrap(),
        None => writeln!(out, "offending: none").unwrap(),
    }
    verdict(out, report.clean())
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
    format!("[{}]", parts.join(", "))
}

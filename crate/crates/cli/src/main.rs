//! Batch front end: analyze a problem spec, build a witness, or trace an orbit.
//!
//! Exit codes: 0 chaos certified (or a witness was built), 2 not chaotic,
//! 3 undetermined or certificate search exhausted, 1 error.

mod spec;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lyshift::criteria::{
    analyze_bilateral_shift_general, analyze_c0_discrete, analyze_composition_discrete, analyze_kothe, analyze_unilateral_shift,
    analyze_weighted_lp, hypercyclicity_check, replay_composition, replay_kothe, replay_shift, replay_weighted_lp,
    trichotomy_classify, AnalysisConfig, Status, TrichotomyClass, Verdict,
};
use lyshift::operators::ShiftOperator;
use lyshift::orbit::{ns_membership_evidence, simulate_composition_orbit, simulate_orbit, OrbitTrace};
use lyshift::scalar::{format_rational, int, parse_rational, Rational};
use lyshift::spaces::{KotheMatrix, SpaceKind, SparseVector};
use lyshift::weights::{IndexDomain, WeightForm, WeightSpec};
use lyshift::witnesses::{
    build_example_lpnu, build_irregular_kothe, build_semi_irregular_indicator, li_yorke_pair, semi_irregular_set, shifted_pth_power,
    verify_irregular, WitnessConfig,
};
use lyshift::{Error, ExactVector};
use serde::Serialize;
use serde_json::{json, Value};
use spec::{OperatorSpec, Overrides, ProblemSpec, SCHEMA_VERSION};

const EXIT_CERTIFIED: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CHAOTIC: u8 = 2;
const EXIT_UNDETERMINED: u8 = 3;

#[derive(Parser)]
#[command(name = "lyshift", version, about = "Li-Yorke chaos for weighted shifts and weighted composition operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long = "k-cap")]
    k_cap: Option<u32>,
    #[arg(long = "l-cap")]
    l_cap: Option<u32>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            horizon: self.horizon,
            levels: self.levels,
            k_cap: self.k_cap,
            l_cap: self.l_cap,
            eps: self.eps,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the matching analyzer and write the verdict report.
    Analyze {
        spec: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Build an irregular (or semi-irregular) vector and check its orbit.
    Witness {
        spec: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Write the orbit of a vector as CSV.
    Orbit {
        spec: PathBuf,
        /// A vector, a witness, or a witness report.
        vector: PathBuf,
        #[arg(long, default_value_t = 64)]
        steps: u64,
        /// Seminorm indices, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<u32>,
        /// Distances between the orbits of `lambda x` and `mu x`.
        #[arg(long, value_name = "LAMBDA,MU")]
        pair: Option<String>,
        /// Use f64 arithmetic instead of exact rationals.
        #[arg(long)]
        float: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    if let Some(n) = std::env::var("LYSHIFT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { spec, flags } => cmd_analyze(&spec, &flags),
        Command::Witness { spec, flags } => cmd_witness(&spec, &flags),
        Command::Orbit { spec, vector, steps, k, pair, float, out } => {
            cmd_orbit(&spec, &vector, steps, &k, pair.as_deref(), float, out.as_deref()).map(|()| EXIT_CERTIFIED)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::ChaoticCertified => EXIT_CERTIFIED,
        Status::NotChaoticSymbolic => EXIT_NOT_CHAOTIC,
        Status::Undetermined => EXIT_UNDETERMINED,
    }
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, report: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(report)?;
    bytes.push(b'\n');
    write_output(out, &bytes)
}

/// `None` for spaces without an analyzer (the product space `K^N`).
fn run_analyzer(spec: &ProblemSpec, cfg: &AnalysisConfig) -> Result<Option<Verdict>> {
    if let Some((sys, c0)) = spec.system_for_space()? {
        let candidates = spec.analysis.candidates.as_deref();
        let v = if c0 { analyze_c0_discrete(&sys, candidates, cfg)? } else { analyze_composition_discrete(&sys, candidates, cfg)? };
        return Ok(Some(v));
    }
    let OperatorSpec::Shift { weights: w } = &spec.operator else { unreachable!() };
    let v = match &spec.space.kind {
        SpaceKind::C0 | SpaceKind::Lp { .. } => match w.domain {
            IndexDomain::Unilateral => analyze_unilateral_shift(w, &spec.space, cfg)?,
            IndexDomain::Bilateral => analyze_bilateral_shift_general(w, &spec.space, cfg)?,
        },
        SpaceKind::Kothe { matrix, p } => analyze_kothe(w, matrix, *p, cfg)?,
        SpaceKind::WeightedLp { p, nu } => analyze_weighted_lp(w, nu, *p, cfg)?,
        SpaceKind::ProductKn => return Ok(None),
    };
    Ok(Some(v))
}

fn replay(spec: &ProblemSpec, v: &Verdict, eps: f64) -> Result<()> {
    let Some(cert) = v.certificate.as_ref().filter(|_| v.is_chaotic()) else {
        return Ok(());
    };
    if let Some((sys, c0)) = spec.system_for_space()? {
        return Ok(replay_composition(&sys, cert, eps, c0)?);
    }
    let OperatorSpec::Shift { weights: w } = &spec.operator else { unreachable!() };
    match &spec.space.kind {
        SpaceKind::Kothe { matrix, .. } => replay_kothe(w, matrix, cert, eps)?,
        SpaceKind::WeightedLp { p, nu } => replay_weighted_lp(w, nu, *p, cert, eps)?,
        _ => replay_shift(w, cert, eps)?,
    }
    Ok(())
}

fn trichotomy_exit(class: TrichotomyClass) -> u8 {
    match class {
        TrichotomyClass::DenselyChaoticEvidence => EXIT_CERTIFIED,
        TrichotomyClass::AllOrbitsVanishEvidence => EXIT_NOT_CHAOTIC,
        TrichotomyClass::Undetermined => EXIT_UNDETERMINED,
    }
}

fn cmd_analyze(path: &Path, flags: &CommonFlags) -> Result<u8> {
    let (spec, raw) = ProblemSpec::load(path)?;
    let over = flags.overrides();
    let cfg = spec.config(&over);
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "spec": raw,
        "seed": over.seed.or(spec.seed),
    });
    let mut code = EXIT_UNDETERMINED;
    if let Some(v) = run_analyzer(&spec, &cfg)? {
        let replayed = replay(&spec, &v, cfg.eps);
        report["replay"] = match &replayed {
            Ok(()) if v.is_chaotic() => json!("passed"),
            Ok(()) => json!("not_applicable"),
            Err(e) => json!(format!("failed: {e}")),
        };
        code = exit_for(v.status);
        report["verdict"] = serde_json::to_value(&v)?;
        if replayed.is_err() {
            write_json(flags.out.as_deref(), &report)?;
            bail!("certificate replay failed");
        }
    }
    if let OperatorSpec::Shift { weights } = &spec.operator {
        if let Some(t) = &spec.analysis.trichotomy {
            let seeds = match t.ones {
                Some(len) => vec![all_ones(weights.domain, len)?],
                None => Vec::new(),
            };
            let r = trichotomy_classify(&ShiftOperator::new(weights.clone()), &spec.space, t.horizon, &seeds, &[])?;
            if matches!(spec.space.kind, SpaceKind::ProductKn) {
                code = trichotomy_exit(r.class);
            }
            report["trichotomy"] = serde_json::to_value(&r)?;
        } else if matches!(spec.space.kind, SpaceKind::ProductKn) {
            bail!("the product space has no analyzer; add a trichotomy section");
        }
        if let Some(h) = &spec.analysis.hypercyclicity {
            report["hypercyclicity"] = serde_json::to_value(hypercyclicity_check(weights, &spec.space, h.horizon, h.l_min..=h.l_max)?)?;
        }
    }
    write_json(flags.out.as_deref(), &report)?;
    Ok(code)
}

fn all_ones(domain: IndexDomain, len: u64) -> Result<ExactVector> {
    let first = match domain {
        IndexDomain::Unilateral => 1,
        IndexDomain::Bilateral => 0,
    };
    Ok(SparseVector::from_entries(domain, (first..first + len as i64).map(|j| (j, int(1))))?)
}

fn is_lpnu_example(w: &WeightSpec, nu: &WeightForm) -> bool {
    w.domain == IndexDomain::Bilateral && w.form == WeightForm::constant(int(1)) && *nu == WeightSpec::tent_density_example().form
}

fn cmd_witness(path: &Path, flags: &CommonFlags) -> Result<u8> {
    let (spec, raw) = ProblemSpec::load(path)?;
    let over = flags.overrides();
    let cfg = spec.config(&over);
    let opts = spec.analysis.witness.clone().unwrap_or_default();
    let k = opts.k.unwrap_or(1);
    let levels = opts.levels.unwrap_or(over.levels.unwrap_or(8));
    let dip_eps = opts.dip_eps.unwrap_or(0.05);
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "witness",
        "spec": raw,
        "seed": over.seed.or(spec.seed),
    });

    let shift = match &spec.operator {
        OperatorSpec::Shift { weights } if weights.all_nonzero() => Some(weights),
        _ => None,
    };
    let matrix = match (&spec.space.kind, shift) {
        (SpaceKind::C0, Some(_)) => Some((KotheMatrix::Constant { value: int(1) }, 0.0)),
        (SpaceKind::Lp { p }, Some(_)) => Some((KotheMatrix::Constant { value: int(1) }, *p)),
        (SpaceKind::Kothe { matrix, p }, Some(_)) => Some((matrix.clone(), *p)),
        _ => None,
    };
    if let (Some(w), SpaceKind::WeightedLp { p, nu }) = (shift, &spec.space.kind) {
        if is_lpnu_example(w, nu) {
            // the orbit of this vector stays at norm >= 1; check it exactly
            let x = build_example_lpnu(*p, levels)?;
            let op = ShiftOperator::new(w.clone());
            let horizon = flags.horizon.unwrap_or(levels as u64);
            let mut min: Option<(u64, Rational)> = None;
            for n in 1..=horizon.min(levels as u64) {
                let v = shifted_pth_power(&op, &spec.space, &x.pth_powers, n)?;
                if min.as_ref().map_or(true, |(_, m)| v < *m) {
                    min = Some((n, v));
                }
            }
            let (n, m) = min.context("empty horizon")?;
            report["kind"] = json!("orbit_bounded_below");
            report["witness"] = serde_json::to_value(&x)?;
            report["evidence"] = json!({
                "steps": horizon.min(levels as u64),
                "min_pth_power": format_rational(&m),
                "argmin": n,
                "bounded_below_by_one": m >= int(1),
            });
            write_json(flags.out.as_deref(), &report)?;
            return Ok(EXIT_CERTIFIED);
        }
    }
    if let (Some(w), Some((m, p))) = (shift, matrix) {
        let x = match build_irregular_kothe(w, &m, p, k, levels, &WitnessConfig::default()) {
            Ok(x) => x,
            Err(e @ Error::CertificateExhausted { .. }) => {
                report["kind"] = json!("exhausted");
                report["error"] = json!(e.to_string());
                write_json(flags.out.as_deref(), &report)?;
                return Ok(EXIT_UNDETERMINED);
            }
            Err(e) => return Err(e.into()),
        };
        let op = ShiftOperator::new(w.clone());
        let last = x.construction_log.last().map_or(1, |r| r.n);
        let horizon = flags.horizon.unwrap_or(last + last / 2);
        let ev = verify_irregular(&x, &op, &spec.space, horizon, k, dip_eps, 1.0)?;
        report["kind"] = json!("irregular");
        report["witness"] = serde_json::to_value(&x)?;
        report["evidence"] = serde_json::to_value(&ev)?;
        write_json(flags.out.as_deref(), &report)?;
        return Ok(EXIT_CERTIFIED);
    }

    // zero weights, weighted lp and composition operators: the indicator of
    // the certified set is semi-irregular
    let v = run_analyzer(&spec, &cfg)?.context("no witness builder for the product space; use analyze with a trichotomy section")?;
    let Some(set) = semi_irregular_set(&v).filter(|_| v.is_chaotic()) else {
        report["kind"] = json!("none");
        report["verdict"] = serde_json::to_value(&v)?;
        write_json(flags.out.as_deref(), &report)?;
        return Ok(match v.status {
            Status::NotChaoticSymbolic => EXIT_NOT_CHAOTIC,
            _ => EXIT_UNDETERMINED,
        });
    };
    let x = build_semi_irregular_indicator(spec.space.domain, &set)?;
    let trace = orbit_of(&spec, &x, cfg.horizon, &[1])?;
    report["kind"] = json!("semi_irregular");
    report["set"] = json!(set);
    report["vector"] = serde_json::to_value(&x)?;
    report["ns_evidence"] = serde_json::to_value(ns_membership_evidence(&trace, dip_eps))?;
    write_json(flags.out.as_deref(), &report)?;
    Ok(EXIT_CERTIFIED)
}

fn orbit_of<S: lyshift::Scalar>(spec: &ProblemSpec, x: &SparseVector<S>, steps: u64, ks: &[u32]) -> Result<OrbitTrace> {
    Ok(match (&spec.operator, spec.system_for_space()?) {
        (_, Some((sys, _))) => simulate_composition_orbit(&sys, x, steps)?,
        (OperatorSpec::Shift { weights }, None) => simulate_orbit(&ShiftOperator::new(weights.clone()), x, &spec.space, steps, ks)?,
        _ => unreachable!(),
    })
}

/// Accepts a bare vector, a witness, or a witness report.
fn load_vector(path: &Path) -> Result<ExactVector> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(w) = v.get("witness") {
        v = w.clone();
    }
    if let Some(x) = v.get("vector") {
        v = x.clone();
    }
    serde_json::from_value(v).with_context(|| format!("{} holds no vector", path.display()))
}

fn parse_pair(s: &str) -> Result<(Rational, Rational)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts[..] else { bail!("--pair expects LAMBDA,MU") };
    let q = |t: &str| parse_rational(t).with_context(|| format!("invalid scalar {t:?}"));
    Ok((q(a)?, q(b)?))
}

#[derive(Serialize)]
struct PairRow {
    n: u64,
    k: u32,
    seminorm: f64,
    boundary_flag: bool,
    distance: f64,
}

fn cmd_orbit(spec_path: &Path, vector_path: &Path, steps: u64, ks: &[u32], pair: Option<&str>, float: bool, out: Option<&Path>) -> Result<()> {
    let (spec, _) = ProblemSpec::load(spec_path)?;
    let x = load_vector(vector_path)?;
    if x.domain != spec.space.domain {
        bail!("the vector lives on {} but the space on {}", x.domain.name(), spec.space.domain.name());
    }
    let trace = if float { orbit_of(&spec, &x.map_scalar::<f64>(), steps, ks)? } else { orbit_of(&spec, &x, steps, ks)? };
    let mut w = csv::Writer::from_writer(Vec::new());
    match pair {
        None => {
            for row in trace.csv_rows() {
                w.serialize(row)?;
            }
        }
        Some(p) => {
            let OperatorSpec::Shift { weights } = &spec.operator else {
                bail!("pair mode needs a shift operator");
            };
            let (lambda, mu) = parse_pair(p)?;
            let op = ShiftOperator::new(weights.clone());
            let distances: Vec<Vec<f64>> = ks
                .iter()
                .map(|&k| -> Result<Vec<f64>> {
                    Ok(if float {
                        let (l, m) = (lyshift::Scalar::to_f64(&lambda), lyshift::Scalar::to_f64(&mu));
                        li_yorke_pair(&x.map_scalar::<f64>(), l, m, &op, &spec.space, steps, k)?
                    } else {
                        let e = li_yorke_pair(&x, lambda.clone(), mu.clone(), &op, &spec.space, steps, k)?;
                        return Ok(e.distances.iter().map(|d| d.value).collect());
                    }
                    .distances
                    .iter()
                    .map(|d| d.value)
                    .collect())
                })
                .collect::<Result<_>>()?;
            for row in trace.csv_rows() {
                let pos = ks.iter().position(|&k| k == row.k).unwrap();
                w.serialize(PairRow {
                    n: row.n,
                    k: row.k,
                    seminorm: row.seminorm,
                    boundary_flag: row.boundary_flag,
                    distance: distances[pos][row.n as usize - 1],
                })?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    write_output(out, &bytes)
}

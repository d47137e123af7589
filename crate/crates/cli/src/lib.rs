//! Command-line front end: each subcommand runs one check and writes a
//! deterministic CSV or JSON report whose header states the pass criterion.
//!
//! Exit codes: 0 success, 2 malformed input or arguments, 3 validation
//! failure, 4 failed check.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qdiscord::channels::Channel;
use qdiscord::measures::audit::{AuditConfig, Measure, GAMMA_MARGIN_TOL, MONOTONICITY_TOL};
use qdiscord::measures::identity::{IdentityConfig, IdentityReport, CMI_MONOTONE_TOL, IDENTITY_TOL};
use qdiscord::measures::scaling::{qubit_ancilla_with_purity, scaling_demo, ScalingReport, SCALING_TOL};
use qdiscord::measures::{
    apply_on_a, apply_on_b, discord, geometric_discord, geometric_discord_qubit_closed_form, monotonicity_audit,
    mutual_info, tilde_geometric_discord, verify_identity, vn_entropy, ChannelClass, MeasureReport, SamplerConfig,
};
use qdiscord::optimize::OptConfig;
use qdiscord::random::trial_seed;
use qdiscord::states::{bell_state, example_cc_state, example_post_channel_state, random_cq_state, random_state};
use qdiscord::{BipartiteState, DimPair, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

pub const SCALING_PURITIES: [f64; 3] = [1.0, 0.75, 0.5];

#[derive(Debug, Parser)]
#[command(name = "qdiscord", version, about = "Discord measures and their monotonicity checks")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Master seed; every trial derives its own seed from it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Number of random trials (default depends on the command).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,
    /// Local dimensions as `dA,dB`, each between 1 and 4.
    #[arg(long, global = true, default_value = "2,2", value_parser = parse_dims)]
    pub dims: DimPair,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance override `NAME=VALUE`; may be repeated.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one quantity on a state file.
    Compute {
        state_file: PathBuf,
        #[arg(value_enum)]
        measure: ComputeMeasure,
        /// Channel file applied on A before evaluating.
        #[arg(long)]
        apply_a: Option<PathBuf>,
        /// Channel file applied on B before evaluating.
        #[arg(long)]
        apply_b: Option<PathBuf>,
    },
    /// Geometric discord before and after attaching ancillas of purity 1, 0.75, 0.5 on B.
    DemoScaling,
    /// Monotonicity of a measure under random channels on B.
    Audit {
        #[arg(value_parser = parse_measure)]
        measure: Measure,
    },
    /// Information loss against the conditional mutual information of the dilation.
    VerifyIdentity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ComputeMeasure {
    #[value(alias = "dg")]
    GeometricDiscord,
    GeometricDiscordClosedForm,
    #[value(alias = "d")]
    Discord,
    PovmDiscord,
    TildeGeometricDiscord,
    MutualInfo,
    Entropy,
}

fn parse_dims(s: &str) -> Result<DimPair, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected dA,dB, got '{s}'"));
    };
    let parse = |x: &str| -> Result<usize, String> {
        match x.parse::<usize>() {
            Ok(d @ 1..=4) => Ok(d),
            Ok(d) => Err(format!("dimension {d} outside 1..=4")),
            Err(e) => Err(format!("'{x}': {e}")),
        }
    };
    Ok(DimPair::new(parse(a)?, parse(b)?))
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v: f64 = value.trim().parse().map_err(|e| format!("'{value}': {e}"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("tolerance {name} must be positive, got {v}"));
    }
    Ok((name.trim().to_string(), v))
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn parse(message: impl Display) -> Self {
        Self { code: EXIT_PARSE, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Encoding(_) | Error::InvalidConfig(_) => EXIT_PARSE,
            _ => EXIT_VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

/// Resolves `--tol` overrides against the names a command accepts.
fn tolerances<const N: usize>(overrides: &[(String, f64)], defaults: [(&str, f64); N]) -> Result<[f64; N], Failure> {
    let mut out = defaults.map(|(_, v)| v);
    for (name, v) in overrides {
        let idx = defaults.iter().position(|(n, _)| n == name).ok_or_else(|| {
            let known: Vec<&str> = defaults.iter().map(|(n, _)| *n).collect();
            Failure::parse(format!("unknown tolerance '{name}' (accepted: {})", known.join(", ")))
        })?;
        out[idx] = *v;
    }
    Ok(out)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_PARSE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = &cli.run;
    let (report, passed, summary) = match &cli.command {
        Command::Compute { state_file, measure, apply_a, apply_b } => {
            tolerances(&cfg.tol, [])?;
            let state = load_state(state_file, apply_a.as_deref(), apply_b.as_deref())?;
            (compute(&state, *measure, cfg)?, true, None)
        }
        Command::DemoScaling => demo_scaling(cfg)?,
        Command::Audit { measure } => audit(*measure, cfg)?,
        Command::VerifyIdentity => identity(cfg)?,
    };

    match &cfg.out {
        Some(path) => fs::write(path, &report)
            .map_err(|e| Failure { code: EXIT_VALIDATION, message: format!("{}: {e}", path.display()) })?,
        None => stdout.write_all(report.as_bytes()).map_err(Failure::parse)?,
    }
    if let Some(s) = summary {
        let _ = writeln!(stderr, "{s}");
    }
    Ok(if passed { EXIT_OK } else { EXIT_CHECK })
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path, apply_a: Option<&Path>, apply_b: Option<&Path>) -> Result<BipartiteState, Failure> {
    let mut state = BipartiteState::from_json(&read_input(path)?)?;
    if let Some(p) = apply_a {
        state = apply_on_a(&state, &Channel::from_json(&read_input(p)?)?)?;
    }
    if let Some(p) = apply_b {
        state = apply_on_b(&state, &Channel::from_json(&read_input(p)?)?)?;
    }
    Ok(state)
}

/// Report of a scalar quantity that has no optimizer behind it.
#[derive(Serialize)]
struct ScalarReport {
    measure: &'static str,
    value: f64,
}

fn compute(state: &BipartiteState, measure: ComputeMeasure, cfg: &RunArgs) -> Result<String, Failure> {
    let opt = OptConfig::default();
    let scalar = |name: &'static str, value: f64| -> String {
        match cfg.format {
            Format::Json => json(&ScalarReport { measure: name, value }),
            Format::Csv => format!("# {name} of a {} state\nmeasure,value\n{name},{}\n", state.dims(), num(value)),
        }
    };
    let report: MeasureReport = match measure {
        ComputeMeasure::MutualInfo => return Ok(scalar("mutual_info", mutual_info(state)?)),
        ComputeMeasure::Entropy => return Ok(scalar("entropy", vn_entropy(state.rho())?)),
        ComputeMeasure::GeometricDiscordClosedForm => {
            return Ok(scalar("geometric_discord_closed_form", geometric_discord_qubit_closed_form(state)?))
        }
        ComputeMeasure::GeometricDiscord => geometric_discord(state, &opt)?,
        ComputeMeasure::Discord => discord(state, ChannelClass::Projective, &opt)?,
        ComputeMeasure::PovmDiscord => discord(state, ChannelClass::povm_for(state.dims().d_a), &opt)?,
        ComputeMeasure::TildeGeometricDiscord => {
            tilde_geometric_discord(state, &SamplerConfig::default(), &opt, cfg.seed)?
        }
    };
    Ok(match cfg.format {
        Format::Json => json(&report),
        Format::Csv => {
            let d = &report.optimizer;
            let grid = d.grid_resolution.map(|[t, p]| format!("{t}x{p}")).unwrap_or_default();
            csv_table(
                &[format!("# {} of a {} state (optimizer estimate)", report.measure, state.dims())],
                &["measure", "value", "argmin", "restarts", "grid", "refinement_iters", "converged", "clamped"],
                [vec![
                    report.measure.clone(),
                    num(report.value),
                    report.argmin.describe(),
                    d.restarts.to_string(),
                    grid,
                    d.refinement_iters.to_string(),
                    d.converged.to_string(),
                    report.clamped.to_string(),
                ]],
            )
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingRow {
    pub state: String,
    #[serde(flatten)]
    pub report: ScalingReport,
}

#[derive(Serialize)]
struct ScalingOutput<'a> {
    criterion: String,
    seed: u64,
    dims: DimPair,
    rows: &'a [ScalingRow],
    passed: bool,
}

/// Named states swept by `demo-scaling`: the Bell state, the two example
/// states, then `n` random states and one random CQ state of `dims`.
pub fn scaling_states(dims: DimPair, n: usize, seed: u64) -> Vec<(String, BipartiteState)> {
    let mut out = vec![
        ("bell".to_string(), bell_state()),
        ("example_cc".to_string(), example_cc_state()),
        ("example_post_channel".to_string(), example_post_channel_state()),
    ];
    for i in 0..n {
        let s = trial_seed(seed, i as u64);
        out.push((format!("random(seed={s})"), random_state(dims.d_a, dims.d_b, s)));
    }
    let s = trial_seed(seed, n as u64);
    out.push((format!("random_cq(seed={s})"), random_cq_state(dims.d_a, dims.d_b, s)));
    out
}

fn demo_scaling(cfg: &RunArgs) -> Result<(String, bool, Option<String>), Failure> {
    let [tol] = tolerances(&cfg.tol, [("scaling", SCALING_TOL)])?;
    let opt = OptConfig::default();
    let n = cfg.trials.unwrap_or(10) as usize;
    let mut rows = Vec::new();
    for (name, state) in scaling_states(cfg.dims, n, cfg.seed) {
        for p in SCALING_PURITIES {
            let report = scaling_demo(&state, &qubit_ancilla_with_purity(p), &opt, tol)?;
            rows.push(ScalingRow { state: name.clone(), report });
        }
    }
    let passed = rows.iter().all(|r| r.report.holds);
    let criterion = format!("|D_G(rho x sigma) - D_G(rho) * Tr(sigma^2)| <= {tol:e} for every row");
    let worst = rows.iter().map(|r| r.report.deviation).fold(0.0, f64::max);
    let mut summary = format!("demo-scaling: {} rows, max deviation {worst:e}, passed {passed}", rows.len());
    if let Some(bad) = rows.iter().find(|r| !r.report.holds) {
        summary.push_str(&format!("\noffending row: {}", json(bad).trim_end()));
    }

    let report = match cfg.format {
        Format::Json => json(&ScalingOutput { criterion, seed: cfg.seed, dims: cfg.dims, rows: &rows, passed }),
        Format::Csv => csv_table(
            &[
                format!("# scaling of geometric discord under attaching an ancilla on B, seed {}", cfg.seed),
                format!("# criterion: {criterion}"),
                "# discarding the ancilla again multiplies D_G by reverse_factor = 1/Tr(sigma^2)".to_string(),
                format!("# passed {passed}"),
            ],
            &["state", "purity", "before", "after", "ratio", "reverse_factor", "deviation", "holds"],
            rows.iter().map(|r| {
                let x = &r.report;
                vec![
                    r.state.clone(),
                    num(x.purity),
                    num(x.before),
                    num(x.after),
                    x.ratio.map(num).unwrap_or_default(),
                    num(x.reverse_factor),
                    num(x.deviation),
                    x.holds.to_string(),
                ]
            }),
        ),
    };
    Ok((report, passed, Some(summary)))
}

fn audit(measure: Measure, cfg: &RunArgs) -> Result<(String, bool, Option<String>), Failure> {
    let [tol, margin] = tolerances(&cfg.tol, [("monotonicity", MONOTONICITY_TOL), ("gamma_margin", GAMMA_MARGIN_TOL)])?;
    let mut ac = AuditConfig::new(measure, cfg.trials.unwrap_or(200) as usize, cfg.dims, cfg.seed);
    ac.tolerance = tol;
    ac.margin_tolerance = margin;
    let table = monotonicity_audit(&ac)?;
    let s = &table.summary;
    let ratio = s.max_ancilla_ratio.map(num).unwrap_or_else(|| "n/a".into());
    let summary = format!(
        "audit {measure}: max violation {:?} ; {} above {tol:e} ; max ancilla-discard ratio {ratio} ; passed {}",
        s.max_violation, s.violations_above_tolerance, s.passed
    );
    let report = match cfg.format {
        Format::Json => table.to_json() + "\n",
        Format::Csv => table.to_csv(),
    };
    Ok((report, s.passed, Some(summary)))
}

fn identity(cfg: &RunArgs) -> Result<(String, bool, Option<String>), Failure> {
    let [id_tol, mono_tol] = tolerances(&cfg.tol, [("identity", IDENTITY_TOL), ("cmi_monotone", CMI_MONOTONE_TOL)])?;
    let mut ic = IdentityConfig::new(cfg.trials.unwrap_or(100) as usize, cfg.dims, cfg.seed);
    ic.identity_tol = id_tol;
    ic.monotone_tol = mono_tol;
    let rep = verify_identity(&ic)?;
    let mut summary = format!(
        "verify-identity: max |loss - CMI| {:e} ; max rewrite gap {:e} ; max CMI increase {:e} ; passed {}",
        rep.max_identity_gap, rep.max_rewrite_gap, rep.max_cmi_increase, rep.passed
    );
    if let Some(bad) = rep.rows.iter().find(|r| !r.passed) {
        summary.push_str(&format!("\ncounterexample: {}", json(bad).trim_end()));
    }
    let report = match cfg.format {
        Format::Json => json(&rep),
        Format::Csv => identity_csv(&rep),
    };
    Ok((report, rep.passed, Some(summary)))
}

fn identity_csv(rep: &IdentityReport) -> String {
    let c = &rep.config;
    csv_table(
        &[
            format!(
                "# information loss vs conditional mutual information of the dilation, dims {}, seed {}",
                c.dims, c.seed
            ),
            format!("# criterion: {}", rep.criterion),
            "# a_bc_form_gap = |CMI - (I(A':BC) - I(A':C))| is reported only; that expression is I(A':B|C)".to_string(),
            format!("# max a_bc_form_gap {:?} ; passed {}", rep.max_a_bc_form_gap, rep.passed),
        ],
        &[
            "trial",
            "seed",
            "kind",
            "channel_a",
            "channel_b",
            "info_loss",
            "cmi",
            "cmi_via_c",
            "a_bc_minus_a_c",
            "cmi_after_b",
            "identity_gap",
            "rewrite_gap",
            "a_bc_form_gap",
            "cmi_increase",
            "passed",
        ],
        rep.rows.iter().map(|r| {
            let k = &r.check;
            vec![
                r.trial.to_string(),
                r.seed.to_string(),
                serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                r.channel_a.clone(),
                r.channel_b.clone(),
                num(k.info_loss),
                num(k.cmi),
                num(k.cmi_via_c),
                num(k.a_bc_minus_a_c),
                num(k.cmi_after_b),
                num(k.identity_gap),
                num(k.rewrite_gap),
                num(k.a_bc_form_gap),
                num(k.cmi_increase),
                r.passed.to_string(),
            ]
        }),
    )
}

/// Shortest round-trip form, switching to exponent notation for tiny or huge values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn csv_table(header: &[String], columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out: String = header.iter().map(|l| format!("{l}\n")).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
    out
}

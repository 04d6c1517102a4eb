//! `chancomp`: batch computations on complementary channels.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or domain error,
//! 3 I/O error.

mod report;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chancomp::families::{self, CorrelationMatrix};
use chancomp::io::{
    decode_matrix, encode_matrix, write_channel, ChannelFile, EncodedMatrix, Metadata,
};
use chancomp::numerics::{derive_seed, random_pure};
use chancomp::purity::ANOMALY_THRESHOLD;
use chancomp::{
    additivity_gap, complement, complement_gaussian, complements_witness, dilate,
    equivalence_witness, h_hat, min_output_entropy, minimal_form, multiplicativity_gap, nu_p,
    superadditivity_slack, wh_violation_threshold, wh_violation_witness, DensityMatrix, Error,
    Exponent, GaussianChannel, KrausMap, OptimizerOptions, StinespringOperator, WitnessReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{emit, to_value, ReportBuilder};
use verify::{Suite, SuiteParams};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Io(_)) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "chancomp",
    version,
    about = "Complementary channels, output purity and entropy"
)]
struct Cli {
    /// Master seed; sub-seeds are derived from it by a counter scheme.
    #[arg(long, global = true, default_value = "0xC0FFEE", value_parser = parse_seed)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a channel file from a named family.
    Gen(GenArgs),
    /// Write the complementary channel of a channel file.
    Complement {
        input: PathBuf,
        /// Reduce to a minimal Kraus form first.
        #[arg(long)]
        minimal: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write the minimal Kraus form of a channel file.
    Minimal {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Partial-isometry witness between two channel files.
    Witness {
        first: PathBuf,
        second: PathBuf,
        /// Treat both files as complements of one common channel instead of
        /// two Kraus forms of the same channel.
        #[arg(long)]
        complements: bool,
        #[command(flatten)]
        output: ReportOutput,
    },
    /// Maximal output p-purity `ν_p`.
    Purity {
        input: PathBuf,
        #[arg(long, value_parser = parse_exponent)]
        p: Exponent,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[command(flatten)]
        output: ReportOutput,
    },
    /// Minimal output entropy.
    Minentropy {
        input: PathBuf,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[command(flatten)]
        output: ReportOutput,
    },
    /// Convex closure of the output entropy at a fixed input state.
    Hhat {
        input: PathBuf,
        /// Input density matrix as a nested `[re, im]` array; maximally mixed if omitted.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Number of ensemble members (default: rank squared).
        #[arg(long)]
        ensemble_size: Option<usize>,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[command(flatten)]
        output: ReportOutput,
    },
    /// Multiplicativity, additivity or superadditivity gap of a channel pair.
    Gap {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum)]
        kind: GapKind,
        /// Exponent for the multiplicativity gap.
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        /// Joint input for the superadditivity slack; maximally mixed if omitted.
        #[arg(long)]
        state: Option<PathBuf>,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        #[command(flatten)]
        output: ReportOutput,
    },
    /// Exact multiplicativity test of the transpose-depolarizing channel.
    WhWitness {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_exponent)]
        p: Exponent,
        #[command(flatten)]
        output: ReportOutput,
    },
    /// One-mode attenuation or amplifier channel, optionally its complement.
    Gaussian {
        #[arg(long, value_enum)]
        kind: GaussianFamily,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        complement: bool,
        #[command(flatten)]
        output: ReportOutput,
    },
    /// Run an invariant suite; exit 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[command(flatten)]
        output: ReportOutput,
    },
}

#[derive(Args)]
struct ReportOutput {
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
}

impl OptimizerArgs {
    fn options(&self, seed: u64) -> OptimizerOptions {
        OptimizerOptions {
            max_iter: self.max_iter,
            ..OptimizerOptions::default()
                .with_restarts(self.restarts)
                .with_seed(seed)
        }
    }

    fn record(&self, report: &mut ReportBuilder) {
        let opts = OptimizerOptions::default();
        report
            .digest()
            .param("restarts", self.restarts)
            .param("max_iter", self.max_iter);
        report.tolerance("optimizer_stall", opts.tol);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Identity,
    Cdepol,
    Depolarizing,
    Wh,
    Eb,
    Cq,
    Qc,
    Diagonal,
    Gdiag,
    Mixture,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Input dimension.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Output dimension (eb, cq).
    #[arg(long)]
    d_out: Option<usize>,
    /// Depolarizing parameter.
    #[arg(long)]
    p: Option<f64>,
    /// Number of rank-one terms (eb, qc) or vectors (gdiag).
    #[arg(long)]
    m: Option<usize>,
    /// Component channel files (mixture).
    #[arg(long, value_delimiter = ',')]
    inputs: Vec<PathBuf>,
    /// Mixture weights, one per component.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GapKind {
    Multiplicativity,
    Additivity,
    Superadditivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GaussianFamily {
    Attenuation,
    Amplifier,
}

/// A channel file with its raw bytes, kept for the input digest.
struct Loaded {
    path: PathBuf,
    bytes: Vec<u8>,
    file: ChannelFile,
    map: KrausMap,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(Error::Io)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Format(format!("{} is not UTF-8", path.display())))?;
    let file = ChannelFile::from_json(&text)?;
    let map = file.to_map()?;
    Ok(Loaded {
        path: path.to_path_buf(),
        bytes,
        file,
        map,
    })
}

fn load_state(
    path: Option<&Path>,
    dim: usize,
    report: &mut ReportBuilder,
) -> Result<DensityMatrix, CliError> {
    let Some(path) = path else {
        report.digest().param("state", "maximally_mixed");
        return Ok(DensityMatrix::maximally_mixed(dim));
    };
    let bytes = fs::read(path).map_err(Error::Io)?;
    let rows: EncodedMatrix = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let rho = DensityMatrix::new(decode_matrix(&rows)?)?;
    if rho.dim() != dim {
        return Err(Error::Shape(format!(
            "state has dimension {}, channel input {dim}",
            rho.dim()
        ))
        .into());
    }
    report.digest().file(path, &bytes);
    Ok(rho)
}

fn summary(phi: &KrausMap) -> String {
    format!(
        "d_in={} d_out={} kraus={} tp={}",
        phi.d_in(),
        phi.d_out(),
        phi.len(),
        phi.is_trace_preserving()
    )
}

/// Writes the channel to `out`, or prints it as JSON when no path is given.
fn write_or_print(phi: &KrausMap, metadata: Metadata, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_channel(path, phi, metadata)?;
            println!("{}", summary(phi));
        }
        None => {
            println!("{}", ChannelFile::from_map(phi, metadata).to_json()?);
            eprintln!("{}", summary(phi));
        }
    }
    Ok(())
}

fn required<T>(value: Option<T>, flag: &str, family: Family) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("family {family:?} needs --{flag}")))
}

fn cmd_gen(args: &GenArgs, seed: u64) -> Result<u8, CliError> {
    let d = args.d;
    let family = args.family;
    let sub = derive_seed(seed, 0);
    let (phi, seeded) = match family {
        Family::Identity => (families::identity(d), false),
        Family::Cdepol => (families::completely_depolarizing(d), false),
        Family::Depolarizing => (
            families::depolarizing(d, required(args.p, "p", family)?)?,
            false,
        ),
        Family::Wh => (families::transpose_depolarizing(d)?, false),
        Family::Eb => {
            let d_out = args.d_out.unwrap_or(d);
            let m = args.m.unwrap_or(d * d_out);
            (
                families::eb_channel(&families::random_eb_spec(d, d_out, m, sub)?),
                true,
            )
        }
        Family::Cq => {
            let d_out = args.d_out.unwrap_or(d);
            (
                families::eb_channel(&families::random_cq_spec(d, d_out, sub)?),
                true,
            )
        }
        Family::Qc => {
            let m = args.m.unwrap_or(d);
            (
                families::eb_channel(&families::random_qc_spec(d, m, sub)?),
                true,
            )
        }
        Family::Diagonal => (
            families::diagonal_channel(&families::random_correlation(d, sub)?)?,
            true,
        ),
        Family::Gdiag => {
            let m = args.m.unwrap_or(d);
            let c: CorrelationMatrix = families::random_correlation(m, sub)?;
            let psi: Vec<_> = (0..m as u64)
                .map(|a| {
                    random_pure(d, derive_seed(seed, 1 + a))
                        .amplitudes()
                        .clone()
                })
                .collect();
            (families::generalized_diagonal(&c, &psi)?, true)
        }
        Family::Mixture => {
            if args.inputs.is_empty() {
                return Err(CliError::Usage(
                    "mixture needs --inputs a.json,b.json,...".into(),
                ));
            }
            let maps = args
                .inputs
                .iter()
                .map(|p| load(p).map(|l| l.map))
                .collect::<Result<Vec<_>, _>>()?;
            (families::convex_mixture(&maps, &args.weights)?, false)
        }
    };
    let family_name = format!("{family:?}").to_ascii_lowercase();
    let metadata = Metadata {
        name: None,
        seed: seeded.then_some(seed),
        family: Some(family_name),
    };
    write_or_print(&phi, metadata, args.out.as_deref())?;
    Ok(0)
}

fn derived_metadata(source: &Metadata, op: &str) -> Metadata {
    Metadata {
        name: source.name.as_ref().map(|n| format!("{op}({n})")),
        seed: source.seed,
        family: source.family.as_ref().map(|f| format!("{op}({f})")),
    }
}

fn cmd_complement(input: &Path, minimal: bool, out: Option<&Path>) -> Result<u8, CliError> {
    let loaded = load(input)?;
    let base = if minimal {
        minimal_form(&loaded.map)
    } else {
        loaded.map
    };
    let comp = complement(&base);
    write_or_print(
        &comp,
        derived_metadata(&loaded.file.metadata, "complement"),
        out,
    )?;
    Ok(0)
}

fn cmd_minimal(input: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let loaded = load(input)?;
    let min = minimal_form(&loaded.map);
    write_or_print(
        &min,
        derived_metadata(&loaded.file.metadata, "minimal"),
        out,
    )?;
    Ok(0)
}

fn witness_value(r: &WitnessReport) -> Value {
    json!({
        "passes": r.passes(),
        "residual": r.residual,
        "forward_residual": r.forward_residual,
        "backward_residual": r.backward_residual,
        "channel_residual": r.channel_residual,
        "tolerance": r.tolerance,
        "projection_residual": r.witness.projection_residual(),
        "unitary": r.witness.is_unitary(r.tolerance),
        "witness": encode_matrix(&r.witness.w),
    })
}

fn cmd_witness(
    first: &Path,
    second: &Path,
    complements: bool,
    output: &ReportOutput,
) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("witness");
    let (a, b) = (load(first)?, load(second)?);
    report
        .digest()
        .param("complements", complements)
        .file(&a.path, &a.bytes)
        .file(&b.path, &b.bytes);
    let solved = if complements {
        complements_witness(&a.map, &b.map)
    } else {
        equivalence_witness(
            &StinespringOperator::from_kraus(&a.map),
            &StinespringOperator::from_kraus(&b.map),
        )
    };
    let (results, ok) = match solved {
        Ok(r) => (witness_value(&r), r.passes()),
        Err(Error::NotSameChannel(res)) => (
            json!({ "passes": false, "channel_residual": res, "reason": "different channels" }),
            false,
        ),
        Err(e) => return Err(e.into()),
    };
    let line = format!("witness {}", if ok { "passes" } else { "fails" });
    emit(&report.finish(results), output.json.as_deref(), &line)?;
    if !ok {
        eprintln!("{line}");
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_purity(
    input: &Path,
    p: Exponent,
    optimizer: &OptimizerArgs,
    output: &ReportOutput,
    seed: u64,
) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("purity");
    let loaded = load(input)?;
    report
        .seed(seed)
        .digest()
        .param("p", p)
        .file(&loaded.path, &loaded.bytes);
    optimizer.record(&mut report);
    let result = nu_p(&loaded.map, p, &optimizer.options(seed))?;
    let line = format!("nu_{p} = {}", result.value);
    emit(
        &report.finish(to_value(&result)?),
        output.json.as_deref(),
        &line,
    )?;
    Ok(0)
}

fn cmd_minentropy(
    input: &Path,
    optimizer: &OptimizerArgs,
    output: &ReportOutput,
    seed: u64,
) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("minentropy");
    let loaded = load(input)?;
    report.seed(seed).digest().file(&loaded.path, &loaded.bytes);
    optimizer.record(&mut report);
    let result = min_output_entropy(&loaded.map, &optimizer.options(seed))?;
    let line = format!("min output entropy = {}", result.value);
    emit(
        &report.finish(to_value(&result)?),
        output.json.as_deref(),
        &line,
    )?;
    Ok(0)
}

fn cmd_hhat(
    input: &Path,
    state: Option<&Path>,
    ensemble_size: Option<usize>,
    optimizer: &OptimizerArgs,
    output: &ReportOutput,
    seed: u64,
) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("hhat");
    let loaded = load(input)?;
    report.seed(seed).digest().file(&loaded.path, &loaded.bytes);
    if let Some(m) = ensemble_size {
        report.digest().param("ensemble_size", m);
    }
    optimizer.record(&mut report);
    let rho = load_state(state, loaded.map.d_in(), &mut report)?;
    let opts = OptimizerOptions {
        ensemble_size,
        ..optimizer.options(seed)
    };
    let result = h_hat(&loaded.map, &rho, &opts)?;
    let line = format!("H_hat = {}", result.value);
    emit(
        &report.finish(to_value(&result)?),
        output.json.as_deref(),
        &line,
    )?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_gap(
    first: &Path,
    second: &Path,
    kind: GapKind,
    p: Option<Exponent>,
    state: Option<&Path>,
    optimizer: &OptimizerArgs,
    output: &ReportOutput,
    seed: u64,
) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("gap");
    let (a, b) = (load(first)?, load(second)?);
    report
        .seed(seed)
        .digest()
        .param("kind", format!("{kind:?}"))
        .file(&a.path, &a.bytes)
        .file(&b.path, &b.bytes);
    optimizer.record(&mut report);
    let opts = optimizer.options(seed);
    let (results, line) = match kind {
        GapKind::Multiplicativity => {
            let p = p.ok_or_else(|| CliError::Usage("multiplicativity gap needs --p".into()))?;
            report.digest().param("p", p);
            let g = multiplicativity_gap(&a.map, &b.map, p, &opts)?;
            let line = format!("multiplicativity gap {} (band {})", g.gap, g.band);
            (
                json!({ "kind": "multiplicativity", "p": p, "report": g }),
                line,
            )
        }
        GapKind::Additivity => {
            let g = additivity_gap(&a.map, &b.map, &opts)?;
            let line = format!("additivity gap {} (band {})", g.gap, g.band);
            (json!({ "kind": "additivity", "report": g }), line)
        }
        GapKind::Superadditivity => {
            let rho = load_state(state, a.map.d_in() * b.map.d_in(), &mut report)?;
            report.tolerance("anomaly_threshold", ANOMALY_THRESHOLD);
            let s = superadditivity_slack(&a.map, &b.map, &rho, &opts)?;
            let line = format!(
                "superadditivity slack {} ± {}{}",
                s.slack,
                s.band,
                if s.anomaly { " (anomaly)" } else { "" }
            );
            (json!({ "kind": "superadditivity", "report": s }), line)
        }
    };
    emit(&report.finish(results), output.json.as_deref(), &line)?;
    Ok(0)
}

fn cmd_wh_witness(d: usize, p: Exponent, output: &ReportOutput) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("wh-witness");
    report.digest().param("d", d).param("p", p);
    let w = wh_violation_witness(d, p)?;
    let line = format!("d={d} p={p} ratio={}", w.ratio);
    let threshold = wh_violation_threshold(d)?;
    let results = json!({ "witness": w, "violation": w.ratio > 1.0, "threshold_p": threshold });
    emit(&report.finish(results), output.json.as_deref(), &line)?;
    Ok(0)
}

fn cmd_gaussian(
    kind: GaussianFamily,
    k: f64,
    take_complement: bool,
    output: &ReportOutput,
) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("gaussian");
    report
        .digest()
        .param("kind", format!("{kind:?}"))
        .param("k", k)
        .param("complement", take_complement);
    let ch = match kind {
        GaussianFamily::Attenuation => GaussianChannel::attenuation(k)?,
        GaussianFamily::Amplifier => GaussianChannel::amplifier(k)?,
    };
    let dilation = dilate(&ch)?;
    let mut results = json!({
        "channel": ch,
        "cp_margin": ch.cp_margin(),
        "dilation_symplectic_residual": dilation.symplectic_residual(),
    });
    let mut line = format!("{:?} coefficient {}", ch.kind, ch.coeff);
    if take_complement {
        let c = complement_gaussian(&ch)?;
        line = format!("complement: {:?} coefficient {}", c.kind, c.coeff);
        results["complement"] = to_value(&c)?;
        results["complement_cp_margin"] = json!(c.cp_margin());
    }
    report.tolerance("classification", 1e-12);
    emit(&report.finish(results), output.json.as_deref(), &line)?;
    Ok(0)
}

fn cmd_verify(suite: Suite, params: SuiteParams, output: &ReportOutput) -> Result<u8, CliError> {
    let mut report = ReportBuilder::new("verify");
    report
        .seed(params.seed)
        .digest()
        .param("suite", suite.name())
        .param("restarts", params.restarts);
    if let Some(t) = params.trials {
        report.digest().param("trials", t);
    }
    if let Some(d) = params.d {
        report.digest().param("d", d);
    }
    if let Some(p) = params.p {
        report.digest().param("p", p);
    }
    let outcome = verify::run(suite, &params)?;
    report.tolerance("check", outcome.tolerance);
    let failed: Vec<_> = outcome.checks.iter().filter(|c| !c.pass).collect();
    for c in &failed {
        eprintln!(
            "FAIL {}: residual {:e} > {:e}",
            c.name, c.residual, c.tolerance
        );
    }
    let passed = outcome.passed();
    let line = format!(
        "verify {}: {} of {} checks passed",
        suite.name(),
        outcome.checks.len() - failed.len(),
        outcome.checks.len()
    );
    let results = json!({
        "suite": suite.name(),
        "passed": passed,
        "checks": outcome.checks,
        "details": outcome.extra,
    });
    emit(&report.finish(results), output.json.as_deref(), &line)?;
    Ok(if passed { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::Gen(args) => cmd_gen(&args, seed),
        Command::Complement {
            input,
            minimal,
            out,
        } => cmd_complement(&input, minimal, out.as_deref()),
        Command::Minimal { input, out } => cmd_minimal(&input, out.as_deref()),
        Command::Witness {
            first,
            second,
            complements,
            output,
        } => cmd_witness(&first, &second, complements, &output),
        Command::Purity {
            input,
            p,
            optimizer,
            output,
        } => cmd_purity(&input, p, &optimizer, &output, seed),
        Command::Minentropy {
            input,
            optimizer,
            output,
        } => cmd_minentropy(&input, &optimizer, &output, seed),
        Command::Hhat {
            input,
            state,
            ensemble_size,
            optimizer,
            output,
        } => cmd_hhat(
            &input,
            state.as_deref(),
            ensemble_size,
            &optimizer,
            &output,
            seed,
        ),
        Command::Gap {
            first,
            second,
            kind,
            p,
            state,
            optimizer,
            output,
        } => cmd_gap(
            &first,
            &second,
            kind,
            p,
            state.as_deref(),
            &optimizer,
            &output,
            seed,
        ),
        Command::WhWitness { d, p, output } => cmd_wh_witness(d, p, &output),
        Command::Gaussian {
            kind,
            k,
            complement,
            output,
        } => cmd_gaussian(kind, k, complement, &output),
        Command::Verify {
            suite,
            trials,
            d,
            p,
            restarts,
            output,
        } => cmd_verify(
            suite,
            SuiteParams {
                trials,
                d,
                p,
                restarts,
                seed,
            },
            &output,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

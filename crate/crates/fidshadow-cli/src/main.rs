//! Command-line surface: channel ingestion, computation dispatch, CSV/JSON
//! emission.
//!
//! Exit codes: 0 success, 2 parse error, 3 validation error, 4
//! non-convergence, 5 method inapplicable to the given channel.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use fidshadow::analytic::{
    self, build_s_matrix, extremes_mixed_unitary, mean_mixed_unitary, AnalyticPdf, MixedUnitaryQubitSpec,
};
use fidshadow::channel::{sample_fidelities_with_workers, ChannelSpec};
use fidshadow::discriminate::{discriminate, DiscriminationReport};
use fidshadow::error::Error as FidError;
use fidshadow::linalg::{self, CMatrix};
use fidshadow::numrange::{extremal_fidelity, HermitianCollection, OptimizerOptions};
use fidshadow::schur::{
    gram_matrix, schur_max_fidelity, schur_min_fidelity, weight_swap_qubit_channel, weight_swap_qutrit_channel,
    MinimumLocation, SchurChannel,
};
use fidshadow::simplex_shadow::{
    pdf_commuting_channel, pdf_unitary_epsilon, shadow_uniformity_check, CommutingCollection, SampledPdf,
    UniformityOptions,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "fidshadow", version, about = "Fidelity statistics of quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity density as CSV grid plus a JSON header
    Pdf(PdfArgs),
    /// Extreme fidelities F_min / F_max
    Extremes(ExtremesArgs),
    /// Exact Schur-channel minimum over the simplex
    Minfid(MinfidArgs),
    /// Joint-expectation shadow cloud and uniformity test
    Shadow(ShadowArgs),
    /// Distribution-based comparison of two channels
    Discriminate(DiscriminateArgs),
    /// Mean fidelity (closed form when available, Monte Carlo otherwise)
    Mean(MeanArgs),
}

/// Where a channel comes from: a JSON file (channel spec or family
/// shorthand) or family flags given directly.
#[derive(Args, Clone)]
struct SourceArgs {
    /// Channel-spec JSON or family-shorthand JSON file
    input: Option<PathBuf>,
    /// Family name: qubit_unitary | pauli | qutrit_unitary | schur | mixed_unitary
    #[arg(long)]
    family: Option<String>,
    /// Eigenphase of the qubit/qutrit unitary families
    #[arg(long)]
    alpha: Option<f64>,
    /// Second eigenphase of the qutrit unitary family
    #[arg(long)]
    beta: Option<f64>,
    /// Pauli probabilities p0,p1,p2,p3
    #[arg(long, value_delimiter = ',', num_args = 4)]
    p: Option<Vec<f64>>,
}

#[derive(Args)]
struct RunArgs {
    /// Monte Carlo sample count
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Histogram bin count (sampled methods; default Freedman-Diaconis)
    #[arg(long)]
    bins: Option<usize>,
    /// Worker count (default: FIDSHADOW_WORKERS or 1)
    #[arg(long)]
    workers: Option<usize>,
    /// Suppress the timestamp field for byte-identical reruns
    #[arg(long)]
    deterministic: bool,
    /// Output base path (writes <out>.csv / <out>.json as applicable)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PdfArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    run: RunArgs,
    /// analytic | montecarlo | simplex | epsilon (default: best applicable)
    #[arg(long)]
    method: Option<String>,
    /// Interpolation weight of the auxiliary Kraus part (epsilon method)
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Grid points for the density CSV
    #[arg(long, default_value_t = 2001)]
    grid: usize,
}

#[derive(Args)]
struct ExtremesArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Optimizer restarts (iterative fallback path)
    #[arg(long, default_value_t = 32)]
    restarts: usize,
}

#[derive(Args)]
struct MinfidArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Emit a parameter sweep CSV with this many p grid points
    #[arg(long)]
    sweep_p: Option<usize>,
}

#[derive(Args)]
struct ShadowArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct DiscriminateArgs {
    /// First channel JSON file
    input_a: PathBuf,
    /// Second channel JSON file
    input_b: PathBuf,
    #[command(flatten)]
    run: RunArgs,
    /// Kolmogorov-Smirnov rejection threshold (default 1.63*sqrt(2/n))
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct MeanArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    run: RunArgs,
}

// ---------------------------------------------------------------------------
// error handling and exit codes
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    Parse(String),
    Validation(String),
    NonConvergence(String),
    Inapplicable(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
            CliError::NonConvergence(_) => 4,
            CliError::Inapplicable(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Validation(m)
            | CliError::NonConvergence(m)
            | CliError::Inapplicable(m)
            | CliError::Io(m) => m,
        }
    }
}

fn validation(err: FidError) -> CliError {
    CliError::Validation(err.to_string())
}

fn inapplicable(err: FidError) -> CliError {
    CliError::Inapplicable(err.to_string())
}

type CliResult<T> = Result<T, CliError>;

// ---------------------------------------------------------------------------
// channel sources
// ---------------------------------------------------------------------------

#[derive(Clone)]
enum Source {
    Kraus { channel: ChannelSpec, aux: Vec<CMatrix> },
    QubitUnitary { alpha: f64 },
    QutritUnitary { alpha: f64, beta: f64 },
    Pauli { p: [f64; 4] },
    MixedUnitary { spec: MixedUnitaryQubitSpec },
    Schur { channel: SchurChannel },
}

fn parse_matrix(value: &serde_json::Value, what: &str) -> CliResult<CMatrix> {
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_value(value.clone()).map_err(|e| CliError::Parse(format!("{what}: {e}")))?;
    let nrows = rows.len();
    if nrows == 0 || rows.iter().any(|r| r.len() != nrows) {
        return Err(CliError::Parse(format!("{what}: expected a square matrix")));
    }
    Ok(CMatrix::from_fn(nrows, nrows, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    }))
}

fn source_from_json(text: &str) -> CliResult<Source> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("input JSON: {e}")))?;
    if let Some(fam) = value.get("family") {
        let fam = fam
            .as_str()
            .ok_or_else(|| CliError::Parse("family must be a string".into()))?;
        return source_from_family(fam, &value);
    }
    let channel = ChannelSpec::from_json(text).map_err(|e| match e {
        FidError::InvalidParameter(m) => CliError::Parse(m),
        other => validation(other),
    })?;
    let mut aux = Vec::new();
    if let Some(list) = value.get("aux") {
        let items = list
            .as_array()
            .ok_or_else(|| CliError::Parse("aux must be a list of matrices".into()))?;
        for (i, item) in items.iter().enumerate() {
            aux.push(parse_matrix(item, &format!("aux[{i}]"))?);
        }
    }
    Ok(Source::Kraus { channel, aux })
}

fn get_f64(value: &serde_json::Value, key: &str) -> CliResult<f64> {
    value
        .get(key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| CliError::Parse(format!("family field '{key}' missing or not a number")))
}

fn source_from_family(family: &str, value: &serde_json::Value) -> CliResult<Source> {
    match family {
        "qubit_unitary" => Ok(Source::QubitUnitary {
            alpha: get_f64(value, "alpha")?,
        }),
        "qutrit_unitary" => Ok(Source::QutritUnitary {
            alpha: get_f64(value, "alpha")?,
            beta: get_f64(value, "beta")?,
        }),
        "pauli" => {
            let p: Vec<f64> = serde_json::from_value(
                value
                    .get("p")
                    .cloned()
                    .ok_or_else(|| CliError::Parse("pauli family needs 'p'".into()))?,
            )
            .map_err(|e| CliError::Parse(format!("pauli p: {e}")))?;
            if p.len() != 4 {
                return Err(CliError::Parse("pauli family needs 4 probabilities".into()));
            }
            Ok(Source::Pauli {
                p: [p[0], p[1], p[2], p[3]],
            })
        }
        "schur" => {
            let eigs: Vec<Vec<[f64; 2]>> = serde_json::from_value(
                value
                    .get("eigs")
                    .cloned()
                    .ok_or_else(|| CliError::Parse("schur family needs 'eigs'".into()))?,
            )
            .map_err(|e| CliError::Parse(format!("schur eigs: {e}")))?;
            let m = eigs.len();
            let d = eigs.first().map_or(0, |r| r.len());
            if m == 0 || d == 0 || eigs.iter().any(|r| r.len() != d) {
                return Err(CliError::Parse(
                    "schur eigs must be a non-empty rectangular matrix".into(),
                ));
            }
            let mat = CMatrix::from_fn(m, d, |r, c| Complex64::new(eigs[r][c][0], eigs[r][c][1]));
            Ok(Source::Schur {
                channel: SchurChannel::new(mat).map_err(validation)?,
            })
        }
        "mixed_unitary" => {
            #[derive(serde::Deserialize)]
            struct Term {
                prob: f64,
                axis: [f64; 3],
                angle: f64,
            }
            let terms: Vec<Term> = serde_json::from_value(
                value
                    .get("terms")
                    .cloned()
                    .ok_or_else(|| CliError::Parse("mixed_unitary family needs 'terms'".into()))?,
            )
            .map_err(|e| CliError::Parse(format!("mixed_unitary terms: {e}")))?;
            let spec = MixedUnitaryQubitSpec::new(
                terms.iter().map(|t| t.prob).collect(),
                terms.iter().map(|t| t.axis).collect(),
                terms.iter().map(|t| t.angle).collect(),
            )
            .map_err(validation)?;
            Ok(Source::MixedUnitary { spec })
        }
        other => Err(CliError::Parse(format!("unknown family '{other}'"))),
    }
}

fn load_source(args: &SourceArgs) -> CliResult<Source> {
    if let Some(path) = &args.input {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        return source_from_json(&text);
    }
    let family = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::Parse("provide an input file or --family".into()))?;
    match family {
        "qubit_unitary" => Ok(Source::QubitUnitary {
            alpha: args
                .alpha
                .ok_or_else(|| CliError::Parse("qubit_unitary needs --alpha".into()))?,
        }),
        "qutrit_unitary" => Ok(Source::QutritUnitary {
            alpha: args
                .alpha
                .ok_or_else(|| CliError::Parse("qutrit_unitary needs --alpha".into()))?,
            beta: args
                .beta
                .ok_or_else(|| CliError::Parse("qutrit_unitary needs --beta".into()))?,
        }),
        "pauli" => {
            let p = args
                .p
                .clone()
                .ok_or_else(|| CliError::Parse("pauli needs --p p0,p1,p2,p3".into()))?;
            Ok(Source::Pauli {
                p: [p[0], p[1], p[2], p[3]],
            })
        }
        "schur" => Err(CliError::Parse(
            "schur family needs an input file with 'eigs' (or --sweep-p for the sweep mode)".into(),
        )),
        other => Err(CliError::Parse(format!(
            "family '{other}' needs an input file with its parameters"
        ))),
    }
}

fn phase_diag(phases: &[f64]) -> CMatrix {
    let entries: Vec<Complex64> = phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    linalg::cdiag(&entries)
}

impl Source {
    fn to_channel(&self) -> CliResult<ChannelSpec> {
        match self {
            Source::Kraus { channel, .. } => Ok(channel.clone()),
            Source::QubitUnitary { alpha } => {
                ChannelSpec::from_unitary(phase_diag(&[0.0, *alpha])).map_err(validation)
            }
            Source::QutritUnitary { alpha, beta } => {
                ChannelSpec::from_unitary(phase_diag(&[0.0, *alpha, *beta])).map_err(validation)
            }
            Source::Pauli { p } => MixedUnitaryQubitSpec::pauli(*p)
                .and_then(|s| s.to_channel())
                .map_err(validation),
            Source::MixedUnitary { spec } => spec.to_channel().map_err(validation),
            Source::Schur { channel } => channel.to_channel().map_err(validation),
        }
    }

    fn describe(&self) -> String {
        match self {
            Source::Kraus { channel, .. } => {
                format!("kraus(d={}, m={})", channel.dim(), channel.num_kraus())
            }
            Source::QubitUnitary { alpha } => format!("qubit_unitary(alpha={alpha})"),
            Source::QutritUnitary { alpha, beta } => {
                format!("qutrit_unitary(alpha={alpha}, beta={beta})")
            }
            Source::Pauli { .. } => "pauli".to_string(),
            Source::MixedUnitary { .. } => "mixed_unitary".to_string(),
            Source::Schur { channel } => format!("schur(d={}, m={})", channel.dim(), channel.num_kraus()),
        }
    }
}

// ---------------------------------------------------------------------------
// output helpers
// ---------------------------------------------------------------------------

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, content: &str) -> CliResult<()> {
    std::fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn timestamp(deterministic: bool) -> Option<String> {
    if deterministic {
        None
    } else {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Some(now.to_string())
    }
}

fn workers_from(run: &RunArgs) -> usize {
    run.workers
        .or_else(|| std::env::var("FIDSHADOW_WORKERS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1)
        .max(1)
}

fn emit_json<T: Serialize>(payload: &T, out: &Option<PathBuf>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(payload).expect("report serialization");
    println!("{text}");
    if let Some(base) = out {
        write_file(&base.with_extension("json"), &text)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pdf command
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PdfHeader {
    command: &'static str,
    version: &'static str,
    channel: String,
    method: String,
    support: [f64; 2],
    cusps: Vec<f64>,
    singularities: Vec<f64>,
    mean: f64,
    std: f64,
    grid: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
}

fn density_csv(pdf: &AnalyticPdf, grid: usize) -> String {
    let grid = grid.max(2);
    let mut out = String::from("F,P\n");
    let step = 1.0 / (grid - 1) as f64;
    for i in 0..grid {
        let f = i as f64 * step;
        let masked = pdf.singularities().iter().any(|&s| (f - s).abs() <= 0.5 * step);
        let d = pdf.density(f);
        if masked || d.is_infinite() {
            out.push_str(&format!("{},inf\n", fmt17(f)));
        } else {
            out.push_str(&format!("{},{}\n", fmt17(f), fmt17(d.value())));
        }
    }
    out
}

/// Analytic closed-form density, when the source admits one.
fn analytic_pdf(source: &Source) -> CliResult<Option<AnalyticPdf>> {
    let pdf = match source {
        Source::QubitUnitary { alpha } => Some(analytic::pdf_qubit_unitary(*alpha).map_err(validation)?),
        Source::QutritUnitary { alpha, beta } => {
            Some(analytic::pdf_qutrit_unitary(*alpha, *beta).map_err(validation)?)
        }
        Source::Pauli { p } => Some(analytic::pdf_pauli(p[0], p[1], p[2], p[3]).map_err(validation)?),
        Source::MixedUnitary { spec } => Some(analytic::pdf_mixed_unitary(spec).map_err(validation)?),
        Source::Kraus { channel, .. } => {
            if channel.dim() == 2 {
                match MixedUnitaryQubitSpec::from_channel(channel) {
                    Ok(spec) => Some(analytic::pdf_mixed_unitary(&spec).map_err(validation)?),
                    Err(_) => None,
                }
            } else {
                None
            }
        }
        Source::Schur { .. } => None,
    };
    Ok(pdf)
}

fn simplex_pdf(source: &Source, n: usize, seed: u64, bins: Option<usize>) -> CliResult<SampledPdf> {
    let channel = source.to_channel()?;
    pdf_commuting_channel(&channel, n, seed, bins).map_err(|e| match e {
        FidError::NotCommuting { .. } | FidError::NotSpanning { .. } | FidError::NotHermitian { .. } => {
            inapplicable(e)
        }
        other => validation(other),
    })
}

fn epsilon_pdf(
    source: &Source,
    epsilon: f64,
    n: usize,
    seed: u64,
    bins: Option<usize>,
) -> CliResult<SampledPdf> {
    let (u, aux): (CMatrix, Vec<CMatrix>) = match source {
        Source::QubitUnitary { alpha } => (phase_diag(&[0.0, *alpha]), Vec::new()),
        Source::QutritUnitary { alpha, beta } => (phase_diag(&[0.0, *alpha, *beta]), Vec::new()),
        Source::Kraus { channel, aux } => {
            if channel.num_kraus() != 1 {
                return Err(CliError::Inapplicable(
                    "epsilon method needs a unitary channel (single Kraus operator)".into(),
                ));
            }
            (channel.kraus()[0].clone(), aux.clone())
        }
        _ => {
            return Err(CliError::Inapplicable(
                "epsilon method applies to unitary channels only".into(),
            ))
        }
    };
    pdf_unitary_epsilon(&u, &aux, epsilon, n, seed, bins).map_err(|e| match e {
        FidError::NotCommuting { .. } | FidError::NotSpanning { .. } | FidError::NotUnitary { .. } => {
            inapplicable(e)
        }
        FidError::InvalidParameter(m) => CliError::Inapplicable(m),
        other => validation(other),
    })
}

fn montecarlo_pdf(
    source: &Source,
    n: usize,
    seed: u64,
    workers: usize,
    bins: Option<usize>,
) -> CliResult<(SampledPdf, bool)> {
    let channel = source.to_channel()?;
    let ext = extremal_fidelity(&channel, &OptimizerOptions::default());
    let dist = sample_fidelities_with_workers(&channel, n, seed, workers).map_err(validation)?;
    let support = (ext.f_min.min(dist.min()), ext.f_max.max(dist.max()));
    let pdf = AnalyticPdf::from_histogram(dist.samples(), support, bins, &[]).map_err(validation)?;
    Ok((
        SampledPdf {
            distribution: dist,
            pdf,
        },
        ext.converged,
    ))
}

fn cmd_pdf(args: &PdfArgs) -> CliResult<()> {
    let source = load_source(&args.source)?;
    let workers = workers_from(&args.run);
    let method = match args.method.as_deref() {
        Some(m) => m.to_string(),
        None => {
            // prefer exact paths: closed form, then the simplex route, then
            // plain Monte Carlo
            if analytic_pdf(&source)?.is_some() {
                "analytic".to_string()
            } else if simplex_pdf(&source, 1, args.run.seed, None).is_ok() {
                "simplex".to_string()
            } else {
                "montecarlo".to_string()
            }
        }
    };

    let out_base = args.run.out.clone().unwrap_or_else(|| PathBuf::from("pdf_out"));
    type PdfOutcome = (AnalyticPdf, Option<usize>, Option<u64>, Option<usize>, Option<f64>, bool);
    let (pdf, samples, seed, bins, eps, converged): PdfOutcome = match method.as_str() {
        "analytic" => match analytic_pdf(&source)? {
            Some(pdf) => (pdf, None, None, None, None, true),
            None => {
                return Err(CliError::Inapplicable(format!(
                    "no closed-form density for source {}",
                    source.describe()
                )))
            }
        },
        "simplex" => {
            let sampled = simplex_pdf(&source, args.run.samples, args.run.seed, args.run.bins)?;
            (
                sampled.pdf,
                Some(args.run.samples),
                Some(args.run.seed),
                args.run.bins,
                None,
                true,
            )
        }
        "epsilon" => {
            let sampled = epsilon_pdf(&source, args.epsilon, args.run.samples, args.run.seed, args.run.bins)?;
            (
                sampled.pdf,
                Some(args.run.samples),
                Some(args.run.seed),
                args.run.bins,
                Some(args.epsilon),
                true,
            )
        }
        "montecarlo" => {
            let (sampled, conv) =
                montecarlo_pdf(&source, args.run.samples, args.run.seed, workers, args.run.bins)?;
            (
                sampled.pdf,
                Some(args.run.samples),
                Some(args.run.seed),
                args.run.bins,
                None,
                conv,
            )
        }
        other => return Err(CliError::Parse(format!("unknown method '{other}'"))),
    };

    let header = PdfHeader {
        command: "pdf",
        version: VERSION,
        channel: source.describe(),
        method,
        support: [pdf.support().0, pdf.support().1],
        cusps: pdf.cusps().to_vec(),
        singularities: pdf.singularities().to_vec(),
        mean: pdf.mean(),
        std: pdf.std(),
        grid: args.grid,
        samples,
        seed,
        workers: samples.map(|_| workers),
        bins,
        epsilon: eps,
        timestamp: timestamp(args.run.deterministic),
    };
    write_file(&out_base.with_extension("csv"), &density_csv(&pdf, args.grid))?;
    let json = serde_json::to_string_pretty(&header).expect("header serialization");
    write_file(&out_base.with_extension("json"), &json)?;
    println!("{json}");
    if !converged {
        return Err(CliError::NonConvergence(
            "extremal-fidelity optimizer did not corroborate its support estimate".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// extremes command
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ExtremesReport {
    command: &'static str,
    version: &'static str,
    channel: String,
    method: String,
    #[serde(rename = "F_min")]
    f_min: f64,
    #[serde(rename = "F_max")]
    f_max: f64,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
}

fn cmd_extremes(args: &ExtremesArgs) -> CliResult<()> {
    let source = load_source(&args.source)?;
    let (f_min, f_max, method, converged) = match &source {
        Source::QubitUnitary { alpha } => ((1.0 + alpha.cos()) / 2.0, 1.0, "qubit_unitary", true),
        Source::QutritUnitary { alpha, beta } => {
            let pdf = analytic::pdf_qutrit_unitary(*alpha, *beta).map_err(validation)?;
            (pdf.support().0, pdf.support().1, "spectral_triangle", true)
        }
        Source::Pauli { p } => {
            let spec = MixedUnitaryQubitSpec::pauli(*p).map_err(validation)?;
            let (lo, hi) = extremes_mixed_unitary(&build_s_matrix(&spec));
            (lo, hi, "s_matrix", true)
        }
        Source::MixedUnitary { spec } => {
            let (lo, hi) = extremes_mixed_unitary(&build_s_matrix(spec));
            (lo, hi, "s_matrix", true)
        }
        Source::Schur { channel } => {
            let g = gram_matrix(channel);
            let min = schur_min_fidelity(&g).map_err(validation)?;
            (min.f_min, schur_max_fidelity(&g).0, "schur_exact", true)
        }
        Source::Kraus { channel, .. } => {
            // exact paths first: diagonal Kraus sets and qubit mixed-unitary
            // channels have closed-form extremes
            if let Ok(schur) = SchurChannel::from_channel(channel) {
                let g = gram_matrix(&schur);
                let min = schur_min_fidelity(&g).map_err(validation)?;
                (min.f_min, schur_max_fidelity(&g).0, "schur_exact", true)
            } else if let Ok(spec) = MixedUnitaryQubitSpec::from_channel(channel) {
                let (lo, hi) = extremes_mixed_unitary(&build_s_matrix(&spec));
                (lo, hi, "s_matrix", true)
            } else {
                let opts = OptimizerOptions {
                    restarts: args.restarts,
                    seed: args.run.seed,
                    ..OptimizerOptions::default()
                };
                let ext = extremal_fidelity(channel, &opts);
                (ext.f_min, ext.f_max, "optimizer", ext.converged)
            }
        }
    };
    let report = ExtremesReport {
        command: "extremes",
        version: VERSION,
        channel: source.describe(),
        method: method.to_string(),
        f_min,
        f_max,
        converged,
        timestamp: timestamp(args.run.deterministic),
    };
    emit_json(&report, &args.run.out)?;
    if !converged {
        return Err(CliError::NonConvergence(
            "optimizer restarts did not corroborate the extremes".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// minfid command
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MinfidReport {
    command: &'static str,
    version: &'static str,
    channel: String,
    #[serde(rename = "F_min")]
    f_min: f64,
    #[serde(rename = "F_max")]
    f_max: f64,
    p_star: Vec<f64>,
    location: String,
    face: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
}

fn schur_from_source(source: &Source) -> CliResult<SchurChannel> {
    match source {
        Source::Schur { channel } => Ok(channel.clone()),
        Source::Kraus { channel, .. } => SchurChannel::from_channel(channel).map_err(inapplicable),
        Source::QubitUnitary { alpha } => SchurChannel::from_channel(
            &ChannelSpec::from_unitary(phase_diag(&[0.0, *alpha])).map_err(validation)?,
        )
        .map_err(inapplicable),
        Source::QutritUnitary { alpha, beta } => SchurChannel::from_channel(
            &ChannelSpec::from_unitary(phase_diag(&[0.0, *alpha, *beta])).map_err(validation)?,
        )
        .map_err(inapplicable),
        _ => Err(CliError::Inapplicable(
            "minfid needs a channel with diagonal Kraus operators".into(),
        )),
    }
}

fn cmd_minfid(args: &MinfidArgs) -> CliResult<()> {
    if let Some(points) = args.sweep_p {
        if points < 2 {
            return Err(CliError::Parse("--sweep-p needs at least 2 grid points".into()));
        }
        let mut csv = String::from("p,fmin_pair,fmin_triple_q0,fmin_triple_q0.3,fmin_triple_q1\n");
        for i in 0..points {
            let p = i as f64 / (points - 1) as f64;
            let mut row = vec![fmt17(p)];
            let g = gram_matrix(&weight_swap_qubit_channel(p).map_err(validation)?);
            row.push(fmt17(schur_min_fidelity(&g).map_err(validation)?.f_min));
            for q in [0.0, 0.3, 1.0] {
                let g = gram_matrix(&weight_swap_qutrit_channel(p, q).map_err(validation)?);
                row.push(fmt17(schur_min_fidelity(&g).map_err(validation)?.f_min));
            }
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
        let out_base = args.run.out.clone().unwrap_or_else(|| PathBuf::from("minfid_sweep"));
        write_file(&out_base.with_extension("csv"), &csv)?;
        println!("wrote {}", out_base.with_extension("csv").display());
        return Ok(());
    }

    let source = load_source(&args.source)?;
    let schur = schur_from_source(&source)?;
    let g = gram_matrix(&schur);
    let min = schur_min_fidelity(&g).map_err(validation)?;
    let (f_max, _) = schur_max_fidelity(&g);
    let report = MinfidReport {
        command: "minfid",
        version: VERSION,
        channel: source.describe(),
        f_min: min.f_min,
        f_max,
        p_star: min.p_star.coords().to_vec(),
        location: match min.location {
            MinimumLocation::Interior => "interior".to_string(),
            MinimumLocation::Boundary => "boundary".to_string(),
        },
        face: min.face.clone(),
        timestamp: timestamp(args.run.deterministic),
    };
    emit_json(&report, &args.run.out)
}

// ---------------------------------------------------------------------------
// shadow command
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ShadowHeader {
    command: &'static str,
    version: &'static str,
    channel: String,
    operators: usize,
    dim: usize,
    samples: usize,
    seed: u64,
    workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    uniformity: Option<UniformitySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    uniformity_skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
}

#[derive(Serialize)]
struct UniformitySummary {
    energy_statistic: f64,
    p_value: f64,
    level: f64,
    passes: bool,
    subsample: usize,
    permutations: usize,
}

fn cmd_shadow(args: &ShadowArgs) -> CliResult<()> {
    let source = load_source(&args.source)?;
    let channel = source.to_channel()?;
    let workers = workers_from(&args.run);
    let coll = HermitianCollection::from_channel_split(&channel);
    let cloud =
        fidshadow::numrange::shadow_sample_with_workers(&coll, args.run.samples, args.run.seed, workers)
            .map_err(validation)?;

    // the uniformity theorem applies when the sampled collection is
    // commuting and spanning
    let (uniformity, skipped) = match CommutingCollection::new(coll.ops().to_vec()) {
        Ok(cc) => match cc.verify_spanning() {
            Ok(()) => {
                let report =
                    shadow_uniformity_check(&cc, args.run.samples, args.run.seed, &UniformityOptions::default())
                        .map_err(validation)?;
                (
                    Some(UniformitySummary {
                        energy_statistic: report.energy.statistic,
                        p_value: report.energy.p_value,
                        level: report.level,
                        passes: report.passes,
                        subsample: report.energy.subsample,
                        permutations: report.energy.permutations,
                    }),
                    None,
                )
            }
            Err(e) => (None, Some(e.to_string())),
        },
        Err(e) => (None, Some(e.to_string())),
    };

    let out_base = args.run.out.clone().unwrap_or_else(|| PathBuf::from("shadow_out"));
    write_file(&out_base.with_extension("csv"), &cloud.to_csv())?;
    let header = ShadowHeader {
        command: "shadow",
        version: VERSION,
        channel: source.describe(),
        operators: coll.len(),
        dim: coll.dim(),
        samples: args.run.samples,
        seed: args.run.seed,
        workers,
        uniformity,
        uniformity_skipped: skipped,
        timestamp: timestamp(args.run.deterministic),
    };
    let json = serde_json::to_string_pretty(&header).expect("header serialization");
    write_file(&out_base.with_extension("json"), &json)?;
    println!("{json}");
    Ok(())
}

// ---------------------------------------------------------------------------
// discriminate command
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DiscriminateOutput {
    command: &'static str,
    version: &'static str,
    channel_a: String,
    channel_b: String,
    #[serde(flatten)]
    report: DiscriminationReport,
    workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
}

fn cmd_discriminate(args: &DiscriminateArgs) -> CliResult<()> {
    let text_a = std::fs::read_to_string(&args.input_a)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input_a.display())))?;
    let text_b = std::fs::read_to_string(&args.input_b)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input_b.display())))?;
    let a = source_from_json(&text_a)?.to_channel()?;
    let b = source_from_json(&text_b)?.to_channel()?;
    let report = discriminate(&a, &b, args.run.samples, args.run.seed, args.threshold).map_err(validation)?;
    let converged = report.optimizer_converged;
    let output = DiscriminateOutput {
        command: "discriminate",
        version: VERSION,
        channel_a: args.input_a.display().to_string(),
        channel_b: args.input_b.display().to_string(),
        report,
        workers: workers_from(&args.run),
        timestamp: timestamp(args.run.deterministic),
    };
    emit_json(&output, &args.run.out)?;
    if !converged {
        return Err(CliError::NonConvergence(
            "support estimation did not converge; exclusion counts may be unreliable".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// mean command
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MeanReport {
    command: &'static str,
    version: &'static str,
    channel: String,
    method: String,
    mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
}

fn cmd_mean(args: &MeanArgs) -> CliResult<()> {
    let source = load_source(&args.source)?;
    let exact: Option<f64> = match &source {
        Source::QubitUnitary { alpha } => Some((2.0 + alpha.cos()) / 3.0),
        Source::Pauli { p } => {
            let spec = MixedUnitaryQubitSpec::pauli(*p).map_err(validation)?;
            Some(mean_mixed_unitary(&spec))
        }
        Source::MixedUnitary { spec } => Some(mean_mixed_unitary(spec)),
        Source::Kraus { channel, .. } if channel.dim() == 2 => {
            MixedUnitaryQubitSpec::from_channel(channel)
                .ok()
                .map(|s| mean_mixed_unitary(&s))
        }
        _ => None,
    };
    let report = match exact {
        Some(mean) => MeanReport {
            command: "mean",
            version: VERSION,
            channel: source.describe(),
            method: "closed_form".to_string(),
            mean,
            std_error: None,
            samples: None,
            seed: None,
            workers: None,
            timestamp: timestamp(args.run.deterministic),
        },
        None => {
            let channel = source.to_channel()?;
            let workers = workers_from(&args.run);
            let dist = sample_fidelities_with_workers(&channel, args.run.samples, args.run.seed, workers)
                .map_err(validation)?;
            MeanReport {
                command: "mean",
                version: VERSION,
                channel: source.describe(),
                method: "montecarlo".to_string(),
                mean: dist.mean(),
                std_error: Some(dist.std() / (dist.len() as f64).sqrt()),
                samples: Some(args.run.samples),
                seed: Some(args.run.seed),
                workers: Some(workers),
                timestamp: timestamp(args.run.deterministic),
            }
        }
    };
    emit_json(&report, &args.run.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pdf(args) => cmd_pdf(args),
        Command::Extremes(args) => cmd_extremes(args),
        Command::Minfid(args) => cmd_minfid(args),
        Command::Shadow(args) => cmd_shadow(args),
        Command::Discriminate(args) => cmd_discriminate(args),
        Command::Mean(args) => cmd_mean(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

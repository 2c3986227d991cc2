use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use entcert::bell::{functional_by_name, validate_functional, BellFunctional, FunctionalConfig, ValidationOptions};
use entcert::fidelity::{SettingScope, ShopmOptions};
use entcert::harness::{
    beta_grid, bootstrap, canonical_evidence, certify, correlation_json, counts_json, parse_correlation, parse_counts,
    parse_evidence, read_file, sample_counts, sha256_hex, simulate_exact, sweep_beta, sweep_table, write_file,
    CertificateReport, CertifyOptions, Evidence, Loaded, MeasurementSpec, StateSpec, DEFAULT_RESAMPLES,
};
use entcert::purity::{profile_search, PurityMode, ProfileSearchOptions};
use entcert::quantum::{DimensionVector, MeasurementConfig, DEFAULT_NORMALIZATION_TOL};

#[derive(Parser)]
#[command(name = "entcert", version, about = "Certify entanglement from Bell correlations and declared dimensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a correlation file (exact) or a counts file (--shots).
    Simulate(SimulateArgs),
    /// Certify bounds from a correlation file.
    Certify(CertifyArgs),
    /// Certify from a counts file with Poisson-bootstrap error bars.
    Bootstrap(BootstrapArgs),
    /// Ideal-data sweep over |Φ(β)⟩ at the canonical settings.
    Sweep(SweepArgs),
    /// Search a nondegeneracy profile for a functional.
    Profile(ProfileArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// phi-beta:β, ghz3 or ghz3-noisy:v
    #[arg(long)]
    state: String,
    /// Canonical set name (cglmp3, tailored3, mabk3) or a measurement file.
    #[arg(long)]
    measurements: String,
    /// Shots per setting; omit for exact probabilities.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    /// Local dimensions, e.g. 3,3. Must match the data.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Built-in name (cglmp3, mabk3, tailored3) or functional file.
    #[arg(long)]
    functional: String,
    #[arg(long, default_value = "spectral")]
    mode: PurityMode,
    /// Profile, gap or measurement file; `canonical` uses the functional's
    /// canonical settings.
    #[arg(long)]
    evidence: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = ShopmOptions::default().restarts)]
    shopm_restarts: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Correlation file.
    input: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Per-setting normalisation tolerance.
    #[arg(long, default_value_t = DEFAULT_NORMALIZATION_TOL)]
    tolerance: f64,
}

#[derive(Args)]
struct BootstrapArgs {
    /// Counts file.
    input: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    resamples: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "cglmp3")]
    functional: String,
    #[arg(long, default_value = "spectral")]
    mode: PurityMode,
    /// Profile file for profile mode; searched when omitted.
    #[arg(long)]
    evidence: Option<PathBuf>,
    #[arg(long, default_value_t = 0.3)]
    from: f64,
    #[arg(long, default_value_t = 1.0)]
    to: f64,
    #[arg(long, default_value_t = 71)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    functional: String,
    /// ε₁ grid.
    #[arg(long, value_delimiter = ',', default_value = "0,0.01,0.02,0.05,0.1,0.2")]
    eps1: Vec<f64>,
    #[arg(long, default_value_t = ProfileSearchOptions::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => write_file(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Functional by name or from a file; files are checked against the
/// enumeration and see-saw oracles before use.
fn load_functional(arg: &str) -> Result<(BellFunctional, Option<String>)> {
    if let Ok(f) = functional_by_name(arg) {
        return Ok((f, None));
    }
    let path = Path::new(arg);
    if !path.exists() {
        bail!("{arg:?} is neither a built-in functional nor a file");
    }
    let bytes = read_file(path)?;
    let f = FunctionalConfig::from_json(std::str::from_utf8(&bytes).context("functional file is not UTF-8")?)?.to_functional()?;
    validate_functional(&f, &ValidationOptions::default())?;
    Ok((f, Some(sha256_hex(&bytes))))
}

fn load_evidence(arg: &str, f: &BellFunctional, mode: PurityMode) -> Result<(Evidence, Option<String>)> {
    let (ev, digest) = if arg == "canonical" {
        (canonical_evidence(f)?, None)
    } else {
        let bytes = read_file(Path::new(arg))?;
        (parse_evidence(&bytes, f)?, Some(sha256_hex(&bytes)))
    };
    if ev.mode() != mode {
        bail!("--mode {mode} but the evidence is for {} mode", ev.mode());
    }
    Ok((ev, digest))
}

fn check_dims(declared: &[usize], data: &DimensionVector) -> Result<()> {
    let declared = DimensionVector::new(declared.to_vec())?;
    if &declared != data {
        bail!("--dims {declared} disagrees with the data file's dims {data}");
    }
    Ok(())
}

fn warn_loaded<T>(what: &str, l: &Loaded<T>) {
    if let Some(w) = &l.warning {
        eprintln!("warning: {what}: no-signalling deviation {:.3e} exceeds {:.1e}", w.max_deviation, w.threshold);
    }
}

struct Prepared {
    functional: BellFunctional,
    evidence: Evidence,
    opts: CertifyOptions,
    digests: Vec<(&'static str, String)>,
}

fn prepare(p: &PipelineArgs) -> Result<Prepared> {
    let (functional, f_digest) = load_functional(&p.functional)?;
    let (evidence, e_digest) = load_evidence(&p.evidence, &functional, p.mode)?;
    let opts = CertifyOptions {
        seed: p.seed,
        shopm: ShopmOptions { restarts: p.shopm_restarts, seed: p.seed, ..ShopmOptions::default() },
        scope: SettingScope::All,
    };
    let mut digests = Vec::new();
    if let Some(d) = f_digest {
        digests.push(("functional", d));
    }
    if let Some(d) = e_digest {
        digests.push(("evidence", d));
    }
    Ok(Prepared { functional, evidence, opts, digests })
}

fn finish(mut report: CertificateReport, prepared: Prepared, data_digest: String, output: Option<&Path>) -> Result<()> {
    report.inputs.source_files.insert("data".into(), data_digest);
    for (k, v) in prepared.digests {
        report.inputs.source_files.insert(k.into(), v);
    }
    if report.is_vacuous() {
        eprintln!("note: certificate is vacuous for these data");
    }
    emit(output, &report.to_json())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let state: StateSpec = a.state.parse()?;
            let m = if Path::new(&a.measurements).exists() {
                let bytes = read_file(Path::new(&a.measurements))?;
                MeasurementSpec::Config(MeasurementConfig::from_json(std::str::from_utf8(&bytes).context("measurement file is not UTF-8")?)?)
            } else {
                MeasurementSpec::Canonical(a.measurements.clone())
            };
            let c = simulate_exact(&state, &m)?;
            let text = match a.shots {
                None => correlation_json(&c),
                Some(n) => counts_json(&sample_counts(&c, n, a.seed)?),
            };
            emit(a.output.as_deref(), &text)
        }
        Command::Certify(a) => {
            let bytes = read_file(&a.input)?;
            let loaded = parse_correlation(&bytes, a.tolerance)?;
            warn_loaded("correlation", &loaded);
            check_dims(&a.pipeline.dims, loaded.value.dims())?;
            let prepared = prepare(&a.pipeline)?;
            let report = certify(&loaded.value, &prepared.functional, &prepared.evidence, &prepared.opts)?;
            finish(report, prepared, loaded.sha256, a.pipeline.output.as_deref())
        }
        Command::Bootstrap(a) => {
            let bytes = read_file(&a.input)?;
            let loaded = parse_counts(&bytes)?;
            warn_loaded("counts", &loaded);
            check_dims(&a.pipeline.dims, loaded.value.dims())?;
            let prepared = prepare(&a.pipeline)?;
            let report = bootstrap(
                &loaded.value,
                &prepared.functional,
                &prepared.evidence,
                &prepared.opts,
                a.resamples,
                a.pipeline.seed,
            )?;
            if let Some(b) = &report.diagnostics.bootstrap {
                if b.dropped > 0 {
                    eprintln!("warning: {} of {} resamples dropped", b.dropped, b.requested);
                }
            }
            finish(report, prepared, loaded.sha256, a.pipeline.output.as_deref())
        }
        Command::Sweep(a) => {
            let f = functional_by_name(&a.functional)?;
            let evidence = match (a.mode, &a.evidence) {
                (PurityMode::Spectral, None) => canonical_evidence(&f)?,
                (PurityMode::Spectral, Some(_)) => bail!("sweep uses the canonical settings in spectral mode; drop --evidence"),
                (PurityMode::Profile, Some(p)) => load_evidence(&p.to_string_lossy(), &f, PurityMode::Profile)?.0,
                (PurityMode::Profile, None) => {
                    let dims = DimensionVector::new(f.quantum_bound().dims.clone())?;
                    let opts = ProfileSearchOptions { seed: a.seed, ..ProfileSearchOptions::default() };
                    let grid = [0.0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2];
                    Evidence::Profile(profile_search(&f, &dims, &grid, &opts)?.profile)
                }
            };
            let opts = CertifyOptions { seed: a.seed, ..CertifyOptions::default() };
            let rows = sweep_beta(&beta_grid(a.from, a.to, a.points)?, &f, &evidence, &opts)?;
            emit(a.output.as_deref(), &sweep_table(&rows))
        }
        Command::Profile(a) => {
            let (f, _) = load_functional(&a.functional)?;
            let dims = DimensionVector::new(f.quantum_bound().dims.clone())?;
            let opts = ProfileSearchOptions { restarts: a.restarts, seed: a.seed, ..ProfileSearchOptions::default() };
            let out = profile_search(&f, &dims, &a.eps1, &opts)?;
            for r in &out.rejected {
                eprintln!("rejected ε₁ = {}: {}", r.eps1, r.reason);
            }
            emit(a.output.as_deref(), &out.profile.to_json())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

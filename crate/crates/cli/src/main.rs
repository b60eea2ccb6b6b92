use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bilax::checks::RelationReport;
use bilax::double_row::equal_up_to_constant;
use bilax::dynamics::{
    check_channels, init_threads_from_env, write_csv, write_json, write_svg, Dynamics, EomSource, Scheme,
    SimulationConfig, Tolerances, DEFAULT_MU_SAMPLES,
};
use bilax::spectral::LinearForm;
use bilax::toda::{canonical_map_bcn, ModelConfig, ModelKind, ModelSpec};
use bilax::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "bilax", version, about = "Boundary Lax pairs for open Toda chains: exact checks, derivation and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every algebraic relation exactly, with symbolic parameters unless given.
    Verify(RunArgs),
    /// Print the extracted Hamiltonian and flow matrices and compare them with the closed forms.
    Derive(RunArgs),
    /// Integrate the Hamiltonian flow from seeded random initial data and monitor invariants.
    Simulate(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct RunArgs {
    /// Chain type.
    #[arg(long, value_parser = ["bcn", "dn"])]
    model: Option<String>,
    /// Number of sites.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Parameters as an inline JSON object or a path to a JSON file. A file
    /// may also hold a complete configuration `{"model", "N", "params"}`.
    #[arg(long)]
    params: Option<String>,
    /// Time step.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Number of steps.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    /// Spectral values for the zero-curvature residual, comma separated.
    #[arg(long = "mu-samples", value_delimiter = ',', default_values_t = DEFAULT_MU_SAMPLES)]
    mu_samples: Vec<f64>,
    /// Seed for the random initial data.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format. Defaults to the output file extension, then to csv
    /// for `simulate` and text for the other commands.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

enum Failure {
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) | Error::InvalidModel(m) => Failure::Config(m),
            other => Failure::Check(other.to_string()),
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Config(format!("i/o error: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads_from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Derive(a) => cmd_derive(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match result {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}

fn parse_model(name: &str) -> ModelKind {
    if name == "dn" {
        ModelKind::Dn
    } else {
        ModelKind::Bcn
    }
}

/// Merges `--params` with `--model` and `--N`; flags win over a config file.
fn resolve_config(a: &RunArgs) -> Result<ModelConfig, Failure> {
    let mut file_cfg: Option<ModelConfig> = None;
    let mut params = BTreeMap::new();
    if let Some(p) = &a.params {
        let text = if p.trim_start().starts_with('{') {
            p.clone()
        } else {
            std::fs::read_to_string(p).map_err(|e| Failure::Config(format!("cannot read {p}: {e}")))?
        };
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Failure::Config(format!("invalid JSON in --params: {e}")))?;
        let Some(obj) = value.as_object() else {
            return Err(Failure::Config("--params must be a JSON object".into()));
        };
        if obj.contains_key("model") || obj.contains_key("N") {
            let mut cfg = obj.clone();
            cfg.entry("model").or_insert_with(|| a.model.clone().unwrap_or_default().into());
            cfg.entry("N").or_insert_with(|| a.n.unwrap_or(0).into());
            file_cfg = Some(serde_json::from_value(cfg.into()).map_err(|e| Failure::Config(e.to_string()))?);
        } else {
            params = obj.clone().into_iter().collect();
        }
    }
    let model = match (&a.model, &file_cfg) {
        (Some(m), _) => parse_model(m),
        (None, Some(c)) => c.model,
        (None, None) => return Err(Failure::Config("--model is required".into())),
    };
    let n = match (a.n, &file_cfg) {
        (Some(n), _) => n,
        (None, Some(c)) => c.n,
        (None, None) => return Err(Failure::Config("--N is required".into())),
    };
    if let Some(c) = file_cfg {
        for (k, v) in c.params {
            params.entry(k).or_insert(v);
        }
    }
    let cfg = ModelConfig { model, n, params };
    cfg.values()?;
    Ok(cfg)
}

fn output_format(a: &RunArgs, default: Option<Format>) -> Option<Format> {
    a.format.or_else(|| {
        let ext = a.output.as_deref().and_then(Path::extension)?.to_str()?;
        Format::from_str(ext, true).ok()
    })
    .or(default)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_failure)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn summarize(report: &RelationReport) -> String {
    if report.holds {
        return format!("PASS {}", report.relation);
    }
    let first = &report.residual[0];
    format!(
        "FAIL {}: {} nonzero residual entries; {} = {}",
        report.relation,
        report.residual.len(),
        first.location,
        first.value
    )
}

fn verification_reports(model: &ModelSpec) -> Result<Vec<RelationReport>, Failure> {
    let mut reports = model.structure_checks()?;
    let dr = model.double_row();
    reports.push(dr.verify_transfer_commutes()?);
    let family = dr.flow_family()?;
    reports.push(dr.verify_theorem(&family)?);
    let data = dr.corollary_data(&model.recipe)?;
    reports.push(dr.verify_corollary(&data)?);
    if model.kind == ModelKind::Bcn {
        reports.push(dr.verify_intertwining(&data.flows)?);
        reports.push(canonical_map_bcn(model)?.verify(model)?);
    }
    Ok(reports)
}

fn cmd_verify(a: &RunArgs) -> Result<bool, Failure> {
    let cfg = resolve_config(a)?;
    let model = cfg.build()?;
    let reports = verification_reports(&model)?;
    let ok = reports.iter().all(|r| r.holds);
    let mut out = open_output(a.output.as_deref())?;
    match output_format(a, None) {
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut out, &reports).map_err(|e| Failure::Check(e.to_string()))?;
            writeln!(out).map_err(io_failure)?;
        }
        Some(f @ (Format::Csv | Format::Svg)) => {
            let name = if f == Format::Csv { "csv" } else { "svg" };
            return Err(Failure::Config(format!("verify does not write {name}")));
        }
        None => {
            for r in &reports {
                writeln!(out, "{}", summarize(r)).map_err(io_failure)?;
            }
        }
    }
    out.flush().map_err(io_failure)?;
    Ok(ok)
}

#[derive(Serialize)]
struct Derivation {
    model: String,
    sites: usize,
    hamiltonian: String,
    hamiltonian_matches: bool,
    flows: Vec<FlowEntry>,
}

#[derive(Serialize)]
struct FlowEntry {
    site: usize,
    matrix: String,
    matches: bool,
}

fn cmd_derive(a: &RunArgs) -> Result<bool, Failure> {
    let cfg = resolve_config(a)?;
    let model = cfg.build()?;
    let data = model.double_row().corollary_data(&model.recipe)?;
    let closed_h = model.paper_hamiltonian()?;
    let mut flows = Vec::new();
    for j in 1..=model.sites() + 1 {
        let m = data.flows.at(j);
        flows.push(FlowEntry {
            site: j,
            matrix: m.to_string(),
            matches: *m == model.paper_m(j, LinearForm::mu())?,
        });
    }
    let d = Derivation {
        model: model.kind.to_string(),
        sites: model.sites(),
        hamiltonian: data.hamiltonian.to_string(),
        hamiltonian_matches: equal_up_to_constant(&data.hamiltonian, &closed_h),
        flows,
    };
    let ok = d.hamiltonian_matches && d.flows.iter().all(|f| f.matches);
    let verdict = |b: bool| if b { "MATCH" } else { "MISMATCH" };
    let mut out = open_output(a.output.as_deref())?;
    match output_format(a, None) {
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut out, &d).map_err(|e| Failure::Check(e.to_string()))?;
            writeln!(out).map_err(io_failure)?;
        }
        Some(_) => return Err(Failure::Config("derive writes text or json".into())),
        None => {
            let w = &mut out;
            let mut line = |s: String| writeln!(w, "{s}").map_err(io_failure);
            line(format!("model {} N={}", d.model, d.sites))?;
            line(format!("H = {}", d.hamiltonian))?;
            line(format!("H vs closed form (up to a constant): {}", verdict(d.hamiltonian_matches)))?;
            for f in &d.flows {
                line(format!("M({}, mu) = {}", f.site, f.matrix))?;
                line(format!("M({}, mu) vs closed form: {}", f.site, verdict(f.matches)))?;
            }
        }
    }
    out.flush().map_err(io_failure)?;
    Ok(ok)
}

fn cmd_simulate(a: &RunArgs) -> Result<bool, Failure> {
    let cfg = resolve_config(a)?;
    let sim = SimulationConfig {
        dt: a.dt,
        steps: a.steps,
        scheme: Scheme::Rk4,
        mu_samples: a.mu_samples.clone(),
    };
    sim.validate()?;
    let format = output_format(a, Some(Format::Csv)).expect("default format");
    let model = cfg.build_numeric()?;
    let dynamics = Dynamics::new(&model, EomSource::Closed)?;
    let p0 = dynamics.random_point(a.seed)?;
    let traj = dynamics.simulate(&p0, &sim)?;

    let mut out = open_output(a.output.as_deref())?;
    match format {
        Format::Csv => write_csv(&traj, &mut out)?,
        Format::Json => write_json(&traj, &mut out)?,
        Format::Svg => write_svg(&traj, &mut out)?,
    }
    out.flush().map_err(io_failure)?;

    // Keep standard output clean when the data goes there.
    let mut log: Box<dyn Write> = if a.output.is_some() {
        Box::new(io::stdout())
    } else {
        Box::new(io::stderr())
    };
    let verdicts = check_channels(&traj, &Tolerances::default());
    for v in &verdicts {
        let tag = if v.within { "PASS" } else { "FAIL" };
        writeln!(log, "{tag} max {} = {:.3e} (limit {:.0e})", v.channel, v.max, v.limit).map_err(io_failure)?;
    }
    if let Some(m) = traj.max("zc_absolute") {
        writeln!(log, "     max zc_absolute = {m:.3e}").map_err(io_failure)?;
    }
    if let Some(e) = &traj.error {
        let t = traj.times.last().copied().unwrap_or(0.0);
        writeln!(log, "FAIL integration stopped at T = {t}: {e}").map_err(io_failure)?;
    }
    Ok(traj.is_complete() && verdicts.iter().all(|v| v.within))
}

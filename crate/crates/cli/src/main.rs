use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use padic_hl::exec::Execution;
use padic_hl::harness::{
    compare, file_hash, final_marginal, predict, sample_paths, verify, ExperimentConfig, Mode, SampleKind, Suite,
};
use padic_hl::padic::{Dim, Precision};
use padic_hl::rational::{parse as parse_rational, Rational};
use padic_hl::symfunc::Signature;
use padic_hl::Error;

const EXIT_THRESHOLD: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "padic-hl", version, about = "p-adic random matrices and Hall-Littlewood processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample trajectories of the matrix chain or the particle process.
    Sample {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        common: Common,
    },
    /// Sample and compare against exact laws or asymptotic predictions.
    Compare {
        #[arg(value_enum)]
        mode: ModeArg,
        /// Sampler for clt and lln (defaults: process for clt, matrix for lln).
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Predicted centers, scales and Lyapunov exponents.
    Predict {
        #[command(flatten)]
        common: Common,
    },
    /// Exact-arithmetic identity suites.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Matrix,
    Process,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Corners,
    Product,
    ProcessVsMatrix,
    Clt,
    Lln,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Identities,
    Factorization,
    Kernel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Hall-Littlewood parameter; defaults to 1/p.
    #[arg(long, value_parser = rational)]
    t: Option<Rational>,
    /// Single variable x for the particle process instead of the matrix dictionary.
    #[arg(long, value_parser = rational)]
    x: Option<Rational>,
    /// Number of particles or matrix rows (default 2; 4 for the identity suite).
    #[arg(long)]
    n: Option<usize>,
    /// Corner width for the corners comparison; defaults to n.
    #[arg(long)]
    m: Option<usize>,
    /// Matrix sizes N_j, cycled; `inf` for iid matrices.
    #[arg(long = "N", value_delimiter = ',', default_value = "4")]
    dims: Vec<Dim>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Working p-adic precision, or `auto`.
    #[arg(long, default_value = "auto")]
    precision: Precision,
    #[arg(long = "tol-tv", default_value_t = 0.02)]
    tol_tv: f64,
    #[arg(long = "tol-p", default_value_t = 0.001)]
    tol_p: f64,
    /// Signature of A in the product comparison, comma separated.
    #[arg(long, value_parser = signature, allow_hyphen_values = true)]
    lambda: Option<Signature>,
    /// Signature of B in the product comparison.
    #[arg(long, value_parser = signature, allow_hyphen_values = true)]
    mu: Option<Signature>,
    /// Largest size (or Dmax) enumerated by the identity suites.
    #[arg(long = "max-size")]
    max_size: Option<i64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn signature(s: &str) -> Result<Signature, String> {
    let parts: Result<Vec<i64>, _> = s.split(',').map(|v| v.trim().parse::<i64>()).collect();
    Signature::new(parts.map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

impl Common {
    fn config(&self, default_trials: u64, default_n: usize, kind: Option<SampleKind>) -> ExperimentConfig {
        ExperimentConfig {
            p: self.p,
            t: self.t.clone(),
            x: self.x.clone(),
            n: self.n.unwrap_or(default_n),
            m: self.m,
            dims: self.dims.clone(),
            k: self.k,
            trials: self.trials.unwrap_or(default_trials),
            seed: self.seed,
            precision: self.precision,
            tol_tv: self.tol_tv,
            tol_p: self.tol_p,
            kind,
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            max_size: self.max_size,
        }
    }

    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

impl From<KindArg> for SampleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Matrix => SampleKind::Matrix,
            KindArg::Process => SampleKind::Process,
        }
    }
}

/// Collects output files and writes `manifest.json` listing them with
/// their content hashes.
struct Outputs {
    dir: PathBuf,
    files: Vec<serde_json::Value>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, Error> {
        fs::create_dir_all(dir)?;
        Ok(Outputs { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), Error> {
        fs::write(self.dir.join(name), bytes)?;
        self.files.push(json!({ "path": name, "hash": file_hash(bytes) }));
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Error> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    fn finish(self, command: &str, cfg: &ExperimentConfig, spec: String) -> Result<PathBuf, Error> {
        let manifest = json!({
            "tool": "padic-hl",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "seed": cfg.seed,
            "spec": spec,
            "config": cfg,
            "config_hash": cfg.hash(),
            "files": self.files,
        });
        let path = self.dir.join("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        fs::write(&path, bytes)?;
        Ok(path)
    }
}

fn describe_spec(cfg: &ExperimentConfig) -> String {
    cfg.specialization().map(|s| s.to_string()).unwrap_or_default()
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Sample { kind, common } => {
            let cfg = common.config(1, 2, Some(kind.into()));
            cfg.validate()?;
            let paths = sample_paths(&cfg, kind.into(), common.exec())?;
            let hash = cfg.hash();
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("padic-hl-out"));
            let mut out = Outputs::new(&dir)?;
            match common.format {
                Format::Csv => {
                    let width = (cfg.trials.saturating_sub(1)).to_string().len();
                    for (i, path) in paths.iter().enumerate() {
                        let mut buf = Vec::new();
                        path.write_csv_tagged(&mut buf, &format!("config_hash={hash} trial={i}"))?;
                        out.write(&format!("trial_{i:0width$}.csv"), &buf)?;
                    }
                }
                Format::Json => out.write_json("trajectories.json", &json!({ "config_hash": hash, "trajectories": paths }))?,
            }
            let freq = final_marginal(&paths)?;
            out.write_json("frequencies.json", &json!({ "config_hash": hash, "k": cfg.k, "law": freq }))?;
            let manifest = out.finish("sample", &cfg, describe_spec(&cfg))?;
            println!("wrote {} trajectories; manifest {}", paths.len(), manifest.display());
            Ok(0)
        }
        Command::Compare { mode, kind, common } => {
            let mode = match mode {
                ModeArg::Corners => Mode::Corners,
                ModeArg::Product => Mode::Product,
                ModeArg::ProcessVsMatrix => Mode::ProcessVsMatrix,
                ModeArg::Clt => Mode::Clt,
                ModeArg::Lln => Mode::Lln,
            };
            let default_trials = if mode == Mode::Lln { 1 } else { 10_000 };
            let cfg = common.config(default_trials, 2, kind.map(Into::into));
            let report = compare(mode, &cfg, common.exec())?;
            let text = report.markdown();
            print!("{text}");
            if let Some(dir) = &common.out {
                let mut out = Outputs::new(dir)?;
                out.write_json("report.json", &report)?;
                out.write("report.md", format!("<!-- config_hash={} -->\n{text}", report.config_hash).as_bytes())?;
                let manifest = out.finish("compare", &cfg, describe_spec(&cfg))?;
                println!("report manifest {}", manifest.display());
            }
            Ok(if report.pass { 0 } else { EXIT_THRESHOLD })
        }
        Command::Predict { common } => {
            let cfg = common.config(1, 2, None);
            let prediction = predict(&cfg)?;
            let text = serde_json::to_string_pretty(&prediction)?;
            println!("{text}");
            if let Some(dir) = &common.out {
                let mut out = Outputs::new(dir)?;
                out.write_json("prediction.json", &prediction)?;
                out.finish("predict", &cfg, describe_spec(&cfg))?;
            }
            Ok(0)
        }
        Command::Verify { suite, common } => {
            let suite = match suite {
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Factorization => Suite::Factorization,
                SuiteArg::Kernel => Suite::Kernel,
            };
            let cfg = common.config(100, if suite == Suite::Identities { 4 } else { 2 }, None);
            let report = verify(suite, &cfg)?;
            for line in report.lines() {
                println!("{line}");
            }
            if let Some(dir) = &common.out {
                let mut out = Outputs::new(dir)?;
                out.write_json("verify.json", &report)?;
                out.finish("verify", &cfg, String::new())?;
            }
            Ok(if report.pass { 0 } else { EXIT_THRESHOLD })
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Argument(_) | Error::Domain(_) | Error::Divergence(_) => EXIT_USAGE,
        Error::Resource(_) | Error::Io(_) => EXIT_RESOURCE,
        Error::Validation(_) | Error::Json(_) => EXIT_THRESHOLD,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

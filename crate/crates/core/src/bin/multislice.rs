use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use multislice_core::bounds::BoundSpec;
use multislice_core::cdist::{convex_distance, SubsetIndicator, DEFAULT_TOL};
use multislice_core::fi::suite::{default_specs, run_spec, SuiteOptions};
use multislice_core::harness::{run_tail, run_talagrand_exact, talagrand_all_subsets, TailExperiment};
use multislice_core::io;
use multislice_core::sampling::{sample_uniform, sample_without_replacement};
use multislice_core::space::enumerate;
use multislice_core::tensor::{enumerate_partitions, partition_norm, NormOptions, Partition};
use multislice_core::{Error, MultisliceSpec, Result, StreamFactory, Verdict};

#[derive(Parser)]
#[command(name = "multislice", version, about = "Concentration bounds on the multislice, checked numerically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw uniform configurations (or length-n prefixes) as JSON lines.
    Sample {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep only the first n coordinates.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every configuration in lexicographic order.
    Enumerate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = multislice_core::DEFAULT_ENUMERATION_CAP)]
        cap: u128,
        /// Print only the cardinality.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the functional inequality checks on a corpus of small specs.
    VerifyFi {
        /// TOML with optional `[suite]` options and a `specs` list.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the number of random functions per spec.
        #[arg(long)]
        functions: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo tail experiment against a closed-form bound.
    Tail {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append run metadata as one JSON line.
        #[arg(long)]
        metadata: Option<PathBuf>,
    },
    /// Convex distance from each query point to a set.
    Cdist {
        /// JSON lines of configurations forming the set.
        #[arg(long)]
        set: PathBuf,
        /// JSON lines of query configurations.
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition norms of a tensor.
    Norms {
        /// JSON lines of `{"index": [...], "value": x}`.
        #[arg(long)]
        tensor: PathBuf,
        /// Comma-separated axis lengths; inferred when absent.
        #[arg(long, value_delimiter = ',')]
        shape: Option<Vec<usize>>,
        /// E.g. `{1,3}{2}`; every partition when absent.
        #[arg(long)]
        partition: Vec<String>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a tail bound over a grid of t, as CSV `t,bound`.
    Bound {
        /// TOML holding a `[bound]` table.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive check of the convex distance inequality on random sets.
    Talagrand {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        set_size: Option<usize>,
        /// Every nonempty subset instead of random ones.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Summarize verdicts from CSV or JSON-lines outputs.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Comma-separated value counts.
    #[arg(long, value_delimiter = ',', required = true)]
    kappa: Vec<usize>,
    /// Comma-separated increasing values; `0, 1, …` when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
}

impl SpecArgs {
    fn build(&self) -> Result<MultisliceSpec> {
        match &self.values {
            Some(v) => MultisliceSpec::new(self.kappa.clone(), v.clone()),
            None => MultisliceSpec::with_index_values(self.kappa.clone()),
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FiConfig {
    #[serde(default)]
    suite: SuiteOptions,
    #[serde(default)]
    specs: Vec<MultisliceSpec>,
}

#[derive(Deserialize)]
struct BoundConfig {
    bound: BoundSpec,
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    spec: &'a str,
    checks: usize,
    failures: usize,
    best_lsi_constant: f64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sample { spec, count, seed, n, out } => {
            let spec = spec.build()?;
            let streams = StreamFactory::new(seed);
            let draws = (0..count)
                .map(|i| {
                    let mut rng = streams.stream(i);
                    match n {
                        Some(n) => sample_without_replacement(&spec, n, &mut rng),
                        None => Ok(sample_uniform(&spec, &mut rng)),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            emit(out.as_deref(), &io::write_jsonl(&draws)?)?;
            Ok(true)
        }
        Command::Enumerate { spec, cap, count, out } => {
            let spec = spec.build()?;
            if count {
                emit(out.as_deref(), &format!("{}\n", spec.cardinality()?))?;
            } else {
                emit(out.as_deref(), &io::write_jsonl(&enumerate(&spec, cap)?)?)?;
            }
            Ok(true)
        }
        Command::VerifyFi { config, functions, out } => {
            let mut cfg = match config {
                Some(p) => toml::from_str::<FiConfig>(&read(&p)?).map_err(|e| Error::Config(e.to_string()))?,
                None => FiConfig::default(),
            };
            if let Some(f) = functions {
                cfg.suite.functions = f;
            }
            let specs = if cfg.specs.is_empty() { default_specs() } else { cfg.specs };
            let suites = specs
                .par_iter()
                .map(|s| run_spec(s, &cfg.suite))
                .collect::<Result<Vec<_>>>()?;
            let mut ok = true;
            let mut lines = String::new();
            for suite in &suites {
                lines.push_str(&io::write_jsonl(&suite.reports)?);
                let failures = suite.failures().count();
                ok &= failures == 0;
                let label = suite.spec.label();
                eprintln!(
                    "{}",
                    serde_json::to_string(&SuiteSummary {
                        spec: &label,
                        checks: suite.reports.len(),
                        failures,
                        best_lsi_constant: suite.best_lsi_constant,
                    })?
                );
            }
            emit(out.as_deref(), &lines)?;
            Ok(ok)
        }
        Command::Tail { config, out, metadata } => {
            let exp = TailExperiment::from_toml(&read(&config)?)?;
            let report = run_tail(&exp)?;
            emit(out.as_deref(), &report.to_csv())?;
            let meta = report.metadata_json()? + "\n";
            match metadata {
                Some(p) => {
                    use std::io::Write;
                    fs::OpenOptions::new().create(true).append(true).open(p)?.write_all(meta.as_bytes())?;
                }
                None => eprint!("{meta}"),
            }
            Ok(report.all_ok())
        }
        Command::Cdist { set, points, tol, out } => {
            let set = SubsetIndicator::new(io::read_configurations(&read(&set)?)?)?;
            let results = io::read_configurations(&read(&points)?)?
                .iter()
                .map(|omega| convex_distance(omega, &set, tol))
                .collect::<Result<Vec<_>>>()?;
            emit(out.as_deref(), &io::convex_distance_csv(&results)?)?;
            Ok(results.iter().all(|r| r.gap <= tol))
        }
        Command::Norms { tensor, shape, partition, restarts, seed, out } => {
            let tensor = io::read_tensor(&read(&tensor)?, shape)?;
            let partitions = if partition.is_empty() {
                enumerate_partitions(tensor.order())?
            } else {
                partition.iter().map(|p| p.parse()).collect::<Result<Vec<Partition>>>()?
            };
            let opts = NormOptions { restarts, seed, ..NormOptions::default() };
            let results = partitions
                .into_iter()
                .map(|p| partition_norm(&tensor, &p, &opts).map(|e| (p, e)))
                .collect::<Result<Vec<_>>>()?;
            emit(out.as_deref(), &io::norms_csv(&results)?)?;
            Ok(true)
        }
        Command::Bound { config, t, out } => {
            let cfg: BoundConfig = toml::from_str(&read(&config)?).map_err(|e| Error::Config(e.to_string()))?;
            let mut csv = String::from("t,bound\n");
            for t in t {
                csv.push_str(&format!("{t},{}\n", cfg.bound.evaluate(t)?.capped));
            }
            emit(out.as_deref(), &csv)?;
            Ok(true)
        }
        Command::Talagrand { spec, trials, set_size, all, seed } => {
            let spec = spec.build()?;
            let report = if all {
                talagrand_all_subsets(&spec)?
            } else {
                run_talagrand_exact(&spec, set_size, trials, seed)?
            };
            println!("{}", serde_json::to_string(&report)?);
            Ok(report.verdict.is_ok())
        }
        Command::Report { files } => {
            let mut ok = true;
            for path in files {
                let counts = tally(&read(&path)?);
                let summary: Vec<String> = counts.iter().map(|(v, c)| format!("{v}={c}")).collect();
                println!("{}: {}", path.display(), summary.join(" "));
                ok &= counts.iter().all(|(v, c)| *c == 0 || v.is_ok());
            }
            Ok(ok)
        }
    }
}

/// Verdict counts in a CSV with a `verdict` column or JSON lines with a
/// `verdict` field.
fn tally(text: &str) -> Vec<(Verdict, usize)> {
    const ALL: [Verdict; 4] = [Verdict::Pass, Verdict::Dominated, Verdict::Fail, Verdict::Violated];
    let mut counts = ALL.map(|v| (v, 0usize));
    let mut bump = |s: &str| {
        if let Some(slot) = counts.iter_mut().find(|(v, _)| v.as_str() == s.trim()) {
            slot.1 += 1;
        }
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty()).peekable();
    let csv_column = lines
        .peek()
        .filter(|l| !l.trim_start().starts_with('{'))
        .and_then(|h| h.split(',').position(|c| c.trim() == "verdict"));
    match csv_column {
        Some(col) => {
            for l in lines.skip(1) {
                if let Some(f) = l.split(',').nth(col) {
                    bump(f);
                }
            }
        }
        None => {
            for l in lines {
                if let Ok(v) = serde_json::from_str::<serde_json::Value>(l) {
                    if let Some(s) = v.get("verdict").and_then(|x| x.as_str()) {
                        bump(s);
                    }
                }
            }
        }
    }
    counts.to_vec()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! `tsaug`: profile `.ts` datasets, balance them with an augmenter, and run the
//! augmentation benchmark.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tsaug::augment::{audit_csv, balance_dataset};
use tsaug::experiment::{load_dataset, report_table, run_on_datasets, write_outputs, DatasetPaths, LoadedDataset};
use tsaug::metrics::profile;
use tsaug::ts_format::{parse_ts, write_ts};
use tsaug::{AugmenterSpec, Error, ExperimentConfig, ImputePolicy, RngStream, Technique, TsHeader};

#[derive(Parser)]
#[command(name = "tsaug", version, about = "Data augmentation benchmark for multivariate time-series classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dataset profile (size, variance, imbalance, distance, missingness).
    Profile {
        train: PathBuf,
        test: PathBuf,
        /// Output as JSON instead of a CSV row.
        #[arg(long)]
        json: bool,
    },
    /// Balance a training file with one technique and write the result.
    Augment {
        train: PathBuf,
        /// Technique, e.g. noise_3, smote, gaussian-cov:0.1, window-warp:0.1:0.5,2.
        #[arg(long)]
        technique: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the synthesis audit CSV here.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Run the train/evaluate protocol and write the report.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        kernels: Option<usize>,
        /// Comma-separated augmenter list; must include `none`.
        #[arg(long)]
        techniques: Option<String>,
        /// Comma-separated subset of markdown, csv, json.
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Parse(String),
    Experiment(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Experiment(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Experiment(m) => m,
        }
    }
}

fn input_error(path: &Path, e: Error) -> Failure {
    Failure::Parse(format!("{}: {e}", path.display()))
}

fn read_ts(path: &Path) -> Result<tsaug::LabeledDataset, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let parsed = parse_ts(&text).map_err(|e| input_error(path, e))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w:?}", path.display());
    }
    Ok(parsed.dataset)
}

fn cmd_profile(train: &Path, test: &Path, json: bool) -> Result<(), Failure> {
    let tr = read_ts(train)?;
    let te = read_ts(test)?;
    let mut p = profile(&tr, &te, &ImputePolicy::default()).map_err(|e| Failure::Experiment(e.to_string()))?;
    if p.name.is_empty() {
        p.name = train.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&p).expect("profile serializes"));
    } else {
        println!("{}", tsaug::DatasetProfile::CSV_HEADER);
        println!("{}", p.csv_row());
    }
    Ok(())
}

fn cmd_augment(train: &Path, technique: &str, out: &Path, seed: u64, audit: Option<&Path>) -> Result<(), Failure> {
    let technique: Technique = technique.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let ds = read_ts(train)?;
    let stream = RngStream::new(seed, format!("{}/{technique}/augment", ds.name()));
    let balanced = balance_dataset(&ds, &AugmenterSpec::new(technique, stream))
        .map_err(|e| Failure::Experiment(e.to_string()))?;
    let text = write_ts(&TsHeader::for_dataset(&balanced), &balanced).map_err(|e| Failure::Experiment(e.to_string()))?;
    let write = |p: &Path, body: &str| std::fs::write(p, body).map_err(|e| Failure::Experiment(format!("{}: {e}", p.display())));
    write(out, &text)?;
    if let Some(a) = audit {
        write(a, &audit_csv(&balanced))?;
    }
    eprintln!("{}: {} -> {} series", ds.name(), ds.len(), balanced.len());
    Ok(())
}

struct BenchArgs {
    config: PathBuf,
    overrides: Vec<(&'static str, String)>,
    out_dir: Option<PathBuf>,
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;
    let mut cfg = ExperimentConfig::from_kv_str(&text, args.config.parent())
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.config.display())))?;
    for (k, v) in &args.overrides {
        cfg.set(k, v).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if let Some(d) = args.out_dir {
        cfg.out_dir = Some(d);
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    if cfg.datasets.is_empty() {
        return Err(Failure::Usage("config lists no datasets".into()));
    }
    let loaded: Vec<LoadedDataset> = cfg
        .datasets
        .iter()
        .map(|p: &DatasetPaths| load_dataset(p).map_err(|e| input_error(&p.train, e)))
        .collect::<Result<_, _>>()?;

    let report = run_on_datasets(&cfg, &loaded).map_err(|e| Failure::Experiment(e.to_string()))?;
    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("results"));
    let written = write_outputs(&report, &out_dir, &cfg.formats)
        .map_err(|e| Failure::Experiment(format!("{}: {e}", out_dir.display())))?;
    print!("{}", report_table(&report, tsaug::experiment::ReportFormat::Markdown));
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    let failed: Vec<String> = report
        .datasets
        .iter()
        .flat_map(|d| {
            let dataset = d.error.iter().map(move |e| format!("{}: {e}", d.name));
            let cells = d
                .cells
                .iter()
                .filter_map(move |c| c.error.as_ref().map(|e| format!("{}/{}: {e}", d.name, c.augmenter)));
            dataset.chain(cells)
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Experiment(format!("{} failed cell(s):\n  {}", failed.len(), failed.join("\n  "))))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Profile { train, test, json } => cmd_profile(&train, &test, json),
        Command::Augment { train, technique, out, seed, audit } => {
            cmd_augment(&train, &technique, &out, seed, audit.as_deref())
        }
        Command::Bench { config, runs, seed, kernels, techniques, format, out_dir } => {
            let mut overrides = Vec::new();
            if let Some(v) = runs {
                overrides.push(("runs", v.to_string()));
            }
            if let Some(v) = seed {
                overrides.push(("seed", v.to_string()));
            }
            if let Some(v) = kernels {
                overrides.push(("kernels", v.to_string()));
            }
            if let Some(v) = techniques {
                overrides.push(("techniques", v));
            }
            if let Some(v) = format {
                overrides.push(("format", v));
            }
            cmd_bench(BenchArgs { config, overrides, out_dir })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

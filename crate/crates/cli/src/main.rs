//! Command-line front end for the evalprec library.
//!
//! Subcommands mirror the library surface: `estimate` (Gaussian + bootstrap
//! precision of a sample file), `subsample` (precision vs test-set size),
//! `simulate` (analytic SEM/width grid), `plan` (required test-set size for
//! a target CI width) and `dice` (per-subject Dice from volume pairs,
//! emitting a samples CSV consumable by `estimate`).
//!
//! Every invocation echoes its effective configuration, including a
//! defaulted seed, so any output can be reproduced from its own header.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use evalprec_core::error::ErrorCategory;
use evalprec_core::{
    bootstrap_estimate, dice, gaussian_estimate, kde, kde_csv, load_samples_with, merge_labels,
    plan_sample_size, read_volume, render_report, simulate_grid, subsample_study, BootstrapConfig,
    LoadOptions, MetricSample, MetricSampleSet, PercentileMethod, Report, ReportFormat,
    SampleFormat, SpreadConvention, SubsampleConfig, DEFAULT_GRID_SIGMAS, DEFAULT_GRID_SIZES,
    DEFAULT_RESAMPLES,
};

const SEED_ENV: &str = "EVALPREC_SEED";
const RESAMPLES_ENV: &str = "EVALPREC_RESAMPLES";

#[derive(Parser)]
#[command(
    name = "evalprec",
    version,
    about = "Precision (SEM and 95% CI) of per-sample evaluation metrics",
    after_help = "Environment: EVALPREC_SEED and EVALPREC_RESAMPLES act as defaults for --seed \
                  and --resamples; explicit flags take precedence.\n\
                  Exit codes: 0 success, 2 validation error, 3 data error, 4 internal error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian and bootstrap precision estimates for a sample file
    Estimate(EstimateArgs),
    /// Precision statistics on repeated without-replacement subsamples
    Subsample(SubsampleArgs),
    /// Analytic SEM/width grid over test-set sizes and spreads
    Simulate(SimulateArgs),
    /// Minimal test-set size for a target CI width
    Plan(PlanArgs),
    /// Dice per subject from prediction/ground-truth volume pairs
    Dice(DiceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormatArg {
    Markdown,
    Csv,
}

impl From<OutputFormatArg> for ReportFormat {
    fn from(f: OutputFormatArg) -> Self {
        match f {
            OutputFormatArg::Markdown => ReportFormat::Markdown,
            OutputFormatArg::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Population,
    Sample,
}

impl From<ConventionArg> for SpreadConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Population => SpreadConvention::Population,
            ConventionArg::Sample => SpreadConvention::Sample,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PercentileMethodArg {
    LinearInterpolation,
    NearestRank,
}

impl From<PercentileMethodArg> for PercentileMethod {
    fn from(m: PercentileMethodArg) -> Self {
        match m {
            PercentileMethodArg::LinearInterpolation => PercentileMethod::LinearInterpolation,
            PercentileMethodArg::NearestRank => PercentileMethod::NearestRank,
        }
    }
}

#[derive(Args)]
struct SampleInputArgs {
    /// Sample file ("-" for stdin)
    #[arg(long)]
    input: String,
    /// Input format; inferred from a .json extension when omitted
    #[arg(long, value_enum)]
    input_format: Option<InputFormatArg>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    sample_input: SampleInputArgs,
    /// Bootstrap seed (default: drawn at random and echoed in the header)
    #[arg(long)]
    seed: Option<u64>,
    /// Number of bootstrap resamples
    #[arg(long)]
    resamples: Option<usize>,
    /// Critical value of the interval
    #[arg(long, default_value_t = evalprec_core::Z_95)]
    z: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Population)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = PercentileMethodArg::LinearInterpolation)]
    percentile_method: PercentileMethodArg,
    #[arg(long, value_enum, default_value_t = OutputFormatArg::Markdown)]
    format: OutputFormatArg,
    /// Also export a density curve of the sample as CSV
    #[arg(long)]
    kde_out: Option<PathBuf>,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SubsampleArgs {
    #[command(flatten)]
    sample_input: SampleInputArgs,
    /// Subsample sizes K (comma list; default 10,20,30,50,100,n)
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Draws per size (J)
    #[arg(long, default_value_t = evalprec_core::subsample::DEFAULT_DRAWS)]
    draws: usize,
    /// Master seed (default: drawn at random and echoed in the header)
    #[arg(long)]
    seed: Option<u64>,
    /// Number of bootstrap resamples per draw
    #[arg(long)]
    resamples: Option<usize>,
    #[arg(long, default_value_t = evalprec_core::Z_95)]
    z: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Population)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = PercentileMethodArg::LinearInterpolation)]
    percentile_method: PercentileMethodArg,
    #[arg(long, value_enum, default_value_t = OutputFormatArg::Markdown)]
    format: OutputFormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Test-set sizes k (comma list)
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GRID_SIZES)]
    sizes: Vec<usize>,
    /// Spread values sigma (comma list)
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GRID_SIGMAS)]
    sigmas: Vec<f64>,
    #[arg(long, default_value_t = evalprec_core::Z_95)]
    z: f64,
    #[arg(long, value_enum, default_value_t = OutputFormatArg::Markdown)]
    format: OutputFormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    /// Expected spread of the metric
    #[arg(long)]
    sigma: f64,
    /// Target CI width
    #[arg(long)]
    width: f64,
    #[arg(long, default_value_t = evalprec_core::Z_95)]
    z: f64,
    #[arg(long, value_enum, default_value_t = OutputFormatArg::Markdown)]
    format: OutputFormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiceArgs {
    /// Manifest CSV with header subject_id,prediction,ground_truth; volume
    /// paths are resolved relative to the manifest's directory
    #[arg(long)]
    input: PathBuf,
    /// Labels to merge into the foreground (default: every nonzero label)
    #[arg(long, value_delimiter = ',')]
    labels: Option<Vec<u8>>,
    /// Score a pair with two empty masks as 100 instead of failing
    #[arg(long)]
    empty_is_perfect: bool,
    /// Output path for the samples CSV (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// CLI-level error with an exit-code category.
#[derive(Debug)]
struct CliError {
    category: ErrorCategory,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            category: ErrorCategory::Validation,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            category: ErrorCategory::Data,
            message: message.into(),
        }
    }
}

impl From<evalprec_core::Error> for CliError {
    fn from(e: evalprec_core::Error) -> Self {
        Self {
            category: e.category(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            category: ErrorCategory::Data,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() {
    let cli = Cli::parse();
    // Panics are not part of the error contract; surface them as the
    // documented internal-error category and exit code, keeping stderr to
    // the single machine-parsable line.
    std::panic::set_hook(Box::new(|_| {}));
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli.command)))
        .unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unexpected panic".into());
            Err(CliError {
                category: ErrorCategory::Internal,
                message,
            })
        });
    if let Err(e) = result {
        eprintln!("error[{}]: {}", e.category.as_str(), e.message);
        std::process::exit(match e.category {
            ErrorCategory::Validation => 2,
            ErrorCategory::Data => 3,
            ErrorCategory::Internal => 4,
        });
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Estimate(args) => run_estimate(args),
        Command::Subsample(args) => run_subsample(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Plan(args) => run_plan(args),
        Command::Dice(args) => run_dice(args),
    }
}

/// Flag value, else environment override, else `default()`.
fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    env_var: &str,
    default: impl FnOnce() -> T,
) -> CliResult<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(env_var) {
        Ok(raw) => raw
            .parse()
            .map_err(|_| CliError::validation(format!("cannot parse {env_var}={raw:?}"))),
        Err(_) => Ok(default()),
    }
}

fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    resolve(flag, SEED_ENV, || rand::rng().random())
}

fn resolve_resamples(flag: Option<usize>) -> CliResult<usize> {
    resolve(flag, RESAMPLES_ENV, || DEFAULT_RESAMPLES)
}

fn read_samples(args: &SampleInputArgs) -> CliResult<MetricSampleSet> {
    let format = match args.input_format {
        Some(InputFormatArg::Csv) => SampleFormat::Csv,
        Some(InputFormatArg::Json) => SampleFormat::Json,
        None if args.input.ends_with(".json") => SampleFormat::Json,
        None => SampleFormat::Csv,
    };
    let options = LoadOptions {
        metric_name: "metric".into(),
        bounds: None,
    };
    let set = if args.input == "-" {
        load_samples_with(&mut std::io::stdin().lock(), format, &options)?
    } else {
        let mut file = std::fs::File::open(&args.input)
            .map_err(|e| CliError::data(format!("cannot open {:?}: {e}", args.input)))?;
        load_samples_with(&mut file, format, &options)?
    };
    Ok(set)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::data(format!("cannot write {path:?}: {e}")))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_estimate(args: EstimateArgs) -> CliResult<()> {
    let seed = resolve_seed(args.seed)?;
    let resamples = resolve_resamples(args.resamples)?;
    let samples = read_samples(&args.sample_input)?;
    let convention: SpreadConvention = args.convention.into();
    let method: PercentileMethod = args.percentile_method.into();

    let gauss = gaussian_estimate(&samples, args.z, convention)?;
    let config = BootstrapConfig {
        resamples,
        seed,
        percentile_method: method,
    };
    let boot = bootstrap_estimate(&samples, &config)?;
    // computed before anything is written, so a degenerate-spread failure
    // never leaves partial output behind
    let curve = args
        .kde_out
        .as_ref()
        .map(|_| kde(&samples, None, evalprec_core::kde::DEFAULT_GRID_POINTS))
        .transpose()?;

    let mut text = String::new();
    text.push_str("# command = estimate\n");
    text.push_str(&format!("# input = {}\n", args.sample_input.input));
    text.push_str(&format!("# n = {}\n", samples.len()));
    text.push_str(&format!("# seed = {seed}\n"));
    text.push_str(&format!("# resamples = {resamples}\n"));
    text.push_str(&format!("# z = {}\n", args.z));
    text.push_str(&format!("# convention = {}\n", convention.as_str()));
    text.push_str(&format!("# percentile-method = {}\n", method.as_str()));
    text.push_str(&render_report(
        &Report::FullSet(&gauss, &boot),
        args.format.into(),
    ));
    write_output(&args.out, &text)?;

    if let (Some(kde_path), Some(curve)) = (&args.kde_out, &curve) {
        std::fs::write(kde_path, kde_csv(curve))
            .map_err(|e| CliError::data(format!("cannot write {kde_path:?}: {e}")))?;
    }
    Ok(())
}

fn run_subsample(args: SubsampleArgs) -> CliResult<()> {
    let seed = resolve_seed(args.seed)?;
    let resamples = resolve_resamples(args.resamples)?;
    let samples = read_samples(&args.sample_input)?;
    let convention: SpreadConvention = args.convention.into();
    let method: PercentileMethod = args.percentile_method.into();

    let sizes = args
        .sizes
        .unwrap_or_else(|| evalprec_core::default_sizes(samples.len()));
    let config = SubsampleConfig {
        sizes,
        draws: args.draws,
        bootstrap: BootstrapConfig {
            resamples,
            seed,
            percentile_method: method,
        },
        seed,
        z: args.z,
        convention,
    };
    let report = subsample_study(&samples, &config)?;

    let mut text = String::new();
    text.push_str("# command = subsample\n");
    text.push_str(&format!("# input = {}\n", args.sample_input.input));
    text.push_str(&format!("# n = {}\n", samples.len()));
    text.push_str(&format!(
        "# sizes = {}\n",
        config
            .sizes
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    text.push_str(&format!("# draws = {}\n", config.draws));
    text.push_str(&format!("# seed = {seed}\n"));
    text.push_str(&format!("# resamples = {resamples}\n"));
    text.push_str(&format!("# z = {}\n", args.z));
    text.push_str(&format!("# convention = {}\n", convention.as_str()));
    text.push_str(&format!("# percentile-method = {}\n", method.as_str()));
    text.push_str("# cells = mean ± std across draws (std divides by draws)\n");
    text.push_str(&render_report(
        &Report::Subsample(&report),
        args.format.into(),
    ));
    write_output(&args.out, &text)
}

fn run_simulate(args: SimulateArgs) -> CliResult<()> {
    let grid = simulate_grid(&args.sizes, &args.sigmas, args.z)?;
    let mut text = String::new();
    text.push_str("# command = simulate\n");
    text.push_str(&format!(
        "# sizes = {}\n",
        grid.k_values
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    text.push_str(&format!(
        "# sigmas = {}\n",
        grid.sigma_values
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    text.push_str(&format!("# z = {}\n", args.z));
    text.push_str(&render_report(&Report::Grid(&grid), args.format.into()));
    write_output(&args.out, &text)
}

fn run_plan(args: PlanArgs) -> CliResult<()> {
    let plan = plan_sample_size(args.sigma, args.width, args.z)?;
    let mut text = String::new();
    text.push_str("# command = plan\n");
    text.push_str(&format!("# sigma = {}\n", args.sigma));
    text.push_str(&format!("# width = {}\n", args.width));
    text.push_str(&format!("# z = {}\n", args.z));
    text.push_str(&render_report(&Report::Plan(&plan), args.format.into()));
    write_output(&args.out, &text)
}

fn run_dice(args: DiceArgs) -> CliResult<()> {
    let labels = match &args.labels {
        Some(labels) => labels.clone(),
        None => (1..=u8::MAX).collect(), // any nonzero label is foreground
    };

    // Echoing configuration on stderr keeps stdout a pure samples CSV that
    // `estimate --input -` can consume.
    eprintln!("# command = dice");
    eprintln!("# input = {}", args.input.display());
    eprintln!(
        "# labels = {}",
        args.labels
            .as_ref()
            .map(|l| l
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","))
            .unwrap_or_else(|| "all-nonzero".into())
    );
    eprintln!("# empty-is-perfect = {}", args.empty_is_perfect);

    let manifest_dir = args
        .input
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let manifest = std::fs::File::open(&args.input)
        .map_err(|e| CliError::data(format!("cannot open {:?}: {e}", args.input)))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(manifest);
    let headers = reader
        .headers()
        .map_err(|e| CliError::data(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["subject_id", "prediction", "ground_truth"] {
        return Err(CliError::data(format!(
            "manifest must have header \"subject_id,prediction,ground_truth\", found {headers:?}"
        )));
    }

    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::data(e.to_string()))?;
        if record.len() != 3 {
            return Err(CliError::data(format!(
                "manifest line {} must have 3 fields",
                record.position().map(|p| p.line()).unwrap_or(0)
            )));
        }
        let subject_id = record[0].to_string();
        let pred_mask = load_mask(&manifest_dir, &record[1], &labels)?;
        let gt_mask = load_mask(&manifest_dir, &record[2], &labels)?;
        let value = match dice(&pred_mask, &gt_mask) {
            Ok(v) => v,
            Err(evalprec_core::Error::UndefinedDice) if args.empty_is_perfect => 100.0,
            Err(e) => {
                return Err(CliError {
                    category: e.category(),
                    message: format!("subject {subject_id:?}: {e}"),
                })
            }
        };
        samples.push(MetricSample { subject_id, value });
    }

    let set = MetricSampleSet::new(samples, "dice", Some((0.0, 100.0)))?;
    let mut buf = Vec::new();
    evalprec_core::save_samples(&mut buf, &set, SampleFormat::Csv)?;
    let text = String::from_utf8(buf).expect("csv output is utf-8");
    write_output(&args.out, &text)
}

fn load_mask(base: &Path, relative: &str, labels: &[u8]) -> CliResult<evalprec_core::BinaryMask> {
    let path = base.join(relative);
    let mut file = std::fs::File::open(&path)
        .map_err(|e| CliError::data(format!("cannot open volume {path:?}: {e}")))?;
    let volume = read_volume(&mut file)?;
    Ok(merge_labels(&volume, labels)?)
}

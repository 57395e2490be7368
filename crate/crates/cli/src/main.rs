use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kcoreset::data::{inflate, inject_outliers, load_dataset, write_dataset, LoadOptions};
use kcoreset::oracle::DEFAULT_BUDGET;
use kcoreset::{
    bench, brute_force_by_coverage, brute_force_kcenter_outliers, run, Algorithm, BenchRecord,
    ClusteringSolution, Dataset, Error, OracleResult, RunSpec, Scalar,
};

#[derive(Parser)]
#[command(name = "kcoreset", version, about = "Coreset-based k-center clustering with outliers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on a dataset.
    Solve(SolveArgs),
    /// Repeat an algorithm over seeds and coreset sizes and aggregate.
    Bench(BenchArgs),
    /// Append far-away outliers to a dataset.
    InjectOutliers(InjectArgs),
    /// Grow a dataset by resampling with Gaussian noise.
    Inflate(InflateArgs),
    /// Exact optimum by exhaustive search (small inputs only).
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Precision {
    F32,
    F64,
}

#[derive(Args)]
struct InputArgs {
    /// CSV or whitespace-separated numeric table.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated column indices to keep.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<usize>>,
    #[arg(long)]
    skip_header: bool,
    #[arg(long, value_enum, default_value = "f64")]
    precision: Precision,
}

impl InputArgs {
    fn load<F: Scalar>(&self) -> kcoreset::Result<Dataset<F>> {
        let opts = LoadOptions {
            skip_header: self.skip_header,
            columns: self.columns.clone(),
        };
        load_dataset(&self.input, &opts)
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_algorithm)]
    algo: Algorithm,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    z: usize,
    /// Number of partitions (default: ceil(sqrt(n / k))).
    #[arg(long)]
    ell: Option<usize>,
    /// Accuracy eps of the 2 + eps / 3 + eps guarantees (default 0.6).
    #[arg(long)]
    eps: Option<f64>,
    /// Explicit coreset size or streaming capacity.
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Permute the points with the seed before running.
    #[arg(long)]
    shuffle: bool,
    /// Enumeration budget for brute-force.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

impl RunArgs {
    fn spec(&self, mu: Option<f64>) -> RunSpec {
        RunSpec {
            algorithm: self.algo,
            k: self.k,
            z: self.z,
            ell: self.ell,
            eps: self.eps,
            mu,
            tau: self.tau,
            seed: self.seed,
            shuffle: self.shuffle,
            budget: self.budget,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Coreset size multiplier.
    #[arg(long)]
    mu: Option<f64>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Include wall-clock measurements in the JSON.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated coreset size multipliers.
    #[arg(long, value_delimiter = ',')]
    mu: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Append records to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Dataset name in the records (default: input file stem).
    #[arg(long)]
    dataset_id: Option<String>,
    /// Print JSON instead of a summary table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InjectArgs {
    #[arg(long)]
    z: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    skip_header: bool,
    input: PathBuf,
    output: PathBuf,
}

#[derive(Args)]
struct InflateArgs {
    #[arg(long)]
    h: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    skip_header: bool,
    input: PathBuf,
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMethod {
    /// Enumerate every center set.
    Enumerate,
    /// Search over radii with a coverage check (at most 64 points).
    Coverage,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    z: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, value_enum, default_value = "enumerate")]
    method: OracleMethod,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

#[derive(Serialize)]
#[serde(bound = "F: Scalar")]
struct SolveOutput<'a, F> {
    #[serde(flatten)]
    solution: &'a ClusteringSolution<F>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coreset_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peak_local_memory_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings<'a>>,
}

#[derive(Serialize)]
struct Timings<'a> {
    phases: &'a [kcoreset::bench::Phase],
    total_secs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    throughput: Option<f64>,
}

fn solve<F: Scalar>(args: &SolveArgs) -> kcoreset::Result<()> {
    let s = args.input.load::<F>()?;
    let out = run(&s, &args.run.spec(args.mu))?;
    let sol = &out.solution;
    if args.json {
        let doc = SolveOutput {
            solution: sol,
            coreset_size: out.coreset_size,
            peak_local_memory_points: out.peak_local_memory_points,
            timings: args.timings.then_some(Timings {
                phases: &out.phases,
                total_secs: out.total_secs,
                throughput: out.throughput,
            }),
        };
        print_json(&doc);
    } else {
        println!("algorithm  {}", sol.algorithm);
        println!("points     {} (dim {})", s.len(), s.dim());
        println!("k, z       {}, {}", sol.params.k, sol.z);
        println!("radius     {}", sol.radius);
        if let Some(r) = sol.r_tilde {
            println!("r_tilde    {r}");
        }
        println!("centers    {:?}", sol.center_indices);
        if let Some(c) = out.coreset_size {
            println!("coreset    {c}");
        }
        for p in &out.phases {
            println!("{:<10} {:.6}s", p.name, p.secs);
        }
        if let Some(t) = out.throughput {
            println!("throughput {t:.0} points/s");
        }
    }
    Ok(())
}

fn append_csv(path: &Path, records: &[BenchRecord]) -> kcoreset::Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{}", BenchRecord::CSV_HEADER)?;
    }
    for r in records {
        writeln!(f, "{}", r.csv_row())?;
    }
    Ok(())
}

fn run_bench<F: Scalar>(args: &BenchArgs) -> kcoreset::Result<()> {
    let s = args.input.load::<F>()?;
    let id = args.dataset_id.clone().unwrap_or_else(|| {
        args.input
            .input
            .file_stem()
            .map(|x| x.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let out = bench(&s, &id, &args.run.spec(None), &args.mu, args.reps)?;
    if let Some(path) = &args.csv {
        append_csv(path, &out.records)?;
    }
    if args.json {
        print_json(&out);
    } else {
        println!("{:<16} {:>6} {:>24} {:>22} {:>22}", "algorithm", "mu", "radius (95% CI)", "ratio (95% CI)", "seconds (95% CI)");
        for g in &out.summary {
            let mu = g.mu.map(|m| m.to_string()).unwrap_or_else(|| "-".into());
            println!(
                "{:<16} {:>6} {:>13.6} ± {:<8.2e} {:>11.4} ± {:<8.2e} {:>11.4} ± {:<8.2e}",
                g.algorithm.name(),
                mu,
                g.radius.mean,
                g.radius.half_width,
                g.approximation_ratio.mean,
                g.approximation_ratio.half_width,
                g.total_secs.mean,
                g.total_secs.half_width,
            );
        }
    }
    Ok(())
}

fn inject(args: &InjectArgs) -> kcoreset::Result<()> {
    let opts = LoadOptions {
        skip_header: args.skip_header,
        columns: None,
    };
    let s = load_dataset::<f64>(&args.input, &opts)?;
    let (out, idx) = inject_outliers(&s, args.z, args.seed)?;
    write_dataset(&args.output, &out)?;
    let mut sidecar = args.output.clone().into_os_string();
    sidecar.push(".outliers");
    let body: String = idx.iter().map(|i| format!("{i}\n")).collect();
    std::fs::write(sidecar, body)?;
    Ok(())
}

fn grow(args: &InflateArgs) -> kcoreset::Result<()> {
    let opts = LoadOptions {
        skip_header: args.skip_header,
        columns: None,
    };
    let s = load_dataset::<f64>(&args.input, &opts)?;
    write_dataset(&args.output, &inflate(&s, args.h, args.seed)?)
}

fn oracle<F: Scalar>(args: &OracleArgs) -> kcoreset::Result<()> {
    let s = args.input.load::<F>()?;
    match args.method {
        OracleMethod::Enumerate => {
            let r: OracleResult<F> = brute_force_kcenter_outliers(&s, args.k, args.z, args.budget)?;
            print_json(&r);
        }
        OracleMethod::Coverage => {
            let r = brute_force_by_coverage(&s, args.k, args.z)?;
            print_json(&serde_json::json!({ "opt_radius": r.as_f64() }));
        }
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn dispatch(cli: &Cli) -> kcoreset::Result<()> {
    match &cli.command {
        Command::Solve(a) => match a.input.precision {
            Precision::F64 => solve::<f64>(a),
            Precision::F32 => solve::<f32>(a),
        },
        Command::Bench(a) => match a.input.precision {
            Precision::F64 => run_bench::<f64>(a),
            Precision::F32 => run_bench::<f32>(a),
        },
        Command::InjectOutliers(a) => inject(a),
        Command::Inflate(a) => grow(a),
        Command::Oracle(a) => match a.input.precision {
            Precision::F64 => oracle::<f64>(a),
            Precision::F32 => oracle::<f32>(a),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kcoreset: {e}");
            ExitCode::from(match e {
                Error::Input(_) | Error::Io(_) => 2,
                Error::Budget { .. } => 3,
                Error::Internal(_) => 1,
            })
        }
    }
}

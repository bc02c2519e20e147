use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mtsp::allocator::{solve, InitStrategy, Solution, SolverConfig};
use mtsp::bench::{self, BenchConfig};
use mtsp::error::{Error, Result};
use mtsp::ga::{ga_solve, GaConfig};
use mtsp::instance::{generate, Instance, Region};
use mtsp::plot::{render_convergence_svg, render_routes_svg};
use mtsp::routing::TwoOptConfig;

#[derive(Parser)]
#[command(
    name = "mtsp",
    about = "Min-max multi-traveling-salesman solver and benchmark harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance and write it as JSON
    Gen(GenArgs),
    /// Solve an instance file and write the solution JSON
    Solve(SolveArgs),
    /// Run a scenario x method x seed matrix and write a CSV of results
    Bench(BenchArgs),
    /// Render SVG plots from a saved solution
    Plot(PlotArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of agents (depots)
    #[arg(long)]
    k: usize,
    /// Number of tasks
    #[arg(long)]
    n: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampling region as xmin,ymin,xmax,ymax
    #[arg(long, default_value = "0,0,10,10")]
    region: String,
    /// Output instance file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Proposed,
    Ga,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
    Nearest,
    Kmeans,
}

#[derive(Args)]
struct SolveArgs {
    /// Input instance file
    #[arg(long = "in")]
    input: PathBuf,
    /// Solver to run
    #[arg(long, value_enum, default_value_t = MethodArg::Proposed)]
    method: MethodArg,
    /// Output solution file
    #[arg(long)]
    out: PathBuf,
    /// Directory for routes.svg and convergence.svg (optional)
    #[arg(long)]
    plots: Option<PathBuf>,
    /// Wall-clock budget in seconds (checked at iteration boundaries)
    #[arg(long)]
    budget: Option<f64>,

    /// Initial assignment strategy (proposed)
    #[arg(long, value_enum, default_value_t = InitArg::Nearest)]
    init: InitArg,
    /// Candidate neighborhood size (proposed)
    #[arg(long = "M", default_value_t = 5)]
    m: usize,
    /// Permit migrations that empty a cluster (proposed)
    #[arg(long)]
    allow_empty_clusters: bool,
    /// Seed for per-iteration task visit shuffles (proposed)
    #[arg(long, default_value_t = 0)]
    shuffle_seed: u64,
    /// Outer iteration cap (proposed)
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// 2-opt pass cap per cluster solve
    #[arg(long, default_value_t = 50)]
    two_opt_passes: usize,

    /// Population size (ga)
    #[arg(long, default_value_t = 80)]
    pop: usize,
    /// Generation count (ga)
    #[arg(long, default_value_t = 100)]
    gens: usize,
    /// Per-gene mutation probability (ga)
    #[arg(long, default_value_t = 0.05)]
    mutation: f64,
    /// RNG seed (ga)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated KxN scenarios
    #[arg(long, default_value = "5x20,10x50,100x500,1000x5000")]
    scenarios: String,
    /// Comma-separated methods (proposed,ga)
    #[arg(long, default_value = "proposed,ga")]
    methods: String,
    /// Per-run wall-clock budget in seconds
    #[arg(long, default_value_t = 120.0)]
    budget: f64,
    /// Instance seeds per scenario (runs seeds 0..seeds)
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// Sampling region as xmin,ymin,xmax,ymax
    #[arg(long, default_value = "0,0,10,10")]
    region: String,
    /// Output CSV file
    #[arg(long)]
    out: PathBuf,
    /// Parallel worker slots (each run stays single-threaded)
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Override candidate neighborhood size for the proposed method
    #[arg(long = "M")]
    m: Option<usize>,
    /// Override GA population size
    #[arg(long)]
    pop: Option<usize>,
    /// Override GA generation count
    #[arg(long)]
    gens: Option<usize>,
    /// Override GA mutation probability
    #[arg(long)]
    mutation: Option<f64>,
}

#[derive(Args)]
struct PlotArgs {
    /// Solution JSON file
    #[arg(long = "in")]
    input: PathBuf,
    /// Matching instance file; required for routes.svg
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

fn parse_region(text: &str) -> Result<Region> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "region `{text}` must be xmin,ymin,xmax,ymax"
        )));
    }
    let mut vals = [0.0; 4];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| Error::InvalidInput(format!("region component `{part}` is not a number")))?;
    }
    Ok(Region::new(vals[0], vals[1], vals[2], vals[3]))
}

fn budget_duration(seconds: Option<f64>) -> Result<Option<Duration>> {
    match seconds {
        None => Ok(None),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(Error::InvalidInput(format!("budget `{s}` must be >= 0 seconds"))),
    }
}

fn write_plots(dir: &Path, inst: &Instance, sol: &Solution) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("routes.svg"), render_routes_svg(inst, sol)?)?;
    fs::write(dir.join("convergence.svg"), render_convergence_svg(&sol.trace)?)?;
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let region = parse_region(&args.region)?;
    let inst = generate(args.k, args.n, region, args.seed)?;
    inst.write_to(&args.out)?;
    println!("wrote {} ({}x{}, seed {})", args.out.display(), args.k, args.n, args.seed);
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let inst = Instance::read_from(&args.input)?;
    let budget = budget_duration(args.budget)?;
    let two_opt = TwoOptConfig {
        max_passes: args.two_opt_passes,
        ..TwoOptConfig::default()
    };
    let sol = match args.method {
        MethodArg::Proposed => {
            let cfg = SolverConfig {
                m: args.m,
                allow_empty_clusters: args.allow_empty_clusters,
                max_outer_iterations: args.max_iters,
                shuffle_seed: args.shuffle_seed,
                two_opt,
                init: match args.init {
                    InitArg::Nearest => InitStrategy::NearestDepot,
                    InitArg::Kmeans => InitStrategy::KMeans,
                },
                budget,
            };
            solve(&inst, &cfg)?
        }
        MethodArg::Ga => {
            let cfg = GaConfig {
                population: args.pop,
                generations: args.gens,
                mutation_rate: args.mutation,
                seed: args.seed,
                two_opt,
                budget,
                ..GaConfig::default()
            };
            ga_solve(&inst, &cfg)?
        }
    };
    fs::write(&args.out, sol.to_json() + "\n")?;
    if let Some(dir) = &args.plots {
        write_plots(dir, &inst, &sol)?;
    }
    println!(
        "max_cost={} total_cost={} iterations={} evaluation_calls={} elapsed_s={:.3}",
        sol.max_cost, sol.total_cost, sol.iterations, sol.evaluation_calls, sol.elapsed_s
    );
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let cfg = BenchConfig {
        scenarios: bench::parse_scenarios(&args.scenarios)?,
        methods: bench::parse_methods(&args.methods)?,
        seeds: args.seeds,
        budget: budget_duration(Some(args.budget))?,
        region: parse_region(&args.region)?,
        jobs: args.jobs,
        m_override: args.m,
        ga_population: args.pop,
        ga_generations: args.gens,
        ga_mutation: args.mutation,
    };
    if cfg.scenarios.is_empty() || cfg.methods.is_empty() || cfg.seeds == 0 {
        return Err(Error::InvalidInput(
            "bench needs at least one scenario, one method, and one seed".to_string(),
        ));
    }
    let rows = bench::run(&cfg)?;
    let file = fs::File::create(&args.out)?;
    bench::write_csv(&rows, file)?;
    let timeouts = rows
        .iter()
        .filter(|r| r.status == bench::RunStatus::Timeout)
        .count();
    println!(
        "wrote {} rows to {} ({} timeout)",
        rows.len(),
        args.out.display(),
        timeouts
    );
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Error::Parse(format!("{}: {e}", args.input.display())))?;
    let sol = Solution::from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", args.input.display())),
        other => other,
    })?;
    fs::create_dir_all(&args.out)?;
    fs::write(args.out.join("convergence.svg"), render_convergence_svg(&sol.trace)?)?;
    if let Some(instance_path) = &args.instance {
        let inst = Instance::read_from(instance_path)?;
        fs::write(args.out.join("routes.svg"), render_routes_svg(&inst, &sol)?)?;
        println!("wrote routes.svg and convergence.svg to {}", args.out.display());
    } else {
        println!("wrote convergence.svg to {} (pass --instance for routes.svg)", args.out.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Plot(args) => cmd_plot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

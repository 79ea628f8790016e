use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use majority_core::cores::{has_positive_core, is_internal_cut};
use majority_core::dynamics::{
    default_max_steps, format_trajectory_line, run_to_limit_cycle_observed, step, DynamicsError,
    LimitCycle, SpinState, Stepper, SwapProcess,
};
use majority_core::experiments::{
    aggregate_census, run_experiment, summarize, write_records_csv, Checkpoint, ExperimentConfig,
    ExperimentKind, DEFAULT_TRIALS,
};
use majority_core::graphgen::{
    gen_erdos_renyi, gen_random_regular, random_regular_with_rng, read_edge_list, write_edge_list,
    Graph, RegularSampler,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Majority dynamics, MD with zeros and the swap process on random graphs.
#[derive(Parser, Debug)]
#[command(name = "majdyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a uniform random d-regular graph and write it as an edge list.
    GenRegular(GenRegularArgs),
    /// Sample an Erdős–Rényi graph G(n, d/n) and write it as an edge list.
    GenEr(GenErArgs),
    /// Run one trajectory from a uniformly random ±1 start.
    Run(RunArgs),
    /// Run a seeded Monte-Carlo sweep and write one CSV row per trial.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct GenRegularArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Degree; n*d must be even and d < n.
    #[arg(long)]
    d: usize,
    /// Random seed.
    #[arg(long)]
    seed: u64,
    /// Output edge-list file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenErArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Average degree; each edge is kept with probability d/n.
    #[arg(long)]
    d: f64,
    /// Random seed.
    #[arg(long)]
    seed: u64,
    /// Output edge-list file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DynamicsKind {
    Md,
    Md0,
    Swap,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Edge-list file to run on. Alternative to --n/--d.
    #[arg(long, conflicts_with_all = ["n", "d"])]
    graph: Option<PathBuf>,
    /// Vertices of a random d-regular graph sampled from --seed.
    #[arg(long, requires = "d")]
    n: Option<usize>,
    /// Degree of the sampled random regular graph.
    #[arg(long, requires = "n")]
    d: Option<usize>,
    /// Dynamics to run.
    #[arg(long, value_enum, default_value_t = DynamicsKind::Md)]
    dynamics: DynamicsKind,
    /// Random seed for the graph (with --n/--d), the start state and swap choices.
    #[arg(long)]
    seed: u64,
    /// md0 only: stop after exactly k steps and test for a positive core.
    #[arg(long)]
    k: Option<usize>,
    /// Step cap (default 10m + 100).
    #[arg(long)]
    max_steps: Option<usize>,
    /// Write "step <t> <state>" lines for every visited state.
    #[arg(long)]
    dump_trajectory: Option<PathBuf>,
    /// Write the final state as one line of '-', '0', '+'.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SamplerArg {
    Auto,
    Pairing,
    StegerWormald,
}

impl From<SamplerArg> for RegularSampler {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Auto => RegularSampler::Auto,
            SamplerArg::Pairing => RegularSampler::Pairing,
            SamplerArg::StegerWormald => RegularSampler::StegerWormald,
        }
    }
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// oscillation-regular, oscillation-er, core-after-md, swap-internal-cut,
    /// swap-core-vs-steps, md0-core-vs-k or md0-type-census.
    #[arg(long)]
    kind: ExperimentKind,
    /// Comma-separated degrees (average degrees for oscillation-er).
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<f64>,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Trials per (d, n) point.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Comma-separated MD0 step counts (md0-core-vs-k; md0-type-census accepts only 4).
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Comma-separated swap-step checkpoints, absolute ("1500") or per vertex ("0.15n").
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<Checkpoint>,
    /// Master seed; every trial seed derives from it.
    #[arg(long)]
    seed: u64,
    /// Step cap for synchronous runs (default 10m + 100 per graph).
    #[arg(long)]
    max_steps: Option<usize>,
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,
    /// Random regular sampler.
    #[arg(long, value_enum, default_value_t = SamplerArg::Auto)]
    sampler: SamplerArg,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
    /// md0-type-census only: write the run-wide signature counts here.
    #[arg(long)]
    census_out: Option<PathBuf>,
}

/// Exit status 2: a synchronous run hit its step cap.
struct CapHit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::GenRegular(args) => gen_regular(args),
        Command::GenEr(args) => gen_er(args),
        Command::Run(args) => run(args),
        Command::Experiment(args) => experiment(args),
    };
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CapHit)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn save_graph(graph: &Graph, path: &Path) -> Result<()> {
    write_edge_list(graph, path).with_context(|| format!("writing {}", path.display()))
}

fn gen_regular(args: GenRegularArgs) -> Result<Result<(), CapHit>> {
    let graph = gen_random_regular(args.n, args.d, args.seed)?;
    save_graph(&graph, &args.out)?;
    println!(
        "gen-regular n={} d={} m={} seed={} out={}",
        graph.n(),
        args.d,
        graph.m(),
        args.seed,
        args.out.display()
    );
    Ok(Ok(()))
}

fn gen_er(args: GenErArgs) -> Result<Result<(), CapHit>> {
    let graph = gen_erdos_renyi(args.n, args.d, args.seed)?;
    save_graph(&graph, &args.out)?;
    println!(
        "gen-er n={} d={} m={} seed={} out={}",
        graph.n(),
        args.d,
        graph.m(),
        args.seed,
        args.out.display()
    );
    Ok(Ok(()))
}

/// Trajectory sink that remembers the first write error.
struct Dump {
    writer: Option<BufWriter<File>>,
    error: Option<io::Error>,
}

impl Dump {
    fn open(path: Option<&Path>) -> Result<Self> {
        let writer = path
            .map(|p| File::create(p).with_context(|| format!("creating {}", p.display())))
            .transpose()?
            .map(BufWriter::new);
        Ok(Self {
            writer,
            error: None,
        })
    }

    fn record(&mut self, t: usize, state: &SpinState) {
        if let (Some(w), None) = (self.writer.as_mut(), self.error.as_ref()) {
            if let Err(e) = writeln!(w, "{}", format_trajectory_line(t, state)) {
                self.error = Some(e);
            }
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(e) = self.error {
            return Err(e).context("writing trajectory");
        }
        if let Some(mut w) = self.writer {
            w.flush().context("writing trajectory")?;
        }
        Ok(())
    }
}

fn run(args: RunArgs) -> Result<Result<(), CapHit>> {
    if args.k.is_some() && args.dynamics != DynamicsKind::Md0 {
        bail!("--k only applies to --dynamics md0");
    }
    if args.max_steps == Some(0) {
        bail!("--max-steps must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let graph = match (&args.graph, args.n, args.d) {
        (Some(path), _, _) => {
            read_edge_list(path).with_context(|| format!("reading {}", path.display()))?
        }
        (None, Some(n), Some(d)) => random_regular_with_rng(n, d, RegularSampler::Auto, &mut rng)?,
        _ => bail!("either --graph or both --n and --d are required"),
    };
    let initial = SpinState::random(graph.n(), &mut rng);
    let max_steps = args.max_steps.unwrap_or_else(|| default_max_steps(&graph));
    let mut dump = Dump::open(args.dump_trajectory.as_deref())?;

    let (final_state, outcome) = match (args.dynamics, args.k) {
        (DynamicsKind::Md, _) | (DynamicsKind::Md0, None) => {
            let stepper = if args.dynamics == DynamicsKind::Md {
                Stepper::Md
            } else {
                Stepper::Md0
            };
            let result =
                run_to_limit_cycle_observed(&graph, &initial, stepper, max_steps, |t, x| {
                    dump.record(t, x)
                });
            match result {
                Ok(cycle) => {
                    let line = cycle_summary(&graph, stepper, &cycle)?;
                    println!("{line}");
                    (cycle.state_a, Ok(()))
                }
                Err(DynamicsError::NonConvergence { steps, last, .. }) => {
                    println!(
                        "{stepper} n={} m={} cap_hit=1 steps={steps}",
                        graph.n(),
                        graph.m()
                    );
                    (last, Err(CapHit))
                }
                Err(e) => return Err(e.into()),
            }
        }
        (DynamicsKind::Md0, Some(k)) => {
            let mut cur = initial;
            dump.record(0, &cur);
            for t in 1..=k {
                cur = step(Stepper::Md0, &graph, &cur)?;
                dump.record(t, &cur);
            }
            // the core test needs a regular graph; leave it blank otherwise
            let core = match graph.regular_degree() {
                Some(_) => {
                    u8::from(has_positive_core(&graph, &cur.zeros_to_negative())?).to_string()
                }
                None => String::new(),
            };
            println!(
                "md0 n={} m={} k={k} plus={} zero={} minus={} positive_core={core}",
                graph.n(),
                graph.m(),
                cur.count(1),
                cur.count(0),
                cur.count(-1),
            );
            (cur, Ok(()))
        }
        (DynamicsKind::Swap, _) => {
            let mut process = SwapProcess::new(&graph, initial)?;
            dump.record(0, process.state());
            let mut capped = false;
            while !process.is_finished() {
                if process.steps() >= max_steps {
                    capped = true;
                    break;
                }
                process.step(&mut rng);
                dump.record(process.steps(), process.state());
            }
            let internal = is_internal_cut(&graph, process.state());
            println!(
                "swap n={} m={} steps={} cut={} internal_cut={}{}",
                graph.n(),
                graph.m(),
                process.steps(),
                process.cut_size(),
                u8::from(internal),
                if capped { " cap_hit=1" } else { "" }
            );
            let outcome = if capped { Err(CapHit) } else { Ok(()) };
            (process.into_state(), outcome)
        }
    };
    dump.finish()?;
    if let Some(path) = &args.out {
        fs::write(path, format!("{final_state}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(outcome)
}

fn cycle_summary(graph: &Graph, stepper: Stepper, cycle: &LimitCycle) -> Result<String> {
    let mut line = format!(
        "{stepper} n={} m={} period={} T={} oscillating={} fraction={:.6}",
        graph.n(),
        graph.m(),
        cycle.period,
        cycle.t_converge,
        cycle.oscillating_count(),
        cycle.oscillating_fraction(),
    );
    if stepper == Stepper::Md && graph.regular_degree().is_some() {
        let core = has_positive_core(graph, &cycle.state_a)?;
        line.push_str(&format!(" positive_core={}", u8::from(core)));
    }
    Ok(line)
}

fn experiment(args: ExperimentArgs) -> Result<Result<(), CapHit>> {
    if args.census_out.is_some() && args.kind != ExperimentKind::Md0TypeCensus {
        bail!("--census-out only applies to --kind md0-type-census");
    }
    if args.max_steps == Some(0) {
        bail!("--max-steps must be at least 1");
    }
    let mut config = ExperimentConfig::new(args.kind, args.seed)
        .with_points(&args.d, &args.n)
        .with_trials(args.trials)
        .with_k_values(&args.k)
        .with_checkpoints(&args.checkpoints);
    config.max_steps = args.max_steps;
    config.sampler = args.sampler.into();
    config.validate()?;

    let records = run_experiment(&config, args.workers.map(|w| w as usize))?;
    let file =
        File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_records_csv(BufWriter::new(file), &records)
        .with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(path) = &args.census_out {
        fs::write(path, aggregate_census(&records).to_csv())
            .with_context(|| format!("writing {}", path.display()))?;
    }

    for group in summarize(&records) {
        eprintln!("{group}");
    }
    let cap_hits = records.iter().filter(|r| r.cap_hit).count();
    println!(
        "experiment kind={} points={} trials={} rows={} cap_hits={cap_hits} out={}",
        config.kind,
        config.d_values.len() * config.n_values.len(),
        config.trials,
        records.len(),
        args.out.display()
    );
    Ok(if cap_hits > 0 { Err(CapHit) } else { Ok(()) })
}

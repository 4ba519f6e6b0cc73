use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crpla::channel::{load_map, save_map, ChannelMap};
use crpla::error::{Error, Result};
use crpla::policy::{solve_value_iteration, PolicyKind, PolicyTable, PositionPolicy};
use crpla::rng::{stream_rng, Stream};
use crpla::sim::{
    build_policies, build_policy, compare_with, emit_figure_data, run_det_experiment, run_episode,
    trajectory_rows, write_csv, EpisodeRngs, EpisodeSummary, ExperimentConfig, FigureData,
    TraceRow,
};

#[derive(Parser)]
#[command(name = "crpla", version, about = "Challenge-response physical-layer authentication simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration (defaults apply to missing keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides `master_seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct MapArg {
    /// Load a saved map instead of synthesizing one from the config.
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the attenuation map (map.json, map.csv).
    GenMap {
        #[command(flatten)]
        common: Common,
    },
    /// Analytic vs simulated FA/MD curves (det.csv).
    Det {
        #[command(flatten)]
        common: Common,
    },
    /// Solve or tabulate one policy (policy_<kind>.csv, solver_log.csv).
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_parser = parse_policy)]
        policy: PolicyKind,
        /// Protocol step at which time-dependent policies are tabulated.
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Run protocol episodes with one policy (trace.csv, summary.csv).
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArg,
        /// Overrides `policy` from the config.
        #[arg(long, value_parser = parse_policy)]
        policy: Option<PolicyKind>,
    },
    /// Compare all policies on common random numbers (energy.csv, trajectory.csv).
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArg,
    },
}

fn parse_policy(s: &str) -> std::result::Result<PolicyKind, String> {
    s.parse::<PolicyKind>().map_err(|e| e.to_string())
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.master_seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn obtain_map(cfg: &ExperimentConfig, arg: &MapArg) -> Result<ChannelMap> {
    match &arg.map {
        Some(path) => load_map(path),
        None => cfg.build_map(),
    }
}

fn create_out(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.to_path_buf(),
        source,
    })
}

#[derive(serde::Serialize)]
struct SummaryRow {
    policy: String,
    episodes: usize,
    steps: usize,
    legit: usize,
    false_alarms: usize,
    fa_rate: Option<f64>,
    attacks: usize,
    missed: usize,
    md_rate: Option<f64>,
    total_energy_j: f64,
    mean_step_energy_j: f64,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenMap { common } => {
            let cfg = load_config(&common)?;
            let map = cfg.build_map()?;
            create_out(&common.out)?;
            save_map(&map, &common.out.join("map.json"))?;
            emit_figure_data(FigureData::Map(&map), &common.out)?;
        }
        Command::Det { common } => {
            let cfg = load_config(&common)?;
            let rows = run_det_experiment(&cfg)?;
            emit_figure_data(FigureData::Det(&rows), &common.out)?;
        }
        Command::Solve {
            common,
            map,
            policy,
            t,
        } => {
            let cfg = load_config(&common)?;
            let map = obtain_map(&cfg, &map)?;
            create_out(&common.out)?;
            let table = match policy {
                PolicyKind::ValueIteration => {
                    solve_value_iteration(&map, &cfg.energy, &cfg.value_iteration)?
                }
                _ => PolicyTable::tabulate(build_policy(&cfg, &map, policy)?.as_ref(), &map, t)?,
            };
            write_csv(
                &common.out.join(format!("policy_{policy}.csv")),
                &table.dump_rows(&map)?,
            )?;
            if policy == PolicyKind::ValueIteration {
                write_csv(&common.out.join("solver_log.csv"), &table.solver_log())?;
            }
        }
        Command::Simulate {
            common,
            map,
            policy,
        } => {
            let cfg = load_config(&common)?;
            let map = obtain_map(&cfg, &map)?;
            create_out(&common.out)?;
            let kind = policy.unwrap_or(cfg.policy);
            let chosen = build_policy(&cfg, &map, kind)?;
            let verifier = cfg.verifier()?;
            let mut rows = Vec::new();
            let mut total = EpisodeSummary::default();
            for s in 0..cfg.num_starts {
                let mut schedule_rng = stream_rng(cfg.master_seed, Stream::Schedule, s as u64);
                let schedule = cfg.attack_schedule.flags(cfg.episode_len, &mut schedule_rng);
                let mut rngs = EpisodeRngs::for_start(cfg.master_seed, s as u64);
                let trace = run_episode(
                    &map,
                    chosen.as_ref(),
                    &cfg.energy,
                    &verifier,
                    &schedule,
                    &mut rngs,
                )?;
                total += trace.summary();
                rows.extend(TraceRow::from_trace(s, &trace, &map));
            }
            write_csv(&common.out.join("trace.csv"), &rows)?;
            let steps = cfg.num_starts * cfg.episode_len;
            let rate = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
            write_csv(
                &common.out.join("summary.csv"),
                &[SummaryRow {
                    policy: kind.to_string(),
                    episodes: cfg.num_starts,
                    steps,
                    legit: total.legit,
                    false_alarms: total.false_alarms,
                    fa_rate: rate(total.false_alarms, total.legit),
                    attacks: total.attacks,
                    missed: total.missed,
                    md_rate: rate(total.missed, total.attacks),
                    total_energy_j: total.total_energy,
                    mean_step_energy_j: total.total_energy / steps as f64,
                }],
            )?;
        }
        Command::Compare { common, map } => {
            let cfg = load_config(&common)?;
            let map = obtain_map(&cfg, &map)?;
            let built = build_policies(&cfg, &map)?;
            let refs: Vec<&dyn PositionPolicy> = built.iter().map(|p| p.as_ref()).collect();
            let cmp = compare_with(&cfg, &map, &refs)?;
            emit_figure_data(FigureData::Energy(&cmp.energy_rows()), &common.out)?;
            emit_figure_data(
                FigureData::Trajectory(&trajectory_rows(&cmp, &map, 0)),
                &common.out,
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 1 } else { 2 })
        }
    }
}

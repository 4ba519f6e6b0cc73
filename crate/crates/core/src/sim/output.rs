use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::compare::{Comparison, EnergyRow};
use super::config::ExperimentConfig;
use super::episode::EpisodeTrace;
use crate::auth::{analytic_pmd, simulate_det};
use crate::channel::{write_map_csv, ChannelMap};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// Writes `rows` as CSV with a header row.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetRow {
    pub r_db: f64,
    pub p_fa_target: f64,
    pub p_fa_emp: f64,
    pub p_md_analytic: f64,
    pub p_md_emp: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Analytic and simulated DET points for every configured range.
pub fn run_det_experiment(config: &ExperimentConfig) -> Result<Vec<DetRow>> {
    let det = &config.det;
    let mut rows = Vec::new();
    for (i, &r) in det.r_grid.iter().enumerate() {
        let mut rng = stream_rng(config.master_seed, Stream::Det, i as u64);
        for point in simulate_det(r, &det.p_fa_grid, det.trials, &mut rng)? {
            rows.push(DetRow {
                r_db: r,
                p_fa_target: point.p_fa_target,
                p_fa_emp: point.p_fa_empirical,
                p_md_analytic: analytic_pmd(r, point.p_fa_target)?,
                p_md_emp: point.p_md_empirical,
                trials: det.trials,
                seed: config.master_seed,
            });
        }
    }
    Ok(rows)
}

/// Position of one policy at one step; `t = 0` is the shared start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub policy: String,
    pub t: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub challenge_db: Option<f64>,
    pub energy_j: f64,
}

/// Trajectories of every compared policy from random start `start`.
pub fn trajectory_rows(cmp: &Comparison, map: &ChannelMap, start: usize) -> Vec<TrajectoryRow> {
    let mut rows = Vec::new();
    for (kind, traces) in cmp.kinds.iter().zip(&cmp.traces) {
        let trace = &traces[start];
        let (x_m, y_m) = map.grid.coords(trace.start);
        rows.push(TrajectoryRow {
            policy: kind.to_string(),
            t: 0,
            x_m,
            y_m,
            challenge_db: None,
            energy_j: 0.0,
        });
        for s in &trace.steps {
            let (x_m, y_m) = map.grid.coords(s.to);
            rows.push(TrajectoryRow {
                policy: kind.to_string(),
                t: s.t,
                x_m,
                y_m,
                challenge_db: Some(s.challenge),
                energy_j: s.energy,
            });
        }
    }
    rows
}

/// Flat per-step record of a simulated episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub start: usize,
    pub t: usize,
    pub challenge_db: f64,
    pub from_x: f64,
    pub from_y: f64,
    pub to_x: f64,
    pub to_y: f64,
    pub energy_j: f64,
    pub observed_db: f64,
    pub hypothesis: String,
    pub decision: String,
}

impl TraceRow {
    pub fn from_trace(start: usize, trace: &EpisodeTrace, map: &ChannelMap) -> Vec<TraceRow> {
        trace
            .steps
            .iter()
            .map(|s| {
                let (from_x, from_y) = map.grid.coords(s.from);
                let (to_x, to_y) = map.grid.coords(s.to);
                TraceRow {
                    start,
                    t: s.t,
                    challenge_db: s.challenge,
                    from_x,
                    from_y,
                    to_x,
                    to_y,
                    energy_j: s.energy,
                    observed_db: s.observed,
                    hypothesis: format!("{:?}", s.hypothesis).to_lowercase(),
                    decision: format!("{:?}", s.decision).to_lowercase(),
                }
            })
            .collect()
    }
}

/// Figure data sets that can be written to an output directory.
#[derive(Debug, Clone, Copy)]
pub enum FigureData<'a> {
    /// Channel realization: `map.csv`.
    Map(&'a ChannelMap),
    /// DET curves: `det.csv`.
    Det(&'a [DetRow]),
    /// Example trajectories: `trajectory.csv`.
    Trajectory(&'a [TrajectoryRow]),
    /// Average energy per step: `energy.csv`.
    Energy(&'a [EnergyRow]),
}

/// Writes the CSV for `data` into `out_dir` and returns the file path.
pub fn emit_figure_data(data: FigureData<'_>, out_dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let path = match data {
        FigureData::Map(map) => {
            let path = out_dir.join("map.csv");
            let file = File::create(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            write_map_csv(map, BufWriter::new(file)).map_err(|source| Error::Csv {
                path: path.clone(),
                source,
            })?;
            path
        }
        FigureData::Det(rows) => {
            let path = out_dir.join("det.csv");
            write_csv(&path, rows)?;
            path
        }
        FigureData::Trajectory(rows) => {
            let path = out_dir.join("trajectory.csv");
            write_csv(&path, rows)?;
            path
        }
        FigureData::Energy(rows) => {
            let path = out_dir.join("energy.csv");
            write_csv(&path, rows)?;
            path
        }
    };
    Ok(path)
}

//! Experiment orchestration: configuration, protocol episodes, policy
//! comparison and CSV output.

mod compare;
mod config;
mod episode;
mod output;

pub use compare::{build_policies, build_policy, compare_policies, compare_with, Comparison, EnergyRow};
pub use config::{
    AttackSchedule, DetSettings, ExperimentConfig, ShadowingSettings, StrategicSettings,
    VerifierSettings,
};
pub use episode::{run_episode, EpisodeRngs, EpisodeSummary, EpisodeTrace, StepRecord};
pub use output::{
    emit_figure_data, run_det_experiment, trajectory_rows, write_csv, DetRow, FigureData,
    TraceRow, TrajectoryRow,
};

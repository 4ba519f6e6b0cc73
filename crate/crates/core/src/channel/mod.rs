//! Gridded flight region, attenuation map synthesis and challenge classes.

mod grid;
mod io;
mod map;
mod pathloss;
mod shadowing;

pub use grid::{GridSpec, SPEED_OF_LIGHT};
pub use io::{load_map, save_map, write_map_csv, MapFile, MapCsvRow};
pub use map::{attenuation_range, build_channel_map, ChallengeClass, ChannelMap, Quantizer};
pub use pathloss::{free_space_path_loss_db, friis_path_loss};
pub use shadowing::{gudmundson_corr, shadowing_filter, synthesize_shadowing, ShadowingParams};

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::map::ChannelMap;
use super::shadowing::ShadowingParams;
use crate::error::{Error, Result};

const FORMAT: &str = "crpla-map";
const VERSION: u32 = 1;

/// On-disk map representation (JSON).
///
/// `eta` is row-major float64 dB; the quantization is rebuilt on load and
/// checked against the stored `levels`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub format: String,
    pub version: u32,
    pub grid: GridSpec,
    pub shadowing: Option<ShadowingParams>,
    pub num_levels: usize,
    pub eta: Vec<f64>,
    pub levels: Vec<f64>,
}

impl MapFile {
    pub fn from_map(map: &ChannelMap) -> Self {
        MapFile {
            format: FORMAT.to_string(),
            version: VERSION,
            grid: map.grid,
            shadowing: map.shadowing,
            num_levels: map.quantizer.num_levels,
            eta: map.eta.clone(),
            levels: map.levels.clone(),
        }
    }

    pub fn into_map(self) -> Result<ChannelMap> {
        if self.format != FORMAT || self.version != VERSION {
            return Err(Error::MalformedMap(format!(
                "unsupported format {} v{}",
                self.format, self.version
            )));
        }
        let mut map = ChannelMap::from_eta(self.grid, self.eta, self.num_levels)
            .map_err(|e| Error::MalformedMap(e.to_string()))?;
        let same = map.levels.len() == self.levels.len()
            && map
                .levels
                .iter()
                .zip(&self.levels)
                .all(|(a, b)| a.to_bits() == b.to_bits());
        if !same {
            return Err(Error::MalformedMap(
                "stored quantizer levels do not match the attenuation data".into(),
            ));
        }
        map.shadowing = self.shadowing;
        Ok(map)
    }
}

pub fn save_map(map: &ChannelMap, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, &MapFile::from_map(map)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_map(path: &Path) -> Result<ChannelMap> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed: MapFile =
        serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
    parsed.into_map()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapCsvRow {
    pub x_m: f64,
    pub y_m: f64,
    pub eta_db: f64,
    pub quantized_db: f64,
}

/// Writes one row per position: `x_m,y_m,eta_db,quantized_db`.
pub fn write_map_csv<W: Write>(map: &ChannelMap, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for k in 0..map.len() {
        let (x_m, y_m) = map.grid.coords(k);
        w.serialize(MapCsvRow {
            x_m,
            y_m,
            eta_db: map.eta[k],
            quantized_db: map.quantized[k],
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::build_channel_map;

    fn small_map() -> ChannelMap {
        let g = GridSpec::new(6, 5, 1.0, 20.0, 1.8e9).unwrap();
        let p = ShadowingParams::new(6.0, 1.5, 9).unwrap();
        build_channel_map(&g, &p, 4).unwrap()
    }

    #[test]
    fn save_load_is_bit_exact() {
        let map = small_map();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.json");
        save_map(&map, &path).unwrap();
        let back = load_map(&path).unwrap();
        assert_eq!(back, map);
        assert!(back
            .eta
            .iter()
            .zip(&map.eta)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn tampered_levels_are_rejected() {
        let mut file = MapFile::from_map(&small_map());
        file.levels[0] += 1e-9;
        assert!(matches!(file.into_map(), Err(Error::MalformedMap(_))));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_map(Path::new("/nonexistent/map.json")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/map.json"));
    }

    #[test]
    fn csv_has_one_row_per_position() {
        let map = small_map();
        let mut buf = Vec::new();
        write_map_csv(&map, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x_m,y_m,eta_db,quantized_db"));
        assert_eq!(lines.count(), map.len());
    }
}

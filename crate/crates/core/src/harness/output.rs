use std::path::{Path, PathBuf};

use serde::Serialize;

use super::bench::{MethodSummary, SweepRow};
use crate::engine::EpisodeRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "method",
    "seed",
    "episode",
    "se_bpshz",
    "objective",
    "energy",
    "latency_ms",
    "paths",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
}

/// Layers separated by `;`, path indices within a layer by spaces.
pub fn format_paths(paths: &[Vec<usize>]) -> String {
    paths
        .iter()
        .map(|layer| layer.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_csv(path: &Path, records: &[EpisodeRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_error(path, e))?;
    for r in records {
        w.write_record([
            r.method.clone(),
            r.seed.to_string(),
            r.episode.to_string(),
            r.spectral_efficiency.to_string(),
            r.objective.to_string(),
            r.energy.to_string(),
            r.latency_ms.to_string(),
            format_paths(&r.selected_paths),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn prepare(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Write `episodes.csv` and `summary.json` into `dir`, creating it if needed.
pub fn emit_results(
    records: &[EpisodeRecord],
    summaries: &[MethodSummary],
    dir: impl AsRef<Path>,
) -> Result<ResultFiles> {
    let dir = dir.as_ref();
    prepare(dir)?;
    let files = ResultFiles {
        csv: dir.join("episodes.csv"),
        json: dir.join("summary.json"),
    };
    write_csv(&files.csv, records)?;
    write_json(&files.json, &summaries)?;
    Ok(files)
}

/// Write one `episodes_<axis>_<value>.csv` per sweep point and a combined
/// `sweep.json`. Returns the JSON path.
pub fn emit_sweep(rows: &[SweepRow], dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    prepare(dir)?;
    for row in rows {
        let axis = serde_json::to_value(row.axis)?;
        let name = format!("episodes_{}_{}.csv", axis.as_str().unwrap_or("axis"), row.value);
        write_csv(&dir.join(name), &row.records)?;
    }
    let json = dir.join("sweep.json");
    write_json(&json, &rows)?;
    Ok(json)
}

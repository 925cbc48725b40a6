//! Directory benchmarking with PAR-2 scoring: unsolved instances count as
//! twice the timeout, unreadable files are excluded with a warning.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use skolem_core::engine::Config;

use crate::qdimacs;
use crate::runner::WallClock;

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub instance: String,
    pub status: String,
    pub time_s: f64,
    pub unates: u32,
    pub unique: u32,
    pub learned: u32,
    pub repaired: u32,
    pub self_substituted: u32,
}

impl BenchRow {
    pub fn solved(&self) -> bool {
        self.status.starts_with("solved")
    }

    pub fn is_error(&self) -> bool {
        self.status == "error"
    }
}

/// Penalized average runtime: mean over non-error rows of the runtime for
/// solved instances and `2 × timeout` otherwise.
pub fn par2(rows: &[BenchRow], timeout_s: f64) -> Option<f64> {
    let scored: Vec<f64> = rows
        .iter()
        .filter(|r| !r.is_error())
        .map(|r| if r.solved() { r.time_s } else { 2.0 * timeout_s })
        .collect();
    if scored.is_empty() {
        return None;
    }
    Some(scored.iter().sum::<f64>() / scored.len() as f64)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "instance,status,time_s,unates,unique,learned,repaired,self_substituted\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.3},{},{},{},{},{}",
            r.instance,
            r.status,
            r.time_s,
            r.unates,
            r.unique,
            r.learned,
            r.repaired,
            r.self_substituted
        );
    }
    out
}

/// Runs every `*.qdimacs` file in `dir` (sorted by name) under the given
/// configuration. Returns the rows plus warnings for unreadable files.
pub fn run_dir(dir: &Path, cfg: &Config) -> (Vec<BenchRow>, Vec<String>) {
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "qdimacs"))
            .collect(),
        Err(e) => {
            warnings.push(format!("cannot read {}: {e}", dir.display()));
            return (rows, warnings);
        }
    };
    files.sort();
    for path in files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let error_row = |msg: String, warnings: &mut Vec<String>| {
            warnings.push(format!("{name}: {msg}"));
            BenchRow {
                instance: name.clone(),
                status: "error".into(),
                time_s: 0.0,
                unates: 0,
                unique: 0,
                learned: 0,
                repaired: 0,
                self_substituted: 0,
            }
        };
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                rows.push(error_row(e.to_string(), &mut warnings));
                continue;
            }
        };
        let spec = match qdimacs::parse(&text) {
            Ok(s) => s,
            Err(e) => {
                rows.push(error_row(e.to_string(), &mut warnings));
                continue;
            }
        };
        let start = Instant::now();
        let clock = WallClock::new();
        match skolem_core::synthesize(&spec, cfg, &clock) {
            Ok(res) => rows.push(BenchRow {
                instance: name,
                status: res.stats.status.as_str().into(),
                time_s: start.elapsed().as_secs_f64(),
                unates: res.stats.unates,
                unique: res.stats.unique,
                learned: res.stats.learned,
                repaired: res.stats.repaired,
                self_substituted: res.stats.self_substituted,
            }),
            Err(e) => rows.push(error_row(e.to_string(), &mut warnings)),
        }
    }
    (rows, warnings)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(status: &str, time_s: f64) -> BenchRow {
        BenchRow {
            instance: "i".into(),
            status: status.into(),
            time_s,
            unates: 0,
            unique: 0,
            learned: 0,
            repaired: 0,
            self_substituted: 0,
        }
    }

    #[test]
    fn par2_definition() {
        let rows = [row("solved-prerepair", 10.0), row("timeout", 100.0)];
        assert_eq!(par2(&rows, 100.0), Some(105.0));
    }

    #[test]
    fn par2_empty_and_errors() {
        assert_eq!(par2(&[], 100.0), None);
        let rows = [row("error", 0.0), row("solved-repair", 4.0)];
        assert_eq!(par2(&rows, 100.0), Some(4.0));
    }
}

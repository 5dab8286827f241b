//! Output files: atomic writes, CSV tables and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ptchain::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::parse::Range;

pub const MANIFEST: &str = "manifest.json";

/// Writes `contents` to a temporary sibling and renames it into place, so an
/// interrupted run never leaves a partial file under the final name.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map(|_| target)
}

/// Shortest round-trip decimal for a float, switching to exponent notation
/// outside `[1e-5, 1e16)` so tiny values stay short. Negative zero prints as
/// `0`.
#[derive(Debug, Clone, Copy)]
pub struct F(pub f64);

impl std::fmt::Display for F {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 {
            f.write_str("0")
        } else if (1e-5..1e16).contains(&a) || !a.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

/// A CSV table with a header row and LF line endings.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, fields: &[&dyn std::fmt::Display]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            write!(self.buf, "{f}").unwrap();
        }
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    /// One model point, no scan.
    Point,
    Sweep {
        axis: ptchain::SweepAxis,
        start: f64,
        stop: f64,
        steps: usize,
    },
    PhaseMap {
        mu: RangeRecord,
        gamma: RangeRecord,
    },
    CriticalGamma {
        gamma_hi: f64,
        scan_step: f64,
        refine_tol: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RangeRecord {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl From<Range> for RangeRecord {
    fn from(r: Range) -> Self {
        RangeRecord { start: r.start, stop: r.stop, steps: r.steps }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Conventions {
    pub staggered_potential: String,
    pub end_cap_potential: String,
    pub eigenvectors: String,
    pub csv_floats: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            staggered_potential: "i*gamma*(-1)^n with 1-based site n (loss on site 1)".into(),
            end_cap_potential: "+i*gamma on site 1, -i*gamma on site N".into(),
            eigenvectors: "right eigenvectors, unit 2-norm, largest component real positive".into(),
            csv_floats: "shortest round-trip decimal".into(),
        }
    }
}

/// Everything needed to reproduce a run. Parameters that a scan overrides
/// are dropped from `model` and live only in `grid`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub model: Value,
    pub tolerances: Tolerances,
    pub grid: Grid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<String>,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    pub conventions: Conventions,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> io::Result<PathBuf> {
        let mut json = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        json.push('\n');
        write_atomic(dir, MANIFEST, json.as_bytes())
    }

    pub fn read(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }
}

//! Configuration files and scaling experiments.
//!
//! File format: a `# sticky-disc v1` header, optional `# key=value` lines,
//! then one `m n` pair per line.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::configuration::Configuration;
use crate::constructors::{degenerate, hexagon, spiral};
use crate::error::{Error, Result};
use crate::formula::{hexagonal_number, max_bond_formula};
use crate::lattice::LatticeSite;
use crate::shape::{fit_hexagon, fit_scaling_exponent, flat_norm_proxy};

pub const HEADER: &str = "# sticky-disc v1";

pub const CSV_HEADER: &str = "k,N,family,bonds,formula_bonds,deviation_count,flat_norm_proxy,wall_time_ms";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    pub metadata: Vec<(String, String)>,
    pub sites: Vec<LatticeSite>,
}

impl ConfigFile {
    pub fn new(config: &Configuration) -> Self {
        ConfigFile { metadata: Vec::new(), sites: config.sites().to_vec() }
    }

    pub fn with_meta(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn configuration(&self) -> Result<Configuration> {
        Configuration::new(self.sites.iter().copied())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let header = lines.by_ref().find(|(_, l)| !l.is_empty());
        match header {
            Some((_, HEADER)) => {}
            Some((line, other)) => {
                return Err(Error::Parse { line, message: format!("expected '{HEADER}', found '{other}'") })
            }
            None => return Err(Error::Parse { line: 1, message: format!("missing '{HEADER}' header") }),
        }
        let mut out = ConfigFile::default();
        let mut seen = std::collections::HashSet::new();
        for (line, l) in lines {
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix('#') {
                let Some((k, v)) = rest.trim().split_once('=') else {
                    return Err(Error::Parse { line, message: format!("metadata must be 'key=value': '{l}'") });
                };
                out.metadata.push((k.trim().to_string(), v.trim().to_string()));
                continue;
            }
            let mut parts = l.split_whitespace();
            let parse = |p: Option<&str>| -> Result<i64> {
                let p = p.ok_or_else(|| Error::Parse { line, message: format!("expected 'm n', found '{l}'") })?;
                i64::from_str(p).map_err(|e| Error::Parse { line, message: format!("'{p}': {e}") })
            };
            let (m, n) = (parse(parts.next())?, parse(parts.next())?);
            if parts.next().is_some() {
                return Err(Error::Parse { line, message: format!("expected 'm n', found '{l}'") });
            }
            let s = LatticeSite::new(m, n);
            if !seen.insert(s) {
                return Err(Error::Parse { line, message: format!("duplicate site {s}") });
            }
            out.sites.push(s);
        }
        Ok(out)
    }

    pub fn serialize(&self) -> String {
        let mut s = String::with_capacity(12 * self.sites.len() + 32);
        s.push_str(HEADER);
        s.push('\n');
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}={v}");
        }
        for p in &self.sites {
            let _ = writeln!(s, "{} {}", p.m, p.n);
        }
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.serialize())?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Spiral,
    Degenerate,
    Hexagon,
    File,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Spiral => "spiral",
            Family::Degenerate => "degenerate",
            Family::Hexagon => "hexagon",
            Family::File => "file",
        }
    }

    /// The family member indexed by hexagon radius `k`.
    pub fn build(self, k: i64) -> Result<Configuration> {
        match self {
            Family::Spiral if k >= 0 => spiral(hexagonal_number(k as u64)),
            Family::Spiral => Err(Error::OutOfRange(format!("k={k} < 0"))),
            Family::Degenerate => Ok(degenerate(k)?.config),
            Family::Hexagon => hexagon(k),
            Family::File => Err(Error::Precondition("file family has no parameter".into())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spiral" => Ok(Family::Spiral),
            "degenerate" => Ok(Family::Degenerate),
            "hexagon" => Ok(Family::Hexagon),
            "file" => Ok(Family::File),
            _ => Err(Error::OutOfRange(format!("unknown family '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub k: i64,
    pub n: u64,
    pub family: Family,
    pub bonds: u64,
    pub formula_bonds: u64,
    pub deviation_count: u64,
    pub flat_norm_proxy: f64,
    pub wall_time_ms: u64,
}

impl ExperimentRecord {
    pub fn measure(k: i64, family: Family, config: &Configuration) -> Result<Self> {
        let fit = fit_hexagon(config)?;
        let proxy = flat_norm_proxy(config, &fit)?;
        Ok(ExperimentRecord {
            k,
            n: config.len() as u64,
            family,
            bonds: config.bond_count(),
            formula_bonds: max_bond_formula(config.len() as u64)?,
            deviation_count: fit.deviation_count,
            flat_norm_proxy: proxy.value,
            wall_time_ms: 0,
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.9},{}",
            self.k,
            self.n,
            self.family,
            self.bonds,
            self.formula_bonds,
            self.deviation_count,
            self.flat_norm_proxy,
            self.wall_time_ms
        )
    }
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    /// One entry per requested `k`, ascending; failed rows keep their reason.
    pub rows: Vec<(i64, std::result::Result<ExperimentRecord, String>)>,
    pub exponent: std::result::Result<f64, String>,
}

impl ScalingReport {
    pub fn records(&self) -> impl Iterator<Item = &ExperimentRecord> {
        self.rows.iter().filter_map(|(_, r)| r.as_ref().ok())
    }

    /// `exponent=<slope>`, or the reason the fit was skipped.
    pub fn summary(&self) -> String {
        match &self.exponent {
            Ok(e) => format!("exponent={e:.6}"),
            Err(reason) => format!("exponent=skipped ({reason})"),
        }
    }

    /// Header, successful rows, then the summary as a comment line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in self.records() {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        let _ = writeln!(s, "# {}", self.summary());
        s
    }
}

/// Which `k` between the bounds to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Progression {
    Every,
    Doubling,
}

pub fn k_values(k_min: i64, k_max: i64, progression: Progression) -> Vec<i64> {
    match progression {
        Progression::Every => (k_min..=k_max).collect(),
        Progression::Doubling => std::iter::successors(Some(k_min), |&k| Some(2 * k)).take_while(|&k| k <= k_max).collect(),
    }
}

/// Builds and measures each family member in parallel; rows come back in
/// ascending `k` whatever the completion order. With `timing` off the
/// wall-time column is zero so output is reproducible byte for byte.
pub fn run_scaling_experiment(family: Family, ks: &[i64], timing: bool) -> Result<ScalingReport> {
    if matches!(family, Family::File) {
        return Err(Error::Precondition("scaling needs a parametrized family".into()));
    }
    if ks.is_empty() {
        return Err(Error::OutOfRange("no k values".into()));
    }
    if let Some(&k) = ks.iter().find(|&&k| k < 2) {
        return Err(Error::OutOfRange(format!("k={k} < 2")));
    }
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let rows: Vec<_> = ks
        .par_iter()
        .map(|&k| {
            let start = Instant::now();
            let row = family.build(k).and_then(|c| ExperimentRecord::measure(k, family, &c)).map(|mut r| {
                if timing {
                    r.wall_time_ms = start.elapsed().as_millis() as u64;
                }
                r
            });
            (k, row.map_err(|e| e.to_string()))
        })
        .collect();
    let points: Vec<(f64, f64)> =
        rows.iter().filter_map(|(_, r)| r.as_ref().ok()).map(|r| (r.n as f64, r.deviation_count as f64)).collect();
    let exponent = if points.iter().any(|p| p.1 == 0.0) {
        Err("zero deviations".to_string())
    } else {
        fit_scaling_exponent(&points).map(|f| f.exponent).map_err(|e| e.to_string())
    };
    Ok(ScalingReport { rows, exponent })
}

//! Sparse point-target scenes and their CSV serialization
//! (`azimuth_index, range_index, re, im`, one target per line).

use std::collections::HashSet;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTarget {
    pub azimuth_index: usize,
    pub range_index: usize,
    pub reflectivity: Complex64,
}

#[derive(Debug, Clone, Default)]
pub struct PointScene {
    pub targets: Vec<PointTarget>,
}

impl PointScene {
    pub fn new(targets: Vec<PointTarget>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &targets {
            if !seen.insert((t.azimuth_index, t.range_index)) {
                return Err(Error::InvalidParams(format!(
                    "duplicate target position ({}, {})",
                    t.azimuth_index, t.range_index
                )));
            }
        }
        Ok(Self { targets })
    }

    pub fn check_in_grid(&self, rows: usize, cols: usize) -> Result<()> {
        for t in &self.targets {
            if t.azimuth_index >= rows || t.range_index >= cols {
                return Err(Error::IndexOutOfGrid {
                    row: t.azimuth_index,
                    col: t.range_index,
                    rows,
                    cols,
                });
            }
        }
        Ok(())
    }

    /// Targets in canonical (azimuth, range) order; fixes the summation
    /// order of the simulator.
    pub fn sorted_targets(&self) -> Vec<PointTarget> {
        let mut ts = self.targets.clone();
        ts.sort_by_key(|t| (t.azimuth_index, t.range_index));
        ts
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut targets = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::Format(format!(
                    "scene line {}: expected 4 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse_idx = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Format(format!("scene line {}: bad index", lineno + 1)))
            };
            let parse_f = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Format(format!("scene line {}: bad number", lineno + 1)))
            };
            targets.push(PointTarget {
                azimuth_index: parse_idx(fields[0])?,
                range_index: parse_idx(fields[1])?,
                reflectivity: Complex64::new(parse_f(fields[2])?, parse_f(fields[3])?),
            });
        }
        PointScene::new(targets)
    }

    pub fn from_csv_file(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for t in &self.targets {
            out.push_str(&format!(
                "{}, {}, {}, {}\n",
                t.azimuth_index, t.range_index, t.reflectivity.re, t.reflectivity.im
            ));
        }
        out
    }
}

//! Random sub-Nyquist sampling: azimuth row selection and per-kept-row
//! range sample selection, with the gather/scatter adjoint pair.
//!
//! Patterns are a pure function of (seed, dims, rates). Row indices are
//! drawn from a ChaCha8 stream with stream id 0; the columns of the k-th
//! kept row (in sorted row order) come from stream id k+1 of the same
//! seed, so patterns reproduce bit-for-bit on any platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::ComplexImage;

#[derive(Debug, Clone)]
pub struct SamplingPattern {
    pub kept_rows: Vec<usize>,
    /// Kept range columns for each entry of `kept_rows`, sorted.
    pub kept_cols_per_row: Vec<Vec<usize>>,
    pub raw_dims: (usize, usize),
    pub seed: u64,
    pub rates: (f64, f64),
}

/// Draw `count` distinct indices from `0..n`, sorted, by partial
/// Fisher-Yates.
fn draw_sorted(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    let mut picked = pool[..count].to_vec();
    picked.sort_unstable();
    picked
}

pub fn make_pattern(
    dims: (usize, usize),
    s_a: f64,
    s_r: f64,
    seed: u64,
) -> Result<SamplingPattern> {
    if !(s_a > 0.0 && s_a <= 1.0 && s_r > 0.0 && s_r <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "sampling rates must be in (0, 1], got ({s_a}, {s_r})"
        )));
    }
    let (n_az, n_rg) = dims;
    let n_rows = (s_a * n_az as f64).round() as usize;
    let n_cols = (s_r * n_rg as f64).round() as usize;
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::InvalidParams(format!(
            "sampling rates ({s_a}, {s_r}) keep zero samples on a {n_az}x{n_rg} grid"
        )));
    }
    let mut row_rng = ChaCha8Rng::seed_from_u64(seed);
    row_rng.set_stream(0);
    let kept_rows = draw_sorted(&mut row_rng, n_az, n_rows);
    let kept_cols_per_row = kept_rows
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let mut col_rng = ChaCha8Rng::seed_from_u64(seed);
            col_rng.set_stream(k as u64 + 1);
            draw_sorted(&mut col_rng, n_rg, n_cols)
        })
        .collect();
    Ok(SamplingPattern {
        kept_rows,
        kept_cols_per_row,
        raw_dims: dims,
        seed,
        rates: (s_a, s_r),
    })
}

impl SamplingPattern {
    pub fn measurement_len(&self) -> usize {
        self.kept_cols_per_row.iter().map(Vec::len).sum()
    }

    /// text header (dims, rates, seed) + `row: col col ...` per kept row
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "dims = {} {}\nrates = {} {}\nseed = {}\n",
            self.raw_dims.0, self.raw_dims.1, self.rates.0, self.rates.1, self.seed
        );
        for (row, cols) in self.kept_rows.iter().zip(&self.kept_cols_per_row) {
            out.push_str(&format!("{row}:"));
            for c in cols {
                out.push_str(&format!(" {c}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let parse_kv = |line: Option<&str>, key: &str| -> Result<Vec<String>> {
            let line = line.ok_or_else(|| Error::Format(format!("missing `{key}` line")))?;
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("bad `{key}` line")))?;
            if k.trim() != key {
                return Err(Error::Format(format!("expected `{key}`, got `{}`", k.trim())));
            }
            Ok(v.split_whitespace().map(str::to_string).collect())
        };
        let dims = parse_kv(lines.next(), "dims")?;
        let rates = parse_kv(lines.next(), "rates")?;
        let seed = parse_kv(lines.next(), "seed")?;
        let bad = |what: &str| Error::Format(format!("bad {what} in pattern header"));
        if dims.len() != 2 || rates.len() != 2 || seed.len() != 1 {
            return Err(bad("header"));
        }
        let raw_dims = (
            dims[0].parse().map_err(|_| bad("dims"))?,
            dims[1].parse().map_err(|_| bad("dims"))?,
        );
        let mut kept_rows = Vec::new();
        let mut kept_cols_per_row = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (row, cols) = line
                .split_once(':')
                .ok_or_else(|| Error::Format("bad pattern row line".into()))?;
            kept_rows.push(row.trim().parse().map_err(|_| bad("row index"))?);
            let cols: std::result::Result<Vec<usize>, _> =
                cols.split_whitespace().map(str::parse).collect();
            kept_cols_per_row.push(cols.map_err(|_| bad("column index"))?);
        }
        Ok(SamplingPattern {
            kept_rows,
            kept_cols_per_row,
            raw_dims,
            seed: seed[0].parse().map_err(|_| bad("seed"))?,
            rates: (
                rates[0].parse().map_err(|_| bad("rates"))?,
                rates[1].parse().map_err(|_| bad("rates"))?,
            ),
        })
    }
}

/// Gather kept samples in (row, col) lexicographic order.
pub fn subsample(y: &ComplexImage, p: &SamplingPattern) -> Result<Vec<Complex64>> {
    if (y.rows(), y.cols()) != p.raw_dims {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", p.raw_dims.0, p.raw_dims.1),
            got: format!("{}x{}", y.rows(), y.cols()),
        });
    }
    let mut out = Vec::with_capacity(p.measurement_len());
    for (row, cols) in p.kept_rows.iter().zip(&p.kept_cols_per_row) {
        let src = y.row(*row);
        for &c in cols {
            out.push(src[c]);
        }
    }
    Ok(out)
}

/// Scatter measurements back onto the raw grid, zeros elsewhere.
pub fn subsample_adjoint(m: &[Complex64], p: &SamplingPattern) -> Result<ComplexImage> {
    if m.len() != p.measurement_len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} measurements", p.measurement_len()),
            got: format!("{}", m.len()),
        });
    }
    let mut out = ComplexImage::zeros(p.raw_dims.0, p.raw_dims.1);
    let mut it = m.iter();
    for (row, cols) in p.kept_rows.iter().zip(&p.kept_cols_per_row) {
        let dst = out.row_mut(*row);
        for &c in cols {
            dst[c] = *it.next().unwrap();
        }
    }
    Ok(out)
}

/// Split an overall rate `s` into (s_a, s_r) honoring the azimuth:range
/// ratio `a:b`, with clipping at 1 pushed to the other axis so that
/// s_a * s_r = s holds.
pub fn split_rate(s: f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s <= 1.0) || !(a > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidParams(format!(
            "bad rate split: s = {s}, ratio = {a}:{b}"
        )));
    }
    let mut s_a = (s * a / b).sqrt();
    let mut s_r = (s * b / a).sqrt();
    if s_r > 1.0 {
        s_r = 1.0;
        s_a = s;
    }
    if s_a > 1.0 {
        s_a = 1.0;
        s_r = s;
    }
    Ok((s_a, s_r))
}

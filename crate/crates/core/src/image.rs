//! Dense 2-D complex array used for scenes, raw data and intermediate
//! signals, with its binary file format.
//!
//! File layout: magic `CSAR`, version `u16 = 1`, rows `u32`, cols `u32`,
//! all little-endian, then `rows * cols * 2` little-endian `f64` values
//! interleaved `(re, im)`, row-major. Row index is azimuth, column index
//! is range.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"CSAR";
pub const FORMAT_VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexImage {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexImage {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} samples", rows * cols),
                got: format!("{}", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.cols + col] = v;
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [Complex64] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_all_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius inner product `<self, other> = sum conj(other) * self`.
    pub fn inner(&self, other: &ComplexImage) -> Complex64 {
        debug_assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// Position of the largest-magnitude sample.
    pub fn peak(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, 0.0);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let m = self.at(r, c).norm();
                if m > best.2 {
                    best = (r, c, m);
                }
            }
        }
        best
    }

    /// Copy the `rows x cols` window of `self` starting at `(row0, col0)`.
    pub fn crop(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> ComplexImage {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols);
        let mut out = ComplexImage::zeros(rows, cols);
        for r in 0..rows {
            let src = &self.row(row0 + r)[col0..col0 + cols];
            out.row_mut(r).copy_from_slice(src);
        }
        out
    }

    /// Embed `self` into a larger zero image at `(row0, col0)`.
    pub fn pad_into(&self, rows: usize, cols: usize, row0: usize, col0: usize) -> ComplexImage {
        assert!(row0 + self.rows <= rows && col0 + self.cols <= cols);
        let mut out = ComplexImage::zeros(rows, cols);
        for r in 0..self.rows {
            out.row_mut(row0 + r)[col0..col0 + self.cols].copy_from_slice(self.row(r));
        }
        out
    }
}

pub fn write_image(image: &ComplexImage, path: &Path) -> Result<()> {
    if image.rows > u32::MAX as usize || image.cols > u32::MAX as usize {
        return Err(Error::Format("dimensions overflow u32".into()));
    }
    let mut buf = Vec::with_capacity(14 + image.data.len() * 16);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(image.rows as u32).to_le_bytes());
    buf.extend_from_slice(&(image.cols as u32).to_le_bytes());
    for z in &image.data {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

pub fn read_image(path: &Path) -> Result<ComplexImage> {
    let mut f = std::fs::File::open(path)?;
    let mut header = [0u8; 14];
    f.read_exact(&mut header)
        .map_err(|_| Error::Format("truncated header".into()))?;
    if &header[0..4] != MAGIC {
        return Err(Error::Format("wrong magic bytes".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let rows = u32::from_le_bytes(header[6..10].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(header[10..14].try_into().unwrap()) as usize;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("dimension overflow".into()))?;
    let mut payload = Vec::new();
    f.read_to_end(&mut payload)?;
    if payload.len() != count * 16 {
        return Err(Error::Format(format!(
            "truncated payload: expected {} bytes, got {}",
            count * 16,
            payload.len()
        )));
    }
    let mut data = Vec::with_capacity(count);
    for chunk in payload.chunks_exact(16) {
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        data.push(Complex64::new(re, im));
    }
    ComplexImage::from_data(rows, cols, data)
}

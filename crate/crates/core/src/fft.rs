//! Unitary FFT passes along the azimuth (column) and range (row) axes of
//! a `ComplexImage`. The 1/sqrt(N) scaling in each direction makes every
//! pass its own adjoint's inverse, which the focusing/observation
//! operator pair relies on.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::image::ComplexImage;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn plan(n: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    match dir {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    }
}

/// Transform every row (range axis) in place, unitary scaling.
pub fn fft_range(img: &mut ComplexImage, dir: Direction) {
    let n = img.cols();
    if n == 0 {
        return;
    }
    let fft = plan(n, dir);
    let scale = 1.0 / (n as f64).sqrt();
    for r in 0..img.rows() {
        let row = img.row_mut(r);
        fft.process(row);
        for z in row.iter_mut() {
            *z *= scale;
        }
    }
}

/// Transform every column (azimuth axis) in place, unitary scaling.
pub fn fft_azimuth(img: &mut ComplexImage, dir: Direction) {
    let n = img.rows();
    if n == 0 {
        return;
    }
    let fft = plan(n, dir);
    let scale = 1.0 / (n as f64).sqrt();
    let cols = img.cols();
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..cols {
        for r in 0..n {
            col[r] = img.at(r, c);
        }
        fft.process(&mut col);
        for r in 0..n {
            img.set(r, c, col[r] * scale);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_image(rows: usize, cols: usize, seed: u64) -> ComplexImage {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let data = (0..rows * cols)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexImage::from_data(rows, cols, data).unwrap()
    }

    #[test]
    fn unitary_round_trip() {
        let img = random_image(13, 21, 1);
        let mut t = img.clone();
        fft_range(&mut t, Direction::Forward);
        fft_azimuth(&mut t, Direction::Forward);
        // Parseval
        assert!((t.norm() - img.norm()).abs() < 1e-10);
        fft_azimuth(&mut t, Direction::Inverse);
        fft_range(&mut t, Direction::Inverse);
        for (a, b) in t.data().iter().zip(img.data().iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

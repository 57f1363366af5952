//! Range-Doppler focusing operator M: range compression, RCMC by
//! truncated-sinc interpolation in the (Doppler, range-time) domain, and
//! azimuth compression, each a 1-D frequency-domain pass. All FFTs are
//! unitary so the sub-operation-wise inverse in `apobs` is exactly the
//! adjoint.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft_azimuth, fft_range, Direction};
use crate::geometry::DerivedGeometry;
use crate::image::ComplexImage;

pub const DEFAULT_RCMC_HALFWIDTH: usize = 4;

#[derive(Debug, Clone)]
pub struct RdaFilters {
    /// Range matched filter per FFT-ordered range-frequency bin, |.| = 1.
    pub range_filter: Vec<Complex64>,
    /// Azimuth matched filter per (Doppler bin, range gate), |.| = 1.
    pub azimuth_filter: ComplexImage,
    /// Half the truncated-sinc window, in taps.
    pub rcmc_kernel_halfwidth: usize,
    /// Migration expressed in range samples, per (Doppler bin, range gate).
    pub migration_samples: Vec<f64>,
    /// Raw-data dimensions the filters were built for.
    pub raw_dims: (usize, usize),
    /// Scene dimensions and the crop offset inside the raw grid.
    pub scene_dims: (usize, usize),
    pub scene_offset: (usize, usize),
}

pub fn build_filters(geo: &DerivedGeometry) -> RdaFilters {
    build_filters_with_halfwidth(geo, DEFAULT_RCMC_HALFWIDTH)
}

pub fn build_filters_with_halfwidth(geo: &DerivedGeometry, halfwidth: usize) -> RdaFilters {
    let (n_az, n_rg) = geo.raw_dims;
    let k_r = geo.params.range_fm_rate;

    // Phase signs are the ones that compress the simulated signals:
    // the pulse exp(+j pi K_r t^2) has spectrum phase -pi f^2/K_r under
    // the e^{-j2pi f t} transform, the azimuth history
    // exp(-j pi K_a eta^2) has spectrum phase +pi f^2/K_a.
    let range_filter: Vec<Complex64> = geo
        .range_freq_axis
        .iter()
        .map(|&f| Complex64::from_polar(1.0, std::f64::consts::PI * f * f / k_r))
        .collect();

    let mut azimuth_filter = ComplexImage::zeros(n_az, n_rg);
    for (b, &f_eta) in geo.doppler_axis.iter().enumerate() {
        for (p, &k_a) in geo.azimuth_fm_rate.iter().enumerate() {
            azimuth_filter.set(
                b,
                p,
                Complex64::from_polar(1.0, -std::f64::consts::PI * f_eta * f_eta / k_a),
            );
        }
    }

    let migration_samples: Vec<f64> = geo
        .migration
        .iter()
        .map(|&dr| dr * geo.params.range_sample_rate)
        .collect();

    RdaFilters {
        range_filter,
        azimuth_filter,
        rcmc_kernel_halfwidth: halfwidth,
        migration_samples,
        raw_dims: geo.raw_dims,
        scene_dims: (geo.params.n_azimuth, geo.params.n_range),
        scene_offset: geo.scene_offset(),
    }
}

impl RdaFilters {
    fn check_raw_dims(&self, img: &ComplexImage) -> Result<()> {
        if (img.rows(), img.cols()) != self.raw_dims {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.raw_dims.0, self.raw_dims.1),
                got: format!("{}x{}", img.rows(), img.cols()),
            });
        }
        Ok(())
    }
}

#[inline]
fn sinc(x: f64) -> f64 {
    // exact Kronecker delta on integer arguments, so on-grid
    // interpolation is the identity
    if x == x.trunc() {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    let px = std::f64::consts::PI * x;
    px.sin() / px
}

/// Tap window of the truncated interpolation kernel: the `2*halfwidth`
/// integer positions nearest `pos`.
#[inline]
pub(crate) fn kernel_window(pos: f64, halfwidth: usize) -> (isize, isize) {
    let base = pos.floor() as isize;
    (base - halfwidth as isize + 1, base + halfwidth as isize)
}

/// RCMC (operator C): per Doppler bin, shift energy back by the migration
/// via truncated-sinc interpolation. Out-of-range taps read as zero.
pub fn rcmc(v: &ComplexImage, filters: &RdaFilters) -> Result<ComplexImage> {
    filters.check_raw_dims(v)?;
    let (n_az, n_rg) = filters.raw_dims;
    let hw = filters.rcmc_kernel_halfwidth;
    let mut out = ComplexImage::zeros(n_az, n_rg);
    for b in 0..n_az {
        let mig = &filters.migration_samples[b * n_rg..(b + 1) * n_rg];
        let src = v.row(b);
        let dst = out.row_mut(b);
        for (tau, d) in dst.iter_mut().enumerate() {
            let pos = tau as f64 + mig[tau];
            let (lo, hi) = kernel_window(pos, hw);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in lo..=hi {
                if t >= 0 && (t as usize) < n_rg {
                    acc += src[t as usize] * sinc(t as f64 - pos);
                }
            }
            *d = acc;
        }
    }
    Ok(out)
}

/// The focusing operator M of the range-Doppler algorithm. Output is
/// cropped to scene dimensions by removing the simulation margins.
pub fn focus(y: &ComplexImage, filters: &RdaFilters) -> Result<ComplexImage> {
    filters.check_raw_dims(y)?;
    let mut t = y.clone();
    // range compression
    fft_range(&mut t, Direction::Forward);
    for r in 0..t.rows() {
        let row = t.row_mut(r);
        for (c, z) in row.iter_mut().enumerate() {
            *z *= filters.range_filter[c];
        }
    }
    fft_range(&mut t, Direction::Inverse);
    // RCMC in the (Doppler, range-time) domain
    fft_azimuth(&mut t, Direction::Forward);
    t = rcmc(&t, filters)?;
    // azimuth compression
    for (z, p) in t.data_mut().iter_mut().zip(filters.azimuth_filter.data()) {
        *z *= p;
    }
    fft_azimuth(&mut t, Direction::Inverse);
    let (r0, c0) = filters.scene_offset;
    let (sr, sc) = filters.scene_dims;
    Ok(t.crop(r0, c0, sr, sc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::derive_geometry;
    use crate::testing::{random_scene_image, tiny_params};

    fn tiny_filters() -> RdaFilters {
        let geo = derive_geometry(&tiny_params(16, 16, 8, 6)).unwrap();
        build_filters(&geo)
    }

    #[test]
    fn filters_unit_modulus_and_dc() {
        let f = tiny_filters();
        assert!((f.range_filter[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for z in &f.range_filter {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
        for z in f.azimuth_filter.data() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn range_filter_even_in_frequency() {
        let f = tiny_filters();
        let n = f.range_filter.len();
        for k in 1..n / 2 {
            assert!((f.range_filter[k] - f.range_filter[n - k]).norm() < 1e-12);
        }
    }

    #[test]
    fn rcmc_identity_on_zero_migration() {
        let mut f = tiny_filters();
        for m in f.migration_samples.iter_mut() {
            *m = 0.0;
        }
        let v = random_scene_image(f.raw_dims.0, f.raw_dims.1, 11);
        let u = rcmc(&v, &f).unwrap();
        assert_eq!(u.data(), v.data());
    }

    #[test]
    fn rcmc_integer_shift() {
        let mut f = tiny_filters();
        let (n_az, n_rg) = f.raw_dims;
        for m in f.migration_samples.iter_mut() {
            *m = 0.0;
        }
        // shift row 3 by +2 samples
        for m in f.migration_samples[3 * n_rg..4 * n_rg].iter_mut() {
            *m = 2.0;
        }
        let v = random_scene_image(n_az, n_rg, 12);
        let u = rcmc(&v, &f).unwrap();
        for tau in 0..n_rg - 2 {
            assert!((u.at(3, tau) - v.at(3, tau + 2)).norm() < 1e-12);
        }
        // other rows untouched
        assert_eq!(u.row(5), v.row(5));
    }

    #[test]
    fn focus_of_zero_is_zero() {
        let f = tiny_filters();
        let x = focus(&ComplexImage::zeros(f.raw_dims.0, f.raw_dims.1), &f).unwrap();
        assert!(x.is_all_zero());
    }

    #[test]
    fn focus_is_linear() {
        let f = tiny_filters();
        let (rr, rc) = f.raw_dims;
        let a = random_scene_image(rr, rc, 20);
        let b = random_scene_image(rr, rc, 21);
        let alpha = Complex64::new(0.7, -1.1);
        let mut combo = a.clone();
        for (z, w) in combo.data_mut().iter_mut().zip(b.data()) {
            *z = *z * alpha + w;
        }
        let fa = focus(&a, &f).unwrap();
        let fb = focus(&b, &f).unwrap();
        let fc = focus(&combo, &f).unwrap();
        let scale = fc.norm().max(1.0);
        for i in 0..fc.data().len() {
            let expect = fa.data()[i] * alpha + fb.data()[i];
            assert!((fc.data()[i] - expect).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn range_pass_touches_one_axis() {
        let f = tiny_filters();
        let (rr, rc) = f.raw_dims;
        let mut y = ComplexImage::zeros(rr, rc);
        for c in 0..rc {
            y.set(4, c, Complex64::new(1.0, c as f64));
        }
        // range compression alone: other rows stay zero
        let mut t = y.clone();
        fft_range(&mut t, Direction::Forward);
        for r in 0..t.rows() {
            let row = t.row_mut(r);
            for (c, z) in row.iter_mut().enumerate() {
                *z *= f.range_filter[c];
            }
        }
        fft_range(&mut t, Direction::Inverse);
        for r in 0..rr {
            if r != 4 {
                for z in t.row(r) {
                    assert!(z.norm() < 1e-14);
                }
            }
        }
    }
}

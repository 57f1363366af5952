//! Approximated observation G: the sub-operation-wise inverse of the
//! focusing operator. Each pass of `rda::focus` is unitary or transposed
//! exactly (the inverse interpolation is the literal transpose of the
//! truncated RCMC kernel), so G equals the adjoint of M to rounding.


use crate::error::Result;
use crate::fft::{fft_azimuth, fft_range, Direction};
use crate::image::ComplexImage;
use crate::rda::{kernel_window, RdaFilters};

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

/// Inverse interpolation (operator D): scatter each sample back along the
/// migration curve with the same truncated-sinc taps RCMC gathers with.
pub fn inverse_rcmc(u: &ComplexImage, filters: &RdaFilters) -> Result<ComplexImage> {
    if (u.rows(), u.cols()) != filters.raw_dims {
        return Err(crate::error::Error::DimensionMismatch {
            expected: format!("{}x{}", filters.raw_dims.0, filters.raw_dims.1),
            got: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let (n_az, n_rg) = filters.raw_dims;
    let hw = filters.rcmc_kernel_halfwidth;
    let mut out = ComplexImage::zeros(n_az, n_rg);
    for b in 0..n_az {
        let mig = &filters.migration_samples[b * n_rg..(b + 1) * n_rg];
        let src = u.row(b);
        let dst = out.row_mut(b);
        for (tau, s) in src.iter().enumerate() {
            let pos = tau as f64 + mig[tau];
            let (lo, hi) = kernel_window(pos, hw);
            for t in lo..=hi {
                if t >= 0 && (t as usize) < n_rg {
                    dst[t as usize] += s * sinc(t as f64 - pos);
                }
            }
        }
    }
    Ok(out)
}

/// Approximated observation G: zero-pad the scene into the raw grid at
/// the index ranges `focus` crops, then run the reversed passes with
/// conjugate filters.
pub fn approx_observe(x: &ComplexImage, filters: &RdaFilters) -> Result<ComplexImage> {
    if (x.rows(), x.cols()) != filters.scene_dims {
        return Err(crate::error::Error::DimensionMismatch {
            expected: format!("{}x{}", filters.scene_dims.0, filters.scene_dims.1),
            got: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    let (r0, c0) = filters.scene_offset;
    let mut t = x.pad_into(filters.raw_dims.0, filters.raw_dims.1, r0, c0);
    // inverse azimuth compression
    fft_azimuth(&mut t, Direction::Forward);
    for (z, p) in t.data_mut().iter_mut().zip(filters.azimuth_filter.data()) {
        *z *= p.conj();
    }
    // inverse RCMC
    t = inverse_rcmc(&t, filters)?;
    fft_azimuth(&mut t, Direction::Inverse);
    // inverse range compression
    fft_range(&mut t, Direction::Forward);
    for r in 0..t.rows() {
        let row = t.row_mut(r);
        for (c, z) in row.iter_mut().enumerate() {
            *z *= filters.range_filter[c].conj();
        }
    }
    fft_range(&mut t, Direction::Inverse);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::derive_geometry;
    use crate::rda::{build_filters, focus, rcmc};
    use crate::testing::{random_scene_image, random_sparse_image, tiny_params};
    use num_complex::Complex64;

    fn tiny_filters() -> RdaFilters {
        build_filters(&derive_geometry(&tiny_params(16, 16, 8, 6)).unwrap())
    }

    #[test]
    fn inverse_rcmc_identity_on_zero_migration() {
        let mut f = tiny_filters();
        for m in f.migration_samples.iter_mut() {
            *m = 0.0;
        }
        let u = random_scene_image(f.raw_dims.0, f.raw_dims.1, 31);
        let v = inverse_rcmc(&u, &f).unwrap();
        assert_eq!(v.data(), u.data());
    }

    #[test]
    fn rcmc_pair_is_adjoint() {
        let f = tiny_filters();
        let (rr, rc) = f.raw_dims;
        let v = random_scene_image(rr, rc, 32);
        let u = random_scene_image(rr, rc, 33);
        let lhs = rcmc(&v, &f).unwrap().inner(&u);
        let rhs = v.inner(&inverse_rcmc(&u, &f).unwrap());
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn approx_observe_of_zero_is_zero() {
        let f = tiny_filters();
        let x = approx_observe(&ComplexImage::zeros(16, 16), &f).unwrap();
        assert!(x.is_all_zero());
    }

    #[test]
    fn adjoint_identity_with_focus() {
        let f = tiny_filters();
        let x = random_scene_image(16, 16, 40);
        let y = random_scene_image(f.raw_dims.0, f.raw_dims.1, 41);
        let lhs = approx_observe(&x, &f).unwrap().inner(&y);
        let rhs = x.inner(&focus(&y, &f).unwrap());
        assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(rhs.norm()));
    }

    #[test]
    fn linearity() {
        let f = tiny_filters();
        let a = random_scene_image(16, 16, 50);
        let b = random_scene_image(16, 16, 51);
        let alpha = Complex64::new(-0.4, 0.9);
        let mut combo = a.clone();
        for (z, w) in combo.data_mut().iter_mut().zip(b.data()) {
            *z = *z * alpha + w;
        }
        let ga = approx_observe(&a, &f).unwrap();
        let gb = approx_observe(&b, &f).unwrap();
        let gc = approx_observe(&combo, &f).unwrap();
        let scale = gc.norm().max(1.0);
        for i in 0..gc.data().len() {
            let expect = ga.data()[i] * alpha + gb.data()[i];
            assert!((gc.data()[i] - expect).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn near_energy_preservation() {
        let f = tiny_filters();
        let x = random_scene_image(16, 16, 60);
        let gx = approx_observe(&x, &f).unwrap();
        let ratio = gx.norm() / x.norm();
        assert!((0.9..=1.1).contains(&ratio), "energy ratio {ratio}");
    }

    #[test]
    fn round_trip_keeps_sparse_support_on_top() {
        let f = tiny_filters();
        let x = random_sparse_image(16, 16, 3, 61);
        let back = focus(&approx_observe(&x, &f).unwrap(), &f).unwrap();
        let mut mags: Vec<(f64, usize)> = back
            .data()
            .iter()
            .enumerate()
            .map(|(i, z)| (z.norm(), i))
            .collect();
        mags.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let top: std::collections::HashSet<usize> = mags[..3].iter().map(|&(_, i)| i).collect();
        for (i, z) in x.data().iter().enumerate() {
            if z.norm() > 0.0 {
                assert!(top.contains(&i), "support pixel {i} not in top-k");
            }
        }
    }
}

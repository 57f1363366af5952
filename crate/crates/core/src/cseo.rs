//! Exact-observation reference: the same thresholding iteration run with
//! the time-domain pair (H, H^adj), plus dense-matrix densification of
//! the matrix-free operators by basis probing. Both are guarded to toy
//! sizes; they exist as correctness anchors and complexity baselines.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::DerivedGeometry;
use crate::image::ComplexImage;
use crate::rda::RdaFilters;
use crate::sampling::{subsample, subsample_adjoint, SamplingPattern};
use crate::sim::{exact_adjoint, exact_observe};
use crate::solver::{reconstruct_with, ObservationPair, SolverConfig, SolverReport};

pub const CSEO_MAX_SCENE: usize = 64;
pub const DENSIFY_MAX_PIXELS: usize = 1024;

impl<'a> ObservationPair<'a> {
    /// Sampled exact observation: forward = Theta H, backward =
    /// H^adj Theta^T.
    pub fn exact(geo: &'a DerivedGeometry, pattern: &'a SamplingPattern) -> Self {
        ObservationPair {
            forward: Box::new(move |x| subsample(&exact_observe(x, geo)?, pattern)),
            backward: Box::new(move |m| exact_adjoint(&subsample_adjoint(m, pattern)?, geo)),
            scene_dims: (geo.params.n_azimuth, geo.params.n_range),
        }
    }
}

/// CS reconstruction with the exact time-domain observation (CSEO).
pub fn reconstruct_exact(
    y_s: &[Complex64],
    pattern: &SamplingPattern,
    geo: &DerivedGeometry,
    cfg: &SolverConfig,
) -> Result<(ComplexImage, SolverReport)> {
    let p = &geo.params;
    if p.n_azimuth > CSEO_MAX_SCENE || p.n_range > CSEO_MAX_SCENE {
        return Err(Error::SizeGuard(format!(
            "CSEO is limited to {CSEO_MAX_SCENE}x{CSEO_MAX_SCENE} scenes \
             (time-domain cost grows with scene size times TBP); got {}x{}",
            p.n_azimuth, p.n_range
        )));
    }
    let ops = ObservationPair::exact(geo, pattern);
    reconstruct_with(&ops, y_s, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTag {
    /// Approximated observation, scene -> raw.
    G,
    /// Focusing operator, raw -> scene.
    M,
    /// Exact observation, scene -> raw.
    H,
    /// Adjoint of the exact observation, raw -> scene.
    HAdjoint,
}

/// Densify a matrix-free operator by probing it with canonical basis
/// images: column j of the result is the vectorized response to the j-th
/// basis image. Probes the production code paths, not a parallel
/// implementation.
pub fn densify(
    tag: OperatorTag,
    geo: &DerivedGeometry,
    filters: &RdaFilters,
) -> Result<ComplexImage> {
    let scene_dims = (geo.params.n_azimuth, geo.params.n_range);
    let raw_dims = geo.raw_dims;
    let scene_px = scene_dims.0 * scene_dims.1;
    let raw_px = raw_dims.0 * raw_dims.1;
    if scene_px > DENSIFY_MAX_PIXELS {
        return Err(Error::SizeGuard(format!(
            "densify is limited to {DENSIFY_MAX_PIXELS} scene pixels, got {scene_px}"
        )));
    }
    let (in_dims, out_len) = match tag {
        OperatorTag::G | OperatorTag::H => (scene_dims, raw_px),
        OperatorTag::M | OperatorTag::HAdjoint => (raw_dims, scene_px),
    };
    let in_len = in_dims.0 * in_dims.1;
    let mut matrix = ComplexImage::zeros(out_len, in_len);
    let mut probe = ComplexImage::zeros(in_dims.0, in_dims.1);
    for j in 0..in_len {
        probe.data_mut()[j] = Complex64::new(1.0, 0.0);
        let response = match tag {
            OperatorTag::G => crate::apobs::approx_observe(&probe, filters)?,
            OperatorTag::M => crate::rda::focus(&probe, filters)?,
            OperatorTag::H => exact_observe(&probe, geo)?,
            OperatorTag::HAdjoint => exact_adjoint(&probe, geo)?,
        };
        for (i, v) in response.data().iter().enumerate() {
            matrix.set(i, j, *v);
        }
        probe.data_mut()[j] = Complex64::new(0.0, 0.0);
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::derive_geometry;
    use crate::rda::build_filters;
    use crate::sampling::make_pattern;
    use crate::testing::{random_sparse_image, tiny_params};

    #[test]
    fn zero_measurements_zero_image() {
        let geo = derive_geometry(&tiny_params(16, 16, 8, 6)).unwrap();
        let pattern = make_pattern(geo.raw_dims, 0.5, 0.5, 1).unwrap();
        let y = vec![Complex64::new(0.0, 0.0); pattern.measurement_len()];
        let (x, _) = reconstruct_exact(&y, &pattern, &geo, &SolverConfig::new(3)).unwrap();
        assert!(x.is_all_zero());
    }

    #[test]
    fn size_guard_refuses_large_scenes() {
        let geo = derive_geometry(&tiny_params(80, 80, 8, 6)).unwrap();
        let pattern = make_pattern(geo.raw_dims, 0.5, 0.5, 1).unwrap();
        let y = vec![Complex64::new(0.0, 0.0); pattern.measurement_len()];
        match reconstruct_exact(&y, &pattern, &geo, &SolverConfig::new(3)) {
            Err(Error::SizeGuard(_)) => {}
            other => panic!("expected size guard, got {other:?}"),
        }
    }

    #[test]
    fn exact_recovers_sparse_scene() {
        let geo = derive_geometry(&tiny_params(16, 16, 8, 6)).unwrap();
        let pattern = make_pattern(geo.raw_dims, 0.6, 0.9, 5).unwrap();
        let truth = random_sparse_image(16, 16, 3, 6);
        let raw = exact_observe(&truth, &geo).unwrap();
        let y = subsample(&raw, &pattern).unwrap();
        let (x, _) = reconstruct_exact(&y, &pattern, &geo, &SolverConfig::new(3)).unwrap();
        for (i, z) in truth.data().iter().enumerate() {
            if z.norm() > 0.0 {
                assert!(x.data()[i].norm() > 0.1, "missing support pixel {i}");
            }
        }
    }

    #[test]
    fn densified_h_column_is_single_target_echo() {
        let geo = derive_geometry(&tiny_params(8, 8, 4, 4)).unwrap();
        let filters = build_filters(&geo);
        let h = densify(OperatorTag::H, &geo, &filters).unwrap();
        let center = 4 * 8 + 4;
        let mut probe = ComplexImage::zeros(8, 8);
        probe.set(4, 4, Complex64::new(1.0, 0.0));
        let echo = exact_observe(&probe, &geo).unwrap();
        for (i, v) in echo.data().iter().enumerate() {
            assert_eq!(h.at(i, center), *v);
        }
    }

    #[test]
    fn densified_h_adjoint_is_hermitian_transpose() {
        let geo = derive_geometry(&tiny_params(8, 8, 4, 4)).unwrap();
        let filters = build_filters(&geo);
        let h = densify(OperatorTag::H, &geo, &filters).unwrap();
        let ha = densify(OperatorTag::HAdjoint, &geo, &filters).unwrap();
        for i in 0..ha.rows() {
            for j in 0..ha.cols() {
                assert!((ha.at(i, j) - h.at(j, i).conj()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn densify_guard() {
        let geo = derive_geometry(&tiny_params(40, 40, 4, 4)).unwrap();
        let filters = build_filters(&geo);
        assert!(matches!(
            densify(OperatorTag::G, &geo, &filters),
            Err(Error::SizeGuard(_))
        ));
    }
}

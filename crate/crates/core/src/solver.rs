//! Sparse scene reconstruction by iterative soft thresholding with
//! adaptive step and sparsity-driven regularization. The iteration is
//! written against an abstract sampled observation pair so the same loop
//! runs with the approximated operators (G, M) or the exact time-domain
//! pair (H, H^adj).

use std::time::Instant;

use num_complex::Complex64;

use crate::apobs::approx_observe;
use crate::error::{Error, Result};
use crate::image::ComplexImage;
use crate::rda::{focus, RdaFilters};
use crate::sampling::{subsample, subsample_adjoint, SamplingPattern};

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Assumed number of significant scene pixels (k).
    pub sparsity_k: usize,
    pub max_iters: usize,
    /// Relative-change stopping threshold.
    pub tol: f64,
}

impl SolverConfig {
    pub fn new(sparsity_k: usize) -> Self {
        SolverConfig {
            sparsity_k,
            max_iters: 100,
            tol: 1e-6,
        }
    }

    pub fn validate(&self, n_pixels: usize) -> Result<()> {
        if self.sparsity_k == 0 || self.max_iters == 0 || self.tol < 0.0 {
            return Err(Error::InvalidConfig(
                "sparsity_k >= 1, max_iters >= 1, tol >= 0 required".into(),
            ));
        }
        if self.sparsity_k >= n_pixels {
            return Err(Error::InvalidConfig(format!(
                "sparsity_k = {} must be below the pixel count {}",
                self.sparsity_k, n_pixels
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct IterationRecord {
    pub residual_norm: f64,
    pub mu: f64,
    pub lambda: f64,
    pub support_size: usize,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SolverReport {
    pub iterations: Vec<IterationRecord>,
    pub iterations_run: usize,
    pub converged: bool,
}

impl SolverReport {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("iteration,residual_norm,mu,lambda,support_size,elapsed_seconds\n");
        for (i, rec) in self.iterations.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i, rec.residual_norm, rec.mu, rec.lambda, rec.support_size, rec.elapsed_seconds
            ));
        }
        out
    }
}

/// Complex soft threshold: shrink the magnitude by `sigma`, keep the phase.
pub fn soft_threshold(x: &ComplexImage, sigma: f64) -> Result<ComplexImage> {
    if sigma < 0.0 {
        return Err(Error::InvalidParams(format!("sigma must be >= 0, got {sigma}")));
    }
    let mut out = x.clone();
    for z in out.data_mut() {
        let mag = z.norm();
        *z = if mag > sigma {
            *z * ((mag - sigma) / mag)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    Ok(out)
}

/// Normalized adaptive step: mu = |dx_k|^2 / |A dx_k|^2 for the sampled
/// forward operator A, with mu = 1 when the support is empty or the
/// supported delta is annihilated by the sampling.
pub fn adaptive_mu<F>(delta_supported: &ComplexImage, forward: F) -> f64
where
    F: FnOnce(&ComplexImage) -> Vec<Complex64>,
{
    let num = delta_supported.norm().powi(2);
    if num == 0.0 {
        return 1.0;
    }
    let den: f64 = forward(delta_supported).iter().map(|z| z.norm_sqr()).sum();
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// lambda_i = |b|_(k+1) / mu: with sigma = lambda * mu the threshold
/// keeps at most k entries.
pub fn adaptive_lambda(b: &ComplexImage, k: usize, mu: f64) -> Result<f64> {
    let n = b.data().len();
    if k >= n {
        return Err(Error::InvalidConfig(format!(
            "k = {k} must be below the pixel count {n}"
        )));
    }
    let mut mags: Vec<f64> = b.data().iter().map(|z| z.norm()).collect();
    // (k+1)-th largest magnitude = k-th entry of the descending order
    let (_, kth, _) =
        mags.select_nth_unstable_by(k, |a, b| b.partial_cmp(a).unwrap());
    Ok(*kth / mu)
}

/// One sampled-observation pair: `forward` maps a scene to measurements,
/// `backward` maps measurements back to a scene image.
pub struct ObservationPair<'a> {
    pub forward: Box<dyn Fn(&ComplexImage) -> Result<Vec<Complex64>> + 'a>,
    pub backward: Box<dyn Fn(&[Complex64]) -> Result<ComplexImage> + 'a>,
    pub scene_dims: (usize, usize),
}

impl<'a> ObservationPair<'a> {
    /// Sampled approximated observation: forward = Theta G, backward =
    /// M Theta^T.
    pub fn approximated(filters: &'a RdaFilters, pattern: &'a SamplingPattern) -> Self {
        ObservationPair {
            forward: Box::new(move |x| subsample(&approx_observe(x, filters)?, pattern)),
            backward: Box::new(move |m| focus(&subsample_adjoint(m, pattern)?, filters)),
            scene_dims: filters.scene_dims,
        }
    }
}

/// Iterative thresholding over an observation pair.
pub fn reconstruct_with(
    ops: &ObservationPair,
    y_s: &[Complex64],
    cfg: &SolverConfig,
) -> Result<(ComplexImage, SolverReport)> {
    let (rows, cols) = ops.scene_dims;
    cfg.validate(rows * cols)?;
    let mut x = ComplexImage::zeros(rows, cols);
    let mut report = SolverReport::default();
    let start = Instant::now();

    for _ in 0..cfg.max_iters {
        let gx = (ops.forward)(&x)?;
        if gx.len() != y_s.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} measurements", gx.len()),
                got: format!("{}", y_s.len()),
            });
        }
        let residual: Vec<Complex64> = y_s.iter().zip(&gx).map(|(a, b)| a - b).collect();
        let residual_norm = residual.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let delta = (ops.backward)(&residual)?;

        // restrict the update to the current support for the step rule
        let mut delta_supported = delta.clone();
        for (d, cur) in delta_supported.data_mut().iter_mut().zip(x.data()) {
            if cur.re == 0.0 && cur.im == 0.0 {
                *d = Complex64::new(0.0, 0.0);
            }
        }
        let mu = adaptive_mu(&delta_supported, |d| {
            (ops.forward)(d).expect("forward on supported delta")
        });

        let mut b = x.clone();
        for (z, d) in b.data_mut().iter_mut().zip(delta.data()) {
            *z += mu * d;
        }
        let lambda = adaptive_lambda(&b, cfg.sparsity_k, mu)?;
        let x_next = soft_threshold(&b, lambda * mu)?;
        if !x_next.is_finite() {
            return Err(Error::NonFinite(format!(
                "iterate diverged at iteration {}",
                report.iterations.len()
            )));
        }

        let mut diff = 0.0;
        for (a, b) in x_next.data().iter().zip(x.data()) {
            diff += (a - b).norm_sqr();
        }
        let diff = diff.sqrt();
        let support_size = x_next
            .data()
            .iter()
            .filter(|z| z.re != 0.0 || z.im != 0.0)
            .count();
        report.iterations.push(IterationRecord {
            residual_norm,
            mu,
            lambda,
            support_size,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
        let converged = diff <= cfg.tol * x.norm();
        x = x_next;
        report.iterations_run = report.iterations.len();
        if converged {
            report.converged = true;
            break;
        }
    }
    Ok((x, report))
}

/// CS reconstruction with the approximated observation (CSRDA).
pub fn reconstruct(
    y_s: &[Complex64],
    pattern: &SamplingPattern,
    filters: &RdaFilters,
    cfg: &SolverConfig,
) -> Result<(ComplexImage, SolverReport)> {
    let ops = ObservationPair::approximated(filters, pattern);
    reconstruct_with(&ops, y_s, cfg)
}

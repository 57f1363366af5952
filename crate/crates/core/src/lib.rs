//! Compressed-sensing SAR imaging toolkit: an invertible range-Doppler
//! focusing operator paired with an iterative soft-thresholding solver,
//! a time-domain exact observation oracle, sub-Nyquist sampling
//! operators and point-target quality metrics.

pub mod apobs;
pub mod cseo;
pub mod error;
pub mod fft;
pub mod geometry;
pub mod image;
pub mod params;
pub mod metrics;
pub mod rda;
pub mod sampling;
pub mod scene;
pub mod sim;
pub mod solver;

#[doc(hidden)]
pub mod testing;

pub use error::{Error, Result};
pub use image::ComplexImage;
pub use params::RadarParams;

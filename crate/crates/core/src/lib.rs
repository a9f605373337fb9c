//! Color-object detection, location and pan-tilt tracking in simulation.
//!
//! The pipeline mirrors a small embedded vision loop:
//!
//! 1. [`imaging`]: RGB565 pixels, frames, synthetic scene rendering and raw/PPM I/O.
//! 2. [`segmentation`]: per-pixel thresholding (RGB box or rg chromaticity) into a
//!    bit-packed binary mask.
//! 3. [`region`]: first-run scan plus counter-clockwise Moore contour walk, giving the
//!    limits and center of the detected group.
//! 4. [`control`]: PI gain design by pole placement and the bilinear-discretized
//!    incremental control law.
//! 5. [`plant`]: first-order servo axes and the pixel projection of the camera.
//! 6. [`harness`]: scenario engine, metrics, CSV/report output.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod control;
pub mod error;
pub mod harness;
pub mod imaging;
pub mod plant;
pub mod pnm;
pub mod region;
pub mod segmentation;

pub use error::{Error, Result};

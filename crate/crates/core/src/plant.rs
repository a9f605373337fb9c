//! Pan-tilt platform: first-order servo axes and the camera's pixel projection.

use crate::control::PlantModel;
use crate::region::RegionDescriptor;

/// Pointing angles of the camera, degrees.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CameraPose {
    pub pan: f64,
    pub tilt: f64,
}

impl CameraPose {
    pub fn new(pan: f64, tilt: f64) -> Self {
        Self { pan, tilt }
    }
}

/// Linear pixels-per-degree camera model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CameraIntrinsics {
    pub width: usize,
    pub height: usize,
    pub ppd_x: f64,
    pub ppd_y: f64,
}

impl Default for CameraIntrinsics {
    /// QVGA at 8 px/deg: a 40 x 30 degree field of view.
    fn default() -> Self {
        Self {
            width: crate::imaging::QVGA_WIDTH,
            height: crate::imaging::QVGA_HEIGHT,
            ppd_x: 8.0,
            ppd_y: 8.0,
        }
    }
}

impl CameraIntrinsics {
    pub fn fov(&self) -> (f64, f64) {
        (self.width as f64 / self.ppd_x, self.height as f64 / self.ppd_y)
    }

    pub fn center(&self) -> (f64, f64) {
        (self.width as f64 / 2.0, self.height as f64 / 2.0)
    }
}

/// Inclusive mechanical end stops of one axis, degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
}

impl AxisRange {
    pub const PAN: AxisRange = AxisRange { min: -90.0, max: 90.0 };
    pub const TILT: AxisRange = AxisRange { min: -45.0, max: 45.0 };
    pub const UNBOUNDED: AxisRange = AxisRange {
        min: f64::NEG_INFINITY,
        max: f64::INFINITY,
    };
}

/// Output angle of one servo axis.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PlantState {
    pub angle: f64,
}

/// Advances a first-order axis by one zero-order-hold period `t` with command `u`.
///
/// `x+ = a x + (1 - a) K u`, `a = exp(-t / tau)`, then clamped to `range`.
pub fn plant_step(
    state: PlantState,
    model: &PlantModel,
    u: f64,
    t: f64,
    range: AxisRange,
) -> PlantState {
    debug_assert!(t > 0.0);
    let a = (-t / model.tau).exp();
    let x = a * state.angle + (1.0 - a) * model.k * u;
    PlantState {
        angle: x.clamp(range.min, range.max),
    }
}

/// Unrounded pixel position of a world direction.
pub fn project_exact(az: f64, el: f64, pose: CameraPose, intr: &CameraIntrinsics) -> (f64, f64) {
    let (cx, cy) = intr.center();
    (cx + (az - pose.pan) * intr.ppd_x, cy + (el - pose.tilt) * intr.ppd_y)
}

/// Pixel position of a world direction, or `None` when it falls outside the frame.
pub fn project(
    az: f64,
    el: f64,
    pose: CameraPose,
    intr: &CameraIntrinsics,
) -> Option<(usize, usize)> {
    let (x, y) = project_exact(az, el, pose, intr);
    let (x, y) = (x.round(), y.round());
    if x < 0.0 || y < 0.0 || x >= intr.width as f64 || y >= intr.height as f64 {
        return None;
    }
    Some((x as usize, y as usize))
}

/// Pixel error between a detected region's center and the center of view.
pub fn error_px(region: &RegionDescriptor, intr: &CameraIntrinsics) -> (f64, f64) {
    let (cx, cy) = intr.center();
    (region.center_x as f64 - cx, region.center_y as f64 - cy)
}

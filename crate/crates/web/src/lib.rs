//! Browser bindings for the colortrack simulator.
//!
//! Three operations are exposed to the demo page: segmenting and locating an
//! object in a rendered frame, simulating a step-tracking run, and comparing
//! both color spaces across illumination levels.

use wasm_bindgen::prelude::*;

use colortrack::config;
use colortrack::harness::{illumination_sweep, run_scenario, Motion, Scenario, ScenarioKind};
use colortrack::imaging::{render, ShapeKind};
use colortrack::region::{locate, RegionDescriptor};
use colortrack::segmentation::{segment, threshold_from_pick, SegmentMode};

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// A single scene the page can edit, segment and inspect.
#[wasm_bindgen]
pub struct SceneView {
    scenario: Scenario,
    illumination: f64,
    frame: Vec<u8>,
    region: Option<RegionDescriptor>,
    mask_pixels: usize,
}

#[wasm_bindgen]
impl SceneView {
    #[wasm_bindgen(constructor)]
    pub fn new() -> SceneView {
        let mut scenario = Scenario::preset(ScenarioKind::MultiObject);
        scenario.pick = None;
        let mut v = SceneView { scenario, illumination: 1.0, frame: Vec::new(), region: None, mask_pixels: 0 };
        v.refresh().expect("preset scene is valid");
        v
    }

    pub fn width(&self) -> usize {
        self.scenario.intrinsics.width
    }

    pub fn height(&self) -> usize {
        self.scenario.intrinsics.height
    }

    /// Sets illumination in [0, 1] and re-renders.
    pub fn set_illumination(&mut self, level: f64) -> Result<(), JsError> {
        if !(0.0..=1.0).contains(&level) {
            return Err(js_err(format!("illumination {level} outside [0, 1]")));
        }
        self.illumination = level;
        self.refresh()
    }

    /// `"chroma"` or `"rgb"`.
    pub fn set_mode(&mut self, mode: &str) -> Result<(), JsError> {
        self.scenario.mode = mode.parse::<SegmentMode>().map_err(js_err)?;
        self.refresh()
    }

    /// Moves the first shape (the tracked object).
    pub fn set_object(&mut self, kind: &str, az: f64, el: f64, size: f64) -> Result<(), JsError> {
        let kind: ShapeKind = kind.parse().map_err(js_err)?;
        let shape = &mut self.scenario.scene.shapes[0];
        shape.kind = kind;
        shape.az = az;
        shape.el = el;
        shape.size = size;
        self.scenario.motion = Motion::Fixed { az, el };
        self.refresh()
    }

    /// Picks the threshold color from the full-light pixel under (x, y).
    pub fn pick_at(&mut self, x: usize, y: usize) -> Result<(), JsError> {
        let s = &self.scenario;
        if x >= s.intrinsics.width || y >= s.intrinsics.height {
            return Err(js_err(format!("pixel ({x}, {y}) outside the frame")));
        }
        let frame = render(&s.scene, s.initial_pose, &s.intrinsics);
        self.scenario.pick = Some(frame.get(x, y).widen());
        self.refresh()
    }

    /// RGBA pixels with matched pixels tinted and the located box outlined.
    pub fn rgba(&self) -> Vec<u8> {
        self.frame.clone()
    }

    /// `[left, right, top, bottom, center_x, center_y, contour_length]`, or empty when nothing was found.
    pub fn region(&self) -> Vec<f64> {
        match &self.region {
            Some(r) => [r.left, r.right, r.top, r.bottom, r.center_x, r.center_y, r.contour_length]
                .map(|v| v as f64)
                .to_vec(),
            None => Vec::new(),
        }
    }

    pub fn mask_pixels(&self) -> usize {
        self.mask_pixels
    }

    /// Picked color as `[r, g, b]`.
    pub fn pick(&self) -> Vec<u8> {
        let c = self.scenario.picked_color();
        vec![c.r, c.g, c.b]
    }

    fn refresh(&mut self) -> Result<(), JsError> {
        let s = &self.scenario;
        s.validate().map_err(js_err)?;
        let scene = s.scene.clone().with_illumination(self.illumination);
        let frame = render(&scene, s.initial_pose, &s.intrinsics);
        let t = threshold_from_pick(s.picked_color(), s.mode, s.margins).map_err(js_err)?;
        let mask = segment(&frame, &t);
        self.region = locate(&mask, &s.scan);
        self.mask_pixels = mask.count_ones();

        let w = frame.width();
        let mut rgba = frame.to_rgba8();
        for (i, px) in rgba.chunks_exact_mut(4).enumerate() {
            if mask.get(i % w, i / w).unwrap_or(false) {
                px[0] = px[0] / 2 + 64;
                px[1] = px[1] / 2 + 127;
                px[2] = px[2] / 2 + 64;
            }
        }
        if let Some(r) = &self.region {
            let mut mark = |x: usize, y: usize| {
                let i = 4 * (y * w + x);
                rgba[i..i + 3].copy_from_slice(&[255, 0, 255]);
            };
            for x in r.left..=r.right {
                mark(x, r.top);
                mark(x, r.bottom);
            }
            for y in r.top..=r.bottom {
                mark(r.left, y);
                mark(r.right, y);
            }
        }
        self.frame = rgba;
        Ok(())
    }
}

impl Default for SceneView {
    fn default() -> Self {
        Self::new()
    }
}

/// Runs a step-tracking scenario.
///
/// Returns `[settling_time (NaN if never), overshoot_pct, lost_frames, t0, ex0, ey0, t1, ex1, ey1, ...]`.
#[wasm_bindgen]
pub fn simulate_tracking(az: f64, el: f64, ts: f64, po: f64, pan_tau: f64, tilt_tau: f64, duration: f64) -> Result<Vec<f64>, JsError> {
    let mut s = Scenario::preset(ScenarioKind::StepTrack);
    let settings = [
        ("object_az", az),
        ("object_el", el),
        ("ts", ts),
        ("po", po),
        ("pan_tau", pan_tau),
        ("tilt_tau", tilt_tau),
        ("duration", duration),
    ];
    for (k, v) in settings {
        config::apply(&mut s, k, &v.to_string()).map_err(js_err)?;
    }
    let (rec, m) = run_scenario(&s).map_err(js_err)?;
    let mut out = vec![m.settling_time.unwrap_or(f64::NAN), m.overshoot_pct, m.lost_frames as f64];
    for r in &rec.rows {
        out.extend([r.t, r.ex, r.ey]);
    }
    Ok(out)
}

/// Object pixels retained relative to full light, as `[level, chroma, rgb]` triples.
#[wasm_bindgen]
pub fn sweep(levels: Vec<f64>) -> Result<Vec<f64>, JsError> {
    let mut s = Scenario::preset(ScenarioKind::IlluminationSweep);
    s.levels = levels;
    let rows = illumination_sweep(&s).map_err(js_err)?;
    Ok(rows.iter().flat_map(|r| [r.level, r.chroma_retained, r.rgb_retained]).collect())
}

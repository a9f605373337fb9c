//! Scenario engine: closes the render → segment → locate → control → plant loop
//! frame by frame and summarizes the run.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::{design_gains, discretize, pi_step, ControllerState, LoopSpec, PiCoefficients, PlantModel};
use crate::imaging::{rasterize, render, Frame, Rgb565, Rgb8, Scene, Shape, ShapeKind};
use crate::plant::{error_px, plant_step, AxisRange, CameraIntrinsics, CameraPose, PlantState};
use crate::region::{locate, ScanParams};
use crate::segmentation::{
    matches_unpacked, segment, segment_chroma, segment_rgb, segment_unpacked, threshold_from_pick,
    PackedBinaryMask, PickMargins, SegmentMode, Threshold,
};
use crate::{Error, Result};

/// Frame rate of the reference hardware; one controller update per frame.
pub const DEFAULT_FPS: f64 = 10.9;

/// Radius, in pixels, of the circle traced in the clock-motion experiment.
pub const CLOCK_RADIUS_PX: f64 = 87.57;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    StepTrack,
    ClockMotion,
    IlluminationSweep,
    MultiObject,
    SegmentOnly,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::StepTrack => "step_track",
            ScenarioKind::ClockMotion => "clock_motion",
            ScenarioKind::IlluminationSweep => "illumination_sweep",
            ScenarioKind::MultiObject => "multi_object",
            ScenarioKind::SegmentOnly => "segment_only",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "step_track" => ScenarioKind::StepTrack,
            "clock_motion" => ScenarioKind::ClockMotion,
            "illumination_sweep" => ScenarioKind::IlluminationSweep,
            "multi_object" => ScenarioKind::MultiObject,
            "segment_only" => ScenarioKind::SegmentOnly,
            _ => return Err(Error::Param(format!("unknown scenario kind {s:?}"))),
        })
    }
}

/// Angular path of the tracked object.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Motion {
    Fixed { az: f64, el: f64 },
    /// Clockwise on screen, starting at `phase` radians.
    Circular {
        center_az: f64,
        center_el: f64,
        radius: f64,
        period: f64,
        phase: f64,
    },
}

impl Motion {
    pub fn position(&self, t: f64) -> (f64, f64) {
        match *self {
            Motion::Fixed { az, el } => (az, el),
            Motion::Circular { center_az, center_el, radius, period, phase } => {
                let a = phase + TAU * t / period;
                (center_az + radius * a.cos(), center_el + radius * a.sin())
            }
        }
    }
}

/// One axis of the pan-tilt platform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub model: PlantModel,
    pub range: AxisRange,
}

impl Axis {
    /// Command limits that reach exactly the mechanical end stops.
    pub fn command_limits(&self) -> (f64, f64) {
        (self.range.min / self.model.k, self.range.max / self.model.k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    /// Seconds.
    pub duration: f64,
    /// Seconds between frames (and controller updates).
    pub sample_period: f64,
    /// `scene.shapes[0]` is the tracked object; its position comes from `motion`.
    pub scene: Scene,
    pub motion: Motion,
    pub spec: LoopSpec,
    pub pan: Axis,
    pub tilt: Axis,
    pub intrinsics: CameraIntrinsics,
    pub initial_pose: CameraPose,
    pub tracking: bool,
    pub mode: SegmentMode,
    pub margins: PickMargins,
    /// Picked color; `None` picks the object's own color at full illumination.
    pub pick: Option<Rgb8>,
    pub scan: ScanParams,
    /// Settling band in pixels; `None` uses 2% of the initial error, at least 3 px.
    pub band: Option<f64>,
    /// Illumination levels for the sweep.
    pub levels: Vec<f64>,
    pub seed: u64,
}

const ORANGE: Rgb8 = Rgb8::new(235, 120, 30);
const BACKGROUND: Rgb8 = Rgb8::new(40, 60, 110);

impl Scenario {
    /// Default configuration for each experiment.
    pub fn preset(kind: ScenarioKind) -> Self {
        let ppd = 8.0;
        let object = Shape::new(ShapeKind::Disk, 0.0, 0.0, 1.0, ORANGE);
        let mut s = Scenario {
            kind,
            duration: 4.0,
            sample_period: 1.0 / DEFAULT_FPS,
            scene: Scene::new(BACKGROUND).with_shape(object),
            motion: Motion::Fixed { az: 0.0, el: 0.0 },
            spec: LoopSpec { ts: 1.6, po: 5.0 },
            pan: Axis {
                model: PlantModel { k: 1.0, tau: 0.25 },
                range: AxisRange::PAN,
            },
            tilt: Axis {
                model: PlantModel { k: 1.0, tau: 0.2 },
                range: AxisRange::TILT,
            },
            intrinsics: CameraIntrinsics::default(),
            initial_pose: CameraPose::default(),
            tracking: false,
            mode: SegmentMode::Chroma,
            margins: PickMargins::default(),
            pick: None,
            scan: ScanParams::default(),
            band: None,
            levels: vec![1.0, 0.8, 0.6, 0.4],
            seed: 0,
        };
        match kind {
            ScenarioKind::StepTrack => {
                // near the top-left corner of the view: about (-152, -112) px
                s.motion = Motion::Fixed { az: -19.0, el: -14.0 };
                s.tracking = true;
            }
            ScenarioKind::ClockMotion => {
                s.scene.shapes[0].kind = ShapeKind::Triangle;
                s.motion = Motion::Circular {
                    center_az: 0.0,
                    center_el: 0.0,
                    radius: CLOCK_RADIUS_PX / ppd,
                    period: 3.82,
                    phase: 0.0,
                };
                s.duration = 2.0 * 3.82;
            }
            ScenarioKind::IlluminationSweep => {
                s.scene.shapes[0].size = 4.0;
                s.duration = s.sample_period;
            }
            ScenarioKind::MultiObject => {
                // red cloth, small yellow sphere, large orange sphere, pale yellow envelope
                s.scene.shapes = vec![
                    Shape::new(ShapeKind::Rectangle, -11.0, -7.0, 3.0, Rgb8::new(200, 30, 40)),
                    Shape::new(ShapeKind::Disk, 10.0, -8.0, 1.2, Rgb8::new(230, 200, 40)),
                    Shape::new(ShapeKind::Disk, -8.0, 6.0, 3.5, ORANGE),
                    Shape::new(ShapeKind::Rectangle, 9.0, 6.0, 3.0, Rgb8::new(235, 225, 170)),
                ];
                s.motion = Motion::Fixed { az: -11.0, el: -7.0 };
                s.duration = s.sample_period;
            }
            ScenarioKind::SegmentOnly => {
                s.motion = Motion::Fixed { az: 5.0, el: 3.0 };
                s.duration = 1.0;
            }
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) {
            return Err(Error::Param(format!("duration must be > 0, got {}", self.duration)));
        }
        if !(self.sample_period > 0.0) {
            return Err(Error::Param(format!("sample period must be > 0, got {}", self.sample_period)));
        }
        if let Motion::Circular { period, .. } = self.motion {
            if !(period > 0.0) {
                return Err(Error::Param(format!("circular period must be > 0, got {period}")));
            }
        }
        if self.scene.shapes.is_empty() {
            return Err(Error::Param("scene has no object".into()));
        }
        let i = &self.intrinsics;
        if i.width == 0 || i.height == 0 || !(i.ppd_x > 0.0) || !(i.ppd_y > 0.0) {
            return Err(Error::Param("camera intrinsics must be positive".into()));
        }
        PlantModel::new(self.pan.model.k, self.pan.model.tau)?;
        PlantModel::new(self.tilt.model.k, self.tilt.model.tau)?;
        LoopSpec::new(self.spec.ts, self.spec.po)?;
        self.scene.validate()
    }

    /// The color the operator would pick: the object as the camera sees it at full light.
    pub fn picked_color(&self) -> Rgb8 {
        self.pick
            .unwrap_or_else(|| Rgb565::narrow(self.scene.shapes[0].color).widen())
    }

    pub fn threshold(&self) -> Result<Threshold> {
        threshold_from_pick(self.picked_color(), self.mode, self.margins)
    }

    pub fn frame_count(&self) -> usize {
        ((self.duration / self.sample_period) - 1e-9).ceil().max(1.0) as usize
    }

    /// The scene at time `t` with the tracked object moved along its path.
    pub fn scene_at(&self, t: f64) -> Scene {
        let mut scene = self.scene.clone();
        let (az, el) = self.motion.position(t);
        scene.shapes[0].az = az;
        scene.shapes[0].el = el;
        scene
    }

    /// Renders the frame seen at time `t` from `pose`.
    pub fn frame_at(&self, t: f64, pose: CameraPose) -> Frame {
        render(&self.scene_at(t), pose, &self.intrinsics)
    }

    /// Gains designed per axis in the pixel domain (plant gain times pixels per degree).
    pub fn design(&self) -> Result<[(PlantModel, crate::control::PiGains); 2]> {
        let pan = self.pan.model.scaled(self.intrinsics.ppd_x);
        let tilt = self.tilt.model.scaled(self.intrinsics.ppd_y);
        Ok([
            (pan, design_gains(&pan, &self.spec)?.0),
            (tilt, design_gains(&tilt, &self.spec)?.0),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub ex: f64,
    pub ey: f64,
    pub ux: f64,
    pub uy: f64,
    pub pan: f64,
    pub tilt: f64,
    pub cx: f64,
    pub cy: f64,
    pub found: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrajectoryRecord {
    pub rows: Vec<TrajectoryRow>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackingMetrics {
    /// Seconds; `None` when the error never stays inside the band.
    pub settling_time: Option<f64>,
    pub band: f64,
    pub overshoot_pct: f64,
    pub mean_radius: f64,
    pub radius_std: f64,
    pub lost_frames: usize,
}

struct AxisLoop {
    axis: Axis,
    coeffs: PiCoefficients,
    ctrl: ControllerState,
    state: PlantState,
}

impl AxisLoop {
    fn new(axis: Axis, coeffs: PiCoefficients, t: f64, angle: f64) -> Result<Self> {
        let (lo, hi) = axis.command_limits();
        Ok(Self {
            axis,
            coeffs,
            ctrl: ControllerState::with_command(t, lo, hi, angle / axis.model.k)?,
            state: PlantState { angle },
        })
    }
}

pub fn run_scenario(s: &Scenario) -> Result<(TrajectoryRecord, TrackingMetrics)> {
    s.validate()?;
    let t = s.sample_period;
    let threshold = s.threshold()?;
    let coeffs = if s.tracking {
        let [(_, pan), (_, tilt)] = s.design()?;
        [discretize(&pan, t)?, discretize(&tilt, t)?]
    } else {
        let hold = PiCoefficients { c0: 0.0, c1: 0.0 };
        [hold, hold]
    };
    let mut pan = AxisLoop::new(s.pan, coeffs[0], t, s.initial_pose.pan)?;
    let mut tilt = AxisLoop::new(s.tilt, coeffs[1], t, s.initial_pose.tilt)?;

    let mut rec = TrajectoryRecord::default();
    for k in 0..s.frame_count() {
        let time = k as f64 * t;
        let pose = CameraPose::new(pan.state.angle, tilt.state.angle);
        let frame = s.frame_at(time, pose);
        let mask = segment(&frame, &threshold);
        let region = locate(&mask, &s.scan);
        let mut row = TrajectoryRow {
            t: time,
            ex: f64::NAN,
            ey: f64::NAN,
            ux: pan.ctrl.u_prev,
            uy: tilt.ctrl.u_prev,
            pan: pose.pan,
            tilt: pose.tilt,
            cx: f64::NAN,
            cy: f64::NAN,
            found: region.is_some(),
        };
        if let Some(region) = region {
            let (ex, ey) = error_px(&region, &s.intrinsics);
            row.ex = ex;
            row.ey = ey;
            row.cx = region.center_x as f64;
            row.cy = region.center_y as f64;
            if s.tracking {
                let (ux, c) = pi_step(pan.ctrl, &pan.coeffs, ex)?;
                let (uy, c2) = pi_step(tilt.ctrl, &tilt.coeffs, ey)?;
                pan.ctrl = c;
                tilt.ctrl = c2;
                row.ux = ux;
                row.uy = uy;
            }
        }
        rec.rows.push(row);
        for ax in [&mut pan, &mut tilt] {
            ax.state = plant_step(ax.state, &ax.axis.model, ax.ctrl.u_prev, t, ax.axis.range);
        }
    }
    let metrics = compute_metrics(&rec, s.band);
    Ok((rec, metrics))
}

fn initial_error(rec: &TrajectoryRecord) -> Option<(f64, f64)> {
    rec.rows.iter().find(|r| r.found).map(|r| (r.ex, r.ey))
}

/// Default band: 2% of the initial error magnitude, at least 3 px.
pub fn default_band(rec: &TrajectoryRecord) -> f64 {
    let (ex, ey) = initial_error(rec).unwrap_or((0.0, 0.0));
    (0.02 * ex.hypot(ey)).max(3.0)
}

/// Earliest time after which every frame has `|ex|, |ey| <= band`.
///
/// Lost frames count as outside the band.
pub fn settling_time(rec: &TrajectoryRecord, band: f64) -> Option<f64> {
    let inside = |r: &TrajectoryRow| r.found && r.ex.abs() <= band && r.ey.abs() <= band;
    match rec.rows.iter().rposition(|r| !inside(r)) {
        None => Some(rec.rows.first().map_or(0.0, |r| r.t)),
        Some(i) => rec.rows.get(i + 1).map(|r| r.t),
    }
}

/// Largest excursion past zero, as a percentage of the initial error, over the
/// axes whose initial error exceeds `band`.
pub fn overshoot_pct(rec: &TrajectoryRecord, band: f64) -> f64 {
    let Some((ex0, ey0)) = initial_error(rec) else {
        return 0.0;
    };
    let mut worst = 0.0f64;
    for (e0, pick) in [(ex0, 0usize), (ey0, 1)] {
        if e0.abs() <= band {
            continue;
        }
        for r in rec.rows.iter().filter(|r| r.found) {
            let e = if pick == 0 { r.ex } else { r.ey };
            worst = worst.max(-e * e0.signum() / e0.abs() * 100.0);
        }
    }
    worst
}

/// Mean distance to the centroid of the points, and its population standard deviation.
pub fn circle_stats(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::Param(format!("circle_stats needs at least 3 points, got {}", points.len())));
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.0, sy + p.1));
    let (mx, my) = (sx / n, sy / n);
    let radii: Vec<f64> = points.iter().map(|p| (p.0 - mx).hypot(p.1 - my)).collect();
    let mean = radii.iter().sum::<f64>() / n;
    let var = radii.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    Ok((mean, var.sqrt()))
}

pub fn compute_metrics(rec: &TrajectoryRecord, band: Option<f64>) -> TrackingMetrics {
    let band = band.unwrap_or_else(|| default_band(rec));
    let centers: Vec<(f64, f64)> = rec.rows.iter().filter(|r| r.found).map(|r| (r.cx, r.cy)).collect();
    let (mean_radius, radius_std) = circle_stats(&centers).unwrap_or((0.0, 0.0));
    TrackingMetrics {
        settling_time: settling_time(rec, band),
        band,
        overshoot_pct: overshoot_pct(rec, band),
        mean_radius,
        radius_std,
        lost_frames: rec.rows.iter().filter(|r| !r.found).count(),
    }
}

/// `%g`-style formatting with six significant digits.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.into() }
}

pub const CSV_HEADER: &str = "t,ex,ey,ux,uy,pan,tilt,cx,cy,found";

impl TrajectoryRecord {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let nums = [r.t, r.ex, r.ey, r.ux, r.uy, r.pan, r.tilt, r.cx, r.cy];
            for v in nums {
                out.push_str(&fmt_sig6(v));
                out.push(',');
            }
            out.push_str(if r.found { "1\n" } else { "0\n" });
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(Error::Header("trajectory CSV header".into()));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let bad = || Error::Config { line: i + 2, msg: format!("bad trajectory row {line:?}") };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 10 {
                return Err(bad());
            }
            let mut v = [0.0; 9];
            for (slot, s) in v.iter_mut().zip(&f) {
                *slot = s.parse().map_err(|_| bad())?;
            }
            let found = match f[9] {
                "1" => true,
                "0" => false,
                _ => return Err(bad()),
            };
            rows.push(TrajectoryRow {
                t: v[0],
                ex: v[1],
                ey: v[2],
                ux: v[3],
                uy: v[4],
                pan: v[5],
                tilt: v[6],
                cx: v[7],
                cy: v[8],
                found,
            });
        }
        Ok(Self { rows })
    }
}

pub fn write_csv(rec: &TrajectoryRecord, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, rec.to_csv()).map_err(|e| Error::io(path, e))
}

impl TrackingMetrics {
    pub fn report(&self) -> String {
        let mut out = String::new();
        let settle = self.settling_time.map_or("not settled".to_string(), fmt_sig6);
        let _ = writeln!(out, "settling_time_s: {settle}");
        let _ = writeln!(out, "settling_band_px: {}", fmt_sig6(self.band));
        let _ = writeln!(out, "overshoot_pct: {}", fmt_sig6(self.overshoot_pct));
        let _ = writeln!(out, "mean_radius_px: {}", fmt_sig6(self.mean_radius));
        let _ = writeln!(out, "radius_std_px: {}", fmt_sig6(self.radius_std));
        let _ = writeln!(out, "lost_frames: {}", self.lost_frames);
        out
    }
}

pub fn write_report(metrics: &TrackingMetrics, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, metrics.report()).map_err(|e| Error::io(path, e))
}

/// Pixels covered by one shape, as a mask.
pub fn coverage(shape: &Shape, pose: CameraPose, intr: &CameraIntrinsics) -> PackedBinaryMask {
    let mut m = PackedBinaryMask::new(intr.width, intr.height);
    rasterize(shape, pose, intr, |x, y| {
        m.set(x, y, true).expect("rasterized pixel is in frame");
    });
    m
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepLevel {
    pub level: f64,
    /// Object pixels detected by each method.
    pub chroma_pixels: usize,
    pub rgb_pixels: usize,
    /// Fraction of the full-light detection kept at this level.
    pub chroma_retained: f64,
    pub rgb_retained: f64,
}

/// Segments the object under each illumination level with both color spaces,
/// thresholds picked at full light.
pub fn illumination_sweep(s: &Scenario) -> Result<Vec<SweepLevel>> {
    s.validate()?;
    let pick = s.picked_color();
    let rgb = threshold_from_pick(pick, SegmentMode::Rgb, s.margins)?;
    let chroma = threshold_from_pick(pick, SegmentMode::Chroma, s.margins)?;
    let pose = s.initial_pose;
    let scene = s.scene_at(0.0);
    let object = coverage(&scene.shapes[0], pose, &s.intrinsics);
    let count = |level: f64, t: &Threshold| {
        let frame = render(&scene.clone().with_illumination(level), pose, &s.intrinsics);
        segment(&frame, t).overlap(&object)
    };
    let (c_ref, r_ref) = (count(1.0, &chroma), count(1.0, &rgb));
    let frac = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    s.levels
        .iter()
        .map(|&level| {
            if !(0.0..=1.0).contains(&level) {
                return Err(Error::Param(format!("illumination level {level} outside [0, 1]")));
            }
            let (c, r) = (count(level, &chroma), count(level, &rgb));
            Ok(SweepLevel {
                level,
                chroma_pixels: c,
                rgb_pixels: r,
                chroma_retained: frac(c, c_ref),
                rgb_retained: frac(r, r_ref),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiObjectResult {
    pub index: usize,
    pub pick: Rgb8,
    /// True bounding box: (left, top, right, bottom).
    pub bbox: (usize, usize, usize, usize),
    pub center: Option<(usize, usize)>,
    pub inside: bool,
}

/// Picks each object's color in turn and checks that the located center falls
/// inside that object's true bounding box.
pub fn multi_object(s: &Scenario) -> Result<Vec<MultiObjectResult>> {
    s.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut scene = s.scene_at(0.0);
    for shape in scene.shapes.iter_mut() {
        shape.az += rng.gen_range(-1.0..=1.0);
        shape.el += rng.gen_range(-1.0..=1.0);
    }
    let frame = render(&scene, s.initial_pose, &s.intrinsics);
    scene
        .shapes
        .iter()
        .enumerate()
        .map(|(index, shape)| {
            let pick = Rgb565::narrow(shape.color).widen();
            let t = threshold_from_pick(pick, s.mode, s.margins)?;
            let region = locate(&segment(&frame, &t), &s.scan);
            let cov = coverage(shape, s.initial_pose, &s.intrinsics);
            let bbox = mask_bbox(&cov).unwrap_or_default();
            let center = region.map(|r| (r.center_x, r.center_y));
            let inside = center
                .is_some_and(|(x, y)| bbox.0 <= x && x <= bbox.2 && bbox.1 <= y && y <= bbox.3);
            Ok(MultiObjectResult { index, pick, bbox, center, inside })
        })
        .collect()
}

/// (left, top, right, bottom) of the set pixels.
pub fn mask_bbox(m: &PackedBinaryMask) -> Option<(usize, usize, usize, usize)> {
    let mut b: Option<(usize, usize, usize, usize)> = None;
    for y in 0..m.height() {
        for x in 0..m.width() {
            if m.is_set(x as isize, y as isize) {
                b = Some(match b {
                    None => (x, y, x, y),
                    Some((l, t, r, bo)) => (l.min(x), t.min(y), r.max(x), bo.max(y)),
                });
            }
        }
    }
    b
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchResult {
    pub iterations: usize,
    pub rgb_pixels_per_sec: f64,
    pub chroma_pixels_per_sec: f64,
    /// Frames per second at 320x240 implied by the pixel rates.
    pub rgb_qvga_fps: f64,
    pub chroma_qvga_fps: f64,
    /// Both packed masks equal the unpacked reference.
    pub oracle_match: bool,
}

pub fn bench_segmentation(frame: &Frame, pick: Rgb8, margins: PickMargins, iterations: usize) -> Result<BenchResult> {
    if iterations == 0 {
        return Err(Error::Param("iterations must be >= 1".into()));
    }
    let rgb = threshold_from_pick(pick, SegmentMode::Rgb, margins)?;
    let chroma = threshold_from_pick(pick, SegmentMode::Chroma, margins)?;
    let (Threshold::Rgb(rt), Threshold::Chroma(ct)) = (rgb, chroma) else {
        unreachable!("threshold_from_pick honors the mode");
    };
    let n = (frame.width() * frame.height()) as f64;
    let mut ones = 0usize;
    let start = Instant::now();
    for _ in 0..iterations {
        ones += segment_rgb(std::hint::black_box(frame), &rt).count_ones();
    }
    let rgb_secs = start.elapsed().as_secs_f64().max(1e-9);
    let start = Instant::now();
    for _ in 0..iterations {
        ones += segment_chroma(std::hint::black_box(frame), &ct).count_ones();
    }
    let chroma_secs = start.elapsed().as_secs_f64().max(1e-9);
    std::hint::black_box(ones);
    let oracle_match = matches_unpacked(&segment_rgb(frame, &rt), &segment_unpacked(frame, &rgb))
        && matches_unpacked(&segment_chroma(frame, &ct), &segment_unpacked(frame, &chroma));
    let rgb_pps = n * iterations as f64 / rgb_secs;
    let chroma_pps = n * iterations as f64 / chroma_secs;
    let qvga = (crate::imaging::QVGA_WIDTH * crate::imaging::QVGA_HEIGHT) as f64;
    Ok(BenchResult {
        iterations,
        rgb_pixels_per_sec: rgb_pps,
        chroma_pixels_per_sec: chroma_pps,
        rgb_qvga_fps: rgb_pps / qvga,
        chroma_qvga_fps: chroma_pps / qvga,
        oracle_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec_from_errors(es: &[(f64, f64)], t: f64) -> TrajectoryRecord {
        TrajectoryRecord {
            rows: es
                .iter()
                .enumerate()
                .map(|(k, &(ex, ey))| TrajectoryRow {
                    t: k as f64 * t,
                    ex,
                    ey,
                    ux: 0.0,
                    uy: 0.0,
                    pan: 0.0,
                    tilt: 0.0,
                    cx: 160.0 + ex,
                    cy: 120.0 + ey,
                    found: true,
                })
                .collect(),
        }
    }

    #[test]
    fn settling_of_simple_trajectories() {
        let zero = rec_from_errors(&[(0.0, 0.0); 10], 0.1);
        assert_eq!(settling_time(&zero, 3.0), Some(0.0));
        let stuck = rec_from_errors(&[(50.0, 0.0); 10], 0.1);
        assert_eq!(settling_time(&stuck, 3.0), None);
    }

    #[test]
    fn settling_of_exponential_decay() {
        // e(t) = 160 exp(-2.5 t): inside 2% of 160 once t > ln(50) / 2.5 = 1.5648 s
        let dt = 0.001;
        let es: Vec<(f64, f64)> = (0..4000).map(|k| (160.0 * (-2.5 * k as f64 * dt).exp(), 0.0)).collect();
        let rec = rec_from_errors(&es, dt);
        let ts = settling_time(&rec, 0.02 * 160.0).unwrap();
        assert!((ts - 50f64.ln() / 2.5).abs() <= dt, "{ts}");
        assert!((default_band(&rec) - 3.2).abs() < 1e-12);
    }

    #[test]
    fn lost_frames_break_settling() {
        let mut rec = rec_from_errors(&[(0.0, 0.0); 5], 0.1);
        rec.rows[3].found = false;
        assert!((settling_time(&rec, 3.0).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn overshoot_of_known_trajectory() {
        let rec = rec_from_errors(&[(-100.0, 2.0), (-20.0, 1.0), (8.0, -1.0), (0.0, 0.0)], 0.1);
        assert!((overshoot_pct(&rec, 3.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn circle_stats_examples() {
        let pts: Vec<(f64, f64)> = (0..36)
            .map(|i| {
                let a = i as f64 * TAU / 36.0;
                (10.0 + 87.57 * a.cos(), -4.0 + 87.57 * a.sin())
            })
            .collect();
        let (m, s) = circle_stats(&pts).unwrap();
        assert!((m - 87.57).abs() < 1e-9 && s < 1e-9);
        assert_eq!(circle_stats(&[(3.0, 3.0); 5]).unwrap(), (0.0, 0.0));
        assert!(circle_stats(&[(0.0, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(1.0), "1");
        assert_eq!(fmt_sig6(-152.0), "-152");
        assert_eq!(fmt_sig6(0.0917431192660), "0.0917431");
        assert_eq!(fmt_sig6(1.23456789), "1.23457");
        assert_eq!(fmt_sig6(999999.7), "1e6");
        assert_eq!(fmt_sig6(123456.4), "123456");
        assert_eq!(fmt_sig6(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig6(f64::NAN), "nan");
        assert_eq!(fmt_sig6(-1e-12), "-1e-12");
    }

    #[test]
    fn empty_record_is_header_only() {
        assert_eq!(TrajectoryRecord::default().to_csv(), format!("{CSV_HEADER}\n"));
        assert_eq!(TrajectoryRecord::from_csv(&format!("{CSV_HEADER}\n")).unwrap().rows.len(), 0);
        assert!(TrajectoryRecord::from_csv("t,x\n").is_err());
    }

    #[test]
    fn presets_validate() {
        for kind in [
            ScenarioKind::StepTrack,
            ScenarioKind::ClockMotion,
            ScenarioKind::IlluminationSweep,
            ScenarioKind::MultiObject,
            ScenarioKind::SegmentOnly,
        ] {
            let s = Scenario::preset(kind);
            s.validate().unwrap();
            assert_eq!(kind.name().parse::<ScenarioKind>().unwrap(), kind);
        }
    }

    #[test]
    fn fixed_centered_object_is_equilibrium() {
        let mut s = Scenario::preset(ScenarioKind::StepTrack);
        s.motion = Motion::Fixed { az: 0.0, el: 0.0 };
        let (rec, m) = run_scenario(&s).unwrap();
        for r in &rec.rows {
            assert!(r.found);
            assert!(r.ex.abs() <= 1.0 && r.ey.abs() <= 1.0);
        }
        let last = rec.rows.last().unwrap();
        let prev = &rec.rows[rec.rows.len() - 2];
        assert!((last.ux - prev.ux).abs() < 1e-9 && (last.uy - prev.uy).abs() < 1e-9);
        assert_eq!(m.lost_frames, 0);
    }

    #[test]
    fn lost_object_holds_command() {
        let mut s = Scenario::preset(ScenarioKind::StepTrack);
        // far outside the field of view
        s.motion = Motion::Fixed { az: 80.0, el: 0.0 };
        s.duration = 1.0;
        let (rec, m) = run_scenario(&s).unwrap();
        assert_eq!(m.lost_frames, rec.rows.len());
        assert!(rec.rows.iter().all(|r| r.ux == 0.0 && r.uy == 0.0 && r.pan == 0.0));
    }

    #[test]
    fn infeasible_spec_propagates() {
        let mut s = Scenario::preset(ScenarioKind::StepTrack);
        s.spec.ts = 10.0;
        assert!(matches!(run_scenario(&s), Err(Error::Infeasible { .. })));
        s.tracking = false;
        assert!(run_scenario(&s).is_ok());
    }

    #[test]
    fn bench_reports_positive_rates() {
        let s = Scenario::preset(ScenarioKind::SegmentOnly);
        let frame = s.frame_at(0.0, CameraPose::default());
        let b = bench_segmentation(&frame, s.picked_color(), s.margins, 2).unwrap();
        assert!(b.rgb_pixels_per_sec > 0.0 && b.chroma_pixels_per_sec > 0.0);
        assert!(b.oracle_match);
        assert!((b.rgb_qvga_fps - b.rgb_pixels_per_sec / 76800.0).abs() < 1e-6 * b.rgb_qvga_fps);
        assert!(bench_segmentation(&frame, s.picked_color(), s.margins, 0).is_err());
    }
}

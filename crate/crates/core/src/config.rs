//! Flat `key = value` scenario files.
//!
//! Blank lines and `#` comments are ignored. `kind` selects the preset the
//! remaining keys are applied on top of, wherever it appears in the file.
//! `shape` may be repeated; each occurrence appends a static shape.

use crate::control::PlantModel;
use crate::harness::{Motion, Scenario, ScenarioKind};
use crate::imaging::{Rgb8, Shape};
use crate::region::StopRule;
use crate::{Error, Result};

/// Every recognized key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("kind", "step_track | clock_motion | illumination_sweep | multi_object | segment_only"),
    ("duration", "simulated seconds"),
    ("sample_period", "seconds per frame and controller update"),
    ("fps", "alternative to sample_period"),
    ("seed", "integer seed for randomized placement"),
    ("tracking", "true | false"),
    ("width", "frame width, px"),
    ("height", "frame height, px"),
    ("ppd_x", "horizontal pixels per degree"),
    ("ppd_y", "vertical pixels per degree"),
    ("pan_k", "pan servo gain, deg per command unit"),
    ("pan_tau", "pan servo time constant, s"),
    ("tilt_k", "tilt servo gain, deg per command unit"),
    ("tilt_tau", "tilt servo time constant, s"),
    ("ts", "closed-loop settling time, s"),
    ("po", "closed-loop percent overshoot"),
    ("initial_pan", "camera pan at t = 0, deg"),
    ("initial_tilt", "camera tilt at t = 0, deg"),
    ("segmenter", "chroma | rgb"),
    ("rgb_margin", "RGB box half width, counts"),
    ("chroma_margin", "rg box half width"),
    ("i_min", "minimum luminance R+G+B for chroma matches"),
    ("pick", "picked color r,g,b (default: object color)"),
    ("min_width", "initial run width, px"),
    ("stop_rule", "departure | start_pixel"),
    ("band", "settling band, px (default 2% of initial error, >= 3)"),
    ("background", "background color r,g,b"),
    ("illumination", "scene illumination in [0, 1]"),
    ("levels", "sweep illumination levels, comma separated"),
    ("object_shape", "disk | triangle | rectangle"),
    ("object_size", "object half extent, deg"),
    ("object_color", "object color r,g,b"),
    ("object_az", "fixed object azimuth, deg"),
    ("object_el", "fixed object elevation, deg"),
    ("motion", "fixed | circular"),
    ("circle_radius", "circular path radius, deg"),
    ("circle_radius_px", "circular path radius, px (uses ppd_x)"),
    ("circle_period", "seconds per revolution"),
    ("circle_phase", "starting angle, rad"),
    ("shape", "extra shape: kind az el size r,g,b"),
];

fn parse_num(v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Param(format!("expected a number, got {v:?}")))
}

fn parse_int<T: std::str::FromStr>(v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Param(format!("expected an integer, got {v:?}")))
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(Error::Param(format!("expected true or false, got {v:?}"))),
    }
}

pub fn parse_color(v: &str) -> Result<Rgb8> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Param(format!("expected r,g,b, got {v:?}")));
    }
    let c: Vec<u8> = parts.iter().map(|p| parse_int(p)).collect::<Result<_>>()?;
    Ok(Rgb8::new(c[0], c[1], c[2]))
}

fn circle_mut(s: &mut Scenario) -> (&mut f64, &mut f64, &mut f64) {
    if !matches!(s.motion, Motion::Circular { .. }) {
        let (az, el) = s.motion.position(0.0);
        s.motion = Motion::Circular {
            center_az: az,
            center_el: el,
            radius: 10.0,
            period: 3.82,
            phase: 0.0,
        };
    }
    match &mut s.motion {
        Motion::Circular { radius, period, phase, .. } => (radius, period, phase),
        Motion::Fixed { .. } => unreachable!(),
    }
}

fn set_fixed(s: &mut Scenario, az: Option<f64>, el: Option<f64>) {
    let (a, e) = match s.motion {
        Motion::Fixed { az, el } => (az, el),
        Motion::Circular { center_az, center_el, .. } => (center_az, center_el),
    };
    let (a, e) = (az.unwrap_or(a), el.unwrap_or(e));
    match &mut s.motion {
        Motion::Fixed { az, el } => (*az, *el) = (a, e),
        Motion::Circular { center_az, center_el, .. } => (*center_az, *center_el) = (a, e),
    }
}

/// Applies one `key = value` setting.
pub fn apply(s: &mut Scenario, key: &str, value: &str) -> Result<()> {
    let v = value.trim();
    match key {
        "kind" => {
            let kind: ScenarioKind = v.parse()?;
            if kind != s.kind {
                *s = Scenario::preset(kind);
            }
        }
        "duration" => s.duration = parse_num(v)?,
        "sample_period" => s.sample_period = parse_num(v)?,
        "fps" => s.sample_period = 1.0 / parse_num(v)?,
        "seed" => s.seed = parse_int(v)?,
        "tracking" => s.tracking = parse_bool(v)?,
        "width" => s.intrinsics.width = parse_int(v)?,
        "height" => s.intrinsics.height = parse_int(v)?,
        "ppd_x" => s.intrinsics.ppd_x = parse_num(v)?,
        "ppd_y" => s.intrinsics.ppd_y = parse_num(v)?,
        "pan_k" => s.pan.model = PlantModel::new(parse_num(v)?, s.pan.model.tau)?,
        "pan_tau" => s.pan.model = PlantModel::new(s.pan.model.k, parse_num(v)?)?,
        "tilt_k" => s.tilt.model = PlantModel::new(parse_num(v)?, s.tilt.model.tau)?,
        "tilt_tau" => s.tilt.model = PlantModel::new(s.tilt.model.k, parse_num(v)?)?,
        "ts" => s.spec.ts = parse_num(v)?,
        "po" => s.spec.po = parse_num(v)?,
        "initial_pan" => s.initial_pose.pan = parse_num(v)?,
        "initial_tilt" => s.initial_pose.tilt = parse_num(v)?,
        "segmenter" => s.mode = v.parse()?,
        "rgb_margin" => s.margins.rgb = parse_int(v)?,
        "chroma_margin" => s.margins.chroma = parse_num(v)?,
        "i_min" => s.margins.i_min = parse_int(v)?,
        "pick" => s.pick = Some(parse_color(v)?),
        "min_width" => s.scan.min_width = parse_int::<usize>(v)?.max(1),
        "stop_rule" => {
            s.scan.stop_rule = match v {
                "departure" => StopRule::Departure,
                "start_pixel" => StopRule::StartPixel,
                _ => return Err(Error::Param(format!("unknown stop rule {v:?}"))),
            }
        }
        "band" => s.band = Some(parse_num(v)?),
        "background" => s.scene.background = parse_color(v)?,
        "illumination" => s.scene.illumination = parse_num(v)?,
        "levels" => s.levels = v.split(',').map(|x| parse_num(x.trim())).collect::<Result<_>>()?,
        "object_shape" => s.scene.shapes[0].kind = v.parse()?,
        "object_size" => s.scene.shapes[0].size = parse_num(v)?,
        "object_color" => s.scene.shapes[0].color = parse_color(v)?,
        "object_az" => set_fixed(s, Some(parse_num(v)?), None),
        "object_el" => set_fixed(s, None, Some(parse_num(v)?)),
        "motion" => match v {
            "fixed" => {
                let (az, el) = s.motion.position(0.0);
                s.motion = Motion::Fixed { az, el };
            }
            "circular" => {
                circle_mut(s);
            }
            _ => return Err(Error::Param(format!("unknown motion {v:?}"))),
        },
        "circle_radius" => *circle_mut(s).0 = parse_num(v)?,
        "circle_radius_px" => {
            let ppd = s.intrinsics.ppd_x;
            *circle_mut(s).0 = parse_num(v)? / ppd;
        }
        "circle_period" => *circle_mut(s).1 = parse_num(v)?,
        "circle_phase" => *circle_mut(s).2 = parse_num(v)?,
        "shape" => {
            let f: Vec<&str> = v.split_whitespace().collect();
            if f.len() != 5 {
                return Err(Error::Param(format!("shape needs `kind az el size r,g,b`, got {v:?}")));
            }
            s.scene.shapes.push(Shape::new(
                f[0].parse()?,
                parse_num(f[1])?,
                parse_num(f[2])?,
                parse_num(f[3])?,
                parse_color(f[4])?,
            ));
        }
        _ => return Err(Error::Param(format!("unknown key {key:?}"))),
    }
    Ok(())
}

fn split_line(line: &str) -> Option<std::result::Result<(&str, &str), ()>> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return None;
    }
    Some(
        line.split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or(()),
    )
}

/// Parses a scenario file. `kind` is applied first, then every other key in order.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        match split_line(line) {
            None => {}
            Some(Ok(kv)) => entries.push((i + 1, kv)),
            Some(Err(())) => {
                return Err(Error::Config { line: i + 1, msg: format!("expected key = value, got {line:?}") })
            }
        }
    }
    let kind = entries
        .iter()
        .rev()
        .find(|(_, (k, _))| *k == "kind")
        .map(|(line, (_, v))| {
            v.parse::<ScenarioKind>()
                .map_err(|e| Error::Config { line: *line, msg: e.to_string() })
        })
        .transpose()?
        .unwrap_or(ScenarioKind::StepTrack);
    let mut s = Scenario::preset(kind);
    for (line, (k, v)) in entries {
        if k == "kind" {
            continue;
        }
        apply(&mut s, k, v).map_err(|e| Error::Config { line, msg: e.to_string() })?;
    }
    Ok(s)
}

/// Applies `key=value` overrides, e.g. from the command line.
pub fn apply_overrides<'a>(s: &mut Scenario, overrides: impl IntoIterator<Item = &'a str>) -> Result<()> {
    for o in overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Error::Param(format!("override {o:?} is not key=value")))?;
        apply(s, k.trim(), v)?;
    }
    Ok(())
}

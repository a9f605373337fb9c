//! PI gain design by pole placement and the discrete incremental control law.
//!
//! With a first-order plant `K / (tau s + 1)` and a PI controller
//! `kp + ki / s` in unity feedback, the closed loop is
//!
//! ```text
//!            kp K s + ki K
//! T(s) = -------------------------
//!        tau s^2 + (1 + kp K) s + ki K
//! ```
//!
//! Matching the denominator to `s^2 + 2 xi wn s + wn^2` with `xi wn = 4 / ts`
//! (2% settling) and `xi` from the percent overshoot gives both gains. The
//! controller is discretized with the bilinear transform
//! `s = 2 (z - 1) / (T (z + 1))`, which yields the incremental law
//! `u[k] = u[k-1] + c1 e[k-1] + c0 e[k]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// First-order plant: steady-state gain and time constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantModel {
    pub k: f64,
    /// Seconds.
    pub tau: f64,
}

impl PlantModel {
    pub fn new(k: f64, tau: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) || !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Param(format!("plant needs K > 0 and tau > 0, got K={k} tau={tau}")));
        }
        Ok(Self { k, tau })
    }

    /// The same dynamics seen through a sensor with gain `scale` (e.g. pixels per degree).
    pub fn scaled(&self, scale: f64) -> Self {
        Self { k: self.k * scale, tau: self.tau }
    }
}

/// Closed-loop requirements: 2% settling time and percent overshoot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopSpec {
    pub ts: f64,
    pub po: f64,
}

impl LoopSpec {
    pub fn new(ts: f64, po: f64) -> Result<Self> {
        if !(ts > 0.0 && ts.is_finite()) {
            return Err(Error::Param(format!("settling time must be > 0, got {ts}")));
        }
        if !(po > 0.0 && po < 100.0) {
            return Err(Error::Overshoot(po));
        }
        Ok(Self { ts, po })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiGains {
    pub kp: f64,
    /// 1 / s.
    pub ki: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesignDiagnostics {
    /// Damping factor.
    pub xi: f64,
    /// Natural frequency, rad/s.
    pub wn: f64,
    pub poles: [Complex64; 2],
}

/// Damping factor giving percent overshoot `po` for a standard second-order system.
pub fn damping_from_po(po: f64) -> Result<f64> {
    if !(po > 0.0 && po < 100.0) {
        return Err(Error::Overshoot(po));
    }
    let l = (po / 100.0).ln();
    Ok(-l / (PI * PI + l * l).sqrt())
}

/// Percent overshoot of a standard second-order system with damping `xi` in (0, 1).
pub fn overshoot_from_damping(xi: f64) -> f64 {
    100.0 * (-xi * PI / (1.0 - xi * xi).sqrt()).exp()
}

/// Roots of `a s^2 + b s + c`.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = Complex64::new(b * b - 4.0 * a * c, 0.0).sqrt();
    let two_a = 2.0 * a;
    [(-b + disc) / two_a, (-b - disc) / two_a]
}

pub fn design_gains(plant: &PlantModel, spec: &LoopSpec) -> Result<(PiGains, DesignDiagnostics)> {
    let xi = damping_from_po(spec.po)?;
    let limit = 8.0 * plant.tau;
    if spec.ts > limit {
        return Err(Error::Infeasible { ts: spec.ts, limit });
    }
    let wn = 4.0 / (spec.ts * xi);
    let l = (spec.po / 100.0).ln();
    let kp = (8.0 * plant.tau / spec.ts - 1.0) / plant.k;
    let ki = 16.0 * plant.tau * (PI * PI + l * l) / (plant.k * spec.ts * spec.ts * l * l);
    let gains = PiGains { kp: kp.max(0.0), ki };
    let poles = closed_loop_tf(plant, &gains).poles();
    Ok((gains, DesignDiagnostics { xi, wn, poles }))
}

/// Closed-loop transfer function coefficients, highest power first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedLoopTf {
    /// `[s^1, s^0]`
    pub num: [f64; 2],
    /// `[s^2, s^1, s^0]`
    pub den: [f64; 3],
}

impl ClosedLoopTf {
    pub fn dc_gain(&self) -> f64 {
        self.num[1] / self.den[2]
    }

    pub fn poles(&self) -> [Complex64; 2] {
        quadratic_roots(self.den[0], self.den[1], self.den[2])
    }
}

pub fn closed_loop_tf(plant: &PlantModel, gains: &PiGains) -> ClosedLoopTf {
    let (k, tau) = (plant.k, plant.tau);
    ClosedLoopTf {
        num: [gains.kp * k, gains.ki * k],
        den: [tau, 1.0 + gains.kp * k, gains.ki * k],
    }
}

/// Coefficients of the incremental law: `c0` weights `e[k]`, `c1` weights `e[k-1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiCoefficients {
    pub c0: f64,
    pub c1: f64,
}

pub fn discretize(gains: &PiGains, t: f64) -> Result<PiCoefficients> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Param(format!("sampling period must be > 0, got {t}")));
    }
    let half = gains.ki * t / 2.0;
    Ok(PiCoefficients {
        c0: half + gains.kp,
        c1: half - gains.kp,
    })
}

/// Runtime state of one controller axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControllerState {
    pub u_prev: f64,
    pub e_prev: f64,
    /// Sampling period, seconds.
    pub t: f64,
    pub u_min: f64,
    pub u_max: f64,
}

impl ControllerState {
    pub fn new(t: f64, u_min: f64, u_max: f64) -> Result<Self> {
        Self::with_command(t, u_min, u_max, 0.0)
    }

    /// Starts from a held command `u0` (clamped into the limits).
    pub fn with_command(t: f64, u_min: f64, u_max: f64, u0: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Param(format!("sampling period must be > 0, got {t}")));
        }
        if !(u_min < u_max) {
            return Err(Error::Param(format!("command limits [{u_min}, {u_max}] are empty")));
        }
        Ok(Self {
            u_prev: u0.clamp(u_min, u_max),
            e_prev: 0.0,
            t,
            u_min,
            u_max,
        })
    }
}

/// One update of the incremental PI law with output clamping.
///
/// The clamped command is what gets stored, so the integrator cannot wind up
/// while saturated.
pub fn pi_step(state: ControllerState, c: &PiCoefficients, e: f64) -> Result<(f64, ControllerState)> {
    if !e.is_finite() {
        return Err(Error::Input(e));
    }
    let raw = state.u_prev + state.e_prev * c.c1 + e * c.c0;
    let u = raw.clamp(state.u_min, state.u_max);
    Ok((
        u,
        ControllerState {
            u_prev: u,
            e_prev: e,
            ..state
        },
    ))
}

/// Step response of the sampled loop: discrete PI driving the zero-order-hold
/// plant, reference `r`, output sampled once per period.
pub fn discrete_step_response(
    plant: &PlantModel,
    gains: &PiGains,
    t: f64,
    r: f64,
    steps: usize,
) -> Result<Vec<f64>> {
    let c = discretize(gains, t)?;
    let mut state = ControllerState::new(t, f64::MIN, f64::MAX)?;
    let a = (-t / plant.tau).exp();
    let mut y = 0.0;
    let mut out = Vec::with_capacity(steps + 1);
    for _ in 0..=steps {
        out.push(y);
        let (u, s) = pi_step(state, &c, r - y)?;
        state = s;
        y = a * y + (1.0 - a) * plant.k * u;
    }
    Ok(out)
}

/// Overshoot (% of `r`) and 2%-band settling time of a sampled response.
pub fn step_metrics(y: &[f64], r: f64, t: f64) -> (f64, Option<f64>) {
    let peak = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let overshoot = ((peak - r) / r * 100.0).max(0.0);
    let band = 0.02 * r.abs();
    let settle = match y.iter().rposition(|v| (v - r).abs() > band) {
        None => Some(0.0),
        Some(i) if i + 1 < y.len() => Some((i + 1) as f64 * t),
        Some(_) => None,
    };
    (overshoot, settle)
}

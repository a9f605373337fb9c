//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's own helpers for the quantity being checked.

#![allow(dead_code)]

use std::collections::VecDeque;

use rand::Rng;

/// 5/6-bit to 8-bit widening by bit replication.
pub fn widen(word: u16) -> (u8, u8, u8) {
    let r5 = (word >> 11) & 0x1f;
    let g6 = (word >> 5) & 0x3f;
    let b5 = word & 0x1f;
    (((r5 << 3) | (r5 >> 2)) as u8, ((g6 << 2) | (g6 >> 4)) as u8, ((b5 << 3) | (b5 >> 2)) as u8)
}

#[derive(Clone, Copy, Debug)]
pub enum OracleThreshold {
    Box { lo: [u8; 3], hi: [u8; 3] },
    Chroma { r: (f64, f64), g: (f64, f64), i_min: u32 },
}

impl OracleThreshold {
    pub fn accepts(&self, word: u16) -> bool {
        let (r, g, b) = widen(word);
        match *self {
            OracleThreshold::Box { lo, hi } => {
                let c = [r, g, b];
                (0..3).all(|i| lo[i] <= c[i] && c[i] <= hi[i])
            }
            OracleThreshold::Chroma { r: rr, g: gr, i_min } => {
                let i = r as u32 + g as u32 + b as u32;
                if i < i_min || i == 0 {
                    return false;
                }
                let cr = r as f64 / i as f64;
                let cg = g as f64 / i as f64;
                rr.0 <= cr && cr <= rr.1 && gr.0 <= cg && cg <= gr.1
            }
        }
    }
}

/// Row-major boolean classification of raw words.
pub fn classify(words: &[u16], t: &OracleThreshold) -> Vec<bool> {
    words.iter().map(|&w| t.accepts(w)).collect()
}

/// LSB-first packing into 32-bit words, trailing bits zero.
pub fn pack(bits: &[bool]) -> Vec<u32> {
    let mut out = vec![0u32; bits.len().div_ceil(32)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out[i / 32] |= 1 << (i % 32);
        }
    }
    out
}

/// Grows an 8-connected blob by repeatedly attaching a random neighbor of a random member.
pub fn random_blob<R: Rng>(rng: &mut R, w: usize, h: usize, target: usize) -> Vec<bool> {
    let mut grid = vec![false; w * h];
    let mut members = vec![(rng.gen_range(0..w), rng.gen_range(0..h))];
    grid[members[0].1 * w + members[0].0] = true;
    let mut attempts = 0;
    while members.len() < target && attempts < target * 50 {
        attempts += 1;
        let (x, y) = members[rng.gen_range(0..members.len())];
        let nx = x as isize + rng.gen_range(-1..=1);
        let ny = y as isize + rng.gen_range(-1..=1);
        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
            continue;
        }
        let (nx, ny) = (nx as usize, ny as usize);
        if !grid[ny * w + nx] {
            grid[ny * w + nx] = true;
            members.push((nx, ny));
        }
    }
    grid
}

/// Breadth-first 8-connected fill; returns (left, right, top, bottom) and the pixel count.
pub fn bfs_bbox(grid: &[bool], w: usize, h: usize, seed: (usize, usize)) -> ((usize, usize, usize, usize), usize) {
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::from([seed]);
    seen[seed.1 * w + seed.0] = true;
    let (mut l, mut r, mut t, mut b) = (seed.0, seed.0, seed.1, seed.1);
    let mut n = 0;
    while let Some((x, y)) = queue.pop_front() {
        n += 1;
        l = l.min(x);
        r = r.max(x);
        t = t.min(y);
        b = b.max(y);
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let nx = x as isize + dx;
                let ny = y as isize + dy;
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let i = ny as usize * w + nx as usize;
                if grid[i] && !seen[i] {
                    seen[i] = true;
                    queue.push_back((nx as usize, ny as usize));
                }
            }
        }
    }
    ((l, r, t, b), n)
}

/// Continuous PI loop around a first-order plant, integrated with RK4 at
/// 1000 substeps per `sample`. Returns y at every multiple of `sample` up to `horizon`.
pub fn continuous_pi_response(k: f64, tau: f64, kp: f64, ki: f64, r: f64, sample: f64, horizon: f64) -> Vec<f64> {
    let substeps = 1000;
    let dt = sample / substeps as f64;
    // State: plant output y and integral of the error z.
    let f = |y: f64, z: f64| {
        let e = r - y;
        let u = kp * e + ki * z;
        ((k * u - y) / tau, e)
    };
    let n = (horizon / sample).round() as usize;
    let (mut y, mut z) = (0.0f64, 0.0f64);
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(y);
        for _ in 0..substeps {
            let (a1, b1) = f(y, z);
            let (a2, b2) = f(y + 0.5 * dt * a1, z + 0.5 * dt * b1);
            let (a3, b3) = f(y + 0.5 * dt * a2, z + 0.5 * dt * b2);
            let (a4, b4) = f(y + dt * a3, z + dt * b3);
            y += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            z += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
    }
    out
}

/// Discrete loop written out from the incremental law and the exact first-order update.
pub fn discrete_pi_response(k: f64, tau: f64, kp: f64, ki: f64, r: f64, t: f64, horizon: f64) -> Vec<f64> {
    let c0 = ki * t / 2.0 + kp;
    let c1 = ki * t / 2.0 - kp;
    let a = (-t / tau).exp();
    let n = (horizon / t).round() as usize;
    let (mut y, mut u, mut e_prev) = (0.0f64, 0.0f64, 0.0f64);
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(y);
        let e = r - y;
        u += c1 * e_prev + c0 * e;
        e_prev = e;
        y = a * y + (1.0 - a) * k * u;
    }
    out
}

/// Percent overshoot of a second-order system with damping `xi`.
pub fn overshoot_of(xi: f64) -> f64 {
    100.0 * (-xi * std::f64::consts::PI / (1.0 - xi * xi).sqrt()).exp()
}

//! Locating the first object in a binary mask.
//!
//! The mask is scanned from the top-left corner, row by row, for a horizontal
//! run of set pixels at least `min_width` long. From the rightmost pixel of that
//! run the outer boundary is walked counter-clockwise with a 3x3 (Moore)
//! neighborhood: around the current pixel, the search starts at the position
//! after the last background pixel seen and proceeds counter-clockwise until a
//! set pixel is met, which becomes the new center. Every contour pixel updates
//! the upper, lower, left and right limits.

use crate::segmentation::PackedBinaryMask;

/// Moore neighborhood offsets in counter-clockwise order as seen on screen
/// (y grows downwards), starting east.
const DIRS: [(isize, isize); 8] = [
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

const EAST: usize = 0;

fn dir_index(dx: isize, dy: isize) -> usize {
    DIRS.iter()
        .position(|&d| d == (dx, dy))
        .expect("offset is a Moore neighbor")
}

/// When the boundary walk ends.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StopRule {
    /// Stop once the start pixel is about to be left the same way it was left
    /// the first time. Handles one-pixel-wide necks through the start pixel.
    #[default]
    Departure,
    /// Stop as soon as the start pixel is reached again.
    StartPixel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanParams {
    /// Shortest run accepted as the initial line.
    pub min_width: usize,
    pub stop_rule: StopRule,
    /// Also flood-fill the component to report its pixel count and centroid.
    pub fill_count: bool,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self {
            min_width: 3,
            stop_rule: StopRule::Departure,
            fill_count: false,
        }
    }
}

impl ScanParams {
    pub fn with_min_width(min_width: usize) -> Self {
        Self {
            min_width: min_width.max(1),
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InitialRun {
    pub row: usize,
    pub left: usize,
    pub right: usize,
}

/// Limits and center of a detected pixel group. All limits are inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionDescriptor {
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
    /// Midpoint of the horizontal limits, rounded toward zero.
    pub center_x: usize,
    /// Midpoint of the vertical limits, rounded toward zero.
    pub center_y: usize,
    pub contour_length: usize,
    pub pixel_count: Option<usize>,
    /// Mean pixel position of the 8-connected component.
    pub centroid: Option<(f64, f64)>,
}

impl RegionDescriptor {
    pub fn point(x: usize, y: usize) -> Self {
        Self {
            top: y,
            bottom: y,
            left: x,
            right: x,
            center_x: x,
            center_y: y,
            contour_length: 1,
            pixel_count: None,
            centroid: None,
        }
    }

    fn include(&mut self, x: usize, y: usize) {
        self.top = self.top.min(y);
        self.bottom = self.bottom.max(y);
        self.left = self.left.min(x);
        self.right = self.right.max(x);
    }

    fn finish(&mut self, contour_length: usize) {
        self.center_x = (self.left + self.right) / 2;
        self.center_y = (self.top + self.bottom) / 2;
        self.contour_length = contour_length;
    }

    pub fn width(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn height(&self) -> usize {
        self.bottom - self.top + 1
    }

    pub const CSV_HEADER: &'static str =
        "top,bottom,left,right,center_x,center_y,contour_length,pixel_count";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.top,
            self.bottom,
            self.left,
            self.right,
            self.center_x,
            self.center_y,
            self.contour_length,
            self.pixel_count.map(|n| n.to_string()).unwrap_or_default()
        )
    }
}

impl std::fmt::Display for RegionDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "region x {}..{} y {}..{} center ({}, {}) contour {} px",
            self.left, self.right, self.top, self.bottom, self.center_x, self.center_y, self.contour_length
        )?;
        if let Some(n) = self.pixel_count {
            write!(f, " area {n} px")?;
        }
        if let Some((cx, cy)) = self.centroid {
            write!(f, " centroid ({cx:.2}, {cy:.2})")?;
        }
        Ok(())
    }
}

/// Topmost, then leftmost, run of at least `min_width` contiguous set pixels.
pub fn find_initial_run(mask: &PackedBinaryMask, params: &ScanParams) -> Option<InitialRun> {
    let (w, h) = (mask.width(), mask.height());
    let min = params.min_width.max(1);
    let words = mask.words();
    for y in 0..h {
        let mut x = 0;
        while x < w {
            let i = y * w + x;
            if i % 32 == 0 && words[i / 32] == 0 {
                x += 32;
                continue;
            }
            if !mask.bit(i) {
                x += 1;
                continue;
            }
            let left = x;
            while x < w && mask.bit(y * w + x) {
                x += 1;
            }
            if x - left >= min {
                return Some(InitialRun { row: y, left, right: x - 1 });
            }
        }
    }
    None
}

/// Hard cap on the number of walk steps.
pub fn step_cap(mask: &PackedBinaryMask) -> usize {
    4 * mask.width() * mask.height()
}

/// Next contour pixel around `c`, scanning counter-clockwise from the position
/// after `back`. Returns the pixel and the direction from it to the last
/// background cell examined.
fn advance(mask: &PackedBinaryMask, c: (isize, isize), back: usize) -> Option<((isize, isize), usize)> {
    for k in 1..=8 {
        let d = (back + k) % 8;
        let q = (c.0 + DIRS[d].0, c.1 + DIRS[d].1);
        if mask.is_set(q.0, q.1) {
            let pd = DIRS[(back + k - 1) % 8];
            let prev = (c.0 + pd.0, c.1 + pd.1);
            return Some((q, dir_index(prev.0 - q.0, prev.1 - q.1)));
        }
    }
    None
}

fn walk(mask: &PackedBinaryMask, start: (usize, usize), rule: StopRule) -> Vec<(usize, usize)> {
    let s = (start.0 as isize, start.1 as isize);
    let mut path = vec![start];
    let Some((first, mut back)) = advance(mask, s, EAST) else {
        return path;
    };
    let cap = step_cap(mask);
    let mut cur = first;
    loop {
        if cur == s {
            match rule {
                StopRule::StartPixel => break,
                StopRule::Departure => {
                    if advance(mask, cur, back).map(|n| n.0) == Some(first) {
                        break;
                    }
                }
            }
        }
        if path.len() >= cap {
            break;
        }
        path.push((cur.0 as usize, cur.1 as usize));
        // cur always has at least the neighbor it was entered from
        let (next, b) = advance(mask, cur, back).expect("contour pixel has a set neighbor");
        cur = next;
        back = b;
    }
    path
}

/// Twice the signed area of the closed walk; negative for an outer boundary.
fn signed_area2(path: &[(usize, usize)]) -> i64 {
    let n = path.len();
    (0..n)
        .map(|i| {
            let (x0, y0) = (path[i].0 as i64, path[i].1 as i64);
            let (x1, y1) = (path[(i + 1) % n].0 as i64, path[(i + 1) % n].1 as i64);
            x0 * y1 - x1 * y0
        })
        .sum()
}

/// The 8-connected component containing `seed`, in discovery order.
pub fn flood_fill(mask: &PackedBinaryMask, seed: (usize, usize)) -> Vec<(usize, usize)> {
    let w = mask.width();
    let mut seen = vec![false; w * mask.height()];
    let mut stack = vec![seed];
    let mut out = Vec::new();
    seen[seed.1 * w + seed.0] = true;
    while let Some((x, y)) = stack.pop() {
        out.push((x, y));
        for (dx, dy) in DIRS {
            let (nx, ny) = (x as isize + dx, y as isize + dy);
            if mask.is_set(nx, ny) {
                let i = ny as usize * w + nx as usize;
                if !seen[i] {
                    seen[i] = true;
                    stack.push((nx as usize, ny as usize));
                }
            }
        }
    }
    out
}

/// Boundary walk from `start`, which must be a set pixel whose east neighbor is unset.
///
/// Returns the descriptor together with the visited contour pixels in walk order.
pub fn trace_contour_path(
    mask: &PackedBinaryMask,
    start: (usize, usize),
    params: &ScanParams,
) -> (RegionDescriptor, Vec<(usize, usize)>) {
    debug_assert!(mask.is_set(start.0 as isize, start.1 as isize));
    let mut path = walk(mask, start, params.stop_rule);
    let mut component = None;
    if signed_area2(&path) > 0 {
        // The unset pixel east of the start lies in a hole, so the walk went
        // around the hole. Restart from the component's top row instead.
        let pixels = flood_fill(mask, start);
        let top = pixels.iter().map(|p| p.1).min().unwrap_or(start.1);
        let right = pixels
            .iter()
            .filter(|p| p.1 == top)
            .map(|p| p.0)
            .max()
            .unwrap_or(start.0);
        path = walk(mask, (right, top), params.stop_rule);
        component = Some(pixels);
    }

    let mut d = RegionDescriptor::point(path[0].0, path[0].1);
    for &(x, y) in &path {
        d.include(x, y);
    }
    d.finish(path.len());
    if params.fill_count {
        let pixels = component.unwrap_or_else(|| flood_fill(mask, start));
        let n = pixels.len();
        let (sx, sy) = pixels
            .iter()
            .fold((0usize, 0usize), |(sx, sy), &(x, y)| (sx + x, sy + y));
        d.pixel_count = Some(n);
        d.centroid = Some((sx as f64 / n as f64, sy as f64 / n as f64));
    }
    (d, path)
}

pub fn trace_contour(mask: &PackedBinaryMask, start: (usize, usize), params: &ScanParams) -> RegionDescriptor {
    trace_contour_path(mask, start, params).0
}

/// Initial-run scan followed by the contour walk.
pub fn locate(mask: &PackedBinaryMask, params: &ScanParams) -> Option<RegionDescriptor> {
    let run = find_initial_run(mask, params)?;
    Some(trace_contour(mask, (run.right, run.row), params))
}

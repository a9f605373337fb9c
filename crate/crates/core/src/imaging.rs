//! RGB565 pixels, frames and the synthetic camera.

use std::fs;
use std::path::Path;

use crate::plant::{project_exact, CameraIntrinsics, CameraPose};
use crate::{Error, Result};

/// Default frame width (QVGA).
pub const QVGA_WIDTH: usize = 320;
/// Default frame height (QVGA).
pub const QVGA_HEIGHT: usize = 240;

/// A 16-bit pixel: red in bits 15..11, green in 10..5, blue in 4..0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rgb565(pub u16);

impl Rgb565 {
    /// Splits the word into its (r5, g6, b5) fields.
    #[inline]
    pub const fn decode(self) -> (u8, u8, u8) {
        let w = self.0;
        ((w >> 11) as u8, ((w >> 5) & 0x3f) as u8, (w & 0x1f) as u8)
    }

    pub fn encode(r5: u8, g6: u8, b5: u8) -> Result<Self> {
        if r5 > 31 {
            return Err(Error::Range { field: "r5", value: r5.into(), max: 31 });
        }
        if g6 > 63 {
            return Err(Error::Range { field: "g6", value: g6.into(), max: 63 });
        }
        if b5 > 31 {
            return Err(Error::Range { field: "b5", value: b5.into(), max: 31 });
        }
        Ok(Self::pack(r5, g6, b5))
    }

    #[inline]
    const fn pack(r5: u8, g6: u8, b5: u8) -> Self {
        Rgb565(((r5 as u16) << 11) | ((g6 as u16) << 5) | b5 as u16)
    }

    /// Expands to 8 bits per channel by bit replication, so full scale maps to 255.
    #[inline]
    pub const fn widen(self) -> Rgb8 {
        let (r5, g6, b5) = self.decode();
        Rgb8 {
            r: (r5 << 3) | (r5 >> 2),
            g: (g6 << 2) | (g6 >> 4),
            b: (b5 << 3) | (b5 >> 2),
        }
    }

    /// Quantizes an 8-bit color by truncation.
    #[inline]
    pub const fn narrow(c: Rgb8) -> Self {
        Self::pack(c.r >> 3, c.g >> 2, c.b >> 3)
    }
}

/// 8-bit-per-channel working color.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rgb8 {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb8 {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    /// Multiplies every channel by `s` in real arithmetic and rounds down.
    pub fn scaled(self, s: f64) -> Self {
        let f = |v: u8| (v as f64 * s).floor().clamp(0.0, 255.0) as u8;
        Self::new(f(self.r), f(self.g), f(self.b))
    }
}

impl From<Rgb8> for Rgb565 {
    fn from(c: Rgb8) -> Self {
        Rgb565::narrow(c)
    }
}

impl From<Rgb565> for Rgb8 {
    fn from(p: Rgb565) -> Self {
        p.widen()
    }
}

/// A row-major grid of RGB565 pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    pixels: Vec<Rgb565>,
}

impl Frame {
    pub fn filled(width: usize, height: usize, color: Rgb565) -> Self {
        Self {
            width,
            height,
            pixels: vec![color; width * height],
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<Rgb565>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Dimensions {
                expected: width * height,
                found: pixels.len(),
            });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[Rgb565] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [Rgb565] {
        &mut self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb565 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, p: Rgb565) {
        self.pixels[y * self.width + x] = p;
    }

    /// Reads a headerless file of little-endian RGB565 words.
    pub fn read_rgb565(path: impl AsRef<Path>, width: usize, height: usize) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_rgb565_bytes(&bytes, width, height)
    }

    pub fn from_rgb565_bytes(bytes: &[u8], width: usize, height: usize) -> Result<Self> {
        let expected = width * height * 2;
        if bytes.len() < expected {
            return Err(Error::Payload { expected, found: bytes.len() });
        }
        if bytes.len() > expected {
            return Err(Error::Dimensions {
                expected: width * height,
                found: bytes.len() / 2,
            });
        }
        let pixels = bytes
            .chunks_exact(2)
            .map(|b| Rgb565(u16::from_le_bytes([b[0], b[1]])))
            .collect();
        Ok(Self { width, height, pixels })
    }

    pub fn to_rgb565_bytes(&self) -> Vec<u8> {
        self.pixels.iter().flat_map(|p| p.0.to_le_bytes()).collect()
    }

    pub fn write_rgb565(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_rgb565_bytes()).map_err(|e| Error::io(path, e))
    }

    /// Widened 8-bit RGBA bytes, row-major (for canvases and image viewers).
    pub fn to_rgba8(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .flat_map(|p| {
                let c = p.widen();
                [c.r, c.g, c.b, 255]
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    Disk,
    /// Equilateral, apex up.
    Triangle,
    /// Axis-aligned square.
    Rectangle,
}

impl std::str::FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(ShapeKind::Disk),
            "triangle" => Ok(ShapeKind::Triangle),
            "rectangle" => Ok(ShapeKind::Rectangle),
            _ => Err(Error::Param(format!("unknown shape kind {s:?}"))),
        }
    }
}

/// A flat-colored object placed at an angular position in the world.
///
/// `size` is the angular half extent in degrees: the radius of a disk, the
/// circumradius of a triangle, the half side of a rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shape {
    pub kind: ShapeKind,
    pub az: f64,
    pub el: f64,
    pub size: f64,
    pub color: Rgb8,
}

impl Shape {
    pub fn new(kind: ShapeKind, az: f64, el: f64, size: f64, color: Rgb8) -> Self {
        Self { kind, az, el, size, color }
    }

    fn covers(&self, u: f64, v: f64) -> bool {
        // u, v are offsets from the center normalized by the half extent.
        match self.kind {
            ShapeKind::Disk => u * u + v * v <= 1.0,
            ShapeKind::Rectangle => u.abs() <= 1.0 && v.abs() <= 1.0,
            ShapeKind::Triangle => v <= 0.5 && v >= -1.0 + 3f64.sqrt() * u.abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub background: Rgb8,
    pub shapes: Vec<Shape>,
    /// Scalar applied to shape colors, in [0, 1].
    pub illumination: f64,
}

impl Scene {
    pub fn new(background: Rgb8) -> Self {
        Self {
            background,
            shapes: Vec::new(),
            illumination: 1.0,
        }
    }

    pub fn with_shape(mut self, shape: Shape) -> Self {
        self.shapes.push(shape);
        self
    }

    pub fn with_illumination(mut self, illumination: f64) -> Self {
        self.illumination = illumination;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.illumination) {
            return Err(Error::Param(format!(
                "illumination {} outside [0, 1]",
                self.illumination
            )));
        }
        if let Some(s) = self.shapes.iter().find(|s| !(s.size > 0.0)) {
            return Err(Error::Param(format!("shape size {} must be > 0", s.size)));
        }
        Ok(())
    }
}

/// Calls `f(x, y)` for every frame pixel covered by `shape`.
pub fn rasterize<F: FnMut(usize, usize)>(
    shape: &Shape,
    pose: CameraPose,
    intr: &CameraIntrinsics,
    mut f: F,
) {
    if !(shape.size > 0.0) {
        return;
    }
    let (w, h) = (intr.width as f64, intr.height as f64);
    let (cx, cy) = project_exact(shape.az, shape.el, pose, intr);
    let rx = shape.size * intr.ppd_x;
    let ry = shape.size * intr.ppd_y;
    let x0 = (cx - rx).floor().max(0.0);
    let x1 = (cx + rx).ceil().min(w - 1.0);
    let y0 = (cy - ry).floor().max(0.0);
    let y1 = (cy + ry).ceil().min(h - 1.0);
    if x0 > x1 || y0 > y1 {
        return;
    }
    for y in y0 as usize..=y1 as usize {
        let v = (y as f64 - cy) / ry;
        for x in x0 as usize..=x1 as usize {
            if shape.covers((x as f64 - cx) / rx, v) {
                f(x, y);
            }
        }
    }
}

/// Rasterizes `scene` as seen by a camera at `pose`.
///
/// Pixel (x, y) samples the point whose projection is exactly (x, y); later
/// shapes overdraw earlier ones.
pub fn render(scene: &Scene, pose: CameraPose, intr: &CameraIntrinsics) -> Frame {
    let w = intr.width;
    let mut frame = Frame::filled(w, intr.height, Rgb565::narrow(scene.background));
    let s = scene.illumination.clamp(0.0, 1.0);
    for shape in &scene.shapes {
        let color = Rgb565::narrow(shape.color.scaled(s));
        rasterize(shape, pose, intr, |x, y| frame.pixels[y * w + x] = color);
    }
    frame
}

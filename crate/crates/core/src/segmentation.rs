//! Color thresholding into a bit-packed binary mask.
//!
//! Two color spaces are supported. The RGB box compares each widened channel
//! against an inclusive range; it is cheap but follows the light level. The rg
//! chromaticity test divides by the luminance `I = R + G + B` first, so a
//! uniformly dimmed object keeps (up to quantization) the same `(r, g)`.

use crate::imaging::{Frame, Rgb565, Rgb8};
use crate::{Error, Result};

/// One bit per pixel, row-major, packed LSB-first into 32-bit words.
///
/// Pixel `(x, y)` has linear index `i = y * width + x` and lives in bit
/// `i % 32` of word `i / 32`. Bits past `width * height` are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedBinaryMask {
    width: usize,
    height: usize,
    words: Vec<u32>,
}

impl PackedBinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            words: vec![0; (width * height).div_ceil(32)],
        }
    }

    /// Rebuilds a mask from its word array; rejects wrong lengths and stray trailing bits.
    pub fn from_words(width: usize, height: usize, words: Vec<u32>) -> Result<Self> {
        let expected = (width * height).div_ceil(32);
        if words.len() != expected {
            return Err(Error::Dimensions { expected, found: words.len() });
        }
        let mask = Self { width, height, words };
        if let Some(last) = mask.words.last() {
            if last & !mask.tail_mask() != 0 {
                return Err(Error::Param("bits set past the last pixel".into()));
            }
        }
        Ok(mask)
    }

    /// Builds a mask by evaluating `pred` once per pixel, in scan order.
    pub fn from_fn<F: FnMut(usize) -> bool>(width: usize, height: usize, mut pred: F) -> Self {
        let n = width * height;
        let mut words = Vec::with_capacity(n.div_ceil(32));
        let mut i = 0;
        while i < n {
            let end = (i + 32).min(n);
            let mut w = 0u32;
            for (bit, idx) in (i..end).enumerate() {
                w |= (pred(idx) as u32) << bit;
            }
            words.push(w);
            i = end;
        }
        Self { width, height, words }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    fn tail_mask(&self) -> u32 {
        match (self.width * self.height) % 32 {
            0 => u32::MAX,
            r => (1u32 << r) - 1,
        }
    }

    fn check(&self, x: usize, y: usize) -> Result<usize> {
        if x >= self.width || y >= self.height {
            return Err(Error::OutOfBounds { x, y, width: self.width, height: self.height });
        }
        Ok(y * self.width + x)
    }

    pub fn get(&self, x: usize, y: usize) -> Result<bool> {
        let i = self.check(x, y)?;
        Ok(self.bit(i))
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) -> Result<()> {
        let i = self.check(x, y)?;
        let m = 1u32 << (i % 32);
        if value {
            self.words[i / 32] |= m;
        } else {
            self.words[i / 32] &= !m;
        }
        Ok(())
    }

    /// Unchecked read by linear index.
    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        self.words[i / 32] >> (i % 32) & 1 == 1
    }

    /// Bounds-tolerant read: anything outside the mask is unset.
    #[inline]
    pub fn is_set(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bit(y as usize * self.width + x as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of pixels set in both masks.
    pub fn overlap(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Number of pixels that differ between two same-sized masks.
    pub fn hamming(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Raw little-endian word dump.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.words.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    pub fn from_le_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        let expected = (width * height).div_ceil(32) * 4;
        if bytes.len() != expected {
            return Err(Error::Payload { expected, found: bytes.len() });
        }
        let words = bytes
            .chunks_exact(4)
            .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect();
        Self::from_words(width, height, words)
    }
}

/// Inclusive per-channel bounds on widened 8-bit values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RgbBoxThreshold {
    pub r: (u8, u8),
    pub g: (u8, u8),
    pub b: (u8, u8),
}

impl RgbBoxThreshold {
    pub fn new(r: (u8, u8), g: (u8, u8), b: (u8, u8)) -> Result<Self> {
        for (name, (lo, hi)) in [("r", r), ("g", g), ("b", b)] {
            if lo > hi {
                return Err(Error::Threshold(format!("{name} min {lo} > max {hi}")));
            }
        }
        Ok(Self { r, g, b })
    }

    #[inline]
    pub fn contains(&self, c: Rgb8) -> bool {
        (self.r.0..=self.r.1).contains(&c.r)
            && (self.g.0..=self.g.1).contains(&c.g)
            && (self.b.0..=self.b.1).contains(&c.b)
    }
}

/// Inclusive bounds in rg chromaticity plus a minimum luminance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChromaThreshold {
    pub r: (f64, f64),
    pub g: (f64, f64),
    pub i_min: u16,
}

impl ChromaThreshold {
    pub fn new(r: (f64, f64), g: (f64, f64), i_min: u16) -> Result<Self> {
        for (name, (lo, hi)) in [("r", r), ("g", g)] {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::Threshold(format!("{name} range [{lo}, {hi}] not within [0, 1]")));
            }
        }
        if i_min < 1 {
            return Err(Error::Threshold("i_min must be at least 1".into()));
        }
        Ok(Self { r, g, i_min })
    }

    #[inline]
    pub fn contains(&self, c: Rgb8) -> bool {
        let i = luminance(c);
        if i < self.i_min {
            return false;
        }
        let i = i as f64;
        let r = c.r as f64 / i;
        let g = c.g as f64 / i;
        self.r.0 <= r && r <= self.r.1 && self.g.0 <= g && g <= self.g.1
    }
}

/// A point of the rg chromaticity plane; `b = 1 - r - g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChromaPoint {
    pub r: f64,
    pub g: f64,
}

impl ChromaPoint {
    pub fn b(&self) -> f64 {
        1.0 - self.r - self.g
    }
}

/// `I = R + G + B` over widened channels.
#[inline]
pub fn luminance(c: Rgb8) -> u16 {
    c.r as u16 + c.g as u16 + c.b as u16
}

/// `(R / I, G / I)`, or `None` for black.
pub fn chromaticity(c: Rgb8) -> Option<ChromaPoint> {
    chromaticity_f64(c.r as f64, c.g as f64, c.b as f64)
}

/// Real-valued variant, for channels that have not been quantized.
pub fn chromaticity_f64(r: f64, g: f64, b: f64) -> Option<ChromaPoint> {
    let i = r + g + b;
    if i <= 0.0 {
        return None;
    }
    Some(ChromaPoint { r: r / i, g: g / i })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentMode {
    Rgb,
    Chroma,
}

impl std::str::FromStr for SegmentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rgb" => Ok(SegmentMode::Rgb),
            "chroma" => Ok(SegmentMode::Chroma),
            _ => Err(Error::Param(format!("unknown segmentation mode {s:?}"))),
        }
    }
}

/// Margins used to turn one picked color into a threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PickMargins {
    /// Counts added and subtracted per widened channel.
    pub rgb: u8,
    /// Added and subtracted from the picked r and g.
    pub chroma: f64,
    pub i_min: u16,
}

impl Default for PickMargins {
    fn default() -> Self {
        Self { rgb: 24, chroma: 0.05, i_min: 30 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    Rgb(RgbBoxThreshold),
    Chroma(ChromaThreshold),
}

impl Threshold {
    pub fn mode(&self) -> SegmentMode {
        match self {
            Threshold::Rgb(_) => SegmentMode::Rgb,
            Threshold::Chroma(_) => SegmentMode::Chroma,
        }
    }

    pub fn contains(&self, c: Rgb8) -> bool {
        match self {
            Threshold::Rgb(t) => t.contains(c),
            Threshold::Chroma(t) => t.contains(c),
        }
    }
}

/// Derives a threshold centered on a picked color.
pub fn threshold_from_pick(c: Rgb8, mode: SegmentMode, margins: PickMargins) -> Result<Threshold> {
    match mode {
        SegmentMode::Rgb => {
            let m = margins.rgb;
            let range = |v: u8| (v.saturating_sub(m), v.saturating_add(m));
            Ok(Threshold::Rgb(RgbBoxThreshold::new(range(c.r), range(c.g), range(c.b))?))
        }
        SegmentMode::Chroma => {
            let p = chromaticity(c).ok_or(Error::DegeneratePick)?;
            let m = margins.chroma;
            let range = |v: f64| ((v - m).max(0.0), (v + m).min(1.0));
            Ok(Threshold::Chroma(ChromaThreshold::new(
                range(p.r),
                range(p.g),
                margins.i_min.max(1),
            )?))
        }
    }
}

fn segment_with<F: Fn(Rgb8) -> bool>(frame: &Frame, pred: F) -> PackedBinaryMask {
    let px = frame.pixels();
    PackedBinaryMask::from_fn(frame.width(), frame.height(), |i| pred(px[i].widen()))
}

pub fn segment_rgb(frame: &Frame, t: &RgbBoxThreshold) -> PackedBinaryMask {
    segment_with(frame, |c| t.contains(c))
}

pub fn segment_chroma(frame: &Frame, t: &ChromaThreshold) -> PackedBinaryMask {
    segment_with(frame, |c| t.contains(c))
}

pub fn segment(frame: &Frame, t: &Threshold) -> PackedBinaryMask {
    match t {
        Threshold::Rgb(t) => segment_rgb(frame, t),
        Threshold::Chroma(t) => segment_chroma(frame, t),
    }
}

/// Per-pixel booleans without bit packing, used to cross-check the packed path.
pub fn segment_unpacked(frame: &Frame, t: &Threshold) -> Vec<bool> {
    frame.pixels().iter().map(|p| t.contains(p.widen())).collect()
}

/// True when `mask` holds exactly the bits in `reference`.
pub fn matches_unpacked(mask: &PackedBinaryMask, reference: &[bool]) -> bool {
    reference.len() == mask.width() * mask.height()
        && reference.iter().enumerate().all(|(i, &b)| mask.bit(i) == b)
}

/// Widened color of a frame pixel; convenience for picking from an image.
pub fn pick(frame: &Frame, x: usize, y: usize) -> Rgb8 {
    Rgb565::widen(frame.get(x, y))
}

//! Binary PPM (P6) frames and PBM (P4) masks.

use std::fs;
use std::path::Path;

use crate::imaging::{Frame, Rgb565, Rgb8};
use crate::segmentation::PackedBinaryMask;
use crate::{Error, Result};

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Header(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Header(format!("{what} does not fit")))
    }
}

/// Decodes a P6 image with maxval 255, narrowing every pixel to RGB565.
pub fn decode_ppm(data: &[u8]) -> Result<Frame> {
    if data.len() < 2 || &data[..2] != b"P6" {
        return Err(Error::Header("missing P6 magic".into()));
    }
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Header(format!("maxval {maxval} unsupported, expected 255")));
    }
    if width == 0 || height == 0 {
        return Err(Error::Header(format!("empty image {width}x{height}")));
    }
    // exactly one whitespace byte separates the header from the raster
    if !data.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Header("missing separator after maxval".into()));
    }
    let payload = &data[cur.pos + 1..];
    let expected = width * height * 3;
    if payload.len() < expected {
        return Err(Error::Payload { expected, found: payload.len() });
    }
    let pixels = payload[..expected]
        .chunks_exact(3)
        .map(|c| Rgb565::narrow(Rgb8::new(c[0], c[1], c[2])))
        .collect();
    Frame::from_pixels(width, height, pixels)
}

pub fn encode_ppm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.reserve(frame.pixels().len() * 3);
    for p in frame.pixels() {
        let c = p.widen();
        out.extend_from_slice(&[c.r, c.g, c.b]);
    }
    out
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<Frame> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_ppm(&data)
}

pub fn write_ppm(frame: &Frame, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_ppm(frame)).map_err(|e| Error::io(path, e))
}

/// P4 bitmap: rows padded to whole bytes, MSB-first, 1 = set (black).
pub fn encode_pbm(mask: &PackedBinaryMask) -> Vec<u8> {
    let (w, h) = (mask.width(), mask.height());
    let row_bytes = w.div_ceil(8);
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let header = out.len();
    out.resize(header + row_bytes * h, 0);
    for y in 0..h {
        let row = &mut out[header + y * row_bytes..header + (y + 1) * row_bytes];
        for x in 0..w {
            if mask.bit(y * w + x) {
                row[x / 8] |= 0x80 >> (x % 8);
            }
        }
    }
    out
}

pub fn decode_pbm(data: &[u8]) -> Result<PackedBinaryMask> {
    if data.len() < 2 || &data[..2] != b"P4" {
        return Err(Error::Header("missing P4 magic".into()));
    }
    let mut cur = Cursor { data, pos: 2 };
    let w = cur.number("width")?;
    let h = cur.number("height")?;
    if !data.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Header("missing separator after height".into()));
    }
    let payload = &data[cur.pos + 1..];
    let row_bytes = w.div_ceil(8);
    let expected = row_bytes * h;
    if payload.len() < expected {
        return Err(Error::Payload { expected, found: payload.len() });
    }
    Ok(PackedBinaryMask::from_fn(w, h, |i| {
        let (x, y) = (i % w, i / w);
        payload[y * row_bytes + x / 8] & (0x80 >> (x % 8)) != 0
    }))
}

pub fn write_pbm(mask: &PackedBinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pbm(mask)).map_err(|e| Error::io(path, e))
}

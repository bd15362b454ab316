//! Final blend of mask, tiled texture and background color:
//! `out = M * T' + (1 - M) * B`, per channel, on sRGB-encoded values.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::image::{Canvas, RgbImage};
use crate::raster::AlphaMask;

/// Opaque RGB result of compositing.
pub type ComposedImage = RgbImage;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompositeError {
    DimensionMismatch {
        mask: (u32, u32),
        canvas: (u32, u32),
    },
}

impl fmt::Display for CompositeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompositeError::DimensionMismatch { mask, canvas } => write!(
                f,
                "mask is {}x{} but canvas is {}x{}",
                mask.0, mask.1, canvas.0, canvas.1
            ),
        }
    }
}

impl core::error::Error for CompositeError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidColor(pub String);

impl fmt::Display for InvalidColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid color {:?}: expected #RRGGBB or #RGB", self.0)
    }
}

impl core::error::Error for InvalidColor {}

/// Background color in sRGB. Defaults to white.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BackgroundColor {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl BackgroundColor {
    pub const WHITE: BackgroundColor = BackgroundColor::new(255, 255, 255);
    pub const BLACK: BackgroundColor = BackgroundColor::new(0, 0, 0);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        BackgroundColor { r, g, b }
    }

    pub fn rgb(self) -> [u8; 3] {
        [self.r, self.g, self.b]
    }
}

impl Default for BackgroundColor {
    fn default() -> Self {
        BackgroundColor::WHITE
    }
}

/// Formats as `#RRGGBB` with uppercase digits.
impl fmt::Display for BackgroundColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02X}{:02X}{:02X}", self.r, self.g, self.b)
    }
}

impl FromStr for BackgroundColor {
    type Err = InvalidColor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hex_color(s)
    }
}

/// Parses `#RRGGBB` or `#RGB`, case-insensitive. `#RGB` expands each digit
/// (`#F80` is `#FF8800`).
pub fn parse_hex_color(text: &str) -> Result<BackgroundColor, InvalidColor> {
    let invalid = || InvalidColor(text.to_string());
    let digits = text.strip_prefix('#').ok_or_else(invalid)?;
    if !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(invalid());
    }
    let nibble = |i: usize| u8::from_str_radix(&digits[i..i + 1], 16).map_err(|_| invalid());
    match digits.len() {
        6 => {
            let byte = |i: usize| Ok::<u8, InvalidColor>(nibble(i)? << 4 | nibble(i + 1)?);
            Ok(BackgroundColor::new(byte(0)?, byte(2)?, byte(4)?))
        }
        3 => Ok(BackgroundColor::new(
            nibble(0)? * 17,
            nibble(1)? * 17,
            nibble(2)? * 17,
        )),
        _ => Err(invalid()),
    }
}

pub fn format_hex_color(color: BackgroundColor) -> String {
    color.to_string()
}

/// Blends one channel and quantizes, rounding half away from zero.
pub fn blend_channel(m: f64, texture: u8, background: u8) -> u8 {
    let v = m * f64::from(texture) + (1.0 - m) * f64::from(background);
    libm::round(v).clamp(0.0, 255.0) as u8
}

/// Composites the textured canvas over `background` through `mask`. The
/// canvas alpha channel is ignored; the result is opaque.
pub fn composite(
    mask: &AlphaMask,
    textured: &Canvas,
    background: BackgroundColor,
) -> Result<ComposedImage, CompositeError> {
    let (w, h) = (mask.width(), mask.height());
    if (w, h) != (textured.width(), textured.height()) {
        return Err(CompositeError::DimensionMismatch {
            mask: (w, h),
            canvas: (textured.width(), textured.height()),
        });
    }
    let bg = background.rgb();
    let mut out = alloc::vec::Vec::with_capacity(w as usize * h as usize * 3);
    for (m, px) in mask.values().iter().zip(textured.as_raw().chunks_exact(4)) {
        for c in 0..3 {
            out.push(blend_channel(*m, px[c], bg[c]));
        }
    }
    Ok(ComposedImage::from_raw(w, h, out).expect("dimensions match mask"))
}

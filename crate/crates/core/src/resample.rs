//! Lanczos (windowed-sinc) texture scaling.
//!
//! Scaling is separable: a horizontal pass into a real-valued intermediate,
//! then a vertical pass, quantizing to 8 bits once at the end. Pixel centers
//! sit at half-integers, so output sample `x + 0.5` reads source coordinate
//! `(x + 0.5) / s`. When shrinking, the kernel is stretched by `1 / s` so it
//! low-pass filters instead of point sampling.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::image::{ImageError, TextureImage};

#[derive(Debug, Clone, PartialEq)]
pub enum ResampleError {
    /// Scale outside `(0, 1]` or not finite.
    InvalidScale(f64),
    /// The requested output would have a zero dimension.
    DegenerateOutput,
}

impl fmt::Display for ResampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResampleError::InvalidScale(s) => write!(f, "scale {s} is outside (0, 1]"),
            ResampleError::DegenerateOutput => f.write_str("resampled image would be empty"),
        }
    }
}

impl core::error::Error for ResampleError {}

/// Texture scale `s` with `0 < s <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ScaleFactor(f64);

impl ScaleFactor {
    pub const ONE: ScaleFactor = ScaleFactor(1.0);

    pub fn new(s: f64) -> Result<ScaleFactor, ResampleError> {
        if s > 0.0 && s <= 1.0 {
            Ok(ScaleFactor(s))
        } else {
            Err(ResampleError::InvalidScale(s))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Output length for an input of `len` pixels: `ceil(s * len)`.
    ///
    /// Products within 1e-9 above an integer round down, so `0.3 * 10`
    /// gives 3 rather than 4.
    pub fn scaled_len(self, len: u32) -> u32 {
        libm::ceil(self.0 * f64::from(len) - 1e-9).max(0.0) as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LanczosKernel {
    pub lobes: u32,
}

impl Default for LanczosKernel {
    fn default() -> Self {
        LanczosKernel { lobes: 3 }
    }
}

impl LanczosKernel {
    pub fn weight(self, x: f64) -> f64 {
        kernel_weight(x, self.lobes)
    }
}

/// How source taps outside the image are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Repeat the edge pixel.
    #[default]
    Clamp,
    /// Periodic: the image is treated as one tile of an infinite plane.
    Wrap,
}

impl Boundary {
    pub fn index(self, i: i64, len: u32) -> usize {
        match self {
            Boundary::Clamp => i.clamp(0, i64::from(len) - 1) as usize,
            Boundary::Wrap => i.rem_euclid(i64::from(len)) as usize,
        }
    }
}

/// Lanczos kernel `sinc(x) * sinc(x / a)` on `|x| < a`, zero elsewhere.
/// Integer arguments return exactly 1 (at 0) or 0.
pub fn kernel_weight(x: f64, a: u32) -> f64 {
    let a = f64::from(a.max(1));
    if x == 0.0 {
        return 1.0;
    }
    if x.abs() >= a || libm::trunc(x) == x {
        return 0.0;
    }
    let px = PI * x;
    let pxa = px / a;
    (libm::sin(px) / px) * (libm::sin(pxa) / pxa)
}

/// `(x, weight)` samples over `[-a, a]` at `samples_per_unit` resolution.
pub fn kernel_table(a: u32, samples_per_unit: u32) -> Vec<(f64, f64)> {
    let n = i64::from(a) * i64::from(samples_per_unit.max(1));
    (-n..=n)
        .map(|i| {
            let x = i as f64 / f64::from(samples_per_unit.max(1));
            (x, kernel_weight(x, a))
        })
        .collect()
}

/// Normalized filter taps for one output coordinate. Tap `k` reads source
/// index `first + k` before boundary resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub first: i64,
    pub weights: Vec<f64>,
}

/// Taps for every output coordinate of one axis, with `src_per_dst` source
/// pixels per output pixel.
pub fn weight_rows(dst_len: u32, src_per_dst: f64, kernel: LanczosKernel) -> Vec<WeightRow> {
    let stretch = src_per_dst.max(1.0);
    let support = f64::from(kernel.lobes) * stretch;
    (0..dst_len)
        .map(|x| {
            let center = (f64::from(x) + 0.5) * src_per_dst;
            let first = libm::floor(center - support) as i64;
            let last = libm::ceil(center + support) as i64;
            let mut weights: Vec<f64> = (first..=last)
                .map(|i| kernel.weight((i as f64 + 0.5 - center) / stretch))
                .collect();
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
            WeightRow { first, weights }
        })
        .collect()
}

/// Real-valued RGBA image, the pre-quantization output of a resample.
#[derive(Debug, Clone, PartialEq)]
pub struct RealImage {
    pub width: u32,
    pub height: u32,
    /// Four channels per pixel, row-major, nominally in `[0, 255]`.
    pub data: Vec<f64>,
}

impl RealImage {
    pub fn channel(&self, x: u32, y: u32, c: usize) -> f64 {
        self.data[(y as usize * self.width as usize + x as usize) * 4 + c]
    }

    /// Rounds half away from zero and clamps to `[0, 255]`.
    pub fn quantize(&self) -> TextureImage {
        let data = self
            .data
            .iter()
            .map(|&v| libm::round(v).clamp(0.0, 255.0) as u8)
            .collect();
        TextureImage::from_raw(self.width, self.height, data).expect("dimensions checked")
    }
}

fn resize_real_axes(
    texture: &TextureImage,
    dst_w: u32,
    dst_h: u32,
    src_per_dst_x: f64,
    src_per_dst_y: f64,
    boundary: Boundary,
    kernel: LanczosKernel,
) -> RealImage {
    let (src_w, src_h) = (texture.width(), texture.height());
    let src = texture.as_raw();
    let rows_x = weight_rows(dst_w, src_per_dst_x, kernel);
    let rows_y = weight_rows(dst_h, src_per_dst_y, kernel);

    // Horizontal pass: dst_w x src_h.
    let mut mid = vec![0.0f64; dst_w as usize * src_h as usize * 4];
    for y in 0..src_h as usize {
        let src_row = &src[y * src_w as usize * 4..(y + 1) * src_w as usize * 4];
        let mid_row = &mut mid[y * dst_w as usize * 4..(y + 1) * dst_w as usize * 4];
        for (x, row) in rows_x.iter().enumerate() {
            let mut acc = [0.0f64; 4];
            for (k, &w) in row.weights.iter().enumerate() {
                let sx = boundary.index(row.first + k as i64, src_w);
                for c in 0..4 {
                    acc[c] += w * f64::from(src_row[sx * 4 + c]);
                }
            }
            mid_row[x * 4..x * 4 + 4].copy_from_slice(&acc);
        }
    }

    // Vertical pass.
    let stride = dst_w as usize * 4;
    let mut out = vec![0.0f64; dst_w as usize * dst_h as usize * 4];
    for (y, row) in rows_y.iter().enumerate() {
        let out_row = &mut out[y * stride..(y + 1) * stride];
        for (k, &w) in row.weights.iter().enumerate() {
            let sy = boundary.index(row.first + k as i64, src_h);
            let mid_row = &mid[sy * stride..(sy + 1) * stride];
            for (o, m) in out_row.iter_mut().zip(mid_row) {
                *o += w * m;
            }
        }
    }
    RealImage {
        width: dst_w,
        height: dst_h,
        data: out,
    }
}

/// Scales `texture` by `s` without quantizing.
pub fn resample_real(
    texture: &TextureImage,
    s: ScaleFactor,
    boundary: Boundary,
) -> Result<RealImage, ResampleError> {
    resample_real_with(texture, s, boundary, LanczosKernel::default())
}

pub fn resample_real_with(
    texture: &TextureImage,
    s: ScaleFactor,
    boundary: Boundary,
    kernel: LanczosKernel,
) -> Result<RealImage, ResampleError> {
    let dst_w = s.scaled_len(texture.width());
    let dst_h = s.scaled_len(texture.height());
    if dst_w == 0 || dst_h == 0 {
        return Err(ResampleError::DegenerateOutput);
    }
    let inv = 1.0 / s.get();
    Ok(resize_real_axes(texture, dst_w, dst_h, inv, inv, boundary, kernel))
}

/// Scales `texture` by `s` with Lanczos3: output is
/// `ceil(s * width) x ceil(s * height)`.
pub fn resample(
    texture: &TextureImage,
    s: ScaleFactor,
    boundary: Boundary,
) -> Result<TextureImage, ResampleError> {
    if s == ScaleFactor::ONE {
        return Ok(texture.clone());
    }
    Ok(resample_real(texture, s, boundary)?.quantize())
}

/// Resizes to exactly `width x height`, up or down, independently per axis.
pub fn resize(
    texture: &TextureImage,
    width: u32,
    height: u32,
    boundary: Boundary,
) -> Result<TextureImage, ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroDimension);
    }
    if (width, height) == (texture.width(), texture.height()) {
        return Ok(texture.clone());
    }
    let sx = f64::from(texture.width()) / f64::from(width);
    let sy = f64::from(texture.height()) / f64::from(height);
    Ok(resize_real_axes(
        texture,
        width,
        height,
        sx,
        sy,
        boundary,
        LanczosKernel::default(),
    )
    .quantize())
}

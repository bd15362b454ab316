//! Anti-aliased coverage masks.
//!
//! Contours are flattened to polylines and every line is accumulated into
//! per-row signed-area deltas. For each line piece inside a row, the exact
//! area of each pixel cell lying to the right of the line is computed in
//! closed form, so a prefix sum along the row yields the signed winding
//! integral over each pixel. The fill rule is applied to that integral.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{Contour, CubicSegment, Point2};
use crate::image::RasterImage;

/// Default flattening tolerance in pixels.
pub const DEFAULT_FLATTEN_TOLERANCE: f64 = 0.25;

const MAX_FLATTEN_DEPTH: u32 = 16;
const MAX_SPLIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillRule {
    #[default]
    NonZero,
    EvenOdd,
}

/// Per-pixel coverage in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaMask {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl AlphaMask {
    /// All-zero mask.
    ///
    /// # Panics
    ///
    /// If either dimension is zero.
    pub fn zeros(width: u32, height: u32) -> AlphaMask {
        assert!(width > 0 && height > 0, "mask dimensions must be at least 1x1");
        AlphaMask {
            width,
            height,
            values: vec![0.0; width as usize * height as usize],
        }
    }

    /// Builds a mask from raw values, clamping each into `[0, 1]`.
    /// Returns `None` on a size mismatch, zero dimension or NaN.
    pub fn from_values(width: u32, height: u32, values: Vec<f64>) -> Option<AlphaMask> {
        if width == 0
            || height == 0
            || values.len() != width as usize * height as usize
            || values.iter().any(|v| v.is_nan())
        {
            return None;
        }
        let values = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Some(AlphaMask {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// 8-bit quantization, round half away from zero.
    pub fn to_gray8(&self) -> Vec<u8> {
        self.values.iter().map(|&v| quantize_unit(v)).collect()
    }

    /// Text image: `color` everywhere, with the mask as its alpha channel.
    pub fn to_alpha_image(&self, color: [u8; 3]) -> RasterImage {
        let [r, g, b] = color;
        RasterImage::from_fn(self.width, self.height, |x, y| {
            [r, g, b, quantize_unit(self.get(x, y))]
        })
        .expect("mask dimensions are non-zero")
    }
}

fn quantize_unit(v: f64) -> u8 {
    libm::round(v * 255.0) as u8
}

/// Mask from the alpha channel: `alpha / 255`.
pub fn mask_from_alpha(image: &RasterImage) -> AlphaMask {
    let values = image
        .as_raw()
        .chunks_exact(4)
        .map(|px| f64::from(px[3]) / 255.0)
        .collect();
    AlphaMask {
        width: image.width(),
        height: image.height(),
        values,
    }
}

/// Flattens a cubic into a polyline by recursive subdivision, until both
/// control points of every piece lie within `tol` of its chord. The first
/// and last points are the segment endpoints exactly.
///
/// A piece that is not flat enough is split into `ceil(sqrt(dev / tol))`
/// equal-parameter parts, `dev` being its control-point deviation. The
/// deviation of a sub-piece shrinks with the square of its parameter span,
/// so the split count tracks the tolerance continuously rather than in
/// powers of two.
///
/// # Panics
///
/// If `tol` is not positive.
pub fn flatten(seg: &CubicSegment, tol: f64) -> Vec<Point2> {
    assert!(tol > 0.0, "flattening tolerance must be positive");
    let mut out = vec![seg.p0];
    flatten_into(seg, tol, 0, &mut out);
    out
}

fn flatten_into(seg: &CubicSegment, tol: f64, depth: u32, out: &mut Vec<Point2>) {
    let dev = distance_to_segment(seg.c1, seg.p0, seg.p3)
        .max(distance_to_segment(seg.c2, seg.p0, seg.p3));
    if dev <= tol || depth >= MAX_FLATTEN_DEPTH {
        out.push(seg.p3);
        return;
    }
    let parts = (libm::ceil(libm::sqrt(dev / tol)) as usize).clamp(2, MAX_SPLIT);
    let mut rest = *seg;
    for k in 0..parts - 1 {
        let (left, right) = rest.split(1.0 / (parts - k) as f64);
        flatten_into(&left, tol, depth + 1, out);
        rest = right;
    }
    flatten_into(&rest, tol, depth + 1, out);
}

fn distance_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Coverage mask of `contours` at the default flattening tolerance.
pub fn rasterize(contours: &[Contour], width: u32, height: u32, fill_rule: FillRule) -> AlphaMask {
    rasterize_with_tolerance(contours, width, height, fill_rule, DEFAULT_FLATTEN_TOLERANCE)
}

pub fn rasterize_with_tolerance(
    contours: &[Contour],
    width: u32,
    height: u32,
    fill_rule: FillRule,
    tol: f64,
) -> AlphaMask {
    let mut acc = Accumulator::new(width, height);
    for contour in contours {
        for seg in contour.segments() {
            let pts = flatten(seg, tol);
            for pair in pts.windows(2) {
                acc.line(pair[0], pair[1]);
            }
        }
    }
    acc.finish(fill_rule)
}

struct Accumulator {
    width: usize,
    height: usize,
    /// `height` rows of `width + 1` deltas; the extra column absorbs
    /// contributions right of the canvas.
    cells: Vec<f64>,
}

impl Accumulator {
    fn new(width: u32, height: u32) -> Accumulator {
        assert!(width > 0 && height > 0, "mask dimensions must be at least 1x1");
        let (width, height) = (width as usize, height as usize);
        Accumulator {
            width,
            height,
            cells: vec![0.0; (width + 1) * height],
        }
    }

    /// Accumulates one line. Work happens in coordinates relative to an
    /// integer origin, so an integer translation of the input reproduces the
    /// same arithmetic exactly and the mask shifts bit-for-bit.
    fn line(&mut self, p0: Point2, p1: Point2) {
        if p0.y == p1.y {
            return;
        }
        let ox = libm::floor(p0.x.min(p1.x));
        let oy = libm::floor(p0.y.min(p1.y));
        let local = |p: Point2| Point2::new(p.x - ox, p.y - oy);
        let (p0, p1) = (local(p0), local(p1));
        let (dir, top, bottom) = if p0.y < p1.y {
            (1.0, p0, p1)
        } else {
            (-1.0, p1, p0)
        };
        let dxdy = (bottom.x - top.x) / (bottom.y - top.y);
        let x_at = |y: f64| {
            if y == top.y {
                top.x
            } else if y == bottom.y {
                bottom.x
            } else {
                top.x + (y - top.y) * dxdy
            }
        };
        // top.y is in [0, 1) locally.
        let rows = libm::ceil(bottom.y) as i64;
        for r in 0..rows {
            let global_row = oy + r as f64;
            if global_row < 0.0 {
                continue;
            }
            if global_row >= self.height as f64 {
                break;
            }
            let ya = top.y.max(r as f64);
            let yb = bottom.y.min(r as f64 + 1.0);
            if yb > ya {
                self.row_piece(global_row as usize, ox, x_at(ya), x_at(yb), dir * (yb - ya));
            }
        }
    }

    /// Deposits one line piece spanning `dy` (signed) within `row`, running
    /// from `xa` to `xb` in coordinates relative to column `ox`.
    fn row_piece(&mut self, row: usize, ox: f64, xa: f64, xb: f64, dy: f64) {
        let w = self.width as f64;
        let cells = &mut self.cells[row * (self.width + 1)..(row + 1) * (self.width + 1)];
        let (x0, x1) = if xa <= xb { (xa, xb) } else { (xb, xa) };
        // Local columns whose global index falls in [0, w].
        let first = libm::floor(x0).max(-ox);
        let last = libm::ceil(x1).max(first).min(w - ox);
        let mut prev = 0.0;
        let mut col = first;
        while col <= last {
            let a = right_fraction(col, x0, x1);
            cells[(ox + col) as usize] += dy * (a - prev);
            prev = a;
            if a >= 1.0 {
                return;
            }
            col += 1.0;
        }
    }

    fn finish(self, fill_rule: FillRule) -> AlphaMask {
        let w = self.width;
        let mut values = Vec::with_capacity(w * self.height);
        for row in self.cells.chunks_exact(w + 1) {
            let mut winding = 0.0;
            for &delta in &row[..w] {
                winding += delta;
                values.push(apply_fill_rule(winding, fill_rule));
            }
        }
        AlphaMask {
            width: w as u32,
            height: self.height as u32,
            values,
        }
    }
}

/// Mean over the piece of the fraction of cell `[col, col + 1)` lying right
/// of the line, for a line whose x runs linearly over `[x0, x1]`.
fn right_fraction(col: f64, x0: f64, x1: f64) -> f64 {
    let edge = col + 1.0;
    if x1 - x0 <= 1e-12 {
        return (edge - 0.5 * (x0 + x1)).clamp(0.0, 1.0);
    }
    (ramp_integral(edge - x0) - ramp_integral(edge - x1)) / (x1 - x0)
}

/// Integral of clamp(t, 0, 1) from -inf to `u`.
fn ramp_integral(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u <= 1.0 {
        0.5 * u * u
    } else {
        u - 0.5
    }
}

fn apply_fill_rule(winding: f64, rule: FillRule) -> f64 {
    let w = winding.abs();
    let v = match rule {
        FillRule::NonZero => w.min(1.0),
        FillRule::EvenOdd => {
            let t = w % 2.0;
            if t > 1.0 {
                2.0 - t
            } else {
                t
            }
        }
    };
    if v < 1e-12 {
        0.0
    } else if v > 1.0 - 1e-12 {
        1.0
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svg_path::parse_svg_path;

    #[test]
    fn empty_contours_give_zero_mask() {
        let m = rasterize(&[], 7, 5, FillRule::NonZero);
        assert_eq!((m.width(), m.height()), (7, 5));
        assert!(m.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pixel_aligned_square() {
        let c = parse_svg_path("M 2 2 H 12 V 12 H 2 Z").unwrap();
        let m = rasterize(&c, 20, 20, FillRule::NonZero);
        assert_eq!(m.sum(), 100.0);
        assert_eq!(m.get(2, 2), 1.0);
        assert_eq!(m.get(1, 2), 0.0);
        assert_eq!(m.get(12, 5), 0.0);
    }

    #[test]
    fn counter_is_cut_out_under_both_rules() {
        // Outer clockwise, inner counter-clockwise.
        let c = parse_svg_path("M 0 0 H 10 V 10 H 0 Z M 3 3 V 7 H 7 V 3 Z").unwrap();
        for rule in [FillRule::NonZero, FillRule::EvenOdd] {
            let m = rasterize(&c, 10, 10, rule);
            assert_eq!(m.sum(), 84.0);
            assert_eq!(m.get(5, 5), 0.0);
        }
        // Same direction: nonzero fills the hole, evenodd does not.
        let c = parse_svg_path("M 0 0 H 10 V 10 H 0 Z M 3 3 H 7 V 7 H 3 Z").unwrap();
        assert_eq!(rasterize(&c, 10, 10, FillRule::NonZero).sum(), 100.0);
        assert_eq!(rasterize(&c, 10, 10, FillRule::EvenOdd).sum(), 84.0);
    }

    #[test]
    fn shapes_outside_the_canvas_are_clipped() {
        let c = parse_svg_path("M -5 -5 H 15 V 3 H -5 Z").unwrap();
        let m = rasterize(&c, 10, 10, FillRule::NonZero);
        assert_eq!(m.sum(), 30.0);
    }

    #[test]
    fn straight_segment_flattens_to_two_points() {
        let seg = CubicSegment::line(Point2::new(0.0, 0.0), Point2::new(5.0, 3.0));
        assert_eq!(flatten(&seg, 0.25), vec![seg.p0, seg.p3]);
    }

    #[test]
    fn alpha_extraction() {
        let img = RasterImage::from_raw(3, 1, vec![0, 0, 0, 255, 0, 0, 0, 0, 9, 9, 9, 128]).unwrap();
        let m = mask_from_alpha(&img);
        assert_eq!(m.values(), &[1.0, 0.0, 128.0 / 255.0]);
    }
}

//! Cubic Bézier contour representation.
//!
//! Every outline in the pipeline, whether it comes from a font or from SVG
//! path data, is normalized to closed contours made only of cubic segments.
//! Lines and quadratics are promoted exactly, so downstream code (flattening,
//! arc-length subdivision, rasterization) only ever sees one segment kind.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

/// Maximum distance between consecutive segment endpoints for a contour to
/// count as closed.
pub const CLOSURE_EPSILON: f64 = 1e-9;

/// Default relative tolerance for [`arc_length`].
pub const DEFAULT_ARC_TOLERANCE: f64 = 1e-6;

const MAX_ARC_DEPTH: u32 = 48;

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    NonFinite,
    EmptyContour,
    /// Segment `index` does not start where the previous one ended.
    OpenContour { index: usize },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::NonFinite => f.write_str("non-finite coordinate"),
            GeometryError::EmptyContour => f.write_str("contour has no segments"),
            GeometryError::OpenContour { index } => {
                write!(f, "contour is not closed at segment {index}")
            }
        }
    }
}

impl core::error::Error for GeometryError {}

/// A point in canvas units. The y axis points down.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point2) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// A cubic Bézier segment: start, two control points, end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicSegment {
    pub p0: Point2,
    pub c1: Point2,
    pub c2: Point2,
    pub p3: Point2,
}

impl CubicSegment {
    pub const fn new(p0: Point2, c1: Point2, c2: Point2, p3: Point2) -> Self {
        CubicSegment { p0, c1, c2, p3 }
    }

    /// Straight line as a cubic with control points at thirds, so the
    /// parameterization is uniform along the line.
    pub fn line(from: Point2, to: Point2) -> Self {
        CubicSegment::new(
            from,
            from.lerp(to, 1.0 / 3.0),
            from.lerp(to, 2.0 / 3.0),
            to,
        )
    }

    pub fn points(&self) -> [Point2; 4] {
        [self.p0, self.c1, self.c2, self.p3]
    }

    pub fn is_finite(&self) -> bool {
        self.points().iter().all(|p| p.is_finite())
    }

    /// All four points coincide.
    pub fn is_degenerate(&self) -> bool {
        self.c1 == self.p0 && self.c2 == self.p0 && self.p3 == self.p0
    }

    pub fn eval(&self, t: f64) -> Point2 {
        let mt = 1.0 - t;
        let a = mt * mt * mt;
        let b = 3.0 * mt * mt * t;
        let c = 3.0 * mt * t * t;
        let d = t * t * t;
        Point2::new(
            a * self.p0.x + b * self.c1.x + c * self.c2.x + d * self.p3.x,
            a * self.p0.y + b * self.c1.y + c * self.c2.y + d * self.p3.y,
        )
    }

    /// de Casteljau split at `t`. The left half starts at `p0` and the right
    /// half ends at `p3` bit-for-bit, and both share the split point.
    pub fn split(&self, t: f64) -> (CubicSegment, CubicSegment) {
        let ab = self.p0.lerp(self.c1, t);
        let bc = self.c1.lerp(self.c2, t);
        let cd = self.c2.lerp(self.p3, t);
        let abc = ab.lerp(bc, t);
        let bcd = bc.lerp(cd, t);
        let mid = abc.lerp(bcd, t);
        (
            CubicSegment::new(self.p0, ab, abc, mid),
            CubicSegment::new(mid, bcd, cd, self.p3),
        )
    }

    pub fn chord_length(&self) -> f64 {
        self.p0.distance(self.p3)
    }

    pub fn control_polygon_length(&self) -> f64 {
        self.p0.distance(self.c1) + self.c1.distance(self.c2) + self.c2.distance(self.p3)
    }

    /// `|B'(t)|`.
    pub fn speed(&self, t: f64) -> f64 {
        let mt = 1.0 - t;
        let d = (self.c1 - self.p0) * (3.0 * mt * mt)
            + (self.c2 - self.c1) * (6.0 * mt * t)
            + (self.p3 - self.c2) * (3.0 * t * t);
        libm::hypot(d.x, d.y)
    }

    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> CubicSegment {
        CubicSegment::new(f(self.p0), f(self.c1), f(self.c2), f(self.p3))
    }
}

/// Exact degree elevation of a quadratic Bézier `(p0, q, p2)` to a cubic.
pub fn normalize_to_cubics(p0: Point2, q: Point2, p2: Point2) -> CubicSegment {
    CubicSegment::new(
        p0,
        p0 + (q - p0) * (2.0 / 3.0),
        p2 + (q - p2) * (2.0 / 3.0),
        p2,
    )
}

/// Arc length of `seg` by adaptive de Casteljau bisection.
///
/// A piece is accepted once its control polygon exceeds its chord by at most
/// `rel_tol` times the chord; its length is then estimated as the mean of the
/// two.
pub fn arc_length(seg: &CubicSegment, rel_tol: f64) -> f64 {
    arc_length_rec(seg, rel_tol, 0)
}

fn arc_length_rec(seg: &CubicSegment, rel_tol: f64, depth: u32) -> f64 {
    let chord = seg.chord_length();
    let poly = seg.control_polygon_length();
    if poly == 0.0 {
        return 0.0;
    }
    if poly - chord <= rel_tol * chord || depth >= MAX_ARC_DEPTH {
        return 0.5 * (chord + poly);
    }
    let (left, right) = seg.split(0.5);
    arc_length_rec(&left, rel_tol, depth + 1) + arc_length_rec(&right, rel_tol, depth + 1)
}

/// A closed sequence of cubic segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    segments: Vec<CubicSegment>,
}

impl Contour {
    pub fn new(segments: Vec<CubicSegment>) -> Result<Contour, GeometryError> {
        if segments.is_empty() {
            return Err(GeometryError::EmptyContour);
        }
        if !segments.iter().all(CubicSegment::is_finite) {
            return Err(GeometryError::NonFinite);
        }
        let n = segments.len();
        for i in 0..n {
            let next = &segments[(i + 1) % n];
            if segments[i].p3.distance(next.p0) > CLOSURE_EPSILON {
                return Err(GeometryError::OpenContour { index: (i + 1) % n });
            }
        }
        Ok(Contour { segments })
    }

    pub fn segments(&self) -> &[CubicSegment] {
        &self.segments
    }

    pub fn into_segments(self) -> Vec<CubicSegment> {
        self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Applies a point transform to every control point. Affine maps keep
    /// the traced curve exact.
    pub fn map(&self, f: impl Fn(Point2) -> Point2) -> Contour {
        Contour {
            segments: self.segments.iter().map(|s| s.map(&f)).collect(),
        }
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Contour {
        self.map(|p| Point2::new(p.x + dx, p.y + dy))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundingBox {
    pub min: Point2,
    pub max: Point2,
}

impl BoundingBox {
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Control-point bounding box of a set of contours, `None` if empty.
    pub fn of_contours(contours: &[Contour]) -> Option<BoundingBox> {
        let mut points = contours
            .iter()
            .flat_map(|c| c.segments().iter())
            .flat_map(|s| s.points());
        let first = points.next()?;
        let mut bb = BoundingBox { min: first, max: first };
        for p in points {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }
}

/// Closed contours for a letter or a whole text shape.
#[derive(Debug, Clone, PartialEq)]
pub struct GlyphOutline {
    pub contours: Vec<Contour>,
    pub units_per_em: f64,
    /// Control-point bounds; all zero for an outline without contours.
    pub bounding_box: BoundingBox,
}

impl GlyphOutline {
    pub fn new(contours: Vec<Contour>, units_per_em: f64) -> GlyphOutline {
        let bounding_box = BoundingBox::of_contours(&contours).unwrap_or_default();
        GlyphOutline {
            contours,
            units_per_em,
            bounding_box,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        self.contours.iter().map(Contour::len).sum()
    }
}

/// Splits every segment whose arc length exceeds `max_segment_length` into
/// equal-length pieces. Split parameters are found by bisection on the
/// left-piece arc length; splitting is exact (de Casteljau), so the traced
/// curve does not change.
///
/// # Panics
///
/// If `max_segment_length` is not a positive finite number.
pub fn subdivide_by_arc_length(outline: &GlyphOutline, max_segment_length: f64) -> GlyphOutline {
    assert!(
        max_segment_length > 0.0 && max_segment_length.is_finite(),
        "max_segment_length must be positive"
    );
    let contours = outline
        .contours
        .iter()
        .map(|contour| {
            let mut out = Vec::with_capacity(contour.len());
            for seg in contour.segments() {
                subdivide_segment(seg, max_segment_length, &mut out);
            }
            Contour { segments: out }
        })
        .collect();
    GlyphOutline::new(contours, outline.units_per_em)
}

fn subdivide_segment(seg: &CubicSegment, max_len: f64, out: &mut Vec<CubicSegment>) {
    let total = arc_length(seg, DEFAULT_ARC_TOLERANCE);
    if total <= max_len {
        out.push(*seg);
        return;
    }
    let pieces = libm::ceil(total / max_len) as usize;
    let mut rest = *seg;
    let mut rest_len = total;
    for k in 0..pieces - 1 {
        let target = rest_len / (pieces - k) as f64;
        let t = parameter_at_length(&rest, target, total);
        let (left, right) = rest.split(t);
        out.push(left);
        rest_len -= arc_length(&left, DEFAULT_ARC_TOLERANCE);
        rest = right;
    }
    out.push(rest);
}

/// Parameter `t` such that the arc length of `seg` on `[0, t]` equals
/// `target`. Newton steps on the speed `|B'(t)|`, falling back to bisection
/// whenever a step leaves the bracket.
fn parameter_at_length(seg: &CubicSegment, target: f64, scale: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut t = 0.5;
    for _ in 0..64 {
        let len = arc_length(&seg.split(t).0, DEFAULT_ARC_TOLERANCE);
        let err = len - target;
        if err.abs() <= 1e-13 * scale {
            break;
        }
        if err < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let speed = seg.speed(t);
        let newton = t - err / speed;
        t = if speed > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    const KAPPA: f64 = 0.5519150244;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn quarter_circle() -> CubicSegment {
        CubicSegment::new(p(1.0, 0.0), p(1.0, KAPPA), p(KAPPA, 1.0), p(0.0, 1.0))
    }

    /// Gauss-Legendre quadrature of |B'(t)| over 64 equal sub-intervals.
    fn quadrature_length(seg: &CubicSegment) -> f64 {
        const NODES: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const WEIGHTS: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let speed = |t: f64| {
            let mt = 1.0 - t;
            let d = (seg.c1 - seg.p0) * (3.0 * mt * mt)
                + (seg.c2 - seg.c1) * (6.0 * mt * t)
                + (seg.p3 - seg.c2) * (3.0 * t * t);
            libm::hypot(d.x, d.y)
        };
        let n = 64;
        let h = 1.0 / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            let mid = (i as f64 + 0.5) * h;
            for (x, w) in NODES.iter().zip(WEIGHTS) {
                sum += w * speed(mid + 0.5 * h * x) * 0.5 * h;
            }
        }
        sum
    }

    #[test]
    fn elevation_of_collinear_quadratic() {
        let c = normalize_to_cubics(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0));
        assert_eq!(c.p0, p(0.0, 0.0));
        assert!(c.c1.distance(p(2.0 / 3.0, 0.0)) < 1e-15);
        assert!(c.c2.distance(p(4.0 / 3.0, 0.0)) < 1e-15);
        assert_eq!(c.p3, p(2.0, 0.0));
    }

    #[test]
    fn elevation_of_zero_quadratic_is_degenerate() {
        let c = normalize_to_cubics(p(0.0, 0.0), p(0.0, 0.0), p(0.0, 0.0));
        assert!(c.is_degenerate());
        assert_eq!(arc_length(&c, 1e-6), 0.0);
    }

    #[test]
    fn elevation_traces_the_quadratic() {
        let (a, q, b) = (p(0.0, 0.0), p(1.0, 2.0), p(2.0, 0.0));
        let c = normalize_to_cubics(a, q, b);
        for i in 0..1000 {
            let t = i as f64 / 999.0;
            let mt = 1.0 - t;
            let expected = a * (mt * mt) + q * (2.0 * mt * t) + b * (t * t);
            assert!(c.eval(t).distance(expected) <= 1e-12);
        }
    }

    #[test]
    fn straight_cubic_length() {
        let seg = CubicSegment::new(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(3.0, 0.0));
        assert!((arc_length(&seg, 1e-6) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_circle_length_matches_quadrature() {
        let seg = quarter_circle();
        let len = arc_length(&seg, DEFAULT_ARC_TOLERANCE);
        assert!((len - FRAC_PI_2).abs() <= 2e-4, "{len}");
        assert!((len - quadrature_length(&seg)).abs() <= 1e-8);
    }

    #[test]
    fn halves_add_up() {
        let seg = CubicSegment::new(p(0.0, 0.0), p(3.0, 7.0), p(-2.0, 5.0), p(4.0, -1.0));
        let (l, r) = seg.split(0.5);
        let whole = arc_length(&seg, 1e-6);
        let sum = arc_length(&l, 1e-6) + arc_length(&r, 1e-6);
        assert!((whole - sum).abs() <= 1e-6 * whole);
    }

    #[test]
    fn contour_closure_is_checked() {
        let a = CubicSegment::line(p(0.0, 0.0), p(1.0, 0.0));
        let b = CubicSegment::line(p(1.0, 0.0), p(0.0, 1.0));
        assert_eq!(
            Contour::new(vec![a, b]),
            Err(GeometryError::OpenContour { index: 0 })
        );
        let c = CubicSegment::line(p(0.0, 1.0), p(0.0, 0.0));
        assert!(Contour::new(vec![a, b, c]).is_ok());
        assert_eq!(Contour::new(vec![]), Err(GeometryError::EmptyContour));
    }

    fn outline_of(segments: Vec<CubicSegment>) -> GlyphOutline {
        let first = segments[0].p0;
        let last = segments[segments.len() - 1].p3;
        let mut segments = segments;
        if first != last {
            segments.push(CubicSegment::line(last, first));
        }
        GlyphOutline::new(vec![Contour::new(segments).unwrap()], 1.0)
    }

    #[test]
    fn straight_segment_splits_evenly() {
        let seg = CubicSegment::line(p(0.0, 0.0), p(4.0, 0.0));
        let outline = GlyphOutline::new(
            vec![Contour::new(vec![seg, CubicSegment::line(p(4.0, 0.0), p(0.0, 0.0))]).unwrap()],
            1.0,
        );
        let out = subdivide_by_arc_length(&outline, 1.0);
        let segs = out.contours[0].segments();
        assert_eq!(segs.len(), 8);
        for s in segs {
            assert!((arc_length(s, 1e-9) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn subdivision_is_noop_when_bound_holds() {
        let outline = outline_of(vec![quarter_circle()]);
        let out = subdivide_by_arc_length(&outline, 10.0);
        assert_eq!(out, outline);
    }

    #[test]
    fn quarter_circle_splits_into_four() {
        let seg = quarter_circle();
        let mut pieces = Vec::new();
        subdivide_segment(&seg, 0.5, &mut pieces);
        assert_eq!(pieces.len(), 4);
        let total: f64 = pieces.iter().map(|s| arc_length(s, 1e-9)).sum();
        for s in &pieces {
            assert!(arc_length(s, 1e-9) <= 0.5);
        }
        assert!((total - quadrature_length(&seg)).abs() < 1e-8);
        assert!((total - FRAC_PI_2).abs() < 2e-4);
    }

    #[test]
    fn subdivision_keeps_contours_closed() {
        let outline = outline_of(vec![
            quarter_circle(),
            CubicSegment::new(p(0.0, 1.0), p(-1.0, 1.0), p(-1.0, 0.0), p(0.0, 0.0)),
        ]);
        let out = subdivide_by_arc_length(&outline, 0.1);
        for c in &out.contours {
            assert!(Contour::new(c.segments().to_vec()).is_ok());
        }
        assert!(out.segment_count() > outline.segment_count());
    }
}

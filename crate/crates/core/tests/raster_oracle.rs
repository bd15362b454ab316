use glyphtex_core::raster::rasterize_with_tolerance;
use glyphtex_core::{
    flatten, mask_from_alpha, parse_svg_path, rasterize, AlphaMask, Contour, CubicSegment,
    FillRule, Point2,
};
use proptest::prelude::*;

const KAPPA: f64 = 0.5519150244;

/// Nonzero winding number of `p` against a closed polygon.
fn winding(poly: &[(f64, f64)], p: (f64, f64)) -> i32 {
    let mut w = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if a.1 <= p.1 {
            if b.1 > p.1 && cross(a, b, p) > 0.0 {
                w += 1;
            }
        } else if b.1 <= p.1 && cross(a, b, p) < 0.0 {
            w -= 1;
        }
    }
    w
}

fn cross(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1)
}

/// Coverage by point sampling `n x n` sub-pixel centers.
fn supersample(poly: &[(f64, f64)], width: u32, height: u32, n: u32) -> Vec<f64> {
    let mut out = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let mut hits = 0;
            for sy in 0..n {
                for sx in 0..n {
                    let p = (
                        x as f64 + (sx as f64 + 0.5) / n as f64,
                        y as f64 + (sy as f64 + 0.5) / n as f64,
                    );
                    if winding(poly, p) != 0 {
                        hits += 1;
                    }
                }
            }
            out.push(hits as f64 / (n * n) as f64);
        }
    }
    out
}

fn polygon(points: &[(f64, f64)]) -> Vec<Contour> {
    let mut d = format!("M {} {}", points[0].0, points[0].1);
    for p in &points[1..] {
        d += &format!(" L {} {}", p.0, p.1);
    }
    d += " Z";
    parse_svg_path(&d).unwrap()
}

#[test]
fn square_area_matches_supersampling() {
    let square = [(2.0, 2.0), (12.0, 2.0), (12.0, 12.0), (2.0, 12.0)];
    let mask = rasterize(&polygon(&square), 20, 20, FillRule::NonZero);
    let oracle: f64 = supersample(&square, 20, 20, 16).iter().sum();
    assert!((oracle - 100.0).abs() <= 0.5);
    assert!((mask.sum() - 100.0).abs() <= 0.5);
}

#[test]
fn half_covered_boundary_columns() {
    // Edges at x = 2.5 and x = 12.5 cover half of columns 2 and 12.
    let square = [(2.5, 2.0), (12.5, 2.0), (12.5, 12.0), (2.5, 12.0)];
    let mask = rasterize(&polygon(&square), 20, 20, FillRule::NonZero);
    let oracle = supersample(&square, 20, 20, 16);
    for y in 2..12 {
        for x in [2u32, 12] {
            let v = mask.get(x, y);
            assert!((v - 0.5).abs() <= 0.01, "({x},{y}) = {v}");
            assert!((oracle[(y * 20 + x) as usize] - 0.5).abs() <= 0.01);
        }
    }
}

#[test]
fn slanted_triangle_matches_supersampling() {
    let tri = [(1.3, 0.7), (17.9, 4.2), (6.1, 15.6)];
    let mask = rasterize(&polygon(&tri), 20, 20, FillRule::NonZero);
    let oracle = supersample(&tri, 20, 20, 32);
    for (v, o) in mask.values().iter().zip(&oracle) {
        assert!((v - o).abs() < 0.04, "{v} vs {o}");
    }
    // Shoelace area.
    let area = 0.5
        * ((tri[1].0 - tri[0].0) * (tri[2].1 - tri[0].1)
            - (tri[2].0 - tri[0].0) * (tri[1].1 - tri[0].1))
            .abs();
    assert!((mask.sum() - area).abs() < 1e-9);
}

#[test]
fn even_odd_star() {
    // Pentagram: the center pentagon has winding 2.
    let pts: Vec<(f64, f64)> = (0..5)
        .map(|i| {
            let a = -std::f64::consts::FRAC_PI_2 + i as f64 * 4.0 * std::f64::consts::PI / 5.0;
            (20.0 + 18.0 * a.cos(), 20.0 + 18.0 * a.sin())
        })
        .collect();
    let contours = polygon(&pts);
    let nz = rasterize(&contours, 40, 40, FillRule::NonZero);
    let eo = rasterize(&contours, 40, 40, FillRule::EvenOdd);
    assert_eq!(nz.get(20, 20), 1.0);
    assert_eq!(eo.get(20, 20), 0.0);
    let oracle: f64 = supersample(&pts, 40, 40, 8).iter().sum();
    assert!((nz.sum() - oracle).abs() / oracle < 0.01);
}

fn quarter_circle() -> CubicSegment {
    CubicSegment::new(
        Point2::new(1.0, 0.0),
        Point2::new(1.0, KAPPA),
        Point2::new(KAPPA, 1.0),
        Point2::new(0.0, 1.0),
    )
}

fn distance_to_polyline(p: Point2, poly: &[Point2]) -> f64 {
    poly.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let ab = b - a;
            let len2 = ab.x * ab.x + ab.y * ab.y;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0)
            };
            p.distance(a + ab * t)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn flattened_quarter_circle_stays_within_tolerance() {
    let seg = quarter_circle();
    let poly = flatten(&seg, 1e-3);
    assert_eq!(poly[0], seg.p0);
    assert_eq!(*poly.last().unwrap(), seg.p3);
    let worst = (0..=10_000)
        .map(|i| distance_to_polyline(seg.eval(i as f64 / 10_000.0), &poly))
        .fold(0.0, f64::max);
    assert!(worst <= 1e-3, "{worst}");
}

#[test]
fn smaller_tolerance_never_means_fewer_points() {
    let seg = CubicSegment::new(
        Point2::new(0.0, 0.0),
        Point2::new(30.0, 80.0),
        Point2::new(70.0, -40.0),
        Point2::new(100.0, 10.0),
    );
    let mut tol = 8.0;
    let mut last = 0;
    while tol > 1e-4 {
        let n = flatten(&seg, tol).len();
        assert!(n >= last);
        last = n;
        tol *= 0.5;
    }
}

/// Disc of radius `r` made of four cubic arcs.
fn disc(cx: f64, cy: f64, r: f64) -> Vec<Contour> {
    let k = KAPPA * r;
    let d = format!(
        "M {} {} C {} {} {} {} {} {} C {} {} {} {} {} {} C {} {} {} {} {} {} C {} {} {} {} {} {} Z",
        cx + r, cy,
        cx + r, cy + k, cx + k, cy + r, cx, cy + r,
        cx - k, cy + r, cx - r, cy + k, cx - r, cy,
        cx - r, cy - k, cx - k, cy - r, cx, cy - r,
        cx + k, cy - r, cx + r, cy - k, cx + r, cy,
    );
    parse_svg_path(&d).unwrap()
}

/// Exact area enclosed by closed cubic contours (Green's theorem; the
/// polynomial integrand is integrated exactly by Gauss-Legendre with 4
/// nodes).
fn exact_area(contours: &[Contour]) -> f64 {
    let nodes = [
        (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
        (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
        (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
        (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    ];
    let mut area = 0.0;
    for c in contours {
        for s in c.segments() {
            for (x, w) in nodes {
                let t = 0.5 * (x + 1.0);
                let p = s.eval(t);
                let mt = 1.0 - t;
                let d = (s.c1 - s.p0) * (3.0 * mt * mt)
                    + (s.c2 - s.c1) * (6.0 * mt * t)
                    + (s.p3 - s.c2) * (3.0 * t * t);
                area += 0.5 * w * 0.5 * (p.x * d.y - p.y * d.x);
            }
        }
    }
    area.abs()
}

#[test]
fn coverage_converges_with_resolution() {
    let mut last_err = f64::INFINITY;
    for res in [64u32, 128, 256] {
        let r = res as f64;
        let shape = disc(0.5 * r, 0.5 * r, 0.37 * r);
        let expected = exact_area(&shape) / (r * r);
        let got = rasterize(&shape, res, res, FillRule::NonZero).sum() / (r * r);
        let err = (got - expected).abs();
        assert!(err < last_err, "res {res}: {err} !< {last_err}");
        last_err = err;
    }
}

#[test]
fn square_area_is_exact_at_every_resolution() {
    for res in [64u32, 128, 256] {
        let r = res as f64;
        let (a, b) = (0.1234 * r, 0.7891 * r);
        let sq = polygon(&[(a, a), (b, a), (b, b), (a, b)]);
        let got = rasterize(&sq, res, res, FillRule::NonZero).sum() / (r * r);
        let expected = (0.7891f64 - 0.1234).powi(2);
        assert!((got - expected).abs() < 1e-9);
    }
}

#[test]
fn mask_alpha_round_trip() {
    let mask = rasterize(&disc(20.0, 20.0, 13.3), 40, 40, FillRule::NonZero);
    let back = mask_from_alpha(&mask.to_alpha_image([0, 0, 0]));
    for (a, b) in mask.values().iter().zip(back.values()) {
        assert!((a - b).abs() <= 1.0 / 255.0);
    }
}

fn arb_convex_polygon() -> impl Strategy<Value = Vec<(f64, f64)>> {
    // Random angles around a center give a convex (star-shaped, regular
    // radius) polygon.
    (
        prop::collection::vec(0.0f64..std::f64::consts::TAU, 3..9),
        8.0f64..28.0,
        30.0f64..34.0,
        30.0f64..34.0,
    )
        .prop_map(|(mut angles, r, cx, cy)| {
            angles.sort_by(f64::total_cmp);
            angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            angles
                .into_iter()
                .map(|a| (cx + r * a.cos(), cy + r * a.sin()))
                .collect()
        })
        .prop_filter("at least a triangle", |p: &Vec<(f64, f64)>| p.len() >= 3)
}

fn shoelace(p: &[(f64, f64)]) -> f64 {
    let mut s = 0.0;
    for i in 0..p.len() {
        let (a, b) = (p[i], p[(i + 1) % p.len()]);
        s += a.0 * b.1 - b.0 * a.1;
    }
    0.5 * s.abs()
}

fn arb_quarter_polygon() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0i32..120, 0i32..120), 3..8)
        .prop_map(|v| v.into_iter().map(|(x, y)| (x as f64 / 4.0, y as f64 / 4.0)).collect())
}

proptest! {
    #[test]
    fn coverage_stays_in_unit_interval(poly in arb_quarter_polygon(), eo in any::<bool>()) {
        let rule = if eo { FillRule::EvenOdd } else { FillRule::NonZero };
        let mask = rasterize(&polygon(&poly), 32, 32, rule);
        prop_assert!(mask.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn convex_area_within_one_percent(poly in arb_convex_polygon()) {
        let area = shoelace(&poly);
        prop_assume!(area > 20.0);
        let mask = rasterize(&polygon(&poly), 64, 64, FillRule::NonZero);
        prop_assert!((mask.sum() - area).abs() <= 0.01 * area);
    }

    #[test]
    fn integer_translation_shifts_the_mask(
        poly in arb_quarter_polygon(),
        dx in 0u32..16,
        dy in 0u32..16,
    ) {
        let contours = polygon(&poly);
        let moved: Vec<Contour> =
            contours.iter().map(|c| c.translate(dx as f64, dy as f64)).collect();
        let a = rasterize(&contours, 48, 48, FillRule::NonZero);
        let b = rasterize(&moved, 64, 64, FillRule::NonZero);
        for y in 0..48 {
            for x in 0..48 {
                prop_assert_eq!(a.get(x, y), b.get(x + dx, y + dy));
            }
        }
    }
}

#[test]
fn subdividing_does_not_change_the_mask() {
    use glyphtex_core::{subdivide_by_arc_length, GlyphOutline};
    let outline = GlyphOutline::new(disc(64.0, 64.0, 50.0), 1.0);
    let fine = subdivide_by_arc_length(&outline, 3.0);
    assert!(fine.segment_count() > outline.segment_count());
    let a = rasterize_with_tolerance(&outline.contours, 128, 128, FillRule::NonZero, 1e-4);
    let b = rasterize_with_tolerance(&fine.contours, 128, 128, FillRule::NonZero, 1e-4);
    let mean: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        / a.values().len() as f64;
    assert!(mean <= 1e-6, "{mean}");
}

#[test]
fn zero_mask_helpers() {
    let m = AlphaMask::zeros(3, 2);
    assert_eq!(m.to_gray8(), vec![0; 6]);
    assert!(AlphaMask::from_values(2, 2, vec![0.0; 3]).is_none());
}

//! Glyph outlines from TrueType / OpenType fonts, and plain left-to-right
//! word layout by advance widths.

use alloc::vec::Vec;
use core::fmt;

use ttf_parser::{Face, GlyphId, OutlineBuilder};

use crate::geometry::{normalize_to_cubics, Contour, CubicSegment, GlyphOutline, Point2};

#[derive(Debug, Clone, PartialEq)]
pub enum FontError {
    UnsupportedFont,
    MissingGlyph(char),
    InvalidSize,
}

impl fmt::Display for FontError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FontError::UnsupportedFont => f.write_str("font file could not be parsed"),
            FontError::MissingGlyph(c) => write!(f, "font has no glyph for {c:?}"),
            FontError::InvalidSize => f.write_str("font size must be positive and finite"),
        }
    }
}

impl core::error::Error for FontError {}

/// Collects `ttf_parser` outline callbacks into closed cubic contours,
/// scaling font units to pixels and flipping y so it points down.
struct CubicCollector {
    scale: f64,
    contours: Vec<Contour>,
    segments: Vec<CubicSegment>,
    start: Point2,
    current: Point2,
}

impl CubicCollector {
    fn pt(&self, x: f32, y: f32) -> Point2 {
        Point2::new(f64::from(x) * self.scale, -f64::from(y) * self.scale)
    }

    fn finish_contour(&mut self) {
        if self.segments.is_empty() {
            return;
        }
        if self.current != self.start {
            self.segments
                .push(CubicSegment::line(self.current, self.start));
        }
        let segments = core::mem::take(&mut self.segments);
        self.contours
            .push(Contour::new(segments).expect("font contour closed"));
        self.current = self.start;
    }
}

impl OutlineBuilder for CubicCollector {
    fn move_to(&mut self, x: f32, y: f32) {
        self.finish_contour();
        self.start = self.pt(x, y);
        self.current = self.start;
    }

    fn line_to(&mut self, x: f32, y: f32) {
        let p = self.pt(x, y);
        self.segments.push(CubicSegment::line(self.current, p));
        self.current = p;
    }

    fn quad_to(&mut self, x1: f32, y1: f32, x: f32, y: f32) {
        let q = self.pt(x1, y1);
        let p = self.pt(x, y);
        self.segments.push(normalize_to_cubics(self.current, q, p));
        self.current = p;
    }

    fn curve_to(&mut self, x1: f32, y1: f32, x2: f32, y2: f32, x: f32, y: f32) {
        let seg = CubicSegment::new(self.current, self.pt(x1, y1), self.pt(x2, y2), self.pt(x, y));
        self.current = seg.p3;
        self.segments.push(seg);
    }

    fn close(&mut self) {
        self.finish_contour();
    }
}

fn parse_face(font_bytes: &[u8]) -> Result<Face<'_>, FontError> {
    Face::parse(font_bytes, 0).map_err(|_| FontError::UnsupportedFont)
}

fn check_size(size_px: f64) -> Result<(), FontError> {
    if size_px > 0.0 && size_px.is_finite() {
        Ok(())
    } else {
        Err(FontError::InvalidSize)
    }
}

fn glyph_outline(face: &Face<'_>, id: GlyphId, size_px: f64) -> GlyphOutline {
    let upem = f64::from(face.units_per_em());
    let mut collector = CubicCollector {
        scale: size_px / upem,
        contours: Vec::new(),
        segments: Vec::new(),
        start: Point2::default(),
        current: Point2::default(),
    };
    face.outline_glyph(id, &mut collector);
    collector.finish_contour();
    GlyphOutline::new(collector.contours, upem)
}

/// Outline of `codepoint` with the em square mapped to `size_px`.
///
/// Coordinates are relative to the glyph origin on the baseline, y down.
/// Whitespace yields an outline with no contours.
pub fn outline_from_font(
    font_bytes: &[u8],
    codepoint: char,
    size_px: f64,
) -> Result<GlyphOutline, FontError> {
    check_size(size_px)?;
    let face = parse_face(font_bytes)?;
    if codepoint.is_whitespace() {
        return Ok(GlyphOutline::new(Vec::new(), f64::from(face.units_per_em())));
    }
    let id = face
        .glyph_index(codepoint)
        .ok_or(FontError::MissingGlyph(codepoint))?;
    Ok(glyph_outline(&face, id, size_px))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionedGlyph {
    pub codepoint: char,
    /// Pen position on the baseline where the glyph was placed.
    pub origin_x: f64,
    pub advance: f64,
    /// Outline already translated to `origin_x`.
    pub outline: GlyphOutline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordLayout {
    pub glyphs: Vec<PositionedGlyph>,
    pub advance: f64,
}

impl WordLayout {
    pub fn contours(&self) -> Vec<Contour> {
        self.glyphs
            .iter()
            .flat_map(|g| g.outline.contours.iter().cloned())
            .collect()
    }
}

/// Lays `text` out left to right on a single baseline using horizontal
/// advances only. No kerning, shaping or ligatures.
pub fn layout_word(font_bytes: &[u8], text: &str, size_px: f64) -> Result<WordLayout, FontError> {
    check_size(size_px)?;
    let face = parse_face(font_bytes)?;
    let scale = size_px / f64::from(face.units_per_em());
    let mut pen = 0.0;
    let mut glyphs = Vec::new();
    for ch in text.chars() {
        let id = match face.glyph_index(ch) {
            Some(id) => id,
            None if ch.is_whitespace() => {
                // Fall back to the space advance for whitespace the font lacks.
                face.glyph_index(' ').ok_or(FontError::MissingGlyph(ch))?
            }
            None => return Err(FontError::MissingGlyph(ch)),
        };
        let advance = f64::from(face.glyph_hor_advance(id).unwrap_or(0)) * scale;
        let outline = if ch.is_whitespace() {
            GlyphOutline::new(Vec::new(), f64::from(face.units_per_em()))
        } else {
            let o = glyph_outline(&face, id, size_px);
            let contours = o.contours.iter().map(|c| c.translate(pen, 0.0)).collect();
            GlyphOutline::new(contours, o.units_per_em)
        };
        glyphs.push(PositionedGlyph {
            codepoint: ch,
            origin_x: pen,
            advance,
            outline,
        });
        pen += advance;
    }
    Ok(WordLayout {
        glyphs,
        advance: pen,
    })
}

//! SVG path-data (`d` attribute) parsing into closed cubic contours.
//!
//! Lines and quadratics are promoted to cubics, relative coordinates are
//! resolved, and every subpath is closed with a straight edge back to its
//! start if it does not already end there. Elliptical arcs are rejected.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::geometry::{normalize_to_cubics, Contour, CubicSegment, Point2, CLOSURE_EPSILON};

#[derive(Debug, Clone, PartialEq)]
pub enum PathError {
    /// Malformed input at byte `offset`; `token` is the offending text
    /// (empty at end of input).
    Parse {
        offset: usize,
        token: String,
        expected: &'static str,
    },
    UnsupportedCommand { offset: usize, command: char },
}

impl PathError {
    pub fn offset(&self) -> usize {
        match self {
            PathError::Parse { offset, .. } | PathError::UnsupportedCommand { offset, .. } => {
                *offset
            }
        }
    }
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::Parse {
                offset,
                token,
                expected,
            } if token.is_empty() => {
                write!(f, "expected {expected} at byte {offset}, found end of input")
            }
            PathError::Parse {
                offset,
                token,
                expected,
            } => write!(f, "expected {expected} at byte {offset}, found {token:?}"),
            PathError::UnsupportedCommand { offset, command } => {
                write!(f, "unsupported path command '{command}' at byte {offset}")
            }
        }
    }
}

impl core::error::Error for PathError {}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r' | 0x0c)) {
            self.pos += 1;
        }
    }

    fn skip_ws_comma(&mut self) {
        self.skip_ws();
        if self.peek() == Some(b',') {
            self.pos += 1;
            self.skip_ws();
        }
    }

    fn at_number(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(b'0'..=b'9' | b'.' | b'-' | b'+'))
    }

    /// Text of the token starting at `pos`, for error reporting.
    fn token_at(&self, pos: usize) -> String {
        let rest = &self.src[pos..];
        let end = rest
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c.is_ascii_whitespace() || c == ',' || c.is_ascii_alphabetic())
            .map_or(rest.len(), |(i, _)| i);
        rest[..end].to_string()
    }

    fn error(&self, pos: usize, expected: &'static str) -> PathError {
        PathError::Parse {
            offset: pos,
            token: self.token_at(pos),
            expected,
        }
    }

    fn number(&mut self) -> Result<f64, PathError> {
        self.skip_ws();
        let start = self.pos;
        let b = self.bytes();
        let mut i = start;
        if matches!(b.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let int_start = i;
        while matches!(b.get(i), Some(b'0'..=b'9')) {
            i += 1;
        }
        let mut digits = i - int_start;
        if b.get(i) == Some(&b'.') {
            i += 1;
            let frac_start = i;
            while matches!(b.get(i), Some(b'0'..=b'9')) {
                i += 1;
            }
            digits += i - frac_start;
        }
        if digits == 0 {
            return Err(self.error(start, "number"));
        }
        if matches!(b.get(i), Some(b'e' | b'E')) {
            let mut j = i + 1;
            if matches!(b.get(j), Some(b'+' | b'-')) {
                j += 1;
            }
            let exp_start = j;
            while matches!(b.get(j), Some(b'0'..=b'9')) {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        let value: f64 = self.src[start..i]
            .parse()
            .map_err(|_| self.error(start, "number"))?;
        if !value.is_finite() {
            return Err(PathError::Parse {
                offset: start,
                token: self.src[start..i].into(),
                expected: "finite number",
            });
        }
        self.pos = i;
        self.skip_ws_comma();
        Ok(value)
    }

    fn pair(&mut self) -> Result<Point2, PathError> {
        let x = self.number()?;
        let y = self.number()?;
        Ok(Point2::new(x, y))
    }
}

#[derive(Clone, Copy)]
enum LastControl {
    None,
    Cubic(Point2),
    Quad(Point2),
}

struct Builder {
    contours: Vec<Contour>,
    segments: Vec<CubicSegment>,
    start: Point2,
    current: Point2,
    last: LastControl,
}

impl Builder {
    fn push(&mut self, seg: CubicSegment) {
        self.current = seg.p3;
        self.segments.push(seg);
    }

    fn close(&mut self) {
        if !self.segments.is_empty() {
            if self.current != self.start {
                if self.current.distance(self.start) <= CLOSURE_EPSILON {
                    self.segments.last_mut().unwrap().p3 = self.start;
                } else {
                    self.segments
                        .push(CubicSegment::line(self.current, self.start));
                }
            }
            let segments = core::mem::take(&mut self.segments);
            // Closed and finite by construction.
            self.contours.push(Contour::new(segments).expect("closed subpath"));
        }
        self.current = self.start;
    }
}

/// Parses SVG 1.1 path data into closed contours.
pub fn parse_svg_path(d: &str) -> Result<Vec<Contour>, PathError> {
    let mut lx = Lexer { src: d, pos: 0 };
    let mut b = Builder {
        contours: Vec::new(),
        segments: Vec::new(),
        start: Point2::default(),
        current: Point2::default(),
        last: LastControl::None,
    };
    let mut seen_move = false;

    loop {
        lx.skip_ws();
        let Some(byte) = lx.peek() else { break };
        let cmd_pos = lx.pos;
        let cmd = byte as char;
        if !cmd.is_ascii_alphabetic() {
            return Err(lx.error(cmd_pos, "path command"));
        }
        if matches!(cmd, 'A' | 'a') {
            return Err(PathError::UnsupportedCommand {
                offset: cmd_pos,
                command: cmd,
            });
        }
        if !"MmZzLlHhVvCcSsQqTt".contains(cmd) {
            return Err(lx.error(cmd_pos, "path command"));
        }
        if !seen_move && !matches!(cmd, 'M' | 'm') {
            return Err(lx.error(cmd_pos, "moveto"));
        }
        lx.pos += 1;
        let relative = cmd.is_ascii_lowercase();

        if matches!(cmd, 'Z' | 'z') {
            b.close();
            b.last = LastControl::None;
            continue;
        }

        // Every other command takes at least one argument group and repeats
        // while numbers follow.
        let mut first = true;
        loop {
            if !first && !lx.at_number() {
                break;
            }
            let origin = if relative { b.current } else { Point2::default() };
            let abs = |p: Point2| p + origin;
            match cmd.to_ascii_uppercase() {
                'M' if first => {
                    let p = abs(lx.pair()?);
                    b.close();
                    b.start = p;
                    b.current = p;
                    seen_move = true;
                    b.last = LastControl::None;
                }
                'M' | 'L' => {
                    let p = abs(lx.pair()?);
                    b.push(CubicSegment::line(b.current, p));
                    b.last = LastControl::None;
                }
                'H' => {
                    let x = lx.number()? + origin.x;
                    b.push(CubicSegment::line(b.current, Point2::new(x, b.current.y)));
                    b.last = LastControl::None;
                }
                'V' => {
                    let y = lx.number()? + origin.y;
                    b.push(CubicSegment::line(b.current, Point2::new(b.current.x, y)));
                    b.last = LastControl::None;
                }
                'C' => {
                    let c1 = abs(lx.pair()?);
                    let c2 = abs(lx.pair()?);
                    let p = abs(lx.pair()?);
                    b.push(CubicSegment::new(b.current, c1, c2, p));
                    b.last = LastControl::Cubic(c2);
                }
                'S' => {
                    let c1 = match b.last {
                        LastControl::Cubic(c) => b.current + (b.current - c),
                        _ => b.current,
                    };
                    let c2 = abs(lx.pair()?);
                    let p = abs(lx.pair()?);
                    b.push(CubicSegment::new(b.current, c1, c2, p));
                    b.last = LastControl::Cubic(c2);
                }
                'Q' => {
                    let q = abs(lx.pair()?);
                    let p = abs(lx.pair()?);
                    b.push(normalize_to_cubics(b.current, q, p));
                    b.last = LastControl::Quad(q);
                }
                'T' => {
                    let q = match b.last {
                        LastControl::Quad(c) => b.current + (b.current - c),
                        _ => b.current,
                    };
                    let p = abs(lx.pair()?);
                    b.push(normalize_to_cubics(b.current, q, p));
                    b.last = LastControl::Quad(q);
                }
                _ => unreachable!(),
            }
            first = false;
        }
    }
    b.close();
    Ok(b.contours)
}

/// Serializes contours as absolute path data: one `M`, one `C` per segment
/// and a closing `Z` per contour. Coordinates use the shortest decimal form
/// that parses back to the same `f64`, so re-parsing is bit-exact.
pub fn to_path_data(contours: &[Contour]) -> String {
    let mut out = String::new();
    for contour in contours {
        let segs = contour.segments();
        if !out.is_empty() {
            out.push(' ');
        }
        let _ = write!(out, "M {} {}", segs[0].p0.x, segs[0].p0.y);
        for s in segs {
            let _ = write!(
                out,
                " C {} {} {} {} {} {}",
                s.c1.x, s.c1.y, s.c2.x, s.c2.y, s.p3.x, s.p3.y
            );
        }
        out.push_str(" Z");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn triangle_gets_explicit_closing_edge() {
        let c = parse_svg_path("M 0 0 L 10 0 L 10 10 Z").unwrap();
        assert_eq!(c.len(), 1);
        let s = c[0].segments();
        assert_eq!(s.len(), 3);
        assert_eq!((s[2].p0, s[2].p3), (p(10.0, 10.0), p(0.0, 0.0)));
    }

    #[test]
    fn relative_offsets_resolve() {
        let c = parse_svg_path("m 5 5 l 10 0 z").unwrap();
        let s = c[0].segments();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].p0, p(5.0, 5.0));
        assert_eq!(s[0].p3, p(15.0, 5.0));
        assert_eq!(s[1].p3, p(5.0, 5.0));
    }

    #[test]
    fn cubic_tokens_map_directly() {
        let c = parse_svg_path("M0,0 C 0 10 10 10 10 0 Z").unwrap();
        let s = c[0].segments();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].c1, p(0.0, 10.0));
        assert_eq!(s[0].c2, p(10.0, 10.0));
        assert_eq!(s[0].p3, p(10.0, 0.0));
    }

    #[test]
    fn arcs_are_rejected() {
        assert_eq!(
            parse_svg_path("M 0 0 A 5 5 0 0 1 10 0"),
            Err(PathError::UnsupportedCommand {
                offset: 6,
                command: 'A'
            })
        );
    }

    #[test]
    fn bad_number_reports_offset_and_token() {
        let err = parse_svg_path("M 0 0 L 1 x").unwrap_err();
        assert_eq!(
            err,
            PathError::Parse {
                offset: 10,
                token: "x".into(),
                expected: "number"
            }
        );
        let err = parse_svg_path("M 0 0 L 1").unwrap_err();
        assert_eq!(err.offset(), 9);
    }

    #[test]
    fn empty_input_has_no_contours() {
        assert!(parse_svg_path("").unwrap().is_empty());
        assert!(parse_svg_path("  M 3 4 ").unwrap().is_empty());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let d = "m 0.1 0.2 c 0.3 0.7 1.1 -0.4 2.2 0.123456789 s 1 1 2 -3 q 1 1 2 2 t 3 3 h -1.5 v 2e-3 z";
        let first = parse_svg_path(d).unwrap();
        let second = parse_svg_path(&to_path_data(&first)).unwrap();
        assert_eq!(first, second);
    }
}

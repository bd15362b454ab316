//! Minimal SVG document loader: `path` elements, `g` translate transforms,
//! and the root `width`/`height`.

use glyphtex_core::{parse_svg_path, Contour, FillRule, PathError};

#[derive(Debug, thiserror::Error)]
pub enum SvgError {
    #[error("malformed SVG document: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("root element is <{0}>, expected <svg>")]
    NotSvg(String),
    #[error("path {index}: {source}")]
    Path {
        index: usize,
        #[source]
        source: PathError,
    },
    #[error("unsupported transform {0:?}; only translate is honored")]
    UnsupportedTransform(String),
    #[error("invalid length {0:?}")]
    InvalidLength(String),
}

/// Paths of an SVG document with group translations applied.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub contours: Vec<Contour>,
    pub fill_rule: FillRule,
}

fn parse_length(text: &str) -> Result<f64, SvgError> {
    let trimmed = text.trim();
    let number = trimmed.strip_suffix("px").unwrap_or(trimmed);
    match number.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(SvgError::InvalidLength(text.to_string())),
    }
}

fn parse_translate(text: &str) -> Result<(f64, f64), SvgError> {
    let unsupported = || SvgError::UnsupportedTransform(text.to_string());
    let mut total = (0.0, 0.0);
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix("translate").ok_or_else(unsupported)?.trim_start();
        let body = body.strip_prefix('(').ok_or_else(unsupported)?;
        let close = body.find(')').ok_or_else(unsupported)?;
        let args: Vec<f64> = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| unsupported()))
            .collect::<Result<_, _>>()?;
        let (dx, dy) = match args.as_slice() {
            [dx] => (*dx, 0.0),
            [dx, dy] => (*dx, *dy),
            _ => return Err(unsupported()),
        };
        total = (total.0 + dx, total.1 + dy);
        rest = body[close + 1..].trim_start_matches(|c: char| c == ',' || c.is_whitespace());
    }
    Ok(total)
}

fn offset_of(node: roxmltree::Node) -> Result<(f64, f64), SvgError> {
    let mut off = (0.0, 0.0);
    for anc in node.ancestors().skip(1) {
        if anc.has_tag_name("g") {
            if let Some(t) = anc.attribute("transform") {
                let (dx, dy) = parse_translate(t)?;
                off = (off.0 + dx, off.1 + dy);
            }
        }
    }
    Ok(off)
}

/// Parses an SVG document. The fill rule is taken from the first path that
/// declares one (attribute or inline style), defaulting to nonzero.
pub fn load_svg_document(text: &str) -> Result<SvgDocument, SvgError> {
    let doc = roxmltree::Document::parse(text)?;
    let root = doc.root_element();
    if !root.has_tag_name("svg") {
        return Err(SvgError::NotSvg(root.tag_name().name().to_string()));
    }
    let width = root.attribute("width").map(parse_length).transpose()?;
    let height = root.attribute("height").map(parse_length).transpose()?;
    let mut contours = Vec::new();
    let mut fill_rule = None;
    for (index, node) in root.descendants().filter(|n| n.has_tag_name("path")).enumerate() {
        let Some(d) = node.attribute("d") else { continue };
        let parsed = parse_svg_path(d).map_err(|source| SvgError::Path { index, source })?;
        if fill_rule.is_none() {
            fill_rule = declared_fill_rule(node);
        }
        let (dx, dy) = offset_of(node)?;
        contours.extend(parsed.into_iter().map(|c| if dx == 0.0 && dy == 0.0 { c } else { c.translate(dx, dy) }));
    }
    Ok(SvgDocument { width, height, contours, fill_rule: fill_rule.unwrap_or_default() })
}

fn declared_fill_rule(node: roxmltree::Node) -> Option<FillRule> {
    let from_style = node.attribute("style").and_then(|style| {
        style.split(';').find_map(|decl| {
            let (k, v) = decl.split_once(':')?;
            (k.trim() == "fill-rule").then(|| v.trim())
        })
    });
    match from_style.or_else(|| node.attribute("fill-rule"))? {
        "evenodd" => Some(FillRule::EvenOdd),
        "nonzero" => Some(FillRule::NonZero),
        _ => None,
    }
}

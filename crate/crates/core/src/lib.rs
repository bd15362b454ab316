//! Core of the glyph texturing pipeline.
//!
//! Converts glyph outlines and SVG path data into anti-aliased coverage
//! masks, scales a texture with a Lanczos filter, tiles it, and blends it
//! over a background color through the mask. Everything here is a pure
//! function of its inputs and works without `std`; file formats, networking
//! and sessions live in the `glyphtex` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod composite;
pub mod font;
pub mod geometry;
pub mod image;
pub mod pattern;
pub mod prompt;
pub mod raster;
pub mod resample;
pub mod svg_path;
pub mod tile;

pub use crate::composite::{
    blend_channel, composite, format_hex_color, parse_hex_color, BackgroundColor, ComposedImage,
    CompositeError, InvalidColor,
};
pub use crate::font::{layout_word, outline_from_font, FontError, WordLayout};
pub use crate::geometry::{
    arc_length, normalize_to_cubics, subdivide_by_arc_length, BoundingBox, Contour, CubicSegment,
    GeometryError, GlyphOutline, Point2,
};
pub use crate::image::{Canvas, ImageError, RasterImage, RgbImage, RgbaImage, TextureImage};
pub use crate::pattern::procedural_pattern;
pub use crate::prompt::{build_prompt, EmptyConcept};
pub use crate::raster::{flatten, mask_from_alpha, rasterize, AlphaMask, FillRule};
pub use crate::resample::{
    kernel_weight, resample, resize, Boundary, LanczosKernel, ResampleError, ScaleFactor,
};
pub use crate::svg_path::{parse_svg_path, to_path_data, PathError};
pub use crate::tile::{tile, tile_with_offset};

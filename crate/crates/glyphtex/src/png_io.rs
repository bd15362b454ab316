//! PNG encoding and decoding for the pipeline's image types.

use std::io::Cursor;

use glyphtex_core::{AlphaMask, ComposedImage, RgbaImage};

#[derive(Debug, thiserror::Error)]
pub enum PngError {
    #[error("PNG decode failed: {0}")]
    Decode(#[from] png::DecodingError),
    #[error("PNG encode failed: {0}")]
    Encode(#[from] png::EncodingError),
    #[error("unsupported PNG layout: {0}")]
    Unsupported(String),
}

fn encode(width: u32, height: u32, color: png::ColorType, data: &[u8]) -> Result<Vec<u8>, PngError> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, width, height);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header()?;
        writer.write_image_data(data)?;
        writer.finish()?;
    }
    Ok(out)
}

/// 8-bit RGB PNG of a composed image.
pub fn encode_png(image: &ComposedImage) -> Result<Vec<u8>, PngError> {
    encode(image.width(), image.height(), png::ColorType::Rgb, image.as_raw())
}

/// 8-bit RGBA PNG.
pub fn encode_rgba_png(image: &RgbaImage) -> Result<Vec<u8>, PngError> {
    encode(image.width(), image.height(), png::ColorType::Rgba, image.as_raw())
}

/// 8-bit grayscale PNG of a mask, for inspection.
pub fn encode_mask_png(mask: &AlphaMask) -> Result<Vec<u8>, PngError> {
    encode(mask.width(), mask.height(), png::ColorType::Grayscale, &mask.to_gray8())
}

/// Decodes any non-interlaced or interlaced PNG into RGBA8. Palette and
/// low-bit-depth images are expanded, 16-bit channels are reduced to their
/// high byte, and images without alpha become opaque.
pub fn decode_png(bytes: &[u8]) -> Result<RgbaImage, PngError> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info()?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| PngError::Unsupported("image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf)?;
    buf.truncate(info.buffer_size());
    let rgba: Vec<u8> = match info.color_type {
        png::ColorType::Rgba => buf,
        png::ColorType::Rgb => buf
            .chunks_exact(3)
            .flat_map(|p| [p[0], p[1], p[2], 255])
            .collect(),
        png::ColorType::Grayscale => buf.iter().flat_map(|&g| [g, g, g, 255]).collect(),
        png::ColorType::GrayscaleAlpha => buf
            .chunks_exact(2)
            .flat_map(|p| [p[0], p[0], p[0], p[1]])
            .collect(),
        other => return Err(PngError::Unsupported(format!("{other:?}"))),
    };
    RgbaImage::from_raw(info.width, info.height, rgba)
        .map_err(|e| PngError::Unsupported(e.to_string()))
}

/// Decodes an RGB PNG written by [`encode_png`] back to a composed image.
pub fn decode_composed_png(bytes: &[u8]) -> Result<ComposedImage, PngError> {
    let rgba = decode_png(bytes)?;
    let rgb = rgba
        .as_raw()
        .chunks_exact(4)
        .flat_map(|p| [p[0], p[1], p[2]])
        .collect();
    ComposedImage::from_raw(rgba.width(), rgba.height(), rgb)
        .map_err(|e| PngError::Unsupported(e.to_string()))
}

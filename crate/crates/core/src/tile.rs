//! Periodic tiling of a texture over a canvas.

use crate::image::{Canvas, TextureImage};

/// Fills a `width x height` canvas with copies of `texture` starting at the
/// top-left corner. Partial tiles on the right and bottom are cropped.
pub fn tile(texture: &TextureImage, width: u32, height: u32) -> Canvas {
    tile_with_offset(texture, width, height, 0, 0)
}

/// Like [`tile`] with the tile grid origin moved to `(dx, dy)`:
/// `canvas(x, y) = texture((x - dx) mod tw, (y - dy) mod th)`.
///
/// # Panics
///
/// If `width` or `height` is zero.
pub fn tile_with_offset(
    texture: &TextureImage,
    width: u32,
    height: u32,
    dx: i64,
    dy: i64,
) -> Canvas {
    let tw = i64::from(texture.width());
    let th = i64::from(texture.height());
    Canvas::from_fn(width, height, |x, y| {
        let sx = (i64::from(x) - dx).rem_euclid(tw) as u32;
        let sy = (i64::from(y) - dy).rem_euclid(th) as u32;
        texture.pixel(sx, sy)
    })
    .expect("canvas dimensions must be non-zero")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numbered(w: u32, h: u32) -> TextureImage {
        TextureImage::from_fn(w, h, |x, y| [x as u8, y as u8, (x * 7 + y) as u8, 255]).unwrap()
    }

    #[test]
    fn modular_indexing() {
        let t = numbered(10, 10);
        let c = tile(&t, 25, 25);
        assert_eq!(c.pixel(12, 7), t.pixel(2, 7));
        assert_eq!(c.pixel(24, 24), t.pixel(4, 4));
    }

    #[test]
    fn single_tile_is_identity() {
        let t = numbered(13, 6);
        assert_eq!(tile(&t, 13, 6), t);
    }

    #[test]
    fn quadrants_repeat() {
        let t = numbered(4, 4);
        let c = tile(&t, 8, 8);
        for y in 0..4 {
            for x in 0..4 {
                let p = c.pixel(x, y);
                assert_eq!(c.pixel(x + 4, y), p);
                assert_eq!(c.pixel(x, y + 4), p);
                assert_eq!(c.pixel(x + 4, y + 4), p);
            }
        }
    }

    #[test]
    fn offset_shifts_origin() {
        let t = numbered(5, 3);
        let c = tile_with_offset(&t, 9, 9, 2, -1);
        assert_eq!(c.pixel(2, 0), t.pixel(0, 1));
        assert_eq!(c.pixel(0, 0), t.pixel(3, 1));
    }
}

//! Deterministic tileable texture used when no generation service is
//! configured.
//!
//! Periodic value noise: lattice values are hashed from `(seed, octave,
//! cell)` with cell indices taken modulo the lattice size, and the lattice
//! spans the image exactly once per axis. The pattern is therefore periodic
//! with the image dimensions, so tiling shows no seam. Three octaves of
//! smooth noise pick a base color between two seeded palette entries, and a
//! fine octave thresholded into small blobs adds a third accent color.

use crate::image::TextureImage;

/// Approximate base lattice cell size in pixels.
const BASE_CELL: f64 = 48.0;
const OCTAVES: u32 = 3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn hash(seed: u64, layer: u64, ix: u64, iy: u64) -> u64 {
    splitmix64(seed ^ splitmix64(layer ^ splitmix64(ix ^ splitmix64(iy))))
}

fn unit(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

struct Lattice {
    seed: u64,
    layer: u64,
    cells_x: u32,
    cells_y: u32,
}

impl Lattice {
    fn value(&self, ix: u32, iy: u32) -> f64 {
        let ix = ix % self.cells_x;
        let iy = iy % self.cells_y;
        unit(hash(self.seed, self.layer, u64::from(ix), u64::from(iy)))
    }

    /// Noise at lattice coordinates `(u, v)`, `0 <= u < cells_x`.
    fn sample(&self, u: f64, v: f64) -> f64 {
        let (fx, fy) = (libm::floor(u), libm::floor(v));
        let (ix, iy) = (fx as u32, fy as u32);
        let (tx, ty) = (smooth(u - fx), smooth(v - fy));
        let a = self.value(ix, iy);
        let b = self.value(ix + 1, iy);
        let c = self.value(ix, iy + 1);
        let d = self.value(ix + 1, iy + 1);
        let top = a + (b - a) * tx;
        let bottom = c + (d - c) * tx;
        top + (bottom - top) * ty
    }
}

fn cells_for(len: u32, scale: f64) -> u32 {
    (libm::round(f64::from(len) * scale / BASE_CELL) as u32).max(1)
}

fn palette(seed: u64, index: u64) -> [f64; 3] {
    let h = hash(seed, 0xC010_0000 + index, 0, 0);
    [
        40.0 + 200.0 * unit(splitmix64(h)),
        40.0 + 200.0 * unit(splitmix64(h ^ 1)),
        40.0 + 200.0 * unit(splitmix64(h ^ 2)),
    ]
}

/// Seamless `width x height` RGBA texture, fully determined by its inputs.
///
/// # Panics
///
/// If either dimension is zero.
pub fn procedural_pattern(seed: u64, width: u32, height: u32) -> TextureImage {
    let octaves: [Lattice; OCTAVES as usize] = core::array::from_fn(|k| {
        let scale = f64::from(1u32 << k);
        Lattice {
            seed,
            layer: k as u64 + 1,
            cells_x: cells_for(width, scale),
            cells_y: cells_for(height, scale),
        }
    });
    let blobs = Lattice {
        seed,
        layer: 100,
        cells_x: cells_for(width, 6.0),
        cells_y: cells_for(height, 6.0),
    };
    let (base, tint, accent) = (palette(seed, 0), palette(seed, 1), palette(seed, 2));

    TextureImage::from_fn(width, height, |x, y| {
        let fx = f64::from(x) / f64::from(width);
        let fy = f64::from(y) / f64::from(height);
        let mut t = 0.0;
        let mut amp = 0.5;
        let mut norm = 0.0;
        for lat in &octaves {
            t += amp * lat.sample(fx * f64::from(lat.cells_x), fy * f64::from(lat.cells_y));
            norm += amp;
            amp *= 0.5;
        }
        let t = t / norm;
        let b = blobs.sample(fx * f64::from(blobs.cells_x), fy * f64::from(blobs.cells_y));
        let dot = ((b - 0.62) / 0.12).clamp(0.0, 1.0);
        let mut px = [0u8; 4];
        for c in 0..3 {
            let v = base[c] + (tint[c] - base[c]) * t;
            let v = v + (accent[c] - v) * dot;
            px[c] = libm::round(v).clamp(0.0, 255.0) as u8;
        }
        px[3] = 255;
        px
    })
    .expect("pattern dimensions must be non-zero")
}

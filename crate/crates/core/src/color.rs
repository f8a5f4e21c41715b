//! BT.601 full-range RGB <-> YCbCr.

use crate::error::{Error, Result};
use crate::image::{GrayMap, RgbImage, ValueRange};

const KR: f64 = 0.299;
const KB: f64 = 0.114;
const KG: f64 = 1.0 - KR - KB;
// 2 (1 - KB) and 2 (1 - KR)
const CB_SCALE: f64 = 1.772;
const CR_SCALE: f64 = 1.402;

pub fn luma(px: [f64; 3]) -> f64 {
    KR * px[0] + KG * px[1] + KB * px[2]
}

pub fn pixel_to_ycbcr(px: [f64; 3]) -> [f64; 3] {
    let y = luma(px);
    [y, (px[2] - y) / CB_SCALE, (px[0] - y) / CR_SCALE]
}

/// Inverse transform; the result is not clamped.
pub fn pixel_from_ycbcr(ycc: [f64; 3]) -> [f64; 3] {
    let [y, cb, cr] = ycc;
    let r = y + CR_SCALE * cr;
    let b = y + CB_SCALE * cb;
    let g = (y - KR * r - KB * b) / KG;
    [r, g, b]
}

/// Splits an image into (Y, Cb, Cr) maps. Y is declared on `[0, 1]`, the
/// chroma planes on `[-0.5, 0.5]`.
pub fn rgb_to_ycbcr(img: &RgbImage) -> (GrayMap, GrayMap, GrayMap) {
    let n = img.len();
    let (mut y, mut cb, mut cr) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for px in img.pixels() {
        let [a, b, c] = pixel_to_ycbcr(*px);
        y.push(a);
        cb.push(b);
        cr.push(c);
    }
    let (h, w) = img.dims();
    // Clamping only absorbs rounding at the range ends.
    (
        GrayMap::from_clamped(h, w, y, ValueRange::UNIT).expect("shape"),
        GrayMap::from_clamped(h, w, cb, ValueRange::CHROMA).expect("shape"),
        GrayMap::from_clamped(h, w, cr, ValueRange::CHROMA).expect("shape"),
    )
}

pub fn ycbcr_to_rgb(y: &GrayMap, cb: &GrayMap, cr: &GrayMap) -> Result<RgbImage> {
    Error::check_dims(y.dims(), cb.dims())?;
    Error::check_dims(y.dims(), cr.dims())?;
    let data = y
        .values()
        .iter()
        .zip(cb.values())
        .zip(cr.values())
        .map(|((&y, &cb), &cr)| pixel_from_ycbcr([y, cb, cr]))
        .collect();
    RgbImage::from_clamped(y.height(), y.width(), data)
}

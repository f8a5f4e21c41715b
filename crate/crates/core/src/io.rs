//! PNG / binary PPM reading and 8-bit PNG writing.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::{DynamicImage, ImageError, ImageReader};

use crate::error::{Error, Result};
use crate::image::{GrayMap, RgbImage};

/// Quantizes a unit-interval value to 8 bits: clamp, then round half up.
pub fn quantize_u8(v: f64) -> u8 {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    (v * 255.0 + 0.5).floor() as u8
}

fn map_image_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::IoError(e) => Error::io(path, e),
        other => Error::format(path, other.to_string()),
    }
}

fn decode(path: &Path) -> Result<DynamicImage> {
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    match reader.format() {
        Some(image::ImageFormat::Png) | Some(image::ImageFormat::Pnm) => {}
        Some(other) => {
            return Err(Error::format(path, format!("{other:?} is not supported")));
        }
        None => return Err(Error::format(path, "unrecognized image format")),
    }
    reader.decode().map_err(|e| map_image_error(path, e))
}

/// Reads an 8- or 16-bit PNG or PPM into unit-interval RGB. Alpha is dropped;
/// grayscale is replicated across channels.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let img = decode(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data: Vec<[f64; 3]> = match img {
        DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgb8(_)
        | DynamicImage::ImageRgba8(_) => img
            .into_rgb8()
            .pixels()
            .map(|p| p.0.map(|v| v as f64 / 255.0))
            .collect(),
        DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA16(_)
        | DynamicImage::ImageRgb16(_)
        | DynamicImage::ImageRgba16(_) => img
            .into_rgb16()
            .pixels()
            .map(|p| p.0.map(|v| v as f64 / 65535.0))
            .collect(),
        other => {
            return Err(Error::format(
                path,
                format!("unsupported sample type {:?}", other.color()),
            ))
        }
    };
    RgbImage::new(h, w, data)
}

fn write_png(
    path: &Path,
    buf: &[u8],
    w: usize,
    h: usize,
    color: image::ExtendedColorType,
) -> Result<()> {
    use image::ImageEncoder;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let encoder = image::codecs::png::PngEncoder::new(BufWriter::new(file));
    encoder
        .write_image(buf, w as u32, h as u32, color)
        .map_err(|e| map_image_error(path, e))
}

/// Writes an 8-bit RGB PNG.
pub fn save_image(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let buf: Vec<u8> = img
        .pixels()
        .iter()
        .flat_map(|px| px.map(quantize_u8))
        .collect();
    write_png(
        path.as_ref(),
        &buf,
        img.width(),
        img.height(),
        image::ExtendedColorType::Rgb8,
    )
}

/// Writes `values` as an 8-bit grayscale PNG after mapping `[lo, hi]`
/// linearly onto `[0, 255]`.
pub fn save_gray_scaled(map: &GrayMap, lo: f64, hi: f64, path: impl AsRef<Path>) -> Result<()> {
    let span = hi - lo;
    let buf: Vec<u8> = map
        .values()
        .iter()
        .map(|&v| {
            if span > 0.0 && span.is_finite() {
                quantize_u8((v - lo) / span)
            } else {
                0
            }
        })
        .collect();
    write_png(
        path.as_ref(),
        &buf,
        map.width(),
        map.height(),
        image::ExtendedColorType::L8,
    )
}

/// Debug dump: maps with a finite declared range use it; others are
/// stretched between their observed extremes.
pub fn save_gray_map(map: &GrayMap, path: impl AsRef<Path>) -> Result<()> {
    let range = map.range();
    let (lo, hi) = if range.is_finite() {
        (range.lo, range.hi)
    } else {
        (map.min(), map.max())
    };
    save_gray_scaled(map, lo, hi, path)
}

/// Reads any supported image as a single unit-interval luma plane.
pub fn load_gray(path: impl AsRef<Path>, range: crate::image::ValueRange) -> Result<GrayMap> {
    let path = path.as_ref();
    let img = decode(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img
        .into_luma16()
        .pixels()
        .map(|p| p.0[0] as f64 / 65535.0)
        .collect();
    GrayMap::from_clamped(h, w, data, range)
}

//! Image containers shared by every stage.
//!
//! [`RgbImage`] holds unit-interval color data; [`GrayMap`] holds a scalar
//! field together with the closed interval its values are declared to lie in.
//! Both are row-major and immutable once built: every constructor validates
//! its invariants, so downstream code can rely on them.

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]`. Either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRange {
    pub lo: f64,
    pub hi: f64,
}

impl ValueRange {
    pub const UNIT: ValueRange = ValueRange { lo: 0.0, hi: 1.0 };
    pub const SIGNED_UNIT: ValueRange = ValueRange { lo: -1.0, hi: 1.0 };
    pub const CHROMA: ValueRange = ValueRange { lo: -0.5, hi: 0.5 };
    pub const POSITIVE: ValueRange = ValueRange {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub const fn new(lo: f64, hi: f64) -> Self {
        ValueRange { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

fn check_shape(height: usize, width: usize, len: usize) -> Result<()> {
    if height == 0 || width == 0 {
        return Err(Error::Argument(format!(
            "image dimensions must be positive, got {height}x{width}"
        )));
    }
    if len != height * width {
        return Err(Error::Argument(format!(
            "expected {} pixels for {height}x{width}, got {len}",
            height * width
        )));
    }
    Ok(())
}

/// Color image with every channel in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    height: usize,
    width: usize,
    data: Vec<[f64; 3]>,
}

impl RgbImage {
    pub fn new(height: usize, width: usize, data: Vec<[f64; 3]>) -> Result<Self> {
        check_shape(height, width, data.len())?;
        if let Some((i, px)) = data
            .iter()
            .enumerate()
            .find(|(_, px)| px.iter().any(|v| !ValueRange::UNIT.contains(*v)))
        {
            return Err(Error::Argument(format!(
                "pixel {i} has channel values {px:?} outside [0, 1]"
            )));
        }
        Ok(RgbImage {
            height,
            width,
            data,
        })
    }

    /// Builds an image from arbitrary values, clamping every channel into
    /// `[0, 1]`. NaN is mapped to 0.
    pub fn from_clamped(height: usize, width: usize, mut data: Vec<[f64; 3]>) -> Result<Self> {
        check_shape(height, width, data.len())?;
        for px in &mut data {
            for v in px.iter_mut() {
                *v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
            }
        }
        Ok(RgbImage {
            height,
            width,
            data,
        })
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                data.push(f(i, j));
            }
        }
        Self::new(height, width, data)
    }

    pub fn filled(height: usize, width: usize, px: [f64; 3]) -> Result<Self> {
        Self::new(height, width, vec![px; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.data
    }

    pub fn into_pixels(self) -> Vec<[f64; 3]> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> [f64; 3] {
        self.data[i * self.width + j]
    }

    /// Applies `f` to every channel value and clamps the result.
    pub fn map_channels(&self, f: impl Fn(f64) -> f64) -> RgbImage {
        let data = self.data.iter().map(|px| px.map(&f)).collect::<Vec<_>>();
        RgbImage::from_clamped(self.height, self.width, data).expect("shape preserved")
    }

    /// Mean over pixels of the BT.601 luma.
    pub fn mean_luma(&self) -> f64 {
        let sum: f64 = self.data.iter().map(|p| crate::color::luma(*p)).sum();
        sum / self.data.len() as f64
    }
}

/// Scalar field over the pixel grid with a declared value range.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayMap {
    height: usize,
    width: usize,
    data: Vec<f64>,
    range: ValueRange,
}

impl GrayMap {
    pub fn new(height: usize, width: usize, data: Vec<f64>, range: ValueRange) -> Result<Self> {
        check_shape(height, width, data.len())?;
        if let Some((i, v)) = data.iter().enumerate().find(|(_, v)| !range.contains(**v)) {
            return Err(Error::Argument(format!(
                "map value {v} at index {i} outside declared range [{}, {}]",
                range.lo, range.hi
            )));
        }
        Ok(GrayMap {
            height,
            width,
            data,
            range,
        })
    }

    /// Builds a map clamping every value into `range`. NaN is mapped to the
    /// lower end.
    pub fn from_clamped(
        height: usize,
        width: usize,
        mut data: Vec<f64>,
        range: ValueRange,
    ) -> Result<Self> {
        check_shape(height, width, data.len())?;
        for v in &mut data {
            *v = if v.is_nan() {
                range.lo
            } else {
                range.clamp(*v)
            };
        }
        Ok(GrayMap {
            height,
            width,
            data,
            range,
        })
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        range: ValueRange,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                data.push(f(i, j));
            }
        }
        Self::new(height, width, data, range)
    }

    pub fn filled(height: usize, width: usize, value: f64, range: ValueRange) -> Result<Self> {
        Self::new(height, width, vec![value; height * width], range)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn range(&self) -> ValueRange {
        self.range
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn into_values(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Re-declares the range, clamping values into it.
    pub fn clamp_to(&self, range: ValueRange) -> GrayMap {
        GrayMap::from_clamped(self.height, self.width, self.data.clone(), range)
            .expect("shape preserved")
    }
}

/// Replaces every channel value `v` with `1 - v`.
pub fn invert_image(img: &RgbImage) -> RgbImage {
    let data = img.pixels().iter().map(|px| px.map(|v| 1.0 - v)).collect();
    RgbImage::new(img.height(), img.width(), data).expect("1 - v stays in [0, 1]")
}

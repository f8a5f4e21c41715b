//! Comparison arms: dehazing the inverted image, histogram equalization and
//! gamma correction.

mod classic;
mod dehaze;

pub use classic::{equalize_luma, gamma_correct, histogram, histogram_equalize, HISTOGRAM_BINS};
pub use dehaze::{
    dark_channel, dark_channel_transmission, dehaze_enhance, dehaze_enhance_with, dehaze_recover,
    dehaze_recover_unclamped, estimate_atmospheric_light, AtmosphericEstimate, AtmosphericLight,
    BRIGHTEST_FRACTION, DARK_CHANNEL_RADIUS,
};

//! Low-light image enhancement by illumination map estimation.
//!
//! The observed image is modelled as `L = I ∘ T`: scene reflectance `I`
//! times a per-pixel illumination `T`. The crate estimates `T` as the
//! per-pixel max over R, G, B, refines it with a structure-aware quadratic
//! smoother (one sparse SPD solve), and recovers `I = L / (T^γ + ε)`, with
//! optional luma denoising blended back in proportion to darkness.
//!
//! ```no_run
//! use lime_core::{enhance_pipeline, io, DenoiserSpec, EnhanceParams, RefineMode};
//!
//! let img = io::load_image("dark.png")?;
//! let (out, report) =
//!     enhance_pipeline(&img, &EnhanceParams::default(), &DenoiserSpec::None, RefineMode::Lime)?;
//! io::save_image(&out, "bright.png")?;
//! println!("{report}");
//! # Ok::<(), lime_core::Error>(())
//! ```

pub mod baseline;
pub mod color;
mod error;
pub mod illumination;
pub mod image;
pub mod io;
mod params;
pub mod pipeline;
pub mod recovery;
pub mod refine;
mod report;
pub mod synthetic;
mod window;

pub use error::{Error, Result};
pub use image::{invert_image, GrayMap, RgbImage, ValueRange};
pub use params::{
    default_kernel_radius, EnhanceParams, Preconditioner, DEFAULT_ALPHA, DEFAULT_EPSILON,
    DEFAULT_GAMMA, DEFAULT_SIGMA, DEFAULT_SOLVER_MAX_ITER, DEFAULT_SOLVER_TOL,
};
pub use pipeline::{enhance, enhance_pipeline, Enhancement, RefineMode, DEFAULT_LOCAL_RADIUS};
pub use recovery::DenoiserSpec;
pub use report::{PipelineReport, StageTiming};

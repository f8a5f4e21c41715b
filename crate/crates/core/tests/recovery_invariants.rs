//! Recovery, recomposition and end-to-end bounds.

use lime_core::illumination::initial_illumination;
use lime_core::recovery::{gamma_adjust, recompose, recover_reflectance, reflectance_unclamped};
use lime_core::{
    enhance, synthetic, DenoiserSpec, EnhanceParams, GrayMap, RefineMode, RgbImage, ValueRange,
};
use proptest::prelude::*;

fn rgb(h: usize, w: usize) -> impl Strategy<Value = RgbImage> {
    prop::collection::vec(prop::array::uniform3(0.0..=1.0f64), h * w)
        .prop_map(move |px| RgbImage::new(h, w, px).unwrap())
}

fn unit_map(h: usize, w: usize) -> impl Strategy<Value = GrayMap> {
    prop::collection::vec(0.0..=1.0f64, h * w)
        .prop_map(move |v| GrayMap::new(h, w, v, ValueRange::UNIT).unwrap())
}

#[test]
fn initial_map_never_saturates() {
    let eps = EnhanceParams::default().epsilon;
    for img in synthetic::corpus(10, 20, 16, 16) {
        let t = initial_illumination(&img);
        let raw = reflectance_unclamped(&img, &t, eps).unwrap();
        assert!(raw.iter().flatten().all(|&v| v < 1.0));
    }
}

#[test]
fn recompose_endpoints_are_exact() {
    let a = synthetic::low_light_scene(1, 9, 7);
    let b = synthetic::low_light_scene(2, 9, 7);
    let ones = GrayMap::filled(9, 7, 1.0, ValueRange::UNIT).unwrap();
    let zeros = GrayMap::filled(9, 7, 0.0, ValueRange::UNIT).unwrap();
    assert_eq!(recompose(&a, &b, &ones).unwrap(), a);
    assert_eq!(recompose(&a, &b, &zeros).unwrap(), b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recompose_is_a_convex_combination(a in rgb(4, 5), b in rgb(4, 5), t in unit_map(4, 5)) {
        let out = recompose(&a, &b, &t).unwrap();
        for ((o, p), q) in out.pixels().iter().zip(a.pixels()).zip(b.pixels()) {
            for c in 0..3 {
                prop_assert!(o[c] >= p[c].min(q[c]) - 1e-12);
                prop_assert!(o[c] <= p[c].max(q[c]) + 1e-12);
            }
        }
    }

    #[test]
    fn recovery_brightens_where_it_can(img in rgb(5, 5), t in unit_map(5, 5)) {
        let eps = EnhanceParams::default().epsilon;
        let t = t.clamp_to(ValueRange::new(eps, 1.0 - eps));
        let out = recover_reflectance(&img, &t, eps).unwrap();
        for (o, l) in out.pixels().iter().flatten().zip(img.pixels().iter().flatten()) {
            prop_assert!(*o >= *l);
        }
    }

    #[test]
    fn enhanced_output_stays_in_range(seed in 0u64..1000, alpha in 0.0..1.0f64) {
        let img = synthetic::low_light_scene(seed, 12, 10);
        let params = EnhanceParams::default().with_alpha(alpha);
        let e = enhance(&img, &params, &DenoiserSpec::Gaussian { strength: 1.0 }, RefineMode::Lime).unwrap();
        prop_assert!(e.image.pixels().iter().flatten().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!(e.refined.values().iter().all(|&v| v >= params.epsilon && v <= 1.0));
    }
}

#[test]
fn enhancement_raises_mean_luminance_of_dark_scenes() {
    let params = EnhanceParams::default();
    for img in synthetic::corpus(50, 6, 32, 32) {
        let e = enhance(&img, &params, &DenoiserSpec::None, RefineMode::Lime).unwrap();
        assert!(e.image.mean_luma() > img.mean_luma());
        let adjusted = gamma_adjust(&e.refined, params.gamma).unwrap();
        // pixel-wise brightening holds wherever T^γ + ε ≤ 1
        for ((o, l), t) in e
            .image
            .pixels()
            .iter()
            .zip(img.pixels())
            .zip(adjusted.values())
        {
            if t + params.epsilon <= 1.0 {
                assert!((0..3).all(|c| o[c] >= l[c]));
            }
        }
    }
}

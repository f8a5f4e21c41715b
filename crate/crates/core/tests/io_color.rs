//! File round trips and colour-space conversions.

use lime_core::color::{rgb_to_ycbcr, ycbcr_to_rgb};
use lime_core::{io, RgbImage};
use proptest::prelude::*;

fn rgb(max_side: usize) -> impl Strategy<Value = RgbImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(h, w)| {
        prop::collection::vec(prop::array::uniform3(0.0..=1.0f64), h * w)
            .prop_map(move |px| RgbImage::new(h, w, px).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn png_round_trip_is_within_half_a_level(img in rgb(9)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.png");
        io::save_image(&img, &path).unwrap();
        let back = io::load_image(&path).unwrap();
        prop_assert_eq!(back.dims(), img.dims());
        for (a, b) in back.pixels().iter().flatten().zip(img.pixels().iter().flatten()) {
            prop_assert!((a - b).abs() <= 1.0 / 510.0 + 1e-12);
        }
    }

    #[test]
    fn ycbcr_round_trip(img in rgb(8)) {
        let (y, cb, cr) = rgb_to_ycbcr(&img);
        let back = ycbcr_to_rgb(&y, &cb, &cr).unwrap();
        for (a, b) in back.pixels().iter().flatten().zip(img.pixels().iter().flatten()) {
            prop_assert!((a - b).abs() <= 1e-6);
        }
    }
}

#[test]
fn saving_twice_gives_identical_bytes() {
    let img = lime_core::synthetic::low_light_scene(3, 17, 23);
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.png"), dir.path().join("b.png"));
    io::save_image(&img, &a).unwrap();
    io::save_image(&img, &b).unwrap();
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

use gazescore_core::spatial::{classify_aoi, quadrant_of, AoiLabel, ObjectPlacement, Quadrant, ScreenGeometry};
use proptest::prelude::*;

prop_compose! {
    fn placement()(x in 0.0f64..1920.0, y in 0.0f64..1080.0, w in 1.0f64..600.0, h in 1.0f64..600.0) -> ObjectPlacement {
        ObjectPlacement::new(0, x, y, w, h).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn aoi_agrees_with_point_in_rectangle(p in placement(), x in 0.0f64..=1920.0, y in 0.0f64..=1080.0) {
        let g = ScreenGeometry::default();
        let (ox, oy) = p.position();
        let (w, h) = p.size();
        let inside = ox - w / 2.0 <= x && x <= ox + w / 2.0 && oy - h / 2.0 <= y && y <= oy + h / 2.0;
        let want = match (inside, ox < 960.0) {
            (false, _) => AoiLabel::Outside,
            (true, true) => AoiLabel::Left,
            (true, false) => AoiLabel::Right,
        };
        prop_assert_eq!(classify_aoi(x, y, Some(&p), &g), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn quadrants_partition_the_screen(x in 0.0f64..=1920.0, y in 0.0f64..=1080.0, up in any::<bool>()) {
        let g = ScreenGeometry::default().with_y_up(up);
        let yy = if up { y } else { 1080.0 - y };
        let hits: Vec<Quadrant> = Quadrant::ALL
            .into_iter()
            .filter(|q| {
                let left = x < 960.0;
                let upper = yy > 540.0;
                match q {
                    Quadrant::Q1 => left && upper,
                    Quadrant::Q2 => !left && upper,
                    Quadrant::Q3 => left && !upper,
                    Quadrant::Q4 => !left && !upper,
                }
            })
            .collect();
        prop_assert_eq!(hits.len(), 1);
        prop_assert_eq!(quadrant_of(x, y, &g), hits[0]);
    }

    #[test]
    fn flipping_y_swaps_upper_and_lower(x in 0.0f64..=1920.0, y in 0.0f64..=1080.0) {
        prop_assume!(y != 540.0);
        let down = ScreenGeometry::default();
        let up = down.with_y_up(true);
        let swapped = match quadrant_of(x, y, &down) {
            Quadrant::Q1 => Quadrant::Q3,
            Quadrant::Q2 => Quadrant::Q4,
            Quadrant::Q3 => Quadrant::Q1,
            Quadrant::Q4 => Quadrant::Q2,
        };
        prop_assert_eq!(quadrant_of(x, y, &up), swapped);
    }

    #[test]
    fn side_follows_object_position(p in placement(), x in 0.0f64..=1920.0, y in 0.0f64..=1080.0) {
        let label = classify_aoi(x, y, Some(&p), &ScreenGeometry::default());
        let left = p.position().0 < 960.0;
        prop_assert!(!(label == AoiLabel::Left && !left));
        prop_assert!(!(label == AoiLabel::Right && left));
    }
}

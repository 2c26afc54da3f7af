use gazescore_core::ingest::{clean_samples, format_coordinates, normalize_timestamps, CleaningOptions, RawRecord};
use gazescore_core::spatial::ScreenGeometry;
use proptest::prelude::*;

fn gaze_text() -> impl Strategy<Value = Option<String>> {
    prop_oneof![
        Just(None),
        (-100.0f64..2100.0, -100.0f64..1200.0).prop_map(|(x, y)| Some(format_coordinates(x.round(), y.round()))),
        Just(Some("(0, 0)".to_string())),
        Just(Some("garbage".to_string())),
        Just(Some(String::new())),
    ]
}

fn record() -> impl Strategy<Value = RawRecord> {
    (prop::option::weighted(0.95, -1000i64..100_000), gaze_text()).prop_map(|(timestamp_ms, gaze_text)| RawRecord {
        timestamp_ms,
        gaze_text,
        ..RawRecord::default()
    })
}

/// Re-expresses cleaned samples as records.
fn as_records(samples: &[gazescore_core::ingest::GazeSample]) -> Vec<RawRecord> {
    samples
        .iter()
        .map(|s| RawRecord { timestamp_ms: Some(s.t_ms), gaze_text: Some(format_coordinates(s.x_px, s.y_px)), ..RawRecord::default() })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn cleaning_is_idempotent(records in prop::collection::vec(record(), 0..200), oob in any::<bool>()) {
        let g = ScreenGeometry::default();
        let opts = CleaningOptions { drop_out_of_bounds: oob };
        let once = clean_samples(&records, &g, opts);
        let twice = clean_samples(&as_records(&once.samples), &g, opts);
        prop_assert_eq!(twice.dropped, 0);
        prop_assert_eq!(twice.samples, once.samples);
    }

    #[test]
    fn cleaning_conserves_counts(records in prop::collection::vec(record(), 0..200)) {
        let c = clean_samples(&records, &ScreenGeometry::default(), CleaningOptions::default());
        let with_gaze = records.iter().filter(|r| r.gaze_text.is_some()).count();
        prop_assert_eq!(c.samples.len() + c.dropped, with_gaze);
        prop_assert!(c.samples.windows(2).all(|w| w[0].t_ms <= w[1].t_ms));
    }

    #[test]
    fn normalization_preserves_gaps(records in prop::collection::vec(record(), 1..200)) {
        let c = clean_samples(&records, &ScreenGeometry::default(), CleaningOptions::default());
        let n = normalize_timestamps(&c.samples);
        if let Some(first) = n.first() {
            prop_assert_eq!(first.t_ms, 0);
        }
        for i in 0..n.len() {
            for j in i..n.len().min(i + 5) {
                prop_assert_eq!(n[j].t_ms - n[i].t_ms, c.samples[j].t_ms - c.samples[i].t_ms);
            }
        }
    }
}

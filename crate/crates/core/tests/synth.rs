use gazescore_core::ingest::Level;
use gazescore_core::pipeline::analyze_level;
use gazescore_core::scoring::ScoringConfig;
use gazescore_core::spatial::ScreenGeometry;
use gazescore_core::synth::{generate_session, SynthProfile};
use proptest::prelude::*;

prop_compose! {
    fn profile()(
        seed in any::<u64>(),
        level in prop_oneof![Just(Level::One), Just(Level::Two), Just(Level::Three)],
        duration_ms in 60_000i64..180_000,
        sf in 60.0f64..=100.0,
        periods in prop::collection::vec(400i64..5000, 0..6),
        extra_share in 0.0f64..0.05,
        n_objects in 10u64..150,
        n_clicks in 0u64..30,
        n_answers in 0u64..40,
        pc in 0.0f64..=1.0,
        pa in 0.0f64..=1.0,
        noise_px in 0.0f64..60.0,
        y_up in any::<bool>(),
    ) -> SynthProfile {
        let period_ms: i64 = periods.iter().map(|l| l + 16).sum();
        SynthProfile {
            seed,
            student_id: "P".into(),
            level,
            duration_ms,
            sample_interval_ms: 16,
            target_sf_pct: sf,
            target_aoi_dwell_share: period_ms as f64 / duration_ms as f64 + extra_share,
            n_objects,
            engagement_period_lengths_ms: periods,
            n_clicks,
            n_answers,
            event_accuracy: (pc, pa),
            noise_px,
            geometry: ScreenGeometry::default().with_y_up(y_up),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pipeline_recovers_generated_statistics(p in profile()) {
        let session = generate_session(&p).unwrap();
        prop_assert_eq!(&session, &generate_session(&p).unwrap());
        let a = analyze_level(&session, &ScoringConfig::default());

        prop_assert_eq!(a.transitions.dwell.session_duration_ms, p.duration_ms);
        prop_assert!((a.transitions.dwell.stimuli_focus_pct - p.target_sf_pct).abs() <= 3.0);
        let sq = a.transitions.dwell.time_in_quadrant[2] + a.transitions.dwell.time_in_quadrant[3];
        prop_assert_eq!(sq, p.stimulus_ms());
        let aoi = a.transitions.aoi_dwell.time_in_aoi_ms;
        prop_assert_eq!(aoi[0] + aoi[1], p.aoi_ms());

        let spans: Vec<i64> = a.periods.iter().map(|e| e.duration_ms).collect();
        prop_assert_eq!(&spans, &p.engagement_period_lengths_ms);

        prop_assert_eq!(session.placements.len() as u64, p.n_objects);
        prop_assert_eq!(a.game.total_clicks, p.n_clicks);
        prop_assert_eq!(a.game.total_answers, p.n_answers);
        prop_assert_eq!(a.game.correct_clicks, p.correct_clicks());
        prop_assert_eq!(a.game.correct_answers, p.correct_answers());
    }
}

use gazescore_core::ingest::Level;
use gazescore_core::scoring::{
    base_score, bonus_aoi, bonus_duration, bonus_sustained, final_score, penalty_excess, psi_focus, temporal_impact, temporal_multiplier,
    LevelFeatures, ScoringConfig,
};
use gazescore_core::temporal::TemporalMetrics;
use proptest::prelude::*;

fn level() -> impl Strategy<Value = Level> {
    prop_oneof![Just(Level::One), Just(Level::Two), Just(Level::Three)]
}

prop_compose! {
    fn features()(
        level in level(),
        t_sq in 0u64..500,
        t_nsq in 0u64..500,
        focus in 0.0f64..=100.0,
        interactions in 0u64..500,
        transitions_aoi in 0u64..20_000,
        bidirectional in 0u64..500,
        omega in 0.0f64..=1.0,
        sf in 0.0f64..=100.0,
        eta in 0.0f64..=1.0,
        mu in 0.0f64..30_000.0,
        periods in 0u64..40,
        sustained_frac in 0.0f64..=1.0,
    ) -> LevelFeatures {
        let sustained = (periods as f64 * sustained_frac) as u64;
        LevelFeatures {
            level, t_sq, t_nsq, focus_aoi_pct: focus, interactions, transitions_aoi,
            bidirectional_aoi: bidirectional, omega_aoi: omega, sf_pct: sf,
            temporal: TemporalMetrics {
                eta_temporal: eta,
                mu_engagement_ms: mu,
                sigma_sustained: if periods == 0 { 0.0 } else { sustained as f64 / periods as f64 },
                period_count: periods,
                sustained_count: sustained,
                session_duration_ms: 100_000,
                engaged_ms: 0,
            },
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn final_score_and_impact_are_bounded(f in features(), bound in 0.5f64..40.0) {
        let cfg = ScoringConfig { max_impact: [bound; 3], ..ScoringConfig::default() };
        let b = final_score(&f, &cfg);
        prop_assert!((0.0..=100.0).contains(&b.final_score));
        prop_assert!(b.i_t.abs() <= bound);
        prop_assert!([1.0, 0.9, 0.7, 0.4].contains(&b.lambda));
        prop_assert_eq!(b, final_score(&f, &cfg));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn base_score_is_linear_in_transitions(f in features()) {
        let cfg = ScoringConfig::default();
        let s = base_score(&f, &cfg);
        let up = LevelFeatures { t_sq: f.t_sq + 1, ..f };
        let out = LevelFeatures { t_nsq: f.t_nsq + 1, ..f };
        prop_assert!(close(base_score(&up, &cfg) - s, 3.0));
        prop_assert!(close(base_score(&out, &cfg) - s, -1.5));
    }

    #[test]
    fn multiplier_is_non_increasing(a in -50.0f64..200.0, b in -50.0f64..200.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(temporal_multiplier(hi) <= temporal_multiplier(lo));
    }

    #[test]
    fn focus_is_monotone_within_segments(level in level(), a in 0.0f64..=100.0, b in 0.0f64..=100.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let breaks: &[f64] = match level { Level::One => &[], Level::Two => &[50.0, 75.0], Level::Three => &[65.0] };
        let same_segment = breaks.iter().all(|&x| (lo <= x) == (hi <= x));
        if same_segment {
            prop_assert!(psi_focus(hi, level) >= psi_focus(lo, level));
        }
    }

    #[test]
    fn bonuses_respect_caps(eta in 0.0f64..=1.0, n in 0u64..1000, mu in 0.0f64..100.0, periods in 0u64..1000) {
        let a = bonus_aoi(eta);
        prop_assert!((-4.0..=6.0).contains(&a));
        prop_assert!((0.0..=4.0).contains(&bonus_sustained(n)));
        prop_assert!((-3.0..=3.0).contains(&bonus_duration(mu)));
        prop_assert!((0.0..=4.0).contains(&penalty_excess(periods, 8)));
    }

    #[test]
    fn impact_never_exceeds_default_bound(f in features()) {
        prop_assert!(temporal_impact(&f, &ScoringConfig::default()).abs() <= 15.0);
    }
}

#[test]
fn focus_jumps_at_band_edges() {
    let eps = 1e-9;
    let jump2 = psi_focus(50.0 + eps, Level::Two) - psi_focus(50.0, Level::Two);
    assert!((jump2 - 7.5).abs() < 1e-6);
    let jump3 = psi_focus(65.0 + eps, Level::Three) - psi_focus(65.0, Level::Three);
    assert!((jump3 - 10.0).abs() < 1e-6);
}

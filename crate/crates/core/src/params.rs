//! Published model constants, in one place.
//!
//! Defaults for every tunable live here; the configurable subset is exposed
//! through [`ScoringConfig`](crate::scoring::ScoringConfig). Values marked
//! "chosen" are not part of the published model and are declared defaults.

/// Reward per transition from a non-stimulus into a stimulus quadrant.
pub const ALPHA1: f64 = 3.0;
/// Cost per transition from a stimulus into a non-stimulus quadrant.
pub const ALPHA2: f64 = 1.5;
/// Weight of AoI efficiency in the base score (chosen).
pub const GAMMA: f64 = 10.0;
/// Weight of the focus term in the base score (chosen).
pub const DELTA: f64 = 1.0;

/// Minimum engagement span.
pub const TAU_MIN_MS: i64 = 400;
/// Span at which an engagement counts as sustained.
pub const TAU_SUSTAINED_MS: i64 = 2500;
/// More periods than this are penalised.
pub const EXCESS_PERIOD_THRESHOLD: u64 = 8;
/// Bound on the temporal impact per level (chosen).
pub const MAX_IMPACT: [f64; 3] = [15.0, 15.0, 15.0];

/// Level bonus weights: `(focus weight, feature weight)` per level. The
/// feature is interactions (1), AoI transitions (2) or bidirectional AoI
/// transitions (3).
pub const LEVEL_BONUS_WEIGHTS: [(f64, f64); 3] = [(0.2, 0.5), (0.25, 1.8), (0.3, 2.5)];

/// Stimuli-focus thresholds (percent) and slopes per level.
pub const FOCUS_THRESHOLD_PCT: [f64; 3] = [25.0, 40.0, 50.0];
pub const FOCUS_SLOPE: [f64; 3] = [0.4, 0.6, 0.75];
/// Level 2 adds a flat bonus when focus is strictly inside this band.
pub const FOCUS_L2_BAND_PCT: (f64, f64) = (50.0, 75.0);
pub const FOCUS_L2_BAND_BONUS: f64 = 7.5;
/// Level 3 adds a flat bonus when focus is strictly above this.
pub const FOCUS_L3_HIGH_PCT: f64 = 65.0;
pub const FOCUS_L3_HIGH_BONUS: f64 = 10.0;

/// AoI bonus: efficiency above `HIGH` earns `(100 eta - 30) * slope` up to
/// the cap; below `LOW` costs `(10 - 100 eta) * slope` up to the cap.
pub const AOI_BONUS_HIGH: f64 = 0.3;
pub const AOI_BONUS_HIGH_SLOPE: f64 = 0.15;
pub const AOI_BONUS_CAP: f64 = 6.0;
pub const AOI_BONUS_LOW: f64 = 0.1;
pub const AOI_BONUS_LOW_SLOPE: f64 = 0.2;
pub const AOI_PENALTY_CAP: f64 = 4.0;

pub const SUSTAINED_BONUS_PER_PERIOD: f64 = 1.5;
pub const SUSTAINED_BONUS_CAP: f64 = 4.0;

/// Duration bonus thresholds in seconds of mean engagement.
pub const DURATION_LONG_S: f64 = 8.0;
pub const DURATION_LONG_SLOPE: f64 = 0.2;
pub const DURATION_SHORT_S: f64 = 3.0;
pub const DURATION_SHORT_SLOPE: f64 = 0.8;
pub const DURATION_CAP: f64 = 3.0;

pub const EXCESS_SLOPE: f64 = 0.6;
pub const EXCESS_CAP: f64 = 4.0;

/// Temporal multiplier: `(lower bound of base score, multiplier)`, checked
/// from the top; below the first bound the multiplier is 1.
pub const MULTIPLIER_STEPS: [(f64, f64); 3] = [(85.0, 0.4), (70.0, 0.7), (50.0, 0.9)];

pub const SCORE_MIN: f64 = 0.0;
pub const SCORE_MAX: f64 = 100.0;

/// Calibration labels by `|model - truth|` (chosen to reproduce the
/// published labelling of 1.3, 5.2 and 11.6).
pub const CALIBRATION_EXCELLENT_BELOW: f64 = 2.5;
pub const CALIBRATION_GOOD_BELOW: f64 = 7.5;
pub const CALIBRATION_FAIR_BELOW: f64 = 15.0;

/// Performance category cut-offs on the final score (chosen).
pub const MASTERY_AT: f64 = 85.0;
pub const DEVELOPING_AT: f64 = 60.0;

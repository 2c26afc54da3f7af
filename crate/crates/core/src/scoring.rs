//! Level-adaptive performance score.
//!
//! `F = clamp(S_base + lambda(S_base) * I_t, 0, 100)` where the base score
//! mixes transition counts, a level bonus, AoI efficiency and stimuli focus,
//! and the temporal impact `I_t` sums engagement bonuses and penalties,
//! bounded per level.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Level;
use crate::params;
use crate::temporal::{EngagementThresholds, TemporalMetrics};
use crate::transitions::{AoiTotal, DwellSummary};
use crate::validation::{AssessmentThresholds, InvalidThresholds};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{name} must be finite and non-negative (got {value})")]
    Negative { name: &'static str, value: f64 },
    #[error("tau_min_ms ({tau_min}) must not exceed tau_sustained_ms ({tau_sustained})")]
    ThresholdOrder { tau_min: i64, tau_sustained: i64 },
    #[error("max_impact for level {level} must be positive (got {value})")]
    MaxImpact { level: usize, value: f64 },
    #[error("assessment thresholds: {0}")]
    Assessment(#[from] InvalidThresholds),
}

/// Which efficiency feeds the AoI bonus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaSource {
    /// Share of session time inside engagement periods.
    #[default]
    Temporal,
    /// Share of session time with gaze inside an AoI.
    AoiDwell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringConfig {
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma: f64,
    pub delta: f64,
    pub tau_min_ms: i64,
    pub tau_sustained_ms: i64,
    pub gap_tolerance_ms: i64,
    pub excess_period_threshold: u64,
    pub max_impact: [f64; 3],
    pub aoi_total_changes_only: bool,
    pub eta_source: EtaSource,
    pub assessment: AssessmentThresholds,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            alpha1: params::ALPHA1,
            alpha2: params::ALPHA2,
            gamma: params::GAMMA,
            delta: params::DELTA,
            tau_min_ms: params::TAU_MIN_MS,
            tau_sustained_ms: params::TAU_SUSTAINED_MS,
            gap_tolerance_ms: 0,
            excess_period_threshold: params::EXCESS_PERIOD_THRESHOLD,
            max_impact: params::MAX_IMPACT,
            aoi_total_changes_only: false,
            eta_source: EtaSource::Temporal,
            assessment: AssessmentThresholds::default(),
        }
    }
}

impl ScoringConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in [("alpha1", self.alpha1), ("alpha2", self.alpha2), ("gamma", self.gamma), ("delta", self.delta)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ConfigError::Negative { name, value });
            }
        }
        if self.tau_min_ms < 0 || self.gap_tolerance_ms < 0 {
            let (name, value) =
                if self.tau_min_ms < 0 { ("tau_min_ms", self.tau_min_ms) } else { ("gap_tolerance_ms", self.gap_tolerance_ms) };
            return Err(ConfigError::Negative { name, value: value as f64 });
        }
        if self.tau_min_ms > self.tau_sustained_ms {
            return Err(ConfigError::ThresholdOrder { tau_min: self.tau_min_ms, tau_sustained: self.tau_sustained_ms });
        }
        for (i, &m) in self.max_impact.iter().enumerate() {
            if !(m.is_finite() && m > 0.0) {
                return Err(ConfigError::MaxImpact { level: i + 1, value: m });
            }
        }
        Ok(self.assessment.validate()?)
    }

    pub fn engagement(&self) -> EngagementThresholds {
        EngagementThresholds {
            tau_min_ms: self.tau_min_ms,
            tau_sustained_ms: self.tau_sustained_ms,
            gap_tolerance_ms: self.gap_tolerance_ms,
        }
    }

    pub fn aoi_total(&self) -> AoiTotal {
        if self.aoi_total_changes_only {
            AoiTotal::ChangesOnly
        } else {
            AoiTotal::AllPairs
        }
    }

    pub fn max_impact_for(&self, level: Level) -> f64 {
        self.max_impact[level.index()]
    }
}

/// Per-level inputs to the score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelFeatures {
    pub level: Level,
    /// Transitions into the stimulus half.
    pub t_sq: u64,
    /// Transitions out of the stimulus half.
    pub t_nsq: u64,
    /// Percent of session time inside an AoI.
    pub focus_aoi_pct: f64,
    /// Objects presented during the level.
    pub interactions: u64,
    pub transitions_aoi: u64,
    pub bidirectional_aoi: u64,
    pub omega_aoi: f64,
    pub sf_pct: f64,
    pub temporal: TemporalMetrics,
}

impl LevelFeatures {
    /// All counts and ratios zero.
    pub fn zero(level: Level) -> LevelFeatures {
        LevelFeatures {
            level,
            t_sq: 0,
            t_nsq: 0,
            focus_aoi_pct: 0.0,
            interactions: 0,
            transitions_aoi: 0,
            bidirectional_aoi: 0,
            omega_aoi: 0.0,
            sf_pct: 0.0,
            temporal: TemporalMetrics::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub level: Level,
    pub s_base: f64,
    pub level_bonus: f64,
    pub psi_focus: f64,
    pub b_aoi: f64,
    pub b_sustained: f64,
    pub b_duration: f64,
    pub p_excess: f64,
    pub i_t: f64,
    pub lambda: f64,
    pub final_score: f64,
}

pub fn level_bonus(features: &LevelFeatures) -> f64 {
    let (w_focus, w_feature) = params::LEVEL_BONUS_WEIGHTS[features.level.index()];
    let feature = match features.level {
        Level::One => features.interactions,
        Level::Two => features.transitions_aoi,
        Level::Three => features.bidirectional_aoi,
    };
    w_focus * features.focus_aoi_pct + w_feature * feature as f64
}

/// Stimuli-focus reward: linear above the level threshold plus the level's
/// flat band bonus.
pub fn psi_focus(sf_pct: f64, level: Level) -> f64 {
    let i = level.index();
    let linear = (sf_pct - params::FOCUS_THRESHOLD_PCT[i]).max(0.0) * params::FOCUS_SLOPE[i];
    let flat = match level {
        Level::One => 0.0,
        Level::Two => {
            let (lo, hi) = params::FOCUS_L2_BAND_PCT;
            if lo < sf_pct && sf_pct < hi {
                params::FOCUS_L2_BAND_BONUS
            } else {
                0.0
            }
        }
        Level::Three => {
            if sf_pct > params::FOCUS_L3_HIGH_PCT {
                params::FOCUS_L3_HIGH_BONUS
            } else {
                0.0
            }
        }
    };
    linear + flat
}

pub fn base_score(features: &LevelFeatures, config: &ScoringConfig) -> f64 {
    config.alpha1 * features.t_sq as f64 - config.alpha2 * features.t_nsq as f64
        + level_bonus(features)
        + config.gamma * features.omega_aoi
        + config.delta * psi_focus(features.sf_pct, features.level)
}

pub fn bonus_aoi(eta: f64) -> f64 {
    let pct = eta * 100.0;
    if eta > params::AOI_BONUS_HIGH {
        params::AOI_BONUS_CAP.min((pct - params::AOI_BONUS_HIGH * 100.0) * params::AOI_BONUS_HIGH_SLOPE)
    } else if eta < params::AOI_BONUS_LOW {
        -params::AOI_PENALTY_CAP.min((params::AOI_BONUS_LOW * 100.0 - pct) * params::AOI_BONUS_LOW_SLOPE)
    } else {
        0.0
    }
}

pub fn bonus_sustained(n: u64) -> f64 {
    params::SUSTAINED_BONUS_CAP.min(params::SUSTAINED_BONUS_PER_PERIOD * n as f64)
}

/// `mu_seconds` is mean engagement duration in seconds.
pub fn bonus_duration(mu_seconds: f64) -> f64 {
    if mu_seconds > params::DURATION_LONG_S {
        params::DURATION_CAP.min((mu_seconds - params::DURATION_LONG_S) * params::DURATION_LONG_SLOPE)
    } else if mu_seconds < params::DURATION_SHORT_S {
        -params::DURATION_CAP.min((params::DURATION_SHORT_S - mu_seconds) * params::DURATION_SHORT_SLOPE)
    } else {
        0.0
    }
}

pub fn penalty_excess(n_periods: u64, threshold: u64) -> f64 {
    if n_periods > threshold {
        params::EXCESS_CAP.min((n_periods - threshold) as f64 * params::EXCESS_SLOPE)
    } else {
        0.0
    }
}

fn eta_for(features: &LevelFeatures, config: &ScoringConfig) -> f64 {
    match config.eta_source {
        EtaSource::Temporal => features.temporal.eta_temporal,
        EtaSource::AoiDwell => features.focus_aoi_pct / 100.0,
    }
}

struct Impact {
    b_aoi: f64,
    psi_focus: f64,
    b_sustained: f64,
    b_duration: f64,
    p_excess: f64,
    clamped: f64,
}

fn impact_terms(features: &LevelFeatures, config: &ScoringConfig) -> Impact {
    let b_aoi = bonus_aoi(eta_for(features, config));
    let psi = psi_focus(features.sf_pct, features.level);
    let b_sustained = bonus_sustained(features.temporal.sustained_count);
    let b_duration = bonus_duration(features.temporal.mu_engagement_ms / 1000.0);
    let p_excess = penalty_excess(features.temporal.period_count, config.excess_period_threshold);
    let bound = config.max_impact_for(features.level);
    let raw = b_aoi + psi + b_sustained + b_duration - p_excess;
    Impact { b_aoi, psi_focus: psi, b_sustained, b_duration, p_excess, clamped: raw.clamp(-bound, bound) }
}

/// Temporal impact, bounded to `[-max_impact, max_impact]` for the level.
pub fn temporal_impact(features: &LevelFeatures, config: &ScoringConfig) -> f64 {
    impact_terms(features, config).clamped
}

pub fn temporal_multiplier(s_base: f64) -> f64 {
    params::MULTIPLIER_STEPS.iter().find(|(lower, _)| s_base >= *lower).map_or(1.0, |(_, m)| *m)
}

pub fn final_score(features: &LevelFeatures, config: &ScoringConfig) -> ScoreBreakdown {
    let s_base = base_score(features, config);
    let impact = impact_terms(features, config);
    let lambda = temporal_multiplier(s_base);
    let final_score = (s_base + lambda * impact.clamped).clamp(params::SCORE_MIN, params::SCORE_MAX);
    ScoreBreakdown {
        level: features.level,
        s_base,
        level_bonus: level_bonus(features),
        psi_focus: impact.psi_focus,
        b_aoi: impact.b_aoi,
        b_sustained: impact.b_sustained,
        b_duration: impact.b_duration,
        p_excess: impact.p_excess,
        i_t: impact.clamped,
        lambda,
        final_score,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintViolation {
    ScoreOutOfRange { final_score: f64 },
    ThresholdOrder { tau_min_ms: i64, tau_sustained_ms: i64 },
    QuadrantShares { sum: f64 },
    ImpactBound { i_t: f64, max_impact: f64 },
}

const SHARE_TOLERANCE: f64 = 1e-9;

pub fn check_constraints(breakdown: &ScoreBreakdown, dwell: &DwellSummary, config: &ScoringConfig) -> Vec<ConstraintViolation> {
    let mut out = Vec::new();
    let f = breakdown.final_score;
    if !(params::SCORE_MIN..=params::SCORE_MAX).contains(&f) {
        out.push(ConstraintViolation::ScoreOutOfRange { final_score: f });
    }
    if config.tau_min_ms > config.tau_sustained_ms {
        out.push(ConstraintViolation::ThresholdOrder { tau_min_ms: config.tau_min_ms, tau_sustained_ms: config.tau_sustained_ms });
    }
    // An empty session has no distribution to check.
    if let Some(shares) = dwell.shares() {
        let sum: f64 = shares.iter().sum();
        if (sum - 1.0).abs() > SHARE_TOLERANCE {
            out.push(ConstraintViolation::QuadrantShares { sum });
        }
    }
    let bound = config.max_impact_for(breakdown.level);
    if breakdown.i_t.abs() > bound {
        out.push(ConstraintViolation::ImpactBound { i_t: breakdown.i_t, max_impact: bound });
    }
    out
}

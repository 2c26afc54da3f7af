//! Engagement periods: maximal same-AoI dwell runs, and the efficiency
//! ratios derived from them.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::spatial::AoiLabel;

pub const DEFAULT_TAU_MIN_MS: i64 = 400;
pub const DEFAULT_TAU_SUSTAINED_MS: i64 = 2500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngagementThresholds {
    pub tau_min_ms: i64,
    pub tau_sustained_ms: i64,
    /// Outside-AoI interruptions no longer than this are bridged. 0 disables
    /// bridging.
    pub gap_tolerance_ms: i64,
}

impl Default for EngagementThresholds {
    fn default() -> Self {
        EngagementThresholds { tau_min_ms: DEFAULT_TAU_MIN_MS, tau_sustained_ms: DEFAULT_TAU_SUSTAINED_MS, gap_tolerance_ms: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngagementPeriod {
    pub t_start_ms: i64,
    pub t_end_ms: i64,
    pub aoi: AoiLabel,
    pub duration_ms: i64,
    pub sustained: bool,
}

/// Finds every maximal run of one inside-AoI label whose first-to-last
/// sample span reaches `tau_min_ms`. Input must be sorted by time.
pub fn detect_engagement_periods(samples: &[(i64, AoiLabel)], thresholds: &EngagementThresholds) -> Vec<EngagementPeriod> {
    let mut periods = Vec::new();
    let mut i = 0;
    while i < samples.len() {
        let (t_start, label) = samples[i];
        if !label.is_inside() {
            i += 1;
            continue;
        }
        let mut last = i;
        let mut j = i + 1;
        loop {
            while j < samples.len() && samples[j].1 == label {
                last = j;
                j += 1;
            }
            if thresholds.gap_tolerance_ms <= 0 {
                break;
            }
            let mut k = j;
            while k < samples.len() && samples[k].1 == AoiLabel::Outside {
                k += 1;
            }
            if k < samples.len() && k > j && samples[k].1 == label && samples[k].0 - samples[last].0 <= thresholds.gap_tolerance_ms {
                j = k;
            } else {
                break;
            }
        }
        let t_end = samples[last].0;
        let duration_ms = t_end - t_start;
        if duration_ms >= thresholds.tau_min_ms {
            periods.push(EngagementPeriod {
                t_start_ms: t_start,
                t_end_ms: t_end,
                aoi: label,
                duration_ms,
                sustained: duration_ms >= thresholds.tau_sustained_ms,
            });
        }
        i = last + 1;
    }
    periods
}

pub fn classify_sustained(periods: &[EngagementPeriod], tau_sustained_ms: i64) -> Vec<EngagementPeriod> {
    periods.iter().map(|p| EngagementPeriod { sustained: p.duration_ms >= tau_sustained_ms, ..*p }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TemporalMetrics {
    pub eta_temporal: f64,
    pub mu_engagement_ms: f64,
    pub sigma_sustained: f64,
    pub period_count: u64,
    pub sustained_count: u64,
    pub session_duration_ms: i64,
    pub engaged_ms: i64,
}

pub fn temporal_metrics(periods: &[EngagementPeriod], session_duration_ms: i64) -> TemporalMetrics {
    let engaged_ms: i64 = periods.iter().map(|p| p.duration_ms).sum();
    let period_count = periods.len() as u64;
    let sustained_count = periods.iter().filter(|p| p.sustained).count() as u64;
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
    TemporalMetrics {
        eta_temporal: ratio(engaged_ms as f64, session_duration_ms as f64),
        mu_engagement_ms: ratio(engaged_ms as f64, period_count as f64),
        sigma_sustained: ratio(sustained_count as f64, period_count as f64),
        period_count,
        sustained_count,
        session_duration_ms,
        engaged_ms,
    }
}

//! Ground-truth game accuracy and agreement metrics between model scores
//! and accuracy.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{GameEvent, ScoredEvent};
use crate::params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GamePerformance {
    pub correct_clicks: u64,
    pub total_clicks: u64,
    pub correct_answers: u64,
    pub total_answers: u64,
    pub total_events: u64,
}

impl GamePerformance {
    /// `None` when no scored events were recorded.
    pub fn accuracy_pct(&self) -> Option<f64> {
        let total = self.total_clicks + self.total_answers;
        (total > 0).then(|| 100.0 * (self.correct_clicks + self.correct_answers) as f64 / total as f64)
    }
}

pub fn game_accuracy(events: &[GameEvent]) -> GamePerformance {
    let mut g = GamePerformance::default();
    for e in events {
        let (correct, total) = match e.kind {
            ScoredEvent::MouseClick => (&mut g.correct_clicks, &mut g.total_clicks),
            ScoredEvent::Answer => (&mut g.correct_answers, &mut g.total_answers),
        };
        *total += 1;
        *correct += u64::from(e.correct);
    }
    g.total_events = g.total_clicks + g.total_answers;
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("a series has zero variance")]
    ZeroVariance,
}

fn check(model: &[f64], truth: &[f64], needed: usize) -> Result<usize, MetricError> {
    if model.len() != truth.len() {
        return Err(MetricError::LengthMismatch(model.len(), truth.len()));
    }
    if model.len() < needed {
        return Err(MetricError::TooFewPoints { needed, got: model.len() });
    }
    Ok(model.len())
}

pub fn mae(model: &[f64], truth: &[f64]) -> Result<f64, MetricError> {
    let n = check(model, truth, 1)?;
    Ok(model.iter().zip(truth).map(|(m, t)| (m - t).abs()).sum::<f64>() / n as f64)
}

pub fn rmse(model: &[f64], truth: &[f64]) -> Result<f64, MetricError> {
    let n = check(model, truth, 1)?;
    let ss: f64 = model.iter().zip(truth).map(|(m, t)| (m - t) * (m - t)).sum();
    Ok(libm::sqrt(ss / n as f64))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Product-moment correlation.
pub fn pearson(model: &[f64], truth: &[f64]) -> Result<f64, MetricError> {
    check(model, truth, 2)?;
    let (mm, mt) = (mean(model), mean(truth));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (m, t) in model.iter().zip(truth) {
        let (dx, dy) = (m - mm, t - mt);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricError::ZeroVariance);
    }
    Ok((sxy / (libm::sqrt(sxx) * libm::sqrt(syy))).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn has_ties(ranks: &[f64]) -> bool {
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Rank correlation. Uses `1 - 6 sum d^2 / (n (n^2 - 1))` when neither
/// series has ties, otherwise Pearson on average ranks.
pub fn spearman(model: &[f64], truth: &[f64]) -> Result<f64, MetricError> {
    let n = check(model, truth, 2)?;
    let (rm, rt) = (average_ranks(model), average_ranks(truth));
    if has_ties(&rm) || has_ties(&rt) {
        return pearson(&rm, &rt);
    }
    let d2: f64 = rm.iter().zip(&rt).map(|(a, b)| (a - b) * (a - b)).sum();
    let n = n as f64;
    Ok(1.0 - 6.0 * d2 / (n * (n * n - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub mae_pct: f64,
    pub rmse_pct: f64,
    pub pearson_r: Option<f64>,
    pub spearman_rho: Option<f64>,
    pub n: usize,
}

/// Errors only on mismatched or empty input; undefined correlations are
/// `None`.
pub fn validate(model: &[f64], truth: &[f64]) -> Result<ValidationReport, MetricError> {
    Ok(ValidationReport {
        mae_pct: mae(model, truth)?,
        rmse_pct: rmse(model, truth)?,
        pearson_r: pearson(model, truth).ok(),
        spearman_rho: spearman(model, truth).ok(),
        n: model.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CalibrationLabel {
    Excellent,
    Good,
    Fair,
    Poor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerformanceCategory {
    Mastery,
    Developing,
    Struggling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssessmentThresholds {
    pub excellent_below: f64,
    pub good_below: f64,
    pub fair_below: f64,
    pub mastery_at: f64,
    pub developing_at: f64,
}

impl Default for AssessmentThresholds {
    fn default() -> Self {
        AssessmentThresholds {
            excellent_below: params::CALIBRATION_EXCELLENT_BELOW,
            good_below: params::CALIBRATION_GOOD_BELOW,
            fair_below: params::CALIBRATION_FAIR_BELOW,
            mastery_at: params::MASTERY_AT,
            developing_at: params::DEVELOPING_AT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("calibration cut-offs must be non-negative and increasing, and developing must not exceed mastery")]
pub struct InvalidThresholds;

impl AssessmentThresholds {
    pub fn validate(&self) -> Result<(), InvalidThresholds> {
        let increasing = 0.0 <= self.excellent_below
            && self.excellent_below <= self.good_below
            && self.good_below <= self.fair_below
            && self.developing_at <= self.mastery_at;
        let finite =
            [self.excellent_below, self.good_below, self.fair_below, self.mastery_at, self.developing_at].iter().all(|v| v.is_finite());
        if increasing && finite {
            Ok(())
        } else {
            Err(InvalidThresholds)
        }
    }

    pub fn calibration(&self, diff: f64) -> CalibrationLabel {
        let d = diff.abs();
        if d < self.excellent_below {
            CalibrationLabel::Excellent
        } else if d < self.good_below {
            CalibrationLabel::Good
        } else if d < self.fair_below {
            CalibrationLabel::Fair
        } else {
            CalibrationLabel::Poor
        }
    }

    pub fn category(&self, final_score: f64) -> PerformanceCategory {
        if final_score >= self.mastery_at {
            PerformanceCategory::Mastery
        } else if final_score >= self.developing_at {
            PerformanceCategory::Developing
        } else {
            PerformanceCategory::Struggling
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assessment {
    pub category: PerformanceCategory,
    pub calibration: Option<CalibrationLabel>,
}

/// Calibration is absent when there is no ground truth to compare with.
pub fn classify_assessment(final_score: f64, calibration_diff: Option<f64>, thresholds: &AssessmentThresholds) -> Assessment {
    Assessment { category: thresholds.category(final_score), calibration: calibration_diff.map(|d| thresholds.calibration(d)) }
}

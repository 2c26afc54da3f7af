//! The per-student JSON report.
//!
//! Field order is fixed by the struct definitions and numbers are rounded
//! before serialisation (1 decimal for percentages, 3 for correlations and
//! other ratios), so identical inputs give byte-identical documents.

use serde::Serialize;

use gazescore_core::pipeline::{LevelAnalysis, StudentAnalysis};
use gazescore_core::scoring::ConstraintViolation;
use gazescore_core::spatial::AoiLabel;
use gazescore_core::validation::{CalibrationLabel, PerformanceCategory, ValidationReport};

/// Attached to every validation block.
pub const PEARSON_NOTE: &str = "Pearson r is evaluated directly on the per-level (score, accuracy) pairs \
present in this report. The published case-study value of 0.389 cannot be recomputed from its three level pairs, \
which give about 0.31, so expect a gap against that figure. With three levels one pair dominates r; Spearman rho \
is the more stable summary here.";

fn round_to(v: f64, places: i32) -> f64 {
    let k = 10f64.powi(places);
    let r = (v * k).round() / k;
    // normalise -0.0 so the text never shows a sign on zero
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn pct(v: f64) -> f64 {
    round_to(v, 1)
}

fn ratio(v: f64) -> f64 {
    round_to(v, 3)
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub student_id: String,
    pub levels: Vec<LevelBlock>,
    /// Absent when fewer than two levels carry ground truth.
    pub validation: Option<ValidationBlock>,
}

#[derive(Debug, Serialize)]
pub struct LevelBlock {
    pub level: u8,
    pub score: ScoreBlock,
    pub transitions: TransitionBlock,
    pub temporal: TemporalBlock,
    pub game: GameBlock,
    pub assessment: AssessmentBlock,
    pub constraint_violations: Vec<ConstraintViolation>,
}

#[derive(Debug, Serialize)]
pub struct ScoreBlock {
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

#[derive(Debug, Serialize)]
pub struct TransitionBlock {
    /// Rows are the source quadrant Q1..Q4, columns the destination.
    pub quadrant_matrix: [[u64; 4]; 4],
    pub t_nsq_to_sq: u64,
    pub t_sq_to_nsq: u64,
    pub t_nsq_to_nsq: u64,
    pub t_sq_to_sq: u64,
    pub t_total: u64,
    /// Rows and columns in the order Left, Right, Outside.
    pub aoi_matrix: [[u64; 3]; 3],
    pub aoi_left_right: u64,
    pub aoi_total: u64,
    pub aoi_balance: f64,
    pub aoi_efficiency: f64,
    pub time_in_quadrant_ms: [i64; 4],
    pub session_duration_ms: i64,
    pub stimuli_focus_pct: f64,
    pub aoi_time_share_pct: f64,
    pub aoi_sample_share_pct: f64,
}

#[derive(Debug, Serialize)]
pub struct PeriodBlock {
    pub t_start_ms: i64,
    pub t_end_ms: i64,
    pub aoi: AoiLabel,
    pub duration_ms: i64,
    pub sustained: bool,
}

#[derive(Debug, Serialize)]
pub struct TemporalBlock {
    pub eta_temporal_pct: f64,
    pub mu_engagement_ms: f64,
    pub sigma_sustained_pct: f64,
    pub period_count: u64,
    pub sustained_count: u64,
    pub engaged_ms: i64,
    pub periods: Vec<PeriodBlock>,
}

#[derive(Debug, Serialize)]
pub struct GameBlock {
    pub correct_clicks: u64,
    pub total_clicks: u64,
    pub correct_answers: u64,
    pub total_answers: u64,
    pub total_events: u64,
    pub accuracy_pct: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct AssessmentBlock {
    pub category: PerformanceCategory,
    pub calibration: Option<CalibrationLabel>,
    pub calibration_diff: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ValidationBlock {
    pub mae: f64,
    pub rmse: f64,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub n: usize,
    pub note: &'static str,
}

impl From<&ValidationReport> for ValidationBlock {
    fn from(v: &ValidationReport) -> Self {
        ValidationBlock {
            mae: pct(v.mae_pct),
            rmse: pct(v.rmse_pct),
            pearson: v.pearson_r.map(ratio),
            spearman: v.spearman_rho.map(ratio),
            n: v.n,
            note: PEARSON_NOTE,
        }
    }
}

fn level_block(a: &LevelAnalysis) -> LevelBlock {
    let s = &a.score;
    let t = &a.transitions;
    let tm = &a.temporal;
    LevelBlock {
        level: a.level.number(),
        score: ScoreBlock {
            s_base: ratio(s.s_base),
            level_bonus: ratio(s.level_bonus),
            psi_focus: ratio(s.psi_focus),
            b_aoi: ratio(s.b_aoi),
            b_sustained: ratio(s.b_sustained),
            b_duration: ratio(s.b_duration),
            p_excess: ratio(s.p_excess),
            i_t: ratio(s.i_t),
            lambda: s.lambda,
            final_score: pct(s.final_score),
        },
        transitions: TransitionBlock {
            quadrant_matrix: t.quadrant_matrix.counts,
            t_nsq_to_sq: t.aggregates.t_nsq_to_sq,
            t_sq_to_nsq: t.aggregates.t_sq_to_nsq,
            t_nsq_to_nsq: t.aggregates.t_nsq_to_nsq,
            t_sq_to_sq: t.aggregates.t_sq_to_sq,
            t_total: t.aggregates.t_total,
            aoi_matrix: t.aoi_matrix.counts,
            aoi_left_right: t.aoi.left_right_transitions,
            aoi_total: t.aoi.aoi_total,
            aoi_balance: ratio(t.aoi.balance),
            aoi_efficiency: ratio(t.aoi.efficiency),
            time_in_quadrant_ms: t.dwell.time_in_quadrant,
            session_duration_ms: t.dwell.session_duration_ms,
            stimuli_focus_pct: pct(t.dwell.stimuli_focus_pct),
            aoi_time_share_pct: pct(t.aoi_dwell.time_share_pct),
            aoi_sample_share_pct: pct(t.aoi_dwell.sample_share_pct),
        },
        temporal: TemporalBlock {
            eta_temporal_pct: pct(tm.eta_temporal * 100.0),
            mu_engagement_ms: round_to(tm.mu_engagement_ms, 1),
            sigma_sustained_pct: pct(tm.sigma_sustained * 100.0),
            period_count: tm.period_count,
            sustained_count: tm.sustained_count,
            engaged_ms: tm.engaged_ms,
            periods: a
                .periods
                .iter()
                .map(|p| PeriodBlock {
                    t_start_ms: p.t_start_ms,
                    t_end_ms: p.t_end_ms,
                    aoi: p.aoi,
                    duration_ms: p.duration_ms,
                    sustained: p.sustained,
                })
                .collect(),
        },
        game: GameBlock {
            correct_clicks: a.game.correct_clicks,
            total_clicks: a.game.total_clicks,
            correct_answers: a.game.correct_answers,
            total_answers: a.game.total_answers,
            total_events: a.game.total_events,
            accuracy_pct: a.game.accuracy_pct().map(pct),
        },
        assessment: AssessmentBlock {
            category: a.assessment.category,
            calibration: a.assessment.calibration,
            calibration_diff: a.calibration_diff().map(pct),
        },
        constraint_violations: a.violations.clone(),
    }
}

pub fn build_report(analysis: &StudentAnalysis) -> Report {
    let validation = analysis.validation().ok().filter(|v| v.n >= 2);
    Report {
        student_id: analysis.student_id.clone(),
        levels: analysis.levels.iter().map(level_block).collect(),
        validation: validation.as_ref().map(ValidationBlock::from),
    }
}

/// Pretty-printed, newline-terminated.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report types always serialise");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_one_or_three_places() {
        assert_eq!(pct(70.70775), 70.7);
        assert_eq!(pct(-0.04), 0.0);
        assert_eq!(ratio(0.31366), 0.314);
        assert_eq!(ratio(0.5), 0.5);
    }
}

//! Per-level analysis: classification, transitions, engagement, score.

use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use crate::ingest::{Level, LevelSession, SessionSet};
use crate::scoring::{check_constraints, final_score, ConstraintViolation, LevelFeatures, ScoreBreakdown, ScoringConfig};
use crate::spatial::{active_placement, classify_aoi, quadrant_of, AoiLabel, Quadrant};
use crate::temporal::{detect_engagement_periods, temporal_metrics, EngagementPeriod, TemporalMetrics};
use crate::transitions::{summarize, TransitionSummary};
use crate::validation::{classify_assessment, game_accuracy, validate, Assessment, GamePerformance, MetricError, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifiedSample {
    pub t_ms: i64,
    pub x_px: f64,
    pub y_px: f64,
    pub quadrant: Quadrant,
    pub aoi: AoiLabel,
}

pub fn classify_session(session: &LevelSession) -> Vec<ClassifiedSample> {
    let g = &session.geometry;
    session
        .samples
        .iter()
        .map(|s| ClassifiedSample {
            t_ms: s.t_ms,
            x_px: s.x_px,
            y_px: s.y_px,
            quadrant: quadrant_of(s.x_px, s.y_px, g),
            aoi: classify_aoi(s.x_px, s.y_px, active_placement(&session.placements, s.t_ms), g),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelAnalysis {
    pub student_id: String,
    pub level: Level,
    pub classified: Vec<ClassifiedSample>,
    pub transitions: TransitionSummary,
    pub periods: Vec<EngagementPeriod>,
    pub temporal: TemporalMetrics,
    pub features: LevelFeatures,
    pub score: ScoreBreakdown,
    pub game: GamePerformance,
    pub assessment: Assessment,
    pub violations: Vec<ConstraintViolation>,
}

impl LevelAnalysis {
    /// `|final score - game accuracy|`, when accuracy is defined.
    pub fn calibration_diff(&self) -> Option<f64> {
        self.game.accuracy_pct().map(|a| (self.score.final_score - a).abs())
    }
}

/// `config` is assumed valid.
pub fn analyze_level(session: &LevelSession, config: &ScoringConfig) -> LevelAnalysis {
    let classified = classify_session(session);
    let quadrants: Vec<Quadrant> = classified.iter().map(|c| c.quadrant).collect();
    let aois: Vec<AoiLabel> = classified.iter().map(|c| c.aoi).collect();
    let transitions = summarize(&session.samples, &quadrants, &aois, config.aoi_total());

    let timeline: Vec<(i64, AoiLabel)> = classified.iter().map(|c| (c.t_ms, c.aoi)).collect();
    let periods = detect_engagement_periods(&timeline, &config.engagement());
    let temporal = temporal_metrics(&periods, transitions.dwell.session_duration_ms);

    let features = LevelFeatures {
        level: session.level,
        t_sq: transitions.aggregates.t_nsq_to_sq,
        t_nsq: transitions.aggregates.t_sq_to_nsq,
        focus_aoi_pct: transitions.aoi_dwell.time_share_pct,
        interactions: session.placements.len() as u64,
        transitions_aoi: transitions.aoi.aoi_total,
        bidirectional_aoi: transitions.aoi.left_right_transitions,
        omega_aoi: transitions.aoi.efficiency,
        sf_pct: transitions.dwell.stimuli_focus_pct,
        temporal,
    };
    let score = final_score(&features, config);
    let violations = check_constraints(&score, &transitions.dwell, config);
    let game = game_accuracy(&session.events);
    let diff = game.accuracy_pct().map(|a| score.final_score - a);
    let assessment = classify_assessment(score.final_score, diff, &config.assessment);

    LevelAnalysis {
        student_id: session.student_id.clone(),
        level: session.level,
        classified,
        transitions,
        periods,
        temporal,
        features,
        score,
        game,
        assessment,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudentAnalysis {
    pub student_id: String,
    /// Sorted by level.
    pub levels: Vec<LevelAnalysis>,
}

impl StudentAnalysis {
    /// Final scores and accuracies of the levels that have ground truth.
    pub fn validation_pairs(&self) -> (Vec<f64>, Vec<f64>) {
        self.levels.iter().filter_map(|l| l.game.accuracy_pct().map(|a| (l.score.final_score, a))).unzip()
    }

    pub fn validation(&self) -> Result<ValidationReport, MetricError> {
        let (model, truth) = self.validation_pairs();
        validate(&model, &truth)
    }
}

pub fn analyze_student(set: &SessionSet, student_id: &str, config: &ScoringConfig) -> Option<StudentAnalysis> {
    let levels: Vec<LevelAnalysis> = set.levels_of(student_id).map(|s| analyze_level(s, config)).collect();
    (!levels.is_empty()).then(|| StudentAnalysis { student_id: student_id.into(), levels })
}

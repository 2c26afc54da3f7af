//! Quadrant and AoI transition matrices, dwell times and stimuli focus.

use serde::{Deserialize, Serialize};

use crate::ingest::GazeSample;
use crate::spatial::{AoiLabel, Quadrant};

/// `counts[i][j]` is the number of consecutive sample pairs going from
/// quadrant `i` to quadrant `j`, diagonal included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuadrantTransitionMatrix {
    pub counts: [[u64; 4]; 4],
}

impl QuadrantTransitionMatrix {
    pub fn get(&self, from: Quadrant, to: Quadrant) -> u64 {
        self.counts[from.index()][to.index()]
    }

    pub fn mass(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn off_diagonal(&self) -> u64 {
        self.mass() - (0..4).map(|i| self.counts[i][i]).sum::<u64>()
    }
}

pub fn build_quadrant_matrix(labels: &[Quadrant]) -> QuadrantTransitionMatrix {
    let mut m = QuadrantTransitionMatrix::default();
    for w in labels.windows(2) {
        m.counts[w[0].index()][w[1].index()] += 1;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TransitionAggregates {
    pub t_nsq_to_sq: u64,
    pub t_sq_to_nsq: u64,
    pub t_nsq_to_nsq: u64,
    pub t_sq_to_sq: u64,
    pub t_total: u64,
}

/// Sums the cross-quadrant cells by stimulus/non-stimulus side.
pub fn aggregate_transitions(matrix: &QuadrantTransitionMatrix) -> TransitionAggregates {
    let mut agg = TransitionAggregates::default();
    for from in Quadrant::ALL {
        for to in Quadrant::ALL {
            if from == to {
                continue;
            }
            let n = matrix.get(from, to);
            let bucket = match (from.is_stimulus(), to.is_stimulus()) {
                (false, true) => &mut agg.t_nsq_to_sq,
                (true, false) => &mut agg.t_sq_to_nsq,
                (false, false) => &mut agg.t_nsq_to_nsq,
                (true, true) => &mut agg.t_sq_to_sq,
            };
            *bucket += n;
        }
    }
    agg.t_total = agg.t_nsq_to_sq + agg.t_sq_to_nsq + agg.t_nsq_to_nsq + agg.t_sq_to_sq;
    agg
}

/// 3x3 counts indexed Left, Right, Outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AoiTransitionMatrix {
    pub counts: [[u64; 3]; 3],
}

impl AoiTransitionMatrix {
    pub fn get(&self, from: AoiLabel, to: AoiLabel) -> u64 {
        self.counts[from.index()][to.index()]
    }

    pub fn mass(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn changes(&self) -> u64 {
        self.mass() - (0..3).map(|i| self.counts[i][i]).sum::<u64>()
    }

    fn row_sum(&self, label: AoiLabel) -> u64 {
        self.counts[label.index()].iter().sum()
    }
}

pub fn build_aoi_matrix(labels: &[AoiLabel]) -> AoiTransitionMatrix {
    let mut m = AoiTransitionMatrix::default();
    for w in labels.windows(2) {
        m.counts[w[0].index()][w[1].index()] += 1;
    }
    m
}

/// What the efficiency denominator counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AoiTotal {
    /// Every consecutive pair, diagonal included.
    #[default]
    AllPairs,
    /// Only pairs whose label changes.
    ChangesOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AoiMetrics {
    pub left_right_transitions: u64,
    pub balance: f64,
    pub efficiency: f64,
    pub fixations_left: u64,
    pub fixations_right: u64,
    pub aoi_total: u64,
}

pub fn aoi_metrics(matrix: &AoiTransitionMatrix, total: AoiTotal) -> AoiMetrics {
    let lr = matrix.get(AoiLabel::Left, AoiLabel::Right) + matrix.get(AoiLabel::Right, AoiLabel::Left);
    let left = matrix.row_sum(AoiLabel::Left);
    let right = matrix.row_sum(AoiLabel::Right);
    let aoi_total = match total {
        AoiTotal::AllPairs => matrix.mass(),
        AoiTotal::ChangesOnly => matrix.changes(),
    };
    let balance = left.abs_diff(right) as f64 / (left + right).max(1) as f64;
    let efficiency = if aoi_total == 0 { 0.0 } else { lr as f64 / aoi_total as f64 };
    AoiMetrics { left_right_transitions: lr, balance, efficiency, fixations_left: left, fixations_right: right, aoi_total }
}

/// Time per quadrant, with each inter-sample gap credited to the earlier
/// sample.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DwellSummary {
    pub time_in_quadrant: [i64; 4],
    pub session_duration_ms: i64,
    pub stimuli_focus_pct: f64,
}

impl DwellSummary {
    pub fn from_quadrant_times(time_in_quadrant: [i64; 4]) -> DwellSummary {
        let total: i64 = time_in_quadrant.iter().sum();
        let sq = time_in_quadrant[Quadrant::Q3.index()] + time_in_quadrant[Quadrant::Q4.index()];
        let stimuli_focus_pct = if total > 0 { 100.0 * sq as f64 / total as f64 } else { 0.0 };
        DwellSummary { time_in_quadrant, session_duration_ms: total, stimuli_focus_pct }
    }

    pub fn time(&self, q: Quadrant) -> i64 {
        self.time_in_quadrant[q.index()]
    }

    /// Share of session time per quadrant; `None` for an empty session.
    pub fn shares(&self) -> Option<[f64; 4]> {
        (self.session_duration_ms > 0).then(|| self.time_in_quadrant.map(|t| t as f64 / self.session_duration_ms as f64))
    }
}

/// Panics if the slices differ in length.
pub fn dwell_summary(samples: &[GazeSample], labels: &[Quadrant]) -> DwellSummary {
    assert_eq!(samples.len(), labels.len(), "one quadrant label per sample");
    let mut times = [0i64; 4];
    for (w, q) in samples.windows(2).zip(labels) {
        times[q.index()] += w[1].t_ms - w[0].t_ms;
    }
    DwellSummary::from_quadrant_times(times)
}

/// Time and sample share inside any AoI.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AoiDwell {
    pub time_in_aoi_ms: [i64; 3],
    /// Share of session time spent in either AoI, in percent.
    pub time_share_pct: f64,
    /// Share of samples classified inside either AoI, in percent.
    pub sample_share_pct: f64,
}

pub fn aoi_dwell(samples: &[GazeSample], labels: &[AoiLabel]) -> AoiDwell {
    assert_eq!(samples.len(), labels.len(), "one AoI label per sample");
    let mut times = [0i64; 3];
    for (w, a) in samples.windows(2).zip(labels) {
        times[a.index()] += w[1].t_ms - w[0].t_ms;
    }
    let total: i64 = times.iter().sum();
    let inside = times[AoiLabel::Left.index()] + times[AoiLabel::Right.index()];
    let inside_samples = labels.iter().filter(|l| l.is_inside()).count();
    AoiDwell {
        time_in_aoi_ms: times,
        time_share_pct: if total > 0 { 100.0 * inside as f64 / total as f64 } else { 0.0 },
        sample_share_pct: if labels.is_empty() { 0.0 } else { 100.0 * inside_samples as f64 / labels.len() as f64 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionSummary {
    pub quadrant_matrix: QuadrantTransitionMatrix,
    pub aggregates: TransitionAggregates,
    pub aoi_matrix: AoiTransitionMatrix,
    pub aoi: AoiMetrics,
    pub dwell: DwellSummary,
    pub aoi_dwell: AoiDwell,
}

pub fn summarize(samples: &[GazeSample], quadrants: &[Quadrant], aois: &[AoiLabel], total: AoiTotal) -> TransitionSummary {
    let quadrant_matrix = build_quadrant_matrix(quadrants);
    let aoi_matrix = build_aoi_matrix(aois);
    TransitionSummary {
        quadrant_matrix,
        aggregates: aggregate_transitions(&quadrant_matrix),
        aoi_matrix,
        aoi: aoi_metrics(&aoi_matrix, total),
        dwell: dwell_summary(samples, quadrants),
        aoi_dwell: aoi_dwell(samples, aois),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use AoiLabel::{Left as L, Outside as O, Right as R};
    use Quadrant::*;

    #[test]
    fn quadrant_matrix_by_hand() {
        let m = build_quadrant_matrix(&[Q1, Q3, Q3, Q4, Q2]);
        let mut expected = [[0u64; 4]; 4];
        expected[0][2] = 1;
        expected[2][2] = 1;
        expected[2][3] = 1;
        expected[3][1] = 1;
        assert_eq!(m.counts, expected);
        assert_eq!(build_quadrant_matrix(&[Q2]), QuadrantTransitionMatrix::default());
        assert_eq!(build_quadrant_matrix(&[]), QuadrantTransitionMatrix::default());
        assert_eq!(build_quadrant_matrix(&[Q1, Q1, Q1]).get(Q1, Q1), 2);
        assert_eq!(build_quadrant_matrix(&[Q1, Q1, Q1]).mass(), 2);
    }

    #[test]
    fn aggregates_by_hand() {
        let agg = aggregate_transitions(&build_quadrant_matrix(&[Q1, Q3, Q3, Q4, Q2]));
        assert_eq!(agg, TransitionAggregates { t_nsq_to_sq: 1, t_sq_to_nsq: 1, t_nsq_to_nsq: 0, t_sq_to_sq: 1, t_total: 3 });
        assert_eq!(aggregate_transitions(&QuadrantTransitionMatrix::default()), TransitionAggregates::default());
        let agg = aggregate_transitions(&build_quadrant_matrix(&[Q1, Q2, Q1, Q4, Q3]));
        assert_eq!((agg.t_nsq_to_nsq, agg.t_nsq_to_sq, agg.t_sq_to_sq, agg.t_total), (2, 1, 1, 4));
    }

    #[test]
    fn aoi_matrix_by_hand() {
        let m = build_aoi_matrix(&[L, L, R, O]);
        assert_eq!(m.get(L, L), 1);
        assert_eq!(m.get(L, R), 1);
        assert_eq!(m.get(R, O), 1);
        assert_eq!(m.mass(), 3);
        assert_eq!(build_aoi_matrix(&[O; 7]).get(O, O), 6);
        assert_eq!(build_aoi_matrix(&[]).mass(), 0);
    }

    #[test]
    fn aoi_metric_examples() {
        let mut m = AoiTransitionMatrix::default();
        m.counts[0][1] = 2;
        m.counts[1][0] = 1;
        let a = aoi_metrics(&m, AoiTotal::AllPairs);
        assert_eq!(a.left_right_transitions, 3);
        assert!((a.balance - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(a.efficiency, 1.0);

        let z = aoi_metrics(&AoiTransitionMatrix::default(), AoiTotal::AllPairs);
        assert_eq!((z.left_right_transitions, z.balance, z.efficiency), (0, 0.0, 0.0));

        let mut m = AoiTransitionMatrix::default();
        m.counts[0][1] = 5;
        m.counts[1][0] = 5;
        m.counts[2][2] = 10;
        let a = aoi_metrics(&m, AoiTotal::AllPairs);
        assert_eq!((a.balance, a.efficiency), (0.0, 0.5));
        let a = aoi_metrics(&m, AoiTotal::ChangesOnly);
        assert_eq!(a.efficiency, 1.0);
    }

    #[test]
    fn stimuli_focus_from_figure_dwell_times() {
        let d = DwellSummary::from_quadrant_times([28586, 29096, 49690, 89547]);
        assert_eq!(d.session_duration_ms, 196_919);
        assert!((d.stimuli_focus_pct - 70.7).abs() < 0.05);
        assert_eq!(DwellSummary::from_quadrant_times([0, 0, 10, 0]).stimuli_focus_pct, 100.0);
        assert_eq!(DwellSummary::from_quadrant_times([5, 5, 5, 5]).stimuli_focus_pct, 50.0);
    }

    #[test]
    fn dwell_credits_earlier_sample() {
        let s: Vec<GazeSample> = [0, 10, 30, 60].iter().map(|&t| GazeSample { t_ms: t, x_px: 1.0, y_px: 1.0 }).collect();
        let d = dwell_summary(&s, &[Q1, Q3, Q3, Q2]);
        assert_eq!(d.time_in_quadrant, [10, 0, 50, 0]);
        assert_eq!(d.session_duration_ms, 60);
        let one = dwell_summary(&s[..1], &[Q1]);
        assert_eq!((one.session_duration_ms, one.stimuli_focus_pct), (0, 0.0));
        assert!(one.shares().is_none());
    }

    #[test]
    fn aoi_dwell_shares() {
        let s: Vec<GazeSample> = [0, 10, 30, 60].iter().map(|&t| GazeSample { t_ms: t, x_px: 1.0, y_px: 1.0 }).collect();
        let a = aoi_dwell(&s, &[L, O, R, R]);
        assert_eq!(a.time_in_aoi_ms, [10, 30, 20]);
        assert!((a.time_share_pct - 100.0 * 40.0 / 60.0).abs() < 1e-12);
        assert_eq!(a.sample_share_pct, 75.0);
    }
}

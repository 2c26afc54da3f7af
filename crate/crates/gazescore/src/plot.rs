//! CSV tables for external plotting: per-sample classifications, per-level
//! engagement periods and a per-student level summary.

use gazescore_core::pipeline::{LevelAnalysis, StudentAnalysis};

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory flush")
}

/// `t_ms,x_px,y_px,quadrant,aoi_label`, one row per sample.
pub fn samples_csv(analysis: &LevelAnalysis) -> Vec<u8> {
    let mut w = writer();
    w.write_record(["t_ms", "x_px", "y_px", "quadrant", "aoi_label"]).expect("in-memory write");
    for c in &analysis.classified {
        w.write_record([
            c.t_ms.to_string(),
            c.x_px.to_string(),
            c.y_px.to_string(),
            c.quadrant.as_str().to_string(),
            c.aoi.as_str().to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

pub fn periods_csv(analysis: &LevelAnalysis) -> Vec<u8> {
    let mut w = writer();
    w.write_record(["t_start_ms", "t_end_ms", "aoi_label", "duration_ms", "sustained"]).expect("in-memory write");
    for p in &analysis.periods {
        w.write_record([
            p.t_start_ms.to_string(),
            p.t_end_ms.to_string(),
            p.aoi.as_str().to_string(),
            p.duration_ms.to_string(),
            p.sustained.to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

pub fn summary_csv(analysis: &StudentAnalysis) -> Vec<u8> {
    let mut w = writer();
    w.write_record([
        "level",
        "period_count",
        "sustained_count",
        "engaged_ms",
        "eta_temporal",
        "mu_engagement_ms",
        "sigma_sustained",
        "i_t",
        "stimuli_focus_pct",
        "final_score",
        "accuracy_pct",
    ])
    .expect("in-memory write");
    for l in &analysis.levels {
        let t = &l.temporal;
        w.write_record([
            l.level.number().to_string(),
            t.period_count.to_string(),
            t.sustained_count.to_string(),
            t.engaged_ms.to_string(),
            format!("{:.4}", t.eta_temporal),
            format!("{:.1}", t.mu_engagement_ms),
            format!("{:.4}", t.sigma_sustained),
            format!("{:.3}", l.score.i_t),
            format!("{:.1}", l.transitions.dwell.stimuli_focus_pct),
            format!("{:.1}", l.score.final_score),
            l.game.accuracy_pct().map(|a| format!("{a:.1}")).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

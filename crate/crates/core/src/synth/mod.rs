//! Synthetic sessions built analytically so that every promised statistic
//! is recovered exactly by the analysis pipeline.

mod fixture;
mod timeline;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{GameEvent, Level, LevelSession, ScoredEvent};
use crate::params::TAU_MIN_MS;
use crate::spatial::{Quadrant, ScreenGeometry};
use timeline::{push_run, realize, required_placements, Item, Layout, Run, Side};

pub use fixture::{generate_table_fixture, TABLE_FIXTURE_STUDENT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("infeasible profile: {0}")]
    Infeasible(String),
    #[error("inconsistent layout: {0}")]
    Layout(String),
}

/// Longest glance chunk used to fill AoI time that is not part of a period.
const GLANCE_MAX_MS: i64 = 240;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthProfile {
    pub seed: u64,
    pub student_id: String,
    pub level: Level,
    pub duration_ms: i64,
    pub sample_interval_ms: i64,
    /// Share of session time in the stimulus quadrants, percent.
    pub target_sf_pct: f64,
    /// Share of session time inside an AoI, as a fraction.
    pub target_aoi_dwell_share: f64,
    pub n_objects: u64,
    /// Spans of the embedded engagement periods, alternating Left/Right.
    pub engagement_period_lengths_ms: Vec<i64>,
    pub n_clicks: u64,
    pub n_answers: u64,
    /// Probability of a correct click and a correct answer.
    pub event_accuracy: (f64, f64),
    pub noise_px: f64,
    pub geometry: ScreenGeometry,
}

impl Default for SynthProfile {
    fn default() -> Self {
        SynthProfile {
            seed: 0,
            student_id: "SYN".into(),
            level: Level::One,
            duration_ms: 60_000,
            sample_interval_ms: 16,
            target_sf_pct: 60.0,
            target_aoi_dwell_share: 0.3,
            n_objects: 40,
            engagement_period_lengths_ms: alloc::vec![3000, 1200],
            n_clicks: 10,
            n_answers: 20,
            event_accuracy: (0.8, 0.9),
            noise_px: 8.0,
            geometry: ScreenGeometry::default(),
        }
    }
}

impl SynthProfile {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Profile(m));
        if self.duration_ms <= 0 {
            return bad(format!("duration_ms must be positive (got {})", self.duration_ms));
        }
        if self.sample_interval_ms <= 0 {
            return bad(format!("sample_interval_ms must be positive (got {})", self.sample_interval_ms));
        }
        if !(0.0..=100.0).contains(&self.target_sf_pct) {
            return bad(format!("target_sf_pct must be in [0, 100] (got {})", self.target_sf_pct));
        }
        if !(0.0..=1.0).contains(&self.target_aoi_dwell_share) {
            return bad(format!("target_aoi_dwell_share must be in [0, 1] (got {})", self.target_aoi_dwell_share));
        }
        let (pc, pa) = self.event_accuracy;
        if !(0.0..=1.0).contains(&pc) || !(0.0..=1.0).contains(&pa) {
            return bad(format!("event accuracies must be probabilities (got {pc}, {pa})"));
        }
        if !(self.noise_px >= 0.0 && self.noise_px.is_finite()) {
            return bad(format!("noise_px must be non-negative (got {})", self.noise_px));
        }
        if let Some(l) = self.engagement_period_lengths_ms.iter().find(|&&l| l < TAU_MIN_MS) {
            return bad(format!("engagement length {l} ms is below the {TAU_MIN_MS} ms detection minimum"));
        }
        Ok(())
    }

    /// Exact stimulus-quadrant time the generator will produce.
    pub fn stimulus_ms(&self) -> i64 {
        libm::round(self.target_sf_pct * self.duration_ms as f64 / 100.0) as i64
    }

    /// Exact AoI time the generator will produce.
    pub fn aoi_ms(&self) -> i64 {
        libm::round(self.target_aoi_dwell_share * self.duration_ms as f64) as i64
    }

    pub fn correct_clicks(&self) -> u64 {
        libm::round(self.event_accuracy.0 * self.n_clicks as f64) as u64
    }

    pub fn correct_answers(&self) -> u64 {
        libm::round(self.event_accuracy.1 * self.n_answers as f64) as u64
    }
}

/// Spreads `n` glance milliseconds over near-equal chunks no longer than
/// `GLANCE_MAX_MS`.
fn glance_chunks(total: i64) -> Vec<i64> {
    if total <= 0 {
        return Vec::new();
    }
    let n = (total + GLANCE_MAX_MS - 1) / GLANCE_MAX_MS;
    (0..n).map(|i| total / n + i64::from(i < total % n)).collect()
}

pub fn generate_session(profile: &SynthProfile) -> Result<LevelSession, SynthError> {
    profile.validate()?;
    let d = profile.duration_ms;
    let dt = profile.sample_interval_ms;
    let s = profile.stimulus_ms();
    let n = d - s;
    let a = profile.aoi_ms();

    let mut side = Side::Left;
    let mut periods: Vec<Item> = Vec::new();
    for &l in &profile.engagement_period_lengths_ms {
        periods.push(Item::period(side, l, dt));
        side = side.other();
    }
    let period_ms: i64 = periods.iter().map(|i| i.dwell_ms).sum();
    if period_ms > a {
        return Err(SynthError::Infeasible(format!("engagement periods need {period_ms} ms of AoI time but the target allows {a} ms")));
    }
    if a > s {
        return Err(SynthError::Infeasible(format!("AoI time {a} ms exceeds the stimulus-quadrant time {s} ms")));
    }
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (i, g) in glance_chunks(a - period_ms).into_iter().enumerate() {
        let target = if i % 2 == 0 { &mut left } else { &mut right };
        target.push(Item::glance(if i % 2 == 0 { Side::Left } else { Side::Right }, g, dt));
    }

    let padding = s - a;
    let side_ms = |sd: Side| {
        let g: &[Item] = if sd == Side::Left { &left } else { &right };
        periods.iter().chain(g).filter(|i| i.side == sd).map(|i| i.dwell_ms).sum::<i64>()
    };
    let dwell = [n / 2, n - n / 2, side_ms(Side::Left) + padding / 2, side_ms(Side::Right) + padding - padding / 2];

    // each period in its own stimulus visit, then all glances per side
    let mut runs: Vec<Run> = Vec::new();
    let mut nsq = Quadrant::Q1;
    let visits = periods.iter().map(core::slice::from_ref).chain([&left[..], &right[..]]);
    for group in visits.filter(|g| !g.is_empty()) {
        if n > 0 {
            push_run(&mut runs, Run::pad(nsq));
            nsq = if nsq == Quadrant::Q1 { Quadrant::Q2 } else { Quadrant::Q1 };
        }
        push_run(&mut runs, Run::padded(group[0].side.quadrant(), group));
    }
    for q in Quadrant::ALL {
        if dwell[q.index()] > 0 {
            push_run(&mut runs, Run::pad(q));
        }
    }
    let needed = required_placements(&runs);
    if needed > profile.n_objects {
        return Err(SynthError::Infeasible(format!("the AoI visits need at least {needed} objects (got {})", profile.n_objects)));
    }

    let layout = Layout::new(profile.geometry, profile.noise_px);
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let extra = profile.n_objects - needed;
    let realized = realize(&runs, dwell, dt, extra, &layout, &mut rng)?;
    let events = layout_events((profile.correct_clicks(), profile.n_clicks), (profile.correct_answers(), profile.n_answers), d);
    Ok(LevelSession {
        student_id: profile.student_id.clone(),
        level: profile.level,
        samples: realized.samples,
        events,
        placements: realized.placements,
        geometry: profile.geometry,
    })
}

/// True when the `i`-th of `n` slots is one of `k` evenly spread marks.
fn spread(i: u64, k: u64, n: u64) -> bool {
    n > 0 && (i + 1) * k / n > i * k / n
}

/// Evenly spaced events over the session with clicks interleaved among
/// answers and the incorrect ones spread within each kind.
pub(crate) fn layout_events(clicks: (u64, u64), answers: (u64, u64), duration_ms: i64) -> Vec<GameEvent> {
    let (cc, nc) = clicks;
    let (ca, na) = answers;
    let total = nc + na;
    let (mut ic, mut ia) = (0u64, 0u64);
    (0..total)
        .map(|i| {
            let t_ms = (i as i64 + 1) * duration_ms / (total as i64 + 1);
            if spread(i, nc, total) {
                let correct = !spread(ic, nc - cc, nc);
                ic += 1;
                GameEvent { t_ms, kind: ScoredEvent::MouseClick, correct }
            } else {
                let correct = !spread(ia, na - ca, na);
                ia += 1;
                GameEvent { t_ms, kind: ScoredEvent::Answer, correct }
            }
        })
        .collect()
}

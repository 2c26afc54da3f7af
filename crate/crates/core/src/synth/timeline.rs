//! Block timelines: a session described as quadrant runs made of
//! fixed-length AoI items and flexible non-AoI padding, realised into
//! samples and placements with exact dwell times.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::SynthError;
use crate::ingest::GazeSample;
use crate::spatial::{ObjectPlacement, Quadrant, ScreenGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Left,
    Right,
}

impl Side {
    pub(crate) fn quadrant(self) -> Quadrant {
        match self {
            Side::Left => Quadrant::Q3,
            Side::Right => Quadrant::Q4,
        }
    }

    pub(crate) fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Gaze held on one object. Samples run from 0 to `span_ms` inclusive and
/// the item occupies `dwell_ms > span_ms` of session time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Item {
    pub side: Side,
    pub span_ms: i64,
    pub dwell_ms: i64,
}

impl Item {
    /// An engagement of exactly `span_ms`, followed by one sample interval.
    pub(crate) fn period(side: Side, span_ms: i64, interval_ms: i64) -> Item {
        Item { side, span_ms, dwell_ms: span_ms + interval_ms }
    }

    /// A look shorter than any engagement: samples on the regular grid only.
    pub(crate) fn glance(side: Side, dwell_ms: i64, interval_ms: i64) -> Item {
        Item { side, span_ms: (dwell_ms - 1) / interval_ms * interval_ms, dwell_ms }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Block {
    Pad,
    Item(Item),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Run {
    pub quadrant: Quadrant,
    pub blocks: Vec<Block>,
}

impl Run {
    pub(crate) fn pad(quadrant: Quadrant) -> Run {
        Run { quadrant, blocks: alloc::vec![Block::Pad] }
    }

    /// `[Pad, item, Pad, item, ..., Pad]`.
    pub(crate) fn padded(quadrant: Quadrant, items: &[Item]) -> Run {
        let mut blocks = alloc::vec![Block::Pad];
        for it in items {
            blocks.push(Block::Item(*it));
            blocks.push(Block::Pad);
        }
        Run { quadrant, blocks }
    }

    pub(crate) fn single(item: Item) -> Run {
        Run { quadrant: item.side.quadrant(), blocks: alloc::vec![Block::Item(item)] }
    }
}

/// Appends a run, merging it into the previous one when the quadrant is the
/// same.
pub(crate) fn push_run(runs: &mut Vec<Run>, run: Run) {
    match runs.last_mut() {
        Some(last) if last.quadrant == run.quadrant => last.blocks.extend(run.blocks),
        _ => runs.push(run),
    }
}

/// Canonical positions, expressed for a 1920x1080 screen in the y-up frame
/// and scaled to the actual geometry.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    geometry: ScreenGeometry,
    noise_px: f64,
}

const OBJECT_W_FRAC: f64 = 200.0 / 1920.0;
const OBJECT_H_FRAC: f64 = 150.0 / 1080.0;

impl Layout {
    /// Jitter is capped so that no sample can leave its quadrant or AoI
    /// status.
    pub(crate) fn new(geometry: ScreenGeometry, noise_px: f64) -> Layout {
        let cap = geometry.width().min(geometry.height()) / 30.0;
        Layout { geometry, noise_px: noise_px.clamp(0.0, cap) }
    }

    fn screen_point(&self, fx: f64, fy: f64) -> (f64, f64) {
        let (w, h) = (self.geometry.width(), self.geometry.height());
        (fx * w, self.geometry.flip_y(fy * h))
    }

    pub(crate) fn object_center(&self, side: Side) -> (f64, f64) {
        match side {
            Side::Left => self.screen_point(0.25, 0.25),
            Side::Right => self.screen_point(0.75, 0.25),
        }
    }

    pub(crate) fn object_size(&self) -> (f64, f64) {
        (self.geometry.width() * OBJECT_W_FRAC, self.geometry.height() * OBJECT_H_FRAC)
    }

    fn pad_position(&self, q: Quadrant) -> (f64, f64) {
        match q {
            Quadrant::Q1 => self.screen_point(0.25, 0.75),
            Quadrant::Q2 => self.screen_point(0.75, 0.75),
            Quadrant::Q3 => self.screen_point(0.125, 0.125),
            Quadrant::Q4 => self.screen_point(0.875, 0.125),
        }
    }

    fn placement(&self, t_ms: i64, side: Side) -> ObjectPlacement {
        let (x, y) = self.object_center(side);
        let (w, h) = self.object_size();
        ObjectPlacement::new(t_ms, x, y, w, h).expect("positive object size")
    }

    fn jitter(&self, (x, y): (f64, f64), rng: &mut ChaCha8Rng) -> (f64, f64) {
        let n = libm::floor(self.noise_px) as i64;
        if n == 0 {
            return (libm::round(x), libm::round(y));
        }
        let dx = rng.random_range(-n..=n) as f64;
        let dy = rng.random_range(-n..=n) as f64;
        (libm::round(x) + dx, libm::round(y) + dy)
    }
}

pub(crate) struct Realized {
    pub samples: Vec<GazeSample>,
    pub placements: Vec<ObjectPlacement>,
}

fn validate(runs: &[Run]) -> Result<(), SynthError> {
    for w in runs.windows(2) {
        if w[0].quadrant == w[1].quadrant {
            return Err(SynthError::Layout(format!("adjacent runs share quadrant {}", w[0].quadrant)));
        }
    }
    for run in runs {
        if run.blocks.is_empty() {
            return Err(SynthError::Layout(format!("empty run in {}", run.quadrant)));
        }
        for w in run.blocks.windows(2) {
            if let (Block::Item(a), Block::Item(b)) = (w[0], w[1]) {
                if a.side == b.side {
                    return Err(SynthError::Layout("same-side items need padding between them".into()));
                }
            }
        }
        for b in &run.blocks {
            if let Block::Item(it) = b {
                if it.side.quadrant() != run.quadrant {
                    return Err(SynthError::Layout(format!("{:?} item placed in {}", it.side, run.quadrant)));
                }
                if it.span_ms < 0 || it.dwell_ms <= it.span_ms {
                    return Err(SynthError::Layout("item dwell must exceed its span".into()));
                }
            }
        }
    }
    match runs.last().and_then(|r| r.blocks.last()) {
        Some(Block::Pad) => Ok(()),
        _ => Err(SynthError::Layout("timeline must end on padding".into())),
    }
}

/// Splits each quadrant's leftover time evenly over its pads.
fn pad_lengths(runs: &[Run], quadrant_dwell: [i64; 4]) -> Result<[(i64, i64); 4], SynthError> {
    let mut fixed = [0i64; 4];
    let mut pads = [0i64; 4];
    for run in runs {
        let q = run.quadrant.index();
        for b in &run.blocks {
            match b {
                Block::Pad => pads[q] += 1,
                Block::Item(it) => fixed[q] += it.dwell_ms,
            }
        }
    }
    let mut out = [(0, 0); 4];
    for q in Quadrant::ALL {
        let i = q.index();
        let rest = quadrant_dwell[i] - fixed[i];
        if rest < pads[i] || (pads[i] == 0 && rest != 0) {
            return Err(SynthError::Infeasible(format!(
                "{q}: {} ms of dwell cannot hold {} ms of AoI items and {} padding blocks",
                quadrant_dwell[i], fixed[i], pads[i]
            )));
        }
        if pads[i] > 0 {
            out[i] = (rest / pads[i], rest % pads[i]);
        }
    }
    Ok(out)
}

/// Placements emitted for the items alone: one whenever the object in view
/// has to change side.
pub(crate) fn required_placements(runs: &[Run]) -> u64 {
    let mut active = None;
    let mut n = 0;
    for b in runs.iter().flat_map(|r| &r.blocks) {
        if let Block::Item(it) = b {
            if active != Some(it.side) {
                n += 1;
                active = Some(it.side);
            }
        }
    }
    n
}

/// Lays samples out on a `interval_ms` grid per block, plus one terminal
/// sample. `extra_placements` objects are spread over the padding blocks.
pub(crate) fn realize(
    runs: &[Run],
    quadrant_dwell: [i64; 4],
    interval_ms: i64,
    extra_placements: u64,
    layout: &Layout,
    rng: &mut ChaCha8Rng,
) -> Result<Realized, SynthError> {
    validate(runs)?;
    let lengths = pad_lengths(runs, quadrant_dwell)?;
    let total_pads: u64 = runs.iter().flat_map(|r| &r.blocks).filter(|b| matches!(b, Block::Pad)).count() as u64;

    let mut samples = Vec::new();
    let mut placements = Vec::new();
    let mut seen = [0i64; 4];
    let mut pad_index = 0u64;
    let mut active: Option<Side> = None;
    let mut t = 0i64;
    let mut last_pos = (0.0, 0.0);

    for run in runs {
        let q = run.quadrant.index();
        for block in &run.blocks {
            match *block {
                Block::Pad => {
                    let (base, rem) = lengths[q];
                    let dwell = base + i64::from(seen[q] < rem);
                    seen[q] += 1;
                    let pos = layout.pad_position(run.quadrant);
                    let mut off = 0;
                    while off < dwell {
                        let (x, y) = layout.jitter(pos, rng);
                        samples.push(GazeSample { t_ms: t + off, x_px: x, y_px: y });
                        off += interval_ms;
                    }
                    // extras for this pad: an even share of the total
                    let upto = extra_placements * (pad_index + 1) / total_pads;
                    let from = extra_placements * pad_index / total_pads;
                    let n = upto - from;
                    // a fresh object where the current one sits, so the item
                    // placements stay exactly as counted
                    for k in 0..n {
                        let at = t + (dwell * (k as i64 + 1)) / (n as i64 + 1);
                        placements.push(layout.placement(at, active.unwrap_or(Side::Left)));
                    }
                    pad_index += 1;
                    last_pos = pos;
                    t += dwell;
                }
                Block::Item(item) => {
                    if active != Some(item.side) {
                        placements.push(layout.placement(t, item.side));
                        active = Some(item.side);
                    }
                    let pos = layout.object_center(item.side);
                    let mut off = 0;
                    while off < item.span_ms {
                        let (x, y) = layout.jitter(pos, rng);
                        samples.push(GazeSample { t_ms: t + off, x_px: x, y_px: y });
                        off += interval_ms;
                    }
                    let (x, y) = layout.jitter(pos, rng);
                    samples.push(GazeSample { t_ms: t + item.span_ms, x_px: x, y_px: y });
                    t += item.dwell_ms;
                }
            }
        }
    }
    let (x, y) = layout.jitter(last_pos, rng);
    samples.push(GazeSample { t_ms: t, x_px: x, y_px: y });
    Ok(Realized { samples, placements })
}

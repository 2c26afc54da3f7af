//! A three-level case-study student whose transition counts, AoI focus,
//! quadrant dwell times and game tallies match the published tables.
//!
//! Each level is a sequence of stimulus-quadrant visits separated by
//! non-stimulus visits. With `x` excursions, `c` bounces between Q1 and Q2,
//! `p` switches between Q3 and Q4 and a chain of `k + 1` alternating
//! single-object runs, the quadrant transition total is `2x + c + p + k`.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::timeline::{push_run, realize, required_placements, Item, Layout, Run, Side};
use super::{layout_events, SynthError};
use crate::ingest::{Level, LevelSession, SessionSet};
use crate::spatial::{Quadrant, ScreenGeometry};

pub const TABLE_FIXTURE_STUDENT: &str = "S10";

const INTERVAL_MS: i64 = 16;
const NOISE_PX: f64 = 12.0;

struct LevelPlan {
    level: Level,
    quadrant_dwell: [i64; 4],
    excursions: usize,
    nsq_bounces: usize,
    sq_switches: usize,
    /// Alternating sides starting Left, each in its own run.
    chain: Vec<Item>,
    others: Vec<Item>,
    objects: u64,
    clicks: (u64, u64),
    answers: (u64, u64),
}

fn periods(spans: &[(Side, i64)]) -> impl Iterator<Item = Item> + '_ {
    spans.iter().map(|&(s, l)| Item::period(s, l, INTERVAL_MS))
}

fn alternating(items: impl IntoIterator<Item = (i64, bool)>) -> Vec<Item> {
    // (length, is_period) in chain order; sides alternate from Left
    let mut side = Side::Left;
    items
        .into_iter()
        .map(|(l, is_period)| {
            let it = if is_period { Item::period(side, l, INTERVAL_MS) } else { Item::glance(side, l, INTERVAL_MS) };
            side = side.other();
            it
        })
        .collect()
}

fn level_one() -> LevelPlan {
    use Side::*;
    let mut others: Vec<Item> =
        periods(&[(Right, 14200), (Right, 12600), (Left, 11000), (Right, 10400), (Right, 9800), (Left, 9000), (Right, 7600), (Left, 4800)])
            .collect();
    others.push(Item::glance(Right, 253, INTERVAL_MS));
    LevelPlan {
        level: Level::One,
        quadrant_dwell: [28586, 29096, 49690, 89547],
        excursions: 6,
        nsq_bounces: 40,
        sq_switches: 51,
        chain: alternating([(253, false), (253, false), (253, false)]),
        others,
        objects: 111,
        clicks: (15, 18),
        answers: (36, 36),
    }
}

fn level_two() -> LevelPlan {
    use Side::*;
    let mut others: Vec<Item> =
        periods(&[(Left, 12000), (Right, 9800), (Left, 8400), (Right, 6800), (Left, 5200), (Right, 3800)]).collect();
    others.extend([Item::glance(Left, 309, INTERVAL_MS), Item::glance(Right, 309, INTERVAL_MS), Item::glance(Left, 309, INTERVAL_MS)]);
    LevelPlan {
        level: Level::Two,
        quadrant_dwell: [30855, 20597, 52274, 58268],
        excursions: 8,
        nsq_bounces: 34,
        sq_switches: 55,
        chain: alternating([(309, false), (309, false), (309, false)]),
        others,
        objects: 101,
        clicks: (11, 11),
        answers: (33, 34),
    }
}

fn level_three() -> LevelPlan {
    // One sustained period, then short periods alternating with glances:
    // frequent Left/Right switching inside a single chain.
    let spans = [2600, 2400, 2200, 2000, 1900, 1850, 1800, 1750, 1700, 1650, 1600, 1550, 1500, 1584];
    let mut glances = [90i64; 18];
    glances[17] = 95;
    let mut chain = Vec::new();
    for (i, g) in glances.iter().enumerate() {
        if let Some(&l) = spans.get(i) {
            chain.push((l, true));
        }
        chain.push((*g, false));
    }
    LevelPlan {
        level: Level::Three,
        quadrant_dwell: [20835, 62012, 64887, 26850],
        excursions: 10,
        nsq_bounces: 20,
        sq_switches: 21,
        chain: alternating(chain),
        others: Vec::new(),
        objects: 103,
        clicks: (10, 13),
        answers: (31, 34),
    }
}

/// `n` spread round-robin over `slots`.
fn share(n: usize, slots: usize, i: usize) -> usize {
    n / slots + usize::from(i < n % slots)
}

fn runs_for(plan: &LevelPlan) -> Vec<Run> {
    let x = plan.excursions;
    let chain_visit = (!plan.chain.is_empty()).then_some(x / 2);
    let plain: Vec<usize> = (0..=x).filter(|&v| Some(v) != chain_visit).collect();

    // distribute the other items over the plain visits' runs of their side
    let mut left: Vec<Vec<Item>> = alloc::vec![Vec::new(); plain.len()];
    let mut right: Vec<Vec<Item>> = alloc::vec![Vec::new(); plain.len()];
    let (mut li, mut ri) = (0, 0);
    for it in &plan.others {
        match it.side {
            Side::Left => {
                left[li % plain.len()].push(*it);
                li += 1;
            }
            Side::Right => {
                right[ri % plain.len()].push(*it);
                ri += 1;
            }
        }
    }

    let mut runs = Vec::new();
    for v in 0..=x {
        if v > 0 {
            let b = v - 1;
            let mut q = if b % 2 == 0 { Quadrant::Q1 } else { Quadrant::Q2 };
            for _ in 0..=share(plan.nsq_bounces, x, b) {
                push_run(&mut runs, Run::pad(q));
                q = if q == Quadrant::Q1 { Quadrant::Q2 } else { Quadrant::Q1 };
            }
        }
        if Some(v) == chain_visit {
            for it in &plan.chain {
                runs.push(Run::single(*it));
            }
            continue;
        }
        let j = plain.iter().position(|&p| p == v).expect("plain visit");
        let switches = share(plan.sq_switches, plain.len(), j);
        let mut side = if j % 2 == 0 { Side::Left } else { Side::Right };
        // items go in the first run of each side
        let (mut l_items, mut r_items) = (core::mem::take(&mut left[j]), core::mem::take(&mut right[j]));
        for _ in 0..=switches {
            let items = match side {
                Side::Left => core::mem::take(&mut l_items),
                Side::Right => core::mem::take(&mut r_items),
            };
            runs.push(Run::padded(side.quadrant(), &items));
            side = side.other();
        }
        assert!(l_items.is_empty() && r_items.is_empty(), "visit {v} has no run for some items");
    }
    runs
}

fn build_level(plan: &LevelPlan, geometry: ScreenGeometry) -> Result<LevelSession, SynthError> {
    let runs = runs_for(plan);
    let layout = Layout::new(geometry, NOISE_PX);
    let mut rng = ChaCha8Rng::seed_from_u64(10 + plan.level.number() as u64);
    let realized = realize(&runs, plan.quadrant_dwell, INTERVAL_MS, plan.objects - required_placements(&runs), &layout, &mut rng)?;
    let duration: i64 = plan.quadrant_dwell.iter().sum();
    Ok(LevelSession {
        student_id: TABLE_FIXTURE_STUDENT.into(),
        level: plan.level,
        samples: realized.samples,
        events: layout_events(plan.clicks, plan.answers, duration),
        placements: realized.placements,
        geometry,
    })
}

/// The case-study student, all three levels, on a 1920x1080 screen.
pub fn generate_table_fixture() -> SessionSet {
    let mut set = SessionSet::default();
    for plan in [level_one(), level_two(), level_three()] {
        let session = build_level(&plan, ScreenGeometry::default()).expect("fixture plans are feasible");
        set.insert(session).expect("one session per level");
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::analyze_student;
    use crate::scoring::ScoringConfig;

    #[test]
    fn fixture_matches_tables() {
        let set = generate_table_fixture();
        let a = analyze_student(&set, TABLE_FIXTURE_STUDENT, &ScoringConfig::default()).unwrap();
        let totals: Vec<u64> = a.levels.iter().map(|l| l.transitions.aggregates.t_total).collect();
        assert_eq!(totals, alloc::vec![105, 107, 92]);
        let focus: Vec<f64> = a.levels.iter().map(|l| l.features.focus_aoi_pct).collect();
        for (f, want) in focus.iter().zip([40.9, 29.6, 16.0]) {
            assert!((f - want).abs() < 0.05, "{f} vs {want}");
        }
        let acc: Vec<f64> = a.levels.iter().map(|l| l.game.accuracy_pct().unwrap()).collect();
        for (v, want) in acc.iter().zip([94.4, 97.8, 87.2]) {
            assert!((v - want).abs() < 0.05);
        }
        let objects: Vec<u64> = a.levels.iter().map(|l| l.features.interactions).collect();
        assert_eq!(objects, alloc::vec![111, 101, 103]);
    }

    #[test]
    fn fixture_dwell_and_periods() {
        let set = generate_table_fixture();
        let a = analyze_student(&set, TABLE_FIXTURE_STUDENT, &ScoringConfig::default()).unwrap();
        assert_eq!(a.levels[0].transitions.dwell.time_in_quadrant, [28586, 29096, 49690, 89547]);
        assert_eq!(a.levels[0].temporal.period_count, 8);
        let engaged: i64 = a.levels[0].periods.iter().map(|p| p.duration_ms).sum();
        assert_eq!(engaged, 79400);
        assert_eq!(a.levels[2].temporal.period_count, 14);
        assert_eq!(a.levels[2].transitions.aoi.left_right_transitions, 31);
    }
}

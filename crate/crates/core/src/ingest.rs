//! Raw record parsing, cleaning and per-level session assembly.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spatial::{ObjectPlacement, ScreenGeometry};

/// Column order of the canonical level file.
pub const CANONICAL_HEADER: [&str; 7] = ["timestamp_ms", "gaze", "object_pos", "aoi_w", "aoi_h", "event_kind", "event_correct"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("malformed coordinate pair")]
pub struct CoordinateParseError;

/// Parses `"(x, y)"` with optional surrounding whitespace.
pub fn parse_coordinate_string(text: &str) -> Result<(f64, f64), CoordinateParseError> {
    let inner = text.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or(CoordinateParseError)?;
    let mut parts = inner.split(',');
    let (Some(x), Some(y), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(CoordinateParseError);
    };
    Ok((parse_plain_number(x)?, parse_plain_number(y)?))
}

// Rejects "inf", "NaN" and friends, which `f64::from_str` accepts.
fn parse_plain_number(s: &str) -> Result<f64, CoordinateParseError> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E')) {
        return Err(CoordinateParseError);
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(CoordinateParseError)
}

pub fn format_coordinates(x: f64, y: f64) -> String {
    alloc::format!("({x}, {y})")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    MouseClick,
    Answer,
    Other,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::MouseClick => "mouse_click",
            EventKind::Answer => "answer",
            EventKind::Other => "other",
        }
    }
}

/// Kinds that count towards game accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoredEvent {
    MouseClick,
    Answer,
}

impl From<ScoredEvent> for EventKind {
    fn from(k: ScoredEvent) -> Self {
        match k {
            ScoredEvent::MouseClick => EventKind::MouseClick,
            ScoredEvent::Answer => EventKind::Answer,
        }
    }
}

/// One row of a level file, fields still largely textual.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawRecord {
    pub timestamp_ms: Option<i64>,
    pub gaze_text: Option<String>,
    pub object_text: Option<String>,
    pub aoi_width_px: Option<f64>,
    pub aoi_height_px: Option<f64>,
    pub event_kind: Option<EventKind>,
    pub event_correct: Option<bool>,
}

/// A field that failed to parse, identified by its canonical column name.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field `{field}`: {message}")]
pub struct FieldError {
    pub field: &'static str,
    pub message: String,
}

impl FieldError {
    fn new(field: &'static str, message: impl fmt::Display) -> Self {
        FieldError { field, message: message.to_string() }
    }
}

/// Integer milliseconds; fractional input is rounded half-up, `floor(x + 0.5)`.
pub fn parse_timestamp_ms(text: &str) -> Result<i64, FieldError> {
    let t = text.trim();
    if let Ok(v) = t.parse::<i64>() {
        return Ok(v);
    }
    let v: f64 = t
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| FieldError::new("timestamp_ms", alloc::format!("not a number: {t:?}")))?;
    let r = libm::floor(v + 0.5);
    if r.abs() > 9.0e15 {
        return Err(FieldError::new("timestamp_ms", "out of range"));
    }
    Ok(r as i64)
}

impl RawRecord {
    /// Builds a record from the seven canonical columns. Empty cells are
    /// absent values; gaze and object text are kept verbatim.
    pub fn from_fields(fields: &[&str]) -> Result<RawRecord, FieldError> {
        if fields.len() != CANONICAL_HEADER.len() {
            return Err(FieldError::new("row", alloc::format!("expected {} fields, found {}", CANONICAL_HEADER.len(), fields.len())));
        }
        let cell = |i: usize| {
            let s = fields[i].trim();
            (!s.is_empty()).then_some(s)
        };
        let dim = |i: usize| -> Result<Option<f64>, FieldError> {
            cell(i)
                .map(|s| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite() && *v >= 0.0)
                        .ok_or_else(|| FieldError::new(CANONICAL_HEADER[i], alloc::format!("expected non-negative number, found {s:?}")))
                })
                .transpose()
        };
        let event_kind = cell(5)
            .map(|s| match s {
                "mouse_click" => Ok(EventKind::MouseClick),
                "answer" => Ok(EventKind::Answer),
                "other" => Ok(EventKind::Other),
                _ => Err(FieldError::new("event_kind", alloc::format!("unknown event kind {s:?}"))),
            })
            .transpose()?;
        let event_correct = cell(6)
            .map(|s| match s {
                "true" | "1" => Ok(true),
                "false" | "0" => Ok(false),
                _ => Err(FieldError::new("event_correct", alloc::format!("expected true/false, found {s:?}"))),
            })
            .transpose()?;
        Ok(RawRecord {
            timestamp_ms: cell(0).map(parse_timestamp_ms).transpose()?,
            gaze_text: cell(1).map(String::from),
            object_text: cell(2).map(String::from),
            aoi_width_px: dim(3)?,
            aoi_height_px: dim(4)?,
            event_kind,
            event_correct,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeSample {
    pub t_ms: i64,
    pub x_px: f64,
    pub y_px: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameEvent {
    pub t_ms: i64,
    pub kind: ScoredEvent,
    pub correct: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CleaningOptions {
    /// Treat coordinates outside the screen as tracking failures.
    pub drop_out_of_bounds: bool,
}

impl Default for CleaningOptions {
    fn default() -> Self {
        CleaningOptions { drop_out_of_bounds: true }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cleaned {
    pub samples: Vec<GazeSample>,
    pub dropped: usize,
}

/// Keeps records with a timestamp and a parseable, non-zero gaze point
/// (inside the screen unless disabled). Records without any gaze text are
/// not gaze records and are neither kept nor counted as dropped.
pub fn clean_samples(records: &[RawRecord], geometry: &ScreenGeometry, options: CleaningOptions) -> Cleaned {
    let mut out = Cleaned::default();
    for r in records {
        let Some(text) = r.gaze_text.as_deref() else { continue };
        let sample = r.timestamp_ms.and_then(|t| {
            let (x, y) = parse_coordinate_string(text).ok()?;
            let zero = x == 0.0 && y == 0.0;
            let oob = options.drop_out_of_bounds && !geometry.contains(x, y);
            (!zero && !oob).then_some(GazeSample { t_ms: t, x_px: x, y_px: y })
        });
        match sample {
            Some(s) => out.samples.push(s),
            None => out.dropped += 1,
        }
    }
    // stable: ties keep input order
    out.samples.sort_by_key(|s| s.t_ms);
    out
}

/// Shifts timestamps so the first sample sits at 0.
pub fn normalize_timestamps(samples: &[GazeSample]) -> Vec<GazeSample> {
    let Some(first) = samples.first() else { return Vec::new() };
    let offset = first.t_ms;
    samples.iter().map(|s| GazeSample { t_ms: s.t_ms - offset, ..*s }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Level {
    One = 1,
    Two = 2,
    Three = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("level must be 1, 2 or 3 (got {0})")]
pub struct InvalidLevel(pub i64);

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Two, Level::Three];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn index(self) -> usize {
        self as usize - 1
    }
}

impl TryFrom<u8> for Level {
    type Error = InvalidLevel;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Level::try_from(v as i64)
    }
}

impl TryFrom<i64> for Level {
    type Error = InvalidLevel;

    fn try_from(v: i64) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Level::One),
            2 => Ok(Level::Two),
            3 => Ok(Level::Three),
            _ => Err(InvalidLevel(v)),
        }
    }
}

impl From<Level> for u8 {
    fn from(l: Level) -> u8 {
        l.number()
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Everything recorded for one student at one difficulty level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSession {
    pub student_id: String,
    pub level: Level,
    pub samples: Vec<GazeSample>,
    pub events: Vec<GameEvent>,
    pub placements: Vec<ObjectPlacement>,
    pub geometry: ScreenGeometry,
}

impl LevelSession {
    pub fn duration_ms(&self) -> i64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t_ms - a.t_ms,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestStats {
    pub gaze_records: usize,
    pub dropped_samples: usize,
    pub dropped_placements: usize,
}

/// Cleans records and assembles a session. Events and placements are
/// shifted by the same offset as the samples so timing stays aligned.
pub fn build_session(
    student_id: &str,
    level: Level,
    records: &[RawRecord],
    geometry: ScreenGeometry,
    options: CleaningOptions,
) -> (LevelSession, IngestStats) {
    let cleaned = clean_samples(records, &geometry, options);
    let offset = cleaned.samples.first().map_or(0, |s| s.t_ms);
    let samples = normalize_timestamps(&cleaned.samples);

    let mut stats = IngestStats {
        gaze_records: records.iter().filter(|r| r.gaze_text.is_some()).count(),
        dropped_samples: cleaned.dropped,
        dropped_placements: 0,
    };

    let mut events: Vec<GameEvent> = records
        .iter()
        .filter_map(|r| {
            let kind = match r.event_kind? {
                EventKind::MouseClick => ScoredEvent::MouseClick,
                EventKind::Answer => ScoredEvent::Answer,
                EventKind::Other => return None,
            };
            Some(GameEvent { t_ms: r.timestamp_ms? - offset, kind, correct: r.event_correct? })
        })
        .collect();
    events.sort_by_key(|e| e.t_ms);

    let mut placements = Vec::new();
    for r in records.iter().filter(|r| r.object_text.is_some()) {
        let placement = (|| {
            let (x, y) = parse_coordinate_string(r.object_text.as_deref()?).ok()?;
            ObjectPlacement::new(r.timestamp_ms?, x, y, r.aoi_width_px?, r.aoi_height_px?).ok()
        })();
        match placement {
            Some(p) => placements.push(p.shifted(offset)),
            None => stats.dropped_placements += 1,
        }
    }
    placements.sort_by_key(|p| p.t_ms());

    let session = LevelSession { student_id: student_id.to_string(), level, samples, events, placements, geometry };
    (session, stats)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("duplicate session for student {student_id} at level {level}")]
pub struct DuplicateSession {
    pub student_id: String,
    pub level: Level,
}

/// Sessions keyed by `(student, level)`; iteration is sorted by key.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SessionSet {
    sessions: BTreeMap<(String, Level), LevelSession>,
}

impl SessionSet {
    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    pub fn get(&self, student_id: &str, level: Level) -> Option<&LevelSession> {
        self.sessions.get(&(student_id.to_string(), level))
    }

    pub fn iter(&self) -> impl Iterator<Item = &LevelSession> {
        self.sessions.values()
    }

    pub fn students(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.sessions.keys().map(|(s, _)| s.as_str()).collect();
        ids.dedup();
        ids
    }

    pub fn levels_of<'a>(&'a self, student_id: &'a str) -> impl Iterator<Item = &'a LevelSession> + 'a {
        self.sessions.values().filter(move |s| s.student_id == student_id)
    }

    /// Levels with no session for this student.
    pub fn missing_levels(&self, student_id: &str) -> Vec<Level> {
        Level::ALL.into_iter().filter(|l| self.get(student_id, *l).is_none()).collect()
    }

    pub fn insert(&mut self, session: LevelSession) -> Result<(), DuplicateSession> {
        let key = (session.student_id.clone(), session.level);
        if self.sessions.contains_key(&key) {
            return Err(DuplicateSession { student_id: key.0, level: key.1 });
        }
        self.sessions.insert(key, session);
        Ok(())
    }

    pub fn into_sessions(self) -> impl Iterator<Item = LevelSession> {
        self.sessions.into_values()
    }
}

pub fn merge_levels(sessions: impl IntoIterator<Item = LevelSession>) -> Result<SessionSet, DuplicateSession> {
    let mut set = SessionSet::default();
    for s in sessions {
        set.insert(s)?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gaze(t: i64, text: &str) -> RawRecord {
        RawRecord { timestamp_ms: Some(t), gaze_text: Some(text.into()), ..Default::default() }
    }

    #[test]
    fn coordinate_strings() {
        assert_eq!(parse_coordinate_string("(1250, 680)"), Ok((1250.0, 680.0)));
        assert_eq!(parse_coordinate_string("(0, 0)"), Ok((0.0, 0.0)));
        assert_eq!(parse_coordinate_string("  ( 12.5 ,-3 ) "), Ok((12.5, -3.0)));
        assert!(parse_coordinate_string("(12.5,abc)").is_err());
        assert!(parse_coordinate_string("1250, 680").is_err());
        assert!(parse_coordinate_string("(1, 2, 3)").is_err());
        assert!(parse_coordinate_string("(1)").is_err());
        assert!(parse_coordinate_string("(inf, 2)").is_err());
        assert!(parse_coordinate_string("(NaN, 2)").is_err());
        assert!(parse_coordinate_string("(, 2)").is_err());
    }

    #[test]
    fn cleaning_drops_zero_gaze() {
        let g = ScreenGeometry::default();
        let out = clean_samples(&[gaze(5, "(0, 0)"), gaze(10, "(100, 200)")], &g, CleaningOptions::default());
        assert_eq!(out.samples, vec![GazeSample { t_ms: 10, x_px: 100.0, y_px: 200.0 }]);
        assert_eq!(out.dropped, 1);
        assert_eq!(clean_samples(&[], &g, CleaningOptions::default()), Cleaned::default());
    }

    #[test]
    fn cleaning_drops_out_of_bounds_unless_disabled() {
        let g = ScreenGeometry::default();
        let recs = [gaze(0, "(1, 1)"), gaze(1, "(2000, 500)"), gaze(2, "(1920, 1080)"), gaze(3, "(5, 5)")];
        let out = clean_samples(&recs, &g, CleaningOptions::default());
        assert_eq!((out.samples.len(), out.dropped), (3, 1));
        let out = clean_samples(&recs, &g, CleaningOptions { drop_out_of_bounds: false });
        assert_eq!((out.samples.len(), out.dropped), (4, 0));
    }

    #[test]
    fn cleaning_drops_missing_timestamp_and_garbage_and_skips_events() {
        let g = ScreenGeometry::default();
        let recs = [
            RawRecord { gaze_text: Some("(1, 1)".into()), ..Default::default() },
            gaze(1, "garbage"),
            RawRecord { timestamp_ms: Some(2), event_kind: Some(EventKind::Answer), ..Default::default() },
        ];
        let out = clean_samples(&recs, &g, CleaningOptions::default());
        assert_eq!((out.samples.len(), out.dropped), (0, 2));
    }

    #[test]
    fn cleaning_sorts_stably() {
        let g = ScreenGeometry::default();
        let out = clean_samples(&[gaze(10, "(1, 1)"), gaze(5, "(2, 2)"), gaze(10, "(3, 3)")], &g, CleaningOptions::default());
        let xs: Vec<f64> = out.samples.iter().map(|s| s.x_px).collect();
        assert_eq!(xs, vec![2.0, 1.0, 3.0]);
    }

    #[test]
    fn normalization() {
        let s = |t| GazeSample { t_ms: t, x_px: 1.0, y_px: 1.0 };
        let ts = |v: Vec<GazeSample>| v.iter().map(|s| s.t_ms).collect::<Vec<_>>();
        assert_eq!(ts(normalize_timestamps(&[s(1000), s(1016), s(1033)])), vec![0, 16, 33]);
        assert_eq!(ts(normalize_timestamps(&[s(0)])), vec![0]);
        assert_eq!(ts(normalize_timestamps(&[s(500), s(500)])), vec![0, 0]);
        assert!(normalize_timestamps(&[]).is_empty());
    }

    #[test]
    fn timestamps_round_half_up() {
        assert_eq!(parse_timestamp_ms("12"), Ok(12));
        assert_eq!(parse_timestamp_ms("12.5"), Ok(13));
        assert_eq!(parse_timestamp_ms("12.49"), Ok(12));
        assert_eq!(parse_timestamp_ms("-2.5"), Ok(-2));
        assert!(parse_timestamp_ms("abc").is_err());
        assert!(parse_timestamp_ms("inf").is_err());
    }

    #[test]
    fn record_from_fields() {
        let r = RawRecord::from_fields(&["1000", "(1250, 680)", "", "", "", "mouse_click", "true"]).unwrap();
        assert_eq!(r.timestamp_ms, Some(1000));
        assert_eq!(r.gaze_text.as_deref(), Some("(1250, 680)"));
        assert_eq!(r.event_kind, Some(EventKind::MouseClick));
        assert_eq!(r.event_correct, Some(true));
        let e = RawRecord::from_fields(&["1", "", "", "-3", "", "", ""]).unwrap_err();
        assert_eq!(e.field, "aoi_w");
        let e = RawRecord::from_fields(&["1", "", "", "", "", "blink", ""]).unwrap_err();
        assert_eq!(e.field, "event_kind");
        let e = RawRecord::from_fields(&["1", "", "", "", "", "", "maybe"]).unwrap_err();
        assert_eq!(e.field, "event_correct");
        let e = RawRecord::from_fields(&["x1", "", "", "", "", "", ""]).unwrap_err();
        assert_eq!(e.field, "timestamp_ms");
        assert!(RawRecord::from_fields(&["1", ""]).is_err());
    }

    #[test]
    fn session_assembly_shifts_everything() {
        let recs = vec![
            RawRecord {
                timestamp_ms: Some(900),
                object_text: Some("(400, 300)".into()),
                aoi_width_px: Some(200.0),
                aoi_height_px: Some(150.0),
                ..Default::default()
            },
            gaze(1000, "(450, 330)"),
            RawRecord {
                timestamp_ms: Some(1050),
                event_kind: Some(EventKind::MouseClick),
                event_correct: Some(false),
                ..Default::default()
            },
            RawRecord { timestamp_ms: Some(1060), event_kind: Some(EventKind::Other), event_correct: Some(true), ..Default::default() },
            gaze(1100, "(455, 331)"),
            RawRecord { timestamp_ms: Some(1200), object_text: Some("(1, 1)".into()), ..Default::default() },
        ];
        let (s, stats) = build_session("S1", Level::Two, &recs, ScreenGeometry::default(), CleaningOptions::default());
        assert_eq!(s.samples.iter().map(|s| s.t_ms).collect::<Vec<_>>(), vec![0, 100]);
        assert_eq!(s.events, vec![GameEvent { t_ms: 50, kind: ScoredEvent::MouseClick, correct: false }]);
        assert_eq!(s.placements.len(), 1);
        assert_eq!(s.placements[0].t_ms(), -100);
        assert_eq!(stats, IngestStats { gaze_records: 2, dropped_samples: 0, dropped_placements: 1 });
        assert_eq!(s.duration_ms(), 100);
    }

    fn session(student: &str, level: Level) -> LevelSession {
        LevelSession {
            student_id: student.into(),
            level,
            samples: vec![],
            events: vec![],
            placements: vec![],
            geometry: ScreenGeometry::default(),
        }
    }

    #[test]
    fn merging() {
        let set = merge_levels(Level::ALL.map(|l| session("S", l))).unwrap();
        assert_eq!(set.len(), 3);
        let err = merge_levels([session("S", Level::One), session("S", Level::One)]).unwrap_err();
        assert_eq!(err.level, Level::One);
        let set = merge_levels([session("S", Level::Two)]).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.missing_levels("S"), vec![Level::One, Level::Three]);
    }

    #[test]
    fn level_conversion() {
        assert_eq!(Level::try_from(2u8), Ok(Level::Two));
        assert!(Level::try_from(4u8).is_err());
        assert!(Level::try_from(0i64).is_err());
    }
}

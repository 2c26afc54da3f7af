//! Canonical level files: one CSV per student and level.

use std::fs;
use std::path::{Path, PathBuf};

use gazescore_core::ingest::{
    build_session, format_coordinates, CleaningOptions, EventKind, IngestStats, Level, LevelSession, RawRecord, CANONICAL_HEADER,
};
use gazescore_core::spatial::ScreenGeometry;

use crate::error::{Error, Result};

/// `S10_level2.csv` and the like.
pub fn level_file_name(student_id: &str, level: Level) -> String {
    format!("{student_id}_level{}.csv", level.number())
}

/// Inverse of [`level_file_name`]; `None` for anything else.
pub fn parse_level_file_name(name: &str) -> Option<(String, Level)> {
    let stem = name.strip_suffix(".csv")?;
    let (student, level) = stem.rsplit_once("_level")?;
    if student.is_empty() {
        return None;
    }
    let level = Level::try_from(level.parse::<u8>().ok()?).ok()?;
    Some((student.to_string(), level))
}

/// Level files named by `inputs`: files are taken as given, directories are
/// scanned (not recursively). The result is sorted by student and level.
pub fn discover_level_files(inputs: &[PathBuf]) -> Result<Vec<(String, Level, PathBuf)>> {
    let mut found = Vec::new();
    for input in inputs {
        let meta = fs::metadata(input).map_err(|e| Error::io(input, e))?;
        if meta.is_dir() {
            for entry in fs::read_dir(input).map_err(|e| Error::io(input, e))? {
                let entry = entry.map_err(|e| Error::io(input, e))?;
                let path = entry.path();
                if let Some((s, l)) = path.file_name().and_then(|n| n.to_str()).and_then(parse_level_file_name) {
                    if path.is_file() {
                        found.push((s, l, path));
                    }
                }
            }
        } else {
            let name = input.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            let (s, l) = parse_level_file_name(name)
                .ok_or_else(|| Error::Usage(format!("{}: expected a file named <student>_level<1|2|3>.csv", input.display())))?;
            found.push((s, l, input.clone()));
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

fn schema(path: &Path, line: u64, field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_path_buf(), line, field: field.into(), message: message.into() }
}

/// Reads and checks the header, then every row.
pub fn read_records(path: &Path) -> Result<Vec<RawRecord>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(bytes.as_slice());
    let mut rows = reader.records();

    let header = match rows.next() {
        Some(h) => h.map_err(|e| csv_error(path, e))?,
        None => return Err(schema(path, 1, "header", "file is empty")),
    };
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != CANONICAL_HEADER {
        return Err(schema(path, 1, "header", format!("expected `{}`, found `{}`", CANONICAL_HEADER.join(","), names.join(","))));
    }

    let mut records = Vec::new();
    for row in rows {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = row.iter().collect();
        let record = RawRecord::from_fields(&fields).map_err(|e| schema(path, line, e.field, e.message))?;
        records.push(record);
    }
    Ok(records)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        csv::ErrorKind::Utf8 { err, .. } => schema(path, line, "row", format!("invalid UTF-8: {err}")),
        other => schema(path, line, "row", format!("{other:?}")),
    }
}

pub fn load_level_csv(
    path: &Path,
    level: Level,
    student_id: &str,
    geometry: ScreenGeometry,
    options: CleaningOptions,
) -> Result<(LevelSession, IngestStats)> {
    let records = read_records(path)?;
    if records.is_empty() {
        log::warn!("{}: no data rows", path.display());
    }
    let (session, stats) = build_session(student_id, level, &records, geometry, options);
    if stats.dropped_samples > 0 || stats.dropped_placements > 0 {
        log::info!(
            "{}: dropped {} of {} gaze samples and {} object placements",
            path.display(),
            stats.dropped_samples,
            stats.gaze_records,
            stats.dropped_placements
        );
    }
    Ok((session, stats))
}

enum Row<'a> {
    Sample(&'a gazescore_core::ingest::GazeSample),
    Placement(&'a gazescore_core::spatial::ObjectPlacement),
    Event(&'a gazescore_core::ingest::GameEvent),
}

/// Canonical CSV text for a session. Loading it back yields the same
/// session.
pub fn level_csv_bytes(session: &LevelSession) -> Vec<u8> {
    let mut rows: Vec<(i64, u8, Row)> = Vec::new();
    rows.extend(session.samples.iter().map(|s| (s.t_ms, 0, Row::Sample(s))));
    rows.extend(session.placements.iter().map(|p| (p.t_ms(), 1, Row::Placement(p))));
    rows.extend(session.events.iter().map(|e| (e.t_ms, 2, Row::Event(e))));
    // stable: within a kind the session order is kept
    rows.sort_by_key(|r| (r.0, r.1));

    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CANONICAL_HEADER).expect("in-memory write");
    for (t, _, row) in rows {
        let t = t.to_string();
        let record: [String; 7] = match row {
            Row::Sample(s) => {
                [t, format_coordinates(s.x_px, s.y_px), String::new(), String::new(), String::new(), String::new(), String::new()]
            }
            Row::Placement(p) => {
                let (x, y) = p.position();
                let (aw, ah) = p.size();
                [t, String::new(), format_coordinates(x, y), aw.to_string(), ah.to_string(), String::new(), String::new()]
            }
            Row::Event(e) => [
                t,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                EventKind::from(e.kind).as_str().to_string(),
                e.correct.to_string(),
            ],
        };
        w.write_record(&record).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

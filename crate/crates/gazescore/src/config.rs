//! Run settings: built-in defaults, overlaid by a TOML file, overlaid by
//! command-line flags.
//!
//! ```toml
//! [scoring]
//! gamma = 10.0
//! max_impact = [15.0, 15.0, 15.0]
//!
//! [scoring.assessment]
//! mastery_at = 85.0
//!
//! [screen]
//! width_px = 1920
//! height_px = 1080
//! y_up = false
//!
//! [ingest]
//! drop_out_of_bounds = true
//! ```

use std::fmt::Display;
use std::fs;
use std::path::Path;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use gazescore_core::ingest::CleaningOptions;
use gazescore_core::scoring::{EtaSource, ScoringConfig};
use gazescore_core::spatial::ScreenGeometry;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    pub drop_out_of_bounds: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig { drop_out_of_bounds: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub scoring: ScoringConfig,
    pub screen: ScreenGeometry,
    pub ingest: IngestConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EtaSourceArg {
    Temporal,
    AoiDwell,
}

impl From<EtaSourceArg> for EtaSource {
    fn from(a: EtaSourceArg) -> Self {
        match a {
            EtaSourceArg::Temporal => EtaSource::Temporal,
            EtaSourceArg::AoiDwell => EtaSource::AoiDwell,
        }
    }
}

/// One flag per configurable value; anything left unset falls back to the
/// config file and then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, help_heading = "Scoring")]
    pub alpha1: Option<f64>,
    #[arg(long, help_heading = "Scoring")]
    pub alpha2: Option<f64>,
    #[arg(long, help_heading = "Scoring")]
    pub gamma: Option<f64>,
    #[arg(long, help_heading = "Scoring")]
    pub delta: Option<f64>,
    #[arg(long, help_heading = "Scoring")]
    pub tau_min_ms: Option<i64>,
    #[arg(long, help_heading = "Scoring")]
    pub tau_sustained_ms: Option<i64>,
    #[arg(long, help_heading = "Scoring")]
    pub gap_tolerance_ms: Option<i64>,
    #[arg(long, help_heading = "Scoring")]
    pub excess_period_threshold: Option<u64>,
    /// One value for every level, or three comma-separated values.
    #[arg(long, value_delimiter = ',', help_heading = "Scoring")]
    pub max_impact: Option<Vec<f64>>,
    /// Count only label changes, not repeats, in the AoI transition total.
    #[arg(long, help_heading = "Scoring")]
    pub aoi_total_changes_only: Option<bool>,
    #[arg(long, value_enum, help_heading = "Scoring")]
    pub eta_source: Option<EtaSourceArg>,
    #[arg(long, help_heading = "Assessment")]
    pub excellent_below: Option<f64>,
    #[arg(long, help_heading = "Assessment")]
    pub good_below: Option<f64>,
    #[arg(long, help_heading = "Assessment")]
    pub fair_below: Option<f64>,
    #[arg(long, help_heading = "Assessment")]
    pub mastery_at: Option<f64>,
    #[arg(long, help_heading = "Assessment")]
    pub developing_at: Option<f64>,
    #[arg(long, help_heading = "Screen")]
    pub screen_width: Option<f64>,
    #[arg(long, help_heading = "Screen")]
    pub screen_height: Option<f64>,
    /// Coordinates have y growing upwards.
    #[arg(long, help_heading = "Screen")]
    pub y_up: Option<bool>,
    #[arg(long, help_heading = "Ingest")]
    pub drop_out_of_bounds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub scoring: ScoringConfig,
    pub geometry: ScreenGeometry,
    pub cleaning: CleaningOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Default,
    File,
    Flag,
}

struct Tracker<'a> {
    file_keys: &'a toml::Table,
    log: Vec<(String, String, Source)>,
}

impl Tracker<'_> {
    fn in_file(&self, section: &str, key: &str) -> bool {
        let mut table = self.file_keys;
        for part in section.split('.') {
            match table.get(part).and_then(|v| v.as_table()) {
                Some(t) => table = t,
                None => return false,
            }
        }
        table.contains_key(key)
    }

    fn apply<T: Display + Clone>(&mut self, section: &str, key: &str, flag: Option<T>, target: &mut T) {
        let source = if let Some(v) = flag {
            *target = v;
            Source::Flag
        } else if self.in_file(section, key) {
            Source::File
        } else {
            Source::Default
        };
        self.log.push((format!("{section}.{key}"), target.to_string(), source));
    }
}

pub fn load_file_config(path: &Path) -> Result<(FileConfig, toml::Table)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |e: toml::de::Error| Error::Config(format!("{}: {}", path.display(), e.message()));
    let table: toml::Table = toml::from_str(&text).map_err(bad)?;
    let config: FileConfig = toml::from_str(&text).map_err(bad)?;
    Ok((config, table))
}

/// Merges defaults, the optional file and the flags, validates the result
/// and logs where every value came from.
pub fn resolve(config_path: Option<&Path>, o: &Overrides) -> Result<Settings> {
    let (file, table) = match config_path {
        Some(p) => load_file_config(p)?,
        None => (FileConfig::default(), toml::Table::new()),
    };
    let mut s = file.scoring;
    let mut t = Tracker { file_keys: &table, log: Vec::new() };

    t.apply("scoring", "alpha1", o.alpha1, &mut s.alpha1);
    t.apply("scoring", "alpha2", o.alpha2, &mut s.alpha2);
    t.apply("scoring", "gamma", o.gamma, &mut s.gamma);
    t.apply("scoring", "delta", o.delta, &mut s.delta);
    t.apply("scoring", "tau_min_ms", o.tau_min_ms, &mut s.tau_min_ms);
    t.apply("scoring", "tau_sustained_ms", o.tau_sustained_ms, &mut s.tau_sustained_ms);
    t.apply("scoring", "gap_tolerance_ms", o.gap_tolerance_ms, &mut s.gap_tolerance_ms);
    t.apply("scoring", "excess_period_threshold", o.excess_period_threshold, &mut s.excess_period_threshold);
    let max_impact = match o.max_impact.as_deref() {
        None => None,
        Some(&[v]) => Some([v; 3]),
        Some(&[a, b, c]) => Some([a, b, c]),
        Some(other) => {
            return Err(Error::Config(format!("--max-impact takes one or three values, got {}", other.len())));
        }
    };
    let mut mi = MaxImpact(s.max_impact);
    t.apply("scoring", "max_impact", max_impact.map(MaxImpact), &mut mi);
    s.max_impact = mi.0;
    t.apply("scoring", "aoi_total_changes_only", o.aoi_total_changes_only, &mut s.aoi_total_changes_only);
    let mut eta = EtaName(s.eta_source);
    t.apply("scoring", "eta_source", o.eta_source.map(|e| EtaName(e.into())), &mut eta);
    s.eta_source = eta.0;

    let a = &mut s.assessment;
    t.apply("scoring.assessment", "excellent_below", o.excellent_below, &mut a.excellent_below);
    t.apply("scoring.assessment", "good_below", o.good_below, &mut a.good_below);
    t.apply("scoring.assessment", "fair_below", o.fair_below, &mut a.fair_below);
    t.apply("scoring.assessment", "mastery_at", o.mastery_at, &mut a.mastery_at);
    t.apply("scoring.assessment", "developing_at", o.developing_at, &mut a.developing_at);

    let (mut w, mut h, mut up) = (file.screen.width(), file.screen.height(), file.screen.y_up());
    t.apply("screen", "width_px", o.screen_width, &mut w);
    t.apply("screen", "height_px", o.screen_height, &mut h);
    t.apply("screen", "y_up", o.y_up, &mut up);
    let geometry = ScreenGeometry::new(w, h, up).map_err(|e| Error::Config(e.to_string()))?;

    let mut drop_oob = file.ingest.drop_out_of_bounds;
    t.apply("ingest", "drop_out_of_bounds", o.drop_out_of_bounds, &mut drop_oob);

    s.validate().map_err(|e| Error::Config(e.to_string()))?;
    for (key, value, source) in &t.log {
        let from = match source {
            Source::Default => "default",
            Source::File => "config file",
            Source::Flag => "command line",
        };
        log::info!("{key} = {value} ({from})");
    }
    Ok(Settings { scoring: s, geometry, cleaning: CleaningOptions { drop_out_of_bounds: drop_oob } })
}

#[derive(Clone)]
struct MaxImpact([f64; 3]);

impl Display for MaxImpact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Clone)]
struct EtaName(EtaSource);

impl Display for EtaName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self.0 {
            EtaSource::Temporal => "temporal",
            EtaSource::AoiDwell => "aoi_dwell",
        })
    }
}

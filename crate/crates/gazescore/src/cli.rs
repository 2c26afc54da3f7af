//! `gazescore analyze | validate | synth`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gazescore_core::ingest::{Level, SessionSet};
use gazescore_core::pipeline::{analyze_student, StudentAnalysis};
use gazescore_core::synth::{generate_session, generate_table_fixture, SynthError, SynthProfile};
use gazescore_core::validation::CalibrationLabel;

use crate::config::{resolve, Overrides, Settings};
use crate::csvio::{discover_level_files, level_csv_bytes, level_file_name, load_level_csv};
use crate::error::{exit, Error, Result};
use crate::plot;
use crate::report::{build_report, to_json_bytes, ValidationBlock};

#[derive(Debug, Parser)]
#[command(name = "gazescore", version, about = "Gaze-based attention scoring for serious-game sessions")]
pub struct Cli {
    /// TOML file with [scoring], [screen] and [ingest] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// More logging; repeat for debug output.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score level files and write the report and plot tables.
    Analyze(AnalyzeArgs),
    /// Compare level scores with in-game accuracy.
    Validate(ValidateArgs),
    /// Write synthetic level files.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Level files (`<student>_level<n>.csv`) or directories holding them.
    #[arg(long = "in", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Only this student.
    #[arg(long)]
    pub student: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Only this level.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub level: Option<u8>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// The three-level case-study student.
    PaperTables,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum, conflicts_with = "profile")]
    pub fixture: Option<Fixture>,
    /// TOML profile; flags below override its values.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub student: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub level: Option<u8>,
    #[arg(long)]
    pub duration_ms: Option<i64>,
    #[arg(long)]
    pub sample_interval_ms: Option<i64>,
    /// Percent of time in the stimulus quadrants.
    #[arg(long)]
    pub sf_pct: Option<f64>,
    /// Fraction of time inside an AoI.
    #[arg(long)]
    pub aoi_share: Option<f64>,
    #[arg(long)]
    pub objects: Option<u64>,
    /// Comma-separated engagement spans in ms.
    #[arg(long, value_delimiter = ',')]
    pub periods: Option<Vec<i64>>,
    #[arg(long)]
    pub clicks: Option<u64>,
    #[arg(long)]
    pub answers: Option<u64>,
    #[arg(long)]
    pub click_accuracy: Option<f64>,
    #[arg(long)]
    pub answer_accuracy: Option<f64>,
    #[arg(long)]
    pub noise_px: Option<f64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    // a second call in the same process keeps the first logger
    let _ = env_logger::Builder::new().filter_level(level).format_timestamp(None).parse_default_env().try_init();

    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(&cli, a),
        Command::Validate(a) => cmd_validate(&cli, a),
        Command::Synth(a) => cmd_synth(&cli, a),
    };
    match result {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn require_out(cli: &Cli) -> Result<&Path> {
    cli.out.as_deref().ok_or_else(|| Error::Usage("--out <DIR> is required for this command".into()))
}

fn load_sessions(inputs: &Inputs, level: Option<Level>, settings: &Settings) -> Result<SessionSet> {
    let files = discover_level_files(&inputs.inputs)?;
    let mut set = SessionSet::default();
    for (student, lvl, path) in files {
        if inputs.student.as_deref().is_some_and(|s| s != student) || level.is_some_and(|l| l != lvl) {
            continue;
        }
        let (session, _) = load_level_csv(&path, lvl, &student, settings.geometry, settings.cleaning)?;
        set.insert(session).map_err(|e| Error::Data(e.to_string()))?;
    }
    if set.is_empty() {
        return Err(Error::Data("no matching level files found".into()));
    }
    Ok(set)
}

fn analyze_all(set: &SessionSet, settings: &Settings, check_levels: bool) -> Vec<StudentAnalysis> {
    set.students()
        .into_iter()
        .filter_map(|s| {
            if check_levels {
                let missing = set.missing_levels(s);
                if !missing.is_empty() {
                    let names: Vec<String> = missing.iter().map(|l| l.to_string()).collect();
                    log::warn!("student {s}: no data for level(s) {}", names.join(", "));
                }
            }
            analyze_student(set, s, &settings.scoring)
        })
        .collect()
}

/// Writes every file to a temporary name first and renames only once all
/// of them are on disk.
fn write_outputs(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
        tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
        staged.push((tmp, dir.join(name)));
    }
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| Error::io(&target, e.error))?;
        log::info!("wrote {}", target.display());
    }
    Ok(())
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<()> {
    let out = require_out(cli)?;
    let settings = resolve(cli.config.as_deref(), &args.overrides)?;
    let level = args.level.map(|l| Level::try_from(l).expect("range-checked by the parser"));
    let set = load_sessions(&args.inputs, level, &settings)?;

    let mut files = Vec::new();
    for analysis in analyze_all(&set, &settings, level.is_none()) {
        let id = &analysis.student_id;
        for l in &analysis.levels {
            for v in &l.violations {
                log::warn!("student {id} level {}: constraint violated: {v:?}", l.level);
            }
            let accuracy = l.game.accuracy_pct().map_or("n/a".to_string(), |a| format!("{a:.1}"));
            println!("{id} level {}: score {:.1}, accuracy {accuracy}", l.level, l.score.final_score);
            let stem = format!("{id}_level{}", l.level.number());
            files.push((format!("{stem}_samples.csv"), plot::samples_csv(l)));
            files.push((format!("{stem}_periods.csv"), plot::periods_csv(l)));
        }
        files.push((format!("{id}_summary.csv"), plot::summary_csv(&analysis)));
        files.push((format!("{id}_report.json"), to_json_bytes(&build_report(&analysis))));
    }
    write_outputs(out, &files)
}

#[derive(Debug, Serialize)]
struct Pair {
    level: u8,
    model: f64,
    truth: f64,
    diff: f64,
    calibration: Option<CalibrationLabel>,
}

#[derive(Debug, Serialize)]
struct ValidationDoc {
    student_id: String,
    pairs: Vec<Pair>,
    validation: ValidationBlock,
}

fn cmd_validate(cli: &Cli, args: &ValidateArgs) -> Result<()> {
    let settings = resolve(cli.config.as_deref(), &args.overrides)?;
    let set = load_sessions(&args.inputs, None, &settings)?;
    let students = set.students();
    if students.len() > 1 {
        return Err(Error::Data(format!("inputs cover several students ({}); select one with --student", students.join(", "))));
    }
    let analysis = analyze_all(&set, &settings, true).remove(0);
    let report = analysis
        .validation()
        .map_err(|e| Error::Data(format!("student {}: no level has game events to validate against ({e})", analysis.student_id)))?;
    if report.n < 2 {
        log::warn!("only {} level(s) with ground truth: correlations are undefined", report.n);
    }
    let r1 = |v: f64| (v * 10.0).round() / 10.0;
    let pairs = analysis
        .levels
        .iter()
        .filter_map(|l| {
            let truth = l.game.accuracy_pct()?;
            Some(Pair {
                level: l.level.number(),
                model: r1(l.score.final_score),
                truth: r1(truth),
                diff: r1((l.score.final_score - truth).abs()),
                calibration: l.assessment.calibration,
            })
        })
        .collect();
    let doc = ValidationDoc { student_id: analysis.student_id.clone(), pairs, validation: ValidationBlock::from(&report) };
    let bytes = to_json_bytes(&doc);
    std::io::stdout().write_all(&bytes).map_err(|e| Error::io("<stdout>", e))?;
    if let Some(out) = cli.out.as_deref() {
        write_outputs(out, &[(format!("{}_validation.json", analysis.student_id), bytes)])?;
    }
    Ok(())
}

fn synth_error(e: SynthError) -> Error {
    Error::Config(e.to_string())
}

fn profile_from(args: &SynthArgs) -> Result<SynthProfile> {
    let mut p = match &args.profile {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))?
        }
        None => SynthProfile::default(),
    };
    fn set<T: Clone>(flag: &Option<T>, target: &mut T) {
        if let Some(v) = flag {
            *target = v.clone();
        }
    }
    set(&args.seed, &mut p.seed);
    set(&args.student, &mut p.student_id);
    if let Some(l) = args.level {
        p.level = Level::try_from(l).expect("range-checked by the parser");
    }
    set(&args.duration_ms, &mut p.duration_ms);
    set(&args.sample_interval_ms, &mut p.sample_interval_ms);
    set(&args.sf_pct, &mut p.target_sf_pct);
    set(&args.aoi_share, &mut p.target_aoi_dwell_share);
    set(&args.objects, &mut p.n_objects);
    set(&args.periods, &mut p.engagement_period_lengths_ms);
    set(&args.clicks, &mut p.n_clicks);
    set(&args.answers, &mut p.n_answers);
    set(&args.click_accuracy, &mut p.event_accuracy.0);
    set(&args.answer_accuracy, &mut p.event_accuracy.1);
    set(&args.noise_px, &mut p.noise_px);
    Ok(p)
}

fn cmd_synth(cli: &Cli, args: &SynthArgs) -> Result<()> {
    let out = require_out(cli)?;
    let sessions = match args.fixture {
        Some(Fixture::PaperTables) => generate_table_fixture().into_sessions().collect(),
        None => vec![generate_session(&profile_from(args)?).map_err(synth_error)?],
    };
    let files: Vec<(String, Vec<u8>)> = sessions.iter().map(|s| (level_file_name(&s.student_id, s.level), level_csv_bytes(s))).collect();
    write_outputs(out, &files)?;
    for (name, _) in &files {
        println!("{}", out.join(name).display());
    }
    Ok(())
}

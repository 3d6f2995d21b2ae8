//! The `gnss-sentry` command line.
//!
//! Settings resolve as flag > `GNSS_SENTRY_SEED` (seed only) > config file >
//! built-in default. The config file is flat `key = value` text; `#` starts a
//! comment.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::detector::{
    calibrate_threshold, detect_stream, write_verdicts_csv, DetectionConfig, ResidualMode,
    DEFAULT_GNSS_POSITION_ERROR_M,
};
use crate::error::{Error, Result};
use crate::geodesy::EarthModel;
use crate::lstm::{
    evaluate, load_model, save_model, train, write_history_csv, write_predictions_csv, EvalOptions, RmseMode,
    TrainConfig,
};
use crate::spoofsim::{inject_spoof, parse_kml_route, read_route_csv, synth_deviation, Route, SpoofScenario};
use crate::streams::{
    fit_norm, load_can_csv, load_frames_csv, load_gnss_csv, load_imu_csv, split, synchronize, write_frames_csv,
    write_gnss_csv, FeatureSet, SplitSizes,
};

pub const SEED_ENV: &str = "GNSS_SENTRY_SEED";

#[derive(Debug, Parser)]
#[command(name = "gnss-sentry", version, about = "GNSS spoofing detection from CAN/IMU odometry")]
struct Cli {
    /// key=value settings file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Align GNSS, CAN and IMU logs into labelled frames
    Sync(SyncArgs),
    /// Train the distance predictor and calibrate its error bound
    Train(TrainArgs),
    /// Score a model on a frames file
    Eval(EvalArgs),
    /// Write a spoofed copy of a GNSS log
    Attack(AttackArgs),
    /// Run the detector over a drive
    Detect(DetectArgs),
    /// Summarize the outputs in a directory
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct SyncArgs {
    #[arg(long)]
    gnss: Option<PathBuf>,
    #[arg(long)]
    can: Option<PathBuf>,
    #[arg(long)]
    imu: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// comma-separated: can_speed, steering, accel_fwd, gnss_speed, prev_distance
    #[arg(long)]
    features: Option<String>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    frames: Option<PathBuf>,
    #[arg(long)]
    out_model: PathBuf,
    #[arg(long)]
    out_history: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// replace an existing model file
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    frames: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// sqrt(sum r^2) / N instead of the usual root mean square
    #[arg(long = "paper-literal-rmse")]
    sum_root_rmse: bool,
}

#[derive(Debug, Args)]
struct AttackArgs {
    #[arg(long)]
    gnss: Option<PathBuf>,
    /// spoofed route, .kml or .csv (lat_deg,lon_deg)
    #[arg(long, conflicts_with = "synthetic_rate", required_unless_present = "synthetic_rate")]
    route: Option<PathBuf>,
    /// cross-track drift in meters per step
    #[arg(long)]
    synthetic_rate: Option<f64>,
    #[arg(long)]
    onset: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    gnss: Option<PathBuf>,
    #[arg(long)]
    can: Option<PathBuf>,
    #[arg(long)]
    imu: Option<PathBuf>,
    #[arg(long)]
    gnss_error_m: Option<f64>,
    /// overrides the error bound stored in the model
    #[arg(long)]
    prediction_error_m: Option<f64>,
    /// diff or raw
    #[arg(long)]
    residual_mode: Option<String>,
    /// known attack onset, for delay and false-alarm statistics
    #[arg(long)]
    onset: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    in_dir: PathBuf,
}

/// Resolved settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct AppConfig {
    pub earth_radius_m: f64,
    pub gnss: Option<PathBuf>,
    pub can: Option<PathBuf>,
    pub imu: Option<PathBuf>,
    pub frames: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub features: FeatureSet,
    pub train: TrainConfig,
    pub n_train: Option<usize>,
    pub n_val: Option<usize>,
    pub gnss_error_m: f64,
    pub prediction_error_m: Option<f64>,
    pub residual_mode: ResidualMode,
    pub histogram_bin_m: f64,
    pub out_dir: Option<PathBuf>,
}

impl Default for AppConfig {
    fn default() -> Self {
        AppConfig {
            earth_radius_m: crate::geodesy::MEAN_EARTH_RADIUS_M,
            gnss: None,
            can: None,
            imu: None,
            frames: None,
            model: None,
            features: FeatureSet::default(),
            train: TrainConfig::default(),
            n_train: None,
            n_val: None,
            gnss_error_m: DEFAULT_GNSS_POSITION_ERROR_M,
            prediction_error_m: None,
            residual_mode: ResidualMode::Difference,
            histogram_bin_m: EvalOptions::default().bin_width_m,
            out_dir: None,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: u64) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Format {
        line,
        message: format!("bad value `{value}` for `{key}`: {e}"),
    })
}

impl AppConfig {
    /// Parses `key = value` lines over the defaults. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = AppConfig::default();
        let mut seen = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx as u64 + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Format {
                line,
                message: format!("expected key = value, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(prev) = seen.insert(key.to_string(), line) {
                return Err(Error::Format {
                    line,
                    message: format!("`{key}` already set on line {prev}"),
                });
            }
            let t = &mut cfg.train;
            match key {
                "seed" => t.seed = parse_value(key, value, line)?,
                "earth_radius_m" => cfg.earth_radius_m = parse_value(key, value, line)?,
                "gnss" => cfg.gnss = Some(value.into()),
                "can" => cfg.can = Some(value.into()),
                "imu" => cfg.imu = Some(value.into()),
                "frames" => cfg.frames = Some(value.into()),
                "model" => cfg.model = Some(value.into()),
                "out_dir" => cfg.out_dir = Some(value.into()),
                "features" => {
                    cfg.features = FeatureSet::parse_list(value).map_err(|e| Error::Format {
                        line,
                        message: e.to_string(),
                    })?
                }
                "hidden_size" => t.hidden_size = parse_value(key, value, line)?,
                "epochs" => t.epochs = parse_value(key, value, line)?,
                "batch_size" => t.batch_size = parse_value(key, value, line)?,
                "learning_rate" => t.learning_rate = parse_value(key, value, line)?,
                "window_len" => t.window_len = parse_value(key, value, line)?,
                "adam_beta1" => t.adam_beta1 = parse_value(key, value, line)?,
                "adam_beta2" => t.adam_beta2 = parse_value(key, value, line)?,
                "adam_eps" => t.adam_eps = parse_value(key, value, line)?,
                "n_train" => cfg.n_train = Some(parse_value(key, value, line)?),
                "n_val" => cfg.n_val = Some(parse_value(key, value, line)?),
                "gnss_error_m" => cfg.gnss_error_m = parse_value(key, value, line)?,
                "prediction_error_m" => cfg.prediction_error_m = Some(parse_value(key, value, line)?),
                "residual_mode" => cfg.residual_mode = parse_value(key, value, line)?,
                "histogram_bin_m" => cfg.histogram_bin_m = parse_value(key, value, line)?,
                other => {
                    return Err(Error::Format {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Format { line, message } => Error::Malformed(format!("{}:{line}: {message}", path.display())),
            other => other,
        })
    }

    fn earth(&self) -> Result<EarthModel> {
        EarthModel::new(self.earth_radius_m)
    }

    fn split_sizes(&self, len: usize) -> SplitSizes {
        match self.n_train {
            Some(n_train) => SplitSizes {
                n_train,
                n_val: self.n_val,
            },
            None => SplitSizes::default_for(len),
        }
    }
}

/// Flag, then `GNSS_SENTRY_SEED`, then the configured value.
fn resolve_seed(flag: Option<u64>, env: Option<OsString>, configured: u64) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => {
            let s = v.to_string_lossy();
            s.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{SEED_ENV}=`{s}` is not an unsigned integer")))
        }
        None => Ok(configured),
    }
}

fn required(flag: Option<PathBuf>, configured: &Option<PathBuf>, name: &str) -> Result<PathBuf> {
    flag.or_else(|| configured.clone())
        .ok_or_else(|| Error::invalid(format!("missing --{name} (or `{}` in the config file)", name.replace('-', "_"))))
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => ensure_dir(dir),
        _ => Ok(()),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    ensure_parent(path)?;
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn cmd_sync(args: SyncArgs, cfg: &AppConfig) -> Result<String> {
    let gnss = load_gnss_csv(required(args.gnss, &cfg.gnss, "gnss")?)?;
    let can = load_can_csv(required(args.can, &cfg.can, "can")?)?;
    let imu = load_imu_csv(required(args.imu, &cfg.imu, "imu")?)?;
    let features = match args.features {
        Some(list) => FeatureSet::parse_list(&list)?,
        None => cfg.features.clone(),
    };
    let frames = synchronize(&gnss, &can, &imu, &features, &cfg.earth()?)?;
    write_frames_csv(create(&args.out)?, &frames, &features)?;
    Ok(format!("wrote {} frames to {}", frames.len(), args.out.display()))
}

fn cmd_train(args: TrainArgs, cfg: &AppConfig) -> Result<String> {
    if args.out_model.exists() && !args.force {
        return Err(Error::invalid(format!(
            "{} already exists; pass --force to overwrite it",
            args.out_model.display()
        )));
    }
    let mut config = cfg.train.clone();
    config.seed = resolve_seed(args.seed, std::env::var_os(SEED_ENV), config.seed)?;
    let (features, frames) = load_frames_csv(required(args.frames, &cfg.frames, "frames")?)?;
    let (train_frames, val_frames) = split(&frames, cfg.split_sizes(frames.len()))?;
    let norm = fit_norm(&frames, train_frames.len(), &features)?;
    let (mut model, report) = train(train_frames, val_frames, &norm, &config)?;
    let calibration = calibrate_threshold(&model, val_frames, cfg.gnss_error_m)?;
    model.calibrated_prediction_error_m = Some(calibration.prediction_error_m());
    write_history_csv(create(&args.out_history)?, &report.history)?;
    ensure_parent(&args.out_model)?;
    save_model(&model, &args.out_model)?;
    Ok(format!(
        "trained {} epochs on {} frames (validation {}): train MAE {:.6} -> {:.6} (normalized), max validation error {:.4} m, gamma {:.4} m",
        config.epochs,
        train_frames.len(),
        val_frames.len(),
        report.initial_train_mae,
        report.final_train_mae,
        calibration.prediction_error_m(),
        calibration.threshold_gamma_m()
    ))
}

fn cmd_eval(args: EvalArgs, cfg: &AppConfig) -> Result<String> {
    let model = load_model(required(args.model, &cfg.model, "model")?)?;
    let (features, frames) = load_frames_csv(required(args.frames, &cfg.frames, "frames")?)?;
    let out_dir = required(args.out_dir, &cfg.out_dir, "out-dir")?;
    if !frames.is_empty() && &features != model.feature_set() {
        return Err(Error::invalid(format!(
            "frames carry features {:?} but the model expects {:?}",
            Vec::from(features),
            Vec::from(model.feature_set().clone())
        )));
    }
    let opts = EvalOptions {
        rmse_mode: if args.sum_root_rmse {
            RmseMode::SumRoot
        } else {
            RmseMode::Standard
        },
        bin_width_m: cfg.histogram_bin_m,
    };
    let eval = evaluate(&model, &frames, &opts)?;
    ensure_dir(&out_dir)?;
    write_json(&out_dir.join("metrics.json"), &eval.metrics)?;
    write_predictions_csv(create(&out_dir.join("predictions.csv"))?, &eval.predictions)?;
    eval.histogram.write_csv(create(&out_dir.join("error_histogram.csv"))?)?;
    let m = eval.metrics;
    Ok(format!(
        "{} frames: RMSE {:.4} m, MAE {:.4} m, max abs error {:.4} m",
        m.count, m.rmse_m, m.mae_m, m.max_abs_err_m
    ))
}

fn load_route(path: &Path) -> Result<Route> {
    let is_kml = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("kml"));
    if is_kml {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_kml_route(&text)
    } else {
        read_route_csv(File::open(path).map_err(|e| Error::io(path, e))?)
    }
}

fn cmd_attack(args: AttackArgs, cfg: &AppConfig) -> Result<String> {
    let truth = load_gnss_csv(required(args.gnss, &cfg.gnss, "gnss")?)?;
    let earth = cfg.earth()?;
    let spoofed = match (args.route, args.synthetic_rate) {
        (Some(route), _) => {
            let scenario = SpoofScenario::new(truth, load_route(&route)?, args.onset)?;
            inject_spoof(&scenario, &earth)?
        }
        (None, Some(rate)) => synth_deviation(&truth, args.onset, rate, &earth)?,
        (None, None) => return Err(Error::invalid("pass --route or --synthetic-rate")),
    };
    write_gnss_csv(create(&args.out)?, &spoofed)?;
    Ok(format!(
        "wrote {} fixes ({} spoofed from index {}) to {}",
        spoofed.len(),
        spoofed.len() - args.onset,
        args.onset,
        args.out.display()
    ))
}

#[derive(Serialize, Deserialize)]
struct DetectSummary {
    steps: usize,
    alarm_count: usize,
    first_alarm_index: Option<usize>,
    detection_delay_steps: Option<usize>,
    false_alarm_count: usize,
    false_alarm_rate: f64,
    mean_latency_us: f64,
    max_latency_us: f64,
    budget_ok: bool,
    threshold_gamma_m: f64,
    gnss_position_error_m: f64,
    prediction_error_m: f64,
    residual_mode: ResidualMode,
    onset: Option<usize>,
}

fn cmd_detect(args: DetectArgs, cfg: &AppConfig) -> Result<String> {
    let model = load_model(required(args.model, &cfg.model, "model")?)?;
    let gnss = load_gnss_csv(required(args.gnss, &cfg.gnss, "gnss")?)?;
    let can = load_can_csv(required(args.can, &cfg.can, "can")?)?;
    let imu = load_imu_csv(required(args.imu, &cfg.imu, "imu")?)?;
    let out_dir = required(args.out_dir, &cfg.out_dir, "out-dir")?;
    let prediction_error_m = args
        .prediction_error_m
        .or(cfg.prediction_error_m)
        .or(model.calibrated_prediction_error_m)
        .ok_or_else(|| Error::invalid("model carries no calibrated prediction error; pass --prediction-error-m"))?;
    let residual_mode = match args.residual_mode {
        Some(s) => s.parse()?,
        None => cfg.residual_mode,
    };
    let config = DetectionConfig::new(args.gnss_error_m.unwrap_or(cfg.gnss_error_m), prediction_error_m)?
        .with_residual_mode(residual_mode);
    let run = detect_stream(&model, &gnss, &can, &imu, &config, &cfg.earth()?, args.onset)?;
    ensure_dir(&out_dir)?;
    write_verdicts_csv(create(&out_dir.join("verdicts.csv"))?, &run.verdicts)?;
    let r = &run.report;
    write_json(
        &out_dir.join("summary.json"),
        &DetectSummary {
            steps: r.steps,
            alarm_count: r.alarm_count,
            first_alarm_index: r.first_alarm_index,
            detection_delay_steps: r.detection_delay_steps,
            false_alarm_count: r.false_alarm_count,
            false_alarm_rate: r.false_alarm_rate,
            mean_latency_us: r.mean_latency_us,
            max_latency_us: r.max_latency_us,
            budget_ok: r.budget_ok,
            threshold_gamma_m: config.threshold_gamma_m(),
            gnss_position_error_m: config.gnss_position_error_m(),
            prediction_error_m: config.prediction_error_m(),
            residual_mode,
            onset: args.onset,
        },
    )?;
    Ok(format!(
        "{} steps, {} alarms, first alarm {}, gamma {:.4} m",
        r.steps,
        r.alarm_count,
        r.first_alarm_index.map_or("none".to_string(), |i| format!("at step {i}")),
        config.threshold_gamma_m()
    ))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<T>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn history_summary(path: &Path) -> Result<Option<(usize, f64, f64)>> {
    if !path.exists() {
        return Ok(None);
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let mut last = None;
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Malformed(format!("{}: bad history row {}", path.display(), rows + 2)))
        };
        last = Some((num(1)?, num(2)?));
        rows += 1;
    }
    Ok(last.map(|(t, v)| (rows, t, v)))
}

fn cmd_report(args: ReportArgs) -> Result<String> {
    let dir = &args.in_dir;
    if !dir.is_dir() {
        return Err(Error::invalid(format!("{} is not a directory", dir.display())));
    }
    let history = history_summary(&dir.join("history.csv"))?;
    let metrics: Option<crate::lstm::EvalMetrics> = read_json(&dir.join("metrics.json"))?;
    let summary: Option<DetectSummary> = read_json(&dir.join("summary.json"))?;
    if history.is_none() && metrics.is_none() && summary.is_none() {
        return Err(Error::invalid(format!(
            "{} holds none of history.csv, metrics.json, summary.json",
            dir.display()
        )));
    }
    let mut out = String::new();
    let _ = writeln!(out, "gnss-sentry report: {}", dir.display());
    if let Some((epochs, train_mae, val_mae)) = history {
        let _ = writeln!(out, "\ntraining");
        let _ = writeln!(out, "  epochs                 {epochs}");
        let _ = writeln!(out, "  final train MAE        {train_mae:.6} (normalized)");
        let _ = writeln!(out, "  final validation MAE   {val_mae:.6} (normalized)");
    }
    if let Some(m) = metrics {
        let mode = match m.rmse_mode {
            RmseMode::Standard => "standard",
            RmseMode::SumRoot => "sum-root",
        };
        let _ = writeln!(out, "\nprediction");
        let _ = writeln!(out, "  frames                 {}", m.count);
        let _ = writeln!(out, "  {:<23}{:.4} m", format!("RMSE ({mode})"), m.rmse_m);
        let _ = writeln!(out, "  MAE                    {:.4} m", m.mae_m);
        let _ = writeln!(out, "  max abs error          {:.4} m", m.max_abs_err_m);
        let _ = writeln!(out, "  min abs error          {:.4} m", m.min_abs_err_m);
    }
    if let Some(s) = summary {
        let opt = |v: Option<usize>| v.map_or("none".to_string(), |i| i.to_string());
        let _ = writeln!(out, "\ndetection");
        let _ = writeln!(
            out,
            "  gamma                  {:.4} m ({} + {:.4})",
            s.threshold_gamma_m, s.gnss_position_error_m, s.prediction_error_m
        );
        let _ = writeln!(out, "  steps                  {}", s.steps);
        let _ = writeln!(out, "  alarms                 {}", s.alarm_count);
        let _ = writeln!(out, "  attack onset           {}", opt(s.onset));
        let _ = writeln!(out, "  first alarm            {}", opt(s.first_alarm_index));
        let _ = writeln!(out, "  detection delay        {}", opt(s.detection_delay_steps));
        let _ = writeln!(
            out,
            "  false alarms           {} (rate {:.6})",
            s.false_alarm_count, s.false_alarm_rate
        );
        let _ = writeln!(
            out,
            "  latency                mean {:.1} us, max {:.1} us, within budget: {}",
            s.mean_latency_us,
            s.max_latency_us,
            if s.budget_ok { "yes" } else { "no" }
        );
    }
    let path = dir.join("report.txt");
    fs::write(&path, &out).map_err(|e| Error::io(&path, e))?;
    Ok(out.trim_end().to_string())
}

fn dispatch(cli: Cli) -> Result<String> {
    let cfg = match &cli.config {
        Some(path) => AppConfig::load(path)?,
        None => AppConfig::default(),
    };
    match cli.command {
        Command::Sync(a) => cmd_sync(a, &cfg),
        Command::Train(a) => cmd_train(a, &cfg),
        Command::Eval(a) => cmd_eval(a, &cfg),
        Command::Attack(a) => cmd_attack(a, &cfg),
        Command::Detect(a) => cmd_detect(a, &cfg),
        Command::Report(a) => cmd_report(a),
    }
}

/// Runs one command and returns the process exit status: 0 on success,
/// 1 on a pipeline error, 2 on a usage error. Failures print one line to
/// standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(msg) => {
            println!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}

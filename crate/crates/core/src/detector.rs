//! Threshold calibration and per-step spoofing decisions.
//!
//! At every GNSS epoch the predictor estimates the distance the vehicle will
//! cover before the next fix, using only CAN/IMU-derived features. When the
//! next fix arrives, the great-circle distance actually reported by the
//! receiver is compared against that estimate; a discrepancy larger than
//! `γ = gnss_position_error + max_prediction_error` raises an alarm.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::{haversine_distance, EarthModel};
use crate::lstm::{predict_frames, StepPredictor};
use crate::streams::{synchronize, CanSample, GnssFix, ImuSample, SyncedFrame};

/// Horizontal GNSS error after post-processing, meters.
pub const DEFAULT_GNSS_POSITION_ERROR_M: f64 = 1.5;

/// One GNSS epoch at 10 Hz.
pub const LATENCY_BUDGET_US: f64 = 100_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualMode {
    /// `|observed − predicted|`.
    #[default]
    Difference,
    /// The observed step distance on its own.
    RawObserved,
}

impl std::str::FromStr for ResidualMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diff" | "difference" => Ok(ResidualMode::Difference),
            "raw" | "raw_observed" => Ok(ResidualMode::RawObserved),
            other => Err(Error::invalid(format!("unknown residual mode `{other}` (expected diff or raw)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    gnss_position_error_m: f64,
    prediction_error_m: f64,
    residual_mode: ResidualMode,
}

impl DetectionConfig {
    pub fn new(gnss_position_error_m: f64, prediction_error_m: f64) -> Result<Self> {
        for (name, v) in [
            ("gnss_position_error_m", gnss_position_error_m),
            ("prediction_error_m", prediction_error_m),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(DetectionConfig {
            gnss_position_error_m,
            prediction_error_m,
            residual_mode: ResidualMode::Difference,
        })
    }

    pub fn with_residual_mode(mut self, mode: ResidualMode) -> Self {
        self.residual_mode = mode;
        self
    }

    pub fn gnss_position_error_m(&self) -> f64 {
        self.gnss_position_error_m
    }

    pub fn prediction_error_m(&self) -> f64 {
        self.prediction_error_m
    }

    pub fn residual_mode(&self) -> ResidualMode {
        self.residual_mode
    }

    /// γ, meters.
    pub fn threshold_gamma_m(&self) -> f64 {
        self.gnss_position_error_m + self.prediction_error_m
    }
}

/// Decision for the step that arrives at fix `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionVerdict {
    /// Index of the fix that completes the step.
    pub step: usize,
    /// Time of that fix.
    pub t: f64,
    pub predicted_m: f64,
    pub observed_m: f64,
    pub residual_m: f64,
    pub threshold_m: f64,
    pub alarm: bool,
    pub latency_us: f64,
}

/// γ from the largest absolute prediction error over attack-free frames.
pub fn calibrate_threshold<P: StepPredictor + ?Sized>(
    model: &P,
    clean_frames: &[SyncedFrame],
    gnss_position_error_m: f64,
) -> Result<DetectionConfig> {
    if clean_frames.is_empty() {
        return Err(Error::invalid("calibration needs at least one clean frame"));
    }
    let max_err = predict_frames(model, clean_frames)?
        .iter()
        .map(|p| p.abs_error())
        .fold(0.0, f64::max);
    DetectionConfig::new(gnss_position_error_m, max_err)
}

struct Judgement {
    observed_m: f64,
    residual_m: f64,
    alarm: bool,
}

fn judge(predicted_m: f64, fix: &GnssFix, next: &GnssFix, config: &DetectionConfig, earth: &EarthModel) -> Result<Judgement> {
    if next.t.partial_cmp(&fix.t) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::invalid(format!(
            "fix times must increase (t={} then t={})",
            fix.t, next.t
        )));
    }
    if !predicted_m.is_finite() {
        return Err(Error::invalid(format!("predicted distance {predicted_m} is not finite")));
    }
    let observed_m = haversine_distance(&fix.pos, &next.pos, earth)?;
    let residual_m = match config.residual_mode {
        ResidualMode::Difference => (observed_m - predicted_m).abs(),
        ResidualMode::RawObserved => observed_m,
    };
    Ok(Judgement {
        observed_m,
        residual_m,
        alarm: residual_m > config.threshold_gamma_m(),
    })
}

/// Judges a single step from `fix` to `next`. `step` is the index of `next`
/// in its stream.
pub fn detect_step(
    step: usize,
    predicted_m: f64,
    fix: &GnssFix,
    next: &GnssFix,
    config: &DetectionConfig,
    earth: &EarthModel,
) -> Result<DetectionVerdict> {
    let start = Instant::now();
    let j = judge(predicted_m, fix, next, config, earth)?;
    let latency_us = start.elapsed().as_secs_f64() * 1e6;
    Ok(DetectionVerdict {
        step,
        t: next.t,
        predicted_m,
        observed_m: j.observed_m,
        residual_m: j.residual_m,
        threshold_m: config.threshold_gamma_m(),
        alarm: j.alarm,
        latency_us,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub steps: usize,
    pub alarm_count: usize,
    pub first_alarm_index: Option<usize>,
    /// First alarm at or after the onset, minus the onset, in steps.
    pub detection_delay_steps: Option<usize>,
    /// Alarms on steps known to be clean (all steps when no onset is given).
    pub false_alarm_count: usize,
    pub false_alarm_rate: f64,
    pub mean_latency_us: f64,
    pub max_latency_us: f64,
    pub budget_ok: bool,
    /// `(t, residual_m)` for plotting.
    #[serde(skip)]
    pub residuals: Vec<(f64, f64)>,
}

/// Summarizes a verdict sequence. With `truth_onset`, steps arriving before
/// the onset are clean; without it, every step is.
pub fn detection_report(verdicts: &[DetectionVerdict], truth_onset: Option<usize>) -> DetectionReport {
    let is_clean = |v: &DetectionVerdict| truth_onset.is_none_or(|onset| v.step < onset);
    let clean_steps = verdicts.iter().filter(|v| is_clean(v)).count();
    let false_alarm_count = verdicts.iter().filter(|v| v.alarm && is_clean(v)).count();
    let detection_delay_steps = truth_onset.and_then(|onset| {
        verdicts
            .iter()
            .find(|v| v.alarm && v.step >= onset)
            .map(|v| v.step - onset)
    });
    let mean_latency_us = if verdicts.is_empty() {
        0.0
    } else {
        verdicts.iter().map(|v| v.latency_us).sum::<f64>() / verdicts.len() as f64
    };
    DetectionReport {
        steps: verdicts.len(),
        alarm_count: verdicts.iter().filter(|v| v.alarm).count(),
        first_alarm_index: verdicts.iter().find(|v| v.alarm).map(|v| v.step),
        detection_delay_steps,
        false_alarm_count,
        false_alarm_rate: if clean_steps == 0 {
            0.0
        } else {
            false_alarm_count as f64 / clean_steps as f64
        },
        mean_latency_us,
        max_latency_us: verdicts.iter().map(|v| v.latency_us).fold(0.0, f64::max),
        budget_ok: mean_latency_us < LATENCY_BUDGET_US,
        residuals: verdicts.iter().map(|v| (v.t, v.residual_m)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamDetection {
    pub verdicts: Vec<DetectionVerdict>,
    pub report: DetectionReport,
}

/// Runs the detector over a recorded drive. Features come from CAN/IMU
/// aligned on the clock of the GNSS stream under test; observed distances
/// come from that GNSS stream. The first `W - 1` steps have no full window
/// and receive no verdict.
pub fn detect_stream<P: StepPredictor + ?Sized>(
    model: &P,
    gnss_under_test: &[GnssFix],
    can: &[CanSample],
    imu: &[ImuSample],
    config: &DetectionConfig,
    earth: &EarthModel,
    truth_onset: Option<usize>,
) -> Result<StreamDetection> {
    let frames = synchronize(gnss_under_test, can, imu, &model.features(), earth)?;
    let w = model.window_len();
    if w == 0 || frames.len() < w {
        return Err(Error::InsufficientFrames {
            needed: w.max(1),
            got: frames.len(),
        });
    }
    let mut verdicts = Vec::with_capacity(frames.len() + 1 - w);
    for i in w - 1..frames.len() {
        let start = Instant::now();
        let predicted_m = model.predict_step(&frames[i + 1 - w..=i])?;
        let j = judge(predicted_m, &gnss_under_test[i], &gnss_under_test[i + 1], config, earth)?;
        let latency_us = start.elapsed().as_secs_f64() * 1e6;
        verdicts.push(DetectionVerdict {
            step: i + 1,
            t: gnss_under_test[i + 1].t,
            predicted_m,
            observed_m: j.observed_m,
            residual_m: j.residual_m,
            threshold_m: config.threshold_gamma_m(),
            alarm: j.alarm,
            latency_us,
        });
    }
    let report = detection_report(&verdicts, truth_onset);
    Ok(StreamDetection { verdicts, report })
}

pub fn write_verdicts_csv<W: Write>(out: W, verdicts: &[DetectionVerdict]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let map = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(["step", "t", "predicted_m", "observed_m", "residual_m", "threshold_m", "alarm", "latency_us"])
        .map_err(map)?;
    for v in verdicts {
        w.write_record([
            v.step.to_string(),
            v.t.to_string(),
            v.predicted_m.to_string(),
            v.observed_m.to_string(),
            v.residual_m.to_string(),
            v.threshold_m.to_string(),
            u8::from(v.alarm).to_string(),
            v.latency_us.to_string(),
        ])
        .map_err(map)?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

//! Single-layer LSTM regressor for per-step traveled distance.
//!
//! The network reads a sliding window of `W` normalized feature rows (zero
//! initial state), and a dense head maps the final hidden state to the
//! normalized distance of the step leaving the window's last fix. Training
//! minimizes mean absolute error with Adam over shuffled mini-batches.

mod adam;
mod cell;
mod io;
mod metrics;
mod params;

use std::io::Write;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use adam::{adam_step, AdamConfig, AdamState};
pub use cell::{backward, forward, forward_batch, gather_steps, ForwardCache};
pub use io::{load_model, model_from_str, model_to_string, save_model, MODEL_FORMAT_VERSION};
pub use metrics::{mae, rmse, RmseMode};
pub use params::{Gate, LstmParams};

use crate::error::{Error, Result};
use crate::streams::{apply_norm, FeatureSet, NormStats, NormalizedFrame, SyncedFrame};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden_size: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub window_len: usize,
    pub seed: u64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden_size: 50,
            epochs: 100,
            batch_size: 50,
            learning_rate: 0.01,
            window_len: 10,
            seed: 42,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive, got {v}")))
            }
        };
        if self.hidden_size == 0 || self.batch_size == 0 || self.window_len == 0 {
            return Err(Error::invalid(format!(
                "hidden_size ({}), batch_size ({}) and window_len ({}) must be at least 1",
                self.hidden_size, self.batch_size, self.window_len
            )));
        }
        positive("learning_rate", self.learning_rate)?;
        positive("adam_eps", self.adam_eps)?;
        for (name, b) in [("adam_beta1", self.adam_beta1), ("adam_beta2", self.adam_beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1), got {b}")));
            }
        }
        Ok(())
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }
}

/// Everything needed to turn raw frames into distance predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmModel {
    pub params: LstmParams,
    pub norm: NormStats,
    pub config: TrainConfig,
    /// Largest absolute prediction error on attack-free data, meters.
    pub calibrated_prediction_error_m: Option<f64>,
}

impl LstmModel {
    pub fn feature_set(&self) -> &FeatureSet {
        &self.norm.features
    }

    pub fn check(&self) -> Result<()> {
        self.params.check_shapes()?;
        let f = self.norm.features.len();
        if self.params.input_size() != f
            || self.norm.feature_min.len() != f
            || self.norm.feature_max.len() != f
        {
            return Err(Error::Shape(format!(
                "model input size {} does not match {f} normalized features",
                self.params.input_size()
            )));
        }
        if self.params.hidden_size() != self.config.hidden_size {
            return Err(Error::Shape(format!(
                "hidden size {} disagrees with config {}",
                self.params.hidden_size(),
                self.config.hidden_size
            )));
        }
        if !self.params.is_finite() {
            return Err(Error::invalid("model parameters contain non-finite values"));
        }
        Ok(())
    }

    /// Prediction in normalized units for an already-normalized `W × F` window.
    pub fn predict_normalized(&self, window: &Array2<f64>) -> Result<f64> {
        Ok(forward(&self.params, window.view())?.0)
    }
}

/// Anything that predicts the distance (meters) of the step leaving the last
/// frame of a window of `window_len()` consecutive frames.
pub trait StepPredictor {
    fn window_len(&self) -> usize;

    /// Feature columns the predictor expects in each frame.
    fn features(&self) -> FeatureSet {
        FeatureSet::default()
    }

    fn predict_step(&self, window: &[SyncedFrame]) -> Result<f64>;
}

impl StepPredictor for LstmModel {
    fn window_len(&self) -> usize {
        self.config.window_len
    }

    fn features(&self) -> FeatureSet {
        self.norm.features.clone()
    }

    fn predict_step(&self, window: &[SyncedFrame]) -> Result<f64> {
        let w = self.config.window_len;
        let f = self.norm.features.len();
        if window.len() != w {
            return Err(Error::Shape(format!("window has {} frames, model expects {w}", window.len())));
        }
        let mut x = Array2::<f64>::zeros((w, f));
        for (row, frame) in x.outer_iter_mut().zip(window) {
            if frame.features.len() != f {
                return Err(Error::Shape(format!(
                    "frame at t={} has {} features, model expects {f}",
                    frame.t,
                    frame.features.len()
                )));
            }
            self.norm
                .normalize_features(&frame.features, row.into_slice().expect("row-major"));
        }
        Ok(self.norm.denormalize_label(self.predict_normalized(&x)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    /// Mean of the mini-batch losses over the epoch, normalized units.
    pub train_mae: f64,
    /// Validation MAE after the epoch, normalized units.
    pub val_mae: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub history: Vec<EpochStats>,
    /// Train MAE of the initial parameters, normalized units.
    pub initial_train_mae: f64,
    /// Train MAE of the final parameters, normalized units.
    pub final_train_mae: f64,
}

pub fn write_history_csv<W: Write>(out: W, history: &[EpochStats]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let map = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(["epoch", "train_mae", "val_mae"]).map_err(map)?;
    for h in history {
        w.write_record([h.epoch.to_string(), h.train_mae.to_string(), h.val_mae.to_string()])
            .map_err(map)?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

const EVAL_CHUNK: usize = 256;

fn window_ends(len: usize, window_len: usize) -> Vec<usize> {
    if len < window_len {
        Vec::new()
    } else {
        (window_len - 1..len).collect()
    }
}

fn batch_mae(params: &LstmParams, frames: &[NormalizedFrame], ends: &[usize], window_len: usize) -> Result<f64> {
    let mut sum = 0.0;
    for chunk in ends.chunks(EVAL_CHUNK) {
        let steps = gather_steps(|i| &frames[i].features[..], chunk, window_len, params.input_size());
        let cache = forward_batch(params, &steps)?;
        sum += cache
            .predictions()
            .iter()
            .zip(chunk)
            .map(|(p, &e)| (p - frames[e].label).abs())
            .sum::<f64>();
    }
    Ok(sum / ends.len() as f64)
}

/// Mini-batch BPTT with Adam on MAE loss.
///
/// `norm` must have been fitted on `train` only. Both frame sets are
/// windowed independently; every window of `window_len` consecutive frames
/// is one sample labelled with its last frame's distance.
pub fn train(
    train: &[SyncedFrame],
    val: &[SyncedFrame],
    norm: &NormStats,
    config: &TrainConfig,
) -> Result<(LstmModel, TrainReport)> {
    config.validate()?;
    let w = config.window_len;
    let train_ends = window_ends(train.len(), w);
    if train_ends.len() < config.batch_size {
        return Err(Error::InsufficientFrames {
            needed: config.batch_size + w - 1,
            got: train.len(),
        });
    }
    let val_ends = window_ends(val.len(), w);
    if val_ends.is_empty() {
        return Err(Error::InsufficientFrames {
            needed: w,
            got: val.len(),
        });
    }
    let ntrain = apply_norm(train, norm)?;
    let nval = apply_norm(val, norm)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = LstmParams::init(config.hidden_size, norm.features.len(), &mut rng);
    let mut state = AdamState::new(&params);
    let adam = config.adam();
    let initial_train_mae = batch_mae(&params, &ntrain, &train_ends, w)?;

    let mut history = Vec::with_capacity(config.epochs);
    let mut order = train_ends.clone();
    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for batch in order.chunks(config.batch_size) {
            let steps = gather_steps(|i| &ntrain[i].features[..], batch, w, params.input_size());
            let cache = forward_batch(&params, &steps)?;
            let truth: Vec<f64> = batch.iter().map(|&e| ntrain[e].label).collect();
            loss_sum += cache
                .predictions()
                .iter()
                .zip(&truth)
                .map(|(p, t)| (p - t).abs())
                .sum::<f64>();
            let grads = backward(&params, &cache, &truth)?;
            adam_step(&mut params, &grads, &mut state, &adam)?;
        }
        if !params.is_finite() {
            return Err(Error::invalid(format!("training diverged in epoch {}", epoch + 1)));
        }
        history.push(EpochStats {
            epoch: epoch + 1,
            train_mae: loss_sum / order.len() as f64,
            val_mae: batch_mae(&params, &nval, &val_ends, w)?,
        });
    }
    let final_train_mae = batch_mae(&params, &ntrain, &train_ends, w)?;

    let model = LstmModel {
        params,
        norm: norm.clone(),
        config: config.clone(),
        calibrated_prediction_error_m: None,
    };
    Ok((
        model,
        TrainReport {
            history,
            initial_train_mae,
            final_train_mae,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePrediction {
    /// Index of the frame whose outgoing step was predicted.
    pub index: usize,
    pub t: f64,
    pub label_m: f64,
    pub predicted_m: f64,
}

impl FramePrediction {
    pub fn abs_error(&self) -> f64 {
        (self.predicted_m - self.label_m).abs()
    }
}

/// Prediction for every frame that ends a full window.
pub fn predict_frames<P: StepPredictor + ?Sized>(predictor: &P, frames: &[SyncedFrame]) -> Result<Vec<FramePrediction>> {
    let w = predictor.window_len();
    if w == 0 || frames.len() < w {
        return Err(Error::InsufficientFrames {
            needed: w.max(1),
            got: frames.len(),
        });
    }
    (w - 1..frames.len())
        .map(|i| {
            Ok(FramePrediction {
                index: i,
                t: frames[i].t,
                label_m: frames[i].label_distance,
                predicted_m: predictor.predict_step(&frames[i + 1 - w..=i])?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width_m: f64,
    /// `counts[k]` covers `[k·w, (k+1)·w)`.
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn of(values: impl IntoIterator<Item = f64>, bin_width_m: f64) -> Self {
        let mut counts: Vec<usize> = Vec::new();
        for v in values {
            let k = (v / bin_width_m).floor().max(0.0) as usize;
            if k >= counts.len() {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        Histogram { bin_width_m, counts }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map = |e: csv::Error| Error::Malformed(e.to_string());
        w.write_record(["bin_lo_m", "bin_hi_m", "count"]).map_err(map)?;
        for (k, c) in self.counts.iter().enumerate() {
            let lo = k as f64 * self.bin_width_m;
            let hi = (k + 1) as f64 * self.bin_width_m;
            w.write_record([lo.to_string(), hi.to_string(), c.to_string()])
                .map_err(map)?;
        }
        w.flush().map_err(|e| Error::Malformed(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub rmse_mode: RmseMode,
    pub bin_width_m: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            rmse_mode: RmseMode::Standard,
            bin_width_m: 0.005,
        }
    }
}

/// Error statistics in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub rmse_m: f64,
    pub mae_m: f64,
    pub max_abs_err_m: f64,
    pub min_abs_err_m: f64,
    pub rmse_mode: RmseMode,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub metrics: EvalMetrics,
    pub predictions: Vec<FramePrediction>,
    pub histogram: Histogram,
}

pub fn evaluate<P: StepPredictor + ?Sized>(predictor: &P, frames: &[SyncedFrame], opts: &EvalOptions) -> Result<Evaluation> {
    if !(opts.bin_width_m.is_finite() && opts.bin_width_m > 0.0) {
        return Err(Error::invalid(format!("histogram bin width must be positive, got {}", opts.bin_width_m)));
    }
    let predictions = predict_frames(predictor, frames)?;
    let pred: Vec<f64> = predictions.iter().map(|p| p.predicted_m).collect();
    let truth: Vec<f64> = predictions.iter().map(|p| p.label_m).collect();
    let abs = || predictions.iter().map(FramePrediction::abs_error);
    let metrics = EvalMetrics {
        rmse_m: rmse(&pred, &truth, opts.rmse_mode)?,
        mae_m: mae(&pred, &truth)?,
        max_abs_err_m: abs().fold(f64::NEG_INFINITY, f64::max),
        min_abs_err_m: abs().fold(f64::INFINITY, f64::min),
        rmse_mode: opts.rmse_mode,
        count: predictions.len(),
    };
    let histogram = Histogram::of(abs(), opts.bin_width_m);
    Ok(Evaluation {
        metrics,
        predictions,
        histogram,
    })
}

pub fn write_predictions_csv<W: Write>(out: W, predictions: &[FramePrediction]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let map = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(["t", "label_m", "predicted_m", "abs_err_m"]).map_err(map)?;
    for p in predictions {
        w.write_record([
            p.t.to_string(),
            p.label_m.to_string(),
            p.predicted_m.to_string(),
            p.abs_error().to_string(),
        ])
        .map_err(map)?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

//! Trains the distance predictor on a synthetic drive with the default
//! hyperparameters and prints validation error in meters.
//!
//! ```text
//! cargo run --release --example train_predictor [epochs]
//! ```

use std::time::Instant;

use gnss_sentry::geodesy::EarthModel;
use gnss_sentry::lstm::{evaluate, train, EvalOptions, TrainConfig};
use gnss_sentry::streams::{fit_norm, split, synchronize, FeatureSet, SplitSizes};
use gnss_sentry::synth::SyntheticDriveConfig;

fn main() -> gnss_sentry::Result<()> {
    let epochs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let drive = SyntheticDriveConfig::default().generate()?;
    let features = FeatureSet::default();
    let frames = synchronize(&drive.gnss, &drive.can, &drive.imu, &features, &EarthModel::default())?;
    let (train_frames, val_frames) = split(&frames, SplitSizes::default_for(frames.len()))?;
    let norm = fit_norm(&frames, train_frames.len(), &features)?;

    let config = TrainConfig {
        epochs,
        ..TrainConfig::default()
    };
    let start = Instant::now();
    let (model, report) = train(train_frames, val_frames, &norm, &config)?;
    println!(
        "{} epochs in {:.1} s, train MAE {:.5} -> {:.5} (normalized)",
        config.epochs,
        start.elapsed().as_secs_f64(),
        report.initial_train_mae,
        report.final_train_mae
    );
    for e in report.history.iter().step_by((config.epochs / 10).max(1)) {
        println!("  epoch {:>3}  train {:.5}  val {:.5}", e.epoch, e.train_mae, e.val_mae);
    }

    let eval = evaluate(&model, val_frames, &EvalOptions::default())?;
    let m = eval.metrics;
    println!(
        "validation: RMSE {:.4} m, MAE {:.4} m, max abs error {:.4} m over {} frames",
        m.rmse_m, m.mae_m, m.max_abs_err_m, m.count
    );
    Ok(())
}

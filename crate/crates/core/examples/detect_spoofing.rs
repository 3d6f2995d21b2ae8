//! End to end: train on a clean synthetic drive, calibrate γ on the held-out
//! frames, then replay the drive with a slowly drifting spoofed trajectory.
//!
//! ```text
//! cargo run --release --example detect_spoofing [epochs]
//! ```

use gnss_sentry::detector::{calibrate_threshold, detect_stream, DEFAULT_GNSS_POSITION_ERROR_M};
use gnss_sentry::geodesy::EarthModel;
use gnss_sentry::lstm::{train, TrainConfig};
use gnss_sentry::spoofsim::synth_deviation;
use gnss_sentry::streams::{fit_norm, split, synchronize, FeatureSet, SplitSizes};
use gnss_sentry::synth::SyntheticDriveConfig;

fn main() -> gnss_sentry::Result<()> {
    let epochs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let earth = EarthModel::default();
    let drive = SyntheticDriveConfig::default().generate()?;
    let features = FeatureSet::default();
    let frames = synchronize(&drive.gnss, &drive.can, &drive.imu, &features, &earth)?;
    let (train_frames, val_frames) = split(&frames, SplitSizes::default_for(frames.len()))?;
    let norm = fit_norm(&frames, train_frames.len(), &features)?;
    let config = TrainConfig {
        epochs,
        ..TrainConfig::default()
    };
    let (model, _) = train(train_frames, val_frames, &norm, &config)?;

    let detection = calibrate_threshold(&model, val_frames, DEFAULT_GNSS_POSITION_ERROR_M)?;
    println!(
        "gamma = {} m + {:.4} m = {:.4} m",
        detection.gnss_position_error_m(),
        detection.prediction_error_m(),
        detection.threshold_gamma_m()
    );

    let clean = detect_stream(&model, &drive.gnss, &drive.can, &drive.imu, &detection, &earth, None)?;
    println!("clean drive: {} steps, {} alarms", clean.report.steps, clean.report.alarm_count);

    for rate in [1.0, 3.0, 10.0] {
        let onset = 3000;
        let spoofed = synth_deviation(&drive.gnss, onset, rate, &earth)?;
        let run = detect_stream(&model, &spoofed, &drive.can, &drive.imu, &detection, &earth, Some(onset))?;
        let r = &run.report;
        println!(
            "drift {rate:>4} m/step from fix {onset}: first alarm {:?}, delay {:?} steps, {} false alarms, mean latency {:.1} us",
            r.first_alarm_index, r.detection_delay_steps, r.false_alarm_count, r.mean_latency_us
        );
    }
    Ok(())
}

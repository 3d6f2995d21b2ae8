//! Aligns 50 Hz CAN and 100 Hz IMU samples onto the 10 Hz GNSS clock and
//! prints the first labelled frames, raw and normalized.

use gnss_sentry::geodesy::EarthModel;
use gnss_sentry::streams::{apply_norm, fit_norm, split, synchronize, Feature, FeatureSet, SplitSizes};
use gnss_sentry::synth::SyntheticDriveConfig;

fn main() -> gnss_sentry::Result<()> {
    let drive = SyntheticDriveConfig {
        frames: 600,
        ..SyntheticDriveConfig::default()
    }
    .generate()?;
    println!(
        "{} GNSS fixes, {} CAN samples, {} IMU samples",
        drive.gnss.len(),
        drive.can.len(),
        drive.imu.len()
    );

    let features = FeatureSet::new(vec![
        Feature::CanSpeed,
        Feature::Steering,
        Feature::AccelFwd,
        Feature::PrevDistance,
    ])?;
    let frames = synchronize(&drive.gnss, &drive.can, &drive.imu, &features, &EarthModel::default())?;
    let sizes = SplitSizes::default_for(frames.len());
    let (train, val) = split(&frames, sizes)?;
    println!("{} frames: {} train, {} validation", frames.len(), train.len(), val.len());

    let names: Vec<&str> = features.features().iter().map(|f| f.name()).collect();
    println!("{:>12} {:?} label_m", "t", names);
    for f in &frames[..5] {
        println!("{:>12.1} {:.4?} {:.5}", f.t, f.features, f.label_distance);
    }

    let norm = fit_norm(&frames, train.len(), &features)?;
    let scaled = apply_norm(&frames, &norm)?;
    println!("normalized (train rows span [0, 1]):");
    for f in &scaled[..5] {
        println!("{:>12.1} {:.4?} {:.5}", f.t, f.features, f.label);
    }
    Ok(())
}

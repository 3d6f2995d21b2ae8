//! Writes a synthetic drive as GNSS/CAN/IMU CSV logs plus a spoofed-route KML,
//! ready for the `gnss-sentry` command line.
//!
//! ```text
//! cargo run --release --example write_drive -- data/ [frames] [seed]
//! ```

use std::fs::{self, File};
use std::path::PathBuf;

use gnss_sentry::geodesy::{offset_tangent, EarthModel};
use gnss_sentry::spoofsim::{write_kml_route, Route};
use gnss_sentry::streams::{write_can_csv, write_gnss_csv, write_imu_csv};
use gnss_sentry::synth::SyntheticDriveConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "drive".into()));
    let frames = args.next().map(|s| s.parse()).transpose()?.unwrap_or(6000);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);
    let drive = SyntheticDriveConfig {
        frames,
        seed,
        ..SyntheticDriveConfig::default()
    }
    .generate()?;

    fs::create_dir_all(&dir)?;
    write_gnss_csv(File::create(dir.join("gnss.csv"))?, &drive.gnss)?;
    write_can_csv(File::create(dir.join("can.csv"))?, &drive.can)?;
    write_imu_csv(File::create(dir.join("imu.csv"))?, &drive.imu)?;

    let earth = EarthModel::default();
    // the spoofed road starts 25 m beside the true position at mid-drive
    let fork = offset_tangent(&drive.gnss[drive.gnss.len() / 2].pos, 25.0, 0.0, &earth);
    let route = Route::new(vec![
        fork,
        offset_tangent(&fork, 150.0, 200.0, &earth),
        offset_tangent(&fork, 900.0, 1200.0, &earth),
    ])?;
    fs::write(dir.join("route.kml"), write_kml_route(&route))?;
    println!("wrote gnss.csv, can.csv, imu.csv and route.kml ({frames} frames) to {}", dir.display());
    Ok(())
}

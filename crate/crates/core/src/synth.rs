//! Seeded synthetic drives at native sensor rates.
//!
//! Speed follows a slow sinusoid, heading wanders gently, and each GNSS step
//! covers `speed · Δt` plus Gaussian jitter, so the labelled distance is a
//! known noisy function of the CAN speed channel.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::geodesy::{destination, EarthModel, GeoPoint};
use crate::streams::{CanSample, GnssFix, ImuSample};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDriveConfig {
    /// Number of labelled frames; the drive has one more GNSS fix.
    pub frames: usize,
    pub t0: f64,
    pub gnss_hz: f64,
    pub can_hz: f64,
    pub imu_hz: f64,
    pub speed_mean_mps: f64,
    pub speed_amplitude_mps: f64,
    pub speed_period_s: f64,
    /// Standard deviation of the per-step distance jitter, meters.
    pub distance_noise_m: f64,
    pub heading0_deg: f64,
    pub heading_swing_deg: f64,
    pub heading_period_s: f64,
    pub accel_noise_mps2: f64,
    pub start: GeoPoint,
    pub seed: u64,
}

impl Default for SyntheticDriveConfig {
    fn default() -> Self {
        SyntheticDriveConfig {
            frames: 6000,
            t0: 238_867.5,
            gnss_hz: 10.0,
            can_hz: 50.0,
            imu_hz: 100.0,
            speed_mean_mps: 25.0,
            speed_amplitude_mps: 5.0,
            speed_period_s: 60.0,
            distance_noise_m: 0.005,
            heading0_deg: 300.0,
            heading_swing_deg: 12.0,
            heading_period_s: 150.0,
            accel_noise_mps2: 0.05,
            start: GeoPoint {
                lat_deg: 37.63443,
                lon_deg: -122.414,
            },
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDrive {
    pub gnss: Vec<GnssFix>,
    pub can: Vec<CanSample>,
    pub imu: Vec<ImuSample>,
}

impl SyntheticDriveConfig {
    fn speed(&self, t: f64) -> f64 {
        self.speed_mean_mps + self.speed_amplitude_mps * (TAU * (t - self.t0) / self.speed_period_s).sin()
    }

    fn accel(&self, t: f64) -> f64 {
        let w = TAU / self.speed_period_s;
        self.speed_amplitude_mps * w * (w * (t - self.t0)).cos()
    }

    fn heading_rad(&self, t: f64) -> f64 {
        (self.heading0_deg + self.heading_swing_deg * (TAU * (t - self.t0) / self.heading_period_s).sin()).to_radians()
    }

    fn yaw_rate(&self, t: f64) -> f64 {
        let w = TAU / self.heading_period_s;
        self.heading_swing_deg.to_radians() * w * (w * (t - self.t0)).cos()
    }

    pub fn generate(&self) -> Result<SyntheticDrive> {
        if self.frames == 0 {
            return Err(Error::invalid("synthetic drive needs at least one frame"));
        }
        if self.speed_amplitude_mps >= self.speed_mean_mps {
            return Err(Error::invalid("speed amplitude must stay below the mean speed"));
        }
        self.start.validate()?;
        let earth = EarthModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let jitter = Normal::new(0.0, self.distance_noise_m).map_err(|e| Error::invalid(e.to_string()))?;
        let accel_noise = Normal::new(0.0, self.accel_noise_mps2).map_err(|e| Error::invalid(e.to_string()))?;

        let dt = 1.0 / self.gnss_hz;
        let mut gnss = Vec::with_capacity(self.frames + 1);
        let mut pos = self.start;
        for i in 0..=self.frames {
            let t = self.t0 + i as f64 * dt;
            gnss.push(GnssFix {
                t,
                pos,
                speed: self.speed(t),
            });
            let step = (self.speed(t) * dt + jitter.sample(&mut rng)).max(0.0);
            pos = destination(&pos, self.heading_rad(t), step, &earth);
        }

        let t_end = self.t0 + self.frames as f64 * dt;
        // sensor clocks are offset from the GNSS epochs and cover the drive
        let span = |hz: f64, offset: f64| {
            let start = self.t0 - 0.5 + offset;
            let n = ((t_end + 0.5 - start) * hz).ceil() as usize;
            (0..=n).map(move |k| start + k as f64 / hz)
        };
        let can = span(self.can_hz, 0.0037)
            .map(|t| CanSample {
                t,
                speed: self.speed(t),
                // bicycle-model steering proportional to curvature
                steering_angle: (self.yaw_rate(t) / self.speed(t) * 2.7 * 15.0).to_degrees(),
            })
            .collect();
        let imu = span(self.imu_hz, 0.0011)
            .map(|t| ImuSample {
                t,
                accel_forward: self.accel(t) + accel_noise.sample(&mut rng),
                accel_right: self.speed(t) * self.yaw_rate(t) + accel_noise.sample(&mut rng),
                accel_down: -9.81 + accel_noise.sample(&mut rng),
            })
            .collect();
        Ok(SyntheticDrive { gnss, can, imu })
    }
}

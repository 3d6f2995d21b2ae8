//! GNSS spoofing detection from vehicle odometry.
//!
//! A small LSTM learns the distance a car travels between two GNSS epochs
//! from CAN and IMU signals alone. At run time each reported GNSS step is
//! compared with that prediction and flagged when the discrepancy exceeds
//! `γ = gnss_position_error + max_prediction_error`.
//!
//! ```
//! use gnss_sentry::geodesy::{haversine_distance, EarthModel, GeoPoint};
//!
//! let a = GeoPoint::new(37.0, -122.0).unwrap();
//! let b = GeoPoint::new(37.00001, -122.0).unwrap();
//! let d = haversine_distance(&a, &b, &EarthModel::default()).unwrap();
//! assert!((d - 1.111949).abs() < 1e-5);
//! ```

pub mod cli;
pub mod detector;
pub mod error;
pub mod geodesy;
pub mod lstm;
pub mod spoofsim;
pub mod streams;
pub mod synth;

pub use error::{Error, Result};

//! Great-circle geometry on a spherical Earth.
//!
//! Coordinates are stored in decimal degrees, as GNSS receivers report them,
//! and converted to radians once at the boundary of each computation. All
//! trigonometry is done in `f64`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius in meters.
pub const MEAN_EARTH_RADIUS_M: f64 = 6_371_000.0;

/// A latitude/longitude pair in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl GeoPoint {
    /// Validated constructor: both coordinates finite, latitude in
    /// [-90, 90] and longitude in [-180, 180].
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self> {
        let p = GeoPoint { lat_deg, lon_deg };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lat_deg.is_finite() || !self.lon_deg.is_finite() {
            return Err(Error::invalid(format!(
                "non-finite coordinate ({}, {})",
                self.lat_deg, self.lon_deg
            )));
        }
        if !(-90.0..=90.0).contains(&self.lat_deg) {
            return Err(Error::invalid(format!(
                "latitude {} outside [-90, 90]",
                self.lat_deg
            )));
        }
        if !(-180.0..=180.0).contains(&self.lon_deg) {
            return Err(Error::invalid(format!(
                "longitude {} outside [-180, 180]",
                self.lon_deg
            )));
        }
        Ok(())
    }

    pub fn lat_rad(&self) -> f64 {
        self.lat_deg.to_radians()
    }

    pub fn lon_rad(&self) -> f64 {
        self.lon_deg.to_radians()
    }
}

/// Sphere used for distance computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EarthModel {
    radius_m: f64,
}

impl EarthModel {
    pub fn new(radius_m: f64) -> Result<Self> {
        if !(radius_m.is_finite() && radius_m > 0.0) {
            return Err(Error::invalid(format!(
                "earth radius must be positive and finite, got {radius_m}"
            )));
        }
        Ok(EarthModel { radius_m })
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }
}

impl Default for EarthModel {
    fn default() -> Self {
        EarthModel {
            radius_m: MEAN_EARTH_RADIUS_M,
        }
    }
}

/// The haversine function, `sin²(θ/2)`.
pub fn hav(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::invalid(format!("non-finite angle {theta}")));
    }
    let s = (theta / 2.0).sin();
    Ok(s * s)
}

/// Central angle between two points in radians, in `[0, π]`.
pub fn central_angle(a: &GeoPoint, b: &GeoPoint) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    let (phi1, phi2) = (a.lat_rad(), b.lat_rad());
    let dphi = phi2 - phi1;
    let dpsi = b.lon_rad() - a.lon_rad();
    // hav(dphi) and hav(dpsi) are even in their argument, so swapping the
    // operands evaluates the identical expression.
    let h = hav(dphi)? + phi1.cos() * phi2.cos() * hav(dpsi)?;
    Ok(2.0 * h.clamp(0.0, 1.0).sqrt().asin())
}

/// Great-circle distance in meters.
pub fn haversine_distance(a: &GeoPoint, b: &GeoPoint, earth: &EarthModel) -> Result<f64> {
    Ok(earth.radius_m * central_angle(a, b)?)
}

/// Initial bearing from `a` towards `b`, radians clockwise from north.
pub fn initial_bearing(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let (phi1, phi2) = (a.lat_rad(), b.lat_rad());
    let dpsi = b.lon_rad() - a.lon_rad();
    let y = dpsi.sin() * phi2.cos();
    let x = phi1.cos() * phi2.sin() - phi1.sin() * phi2.cos() * dpsi.cos();
    y.atan2(x)
}

/// Point reached by travelling `distance_m` along the great circle leaving
/// `start` with the given bearing (radians clockwise from north).
pub fn destination(start: &GeoPoint, bearing_rad: f64, distance_m: f64, earth: &EarthModel) -> GeoPoint {
    let delta = distance_m / earth.radius_m;
    let phi1 = start.lat_rad();
    let psi1 = start.lon_rad();
    let sin_phi2 = (phi1.sin() * delta.cos() + phi1.cos() * delta.sin() * bearing_rad.cos())
        .clamp(-1.0, 1.0);
    let phi2 = sin_phi2.asin();
    let psi2 = psi1
        + (bearing_rad.sin() * delta.sin() * phi1.cos()).atan2(delta.cos() - phi1.sin() * sin_phi2);
    GeoPoint {
        lat_deg: phi2.to_degrees(),
        lon_deg: wrap_lon_deg(psi2.to_degrees()),
    }
}

fn wrap_lon_deg(lon: f64) -> f64 {
    if (-180.0..=180.0).contains(&lon) {
        lon
    } else {
        (lon + 180.0).rem_euclid(360.0) - 180.0
    }
}

/// Offset a point by a small east/north displacement in meters using the
/// local tangent plane: one degree of latitude spans `(π/180)·r` meters and
/// longitude is scaled by `cos(lat)`.
pub fn offset_tangent(p: &GeoPoint, east_m: f64, north_m: f64, earth: &EarthModel) -> GeoPoint {
    let m_per_deg = PI / 180.0 * earth.radius_m;
    let lat_deg = p.lat_deg + north_m / m_per_deg;
    let lon_deg = p.lon_deg + east_m / (m_per_deg * p.lat_rad().cos());
    GeoPoint {
        lat_deg,
        lon_deg: wrap_lon_deg(lon_deg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn earth() -> EarthModel {
        EarthModel::default()
    }

    #[test]
    fn identical_points_are_zero_apart() {
        let p = GeoPoint::new(37.63443, -122.414).unwrap();
        assert_eq!(haversine_distance(&p, &p, &earth()).unwrap(), 0.0);
    }

    #[test]
    fn antipodal_equator_is_half_circumference() {
        let a = GeoPoint::new(0.0, 0.0).unwrap();
        let b = GeoPoint::new(0.0, 180.0).unwrap();
        let d = haversine_distance(&a, &b, &earth()).unwrap();
        assert!((d - 20_015_086.796_020_57).abs() < 1e-6, "{d}");
        assert!(d <= PI * MEAN_EARTH_RADIUS_M);
    }

    #[test]
    fn small_equatorial_step() {
        // 1e-5 rad of longitude, evaluated in 40-digit arithmetic: 63.70999999657 m.
        let a = GeoPoint::new(0.0, 0.0).unwrap();
        let b = GeoPoint::new(0.0, 5.729577951e-4).unwrap();
        let d = haversine_distance(&a, &b, &earth()).unwrap();
        assert!((d - 63.71).abs() < 1e-4, "{d}");
        assert!((d - 63.709_999_996_572_6).abs() < 1e-8, "{d}");
    }

    #[test]
    fn table_one_step() {
        // 1e-5 deg of latitude; 40-digit reference 1.1119492664455873 m.
        let a = GeoPoint::new(37.63443, -122.414).unwrap();
        let b = GeoPoint::new(37.63444, -122.414).unwrap();
        let d = haversine_distance(&a, &b, &earth()).unwrap();
        assert!((d - 1.111_949_266_445_587).abs() < 1e-9, "{d}");
    }

    #[test]
    fn hav_values() {
        assert_eq!(hav(0.0).unwrap(), 0.0);
        assert!((hav(PI).unwrap() - 1.0).abs() < 1e-15);
        // sin²(0.1) to 40 digits: 0.0099667110793791844...
        assert!((hav(0.2).unwrap() - 0.009_966_711_079_379_184).abs() < 1e-15);
        assert!(hav(f64::NAN).is_err());
    }

    #[test]
    fn rejects_bad_coordinates() {
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
        assert!(GeoPoint::new(91.0, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -180.5).is_err());
        let bad = GeoPoint {
            lat_deg: 0.0,
            lon_deg: f64::INFINITY,
        };
        let ok = GeoPoint::new(0.0, 0.0).unwrap();
        assert!(matches!(
            haversine_distance(&ok, &bad, &earth()),
            Err(Error::InvalidInput(_))
        ));
        assert!(EarthModel::new(0.0).is_err());
        assert!(EarthModel::new(-1.0).is_err());
    }

    #[test]
    fn destination_round_trips_distance_and_bearing() {
        let start = GeoPoint::new(37.63443, -122.414).unwrap();
        for &(bearing, dist) in &[(0.0, 2.7), (1.2, 150.0), (-2.0, 10_000.0)] {
            let end = destination(&start, bearing, dist, &earth());
            let d = haversine_distance(&start, &end, &earth()).unwrap();
            assert!((d - dist).abs() < 1e-6 * dist.max(1.0), "{d} vs {dist}");
            let b = initial_bearing(&start, &end);
            assert!((b - bearing).abs() < 1e-6, "{b} vs {bearing}");
        }
    }

    #[test]
    fn tangent_offset_small_displacement() {
        let p = GeoPoint::new(37.6, -122.4).unwrap();
        let q = offset_tangent(&p, 3.0, 0.0, &earth());
        let d = haversine_distance(&p, &q, &earth()).unwrap();
        assert!((d - 3.0).abs() < 1e-3, "{d}");
        let q = offset_tangent(&p, 0.0, -4.0, &earth());
        let d = haversine_distance(&p, &q, &earth()).unwrap();
        assert!((d - 4.0).abs() < 1e-6, "{d}");
    }

    fn point() -> impl Strategy<Value = GeoPoint> {
        (-90.0f64..=90.0, -180.0f64..=180.0).prop_map(|(lat_deg, lon_deg)| GeoPoint { lat_deg, lon_deg })
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in point(), b in point()) {
            let e = earth();
            let ab = haversine_distance(&a, &b, &e).unwrap();
            let ba = haversine_distance(&b, &a, &e).unwrap();
            prop_assert_eq!(ab.to_bits(), ba.to_bits());
            prop_assert!(ab >= 0.0 && ab <= PI * e.radius_m());
            prop_assert_eq!(haversine_distance(&a, &a, &e).unwrap(), 0.0);
        }

        #[test]
        fn hav_forms_agree(theta in -PI..=PI) {
            let lhs = hav(theta).unwrap();
            let rhs = (1.0 - theta.cos()) / 2.0;
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}

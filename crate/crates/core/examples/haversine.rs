//! Great-circle distances, bearings and destinations on the mean-radius
//! sphere.

use gnss_sentry::geodesy::{destination, haversine_distance, initial_bearing, EarthModel, GeoPoint};

fn main() -> gnss_sentry::Result<()> {
    let earth = EarthModel::default();

    // two consecutive 10 Hz fixes on a highway
    let a = GeoPoint::new(37.634_430, -122.414_000)?;
    let b = GeoPoint::new(37.634_440, -122.414_000)?;
    println!("one 1e-5 deg latitude step: {:.6} m", haversine_distance(&a, &b, &earth)?);

    let sf = GeoPoint::new(37.7749, -122.4194)?;
    let la = GeoPoint::new(34.0522, -118.2437)?;
    let d = haversine_distance(&sf, &la, &earth)?;
    let bearing = initial_bearing(&sf, &la);
    println!("San Francisco -> Los Angeles: {:.1} km, initial bearing {:.1} deg", d / 1e3, bearing.to_degrees());

    let there = destination(&sf, bearing, d, &earth);
    println!(
        "walking that far along that bearing lands {:.3} m from Los Angeles",
        haversine_distance(&there, &la, &earth)?
    );

    let other = EarthModel::new(6_378_137.0)?;
    println!("same pair on the equatorial radius: {:.1} km", haversine_distance(&sf, &la, &other)? / 1e3);
    Ok(())
}

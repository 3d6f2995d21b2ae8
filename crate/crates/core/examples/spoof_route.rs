//! Loads a spoofed route from KML and replays it onto a recorded drive from a
//! chosen onset, keeping the receiver clock and step lengths.

use gnss_sentry::geodesy::{haversine_distance, offset_tangent, EarthModel};
use gnss_sentry::spoofsim::{inject_spoof, parse_kml_route, synth_deviation, write_kml_route, SpoofScenario};
use gnss_sentry::synth::SyntheticDriveConfig;

fn main() -> gnss_sentry::Result<()> {
    let earth = EarthModel::default();
    let truth = SyntheticDriveConfig {
        frames: 400,
        ..SyntheticDriveConfig::default()
    }
    .generate()?
    .gnss;
    let onset = 200;

    // the attacker's road forks 40 m east of the true position at onset
    let fork = offset_tangent(&truth[onset].pos, 40.0, 0.0, &earth);
    let kml = format!(
        "<kml><Document><Placemark><LineString><coordinates>\n{},{},0 {},{},0\n</coordinates></LineString></Placemark></Document></kml>",
        fork.lon_deg,
        fork.lat_deg,
        offset_tangent(&fork, 300.0, 500.0, &earth).lon_deg,
        offset_tangent(&fork, 300.0, 500.0, &earth).lat_deg,
    );
    let route = parse_kml_route(&kml)?;
    println!("route of {} points, {:.1} m long", route.points().len(), route.length_m(&earth)?);
    print!("{}", write_kml_route(&route));

    let spoofed = inject_spoof(&SpoofScenario::new(truth.clone(), route, onset)?, &earth)?;
    for i in [onset - 1, onset, onset + 50, onset + 199] {
        println!(
            "fix {i:>3}: {:>7.2} m from the true position",
            haversine_distance(&truth[i].pos, &spoofed[i].pos, &earth)?
        );
    }

    let drift = synth_deviation(&truth, onset, 3.0, &earth)?;
    println!(
        "synthetic drift of 3 m/step puts fix {} {:.1} m off track",
        onset + 10,
        haversine_distance(&truth[onset + 10].pos, &drift[onset + 10].pos, &earth)?
    );
    Ok(())
}

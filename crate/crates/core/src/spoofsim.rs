//! Spoofed trajectory construction.
//!
//! Two attack generators are provided: a route splice, where positions after
//! the onset are walked along an attacker-drawn route at the vehicle's true
//! per-step odometry, and a parametric cross-track drift used for controlled
//! experiments. Timestamps and speeds are never altered.

use std::io::Read;

use crate::error::{Error, Result};
use crate::geodesy::{destination, haversine_distance, initial_bearing, offset_tangent, EarthModel, GeoPoint};
use crate::streams::GnssFix;

/// Steps shorter than this carry no usable heading.
const MIN_HEADING_STEP_M: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    points: Vec<GeoPoint>,
}

impl Route {
    pub fn new(points: Vec<GeoPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid(format!("a route needs at least 2 points, got {}", points.len())));
        }
        for (i, p) in points.iter().enumerate() {
            p.validate()
                .map_err(|e| Error::invalid(format!("route point {}: {e}", i + 1)))?;
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("route points {} and {} are identical", i + 1, i + 2)));
        }
        Ok(Route { points })
    }

    pub fn points(&self) -> &[GeoPoint] {
        &self.points
    }

    /// Cumulative arc length at each vertex, starting at 0.
    pub fn cumulative_lengths(&self, earth: &EarthModel) -> Result<Vec<f64>> {
        let mut acc = Vec::with_capacity(self.points.len());
        acc.push(0.0);
        for w in self.points.windows(2) {
            let last = *acc.last().expect("non-empty");
            acc.push(last + haversine_distance(&w[0], &w[1], earth)?);
        }
        Ok(acc)
    }

    pub fn length_m(&self, earth: &EarthModel) -> Result<f64> {
        Ok(*self.cumulative_lengths(earth)?.last().expect("non-empty"))
    }
}

/// Point at arc length `s` along the route, clamped to the final vertex.
fn point_at(route: &Route, cumulative: &[f64], s: f64, earth: &EarthModel) -> GeoPoint {
    let pts = route.points();
    let total = cumulative[cumulative.len() - 1];
    if s >= total {
        return pts[pts.len() - 1];
    }
    if s <= 0.0 {
        return pts[0];
    }
    let seg = cumulative.partition_point(|&c| c <= s) - 1;
    let (a, b) = (&pts[seg], &pts[seg + 1]);
    destination(a, initial_bearing(a, b), s - cumulative[seg], earth)
}

/// Parses the first `<LineString><coordinates>` block of a KML document.
pub fn parse_kml_route(text: &str) -> Result<Route> {
    let doc = roxmltree::Document::parse(text).map_err(|e| Error::Malformed(format!("KML: {e}")))?;
    let coords = doc
        .descendants()
        .filter(|n| n.tag_name().name() == "LineString")
        .find_map(|ls| ls.children().find(|c| c.tag_name().name() == "coordinates"))
        .ok_or_else(|| Error::Malformed("KML: no LineString coordinates block".into()))?;
    let body: String = coords
        .descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect();
    let mut points = Vec::new();
    for (k, token) in body.split_whitespace().enumerate() {
        let idx = k + 1;
        let parts: Vec<&str> = token.split(',').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::Malformed(format!(
                "KML coordinates token {idx} `{token}`: expected lon,lat[,alt], found {} field(s)",
                parts.len()
            )));
        }
        let num = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| {
                Error::Malformed(format!("KML coordinates token {idx}: cannot parse `{s}` as a number"))
            })
        };
        let lon = num(parts[0])?;
        let lat = num(parts[1])?;
        if let Some(alt) = parts.get(2) {
            num(alt)?;
        }
        let p = GeoPoint::new(lat, lon).map_err(|e| Error::invalid(format!("KML coordinates token {idx}: {e}")))?;
        points.push(p);
    }
    if points.is_empty() {
        return Err(Error::Malformed("KML: empty coordinates block".into()));
    }
    Route::new(points)
}

/// Byte-level entry point; non-UTF-8 input is a format error.
pub fn parse_kml_route_bytes(bytes: &[u8]) -> Result<Route> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Malformed(format!("KML is not UTF-8: {e}")))?;
    parse_kml_route(text)
}

/// Minimal KML document holding the route as a single LineString.
pub fn write_kml_route(route: &Route) -> String {
    let coords = route
        .points()
        .iter()
        .map(|p| format!("{},{},0", p.lon_deg, p.lat_deg))
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <kml xmlns=\"http://www.opengis.net/kml/2.2\">\n\
         <Document><Placemark><name>spoof route</name><LineString>\n\
         <coordinates>{coords}</coordinates>\n\
         </LineString></Placemark></Document>\n\
         </kml>\n"
    )
}

/// Route CSV with header `lat_deg,lon_deg`, rows in travel order.
pub fn read_route_csv<R: Read>(reader: R) -> Result<Route> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Format { line: 1, message: e.to_string() })?
        .clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Format {
            line: 1,
            message: format!("missing column `{name}`"),
        })
    };
    let (ilat, ilon) = (col("lat_deg")?, col("lon_deg")?);
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Format {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let num = |i: usize| {
            let raw = rec.get(i).unwrap_or("");
            raw.parse::<f64>().map_err(|_| Error::Format {
                line,
                message: format!("cannot parse `{raw}` as a number"),
            })
        };
        let p = GeoPoint::new(num(ilat)?, num(ilon)?).map_err(|e| Error::Format {
            line,
            message: e.to_string(),
        })?;
        points.push(p);
    }
    Route::new(points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpoofScenario {
    truth: Vec<GnssFix>,
    spoof_route: Route,
    onset_index: usize,
}

impl SpoofScenario {
    pub fn new(truth: Vec<GnssFix>, spoof_route: Route, onset_index: usize) -> Result<Self> {
        check_onset(truth.len(), onset_index)?;
        Ok(SpoofScenario {
            truth,
            spoof_route,
            onset_index,
        })
    }

    pub fn truth(&self) -> &[GnssFix] {
        &self.truth
    }

    pub fn spoof_route(&self) -> &Route {
        &self.spoof_route
    }

    pub fn onset_index(&self) -> usize {
        self.onset_index
    }
}

fn check_onset(len: usize, onset: usize) -> Result<()> {
    if onset == 0 || onset >= len {
        return Err(Error::invalid(format!(
            "onset index {onset} must satisfy 0 < onset < {len}"
        )));
    }
    Ok(())
}

/// Replaces every fix from the onset on with points walked along the spoof
/// route, advancing by the true per-step distance. The fix at the onset sits
/// on the route's first point; past the route's end, fixes stay on its last
/// point.
pub fn inject_spoof(scenario: &SpoofScenario, earth: &EarthModel) -> Result<Vec<GnssFix>> {
    let truth = &scenario.truth;
    let onset = scenario.onset_index;
    let route = &scenario.spoof_route;
    let cumulative = route.cumulative_lengths(earth)?;
    let total = cumulative[cumulative.len() - 1];

    if onset + 1 < truth.len() {
        let first_step = haversine_distance(&truth[onset].pos, &truth[onset + 1].pos, earth)?;
        if total < first_step {
            return Err(Error::invalid(format!(
                "spoof route is {total} m long, shorter than one {first_step} m step"
            )));
        }
    }

    let mut out = truth.clone();
    let mut arc = 0.0;
    for i in onset..truth.len() {
        if i > onset {
            arc += haversine_distance(&truth[i - 1].pos, &truth[i].pos, earth)?;
        }
        out[i].pos = point_at(route, &cumulative, arc, earth);
    }
    Ok(out)
}

/// Bearing of the closest non-degenerate step arriving at or before fix `i`,
/// falling back to the first one after it.
fn local_heading(truth: &[GnssFix], i: usize, earth: &EarthModel) -> Result<Option<f64>> {
    let step = |j: usize| -> Result<Option<f64>> {
        let (a, b) = (&truth[j - 1].pos, &truth[j].pos);
        Ok((haversine_distance(a, b, earth)? > MIN_HEADING_STEP_M).then(|| initial_bearing(a, b)))
    };
    for j in (1..=i).rev() {
        if let Some(h) = step(j)? {
            return Ok(Some(h));
        }
    }
    for j in i + 1..truth.len() {
        if let Some(h) = step(j)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Drifts fix `onset + k` sideways (to the right of the local heading) by
/// `k · cross_track_rate` meters.
pub fn synth_deviation(
    truth: &[GnssFix],
    onset_index: usize,
    cross_track_rate: f64,
    earth: &EarthModel,
) -> Result<Vec<GnssFix>> {
    check_onset(truth.len(), onset_index)?;
    if !(cross_track_rate.is_finite() && cross_track_rate > 0.0) {
        return Err(Error::invalid(format!(
            "cross-track rate must be positive, got {cross_track_rate}"
        )));
    }
    let mut out = truth.to_vec();
    for (k, i) in (onset_index..truth.len()).enumerate() {
        let heading = local_heading(truth, i, earth)?.ok_or_else(|| {
            Error::invalid("vehicle is stationary: no heading to deviate from")
        })?;
        let d = k as f64 * cross_track_rate;
        // right-hand normal of bearing θ is bearing θ + 90°
        let east = d * heading.cos();
        let north = -d * heading.sin();
        out[i].pos = offset_tangent(&truth[i].pos, east, north, earth);
    }
    Ok(out)
}

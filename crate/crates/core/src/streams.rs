//! Sensor stream ingestion, time alignment and feature framing.
//!
//! GNSS (10 Hz), CAN (50 Hz) and IMU (100 Hz) streams are aligned on the GNSS
//! clock: every GNSS fix becomes one [`SyncedFrame`] whose CAN/IMU features are
//! linearly interpolated at the fix time and whose label is the great-circle
//! distance to the following fix.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::{haversine_distance, EarthModel, GeoPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnssFix {
    pub t: f64,
    pub pos: GeoPoint,
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanSample {
    pub t: f64,
    pub speed: f64,
    pub steering_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImuSample {
    pub t: f64,
    pub accel_forward: f64,
    pub accel_right: f64,
    pub accel_down: f64,
}

/// A timestamped sample that can be linearly blended with a neighbour.
pub trait Sample: Clone {
    fn time(&self) -> f64;

    /// Componentwise `self + (other - self)·w`, stamped with time `t`.
    fn lerp(&self, other: &Self, w: f64, t: f64) -> Self;
}

fn mix(a: f64, b: f64, w: f64) -> f64 {
    a + (b - a) * w
}

impl Sample for CanSample {
    fn time(&self) -> f64 {
        self.t
    }

    fn lerp(&self, other: &Self, w: f64, t: f64) -> Self {
        CanSample {
            t,
            speed: mix(self.speed, other.speed, w),
            steering_angle: mix(self.steering_angle, other.steering_angle, w),
        }
    }
}

impl Sample for ImuSample {
    fn time(&self) -> f64 {
        self.t
    }

    fn lerp(&self, other: &Self, w: f64, t: f64) -> Self {
        ImuSample {
            t,
            accel_forward: mix(self.accel_forward, other.accel_forward, w),
            accel_right: mix(self.accel_right, other.accel_right, w),
            accel_down: mix(self.accel_down, other.accel_down, w),
        }
    }
}

/// `(t, value)` scalar series.
impl Sample for (f64, f64) {
    fn time(&self) -> f64 {
        self.0
    }

    fn lerp(&self, other: &Self, w: f64, t: f64) -> Self {
        (t, mix(self.1, other.1, w))
    }
}

/// Value of a time-sorted series at `t_query`.
///
/// Exact at knots, linear between the two bracketing samples and clamped to
/// the nearest endpoint outside the sampled span.
pub fn interpolate_at<S: Sample>(samples: &[S], t_query: f64) -> Result<S> {
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::invalid("cannot interpolate an empty series")),
    };
    if !t_query.is_finite() {
        return Err(Error::invalid(format!("non-finite query time {t_query}")));
    }
    if t_query <= first.time() {
        return Ok(first.clone());
    }
    if t_query >= last.time() {
        return Ok(last.clone());
    }
    // first index with time > t_query; 1 <= hi < len here
    let hi = samples.partition_point(|s| s.time() <= t_query);
    let lo = &samples[hi - 1];
    if lo.time() == t_query {
        return Ok(lo.clone());
    }
    let up = &samples[hi];
    let w = (t_query - lo.time()) / (up.time() - lo.time());
    Ok(lo.lerp(up, w, t_query))
}

/// Model input channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    /// CAN vehicle speed, m/s.
    CanSpeed,
    /// CAN steering wheel angle, degrees.
    Steering,
    /// IMU forward acceleration, m/s².
    AccelFwd,
    /// GNSS-reported speed, m/s.
    GnssSpeed,
    /// Distance from the previous fix to this one, meters (0 on the first frame).
    PrevDistance,
}

impl Feature {
    pub const ALL: [Feature; 5] = [
        Feature::CanSpeed,
        Feature::Steering,
        Feature::AccelFwd,
        Feature::GnssSpeed,
        Feature::PrevDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::CanSpeed => "can_speed",
            Feature::Steering => "steering",
            Feature::AccelFwd => "accel_fwd",
            Feature::GnssSpeed => "gnss_speed",
            Feature::PrevDistance => "prev_distance",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::invalid(format!("unknown feature `{s}`")))
    }
}

/// Ordered, duplicate-free list of features.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Feature>", into = "Vec<Feature>")]
pub struct FeatureSet(Vec<Feature>);

impl FeatureSet {
    pub fn new(features: Vec<Feature>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::invalid("feature set is empty"));
        }
        for (i, f) in features.iter().enumerate() {
            if features[..i].contains(f) {
                return Err(Error::invalid(format!("feature `{f}` listed twice")));
            }
        }
        Ok(FeatureSet(features))
    }

    pub fn features(&self) -> &[Feature] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses a comma-separated list of feature names.
    pub fn parse_list(s: &str) -> Result<Self> {
        let features = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        FeatureSet::new(features)
    }
}

impl Default for FeatureSet {
    /// CAN speed, steering angle and IMU forward acceleration.
    fn default() -> Self {
        FeatureSet(vec![Feature::CanSpeed, Feature::Steering, Feature::AccelFwd])
    }
}

impl TryFrom<Vec<Feature>> for FeatureSet {
    type Error = Error;

    fn try_from(v: Vec<Feature>) -> Result<Self> {
        FeatureSet::new(v)
    }
}

impl From<FeatureSet> for Vec<Feature> {
    fn from(s: FeatureSet) -> Self {
        s.0
    }
}

/// One GNSS-timestamped row of fused features.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncedFrame {
    pub t: f64,
    pub features: Vec<f64>,
    /// Distance from this fix to the next one, meters.
    pub label_distance: f64,
}

/// A frame mapped through [`NormStats`]; values are not clipped.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFrame {
    pub t: f64,
    pub features: Vec<f64>,
    pub label: f64,
}

/// Align CAN/IMU onto the GNSS clock and label each fix with the distance to
/// its successor. Produces `gnss.len() - 1` frames.
pub fn synchronize(
    gnss: &[GnssFix],
    can: &[CanSample],
    imu: &[ImuSample],
    features: &FeatureSet,
    earth: &EarthModel,
) -> Result<Vec<SyncedFrame>> {
    if gnss.is_empty() || can.is_empty() || imu.is_empty() {
        return Err(Error::invalid(format!(
            "all streams must be non-empty (gnss {}, can {}, imu {})",
            gnss.len(),
            can.len(),
            imu.len()
        )));
    }
    check_increasing("gnss", gnss.iter().map(|f| f.t))?;
    check_increasing("can", can.iter().map(|s| s.t))?;
    check_increasing("imu", imu.iter().map(|s| s.t))?;

    let mut frames = Vec::with_capacity(gnss.len().saturating_sub(1));
    let mut prev_distance = 0.0;
    for pair in gnss.windows(2) {
        let (fix, next) = (&pair[0], &pair[1]);
        let c = interpolate_at(can, fix.t)?;
        let m = interpolate_at(imu, fix.t)?;
        let label_distance = haversine_distance(&fix.pos, &next.pos, earth)?;
        let values = features
            .features()
            .iter()
            .map(|f| match f {
                Feature::CanSpeed => c.speed,
                Feature::Steering => c.steering_angle,
                Feature::AccelFwd => m.accel_forward,
                Feature::GnssSpeed => fix.speed,
                Feature::PrevDistance => prev_distance,
            })
            .collect::<Vec<_>>();
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite feature value {v} at t={}", fix.t)));
        }
        frames.push(SyncedFrame {
            t: fix.t,
            features: values,
            label_distance,
        });
        prev_distance = label_distance;
    }
    Ok(frames)
}

fn check_increasing(name: &str, times: impl Iterator<Item = f64>) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for (i, t) in times.enumerate() {
        if !t.is_finite() || t <= prev {
            return Err(Error::invalid(format!(
                "{name} stream is not strictly increasing in time at index {i} (t={t})"
            )));
        }
        prev = t;
    }
    Ok(())
}

/// Per-feature min/max plus label min/max, fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    pub features: FeatureSet,
    pub feature_min: Vec<f64>,
    pub feature_max: Vec<f64>,
    pub label_min: f64,
    pub label_max: f64,
}

/// Which quantity [`invert_norm`] maps back to physical units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormTarget {
    Label,
    Feature(usize),
}

impl NormStats {
    pub fn label_span(&self) -> f64 {
        self.label_max - self.label_min
    }

    pub fn normalize_features(&self, raw: &[f64], out: &mut [f64]) {
        for (j, (o, x)) in out.iter_mut().zip(raw).enumerate() {
            *o = (x - self.feature_min[j]) / (self.feature_max[j] - self.feature_min[j]);
        }
    }

    pub fn normalize_label(&self, label: f64) -> f64 {
        (label - self.label_min) / self.label_span()
    }

    pub fn denormalize_label(&self, value: f64) -> f64 {
        self.label_min + value * self.label_span()
    }
}

/// Min/max statistics over `frames[..train_count]`.
pub fn fit_norm(frames: &[SyncedFrame], train_count: usize, features: &FeatureSet) -> Result<NormStats> {
    if train_count < 2 {
        return Err(Error::invalid(format!("train_count must be at least 2, got {train_count}")));
    }
    if frames.len() < train_count {
        return Err(Error::InsufficientFrames {
            needed: train_count,
            got: frames.len(),
        });
    }
    let n = features.len();
    let train = &frames[..train_count];
    let mut feature_min = vec![f64::INFINITY; n];
    let mut feature_max = vec![f64::NEG_INFINITY; n];
    let mut label_min = f64::INFINITY;
    let mut label_max = f64::NEG_INFINITY;
    for frame in train {
        if frame.features.len() != n {
            return Err(Error::Shape(format!(
                "frame at t={} has {} features, expected {n}",
                frame.t,
                frame.features.len()
            )));
        }
        for (j, &x) in frame.features.iter().enumerate() {
            feature_min[j] = feature_min[j].min(x);
            feature_max[j] = feature_max[j].max(x);
        }
        label_min = label_min.min(frame.label_distance);
        label_max = label_max.max(frame.label_distance);
    }
    for (j, f) in features.features().iter().enumerate() {
        if feature_max[j] <= feature_min[j] {
            return Err(Error::DegenerateFeature {
                feature: f.name().to_string(),
                value: feature_min[j],
            });
        }
    }
    if label_max <= label_min {
        return Err(Error::DegenerateFeature {
            feature: "label_distance".to_string(),
            value: label_min,
        });
    }
    Ok(NormStats {
        features: features.clone(),
        feature_min,
        feature_max,
        label_min,
        label_max,
    })
}

pub fn apply_norm(frames: &[SyncedFrame], stats: &NormStats) -> Result<Vec<NormalizedFrame>> {
    let n = stats.features.len();
    frames
        .iter()
        .map(|f| {
            if f.features.len() != n {
                return Err(Error::Shape(format!(
                    "frame at t={} has {} features, expected {n}",
                    f.t,
                    f.features.len()
                )));
            }
            let mut features = vec![0.0; n];
            stats.normalize_features(&f.features, &mut features);
            Ok(NormalizedFrame {
                t: f.t,
                features,
                label: stats.normalize_label(f.label_distance),
            })
        })
        .collect()
}

pub fn invert_norm(value: f64, stats: &NormStats, which: NormTarget) -> Result<f64> {
    match which {
        NormTarget::Label => Ok(stats.denormalize_label(value)),
        NormTarget::Feature(j) if j < stats.feature_min.len() => {
            Ok(stats.feature_min[j] + value * (stats.feature_max[j] - stats.feature_min[j]))
        }
        NormTarget::Feature(j) => Err(Error::invalid(format!(
            "feature index {j} out of range for {} features",
            stats.feature_min.len()
        ))),
    }
}

pub const DEFAULT_TRAIN_FRAMES: usize = 4500;
pub const DEFAULT_VAL_FRAMES: usize = 1487;

/// Chronological train/validation split sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSizes {
    pub n_train: usize,
    /// `None` takes every frame after the training block.
    pub n_val: Option<usize>,
}

impl SplitSizes {
    /// 4500/1487 when there are enough frames, otherwise the same
    /// proportion with the remainder going to validation.
    pub fn default_for(len: usize) -> Self {
        if len >= DEFAULT_TRAIN_FRAMES + DEFAULT_VAL_FRAMES {
            SplitSizes {
                n_train: DEFAULT_TRAIN_FRAMES,
                n_val: Some(DEFAULT_VAL_FRAMES),
            }
        } else {
            let total = (DEFAULT_TRAIN_FRAMES + DEFAULT_VAL_FRAMES) as f64;
            SplitSizes {
                n_train: (len as f64 * DEFAULT_TRAIN_FRAMES as f64 / total).round() as usize,
                n_val: None,
            }
        }
    }
}

/// First `n_train` frames train, the following `n_val` (or all remaining)
/// frames validate.
pub fn split<T>(frames: &[T], sizes: SplitSizes) -> Result<(&[T], &[T])> {
    let end = match sizes.n_val {
        Some(v) => sizes.n_train + v,
        None => frames.len(),
    };
    if sizes.n_train == 0 || end > frames.len() || end <= sizes.n_train {
        return Err(Error::InsufficientFrames {
            needed: end.max(sizes.n_train + 1),
            got: frames.len(),
        });
    }
    Ok((&frames[..sizes.n_train], &frames[sizes.n_train..end]))
}

// ---------------------------------------------------------------------------
// CSV

struct Table {
    /// (line number, values in requested column order)
    rows: Vec<(u64, Vec<f64>)>,
}

fn read_table<R: Read>(reader: R, columns: &[&str]) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
    let idx = columns
        .iter()
        .map(|c| {
            headers.iter().position(|h| h == *c).ok_or_else(|| Error::Format {
                line: 1,
                message: format!("missing column `{c}` (header: {})", headers.iter().collect::<Vec<_>>().join(",")),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(&e, 0))?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut vals = Vec::with_capacity(idx.len());
        for (&i, c) in idx.iter().zip(columns) {
            let raw = rec.get(i).unwrap_or("");
            let v: f64 = raw.parse().map_err(|_| Error::Format {
                line,
                message: format!("column `{c}`: cannot parse `{raw}` as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Format {
                    line,
                    message: format!("column `{c}`: non-finite value `{raw}`"),
                });
            }
            vals.push(v);
        }
        rows.push((line, vals));
    }
    // stable sort on t (column 0), then reject duplicates
    rows.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]));
    for pair in rows.windows(2) {
        if pair[0].1[0] == pair[1].1[0] {
            return Err(Error::Format {
                line: pair[1].0,
                message: format!("duplicate timestamp {} (also on line {})", pair[1].1[0], pair[0].0),
            });
        }
    }
    Ok(Table { rows })
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Format {
        line,
        message: e.to_string(),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn nonneg_speed(line: u64, v: f64) -> Result<f64> {
    if v < 0.0 {
        return Err(Error::Format {
            line,
            message: format!("negative speed {v}"),
        });
    }
    Ok(v)
}

pub const GNSS_HEADER: [&str; 4] = ["t", "lat_deg", "lon_deg", "speed_mps"];
pub const CAN_HEADER: [&str; 3] = ["t", "speed_mps", "steering_deg"];
pub const IMU_HEADER: [&str; 4] = ["t", "ax_fwd", "ax_right", "ax_down"];

pub fn read_gnss_csv<R: Read>(reader: R) -> Result<Vec<GnssFix>> {
    read_table(reader, &GNSS_HEADER)?
        .rows
        .into_iter()
        .map(|(line, v)| {
            let pos = GeoPoint::new(v[1], v[2]).map_err(|e| Error::Format {
                line,
                message: e.to_string(),
            })?;
            Ok(GnssFix {
                t: v[0],
                pos,
                speed: nonneg_speed(line, v[3])?,
            })
        })
        .collect()
}

pub fn read_can_csv<R: Read>(reader: R) -> Result<Vec<CanSample>> {
    read_table(reader, &CAN_HEADER)?
        .rows
        .into_iter()
        .map(|(line, v)| {
            Ok(CanSample {
                t: v[0],
                speed: nonneg_speed(line, v[1])?,
                steering_angle: v[2],
            })
        })
        .collect()
}

pub fn read_imu_csv<R: Read>(reader: R) -> Result<Vec<ImuSample>> {
    Ok(read_table(reader, &IMU_HEADER)?
        .rows
        .into_iter()
        .map(|(_, v)| ImuSample {
            t: v[0],
            accel_forward: v[1],
            accel_right: v[2],
            accel_down: v[3],
        })
        .collect())
}

pub fn load_gnss_csv(path: impl AsRef<Path>) -> Result<Vec<GnssFix>> {
    read_gnss_csv(open(path.as_ref())?)
}

pub fn load_can_csv(path: impl AsRef<Path>) -> Result<Vec<CanSample>> {
    read_can_csv(open(path.as_ref())?)
}

pub fn load_imu_csv(path: impl AsRef<Path>) -> Result<Vec<ImuSample>> {
    read_imu_csv(open(path.as_ref())?)
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    let map = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(header).map_err(map)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(map)?;
    }
    w.flush().map_err(|e| Error::Malformed(e.to_string()))
}

pub fn write_gnss_csv<W: Write>(out: W, fixes: &[GnssFix]) -> Result<()> {
    write_rows(
        out,
        &GNSS_HEADER,
        fixes.iter().map(|f| vec![f.t, f.pos.lat_deg, f.pos.lon_deg, f.speed]),
    )
}

pub fn write_can_csv<W: Write>(out: W, samples: &[CanSample]) -> Result<()> {
    write_rows(
        out,
        &CAN_HEADER,
        samples.iter().map(|s| vec![s.t, s.speed, s.steering_angle]),
    )
}

pub fn write_imu_csv<W: Write>(out: W, samples: &[ImuSample]) -> Result<()> {
    write_rows(
        out,
        &IMU_HEADER,
        samples
            .iter()
            .map(|s| vec![s.t, s.accel_forward, s.accel_right, s.accel_down]),
    )
}

/// Writes `t,<feature names...>,label_distance`.
pub fn write_frames_csv<W: Write>(out: W, frames: &[SyncedFrame], features: &FeatureSet) -> Result<()> {
    let mut header = vec!["t"];
    header.extend(features.features().iter().map(|f| f.name()));
    header.push("label_distance");
    write_rows(
        out,
        &header,
        frames.iter().map(|f| {
            let mut row = Vec::with_capacity(f.features.len() + 2);
            row.push(f.t);
            row.extend_from_slice(&f.features);
            row.push(f.label_distance);
            row
        }),
    )
}

/// Reads a frames file; the feature set is taken from the columns between
/// `t` and `label_distance`. An empty file holds no frames.
pub fn read_frames_csv<R: Read>(mut reader: R) -> Result<(FeatureSet, Vec<SyncedFrame>)> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::Malformed(e.to_string()))?;
    if text.trim().is_empty() {
        return Ok((FeatureSet::default(), Vec::new()));
    }
    let header_line = text.lines().next().unwrap_or("");
    let names: Vec<&str> = header_line.split(',').map(str::trim).collect();
    if names.len() < 3 || names[0] != "t" || names[names.len() - 1] != "label_distance" {
        return Err(Error::Format {
            line: 1,
            message: format!("frames header must be `t,<features...>,label_distance`, got `{header_line}`"),
        });
    }
    let features = FeatureSet::new(
        names[1..names.len() - 1]
            .iter()
            .map(|n| n.parse())
            .collect::<Result<Vec<Feature>>>()
            .map_err(|e| Error::Format {
                line: 1,
                message: e.to_string(),
            })?,
    )
    .map_err(|e| Error::Format {
        line: 1,
        message: e.to_string(),
    })?;
    let table = read_table(text.as_bytes(), &names)?;
    let frames = table
        .rows
        .into_iter()
        .map(|(line, v)| {
            let label = v[v.len() - 1];
            if label < 0.0 {
                return Err(Error::Format {
                    line,
                    message: format!("negative label_distance {label}"),
                });
            }
            Ok(SyncedFrame {
                t: v[0],
                features: v[1..v.len() - 1].to_vec(),
                label_distance: label,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((features, frames))
}

pub fn load_frames_csv(path: impl AsRef<Path>) -> Result<(FeatureSet, Vec<SyncedFrame>)> {
    read_frames_csv(open(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TABLE1: &str = "t,lat_deg,lon_deg,speed_mps\n\
        238867.5,37.63443,-122.414,26.790\n\
        238867.6,37.63444,-122.414,26.838\n\
        238867.7,37.63444,-122.414,26.724\n\
        238867.8,37.63444,-122.414,26.858\n\
        238867.9,37.63444,-122.414,26.793\n";

    #[test]
    fn loads_sample_gnss_rows() {
        let fixes = read_gnss_csv(TABLE1.as_bytes()).unwrap();
        assert_eq!(fixes.len(), 5);
        assert_eq!(fixes[0].t, 238867.5);
        assert_eq!(fixes[0].speed, 26.790);
        assert_eq!(fixes[0].pos.lat_deg, 37.63443);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(read_gnss_csv("t,lat_deg,lon_deg,speed_mps\n".as_bytes())
            .unwrap()
            .is_empty());
        assert!(read_can_csv("t,speed_mps,steering_deg\r\n".as_bytes())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn nan_latitude_reports_line() {
        let text = "t,lat_deg,lon_deg,speed_mps\n1.0,37.0,-122.0,1.0\n1.1,NaN,-122.0,1.0\n";
        match read_gnss_csv(text.as_bytes()) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn missing_column_and_bad_number() {
        let err = read_can_csv("t,speed_mps\n1.0,2.0\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("steering_deg"), "{err}");
        let err = read_imu_csv("t,ax_fwd,ax_right,ax_down\n1.0,abc,0,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
    }

    #[test]
    fn rows_are_sorted_and_duplicates_rejected() {
        let text = "t,speed_mps,steering_deg\r\n2.0,1,0\r\n1.0,2,0\r\n";
        let can = read_can_csv(text.as_bytes()).unwrap();
        assert_eq!(can[0].t, 1.0);
        assert_eq!(can[1].t, 2.0);
        let dup = "t,speed_mps,steering_deg\n1.0,1,0\n2.0,2,0\n1.0,3,0\n";
        match read_can_csv(dup.as_bytes()) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_speed_rejected() {
        let text = "t,speed_mps,steering_deg\n1.0,-1,0\n";
        assert!(matches!(read_can_csv(text.as_bytes()), Err(Error::Format { line: 2, .. })));
    }

    #[test]
    fn interpolation_cases() {
        let s = [(1.0, 10.0), (2.0, 12.0)];
        assert_eq!(interpolate_at(&s, 1.5).unwrap().1, 11.0);
        assert_eq!(interpolate_at(&s, 1.0).unwrap().1, 10.0);
        assert_eq!(interpolate_at(&s, 2.7).unwrap().1, 12.0);
        assert_eq!(interpolate_at(&s, -3.0).unwrap().1, 10.0);
        let empty: [(f64, f64); 0] = [];
        assert!(interpolate_at(&empty, 1.0).is_err());
    }

    fn fix(t: f64, lat: f64, lon: f64) -> GnssFix {
        GnssFix {
            t,
            pos: GeoPoint::new(lat, lon).unwrap(),
            speed: 1.0,
        }
    }

    fn can1() -> Vec<CanSample> {
        vec![CanSample {
            t: 0.0,
            speed: 1.0,
            steering_angle: 0.0,
        }]
    }

    fn imu1() -> Vec<ImuSample> {
        vec![ImuSample {
            t: 0.0,
            accel_forward: 0.0,
            accel_right: 0.0,
            accel_down: -9.8,
        }]
    }

    #[test]
    fn stationary_pair_labels_zero() {
        let gnss = [fix(0.0, 10.0, 10.0), fix(0.1, 10.0, 10.0)];
        let frames = synchronize(&gnss, &can1(), &imu1(), &FeatureSet::default(), &EarthModel::default()).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].label_distance, 0.0);
    }

    #[test]
    fn equatorial_steps_label() {
        let step = 1e-5f64.to_degrees();
        let gnss = [fix(0.0, 0.0, 0.0), fix(0.1, 0.0, step), fix(0.2, 0.0, 2.0 * step)];
        let frames = synchronize(&gnss, &can1(), &imu1(), &FeatureSet::default(), &EarthModel::default()).unwrap();
        assert_eq!(frames.len(), 2);
        for f in &frames {
            assert!((f.label_distance - 63.71).abs() < 1e-4, "{}", f.label_distance);
        }
    }

    #[test]
    fn synchronize_interpolates_features() {
        let can = vec![
            CanSample { t: 0.0, speed: 10.0, steering_angle: 1.0 },
            CanSample { t: 0.2, speed: 12.0, steering_angle: 3.0 },
        ];
        let imu = vec![
            ImuSample { t: 0.0, accel_forward: 0.0, accel_right: 0.0, accel_down: 0.0 },
            ImuSample { t: 0.4, accel_forward: 4.0, accel_right: 0.0, accel_down: 0.0 },
        ];
        let gnss = [fix(0.1, 0.0, 0.0), fix(0.2, 0.0, 0.0)];
        let features = FeatureSet::new(vec![
            Feature::CanSpeed,
            Feature::Steering,
            Feature::AccelFwd,
            Feature::GnssSpeed,
            Feature::PrevDistance,
        ])
        .unwrap();
        let frames = synchronize(&gnss, &can, &imu, &features, &EarthModel::default()).unwrap();
        let f = &frames[0].features;
        assert!((f[0] - 11.0).abs() < 1e-12);
        assert!((f[1] - 2.0).abs() < 1e-12);
        assert!((f[2] - 1.0).abs() < 1e-12);
        assert_eq!(f[3], 1.0);
        assert_eq!(f[4], 0.0);
    }

    #[test]
    fn synchronize_rejects_empty_stream() {
        let gnss = [fix(0.0, 0.0, 0.0)];
        assert!(synchronize(&gnss, &[], &imu1(), &FeatureSet::default(), &EarthModel::default()).is_err());
        assert!(synchronize(&[], &can1(), &imu1(), &FeatureSet::default(), &EarthModel::default()).is_err());
    }

    #[test]
    fn five_thousand_nine_hundred_eighty_seven_fixes() {
        let gnss: Vec<GnssFix> = (0..5987)
            .map(|i| fix(i as f64 * 0.1, 37.0 + i as f64 * 1e-5, -122.0))
            .collect();
        let frames = synchronize(&gnss, &can1(), &imu1(), &FeatureSet::default(), &EarthModel::default()).unwrap();
        assert_eq!(frames.len(), 5986);
        assert!(frames.windows(2).all(|w| w[0].t < w[1].t));
    }

    fn frame(x: f64, label: f64) -> SyncedFrame {
        SyncedFrame {
            t: x,
            features: vec![x, 2.0 * x, -x],
            label_distance: label,
        }
    }

    #[test]
    fn norm_basic_values() {
        let frames = vec![frame(0.0, 1.0), frame(10.0, 3.0), frame(5.0, 2.0), frame(20.0, 9.0)];
        let stats = fit_norm(&frames, 2, &FeatureSet::default()).unwrap();
        let n = apply_norm(&frames, &stats).unwrap();
        assert_eq!(n[0].features[0], 0.0);
        assert_eq!(n[1].features[0], 1.0);
        assert_eq!(n[2].features[0], 0.5);
        assert_eq!(n[2].label, 0.5);
        // validation rows are not clipped
        assert_eq!(n[3].features[0], 2.0);
        assert_eq!(n[3].label, 4.0);
        assert_eq!(invert_norm(0.5, &stats, NormTarget::Feature(1)).unwrap(), 10.0);
        assert!(invert_norm(0.5, &stats, NormTarget::Feature(3)).is_err());
    }

    #[test]
    fn constant_feature_is_degenerate() {
        let frames = vec![
            SyncedFrame { t: 0.0, features: vec![1.0, 5.0, 0.0], label_distance: 1.0 },
            SyncedFrame { t: 1.0, features: vec![2.0, 5.0, 1.0], label_distance: 2.0 },
        ];
        match fit_norm(&frames, 2, &FeatureSet::default()) {
            Err(Error::DegenerateFeature { feature, .. }) => assert_eq!(feature, "steering"),
            other => panic!("{other:?}"),
        }
        assert!(fit_norm(&frames, 1, &FeatureSet::default()).is_err());
    }

    #[test]
    fn split_sizes() {
        let v: Vec<usize> = (0..5987).collect();
        let (tr, va) = split(&v, SplitSizes::default_for(v.len())).unwrap();
        assert_eq!((tr.len(), va.len()), (4500, 1487));
        let v: Vec<usize> = (0..10).collect();
        let (tr, va) = split(&v, SplitSizes { n_train: 7, n_val: None }).unwrap();
        assert_eq!(tr, &[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(va, &[7, 8, 9]);
        let v: Vec<usize> = (0..5).collect();
        assert!(split(&v, SplitSizes { n_train: 9, n_val: None }).is_err());
    }

    #[test]
    fn frames_csv_round_trip() {
        let frames = vec![frame(0.1, 1.25), frame(0.2, 2.5)];
        let mut buf = Vec::new();
        write_frames_csv(&mut buf, &frames, &FeatureSet::default()).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,can_speed,steering,accel_fwd,label_distance\n"));
        let (set, back) = read_frames_csv(buf.as_slice()).unwrap();
        assert_eq!(set, FeatureSet::default());
        assert_eq!(back, frames);
    }

    #[test]
    fn feature_list_parsing() {
        let s = FeatureSet::parse_list("can_speed,steering,accel_fwd,gnss_speed").unwrap();
        assert_eq!(s.len(), 4);
        assert!(FeatureSet::parse_list("can_speed,can_speed").is_err());
        assert!(FeatureSet::parse_list("bogus").is_err());
    }

    proptest! {
        #[test]
        fn knot_exactness(vals in prop::collection::vec(-1e3f64..1e3, 2..30), pick in any::<prop::sample::Index>()) {
            let samples: Vec<(f64, f64)> = vals.iter().enumerate().map(|(i, v)| (i as f64 * 0.02 + 0.013, *v)).collect();
            let s = samples[pick.index(samples.len())];
            prop_assert_eq!(interpolate_at(&samples, s.0).unwrap(), s);
        }

        #[test]
        fn norm_round_trip(xs in prop::collection::vec(-50.0f64..50.0, 1000)) {
            let frames: Vec<SyncedFrame> = (0..4).map(|i| frame(i as f64 * 10.0 - 15.0, i as f64 + 0.5)).collect();
            let stats = fit_norm(&frames, 4, &FeatureSet::default()).unwrap();
            let mut max_err: f64 = 0.0;
            for &x in &xs {
                let n = stats.normalize_label(x);
                let back = invert_norm(n, &stats, NormTarget::Label).unwrap();
                max_err = max_err.max((back - x).abs());
            }
            prop_assert!(max_err < 1e-12, "{}", max_err);
        }
    }
}

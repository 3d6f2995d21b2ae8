//! Versioned JSON model files.
//!
//! Floats are written in shortest round-trip form and parsed with correct
//! rounding, so save → load reproduces every parameter bit for bit.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::params::{Gate, LstmParams};
use super::{LstmModel, TrainConfig};
use crate::error::{Error, Result};
use crate::streams::NormStats;

pub const MODEL_FORMAT_VERSION: u64 = 1;
const FORMAT_TAG: &str = "gnss-sentry-lstm";

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    format: String,
    version: u64,
    config: TrainConfig,
    norm: NormStats,
    calibrated_prediction_error_m: Option<f64>,
    params: ParamsDoc,
}

#[derive(Serialize, Deserialize)]
struct ParamsDoc {
    hidden_size: usize,
    input_size: usize,
    gate_order: Vec<String>,
    w: Vec<Vec<f64>>,
    u: Vec<Vec<f64>>,
    b: Vec<f64>,
    w_out: Vec<f64>,
    b_out: f64,
}

fn rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.outer_iter().map(|r| r.to_vec()).collect()
}

fn matrix(name: &str, rows: Vec<Vec<f64>>, shape: (usize, usize)) -> Result<Array2<f64>> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::Malformed(format!("tensor `{name}` does not have shape {shape:?}")));
    }
    Array2::from_shape_vec(shape, rows.into_iter().flatten().collect())
        .map_err(|e| Error::Malformed(format!("tensor `{name}`: {e}")))
}

pub fn model_to_string(model: &LstmModel) -> Result<String> {
    model.check()?;
    let p = &model.params;
    let doc = ModelDoc {
        format: FORMAT_TAG.to_string(),
        version: MODEL_FORMAT_VERSION,
        config: model.config.clone(),
        norm: model.norm.clone(),
        calibrated_prediction_error_m: model.calibrated_prediction_error_m,
        params: ParamsDoc {
            hidden_size: p.hidden_size(),
            input_size: p.input_size(),
            gate_order: Gate::ORDER.iter().map(|g| g.name().to_string()).collect(),
            w: rows(&p.w),
            u: rows(&p.u),
            b: p.b.to_vec(),
            w_out: p.w_out.to_vec(),
            b_out: p.b_out,
        },
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Malformed(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn model_from_str(text: &str) -> Result<LstmModel> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("model file: {e}")))?;
    if value.get("format").and_then(|v| v.as_str()) != Some(FORMAT_TAG) {
        return Err(Error::Malformed(format!("not a {FORMAT_TAG} model file")));
    }
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Malformed("model file has no numeric `version`".into()))?;
    if version != MODEL_FORMAT_VERSION {
        return Err(Error::Version {
            found: version,
            supported: MODEL_FORMAT_VERSION,
        });
    }
    let doc: ModelDoc = serde_json::from_value(value).map_err(|e| Error::Malformed(format!("model file: {e}")))?;
    let (h, f) = (doc.params.hidden_size, doc.params.input_size);
    let expected_order: Vec<String> = Gate::ORDER.iter().map(|g| g.name().to_string()).collect();
    if doc.params.gate_order != expected_order {
        return Err(Error::Malformed(format!("unsupported gate order {:?}", doc.params.gate_order)));
    }
    if doc.params.b.len() != 4 * h || doc.params.w_out.len() != h {
        return Err(Error::Malformed("bias or head tensor has the wrong length".into()));
    }
    let params = LstmParams {
        w: matrix("w", doc.params.w, (4 * h, f))?,
        u: matrix("u", doc.params.u, (4 * h, h))?,
        b: Array1::from(doc.params.b),
        w_out: Array1::from(doc.params.w_out),
        b_out: doc.params.b_out,
    };
    let model = LstmModel {
        params,
        norm: doc.norm,
        config: doc.config,
        calibrated_prediction_error_m: doc.calibrated_prediction_error_m,
    };
    model.check().map_err(|e| Error::Malformed(e.to_string()))?;
    Ok(model)
}

pub fn save_model(model: &LstmModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)?).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LstmModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::FeatureSet;

    fn model() -> LstmModel {
        let config = TrainConfig {
            hidden_size: 5,
            window_len: 3,
            ..TrainConfig::default()
        };
        let mut params = LstmParams::seeded(5, 3, 77);
        params.b_out = 0.1 + 0.2;
        LstmModel {
            params,
            norm: NormStats {
                features: FeatureSet::default(),
                feature_min: vec![20.0, -3.5, -1.0 / 3.0],
                feature_max: vec![30.0, 4.25, 2.0 / 3.0],
                label_min: 2.0,
                label_max: 3.000_000_000_000_000_4,
            },
            config,
            calibrated_prediction_error_m: Some(0.065),
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        let text = model_to_string(&m).unwrap();
        let back = model_from_str(&text).unwrap();
        assert_eq!(back, m);
        for (a, b) in m.params.tensors().iter().zip(back.params.tensors()) {
            assert!(a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
        assert_eq!(model_to_string(&back).unwrap(), text);
    }

    #[test]
    fn truncated_file_is_a_format_error() {
        let text = model_to_string(&model()).unwrap();
        let cut = &text[..text.len() / 2];
        assert!(matches!(model_from_str(cut), Err(Error::Malformed(_))));
        assert!(matches!(model_from_str(""), Err(Error::Malformed(_))));
    }

    #[test]
    fn future_version_names_both() {
        let text = model_to_string(&model()).unwrap().replacen("\"version\": 1", "\"version\": 7", 1);
        let err = model_from_str(&text).unwrap_err();
        assert!(matches!(err, Error::Version { found: 7, supported: 1 }));
        let msg = err.to_string();
        assert!(msg.contains('7') && msg.contains('1'), "{msg}");
    }

    #[test]
    fn wrong_shape_rejected() {
        let text = model_to_string(&model()).unwrap().replacen("\"hidden_size\": 5,\n    \"input_size\"", "\"hidden_size\": 4,\n    \"input_size\"", 1);
        assert!(model_from_str(&text).is_err());
    }
}

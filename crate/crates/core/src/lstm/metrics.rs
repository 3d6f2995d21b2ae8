use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the root-mean-square error is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RmseMode {
    /// `sqrt(Σ r² / N)`.
    #[default]
    Standard,
    /// `sqrt(Σ r²) / N`, with the `1/N` outside the root.
    SumRoot,
}

fn check_lengths(pred: &[f64], truth: &[f64]) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} predictions, {} targets",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::invalid("metrics need at least one sample"));
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check_lengths(pred, truth)?;
    let sum: f64 = pred.iter().zip(truth).map(|(p, g)| (p - g).abs()).sum();
    Ok(sum / pred.len() as f64)
}

pub fn rmse(pred: &[f64], truth: &[f64], mode: RmseMode) -> Result<f64> {
    check_lengths(pred, truth)?;
    let n = pred.len() as f64;
    let ss: f64 = pred.iter().zip(truth).map(|(p, g)| (p - g) * (p - g)).sum();
    Ok(match mode {
        RmseMode::Standard => (ss / n).sqrt(),
        RmseMode::SumRoot => ss.sqrt() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(mae(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(mae(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 3.5);
        assert_eq!(rmse(&[0.0, 0.0], &[3.0, 4.0], RmseMode::Standard).unwrap(), 12.5f64.sqrt());
        assert_eq!(rmse(&[0.0, 0.0], &[3.0, 4.0], RmseMode::SumRoot).unwrap(), 2.5);
        assert_eq!(rmse(&[2.0], &[2.0], RmseMode::Standard).unwrap(), 0.0);
    }

    #[test]
    fn length_errors() {
        assert!(mae(&[1.0], &[1.0, 2.0]).is_err());
        assert!(rmse(&[], &[], RmseMode::Standard).is_err());
    }
}

//! BPTT gradients against central finite differences.

use gnss_sentry::lstm::{backward, forward_batch, LstmParams};
use ndarray::Array2;

const STEP: f64 = 1e-5;

fn batch_loss(p: &LstmParams, steps: &[Array2<f64>], truth: &[f64]) -> f64 {
    let cache = forward_batch(p, steps).unwrap();
    let pred = cache.predictions();
    pred.iter().zip(truth).map(|(y, t)| (y - t).abs()).sum::<f64>() / truth.len() as f64
}

/// Worst violation per tensor: relative error where |g| ≥ 1e-3, absolute
/// error elsewhere. Returns (max relative, max absolute).
fn compare(params: &LstmParams, steps: &[Array2<f64>], truth: &[f64]) -> Vec<(String, f64, f64)> {
    let cache = forward_batch(params, steps).unwrap();
    let grad = backward(params, &cache, truth).unwrap();
    let mut probe = params.clone();
    let mut out = Vec::new();
    for (k, name) in LstmParams::TENSOR_NAMES.iter().enumerate() {
        let (mut rel, mut abs) = (0.0f64, 0.0f64);
        for i in 0..grad.tensors()[k].len() {
            let g = grad.tensors()[k][i];
            let orig = probe.tensors()[k][i];
            probe.tensors_mut()[k][i] = orig + STEP;
            let up = batch_loss(&probe, steps, truth);
            probe.tensors_mut()[k][i] = orig - STEP;
            let down = batch_loss(&probe, steps, truth);
            probe.tensors_mut()[k][i] = orig;
            let numeric = (up - down) / (2.0 * STEP);
            if g.abs() >= 1e-3 {
                rel = rel.max((g - numeric).abs() / g.abs());
            } else {
                abs = abs.max((g - numeric).abs());
            }
        }
        out.push((name.to_string(), rel, abs));
    }
    out
}

fn steps(batch: usize, window: usize, inputs: usize, salt: usize) -> Vec<Array2<f64>> {
    (0..window)
        .map(|t| {
            Array2::from_shape_fn((batch, inputs), |(b, j)| {
                ((b * 13 + t * 7 + j * 3 + salt) % 17) as f64 / 17.0 - 0.25
            })
        })
        .collect()
}

fn assert_close(report: &[(String, f64, f64)]) {
    for (name, rel, abs) in report {
        assert!(*rel < 1e-4, "{name}: relative error {rel:e}");
        assert!(*abs < 1e-7, "{name}: absolute error {abs:e}");
    }
}

#[test]
fn single_window_over_prediction() {
    let p = LstmParams::seeded(8, 3, 42);
    let s = steps(1, 5, 3, 0);
    let y = forward_batch(&p, &s).unwrap().predictions()[0];
    assert_close(&compare(&p, &s, &[y - 0.5]));
}

#[test]
fn single_window_under_prediction() {
    let p = LstmParams::seeded(8, 3, 42);
    let s = steps(1, 5, 3, 1);
    let y = forward_batch(&p, &s).unwrap().predictions()[0];
    assert_close(&compare(&p, &s, &[y + 0.5]));
}

#[test]
fn mixed_sign_batch_across_seeds() {
    for seed in [1, 7, 2024] {
        let p = LstmParams::seeded(6, 4, seed);
        let s = steps(5, 7, 4, seed as usize);
        let pred = forward_batch(&p, &s).unwrap().predictions().to_vec();
        let truth: Vec<f64> = pred
            .iter()
            .enumerate()
            .map(|(i, y)| if i % 2 == 0 { y + 0.3 } else { y - 0.4 })
            .collect();
        assert_close(&compare(&p, &s, &truth));
    }
}

#[test]
fn trained_like_magnitudes() {
    // larger weights push gates toward saturation
    let mut p = LstmParams::seeded(8, 3, 9);
    for t in p.tensors_mut() {
        for v in t.iter_mut() {
            *v *= 3.0;
        }
    }
    let s = steps(3, 10, 3, 4);
    let pred = forward_batch(&p, &s).unwrap().predictions().to_vec();
    let truth: Vec<f64> = pred.iter().map(|y| y + 1.0).collect();
    assert_close(&compare(&p, &s, &truth));
}

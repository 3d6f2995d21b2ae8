//! Compares backpropagation-through-time gradients with central finite
//! differences on a small random LSTM.

use gnss_sentry::lstm::{backward, forward, LstmParams};
use ndarray::Array2;

fn loss(p: &LstmParams, window: &Array2<f64>, truth: f64) -> f64 {
    let (y, _) = forward(p, window.view()).expect("shapes");
    (y - truth).abs()
}

fn main() -> gnss_sentry::Result<()> {
    let (h, f, w) = (8, 3, 5);
    let params = LstmParams::seeded(h, f, 42);
    let window = Array2::from_shape_fn((w, f), |(t, j)| ((t * 5 + j * 2) % 7) as f64 / 7.0 - 0.3);
    let (y, cache) = forward(&params, window.view())?;
    let truth = y + 0.5;
    let grad = backward(&params, &cache, &[truth])?;

    let step = 1e-5;
    let mut probe = params.clone();
    for (k, name) in LstmParams::TENSOR_NAMES.iter().enumerate() {
        let analytic = grad.tensors()[k].to_vec();
        let mut worst: f64 = 0.0;
        for (i, &g) in analytic.iter().enumerate() {
            let orig = probe.tensors()[k][i];
            probe.tensors_mut()[k][i] = orig + step;
            let up = loss(&probe, &window, truth);
            probe.tensors_mut()[k][i] = orig - step;
            let down = loss(&probe, &window, truth);
            probe.tensors_mut()[k][i] = orig;
            let numeric = (up - down) / (2.0 * step);
            worst = worst.max((g - numeric).abs() / g.abs().max(numeric.abs()).max(1e-3));
        }
        println!("{name:>6}: {:>4} entries, worst relative error {worst:.2e}", analytic.len());
    }
    Ok(())
}

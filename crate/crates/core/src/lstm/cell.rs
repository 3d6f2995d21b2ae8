//! Batched LSTM forward pass and backpropagation through time.
//!
//! A batch is a sequence of `W` step matrices, each `B × F` (one row per
//! window). Hidden and cell state start at zero for every window.

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, ArrayView2, Axis};

use super::params::LstmParams;
use crate::error::{Error, Result};

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Activations of one time step, kept for the backward pass.
#[derive(Debug, Clone)]
struct StepCache {
    x: Array2<f64>,
    h_prev: Array2<f64>,
    c_prev: Array2<f64>,
    /// Activated gates `[i | f | o | g]`, `B × 4H`.
    gates: Array2<f64>,
    tanh_c: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct ForwardCache {
    steps: Vec<StepCache>,
    h_last: Array2<f64>,
    predictions: Array1<f64>,
    hidden: usize,
    inputs: usize,
}

impl ForwardCache {
    pub fn predictions(&self) -> &Array1<f64> {
        &self.predictions
    }

    pub fn batch_size(&self) -> usize {
        self.predictions.len()
    }

    pub fn window_len(&self) -> usize {
        self.steps.len()
    }
}

/// Runs the LSTM over a batch of windows. `steps[t]` holds the inputs of
/// time step `t` for every window in the batch.
pub fn forward_batch(params: &LstmParams, steps: &[Array2<f64>]) -> Result<ForwardCache> {
    params.check_shapes()?;
    let hidden = params.hidden_size();
    let inputs = params.input_size();
    let batch = match steps.first() {
        Some(x) => x.nrows(),
        None => return Err(Error::Shape("window has no time steps".into())),
    };
    if batch == 0 {
        return Err(Error::Shape("empty batch".into()));
    }
    if let Some(x) = steps.iter().find(|x| x.dim() != (batch, inputs)) {
        return Err(Error::Shape(format!(
            "step input is {:?}, expected ({batch}, {inputs})",
            x.dim()
        )));
    }

    let mut h = Array2::<f64>::zeros((batch, hidden));
    let mut c = Array2::<f64>::zeros((batch, hidden));
    let mut cache = Vec::with_capacity(steps.len());
    for x in steps {
        let mut z = Array2::from_shape_fn((batch, 4 * hidden), |(_, k)| params.b[k]);
        general_mat_mul(1.0, x, &params.w.t(), 1.0, &mut z);
        general_mat_mul(1.0, &h, &params.u.t(), 1.0, &mut z);

        let mut c_next = Array2::<f64>::zeros((batch, hidden));
        let mut h_next = Array2::<f64>::zeros((batch, hidden));
        let mut tanh_c = Array2::<f64>::zeros((batch, hidden));
        let rows = z
            .as_slice_mut()
            .expect("row-major")
            .chunks_exact_mut(4 * hidden)
            .zip(c.as_slice().expect("row-major").chunks_exact(hidden))
            .zip(c_next.as_slice_mut().expect("row-major").chunks_exact_mut(hidden))
            .zip(h_next.as_slice_mut().expect("row-major").chunks_exact_mut(hidden))
            .zip(tanh_c.as_slice_mut().expect("row-major").chunks_exact_mut(hidden));
        for ((((zr, cp), cn), hn), tc) in rows {
            let (sig, g) = zr.split_at_mut(3 * hidden);
            for v in sig.iter_mut() {
                *v = sigmoid(*v);
            }
            for v in g.iter_mut() {
                *v = v.tanh();
            }
            let (i, rest) = sig.split_at(hidden);
            let (f, o) = rest.split_at(hidden);
            for j in 0..hidden {
                let cv = f[j] * cp[j] + i[j] * g[j];
                let t = cv.tanh();
                cn[j] = cv;
                tc[j] = t;
                hn[j] = o[j] * t;
            }
        }
        cache.push(StepCache {
            x: x.clone(),
            h_prev: std::mem::replace(&mut h, h_next),
            c_prev: std::mem::replace(&mut c, c_next),
            gates: z,
            tanh_c,
        });
    }
    let predictions = h.dot(&params.w_out) + params.b_out;
    Ok(ForwardCache {
        steps: cache,
        h_last: h,
        predictions,
        hidden,
        inputs,
    })
}

/// Single window (`W × F`) convenience wrapper around [`forward_batch`].
pub fn forward(params: &LstmParams, window: ArrayView2<'_, f64>) -> Result<(f64, ForwardCache)> {
    if window.nrows() == 0 {
        return Err(Error::Shape("window has no time steps".into()));
    }
    let steps: Vec<Array2<f64>> = window
        .outer_iter()
        .map(|row| row.to_owned().insert_axis(Axis(0)))
        .collect();
    let cache = forward_batch(params, &steps)?;
    Ok((cache.predictions[0], cache))
}

/// Gradient of `mean_b |pred_b − truth_b|` with respect to every parameter.
/// The subgradient at zero residual is 0.
pub fn backward(params: &LstmParams, cache: &ForwardCache, truth: &[f64]) -> Result<LstmParams> {
    let hidden = params.hidden_size();
    if hidden != cache.hidden || params.input_size() != cache.inputs {
        return Err(Error::Shape(format!(
            "cache was built for H={} F={}, params have H={hidden} F={}",
            cache.hidden,
            cache.inputs,
            params.input_size()
        )));
    }
    let batch = cache.batch_size();
    if truth.len() != batch {
        return Err(Error::Shape(format!(
            "{} targets for a batch of {batch}",
            truth.len()
        )));
    }

    let scale = 1.0 / batch as f64;
    let dy = Array1::from_iter(cache.predictions.iter().zip(truth).map(|(&p, &t)| {
        let r = p - t;
        if r > 0.0 {
            scale
        } else if r < 0.0 {
            -scale
        } else {
            0.0
        }
    }));

    let mut grad = LstmParams::zeros(hidden, cache.inputs);
    grad.w_out = cache.h_last.t().dot(&dy);
    grad.b_out = dy.sum();

    // dh = dy ⊗ w_out
    let mut dh = Array2::from_shape_fn((batch, hidden), |(r, j)| dy[r] * params.w_out[j]);
    let mut dc = Array2::<f64>::zeros((batch, hidden));
    let mut dz = Array2::<f64>::zeros((batch, 4 * hidden));

    for step in cache.steps.iter().rev() {
        let rows = dz
            .as_slice_mut()
            .expect("row-major")
            .chunks_exact_mut(4 * hidden)
            .zip(step.gates.as_slice().expect("row-major").chunks_exact(4 * hidden))
            .zip(step.tanh_c.as_slice().expect("row-major").chunks_exact(hidden))
            .zip(step.c_prev.as_slice().expect("row-major").chunks_exact(hidden))
            .zip(dh.as_slice().expect("row-major").chunks_exact(hidden))
            .zip(dc.as_slice_mut().expect("row-major").chunks_exact_mut(hidden));
        for (((((dzr, gz), tcr), cpr), dhr), dcr) in rows {
            for j in 0..hidden {
                let (i, f, o, g) = (gz[j], gz[hidden + j], gz[2 * hidden + j], gz[3 * hidden + j]);
                let tc = tcr[j];
                let dhj = dhr[j];
                let d_o = dhj * tc;
                let dcj = dcr[j] + dhj * o * (1.0 - tc * tc);
                let d_i = dcj * g;
                let d_g = dcj * i;
                let d_f = dcj * cpr[j];
                dcr[j] = dcj * f;
                dzr[j] = d_i * i * (1.0 - i);
                dzr[hidden + j] = d_f * f * (1.0 - f);
                dzr[2 * hidden + j] = d_o * o * (1.0 - o);
                dzr[3 * hidden + j] = d_g * (1.0 - g * g);
            }
        }
        general_mat_mul(1.0, &dz.t(), &step.x, 1.0, &mut grad.w);
        general_mat_mul(1.0, &dz.t(), &step.h_prev, 1.0, &mut grad.u);
        grad.b += &dz.sum_axis(Axis(0));
        dh = dz.dot(&params.u);
    }
    Ok(grad)
}

/// Inputs of time step `t` gathered across windows: row `b` is
/// `frames[ends[b] + 1 - W + t]`.
pub fn gather_steps<'a, F>(features: F, ends: &[usize], window_len: usize, inputs: usize) -> Vec<Array2<f64>>
where
    F: Fn(usize) -> &'a [f64],
{
    (0..window_len)
        .map(|t| {
            let mut x = Array2::<f64>::zeros((ends.len(), inputs));
            for (r, &end) in ends.iter().enumerate() {
                let row = features(end + 1 - window_len + t);
                x.slice_mut(s![r, ..]).assign(&ndarray::aview1(row));
            }
            x
        })
        .collect()
}

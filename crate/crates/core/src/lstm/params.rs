use std::ops::Range;

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Gate blocks, in the row order used by the stacked weight matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Input,
    Forget,
    Output,
    Cell,
}

impl Gate {
    pub const ORDER: [Gate; 4] = [Gate::Input, Gate::Forget, Gate::Output, Gate::Cell];

    pub fn name(self) -> &'static str {
        match self {
            Gate::Input => "input",
            Gate::Forget => "forget",
            Gate::Output => "output",
            Gate::Cell => "cell",
        }
    }

    /// Rows of the stacked `4H` dimension owned by this gate.
    pub fn rows(self, hidden: usize) -> Range<usize> {
        let k = self as usize;
        k * hidden..(k + 1) * hidden
    }
}

/// Learnable parameters of a single-layer LSTM with a scalar dense head.
///
/// The four gate blocks are stacked along the first axis in [`Gate::ORDER`]:
/// `w` is `4H × F`, `u` is `4H × H`, `b` is `4H`. The same struct holds
/// gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    pub w: Array2<f64>,
    pub u: Array2<f64>,
    pub b: Array1<f64>,
    pub w_out: Array1<f64>,
    pub b_out: f64,
}

impl LstmParams {
    pub fn zeros(hidden: usize, inputs: usize) -> Self {
        LstmParams {
            w: Array2::zeros((4 * hidden, inputs)),
            u: Array2::zeros((4 * hidden, hidden)),
            b: Array1::zeros(4 * hidden),
            w_out: Array1::zeros(hidden),
            b_out: 0.0,
        }
    }

    /// Weights uniform in `[-1/√H, 1/√H]`, forget-gate bias 1, other biases 0.
    pub fn init(hidden: usize, inputs: usize, rng: &mut ChaCha8Rng) -> Self {
        let a = 1.0 / (hidden as f64).sqrt();
        let mut p = LstmParams::zeros(hidden, inputs);
        for v in p.w.iter_mut().chain(p.u.iter_mut()).chain(p.w_out.iter_mut()) {
            *v = rng.random_range(-a..=a);
        }
        p.b.slice_mut(s![Gate::Forget.rows(hidden)]).fill(1.0);
        p
    }

    pub fn seeded(hidden: usize, inputs: usize, seed: u64) -> Self {
        LstmParams::init(hidden, inputs, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn hidden_size(&self) -> usize {
        self.w_out.len()
    }

    pub fn input_size(&self) -> usize {
        self.w.ncols()
    }

    pub fn num_parameters(&self) -> usize {
        self.w.len() + self.u.len() + self.b.len() + self.w_out.len() + 1
    }

    pub fn gate_input_weights(&self, gate: Gate) -> ArrayView2<'_, f64> {
        self.w.slice(s![gate.rows(self.hidden_size()), ..])
    }

    pub fn gate_recurrent_weights(&self, gate: Gate) -> ArrayView2<'_, f64> {
        self.u.slice(s![gate.rows(self.hidden_size()), ..])
    }

    pub fn gate_bias(&self, gate: Gate) -> ArrayView1<'_, f64> {
        self.b.slice(s![gate.rows(self.hidden_size())])
    }

    pub fn check_shapes(&self) -> Result<()> {
        let h = self.hidden_size();
        let f = self.input_size();
        if h == 0 || f == 0 {
            return Err(Error::Shape(format!("hidden size {h} and input size {f} must be positive")));
        }
        if self.w.dim() != (4 * h, f) || self.u.dim() != (4 * h, h) || self.b.len() != 4 * h {
            return Err(Error::Shape(format!(
                "inconsistent LSTM tensors: w {:?}, u {:?}, b {}, w_out {h}",
                self.w.dim(),
                self.u.dim(),
                self.b.len()
            )));
        }
        Ok(())
    }

    pub fn same_shape(&self, other: &LstmParams) -> bool {
        self.w.dim() == other.w.dim()
            && self.u.dim() == other.u.dim()
            && self.b.len() == other.b.len()
            && self.w_out.len() == other.w_out.len()
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|v| v.is_finite()))
    }

    /// Flat views of every tensor: `w`, `u`, `b`, `w_out`, `b_out`.
    pub fn tensors(&self) -> [&[f64]; 5] {
        [
            self.w.as_slice().expect("standard layout"),
            self.u.as_slice().expect("standard layout"),
            self.b.as_slice().expect("standard layout"),
            self.w_out.as_slice().expect("standard layout"),
            std::slice::from_ref(&self.b_out),
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [f64]; 5] {
        [
            self.w.as_slice_mut().expect("standard layout"),
            self.u.as_slice_mut().expect("standard layout"),
            self.b.as_slice_mut().expect("standard layout"),
            self.w_out.as_slice_mut().expect("standard layout"),
            std::slice::from_mut(&mut self.b_out),
        ]
    }

    pub const TENSOR_NAMES: [&'static str; 5] = ["w", "u", "b", "w_out", "b_out"];
}

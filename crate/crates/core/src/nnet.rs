//! Dense network numerics: forward evaluation, exact reverse-mode gradients
//! via hand-derived layer backward passes, the Gaussian negative
//! log-likelihood, and the AdamW optimizer.
//!
//! The gradient contract is checked against central finite differences in the
//! test suite; the backward pass here is the implementation, the forward pass
//! is the oracle's only dependency.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::fnv1a64;
use crate::scalar::Scalar;
use crate::types::GaussianPrediction;

/// Floor added to the softplus output so sigma stays strictly positive.
pub const SIGMA_FLOOR: f64 = 1e-6;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::InvalidConfig("matrix needs at least one row".into()));
        }
        let ncols = rows[0].len();
        if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidConfig("matrix rows must be nonempty and rectangular".into()));
        }
        Ok(Self { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Flat row-major parameter view.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    ReLU,
    Identity,
}

impl Activation {
    fn apply<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::ReLU => {
                if z > T::zero() {
                    z
                } else {
                    T::zero()
                }
            }
            Activation::Identity => z,
        }
    }

    fn derivative<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::ReLU => {
                if z > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Activation::Identity => T::one(),
        }
    }
}

/// One affine layer with an elementwise activation.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer<T> {
    pub weight: Mat<T>,
    pub bias: Vec<T>,
    pub activation: Activation,
}

impl<T: Scalar> DenseLayer<T> {
    pub fn in_dim(&self) -> usize {
        self.weight.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.rows()
    }

    fn affine(&self, x: &[T]) -> Vec<T> {
        let mut out = self.bias.clone();
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (&w, &xi) in self.weight.row(i).iter().zip(x) {
                acc += w * xi;
            }
            *o += acc;
        }
        out
    }
}

/// Ordered stack of dense layers; hidden layers use ReLU, the last layer is
/// Identity.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpBlock<T> {
    pub layers: Vec<DenseLayer<T>>,
}

/// Per-layer activation record from a taped forward pass; enough to replay
/// exact gradients.
#[derive(Debug, Clone)]
pub struct MlpTape<T> {
    /// Input to each layer, in layer order.
    inputs: Vec<Vec<T>>,
    /// Pre-activation output of each layer.
    preacts: Vec<Vec<T>>,
}

/// Per-parameter buffers mirroring an [`MlpBlock`]; used for gradients and
/// optimizer moments.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGrads<T> {
    pub layers: Vec<LayerGrads<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrads<T> {
    pub d_weight: Mat<T>,
    pub d_bias: Vec<T>,
}

impl<T: Scalar> MlpGrads<T> {
    pub fn zeros_like(block: &MlpBlock<T>) -> Self {
        Self {
            layers: block
                .layers
                .iter()
                .map(|l| LayerGrads {
                    d_weight: Mat::zeros(l.out_dim(), l.in_dim()),
                    d_bias: vec![T::zero(); l.out_dim()],
                })
                .collect(),
        }
    }

    pub fn scale(&mut self, s: T) {
        for l in &mut self.layers {
            for w in l.d_weight.as_mut_slice() {
                *w *= s;
            }
            for b in &mut l.d_bias {
                *b *= s;
            }
        }
    }

    /// Largest absolute entry; used by tests to probe gradient flow.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for l in &self.layers {
            for &w in l.d_weight.as_slice() {
                m = m.max(w.abs());
            }
            for &b in &l.d_bias {
                m = m.max(b.abs());
            }
        }
        m
    }
}

impl<T: Scalar> MlpBlock<T> {
    /// Build a block from consecutive widths, e.g. `[2, 128, 128, 128]`.
    /// Hidden layers get ReLU, the last layer Identity. Weights draw from the
    /// uniform Xavier range `+-sqrt(6 / (fan_in + fan_out))` in row-major
    /// order; biases start at zero.
    pub fn new<R: Rng>(widths: &[usize], rng: &mut R) -> Self {
        assert!(widths.len() >= 2, "block needs at least one layer");
        let mut layers = Vec::with_capacity(widths.len() - 1);
        for (l, pair) in widths.windows(2).enumerate() {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let mut weight = Mat::zeros(fan_out, fan_in);
            for w in weight.as_mut_slice() {
                let u = rng.random::<f64>();
                *w = T::from_f64_lossy((2.0 * u - 1.0) * limit);
            }
            let activation = if l + 2 == widths.len() {
                Activation::Identity
            } else {
                Activation::ReLU
            };
            layers.push(DenseLayer { weight, bias: vec![T::zero(); fan_out], activation });
        }
        Self { layers }
    }

    /// Assemble from explicit layers, validating that widths chain and the
    /// last activation is Identity.
    pub fn from_layers(layers: Vec<DenseLayer<T>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidConfig("block needs at least one layer".into()));
        }
        for w in layers.windows(2) {
            if w[0].out_dim() != w[1].in_dim() {
                return Err(Error::DimMismatch {
                    expected: w[0].out_dim(),
                    got: w[1].in_dim(),
                });
            }
        }
        for l in &layers {
            if l.bias.len() != l.out_dim() {
                return Err(Error::DimMismatch { expected: l.out_dim(), got: l.bias.len() });
            }
        }
        if layers.last().unwrap().activation != Activation::Identity {
            return Err(Error::InvalidConfig("last layer must be Identity".into()));
        }
        Ok(Self { layers })
    }

    pub fn in_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.out_dim() * l.in_dim() + l.out_dim())
            .sum()
    }

    /// Plain forward pass.
    pub fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_input(x)?;
        let mut a = x.to_vec();
        for layer in &self.layers {
            let pre = layer.affine(&a);
            a = pre.into_iter().map(|z| layer.activation.apply(z)).collect();
        }
        Ok(a)
    }

    /// Forward pass that records the activation tape for a later backward.
    pub fn forward_taped(&self, x: &[T]) -> Result<(Vec<T>, MlpTape<T>)> {
        self.check_input(x)?;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut preacts = Vec::with_capacity(self.layers.len());
        let mut a = x.to_vec();
        for layer in &self.layers {
            inputs.push(a.clone());
            let pre = layer.affine(&a);
            a = pre.iter().map(|&z| layer.activation.apply(z)).collect();
            preacts.push(pre);
        }
        Ok((a, MlpTape { inputs, preacts }))
    }

    /// Reverse-mode gradient replay. Accumulates parameter gradients into
    /// `grads` (+=, so batches can share one buffer) and returns the gradient
    /// with respect to the block input.
    pub fn backward(&self, tape: &MlpTape<T>, d_out: &[T], grads: &mut MlpGrads<T>) -> Vec<T> {
        assert_eq!(tape.inputs.len(), self.layers.len(), "tape does not match block");
        let mut d = d_out.to_vec();
        for (l, layer) in self.layers.iter().enumerate().rev() {
            let pre = &tape.preacts[l];
            let input = &tape.inputs[l];
            let lg = &mut grads.layers[l];
            let mut d_in = vec![T::zero(); layer.in_dim()];
            for i in 0..layer.out_dim() {
                let dp = d[i] * layer.activation.derivative(pre[i]);
                lg.d_bias[i] += dp;
                let wrow = layer.weight.row(i);
                let grow = lg.d_weight.row_mut(i);
                for j in 0..layer.in_dim() {
                    grow[j] += dp * input[j];
                    d_in[j] += wrow[j] * dp;
                }
            }
            d = d_in;
        }
        d
    }

    /// FNV-1a over the parameter bit patterns in canonical order (layers in
    /// order, weights row-major, then bias).
    pub fn checksum(&self) -> u64 {
        let mut h = 0xCBF2_9CE4_8422_2325_u64;
        let mut feed = |v: T| {
            let bits = v.to_f64_lossy().to_bits();
            h = fnv1a64(&[h.to_le_bytes(), bits.to_le_bytes()].concat());
        };
        for l in &self.layers {
            for &w in l.weight.as_slice() {
                feed(w);
            }
            for &b in &l.bias {
                feed(b);
            }
        }
        h
    }

    fn check_input(&self, x: &[T]) -> Result<()> {
        if x.len() != self.in_dim() {
            return Err(Error::DimMismatch { expected: self.in_dim(), got: x.len() });
        }
        Ok(())
    }
}

/// Numerically stable softplus: `max(z, 0) + ln(1 + exp(-|z|))`.
pub fn softplus<T: Scalar>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

fn sigmoid<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// Map a raw decoder output of width `2 * d_y` into a Gaussian prediction:
/// the first half is the mean, the second half passes through
/// `softplus + SIGMA_FLOOR` to become the standard deviation.
pub fn sigma_head<T: Scalar>(raw: &[T]) -> Result<GaussianPrediction<T>> {
    if raw.len() % 2 != 0 {
        return Err(Error::DimMismatch { expected: raw.len() + 1, got: raw.len() });
    }
    let d = raw.len() / 2;
    let floor = T::from_f64_lossy(SIGMA_FLOOR);
    let mean = raw[..d].to_vec();
    let std = raw[d..].iter().map(|&z| softplus(z) + floor).collect();
    GaussianPrediction::new(mean, std)
}

/// Negative log-likelihood of `target` under an independent Gaussian:
/// `sum_k [ ln sigma_k + 0.5 ln(2 pi) + 0.5 ((target_k - mu_k) / sigma_k)^2 ]`.
pub fn gaussian_nll<T: Scalar>(pred: &GaussianPrediction<T>, target: &[T]) -> Result<T> {
    if pred.mean.len() != target.len() {
        return Err(Error::DimMismatch { expected: pred.mean.len(), got: target.len() });
    }
    let half = T::from_f64_lossy(0.5);
    let ln_2pi = (T::PI() + T::PI()).ln();
    let mut total = T::zero();
    for ((&mu, &sigma), &t) in pred.mean.iter().zip(&pred.std).zip(target) {
        if !(sigma > T::zero()) {
            return Err(Error::InvalidStd(format!("{sigma}")));
        }
        let z = (t - mu) / sigma;
        total += sigma.ln() + half * ln_2pi + half * z * z;
    }
    Ok(total)
}

/// Gradient of [`gaussian_nll`] with respect to the raw decoder output
/// (mean half and pre-std half), given the pre-std values `raw_std` that fed
/// [`sigma_head`].
pub fn gaussian_nll_backward<T: Scalar>(
    pred: &GaussianPrediction<T>,
    raw_std: &[T],
    target: &[T],
) -> Vec<T> {
    let d = pred.mean.len();
    let mut d_raw = vec![T::zero(); 2 * d];
    for k in 0..d {
        let mu = pred.mean[k];
        let sigma = pred.std[k];
        let diff = target[k] - mu;
        // d NLL / d mu = (mu - target) / sigma^2
        d_raw[k] = -diff / (sigma * sigma);
        // d NLL / d sigma = 1/sigma - diff^2 / sigma^3, then through softplus
        let d_sigma = T::one() / sigma - diff * diff / (sigma * sigma * sigma);
        d_raw[d + k] = d_sigma * sigmoid(raw_std[k]);
    }
    d_raw
}

/// AdamW state for one [`MlpBlock`]: moment buffers plus the hyperparameters.
#[derive(Debug, Clone)]
pub struct AdamWState<T> {
    pub m: MlpGrads<T>,
    pub v: MlpGrads<T>,
    pub step_count: u64,
    pub lr: T,
    pub weight_decay: T,
    pub beta1: T,
    pub beta2: T,
    pub eps: T,
}

impl<T: Scalar> AdamWState<T> {
    /// Fresh state with the standard defaults beta1=0.9, beta2=0.999,
    /// eps=1e-8.
    pub fn new(block: &MlpBlock<T>, lr: T, weight_decay: T) -> Self {
        Self {
            m: MlpGrads::zeros_like(block),
            v: MlpGrads::zeros_like(block),
            step_count: 0,
            lr,
            weight_decay,
            beta1: T::from_f64_lossy(0.9),
            beta2: T::from_f64_lossy(0.999),
            eps: T::from_f64_lossy(1e-8),
        }
    }
}

/// One decoupled-weight-decay Adam step:
/// `theta <- theta - lr * ( m_hat / (sqrt(v_hat) + eps) + weight_decay * theta )`
/// with bias-corrected moments.
pub fn adamw_step<T: Scalar>(block: &mut MlpBlock<T>, grads: &MlpGrads<T>, state: &mut AdamWState<T>) {
    state.step_count += 1;
    let t = state.step_count as i32;
    let one = T::one();
    let bc1 = one - state.beta1.powi(t);
    let bc2 = one - state.beta2.powi(t);
    for (l, layer) in block.layers.iter_mut().enumerate() {
        let g = &grads.layers[l];
        let m = &mut state.m.layers[l];
        let v = &mut state.v.layers[l];
        update_params(
            layer.weight.as_mut_slice(),
            g.d_weight.as_slice(),
            m.d_weight.as_mut_slice(),
            v.d_weight.as_mut_slice(),
            state.lr,
            state.weight_decay,
            state.beta1,
            state.beta2,
            state.eps,
            bc1,
            bc2,
        );
        update_params(
            &mut layer.bias,
            &g.d_bias,
            &mut m.d_bias,
            &mut v.d_bias,
            state.lr,
            state.weight_decay,
            state.beta1,
            state.beta2,
            state.eps,
            bc1,
            bc2,
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn update_params<T: Scalar>(
    params: &mut [T],
    grads: &[T],
    m: &mut [T],
    v: &mut [T],
    lr: T,
    wd: T,
    beta1: T,
    beta2: T,
    eps: T,
    bc1: T,
    bc2: T,
) {
    let one = T::one();
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = beta1 * m[i] + (one - beta1) * g;
        v[i] = beta2 * v[i] + (one - beta2) * g * g;
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        params[i] = params[i] - lr * (m_hat / (v_hat.sqrt() + eps) + wd * params[i]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use approx::assert_relative_eq;

    fn identity_layer(n: usize) -> DenseLayer<f64> {
        let mut w = Mat::zeros(n, n);
        for i in 0..n {
            w.row_mut(i)[i] = 1.0;
        }
        DenseLayer { weight: w, bias: vec![0.0; n], activation: Activation::Identity }
    }

    #[test]
    fn identity_block_passes_input_through() {
        let block = MlpBlock::from_layers(vec![identity_layer(2)]).unwrap();
        assert_eq!(block.forward(&[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn relu_layer_clamps() {
        let w = Mat::from_rows(vec![vec![1.0], vec![-1.0]]).unwrap();
        let relu = DenseLayer { weight: w, bias: vec![0.0, 0.0], activation: Activation::ReLU };
        let block = MlpBlock::from_layers(vec![relu, identity_layer(2)]).unwrap();
        assert_eq!(block.forward(&[3.0]).unwrap(), vec![3.0, 0.0]);
    }

    #[test]
    fn forward_matches_straight_line_reevaluation() {
        // Independent re-evaluation of the same parameters, written without
        // the layer abstractions.
        let mut rng = rng_from_seed(11);
        let block = MlpBlock::<f64>::new(&[3, 5, 2], &mut rng);
        let x = [0.3, -0.7, 1.1];

        let mut hidden = vec![0.0_f64; 5];
        for i in 0..5 {
            let mut acc = block.layers[0].bias[i];
            for j in 0..3 {
                acc += block.layers[0].weight.row(i)[j] * x[j];
            }
            hidden[i] = acc.max(0.0);
        }
        let mut out = vec![0.0_f64; 2];
        for i in 0..2 {
            let mut acc = block.layers[1].bias[i];
            forج in 0..5 {
                acc += block.layers[1].weight.row(i)[ج] * hidden[ج];
            }
            out[i] = acc;
        }

        assert_eq!(block.forward(&x).unwrap(), out);
    }

    #[test]
    fn forward_rejects_width_mismatch() {
        let block = MlpBlock::from_layers(vec![identity_layer(2)]).unwrap();
        assert!(matches!(
            block.forward(&[1.0]),
            Err(Error::DimMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn nll_at_mean_with_unit_sigma() {
        let pred = GaussianPrediction::new(vec![0.5], vec![1.0]).unwrap();
        let nll = gaussian_nll(&pred, &[0.5]).unwrap();
        assert_relative_eq!(nll, 0.9189385332046727, max_relative = 1e-15);
    }

    #[test]
    fn nll_one_sigma_away() {
        let pred = GaussianPrediction::new(vec![0.0], vec![1.0]).unwrap();
        let nll = gaussian_nll(&pred, &[1.0]).unwrap();
        assert_relative_eq!(nll, 1.4189385332046727, max_relative = 1e-15);
    }

    #[test]
    fn nll_doubling_sigma_adds_ln2_per_dim() {
        let p1 = GaussianPrediction::new(vec![0.2, 0.4], vec![0.5, 0.5]).unwrap();
        let p2 = GaussianPrediction::new(vec![0.2, 0.4], vec![1.0, 1.0]).unwrap();
        let n1 = gaussian_nll(&p1, &[0.2, 0.4]).unwrap();
        let n2 = gaussian_nll(&p2, &[0.2, 0.4]).unwrap();
        assert_relative_eq!(n2 - n1, 2.0 * std::f64::consts::LN_2, max_relative = 1e-12);
    }

    #[test]
    fn nll_minimized_at_target_gradient_sign_change() {
        let target = [0.7];
        let grad_at = |mu: f64| {
            let pred = GaussianPrediction::new(vec![mu], vec![0.3]).unwrap();
            // d NLL / d mu = (mu - target) / sigma^2
            let raw_std = [10.0]; // softplus(10) + floor ~ 10; unused for the mu half
            gaussian_nll_backward(&pred, &raw_std, &target)[0]
        };
        assert!(grad_at(0.6) < 0.0);
        assert!(grad_at(0.8) > 0.0);
        assert_relative_eq!(grad_at(0.7), 0.0);
    }

    #[test]
    fn quadratic_loss_gradient_on_linear_layer() {
        // loss = sum (W x + b - t)^2; d/dW = 2 (W x + b - t) x^T
        let w = Mat::from_rows(vec![vec![0.5, -1.0]]).unwrap();
        let layer = DenseLayer { weight: w, bias: vec![0.25], activation: Activation::Identity };
        let block = MlpBlock::from_layers(vec![layer]).unwrap();
        let x = [0.4, 0.9];
        let t = 1.3;

        let (y, tape) = block.forward_taped(&x).unwrap();
        let resid = y[0] - t;
        let mut grads = MlpGrads::zeros_like(&block);
        block.backward(&tape, &[2.0 * resid], &mut grads);

        assert_relative_eq!(grads.layers[0].d_weight.row(0)[0], 2.0 * resid * x[0]);
        assert_relative_eq!(grads.layers[0].d_weight.row(0)[1], 2.0 * resid * x[1]);
        assert_relative_eq!(grads.layers[0].d_bias[0], 2.0 * resid);
    }

    #[test]
    fn backward_matches_finite_differences_on_random_net() {
        let mut rng = rng_from_seed(5);
        let block = MlpBlock::<f64>::new(&[3, 6, 4, 2], &mut rng);
        let x: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let target: Vec<f64> = (0..2).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();

        let loss_of = |b: &MlpBlock<f64>| {
            let y = b.forward(&x).unwrap();
            y.iter().zip(&target).map(|(a, t)| (a - t) * (a - t)).sum::<f64>()
        };

        let (y, tape) = block.forward_taped(&x).unwrap();
        let d_out: Vec<f64> = y.iter().zip(&target).map(|(a, t)| 2.0 * (a - t)).collect();
        let mut grads = MlpGrads::zeros_like(&block);
        block.backward(&tape, &d_out, &mut grads);

        let h = 1e-5;
        for l in 0..block.layers.len() {
            for idx in 0..block.layers[l].weight.as_slice().len() {
                let mut plus = block.clone();
                plus.layers[l].weight.as_mut_slice()[idx] += h;
                let mut minus = block.clone();
                minus.layers[l].weight.as_mut_slice()[idx] -= h;
                let fd = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
                let an = grads.layers[l].d_weight.as_slice()[idx];
                let denom = an.abs().max(fd.abs()).max(1e-8);
                assert!(
                    ((an - fd) / denom).abs() < 1e-4,
                    "layer {l} weight {idx}: analytic {an} vs fd {fd}"
                );
            }
        }
    }

    #[test]
    fn adamw_single_step_hand_value() {
        let w = Mat::from_rows(vec![vec![1.0]]).unwrap();
        let layer = DenseLayer { weight: w, bias: vec![0.0], activation: Activation::Identity };
        let mut block = MlpBlock::from_layers(vec![layer]).unwrap();
        let mut grads = MlpGrads::zeros_like(&block);
        grads.layers[0].d_weight.as_mut_slice()[0] = 1.0;
        let mut state = AdamWState::new(&block, 0.1, 0.0);
        adamw_step(&mut block, &grads, &mut state);
        // m_hat = 1, v_hat = 1 => theta = 1 - 0.1 * 1/(1 + 1e-8)
        assert_relative_eq!(block.layers[0].weight.as_slice()[0], 0.9, epsilon = 1e-7);
        assert_eq!(state.step_count, 1);
    }

    #[test]
    fn adamw_zero_grad_zero_decay_is_identity() {
        let mut rng = rng_from_seed(21);
        let mut block = MlpBlock::<f64>::new(&[2, 3, 1], &mut rng);
        let before = block.clone();
        let grads = MlpGrads::zeros_like(&block);
        let mut state = AdamWState::new(&block, 0.1, 0.0);
        for _ in 0..5 {
            adamw_step(&mut block, &grads, &mut state);
        }
        assert_eq!(block, before);
    }

    #[test]
    fn adamw_decay_only_update() {
        let w = Mat::from_rows(vec![vec![1.0]]).unwrap();
        let layer = DenseLayer { weight: w, bias: vec![0.0], activation: Activation::Identity };
        let mut block = MlpBlock::from_layers(vec![layer]).unwrap();
        let grads = MlpGrads::zeros_like(&block);
        let mut state = AdamWState::new(&block, 0.1, 0.5);
        adamw_step(&mut block, &grads, &mut state);
        // theta = 1 - 0.1 * 0.5 * 1 = 0.95
        assert_relative_eq!(block.layers[0].weight.as_slice()[0], 0.95, epsilon = 1e-12);
    }

    #[test]
    fn sigma_head_is_strictly_positive() {
        let pred = sigma_head(&[0.3_f64, -40.0]).unwrap();
        assert_eq!(pred.mean, vec![0.3]);
        assert!(pred.std[0] > 0.0);
    }

    #[test]
    fn softplus_stable_for_large_inputs() {
        assert_relative_eq!(softplus(40.0_f64), 40.0, max_relative = 1e-12);
        assert!(softplus(-40.0_f64) > 0.0);
        assert_relative_eq!(softplus(0.0_f64), std::f64::consts::LN_2);
    }

    #[test]
    fn checksum_changes_with_parameters() {
        let mut rng = rng_from_seed(9);
        let block = MlpBlock::<f64>::new(&[2, 3, 1], &mut rng);
        let c0 = block.checksum();
        let mut other = block.clone();
        other.layers[0].bias[0] += 1e-9;
        assert_ne!(c0, other.checksum());
        assert_eq!(c0, block.checksum());
    }
}

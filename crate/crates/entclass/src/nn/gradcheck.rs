//! Finite-difference verification of every layer's analytic gradients.
//!
//! Each check builds a scalar objective L = <R, output> with a fixed
//! random projection R, computes analytic gradients via the layer's
//! backward pass, and compares against central differences
//! (f(x+h) - f(x-h)) / 2h on every parameter and input scalar.

use crate::numeric::{derive_stream, RngStream, Tensor};

use super::activation::{leaky_relu, leaky_relu_backward};
use super::conv::Conv1d;
use super::dense::Dense;
use super::loss::softmax_cross_entropy;
use super::lstm::{BiLstm, LstmParams};
use super::pool::MaxPool1d;
use super::{ConvFeatureMap, SequenceTensor};

const STEP: f64 = 1e-5;

/// Result of one layer's gradient check.
#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub layer: String,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub scalars_checked: usize,
    pub seeds: usize,
}

impl GradCheckReport {
    pub fn passed(&self) -> bool {
        self.max_rel_err.is_finite() && self.max_rel_err < self.tolerance
    }
}

/// |a - n| / max(|a|, |n|, 1e-8)
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8)
}

/// Compare an analytic gradient against central differences of `f` at
/// `theta`, returning the worst relative error.
pub fn max_central_diff_error(
    theta: &[f64],
    analytic: &[f64],
    h: f64,
    mut f: impl FnMut(&[f64]) -> f64,
) -> f64 {
    assert_eq!(theta.len(), analytic.len());
    let mut point = theta.to_vec();
    let mut worst = 0.0f64;
    for idx in 0..point.len() {
        let orig = point[idx];
        point[idx] = orig + h;
        let fp = f(&point);
        point[idx] = orig - h;
        let fm = f(&point);
        point[idx] = orig;
        let numeric = (fp - fm) / (2.0 * h);
        worst = worst.max(relative_error(analytic[idx], numeric));
    }
    worst
}

fn rand_vec(n: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect()
}

fn check_dense(seed: u64) -> (f64, usize) {
    let (n_in, n_out) = (7, 5);
    let mut rng = derive_stream(seed, 100);
    let layer = Dense::new(n_in, n_out, &mut rng);
    let x = rand_vec(n_in, &mut rng);
    let proj = rand_vec(n_out, &mut rng);

    let (grad_in, grads) = layer.backward(&x, &proj);
    let mut theta = layer.w.data().to_vec();
    theta.extend_from_slice(layer.b.data());
    theta.extend_from_slice(&x);
    let mut analytic = grads.w.into_data();
    analytic.extend(grads.b.into_data());
    analytic.extend(grad_in);

    let n_scalars = theta.len();
    let err = max_central_diff_error(&theta, &analytic, STEP, |t| {
        let (w, rest) = t.split_at(n_out * n_in);
        let (b, xs) = rest.split_at(n_out);
        let layer = Dense {
            w: Tensor::new(vec![n_out, n_in], w.to_vec()).unwrap(),
            b: Tensor::new(vec![n_out], b.to_vec()).unwrap(),
        };
        dot(&layer.forward(xs).unwrap(), &proj)
    });
    (err, n_scalars)
}

fn check_conv(seed: u64, stride: usize) -> (f64, usize) {
    let (c_in, c_out, k, len) = (2, 3, 3, 12);
    let mut rng = derive_stream(seed, 200 + stride as u64);
    let layer = Conv1d::new(c_in, c_out, k, stride, &mut rng);
    let input = ConvFeatureMap::new(
        c_in,
        len,
        Tensor::new(vec![c_in, len], rand_vec(c_in * len, &mut rng)).unwrap(),
    )
    .unwrap();
    let n_out = layer.out_len(len).unwrap();
    let proj = rand_vec(c_out * n_out, &mut rng);
    let grad_out = ConvFeatureMap::new(
        c_out,
        n_out,
        Tensor::new(vec![c_out, n_out], proj.clone()).unwrap(),
    )
    .unwrap();

    let (grad_in, grads) = layer.backward(&input, &grad_out);
    let mut theta = layer.w.data().to_vec();
    theta.extend_from_slice(layer.b.data());
    theta.extend_from_slice(input.values.data());
    let mut analytic = grads.w.into_data();
    analytic.extend(grads.b.into_data());
    analytic.extend_from_slice(grad_in.values.data());

    let n_scalars = theta.len();
    let err = max_central_diff_error(&theta, &analytic, STEP, |t| {
        let (w, rest) = t.split_at(c_out * c_in * k);
        let (b, xs) = rest.split_at(c_out);
        let layer = Conv1d {
            w: Tensor::new(vec![c_out, c_in, k], w.to_vec()).unwrap(),
            b: Tensor::new(vec![c_out], b.to_vec()).unwrap(),
            stride,
        };
        let input =
            ConvFeatureMap::new(c_in, len, Tensor::new(vec![c_in, len], xs.to_vec()).unwrap())
                .unwrap();
        dot(layer.forward(&input).unwrap().values.data(), &proj)
    });
    (err, n_scalars)
}

fn check_pool(seed: u64) -> (f64, usize) {
    let (channels, len) = (3, 12);
    let pool = MaxPool1d::new(2, 2);
    let mut rng = derive_stream(seed, 300);
    // Keep window entries separated so the +-h probes cannot flip argmax.
    let values: Vec<f64> = loop {
        let v = rand_vec(channels * len, &mut rng);
        let ok = v.chunks(2).all(|w| (w[0] - w[1]).abs() > 1e-3);
        if ok {
            break v;
        }
    };
    let input = ConvFeatureMap::new(
        channels,
        len,
        Tensor::new(vec![channels, len], values).unwrap(),
    )
    .unwrap();
    let n_out = pool.out_len(len).unwrap();
    let proj = rand_vec(channels * n_out, &mut rng);

    let (_, cache) = pool.forward(&input).unwrap();
    let grad_out = ConvFeatureMap::new(
        channels,
        n_out,
        Tensor::new(vec![channels, n_out], proj.clone()).unwrap(),
    )
    .unwrap();
    let grad_in = pool.backward(&cache, &grad_out);

    let theta = input.values.data().to_vec();
    let analytic = grad_in.values.data().to_vec();
    let n_scalars = theta.len();
    let err = max_central_diff_error(&theta, &analytic, STEP, |t| {
        let input =
            ConvFeatureMap::new(channels, len, Tensor::new(vec![channels, len], t.to_vec()).unwrap())
                .unwrap();
        let (out, _) = pool.forward(&input).unwrap();
        dot(out.values.data(), &proj)
    });
    (err, n_scalars)
}

fn check_leaky_relu(seed: u64) -> (f64, usize) {
    let n = 16;
    let slope = 0.01;
    let mut rng = derive_stream(seed, 400);
    // Keep samples away from the kink at 0.
    let x: Vec<f64> = (0..n)
        .map(|_| {
            let v = rng.uniform(-1.0, 1.0);
            if v.abs() < 1e-3 {
                v + 0.5f64.copysign(v + f64::MIN_POSITIVE)
            } else {
                v
            }
        })
        .collect();
    let proj = rand_vec(n, &mut rng);
    let analytic = leaky_relu_backward(&x, &proj, slope);
    let err = max_central_diff_error(&x, &analytic, 1e-6, |t| dot(&leaky_relu(t, slope), &proj));
    (err, n)
}

fn check_softmax_ce(seed: u64) -> (f64, usize) {
    let k = 6;
    let mut rng = derive_stream(seed, 500);
    let logits = rand_vec(k, &mut rng);
    let label = rng.below(k);
    let (_, analytic) = softmax_cross_entropy(&logits, label).unwrap();
    let err = max_central_diff_error(&logits, &analytic, STEP, |t| {
        softmax_cross_entropy(t, label).unwrap().0
    });
    (err, k)
}

fn check_lstm(seed: u64) -> (f64, usize) {
    let (input, hidden, t_len) = (3, 4, 5);
    let mut rng = derive_stream(seed, 600);
    let params = LstmParams::new(input, hidden, &mut rng);
    let xs = rand_vec(t_len * input, &mut rng);
    let projs: Vec<Vec<f64>> = (0..t_len).map(|_| rand_vec(hidden, &mut rng)).collect();

    let cache = params.run_sequence(xs.chunks(input));
    let (dxs, grads) = params.backward_sequence(&cache, &projs);

    let mut theta = params.w.data().to_vec();
    theta.extend_from_slice(params.u.data());
    theta.extend_from_slice(params.b.data());
    theta.extend_from_slice(&xs);
    let mut analytic = grads.w.into_data();
    analytic.extend(grads.u.into_data());
    analytic.extend(grads.b.into_data());
    analytic.extend(dxs.into_iter().flatten());

    let (wn, un, bn) = (4 * hidden * input, 4 * hidden * hidden, 4 * hidden);
    let n_scalars = theta.len();
    let err = max_central_diff_error(&theta, &analytic, STEP, |t| {
        let params = LstmParams {
            w: Tensor::new(vec![4 * hidden, input], t[..wn].to_vec()).unwrap(),
            u: Tensor::new(vec![4 * hidden, hidden], t[wn..wn + un].to_vec()).unwrap(),
            b: Tensor::new(vec![4 * hidden], t[wn + un..wn + un + bn].to_vec()).unwrap(),
            input,
            hidden,
        };
        let xs = &t[wn + un + bn..];
        let cache = params.run_sequence(xs.chunks(input));
        cache
            .hs
            .iter()
            .zip(&projs)
            .map(|(h, p)| dot(h, p))
            .sum()
    });
    (err, n_scalars)
}

fn check_bilstm(seed: u64) -> (f64, usize) {
    let (input, hidden, t_len) = (3, 3, 4);
    let mut rng = derive_stream(seed, 700);
    let bilstm = BiLstm::new(input, hidden, &mut rng);
    let xs = rand_vec(t_len * input, &mut rng);
    let proj_steps = rand_vec(t_len * 2 * hidden, &mut rng);
    let proj_summary = rand_vec(2 * hidden, &mut rng);

    let seq = SequenceTensor::new(t_len, input, Tensor::new(vec![t_len, input], xs.clone()).unwrap())
        .unwrap();
    let (_, cache) = bilstm.forward(&seq).unwrap();
    let d_steps = SequenceTensor::new(
        t_len,
        2 * hidden,
        Tensor::new(vec![t_len, 2 * hidden], proj_steps.clone()).unwrap(),
    )
    .unwrap();
    let (d_input, grads) = bilstm.backward(&cache, Some(&d_steps), Some(&proj_summary));

    let pack = |p: &LstmParams| {
        let mut v = p.w.data().to_vec();
        v.extend_from_slice(p.u.data());
        v.extend_from_slice(p.b.data());
        v
    };
    let mut theta = pack(&bilstm.fwd);
    theta.extend(pack(&bilstm.bwd));
    theta.extend_from_slice(&xs);
    let mut analytic = grads.fwd.w.into_data();
    analytic.extend(grads.fwd.u.into_data());
    analytic.extend(grads.fwd.b.into_data());
    analytic.extend(grads.bwd.w.into_data());
    analytic.extend(grads.bwd.u.into_data());
    analytic.extend(grads.bwd.b.into_data());
    analytic.extend_from_slice(d_input.values.data());

    let per_dir = 4 * hidden * input + 4 * hidden * hidden + 4 * hidden;
    let unpack = |t: &[f64]| {
        let (wn, un, bn) = (4 * hidden * input, 4 * hidden * hidden, 4 * hidden);
        LstmParams {
            w: Tensor::new(vec![4 * hidden, input], t[..wn].to_vec()).unwrap(),
            u: Tensor::new(vec![4 * hidden, hidden], t[wn..wn + un].to_vec()).unwrap(),
            b: Tensor::new(vec![4 * hidden], t[wn + un..wn + un + bn].to_vec()).unwrap(),
            input,
            hidden,
        }
    };
    let n_scalars = theta.len();
    let err = max_central_diff_error(&theta, &analytic, STEP, |t| {
        let bilstm = BiLstm {
            fwd: unpack(&t[..per_dir]),
            bwd: unpack(&t[per_dir..2 * per_dir]),
        };
        let xs = &t[2 * per_dir..];
        let seq =
            SequenceTensor::new(t_len, input, Tensor::new(vec![t_len, input], xs.to_vec()).unwrap())
                .unwrap();
        let (out, _) = bilstm.forward(&seq).unwrap();
        dot(out.per_step.values.data(), &proj_steps) + dot(&out.summary, &proj_summary)
    });
    (err, n_scalars)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Run the full layer battery over the given seeds, reporting the worst
/// relative error per layer.
pub fn run_battery(seeds: &[u64]) -> Vec<GradCheckReport> {
    let layers: Vec<(&str, f64, fn(u64) -> (f64, usize))> = vec![
        ("dense", 1e-7, check_dense),
        ("conv1d_stride1", 1e-6, |s| check_conv(s, 1)),
        ("conv1d_stride2", 1e-6, |s| check_conv(s, 2)),
        ("maxpool1d", 1e-6, check_pool),
        ("leaky_relu", 1e-8, check_leaky_relu),
        ("softmax_cross_entropy", 1e-7, check_softmax_ce),
        ("lstm_bptt", 1e-5, check_lstm),
        ("bilstm_bptt", 1e-5, check_bilstm),
    ];
    layers
        .into_iter()
        .map(|(name, tolerance, check)| {
            let mut worst = 0.0f64;
            let mut scalars = 0;
            for &seed in seeds {
                let (err, n) = check(seed);
                worst = worst.max(err);
                scalars = n;
            }
            GradCheckReport {
                layer: name.to_string(),
                max_rel_err: worst,
                tolerance,
                scalars_checked: scalars,
                seeds: seeds.len(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_on_a_few_seeds() {
        for report in run_battery(&[1, 2, 3]) {
            assert!(
                report.passed(),
                "{}: {} >= {}",
                report.layer,
                report.max_rel_err,
                report.tolerance
            );
        }
    }

    #[test]
    fn harness_catches_a_sign_flip() {
        // A deliberately broken analytic gradient must be reported.
        let mut rng = derive_stream(9, 0);
        let layer = Dense::new(4, 3, &mut rng);
        let x = rand_vec(4, &mut rng);
        let proj = rand_vec(3, &mut rng);
        let (grad_in, _) = layer.backward(&x, &proj);
        let broken: Vec<f64> = grad_in.iter().map(|g| -g).collect();
        let err = max_central_diff_error(&x, &broken, STEP, |t| {
            dot(&layer.forward(t).unwrap(), &proj)
        });
        assert!(err > 1e-2, "sign flip not detected: {err}");
    }
}

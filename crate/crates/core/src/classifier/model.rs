//! Multi-label logistic regression trained on soft targets with mini-batch
//! gradient descent.
//!
//! Weights start at zero (initial probability 0.5 everywhere) and examples
//! are visited in one seed-shuffled order that is reused every epoch, so a
//! (config, data, seed) triple always yields the same model. After each
//! epoch the full training loss is recorded; a non-finite loss aborts with a
//! divergence error naming the epoch.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::{ValueProfile, VALUE_COUNT};
use crate::classifier::features::SparseVec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// L2 penalty strength on the weight matrix (biases are not penalized).
    pub l2: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self { learning_rate: 0.2, epochs: 60, l2: 1e-4, batch_size: 32, seed: 42 }
    }
}

/// Trained weights: W is 10 × F, bias is length 10.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelWeights {
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    pub training_config: TrainingConfig,
    /// Full training loss after each epoch.
    pub epoch_losses: Vec<f64>,
}

impl ModelWeights {
    pub fn zeros(dim: usize, config: TrainingConfig) -> Self {
        Self {
            weights: vec![vec![0.0; dim]; VALUE_COUNT],
            bias: vec![0.0; VALUE_COUNT],
            training_config: config,
            epoch_losses: Vec::new(),
        }
    }

    pub fn from_parts(weights: Vec<Vec<f64>>, bias: Vec<f64>, config: TrainingConfig) -> Result<Self> {
        if weights.len() != VALUE_COUNT || bias.len() != VALUE_COUNT {
            return Err(Error::Shape(format!(
                "expected {VALUE_COUNT} weight rows and biases, got {} and {}",
                weights.len(),
                bias.len()
            )));
        }
        let dim = weights[0].len();
        if weights.iter().any(|row| row.len() != dim) {
            return Err(Error::Shape("ragged weight matrix".into()));
        }
        if weights.iter().flatten().chain(&bias).any(|w| !w.is_finite()) {
            return Err(Error::Input("non-finite model weight".into()));
        }
        Ok(Self { weights, bias, training_config: config, epoch_losses: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.weights[0].len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn dot(row: &[f64], x: &SparseVec) -> f64 {
    x.iter().map(|(column, value)| row[*column] * value).sum()
}

/// Numerically stable binary cross-entropy of a logit against a soft target:
/// max(z,0) − z·t + ln(1 + e^(−|z|)).
fn bce(z: f64, t: f64) -> f64 {
    z.max(0.0) - z * t + (-z.abs()).exp().ln_1p()
}

fn check_rows(features: &[SparseVec], targets: &[[f64; VALUE_COUNT]], dim: usize) -> Result<()> {
    if features.is_empty() || features.len() != targets.len() {
        return Err(Error::Input(format!(
            "need equal nonempty feature/target rows, got {} and {}",
            features.len(),
            targets.len()
        )));
    }
    for row in features {
        if let Some((column, _)) = row.iter().find(|(c, _)| *c >= dim) {
            return Err(Error::Shape(format!("feature column {column} out of range 0..{dim}")));
        }
    }
    for row in targets {
        for t in row {
            if !(*t == 0.0 || (*t - 0.6).abs() < 1e-9 || *t == 1.0) {
                return Err(Error::Input(format!("soft target must be 0.0/0.6/1.0, got {t}")));
            }
        }
    }
    Ok(())
}

/// Mean binary cross-entropy over all (example, value) cells plus the L2
/// penalty 0.5·λ·‖W‖².
pub fn loss(
    model: &ModelWeights,
    features: &[SparseVec],
    targets: &[[f64; VALUE_COUNT]],
) -> f64 {
    let cells = (features.len() * VALUE_COUNT) as f64;
    let data: f64 = features
        .iter()
        .zip(targets)
        .map(|(x, t)| {
            (0..VALUE_COUNT)
                .map(|v| bce(dot(&model.weights[v], x) + model.bias[v], t[v]))
                .sum::<f64>()
        })
        .sum();
    let penalty: f64 =
        model.weights.iter().flatten().map(|w| w * w).sum::<f64>() * 0.5 * model.training_config.l2;
    data / cells + penalty
}

/// Analytic gradient of [`loss`] with respect to (W, b).
pub fn gradient(
    model: &ModelWeights,
    features: &[SparseVec],
    targets: &[[f64; VALUE_COUNT]],
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let dim = model.dim();
    let cells = (features.len() * VALUE_COUNT) as f64;
    let mut grad_w = vec![vec![0.0; dim]; VALUE_COUNT];
    let mut grad_b = vec![0.0; VALUE_COUNT];
    for (x, t) in features.iter().zip(targets) {
        for v in 0..VALUE_COUNT {
            let p = sigmoid(dot(&model.weights[v], x) + model.bias[v]);
            let g = (p - t[v]) / cells;
            grad_b[v] += g;
            for (column, value) in x {
                grad_w[v][*column] += g * value;
            }
        }
    }
    let l2 = model.training_config.l2;
    for (g_row, w_row) in grad_w.iter_mut().zip(&model.weights) {
        for (g, w) in g_row.iter_mut().zip(w_row) {
            *g += l2 * w;
        }
    }
    (grad_w, grad_b)
}

/// Train from zero initialization with mini-batch gradient descent.
pub fn train(
    features: &[SparseVec],
    targets: &[[f64; VALUE_COUNT]],
    dim: usize,
    config: TrainingConfig,
) -> Result<ModelWeights> {
    check_rows(features, targets, dim)?;
    if config.batch_size == 0 {
        return Err(Error::Config("batch_size must be >= 1".into()));
    }
    if !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(Error::Config("learning_rate must be positive".into()));
    }
    if !(config.l2.is_finite() && config.l2 >= 0.0) {
        return Err(Error::Config("l2 must be >= 0".into()));
    }

    let mut model = ModelWeights::zeros(dim, config.clone());
    let mut order: Vec<usize> = (0..features.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    order.shuffle(&mut rng);

    for epoch in 0..config.epochs {
        for batch in order.chunks(config.batch_size) {
            let batch_features: Vec<SparseVec> =
                batch.iter().map(|i| features[*i].clone()).collect();
            let batch_targets: Vec<[f64; VALUE_COUNT]> =
                batch.iter().map(|i| targets[*i]).collect();
            let (grad_w, grad_b) = gradient(&model, &batch_features, &batch_targets);
            for v in 0..VALUE_COUNT {
                for (w, g) in model.weights[v].iter_mut().zip(&grad_w[v]) {
                    *w -= config.learning_rate * g;
                }
                model.bias[v] -= config.learning_rate * grad_b[v];
            }
        }
        let epoch_loss = loss(&model, features, targets);
        if !epoch_loss.is_finite() {
            return Err(Error::Divergence {
                epoch,
                message: format!("training loss is {epoch_loss}"),
            });
        }
        model.epoch_losses.push(epoch_loss);
    }
    Ok(model)
}

/// Per-value probabilities σ(Wx + b) for one post, kept strictly inside
/// (0, 1) even where the sigmoid saturates in f64.
pub fn predict_proba(model: &ModelWeights, features: &SparseVec) -> Result<ValueProfile> {
    let dim = model.dim();
    if let Some((column, _)) = features.iter().find(|(c, _)| *c >= dim) {
        return Err(Error::Shape(format!("feature column {column} out of range 0..{dim}")));
    }
    let mut probs = [0.0; VALUE_COUNT];
    for (v, p) in probs.iter_mut().enumerate() {
        *p = sigmoid(dot(&model.weights[v], features) + model.bias[v]).clamp(1e-15, 1.0 - 1e-15);
    }
    ValueProfile::new(probs)
}

pub fn predict_proba_many(model: &ModelWeights, features: &[SparseVec]) -> Result<Vec<ValueProfile>> {
    features.par_iter().map(|x| predict_proba(model, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_hot(column: usize, value: f64) -> SparseVec {
        vec![(column, value)]
    }

    #[test]
    fn zero_weights_predict_one_half_everywhere() {
        let model = ModelWeights::zeros(3, TrainingConfig::default());
        let probs = predict_proba(&model, &one_hot(1, 2.0)).unwrap();
        for v in probs.weights() {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn prediction_is_deterministic() {
        let model = ModelWeights::from_parts(
            (0..VALUE_COUNT).map(|v| vec![0.3 * v as f64, -0.1]).collect(),
            vec![0.05; VALUE_COUNT],
            TrainingConfig::default(),
        )
        .unwrap();
        let x = vec![(0, 1.5), (1, 0.5)];
        assert_eq!(predict_proba(&model, &x).unwrap(), predict_proba(&model, &x).unwrap());
    }

    #[test]
    fn hand_set_weights_match_scalar_sigmoid() {
        let mut weights = vec![vec![0.0]; VALUE_COUNT];
        weights[0][0] = 2.0;
        let mut bias = vec![0.0; VALUE_COUNT];
        bias[0] = -1.0;
        let model = ModelWeights::from_parts(weights, bias, TrainingConfig::default()).unwrap();
        let probs = predict_proba(&model, &one_hot(0, 3.0)).unwrap();
        // z = 2*3 - 1 = 5
        let expected = 1.0 / (1.0 + (-5.0f64).exp());
        assert!((probs.weights()[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn probabilities_stay_strictly_inside_unit_interval() {
        let mut weights = vec![vec![0.0]; VALUE_COUNT];
        weights[0][0] = 50.0;
        weights[1] = vec![-50.0];
        let model =
            ModelWeights::from_parts(weights, vec![0.0; VALUE_COUNT], TrainingConfig::default())
                .unwrap();
        let probs = predict_proba(&model, &one_hot(0, 1.0)).unwrap();
        for p in probs.weights() {
            assert!(*p > 0.0 && *p < 1.0);
        }
    }

    #[test]
    fn dimension_mismatch_is_a_shape_error() {
        let model = ModelWeights::zeros(2, TrainingConfig::default());
        assert!(matches!(predict_proba(&model, &one_hot(5, 1.0)), Err(Error::Shape(_))));
    }

    #[test]
    fn single_positive_example_converges_upward() {
        let features = vec![one_hot(0, 1.0)];
        let mut targets = [[0.0; VALUE_COUNT]; 1];
        targets[0][0] = 1.0;
        let mut last = 0.5;
        for epochs in [5, 20, 80] {
            let config = TrainingConfig {
                epochs,
                l2: 0.0,
                learning_rate: 1.0,
                batch_size: 1,
                seed: 1,
            };
            let model = train(&features, &targets, 1, config).unwrap();
            let p = predict_proba(&model, &features[0]).unwrap().weights()[0];
            assert!(p > last, "probability should increase with epochs: {p} vs {last}");
            last = p;
        }
        assert!(last > 0.9);
    }

    #[test]
    fn training_is_seed_deterministic() {
        let features: Vec<SparseVec> =
            (0..8).map(|i| vec![(i % 3, 1.0 + i as f64 * 0.1)]).collect();
        let targets: Vec<[f64; VALUE_COUNT]> = (0..8)
            .map(|i| {
                let mut t = [0.0; VALUE_COUNT];
                t[i % VALUE_COUNT] = 1.0;
                t
            })
            .collect();
        let config = TrainingConfig { epochs: 10, ..Default::default() };
        let a = train(&features, &targets, 3, config.clone()).unwrap();
        let b = train(&features, &targets, 3, config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn soft_targets_outside_the_scheme_are_rejected() {
        let features = vec![one_hot(0, 1.0)];
        let mut targets = [[0.0; VALUE_COUNT]; 1];
        targets[0][0] = 0.5;
        let result = train(&features, &targets, 1, TrainingConfig::default());
        assert!(matches!(result, Err(Error::Input(_))));
    }

    #[test]
    fn epoch_losses_are_recorded() {
        let features = vec![one_hot(0, 1.0), one_hot(1, 1.0)];
        let mut targets = [[0.0; VALUE_COUNT]; 2];
        targets[0][0] = 1.0;
        targets[1][1] = 0.6;
        let config = TrainingConfig { epochs: 7, ..Default::default() };
        let model = train(&features, &targets, 2, config).unwrap();
        assert_eq!(model.epoch_losses.len(), 7);
        assert!(model.epoch_losses.iter().all(|l| l.is_finite()));
    }
}

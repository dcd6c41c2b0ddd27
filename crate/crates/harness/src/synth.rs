//! Synthetic data generators for the experiments.

use chromatic_pac::gibbs::LabeledDataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Two isotropic Gaussian classes: `x | y=+1 ~ N(pos_mean, std² I)` and
/// `x | y=-1 ~ N(neg_mean, std² I)`, with `P(y=+1) = pos_prior`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoGaussians {
    pub pos_mean: Vec<f64>,
    pub neg_mean: Vec<f64>,
    pub std: f64,
    pub pos_prior: f64,
}

impl TwoGaussians {
    pub fn new(pos_mean: Vec<f64>, neg_mean: Vec<f64>, std: f64, pos_prior: f64) -> Result<Self, HarnessError> {
        if pos_mean.is_empty() || pos_mean.len() != neg_mean.len() {
            return Err(HarnessError::Config(format!(
                "class means must have the same positive dimension (got {} and {})",
                pos_mean.len(),
                neg_mean.len()
            )));
        }
        if !(std > 0.0 && std.is_finite()) {
            return Err(HarnessError::Config(format!("std = {std} must be positive")));
        }
        if !(pos_prior > 0.0 && pos_prior < 1.0) {
            return Err(HarnessError::Config(format!(
                "class prior {pos_prior} is outside (0, 1)"
            )));
        }
        Ok(Self {
            pos_mean,
            neg_mean,
            std,
            pos_prior,
        })
    }

    pub fn dim(&self) -> usize {
        self.pos_mean.len()
    }

    pub fn draw(&self, label: i8, rng: &mut impl Rng, out: &mut Vec<f64>) {
        let mean = if label > 0 { &self.pos_mean } else { &self.neg_mean };
        out.extend(mean.iter().map(|m| m + self.std * rng.sample::<f64, _>(StandardNormal)));
    }

    /// `pos` positives followed by `neg` negatives.
    pub fn bipartite_sample(&self, pos: usize, neg: usize, rng: &mut impl Rng) -> Result<LabeledDataset, HarnessError> {
        let mut features = Vec::with_capacity((pos + neg) * self.dim());
        let mut labels = Vec::with_capacity(pos + neg);
        for (label, count) in [(1i8, pos), (-1, neg)] {
            for _ in 0..count {
                self.draw(label, rng, &mut features);
                labels.push(label);
            }
        }
        Ok(LabeledDataset::new(self.dim(), features, labels)?)
    }

    /// `m` iid examples with labels drawn from the class prior.
    pub fn iid_sample(&self, m: usize, rng: &mut impl Rng) -> Result<LabeledDataset, HarnessError> {
        let mut features = Vec::with_capacity(m * self.dim());
        let mut labels = Vec::with_capacity(m);
        for _ in 0..m {
            let label = if rng.random::<f64>() < self.pos_prior { 1 } else { -1 };
            self.draw(label, rng, &mut features);
            labels.push(label);
        }
        Ok(LabeledDataset::new(self.dim(), features, labels)?)
    }
}

/// Linearly separable data in `d` dimensions: alternating labels, features
/// `N(2y u, I)` with `u = (1, …, 1)/√d`, resampled until `y u·x ≥ margin`.
pub fn separable_dataset(m: usize, d: usize, margin: f64, seed: u64) -> Result<LabeledDataset, HarnessError> {
    if d == 0 {
        return Err(HarnessError::Config("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (d as f64).sqrt();
    let mut features = Vec::with_capacity(m * d);
    let mut labels = Vec::with_capacity(m);
    let mut x = vec![0.0; d];
    for i in 0..m {
        let y: i8 = if i % 2 == 0 { 1 } else { -1 };
        loop {
            for xk in x.iter_mut() {
                *xk = 2.0 * y as f64 * scale + rng.sample::<f64, _>(StandardNormal);
            }
            if y as f64 * scale * x.iter().sum::<f64>() >= margin {
                break;
            }
        }
        features.extend_from_slice(&x);
        labels.push(y);
    }
    Ok(LabeledDataset::new(d, features, labels)?)
}

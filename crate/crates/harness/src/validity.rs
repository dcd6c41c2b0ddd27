//! Monte Carlo check that a bound holds with probability at least `1 - δ`.
//!
//! Each draw samples a fresh training set, computes the Gibbs risk and the
//! bound on it, and counts a violation when a large-sample estimate of the
//! true risk lies above the bound.

use std::str::FromStr;

use chromatic_pac::bounds::{auc_bound, iid_bound, BoundResult};
use chromatic_pac::gibbs::{gibbs_error_auc, gibbs_error_binary, substream_chunks, GaussianLinearPosterior, PairSet};
use serde::Serialize;

use crate::config::KeyValues;
use crate::synth::TwoGaussians;
use crate::HarnessError;

pub const MIN_DRAWS: usize = 100;
pub const DEFAULT_REFERENCE_SIZE: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidityMode {
    /// Bipartite ranking sample, AUC bound with `χ* = ℓ_max`.
    Auc,
    /// iid classification sample, `χ* = 1`.
    Iid,
}

impl FromStr for ValidityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auc" => Ok(ValidityMode::Auc),
            "iid" => Ok(ValidityMode::Iid),
            other => Err(format!("unknown mode {other:?} (expected auc or iid)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityConfig {
    pub mode: ValidityMode,
    pub distribution: TwoGaussians,
    /// Sample size. In AUC mode it is split between the classes by the
    /// class prior.
    pub l: usize,
    pub n_draws: usize,
    pub delta: f64,
    pub w: Vec<f64>,
    pub mu: f64,
    pub seed: u64,
    /// Number of pairs (AUC) or examples (iid) behind the true-risk estimate.
    pub reference_size: usize,
}

impl ValidityConfig {
    pub const KEYS: [&'static str; 12] = [
        "mode",
        "pos_mean",
        "neg_mean",
        "std",
        "pos_prior",
        "l",
        "draws",
        "delta",
        "w",
        "mu",
        "seed",
        "reference_size",
    ];

    pub fn from_key_values(kv: &KeyValues) -> Result<Self, HarnessError> {
        kv.check_keys(&Self::KEYS)?;
        let need = |k: &str| HarnessError::Config(format!("missing required key {k:?}"));
        let distribution = TwoGaussians::new(
            kv.list("pos_mean")?.ok_or_else(|| need("pos_mean"))?,
            kv.list("neg_mean")?.ok_or_else(|| need("neg_mean"))?,
            kv.get_or("std", 1.0)?,
            kv.get_or("pos_prior", 0.5)?,
        )?;
        let dim = distribution.dim();
        let config = Self {
            mode: kv.get_or("mode", ValidityMode::Auc)?,
            distribution,
            l: kv.require("l")?,
            n_draws: kv.get_or("draws", 1000)?,
            delta: kv.get_or("delta", 0.1)?,
            w: kv.list("w")?.unwrap_or_else(|| vec![1.0; dim]),
            mu: kv.require("mu")?,
            seed: kv.get_or("seed", 0)?,
            reference_size: kv.get_or("reference_size", DEFAULT_REFERENCE_SIZE)?,
        };
        config.validate()?;
        Ok(config)
    }

    /// Class counts of one draw in AUC mode.
    pub fn class_sizes(&self) -> (usize, usize) {
        let pos = (self.l as f64 * self.distribution.pos_prior).round() as usize;
        let pos = pos.clamp(1, self.l.saturating_sub(1).max(1));
        (pos, self.l - pos)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_draws < MIN_DRAWS {
            return Err(HarnessError::Config(format!(
                "draws = {} is below the minimum {MIN_DRAWS}",
                self.n_draws
            )));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(HarnessError::Config(format!(
                "delta = {} is outside (0, 1]",
                self.delta
            )));
        }
        let min_l = if self.mode == ValidityMode::Auc { 2 } else { 1 };
        if self.l < min_l {
            return Err(HarnessError::Config(format!("l = {} is below {min_l}", self.l)));
        }
        if self.w.len() != self.distribution.dim() {
            return Err(HarnessError::Config(format!(
                "w has {} entries but the data has dimension {}",
                self.w.len(),
                self.distribution.dim()
            )));
        }
        if self.reference_size == 0 {
            return Err(HarnessError::Config("reference_size must be positive".into()));
        }
        Ok(())
    }

    pub fn posterior(&self) -> Result<GaussianLinearPosterior, HarnessError> {
        Ok(GaussianLinearPosterior::new(&self.w, self.mu)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub mode: ValidityMode,
    pub l: usize,
    pub lpos: Option<usize>,
    pub lneg: Option<usize>,
    pub n_draws: usize,
    pub delta: f64,
    pub kl: f64,
    /// Large-sample estimate of the true Gibbs risk and its standard error.
    pub reference_risk: f64,
    pub reference_std_error: f64,
    pub mean_empirical: f64,
    pub mean_bound: f64,
    pub violations: usize,
    pub violation_rate: f64,
    /// `δ + 3 sqrt(δ(1-δ)/n_draws)`
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Mean and standard error of the Gibbs loss over `n` fresh pairs (AUC) or
/// examples (iid).
pub fn reference_risk(config: &ValidityConfig) -> Result<(f64, f64), HarnessError> {
    let post = config.posterior()?;
    let dist = &config.distribution;
    let n = config.reference_size;
    let sums = substream_chunks(n, config.seed, |rng, count| {
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        let mut buf = Vec::with_capacity(2 * dist.dim());
        for _ in 0..count {
            buf.clear();
            let loss = match config.mode {
                ValidityMode::Auc => {
                    dist.draw(1, rng, &mut buf);
                    dist.draw(-1, rng, &mut buf);
                    let (pos, neg) = buf.split_at_mut(dist.dim());
                    pos.iter_mut().zip(neg.iter()).for_each(|(p, n)| *p -= n);
                    post.point_error(pos, 1.0)
                }
                ValidityMode::Iid => {
                    let label = if rand::Rng::random::<f64>(rng) < dist.pos_prior {
                        1
                    } else {
                        -1
                    };
                    dist.draw(label, rng, &mut buf);
                    post.point_error(&buf, label as f64)
                }
            };
            sum += loss;
            sum_sq += loss * loss;
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = sums.iter().fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 {
        (sum_sq - nf * mean * mean).max(0.0) / (nf - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / nf).sqrt()))
}

fn one_draw(
    config: &ValidityConfig,
    post: &GaussianLinearPosterior,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<BoundResult, HarnessError> {
    let kl = post.kl_to_prior();
    Ok(match config.mode {
        ValidityMode::Auc => {
            let (pos, neg) = config.class_sizes();
            let sample = config.distribution.bipartite_sample(pos, neg, rng)?;
            let pairs = PairSet::all(&sample)?;
            let ehat = gibbs_error_auc(post, &sample, &pairs)?;
            auc_bound(pos, neg, kl, config.delta, ehat)?
        }
        ValidityMode::Iid => {
            let sample = config.distribution.iid_sample(config.l, rng)?;
            let ehat = gibbs_error_binary(post, &sample)?;
            iid_bound(config.l, kl, config.delta, ehat)?
        }
    })
}

pub fn run_validity(config: &ValidityConfig) -> Result<ValidityReport, HarnessError> {
    config.validate()?;
    let post = config.posterior()?;
    let (reference, reference_se) = reference_risk(config)?;
    let chunks = substream_chunks(config.n_draws, config.seed.wrapping_add(1), |rng, count| {
        (0..count)
            .map(|_| one_draw(config, &post, rng))
            .collect::<Result<Vec<_>, _>>()
    });
    let mut results = Vec::with_capacity(config.n_draws);
    for chunk in chunks {
        results.extend(chunk?);
    }
    let n = results.len() as f64;
    let violations = results.iter().filter(|r| reference > r.risk_bound_kl).count();
    let violation_rate = violations as f64 / n;
    let delta = config.delta;
    let tolerance = delta + 3.0 * (delta * (1.0 - delta) / n).sqrt();
    let (lpos, lneg) = match config.mode {
        ValidityMode::Auc => {
            let (p, q) = config.class_sizes();
            (Some(p), Some(q))
        }
        ValidityMode::Iid => (None, None),
    };
    Ok(ValidityReport {
        mode: config.mode,
        l: config.l,
        lpos,
        lneg,
        n_draws: config.n_draws,
        delta,
        kl: post.kl_to_prior(),
        reference_risk: reference,
        reference_std_error: reference_se,
        mean_empirical: results.iter().map(|r| r.empirical_gibbs).sum::<f64>() / n,
        mean_bound: results.iter().map(|r| r.risk_bound_kl).sum::<f64>() / n,
        violations,
        violation_rate,
        tolerance,
        within_tolerance: violation_rate <= tolerance,
    })
}

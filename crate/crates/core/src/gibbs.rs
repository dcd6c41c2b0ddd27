//! Gibbs risks of Gaussian posteriors over linear scorers, empirical AUC and
//! ranking risks, Monte Carlo checks, and a small hinge-loss trainer.
//!
//! For `v ~ N(μ ŵ, I)` and an input `x`, `v·x` is Gaussian with mean
//! `μ ŵ·x` and variance `‖x‖²`, so a point with label `y` is misclassified
//! with probability `Φ̄(μ y ŵ·x / ‖x‖)`.

use std::str::FromStr;

use libm::erfc;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::BipartiteRankingShape;
use crate::depgraph::{validate_cover, CoverError, DependencyGraph, FractionalCover};

/// Draws per Monte Carlo chunk. Each chunk owns one random substream.
pub const MC_CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GibbsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("feature dimension must be positive")]
    ZeroDimension,
    #[error("row {index}: label {value} is not -1 or +1")]
    InvalidLabel { index: usize, value: f64 },
    #[error("row {index}: non-finite value")]
    NonFinite { index: usize },
    #[error("weight vector has zero norm")]
    ZeroDirection,
    #[error("posterior scale mu = {0} must be positive and finite")]
    InvalidScale(f64),
    #[error("class counts {pos}/{neg}: both classes need at least one example")]
    EmptyClass { pos: usize, neg: usize },
    #[error("index {index} out of range for {len} examples")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("example {0} appears more than once in the pair set")]
    RepeatedIndex(usize),
    #[error("example {index} has label {label} but was listed as {side}")]
    LabelMismatch {
        index: usize,
        label: i8,
        side: &'static str,
    },
    #[error("need at least {needed} examples, got {got}")]
    TooFewExamples { needed: usize, got: usize },
    #[error("regularization lambda = {0} must be positive")]
    InvalidRegularization(f64),
    #[error("number of Monte Carlo samples must be positive")]
    NoSamples,
    #[error("moment order r = {0} must be at least 1")]
    InvalidMomentOrder(f64),
    #[error("cover elements must all have the same size (element {element} has {size}, expected {expected})")]
    UnequalElements {
        element: usize,
        size: usize,
        expected: usize,
    },
    #[error("generator produces {generator} losses but the graph has {graph} vertices")]
    GeneratorSize { generator: usize, graph: usize },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Standard normal upper tail `P(N(0,1) > x)`.
pub fn normal_upper_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `f(x) = w·x`; the pairwise rule is `h(x, x') = w·(x - x')`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearScorer {
    weights: Vec<f64>,
}

impl LinearScorer {
    pub fn new(weights: Vec<f64>) -> Result<Self, GibbsError> {
        if weights.is_empty() {
            return Err(GibbsError::ZeroDimension);
        }
        if let Some(index) = weights.iter().position(|w| !w.is_finite()) {
            return Err(GibbsError::NonFinite { index });
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x)
    }

    pub fn pairwise(&self, x: &[f64], x_prime: &[f64]) -> f64 {
        self.score(x) - self.score(x_prime)
    }
}

/// `N(μ ŵ, I)` with `‖ŵ‖ = 1`; its KL to the prior `N(0, I)` is `μ²/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianLinearPosterior {
    direction: Vec<f64>,
    mu: f64,
}

impl GaussianLinearPosterior {
    /// Normalizes `w` and uses the given scale.
    pub fn new(w: &[f64], mu: f64) -> Result<Self, GibbsError> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(GibbsError::InvalidScale(mu));
        }
        let scorer = LinearScorer::new(w.to_vec())?;
        let n = norm(scorer.weights());
        if n == 0.0 {
            return Err(GibbsError::ZeroDirection);
        }
        Ok(Self {
            direction: scorer.weights.iter().map(|x| x / n).collect(),
            mu,
        })
    }

    /// Direction `w / ‖w‖` with scale `μ = ‖w‖`.
    pub fn from_weights(w: &[f64]) -> Result<Self, GibbsError> {
        Self::new(w, norm(w))
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn kl_to_prior(&self) -> f64 {
        0.5 * self.mu * self.mu
    }

    /// Misclassification probability of a point with margin sign `y`.
    /// Zero inputs give 1/2.
    pub fn point_error(&self, x: &[f64], y: f64) -> f64 {
        let n = norm(x);
        if n == 0.0 {
            return 0.5;
        }
        normal_upper_tail(self.mu * y * dot(&self.direction, x) / n)
    }
}

/// Feature matrix (row-major) with ±1 labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledDataset {
    dim: usize,
    features: Vec<f64>,
    labels: Vec<i8>,
}

impl LabeledDataset {
    pub fn new(dim: usize, features: Vec<f64>, labels: Vec<i8>) -> Result<Self, GibbsError> {
        if dim == 0 {
            return Err(GibbsError::ZeroDimension);
        }
        if labels.is_empty() {
            return Err(GibbsError::EmptyDataset);
        }
        if features.len() != dim * labels.len() {
            return Err(GibbsError::DimensionMismatch {
                expected: dim * labels.len(),
                got: features.len(),
            });
        }
        if let Some(index) = labels.iter().position(|&y| y != 1 && y != -1) {
            return Err(GibbsError::InvalidLabel {
                index,
                value: labels[index] as f64,
            });
        }
        if let Some(k) = features.iter().position(|x| !x.is_finite()) {
            return Err(GibbsError::NonFinite { index: k / dim });
        }
        Ok(Self { dim, features, labels })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<i8>) -> Result<Self, GibbsError> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(GibbsError::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Self::new(dim, rows.concat(), labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn label(&self, i: usize) -> i8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn pos_count(&self) -> usize {
        self.labels.iter().filter(|&&y| y == 1).count()
    }

    pub fn neg_count(&self) -> usize {
        self.len() - self.pos_count()
    }

    /// Subset of rows in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            dim: self.dim,
            features: indices.iter().flat_map(|&i| self.row(i).iter().copied()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// Feature matrix with real-valued targets, for the ranking risk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredSample {
    dim: usize,
    features: Vec<f64>,
    scores: Vec<f64>,
}

impl ScoredSample {
    pub fn new(dim: usize, features: Vec<f64>, scores: Vec<f64>) -> Result<Self, GibbsError> {
        if dim == 0 {
            return Err(GibbsError::ZeroDimension);
        }
        if features.len() != dim * scores.len() {
            return Err(GibbsError::DimensionMismatch {
                expected: dim * scores.len(),
                got: features.len(),
            });
        }
        if let Some(index) = scores.iter().position(|y| !y.is_finite()) {
            return Err(GibbsError::NonFinite { index });
        }
        if let Some(k) = features.iter().position(|x| !x.is_finite()) {
            return Err(GibbsError::NonFinite { index: k / dim });
        }
        Ok(Self { dim, features, scores })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn score(&self, i: usize) -> f64 {
        self.scores[i]
    }
}

/// Positive and negative example indices; pair `(pos[i], neg[j])` is vertex
/// `i * neg.len() + j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairSet {
    pos: Vec<usize>,
    neg: Vec<usize>,
}

impl PairSet {
    pub fn new(data: &LabeledDataset, pos: Vec<usize>, neg: Vec<usize>) -> Result<Self, GibbsError> {
        if pos.is_empty() || neg.is_empty() {
            return Err(GibbsError::EmptyClass {
                pos: pos.len(),
                neg: neg.len(),
            });
        }
        let mut seen = vec![false; data.len()];
        for (list, side, label) in [(&pos, "positive", 1i8), (&neg, "negative", -1)] {
            for &i in list {
                if i >= data.len() {
                    return Err(GibbsError::IndexOutOfRange {
                        index: i,
                        len: data.len(),
                    });
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(GibbsError::RepeatedIndex(i));
                }
                if data.label(i) != label {
                    return Err(GibbsError::LabelMismatch {
                        index: i,
                        label: data.label(i),
                        side,
                    });
                }
            }
        }
        Ok(Self { pos, neg })
    }

    /// Every positive paired with every negative.
    pub fn all(data: &LabeledDataset) -> Result<Self, GibbsError> {
        let pos = (0..data.len()).filter(|&i| data.label(i) == 1).collect();
        let neg = (0..data.len()).filter(|&i| data.label(i) == -1).collect();
        Self::new(data, pos, neg)
    }

    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    pub fn neg(&self) -> &[usize] {
        &self.neg
    }

    pub fn pair_count(&self) -> usize {
        self.pos.len() * self.neg.len()
    }

    pub fn shape(&self) -> BipartiteRankingShape {
        BipartiteRankingShape::new(self.pos.len(), self.neg.len()).expect("nonempty classes")
    }

    /// Rows `x_i - x_j` in pair order, all labeled +1: a pair is misranked
    /// exactly when its difference is misclassified.
    pub fn difference_dataset(&self, data: &LabeledDataset) -> LabeledDataset {
        let mut features = Vec::with_capacity(self.pair_count() * data.dim());
        for &i in &self.pos {
            for &j in &self.neg {
                features.extend(data.row(i).iter().zip(data.row(j)).map(|(a, b)| a - b));
            }
        }
        LabeledDataset {
            dim: data.dim(),
            features,
            labels: vec![1; self.pair_count()],
        }
    }
}

/// How a tie between a positive and a negative score is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieMode {
    /// Ties are not errors.
    Strict,
    /// Ties count 1/2.
    #[default]
    Half,
}

impl TieMode {
    fn weight(self) -> f64 {
        match self {
            TieMode::Strict => 0.0,
            TieMode::Half => 0.5,
        }
    }
}

impl FromStr for TieMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(TieMode::Strict),
            "half" => Ok(TieMode::Half),
            other => Err(format!("unknown tie mode {other:?} (expected strict or half)")),
        }
    }
}

fn check_dim(expected: usize, got: usize) -> Result<(), GibbsError> {
    if expected == got {
        Ok(())
    } else {
        Err(GibbsError::DimensionMismatch { expected, got })
    }
}

/// Closed-form Gibbs classification error on `data`.
pub fn gibbs_error_binary(post: &GaussianLinearPosterior, data: &LabeledDataset) -> Result<f64, GibbsError> {
    check_dim(post.dim(), data.dim())?;
    let total: f64 = (0..data.len())
        .map(|i| post.point_error(data.row(i), data.label(i) as f64))
        .sum();
    Ok(total / data.len() as f64)
}

/// Closed-form Gibbs bipartite misranking rate over all pairs of `pairs`.
pub fn gibbs_error_auc(
    post: &GaussianLinearPosterior,
    data: &LabeledDataset,
    pairs: &PairSet,
) -> Result<f64, GibbsError> {
    check_dim(post.dim(), data.dim())?;
    let mut diff = vec![0.0; data.dim()];
    let mut total = 0.0;
    for &i in &pairs.pos {
        for &j in &pairs.neg {
            for ((d, a), b) in diff.iter_mut().zip(data.row(i)).zip(data.row(j)) {
                *d = a - b;
            }
            total += post.point_error(&diff, 1.0);
        }
    }
    Ok(total / pairs.pair_count() as f64)
}

/// Runs `f` on `ceil(n / MC_CHUNK)` chunks in parallel. Chunk `c` gets the
/// ChaCha8 stream `c` of `seed` and is told how many draws it owns, so the
/// output depends only on `(n, seed)` and never on the thread count.
pub fn substream_chunks<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let chunks = n.div_ceil(MC_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(n - c * MC_CHUNK);
            f(&mut rng, count)
        })
        .collect()
}

/// Monte Carlo estimate with a standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub rate: f64,
    /// `sqrt(p(1-p)/n)` with `p` kept at least `1/(2n)` away from 0 and 1.
    /// Each draw's loss lies in `[0, 1]`, so this never understates the
    /// true standard error.
    pub std_error: f64,
    pub n_samples: usize,
}

/// Samples `v = μŵ + g`, `g ~ N(0, I)`, and averages the 0-1 loss of
/// `sign(v·x)` over the data; a zero margin counts 1/2.
pub fn mc_gibbs_error(
    post: &GaussianLinearPosterior,
    data: &LabeledDataset,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate, GibbsError> {
    check_dim(post.dim(), data.dim())?;
    if n_samples == 0 {
        return Err(GibbsError::NoSamples);
    }
    let d = data.dim();
    let m = data.len() as f64;
    let mean: Vec<f64> = post.direction.iter().map(|w| post.mu * w).collect();
    let sums = substream_chunks(n_samples, seed, |rng, count| {
        let mut v = vec![0.0; d];
        let mut sum = 0.0;
        for _ in 0..count {
            for (vk, mk) in v.iter_mut().zip(&mean) {
                *vk = mk + rng.sample::<f64, _>(StandardNormal);
            }
            let mut errors = 0.0;
            for i in 0..data.len() {
                let margin = data.label(i) as f64 * dot(&v, data.row(i));
                if margin < 0.0 {
                    errors += 1.0;
                } else if margin == 0.0 {
                    errors += 0.5;
                }
            }
            sum += errors / m;
        }
        sum
    });
    let n = n_samples as f64;
    let rate = sums.iter().sum::<f64>() / n;
    let p = rate.clamp(0.5 / n, 1.0 - 0.5 / n);
    Ok(McEstimate {
        rate,
        std_error: (p * (1.0 - p) / n).sqrt(),
        n_samples,
    })
}

/// Fraction of pairs ranked the wrong way by `scorer`, i.e. `f(x_pos) <
/// f(x_neg)`, with ties weighted by `tie_mode`. Sort based, `O(ℓ log ℓ)`.
pub fn empirical_auc_risk(
    scorer: &LinearScorer,
    data: &LabeledDataset,
    pairs: &PairSet,
    tie_mode: TieMode,
) -> Result<f64, GibbsError> {
    check_dim(scorer.dim(), data.dim())?;
    let pos: Vec<f64> = pairs.pos.iter().map(|&i| scorer.score(data.row(i))).collect();
    let neg: Vec<f64> = pairs.neg.iter().map(|&j| scorer.score(data.row(j))).collect();
    auc_risk_from_scores(&pos, &neg, tie_mode)
}

/// Misranking rate of raw scores: the fraction of `(p, n)` pairs with
/// `pos[p] < neg[n]`, ties weighted by `tie_mode`.
pub fn auc_risk_from_scores(pos: &[f64], neg: &[f64], tie_mode: TieMode) -> Result<f64, GibbsError> {
    if pos.is_empty() || neg.is_empty() {
        return Err(GibbsError::EmptyClass {
            pos: pos.len(),
            neg: neg.len(),
        });
    }
    if let Some(index) = pos.iter().chain(neg).position(|s| !s.is_finite()) {
        return Err(GibbsError::NonFinite { index });
    }
    let mut neg = neg.to_vec();
    neg.sort_by(f64::total_cmp);
    let tie = tie_mode.weight();
    let mut total = 0.0;
    for &s in pos {
        let below_or_equal = neg.partition_point(|&x| x <= s);
        let below = neg.partition_point(|&x| x < s);
        let above = neg.len() - below_or_equal;
        total += above as f64 + tie * (below_or_equal - below) as f64;
    }
    Ok(total / (pos.len() * neg.len()) as f64)
}

/// Average of `1[(Y_i - Y_j) h(X_i, X_j) < 0]` over ordered pairs `i != j`.
pub fn empirical_ranking_risk<H>(h: H, sample: &ScoredSample) -> Result<f64, GibbsError>
where
    H: Fn(&[f64], &[f64]) -> f64,
{
    let l = sample.len();
    if l < 2 {
        return Err(GibbsError::TooFewExamples { needed: 2, got: l });
    }
    let mut wrong = 0usize;
    for i in 0..l {
        for j in 0..l {
            if i != j && (sample.score(i) - sample.score(j)) * h(sample.row(i), sample.row(j)) < 0.0 {
                wrong += 1;
            }
        }
    }
    Ok(wrong as f64 / (l * (l - 1)) as f64)
}

/// Hinge-loss stochastic subgradient descent without bias (Pegasos): step
/// `1/(λt)`, projection onto the ball of radius `1/√λ`, and the average of
/// all iterates as output. One epoch visits every example once in a
/// shuffled order.
pub fn train_linear(data: &LabeledDataset, lambda: f64, epochs: usize, seed: u64) -> Result<LinearScorer, GibbsError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(GibbsError::InvalidRegularization(lambda));
    }
    let d = data.dim();
    let radius = 1.0 / lambda.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut w = vec![0.0; d];
    let mut avg = vec![0.0; d];
    let mut t = 0usize;
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let x = data.row(i);
            let y = data.label(i) as f64;
            let active = y * dot(&w, x) < 1.0;
            let shrink = 1.0 - eta * lambda;
            for (k, wk) in w.iter_mut().enumerate() {
                *wk *= shrink;
                if active {
                    *wk += eta * y * x[k];
                }
            }
            let n = norm(&w);
            if n > radius {
                w.iter_mut().for_each(|wk| *wk *= radius / n);
            }
            let tf = t as f64;
            for (a, wk) in avg.iter_mut().zip(&w) {
                *a += (wk - *a) / tf;
            }
        }
    }
    LinearScorer::new(avg)
}

/// Source of dependent samples for [`moment_comparison`]. A draw returns
/// the Gibbs loss of every vertex of the dependency graph.
pub trait DependentGenerator: Sync {
    fn vertex_count(&self) -> usize;
    fn draw_losses(&self, post: &GaussianLinearPosterior, rng: &mut ChaCha8Rng) -> Vec<f64>;
}

/// Bipartite ranking sample in one dimension: `ℓ⁺` draws from
/// `N(pos_mean, std²)`, `ℓ⁻` from `N(neg_mean, std²)`; vertices are pairs.
#[derive(Debug, Clone)]
pub struct BipartiteGaussianGenerator {
    pub shape: BipartiteRankingShape,
    pub pos_mean: f64,
    pub neg_mean: f64,
    pub std: f64,
}

impl DependentGenerator for BipartiteGaussianGenerator {
    fn vertex_count(&self) -> usize {
        self.shape.pair_count()
    }

    fn draw_losses(&self, post: &GaussianLinearPosterior, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut draw = |mean: f64, n: usize| -> Vec<f64> {
            (0..n)
                .map(|_| mean + self.std * rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        let pos = draw(self.pos_mean, self.shape.pos_count());
        let neg = draw(self.neg_mean, self.shape.neg_count());
        pos.iter()
            .flat_map(|p| neg.iter().map(move |n| post.point_error(&[p - n], 1.0)))
            .collect()
    }
}

/// `m` iid one-dimensional examples: label ±1 with equal odds, feature
/// `N(y · mean, std²)`.
#[derive(Debug, Clone)]
pub struct IidGaussianGenerator {
    pub m: usize,
    pub mean: f64,
    pub std: f64,
}

impl DependentGenerator for IidGaussianGenerator {
    fn vertex_count(&self) -> usize {
        self.m
    }

    fn draw_losses(&self, post: &GaussianLinearPosterior, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..self.m)
            .map(|_| {
                let y = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let x = y * self.mean + self.std * rng.sample::<f64, _>(StandardNormal);
                post.point_error(&[x], y)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentComparison {
    /// Estimate of the true Gibbs risk: the mean of `ê_Q` over all draws.
    pub e_q: f64,
    /// `E |ê_Q(Z) - e_Q|^r`
    pub full: MomentEstimate,
    /// `E |ê_Q(Z^(j)) - e_Q|^r` for every cover element `j`.
    pub per_element: Vec<MomentEstimate>,
}

/// Monte Carlo estimates of the `r`-th central moment of the Gibbs risk on
/// the full sample and on each cover element. The cover must be exact for
/// `graph` and all its elements must have the same size.
pub fn moment_comparison<G: DependentGenerator>(
    post: &GaussianLinearPosterior,
    graph: &DependencyGraph,
    cover: &FractionalCover,
    generator: &G,
    r: f64,
    n_draws: usize,
    seed: u64,
) -> Result<MomentComparison, GibbsError> {
    if r.is_nan() || r < 1.0 {
        return Err(GibbsError::InvalidMomentOrder(r));
    }
    if n_draws < 2 {
        return Err(GibbsError::TooFewExamples {
            needed: 2,
            got: n_draws,
        });
    }
    validate_cover(graph, cover)?;
    if generator.vertex_count() != graph.vertex_count() {
        return Err(GibbsError::GeneratorSize {
            generator: generator.vertex_count(),
            graph: graph.vertex_count(),
        });
    }
    let elements = cover.elements();
    let expected = elements[0].vertices.len();
    if let Some((element, e)) = elements.iter().enumerate().find(|(_, e)| e.vertices.len() != expected) {
        return Err(GibbsError::UnequalElements {
            element,
            size: e.vertices.len(),
            expected,
        });
    }

    // Row layout per draw: full-sample risk, then one risk per element.
    let width = 1 + elements.len();
    let chunks = substream_chunks(n_draws, seed, |rng, count| {
        let mut rows = Vec::with_capacity(count * width);
        for _ in 0..count {
            let losses = generator.draw_losses(post, rng);
            rows.push(losses.iter().sum::<f64>() / losses.len() as f64);
            for e in elements {
                rows.push(e.vertices.iter().map(|&v| losses[v]).sum::<f64>() / e.vertices.len() as f64);
            }
        }
        rows
    });
    let rows: Vec<f64> = chunks.concat();
    let n = n_draws as f64;
    let e_q = rows.iter().step_by(width).sum::<f64>() / n;
    let moment = |col: usize| {
        let vals: Vec<f64> = rows[col..]
            .iter()
            .step_by(width)
            .map(|x| (x - e_q).abs().powf(r))
            .collect();
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        MomentEstimate {
            value: mean,
            std_error: (var / n).sqrt(),
        }
    };
    Ok(MomentComparison {
        e_q,
        full: moment(0),
        per_element: (1..width).map(moment).collect(),
    })
}

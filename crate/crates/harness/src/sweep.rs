//! Bound and test error as a function of the soft-margin parameter `C`.

use std::path::PathBuf;
use std::str::FromStr;

use chromatic_pac::bounds::auc_linear_bound;
use chromatic_pac::gibbs::{
    empirical_auc_risk, gibbs_error_auc, train_linear, GaussianLinearPosterior, LabeledDataset, TieMode,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::KeyValues;
use crate::data::{build_pairs, load_dataset};
use crate::HarnessError;

pub const DEFAULT_DELTA: f64 = 0.01;
pub const DEFAULT_EPOCHS: usize = 50;

/// Scale of the Gaussian posterior around the trained direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuMode {
    Fixed(f64),
    /// `μ = ‖w‖`
    Norm,
}

impl FromStr for MuMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "norm" {
            return Ok(MuMode::Norm);
        }
        match s.parse::<f64>() {
            Ok(mu) if mu > 0.0 && mu.is_finite() => Ok(MuMode::Fixed(mu)),
            _ => Err(format!("mu must be `norm` or a positive number, found {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub c_grid: Vec<f64>,
    pub delta: f64,
    pub mu_mode: MuMode,
    pub tie_mode: TieMode,
    pub seed: u64,
    pub epochs: usize,
    /// Largest number of pairs used on either split.
    pub pair_cap: Option<usize>,
}

impl SweepSettings {
    pub fn new(c_grid: Vec<f64>) -> Self {
        Self {
            c_grid,
            delta: DEFAULT_DELTA,
            mu_mode: MuMode::Norm,
            tie_mode: TieMode::default(),
            seed: 0,
            epochs: DEFAULT_EPOCHS,
            pair_cap: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.c_grid.is_empty() {
            return Err(HarnessError::Config("C grid is empty".into()));
        }
        if let Some(c) = self.c_grid.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
            return Err(HarnessError::Config(format!("C = {c} must be positive")));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(HarnessError::Config(format!(
                "delta = {} is outside (0, 1]",
                self.delta
            )));
        }
        if self.epochs == 0 {
            return Err(HarnessError::Config("epochs must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub train: PathBuf,
    pub test: PathBuf,
    pub settings: SweepSettings,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub const KEYS: [&'static str; 10] = [
        "train", "test", "c", "delta", "mu", "tie_mode", "seed", "epochs", "pair_cap", "output",
    ];

    pub fn from_key_values(kv: &KeyValues) -> Result<Self, HarnessError> {
        kv.check_keys(&Self::KEYS)?;
        let missing = |k: &str| HarnessError::Config(format!("missing required key {k:?}"));
        let mut settings = SweepSettings::new(kv.list("c")?.ok_or_else(|| missing("c"))?);
        settings.delta = kv.get_or("delta", DEFAULT_DELTA)?;
        settings.mu_mode = kv.get_or("mu", MuMode::Norm)?;
        settings.tie_mode = kv.get_or("tie_mode", TieMode::default())?;
        settings.seed = kv.get_or("seed", 0)?;
        settings.epochs = kv.get_or("epochs", DEFAULT_EPOCHS)?;
        settings.pair_cap = kv.get("pair_cap")?;
        settings.validate()?;
        Ok(Self {
            train: kv.path("train").ok_or_else(|| missing("train"))?,
            test: kv.path("test").ok_or_else(|| missing("test"))?,
            settings,
            output: kv.path("output"),
        })
    }
}

/// One point of the sweep. Field names are stable: they are the CSV header
/// and the JSON keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub c: f64,
    /// Gibbs misranking rate on the training pairs.
    pub ehat: f64,
    pub bound_kl: f64,
    pub bound_pinsker: f64,
    /// Misranking rate of the trained scorer on the test pairs.
    pub test_err: f64,
    pub lpos: usize,
    pub lneg: usize,
    pub lmin: usize,
    pub mu: f64,
    pub vacuous: bool,
    /// Set on the record with the smallest `bound_kl`.
    pub best_bound: bool,
    /// Set on the record with the smallest `test_err`.
    pub best_test: bool,
}

fn sweep_point(
    settings: &SweepSettings,
    train: &LabeledDataset,
    test: &LabeledDataset,
    c: f64,
) -> Result<SweepRecord, HarnessError> {
    let train_pairs = build_pairs(train, settings.pair_cap, settings.seed)?;
    let test_pairs = build_pairs(test, settings.pair_cap, settings.seed)?;
    let lambda = 1.0 / (c * train.len() as f64);
    let scorer = train_linear(train, lambda, settings.epochs, settings.seed)?;
    let posterior = match settings.mu_mode {
        MuMode::Fixed(mu) => GaussianLinearPosterior::new(scorer.weights(), mu)?,
        MuMode::Norm => GaussianLinearPosterior::from_weights(scorer.weights())?,
    };
    let ehat = gibbs_error_auc(&posterior, train, &train_pairs)?;
    let shape = train_pairs.shape();
    let bound = auc_linear_bound(shape.l_min(), posterior.mu(), settings.delta, ehat)?;
    let test_err = empirical_auc_risk(&scorer, test, &test_pairs, settings.tie_mode)?;
    Ok(SweepRecord {
        c,
        ehat,
        bound_kl: bound.risk_bound_kl,
        bound_pinsker: bound.risk_bound_pinsker,
        test_err,
        lpos: shape.pos_count(),
        lneg: shape.neg_count(),
        lmin: shape.l_min(),
        mu: posterior.mu(),
        vacuous: bound.vacuous,
        best_bound: false,
        best_test: false,
    })
}

fn flag_min(records: &mut [SweepRecord], key: impl Fn(&SweepRecord) -> f64, set: impl Fn(&mut SweepRecord)) {
    let best = records
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| key(a).total_cmp(&key(b)))
        .map(|(i, _)| i);
    if let Some(i) = best {
        set(&mut records[i]);
    }
}

/// Runs every grid point (in parallel) and returns the records sorted by
/// `C`.
pub fn sweep(
    settings: &SweepSettings,
    train: &LabeledDataset,
    test: &LabeledDataset,
) -> Result<Vec<SweepRecord>, HarnessError> {
    settings.validate()?;
    let mut grid = settings.c_grid.clone();
    grid.sort_by(f64::total_cmp);
    let mut records = grid
        .par_iter()
        .map(|&c| sweep_point(settings, train, test, c))
        .collect::<Result<Vec<_>, _>>()?;
    flag_min(&mut records, |r| r.bound_kl, |r| r.best_bound = true);
    flag_min(&mut records, |r| r.test_err, |r| r.best_test = true);
    Ok(records)
}

/// Loads both datasets, runs the sweep and, if the config names an output
/// file, writes the CSV there.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>, HarnessError> {
    let train = load_dataset(&config.train)?;
    let test = load_dataset(&config.test)?;
    let records = sweep(&config.settings, &train, &test)?;
    if let Some(path) = &config.output {
        std::fs::write(path, to_csv(&records)?).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(records)
}

pub fn to_csv(records: &[SweepRecord]) -> Result<String, HarnessError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in records {
        writer.serialize(r)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| HarnessError::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn to_json_lines(records: &[SweepRecord]) -> Result<String, HarnessError> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_json_lines(text: &str) -> Result<Vec<SweepRecord>, HarnessError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(HarnessError::from))
        .collect()
}

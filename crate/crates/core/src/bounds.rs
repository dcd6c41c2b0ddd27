//! PAC-Bayes bound evaluators.
//!
//! Each evaluator computes the right-hand side of a kl inequality (the
//! *budget*, in nats) and inverts it around the empirical Gibbs risk. The
//! chromatic family shares one formula, so that the iid, AUC and ranking
//! bounds are literal instances of the χ* version.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::covers::{beta_block_decomposition, CoversError};
use crate::depgraph::CoverStats;
use crate::klcore::{KlBudget, KlError, RATE_CEILING};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("delta = {0} is outside (0, 1]")]
    InvalidDelta(f64),
    #[error("KL divergence {0} must be a finite nonnegative number")]
    InvalidKl(f64),
    #[error("{name} = {value} is outside [0, 1]")]
    RateOutOfRange { name: &'static str, value: f64 },
    #[error("sample size must be positive")]
    EmptySample,
    #[error("chi* = {0} is below 1")]
    ChiStarBelowOne(Rational),
    #[error("expected {expected} per-element KL terms, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no candidate subgraphs given")]
    NoCandidates,
    #[error("candidate {index} has {size} vertices; expected m - k = {expected}")]
    SubsetSize { index: usize, size: usize, expected: usize },
    #[error("cannot remove {k} of {m} examples")]
    RemovalTooLarge { m: usize, k: usize },
    #[error("class counts {pos}/{neg}: both classes need at least one example")]
    SkewDegenerate { pos: usize, neg: usize },
    #[error("sample size {0} is below 2")]
    RankingTooSmall(usize),
    #[error("posterior scale mu = {0} must be positive")]
    NonpositiveScale(f64),
    #[error("loss range M = {0} must be positive")]
    InvalidLossRange(f64),
    #[error("mixing coefficient {0} is outside [0, 1]")]
    InvalidMixing(f64),
    #[error("delta = {delta} does not exceed 2(mu - 1) beta(a) = {threshold}")]
    DeltaTooSmall { delta: f64, threshold: f64 },
    #[error("alpha = {0} must be at least 1")]
    AlphaBelowOne(f64),
    #[error("beta = {0} must exceed 1")]
    BetaNotAboveOne(f64),
    #[error(transparent)]
    Blocks(#[from] CoversError),
    #[error(transparent)]
    Kl(#[from] KlError),
}

/// How the budget constrains the true risk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetKind {
    /// `kl(ê || e) <= budget`
    Kl,
    /// `(ê - e)² <= budget`
    SquaredDeviation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub empirical_gibbs: f64,
    pub kl_budget: f64,
    pub budget_kind: BudgetKind,
    /// `ê + kl⁻¹(ê, budget)`; for squared-deviation budgets `ê + sqrt(budget)`.
    pub risk_bound_kl: f64,
    /// `ê + sqrt(budget / 2)`; for squared-deviation budgets equal to
    /// `risk_bound_kl`.
    pub risk_bound_pinsker: f64,
    /// Only for two-sided budgets: `max(0, ê - sqrt(budget))`.
    pub risk_lower: Option<f64>,
    pub delta: f64,
    /// The divisor in front of the budget.
    pub effective_m: f64,
    pub chi_star_used: Option<Rational>,
    pub vacuous: bool,
}

fn check_delta(delta: f64) -> Result<f64, BoundError> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(delta)
    } else {
        Err(BoundError::InvalidDelta(delta))
    }
}

fn check_kl(kl: f64) -> Result<f64, BoundError> {
    if kl.is_finite() && kl >= 0.0 {
        Ok(kl)
    } else {
        Err(BoundError::InvalidKl(kl))
    }
}

fn check_rate(name: &'static str, value: f64) -> Result<f64, BoundError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(BoundError::RateOutOfRange { name, value })
    }
}

fn check_chi(chi: Rational) -> Result<f64, BoundError> {
    if chi < Rational::from_integer(1) {
        return Err(BoundError::ChiStarBelowOne(chi));
    }
    Ok(*chi.numer() as f64 / *chi.denom() as f64)
}

/// `(χ/m) [K + ln((m + χ) / (δ χ))]`.
pub fn chromatic_budget(m: f64, chi: f64, kl: f64, delta: f64) -> f64 {
    (chi / m) * (kl + ((m + chi) / (delta * chi)).ln())
}

fn invert(
    e_hat: f64,
    budget: f64,
    delta: f64,
    effective_m: f64,
    chi_star_used: Option<Rational>,
) -> Result<BoundResult, BoundError> {
    let kb = KlBudget::new(e_hat, budget)?;
    let risk_bound_kl = kb.upper_rate();
    Ok(BoundResult {
        empirical_gibbs: e_hat,
        kl_budget: budget,
        budget_kind: BudgetKind::Kl,
        risk_bound_kl,
        risk_bound_pinsker: kb.pinsker_upper_rate(),
        risk_lower: None,
        delta,
        effective_m,
        chi_star_used,
        vacuous: risk_bound_kl >= RATE_CEILING,
    })
}

fn two_sided(
    e_hat: f64,
    budget: f64,
    delta: f64,
    effective_m: f64,
    chi_star_used: Option<Rational>,
    ceiling: f64,
) -> BoundResult {
    let radius = budget.sqrt();
    let upper = (e_hat + radius).min(ceiling);
    BoundResult {
        empirical_gibbs: e_hat,
        kl_budget: budget,
        budget_kind: BudgetKind::SquaredDeviation,
        risk_bound_kl: upper,
        risk_bound_pinsker: upper,
        risk_lower: Some((e_hat - radius).max(0.0)),
        delta,
        effective_m,
        chi_star_used,
        vacuous: upper >= ceiling,
    }
}

/// Bound for iid samples: budget `(K + ln((m+1)/δ)) / m`.
pub fn iid_bound(m: usize, kl_div: f64, delta: f64, e_hat: f64) -> Result<BoundResult, BoundError> {
    chromatic_bound_ii(m, Rational::from_integer(1), kl_div, delta, e_hat)
}

/// Bound from an explicit exact cover with one KL term per cover element.
pub fn chromatic_bound_i(
    stats: &CoverStats,
    per_element_kl: &[f64],
    m: usize,
    delta: f64,
    e_bar: f64,
) -> Result<BoundResult, BoundError> {
    if per_element_kl.len() != stats.alpha.len() {
        return Err(BoundError::LengthMismatch {
            expected: stats.alpha.len(),
            got: per_element_kl.len(),
        });
    }
    if m == 0 {
        return Err(BoundError::EmptySample);
    }
    check_delta(delta)?;
    check_rate("e_bar", e_bar)?;
    for &k in per_element_kl {
        check_kl(k)?;
    }
    let mixed: f64 = stats.alpha.iter().zip(per_element_kl).map(|(a, k)| a * k).sum();
    let budget = chromatic_budget(m as f64, stats.omega, mixed, delta);
    invert(e_bar, budget, delta, m as f64 / stats.omega, Some(stats.omega_exact))
}

/// Bound in terms of the fractional chromatic number of the dependency graph.
pub fn chromatic_bound_ii(
    m: usize,
    chi_star: Rational,
    kl_div: f64,
    delta: f64,
    e_hat: f64,
) -> Result<BoundResult, BoundError> {
    if m == 0 {
        return Err(BoundError::EmptySample);
    }
    let chi = check_chi(chi_star)?;
    check_delta(delta)?;
    check_kl(kl_div)?;
    check_rate("e_hat", e_hat)?;
    let budget = chromatic_budget(m as f64, chi, kl_div, delta);
    invert(e_hat, budget, delta, m as f64 / chi, Some(chi_star))
}

/// `ln C(m, k)`.
pub fn ln_binomial(m: usize, k: usize) -> f64 {
    if k == 0 || k == m {
        return 0.0;
    }
    ln_gamma(m as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((m - k) as f64 + 1.0)
}

/// A subgraph obtained by removing `k` vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgraphCandidate {
    pub size: usize,
    pub chi_star: Rational,
    pub e_hat: f64,
}

/// Best bound over subgraphs left after removing `k` of the `m` examples.
/// Each candidate pays `ln C(m, k)` for the union over all removals.
pub fn subgraph_bound(
    candidates: &[SubgraphCandidate],
    m: usize,
    k: usize,
    kl_div: f64,
    delta: f64,
) -> Result<BoundResult, BoundError> {
    if candidates.is_empty() {
        return Err(BoundError::NoCandidates);
    }
    if k >= m {
        return Err(BoundError::RemovalTooLarge { m, k });
    }
    check_delta(delta)?;
    check_kl(kl_div)?;
    let penalty = ln_binomial(m, k);
    let mut best: Option<BoundResult> = None;
    for (index, c) in candidates.iter().enumerate() {
        if c.size != m - k {
            return Err(BoundError::SubsetSize {
                index,
                size: c.size,
                expected: m - k,
            });
        }
        let chi = check_chi(c.chi_star)?;
        check_rate("e_hat", c.e_hat)?;
        let s = c.size as f64;
        let budget = chromatic_budget(s, chi, kl_div + penalty, delta);
        let r = invert(c.e_hat, budget, delta, s / chi, Some(c.chi_star))?;
        if best.as_ref().is_none_or(|b| r.risk_bound_kl < b.risk_bound_kl) {
            best = Some(r);
        }
    }
    Ok(best.expect("candidates is nonempty"))
}

/// Ranking risk over all ordered pairs of `ℓ` examples: divisor `⌊ℓ/2⌋`.
pub fn ranking_bound(l: usize, kl_div: f64, delta: f64, e_hat_rank: f64) -> Result<BoundResult, BoundError> {
    if l < 2 {
        return Err(BoundError::RankingTooSmall(l));
    }
    check_delta(delta)?;
    check_kl(kl_div)?;
    check_rate("e_hat", e_hat_rank)?;
    let half = l / 2;
    let li = l as i64;
    let chi = Rational::new(li * (li - 1), half as i64);
    let budget = chromatic_budget(half as f64, 1.0, kl_div, delta);
    invert(e_hat_rank, budget, delta, half as f64, Some(chi))
}

/// Bipartite ranking (AUC) risk over `ℓ⁺ℓ⁻` pairs: divisor `ℓ_min`.
pub fn auc_bound(
    l_pos: usize,
    l_neg: usize,
    kl_div: f64,
    delta: f64,
    e_hat_auc: f64,
) -> Result<BoundResult, BoundError> {
    if l_pos == 0 || l_neg == 0 {
        return Err(BoundError::SkewDegenerate { pos: l_pos, neg: l_neg });
    }
    let mut r = auc_min_class(l_pos.min(l_neg), kl_div, delta, e_hat_auc)?;
    r.chi_star_used = Some(Rational::from_integer(l_pos.max(l_neg) as i64));
    Ok(r)
}

fn auc_min_class(l_min: usize, kl_div: f64, delta: f64, e_hat: f64) -> Result<BoundResult, BoundError> {
    if l_min == 0 {
        return Err(BoundError::SkewDegenerate { pos: l_min, neg: l_min });
    }
    check_delta(delta)?;
    check_kl(kl_div)?;
    check_rate("e_hat", e_hat)?;
    let budget = chromatic_budget(l_min as f64, 1.0, kl_div, delta);
    invert(e_hat, budget, delta, l_min as f64, None)
}

/// [`auc_bound`] for a Gaussian posterior `N(μ w, I)` against the prior
/// `N(0, I)`, so `KL = μ²/2`.
pub fn auc_linear_bound(l_min: usize, mu: f64, delta: f64, e_hat_auc: f64) -> Result<BoundResult, BoundError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(BoundError::NonpositiveScale(mu));
    }
    auc_min_class(l_min, 0.5 * mu * mu, delta, e_hat_auc)
}

/// Bound for a stationary β-mixing sequence split into `2μ` blocks of
/// length `a`: budget `(1/μ)[K + ln(2(μ+1) / (δ - 2(μ-1)β(a)))]`.
pub fn beta_mixing_bound(
    m: usize,
    a: usize,
    beta_a: f64,
    kl_div: f64,
    delta: f64,
    e_hat: f64,
) -> Result<BoundResult, BoundError> {
    let blocks = beta_block_decomposition(m, a)?;
    if !(0.0..=1.0).contains(&beta_a) {
        return Err(BoundError::InvalidMixing(beta_a));
    }
    check_delta(delta)?;
    check_kl(kl_div)?;
    check_rate("e_hat", e_hat)?;
    let mu = blocks.block_count as f64;
    let threshold = 2.0 * (mu - 1.0) * beta_a;
    if delta <= threshold {
        return Err(BoundError::DeltaTooSmall { delta, threshold });
    }
    let budget = (kl_div + (2.0 * (mu + 1.0) / (delta - threshold)).ln()) / mu;
    invert(e_hat, budget, delta, mu, Some(Rational::from_integer(a as i64)))
}

/// `(K + ln(αβ/δ)) / (β - 1)`: the budget obtained from any deviation tail
/// `P[X >= x] <= α exp(-β Δ(x))` with `α >= 1`, `β > 1`.
pub fn generic_pacbayes_budget(alpha: f64, beta: f64, kl_div: f64, delta: f64) -> Result<f64, BoundError> {
    if alpha.is_nan() || alpha < 1.0 {
        return Err(BoundError::AlphaBelowOne(alpha));
    }
    if beta.is_nan() || beta <= 1.0 {
        return Err(BoundError::BetaNotAboveOne(beta));
    }
    check_kl(kl_div)?;
    check_delta(delta)?;
    Ok((kl_div + (alpha * beta / delta).ln()) / (beta - 1.0))
}

fn check_loss_range(m_range: f64) -> Result<f64, BoundError> {
    if m_range > 0.0 && m_range.is_finite() {
        Ok(m_range)
    } else {
        Err(BoundError::InvalidLossRange(m_range))
    }
}

fn check_loss(e_hat: f64, m_range: f64) -> Result<f64, BoundError> {
    if (0.0..=m_range).contains(&e_hat) {
        Ok(e_hat)
    } else {
        Err(BoundError::RateOutOfRange {
            name: "e_hat",
            value: e_hat,
        })
    }
}

/// Two-sided bound on `(ê - e)²` for losses in `[0, M]` under a dependency
/// graph with fractional chromatic number χ*. Bounds are clamped to `[0, M]`.
pub fn generalized_chromatic_bound(
    m: usize,
    chi_star: Rational,
    loss_range: f64,
    kl_div: f64,
    delta: f64,
    e_hat: f64,
) -> Result<BoundResult, BoundError> {
    if m == 0 {
        return Err(BoundError::EmptySample);
    }
    let chi = check_chi(chi_star)?;
    let range = check_loss_range(loss_range)?;
    check_loss(e_hat, range)?;
    let beta = 2.0 * m as f64 / (chi * range * range);
    let budget = generic_pacbayes_budget(1.0, beta, kl_div, delta)?;
    Ok(two_sided(e_hat, budget, delta, beta - 1.0, Some(chi_star), range))
}

/// Two-sided bound for a stationary φ-mixing sequence with coefficients
/// `phi[k-1] = φ(k)`, using `Λ = 1 + 2 Σ φ(k)`.
pub fn phi_mixing_bound(
    m: usize,
    loss_range: f64,
    phi: &[f64],
    kl_div: f64,
    delta: f64,
    e_hat: f64,
) -> Result<BoundResult, BoundError> {
    if m == 0 {
        return Err(BoundError::EmptySample);
    }
    let range = check_loss_range(loss_range)?;
    check_loss(e_hat, range)?;
    if let Some(&bad) = phi.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(BoundError::InvalidMixing(bad));
    }
    let lambda = 1.0 + 2.0 * phi.iter().sum::<f64>();
    let scale = range * range * lambda * lambda;
    let beta = m as f64 / (2.0 * scale);
    let budget = generic_pacbayes_budget(2.0, beta, kl_div, delta)?;
    Ok(two_sided(e_hat, budget, delta, beta - 1.0, None, range))
}

/// Risk of the majority vote is at most twice the Gibbs risk.
pub fn bayes_risk_factor(e_gibbs: f64) -> f64 {
    (2.0 * e_gibbs).min(1.0)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn iid_values() {
        let b = iid_bound(100, 0.0, 1.0, 0.0).unwrap();
        close(b.kl_budget, 0.046151205168412595, 1e-15);
        assert_eq!(b.chi_star_used, Some(r(1)));
        let far = iid_bound(1_000_000, 0.0, 1.0, 0.1).unwrap();
        close(far.risk_bound_kl, 0.1, 0.01);
        assert!(matches!(iid_bound(10, 0.0, 0.0, 0.0), Err(BoundError::InvalidDelta(_))));
        assert!(matches!(iid_bound(10, -1.0, 0.5, 0.0), Err(BoundError::InvalidKl(_))));
        assert!(matches!(
            iid_bound(10, 0.0, 0.5, 1.5),
            Err(BoundError::RateOutOfRange { .. })
        ));
        assert!(matches!(iid_bound(0, 0.0, 0.5, 0.0), Err(BoundError::EmptySample)));
    }

    #[test]
    fn chromatic_i_example() {
        let stats = CoverStats {
            omega: 2.0,
            omega_exact: r(2),
            alpha: vec![0.5, 0.5],
            pi: vec![0.5, 0.5],
        };
        let b = chromatic_bound_i(&stats, &[0.0, 1.0], 10, 0.1, 0.0).unwrap();
        close(b.kl_budget, 0.91886891244442014, 1e-14);
        assert_eq!(b.effective_m, 5.0);
        assert!(matches!(
            chromatic_bound_i(&stats, &[0.0], 10, 0.1, 0.0),
            Err(BoundError::LengthMismatch { expected: 2, got: 1 })
        ));
        let equal = chromatic_bound_i(&stats, &[0.7, 0.7], 10, 0.1, 0.2).unwrap();
        let ii = chromatic_bound_ii(10, r(2), 0.7, 0.1, 0.2).unwrap();
        close(equal.kl_budget, ii.kl_budget, 1e-15);
    }

    #[test]
    fn subgraph_one_edge() {
        // 1-edge graph on 10 vertices: the full graph has χ* = 2; removing one
        // endpoint leaves an edgeless graph on 9 vertices.
        let full = subgraph_bound(
            &[SubgraphCandidate {
                size: 10,
                chi_star: r(2),
                e_hat: 0.0,
            }],
            10,
            0,
            0.0,
            0.05,
        )
        .unwrap();
        let ii = chromatic_bound_ii(10, r(2), 0.0, 0.05, 0.0).unwrap();
        assert_eq!(full.kl_budget, ii.kl_budget);

        let dropped = SubgraphCandidate {
            size: 9,
            chi_star: r(1),
            e_hat: 0.0,
        };
        let b = subgraph_bound(std::slice::from_ref(&dropped), 10, 1, 0.0, 0.05).unwrap();
        close(b.kl_budget, (10f64.ln() + (10.0f64 / 0.05).ln()) / 9.0, 1e-15);
        assert_eq!(b.effective_m, 9.0);

        let twice = subgraph_bound(&[dropped.clone(), dropped], 10, 1, 0.0, 0.05).unwrap();
        assert_eq!(twice, b);
        assert!(matches!(
            subgraph_bound(
                &[SubgraphCandidate {
                    size: 8,
                    chi_star: r(1),
                    e_hat: 0.0
                }],
                10,
                1,
                0.0,
                0.05
            ),
            Err(BoundError::SubsetSize { .. })
        ));
        assert!(matches!(
            subgraph_bound(&[], 10, 1, 0.0, 0.05),
            Err(BoundError::NoCandidates)
        ));
    }

    #[test]
    fn ranking_values() {
        let b = ranking_bound(100, 0.0, 0.05, 0.0).unwrap();
        close(b.kl_budget, 0.13855115812556634, 1e-15);
        assert_eq!(b.effective_m, 50.0);
        assert_eq!(ranking_bound(2, 0.0, 0.5, 0.0).unwrap().effective_m, 1.0);
        for l in [4usize, 7, 10, 31] {
            let direct = ranking_bound(l, 1.3, 0.05, 0.1).unwrap();
            let m = l * (l - 1);
            let chi = Rational::new((l * (l - 1)) as i64, (l / 2) as i64);
            let via_chi = chromatic_bound_ii(m, chi, 1.3, 0.05, 0.1).unwrap();
            close(direct.kl_budget, via_chi.kl_budget, 1e-14 * direct.kl_budget);
        }
    }

    #[test]
    fn auc_values() {
        let b = auc_bound(100, 300, 4.5, 0.01, 0.0).unwrap();
        close(b.kl_budget, 0.13720290702829351, 1e-15);
        assert_eq!(auc_bound(300, 100, 4.5, 0.01, 0.0).unwrap().kl_budget, b.kl_budget);
        assert_eq!(auc_bound(89, 211, 0.0, 0.05, 0.1).unwrap().effective_m, 89.0);
        assert!(matches!(
            auc_bound(0, 5, 0.0, 0.05, 0.1),
            Err(BoundError::SkewDegenerate { .. })
        ));

        let lin = auc_linear_bound(100, 1.0, 0.05, 0.0).unwrap();
        close(lin.kl_budget, 0.081108527903952504, 1e-15);
        let tiny = auc_linear_bound(100, 1e-9, 0.05, 0.0).unwrap();
        let zero = auc_bound(100, 100, 0.0, 0.05, 0.0).unwrap();
        close(tiny.kl_budget, zero.kl_budget, 1e-15);
        assert!(matches!(
            auc_linear_bound(100, 0.0, 0.05, 0.0),
            Err(BoundError::NonpositiveScale(_))
        ));
    }

    #[test]
    fn beta_mixing_values() {
        let b = beta_mixing_bound(200, 10, 0.001, 0.0, 0.05, 0.0).unwrap();
        close(b.kl_budget, 0.65330618295407264, 1e-14);
        assert_eq!(b.effective_m, 10.0);
        let indep = beta_mixing_bound(200, 10, 0.0, 1.0, 0.05, 0.0).unwrap();
        close(indep.kl_budget, (1.0 + (22.0f64 / 0.05).ln()) / 10.0, 1e-15);
        assert!(matches!(
            beta_mixing_bound(200, 10, 0.01, 0.0, 0.05, 0.0),
            Err(BoundError::DeltaTooSmall { .. })
        ));
        assert!(matches!(
            beta_mixing_bound(200, 7, 0.0, 0.0, 0.05, 0.0),
            Err(BoundError::Blocks(_))
        ));
    }

    #[test]
    fn mixing_and_generalized_bounds() {
        let g = generalized_chromatic_bound(1000, r(1), 1.0, 0.0, 0.05, 0.2).unwrap();
        close(g.kl_budget, 0.0053009678504732733, 1e-15);
        assert_eq!(g.budget_kind, BudgetKind::SquaredDeviation);
        close(g.risk_bound_kl, 0.2 + g.kl_budget.sqrt(), 1e-15);
        close(g.risk_lower.unwrap(), 0.2 - g.kl_budget.sqrt(), 1e-15);
        assert!(matches!(
            generalized_chromatic_bound(10, r(20), 1.0, 0.0, 0.05, 0.2),
            Err(BoundError::BetaNotAboveOne(_))
        ));

        let p = phi_mixing_bound(10_000, 1.0, &[0.25, 0.25], 0.0, 0.05, 0.1).unwrap();
        close(p.kl_budget, 0.0086627528297920601, 1e-15);
        assert!(matches!(
            phi_mixing_bound(8, 1.0, &[0.5], 0.0, 0.05, 0.1),
            Err(BoundError::BetaNotAboveOne(_))
        ));
    }

    #[test]
    fn generic_budget() {
        for m in [1usize, 10, 1000] {
            let generic = generic_pacbayes_budget(1.0, m as f64 + 1.0, 0.4, 0.05).unwrap();
            let iid = iid_bound(m, 0.4, 0.05, 0.0).unwrap().kl_budget;
            close(generic, iid, 1e-14 * iid);
        }
        let one = generic_pacbayes_budget(1.0, 11.0, 0.0, 0.05).unwrap();
        let two = generic_pacbayes_budget(2.0, 11.0, 0.0, 0.05).unwrap();
        close(two - one, 2f64.ln() / 10.0, 1e-15);
        assert!(generic_pacbayes_budget(0.5, 2.0, 0.0, 0.05).is_err());
        assert!(generic_pacbayes_budget(1.0, 1.0, 0.0, 0.05).is_err());
    }

    #[test]
    fn bayes_factor() {
        assert_eq!(bayes_risk_factor(0.0), 0.0);
        assert_eq!(bayes_risk_factor(0.3), 0.6);
        assert_eq!(bayes_risk_factor(0.7), 1.0);
    }

    #[test]
    fn vacuous_flag() {
        let b = iid_bound(2, 50.0, 0.01, 0.5).unwrap();
        assert!(b.vacuous);
        assert!(!iid_bound(1000, 1.0, 0.05, 0.1).unwrap().vacuous);
    }
}

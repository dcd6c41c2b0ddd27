//! Bernoulli KL divergence, its inverse in the second argument, the Pinsker
//! relaxation and the binomial moment sum that bounds `E exp(m kl(R̂ || R))`.
//!
//! Conventions: `0 ln 0 = 0` and `0^0 = 1`. Divergences that blow up are
//! returned as `f64::INFINITY`.

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

/// Absolute tolerance on the increment `t` returned by [`kl_inverse`].
pub const KL_INVERSE_TOL: f64 = 1e-12;
/// Iteration cap for the bisection in [`kl_inverse`].
pub const KL_INVERSE_MAX_ITER: usize = 200;
/// Largest rate `q + t` that [`kl_inverse`] will report.
pub const RATE_CEILING: f64 = 1.0 - 1e-15;
/// Largest sample size accepted by [`binomial_moment`].
pub const BINOMIAL_MOMENT_MAX_M: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KlError {
    #[error("{name} = {value} is outside [0, 1]")]
    RateOutOfRange { name: &'static str, value: f64 },
    #[error("kl budget {0} must be a nonnegative number")]
    NegativeBudget(f64),
    #[error("sample size {0} is outside [1, {max}]", max = BINOMIAL_MOMENT_MAX_M)]
    SampleSize(usize),
}

fn check_rate(name: &'static str, value: f64) -> Result<f64, KlError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(KlError::RateOutOfRange { name, value })
    }
}

fn check_budget(epsilon: f64) -> Result<f64, KlError> {
    // NaN fails the comparison as well.
    if epsilon >= 0.0 {
        Ok(epsilon)
    } else {
        Err(KlError::NegativeBudget(epsilon))
    }
}

/// `x ln(x / y)` with `0 ln(0 / y) = 0`.
fn xlogy_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if y == 0.0 {
        f64::INFINITY
    } else {
        x * (x / y).ln()
    }
}

/// Empirical rate and kl budget, the two arguments of `kl⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlBudget {
    q: f64,
    epsilon: f64,
}

impl KlBudget {
    pub fn new(q: f64, epsilon: f64) -> Result<Self, KlError> {
        Ok(Self {
            q: check_rate("q", q)?,
            epsilon: check_budget(epsilon)?,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Largest `p = q + t` with `kl(q || p) <= epsilon`.
    pub fn upper_rate(&self) -> f64 {
        self.q + inverse_unchecked(self.q, self.epsilon)
    }

    /// `q + sqrt(epsilon / 2)`, clamped to 1.
    pub fn pinsker_upper_rate(&self) -> f64 {
        self.q + pinsker_unchecked(self.q, self.epsilon)
    }
}

/// Bernoulli KL divergence `kl(q || p)` in nats.
pub fn kl_bernoulli(q: f64, p: f64) -> Result<f64, KlError> {
    check_rate("q", q)?;
    check_rate("p", p)?;
    Ok(kl_unchecked(q, p))
}

pub(crate) fn kl_unchecked(q: f64, p: f64) -> f64 {
    if q == p {
        return 0.0;
    }
    xlogy_ratio(q, p) + xlogy_ratio(1.0 - q, 1.0 - p)
}

/// The increment `t ∈ [0, 1 - q)` with `kl(q || q + t) = epsilon`.
///
/// Bisection on `t`; `q + t` never exceeds [`RATE_CEILING`], so budgets that
/// the ceiling cannot absorb return `RATE_CEILING - q`. For `q = 1` the
/// increment is 0.
pub fn kl_inverse(q: f64, epsilon: f64) -> Result<f64, KlError> {
    check_rate("q", q)?;
    check_budget(epsilon)?;
    Ok(inverse_unchecked(q, epsilon))
}

pub(crate) fn inverse_unchecked(q: f64, epsilon: f64) -> f64 {
    if epsilon == 0.0 || q >= RATE_CEILING {
        return 0.0;
    }
    let ceiling = RATE_CEILING - q;
    if epsilon.is_infinite() || kl_unchecked(q, RATE_CEILING) <= epsilon {
        return ceiling;
    }
    // Invariant: kl(q || q + lo) <= epsilon < kl(q || q + hi).
    let (mut lo, mut hi) = (0.0_f64, ceiling);
    for _ in 0..KL_INVERSE_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if kl_unchecked(q, q + mid) <= epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Near p = 1 the divergence is steep, so the loop keeps halving past
    // KL_INVERSE_TOL until the bracket stops shrinking.
    debug_assert!(hi - lo <= KL_INVERSE_TOL);
    // Return whichever end of the final bracket lands closer to the budget.
    let err_lo = epsilon - kl_unchecked(q, q + lo);
    let err_hi = kl_unchecked(q, q + hi) - epsilon;
    if err_hi < err_lo {
        hi
    } else {
        lo
    }
}

/// Largest step of `kl(q || ·)` from `p` to a neighbouring double. No
/// representable rate near `p` solves `kl(q || p) = ε` more accurately.
pub fn kl_resolution(q: f64, p: f64) -> Result<f64, KlError> {
    check_rate("q", q)?;
    check_rate("p", p)?;
    let here = kl_unchecked(q, p);
    let up = kl_unchecked(q, p.next_up().min(1.0));
    let down = kl_unchecked(q, p.next_down().max(0.0));
    Ok((up - here).abs().max((here - down).abs()))
}

/// Pinsker relaxation of `kl⁻¹`: `sqrt(epsilon / 2)`, clamped so `q + t <= 1`.
pub fn pinsker_inverse(q: f64, epsilon: f64) -> Result<f64, KlError> {
    check_rate("q", q)?;
    check_budget(epsilon)?;
    Ok(pinsker_unchecked(q, epsilon))
}

pub(crate) fn pinsker_unchecked(q: f64, epsilon: f64) -> f64 {
    (epsilon / 2.0).sqrt().min(1.0 - q)
}

/// `Σ_k C(m,k) p^k (1-p)^(m-k) exp(m kl(k/m || p))`.
///
/// After simplification the sum no longer depends on `p`; it equals
/// `Σ_k C(m,k) (k/m)^k (1 - k/m)^(m-k)`, which is what gets evaluated (in
/// log space). `p` is only range-checked.
pub fn binomial_moment(m: usize, p: f64) -> Result<f64, KlError> {
    check_rate("p", p)?;
    if m == 0 || m > BINOMIAL_MOMENT_MAX_M {
        return Err(KlError::SampleSize(m));
    }
    let mf = m as f64;
    let ln_m_fact = ln_gamma(mf + 1.0);
    let log_terms: Vec<f64> = (0..=m)
        .map(|k| {
            if k == 0 || k == m {
                return 0.0;
            }
            let kf = k as f64;
            let rest = mf - kf;
            let ln_choose = ln_m_fact - ln_gamma(kf + 1.0) - ln_gamma(rest + 1.0);
            ln_choose + kf * (kf / mf).ln() + rest * (rest / mf).ln()
        })
        .collect();
    let peak = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: f64 = log_terms.iter().map(|l| (l - peak).exp()).sum();
    Ok(peak.exp() * scaled)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn kl_identity_and_conventions() {
        assert_eq!(kl_bernoulli(0.5, 0.5).unwrap(), 0.0);
        assert_eq!(kl_bernoulli(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(kl_bernoulli(1.0, 1.0).unwrap(), 0.0);
        assert!(kl_bernoulli(0.2, 0.0).unwrap().is_infinite());
        assert!(kl_bernoulli(0.2, 1.0).unwrap().is_infinite());
        assert_eq!(kl_bernoulli(0.0, 0.5).unwrap(), 2f64.ln());
    }

    #[test]
    fn kl_matches_high_precision_value() {
        // mpmath, 40 digits: 0.1 ln(1/3) + 0.9 ln(9/7)
        let expected = 0.116_321_756_586_004_500_777;
        assert!((kl_bernoulli(0.1, 0.3).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            kl_bernoulli(-0.1, 0.5),
            Err(KlError::RateOutOfRange { name: "q", .. })
        ));
        assert!(kl_bernoulli(0.5, 1.5).is_err());
        assert!(kl_inverse(1.2, 0.1).is_err());
        assert!(matches!(kl_inverse(0.2, -1.0), Err(KlError::NegativeBudget(_))));
        assert!(kl_inverse(0.2, f64::NAN).is_err());
        assert!(pinsker_inverse(0.2, -0.5).is_err());
        assert!(binomial_moment(0, 0.5).is_err());
        assert!(binomial_moment(10_001, 0.5).is_err());
    }

    #[test]
    fn inverse_of_zero_budget_is_zero() {
        for q in [0.0, 0.1, 0.5, 0.99, 1.0] {
            assert_eq!(kl_inverse(q, 0.0).unwrap(), 0.0);
        }
        assert_eq!(kl_inverse(1.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn inverse_at_zero_rate_has_closed_form() {
        // kl(0 || p) = -ln(1 - p)  =>  p = 1 - exp(-eps)
        for eps in [1e-6, 1e-3, 0.05, 0.7, 3.0] {
            let t = kl_inverse(0.0, eps).unwrap();
            assert!((t - (-(-eps).exp_m1())).abs() < 1e-12, "eps={eps}");
        }
    }

    #[test]
    fn inverse_round_trip_against_grid_scan() {
        let t = kl_inverse(0.2, 0.05).unwrap();
        assert!((kl_bernoulli(0.2, 0.2 + t).unwrap() - 0.05).abs() < 1e-10);
        // Independent check: the first point of a dense grid where kl(0.2 || ·)
        // exceeds the budget sits within one grid step of 0.2 + t.
        let step = 1e-6;
        let crossing = (0..800_000)
            .map(|i| 0.2 + i as f64 * step)
            .find(|&p| kl_bernoulli(0.2, p).unwrap() > 0.05)
            .unwrap();
        assert!((crossing - (0.2 + t)).abs() <= step);
    }

    #[test]
    fn inverse_clamps_at_rate_ceiling() {
        let t = kl_inverse(0.99, 50.0).unwrap();
        assert_eq!(0.99 + t, 0.99 + (RATE_CEILING - 0.99));
        assert_eq!(kl_inverse(0.3, f64::INFINITY).unwrap(), RATE_CEILING - 0.3);
    }

    #[test]
    fn pinsker_examples() {
        assert_eq!(pinsker_inverse(0.4, 0.0).unwrap(), 0.0);
        assert!((pinsker_inverse(0.1, 0.02).unwrap() - 0.1).abs() < 1e-15);
        assert!((pinsker_inverse(0.95, 1.0).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn binomial_moment_small_cases() {
        assert!((binomial_moment(1, 0.3).unwrap() - 2.0).abs() < 1e-12);
        assert!((binomial_moment(2, 0.3).unwrap() - 2.5).abs() < 1e-12);
        // mpmath reference values
        assert!((binomial_moment(10, 0.5).unwrap() - 4.660_215_68).abs() < 1e-9);
        assert!((binomial_moment(200, 0.5).unwrap() - 18.398_443_855_379_15).abs() < 1e-9);
    }

    #[test]
    fn binomial_moment_matches_unsimplified_sum() {
        // Direct sum with the binomial weights for p, no simplification.
        for m in [1usize, 3, 8, 25] {
            for p in [0.05f64, 0.3, 0.5, 0.9] {
                let mut direct = 0.0;
                for k in 0..=m {
                    let choose: f64 = (0..k).map(|i| (m - i) as f64 / (i + 1) as f64).product();
                    let prob = choose * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32);
                    let kl = kl_bernoulli(k as f64 / m as f64, p).unwrap();
                    direct += prob * (m as f64 * kl).exp();
                }
                let simplified = binomial_moment(m, p).unwrap();
                assert!((direct - simplified).abs() < 1e-9 * simplified, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn budget_type_exposes_both_inversions() {
        let b = KlBudget::new(0.1, 0.02).unwrap();
        assert!(b.upper_rate() <= b.pinsker_upper_rate() + 1e-12);
        assert!(KlBudget::new(1.1, 0.0).is_err());
    }
}

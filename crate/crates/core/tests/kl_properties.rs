use chromatic_pac::klcore::{
    binomial_moment, kl_bernoulli, kl_inverse, kl_resolution, pinsker_inverse, KlBudget, RATE_CEILING,
};
use proptest::prelude::*;

const EPSILONS: [f64; 12] = [1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0];

#[test]
fn kl_is_nonnegative_and_vanishes_only_on_the_diagonal() {
    for i in 0..100 {
        for j in 0..100 {
            let (q, p) = (i as f64 / 99.0, j as f64 / 99.0);
            let k = kl_bernoulli(q, p).unwrap();
            assert!(k >= 0.0);
            assert_eq!(k == 0.0, i == j, "q={q} p={p} kl={k}");
        }
    }
}

#[test]
fn boundary_conventions() {
    assert_eq!(kl_bernoulli(0.0, 0.0).unwrap(), 0.0);
    assert_eq!(kl_bernoulli(1.0, 1.0).unwrap(), 0.0);
    assert_eq!(kl_bernoulli(0.3, 0.0).unwrap(), f64::INFINITY);
    assert_eq!(kl_bernoulli(0.3, 1.0).unwrap(), f64::INFINITY);
    assert_eq!(kl_inverse(1.0, 3.0).unwrap(), 0.0);
}

#[test]
fn inverse_round_trip_on_grid() {
    let (mut tight, mut limited, mut clamped) = (0, 0, 0);
    for i in 0..100 {
        let q = i as f64 / 100.0;
        for &eps in &EPSILONS {
            let t = kl_inverse(q, eps).unwrap();
            let p = q + t;
            assert!(t >= 0.0 && p <= RATE_CEILING);
            if p >= RATE_CEILING {
                // Budget beyond kl(q || ceiling): clamped.
                assert!(kl_bernoulli(q, RATE_CEILING).unwrap() <= eps);
                clamped += 1;
                continue;
            }
            let err = (kl_bernoulli(q, p).unwrap() - eps).abs();
            let resolution = kl_resolution(q, p).unwrap();
            if resolution <= 1e-10 {
                assert!(err <= 1e-10, "q={q} eps={eps} err={err}");
                tight += 1;
            } else {
                assert!(err <= resolution, "q={q} eps={eps} err={err} res={resolution}");
                limited += 1;
            }
        }
    }
    assert_eq!(tight + limited + clamped, 1200);
    // Most of the grid is resolvable to the requested tolerance.
    assert!(tight >= 1000, "tight={tight} limited={limited} clamped={clamped}");
}

#[test]
fn inverse_never_exceeds_pinsker() {
    for i in 0..100 {
        let q = i as f64 / 100.0;
        for &eps in &EPSILONS {
            let t = kl_inverse(q, eps).unwrap();
            assert!(t <= (eps / 2.0).sqrt() + 1e-12);
            assert!(t <= pinsker_inverse(q, eps).unwrap() + 1e-12);
        }
    }
}

#[test]
fn binomial_moment_is_at_most_m_plus_one() {
    for m in 1..=200 {
        let v = binomial_moment(m, 0.37).unwrap();
        assert!(v <= (m + 1) as f64, "m={m} moment={v}");
        assert!(v >= 1.0);
    }
    assert!(binomial_moment(10_000, 0.5).unwrap() <= 10_001.0);
    assert!(binomial_moment(0, 0.5).is_err());
    assert!(binomial_moment(10_001, 0.5).is_err());
}

proptest! {
    #[test]
    fn kl_is_jointly_convex(
        p in 0.0..=1.0f64, q in 0.0..=1.0f64,
        r in 0.001..=0.999f64, s in 0.001..=0.999f64,
        a in 0.0..=1.0f64,
    ) {
        let lhs = kl_bernoulli(a * p + (1.0 - a) * q, a * r + (1.0 - a) * s).unwrap();
        let rhs = a * kl_bernoulli(p, r).unwrap() + (1.0 - a) * kl_bernoulli(q, s).unwrap();
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn kl_increases_away_from_q(q in 0.0..0.99f64, t1 in 0.0..1.0f64, t2 in 0.0..1.0f64) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let p1 = q + lo * (1.0 - q);
        let p2 = q + hi * (1.0 - q);
        prop_assert!(kl_bernoulli(q, p1).unwrap() <= kl_bernoulli(q, p2).unwrap());
    }

    #[test]
    fn inverse_is_monotone_in_budget(q in 0.0..1.0f64, e1 in 0.0..10.0f64, e2 in 0.0..10.0f64) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(kl_inverse(q, lo).unwrap() <= kl_inverse(q, hi).unwrap());
    }

    #[test]
    fn upper_rate_is_the_largest_consistent_rate(q in 0.0..0.95f64, eps in 1e-6..3.0f64) {
        let b = KlBudget::new(q, eps).unwrap();
        let p = b.upper_rate();
        prop_assert!(p >= q);
        prop_assert!(p <= b.pinsker_upper_rate() + 1e-12);
        if p < RATE_CEILING {
            // A visibly larger rate already breaks the budget.
            let beyond = (p + 1e-9).min(1.0);
            prop_assert!(kl_bernoulli(q, beyond).unwrap() > eps);
        }
    }

    #[test]
    fn binomial_moment_does_not_depend_on_p(m in 1usize..300, p1 in 0.0..=1.0f64, p2 in 0.0..=1.0f64) {
        prop_assert_eq!(binomial_moment(m, p1).unwrap(), binomial_moment(m, p2).unwrap());
    }
}

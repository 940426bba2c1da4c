//! Numeric checks of two analytic inequalities used in the second-moment
//! argument: the gamma-function lemma with `h(x) = (1 + sqrt(1 + 8x)) / 2`,
//! and the shape of `φ_q(f) = -lnΓ(f+1) + q C(f,2)`.

use serde::Serialize;

use crate::rng::{seeded_rng, uniform_below};

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `h(x) = (1 + sqrt(1 + 8x)) / 2`, the inverse of `y ↦ C(y,2)`.
pub fn h(x: f64) -> f64 {
    (1.0 + (1.0 + 8.0 * x).sqrt()) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub k_max: u64,
    pub pairs_checked: u64,
    /// Smallest `LHS / RHS - 1` over all pairs.
    pub min_slack: f64,
    pub argmin: (u64, u64),
    /// Pairs with `LHS < RHS (1 - tolerance)`.
    pub violations: Vec<(u64, u64)>,
    pub passed: bool,
}

pub const GAMMA_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Checks `Γ(h(K-t)+1) 2^t t! >= Γ(h(K)+1)` for all `0 <= t <= K <= k_max`
/// in log space.
pub fn gamma_lemma_check(k_max: u64) -> GammaReport {
    let ln_tol = (1.0 - GAMMA_RELATIVE_TOLERANCE).ln();
    let mut report = GammaReport {
        k_max,
        pairs_checked: 0,
        min_slack: f64::INFINITY,
        argmin: (0, 0),
        violations: Vec::new(),
        passed: true,
    };
    for k in 0..=k_max {
        let rhs = ln_gamma(h(k as f64) + 1.0);
        for t in 0..=k {
            let lhs = ln_gamma(h((k - t) as f64) + 1.0)
                + t as f64 * std::f64::consts::LN_2
                + ln_gamma(t as f64 + 1.0);
            let gap = lhs - rhs;
            let slack = gap.exp_m1();
            if slack < report.min_slack {
                report.min_slack = slack;
                report.argmin = (k, t);
            }
            if gap < ln_tol {
                report.violations.push((k, t));
            }
            report.pairs_checked += 1;
        }
    }
    report.passed = report.violations.is_empty();
    report
}

/// `φ_q(f) = -lnΓ(f+1) + q f(f-1)/2`.
pub fn phi(q: f64, f: f64) -> f64 {
    -ln_gamma(f + 1.0) + q * f * (f - 1.0) / 2.0
}

pub const PHI_CONCAVITY_TOLERANCE: f64 = 1e-9;

/// Random subintervals drawn for the endpoint-maximum test.
pub const PHI_INTERVAL_SAMPLES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiReport {
    pub q: f64,
    pub f_max: u64,
    pub phi_at_zero: f64,
    /// Largest `φ(f+1) - 2φ(f) + φ(f-1)` over `1 <= f < f_max`.
    pub max_second_difference: f64,
    /// First `f` where the second difference exceeds the tolerance.
    pub first_concavity_violation: Option<u64>,
    pub concave: bool,
    pub intervals_checked: usize,
    /// An interval `[a, b]` whose maximum is not at an endpoint.
    pub endpoint_violation: Option<(u64, u64)>,
    pub endpoint_maximum: bool,
    pub passed: bool,
}

/// Discrete concavity of `φ_q` on `0..=f_max` and the endpoint-maximum
/// property on seeded random integer subintervals.
pub fn phi_concavity_check(q: f64, f_max: u64, seed: u64) -> PhiReport {
    let values: Vec<f64> = (0..=f_max).map(|f| phi(q, f as f64)).collect();
    let mut max_second = f64::NEG_INFINITY;
    let mut first_violation = None;
    for f in 1..f_max as usize {
        let d2 = values[f + 1] - 2.0 * values[f] + values[f - 1];
        max_second = max_second.max(d2);
        if d2 > PHI_CONCAVITY_TOLERANCE && first_violation.is_none() {
            first_violation = Some(f as u64);
        }
    }
    let mut rng = seeded_rng(seed);
    let mut endpoint_violation = None;
    let len = values.len() as u32;
    let mut checked = 0;
    if len >= 2 {
        for _ in 0..PHI_INTERVAL_SAMPLES {
            let x = uniform_below(&mut rng, len) as usize;
            let y = uniform_below(&mut rng, len) as usize;
            let (a, b) = (x.min(y), x.max(y));
            let best_end = values[a].max(values[b]);
            let inner = values[a..=b].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            checked += 1;
            if inner > best_end + PHI_CONCAVITY_TOLERANCE * best_end.abs().max(1.0) && endpoint_violation.is_none() {
                endpoint_violation = Some((a as u64, b as u64));
            }
        }
    }
    let concave = first_violation.is_none();
    let endpoint_maximum = endpoint_violation.is_none();
    PhiReport {
        q,
        f_max,
        phi_at_zero: values[0],
        max_second_difference: max_second,
        first_concavity_violation: first_violation,
        concave,
        intervals_checked: checked,
        endpoint_violation,
        endpoint_maximum,
        passed: concave && endpoint_maximum,
    }
}

/// Largest `|φ_{q1}(f) + φ_{q2}(f) - 2 φ_{(q1+q2)/2}(f)|` on `0..=f_max`.
pub fn phi_merge_deviation(q1: f64, q2: f64, f_max: u64) -> f64 {
    let mid = (q1 + q2) / 2.0;
    (0..=f_max)
        .map(|f| {
            let f = f as f64;
            let lhs = phi(q1, f) + phi(q2, f);
            let rhs = 2.0 * phi(mid, f);
            (lhs - rhs).abs() / lhs.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small_cases_are_tight() {
        let r = gamma_lemma_check(1);
        assert_eq!(r.pairs_checked, 3);
        assert!(r.passed);
        assert!(r.min_slack.abs() < 1e-12);
        // K = 0, t = 0 and K = 1, t = 1 are both equalities
        assert!((h(0.0) - 1.0).abs() < 1e-15 && (h(1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn phi_basics() {
        for q in [0.0, 0.5, 3.0] {
            assert_eq!(phi(q, 0.0), 0.0);
        }
        let r = phi_concavity_check(0.0, 1000, 1);
        assert!(r.concave && r.endpoint_maximum && r.passed);
        assert!(r.max_second_difference < 0.0);
        assert!(phi_merge_deviation(0.3, 0.7, 1000) < 1e-12);
    }

    #[test]
    fn positive_q_breaks_concavity_but_not_endpoint_maxima() {
        // the second difference is q - ln(1 + 1/f)
        let r = phi_concavity_check(1.0, 100, 1);
        assert_eq!(r.first_concavity_violation, Some(1));
        assert!(r.endpoint_maximum);
        let r = phi_concavity_check(0.1, 100, 1);
        assert_eq!(r.first_concavity_violation, Some(10));
        assert!(!r.passed);
    }
}

//! First-moment and threshold formulas.
//!
//! `E_{n,m,r} = Π_{i=1}^{m-1} (1 - i/r)^{C(n,2)}` is the probability that a
//! fixed tuple of permutations is a rainbow stacking for independent uniform
//! colorings, and `E[Z] = n!^m · E_{n,m,r}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{factorial, num_edges};
use crate::real::BigReal;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstMoment {
    pub e_nmr: BigReal,
    pub expected_z: BigReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstMomentExact {
    #[serde(serialize_with = "crate::output::ser_ratio")]
    pub e_nmr: BigRational,
    #[serde(serialize_with = "crate::output::ser_ratio")]
    pub expected_z: BigRational,
}

/// Largest `n` for which [`ln_factorial`] sums logarithms term by term.
pub const LN_FACTORIAL_SUM_LIMIT: u64 = 1_000_000;

/// `ln n!` in double precision: a compensated sum of `ln k` up to
/// [`LN_FACTORIAL_SUM_LIMIT`], `lnΓ(n+1)` beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n > LN_FACTORIAL_SUM_LIMIT {
        return libm::lgamma(n as f64 + 1.0);
    }
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for k in 2..=n {
        let y = (k as f64).ln() - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `ln n!` to the full [`BigReal`] precision.
pub fn ln_factorial_big(n: u64) -> BigReal {
    // products of up to 2^64 - 1 stay exact in one u128 before rounding
    let mut acc = BigReal::one();
    let mut chunk: u128 = 1;
    for k in 2..=n {
        match chunk.checked_mul(u128::from(k)) {
            Some(c) if c < 1u128 << 64 => chunk = c,
            _ => {
                acc = acc.mul(&BigReal::from_u64(chunk as u64));
                chunk = u128::from(k);
            }
        }
    }
    acc.mul(&BigReal::from_u64(chunk as u64)).ln()
}

fn check_r(r: u32) -> Result<()> {
    if r == 0 {
        Err(Error::input("palette size r must be at least 1"))
    } else {
        Ok(())
    }
}

/// `ln E_{n,m,r}`, or `None` when `E_{n,m,r} = 0` (`r < m` with at least one edge).
pub fn ln_e_nmr(n: usize, m: usize, r: u32) -> Result<Option<BigReal>> {
    check_r(r)?;
    if num_edges(n) == 0 {
        return Ok(Some(BigReal::zero()));
    }
    if (r as usize) < m {
        return Ok(None);
    }
    let ln_r = BigReal::from_u64(u64::from(r)).ln();
    let mut sum = BigReal::zero();
    for i in 1..m {
        let factor = BigReal::from_u64(u64::from(r) - i as u64).ln().sub(&ln_r);
        sum = sum.add(&factor);
    }
    Ok(Some(sum.mul(&BigReal::from_u64(num_edges(n) as u64))))
}

pub fn first_moment(n: usize, m: usize, r: u32) -> Result<FirstMoment> {
    let Some(ln_e) = ln_e_nmr(n, m, r)? else {
        return Ok(FirstMoment {
            e_nmr: BigReal::zero(),
            expected_z: BigReal::zero(),
        });
    };
    let ln_z = ln_factorial_big(n as u64)
        .mul(&BigReal::from_u64(m as u64))
        .add(&ln_e);
    Ok(FirstMoment {
        e_nmr: ln_e.exp(),
        expected_z: ln_z.exp(),
    })
}

/// Exact `E_{n,m,r}` as a rational number.
pub fn e_nmr_exact(n: usize, m: usize, r: u32) -> Result<BigRational> {
    check_r(r)?;
    let ne = num_edges(n);
    if ne == 0 {
        return Ok(BigRational::one());
    }
    if (r as usize) < m {
        return Ok(BigRational::zero());
    }
    let mut num = BigUint::one();
    for i in 1..m {
        num *= BigUint::from(r as usize - i);
    }
    let den = BigUint::from(r).pow((m.saturating_sub(1)) as u32);
    Ok(BigRational::new(
        BigInt::from(num.pow(ne as u32)),
        BigInt::from(den.pow(ne as u32)),
    ))
}

/// Exact variant of [`first_moment`], for small parameters.
pub fn first_moment_exact(n: usize, m: usize, r: u32) -> Result<FirstMomentExact> {
    if n > 64 || m > 16 {
        return Err(Error::capability(
            "exact first moment limited to n <= 64 and m <= 16",
        ));
    }
    let e = e_nmr_exact(n, m, r)?;
    let scale = BigInt::from(factorial(n).pow(m as u32));
    Ok(FirstMomentExact {
        expected_z: &e * BigRational::from_integer(scale),
        e_nmr: e,
    })
}

/// `n! · exp((m-1) ln n! - C(m,2) C(n,2) / r)`, an upper bound on `E[Z]`.
pub fn first_moment_upper_bound(n: usize, m: usize, r: u32) -> Result<BigReal> {
    check_r(r)?;
    let ln_nf = ln_factorial_big(n as u64);
    let pairs = (m * m.saturating_sub(1) / 2) as u64;
    let penalty = BigReal::from_u64(pairs)
        .mul(&BigReal::from_u64(num_edges(n) as u64))
        .div(&BigReal::from_u64(u64::from(r)));
    let exponent = ln_nf
        .mul(&BigReal::from_u64(m as u64))
        .sub(&penalty);
    Ok(exponent.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub r_star: f64,
    pub r_lower: f64,
    pub r_upper: f64,
}

/// `r_star = m C(n,2) / (2 ln n!)` with the lower and upper palette bounds
/// around it; `omega` is the slack added in `ω / (ln n)^2`.
pub fn threshold_formulas(n: usize, m: usize, omega: f64) -> Result<Thresholds> {
    if n < 2 {
        return Err(Error::input("thresholds need n >= 2"));
    }
    if m < 1 {
        return Err(Error::input("thresholds need m >= 1"));
    }
    if !omega.is_finite() {
        return Err(Error::input("omega must be finite"));
    }
    let ln_n = (n as f64).ln();
    let m_f = m as f64;
    let r_star = m_f * num_edges(n) as f64 / (2.0 * ln_factorial(n as u64));
    let slack = omega / (ln_n * ln_n);
    Ok(Thresholds {
        r_star,
        r_lower: r_star - slack,
        r_upper: r_star + (2.0 * m_f - 1.0) / 3.0 + m_f / (2.0 * ln_n) + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn first_moment_examples() {
        let ex = first_moment_exact(3, 2, 3).unwrap();
        assert_eq!(ex.e_nmr, ratio(8, 27));
        assert_eq!(ex.expected_z, ratio(32, 3));
        let fm = first_moment(3, 2, 3).unwrap();
        assert!(fm.e_nmr.relative_error(&BigReal::from_ratio(&ex.e_nmr)) < 1e-30);
        assert!(fm.expected_z.relative_error(&BigReal::from_ratio(&ex.expected_z)) < 1e-30);

        assert_eq!(first_moment_exact(5, 1, 2).unwrap().e_nmr, ratio(1, 1));
        let ex = first_moment_exact(2, 2, 2).unwrap();
        assert_eq!((ex.e_nmr, ex.expected_z), (ratio(1, 2), ratio(2, 1)));

        assert!(first_moment(4, 3, 2).unwrap().e_nmr.is_zero());
        assert!(e_nmr_exact(4, 3, 2).unwrap().is_zero());
        assert!(first_moment(4, 2, 0).is_err());
    }

    #[test]
    fn high_precision_for_large_n() {
        // (1 - 1/r)^C(n,2) against an independent evaluation of the same power
        let n = 10_000usize;
        let fm = first_moment(n, 2, 5000).unwrap();
        let exact = BigReal::from_ratio(&ratio(4999, 5000)).ln()
            .mul(&BigReal::from_u64(num_edges(n) as u64))
            .exp();
        assert!(fm.e_nmr.relative_error(&exact) < 1e-12);
        // about exp(-10^4): far below f64 range but still nonzero
        assert_eq!(fm.e_nmr.to_f64(), 0.0);
        assert!(!fm.e_nmr.is_zero());
        let ln = num_edges(n) as f64 * (4999.0f64 / 5000.0).ln();
        assert!((fm.e_nmr.ln_f64() / ln - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_examples() {
        let b = first_moment_upper_bound(3, 2, 3).unwrap().to_f64();
        assert!((b - 36.0 / std::f64::consts::E).abs() < 1e-12);
        assert!(first_moment(3, 2, 3).unwrap().expected_z.to_f64() <= b);
        assert!((first_moment_upper_bound(5, 1, 4).unwrap().to_f64() - 120.0).abs() < 1e-9);
    }

    #[test]
    fn ln_factorial_agrees() {
        for n in [0u64, 1, 2, 10, 170, 5000] {
            let a = ln_factorial(n);
            let b = ln_factorial_big(n).to_f64();
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "n = {n}: {a} vs {b}");
        }
        let big = LN_FACTORIAL_SUM_LIMIT + 10;
        assert!((ln_factorial(big) / libm::lgamma(big as f64 + 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_examples() {
        let t = threshold_formulas(12, 2, 0.0).unwrap();
        assert!((t.r_star - 66.0 / 479_001_600f64.ln()).abs() < 1e-12);
        assert!((t.r_star - 3.302).abs() < 1e-3);
        let width = t.r_upper - t.r_lower;
        assert!((width - (1.0 + 2.0 / (2.0 * 12f64.ln()))).abs() < 1e-12);

        let t = threshold_formulas(2, 2, 0.0).unwrap();
        assert!((t.r_star - 1.0 / 2f64.ln()).abs() < 1e-12);
        assert!(threshold_formulas(1, 2, 0.0).is_err());

        let t1 = threshold_formulas(20, 3, 2.0).unwrap();
        let t0 = threshold_formulas(20, 3, 0.0).unwrap();
        let shift = 2.0 / 20f64.ln().powi(2);
        assert!((t0.r_lower - t1.r_lower - shift).abs() < 1e-12);
        assert!((t1.r_upper - t0.r_upper - shift).abs() < 1e-12);
    }
}

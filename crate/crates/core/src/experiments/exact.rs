use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::perm::num_edges;
use crate::stacking::{find_rainbow_stacking, SearchBudget, SearchStatus, StackingInstance};

/// Largest coloring space `r^{m C(n,2)}` enumerated without an override.
pub const EXACT_PROBABILITY_LIMIT: u64 = 10_000_000;

/// Fraction of all `r^{m C(n,2)}` coloring tuples that admit a rainbow
/// stacking.
pub fn exact_existence_probability(n: usize, m: usize, r: u32) -> Result<BigRational> {
    exact_existence_probability_with(n, m, r, false)
}

pub fn exact_existence_probability_with(n: usize, m: usize, r: u32, override_guard: bool) -> Result<BigRational> {
    if n < 2 || m < 1 || r < 1 {
        return Err(Error::input("exact probability needs n >= 2, m >= 1, r >= 1"));
    }
    let slots = m * num_edges(n);
    let space = u64::from(r).checked_pow(slots as u32);
    if !override_guard && space.is_none_or(|s| s > EXACT_PROBABILITY_LIMIT) {
        return Err(Error::capability(format!(
            "{r}^{slots} coloring tuples exceed the enumeration limit of {EXACT_PROBABILITY_LIMIT}"
        )));
    }
    let space = space.ok_or_else(|| Error::capability("coloring space does not fit in 64 bits"))?;
    if m == 1 {
        return Ok(BigRational::one());
    }
    if (r as usize) < m {
        return Ok(BigRational::zero());
    }
    let ne = num_edges(n);
    let mut digits = vec![0u32; slots];
    let mut hits = 0u64;
    loop {
        let colorings = digits
            .chunks(ne)
            .map(|c| EdgeColoring::new(n, r, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let inst = StackingInstance::new(colorings)?;
        if find_rainbow_stacking(&inst, SearchBudget::unlimited()).status == SearchStatus::Found {
            hits += 1;
        }
        let mut i = 0;
        loop {
            if i == slots {
                return Ok(BigRational::new(BigInt::from(hits), BigInt::from(space)));
            }
            digits[i] += 1;
            if digits[i] < r {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

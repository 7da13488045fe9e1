use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::counting::{difference_histogram, energy_k};
use crate::ambient::CompositionMode;
use crate::error::{Error, Result};
use crate::set::GroundSet;
use crate::util::{big_str, log2_big};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseCoreReport {
    pub g: u32,
    #[serde(with = "big_str")]
    pub energy_full: BigUint,
    #[serde(with = "big_str")]
    pub energy_core: BigUint,
    /// `E_{g+1}(A_*) / E_{g+1}(A)`.
    pub ratio: f64,
    /// `4^{-(g+1)^2}`.
    pub floor: f64,
    /// `E_{g+1}(A_*) · 4^{(g+1)^2} ≥ E_{g+1}(A)`, decided exactly.
    pub floor_holds: bool,
    pub core_size: usize,
}

/// `A_* = {a : Σ_{x∈A} r_{A-A}(x - a)^g ≥ E_{g+1}(A) / (2|A|)}`.
///
/// The inner sums add up to `E_{g+1}(A)` over `a ∈ A`, so the threshold is
/// half the average and `A_*` is never empty.
pub fn dense_core_extract(a: &GroundSet, g: u32) -> Result<(GroundSet, DenseCoreReport)> {
    if g == 0 {
        return Err(Error::invalid("g must be >= 1"));
    }
    if a.is_empty() {
        return Err(Error::invalid("dense core of an empty set"));
    }
    let amb = *a.ambient();
    let hist = difference_histogram(a)?;
    let e_full = energy_k(a, g + 1, CompositionMode::Difference)?.value;
    let n = a.len() as u64;
    let mut core = Vec::new();
    for y in a.iter() {
        let mut s = BigUint::ZERO;
        for x in a.iter() {
            let r = hist.get_elem(amb.sub(x, y)?);
            s += num_traits::pow(BigUint::from(r), g as usize);
        }
        if s * (2 * n) >= e_full {
            core.push(y);
        }
    }
    let core = GroundSet::new(amb, core)?;
    let e_core = energy_k(&core, g + 1, CompositionMode::Difference)?.value;
    let exp = ((g + 1) * (g + 1)) as usize;
    let floor_holds = &e_core * num_traits::pow(BigUint::from(4u32), exp) >= e_full;
    let ratio = (log2_big(&e_core) - log2_big(&e_full)).exp2();
    Ok((
        core.clone(),
        DenseCoreReport {
            g,
            energy_full: e_full,
            energy_core: e_core,
            ratio,
            floor: (-2.0 * exp as f64).exp2(),
            floor_holds,
            core_size: core.len(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_core_is_nonempty_and_dense() {
        let a = GroundSet::interval(0, 19);
        for g in 1..=2 {
            let (core, rep) = dense_core_extract(&a, g).unwrap();
            assert!(!core.is_empty());
            assert!(rep.floor_holds);
        }
    }

    #[test]
    fn clustered_block_is_kept() {
        let a = GroundSet::integers([0, 1, 2, 3, 100, 200, 400]);
        let (core, rep) = dense_core_extract(&a, 1).unwrap();
        for x in 0..4 {
            assert!(core.contains(&x.into()));
        }
        assert!(&rep.energy_core * 16u32 >= rep.energy_full);
        let one = GroundSet::integers([7]);
        assert_eq!(dense_core_extract(&one, 2).unwrap().0, one);
    }
}

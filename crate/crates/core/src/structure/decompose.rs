use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::ambient::{CompositionMode, Element};
use crate::counting::{count_profile, dyadic_best_level, energy_from_profile};
use crate::error::{Error, Result};
use crate::set::GroundSet;
use crate::util::{big_str, ceil_half_power, kappa, le_power, Exponent};

pub const FORMAT_VERSION: u32 = 1;

/// One step of the energy iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationStep {
    pub l: u32,
    #[serde(with = "big_str")]
    pub energy: BigUint,
    #[serde(with = "big_str")]
    pub energy_next: BigUint,
    pub kappa: Option<f64>,
    /// `E_l ≤ |A|^{l+δ}`.
    pub small: bool,
    /// `M·E_{l+1} ≥ |A|·E_l`.
    pub jump: bool,
}

/// The popular core found at a jump `E_{l+1} ≥ |A| E_l / M`.
///
/// With `m(a) = |A ∩ (P + a)|` and `total = Σ_{a∈A} m(a)`, the threshold is
/// `θ = total / (2|A|)` and `A' = {a ∈ A : m(a) ≥ θ}`; elements below `θ`
/// carry less than half of `total`, so `A'` carries at least half.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopularCore {
    pub l: u32,
    /// The dyadic band is `(band_upper/2, band_upper]`.
    pub band_upper: u64,
    pub delta: f64,
    pub p: GroundSet,
    pub total_mass: u64,
    /// `total_mass / (2|A|)`, informational; comparisons use integers.
    pub theta: f64,
    pub a_prime: GroundSet,
    /// `min_{a∈A'} m(a)`.
    pub min_mass: u64,
    /// `Σ_{a∈A'} m(a)`.
    pub core_mass: u64,
}

/// The rigid part built from a popular core. Everything except the
/// disjointness of the translates is a measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidPart {
    pub core: PopularCore,
    /// `p ~ p'` iff `4M²·r_{P-P}(p - p') ≥ |P|`.
    pub center: Element,
    pub h: GroundSet,
    pub w: GroundSet,
    pub z: GroundSet,
    pub h_sumset_size: u64,
    /// `|H+H| / |H|` (measured).
    pub doubling: f64,
    pub z_times_h: u64,
    /// `Σ_{z∈Z} |A ∩ (H + z)|`.
    pub covered_mass: u64,
    pub disjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    SmallEnergy {
        k: u32,
        #[serde(with = "big_str")]
        energy: BigUint,
        kappa: Option<f64>,
        /// `E_k ≤ |A|^{k+δ}`, decided exactly. False only when the loop ran
        /// out without a jump and the energy is still above the threshold.
        below_threshold: bool,
    },
    PopularCore(PopularCore),
    RigidStructure(Box<RigidPart>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureCertificate {
    pub format_version: u32,
    pub set_size: usize,
    pub delta: Exponent,
    pub eps: Exponent,
    /// `⌈|A|^{ε/2}⌉`.
    pub m: u64,
    /// `⌈2/ε⌉ + 2`.
    pub l_max: u32,
    pub trace: Vec<IterationStep>,
    pub outcome: Outcome,
}

impl StructureCertificate {
    pub fn kind(&self) -> &'static str {
        match self.outcome {
            Outcome::SmallEnergy { .. } => "small-energy",
            Outcome::PopularCore(_) => "popular-core",
            Outcome::RigidStructure(_) => "rigid-structure",
        }
    }
}

pub(crate) fn check_exponents(delta: Exponent, eps: Exponent) -> Result<()> {
    let one = Exponent::new(1, 1)?;
    let le = |x: Exponent, y: Exponent| x.numer() as u128 * y.denom() as u128 <= y.numer() as u128 * x.denom() as u128;
    if delta.is_zero() || eps.is_zero() || !le(delta, one) || !le(eps, one) || !le(eps, delta) {
        return Err(Error::invalid(format!("need 0 < eps <= delta <= 1, got delta={delta}, eps={eps}")));
    }
    Ok(())
}

pub(crate) fn loop_bound(eps: Exponent) -> u32 {
    (2 * eps.denom()).div_ceil(eps.numer()) as u32 + 2
}

/// `m(a) = |A ∩ (P + a)|` for every `a ∈ A`, in element order.
pub(crate) fn masses(a: &GroundSet, p: &GroundSet) -> Result<Vec<u64>> {
    let amb = *a.ambient();
    let look = a.lookup();
    a.iter()
        .map(|x| {
            let mut m = 0u64;
            for y in p.iter() {
                if look.contains(amb.add(y, x)?) {
                    m += 1;
                }
            }
            Ok(m)
        })
        .collect()
}

pub(crate) fn popular_core(a: &GroundSet, l: u32) -> Result<PopularCore> {
    let level = dyadic_best_level(a, l)?;
    let mass = masses(a, &level.set)?;
    let total: u64 = mass.iter().sum();
    let n = a.len() as u64;
    let keep: Vec<usize> = (0..a.len()).filter(|&i| 2 * n * mass[i] >= total).collect();
    let min_mass = keep.iter().map(|&i| mass[i]).min().unwrap_or(0);
    let core_mass = keep.iter().map(|&i| mass[i]).sum();
    Ok(PopularCore {
        l,
        band_upper: level.band_upper,
        delta: level.delta,
        p: level.set,
        total_mass: total,
        theta: total as f64 / (2 * n) as f64,
        a_prime: a.subset_by_index(&keep),
        min_mass,
        core_mass,
    })
}

/// The energy-gap iteration for `l = 2, ..., ⌈2/ε⌉ + 2`.
///
/// At each `l` the energy is first compared with `|A|^{l+δ}`; if it is below,
/// the result is `SmallEnergy` with `k = l`. Otherwise a jump
/// `E_{l+1} ≥ |A| E_l / M` yields a `PopularCore` from the best dyadic level.
/// Without a jump the loop moves on; after the last step the certificate is
/// `SmallEnergy` at `k = L_max + 1` with the exact comparison recorded.
pub fn energy_gap_decompose(a: &GroundSet, delta: Exponent, eps: Exponent) -> Result<StructureCertificate> {
    check_exponents(delta, eps)?;
    let n = a.len();
    if n < 4 {
        return Err(Error::invalid(format!("decomposition needs |A| >= 4, got {n}")));
    }
    let m = ceil_half_power(n as u64, eps);
    let l_max = loop_bound(eps);
    let profile = count_profile(a, a, CompositionMode::Difference)?;
    let mut trace = Vec::new();
    let cert = |trace: Vec<IterationStep>, outcome| StructureCertificate {
        format_version: FORMAT_VERSION,
        set_size: n,
        delta,
        eps,
        m,
        l_max,
        trace,
        outcome,
    };
    for l in 2..=l_max {
        let energy = energy_from_profile(&profile, l);
        let energy_next = energy_from_profile(&profile, l + 1);
        let small = le_power(&energy, n as u64, l as u64, delta);
        let jump = !small && &energy_next * m >= &energy * n;
        trace.push(IterationStep {
            l,
            kappa: kappa(&energy, n, l),
            energy: energy.clone(),
            energy_next,
            small,
            jump,
        });
        if small {
            let kappa = kappa(&energy, n, l);
            return Ok(cert(trace, Outcome::SmallEnergy { k: l, energy, kappa, below_threshold: true }));
        }
        if jump {
            return Ok(cert(trace, Outcome::PopularCore(popular_core(a, l)?)));
        }
    }
    let k = l_max + 1;
    let energy = energy_from_profile(&profile, k);
    let below_threshold = le_power(&energy, n as u64, k as u64, delta);
    Ok(cert(
        trace,
        Outcome::SmallEnergy { k, kappa: kappa(&energy, n, k), energy, below_threshold },
    ))
}

/// `{t ≠ 0 : |A ∩ (A + t)| ≥ θ}`, the level set of `r_{A-A}` above `θ`.
pub fn popular_symmetry_set(a: &GroundSet, theta: u64) -> Result<GroundSet> {
    if theta == 0 {
        return Err(Error::invalid("theta must be >= 1"));
    }
    let hist = crate::counting::difference_histogram(a)?;
    let zero = a.ambient().zero();
    let t: Vec<Element> = hist
        .iter()
        .filter(|&(_, c)| c >= theta)
        .filter_map(|(v, _)| v.as_element())
        .filter(|&x| x != zero)
        .collect();
    GroundSet::new(*a.ambient(), t)
}

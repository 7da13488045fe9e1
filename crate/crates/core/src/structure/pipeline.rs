use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpec, CompositionMode, Element};
use crate::counting::energies;
use crate::error::{Error, Result};
use crate::set::GroundSet;
use crate::sidon::{extract_random, ExtractionResult};
use crate::util::{big_str, kappa, log2_big, Exponent};

use super::decompose::{Outcome, StructureCertificate, FORMAT_VERSION};
use super::rigid::{covered_part, rigid_structure};

/// Multiplicative energies are scanned for `l = 2, ..., MULT_LEVELS`.
pub const MULT_LEVELS: u32 = 4;

/// Fraction of `(|A_*|^{2l} / Ê_l)^{1/(2l-1)}` reported as the size floor.
pub const SIZE_FLOOR_FACTOR: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreChoice {
    /// `A_* = (H ∔ Z) ∩ A`.
    #[default]
    Rigid,
    /// `A_* = A'`.
    PopularCore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    AdditiveSmallEnergy,
    MultiplicativeAfterStructure,
    /// `|A| < 4`: the set is returned through a trivial extraction.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub delta: Exponent,
    pub eps: Exponent,
    pub seed: u64,
    pub trials: u64,
    pub core: CoreChoice,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            delta: Exponent::new(1, 4).expect("valid"),
            eps: Exponent::new(1, 16).expect("valid"),
            seed: 0,
            trials: 20,
            core: CoreChoice::Rigid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativeLevel {
    pub l: u32,
    #[serde(with = "big_str")]
    pub energy: BigUint,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub format_version: u32,
    pub options: PipelineOptions,
    pub set_size: usize,
    pub branch: Branch,
    pub certificate: Option<StructureCertificate>,
    /// The set handed to the extraction (`A` in the additive branch).
    pub core: GroundSet,
    pub removed_zero: bool,
    pub multiplicative_levels: Vec<MultiplicativeLevel>,
    pub extraction: ExtractionResult,
    pub subset_size: usize,
    /// `SIZE_FLOOR_FACTOR · (|A_*|^{2l} / E)^{1/(2l-1)}` with the full
    /// energy `E` of the extraction mode; informational.
    pub size_floor: f64,
    /// `⌈√|A|⌉`.
    pub sqrt_target: u64,
    pub meets_sqrt_target: bool,
}

pub(crate) fn isqrt_ceil(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

pub(crate) fn size_floor(n: usize, l: u32, energy: &BigUint) -> f64 {
    if n == 0 || energy == &BigUint::ZERO {
        return 0.0;
    }
    let e = (2.0 * l as f64 * (n as f64).log2() - log2_big(energy)) / (2 * l - 1) as f64;
    SIZE_FLOOR_FACTOR * e.exp2()
}

/// Level with the smallest multiplicative `κ`; ties go to the smaller `l`.
pub(crate) fn multiplicative_levels(core: &GroundSet) -> Result<(Vec<MultiplicativeLevel>, u32)> {
    let ks: Vec<u32> = (2..=MULT_LEVELS).collect();
    let values = energies(core, CompositionMode::Product, &ks)?;
    let levels: Vec<MultiplicativeLevel> = ks
        .iter()
        .zip(values)
        .map(|(&l, energy)| MultiplicativeLevel { l, kappa: kappa(&energy, core.len(), l), energy })
        .collect();
    let chosen = levels
        .iter()
        .min_by(|x, y| {
            let (a, b) = (x.kappa.unwrap_or(0.0), y.kappa.unwrap_or(0.0));
            a.total_cmp(&b).then(x.l.cmp(&y.l))
        })
        .map_or(2, |lv| lv.l);
    Ok((levels, chosen))
}

pub(crate) fn check_pipeline_input(a: &GroundSet) -> Result<()> {
    match *a.ambient() {
        AmbientSpec::Integers => Ok(()),
        AmbientSpec::PrimeField(p) => {
            let n = a.len() as u128;
            if n * n >= p as u128 {
                Err(Error::PreconditionFailed {
                    hypothesis: "|A| < sqrt(p)".into(),
                    witness: format!("|A| = {}, p = {p}", a.len()),
                })
            } else {
                Ok(())
            }
        }
        other => Err(Error::UnsupportedMode {
            mode: "sum-product pipeline".into(),
            ambient: other.to_string(),
        }),
    }
}

/// The multiplicative stage works on `A_* \ {0}`.
pub(crate) fn without_zero(core: &GroundSet) -> (GroundSet, bool) {
    let zero = Element::Int(0);
    if core.contains(&zero) {
        (core.filter(|e| e != zero), true)
    } else {
        (core.clone(), false)
    }
}

/// Additive extraction when the decomposition certifies small energy,
/// otherwise a multiplicative extraction on the structured core.
pub fn sum_product_pipeline(a: &GroundSet, opts: PipelineOptions) -> Result<PipelineReport> {
    check_pipeline_input(a)?;
    let n = a.len();
    let sqrt_target = isqrt_ceil(n as u64);
    let finish = |branch, certificate, core: GroundSet, removed_zero, levels, extraction: ExtractionResult, floor| {
        let subset_size = extraction.subset.len();
        PipelineReport {
            format_version: FORMAT_VERSION,
            options: opts,
            set_size: n,
            branch,
            certificate,
            core,
            removed_zero,
            multiplicative_levels: levels,
            subset_size,
            size_floor: floor,
            sqrt_target,
            meets_sqrt_target: subset_size as u64 >= sqrt_target,
            extraction,
        }
    };
    if n < 4 {
        let ex = extract_random(a, 2, CompositionMode::Difference, opts.seed, 1)?;
        return Ok(finish(Branch::Degenerate, None, a.clone(), false, Vec::new(), ex, 0.0));
    }
    let cert = match opts.core {
        CoreChoice::Rigid => rigid_structure(a, opts.delta, opts.eps)?,
        CoreChoice::PopularCore => super::energy_gap_decompose(a, opts.delta, opts.eps)?,
    };
    let core = match &cert.outcome {
        Outcome::SmallEnergy { k, .. } => {
            let k = *k;
            let ex = extract_random(a, k, CompositionMode::Difference, opts.seed, opts.trials)?;
            let e = energies(a, CompositionMode::Difference, &[k])?.remove(0);
            let floor = size_floor(n, k, &e);
            return Ok(finish(Branch::AdditiveSmallEnergy, Some(cert), a.clone(), false, Vec::new(), ex, floor));
        }
        Outcome::PopularCore(core) => core.a_prime.clone(),
        Outcome::RigidStructure(part) => covered_part(a, part)?,
    };
    let (core, removed_zero) = without_zero(&core);
    if removed_zero {
        log::warn!("0 removed from the core before the multiplicative stage");
    }
    let (levels, l) = multiplicative_levels(&core)?;
    let ex = extract_random(&core, l, CompositionMode::Product, opts.seed, opts.trials)?;
    let energy = &levels.iter().find(|lv| lv.l == l).expect("chosen level").energy;
    let floor = size_floor(core.len(), l, energy);
    Ok(finish(Branch::MultiplicativeAfterStructure, Some(cert), core, removed_zero, levels, ex, floor))
}

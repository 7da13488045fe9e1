//! Randomized extraction of a subset with bounded multiplicities.
//!
//! A trial samples `A_*` by independent inclusion with probability
//! `q = min(1, (|A| / (2 E'))^{1/(2k-1)})`, where `E'` counts `2k`-tuples of
//! distinct elements sharing one value, then deletes elements until no
//! non-identity value has `k` pairwise disjoint representations. With fewer
//! than `k` disjoint pairs per difference, every difference has at most
//! `3k - 3` representations (a pair meets at most two others); for sums and
//! products pairs with one value are already disjoint, giving `2k - 2`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambient::{compose, AmbientSpec, CompositionMode, Element, Value};
use crate::counting::{energy_prime_k_with, Distinctness};
use crate::error::{Error, Result};
use crate::set::GroundSet;
use crate::sidon::verify_multiplicity;
use crate::util::{big_str, log2_big};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: u64,
    pub sample_size: usize,
    pub deletions: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub subset: GroundSet,
    pub mode: CompositionMode,
    pub k: u32,
    /// Bound on every non-identity count of `subset ∘ subset`.
    pub certified_bound: u64,
    pub q: f64,
    /// `E'_k` in `mode`, the tuple count behind `q`.
    #[serde(with = "big_str")]
    pub tuple_energy: BigUint,
    pub seed: u64,
    pub trials: u64,
    pub best_trial: u64,
    pub deletions: usize,
    pub verified: bool,
    pub per_trial: Vec<TrialSummary>,
}

/// One trial's outcome, including the surviving subset.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub sample_size: usize,
    pub deletions: usize,
    pub subset: GroundSet,
}

pub fn certified_bound(mode: CompositionMode, k: u32) -> u64 {
    match mode {
        CompositionMode::Difference => 3 * k as u64 - 3,
        _ => 2 * k as u64 - 2,
    }
}

fn check_inputs(a: &GroundSet, k: u32, mode: CompositionMode) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid("extraction needs k >= 2"));
    }
    a.ambient().require(mode)?;
    match mode {
        CompositionMode::Difference | CompositionMode::Sum => Ok(()),
        CompositionMode::Product => {
            if a.contains(&Element::Int(0)) {
                Err(Error::invalid("product-mode extraction needs 0 ∉ A"))
            } else {
                Ok(())
            }
        }
        CompositionMode::Ratio => Err(Error::invalid("extraction supports difference, sum and product")),
    }
}

/// Sampling probability for a given tuple energy.
pub fn sampling_probability(n: usize, k: u32, tuple_energy: &BigUint) -> f64 {
    if tuple_energy == &BigUint::ZERO || n == 0 {
        return 1.0;
    }
    // log2 of |A| / (2E'), then the (2k-1)-th root.
    let l = (n as f64).log2() - 1.0 - log2_big(tuple_energy);
    (l / (2 * k - 1) as f64).exp2().min(1.0)
}

/// Run `trials` independent trials. Trial `t` draws from a ChaCha8 stream
/// keyed by `(seed, t)`, so results do not depend on scheduling.
pub fn extract_trials(
    a: &GroundSet,
    k: u32,
    mode: CompositionMode,
    seed: u64,
    trials: u64,
) -> Result<(f64, BigUint, Vec<TrialOutcome>)> {
    check_inputs(a, k, mode)?;
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let energy = energy_prime_k_with(a, k, mode, Distinctness::AllDistinct)?;
    let q = sampling_probability(a.len(), k, &energy);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(a, k, mode, q, seed, t))
        .collect::<Result<Vec<_>>>()?;
    Ok((q, energy, outcomes))
}

/// The randomized extraction: the largest verified subset over all trials,
/// ties going to the lowest trial index.
pub fn extract_random(a: &GroundSet, k: u32, mode: CompositionMode, seed: u64, trials: u64) -> Result<ExtractionResult> {
    let (q, tuple_energy, outcomes) = extract_trials(a, k, mode, seed, trials)?;
    let best = outcomes
        .iter()
        .max_by(|x, y| x.subset.len().cmp(&y.subset.len()).then(y.trial.cmp(&x.trial)))
        .expect("at least one trial");
    let bound = certified_bound(mode, k);
    if let Some(w) = verify_multiplicity(&best.subset, bound.max(1), mode)? {
        return Err(Error::VerificationFailed(format!(
            "extracted subset violates r <= {bound}: {w:?}"
        )));
    }
    Ok(ExtractionResult {
        subset: best.subset.clone(),
        mode,
        k,
        certified_bound: bound,
        q,
        tuple_energy,
        seed,
        trials,
        best_trial: best.trial,
        deletions: best.deletions,
        verified: true,
        per_trial: outcomes
            .iter()
            .map(|o| TrialSummary {
                trial: o.trial,
                sample_size: o.sample_size,
                deletions: o.deletions,
                size: o.subset.len(),
            })
            .collect(),
    })
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(a: &GroundSet, k: u32, mode: CompositionMode, q: f64, seed: u64, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, trial);
    let mut sample: Vec<Element> = a.iter().filter(|_| q >= 1.0 || rng.random_bool(q)).collect();
    let sample_size = sample.len();
    let deletions = repair(a.ambient(), &mut sample, k, mode)?;
    Ok(TrialOutcome {
        trial,
        sample_size,
        deletions,
        subset: GroundSet::new(*a.ambient(), sample)?,
    })
}

/// A value with at least `k` pairwise disjoint representations, together
/// with a maximum disjoint family of its representing pairs.
struct Offender {
    family: Vec<(Element, Element)>,
}

/// Maximum disjoint family of pairs `(x + z, x)` inside `set` for a fixed
/// difference `z`: walk each chain of the graph `x -> x + z` and take every
/// other edge, which is optimal on paths and cycles.
fn difference_family(amb: &AmbientSpec, set: &[Element], z: Element) -> Vec<(Element, Element)> {
    let idx = |e: Element| set.binary_search(&e).ok();
    let next = |i: usize| amb.add(set[i], z).ok().and_then(idx);
    let prev = |i: usize| amb.sub(set[i], z).ok().and_then(idx);
    let mut seen = vec![false; set.len()];
    let mut family = Vec::new();
    let mut walk = |start: usize, seen: &mut Vec<bool>| {
        let (mut cur, mut take) = (start, true);
        seen[cur] = true;
        while let Some(nx) = next(cur) {
            if seen[nx] {
                break;
            }
            if take {
                family.push((set[nx], set[cur]));
            }
            take = !take;
            seen[nx] = true;
            cur = nx;
        }
    };
    // Paths first, from elements without a predecessor; what is left lies
    // on cycles.
    for i in 0..set.len() {
        if prev(i).is_none() {
            walk(i, &mut seen);
        }
    }
    for i in 0..set.len() {
        if !seen[i] {
            walk(i, &mut seen);
        }
    }
    family
}

type Pairs = Vec<(Element, Element)>;

/// All non-identity values with `k` disjoint representations, in canonical
/// value order, plus every representing pair of those values.
fn offenders(
    amb: &AmbientSpec,
    set: &[Element],
    k: u32,
    mode: CompositionMode,
) -> Result<(Vec<Offender>, Pairs)> {
    let exempt = amb.identity_value(mode);
    let mut reps: BTreeMap<Value, Vec<(Element, Element)>> = BTreeMap::new();
    for (i, &x) in set.iter().enumerate() {
        let others = match mode {
            CompositionMode::Difference => set,
            _ => &set[i..],
        };
        for &y in others {
            if mode == CompositionMode::Difference && x == y {
                continue;
            }
            let v = compose(amb, mode, x, y)?;
            if Some(v) == exempt {
                continue;
            }
            reps.entry(v).or_default().push((x, y));
        }
    }
    let mut out = Vec::new();
    let mut all_pairs = Vec::new();
    for (v, pairs) in reps {
        let family = match mode {
            CompositionMode::Difference => {
                let z = v.as_element().expect("difference");
                if pairs.len() < k as usize || amb.neg(z).is_ok_and(|nz| nz < z) {
                    // r(z) = r(-z); -z is handled instead.
                    continue;
                }
                difference_family(amb, set, z)
            }
            // Pairs {x, y} with one sum (product) are disjoint; the diagonal
            // (x, x) uses a single element.
            _ => pairs.clone(),
        };
        if family.len() >= k as usize {
            all_pairs.extend(pairs.iter().copied());
            out.push(Offender { family });
        }
    }
    Ok((out, all_pairs))
}

fn repair(amb: &AmbientSpec, set: &mut Vec<Element>, k: u32, mode: CompositionMode) -> Result<usize> {
    set.sort_unstable();
    let mut deletions = 0;
    loop {
        let (offs, pairs) = offenders(amb, set, k, mode)?;
        let Some(first) = offs.first() else { break };
        let mut participation: HashMap<Element, usize> = HashMap::new();
        for &(x, y) in &pairs {
            *participation.entry(x).or_insert(0) += 1;
            if y != x {
                *participation.entry(y).or_insert(0) += 1;
            }
        }
        let mut members: Vec<Element> = first.family.iter().flat_map(|&(x, y)| [x, y]).collect();
        members.sort_unstable();
        members.dedup();
        let victim = members
            .iter()
            .copied()
            .max_by(|x, y| participation[x].cmp(&participation[y]).then(y.cmp(x)))
            .expect("nonempty family");
        let pos = set.binary_search(&victim).expect("victim in set");
        set.remove(pos);
        deletions += 1;
    }
    Ok(deletions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_families_on_chains() {
        let amb = AmbientSpec::Integers;
        let set: Vec<Element> = (0..6).map(Element::Int).collect();
        // 0-1-2-3-4-5 with z = 1: three disjoint pairs.
        assert_eq!(difference_family(&amb, &set, 1.into()).len(), 3);
        assert_eq!(difference_family(&amb, &set, 2.into()).len(), 2);
        let z6 = AmbientSpec::integers_mod(6).unwrap();
        // A 6-cycle under +1, and three 2-cycles under +3.
        assert_eq!(difference_family(&z6, &set, 1.into()).len(), 3);
        assert_eq!(difference_family(&z6, &set, 3.into()).len(), 3);
        let z5 = AmbientSpec::integers_mod(5).unwrap();
        let five: Vec<Element> = (0..5).map(Element::Int).collect();
        assert_eq!(difference_family(&z5, &five, 2.into()).len(), 2);
    }

    #[test]
    fn sidon_input_survives_whole() {
        let a = GroundSet::integers([0, 1, 3]);
        let r = extract_random(&a, 2, CompositionMode::Difference, 1, 4).unwrap();
        assert_eq!(r.subset, a);
        assert_eq!(r.q, 1.0);
        assert!(r.verified);
    }

    #[test]
    fn repaired_sets_meet_their_bounds() {
        let a = GroundSet::interval(0, 63);
        for mode in [CompositionMode::Difference, CompositionMode::Sum] {
            for k in 2..=3 {
                let (_, _, outs) = extract_trials(&a, k, mode, 11, 6).unwrap();
                for o in outs {
                    assert_eq!(
                        verify_multiplicity(&o.subset, certified_bound(mode, k), mode).unwrap(),
                        None
                    );
                }
            }
        }
        let b = GroundSet::interval(1, 200);
        let r = extract_random(&b, 2, CompositionMode::Product, 3, 4).unwrap();
        assert!(r.verified);
        assert!(extract_random(&GroundSet::interval(0, 5), 2, CompositionMode::Product, 3, 1).is_err());
    }

    #[test]
    fn trials_are_reproducible() {
        let a = GroundSet::interval(0, 255);
        let r1 = extract_random(&a, 2, CompositionMode::Difference, 5, 8).unwrap();
        let r2 = extract_random(&a, 2, CompositionMode::Difference, 5, 8).unwrap();
        assert_eq!(r1, r2);
    }
}

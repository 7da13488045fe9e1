//! Representation functions and energies.
//!
//! Histograms are built with a dense tally when the composed values fit in a
//! small window (integers with a narrow span, or a small modulus) and with a
//! hash map otherwise. Energies only need the multiplicity profile
//! `count -> number of values with that count`, which is much smaller than
//! the histogram itself.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ambient::{mod_inverse, AmbientSpec, CompositionMode, Element, Value};
use crate::error::{Error, Result};
use crate::set::GroundSet;
use crate::util::{big_str, big_str_opt, factorial, kappa};

/// Largest value window tallied densely.
const DENSE_SPAN: i128 = 1 << 25;

/// `count -> number of distinct values with that count`.
pub type CountProfile = BTreeMap<u64, u64>;

/// Exact multiplicity map of `a ∘ b` over ordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepHistogram {
    pub mode: CompositionMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_label: Option<String>,
    /// Sorted by value; counts are positive.
    pub entries: Vec<(Value, u64)>,
    /// Number of ordered pairs tallied.
    pub total: u64,
    /// Ratio pairs dropped because the divisor was not invertible.
    pub skipped: u64,
}

impl RepHistogram {
    pub fn get(&self, v: &Value) -> u64 {
        self.entries
            .binary_search_by(|(x, _)| x.cmp(v))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn get_elem(&self, e: Element) -> u64 {
        self.get(&Value::Elem(e))
    }

    /// Number of distinct values.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Value, u64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn profile(&self) -> CountProfile {
        let mut p = CountProfile::new();
        for &(_, c) in &self.entries {
            *p.entry(c).or_insert(0) += 1;
        }
        p
    }

    /// Value of maximal count among values other than `exempt`; ties go to
    /// the smallest value.
    pub fn max_excluding(&self, exempt: Option<&Value>) -> Option<(Value, u64)> {
        let mut best: Option<(Value, u64)> = None;
        for &(v, c) in &self.entries {
            if Some(&v) == exempt {
                continue;
            }
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((v, c));
            }
        }
        best
    }
}

enum Tally {
    Dense { values: DenseValues, counts: Vec<u32> },
    Sparse(HashMap<Value, u64>),
}

#[derive(Clone, Copy)]
enum DenseValues {
    Offset(i64),
    Plane(i64),
}

impl DenseValues {
    fn value(self, i: usize) -> Value {
        match self {
            DenseValues::Offset(o) => Value::Elem(Element::Int(o + i as i64)),
            DenseValues::Plane(p) => {
                let i = i as i64;
                Value::Elem(Element::Pair(i / p, i % p))
            }
        }
    }
}

fn int_range(xs: &[i64], ys: &[i64], mode: CompositionMode) -> (i128, i128) {
    let (a0, a1) = (xs[0] as i128, *xs.last().unwrap() as i128);
    let (b0, b1) = (ys[0] as i128, *ys.last().unwrap() as i128);
    match mode {
        CompositionMode::Difference => (a0 - b1, a1 - b0),
        CompositionMode::Sum => (a0 + b0, a1 + b1),
        _ => {
            let c = [a0 * b0, a0 * b1, a1 * b0, a1 * b1];
            (*c.iter().min().unwrap(), *c.iter().max().unwrap())
        }
    }
}

fn dense_tally(a: &GroundSet, b: &GroundSet, mode: CompositionMode, skip: bool) -> Result<Option<(Tally, u64)>> {
    use CompositionMode::*;
    let amb = *a.ambient();
    if (a.len() as u128) * (b.len() as u128) > u32::MAX as u128 {
        return Ok(None);
    }
    match amb {
        AmbientSpec::Integers => {
            if mode == Ratio {
                return Ok(None);
            }
            let xs = a.ints().expect("integer set");
            let ys = b.ints().expect("integer set");
            let (lo, hi) = int_range(&xs, &ys, mode);
            if lo < i64::MIN as i128 || hi > i64::MAX as i128 {
                return Err(Error::overflow(format!(
                    "{mode} values span [{lo}, {hi}], beyond 64-bit range"
                )));
            }
            if hi - lo + 1 > DENSE_SPAN {
                return Ok(None);
            }
            let off = lo as i64;
            let mut counts = vec![0u32; (hi - lo + 1) as usize];
            for &x in &xs {
                match mode {
                    Difference => ys.iter().for_each(|&y| counts[(x - y - off) as usize] += 1),
                    Sum => ys.iter().for_each(|&y| counts[(x + y - off) as usize] += 1),
                    _ => ys.iter().for_each(|&y| counts[(x * y - off) as usize] += 1),
                }
            }
            Ok(Some((Tally::Dense { values: DenseValues::Offset(off), counts }, 0)))
        }
        AmbientSpec::IntegersMod(n) | AmbientSpec::PrimeField(n) => {
            if n as i128 > DENSE_SPAN {
                return Ok(None);
            }
            let xs = a.ints().expect("residues");
            let mut ys = b.ints().expect("residues");
            let mut skipped = 0u64;
            if mode == Ratio {
                if ys.contains(&0) {
                    if !skip {
                        return Err(Error::DivisionByZero("0".into()));
                    }
                    ys.retain(|&y| y != 0);
                    skipped = xs.len() as u64;
                }
                ys = ys.iter().map(|&y| mod_inverse(y, n).expect("prime modulus")).collect();
            }
            let nu = n as u64;
            let mut counts = vec![0u32; n as usize];
            for &x in &xs {
                let x = x as u64;
                match mode {
                    Difference => ys.iter().for_each(|&y| counts[((x + nu - y as u64) % nu) as usize] += 1),
                    Sum => ys.iter().for_each(|&y| counts[((x + y as u64) % nu) as usize] += 1),
                    Product | Ratio => ys.iter().for_each(|&y| counts[((x * y as u64) % nu) as usize] += 1),
                }
            }
            Ok(Some((Tally::Dense { values: DenseValues::Offset(0), counts }, skipped)))
        }
        AmbientSpec::PrimeSquarePlane(p) => {
            if (p as i128) * (p as i128) > DENSE_SPAN {
                return Ok(None);
            }
            let mut counts = vec![0u32; (p * p) as usize];
            for x in a.iter() {
                for y in b.iter() {
                    let v = match mode {
                        Difference => amb.sub(x, y)?,
                        _ => amb.add(x, y)?,
                    };
                    let Element::Pair(u, w) = v else { unreachable!() };
                    counts[(u * p + w) as usize] += 1;
                }
            }
            Ok(Some((Tally::Dense { values: DenseValues::Plane(p), counts }, 0)))
        }
    }
}

fn tally(a: &GroundSet, b: &GroundSet, mode: CompositionMode, skip: bool) -> Result<(Tally, u64)> {
    a.same_ambient(b)?;
    let amb = *a.ambient();
    amb.require(mode)?;
    if a.is_empty() || b.is_empty() {
        return Ok((Tally::Sparse(HashMap::new()), 0));
    }
    if let Some(t) = dense_tally(a, b, mode, skip)? {
        return Ok(t);
    }
    let mut map: HashMap<Value, u64> = HashMap::new();
    let mut skipped = 0;
    for x in a.iter() {
        for y in b.iter() {
            match crate::ambient::compose(&amb, mode, x, y) {
                Ok(v) => *map.entry(v).or_insert(0) += 1,
                Err(Error::DivisionByZero(_)) if skip => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok((Tally::Sparse(map), skipped))
}

fn label_of(s: &GroundSet) -> Option<String> {
    s.label().map(str::to_string)
}

/// `r_{A∘B}`. Ratio pairs with a non-invertible divisor raise
/// [`Error::DivisionByZero`].
pub fn rep_histogram(a: &GroundSet, b: &GroundSet, mode: CompositionMode) -> Result<RepHistogram> {
    rep_histogram_with(a, b, mode, false)
}

/// Like [`rep_histogram`]; with `skip_noninvertible` such ratio pairs are
/// counted in `skipped` instead.
pub fn rep_histogram_with(
    a: &GroundSet,
    b: &GroundSet,
    mode: CompositionMode,
    skip_noninvertible: bool,
) -> Result<RepHistogram> {
    let (t, skipped) = tally(a, b, mode, skip_noninvertible)?;
    let entries: Vec<(Value, u64)> = match t {
        Tally::Dense { values, counts } => counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (values.value(i), c as u64))
            .collect(),
        Tally::Sparse(map) => {
            let mut v: Vec<_> = map.into_iter().collect();
            v.sort_unstable();
            v
        }
    };
    let total = entries.iter().map(|e| e.1).sum();
    Ok(RepHistogram {
        mode,
        left_label: label_of(a),
        right_label: label_of(b),
        entries,
        total,
        skipped,
    })
}

/// `r_{A-A}`.
pub fn difference_histogram(a: &GroundSet) -> Result<RepHistogram> {
    rep_histogram(a, a, CompositionMode::Difference)
}

/// Multiplicity profile of `r_{A∘B}` without materializing the values.
pub fn count_profile(a: &GroundSet, b: &GroundSet, mode: CompositionMode) -> Result<CountProfile> {
    let (t, _) = tally(a, b, mode, false)?;
    let mut p = CountProfile::new();
    match t {
        Tally::Dense { counts, .. } => {
            for c in counts.into_iter().filter(|&c| c > 0) {
                *p.entry(c as u64).or_insert(0) += 1;
            }
        }
        Tally::Sparse(map) => {
            for c in map.into_values() {
                *p.entry(c).or_insert(0) += 1;
            }
        }
    }
    Ok(p)
}

/// `Σ_x r(x)^k` from a multiplicity profile.
pub fn energy_from_profile(profile: &CountProfile, k: u32) -> BigUint {
    profile.iter().fold(BigUint::zero(), |acc, (&c, &m)| {
        acc + num_traits::pow(BigUint::from(c), k as usize) * m
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub k: u32,
    pub mode: CompositionMode,
    pub set_size: usize,
    #[serde(with = "big_str")]
    pub value: BigUint,
    /// `log_{|A|}(value) - k`; absent for `|A| < 2`.
    pub kappa: Option<f64>,
    /// `E'_k` (all 2k entries distinct), when requested.
    #[serde(default, with = "big_str_opt", skip_serializing_if = "Option::is_none")]
    pub distinct_variant_value: Option<BigUint>,
}

/// `E_k` (difference), `Ê_k` (sum) or the multiplicative analogue.
pub fn energy_k(a: &GroundSet, k: u32, mode: CompositionMode) -> Result<EnergyReport> {
    if k == 0 {
        return Err(Error::invalid("energy order k must be >= 1"));
    }
    let value = energy_from_profile(&count_profile(a, a, mode)?, k);
    Ok(EnergyReport {
        k,
        mode,
        set_size: a.len(),
        kappa: kappa(&value, a.len(), k),
        value,
        distinct_variant_value: None,
    })
}

/// Energies `E_k` for several `k` from one histogram pass.
pub fn energies(a: &GroundSet, mode: CompositionMode, ks: &[u32]) -> Result<Vec<BigUint>> {
    let p = count_profile(a, a, mode)?;
    Ok(ks.iter().map(|&k| energy_from_profile(&p, k)).collect())
}

/// Which tuples `energy_prime_k` counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distinctness {
    /// All `2k` entries pairwise distinct.
    #[default]
    AllDistinct,
    /// Only `x_j ≠ x'_j` inside each pair.
    WithinPairs,
}

/// `E'_k`: ordered `2k`-tuples with pairwise distinct entries and
/// `x_1 - x'_1 = ... = x_k - x'_k`.
pub fn energy_prime_k(a: &GroundSet, k: u32) -> Result<BigUint> {
    energy_prime_k_with(a, k, CompositionMode::Difference, Distinctness::AllDistinct)
}

/// `E'_k` for any composition mode and either reading of distinctness.
///
/// The all-distinct count is exact for every size. For a fixed nonzero
/// difference `z`, pairs `(x + z, x)` are the edges of the graph
/// `x -> x + z` on `A`, a disjoint union of paths and cycles, and a
/// `k`-tuple of pairs with distinct entries is an ordered `k`-matching.
/// For sums and products, pairs with a fixed value are already disjoint
/// (apart from the product value 0, which forms a star).
pub fn energy_prime_k_with(
    a: &GroundSet,
    k: u32,
    mode: CompositionMode,
    reading: Distinctness,
) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let amb = *a.ambient();
    amb.require(mode)?;
    let hist = rep_histogram_with(a, a, mode, true)?;
    match reading {
        Distinctness::WithinPairs => within_pairs(a, &hist, k, mode),
        Distinctness::AllDistinct => match mode {
            CompositionMode::Difference => difference_all_distinct(a, &hist, k),
            _ => involution_all_distinct(a, &hist, k, mode),
        },
    }
}

/// Number of `x ∈ A` with `x ∘ x = v`.
fn diagonal_counts(a: &GroundSet, mode: CompositionMode) -> Result<HashMap<Value, u64>> {
    let amb = *a.ambient();
    let mut d = HashMap::new();
    for x in a.iter() {
        match crate::ambient::compose(&amb, mode, x, x) {
            Ok(v) => *d.entry(v).or_insert(0) += 1,
            Err(Error::DivisionByZero(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(d)
}

fn within_pairs(a: &GroundSet, hist: &RepHistogram, k: u32, mode: CompositionMode) -> Result<BigUint> {
    let diag = diagonal_counts(a, mode)?;
    let mut total = BigUint::zero();
    for (v, c) in hist.iter() {
        let off = c - diag.get(&v).copied().unwrap_or(0);
        total += num_traits::pow(BigUint::from(off), k as usize);
    }
    Ok(total)
}

fn involution_all_distinct(a: &GroundSet, hist: &RepHistogram, k: u32, mode: CompositionMode) -> Result<BigUint> {
    let diag = diagonal_counts(a, mode)?;
    let two_k = num_traits::pow(BigUint::from(2u32), k as usize);
    let zero = Value::Elem(Element::Int(0));
    let mut total = BigUint::zero();
    for (v, c) in hist.iter() {
        let off = c - diag.get(&v).copied().unwrap_or(0);
        if mode == CompositionMode::Product && v == zero {
            // x·x' = 0 forces 0 into every pair: only single pairs are disjoint.
            if k == 1 {
                total += off;
            }
            continue;
        }
        let m = off / 2;
        if m < k as u64 {
            continue;
        }
        let falling = (0..k as u64).fold(BigUint::one(), |acc, i| acc * (m - i));
        total += falling * &two_k;
    }
    Ok(total)
}

/// Truncated polynomial product, degree ≤ k.
fn poly_mul(p: &[BigUint], q: &[BigUint], k: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); k + 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate().take(k + 1 - i) {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_pow(p: &[BigUint], mut e: u64, k: usize) -> Vec<BigUint> {
    let mut acc = vec![BigUint::zero(); k + 1];
    acc[0] = BigUint::one();
    let mut base = p.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(&acc, &base, k);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul(&base, &base, k);
        }
    }
    acc
}

fn binom(n: u64, j: u64) -> BigUint {
    if j > n {
        return BigUint::zero();
    }
    let j = j.min(n - j);
    (0..j).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Matching polynomial (degree ≤ k) of a path (`cycle = false`) or cycle on
/// `m` vertices.
fn matching_poly(m: u64, cycle: bool, k: usize) -> Vec<BigUint> {
    (0..=k as u64)
        .map(|j| {
            if 2 * j > m {
                BigUint::zero()
            } else if cycle && m >= 3 && j > 0 {
                // m - j - 1 ≥ 0 because 2j ≤ m and m ≥ 3
                binom(m - j, j) + binom(m - j - 1, j - 1)
            } else {
                binom(m - j, j)
            }
        })
        .collect()
}

/// Components of the graph `x -> x + z` on `A`, as `(is_cycle, size) -> count`.
/// A 2-cycle (`2z = 0`) is reported as a path on two vertices.
pub(crate) fn step_components(a: &GroundSet, z: Element) -> BTreeMap<(bool, u64), u64> {
    let amb = *a.ambient();
    let elems = a.elements();
    let idx = |e: Element| elems.binary_search(&e).ok();
    let step = |e: Element| amb.add(e, z).ok().and_then(idx);
    let back = |e: Element| amb.sub(e, z).ok().and_then(idx);
    let mut seen = vec![false; elems.len()];
    let mut comps = BTreeMap::new();
    for start in 0..elems.len() {
        if seen[start] || back(elems[start]).is_some() {
            continue;
        }
        let mut m = 0;
        let mut cur = Some(start);
        while let Some(i) = cur {
            seen[i] = true;
            m += 1;
            cur = step(elems[i]);
        }
        *comps.entry((false, m)).or_insert(0) += 1;
    }
    for start in 0..elems.len() {
        if seen[start] {
            continue;
        }
        let mut m = 0;
        let mut i = start;
        loop {
            seen[i] = true;
            m += 1;
            i = step(elems[i]).expect("unvisited vertices lie on cycles");
            if i == start {
                break;
            }
        }
        *comps.entry((m >= 3, m)).or_insert(0) += 1;
    }
    comps
}

fn difference_all_distinct(a: &GroundSet, hist: &RepHistogram, k: u32) -> Result<BigUint> {
    let amb = *a.ambient();
    let zero = amb.zero();
    let ku = k as usize;
    let kfact = factorial(k as u64);
    let two_k = num_traits::pow(BigUint::from(2u32), ku);
    let mut total = BigUint::zero();
    for (v, r) in hist.iter() {
        let z = v.as_element().expect("difference values are elements");
        if z == zero {
            continue;
        }
        let negz = amb.neg(z)?;
        if z > negz {
            continue;
        }
        let involutive = z == negz;
        let edges = if involutive { r / 2 } else { r };
        if edges < k as u64 {
            continue;
        }
        let mut poly = vec![BigUint::zero(); ku + 1];
        poly[0] = BigUint::one();
        for ((cycle, m), count) in step_components(a, z) {
            if m < 2 {
                continue;
            }
            poly = poly_mul(&poly, &poly_pow(&matching_poly(m, cycle, ku), count, ku), ku);
        }
        let orient = if involutive { &two_k } else { &BigUint::from(2u32) };
        total += &poly[ku] * &kfact * orient;
    }
    Ok(total)
}

/// Largest set accepted by [`energy_prime_k_enumerate`].
pub const ENUMERATION_CAP: usize = 12;

/// `E'_k` by direct enumeration of pair tuples (small sets only).
pub fn energy_prime_k_enumerate(
    a: &GroundSet,
    k: u32,
    mode: CompositionMode,
    reading: Distinctness,
) -> Result<BigUint> {
    if a.len() > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "E'_k enumeration".into(),
            size: a.len() as u64,
            cap: ENUMERATION_CAP as u64,
        });
    }
    let amb = *a.ambient();
    amb.require(mode)?;
    let mut by_value: BTreeMap<Value, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in a.iter().enumerate() {
            if i == j {
                continue;
            }
            match crate::ambient::compose(&amb, mode, x, y) {
                Ok(v) => by_value.entry(v).or_default().push((i, j)),
                Err(Error::DivisionByZero(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    fn count(pairs: &[(usize, usize)], left: u32, used: u32, all_distinct: bool) -> u64 {
        if left == 0 {
            return 1;
        }
        pairs
            .iter()
            .filter(|&&(i, j)| !all_distinct || (used >> i) & 1 == 0 && (used >> j) & 1 == 0)
            .map(|&(i, j)| count(pairs, left - 1, used | 1 << i | 1 << j, all_distinct))
            .sum()
    }
    let all = reading == Distinctness::AllDistinct;
    let mut total = BigUint::zero();
    for pairs in by_value.values() {
        total += count(pairs, k, 0, all);
    }
    Ok(total)
}

/// `|A ∩ (A + s_1) ∩ ... ∩ (A + s_m)|`.
pub fn intersection_size(a: &GroundSet, shifts: &[Element]) -> Result<usize> {
    let amb = *a.ambient();
    for &s in shifts {
        amb.check(s)?;
    }
    Ok(a
        .iter()
        .filter(|&x| shifts.iter().all(|&s| amb.sub(x, s).is_ok_and(|y| a.contains(&y))))
        .count())
}

/// `E(A, B) = Σ_x r_{A-A}(x) r_{B-B}(x)`.
pub fn common_energy(a: &GroundSet, b: &GroundSet) -> Result<BigUint> {
    a.same_ambient(b)?;
    let ha = difference_histogram(a)?;
    let hb = difference_histogram(b)?;
    let (mut i, mut j) = (0, 0);
    let mut total = BigUint::zero();
    while i < ha.entries.len() && j < hb.entries.len() {
        let (va, ca) = ha.entries[i];
        let (vb, cb) = hb.entries[j];
        match va.cmp(&vb) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                total += BigUint::from(ca) * cb;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(total)
}

/// Values `x` of `hist` with `upper/2 < r(x) ≤ upper`.
fn band(hist: &RepHistogram, upper: u64, exclude: Option<Value>) -> Vec<Element> {
    hist.iter()
        .filter(|&(v, c)| 2 * c > upper && c <= upper && Some(v) != exclude)
        .filter_map(|(v, _)| v.as_element())
        .collect()
}

/// `{x : delta < r_{A-A}(x) ≤ 2·delta}`, with `0` only if `include_zero`.
pub fn popular_level_set(a: &GroundSet, delta: u64, include_zero: bool) -> Result<GroundSet> {
    if delta == 0 {
        return Err(Error::invalid("delta must be >= 1"));
    }
    let hist = difference_histogram(a)?;
    let exclude = (!include_zero).then(|| Value::Elem(a.ambient().zero()));
    Ok(GroundSet::from_sorted_unchecked(*a.ambient(), band(&hist, 2 * delta, exclude)))
}

/// Outcome of the dyadic pigeonhole over `r_{A-A}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicLevel {
    /// Upper end `U = 2Δ` of the band `(U/2, U]`. The lowest band has
    /// `U = 1`, i.e. `Δ = 1/2`.
    pub band_upper: u64,
    pub delta: f64,
    pub set: GroundSet,
    /// `U^{l+1}·|P| = 2^{l+1}·Δ^{l+1}·|P|`.
    #[serde(with = "big_str")]
    pub score: BigUint,
    /// Number of dyadic bands covering `[1, |A|]`.
    pub bands: u32,
}

/// Number of bands `(U/2, U]`, `U = 1, 2, 4, ...`, needed to cover `[1, n]`.
pub fn dyadic_band_count(n: usize) -> u32 {
    let mut u = 1u64;
    let mut bands = 1;
    while u < n as u64 {
        u *= 2;
        bands += 1;
    }
    bands
}

/// The band `(U/2, U]` maximizing `U^{l+1}·|P_U|` (ties go to the larger band).
/// Since `E_{l+1}(A) ≤ Σ_U U^{l+1}|P_U|`, the winner satisfies
/// `U^{l+1}|P| · bands ≥ E_{l+1}(A)`.
pub fn dyadic_best_level(a: &GroundSet, l: u32) -> Result<DyadicLevel> {
    if l == 0 {
        return Err(Error::invalid("l must be >= 1"));
    }
    if a.is_empty() {
        return Err(Error::invalid("dyadic level of an empty set"));
    }
    let hist = difference_histogram(a)?;
    let bands = dyadic_band_count(a.len());
    let mut best: Option<(BigUint, u64, Vec<Element>)> = None;
    let mut u = 1u64;
    for _ in 0..bands {
        let p = band(&hist, u, None);
        let score = num_traits::pow(BigUint::from(u), l as usize + 1) * p.len();
        if best.as_ref().is_none_or(|(s, _, _)| score >= *s) {
            best = Some((score, u, p));
        }
        u *= 2;
    }
    let (score, u, p) = best.expect("at least one band");
    Ok(DyadicLevel {
        band_upper: u,
        delta: u as f64 / 2.0,
        set: GroundSet::from_sorted_unchecked(*a.ambient(), p),
        score,
        bands,
    })
}

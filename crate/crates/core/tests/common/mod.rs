//! Brute-force oracles and seeded corpora shared by the integration tests.
//! The oracles use plain `i64` arithmetic and never call into the library's
//! counting code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sidon_core::{AmbientSpec, GroundSet};

/// A small set of residues or integers in raw form.
#[derive(Debug, Clone)]
pub struct RawSet {
    /// `None` for the integers, `Some(m)` for `Z/m` or `F_m`.
    pub modulus: Option<i64>,
    pub elems: Vec<i64>,
}

impl RawSet {
    pub fn diff(&self, x: i64, y: i64) -> i64 {
        match self.modulus {
            None => x - y,
            Some(m) => (x - y).rem_euclid(m),
        }
    }

    pub fn sum(&self, x: i64, y: i64) -> i64 {
        match self.modulus {
            None => x + y,
            Some(m) => (x + y).rem_euclid(m),
        }
    }

    pub fn to_set(&self) -> GroundSet {
        match self.modulus {
            None => GroundSet::integers(self.elems.iter().copied()),
            Some(p) => GroundSet::residues(AmbientSpec::prime_field(p).unwrap(), self.elems.iter().copied()).unwrap(),
        }
    }
}

/// `count` sets with `1 ≤ |A| ≤ max_size`, alternating between integers in
/// `[-30, 30]` and `F_13`.
pub fn corpus(seed: u64, count: usize, max_size: usize) -> Vec<RawSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let size = rng.random_range(1..=max_size);
            let (modulus, lo, hi) = if i % 2 == 0 { (None, -30, 30) } else { (Some(13), 0, 12) };
            let mut s = BTreeSet::new();
            while s.len() < size {
                s.insert(rng.random_range(lo..=hi));
            }
            RawSet { modulus, elems: s.into_iter().collect() }
        })
        .collect()
}

/// A random subset of `[lo, hi]` of the given size.
pub fn random_subset(rng: &mut ChaCha8Rng, lo: i64, hi: i64, size: usize) -> Vec<i64> {
    assert!(size as i64 <= hi - lo + 1, "cannot draw {size} elements from [{lo}, {hi}]");
    let mut s = BTreeSet::new();
    while s.len() < size {
        s.insert(rng.random_range(lo..=hi));
    }
    s.into_iter().collect()
}

/// `r(x)` over all ordered pairs under `op`.
pub fn rep(a: &[i64], b: &[i64], op: impl Fn(i64, i64) -> i64) -> BTreeMap<i64, u64> {
    let mut m = BTreeMap::new();
    for &x in a {
        for &y in b {
            *m.entry(op(x, y)).or_insert(0) += 1;
        }
    }
    m
}

/// Ordered `2k`-tuples `(x_1, x'_1, ..., x_k, x'_k)` with all differences
/// equal, counted by walking tuples pair by pair. With `distinct`, all `2k`
/// entries must be pairwise distinct elements.
pub fn tuple_energy(s: &RawSet, k: u32, distinct: bool) -> u128 {
    fn walk(s: &RawSet, left: u32, target: Option<i64>, used: &mut Vec<usize>, distinct: bool) -> u128 {
        if left == 0 {
            return 1;
        }
        let n = s.elems.len();
        let mut total = 0;
        for i in 0..n {
            for j in 0..n {
                if distinct && (i == j || used.contains(&i) || used.contains(&j)) {
                    continue;
                }
                let d = s.diff(s.elems[i], s.elems[j]);
                if target.is_some_and(|t| t != d) {
                    continue;
                }
                used.push(i);
                used.push(j);
                total += walk(s, left - 1, Some(d), used, distinct);
                used.truncate(used.len() - 2);
            }
        }
        total
    }
    walk(s, k, None, &mut Vec::new(), distinct)
}

/// Largest subset with every nonzero difference count at most `k`, by
/// enumerating all subsets (`|A| ≤ 16`).
pub fn sid_brute(a: &[i64], k: u64) -> usize {
    assert!(a.len() <= 16);
    let n = a.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let sub: Vec<i64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).collect();
        if max_nonzero_diff(&sub) <= k {
            best = size;
        }
    }
    best
}

pub fn max_nonzero_diff(a: &[i64]) -> u64 {
    rep(a, a, |x, y| x - y).into_iter().filter(|&(x, _)| x != 0).map(|(_, c)| c).max().unwrap_or(0)
}

/// Direct search for `K_{2,g+1}` in the Cayley graph of `S ⊆ Z/N`: two
/// distinct vertices `u, v` with at least `g + 1` common `w` such that
/// `u - w` and `v - w` both lie in `S`.
pub fn cayley_k2_exists(s: &[i64], n: i64, g: u32) -> bool {
    let mut in_s = vec![false; n as usize];
    for &x in s {
        in_s[x.rem_euclid(n) as usize] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            let common = (0..n)
                .filter(|&w| in_s[(u - w).rem_euclid(n) as usize] && in_s[(v - w).rem_euclid(n) as usize])
                .count();
            if common > g as usize {
                return true;
            }
        }
    }
    false
}

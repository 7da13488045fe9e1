//! Largest subsets with bounded multiplicities.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::{compose, CompositionMode, Value};
use crate::error::{Error, Result};
use crate::set::GroundSet;

pub const DEFAULT_EXACT_CAP: usize = 40;

const EXEMPT: u32 = u32::MAX;

/// Value ids for every unordered index pair and the diagonal, with the number
/// of ordered representations each contributes. The identity value maps to
/// [`EXEMPT`].
struct PairTable {
    n: usize,
    ids: Vec<(u32, u32)>,
    values: usize,
}

impl PairTable {
    fn new(a: &GroundSet, mode: CompositionMode) -> Result<Self> {
        let amb = *a.ambient();
        amb.require(mode)?;
        let exempt = amb.identity_value(mode);
        let n = a.len();
        let elems = a.elements();
        let mut map: HashMap<Value, u32> = HashMap::new();
        let mut ids = vec![(EXEMPT, 0); n * n];
        for i in 0..n {
            for j in i..n {
                // Both orders: equal for sums and products, `z` and `-z` (or
                // `v` and `1/v`) otherwise. A class is counted once, with
                // weight 2 when both orders land on the same value.
                let v1 = compose(&amb, mode, elems[j], elems[i])?;
                if Some(v1) == exempt {
                    continue;
                }
                let v2 = compose(&amb, mode, elems[i], elems[j])?;
                let key = v1.min(v2);
                let weight = if i != j && v1 == v2 { 2 } else { 1 };
                let next = map.len() as u32;
                let id = *map.entry(key).or_insert(next);
                ids[i * n + j] = (id, weight);
                ids[j * n + i] = (id, weight);
            }
        }
        Ok(PairTable { n, ids, values: map.len() })
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> (u32, u32) {
        self.ids[i * self.n + j]
    }
}

/// Multiplicity counts of a growing subset, indexed by value id.
struct Counts<'a> {
    table: &'a PairTable,
    counts: Vec<u32>,
    members: Vec<usize>,
    bound: u32,
}

impl<'a> Counts<'a> {
    fn new(table: &'a PairTable, bound: u32) -> Self {
        Counts { table, counts: vec![0; table.values], members: Vec::new(), bound }
    }

    /// Add `c` (and its pairs with the members) with sign `+1`/`-1`; returns
    /// whether every touched count stays within the bound.
    #[inline]
    fn apply(&mut self, c: usize, add: bool) -> bool {
        let t = self.table;
        let mut ok = true;
        for &m in self.members.iter().chain(std::iter::once(&c)) {
            let (id, w) = t.get(c, m);
            if id == EXEMPT {
                continue;
            }
            let slot = &mut self.counts[id as usize];
            if add {
                *slot += w;
                ok &= *slot <= self.bound;
            } else {
                *slot -= w;
            }
        }
        ok
    }

    fn fits(&mut self, c: usize) -> bool {
        let ok = self.apply(c, true);
        self.apply(c, false);
        ok
    }

    fn push(&mut self, c: usize) {
        self.apply(c, true);
        self.members.push(c);
    }

    fn pop(&mut self) {
        let c = self.members.pop().expect("nonempty");
        self.apply(c, false);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub size: usize,
    pub witness: GroundSet,
    /// Search nodes expanded.
    pub nodes: u64,
}

/// `Sid_k(A)` in the given mode: the largest `B ⊆ A` whose non-identity
/// values all have count at most `k`, found by exhaustive search.
///
/// Uses a suffix ("Russian doll") scheme: `best[i]` is the optimum over
/// `A[i..]`, computed right to left. The optimum on `A[i..]` is either
/// `best[i+1]` or one more, so each stage only looks for a set of size
/// `best[i+1] + 1` containing `a_i`, and `size + best[j]` bounds any branch
/// whose remaining candidates start at `j`.
pub fn sid_k_exact(a: &GroundSet, k: u32, mode: CompositionMode, cap: usize) -> Result<ExactResult> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    if a.len() > cap {
        return Err(Error::CapExceeded {
            what: "exact Sid_k search".into(),
            size: a.len() as u64,
            cap: cap as u64,
        });
    }
    let n = a.len();
    if n == 0 {
        return Ok(ExactResult { size: 0, witness: a.clone(), nodes: 0 });
    }
    let table = PairTable::new(a, mode)?;
    let mut counts = Counts::new(&table, k);
    let mut best = vec![0usize; n + 1];
    let mut witness: Vec<usize> = Vec::new();
    let mut nodes = 0u64;

    fn expand(
        counts: &mut Counts,
        cand: &[usize],
        target: usize,
        best: &[usize],
        nodes: &mut u64,
    ) -> bool {
        let size = counts.members.len();
        for (pos, &c) in cand.iter().enumerate() {
            if size + (cand.len() - pos) < target || size + best[c] < target {
                return false;
            }
            *nodes += 1;
            counts.push(c);
            if size + 1 == target {
                return true;
            }
            let next: Vec<usize> = cand[pos + 1..].iter().copied().filter(|&d| counts.fits(d)).collect();
            if expand(counts, &next, target, best, nodes) {
                return true;
            }
            counts.pop();
        }
        false
    }

    for i in (0..n).rev() {
        let target = best[i + 1] + 1;
        let mut found = false;
        if counts.fits(i) {
            counts.push(i);
            nodes += 1;
            if target == 1 {
                found = true;
            } else {
                let cand: Vec<usize> = (i + 1..n).filter(|&d| counts.fits(d)).collect();
                found = expand(&mut counts, &cand, target, &best, &mut nodes);
            }
        }
        if found {
            best[i] = target;
            witness = counts.members.clone();
        } else {
            best[i] = best[i + 1];
        }
        counts.members.clear();
        counts.counts.iter_mut().for_each(|c| *c = 0);
    }
    witness.sort_unstable();
    Ok(ExactResult {
        size: best[0],
        witness: a.subset_by_index(&witness),
        nodes,
    })
}

/// Randomized greedy: insert elements in a seeded random order whenever the
/// bound still holds. The result is maximal by inclusion.
pub fn sid_k_greedy(a: &GroundSet, k: u32, mode: CompositionMode, seed: u64) -> Result<GroundSet> {
    if k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let amb = *a.ambient();
    amb.require(mode)?;
    let exempt = amb.identity_value(mode);
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let elems = a.elements();
    let mut counts: HashMap<Value, u32> = HashMap::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut touched: Vec<Value> = Vec::new();
    for &c in &order {
        touched.clear();
        let x = elems[c];
        for &m in &chosen {
            touched.push(compose(&amb, mode, x, elems[m])?);
            touched.push(compose(&amb, mode, elems[m], x)?);
        }
        touched.push(compose(&amb, mode, x, x)?);
        touched.retain(|v| Some(*v) != exempt);
        let mut local: HashMap<Value, u32> = HashMap::new();
        for v in &touched {
            *local.entry(*v).or_insert(0) += 1;
        }
        if local.iter().all(|(v, &d)| counts.get(v).copied().unwrap_or(0) + d <= k) {
            for (v, d) in local {
                *counts.entry(v).or_insert(0) += d;
            }
            chosen.push(c);
        }
    }
    chosen.sort_unstable();
    Ok(a.subset_by_index(&chosen))
}

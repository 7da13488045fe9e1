//! Explicit constructions with their measured statistics.
//!
//! Every report stores its parameters, the output set and any auxiliary sets.
//! [`audit_construction`] recomputes the statistics from those sets alone.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::ambient::{is_prime, mod_inverse, mod_pow, AmbientSpec, CompositionMode, Element, Fraction, Value};
use crate::counting::{difference_histogram, RepHistogram};
use crate::error::{Error, Result};
use crate::set::{affine_image, set_compose, GroundSet};
use crate::sidon::sid_k_exact;
use crate::util::up;

/// Fallback Sidon set for tiny ranges.
const SMALL_SIDON: [i64; 3] = [0, 1, 3];

/// Largest ground set on which reports run an exact subset search.
const REPORT_EXACT_CAP: usize = 24;

fn largest_prime_with(pred: impl Fn(i64) -> bool, start: i64) -> Option<i64> {
    (2..=start).rev().find(|&p| is_prime(p as u64) && pred(p))
}

/// Erdős–Turán Sidon set `{2p·i + (i² mod p) : 0 ≤ i < p}` for the largest
/// prime `p` with `2p² ≤ N`; contained in `[0, N-1]`. Falls back to
/// `{0, 1, 3}` when that gives fewer than three elements.
pub fn sidon_base(n: i64) -> Result<GroundSet> {
    if n < 4 {
        return Err(Error::invalid(format!("sidon_base needs N >= 4, got {n}")));
    }
    let start = ((n / 2) as f64).sqrt() as i64 + 1;
    let p = largest_prime_with(|p| 2 * p * p <= n, start);
    let set = match p {
        Some(p) if p >= 3 => GroundSet::integers((0..p).map(|i| 2 * p * i + (i * i) % p)),
        _ => GroundSet::integers(SMALL_SIDON),
    };
    Ok(set.with_label(format!("sidon-base N={n}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Anomaly,
}

/// Parameters identifying a construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Construction {
    Sidon { n: i64 },
    Linstrom { g: i64, n: Option<i64>, base: Option<GroundSet> },
    Geometric { base: i64, n: u32, k: u32 },
    Hyperbola { p: i64, k: i64, t: Option<i64> },
    FpMult { p: i64, gamma_order: i64, seed: u64, k: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub construction: Construction,
    pub set: GroundSet,
    /// Auxiliary sets (Γ, H, the Sidon base, ...).
    pub parts: BTreeMap<String, GroundSet>,
    pub claim: String,
    pub stats: BTreeMap<String, Json>,
    pub status: Status,
    /// Per-shift maxima from a hyperbola search; not part of `stats`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<Vec<(i64, u64)>>,
}

type Stats = BTreeMap<String, Json>;

fn max_nonidentity(h: &RepHistogram, exempt: Option<Value>) -> u64 {
    h.max_excluding(exempt.as_ref()).map_or(0, |(_, c)| c)
}

fn max_diff(s: &GroundSet) -> Result<u64> {
    Ok(max_nonidentity(&difference_histogram(s)?, Some(Value::Elem(s.ambient().zero()))))
}

/// `min{|C|√(k|B|) + |B|, |B|√(k|C|) + |C|} / σ`, rounded up.
pub fn sumset_bound_value(b: usize, c: usize, k: u32, sigma: u64) -> f64 {
    let (b, c, k) = (b as f64, c as f64, k as f64);
    let first = up::add(up::mul(c, up::sqrt(up::mul(k, b))), b);
    let second = up::add(up::mul(b, up::sqrt(up::mul(k, c))), c);
    up::div(first.min(second), sigma as f64)
}

// ---------------------------------------------------------------- sidon

pub fn sidon_report(n: i64) -> Result<ConstructionReport> {
    let set = sidon_base(n)?;
    let (stats, status) = measure_sidon(n, &set)?;
    Ok(ConstructionReport {
        construction: Construction::Sidon { n },
        set,
        parts: BTreeMap::new(),
        claim: "Sidon set (every nonzero difference at most once) inside [0, N-1]".into(),
        stats,
        status,
        search: None,
    })
}

fn measure_sidon(n: i64, set: &GroundSet) -> Result<(Stats, Status)> {
    let max = max_diff(set)?;
    let inside = set.ints().is_some_and(|v| v.iter().all(|&x| (0..n).contains(&x)));
    let mut s = Stats::new();
    s.insert("size".into(), json!(set.len()));
    s.insert("max_multiplicity".into(), json!(max));
    s.insert("inside_range".into(), json!(inside));
    s.insert("sqrt_half_n".into(), json!(((n as f64) / 2.0).sqrt()));
    let ok = max <= 1 && inside;
    Ok((s, if ok { Status::Pass } else { Status::Fail }))
}

// ------------------------------------------------------------- linstrom

/// `S = g·A + {0, ..., g-1}` with `A = sidon_base(⌊(N-g)/g⌋)`.
pub fn linstrom_like(g: i64, n: i64) -> Result<ConstructionReport> {
    if g < 1 {
        return Err(Error::invalid("g must be >= 1"));
    }
    if g >= 2 && n < 4 * g {
        return Err(Error::invalid(format!("need N >= 4g, got N={n}, g={g}")));
    }
    let m = (n - g) / g;
    let base = sidon_base(m.max(4))?;
    let mut report = linstrom_from_base(g, &base)?;
    report.construction = Construction::Linstrom { g, n: Some(n), base: None };
    report.set = report.set.with_label(format!("linstrom g={g} N={n}"));
    if let Some(mx) = report.set.ints().and_then(|v| v.last().copied()) {
        report.stats.insert("inside_range".into(), json!(mx < n));
        if mx >= n {
            report.status = Status::Fail;
        }
    }
    Ok(report)
}

/// `S = g·A + {0, ..., g-1}` for a supplied Sidon base `A`.
pub fn linstrom_from_base(g: i64, base: &GroundSet) -> Result<ConstructionReport> {
    if g < 1 {
        return Err(Error::invalid("g must be >= 1"));
    }
    if *base.ambient() != AmbientSpec::Integers {
        return Err(Error::invalid("linstrom construction works over the integers"));
    }
    let scaled = affine_image(base, g, Element::Int(0))?;
    let set = set_compose(&scaled, &GroundSet::integers(0..g), CompositionMode::Sum, false)?
        .with_label(format!("linstrom g={g}"));
    let mut parts = BTreeMap::new();
    parts.insert("base".into(), base.clone());
    let (stats, status) = measure_linstrom(g, base, &set)?;
    Ok(ConstructionReport {
        construction: Construction::Linstrom { g, n: None, base: Some(base.clone()) },
        set,
        parts,
        claim: "r_{S-S}(x) <= g for |x| >= g (asserted); the same for all x != 0 (reported only)".into(),
        stats,
        status,
        search: None,
    })
}

fn measure_linstrom(g: i64, base: &GroundSet, set: &GroundSet) -> Result<(Stats, Status)> {
    let h = difference_histogram(set)?;
    let overall = max_nonidentity(&h, Some(Value::Elem(Element::Int(0))));
    let far = h
        .iter()
        .filter(|(v, _)| matches!(v, Value::Elem(Element::Int(x)) if x.unsigned_abs() >= g as u64))
        .map(|(_, c)| c)
        .max()
        .unwrap_or(0);
    let near: Vec<Json> = (1..g)
        .map(|x| json!([x, h.get_elem(Element::Int(x))]))
        .collect();
    let base_sidon = max_diff(base)? <= 1;
    let mut s = Stats::new();
    s.insert("size".into(), json!(set.len()));
    s.insert("base_size".into(), json!(base.len()));
    s.insert("base_is_sidon".into(), json!(base_sidon));
    s.insert("size_is_g_times_base".into(), json!(set.len() as i64 == g * base.len() as i64));
    s.insert("max_multiplicity".into(), json!(overall));
    s.insert("max_multiplicity_far".into(), json!(far));
    s.insert("near_counts".into(), Json::Array(near));
    let anomaly = overall > g as u64;
    s.insert("anomaly".into(), json!(anomaly));
    let status = if far > g as u64 || !base_sidon {
        Status::Fail
    } else if anomaly {
        Status::Anomaly
    } else {
        Status::Pass
    };
    Ok((s, status))
}

// ------------------------------------------------------------ geometric

fn checked_pow(base: i64, e: u32) -> Result<i64> {
    base.checked_pow(e)
        .ok_or_else(|| Error::overflow(format!("{base}^{e} exceeds 64 bits")))
}

/// `Γ = {1, g, ..., g^n}`, `H = {g^{n+1}, ..., g^{n(n+1)}}`, `A = Γ + HΓ`.
pub fn geometric_sumproduct_example(base: i64, n: u32, k: u32) -> Result<ConstructionReport> {
    if base < 2 || n < 1 || k < 1 {
        return Err(Error::invalid("need base >= 2, n >= 1, k >= 1"));
    }
    checked_pow(base, n * (n + 1) + n)?;
    checked_pow(base, n * (n + 1) + n)?
        .checked_add(checked_pow(base, n)?)
        .ok_or_else(|| Error::overflow("largest sum exceeds 64 bits"))?;
    let gamma = GroundSet::integers((0..=n).map(|i| base.pow(i)));
    let h = GroundSet::integers((1..=n).map(|j| base.pow(j * (n + 1))));
    let c = set_compose(&h, &gamma, CompositionMode::Product, false)?;
    let a = set_compose(&gamma, &c, CompositionMode::Sum, false)?
        .with_label(format!("geometric base={base} n={n}"));
    let mut parts = BTreeMap::new();
    parts.insert("gamma".into(), gamma);
    parts.insert("h".into(), h);
    parts.insert("c".into(), c);
    let (stats, status) = measure_geometric(base, n, k, &a, &parts)?;
    Ok(ConstructionReport {
        construction: Construction::Geometric { base, n, k },
        set: a,
        parts,
        claim: "A = Γ ∔ HΓ has n(n+1)^2 elements; Sid_k^+(A) and Sid_k^×(A) obey the sumset bound".into(),
        stats,
        status,
        search: None,
    })
}

fn measure_geometric(
    base: i64,
    n: u32,
    k: u32,
    a: &GroundSet,
    parts: &BTreeMap<String, GroundSet>,
) -> Result<(Stats, Status)> {
    let gamma = &parts["gamma"];
    let h = &parts["h"];
    let c = &parts["c"];
    let expected = (n as u64) * (n as u64 + 1) * (n as u64 + 1);
    let direct = a.len() == gamma.len() * c.len();
    let additive = sumset_bound_value(gamma.len(), c.len(), k, 1);

    // Multiplicative cover A ⊆ Γ·(1 + HΓ̄) with Γ̄ = {g^-n, ..., g^n}.
    let mut cover: Vec<Fraction> = Vec::new();
    for hv in h.ints().expect("integers") {
        for e in -(n as i64)..=(n as i64) {
            let g = base.pow(e.unsigned_abs() as u32);
            let f = if e >= 0 {
                Fraction::new(g.checked_mul(hv).ok_or_else(|| Error::overflow("cover"))?, 1)?
            } else {
                Fraction::new(hv, g)?
            };
            // 1 + f
            let one_plus = Fraction::new(
                f.denom().checked_add(f.numer()).ok_or_else(|| Error::overflow("cover"))?,
                f.denom(),
            )?;
            cover.push(one_plus);
        }
    }
    cover.sort_unstable();
    cover.dedup();
    let gam = gamma.ints().expect("integers");
    let covered = a.ints().expect("integers").iter().all(|&x| {
        gam.iter().any(|&g| {
            Fraction::new(x, g).is_ok_and(|q| cover.binary_search(&q).is_ok())
        })
    });
    let multiplicative = sumset_bound_value(gamma.len(), cover.len(), k, 1);

    let mut s = Stats::new();
    s.insert("size".into(), json!(a.len()));
    s.insert("expected_size".into(), json!(expected));
    s.insert("gamma_cubed".into(), json!(gamma.len().pow(3)));
    s.insert("sums_distinct".into(), json!(direct));
    s.insert("additive_bound".into(), json!(additive));
    s.insert("cover_size".into(), json!(cover.len()));
    s.insert("cover_holds".into(), json!(covered));
    s.insert("multiplicative_bound".into(), json!(multiplicative));
    let mut ok = direct && covered && a.len() as u64 == expected;
    if a.len() <= REPORT_EXACT_CAP {
        let add = sid_k_exact(a, k, CompositionMode::Difference, REPORT_EXACT_CAP)?.size;
        let mul = sid_k_exact(a, k, CompositionMode::Ratio, REPORT_EXACT_CAP)?.size;
        s.insert("sid_additive_exact".into(), json!(add));
        s.insert("sid_multiplicative_exact".into(), json!(mul));
        ok &= (add as f64) <= additive && (mul as f64) <= multiplicative;
    }
    Ok((s, if ok { Status::Pass } else { Status::Fail }))
}

// ------------------------------------------------------------ hyperbola

fn hyperbola_set(p: i64, k: i64, t: i64) -> Result<(GroundSet, Vec<GroundSet>)> {
    let plane = AmbientSpec::prime_square_plane(p)?;
    let mut curves = Vec::new();
    for i in 1..=k {
        let u = (t + i).rem_euclid(p);
        let inv = mod_inverse(u, p).ok_or_else(|| Error::BadShift(format!("u = t + {i} ≡ 0 mod {p}")))?;
        let pts = (0..p).map(|x| Element::Pair(x, ((x as i128 * x as i128 % p as i128) * inv as i128 % p as i128) as i64));
        curves.push(GroundSet::new(plane, pts)?);
    }
    let union = GroundSet::new(plane, curves.iter().flat_map(|c| c.iter().collect::<Vec<_>>()))?;
    Ok((union, curves))
}

fn hyperbola_max(set: &GroundSet) -> Result<u64> {
    max_diff(set)
}

/// Union of the parabolas `A_u = {(x, x²/u)}` for `u ∈ {t+1, ..., t+k}`.
/// With `t = None`, every admissible shift is tried and the one with the
/// smallest maximal multiplicity is kept (ties to the smallest `t`).
pub fn hyperbola_family(p: i64, k: i64, t: Option<i64>) -> Result<ConstructionReport> {
    if p < 2 || !is_prime(p as u64) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if k < 1 || k >= p {
        return Err(Error::invalid(format!("need 1 <= k < p, got k={k}")));
    }
    let (t, search) = match t {
        Some(t) => (t.rem_euclid(p), None),
        None => {
            let admissible: Vec<i64> = (0..p).filter(|&t| (1..=k).all(|i| (t + i) % p != 0)).collect();
            let scan = admissible
                .par_iter()
                .map(|&t| hyperbola_set(p, k, t).and_then(|(s, _)| Ok((t, hyperbola_max(&s)?))))
                .collect::<Result<Vec<_>>>()?;
            let best = scan
                .iter()
                .min_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)))
                .map(|x| x.0)
                .ok_or_else(|| Error::BadShift("no admissible shift".into()))?;
            (best, Some(scan))
        }
    };
    let (set, curves) = hyperbola_set(p, k, t)?;
    let set = set.with_label(format!("hyperbola p={p} k={k} t={t}"));
    let mut parts = BTreeMap::new();
    for (i, c) in curves.into_iter().enumerate() {
        parts.insert(format!("curve_{}", i + 1), c);
    }
    let (mut stats, status) = measure_hyperbola(p, k, &set, &parts)?;
    stats.insert("t".into(), json!(t));
    Ok(ConstructionReport {
        construction: Construction::Hyperbola { p, k, t: search.is_none().then_some(t) },
        set,
        parts,
        claim: "|A| = kp - k + 1 (curves meet only at the origin); max r_{A-A} near k^2".into(),
        stats,
        status,
        search,
    })
}

fn measure_hyperbola(p: i64, k: i64, set: &GroundSet, parts: &BTreeMap<String, GroundSet>) -> Result<(Stats, Status)> {
    let origin = Element::Pair(0, 0);
    let curves: Vec<&GroundSet> = parts.values().collect();
    let mut pairwise_ok = true;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let inter = curves[i].intersection(curves[j])?;
            pairwise_ok &= inter.elements() == [origin];
        }
    }
    let m = hyperbola_max(set)?;
    let kf = k as f64;
    let target = kf * kf + 5.0 * kf.powf(1.5);
    let expected = (k * p - k + 1) as usize;
    let mut s = Stats::new();
    s.insert("size".into(), json!(set.len()));
    s.insert("expected_size".into(), json!(expected));
    s.insert("curves_meet_at_origin".into(), json!(pairwise_ok));
    s.insert("max_multiplicity".into(), json!(m));
    s.insert("target".into(), json!(target));
    s.insert("within_target".into(), json!((m as f64) <= target));
    let ok = set.len() == expected && pairwise_ok && (m as f64) <= target;
    Ok((s, if ok { Status::Pass } else { Status::Fail }))
}

// -------------------------------------------------------------- fp-mult

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest generator of `F_p^*`.
pub fn primitive_root(p: i64) -> i64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors((p - 1) as u64);
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p as u64 - 1) / q, p) != 1))
        .expect("prime fields are cyclic")
}

/// `Γ ≤ F_p^*` of order `d`, `H` = `d` seeded representatives of distinct
/// cosets of `Γ`, and `A = Γ + HΓ`.
pub fn fp_mult_example(p: i64, gamma_order: i64, seed: u64, k: u32) -> Result<ConstructionReport> {
    let f = AmbientSpec::prime_field(p)?;
    let d = gamma_order;
    if d < 1 || (p - 1) % d != 0 {
        return Err(Error::BadOrder(format!("{d} does not divide p - 1 = {}", p - 1)));
    }
    let cosets = (p - 1) / d;
    if cosets < d {
        return Err(Error::BadOrder(format!(
            "only {cosets} cosets of a subgroup of order {d}; need at least {d}"
        )));
    }
    let g = primitive_root(p);
    let gen = mod_pow(g, cosets as u64, p);
    let gamma = GroundSet::residues(f, (0..d).map(|i| mod_pow(gen, i as u64, p)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<usize> = sample(&mut rng, cosets as usize, d as usize).into_vec();
    picked.sort_unstable();
    let reps = picked
        .iter()
        .map(|&j| {
            let within = rng.random_range(0..d);
            mod_pow(g, j as u64, p) as i128 * mod_pow(gen, within as u64, p) as i128 % p as i128
        })
        .map(|x| x as i64)
        .collect::<Vec<_>>();
    let h = GroundSet::residues(f, reps)?;
    let c = set_compose(&h, &gamma, CompositionMode::Product, false)?;
    let a = set_compose(&gamma, &c, CompositionMode::Sum, false)?
        .with_label(format!("fp-mult p={p} d={d} seed={seed}"));
    let mut parts = BTreeMap::new();
    parts.insert("gamma".into(), gamma);
    parts.insert("h".into(), h);
    parts.insert("c".into(), c);
    let (stats, status) = measure_fp_mult(k, &a, &parts)?;
    Ok(ConstructionReport {
        construction: Construction::FpMult { p, gamma_order, seed, k },
        set: a,
        parts,
        claim: "A = Γ + HΓ = Γ(1 + ΓH); k-Sidon subsets obey the sumset bound".into(),
        stats,
        status,
        search: None,
    })
}

fn measure_fp_mult(k: u32, a: &GroundSet, parts: &BTreeMap<String, GroundSet>) -> Result<(Stats, Status)> {
    let amb = *a.ambient();
    let gamma = &parts["gamma"];
    let h = &parts["h"];
    let c = &parts["c"];
    let gh = set_compose(gamma, h, CompositionMode::Product, false)?;
    let one = GroundSet::new(amb, [Element::Int(1)])?;
    let one_plus = set_compose(&one, &gh, CompositionMode::Sum, false)?;
    let product_form = set_compose(gamma, &one_plus, CompositionMode::Product, false)?;
    let identity = product_form.elements() == a.elements();
    let lemma = sumset_bound_value(gamma.len(), c.len(), k, 1);
    let simple = up::mul(2.0 * (k as f64).sqrt(), (gamma.len() * gamma.len()) as f64);
    let mult_lemma = sumset_bound_value(gamma.len(), one_plus.len(), k, 1);
    let mut s = Stats::new();
    s.insert("size".into(), json!(a.len()));
    s.insert("gamma_size".into(), json!(gamma.len()));
    s.insert("max_size".into(), json!(gamma.len() * c.len()));
    s.insert("identity_holds".into(), json!(identity));
    s.insert("additive_bound".into(), json!(lemma));
    s.insert("multiplicative_bound".into(), json!(mult_lemma));
    s.insert("two_sqrt_k_gamma_squared".into(), json!(simple));
    if a.len() <= REPORT_EXACT_CAP {
        let add = sid_k_exact(a, k, CompositionMode::Difference, REPORT_EXACT_CAP)?.size;
        let mul = sid_k_exact(a, k, CompositionMode::Ratio, REPORT_EXACT_CAP)?.size;
        s.insert("sid_additive_exact".into(), json!(add));
        s.insert("sid_multiplicative_exact".into(), json!(mul));
    }
    Ok((s, if identity { Status::Pass } else { Status::Fail }))
}

// ---------------------------------------------------------------- audit

/// Recompute the statistics of `report` from its stored sets. Returns the
/// names of mismatching fields (empty when the report is faithful).
pub fn audit_construction(report: &ConstructionReport) -> Result<Vec<String>> {
    let (mut stats, status) = match &report.construction {
        Construction::Sidon { n } => measure_sidon(*n, &report.set)?,
        Construction::Linstrom { g, n, .. } => {
            let base = report
                .parts
                .get("base")
                .ok_or_else(|| Error::invalid("linstrom report lacks its base"))?;
            let (mut s, mut st) = measure_linstrom(*g, base, &report.set)?;
            if let Some(n) = n {
                let inside = report.set.ints().and_then(|v| v.last().copied()).is_none_or(|m| m < *n);
                s.insert("inside_range".into(), json!(inside));
                if !inside {
                    st = Status::Fail;
                }
            }
            (s, st)
        }
        Construction::Geometric { base, n, k } => measure_geometric(*base, *n, *k, &report.set, &report.parts)?,
        Construction::Hyperbola { p, k, .. } => {
            let (mut s, st) = measure_hyperbola(*p, *k, &report.set, &report.parts)?;
            if let Some(t) = report.stats.get("t") {
                s.insert("t".into(), t.clone());
            }
            (s, st)
        }
        Construction::FpMult { k, .. } => measure_fp_mult(*k, &report.set, &report.parts)?,
    };
    let mut bad: Vec<String> = Vec::new();
    for (key, v) in &report.stats {
        if stats.remove(key).as_ref() != Some(v) {
            bad.push(key.clone());
        }
    }
    bad.extend(stats.into_keys());
    if status != report.status {
        bad.push("status".into());
    }
    Ok(bad)
}

//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits nonzero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{cayley_k2_exists, corpus, max_nonzero_diff, random_subset, rep, tuple_energy, RawSet};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sidon_core::bounds::{below_group_bound, bfamily_size_upper, diffset_bounds, slice_sidon_check, SizeSetting, Verdict};
use sidon_core::constructions::{
    geometric_sumproduct_example, hyperbola_family, linstrom_like, sidon_report, ConstructionReport, Status,
};
use sidon_core::counting::{energy_k, energy_prime_k};
use sidon_core::sidon::{
    certified_bound, dense_core_extract, extract_trials, sid_k_exact, sid_k_greedy, verify_bfamily,
    verify_multiplicity, BFamilyParams,
};
use sidon_core::structure::{
    energy_gap_decompose, rigid_structure, sum_product_pipeline, verify_certificate, verify_pipeline, Branch,
    Outcome, PipelineOptions, PipelineReport, PopularCore, StructureCertificate,
};
use sidon_core::util::{log2_big, pow_big, Exponent};
use sidon_core::{AmbientSpec, CompositionMode, GroundSet};

const D: CompositionMode = CompositionMode::Difference;
const S: CompositionMode = CompositionMode::Sum;

struct Row {
    id: u32,
    pass: bool,
    detail: String,
}

/// Integer sets claimed to lie in `B°_2[g]` for their own maximal
/// multiplicity, collected for the size audit.
#[derive(Default)]
struct Produced(Vec<(String, Vec<i64>)>);

impl Produced {
    fn add(&mut self, origin: &str, s: &GroundSet) {
        if let Some(v) = s.ints() {
            if v.len() >= 2 {
                self.0.push((origin.to_string(), v));
            }
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> (bool, String) {
    let t = Instant::now();
    let (ok, detail) = f();
    let el = t.elapsed();
    match limit {
        Some(l) => (ok && el < l, format!("{detail}; {:.1}s (limit {}s)", el.as_secs_f64(), l.as_secs())),
        None => (ok, format!("{detail}; {:.1}s", el.as_secs_f64())),
    }
}

fn big(v: u128) -> BigUint {
    BigUint::from(v)
}

fn median(mut v: Vec<usize>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

// ------------------------------------------------------------------ 1

fn criterion_1() -> (bool, String) {
    let sets = corpus(1, 200, 10);
    let mut bad = 0;
    let mut checks = 0;
    for s in &sets {
        let set = s.to_set();
        for k in 2..=4 {
            checks += 2;
            if energy_k(&set, k, D).unwrap().value != big(tuple_energy(s, k, false)) {
                bad += 1;
            }
            if energy_prime_k(&set, k).unwrap() != big(tuple_energy(s, k, true)) {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("{checks} exact comparisons on 200 sets, {bad} mismatches"))
}

// ------------------------------------------------------------------ 2

fn criterion_2() -> (bool, String) {
    let sets = corpus(1, 200, 10);
    let mut violations = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let set = s.to_set();
        let n = s.elems.len() as u64;
        let e2 = energy_k(&set, 2, D).unwrap().value;
        if e2 != energy_k(&set, 2, S).unwrap().value {
            violations.push(format!("set {i}: E_2 != Ê_2"));
        }
        let r = rep(&s.elems, &s.elems, |x, y| s.diff(x, y));
        if r.values().sum::<u64>() != n * n {
            violations.push(format!("set {i}: sum of r != |A|^2"));
        }
        let neg = |x: i64| match s.modulus {
            None => -x,
            Some(m) => (-x).rem_euclid(m),
        };
        if r.iter().any(|(&x, &c)| r.get(&neg(x)).copied() != Some(c)) {
            violations.push(format!("set {i}: r not symmetric"));
        }
        let e: Vec<BigUint> = (1..=5).map(|k| energy_k(&set, k, D).unwrap().value).collect();
        for k in 2..=4 {
            // e[k-1] = E_k
            if &e[k - 1] * &e[k - 1] > &e[k - 2] * &e[k] {
                violations.push(format!("set {i}: log-convexity at k={k}"));
            }
        }
        for k in 1..=4 {
            if e[k] > &e[k - 1] * BigUint::from(n) {
                violations.push(format!("set {i}: E_{} > |A| E_{k}", k + 1));
            }
        }
    }
    (violations.is_empty(), format!("200 sets, {} violations {:?}", violations.len(), violations.first()))
}

// ------------------------------------------------------------------ 3

fn criterion_3() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut disagreements = 0;
    for _ in 0..200 {
        let size = rng.random_range(1..=14);
        let a = random_subset(&mut rng, -25, 25, size);
        let g = rng.random_range(1..=4);
        let s = GroundSet::integers(a.iter().copied());
        let bf = verify_bfamily(&s, BFamilyParams::new(2, g).unwrap()).unwrap();
        let mult = verify_multiplicity(&s, g as u64, D).unwrap();
        if bf.is_none() != mult.is_none() || bf.as_ref().is_some_and(|w| !w.recheck(&s)) {
            disagreements += 1;
        }
    }
    let mut cyclic = 0;
    for _ in 0..200 {
        let n = rng.random_range(5..=60i64);
        let size = rng.random_range(1..=(n as usize).min(14));
        let a = random_subset(&mut rng, 0, n - 1, size);
        let g = rng.random_range(1..=4);
        let s = GroundSet::residues(AmbientSpec::integers_mod(n).unwrap(), a.iter().copied()).unwrap();
        let bf = verify_bfamily(&s, BFamilyParams::new(2, g).unwrap()).unwrap().is_some();
        let mult = verify_multiplicity(&s, g as u64, D).unwrap().is_some();
        if bf != cayley_k2_exists(&a, n, g) || mult != bf {
            cyclic += 1;
        }
    }
    (
        disagreements == 0 && cyclic == 0,
        format!("200 integer sets: {disagreements} disagreements; 200 sets in Z/N (N <= 60) vs Cayley K_2,g+1 search: {cyclic}"),
    )
}

// ------------------------------------------------------------------ 4

fn criterion_4(produced: &mut Produced) -> (bool, String) {
    let n = 1024u128;
    let a = GroundSet::interval(0, 1023);
    let mut ok = true;
    let mut notes = Vec::new();
    let closed = (2 * n * n * n + n) / 3;
    let e2 = energy_k(&a, 2, D).unwrap().value;
    let small_ok = (1..=10u128).all(|m| {
        let s = RawSet { modulus: None, elems: (0..m as i64).collect() };
        tuple_energy(&s, 2, false) == (2 * m * m * m + m) / 3
    });
    ok &= e2 == big(closed) && small_ok;
    notes.push(format!("E_2([1024]) = {e2} (closed form {})", if e2 == big(closed) { "ok" } else { "MISMATCH" }));
    for (mode, label) in [(D, "diff"), (S, "sum")] {
        for k in [2u32, 3] {
            let (_, _, trials) = extract_trials(&a, k, mode, 2024 + k as u64, 20).unwrap();
            let bound = certified_bound(mode, k);
            let all_verified = trials.iter().all(|t| verify_multiplicity(&t.subset, bound, mode).unwrap().is_none());
            let sizes: Vec<usize> = trials.iter().map(|t| t.subset.len()).collect();
            let e = energy_k(&a, k, mode).unwrap().value;
            let lg = (2 * k) as f64 * 1024f64.log2() - log2_big(&e);
            let floor = 0.1 * (lg / (2 * k - 1) as f64).exp2();
            let med = median(sizes);
            ok &= all_verified && med >= floor;
            notes.push(format!("{label} k={k}: 20/20 verified={all_verified}, median {med} >= {floor:.2}"));
            if mode == D {
                for t in trials.iter().take(3) {
                    produced.add("extraction", &t.subset);
                }
            }
        }
    }
    (ok, notes.join("; "))
}

// ------------------------------------------------------------------ 5

fn criterion_5(produced: &mut Produced) -> (bool, String) {
    let a = GroundSet::interval(1, 5);
    let s1 = sid_k_exact(&a, 1, D, 40).unwrap();
    let s2 = sid_k_exact(&a, 2, D, 40).unwrap();
    produced.add("exact", &s1.witness);
    produced.add("exact", &s2.witness);
    let mut ok = s1.size == 3 && s2.size == 4;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..50 {
        let size = rng.random_range(2..=14);
        let v = random_subset(&mut rng, -40, 40, size);
        let s = GroundSet::integers(v.iter().copied());
        if sid_k_exact(&s, size as u32 - 1, D, 40).unwrap().size != size {
            bad += 1;
        }
    }
    ok &= bad == 0;
    (ok, format!("Sid_1([1..5]) = {}, Sid_2([1..5]) = {}, Sid_(|A|-1)(A) = |A| failures on 50 random sets: {bad}", s1.size, s2.size))
}

// ------------------------------------------------------------------ 6

fn segment_bound_holds(m: usize, g: u64, n: u64) -> bool {
    let gn = (g * n) as f64;
    (m as f64) < gn.sqrt() + gn.powf(0.25) + 1.0
}

fn criterion_6(produced: &Produced) -> (bool, String) {
    let mut violations = Vec::new();
    let mut audited = 0;
    for (origin, v) in &produced.0 {
        let lo = v[0];
        let shifted: Vec<i64> = v.iter().map(|x| x - lo).collect();
        let n = (*shifted.last().unwrap() + 1) as u64;
        let g = max_nonzero_diff(&shifted).max(1);
        let set = GroundSet::integers(shifted.iter().copied());
        let r = bfamily_size_upper(n, 2, g as u32, SizeSetting::Segment, Some(&set)).unwrap();
        audited += 1;
        if r.verdict != Verdict::Holds || !segment_bound_holds(v.len(), g, n) {
            violations.push(format!("{origin}: |S|={} g={g} N={n}", v.len()));
        }
    }
    // Largest B°_2[g] subsets of the whole group Z/N, and of random subsets.
    let mut cyclic = 0;
    let mut cyclic_bad = Vec::new();
    for (g, n_max) in [(1u32, 60i64), (2, 40), (3, 30), (4, 26)] {
        for n in 2..=n_max {
            let amb = AmbientSpec::integers_mod(n).unwrap();
            let whole = GroundSet::residues(amb, 0..n).unwrap();
            let r = sid_k_exact(&whole, g, D, 64).unwrap();
            cyclic += 1;
            let member = verify_bfamily(&r.witness, BFamilyParams::new(2, g).unwrap()).unwrap().is_none();
            if !member || !below_group_bound(r.size as u64, n as u64, g) {
                cyclic_bad.push(format!("Z/{n} g={g}: {}", r.size));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.random_range(10..=60i64);
        let size = rng.random_range(5..=(n as usize).min(30));
        let g = rng.random_range(1..=4u32);
        let amb = AmbientSpec::integers_mod(n).unwrap();
        let a = GroundSet::residues(amb, random_subset(&mut rng, 0, n - 1, size)).unwrap();
        let r = sid_k_exact(&a, g, D, 64).unwrap();
        cyclic += 1;
        let member = verify_bfamily(&r.witness, BFamilyParams::new(2, g).unwrap()).unwrap().is_none();
        if !member || !below_group_bound(r.size as u64, n as u64, g) {
            cyclic_bad.push(format!("random subset of Z/{n} g={g}: {}", r.size));
        }
    }
    (
        violations.is_empty() && cyclic_bad.is_empty(),
        format!(
            "{audited} segment sets audited, {} violations; {cyclic} exact searches in Z/N, {} violations {:?}",
            violations.len(),
            cyclic_bad.len(),
            violations.first().or(cyclic_bad.first())
        ),
    )
}

// ------------------------------------------------------------------ 7

fn stat_u64(r: &ConstructionReport, key: &str) -> u64 {
    r.stats[key].as_u64().unwrap_or(u64::MAX)
}

fn criterion_7(produced: &mut Produced) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for base in [2, 3] {
        for n in 1..=3u32 {
            let r = geometric_sumproduct_example(base, n, 1).unwrap();
            let expect = (n * (n + 1) * (n + 1)) as usize;
            ok &= r.set.len() == expect;
            if r.set.len() != expect {
                notes.push(format!("geometric base={base} n={n}: {} != {expect}", r.set.len()));
            }
        }
    }
    notes.push("geometric sizes n(n+1)^2".into());
    for (p, k) in [(13i64, 2i64), (101, 3)] {
        let r = hyperbola_family(p, k, None).unwrap();
        let m = stat_u64(&r, "max_multiplicity");
        let target = (k * k) as f64 + 5.0 * (k as f64).powf(1.5);
        let size_ok = r.set.len() as i64 == k * p - k + 1;
        ok &= size_ok && (m as f64) <= target;
        notes.push(format!("hyperbola p={p} k={k}: |A|={} (ok={size_ok}), best-t max r = {m} <= {target:.2}", r.set.len()));
    }
    for g in [2i64, 3] {
        for n in [100i64, 1000] {
            let r = linstrom_like(g, n).unwrap();
            let far = stat_u64(&r, "max_multiplicity_far");
            let anomaly = r.stats["anomaly"].as_bool().unwrap_or(false);
            let status_ok = r.status != Status::Fail && (anomaly == (r.status == Status::Anomaly));
            ok &= far <= g as u64 && status_ok;
            notes.push(format!(
                "linstrom g={g} N={n}: far max {far} <= {g}, near anomaly {}",
                if anomaly { "flagged" } else { "absent" }
            ));
            produced.add("linstrom", &r.set);
        }
    }
    for n in [30, 100, 1000, 5000] {
        produced.add("sidon-construction", &sidon_report(n).unwrap().set);
    }
    (ok, notes.join("; "))
}

// ------------------------------------------------------------------ 8

fn certificate_inputs() -> Vec<(String, GroundSet)> {
    let mut v = Vec::new();
    for (len, step) in [(8, 1), (16, 3), (32, 1), (50, 7), (64, 2), (100, 1), (128, 5), (150, 1)] {
        v.push((format!("AP len={len} step={step}"), GroundSet::integers((0..len).map(|i| 3 + i * step))));
    }
    for n in [50, 100, 300, 1000, 3000, 10000, 30000] {
        v.push((format!("Sidon N={n}"), sidon_report(n).unwrap().set));
    }
    v.push(("powers of 2".into(), GroundSet::integers((0..30).map(|i| 1i64 << i))));
    v.push(("powers of 3".into(), GroundSet::integers((0..25).map(|i| 3i64.pow(i)))));
    for (a, b) in [(10, 10), (30, 5), (60, 20), (5, 40)] {
        let ap = (0..a).map(|i| i * 2);
        let sid = sidon_report(1000).unwrap().set.ints().unwrap().into_iter().take(b as usize).map(|x| x + 5000);
        v.push((format!("AP({a}) ∪ Sidon({b})"), GroundSet::integers(ap.chain(sid))));
    }
    for (a, b) in [(20, 20), (40, 10)] {
        v.push((
            format!("AP({a}) ∪ AP({b}, far)"),
            GroundSet::integers((0..a).chain((0..b).map(|i| 100_000 + 17 * i))),
        ));
    }
    v.push(("2D progression".into(), GroundSet::integers((0..8).flat_map(|i| (0..8).map(move |j| i + 100 * j)))));
    v.push(("squares".into(), GroundSet::integers((0..40).map(|i| i * i))));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    while v.len() < 50 {
        let hi = [64, 256, 4096][v.len() % 3];
        let size = rng.random_range(4..=120.min(hi as usize / 2));
        v.push((format!("random |A|={size} in [0,{hi}]"), GroundSet::integers(random_subset(&mut rng, 0, hi, size))));
    }
    v
}

/// Recompute `m(a) = |A ∩ (P + a)|` and the half-mass split from scratch.
fn half_mass_holds(a: &GroundSet, core: &PopularCore) -> bool {
    let av: BTreeSet<i64> = a.ints().unwrap().into_iter().collect();
    let p = core.p.ints().unwrap();
    let n = av.len() as u64;
    let mass: Vec<(i64, u64)> = av.iter().map(|&x| (x, p.iter().filter(|&&q| av.contains(&(q + x))).count() as u64)).collect();
    let total: u64 = mass.iter().map(|m| m.1).sum();
    let keep: Vec<i64> = mass.iter().filter(|m| 2 * n * m.1 >= total).map(|m| m.0).collect();
    let kept_mass: u64 = mass.iter().filter(|m| 2 * n * m.1 >= total).map(|m| m.1).sum();
    total == core.total_mass
        && kept_mass == core.core_mass
        && 2 * kept_mass >= total
        && keep == core.a_prime.ints().unwrap()
}

fn round_trip<T: serde::Serialize + serde::de::DeserializeOwned>(v: &T) -> T {
    serde_json::from_str(&serde_json::to_string(v).unwrap()).unwrap()
}

fn criterion_8() -> (bool, String) {
    let inputs = certificate_inputs();
    let epsilons = [Exponent::new(1, 16).unwrap(), Exponent::new(1, 8).unwrap(), Exponent::new(1, 4).unwrap()];
    let delta = Exponent::new(1, 4).unwrap();
    let mut failures = Vec::new();
    let mut kinds = std::collections::BTreeMap::new();
    let mut half_mass_checked = 0;
    for (i, (name, a)) in inputs.iter().enumerate() {
        let eps = epsilons[i % 3];
        let limit = (2 * eps.denom()).div_ceil(eps.numer()) as usize + 2;
        let certs: Vec<StructureCertificate> =
            vec![energy_gap_decompose(a, delta, eps).unwrap(), rigid_structure(a, delta, eps).unwrap()];
        for cert in &certs {
            *kinds.entry(cert.kind()).or_insert(0) += 1;
            let back: StructureCertificate = round_trip(cert);
            let mism = verify_certificate(a, &back).unwrap();
            if !mism.is_empty() {
                failures.push(format!("{name}: {} {:?}", cert.kind(), mism));
            }
            if cert.trace.len() > limit || cert.l_max as usize != limit {
                failures.push(format!("{name}: {} iterations > {limit}", cert.trace.len()));
            }
            let core = match &cert.outcome {
                Outcome::PopularCore(c) => Some(c),
                Outcome::RigidStructure(r) => Some(&r.core),
                Outcome::SmallEnergy { .. } => None,
            };
            if let Some(c) = core {
                half_mass_checked += 1;
                if !half_mass_holds(a, c) {
                    failures.push(format!("{name}: half-mass"));
                }
            }
        }
        let opts = PipelineOptions { delta, eps, seed: i as u64, trials: 5, ..Default::default() };
        let report: PipelineReport = round_trip(&sum_product_pipeline(a, opts).unwrap());
        let mism = verify_pipeline(a, &report).unwrap();
        if !mism.is_empty() {
            failures.push(format!("{name}: pipeline {mism:?}"));
        }
    }
    (
        failures.is_empty(),
        format!(
            "{} inputs x (decompose, rigid, pipeline); outcomes {kinds:?}; half-mass rechecked {half_mass_checked}x; {} failures {:?}",
            inputs.len(),
            failures.len(),
            failures.first()
        ),
    )
}

// ------------------------------------------------------------------ 9

fn criterion_9() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    let mut min_ratio = f64::INFINITY;
    for i in 0..50 {
        let hi = [40, 200, 2000][i % 3];
        let size = rng.random_range(2..=60.min(hi as usize));
        let a = GroundSet::integers(random_subset(&mut rng, 0, hi, size));
        for g in [1u32, 2] {
            let (core, report) = dense_core_extract(&a, g).unwrap();
            let e_full = energy_k(&a, g + 1, D).unwrap().value;
            let e_core = energy_k(&core, g + 1, D).unwrap().value;
            let scale = pow_big(4, ((g + 1) * (g + 1)) as u64);
            let holds = &e_core * scale >= e_full;
            if !holds || !report.floor_holds || core.is_empty() || !core.is_subset_of(&a) {
                bad += 1;
            }
            min_ratio = min_ratio.min(report.ratio / report.floor);
        }
    }
    (bad == 0, format!("100 (set, g) cases, {bad} below the floor; smallest ratio/floor = {min_ratio:.1}"))
}

// ------------------------------------------------------------------ 10

fn criterion_10(produced: &mut Produced) -> (bool, String) {
    let mut found: Vec<GroundSet> = Vec::new();
    let full = GroundSet::interval(0, 40);
    found.push(sid_k_exact(&full, 2, D, 64).unwrap().witness);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..60 {
        let size = rng.random_range(6..=30);
        let a = GroundSet::integers(random_subset(&mut rng, 0, 40, size));
        found.push(sid_k_exact(&a, 2, D, 64).unwrap().witness);
    }
    for seed in 0..20 {
        found.push(sid_k_greedy(&full, 2, D, seed).unwrap());
    }
    let hand = GroundSet::integers([0, 1, 3, 7, 8, 12]);
    let hand_member = verify_bfamily(&hand, BFamilyParams::new(2, 2).unwrap()).unwrap().is_none();
    found.push(hand);
    let mut violations = 0;
    let mut slices = 0;
    for s in &found {
        produced.add("heritability", s);
        let member = verify_bfamily(s, BFamilyParams::new(2, 2).unwrap()).unwrap().is_none();
        let r = slice_sidon_check(s).unwrap();
        // Independent route: every S ∩ (S + w), w ≠ 0, has distinct differences.
        let v = s.ints().unwrap();
        let set: BTreeSet<i64> = v.iter().copied().collect();
        let mut all_sidon = true;
        for &x in &v {
            for &y in &v {
                let w = x - y;
                if w == 0 {
                    continue;
                }
                let sw: Vec<i64> = v.iter().copied().filter(|z| set.contains(&(z - w))).collect();
                slices += 1;
                all_sidon &= max_nonzero_diff(&sw) <= 1;
            }
        }
        if !member || r.verdict != Verdict::Holds || !all_sidon {
            violations += 1;
        }
    }
    (
        violations == 0 && hand_member,
        format!("{} sets in B°_2[2] (hand set member: {hand_member}), {slices} slices checked, {violations} violations", found.len()),
    )
}

// ------------------------------------------------------------------ 11

fn criterion_11() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = 0;
    for _ in 0..100 {
        let size = rng.random_range(1..=12);
        let a = random_subset(&mut rng, -50, 50, size);
        let n = a.len() as u64;
        let d: Vec<i64> = rep(&a, &a, |x, y| x - y).into_keys().collect();
        let s: Vec<i64> = rep(&a, &a, |x, y| x + y).into_keys().collect();
        let rdd = rep(&d, &d, |x, y| x - y);
        let rds = rep(&d, &s, |x, y| x + y);
        let min_dd = d.iter().map(|x| rdd.get(x).copied().unwrap_or(0)).min().unwrap();
        let min_ds = s.iter().map(|x| rds.get(x).copied().unwrap_or(0)).min().unwrap();
        let lib = diffset_bounds(&GroundSet::integers(a.iter().copied()), 1, 40).unwrap();
        let oracle_ok = min_dd >= n && min_ds >= n;
        if !oracle_ok || !lib.facts_hold || lib.min_r_dd != min_dd || lib.min_r_ds != min_ds {
            bad += 1;
        }
    }
    (bad == 0, format!("100 random sets, {bad} failures (brute force and library agree)"))
}

// ------------------------------------------------------------------ 12

fn criterion_12(produced: &mut Produced) -> (bool, String) {
    let powers = GroundSet::integers((0..40).map(|i| 1i64 << i));
    let opts = PipelineOptions { seed: 12, ..Default::default() };
    let r1 = sum_product_pipeline(&powers, opts).unwrap();
    let additive_ok = r1.branch == Branch::AdditiveSmallEnergy
        && r1.extraction.verified
        && verify_multiplicity(&r1.extraction.subset, r1.extraction.certified_bound, r1.extraction.mode)
            .unwrap()
            .is_none()
        && r1.subset_size as f64 >= 0.9 * powers.len() as f64;
    produced.add("pipeline", &r1.extraction.subset);

    let a = GroundSet::interval(1, 4096);
    let r2 = sum_product_pipeline(&a, opts).unwrap();
    let ex = &r2.extraction;
    let l = ex.k;
    let core_n = r2.core.len();
    let e = energy_k(&r2.core, l, CompositionMode::Product).unwrap().value;
    let lg = (2 * l) as f64 * (core_n as f64).log2() - log2_big(&e);
    let floor = 0.25 * (lg / (2 * l - 1) as f64).exp2();
    let mult_ok = r2.branch == Branch::MultiplicativeAfterStructure
        && ex.mode == CompositionMode::Product
        && verify_multiplicity(&ex.subset, ex.certified_bound, CompositionMode::Product).unwrap().is_none()
        && ex.subset.is_subset_of(&a)
        && r2.subset_size as f64 >= floor;
    (
        additive_ok && mult_ok,
        format!(
            "powers of 2: {:?}, |B| = {} of 40; [1..4096]: {:?}, l = {l}, |A_*| = {core_n}, |B| = {} >= {floor:.2}, sqrt target {} (met: {})",
            r1.branch, r1.subset_size, r2.branch, r2.subset_size, r2.sqrt_target, r2.meets_sqrt_target
        ),
    )
}

fn main() {
    let total = Instant::now();
    let mut produced = Produced::default();
    let mut results = Vec::new();
    let mut run = |id: u32, limit: Option<u64>, f: &mut dyn FnMut() -> (bool, String)| {
        let (pass, detail) = timed(limit.map(Duration::from_secs), f);
        eprintln!("  [{id}] done");
        results.push(Row { id, pass, detail });
    };
    run(1, Some(30), &mut criterion_1);
    run(2, None, &mut criterion_2);
    run(3, None, &mut criterion_3);
    run(4, Some(60), &mut || criterion_4(&mut produced));
    run(5, None, &mut || criterion_5(&mut produced));
    run(7, Some(60), &mut || criterion_7(&mut produced));
    run(8, None, &mut criterion_8);
    run(9, None, &mut criterion_9);
    run(10, None, &mut || criterion_10(&mut produced));
    run(11, None, &mut criterion_11);
    run(12, Some(120), &mut || criterion_12(&mut produced));
    // Audits every segment set collected above, so it runs last.
    run(6, None, &mut || criterion_6(&produced));
    results.sort_by_key(|r| r.id);
    let mut failed = 0;
    for r in &results {
        println!("criterion {:>2}: {} - {}", r.id, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        failed += usize::from(!r.pass);
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        results.len() - failed,
        results.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

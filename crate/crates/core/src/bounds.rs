//! Closed-form bounds evaluated on concrete inputs, with the measured
//! quantity they constrain whenever it is computable.
//!
//! Square roots and fractional powers are rounded up, so a reported bound
//! never falls below the true value. Comparisons that are rational are made
//! in exact integer arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::ambient::{AmbientSpec, CompositionMode, Element, Value};
use crate::constructions::sumset_bound_value;
use crate::counting::{difference_histogram, rep_histogram};
use crate::error::{Error, Result};
use crate::set::{iterated_sumset, set_compose, GroundSet};
use crate::sidon::{sid_k_exact, verify_bfamily, verify_multiplicity, BFamilyParams};
use crate::util::{pow_big, up};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    /// No measured quantity (e.g. the exact search was over its cap).
    Unmeasured,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum ExactBound {
    /// `measured ≤ num/den` (strict: `<`).
    Fraction {
        #[serde(with = "crate::util::big_str")]
        num: BigUint,
        #[serde(with = "crate::util::big_str")]
        den: BigUint,
    },
    /// `(measured - 1)² < rhs`, i.e. `measured < √rhs + 1`.
    SquareBelow { rhs: u64 },
}

impl ExactBound {
    fn holds(&self, measured: u64, strict: bool) -> bool {
        match self {
            ExactBound::Fraction { num, den } => {
                let lhs = BigUint::from(measured) * den;
                if strict {
                    &lhs < num
                } else {
                    &lhs <= num
                }
            }
            ExactBound::SquareBelow { rhs } => measured == 0 || ((measured - 1) as u128).pow(2) < *rhs as u128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, Json>,
    /// Upper bound, rounded up.
    pub bound: f64,
    /// Exact form of the comparison, when one exists; it decides the verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactBound>,
    pub measured: Option<u64>,
    /// `measured < bound` rather than `measured ≤ bound`.
    pub strict: bool,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Json>,
}

impl BoundReport {
    fn new(name: &str, bound: f64, strict: bool) -> Self {
        BoundReport {
            name: name.into(),
            inputs: BTreeMap::new(),
            bound,
            exact: None,
            measured: None,
            strict,
            verdict: Verdict::Unmeasured,
            details: BTreeMap::new(),
        }
    }

    fn input(mut self, key: &str, v: Json) -> Self {
        self.inputs.insert(key.into(), v);
        self
    }

    fn detail(&mut self, key: &str, v: Json) {
        self.details.insert(key.into(), v);
    }

    fn expected_verdict(&self) -> Verdict {
        let Some(m) = self.measured else { return Verdict::Unmeasured };
        let ok = match &self.exact {
            Some(e) => e.holds(m, self.strict),
            None if self.strict => (m as f64) < self.bound,
            None => (m as f64) <= self.bound,
        };
        if ok {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    /// Record `measured` and derive the verdict.
    fn measure(&mut self, measured: u64) {
        self.measured = Some(measured);
        self.verdict = self.expected_verdict();
    }

    /// Whether the stored verdict follows from the stored bound and measurement.
    pub fn recheck(&self) -> bool {
        self.verdict == self.expected_verdict()
    }

    pub fn csv_header() -> &'static str {
        "name,bound,measured,strict,verdict"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.name,
            self.bound,
            self.measured.map_or(String::new(), |m| m.to_string()),
            self.strict,
            serde_json::to_value(self.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
        )
    }
}

fn min_count_over(set: &GroundSet, hist_get: impl Fn(Element) -> u64) -> Option<(Element, u64)> {
    set.iter().map(|x| (x, hist_get(x))).min_by_key(|&(x, c)| (c, x))
}

/// `Sid_k(A) ≤ σ^{-1} min{|C|√(k|B|) + |B|, |B|√(k|C|) + |C|}` for
/// `A ⊆ B + C` with `r_{B+C}(a) ≥ σ` on `A`. With `a` given, the σ
/// hypothesis is checked and `Sid_k(A)` is measured when `|A| ≤ cap`.
pub fn sumset_sidon_upper(
    b: &GroundSet,
    c: &GroundSet,
    k: u32,
    sigma: u64,
    a: Option<&GroundSet>,
    cap: usize,
) -> Result<BoundReport> {
    b.same_ambient(c)?;
    if sigma == 0 || k == 0 {
        return Err(Error::invalid("need k >= 1 and sigma >= 1"));
    }
    let bound = sumset_bound_value(b.len(), c.len(), k, sigma);
    let mut r = BoundReport::new("sumset-sidon", bound, false)
        .input("b_size", json!(b.len()))
        .input("c_size", json!(c.len()))
        .input("k", json!(k))
        .input("sigma", json!(sigma));
    let (bs, cs, kf) = (b.len() as f64, c.len() as f64, k as f64);
    r.detail("first_branch", json!(up::add(up::mul(cs, up::sqrt(up::mul(kf, bs))), bs)));
    r.detail("second_branch", json!(up::add(up::mul(bs, up::sqrt(up::mul(kf, cs))), cs)));
    if let Some(a) = a {
        a.same_ambient(b)?;
        let hist = rep_histogram(b, c, CompositionMode::Sum)?;
        if let Some((x, cnt)) = min_count_over(a, |x| hist.get_elem(x)) {
            r.detail("min_representations", json!(cnt));
            if cnt < sigma {
                return Err(Error::PreconditionFailed {
                    hypothesis: format!("r_{{B+C}}(a) >= {sigma} for all a in A"),
                    witness: format!("r_{{B+C}}({x}) = {cnt}"),
                });
            }
        }
        r = r.input("a_size", json!(a.len()));
        if a.len() <= cap {
            let sid = sid_k_exact(a, k, CompositionMode::Difference, cap)?;
            r.measure(sid.size as u64);
            r.detail("witness", serde_json::to_value(&sid.witness).expect("serializable"));
        }
    }
    Ok(r)
}

/// The two proof facts behind the difference-set corollary and the σ-version
/// bounds they give for `D = A - A` and `S = A + A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffsetReport {
    pub set_size: usize,
    pub d_size: usize,
    pub s_size: usize,
    /// `min_{d∈D} r_{D-D}(d)`; the fact is that it is at least `|A|`.
    pub min_r_dd: u64,
    /// `min_{s∈S} r_{D+S}(s)`; the fact is that it is at least `|A|`.
    pub min_r_ds: u64,
    pub facts_hold: bool,
    pub difference: BoundReport,
    pub sum: BoundReport,
    /// `√k·|A|^{3/2}` and `√k·|D|^{3/2}/|A|`, the corollary's shapes.
    pub shape_small_a: f64,
    pub shape_small_d: f64,
}

pub fn diffset_bounds(a: &GroundSet, k: u32, cap: usize) -> Result<DiffsetReport> {
    if a.is_empty() || k == 0 {
        return Err(Error::invalid("need a nonempty set and k >= 1"));
    }
    let n = a.len() as u64;
    let d = set_compose(a, a, CompositionMode::Difference, false)?;
    let s = set_compose(a, a, CompositionMode::Sum, false)?;
    let hdd = difference_histogram(&d)?;
    let hds = rep_histogram(&d, &s, CompositionMode::Sum)?;
    let min_r_dd = min_count_over(&d, |x| hdd.get_elem(x)).map_or(0, |m| m.1);
    let min_r_ds = min_count_over(&s, |x| hds.get_elem(x)).map_or(0, |m| m.1);
    // D ⊆ D + D with σ = |A| (D is symmetric), and S ⊆ D + S with σ = |A|.
    let difference = sumset_sidon_upper(&d, &d, k, n, Some(&d), cap)?;
    let sum = sumset_sidon_upper(&d, &s, k, n, Some(&s), cap)?;
    let sk = up::sqrt(k as f64);
    Ok(DiffsetReport {
        set_size: a.len(),
        d_size: d.len(),
        s_size: s.len(),
        min_r_dd,
        min_r_ds,
        facts_hold: min_r_dd >= n && min_r_ds >= n,
        difference,
        sum,
        shape_small_a: up::mul(sk, up::pow(n as f64, 1.5)),
        shape_small_d: up::div(up::mul(sk, up::pow(d.len() as f64, 1.5)), n as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeSetting {
    /// `S` lies in a group of order `N`.
    FiniteGroup,
    /// `S ⊆ [N]`.
    Segment,
}

fn binom2(m: u64) -> u64 {
    m * (m - 1) / 2
}

/// Upper bound on `|S|` for `S ∈ B°_k[g]` of size `N` (group order or
/// segment length). The inequality is strict.
pub fn bfamily_size_value(n: u64, k: u32, g: u32, setting: SizeSetting) -> f64 {
    let (nf, kf, gf) = (n as f64, k as f64, g as f64);
    let gn = up::mul(gf, nf);
    match (setting, k) {
        (SizeSetting::FiniteGroup, 2) => up::add(up::sqrt(gn), 1.0),
        (SizeSetting::Segment, 2) => up::add(up::add(up::sqrt(gn), up::pow(gn, 0.25)), 1.0),
        (SizeSetting::FiniteGroup, _) => {
            let main = up::mul(up::pow(kf, 1.0 / (gf + 1.0)), up::pow(nf, gf / (gf + 1.0)));
            up::add(main, binom2(g as u64 + 1) as f64)
        }
        (SizeSetting::Segment, _) => {
            let g1 = gf + 1.0;
            let main = up::mul(up::pow(kf, 1.0 / g1), up::pow(nf, gf / g1));
            let second = up::mul(
                up::mul(up::pow(binom2(g as u64 + 1) as f64, 1.0 / g1), up::pow(kf, gf / (g1 * g1))),
                up::pow(nf, gf * gf / (g1 * g1)),
            );
            up::add(up::add(main, second), 1.0)
        }
    }
}

/// `|S| < √(gN) + 1` decided exactly: `(|S| - 1)² < gN`.
pub fn below_group_bound(size: u64, n: u64, g: u32) -> bool {
    size == 0 || ((size - 1) as u128).pow(2) < g as u128 * n as u128
}

/// The bound for `S ∈ B°_k[g]` and, with a set given, its size against it.
/// For the segment setting the set must lie in `[0, N-1]`; for the group
/// setting in an ambient of order `N`. Membership is verified first.
pub fn bfamily_size_upper(
    n: u64,
    k: u32,
    g: u32,
    setting: SizeSetting,
    set: Option<&GroundSet>,
) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::invalid("N must be >= 2"));
    }
    let params = BFamilyParams::new(k, g)?;
    let bound = bfamily_size_value(n, k, g, setting);
    let mut r = BoundReport::new("bfamily-size", bound, true)
        .input("n", json!(n))
        .input("k", json!(k))
        .input("g", json!(g))
        .input("setting", serde_json::to_value(setting).expect("serializable"));
    if let Some(s) = set {
        match setting {
            SizeSetting::Segment => {
                let inside = s.ints().is_some_and(|v| v.iter().all(|&x| x >= 0 && (x as u64) < n))
                    && *s.ambient() == AmbientSpec::Integers;
                if !inside {
                    return Err(Error::invalid(format!("set is not inside [0, {}]", n - 1)));
                }
            }
            SizeSetting::FiniteGroup => {
                if s.ambient().order() != Some(n) {
                    return Err(Error::invalid(format!("ambient {} does not have order {n}", s.ambient())));
                }
            }
        }
        let member = if k == 2 {
            verify_multiplicity(s, g as u64, CompositionMode::Difference)?.is_none()
        } else {
            verify_bfamily(s, params)?.is_none()
        };
        if !member {
            return Err(Error::PreconditionFailed {
                hypothesis: format!("S in B°_{k}[{g}]"),
                witness: "membership check failed".into(),
            });
        }
        if setting == SizeSetting::FiniteGroup && k == 2 {
            r.exact = Some(ExactBound::SquareBelow { rhs: g as u64 * n });
        }
        r.measure(s.len() as u64);
        if setting == SizeSetting::Segment && k == 2 {
            r.detail("embedding", serde_json::to_value(embedding_check(s, n, g)?).expect("serializable"));
        }
    }
    Ok(r)
}

/// The embedding argument for `S ⊆ [0, N-1]` in `B°_2[g]`: with
/// `u = ⌊N^{3/4} g^{-1/4}⌋` and `I = [0, u-1]` inside `Z/(N+u)`, every
/// `x ∈ [-u, u] \ {0}` has `r_{S-S}(x) ≤ g`, and
/// `|S|²u² ≤ (N+u)·E(S, I)` and `E(S, I) < |S|u + gu²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    pub u: u64,
    pub modulus: u64,
    pub local_bound_holds: bool,
    #[serde(with = "crate::util::big_str")]
    pub common_energy: BigUint,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

pub fn embedding_check(s: &GroundSet, n: u64, g: u32) -> Result<EmbeddingCheck> {
    let mut u = ((n as f64).powf(0.75) / (g as f64).powf(0.25)).floor() as u64;
    // Pin the floor exactly: u^4·g ≤ N^3 < (u+1)^4·g.
    while u > 0 && (u as u128).pow(4) * g as u128 > (n as u128).pow(3) {
        u -= 1;
    }
    while ((u + 1) as u128).pow(4) * g as u128 <= (n as u128).pow(3) {
        u += 1;
    }
    let u = u.max(1);
    let modulus = n + u;
    let amb = AmbientSpec::integers_mod(modulus as i64)?;
    let embedded = GroundSet::residues(amb, s.ints().expect("integers"))?;
    let hist = difference_histogram(&embedded)?;
    // The modulus is at least 2u, so every residue has at most one
    // representative in [-u, u] and r_{I-I}(x) = max(0, u - |x|) there.
    // Both quantities then come straight from the histogram of S - S.
    let mut local_bound_holds = true;
    let mut e = BigUint::ZERO;
    for (v, c) in hist.iter() {
        let Some(Element::Int(x)) = v.as_element() else { continue };
        let x = if x as u64 > modulus / 2 { x - modulus as i64 } else { x };
        let dist = x.unsigned_abs();
        if dist > u {
            continue;
        }
        if dist != 0 && c > g as u64 {
            local_bound_holds = false;
        }
        e += BigUint::from(c) * (u - dist);
    }
    let sz = s.len() as u64;
    let lower = pow_big(sz, 2) * pow_big(u, 2) <= &e * modulus;
    let upper = e < BigUint::from(sz) * u + pow_big(u, 2) * g;
    Ok(EmbeddingCheck {
        u,
        modulus,
        local_bound_holds,
        common_energy: e,
        lower_holds: lower,
        upper_holds: upper,
    })
}

/// `|X + Y| = |X|·|Y|`.
pub fn co_sidon_check(x: &GroundSet, y: &GroundSet) -> Result<bool> {
    x.same_ambient(y)?;
    Ok(set_compose(x, y, CompositionMode::Sum, false)?.len() == x.len() * y.len())
}

/// `S_X = ∩_{x∈X} (S + x)`.
pub fn slice(s: &GroundSet, x: &GroundSet) -> Result<GroundSet> {
    let mut out = s.clone();
    for t in x.iter() {
        out = out.intersection(&s.translate(t)?)?;
    }
    Ok(out.with_label("slice"))
}

/// Search budget for the shift enumeration in [`heritability_slice`].
pub const HERITABILITY_BUDGET: u64 = 20_000_000;

/// For `S ∈ B°_k[g]` and pairwise co-Sidon `X_1, ..., X_l` with
/// `Σ|X_i| ≥ g + C(l,2) + 1`: the maximum of
/// `|S_{X_1} ∩ (S_{X_2} + z_1) ∩ ... ∩ (S_{X_l} + z_{l-1})|` over pairwise
/// distinct nonzero `z_j`, which must stay below `k`. Only shifts with
/// `z_j ∈ S_{X_1} - S_{X_{j+1}}` can give a nonempty intersection.
pub fn heritability_slice(s: &GroundSet, shift_sets: &[GroundSet], k: u32, g: u32) -> Result<BoundReport> {
    let params = BFamilyParams::new(k, g)?;
    let l = shift_sets.len();
    if l < 2 {
        return Err(Error::invalid("need at least two shift sets"));
    }
    for x in shift_sets {
        s.same_ambient(x)?;
    }
    if let Some(w) = verify_bfamily(s, params)? {
        return Err(Error::PreconditionFailed {
            hypothesis: format!("S in B°_{k}[{g}]"),
            witness: format!("{w:?}"),
        });
    }
    let total: usize = shift_sets.iter().map(GroundSet::len).sum();
    let need = g as usize + l * (l - 1) / 2 + 1;
    if total < need {
        return Err(Error::PreconditionFailed {
            hypothesis: format!("sum of |X_i| >= g + C(l,2) + 1 = {need}"),
            witness: format!("sum is {total}"),
        });
    }
    for i in 0..l {
        for j in i + 1..l {
            if !co_sidon_check(&shift_sets[i], &shift_sets[j])? {
                return Err(Error::PreconditionFailed {
                    hypothesis: "every (X_i, X_j) is a co-Sidon pair".into(),
                    witness: format!("X_{} and X_{} have a repeated sum", i + 1, j + 1),
                });
            }
        }
    }
    let slices = shift_sets.iter().map(|x| slice(s, x)).collect::<Result<Vec<_>>>()?;
    let zero = s.ambient().zero();
    let candidates = (1..l)
        .map(|j| {
            set_compose(&slices[0], &slices[j], CompositionMode::Difference, false)
                .map(|d| d.filter(|z| z != zero))
        })
        .collect::<Result<Vec<_>>>()?;

    struct Walk<'a> {
        slices: &'a [GroundSet],
        candidates: &'a [GroundSet],
        nodes: u64,
        best: usize,
        best_shifts: Vec<Element>,
    }
    fn go(w: &mut Walk, j: usize, cur: &GroundSet, used: &mut Vec<Element>) -> Result<()> {
        if j == w.slices.len() {
            if cur.len() > w.best {
                w.best = cur.len();
                w.best_shifts = used.clone();
            }
            return Ok(());
        }
        for z in w.candidates[j - 1].iter() {
            if used.contains(&z) {
                continue;
            }
            w.nodes += 1;
            if w.nodes > HERITABILITY_BUDGET {
                return Err(Error::CapExceeded {
                    what: "heritability shift enumeration".into(),
                    size: w.nodes,
                    cap: HERITABILITY_BUDGET,
                });
            }
            let next = cur.intersection(&w.slices[j].translate(z)?)?;
            if next.len() <= w.best {
                continue;
            }
            used.push(z);
            go(w, j + 1, &next, used)?;
            used.pop();
        }
        Ok(())
    }
    let mut walk = Walk { slices: &slices, candidates: &candidates, nodes: 0, best: 0, best_shifts: Vec::new() };
    go(&mut walk, 1, &slices[0], &mut Vec::new())?;

    let mut r = BoundReport::new("heritability", k as f64, true)
        .input("k", json!(k))
        .input("g", json!(g))
        .input("l", json!(l))
        .input("shift_set_sizes", json!(shift_sets.iter().map(GroundSet::len).collect::<Vec<_>>()));
    r.exact = Some(ExactBound::Fraction { num: k.into(), den: 1u32.into() });
    r.detail("slice_sizes", json!(slices.iter().map(GroundSet::len).collect::<Vec<_>>()));
    r.detail("best_shifts", serde_json::to_value(&walk.best_shifts).expect("serializable"));
    r.detail("nodes", json!(walk.nodes));
    r.measure(walk.best as u64);
    Ok(r)
}

/// For `S ∈ B°_2[2]` in a group without elements of order two, every
/// `S_w = S ∩ (S + w)` with `w ≠ 0` is a Sidon set. Only `w ∈ S - S` give
/// nonempty slices, so those are the ones checked. The measured value is the
/// largest multiplicity seen in any `S_w - S_w` (bound: at most 1).
pub fn slice_sidon_check(s: &GroundSet) -> Result<BoundReport> {
    if s.ambient().has_two_torsion() {
        return Err(Error::PreconditionFailed {
            hypothesis: "no elements of order two".into(),
            witness: format!("{} has 2-torsion", s.ambient()),
        });
    }
    if let Some(w) = verify_multiplicity(s, 2, CompositionMode::Difference)? {
        return Err(Error::PreconditionFailed {
            hypothesis: "S in B°_2[2]".into(),
            witness: format!("{w:?}"),
        });
    }
    let zero = s.ambient().zero();
    let shifts = set_compose(s, s, CompositionMode::Difference, false)?.filter(|w| w != zero);
    let mut worst = 0u64;
    let mut worst_w = None;
    let mut largest = 0usize;
    for w in shifts.iter() {
        let sw = s.intersection(&s.translate(w)?)?;
        largest = largest.max(sw.len());
        let m = difference_histogram(&sw)?
            .max_excluding(Some(&Value::Elem(zero)))
            .map_or(0, |(_, c)| c);
        if m > worst {
            worst = m;
            worst_w = Some(w);
        }
    }
    let mut r = BoundReport::new("slice-sidon", 1.0, false).input("set_size", json!(s.len()));
    r.exact = Some(ExactBound::Fraction { num: 1u32.into(), den: 1u32.into() });
    r.detail("shifts_checked", json!(shifts.len()));
    r.detail("largest_slice", json!(largest));
    if let Some(w) = worst_w {
        r.detail("worst_shift", serde_json::to_value(w).expect("serializable"));
    }
    r.measure(worst);
    Ok(r)
}

/// `|nA - mA| ≤ (|A+A|/|A|)^{n+m}·|A|`, compared exactly as
/// `|nA - mA|·|A|^{n+m-1} ≤ |A+A|^{n+m}`.
pub fn plunnecke_audit(a: &GroundSet, n: u32, m: u32, budget: usize) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::invalid("Plünnecke audit of an empty set"));
    }
    if n + m == 0 {
        return Err(Error::invalid("need n + m >= 1"));
    }
    let size = a.len() as u64;
    let doubled = set_compose(a, a, CompositionMode::Sum, false)?.len() as u64;
    let lhs = iterated_sumset(a, n, m, budget)?.len() as u64;
    let e = (n + m) as u64;
    let num = pow_big(doubled, e);
    let den = pow_big(size, e - 1);
    let bound = up::mul(up::pow(up::div(doubled as f64, size as f64), e as f64), size as f64);
    let mut r = BoundReport::new("plunnecke", bound, false)
        .input("n", json!(n))
        .input("m", json!(m))
        .input("set_size", json!(size))
        .input("sumset_size", json!(doubled));
    r.exact = Some(ExactBound::Fraction { num, den });
    r.measure(lhs);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::common_energy;

    #[test]
    fn embedding_energy_matches_explicit_interval() {
        for (v, g) in [(vec![0, 1, 3, 7, 12, 20], 1u32), (vec![0, 1, 2, 4, 5, 9, 11, 17, 30], 2), (vec![0, 5], 1)] {
            let n = *v.last().unwrap() as u64 + 1;
            let s = GroundSet::integers(v.iter().copied());
            let chk = embedding_check(&s, n, g).unwrap();
            let amb = AmbientSpec::integers_mod(chk.modulus as i64).unwrap();
            let embedded = GroundSet::residues(amb, v.iter().copied()).unwrap();
            let interval = GroundSet::residues(amb, 0..chk.u as i64).unwrap();
            assert_eq!(chk.common_energy, common_energy(&embedded, &interval).unwrap(), "{v:?}");
        }
    }

    #[test]
    fn sumset_example() {
        let b = GroundSet::integers([0, 1]);
        let c = GroundSet::integers([0, 2, 4]);
        let a = GroundSet::interval(0, 5);
        let r = sumset_sidon_upper(&b, &c, 1, 1, Some(&a), 40).unwrap();
        assert!((r.bound - (3.0 * 2f64.sqrt() + 2.0)).abs() < 1e-9);
        assert_eq!(r.measured, Some(3));
        assert_eq!(r.verdict, Verdict::Holds);
        let swapped = sumset_sidon_upper(&c, &b, 1, 1, Some(&a), 40).unwrap();
        assert_eq!(swapped.bound, r.bound);
        assert!(matches!(
            sumset_sidon_upper(&b, &c, 1, 2, Some(&a), 40),
            Err(Error::PreconditionFailed { .. })
        ));
    }

    #[test]
    fn diffset_facts() {
        let r = diffset_bounds(&GroundSet::integers([0, 1, 3]), 1, 40).unwrap();
        assert_eq!(r.d_size, 7);
        assert!(r.facts_hold);
        assert!(r.min_r_dd >= 3);
        let z = diffset_bounds(&GroundSet::integers([0]), 1, 40).unwrap();
        assert!(z.facts_hold);
    }

    #[test]
    fn size_bounds() {
        let v = |s| bfamily_size_value(100, 2, 2, s);
        assert!((v(SizeSetting::FiniteGroup) - 15.142).abs() < 1e-3);
        assert!((v(SizeSetting::Segment) - 18.903).abs() < 1e-3);
        assert!((bfamily_size_value(10_000, 2, 1, SizeSetting::Segment) - 111.0).abs() < 1e-9);
        let s = GroundSet::integers([0, 1, 3, 7, 8, 12]);
        let r = bfamily_size_upper(13, 2, 2, SizeSetting::Segment, Some(&s)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let emb: EmbeddingCheck = serde_json::from_value(r.details["embedding"].clone()).unwrap();
        assert!(emb.local_bound_holds && emb.lower_holds && emb.upper_holds);
        assert!(r.recheck());
        assert!(below_group_bound(4, 10, 1));
        assert!(!below_group_bound(4, 9, 1));
        assert!(!below_group_bound(5, 16, 1));
    }

    #[test]
    fn co_sidon_examples() {
        let ints = |v: &[i64]| GroundSet::integers(v.iter().copied());
        assert!(co_sidon_check(&ints(&[0, 1]), &ints(&[0, 2])).unwrap());
        assert!(!co_sidon_check(&ints(&[0, 1]), &ints(&[0, 1])).unwrap());
        assert!(co_sidon_check(&ints(&[5]), &ints(&[0, 1, 2])).unwrap());
    }

    #[test]
    fn slices_of_hand_set() {
        let s = GroundSet::integers([0, 1, 3, 7, 8, 12]);
        let s1 = slice(&s, &GroundSet::integers([0, 1])).unwrap();
        assert_eq!(s1.ints().unwrap(), vec![1, 8]);
        let s4 = slice(&s, &GroundSet::integers([0, 4])).unwrap();
        assert_eq!(s4.ints().unwrap(), vec![7, 12]);
        let r = slice_sidon_check(&s).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let sidon = slice_sidon_check(&GroundSet::integers([0, 1, 3, 7])).unwrap();
        assert_eq!(sidon.verdict, Verdict::Holds);
        assert_eq!(sidon.details["largest_slice"], json!(1));
        // Two co-Sidon shift sets with |X_1| + |X_2| = g + 2.
        let x1 = GroundSet::integers([0, 1]);
        let x2 = GroundSet::integers([0, 2]);
        let r = heritability_slice(&s, &[x1, x2], 2, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn plunnecke_examples() {
        let r = plunnecke_audit(&GroundSet::integers([0, 1]), 2, 1, 1 << 20).unwrap();
        assert_eq!(r.measured, Some(4));
        assert!((r.bound - 6.75).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::Holds);
        let ap = plunnecke_audit(&GroundSet::interval(0, 9), 1, 1, 1 << 20).unwrap();
        assert_eq!(ap.measured, Some(19));
        assert_eq!(ap.verdict, Verdict::Holds);
        let one = plunnecke_audit(&GroundSet::integers([0, 5, 9]), 1, 0, 1 << 20).unwrap();
        assert_eq!(one.verdict, Verdict::Holds);
    }
}

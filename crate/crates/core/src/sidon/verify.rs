use serde::{Deserialize, Serialize};

use crate::ambient::{CompositionMode, Element, Value};
use crate::counting::rep_histogram_with;
use crate::error::{Error, Result};
use crate::set::GroundSet;

/// Parameters of the family `B°_k[g]`: every intersection of `S` with `g`
/// distinct nonzero translates of itself has fewer than `k` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BFamilyParams {
    pub k: u32,
    pub g: u32,
}

impl BFamilyParams {
    pub fn new(k: u32, g: u32) -> Result<Self> {
        if k < 2 || g < 1 {
            return Err(Error::invalid(format!("B°_k[g] needs k >= 2 and g >= 1, got k={k}, g={g}")));
        }
        Ok(BFamilyParams { k, g })
    }

    /// Classical Sidon sets.
    pub fn sidon() -> Self {
        BFamilyParams { k: 2, g: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum ViolationWitness {
    /// A non-identity value represented more than `g` times.
    Multiplicity {
        mode: CompositionMode,
        value: Value,
        count: u64,
        bound: u64,
    },
    /// `shifts` are distinct and nonzero, and every element lies in
    /// `S ∩ (S + x_1) ∩ ... ∩ (S + x_g)`.
    Intersection { shifts: Vec<Element>, elements: Vec<Element> },
}

impl ViolationWitness {
    /// Re-derive the violation from `s` alone.
    pub fn recheck(&self, s: &GroundSet) -> bool {
        let amb = *s.ambient();
        match self {
            ViolationWitness::Multiplicity { mode, value, count, bound } => {
                rep_histogram_with(s, s, *mode, true).is_ok_and(|h| h.get(value) == *count && count > bound)
            }
            ViolationWitness::Intersection { shifts, elements } => {
                let zero = amb.zero();
                let mut sorted = shifts.clone();
                sorted.sort_unstable();
                sorted.dedup();
                let mut elems = elements.clone();
                elems.sort_unstable();
                elems.dedup();
                sorted.len() == shifts.len()
                    && !shifts.contains(&zero)
                    && elems.len() == elements.len()
                    && elements.iter().all(|&e| {
                        s.contains(&e)
                            && shifts
                                .iter()
                                .all(|&x| amb.sub(e, x).is_ok_and(|y| s.contains(&y)))
                    })
            }
        }
    }
}

/// `r_{S∘S}(x) ≤ g` for every non-identity `x`. Returns `None` when the bound
/// holds, otherwise the value of maximal count.
pub fn verify_multiplicity(s: &GroundSet, g: u64, mode: CompositionMode) -> Result<Option<ViolationWitness>> {
    if g == 0 {
        return Err(Error::invalid("multiplicity bound g must be >= 1"));
    }
    let hist = rep_histogram_with(s, s, mode, true)?;
    let exempt = s.ambient().identity_value(mode);
    Ok(match hist.max_excluding(exempt.as_ref()) {
        Some((value, count)) if count > g => Some(ViolationWitness::Multiplicity { mode, value, count, bound: g }),
        _ => None,
    })
}

/// Default limit on search nodes for [`verify_bfamily`].
pub const BFAMILY_BUDGET: u64 = 50_000_000;

/// Membership in `B°_k[g]` by walking `k`-subsets `Y` of `S` and maintaining
/// `T(Y) = ∩_{y∈Y} (S - y)`. A violation is a `Y` with `|T(Y)| ≥ g + 1`:
/// then the nonzero `t ∈ T(Y)` give shifts `x = -t` whose common intersection
/// with `S` contains `Y`. Since `T` only shrinks as `Y` grows, branches with
/// `|T| ≤ g` are cut.
pub fn verify_bfamily(s: &GroundSet, params: BFamilyParams) -> Result<Option<ViolationWitness>> {
    verify_bfamily_budget(s, params, BFAMILY_BUDGET)
}

pub fn verify_bfamily_budget(
    s: &GroundSet,
    params: BFamilyParams,
    budget: u64,
) -> Result<Option<ViolationWitness>> {
    let BFamilyParams { k, g } = BFamilyParams::new(params.k, params.g)?;
    let amb = *s.ambient();
    let elems = s.elements();
    let mut nodes = 0u64;

    struct Ctx<'a> {
        s: &'a GroundSet,
        k: usize,
        need: usize,
        budget: u64,
    }

    fn walk(
        ctx: &Ctx,
        start: usize,
        chosen: &mut Vec<Element>,
        t: &[Element],
        nodes: &mut u64,
    ) -> Result<Option<(Vec<Element>, Vec<Element>)>> {
        if chosen.len() == ctx.k {
            return Ok(Some((chosen.clone(), t.to_vec())));
        }
        let amb = *ctx.s.ambient();
        let elems = ctx.s.elements();
        for i in start..elems.len() {
            if elems.len() - i < ctx.k - chosen.len() {
                break;
            }
            *nodes += 1;
            if *nodes > ctx.budget {
                return Err(Error::CapExceeded {
                    what: "B°_k[g] subset walk".into(),
                    size: *nodes,
                    cap: ctx.budget,
                });
            }
            let y = elems[i];
            let next: Vec<Element> = t
                .iter()
                .copied()
                .filter(|&tt| amb.add(y, tt).is_ok_and(|v| ctx.s.contains(&v)))
                .collect();
            if next.len() < ctx.need {
                continue;
            }
            chosen.push(y);
            if let Some(found) = walk(ctx, i + 1, chosen, &next, nodes)? {
                return Ok(Some(found));
            }
            chosen.pop();
        }
        Ok(None)
    }

    if elems.len() < k as usize {
        return Ok(None);
    }
    // T(∅) would be the whole group; start from each first element instead.
    let ctx = Ctx { s, k: k as usize, need: g as usize + 1, budget };
    for (i, &y0) in elems.iter().enumerate() {
        let t0: Vec<Element> = elems.iter().map(|&x| amb.sub(x, y0)).collect::<Result<_>>()?;
        let mut t0 = t0;
        t0.sort_unstable();
        let mut chosen = vec![y0];
        if let Some((ys, t)) = walk(&ctx, i + 1, &mut chosen, &t0, &mut nodes)? {
            let zero = amb.zero();
            let mut shifts: Vec<Element> = t
                .into_iter()
                .filter(|&x| x != zero)
                .map(|x| amb.neg(x))
                .collect::<Result<_>>()?;
            shifts.sort_unstable();
            shifts.truncate(g as usize);
            return Ok(Some(ViolationWitness::Intersection { shifts, elements: ys }));
        }
    }
    Ok(None)
}

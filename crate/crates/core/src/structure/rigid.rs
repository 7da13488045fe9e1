use std::collections::HashSet;

use crate::ambient::{CompositionMode, Element};
use crate::counting::{difference_histogram, rep_histogram};
use crate::error::{Error, Result};
use crate::set::GroundSet;
use crate::util::Exponent;

use super::decompose::{energy_gap_decompose, masses, Outcome, PopularCore, RigidPart, StructureCertificate};

/// Popular differences of `P`: `d ≠ 0` with `4M²·r_{P-P}(d) ≥ |P|`.
fn popular_differences(p: &GroundSet, m: u64) -> Result<GroundSet> {
    let hist = difference_histogram(p)?;
    let zero = p.ambient().zero();
    let need = p.len() as u128;
    let scale = 4 * m as u128 * m as u128;
    let d: Vec<Element> = hist
        .iter()
        .filter(|&(_, c)| scale * c as u128 >= need)
        .filter_map(|(v, _)| v.as_element())
        .filter(|&x| x != zero)
        .collect();
    GroundSet::new(*p.ambient(), d)
}

/// The vertex of maximal degree in the popularity graph on `P` (ties to the
/// smallest) and its closed neighbourhood.
pub(crate) fn popularity_center(p: &GroundSet, m: u64) -> Result<(Element, GroundSet)> {
    let amb = *p.ambient();
    let pop = popular_differences(p, m)?.lookup();
    let mut best: Option<(usize, usize)> = None;
    for (i, x) in p.iter().enumerate() {
        let mut deg = 0;
        for y in p.iter() {
            if pop.contains(amb.sub(x, y)?) {
                deg += 1;
            }
        }
        if best.is_none_or(|(_, d)| deg > d) {
            best = Some((i, deg));
        }
    }
    let (i, _) = best.ok_or(Error::EmptyCore)?;
    let x = p.elements()[i];
    let mut h = vec![x];
    for y in p.iter() {
        if pop.contains(amb.sub(x, y)?) {
            h.push(y);
        }
    }
    Ok((x, GroundSet::new(amb, h)?))
}

/// Greedy maximal `Z ⊆ W` (in element order) with pairwise disjoint `H + z`.
pub(crate) fn disjoint_translates(h: &GroundSet, w: &GroundSet) -> Result<GroundSet> {
    let amb = *h.ambient();
    let mut covered: HashSet<Element> = HashSet::new();
    let mut z = Vec::new();
    for c in w.iter() {
        let shifted = h.iter().map(|y| amb.add(y, c)).collect::<Result<Vec<_>>>()?;
        if shifted.iter().all(|e| !covered.contains(e)) {
            covered.extend(shifted);
            z.push(c);
        }
    }
    GroundSet::new(amb, z)
}

pub(crate) fn translates_disjoint(h: &GroundSet, z: &GroundSet) -> Result<bool> {
    let amb = *h.ambient();
    let mut seen = HashSet::new();
    for c in z.iter() {
        for y in h.iter() {
            if !seen.insert(amb.add(y, c)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn build_rigid(a: &GroundSet, core: PopularCore, m: u64) -> Result<RigidPart> {
    if core.p.is_empty() {
        return Err(Error::EmptyCore);
    }
    let (center, h) = popularity_center(&core.p, m)?;
    let mass = masses(a, &h)?;
    let total: u64 = mass.iter().sum();
    let n = a.len() as u64;
    let keep: Vec<usize> = (0..a.len()).filter(|&i| 2 * n * mass[i] >= total).collect();
    let w = a.subset_by_index(&keep);
    let z = disjoint_translates(&h, &w)?;
    let covered_mass = z
        .iter()
        .map(|c| a.elements().binary_search(&c).map(|i| mass[i]).unwrap_or(0))
        .sum();
    let h_sumset_size = rep_histogram(&h, &h, CompositionMode::Sum)?.support_size() as u64;
    Ok(RigidPart {
        core,
        center,
        doubling: h_sumset_size as f64 / h.len() as f64,
        h_sumset_size,
        z_times_h: (z.len() * h.len()) as u64,
        covered_mass,
        disjoint: translates_disjoint(&h, &z)?,
        h,
        w,
        z,
    })
}

/// The decomposition followed by the rigid-structure step. A `SmallEnergy`
/// certificate is returned unchanged.
pub fn rigid_structure(a: &GroundSet, delta: Exponent, eps: Exponent) -> Result<StructureCertificate> {
    let mut cert = energy_gap_decompose(a, delta, eps)?;
    if let Outcome::PopularCore(core) = &cert.outcome {
        let part = build_rigid(a, core.clone(), cert.m)?;
        cert.outcome = Outcome::RigidStructure(Box::new(part));
    }
    Ok(cert)
}

/// `(H ∔ Z) ∩ A`.
pub fn covered_part(a: &GroundSet, part: &RigidPart) -> Result<GroundSet> {
    let amb = *a.ambient();
    let mut out = Vec::new();
    for c in part.z.iter() {
        for y in part.h.iter() {
            let e = amb.add(y, c)?;
            if a.contains(&e) {
                out.push(e);
            }
        }
    }
    GroundSet::new(amb, out)
}

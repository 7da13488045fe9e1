use crate::ambient::CompositionMode;
use crate::counting::{difference_histogram, energy_k, energies};
use crate::error::Result;
use crate::set::GroundSet;
use crate::sidon::{certified_bound, extract_random, verify_multiplicity};
use crate::util::{kappa, le_power, pow_big};

use super::decompose::{check_exponents, loop_bound, masses, popular_core, Outcome, PopularCore, StructureCertificate};
use super::pipeline::{
    check_pipeline_input, isqrt_ceil, multiplicative_levels, size_floor, without_zero, Branch, CoreChoice, PipelineReport,
};
use super::rigid::{build_rigid, covered_part, translates_disjoint};

/// Collects the names of checks that fail.
struct Audit(Vec<String>);

impl Audit {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }
}

fn audit_core(a: &GroundSet, core: &PopularCore, audit: &mut Audit) -> Result<()> {
    let n = a.len() as u64;
    // P is one dyadic band of r_{A-A}.
    let hist = difference_histogram(a)?;
    let u = core.band_upper;
    audit.check(u.is_power_of_two(), "popular-core.band_upper");
    audit.check(
        core.p.iter().all(|x| {
            let r = hist.get_elem(x);
            2 * r > u && r <= u
        }),
        "popular-core.p (band)",
    );
    let mass = masses(a, &core.p)?;
    let total: u64 = mass.iter().sum();
    audit.check(total == core.total_mass, "popular-core.total_mass");
    let mut in_core = 0u64;
    let mut min = u64::MAX;
    for (x, &m) in a.iter().zip(&mass) {
        let member = core.a_prime.contains(&x);
        audit.check(member == (2 * n * m >= total), format!("popular-core.a_prime ({x})"));
        if member {
            in_core += m;
            min = min.min(m);
        }
    }
    audit.check(core.a_prime.is_subset_of(a), "popular-core.a_prime (subset)");
    audit.check(in_core == core.core_mass, "popular-core.core_mass");
    audit.check(2 * core.core_mass >= core.total_mass, "popular-core.half_mass");
    audit.check(core.a_prime.is_empty() || min == core.min_mass, "popular-core.min_mass");
    // Full recomputation, including the choice of band.
    audit.check(popular_core(a, core.l)? == *core, "popular-core (recomputed)");
    Ok(())
}

/// Recompute every statistic stored in `cert` from `a`. Returns the names of
/// the checks that failed; an empty list means the certificate is valid.
pub fn verify_certificate(a: &GroundSet, cert: &StructureCertificate) -> Result<Vec<String>> {
    let mut audit = Audit(Vec::new());
    let n = a.len();
    audit.check(cert.format_version == super::FORMAT_VERSION, "format_version");
    audit.check(cert.set_size == n, "set_size");
    audit.check(check_exponents(cert.delta, cert.eps).is_ok(), "exponents");
    if !audit.0.is_empty() || n < 4 {
        audit.check(n >= 4, "set_size (>= 4)");
        return Ok(audit.0);
    }
    // m = ⌈n^{ε/2}⌉: m^{2den} ≥ n^{num} > (m-1)^{2den}.
    let (num, den) = (cert.eps.numer(), cert.eps.denom());
    let target = pow_big(n as u64, num);
    audit.check(
        cert.m >= 1 && pow_big(cert.m, 2 * den) >= target && (cert.m == 1 || pow_big(cert.m - 1, 2 * den) < target),
        "m",
    );
    audit.check(cert.l_max == loop_bound(cert.eps), "l_max");
    audit.check(!cert.trace.is_empty() && (cert.trace.len() as u32) < cert.l_max, "trace length");

    for (i, step) in cert.trace.iter().enumerate() {
        let l = 2 + i as u32;
        let tag = |f: &str| format!("trace[{i}].{f}");
        audit.check(step.l == l, tag("l"));
        let e = energy_k(a, l, CompositionMode::Difference)?.value;
        let e_next = energy_k(a, l + 1, CompositionMode::Difference)?.value;
        audit.check(step.energy == e, tag("energy"));
        audit.check(step.energy_next == e_next, tag("energy_next"));
        audit.check(step.kappa == kappa(&e, n, l), tag("kappa"));
        let small = le_power(&e, n as u64, l as u64, cert.delta);
        audit.check(step.small == small, tag("small"));
        audit.check(step.jump == (!small && &e_next * cert.m >= &e * n), tag("jump"));
        let last = i + 1 == cert.trace.len();
        audit.check(last || (!step.small && !step.jump), tag("continued"));
    }
    let Some(last) = cert.trace.last() else { return Ok(audit.0) };
    match &cert.outcome {
        Outcome::SmallEnergy { k, energy, kappa: kp, below_threshold } => {
            if last.small {
                audit.check(*k == last.l && *energy == last.energy && *below_threshold, "small-energy (at step)");
            } else {
                audit.check(!last.jump && last.l == cert.l_max, "small-energy (loop exhausted)");
                audit.check(*k == cert.l_max + 1, "small-energy.k");
                let e = energy_k(a, *k, CompositionMode::Difference)?.value;
                audit.check(*energy == e, "small-energy.energy");
                audit.check(*below_threshold == le_power(&e, n as u64, *k as u64, cert.delta), "small-energy.below");
            }
            audit.check(*kp == kappa(energy, n, *k), "small-energy.kappa");
        }
        Outcome::PopularCore(core) => {
            audit.check(last.jump && core.l == last.l, "popular-core.l");
            audit_core(a, core, &mut audit)?;
        }
        Outcome::RigidStructure(part) => {
            audit.check(last.jump && part.core.l == last.l, "rigid.core.l");
            audit_core(a, &part.core, &mut audit)?;
            audit.check(part.h.is_subset_of(&part.core.p), "rigid.h (subset of P)");
            audit.check(part.z.is_subset_of(&part.w), "rigid.z (subset of W)");
            let disjoint = translates_disjoint(&part.h, &part.z)?;
            audit.check(disjoint && part.disjoint, "rigid.disjoint");
            let covered = covered_part(a, part)?;
            audit.check(covered.len() as u64 == part.covered_mass, "rigid.covered_mass");
            audit.check(part.z_times_h == (part.z.len() * part.h.len()) as u64, "rigid.z_times_h");
            let again = build_rigid(a, part.core.clone(), cert.m)?;
            audit.check(again == **part, "rigid (recomputed)");
        }
    }
    Ok(audit.0)
}

/// Re-derive a pipeline report from `a`: the certificate, the branch, the
/// core, the level choice, the extraction (rerun with the stored seed) and
/// the multiplicity bound on the returned subset.
pub fn verify_pipeline(a: &GroundSet, report: &PipelineReport) -> Result<Vec<String>> {
    let mut audit = Audit(Vec::new());
    check_pipeline_input(a)?;
    let n = a.len();
    let opts = report.options;
    audit.check(report.format_version == super::FORMAT_VERSION, "format_version");
    audit.check(report.set_size == n, "set_size");
    let ex = &report.extraction;
    let (mode, k) = (ex.mode, ex.k);
    match report.branch {
        Branch::Degenerate => {
            audit.check(n < 4 && report.certificate.is_none(), "degenerate");
            audit.check(report.core == *a, "core");
        }
        Branch::AdditiveSmallEnergy | Branch::MultiplicativeAfterStructure => {
            let Some(cert) = &report.certificate else {
                audit.check(false, "certificate (missing)");
                return Ok(audit.0);
            };
            for f in verify_certificate(a, cert)? {
                audit.check(false, format!("certificate.{f}"));
            }
            audit.check(cert.delta == opts.delta && cert.eps == opts.eps, "certificate.parameters");
            match (&cert.outcome, report.branch, opts.core) {
                (Outcome::SmallEnergy { k: ck, .. }, Branch::AdditiveSmallEnergy, _) => {
                    audit.check(report.core == *a, "core");
                    audit.check(mode == CompositionMode::Difference && k == *ck, "extraction.mode");
                }
                (Outcome::PopularCore(core), Branch::MultiplicativeAfterStructure, CoreChoice::PopularCore) => {
                    let (c, z) = without_zero(&core.a_prime);
                    audit.check(report.core == c && report.removed_zero == z, "core");
                }
                (Outcome::RigidStructure(part), Branch::MultiplicativeAfterStructure, CoreChoice::Rigid) => {
                    let (c, z) = without_zero(&covered_part(a, part)?);
                    audit.check(report.core == c && report.removed_zero == z, "core");
                }
                _ => audit.check(false, "branch"),
            }
            if report.branch == Branch::MultiplicativeAfterStructure {
                let (levels, l) = multiplicative_levels(&report.core)?;
                audit.check(levels == report.multiplicative_levels, "multiplicative_levels");
                audit.check(mode == CompositionMode::Product && k == l, "extraction.level");
            }
        }
    }
    audit.check(ex.subset.is_subset_of(&report.core), "subset (inside core)");
    audit.check(ex.certified_bound == certified_bound(mode, k), "certified_bound");
    audit.check(
        ex.verified && verify_multiplicity(&ex.subset, ex.certified_bound.max(1), mode)?.is_none(),
        "subset (multiplicity bound)",
    );
    let trials = if report.branch == Branch::Degenerate { 1 } else { opts.trials };
    audit.check(
        extract_random(&report.core, k, mode, opts.seed, trials)? == *ex,
        "extraction (rerun)",
    );
    audit.check(report.subset_size == ex.subset.len(), "subset_size");
    let floor = match report.branch {
        Branch::Degenerate => 0.0,
        _ => size_floor(report.core.len(), k, &energies(&report.core, mode, &[k])?[0]),
    };
    audit.check(report.size_floor == floor, "size_floor");
    audit.check(report.sqrt_target == isqrt_ceil(n as u64), "sqrt_target");
    audit.check(report.meets_sqrt_target == (report.subset_size as u64 >= report.sqrt_target), "meets_sqrt_target");
    Ok(audit.0)
}

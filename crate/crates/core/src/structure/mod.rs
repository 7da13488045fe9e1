//! Energy-gap decomposition, rigid structure and the sum–product pipeline.
//!
//! Every certificate and report stores enough to be re-derived from the
//! input set; [`verify_certificate`] and [`verify_pipeline`] do that.

mod decompose;
mod pipeline;
mod rigid;
mod verify;

pub use decompose::{
    energy_gap_decompose, popular_symmetry_set, IterationStep, Outcome, PopularCore, RigidPart, StructureCertificate,
    FORMAT_VERSION,
};
pub use pipeline::{
    sum_product_pipeline, Branch, CoreChoice, MultiplicativeLevel, PipelineOptions, PipelineReport, MULT_LEVELS,
    SIZE_FLOOR_FACTOR,
};
pub use rigid::{covered_part, rigid_structure};
pub use verify::{verify_certificate, verify_pipeline};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::GroundSet;
    use crate::util::Exponent;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ex(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn random_set_has_small_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut v = Vec::new();
        while v.len() < 64 {
            let x = rng.random_range(0..=1_000_000i64);
            if !v.contains(&x) {
                v.push(x);
            }
        }
        let a = GroundSet::integers(v);
        let cert = energy_gap_decompose(&a, ex("0.5"), ex("0.25")).unwrap();
        match &cert.outcome {
            Outcome::SmallEnergy { k, below_threshold, .. } => {
                assert_eq!(*k, 2);
                assert!(below_threshold);
            }
            o => panic!("{o:?}"),
        }
        assert!(verify_certificate(&a, &cert).unwrap().is_empty());
    }

    #[test]
    fn progression_has_popular_core_and_rigid_part() {
        let a = GroundSet::interval(0, 63);
        let cert = energy_gap_decompose(&a, ex("0.5"), ex("0.25")).unwrap();
        let Outcome::PopularCore(core) = &cert.outcome else { panic!("{:?}", cert.outcome) };
        assert!(!core.a_prime.is_empty());
        assert!(2 * core.core_mass >= core.total_mass);
        assert!(verify_certificate(&a, &cert).unwrap().is_empty());

        let rigid = rigid_structure(&a, ex("0.5"), ex("0.25")).unwrap();
        let Outcome::RigidStructure(part) = &rigid.outcome else { panic!() };
        assert!(part.doubling < 4.0, "{}", part.doubling);
        assert!(2 * part.covered_mass >= a.len() as u64);
        assert!(part.disjoint);
        assert!(verify_certificate(&a, &rigid).unwrap().is_empty());
    }

    #[test]
    fn tampering_is_detected() {
        let a = GroundSet::interval(0, 31);
        let mut cert = rigid_structure(&a, ex("1/4"), ex("1/16")).unwrap();
        if let Outcome::RigidStructure(part) = &mut cert.outcome {
            part.covered_mass += 1;
        }
        assert!(!verify_certificate(&a, &cert).unwrap().is_empty());
        let mut cert = energy_gap_decompose(&a, ex("1/4"), ex("1/16")).unwrap();
        cert.trace[0].energy += 1u32;
        assert!(!verify_certificate(&a, &cert).unwrap().is_empty());
    }

    #[test]
    fn sidon_set_passes_through_rigid() {
        let a = crate::constructions::sidon_base(5000).unwrap();
        let cert = rigid_structure(&a, ex("1/2"), ex("1/4")).unwrap();
        assert!(matches!(cert.outcome, Outcome::SmallEnergy { k: 2, .. }));
    }

    #[test]
    fn tiny_sets() {
        let a = GroundSet::integers([0, 1, 2, 3]);
        let cert = energy_gap_decompose(&a, ex("1/4"), ex("1/16")).unwrap();
        assert!(verify_certificate(&a, &cert).unwrap().is_empty());
        assert!(energy_gap_decompose(&GroundSet::integers([0, 1, 2]), ex("1/4"), ex("1/16")).is_err());
        let one = GroundSet::integers([1]);
        let r = sum_product_pipeline(&one, PipelineOptions::default()).unwrap();
        assert_eq!(r.branch, Branch::Degenerate);
        assert_eq!(r.extraction.subset, one);
        assert!(verify_pipeline(&one, &r).unwrap().is_empty());
    }

    #[test]
    fn symmetry_set_examples() {
        let a = GroundSet::interval(0, 9);
        let t = popular_symmetry_set(&a, 8).unwrap();
        assert_eq!(t.ints().unwrap(), vec![-2, -1, 1, 2]);
        assert!(popular_symmetry_set(&a, 11).unwrap().is_empty());
        assert!(popular_symmetry_set(&GroundSet::integers([0, 1, 3, 7]), 2).unwrap().is_empty());
    }

    #[test]
    fn pipeline_branches() {
        let powers = GroundSet::integers((0..40).map(|i| 1i64 << i));
        let r = sum_product_pipeline(&powers, PipelineOptions { seed: 1, ..Default::default() }).unwrap();
        assert_eq!(r.branch, Branch::AdditiveSmallEnergy);
        assert!(r.subset_size >= 36);
        assert!(verify_pipeline(&powers, &r).unwrap().is_empty());

        let a = GroundSet::interval(1, 256);
        let r = sum_product_pipeline(&a, PipelineOptions { seed: 7, trials: 4, ..Default::default() }).unwrap();
        assert_eq!(r.branch, Branch::MultiplicativeAfterStructure);
        assert!(verify_pipeline(&a, &r).unwrap().is_empty());
        let r2 = sum_product_pipeline(
            &a,
            PipelineOptions { seed: 7, trials: 4, core: CoreChoice::PopularCore, ..Default::default() },
        )
        .unwrap();
        assert!(verify_pipeline(&a, &r2).unwrap().is_empty());
    }
}

use mcb_core::bounds::{
    thm1_bound, thm2_bound, thm2_squares, thm3_bound, thm4_bound, BoundOptions, CoefficientMode, Reduction,
    SubEvaluator,
};
use mcb_core::pure_concurrence::{concurrence_pure, homogeneous_concurrence_pure};
use mcb_core::qstate::random::{level_permutation, random_density_rank, random_pure, rng_from_seed};
use mcb_core::qstate::{DensityMatrix, DimensionVector, Partition};
use mcb_core::wootters::concurrence_of_matrix;
use proptest::prelude::*;

fn dims(d: &[usize]) -> DimensionVector {
    DimensionVector::new(d.to_vec()).unwrap()
}

fn small_dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=4)
}

fn pure_exact() -> BoundOptions {
    BoundOptions { sub_evaluator: SubEvaluator::PureExact, ..BoundOptions::default() }
}

fn relabel(rho: &DensityMatrix, seed: u64) -> DensityMatrix {
    let mut rng = rng_from_seed(seed);
    (0..rho.parties()).fold(rho.clone(), |acc, p| {
        acc.apply_local_unitary(p, &level_permutation(rho.dims().dim(p), &mut rng)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partial_trace_composes(d in small_dims(), seed in any::<u64>()) {
        let rho = random_density_rank(&dims(&d), 3, seed).unwrap();
        let n = d.len();
        let keep: Vec<usize> = (0..n - 1).collect();
        let twice = rho.partial_trace(&keep).unwrap().partial_trace(&[0]).unwrap();
        let once = rho.partial_trace(&[0]).unwrap();
        prop_assert!(twice.matrix().max_abs_diff(once.matrix()) < 1e-12);
        prop_assert!((rho.partial_trace(&keep).unwrap().trace() - rho.trace()).abs() < 1e-12);
    }

    #[test]
    fn pure_and_density_reductions_agree(d in small_dims(), seed in any::<u64>()) {
        let phi = random_pure(&dims(&d), seed);
        let keep = [0, d.len() - 1];
        let via_pure = phi.reduced(&keep).unwrap();
        let via_rho = phi.to_density().partial_trace(&keep).unwrap();
        prop_assert!(via_pure.max_abs_diff(via_rho.matrix()) < 1e-12);
    }

    #[test]
    fn merging_commutes_with_density(seed in any::<u64>()) {
        let phi = random_pure(&dims(&[2, 3, 2, 2]), seed);
        let partition = Partition::parse("13|2|4", 4).unwrap();
        let a = phi.merge_parties(&partition).unwrap().to_density();
        let b = phi.to_density().merge_parties(&partition).unwrap();
        prop_assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14);
        prop_assert_eq!(a.dims().dims(), &[4, 3, 2]);
    }

    #[test]
    fn wootters_is_homogeneous(seed in any::<u64>(), c in 0.01f64..1.0) {
        let rho = random_density_rank(&dims(&[2, 2]), 1 + (seed % 4) as usize, seed).unwrap();
        let full = concurrence_of_matrix(rho.matrix()).unwrap();
        let scaled = concurrence_of_matrix(&rho.matrix().scale(c)).unwrap();
        prop_assert!((scaled - c * full).abs() < 1e-10);
    }

    #[test]
    fn pure_concurrence_is_homogeneous(d in small_dims(), seed in any::<u64>(), c in 0.01f64..1.0) {
        let phi = random_pure(&dims(&d), seed);
        let exact = concurrence_pure(&phi).unwrap().value;
        let scaled = homogeneous_concurrence_pure(&phi.scaled(c.sqrt())).unwrap().value;
        prop_assert!((scaled - c * exact).abs() < 1e-10);
    }

    #[test]
    fn bounds_are_sound_on_pure_states(seed in any::<u64>()) {
        let o = BoundOptions::default();
        for d in [vec![2, 2, 2], vec![2, 3, 3], vec![3, 3, 3]] {
            let phi = random_pure(&dims(&d), seed);
            let exact = concurrence_pure(&phi).unwrap().value;
            let b = thm1_bound(&phi.to_density(), &o).unwrap().bound;
            prop_assert!(b >= 0.0 && b <= exact + 1e-8, "{:?}: {} > {}", d, b, exact);
        }
        for d in [vec![2, 2, 2, 2], vec![2, 2, 2, 3]] {
            let phi = random_pure(&dims(&d), seed);
            let rho = phi.to_density();
            let exact = concurrence_pure(&phi).unwrap().value;
            for mode in [CoefficientMode::Conservative, CoefficientMode::Paper] {
                let b = thm2_bound(&rho, &BoundOptions { coefficient_mode: mode, ..o }).unwrap().bound;
                prop_assert!(b <= exact + 1e-8);
            }
            for sub in [SubEvaluator::PureExact, SubEvaluator::Thm2, SubEvaluator::Zero] {
                let b = thm4_bound(&rho, 2, &BoundOptions { sub_evaluator: sub, ..o }).unwrap().bound;
                prop_assert!(b <= exact + 1e-8);
            }
        }
        let phi = random_pure(&dims(&[2, 2, 2, 2, 2]), seed);
        let b = thm3_bound(&phi.to_density(), &o).unwrap().bound;
        prop_assert!(b <= concurrence_pure(&phi).unwrap().value + 1e-8);
    }

    #[test]
    fn conservative_mode_is_smaller(seed in any::<u64>()) {
        let rho = random_density_rank(&dims(&[2, 2, 3, 2]), 2, seed).unwrap();
        let sq = thm2_squares(&rho, Reduction::Deterministic).unwrap();
        prop_assert!(sq.conservative <= sq.paper);
    }

    #[test]
    fn party_relabeling(seed in any::<u64>()) {
        let o = BoundOptions::default();
        let rho = random_density_rank(&dims(&[2, 3, 3]), 2, seed).unwrap();
        let base = thm1_bound(&rho, &o).unwrap().bound;
        let moved = thm1_bound(&rho.permute_parties(&[2, 0, 1]).unwrap(), &o).unwrap().bound;
        prop_assert!((base - moved).abs() < 1e-10);

        let rho = random_density_rank(&dims(&[2, 2, 2, 2, 2]), 2, seed).unwrap();
        let base = thm3_bound(&rho, &o).unwrap().bound;
        let moved = thm3_bound(&rho.permute_parties(&[4, 2, 0, 1, 3]).unwrap(), &o).unwrap().bound;
        prop_assert!((base - moved).abs() < 1e-10);

        let rho = random_density_rank(&dims(&[2, 2, 2, 3]), 2, seed).unwrap();
        let base = thm4_bound(&rho, 2, &o).unwrap().bound;
        let moved = thm4_bound(&rho.permute_parties(&[3, 1, 0, 2]).unwrap(), 2, &o).unwrap().bound;
        prop_assert!((base - moved).abs() < 1e-10);
    }

    #[test]
    fn level_relabeling(seed in any::<u64>()) {
        let o = BoundOptions::default();
        let rho = random_density_rank(&dims(&[3, 2, 3]), 3, seed).unwrap();
        let moved = relabel(&rho, seed ^ 1);
        prop_assert!((thm1_bound(&rho, &o).unwrap().bound - thm1_bound(&moved, &o).unwrap().bound).abs() < 1e-10);

        let phi = random_pure(&dims(&[2, 2, 2, 3]), seed).to_density();
        let moved = relabel(&phi, seed ^ 2);
        let a = thm4_bound(&phi, 2, &pure_exact()).unwrap().bound;
        let b = thm4_bound(&moved, 2, &pure_exact()).unwrap().bound;
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn reductions_agree(seed in any::<u64>()) {
        let rho = random_density_rank(&dims(&[3, 3, 3]), 2, seed).unwrap();
        let det = thm1_bound(&rho, &BoundOptions::default()).unwrap();
        let again = thm1_bound(&rho, &BoundOptions::default()).unwrap();
        prop_assert_eq!(det.bound.to_bits(), again.bound.to_bits());
        let fast = thm1_bound(&rho, &BoundOptions { reduction: Reduction::Fast, ..BoundOptions::default() }).unwrap();
        prop_assert!((det.bound - fast.bound).abs() < 1e-12);
    }
}

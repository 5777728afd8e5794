mod common;

use coadea::lp::{enumerate_vertices_oracle, solve, LinearProgram, LpStatus};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn agree(a: &coadea::lp::LpSolution, b: &coadea::lp::LpSolution, tol: f64) -> Result<(), String> {
    if a.status != b.status {
        return Err(format!("status {:?} vs {:?}", a.status, b.status));
    }
    if a.status == LpStatus::Optimal && (a.objective_value - b.objective_value).abs() > tol {
        return Err(format!("value {} vs {}", a.objective_value, b.objective_value));
    }
    Ok(())
}

fn lp_from_seed(seed: u64) -> LinearProgram {
    common::random_lp(&mut ChaCha8Rng::seed_from_u64(seed), 6, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_matches_vertex_enumeration(seed in any::<u64>()) {
        let lp = lp_from_seed(seed);
        let s = solve(&lp).unwrap();
        let o = enumerate_vertices_oracle(&lp).unwrap();
        prop_assert!(agree(&s, &o, 1e-8).is_ok(), "{:?}: {:?}", lp, agree(&s, &o, 1e-8));
        if s.is_optimal() {
            prop_assert!(lp.max_scaled_violation(&s.primal) <= 1e-7);
        }
    }

    #[test]
    fn row_scaling_is_invariant(seed in any::<u64>(), row in 0usize..8, c in 0.01f64..100.0) {
        let lp = lp_from_seed(seed);
        let mut scaled = lp.clone();
        let r = row % lp.num_rows();
        for a in &mut scaled.matrix[r] {
            *a *= c;
        }
        scaled.rhs[r] *= c;
        let a = solve(&lp).unwrap();
        let b = solve(&scaled).unwrap();
        prop_assert!(agree(&a, &b, 1e-8).is_ok(), "{:?}", agree(&a, &b, 1e-8));
    }

    #[test]
    fn repeated_solves_are_bit_identical(seed in any::<u64>()) {
        let lp = lp_from_seed(seed);
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.objective_value.to_bits(), b.objective_value.to_bits());
        prop_assert_eq!(
            a.primal.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.primal.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn shifted_lower_bounds_translate_the_optimum(seed in any::<u64>(), shift in -3i32..=3) {
        // x = y + s with y >= 0 is the same program with b -> b - A s.
        let lp = lp_from_seed(seed);
        let n = lp.num_vars();
        let s = vec![shift as f64; n];
        let mut moved = lp.clone().with_lower_bounds(s.clone());
        for (row, b) in moved.matrix.iter().zip(moved.rhs.iter_mut()) {
            *b += row.iter().zip(&s).map(|(a, v)| a * v).sum::<f64>();
        }
        let a = solve(&lp).unwrap();
        let b = solve(&moved).unwrap();
        prop_assert_eq!(a.status, b.status);
        if a.is_optimal() {
            let offset: f64 = lp.objective.iter().zip(&s).map(|(c, v)| c * v).sum();
            prop_assert!((a.objective_value + offset - b.objective_value).abs() <= 1e-8);
        }
    }
}

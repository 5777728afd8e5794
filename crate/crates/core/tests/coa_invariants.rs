use coadea::coa::{CoaConfig, CuckooState};
use coadea::pareto::{dominates, hypervolume_2d, hypervolume_reference_point, reference_front};
use coadea::problem::{builtin, BUILTIN_IDS};
use proptest::prelude::*;

fn config(seed: u64, iters: usize) -> CoaConfig {
    CoaConfig {
        seed,
        max_iterations: iters,
        ..CoaConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn population_stays_in_bounds_feasible_and_capped(seed in any::<u64>(), id in 1u32..=4) {
        let p = builtin(id).unwrap();
        let cfg = config(seed, 10);
        let mut state = CuckooState::new(&p, &cfg).unwrap();
        for _ in 0..cfg.max_iterations {
            state.step().unwrap();
            prop_assert!(state.habitats().len() <= cfg.max_population);
            for h in state.habitats() {
                prop_assert!(p.in_bounds(&h.x));
                prop_assert!(p.is_feasible(&h.x).feasible);
            }
            for a in state.archive().points() {
                prop_assert!(p.is_feasible(&a.x).violation.iter().all(|v| *v <= 1e-9));
            }
        }
        let result = state.finish();
        let f = result.frontier_objectives();
        prop_assert!(!f.is_empty());
        for a in &f {
            for b in &f {
                prop_assert!(!dominates(a, b).unwrap());
            }
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for id in BUILTIN_IDS {
        let p = builtin(id).unwrap();
        let a = coadea::run(&p, &config(11, 12)).unwrap();
        let b = coadea::run(&p, &config(11, 12)).unwrap();
        assert_eq!(a, b);
        let c = coadea::run(&p, &config(12, 12)).unwrap();
        assert_eq!(c.seed, 12);
    }
}

#[test]
fn archive_hypervolume_never_decreases() {
    for id in BUILTIN_IDS {
        let p = builtin(id).unwrap();
        let hv_ref = hypervolume_reference_point(&reference_front(&p, 50).unwrap(), 0.1);
        for seed in 0..4 {
            let cfg = CoaConfig {
                hv_reference: Some(hv_ref),
                ..config(seed, 20)
            };
            let r = coadea::run(&p, &cfg).unwrap();
            let hv: Vec<f64> = r.history.iter().map(|h| h.archive_hypervolume.unwrap()).collect();
            assert!(hv.windows(2).all(|w| w[1] >= w[0]), "problem {id} seed {seed}: {hv:?}");
            let final_hv = hypervolume_2d(&r.frontier_objectives(), hv_ref);
            assert_eq!(final_hv, *hv.last().unwrap());
        }
    }
}

#[test]
fn final_iteration_only_reports_last_population() {
    let p = builtin(1).unwrap();
    let cfg = CoaConfig {
        final_iteration_only: true,
        ..config(3, 10)
    };
    let r = coadea::run(&p, &cfg).unwrap();
    assert!(!r.frontier.is_empty());
    assert!(r.frontier.iter().all(|a| a.iteration == cfg.max_iterations));
}

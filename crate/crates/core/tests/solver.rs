mod common;

use rand::Rng;
use rmc_core::exact::{exact_solve, DEFAULT_MAX_ENUM};
use rmc_core::{
    greedy_fixed_radius, search_radius, verify_solution, Matroid, MetricInstance, RadoSystem,
    UniformMatroid,
};

#[test]
fn three_points_on_a_line_end_to_end() {
    let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
    let inst = MetricInstance::from_euclidean(&pts, vec![1.0; 3], 3.0).unwrap();
    let base = UniformMatroid::new(3, 1);
    let exact = exact_solve(&inst, &base, DEFAULT_MAX_ENUM).unwrap();
    assert_eq!(exact.opt_radius, Some(1.0));
    let sol = search_radius(&inst, &base).unwrap();
    assert_eq!((sol.r, sol.radius), (1.0, 5.0));
}

#[test]
fn approximation_and_coverage_dominance_on_random_instances() {
    let mut rng = common::rng(51);
    for trial in 0..120 {
        let n = rng.gen_range(1..=10);
        let inst = common::random_instance(&mut rng, n);
        let base = common::random_matroid(&mut rng, trial, n, 4);
        let exact = exact_solve(&inst, &base, DEFAULT_MAX_ENUM).unwrap();
        let Some(opt) = exact.opt_radius else {
            assert!(search_radius(&inst, &base).is_err());
            continue;
        };
        let sol = search_radius(&inst, &base).unwrap();
        assert!(opt <= sol.radius && sol.radius <= 5.0 * opt, "opt {opt} got {}", sol.radius);
        assert!(verify_solution(&inst, &base, &sol).passed());

        for row in exact.coverage_table.iter().filter(|row| row.r >= opt) {
            let run = greedy_fixed_radius(&inst, &base, row.r).unwrap();
            let picked_cover = inst.ball_union_weight(&run.centers, 3.0 * row.r).unwrap();
            assert!(picked_cover >= row.best_weight, "r {} {picked_cover} < {}", row.r, row.best_weight);
            let reps = run.representative_set();
            let mask_t = inst.ball_union_mask(&run.centers, 3.0 * row.r).unwrap();
            let mask_r = inst.ball_union_mask(&reps, 5.0 * row.r).unwrap();
            assert!(mask_t.iter().zip(&mask_r).all(|(&t, &r)| !t || r));
            assert!(run.to_solution(&inst).feasible);
        }
    }
}

/// Replays the trace and checks each pick against every feasible alternative.
#[test]
fn each_pick_maximizes_its_step() {
    let mut rng = common::rng(52);
    for trial in 0..60 {
        let n = rng.gen_range(1..=9);
        let inst = common::random_instance(&mut rng, n);
        let base = common::random_matroid(&mut rng, trial, n, 4);
        let r = rng.gen_range(0..6) as f64;
        let run = greedy_fixed_radius(&inst, &base, r).unwrap();
        let sys = RadoSystem::build_relax(&inst, &base, r).unwrap();

        assert_eq!(run.centers.len(), base.rank());
        assert!(sys.is_rado_independent(&run.centers).unwrap());
        let mut uncovered = vec![true; n];
        for (i, step) in run.trace.iter().enumerate() {
            let gain = |t: usize| -> f64 {
                (0..n).filter(|&v| uncovered[v] && inst.dist(t, v) <= r).map(|v| inst.weight(v)).sum()
            };
            assert_eq!(gain(step.center), step.marginal_weight);
            let prefix = &run.centers[..i];
            for t in (0..n).filter(|t| !prefix.contains(t)) {
                let mut probe = prefix.to_vec();
                probe.push(t);
                if sys.is_rado_independent(&probe).unwrap() {
                    let g = gain(t);
                    assert!(step.marginal_weight >= g);
                    if g == step.marginal_weight {
                        assert!(step.center <= t, "tie must go to the smaller index: trial {trial} step {i} {step:?} t {t} r {r} base {base:?} centers {:?}", run.centers);
                    }
                }
            }
            assert!(step.probes <= n);
            for (v, u) in uncovered.iter_mut().enumerate() {
                if inst.dist(step.center, v) <= 3.0 * r {
                    *u = false;
                }
            }
            assert_eq!(step.uncovered_after, uncovered.iter().filter(|&&u| u).count());
        }
    }
}

#[test]
fn understated_radius_fails_the_coverage_check() {
    let mut rng = common::rng(53);
    let mut exercised = 0;
    for trial in 0..60 {
        let n = rng.gen_range(2..=9);
        let inst = common::random_instance(&mut rng, n);
        let base = common::random_matroid(&mut rng, trial, n, 3);
        let Ok(sol) = search_radius(&inst, &base) else { continue };
        // smallest distance-grid radius at which these centers still reach m
        let radii = inst.candidate_radii();
        let needed = radii
            .values()
            .iter()
            .copied()
            .find(|&r| inst.ball_union_weight(&sol.centers, r).unwrap() >= inst.coverage_target())
            .unwrap();
        let Some(smaller) = radii.predecessor(needed) else { continue };
        let mut corrupted = sol.clone();
        corrupted.radius = smaller;
        let report = verify_solution(&inst, &base, &corrupted);
        assert!(!report.check("coverage_target").unwrap().passed);
        assert!(!report.passed());
        exercised += 1;
    }
    assert!(exercised > 10);
}

#[test]
fn search_is_deterministic() {
    let mut rng = common::rng(54);
    for trial in 0..20 {
        let n = rng.gen_range(1..=9);
        let inst = common::random_instance(&mut rng, n);
        let base = common::random_matroid(&mut rng, trial, n, 4);
        assert_eq!(search_radius(&inst, &base), search_radius(&inst, &base));
    }
}

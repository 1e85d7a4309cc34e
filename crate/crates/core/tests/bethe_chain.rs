//! Solving, pole-freeness and particle-hole steps on the sl(1|2) family.

use num_complex::Complex64;
use proptest::prelude::*;

use superbethe::bethe::{
    bae_residual, cancellation_pairs, pole_freeness_check, shape_pole_residue, solve, BAESolution,
    BAESystem, SolveConfig,
};
use superbethe::diagrams::SkewShape;
use superbethe::duality::{grading_path_transform, particle_hole, root_set_distance};
use superbethe::superalgebra::Grading;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn system(gr: &str) -> BAESystem {
    let counts = if gr == "--+" { vec![2, 0] } else { vec![2, 1] };
    BAESystem::new(
        Grading::parse(gr).unwrap(),
        counts,
        [0.1, -0.3, 0.25, 0.05].into_iter().map(c).collect(),
    )
    .unwrap()
}

fn solutions(sys: &BAESystem) -> Vec<BAESolution> {
    solve(sys, &SolveConfig::default())
        .unwrap()
        .solutions
        .into_iter()
        .filter(|s| s.collided.is_empty())
        .collect()
}

#[test]
fn skew_shapes_are_pole_free_on_shell() {
    let sys = system("-+-");
    for sol in solutions(&sys) {
        let d = sol.data(&sys).unwrap();
        for text in ["2,1", "2,2/1", "3,1/1"] {
            let sh = SkewShape::parse(text).unwrap();
            assert!(shape_pole_residue(&d, &sh).unwrap() < 1e-8, "{text}");
            let rep = cancellation_pairs(&d, &sh, 1).unwrap();
            assert!(rep.groups.iter().all(|g| g.residue.unwrap_or(0.0) < 1e-8));
        }
    }
}

#[test]
fn solutions_agree_across_the_chain() {
    let start = system("+--");
    let sols = solutions(&start);
    let target = solutions(&system("--+"));
    for sol in &sols {
        let path = grading_path_transform(&start, sol, &[1, 2], 1e-6).unwrap();
        // the transformed roots solve the reflected system found independently
        assert!(target.iter().any(|t| {
            t.roots
                .iter()
                .zip(&path.solution.roots)
                .all(|(a, b)| root_set_distance(a, b) < 1e-7)
        }));
        let d = path.solution.data(&path.system).unwrap();
        for a in 1..=3 {
            assert!(pole_freeness_check(&d, a).unwrap() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn residual_ignores_root_order(x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0) {
        let sys = system("+--");
        let a = bae_residual(&sys, &[vec![c(x), c(y)], vec![c(z)]]);
        let b = bae_residual(&sys, &[vec![c(y), c(x)], vec![c(z)]]);
        if let (Ok(a), Ok(b)) = (a, b) {
            let m = |v: &[Complex64]| v.iter().map(|w| w.norm()).fold(0.0, f64::max);
            prop_assert!((m(&a) - m(&b)).abs() < 1e-12);
        }
    }

    #[test]
    fn perturbation_breaks_the_equations(eps in 1e-4f64..1e-2, k in 0usize..3) {
        let sys = system("-+-");
        let sol = &solutions(&sys)[0];
        let mut roots = sol.roots.clone();
        let (color, idx) = [(0, 0), (0, 1), (1, 0)][k];
        roots[color][idx] += eps;
        let r = bae_residual(&sys, &roots).unwrap();
        prop_assert!(r.iter().any(|w| w.norm() > 1e-7));
    }
}

#[test]
fn double_step_restores_roots() {
    for gr in ["+--", "-+-"] {
        let sys = system(gr);
        for sol in solutions(&sys) {
            for b in sys.grading.odd_roots() {
                let once = particle_hole(&sys, &sol, b, 1e-6).unwrap();
                let twice = particle_hole(&once.system, &once.solution, b, 1e-6).unwrap();
                assert_eq!(twice.system.grading, sys.grading);
                assert!(root_set_distance(&twice.solution.roots[b - 1], &sol.roots[b - 1]) < 1e-8);
            }
        }
    }
}

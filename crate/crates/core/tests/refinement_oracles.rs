//! Structure-aware refinement checked against dense and brute-force oracles.

use lime_core::refine::{
    assemble_system, compute_gradients, compute_weights, refine_with, solve_system,
    total_variation, SparseSystem, WeightMaps, Weighting,
};
use lime_core::{EnhanceParams, GrayMap, ValueRange};
use lime_oracle::{
    adjoint_differences, brute_force_weights, finite_difference_gradient, max_abs_diff, Problem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_map(rng: &mut ChaCha8Rng, h: usize, w: usize) -> GrayMap {
    GrayMap::from_fn(h, w, ValueRange::UNIT, |_, _| rng.random()).unwrap()
}

fn build(t: &GrayMap, params: &EnhanceParams, weighting: Weighting) -> (SparseSystem, Problem) {
    let grads = compute_gradients(t);
    let weights = match weighting {
        Weighting::StructureAware => compute_weights(&grads, params),
        Weighting::Uniform => WeightMaps::uniform(t.height(), t.width()),
    };
    let system = assemble_system(t, &weights, &grads, params).unwrap();
    let problem = Problem {
        h: t.height(),
        w: t.width(),
        t_hat: t.values().to_vec(),
        w_h: weights.w_h.values().to_vec(),
        w_v: weights.w_v.values().to_vec(),
        alpha: params.alpha,
        epsilon: params.epsilon,
    };
    (system, problem)
}

#[test]
fn weights_match_literal_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let params = EnhanceParams::default();
    for (h, w) in [(8, 8), (5, 11), (12, 3), (1, 9)] {
        let t = random_map(&mut rng, h, w);
        let wts = compute_weights(&compute_gradients(&t), &params);
        let (bh, bv) = brute_force_weights(
            t.values(),
            h,
            w,
            params.sigma,
            params.kernel_radius,
            params.epsilon,
        );
        // weights reach ~1/ε, so compare relative to magnitude
        for (got, want) in wts
            .w_h
            .values()
            .iter()
            .zip(&bh)
            .chain(wts.w_v.values().iter().zip(&bv))
        {
            assert!(
                (got - want).abs() <= 1e-12 * want.max(1.0),
                "{got} vs {want}"
            );
        }
    }
}

#[test]
fn assembled_matrix_equals_dense_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (h, w) in [(3, 3), (4, 6), (7, 2)] {
        let t = random_map(&mut rng, h, w);
        let params = EnhanceParams::default().with_alpha(0.15);
        let (sys, problem) = build(&t, &params, Weighting::StructureAware);
        let dense = problem.dense_matrix();
        let ours = sys.to_dense();
        let n = h * w;
        for r in 0..n {
            for c in 0..n {
                let (a, b) = (ours[r * n + c], dense[(r, c)]);
                assert!(
                    (a - b).abs() <= 1e-9 * b.abs().max(1.0),
                    "({r},{c}) {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn objective_gradient_is_twice_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t = random_map(&mut rng, 3, 3);
    let params = EnhanceParams::default();
    let (sys, problem) = build(&t, &params, Weighting::StructureAware);
    for _ in 0..10 {
        let x: Vec<f64> = (0..9).map(|_| rng.random()).collect();
        let fd = finite_difference_gradient(|v| problem.objective(v), &x, 1e-6);
        let ax = sys.mul(&x);
        let analytic: Vec<f64> = ax
            .iter()
            .zip(&problem.t_hat)
            .map(|(a, b)| 2.0 * (a - b))
            .collect();
        let scale = analytic.iter().map(|v| v * v).sum::<f64>().sqrt();
        let err = fd
            .iter()
            .zip(&analytic)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-5 * scale, "relative error {}", err / scale);
        // objective via the system agrees with the literal one
        let (a, b) = (sys.objective(&x), problem.objective(&x));
        assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
    }
}

#[test]
fn solver_matches_dense_cholesky() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for weighting in [Weighting::StructureAware, Weighting::Uniform] {
        for _ in 0..10 {
            let (h, w) = (rng.random_range(1..=12), rng.random_range(1..=12));
            let t = random_map(&mut rng, h, w);
            let params = EnhanceParams::default().with_alpha(0.5);
            let (sys, problem) = build(&t, &params, weighting);
            let ours = solve_system(&sys, &params).unwrap();
            assert!(ours.residual <= params.solver_tol);
            let diff = max_abs_diff(&ours.values, &problem.dense_solve());
            assert!(diff <= 1e-6, "{h}x{w} {weighting:?}: {diff}");
        }
    }
}

#[test]
fn refinement_decreases_the_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let t = random_map(&mut rng, 16, 16);
        let params = EnhanceParams::default();
        let (sys, problem) = build(&t, &params, Weighting::StructureAware);
        let sol = solve_system(&sys, &params).unwrap();
        assert!(problem.objective(&sol.values) <= problem.objective(&problem.t_hat));
    }
}

#[test]
fn difference_operators_are_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (h, w) = (6, 7);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for _ in 0..20 {
        let u = random_map(&mut rng, h, w);
        let v: Vec<f64> = (0..h * w).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g = compute_gradients(&u);
        let (ah, av) = adjoint_differences(&v, h, w);
        for (du, adj) in [(g.gh.values(), &ah), (g.gv.values(), &av)] {
            let (lhs, rhs) = (dot(du, &v), dot(u.values(), adj));
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1.0));
        }
    }
}

#[test]
fn tv_shrinks_as_alpha_grows() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let t = random_map(&mut rng, 16, 16);
        let mut last = f64::INFINITY;
        for alpha in [0.0, 0.05, 0.15, 0.5] {
            let params = EnhanceParams::default().with_alpha(alpha);
            let r = refine_with(&t, &params, Weighting::StructureAware).unwrap();
            let tv = total_variation(&r.map);
            assert!(tv <= last, "alpha {alpha}: {tv} > {last}");
            last = tv;
        }
    }
}

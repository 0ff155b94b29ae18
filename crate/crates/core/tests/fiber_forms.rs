use bilap_core::fiber::{assemble_fiber, assemble_fiber_expanded, fiber_form_value, FiberParams};
use bilap_core::numerics::quadrature::adaptive;
use bilap_core::numerics::{build_mesh, factor_inertia, DEFAULT_ZERO_TOL};
use bilap_core::reference::exp_integral_e1;
use bilap_core::HermiteProfile;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mesh_for(radius: f64, length: f64) -> bilap_core::numerics::TruncatedMesh {
    let n = ((40.0 * length).ceil() as usize).max(4);
    build_mesh(radius, length, n, 6).unwrap()
}

/// Random profile: smooth decaying shape plus nodal noise.
fn random_profile(rng: &mut ChaCha8Rng, radius: f64) -> HermiteProfile {
    let mesh = mesh_for(radius, 4.0);
    let k: f64 = rng.gen_range(0.3..3.0);
    let c: f64 = rng.gen_range(-1.0..1.0);
    let dofs: Vec<f64> = (0..HermiteProfile::free_dofs(&mesh))
        .map(|i| {
            let r = mesh.nodes()[i / 2];
            let base = (-k * (r - radius)).exp() * (1.0 + c * (r - radius));
            let noise = rng.gen_range(-0.2..0.2);
            if i % 2 == 0 {
                base + noise
            } else {
                -k * base + noise
            }
        })
        .collect();
    HermiteProfile::from_dofs(mesh, &dofs).unwrap()
}

#[test]
fn exponential_profile_closed_form() {
    let (tau, gamma) = (1.0, -1.0);
    let e2 = std::f64::consts::E.powi(2);
    let closed = 0.75 * (1.0 + tau) + e2 * exp_integral_e1(2.0) + gamma;

    // Independent check of the closed form on the continuous density.
    let density = |r: f64| {
        let f = (1.0 - r).exp();
        (f * f + tau * f * f) * r + f * f / r
    };
    let quad = adaptive(density, 1.0, 60.0, 1e-15, 1e-13) + gamma;
    assert!((quad - closed).abs() < 1e-11, "{quad} vs {closed}");
    assert!((closed - 0.8613).abs() < 5e-5);

    let p = FiberParams::new(tau, gamma, 1.0, 0).unwrap();
    let f = HermiteProfile::interpolate(mesh_for(1.0, 40.0), |r| (1.0 - r).exp(), |r| -(1.0 - r).exp());
    let v = fiber_form_value(&p, &f).unwrap();
    assert!((v - closed).abs() < 1e-5, "{v} vs {closed}");
}

#[test]
fn interpolant_error_shrinks_with_mesh() {
    let p = FiberParams::new(1.0, -1.0, 1.0, 0).unwrap();
    let closed = 1.5 + std::f64::consts::E.powi(2) * exp_integral_e1(2.0) - 1.0;
    let mut last = f64::INFINITY;
    for n in [100, 200, 400] {
        let mesh = build_mesh(1.0, 30.0, n, 6).unwrap();
        let f = HermiteProfile::interpolate(mesh, |r| (1.0 - r).exp(), |r| -(1.0 - r).exp());
        let err = (fiber_form_value(&p, &f).unwrap() - closed).abs();
        assert!(err < last / 3.0, "n={n}: {err} vs {last}");
        last = err;
    }
}

#[test]
fn higher_modes_raise_the_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let radius = rng.gen_range(0.5..2.0);
        let tau = rng.gen_range(0.0..4.0);
        let gamma = rng.gen_range(-3.0..0.0);
        let f = random_profile(&mut rng, radius);
        let base = FiberParams::new(tau, gamma, radius, 0).unwrap();
        let v0 = fiber_form_value(&base, &f).unwrap();
        for n in [2, 3, -2, -3] {
            let vn = fiber_form_value(&base.with_mode(n), &f).unwrap();
            assert!(vn > v0, "n={n}: {vn} <= {v0}");
        }
        // Modes ±1 exceed mode 0 once τ ≥ 1/R².
        let strong = FiberParams { tau: tau.max(1.0 / (radius * radius)), ..base };
        let s0 = fiber_form_value(&strong, &f).unwrap();
        for n in [1, -1] {
            assert!(fiber_form_value(&strong.with_mode(n), &f).unwrap() > s0);
        }
    }
}

#[test]
fn mass_matrix_positive_definite() {
    for (radius, length, n) in [(0.5, 15.0, 600), (1.0, 1.0, 4), (2.0, 60.0, 2400)] {
        let mesh = build_mesh(radius, length, n, 6).unwrap();
        let (_, m) = assemble_fiber(&FiberParams::new(0.0, -1.0, radius, 0).unwrap(), &mesh).unwrap();
        let (_, t) = factor_inertia(&m, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!((t.negative, t.zero), (0, 0));
    }
}

#[test]
fn form_value_is_coefficient_quadratic_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = random_profile(&mut rng, 1.0);
    let p = FiberParams::new(2.0, -0.5, 1.0, 1).unwrap();
    let v = fiber_form_value(&p, &f).unwrap();
    let v2 = fiber_form_value(&p, &f.scaled(-3.0)).unwrap();
    assert!((v2 - 9.0 * v).abs() < 1e-12 * v.abs().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dual_assembly_agrees(
        tau in 0.0..4.0f64,
        gamma in -3.0..0.0f64,
        radius in 0.5..2.0f64,
        mode in 0..4i32,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_profile(&mut rng, radius);
        let p = FiberParams::new(tau, gamma, radius, mode).unwrap();
        let (a, _) = assemble_fiber(&p, f.mesh()).unwrap();
        let b = assemble_fiber_expanded(&p, f.mesh()).unwrap();
        let va = a.quad_form(f.dofs());
        let vb = b.quad_form(f.dofs());
        prop_assert!((va - vb).abs() <= 1e-10 * (1.0 + va.abs()), "{} vs {}", va, vb);
    }

    #[test]
    fn gamma_enters_linearly(
        tau in 0.0..4.0f64,
        g1 in -3.0..0.0f64,
        g2 in -3.0..0.0f64,
        radius in 0.5..2.0f64,
        mode in 0..4i32,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_profile(&mut rng, radius);
        let v1 = fiber_form_value(&FiberParams::new(tau, g1, radius, mode).unwrap(), &f).unwrap();
        let v2 = fiber_form_value(&FiberParams::new(tau, g2, radius, mode).unwrap(), &f).unwrap();
        let f0 = f.dofs()[0];
        let expected = (g2 - g1) * radius * f0 * f0;
        prop_assert!((v2 - v1 - expected).abs() <= 1e-12 * (v1.abs() + v2.abs() + 1.0));
    }
}

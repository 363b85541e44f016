// Copyright 2026 The zenolab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

mod common;

use num_complex::Complex64;
use zenolab::metrics::{
    bound_first_order, bound_kick_commutator, bound_kick_general, bound_second_order, fit_loglog,
    success_probability, trace_distance, zeno_error_measurement, zeno_error_unitary, WindowPolicy,
};
use zenolab::operator::{
    commutator, expm, jacobi_eigh, OperatorMatrix, StateVector, I, ONE,
};
use zenolab::sequences::{kick_zeno, measurement_zeno};
use zenolab::system::{example_zz_x, random_system, SplitMix64};

use common::{logspace, random_density, random_hermitian};

#[test]
fn zeno_errors_vanish_without_coupling() {
    let sys = example_zz_x(1.0, 0.0);
    let m = measurement_zeno(&sys, 4, 1.0).unwrap();
    assert!(zeno_error_measurement(&sys, &m, 1.0).unwrap() < 1e-12);
    let u = kick_zeno(&sys, 5, 1.0).unwrap();
    assert!(zeno_error_unitary(&sys, &u, 1.0, true, 5).unwrap() < 1e-12);
}

#[test]
fn unitary_target_ignores_kick_phase_for_even_counts() {
    let sys = example_zz_x(1.0, 0.1);
    let u = kick_zeno(&sys, 8, 1.0).unwrap();
    let with_phase = zeno_error_unitary(&sys, &u, 1.0, true, 8).unwrap();
    let without = zeno_error_unitary(&sys, &u, 1.0, false, 8).unwrap();
    assert!((with_phase - without).abs() < 1e-14);
}

#[test]
fn bound_formulas() {
    // normalized Hamiltonian: ||H|| = 1
    let sys = random_system(4, 2, 5).unwrap();
    assert!((bound_first_order(&sys, 1.0, 4) - 0.25).abs() < 1e-10);
    assert!((bound_second_order(&sys, 1.0, 4) - 1.0 / 48.0).abs() < 1e-10);
    let c = commutator(&sys.h, &sys.rhr()).unwrap().spectral_norm();
    assert!((bound_kick_commutator(&sys, 1.0, 4).unwrap() - c / 32.0).abs() < 1e-10);

    let commuting = example_zz_x(1.0, 0.0);
    assert!(bound_kick_commutator(&commuting, 1.0, 4).unwrap() < 1e-10);
}

#[test]
fn kick_general_bound_reflection_coefficient() {
    let sys = example_zz_x(1.0, 0.1);
    let hn = sys.h.spectral_norm();
    let (t, n) = (1.0, 8usize);
    let got = bound_kick_general(&sys.r, &sys.h, t, n).unwrap();
    // R has eigenvalues ±1: m = 2, eta = 2, coefficient 1/sqrt(2) + 1
    let want = (2.0 / n as f64)
        * (std::f64::consts::FRAC_1_SQRT_2 + 1.0)
        * t
        * hn
        * (1.0 + 2.0 * hn * t);
    assert!((got - want).abs() < 1e-10 * want);
}

#[test]
fn kick_general_bound_fourth_roots() {
    let mut u = OperatorMatrix::zeros(4);
    u[(0, 0)] = ONE;
    u[(1, 1)] = I;
    u[(2, 2)] = -ONE;
    u[(3, 3)] = -I;
    let h = random_hermitian(4, 17);
    let hn = h.spectral_norm();
    let (t, n) = (0.5, 4usize);
    let got = bound_kick_general(&u, &h, t, n).unwrap();
    // m = 4, eta = sqrt(2) (adjacent fourth roots of unity)
    let want = (2.0 / n as f64) * (2.0 / 2.0f64.sqrt() + 1.0) * t * hn * (1.0 + 2.0 * hn * t);
    assert!((got - want).abs() < 1e-8 * want, "{got} vs {want}");
}

#[test]
fn kick_general_bound_degenerate_spectrum_errors() {
    let h = random_hermitian(3, 23);
    assert!(bound_kick_general(&OperatorMatrix::identity(3), &h, 1.0, 2).is_err());
}

#[test]
fn success_probability_trivial_and_bounded() {
    let sys = example_zz_x(1.0, 0.0);
    let psi0 = StateVector::basis(4, 0);
    let p = success_probability(&sys, "first", 0, 4, 1.0, &psi0).unwrap();
    assert!((p - 1.0).abs() < 1e-12);

    let sys = example_zz_x(1.0, 0.1);
    let p = success_probability(&sys, "second", 0, 4, 1.0, &psi0).unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert!(success_probability(&sys, "nope", 0, 4, 1.0, &psi0).is_err());
    // |01> is outside the range of P = (1 + ZZ)/2
    let outside = StateVector::basis(4, 1);
    assert!(success_probability(&sys, "first", 0, 4, 1.0, &outside).is_err());
}

#[test]
fn success_probability_first_order_lower_bound() {
    for trial in 0..40u64 {
        let dims = [2usize, 4, 8];
        let dim = dims[(trial % 3) as usize];
        let sys = random_system(dim, dim / 2, 7000 + trial).unwrap();
        let psi0 = p_state(&sys);
        let hn = sys.h.spectral_norm();
        for n in [1usize, 4, 16, 64] {
            let p = success_probability(&sys, "first", 0, n, 1.0, &psi0).unwrap();
            let floor = 1.0 - 2.0 * hn * hn / n as f64;
            assert!(
                p >= floor - 1e-12,
                "trial {trial} N={n}: p={p} floor={floor}"
            );
        }
    }
}

fn p_state(sys: &zenolab::system::SystemModel) -> StateVector {
    let mut best = 0;
    let mut best_norm = -1.0;
    for c in 0..sys.dim {
        let n: f64 = (0..sys.dim).map(|r| sys.p[(r, c)].norm_sqr()).sum();
        if n > best_norm {
            best_norm = n;
            best = c;
        }
    }
    let amps: Vec<Complex64> = (0..sys.dim).map(|r| sys.p[(r, best)]).collect();
    StateVector::new(amps).unwrap().normalized_copy().unwrap()
}

#[test]
fn success_probability_factorizes_over_steps() {
    let sys = example_zz_x(1.0, 0.2);
    let psi0 = StateVector::basis(4, 0);
    let (n, t) = (5usize, 1.0);
    let p = success_probability(&sys, "first", 0, n, t, &psi0).unwrap();
    // product of per-step squared norm ratios telescopes to the total
    let step = {
        let dt = t / n as f64;
        let e = expm(&sys.h.scale(-I * dt)).unwrap();
        sys.p.matmul(&e).matmul(&sys.p)
    };
    let mut psi = psi0.clone();
    let mut product = 1.0;
    for _ in 0..n {
        let next = psi.apply(&step);
        product *= next.norm_sqr() / psi.norm_sqr();
        psi = next;
    }
    assert!((p - product).abs() < 1e-12);
}

#[test]
fn trace_distance_basics() {
    let rho = random_density(4, 1);
    assert!(trace_distance(&rho, &rho).unwrap() < 1e-12);
    let a = StateVector::basis(4, 0).density_matrix();
    let b = StateVector::basis(4, 3).density_matrix();
    assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    assert!(trace_distance(&a, &OperatorMatrix::identity(4)).is_err());
}

#[test]
fn trace_distance_matches_eigenvalue_oracle() {
    for seed in 0..20u64 {
        let rho = random_density(5, 100 + seed);
        let sigma = random_density(5, 200 + seed);
        let got = trace_distance(&rho, &sigma).unwrap();
        let (evals, _) = jacobi_eigh(&rho.sub(&sigma));
        let want = 0.5 * evals.iter().map(|l| l.abs()).sum::<f64>();
        assert!((got - want).abs() < 1e-10, "seed {seed}");
        assert!((0.0..=1.0 + 1e-12).contains(&got));
    }
}

#[test]
fn trace_distance_triangle_and_unitary_invariance() {
    for seed in 0..10u64 {
        let a = random_density(4, 300 + seed);
        let b = random_density(4, 400 + seed);
        let c = random_density(4, 500 + seed);
        let dab = trace_distance(&a, &b).unwrap();
        let dbc = trace_distance(&b, &c).unwrap();
        let dac = trace_distance(&a, &c).unwrap();
        assert!(dac <= dab + dbc + 1e-12);

        let u = expm(&random_hermitian(4, 600 + seed).scale(-I)).unwrap();
        let ua = u.matmul(&a).matmul(&u.adjoint());
        let ub = u.matmul(&b).matmul(&u.adjoint());
        assert!((trace_distance(&ua, &ub).unwrap() - dab).abs() < 1e-11);
    }
}

#[test]
fn fit_exact_power_law() {
    let pts: Vec<(f64, f64)> = (1..=10).map(|i| (i as f64, 3.0 * (i * i) as f64)).collect();
    let fit = fit_loglog(&pts, WindowPolicy::Full).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-10);
    assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-10);
    assert!(fit.rms_residual < 1e-12);
}

#[test]
fn fit_auto_selects_dominant_regime() {
    // slope 3 below the crossover at x = 1, slope 5 above; AUTO picks
    // whichever side contributes the larger consistent window
    let curve = |x: f64| x.powi(3) + x.powi(5);
    let lower: Vec<(f64, f64)> = logspace(1e-3, 3.0, 30).into_iter().map(|x| (x, curve(x))).collect();
    let fit = fit_loglog(&lower, WindowPolicy::AutoLargestConsistent).unwrap();
    assert!(
        (fit.slope - 3.0).abs() < 0.05,
        "expected lower-regime slope 3, got {}",
        fit.slope
    );
    let upper: Vec<(f64, f64)> = logspace(0.3, 1e3, 30).into_iter().map(|x| (x, curve(x))).collect();
    let fit = fit_loglog(&upper, WindowPolicy::AutoLargestConsistent).unwrap();
    assert!(
        (fit.slope - 5.0).abs() < 0.05,
        "expected upper-regime slope 5, got {}",
        fit.slope
    );
}

#[test]
fn fit_tolerates_multiplicative_noise() {
    let mut rng = SplitMix64::new(99);
    let pts: Vec<(f64, f64)> = logspace(1e-1, 1e1, 25)
        .into_iter()
        .map(|x| {
            let noise = 1.0 + 0.05 * (2.0 * rng.next_f64() - 1.0);
            (x, 2.0 * x.powi(4) * noise)
        })
        .collect();
    let fit = fit_loglog(&pts, WindowPolicy::Full).unwrap();
    assert!((fit.slope - 4.0).abs() < 0.1);
}

#[test]
fn fit_rescaling_invariance() {
    let pts: Vec<(f64, f64)> = logspace(1e-2, 1.0, 12).into_iter().map(|x| (x, x.powf(2.5))).collect();
    let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x * 1e3, y)).collect();
    let f1 = fit_loglog(&pts, WindowPolicy::Full).unwrap();
    let f2 = fit_loglog(&scaled, WindowPolicy::Full).unwrap();
    assert!((f1.slope - f2.slope).abs() < 1e-10);
}

#[test]
fn fit_input_validation() {
    assert!(fit_loglog(&[(1.0, 1.0), (2.0, 4.0)], WindowPolicy::Full).is_err());
    // noise-floored points do not count as usable
    let pts = [(1.0, 1e-16), (2.0, 1e-16), (3.0, 1e-16), (4.0, 1.0)];
    assert!(fit_loglog(&pts, WindowPolicy::Full).is_err());
    let good = [(1.0, 1.0), (2.0, 4.0), (3.0, 9.0), (4.0, 16.0)];
    assert!(fit_loglog(&good, WindowPolicy::Explicit(0..1)).is_err());
    assert!(fit_loglog(&good, WindowPolicy::Explicit(0..9)).is_err());
    let fit = fit_loglog(&good, WindowPolicy::Explicit(1..4)).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-6);
}

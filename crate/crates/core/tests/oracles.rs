//! Independent quadrature and brute-force checks of the model functions.

use std::f64::consts::PI;

use qbgeom_core::observables::ergotropy_matrix;
use qbgeom_core::{ergotropy_general, memory_kernel, spectral_density, Complex64, ModelParams, SpectralPair};

/// Adaptive Simpson on [a, b].
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 60)
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1]
const GL_X: [f64; 4] =
    [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_W: [f64; 4] =
    [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let (c, r) = (a + (k as f64 + 0.5) * h, 0.5 * h);
        for (x, w) in GL_X.iter().zip(GL_W) {
            total += w * r * (f(c - r * x) + f(c + r * x));
        }
    }
    total
}

#[test]
fn spectral_density_integrates_to_kernel_weight() {
    for lambda in [0.02, 0.04, 1.0] {
        let params = ModelParams { lambda, ..ModelParams::default() };
        let w = 1e7 * lambda;
        let f = |x: f64| spectral_density(params.omega0 + x, &params);
        // split at the peak so the recursion sees it from both sides
        let total = simpson(&f, -w, 0.0, 1e-12) + simpson(&f, 0.0, w, 1e-12);
        let expected = 0.5 * params.gamma * lambda;
        assert!((total / expected - 1.0).abs() < 1e-6, "lambda {lambda}: {total} vs {expected}");
    }
}

#[test]
fn kernel_is_fourier_transform_of_density() {
    for lambda in [0.04, 1.0] {
        let params = ModelParams { lambda, ..ModelParams::default() };
        let amp = params.gamma / (2.0 * PI) * lambda * lambda;
        for scaled in [0.5, 2.0, 10.0] {
            let tau = scaled / lambda;
            // the density is even about omega0, so only the cosine part survives
            let f = |x: f64| spectral_density(params.omega0 + x, &params) * (x * tau).cos();
            let big = 2000.0 * lambda;
            let h = (lambda / 4.0).min(PI / (2.0 * tau));
            let panels = (2.0 * big / h).ceil() as usize;
            let body = gauss_legendre(&f, -big, big, panels);
            // J ~ amp / x^2 beyond the window; integrate cos(tau x)/x^2 asymptotically
            let (s, c) = (tau * big).sin_cos();
            let tail = amp
                * (-s / (tau * big * big) - 2.0 * c / (tau * tau * big.powi(3))
                    + 6.0 * s / (tau.powi(3) * big.powi(4)));
            let numeric = body + 2.0 * tail;
            let exact = memory_kernel(tau, &params).unwrap();
            assert!((numeric - exact).abs() < 1e-6 * exact, "lambda {lambda}, tau {tau}: {numeric} vs {exact}");
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Minimum energy over all unitary-reachable diagonal states.
fn brute_force(pops: &[f64], energies: &[f64]) -> f64 {
    let e: f64 = pops.iter().zip(energies).map(|(p, e)| p * e).sum();
    let least = permutations(pops.len())
        .iter()
        .map(|perm| perm.iter().enumerate().map(|(i, &j)| pops[i] * energies[j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    e - least
}

#[test]
fn general_ergotropy_matches_permutation_minimum() {
    // simple LCG keeps this test free of extra dependencies
    let mut state = 0x2545F4914F6CDD1Du64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for dim in 2..=5 {
        for _ in 0..50 {
            let raw: Vec<f64> = (0..dim).map(|_| next()).collect();
            let total: f64 = raw.iter().sum();
            let pops: Vec<f64> = raw.iter().map(|r| r / total).collect();
            let mut energies: Vec<f64> = (0..dim).map(|_| 4.0 * next() - 2.0).collect();
            energies.sort_by(f64::total_cmp);
            let (spec, assignment) = SpectralPair::from_diagonal(&pops, &energies).unwrap();
            let w = ergotropy_general(&spec, &assignment).unwrap();
            assert!((w - brute_force(&pops, &energies)).abs() < 1e-12);
        }
    }
}

#[test]
fn matrix_ergotropy_of_rotated_qubit() {
    // |psi> = cos a |0> + sin a |1> is pure, so W = E - E_ground = omega sin^2 a
    let omega = 3.0;
    for a in [0.1, 0.7, 1.2] {
        let (c, s) = (f64::cos(a), f64::sin(a));
        let rho = nalgebra_like(&[c * c, c * s, c * s, s * s]);
        let h = nalgebra_like(&[0.0, 0.0, 0.0, omega]);
        let w = ergotropy_matrix(&rho, &h).unwrap();
        assert!((w - omega * s * s).abs() < 1e-12, "a {a}: {w}");
    }
}

fn nalgebra_like(v: &[f64; 4]) -> qbgeom_core::observables::ComplexMatrix {
    qbgeom_core::observables::ComplexMatrix::from_row_slice(2, 2, &v.map(|x| Complex64::new(x, 0.0)))
}

use std::f64::consts::PI;

use dqke_core::qcore::{fidelity, gates, partial_trace, von_neumann_entropy};
use dqke_core::{DensityMatrix, Matrix, RandomStream, Seed, StateVector, C64};
use proptest::prelude::*;

fn gaussian(r: &mut RandomStream) -> f64 {
    let u = r.uniform().max(f64::MIN_POSITIVE);
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * r.uniform()).cos()
}

fn random_state(n: usize, r: &mut RandomStream) -> StateVector {
    let amps = (0..1 << n).map(|_| C64::new(gaussian(r), gaussian(r))).collect();
    StateVector::normalized(amps).unwrap()
}

fn random_mixed(n: usize, r: &mut RandomStream) -> DensityMatrix {
    let parts: Vec<(f64, StateVector)> = (0..3).map(|_| (r.uniform(), random_state(n, r))).collect();
    let total: f64 = parts.iter().map(|p| p.0).sum();
    let norm: Vec<_> = parts.into_iter().map(|(w, s)| (w / total, s)).collect();
    DensityMatrix::from_ensemble(&norm).unwrap()
}

fn rotation(r: &mut RandomStream) -> Matrix {
    let (a, b, c) = (2.0 * PI * r.uniform(), 2.0 * PI * r.uniform(), PI * r.uniform());
    let (co, si) = ((c / 2.0).cos(), (c / 2.0).sin());
    Matrix::from_rows(vec![
        vec![C64::from_polar(co, a), C64::from_polar(-si, b)],
        vec![C64::from_polar(si, -b), C64::from_polar(co, -a)],
    ])
}

fn scramble(psi: &StateVector, r: &mut RandomStream) -> StateVector {
    let n = psi.n_qubits();
    let mut out = psi.clone();
    for _ in 0..3 * n {
        let q = r.below(n as u64) as usize;
        out = out.apply_unitary(&rotation(r), &[q]).unwrap();
        if n > 1 {
            let t = (q + 1 + r.below(n as u64 - 1) as usize) % n;
            out = out.apply_unitary(&gates::cnot(), &[q, t]).unwrap();
        }
    }
    out
}

proptest! {
    #[test]
    fn unitaries_preserve_norm(seed in any::<u64>(), n in 1usize..6) {
        let mut r = RandomStream::derive(Seed(u128::from(seed)), "norm", 0);
        let psi = scramble(&random_state(n, &mut r), &mut r);
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn partial_traces_are_states(seed in any::<u64>(), n in 2usize..5) {
        let mut r = RandomStream::derive(Seed(u128::from(seed)), "trace", 0);
        let rho = random_mixed(n, &mut r);
        let keep: Vec<usize> = (0..n).filter(|_| r.bit()).collect();
        prop_assume!(!keep.is_empty());
        let red = partial_trace(&rho, &keep).unwrap();
        prop_assert!((red.trace() - 1.0).abs() < 1e-10);
        prop_assert!(red.matrix().hermiticity_defect() < 1e-10);
        prop_assert!(red.eigenvalues().iter().all(|&l| l > -1e-10));
    }

    #[test]
    fn fidelity_is_a_probability(seed in any::<u64>(), n in 1usize..4) {
        let mut r = RandomStream::derive(Seed(u128::from(seed)), "fid", 0);
        let psi = random_state(n, &mut r);
        let f = fidelity(&psi, &random_mixed(n, &mut r)).unwrap();
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&f));
        prop_assert!((fidelity(&psi, &psi.to_density()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn entropy_is_additive_on_products(seed in any::<u64>(), n in 1usize..3, m in 1usize..3) {
        let mut r = RandomStream::derive(Seed(u128::from(seed)), "ent", 0);
        let (a, b) = (random_mixed(n, &mut r), random_mixed(m, &mut r));
        let joint = von_neumann_entropy(&a.tensor(&b).unwrap());
        prop_assert!((joint - von_neumann_entropy(&a) - von_neumann_entropy(&b)).abs() < 1e-10);
    }

    #[test]
    fn pure_state_marginals_share_entropy(seed in any::<u64>()) {
        let mut r = RandomStream::derive(Seed(u128::from(seed)), "schmidt", 0);
        let rho = random_state(4, &mut r).to_density();
        let left = von_neumann_entropy(&rho.partial_trace(&[0, 1]).unwrap());
        let right = von_neumann_entropy(&rho.partial_trace(&[2, 3]).unwrap());
        prop_assert!((left - right).abs() < 1e-10);
    }
}

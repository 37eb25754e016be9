use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zxdiff::hamiltonian::*;
use zxdiff::semantics::*;

fn at(beta: f64) -> Assignment {
    [("beta".to_string(), beta)].into_iter().collect()
}

#[test]
fn worst_case_three_qubits() {
    let mut h = IsingHamiltonian::new(3);
    for i in 1..=3 {
        h = h.with_linear(i, if i % 2 == 0 { 2 } else { -2 });
        for j in i + 1..=3 {
            h = h.with_quadratic(i, j, 2);
        }
    }
    let got = interp_at(&hamiltonian_diagram(&h).unwrap(), &Assignment::new()).unwrap();
    assert!(approx_eq(&got, &ising_matrix(&h).unwrap(), 1e-9));
}

#[test]
fn random_hamiltonians_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..10 {
        let h = IsingHamiltonian::random(&mut rng, 2 + k % 2, 2);
        let got = interp_at(&hamiltonian_diagram(&h).unwrap(), &Assignment::new()).unwrap();
        assert!(approx_eq(&got, &ising_matrix(&h).unwrap(), 1e-9), "{}", h.to_json());
    }
}

#[test]
fn group_law_and_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let h = IsingHamiltonian::random(&mut rng, 3, 2);
        let u = evolution_diagram(&h, "beta").unwrap();
        let (b1, b2) = (0.4, 1.3);
        let u1 = interp_at(&u, &at(b1)).unwrap();
        let u2 = interp_at(&u, &at(b2)).unwrap();
        let u12 = interp_at(&u, &at(b1 + b2)).unwrap();
        assert!(approx_eq(&(&u1 * &u2), &u12, 1e-9));
        let ud = interp_at(&dagger(&u), &at(b1)).unwrap();
        assert!(approx_eq(&(&u1 * &ud), &identity(3), 1e-9));
    }
}

#[test]
fn stone_finite_difference() {
    let h = IsingHamiltonian::new(2).with_linear(1, 1).with_linear(2, -1).with_quadratic(1, 2, 1);
    let u = evolution_diagram(&h, "beta").unwrap();
    let fd = finite_diff(&u, "beta", &at(0.0), 1e-6).unwrap() * C64::new(0.0, -1.0);
    assert!(approx_eq(&fd, &ising_matrix(&h).unwrap(), 1e-4));
}

#[test]
fn expectation_matches_vector_oracle() {
    use zxdiff::{gadgets::inv_sqrt2, x_beta, Term};
    let h = IsingHamiltonian::new(1).with_linear(1, 1);
    let state = Term::tensor(&inv_sqrt2(), &x_beta(1, 0, "beta"));
    let a = at(std::f64::consts::FRAC_PI_2);
    let e = interp_at(&expectation(&state, &h).unwrap(), &a).unwrap()[(0, 0)];
    let psi = interp_at(&state, &a).unwrap();
    let want = (psi.adjoint() * ising_matrix(&h).unwrap() * &psi)[(0, 0)];
    assert!((e - want).norm() < 1e-9);
    let zero = expectation(&state, &IsingHamiltonian::new(1)).unwrap();
    assert!(interp_at(&zero, &a).unwrap()[(0, 0)].norm() < 1e-12);
}

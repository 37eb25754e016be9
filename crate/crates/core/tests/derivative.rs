use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zxdiff::derivative::*;
use zxdiff::random::{random_term_with_arity, Config};
use zxdiff::semantics::*;
use zxdiff::{x_beta, y_beta, PhaseExpr, Term};

const TOL: f64 = 1e-9;

fn at(beta: f64) -> Assignment {
    [("beta".to_string(), beta)].into_iter().collect()
}

fn check_derivative(d: &Term, t: &Term) {
    let want = dm(&interp(t).unwrap(), "beta");
    for beta in [0.0, 0.37, 1.9, 4.4] {
        let a = at(beta);
        let got = interp_at(d, &a).unwrap();
        let w = eval(&want, &a).unwrap();
        let diff = max_abs_diff(&got, &w).unwrap();
        assert!(diff < TOL, "beta={beta}: diff {diff} for {t}");
    }
}

#[test]
fn ctriangle_matches_matrix() {
    let m = interp_at(&ctriangle(), &Assignment::new()).unwrap();
    assert!(approx_eq(&m, &ctriangle_matrix(), 1e-12));
}

#[test]
fn delta_diagram_matches_oracle() {
    for (n, m) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (3, 0)] {
        let got = interp_at(&delta_diagram(n, m), &Assignment::new()).unwrap();
        assert!(approx_eq(&got, &delta_matrix(n, m).unwrap(), 1e-10), "n={n} m={m}");
    }
}

#[test]
fn dzx_x_is_derivative_of_block() {
    for (n, m) in [(1, 0), (0, 1), (2, 0), (1, 1), (2, 1)] {
        check_derivative(&dzx_x(n, m, "beta").unwrap(), &x_beta(n, m, "beta"));
    }
    assert!(dzx_x(0, 0, "beta").is_err());
}

#[test]
fn dpair_y_is_derivative_of_pairs() {
    for p in 1..=3 {
        check_derivative(&dpair_y(p, "beta").unwrap(), &y_beta(p, "beta"));
    }
    let d = interp_at(&dpair_y(1, "beta").unwrap(), &at(0.3)).unwrap();
    let e = C64::from_polar(1.0, 0.3);
    let i = C64::i();
    // i(e^{iβ}|+−⟩ − e^{−iβ}|−+⟩)
    let plus = [1.0, 1.0];
    let minus = [1.0, -1.0];
    for r in 0..4 {
        let (a, b) = (r >> 1, r & 1);
        let want = i * (e * plus[a] * minus[b] - e.conj() * minus[a] * plus[b]) * 0.5;
        assert!((d[(r, 0)] - want).norm() < 1e-10, "row {r}");
    }
}

fn samples() -> Vec<Term> {
    let b = |k| PhaseExpr::var("beta", k);
    let mut v = vec![
        Term::x(0, 1, b(1)),
        Term::x(0, 1, b(-1)),
        Term::z(1, 1, b(1)),
        Term::z(1, 1, b(2) + PhaseExpr::quarter(1)),
        Term::x(2, 1, b(-1) + PhaseExpr::pi()),
        Term::tensor(&Term::z(1, 1, b(1)), &Term::x(1, 1, b(1))),
        Term::z(1, 1, b(1)).then(&Term::h()).then(&Term::z(1, 1, b(-1))),
        Term::h().then(&Term::zq(1, 1, 3)),
        x_beta(1, 1, "beta"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = Config { max_wires: 3, max_gens: 4, ..Config::default() };
    for _ in 0..6 {
        v.push(random_term_with_arity(&mut rng, &cfg, 1, 1));
    }
    v
}

#[test]
fn factor_beta_reassembles() {
    for t in samples() {
        let f = factor_beta(&t, "beta").unwrap();
        let r = f.reassemble();
        for beta in [0.2, 2.5] {
            let a = at(beta);
            let diff = max_abs_diff(&interp_at(&r, &a).unwrap(), &interp_at(&t, &a).unwrap()).unwrap();
            assert!(diff < TOL, "{t}");
        }
    }
}

#[test]
fn partial_zx_matches_dm() {
    for t in samples() {
        check_derivative(&partial_zx(&t, "beta").unwrap(), &t);
    }
}

#[test]
fn partial_pair_matches_dm() {
    for t in samples() {
        check_derivative(&partial_pair(&t, "beta").unwrap(), &t);
    }
}

#[test]
fn partial_c_matches_dm() {
    for t in samples() {
        check_derivative(&partial_c(&t, "beta").unwrap(), &t);
    }
}

#[test]
fn non_linear_phase_rejected() {
    let t = Term::z(1, 1, PhaseExpr::var("beta", 1) + PhaseExpr::angle(0.3));
    assert_eq!(partial_c(&t, "beta").unwrap_err().name(), "NotLinear");
}

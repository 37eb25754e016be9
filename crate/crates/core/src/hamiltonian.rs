//! Ising Hamiltonians, their evolution diagrams, and recovery of the
//! Hamiltonian as a diagram from the derivative of the evolution at zero.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::builder::Builder;
use crate::derivative::partial_zx;
use crate::error::{Error, Result};
use crate::gadgets::{cnot, minus_i, phase};
use crate::phase::PhaseExpr;
use crate::semantics::{CMatrix, WIRE_CAP};
use crate::term::Term;
use num_complex::Complex64 as C64;

/// `Σ h_i Z_i + Σ h_ij Z_i Z_j` with integer coefficients. Qubits are
/// numbered from 1; qubit 1 is the most significant bit of a basis index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IsingHamiltonian {
    pub n_qubits: usize,
    pub linear: BTreeMap<usize, i64>,
    pub quadratic: BTreeMap<(usize, usize), i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHamiltonian {
    n: usize,
    #[serde(default)]
    linear: BTreeMap<String, i64>,
    #[serde(default)]
    quadratic: BTreeMap<String, i64>,
}

fn bad(reason: String) -> Error {
    Error::SyntaxError { line: 1, reason }
}

impl IsingHamiltonian {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ..Self::default() }
    }

    /// Add `h·Z_i`. Zero coefficients are dropped.
    pub fn with_linear(mut self, i: usize, h: i64) -> Self {
        *self.linear.entry(i).or_insert(0) += h;
        self.linear.retain(|_, v| *v != 0);
        self
    }

    /// Add `h·Z_i Z_j` for `i < j`.
    pub fn with_quadratic(mut self, i: usize, j: usize, h: i64) -> Self {
        *self.quadratic.entry((i, j)).or_insert(0) += h;
        self.quadratic.retain(|_, v| *v != 0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        for &i in self.linear.keys() {
            if i == 0 || i > n {
                return Err(bad(format!("linear index {i} outside 1..={n}")));
            }
        }
        for &(i, j) in self.quadratic.keys() {
            if !(1 <= i && i < j && j <= n) {
                return Err(bad(format!("quadratic key {i},{j} must satisfy 1 <= i < j <= {n}")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawHamiltonian = serde_json::from_str(text)
            .map_err(|e| Error::SyntaxError { line: e.line(), reason: e.to_string() })?;
        let mut h = IsingHamiltonian::new(raw.n);
        for (k, v) in raw.linear {
            let i = k.trim().parse().map_err(|_| bad(format!("bad linear key {k:?}")))?;
            h = h.with_linear(i, v);
        }
        for (k, v) in raw.quadratic {
            let parsed: Option<(usize, usize)> =
                k.split_once(',').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            let (i, j) = parsed.ok_or_else(|| bad(format!("bad quadratic key {k:?}")))?;
            h = h.with_quadratic(i, j, v);
        }
        h.validate()?;
        Ok(h)
    }

    pub fn to_json(&self) -> String {
        let raw = RawHamiltonian {
            n: self.n_qubits,
            linear: self.linear.iter().map(|(i, v)| (i.to_string(), *v)).collect(),
            quadratic: self.quadratic.iter().map(|((i, j), v)| (format!("{i},{j}"), *v)).collect(),
        };
        serde_json::to_string(&raw).expect("plain data serializes")
    }

    /// A random Hamiltonian on `n` qubits with coefficients in `[-max, max]`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, max: i64) -> Self {
        let mut h = IsingHamiltonian::new(n);
        for i in 1..=n {
            h = h.with_linear(i, rng.gen_range(-max..=max));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                h = h.with_quadratic(i, j, rng.gen_range(-max..=max));
            }
        }
        h
    }

    fn check_size(&self) -> Result<()> {
        if self.n_qubits > WIRE_CAP {
            return Err(Error::TooLarge(format!("{} qubits exceeds the limit of {WIRE_CAP}", self.n_qubits)));
        }
        self.validate()
    }

    /// Energy of a computational basis state.
    pub fn energy(&self, basis: usize) -> i64 {
        let n = self.n_qubits;
        let z = |i: usize| if (basis >> (n - i)) & 1 == 1 { -1 } else { 1 };
        let lin: i64 = self.linear.iter().map(|(&i, &h)| h * z(i)).sum();
        let quad: i64 = self.quadratic.iter().map(|(&(i, j), &h)| h * z(i) * z(j)).sum();
        lin + quad
    }
}

/// The diagonal matrix of the Hamiltonian.
pub fn ising_matrix(h: &IsingHamiltonian) -> Result<CMatrix> {
    h.check_size()?;
    let dim = 1usize << h.n_qubits;
    Ok(CMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |k, _| C64::new(h.energy(k) as f64, 0.0))))
}

/// `e^{iβ·H}` as a diagram: one phase gadget per term, each with its global
/// phase scalar, linear terms first then quadratic ones in key order.
pub fn evolution_diagram(h: &IsingHamiltonian, var: &str) -> Result<Term> {
    h.check_size()?;
    let (mut b, mut w) = Builder::new(h.n_qubits);
    // e^{ihβZ} = e^{ihβ} · Z(1,1,−2hβ)
    let rz = |k: i64| Term::z(1, 1, PhaseExpr::var(var, -2 * k));
    for (&i, &k) in &h.linear {
        w[i - 1] = b.apply(&rz(k), &[w[i - 1]])[0];
        b.scalar(&phase(PhaseExpr::var(var, k)));
    }
    for (&(i, j), &k) in &h.quadratic {
        let gadget = Term::chain([cnot(), Term::tensor(&Term::id(), &rz(k)), cnot()]);
        let o = b.apply(&gadget, &[w[i - 1], w[j - 1]]);
        w[i - 1] = o[0];
        w[j - 1] = o[1];
        b.scalar(&phase(PhaseExpr::var(var, k)));
    }
    Ok(b.finish(&w))
}

/// `H = −i·(∂U)(0)` computed inside the calculus from the evolution diagram.
pub fn hamiltonian_diagram(h: &IsingHamiltonian) -> Result<Term> {
    const VAR: &str = "beta";
    let u = evolution_diagram(h, VAR)?;
    let du = partial_zx(&u, VAR)?;
    let at_zero = du.substitute(&[(VAR.to_string(), 0.0)].into_iter().collect())?;
    Ok(Term::tensor(&minus_i(), &at_zero))
}

/// `⟨ψ|H|ψ⟩` as a scalar diagram, for a state `ψ : 0 → n`.
pub fn expectation(state: &Term, h: &IsingHamiltonian) -> Result<Term> {
    if state.arity() != (0, h.n_qubits) {
        return Err(Error::WrongArity(format!(
            "state has arity {:?}, expected (0, {})",
            state.arity(),
            h.n_qubits
        )));
    }
    let hd = hamiltonian_diagram(h)?;
    Ok(Term::chain([state.clone(), hd, dagger(state)]))
}

/// Conjugate transpose: flip the diagram and negate every phase.
pub fn dagger(t: &Term) -> Term {
    t.dagger()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{approx_eq, interp_at, Assignment};

    fn example() -> IsingHamiltonian {
        IsingHamiltonian::new(2).with_linear(1, 1).with_linear(2, -1).with_quadratic(1, 2, 1)
    }

    fn diag(v: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            v.len(),
            v.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    #[test]
    fn matrix_of_example() {
        assert!(approx_eq(&ising_matrix(&example()).unwrap(), &diag(&[1., 1., -3., 1.]), 0.0));
        let z1 = IsingHamiltonian::new(1).with_linear(1, 1);
        assert!(approx_eq(&ising_matrix(&z1).unwrap(), &diag(&[1., -1.]), 0.0));
        assert!(approx_eq(&ising_matrix(&IsingHamiltonian::new(2)).unwrap(), &diag(&[0.; 4]), 0.0));
        assert_eq!(ising_matrix(&IsingHamiltonian::new(13)).unwrap_err().name(), "TooLarge");
    }

    #[test]
    fn json_round_trip() {
        let h =
            IsingHamiltonian::from_json(r#"{"n":2,"linear":{"1":1,"2":-1},"quadratic":{"1,2":1}}"#).unwrap();
        assert_eq!(h, example());
        assert_eq!(IsingHamiltonian::from_json(&h.to_json()).unwrap(), h);
        assert!(IsingHamiltonian::from_json(r#"{"n":2,"quadratic":{"2,1":1}}"#).is_err());
        assert!(IsingHamiltonian::from_json(r#"{"n":1,"linear":{"2":1}}"#).is_err());
        assert!(IsingHamiltonian::from_json(r#"{"n":1,"extra":0}"#).is_err());
    }

    #[test]
    fn evolution_is_exponential() {
        let h = example();
        let u = evolution_diagram(&h, "beta").unwrap();
        let hm = ising_matrix(&h).unwrap();
        for beta in [0.0, 0.3, 2.0] {
            let a: Assignment = [("beta".to_string(), beta)].into_iter().collect();
            let got = interp_at(&u, &a).unwrap();
            let want = CMatrix::from_diagonal(&hm.diagonal().map(|e| (C64::i() * beta * e).exp()));
            assert!(approx_eq(&got, &want, 1e-10), "beta={beta}");
        }
    }

    #[test]
    fn hamiltonian_of_example() {
        let hd = hamiltonian_diagram(&example()).unwrap();
        let got = interp_at(&hd, &Assignment::new()).unwrap();
        assert!(approx_eq(&got, &diag(&[1., 1., -3., 1.]), 1e-9));
    }

    #[test]
    fn expectation_on_zero_state() {
        let z1 = IsingHamiltonian::new(1).with_linear(1, 1);
        let e = expectation(&crate::gadgets::ket0(), &z1).unwrap();
        let v = interp_at(&e, &Assignment::new()).unwrap()[(0, 0)];
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-9);
        assert_eq!(expectation(&Term::cap(), &z1).unwrap_err().name(), "WrongArity");
    }
}

//! Standard interpretation of terms as (parametrized) complex matrices,
//! the entrywise derivative, and small matrix oracles.

mod exppoly;
mod network;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde_json::{json, Value};

pub use exppoly::{ExpPoly, Exps};

use crate::error::{Error, Result};
use crate::phase::PhaseExpr;
use crate::term::Term;
use network::{contract, Coeff, Ring};

pub type CMatrix = DMatrix<C64>;
pub type Assignment = BTreeMap<String, f64>;

/// Maximum number of boundary wires of an interpreted term.
pub const WIRE_CAP: usize = 12;
const NUMERIC_MAX_RANK: usize = 22;
const SYMBOLIC_MAX_RANK: usize = 16;

impl Coeff for ExpPoly {
    fn zero() -> Self {
        ExpPoly::zero()
    }
    fn is_zero(&self) -> bool {
        ExpPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ExpPoly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ExpPoly::mul(self, o)
    }
}

struct Symbolic<'a> {
    vars: &'a [String],
}

impl Ring for Symbolic<'_> {
    type S = ExpPoly;
    fn constant(&self, c: C64) -> ExpPoly {
        ExpPoly::constant(self.vars.len(), c)
    }
    fn phase(&self, p: &PhaseExpr) -> Result<ExpPoly> {
        let mut k: Exps = std::iter::repeat_n(0, self.vars.len()).collect();
        for (v, c) in &p.coeffs {
            let idx =
                self.vars.iter().position(|x| x == v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            k[idx] = *c as i32;
        }
        Ok(ExpPoly::monomial(k, C64::from_polar(1.0, p.constant())))
    }
    fn max_rank(&self) -> usize {
        SYMBOLIC_MAX_RANK
    }
}

struct Numeric<'a> {
    assignment: &'a Assignment,
}

impl Ring for Numeric<'_> {
    type S = C64;
    fn constant(&self, c: C64) -> C64 {
        c
    }
    fn phase(&self, p: &PhaseExpr) -> Result<C64> {
        Ok(C64::from_polar(1.0, p.eval(self.assignment)?))
    }
    fn max_rank(&self) -> usize {
        NUMERIC_MAX_RANK
    }
}

fn check_cap(t: &Term) -> Result<()> {
    let (n, m) = t.arity();
    if n + m > WIRE_CAP {
        return Err(Error::TooLarge(format!("{} wires exceeds the cap of {WIRE_CAP}", n + m)));
    }
    Ok(())
}

/// A matrix of exponential polynomials over the ordered variable list `vars`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamMatrix {
    pub rows: usize,
    pub cols: usize,
    pub vars: Vec<String>,
    pub entries: Vec<ExpPoly>,
}

impl ParamMatrix {
    pub fn zeros(rows: usize, cols: usize, vars: Vec<String>) -> Self {
        Self { rows, cols, vars, entries: vec![ExpPoly::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &ExpPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<CMatrix> {
        let mut values = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            values.push(*assignment.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?);
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).eval(&values)))
    }

    /// Re-express over a superset of the variables.
    pub fn with_vars(&self, vars: &[String]) -> Self {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|x| x == v).expect("variable missing from superset"))
            .collect();
        let entries = self
            .entries
            .iter()
            .map(|p| {
                ExpPoly::from_terms(p.terms().iter().map(|(k, c)| {
                    let mut nk: Exps = std::iter::repeat_n(0, vars.len()).collect();
                    for (i, &x) in k.iter().enumerate() {
                        nk[map[i]] = x;
                    }
                    (nk, *c)
                }))
            })
            .collect();
        Self { rows: self.rows, cols: self.cols, vars: vars.to_vec(), entries }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let mut vars: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        vars.sort();
        vars.dedup();
        (self.with_vars(&vars), other.with_vars(&vars))
    }

    /// Coefficient-wise comparison; exact as functions of the variables.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return None;
        }
        let (a, b) = self.aligned(other);
        Some(a.entries.iter().zip(&b.entries).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        assert_eq!(a.cols, b.rows, "matmul shape mismatch");
        let mut out = Self::zeros(a.rows, b.cols, a.vars.clone());
        for r in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..b.cols {
                    let idx = r * b.cols + c;
                    out.entries[idx] = out.entries[idx].add(&x.mul(b.get(k, c)));
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let (rows, cols) = (a.rows * b.rows, a.cols * b.cols);
        let mut out = Self::zeros(rows, cols, a.vars.clone());
        for r in 0..rows {
            for c in 0..cols {
                out.entries[r * cols + c] = a.get(r / b.rows, c / b.cols).mul(b.get(r % b.rows, c % b.cols));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x.add(y)).collect();
        Self { entries, ..a }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { entries: self.entries.iter().map(|p| p.scale(s)).collect(), ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|r| {
                Value::Array(
                    (0..self.cols)
                        .map(|c| {
                            Value::Array(
                                self.get(r, c)
                                    .terms()
                                    .iter()
                                    .map(|(k, z)| json!({"k": k.to_vec(), "re": z.re, "im": z.im}))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        json!({"rows": self.rows, "cols": self.cols, "vars": self.vars, "entries": rows})
    }
}

/// Symbolic interpretation `⟦t⟧`.
pub fn interp(t: &Term) -> Result<ParamMatrix> {
    check_cap(t)?;
    let vars: Vec<String> = t.vars().into_iter().collect();
    let entries = contract(t, &Symbolic { vars: &vars })?;
    Ok(ParamMatrix { rows: 1 << t.outputs(), cols: 1 << t.inputs(), vars, entries })
}

/// Numeric interpretation at a point; every variable of `t` must be bound.
pub fn interp_at(t: &Term, assignment: &Assignment) -> Result<CMatrix> {
    check_cap(t)?;
    let data = contract(t, &Numeric { assignment })?;
    Ok(CMatrix::from_row_slice(1 << t.outputs(), 1 << t.inputs(), &data))
}

/// Entrywise derivative `∂_M` with respect to `var`.
pub fn dm(m: &ParamMatrix, var: &str) -> ParamMatrix {
    match m.vars.iter().position(|v| v == var) {
        None => ParamMatrix::zeros(m.rows, m.cols, m.vars.clone()),
        Some(i) => ParamMatrix { entries: m.entries.iter().map(|p| p.diff(i)).collect(), ..m.clone() },
    }
}

pub fn eval(m: &ParamMatrix, assignment: &Assignment) -> Result<CMatrix> {
    m.eval(assignment)
}

/// Largest absolute entry difference; `None` on a shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> Option<f64> {
    if a.shape() != b.shape() {
        return None;
    }
    Some(a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

pub fn approx_eq(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    max_abs_diff(a, b).is_some_and(|d| d <= tol)
}

/// Central difference of the numeric interpretation in `var` around `point`.
pub fn finite_diff(t: &Term, var: &str, point: &Assignment, step: f64) -> Result<CMatrix> {
    assert!(step > 0.0, "finite_diff step must be positive");
    let x = *point.get(var).ok_or_else(|| Error::UnboundVariable(var.to_string()))?;
    let mut plus = point.clone();
    plus.insert(var.to_string(), x + step);
    let mut minus = point.clone();
    minus.insert(var.to_string(), x - step);
    Ok((interp_at(t, &plus)? - interp_at(t, &minus)?) / C64::new(2.0 * step, 0.0))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(n_qubits: usize) -> CMatrix {
    CMatrix::identity(1 << n_qubits, 1 << n_qubits)
}

pub fn hadamard() -> CMatrix {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    CMatrix::from_row_slice(2, 2, &[s, s, s, -s])
}

/// `h^{⊗k}`.
pub fn hadamard_all(k: usize) -> CMatrix {
    (0..k).fold(CMatrix::identity(1, 1), |acc, _| kron(&acc, &hadamard()))
}

pub fn triangle_matrix() -> CMatrix {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    CMatrix::from_row_slice(2, 2, &[o, o, z, o])
}

/// Controlled triangle on (control, target): identity when the control is
/// |0⟩, the triangle on the target when it is |1⟩.
pub fn ctriangle_matrix() -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(2, 3)] = C64::new(1.0, 0.0);
    m
}

fn check_oracle_size(k: usize) -> Result<()> {
    if k > WIRE_CAP {
        return Err(Error::TooLarge(format!("{k} wires exceeds the cap of {WIRE_CAP}")));
    }
    Ok(())
}

/// Diagonal `|x⟩ ↦ (|x⁺| − |x⁻|)|x⟩`, with `x⁺` the first `n` bits and `x⁻` the last `m`.
pub fn delta_matrix(n: usize, m: usize) -> Result<CMatrix> {
    check_oracle_size(n + m)?;
    let k = n + m;
    let diag: Vec<C64> = (0..1usize << k)
        .map(|x| {
            let plus = (x >> m).count_ones() as f64;
            let minus = (x & ((1 << m) - 1)).count_ones() as f64;
            C64::new(plus - minus, 0.0)
        })
        .collect();
    Ok(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)))
}

/// `h^{⊗(n+m)} · Δ · h^{⊗(n+m)}`.
pub fn delta_tilde(n: usize, m: usize) -> Result<CMatrix> {
    let d = delta_matrix(n, m)?;
    let h = hadamard_all(n + m);
    Ok(&h * d * &h)
}

/// Embed a gate acting on `wires` (in the given order) into `k` qubits.
pub fn embed(gate: &CMatrix, wires: &[usize], k: usize) -> CMatrix {
    let g = wires.len();
    let dim = 1usize << k;
    let mut out = CMatrix::zeros(dim, dim);
    let sub = |x: usize| wires.iter().fold(0, |acc, &w| (acc << 1) | ((x >> (k - 1 - w)) & 1));
    let mask: usize = wires.iter().map(|&w| 1 << (k - 1 - w)).sum();
    for col in 0..dim {
        let s_in = sub(col);
        for s_out in 0..1usize << g {
            let v = gate[(s_out, s_in)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            let mut row = col & !mask;
            for (j, &w) in wires.iter().enumerate() {
                row |= ((s_out >> (g - 1 - j)) & 1) << (k - 1 - w);
            }
            out[(row, col)] += v;
        }
    }
    out
}

/// Rebuild `Δ` from controlled triangles around a bookkeeping qubit `b`
/// placed after the `n + m` data qubits:
/// `⟨0|_b CΛ_{n+m,b}…CΛ_{n+1,b} Z_b CΛ_{n,b}…CΛ_{1,b} |1⟩_b`.
pub fn delta_from_ctriangles(n: usize, m: usize) -> Result<CMatrix> {
    check_oracle_size(n + m + 1)?;
    let k = n + m + 1;
    let b = n + m;
    let mut z = CMatrix::identity(2, 2);
    z[(1, 1)] = C64::new(-1.0, 0.0);
    let mut u = identity(k);
    for w in 0..n {
        u = embed(&ctriangle_matrix(), &[w, b], k) * u;
    }
    u = embed(&z, &[b], k) * u;
    for w in n..n + m {
        u = embed(&ctriangle_matrix(), &[w, b], k) * u;
    }
    let d = 1usize << (n + m);
    Ok(CMatrix::from_fn(d, d, |r, c| u[(r << 1, (c << 1) | 1)]))
}

pub fn matrix_to_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| {
                Value::Array(
                    (0..m.ncols()).map(|c| json!({"re": m[(r, c)].re, "im": m[(r, c)].im})).collect(),
                )
            })
            .collect(),
    )
}

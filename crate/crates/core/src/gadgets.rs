//! Reusable small diagrams: scalars, basis states, the triangle, the W
//! splitter, CNOT and controlled scalars.
//!
//! Every gadget is exact: its interpretation equals the stated matrix with
//! no hidden global factor. The unit tests pin each value.

use crate::builder::Builder;
use crate::phase::PhaseExpr;
use crate::term::Term;

/// `2`.
pub fn two() -> Term {
    Term::zq(0, 0, 0)
}

/// `0`.
pub fn zero() -> Term {
    Term::zq(0, 0, 4)
}

/// `√2`.
pub fn sqrt2() -> Term {
    Term::zq(0, 1, 0).then(&Term::xq(1, 0, 0))
}

/// `1/√2`.
pub fn inv_sqrt2() -> Term {
    Term::zq(0, 3, 0).then(&Term::xq(3, 0, 0))
}

/// `(√2)^p` for any integer `p`, as a balanced tensor of scalar gadgets.
pub fn sqrt2_pow(p: i64) -> Term {
    let unit = if p >= 0 { sqrt2 } else { inv_sqrt2 };
    let mut parts: Vec<Term> = Vec::new();
    let mut k = p.unsigned_abs();
    while k >= 2 && p > 0 {
        parts.push(two());
        k -= 2;
    }
    parts.extend(std::iter::repeat_with(unit).take(k as usize));
    Term::tensor_all(parts)
}

/// `e^{iθ}` for a (possibly parametrized) angle.
pub fn phase(theta: PhaseExpr) -> Term {
    Term::tensor(&inv_sqrt2(), &Term::z(0, 1, theta).then(&Term::xq(1, 0, 4)))
}

pub fn i() -> Term {
    phase(PhaseExpr::quarter(2))
}

pub fn minus_i() -> Term {
    phase(PhaseExpr::quarter(6))
}

/// `|0⟩`.
pub fn ket0() -> Term {
    Term::tensor(&inv_sqrt2(), &Term::xq(0, 1, 0))
}

/// `|1⟩`.
pub fn ket1() -> Term {
    Term::tensor(&inv_sqrt2(), &Term::xq(0, 1, 4))
}

/// `⟨0|`.
pub fn bra0() -> Term {
    Term::tensor(&inv_sqrt2(), &Term::xq(1, 0, 0))
}

/// `⟨1|`.
pub fn bra1() -> Term {
    Term::tensor(&inv_sqrt2(), &Term::xq(1, 0, 4))
}

/// Controlled state of the scalar 0: control `|0⟩ ↦ 1`, `|1⟩ ↦ 0`.
pub fn zero_controlled() -> Term {
    bra0()
}

pub fn not() -> Term {
    Term::xq(1, 1, 4)
}

/// Z-spider `1 → k` with phase 0 (copies a computational basis value).
pub fn copy(k: usize) -> Term {
    Term::zq(1, k, 0)
}

/// The triangle `|0⟩⟨0| + |0⟩⟨1| + |1⟩⟨1|` from spiders with π/4 phases.
///
/// Writing `ω = e^{iπ/4}`, the entry `T_{yx}` equals
/// `½ Σ_z ω^{z + (x⊕z) − (y⊕z) − (x⊕y⊕z)}`; each parity term is a phase gadget.
pub fn triangle() -> Term {
    let (mut b, w) = Builder::new(1);
    let x = b.apply(&copy(2), &w);
    let z = b.add_state(&Term::zq(0, 3, 1));
    let y = b.add_state(&Term::zq(0, 3, 0));
    let gadget = |k: usize, q: i64| Term::xq(k, 1, 0).then(&Term::zq(1, 0, q));
    b.apply(&gadget(2, 1), &[x[0], z[0]]);
    b.apply(&gadget(2, -1), &[y[1], z[1]]);
    b.apply(&gadget(3, -1), &[x[1], y[2], z[2]]);
    b.scalar(&two());
    b.finish(&[y[0]])
}

/// Transposed triangle `|0⟩⟨0| + |1⟩⟨0| + |1⟩⟨1|`.
pub fn triangle_t() -> Term {
    Term::chain([not(), triangle(), not()])
}

/// CNOT with the control on the first wire.
pub fn cnot() -> Term {
    let core = Term::tensor(&copy(2), &Term::id()).then(&Term::tensor(&Term::id(), &Term::xq(2, 1, 0)));
    Term::tensor(&sqrt2(), &core)
}

/// `|0⟩ ↦ |00⟩`, `|1⟩ ↦ |01⟩ + |10⟩`.
pub fn w_split() -> Term {
    let (mut b, c) = Builder::new(1);
    let ab = b.apply(&Term::xq(1, 2, 0), &c);
    let a = b.apply(&copy(2), &[ab[0]]);
    let bb = b.apply(&copy(2), &[ab[1]]);
    // (⟨a'| T·NOT |b'⟩) = 1 − a'b'
    let effect = Term::tensor(&Term::id(), &not().then(&triangle())).then(&Term::cup());
    b.apply(&effect, &[a[1], bb[1]]);
    b.scalar(&sqrt2());
    b.finish(&[a[0], bb[0]])
}

/// `|0⟩ ↦ |0…0⟩`, `|1⟩ ↦ Σ_j |e_j⟩` on `k ≥ 1` wires.
pub fn w_split_n(k: usize) -> Term {
    assert!(k >= 1);
    if k == 1 {
        return Term::id();
    }
    w_split().then(&Term::tensor(&w_split_n(k - 1), &Term::id()))
}

/// Controlled scalar `[1, 2]` (value on control `|0⟩`, `|1⟩`).
pub fn c_two() -> Term {
    triangle().then(&Term::zq(1, 0, 0))
}

/// Controlled scalar `[1, 1/2]`.
pub fn c_half() -> Term {
    let core = Term::chain([not(), triangle(), Term::zq(1, 0, 0)]);
    Term::tensor(&Term::tensor(&inv_sqrt2(), &inv_sqrt2()), &core)
}

/// Controlled scalar `[1, √2]`.
pub fn c_sqrt2() -> Term {
    Term::chain([Term::zq(1, 1, -1), triangle(), Term::zq(1, 0, 2)])
}

/// Controlled scalar `[1, 1/√2]`.
pub fn c_inv_sqrt2() -> Term {
    let core = Term::chain([Term::zq(1, 1, 1), not(), triangle(), Term::zq(1, 0, 2)]);
    Term::tensor(&Term::tensor(&inv_sqrt2(), &phase(PhaseExpr::quarter(-1))), &core)
}

/// Controlled phase `[1, e^{iθ}]`.
pub fn c_phase(theta: PhaseExpr) -> Term {
    Term::z(1, 0, theta)
}

/// Controlled scalar `[1, (√2)^p]`.
pub fn c_sqrt2_pow(p: i64) -> Term {
    let mut parts: Vec<Term> = Vec::new();
    let mut k = p.unsigned_abs();
    while k >= 2 {
        parts.push(if p > 0 { c_two() } else { c_half() });
        k -= 2;
    }
    if k == 1 {
        parts.push(if p > 0 { c_sqrt2() } else { c_inv_sqrt2() });
    }
    controlled_product(parts)
}

/// Several controlled scalars (`1 → 0` each) sharing one control wire.
pub fn controlled_product(parts: Vec<Term>) -> Term {
    match parts.len() {
        0 => Term::zq(1, 0, 0),
        1 => parts[0].clone(),
        k => copy(k).then(&Term::tensor_all(parts)),
    }
}

/// `diag(1, λ)` from a controlled scalar `[1, λ]`.
pub fn scale_control(cs: &Term) -> Term {
    copy(2).then(&Term::tensor(&Term::id(), cs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{approx_eq, interp_at, Assignment, CMatrix};
    use num_complex::Complex64 as C64;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn val(t: &Term) -> CMatrix {
        interp_at(t, &Assignment::new()).unwrap()
    }

    fn scalar(t: &Term) -> C64 {
        assert_eq!(t.arity(), (0, 0));
        val(t)[(0, 0)]
    }

    fn row(t: &Term) -> (C64, C64) {
        assert_eq!(t.arity(), (1, 0));
        let m = val(t);
        (m[(0, 0)], m[(0, 1)])
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn scalars() {
        assert!(close(scalar(&two()), r(2.0)));
        assert!(close(scalar(&zero()), r(0.0)));
        assert!(close(scalar(&sqrt2()), r(SQRT_2)));
        assert!(close(scalar(&inv_sqrt2()), r(FRAC_1_SQRT_2)));
        assert!(close(scalar(&i()), C64::new(0.0, 1.0)));
        assert!(close(scalar(&minus_i()), C64::new(0.0, -1.0)));
        assert!(close(
            scalar(&phase(PhaseExpr::quarter(1))),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)
        ));
        for p in -5..=5 {
            assert!(close(scalar(&sqrt2_pow(p)), r(SQRT_2.powi(p as i32))), "p={p}");
        }
    }

    #[test]
    fn basis_states() {
        let k0 = val(&ket0());
        assert!(close(k0[(0, 0)], r(1.0)) && close(k0[(1, 0)], r(0.0)));
        let k1 = val(&ket1());
        assert!(close(k1[(0, 0)], r(0.0)) && close(k1[(1, 0)], r(1.0)));
        let (a, b) = row(&bra1());
        assert!(close(a, r(0.0)) && close(b, r(1.0)));
        let (a, b) = row(&zero_controlled());
        assert!(close(a, r(1.0)) && close(b, r(0.0)));
    }

    #[test]
    fn triangle_matrix_agrees() {
        assert!(approx_eq(&val(&triangle()), &crate::semantics::triangle_matrix(), 1e-12));
        let t = val(&triangle_t());
        assert!(approx_eq(&t, &crate::semantics::triangle_matrix().transpose(), 1e-12));
        let tt = val(&triangle().then(&triangle()));
        let want = CMatrix::from_row_slice(2, 2, &[r(1.), r(2.), r(0.), r(1.)]);
        assert!(approx_eq(&tt, &want, 1e-12));
    }

    #[test]
    fn cnot_matrix() {
        let m = val(&cnot());
        let mut want = CMatrix::zeros(4, 4);
        for (o, i) in [(0, 0), (1, 1), (3, 2), (2, 3)] {
            want[(o, i)] = r(1.0);
        }
        assert!(approx_eq(&m, &want, 1e-12));
    }

    #[test]
    fn w_splitters() {
        let m = val(&w_split());
        let mut want = CMatrix::zeros(4, 2);
        want[(0, 0)] = r(1.0);
        want[(1, 1)] = r(1.0);
        want[(2, 1)] = r(1.0);
        assert!(approx_eq(&m, &want, 1e-12));
        let m = val(&w_split_n(3));
        for x in 0..8usize {
            let w1 = if x.count_ones() == 1 { 1.0 } else { 0.0 };
            let w0 = if x == 0 { 1.0 } else { 0.0 };
            assert!(close(m[(x, 1)], r(w1)) && close(m[(x, 0)], r(w0)));
        }
    }

    #[test]
    fn controlled_scalars() {
        let cases: Vec<(Term, f64)> =
            vec![(c_two(), 2.0), (c_half(), 0.5), (c_sqrt2(), SQRT_2), (c_inv_sqrt2(), FRAC_1_SQRT_2)];
        for (t, want) in cases {
            let (a, b) = row(&t);
            assert!(close(a, r(1.0)) && close(b, r(want)), "{t}");
        }
        for p in -4..=4 {
            let (a, b) = row(&c_sqrt2_pow(p));
            assert!(close(a, r(1.0)) && close(b, r(SQRT_2.powi(p as i32))), "p={p}");
        }
        let d = val(&scale_control(&c_two()));
        assert!(approx_eq(&d, &CMatrix::from_row_slice(2, 2, &[r(1.), r(0.), r(0.), r(2.)]), 1e-12));
    }
}

//! Controlled states, the inductive controlizer and diagrammatic addition.
//!
//! Conventions: a controlled state `C` for an `n → m` diagram `D` is a
//! `1 → n+m` term whose outputs list the inputs of `D` first, then its
//! outputs, with
//!
//! * `⟦C⟧|0⟩ = Σ_x |x⟩` (all ones), and
//! * `⟦C⟧|1⟩ = Σ_{x,y} D_{y,x} |x⟩|y⟩`, exactly, with no extra scalar.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builder::Builder;
use crate::error::{Error, Result};
use crate::gadgets::{c_sqrt2_pow, copy, ket1, sqrt2, sqrt2_pow, triangle_t, w_split};
use crate::phase::PhaseExpr;
use crate::semantics::{interp_at, Assignment};
use crate::term::{Generator, Node, Term};

const CHECK_SEED: u64 = 0x5eed;
const CHECK_TOL: f64 = 1e-9;

/// A `1 → n` term satisfying the controlled-state equation.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlledState {
    pub term: Term,
    pub n: usize,
}

impl ControlledState {
    /// Wrap a term without checking the control-zero equation.
    pub fn new_unchecked(term: Term) -> Result<Self> {
        match term.arity() {
            (1, n) => Ok(Self { term, n }),
            (a, b) => Err(Error::WrongArity(format!("controlled state must be 1 -> n, got {a} -> {b}"))),
        }
    }

    /// Wrap a term after verifying it is a controlled state.
    pub fn new(term: Term) -> Result<Self> {
        if !is_controlled_state(&term)? {
            return Err(Error::WrongArity("term is not a controlled state".into()));
        }
        Self::new_unchecked(term)
    }
}

/// Random assignments of the term's variables, reproducible from `seed`.
pub fn random_assignments(t: &Term, count: usize, seed: u64) -> Vec<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = t.vars();
    (0..count)
        .map(|_| vars.iter().map(|v| (v.clone(), rng.gen_range(0.0..std::f64::consts::TAU))).collect())
        .collect()
}

/// Does `⟦t⟧|0⟩` equal the all-ones vector at three random assignments?
pub fn is_controlled_state(t: &Term) -> Result<bool> {
    is_controlled_state_with(t, CHECK_SEED, CHECK_TOL)
}

pub fn is_controlled_state_with(t: &Term, seed: u64, tol: f64) -> Result<bool> {
    if t.inputs() != 1 {
        return Err(Error::WrongArity(format!(
            "controlled state must have one input, got {} -> {}",
            t.inputs(),
            t.outputs()
        )));
    }
    for a in random_assignments(t, 3, seed) {
        let m = interp_at(t, &a)?;
        if m.column(0).iter().any(|z| (z - num_complex::Complex64::new(1.0, 0.0)).norm() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Controlled state whose `|1⟩` branch is `⟦state⟧`, given that the entries
/// of `⟦state⟧` sum to `(√2)^p`.
///
/// Each output leg passes through a gadget acting as the identity when the
/// control is `|1⟩` and as the all-ones map when it is `|0⟩`; the `|0⟩`
/// branch then carries the entry sum, which a controlled scalar removes.
pub fn cs_from_state(state: &Term, p: i64) -> ControlledState {
    assert_eq!(state.inputs(), 0);
    let k = state.outputs();
    // (c, d) ↦ d if c = 1, all-ones if c = 0.
    let leg = Term::tensor(&sqrt2(), &Term::tensor(&triangle_t(), &Term::id()).then(&Term::xq(2, 1, 4)));
    let (mut b, c) = Builder::new(1);
    let s = b.add_state(state);
    let cc = b.apply(&copy(k + 1), &c);
    let outs: Vec<_> = (0..k).map(|j| b.apply(&leg, &[cc[j], s[j]])[0]).collect();
    b.apply(&c_sqrt2_pow(p), &[cc[k]]);
    b.scalar(&sqrt2_pow(-p));
    ControlledState { term: b.finish(&outs), n: k }
}

/// Bend an `n → m` diagram into the state `Σ_x |x⟩ ⊗ D|x⟩`.
pub fn bend(d: &Term) -> Term {
    let n = d.inputs();
    let (mut b, _) = Builder::new(0);
    let mut xs = Vec::new();
    let mut feed = Vec::new();
    for _ in 0..n {
        let w = b.add_state(&Term::cap());
        xs.push(w[0]);
        feed.push(w[1]);
    }
    let ys = b.apply(d, &feed);
    xs.extend(ys);
    b.finish(&xs)
}

/// Sum: `|1⟩ ↦ ⟦a⟧|1⟩ + ⟦b⟧|1⟩`.
pub fn cs_sum(a: &ControlledState, b: &ControlledState) -> Result<ControlledState> {
    if a.n != b.n {
        return Err(Error::WrongArity(format!("cs_sum of sizes {} and {}", a.n, b.n)));
    }
    let (mut bl, c) = Builder::new(1);
    let pq = bl.apply(&w_split(), &c);
    let xa = bl.apply(&a.term, &[pq[0]]);
    let xb = bl.apply(&b.term, &[pq[1]]);
    let outs: Vec<_> = (0..a.n).map(|k| bl.apply(&Term::zq(2, 1, 0), &[xa[k], xb[k]])[0]).collect();
    Ok(ControlledState { term: bl.finish(&outs), n: a.n })
}

/// Tensor: `|1⟩ ↦ ⟦a⟧|1⟩ ⊗ ⟦b⟧|1⟩`.
pub fn cs_tensor(a: &ControlledState, b: &ControlledState) -> ControlledState {
    let term = copy(2).then(&Term::tensor(&a.term, &b.term));
    ControlledState { term, n: a.n + b.n }
}

/// Controlled state for `L ⊗ R` from those of `L : nl → ml` and `R : nr → mr`.
pub fn ctensor(l: &ControlledState, nl: usize, r: &ControlledState, nr: usize) -> ControlledState {
    let (ml, mr) = (l.n - nl, r.n - nr);
    let (mut b, c) = Builder::new(1);
    let cc = b.apply(&copy(2), &c);
    let lo = b.apply(&l.term, &[cc[0]]);
    let ro = b.apply(&r.term, &[cc[1]]);
    let mut outs = lo[..nl].to_vec();
    outs.extend(&ro[..nr]);
    outs.extend(&lo[nl..nl + ml]);
    outs.extend(&ro[nr..nr + mr]);
    ControlledState { term: b.finish(&outs), n: l.n + r.n }
}

/// Controlled state for `D3 ∘ D1` from those of `D1 : n → k` and `D3 : k → m`.
pub fn ccompose(c1: &ControlledState, n: usize, c3: &ControlledState, k: usize) -> ControlledState {
    let m = c3.n - k;
    let (mut b, c) = Builder::new(1);
    let cc = b.apply(&copy(3), &c);
    let a = b.apply(&c1.term, &[cc[0]]);
    let d = b.apply(&c3.term, &[cc[1]]);
    for i in 0..k {
        b.apply(&Term::cup(), &[a[n + i], d[i]]);
    }
    // The control-|0⟩ branch picks up 2^k from the cups.
    b.apply(&c_sqrt2_pow(2 * k as i64), &[cc[2]]);
    b.scalar(&sqrt2_pow(-2 * k as i64));
    let mut outs = a[..n].to_vec();
    outs.extend(&d[k..k + m]);
    ControlledState { term: b.finish(&outs), n: n + m }
}

fn controlize_gen(g: &Generator) -> ControlledState {
    let t = Term::gen(g.clone());
    match g {
        Generator::Empty => ControlledState { term: Term::zq(1, 0, 0), n: 0 },
        Generator::H => cs_from_state(&bend(&t), 1),
        Generator::Id | Generator::Cup | Generator::Cap => cs_from_state(&bend(&t), 2),
        Generator::Swap => cs_from_state(&bend(&t), 4),
        Generator::X { inputs: 0, outputs: 1, .. } => cs_from_state(&t, 1),
        Generator::X { inputs, outputs, phase } if phase.is_zero() => {
            let k = inputs + outputs;
            cs_from_state(&bend(&t), if k == 0 { 2 } else { k as i64 })
        }
        Generator::X { inputs, outputs, phase } => controlize(&split_x_phase(*inputs, *outputs, phase)),
        Generator::Z { inputs, outputs, phase } => controlize(&z_via_x(*inputs, *outputs, phase)),
    }
}

/// `X(n,m,α) = X(n+1,m,0) ∘ (X(0,1,α) ⊗ id_n)`.
fn split_x_phase(n: usize, m: usize, phase: &PhaseExpr) -> Term {
    Term::tensor(&Term::x(0, 1, phase.clone()), &Term::ids(n)).then(&Term::xq(n + 1, m, 0))
}

/// `Z(n,m,α) = H^{⊗m} ∘ X(n,m,α) ∘ H^{⊗n}`.
pub(crate) fn z_via_x(n: usize, m: usize, phase: &PhaseExpr) -> Term {
    let hs = |k: usize| Term::tensor_all(std::iter::repeat_with(Term::h).take(k));
    let mut steps = Vec::new();
    if n > 0 {
        steps.push(hs(n));
    }
    steps.push(Term::x(n, m, phase.clone()));
    if m > 0 {
        steps.push(hs(m));
    }
    Term::chain(steps)
}

/// The inductive controlizer.
pub fn controlize(t: &Term) -> ControlledState {
    match t.node() {
        Node::Gen(g) => controlize_gen(g),
        Node::Tensor { left, right } => {
            ctensor(&controlize(left), left.inputs(), &controlize(right), right.inputs())
        }
        Node::Compose { later, earlier } => {
            ccompose(&controlize(earlier), earlier.inputs(), &controlize(later), later.inputs())
        }
    }
}

/// Recover an `n → m` diagram from a controlled state by plugging `|1⟩`
/// into the control and bending the first `n` outputs back into inputs.
pub fn uncontrol(c: &ControlledState, n: usize, m: usize) -> Result<Term> {
    if c.n != n + m {
        return Err(Error::WrongArity(format!("controlled state has {} outputs, expected {}", c.n, n + m)));
    }
    let (mut b, ins) = Builder::new(n);
    let one = b.add_state(&ket1());
    let s = b.apply(&c.term, &one);
    for i in 0..n {
        b.apply(&Term::cup(), &[ins[i], s[i]]);
    }
    Ok(b.finish(&s[n..]))
}

/// Diagrammatic sum `⟦add(d1, d2)⟧ = ⟦d1⟧ + ⟦d2⟧`.
pub fn add(d1: &Term, d2: &Term) -> Result<Term> {
    if d1.arity() != d2.arity() {
        return Err(Error::WrongArity(format!("cannot add {:?} and {:?} diagrams", d1.arity(), d2.arity())));
    }
    let (n, m) = d1.arity();
    if n + m + 1 > crate::semantics::WIRE_CAP {
        return Err(Error::TooLarge(format!("{} wires exceeds the cap", n + m + 1)));
    }
    uncontrol(&cs_sum(&controlize(d1), &controlize(d2))?, n, m)
}

/// A term whose interpretation is the zero `n → m` matrix.
pub fn zero_term(n: usize, m: usize) -> Term {
    let effects = Term::tensor_all((0..n).map(|_| Term::zq(1, 0, 0)));
    let states = Term::tensor_all((0..m).map(|_| Term::zq(0, 1, 0)));
    Term::tensor_all([crate::gadgets::zero(), effects, states])
}

/// Controlled state of the zero vector on `k` wires.
pub fn zero_controlled_state(k: usize) -> ControlledState {
    let kets = Term::tensor_all((0..k).map(|_| Term::zq(0, 1, 0)));
    ControlledState { term: Term::tensor(&crate::gadgets::zero_controlled(), &kets), n: k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{approx_eq, CMatrix};
    use num_complex::Complex64 as C64;

    fn val(t: &Term) -> CMatrix {
        interp_at(t, &Assignment::new()).unwrap()
    }

    #[test]
    fn zero_controlled_is_controlled() {
        assert!(is_controlled_state(&crate::gadgets::zero_controlled()).unwrap());
        assert!(!is_controlled_state(&Term::zq(1, 1, 0)).unwrap());
        assert_eq!(is_controlled_state(&Term::cap()).unwrap_err().name(), "WrongArity");
    }

    #[test]
    fn generators_round_trip() {
        let gens = vec![
            Term::h(),
            Term::id(),
            Term::swap(),
            Term::cup(),
            Term::cap(),
            Term::empty(),
            Term::xq(0, 1, 3),
            Term::xq(2, 1, 0),
            Term::xq(0, 0, 0),
            Term::xq(1, 2, 4),
            Term::zq(1, 2, 1),
            Term::zq(0, 0, 2),
        ];
        for g in gens {
            let c = controlize(&g);
            assert!(is_controlled_state(&c.term).unwrap(), "{g}");
            let back = uncontrol(&c, g.inputs(), g.outputs()).unwrap();
            assert!(approx_eq(&val(&back), &val(&g), 1e-9), "{g}");
        }
    }

    #[test]
    fn example_addition() {
        let sum = add(&Term::cap(), &Term::xq(0, 2, 4)).unwrap();
        let v = val(&sum);
        for k in 0..4 {
            assert!((v[(k, 0)] - C64::new(1.0, 0.0)).norm() < 1e-9);
        }
        let two_id = val(&add(&Term::id(), &Term::id()).unwrap());
        assert!(approx_eq(&two_id, &(CMatrix::identity(2, 2) * C64::new(2.0, 0.0)), 1e-9));
    }

    #[test]
    fn sum_of_state_with_itself_doubles() {
        let c = controlize(&Term::h());
        let s = cs_sum(&c, &c).unwrap();
        let one = ket1();
        let a = val(&one.then(&s.term));
        let b = val(&one.then(&c.term));
        assert!(approx_eq(&a, &(b * C64::new(2.0, 0.0)), 1e-9));
    }

    #[test]
    fn zero_states() {
        let z = zero_controlled_state(2);
        assert!(is_controlled_state(&z.term).unwrap());
        let back = uncontrol(&z, 1, 1).unwrap();
        assert!(val(&back).iter().all(|x| x.norm() < 1e-12));
        let d = Term::h();
        let s = uncontrol(&cs_sum(&controlize(&d), &z).unwrap(), 1, 1).unwrap();
        assert!(approx_eq(&val(&s), &val(&d), 1e-9));
    }
}

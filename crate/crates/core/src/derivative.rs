//! Diagrammatic derivatives with respect to one variable.
//!
//! Three constructions are provided, all satisfying `⟦∂D⟧ = ∂_M⟦D⟧`:
//!
//! * [`partial_c`]: inductive, via controlled states (product rules on `⊗`/`∘`);
//! * [`partial_zx`]: factor every occurrence of the variable into a block of
//!   `X(0,1,±β)` states and differentiate that block with the `Δ̃` gadget;
//! * [`partial_pair`]: as above, with the block regrouped into `(−β, +β)`
//!   pairs and differentiated with a W-state gadget.

use crate::builder::{permutation, Builder};
use crate::controlize::{
    ccompose, controlize, cs_from_state, cs_sum, ctensor, uncontrol, z_via_x, zero_controlled_state,
    zero_term, ControlledState,
};
use crate::error::{Error, Result};
use crate::gadgets::{
    bra0, c_half, c_inv_sqrt2, copy, i, ket0, ket1, scale_control, sqrt2, sqrt2_pow, two, w_split, w_split_n,
};
use crate::phase::PhaseExpr;
use crate::term::{x_beta, Generator, Node, Term};

fn check_linear(t: &Term) -> Result<()> {
    let mut bad = None;
    t.for_each_gen(&mut |g| {
        if let Some(p) = g.phase() {
            if p.extra != 0.0 && bad.is_none() {
                bad = Some(p.to_string());
            }
        }
    });
    match bad {
        Some(p) => Err(Error::NotLinear(format!("phase {p} has a constant outside multiples of pi/4"))),
        None => Ok(()),
    }
}

/// `X(0,1,±β)` with the base-case derivative gadget:
/// `|0⟩ ↦ |0⟩+|1⟩`, `|1⟩ ↦ ±i e^{±iβ}|−⟩`.
fn ketbeta(sign: i64, var: &str) -> ControlledState {
    let term = Term::chain([
        scale_control(&c_inv_sqrt2()),
        Term::zq(1, 1, 2 * sign),
        Term::h(),
        Term::x(1, 1, PhaseExpr::var(var, sign)),
    ]);
    ControlledState { term: Term::tensor(&sqrt2(), &term), n: 1 }
}

/// Spider with `var` in its phase, rewritten so that every occurrence of
/// `var` sits in a separate `X(0,1,±β)` state (spider fusion).
fn expand_spider(g: &Generator, var: &str) -> Term {
    match g {
        Generator::Z { inputs, outputs, phase } => z_via_x(*inputs, *outputs, phase),
        Generator::X { inputs, outputs, phase } => {
            let k = phase.coeff(var);
            let sign = k.signum();
            let mut states = vec![Term::x(0, 1, phase.without(var))];
            states.extend((0..k.abs()).map(|_| Term::x(0, 1, PhaseExpr::var(var, sign))));
            let legs = states.len();
            Term::tensor(&Term::tensor_all(states), &Term::ids(*inputs)).then(&Term::xq(
                inputs + legs,
                *outputs,
                0,
            ))
        }
        _ => unreachable!("only spiders carry phases"),
    }
}

fn cderiv_rec(t: &Term, var: &str) -> ControlledState {
    let (n, m) = t.arity();
    if !t.mentions(var) {
        return zero_controlled_state(n + m);
    }
    match t.node() {
        Node::Gen(g) => match g {
            Generator::X { inputs: 0, outputs: 1, phase }
                if phase.coeff(var).abs() == 1 && phase.without(var).is_zero() =>
            {
                ketbeta(phase.coeff(var), var)
            }
            _ => cderiv_rec(&expand_spider(g, var), var),
        },
        Node::Tensor { left, right } => {
            let (cl, cr) = (controlize(left), controlize(right));
            let (dl, dr) = (cderiv_rec(left, var), cderiv_rec(right, var));
            let (nl, nr) = (left.inputs(), right.inputs());
            cs_sum(&ctensor(&dl, nl, &cr, nr), &ctensor(&cl, nl, &dr, nr)).expect("equal sizes")
        }
        Node::Compose { later, earlier } => {
            let (c1, c3) = (controlize(earlier), controlize(later));
            let (d1, d3) = (cderiv_rec(earlier, var), cderiv_rec(later, var));
            let (n1, k) = (earlier.inputs(), later.inputs());
            cs_sum(&ccompose(&d1, n1, &c3, k), &ccompose(&c1, n1, &d3, k)).expect("equal sizes")
        }
    }
}

/// C-derivative: a controlled state whose `|1⟩` branch is `vec(∂_M⟦t⟧)`.
///
/// Subterms that do not mention `var` are sent directly to the controlled
/// zero state, which is what the generator clauses would produce up to
/// semantics.
pub fn cderiv(t: &Term, var: &str) -> Result<ControlledState> {
    check_linear(t)?;
    Ok(cderiv_rec(t, var))
}

/// `∂_C`: uncontrol the C-derivative.
pub fn partial_c(t: &Term, var: &str) -> Result<Term> {
    let c = cderiv(t, var)?;
    uncontrol(&c, t.inputs(), t.outputs())
}

/// `⟦d2 ∘ (d1 ⊗ x_beta(n, m, var))⟧ = ⟦original⟧`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredForm {
    pub d2: Term,
    pub d1: Term,
    pub n: usize,
    pub m: usize,
    pub var: String,
}

impl FactoredForm {
    pub fn reassemble(&self) -> Term {
        Term::tensor(&self.d1, &x_beta(self.n, self.m, &self.var)).then(&self.d2)
    }

    /// Replace the `x_beta` block by another term with the same outputs.
    pub fn plug(&self, block: &Term) -> Term {
        Term::tensor(&self.d1, block).then(&self.d2)
    }
}

/// Lift `t` to a term with extra trailing inputs, one per unit of `var` in
/// a phase, each to be fed by `X(0,1,sign·var)`.
fn lift(t: &Term, var: &str) -> (Term, Vec<i64>) {
    match t.node() {
        Node::Gen(g) => {
            let Some(phase) = g.phase() else { return (t.clone(), vec![]) };
            let k = phase.coeff(var);
            if k == 0 {
                return (t.clone(), vec![]);
            }
            let rest = phase.without(var);
            let signs = vec![k.signum(); k.unsigned_abs() as usize];
            let extra = signs.len();
            let term = match g {
                Generator::X { inputs, outputs, .. } => Term::x(inputs + extra, *outputs, rest),
                Generator::Z { inputs, outputs, .. } => {
                    // H·X(0,1,β) = Z(0,1,β)
                    let hs = Term::tensor_all(std::iter::repeat_with(Term::h).take(extra));
                    Term::tensor(&Term::ids(*inputs), &hs).then(&Term::z(inputs + extra, *outputs, rest))
                }
                _ => unreachable!(),
            };
            (term, signs)
        }
        Node::Tensor { left, right } => {
            let (l, sl) = lift(left, var);
            let (r, sr) = lift(right, var);
            let (nl, nr) = (left.inputs(), right.inputs());
            // (nl, nr, sl, sr) -> (nl, sl, nr, sr)
            let ns = nl + sl.len();
            let perm: Vec<usize> = (0..nl)
                .chain((0..nr).map(|i| ns + i))
                .chain((0..sl.len()).map(|i| nl + i))
                .chain((0..sr.len()).map(|i| ns + nr + i))
                .collect();
            let body = Term::tensor(&l, &r);
            let term = if sl.is_empty() || nr == 0 { body } else { permutation(&perm).then(&body) };
            (term, [sl, sr].concat())
        }
        Node::Compose { later, earlier } => {
            let (a, sa) = lift(earlier, var);
            let (b, sb) = lift(later, var);
            let term = Term::tensor(&a, &Term::ids(sb.len())).then(&b);
            (term, [sa, sb].concat())
        }
    }
}

/// Isolate every occurrence of `var` into one `x_beta` block.
pub fn factor_beta(t: &Term, var: &str) -> Result<FactoredForm> {
    check_linear(t)?;
    let n_in = t.inputs();
    let (lifted, signs) = lift(t, var);
    let plus = signs.iter().filter(|&&s| s > 0).count();
    let minus = signs.len() - plus;
    // Block position j (pluses first) feeds the j-th extra input of that sign.
    let mut perm = vec![0; signs.len()];
    let (mut pi, mut mi) = (0, plus);
    for (pos, s) in signs.iter().enumerate() {
        if *s > 0 {
            perm[pi] = pos;
            pi += 1;
        } else {
            perm[mi] = pos;
            mi += 1;
        }
    }
    let d2 = if perm.iter().enumerate().all(|(i, &p)| i == p) {
        lifted
    } else {
        Term::tensor(&Term::ids(n_in), &permutation(&perm)).then(&lifted)
    };
    Ok(FactoredForm { d2, d1: Term::ids(n_in), n: plus, m: minus, var: var.to_string() })
}

/// Controlled triangle on (control, target), built as the sum of
/// `1_c ⊗ id_t` and `⟨1|_c ⊗ |0⟩⟨1|_t` via controlled states.
pub fn ctriangle() -> Term {
    // Legs ordered (c, t, t'): the bent 2 → 1 map (c, t) ↦ t'.
    let keep = Term::tensor(&Term::zq(0, 1, 0), &Term::cap());
    let flip = Term::tensor_all([ket1(), ket1(), ket0()]);
    let sum = cs_sum(&cs_from_state(&keep, 4), &cs_from_state(&flip, 0)).expect("equal sizes");
    let k = uncontrol(&sum, 2, 1).expect("arity");
    let (mut b, w) = Builder::new(2);
    let c = b.apply(&copy(2), &[w[0]]);
    let t = b.apply(&k, &[c[1], w[1]]);
    b.finish(&[c[0], t[0]])
}

/// `Δ` on `n + m` wires: `|x⟩ ↦ (|x⁺| − |x⁻|)|x⟩`, from controlled triangles
/// targeting a bookkeeping wire prepared in `|1⟩` and closed with `⟨0|`.
pub fn delta_diagram(n: usize, m: usize) -> Term {
    let (mut b, w) = Builder::new(n + m);
    let mut acc = b.add_state(&ket1())[0];
    let mut data = w.clone();
    for (j, slot) in data.iter_mut().enumerate() {
        if j == n {
            acc = b.apply(&Term::zq(1, 1, 4), &[acc])[0];
        }
        let o = b.apply(&ctriangle(), &[*slot, acc]);
        *slot = o[0];
        acc = o[1];
    }
    if m == 0 {
        acc = b.apply(&Term::zq(1, 1, 4), &[acc])[0];
    }
    b.apply(&bra0(), &[acc]);
    b.finish(&data)
}

/// `Δ̃ = h^{⊗k} Δ h^{⊗k}`.
pub fn delta_tilde_diagram(n: usize, m: usize) -> Term {
    let hs = Term::tensor_all(std::iter::repeat_with(Term::h).take(n + m));
    Term::chain([hs.clone(), delta_diagram(n, m), hs])
}

/// Derivative of the block `x_beta(n, m, var)`: `i · Δ̃ · x_beta(n, m)`.
pub fn dzx_x(n: usize, m: usize, var: &str) -> Result<Term> {
    if n + m == 0 {
        return Err(Error::InvalidArity("dzx_x needs at least one state".into()));
    }
    let body = x_beta(n, m, var).then(&delta_tilde_diagram(n, m));
    Ok(Term::tensor(&i(), &body))
}

/// `∂_ZX`: factor, then differentiate the `x_beta` block.
pub fn partial_zx(t: &Term, var: &str) -> Result<Term> {
    let f = factor_beta(t, var)?;
    if f.n + f.m == 0 {
        return Ok(zero_term(t.inputs(), t.outputs()));
    }
    Ok(f.plug(&dzx_x(f.n, f.m, var)?))
}

/// Derivative of `y_beta(p, var)`.
///
/// With `R = X(1,1,−β) ⊗ X(1,1,+β)` on each pair, `y_beta(1) = R·2|00⟩`
/// and its derivative is `i·R·(|10⟩ − |01⟩)`; a W state selects which pair
/// is differentiated.
pub fn dpair_y(p: usize, var: &str) -> Result<Term> {
    if p == 0 {
        return Err(Error::InvalidArity("dpair_y needs at least one pair".into()));
    }
    // |0⟩ ↦ 2|00⟩, |1⟩ ↦ |10⟩ − |01⟩
    let seed =
        Term::chain([scale_control(&c_half()), w_split(), Term::tensor(&Term::id(), &Term::zq(1, 1, 4))]);
    let seed = Term::tensor(&two(), &seed);
    let rot = Term::tensor(&Term::x(1, 1, PhaseExpr::var(var, -1)), &Term::x(1, 1, PhaseExpr::var(var, 1)));
    let per_pair = seed.then(&rot);
    let body = Term::chain([ket1(), w_split_n(p), Term::tensor_all(std::iter::repeat_n(per_pair, p))]);
    Ok(Term::tensor(&i(), &body))
}

/// `∂_P`: pair up the `±β` states (padding the smaller side with states
/// that are capped off, each worth `√2`) and use [`dpair_y`].
pub fn partial_pair(t: &Term, var: &str) -> Result<Term> {
    let f = factor_beta(t, var)?;
    if f.n + f.m == 0 {
        return Ok(zero_term(t.inputs(), t.outputs()));
    }
    let p = f.n.max(f.m);
    let n_in = t.inputs();
    // Route the pair block (−,+,−,+,…) into d2's (+…, −…) block.
    let (mut b, w) = Builder::new(n_in + 2 * p);
    let orig = &w[..n_in];
    let pairs = &w[n_in..];
    let mut feed: Vec<_> = orig.to_vec();
    feed.extend((0..f.n).map(|j| pairs[2 * j + 1]));
    feed.extend((0..f.m).map(|j| pairs[2 * j]));
    for j in f.n..p {
        b.apply(&Term::zq(1, 0, 0), &[pairs[2 * j + 1]]);
    }
    for j in f.m..p {
        b.apply(&Term::zq(1, 0, 0), &[pairs[2 * j]]);
    }
    let outs = b.apply(&f.d2, &feed);
    // Each capped state Z(1,0,0)·X(0,1,±β) contributes √2.
    let surplus = (2 * p - f.n - f.m) as i64;
    b.scalar(&sqrt2_pow(-surplus));
    let d2 = b.finish(&outs);
    Ok(Term::tensor(&f.d1, &dpair_y(p, var)?).then(&d2))
}

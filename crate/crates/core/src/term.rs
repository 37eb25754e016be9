//! ZX-diagram terms: generators combined by sequential composition and tensor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::phase::PhaseExpr;

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Z { inputs: usize, outputs: usize, phase: PhaseExpr },
    X { inputs: usize, outputs: usize, phase: PhaseExpr },
    H,
    Id,
    Swap,
    Cup,
    Cap,
    Empty,
}

impl Generator {
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Generator::Z { inputs, outputs, .. } | Generator::X { inputs, outputs, .. } => {
                (*inputs, *outputs)
            }
            Generator::H | Generator::Id => (1, 1),
            Generator::Swap => (2, 2),
            Generator::Cup => (2, 0),
            Generator::Cap => (0, 2),
            Generator::Empty => (0, 0),
        }
    }

    pub fn phase(&self) -> Option<&PhaseExpr> {
        match self {
            Generator::Z { phase, .. } | Generator::X { phase, .. } => Some(phase),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Generator::Z { .. } => "z",
            Generator::X { .. } => "x",
            Generator::H => "h",
            Generator::Id => "id",
            Generator::Swap => "swap",
            Generator::Cup => "cup",
            Generator::Cap => "cap",
            Generator::Empty => "empty",
        }
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Gen(Generator),
    Compose { later: Term, earlier: Term },
    Tensor { left: Term, right: Term },
}

#[derive(Debug)]
struct Inner {
    node: Node,
    arity: (usize, usize),
}

/// An immutable, well-typed diagram. Cloning is cheap; subterms are shared.
#[derive(Clone, Debug)]
pub struct Term(Arc<Inner>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.arity == other.0.arity && self.0.node == other.0.node)
    }
}

impl Term {
    pub fn gen(g: Generator) -> Term {
        let arity = g.arity();
        Term(Arc::new(Inner { node: Node::Gen(g), arity }))
    }

    /// `later ∘ earlier`.
    pub fn compose(later: &Term, earlier: &Term) -> Result<Term> {
        if earlier.outputs() != later.inputs() {
            return Err(Error::ArityMismatch {
                position: "compose".into(),
                detail: format!(
                    "earlier has {} outputs but later has {} inputs",
                    earlier.outputs(),
                    later.inputs()
                ),
            });
        }
        Ok(Term(Arc::new(Inner {
            arity: (earlier.inputs(), later.outputs()),
            node: Node::Compose { later: later.clone(), earlier: earlier.clone() },
        })))
    }

    pub fn tensor(left: &Term, right: &Term) -> Term {
        Term(Arc::new(Inner {
            arity: (left.inputs() + right.inputs(), left.outputs() + right.outputs()),
            node: Node::Tensor { left: left.clone(), right: right.clone() },
        }))
    }

    /// `later ∘ self`. Panics on an arity mismatch; used by internal builders
    /// whose wiring is correct by construction.
    pub fn then(&self, later: &Term) -> Term {
        match Term::compose(later, self) {
            Ok(t) => t,
            Err(e) => panic!("internal wiring error: {e}"),
        }
    }

    /// `self ⊗ other`.
    pub fn par(&self, other: &Term) -> Term {
        Term::tensor(self, other)
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn arity(&self) -> (usize, usize) {
        self.0.arity
    }

    pub fn inputs(&self) -> usize {
        self.0.arity.0
    }

    pub fn outputs(&self) -> usize {
        self.0.arity.1
    }

    pub fn z(inputs: usize, outputs: usize, phase: PhaseExpr) -> Term {
        Term::gen(Generator::Z { inputs, outputs, phase })
    }

    pub fn x(inputs: usize, outputs: usize, phase: PhaseExpr) -> Term {
        Term::gen(Generator::X { inputs, outputs, phase })
    }

    /// Z-spider with constant phase `q·π/4`.
    pub fn zq(inputs: usize, outputs: usize, q: i64) -> Term {
        Term::z(inputs, outputs, PhaseExpr::quarter(q))
    }

    /// X-spider with constant phase `q·π/4`.
    pub fn xq(inputs: usize, outputs: usize, q: i64) -> Term {
        Term::x(inputs, outputs, PhaseExpr::quarter(q))
    }

    pub fn h() -> Term {
        Term::gen(Generator::H)
    }

    pub fn id() -> Term {
        Term::gen(Generator::Id)
    }

    pub fn swap() -> Term {
        Term::gen(Generator::Swap)
    }

    pub fn cup() -> Term {
        Term::gen(Generator::Cup)
    }

    pub fn cap() -> Term {
        Term::gen(Generator::Cap)
    }

    pub fn empty() -> Term {
        Term::gen(Generator::Empty)
    }

    /// Identity on `k` wires (`Empty` for `k = 0`).
    pub fn ids(k: usize) -> Term {
        Term::tensor_all(std::iter::repeat_with(Term::id).take(k))
    }

    /// Balanced tensor product of a sequence; `Empty` when the sequence is empty.
    pub fn tensor_all<I: IntoIterator<Item = Term>>(items: I) -> Term {
        let items: Vec<Term> = items.into_iter().collect();
        fn go(items: &[Term]) -> Term {
            match items.len() {
                0 => Term::empty(),
                1 => items[0].clone(),
                n => Term::tensor(&go(&items[..n / 2]), &go(&items[n / 2..])),
            }
        }
        go(&items)
    }

    /// Sequential composition of `steps` in application order, balanced.
    pub fn chain<I: IntoIterator<Item = Term>>(steps: I) -> Term {
        let steps: Vec<Term> = steps.into_iter().collect();
        fn go(steps: &[Term]) -> Term {
            match steps.len() {
                1 => steps[0].clone(),
                n => go(&steps[..n / 2]).then(&go(&steps[n / 2..])),
            }
        }
        assert!(!steps.is_empty(), "chain of zero steps");
        go(&steps)
    }

    pub fn is_gen(&self) -> Option<&Generator> {
        match self.node() {
            Node::Gen(g) => Some(g),
            _ => None,
        }
    }

    /// Number of generator occurrences.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Gen(_) => 1,
            Node::Compose { later, earlier } => later.size() + earlier.size(),
            Node::Tensor { left, right } => left.size() + right.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.node() {
            Node::Gen(_) => 1,
            Node::Compose { later: a, earlier: b } | Node::Tensor { left: a, right: b } => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Visit every generator occurrence, left to right.
    pub fn for_each_gen(&self, f: &mut impl FnMut(&Generator)) {
        match self.node() {
            Node::Gen(g) => f(g),
            Node::Compose { later, earlier } => {
                earlier.for_each_gen(f);
                later.for_each_gen(f);
            }
            Node::Tensor { left, right } => {
                left.for_each_gen(f);
                right.for_each_gen(f);
            }
        }
    }

    /// Sorted set of variable names occurring in phases.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_gen(&mut |g| {
            if let Some(p) = g.phase() {
                out.extend(p.vars().map(str::to_string));
            }
        });
        out
    }

    pub fn mentions(&self, var: &str) -> bool {
        let mut found = false;
        self.for_each_gen(&mut |g| {
            if let Some(p) = g.phase() {
                found |= p.coeff(var) != 0;
            }
        });
        found
    }

    /// Rebuild the term with every generator replaced by `f(g)`; `f` must
    /// preserve arities up to the given swap of inputs and outputs.
    fn map_gens(&self, flip: bool, f: &impl Fn(&Generator) -> Term) -> Term {
        match self.node() {
            Node::Gen(g) => f(g),
            Node::Compose { later, earlier } => {
                let (l, e) = (later.map_gens(flip, f), earlier.map_gens(flip, f));
                if flip {
                    l.then(&e)
                } else {
                    e.then(&l)
                }
            }
            Node::Tensor { left, right } => Term::tensor(&left.map_gens(flip, f), &right.map_gens(flip, f)),
        }
    }

    /// Conjugate transpose: flip the diagram and negate every phase.
    pub fn dagger(&self) -> Term {
        self.map_gens(true, &|g| match g {
            Generator::Z { inputs, outputs, phase } => Term::z(*outputs, *inputs, -phase),
            Generator::X { inputs, outputs, phase } => Term::x(*outputs, *inputs, -phase),
            Generator::Cup => Term::cap(),
            Generator::Cap => Term::cup(),
            other => Term::gen(other.clone()),
        })
    }

    /// Exchange the colours of all spiders.
    pub fn color_swap(&self) -> Term {
        self.map_gens(false, &|g| match g {
            Generator::Z { inputs, outputs, phase } => Term::x(*inputs, *outputs, phase.clone()),
            Generator::X { inputs, outputs, phase } => Term::z(*inputs, *outputs, phase.clone()),
            other => Term::gen(other.clone()),
        })
    }

    /// Negate every phase (entrywise complex conjugate of the interpretation).
    pub fn conjugate(&self) -> Term {
        self.map_phases(&|p| -p)
    }

    pub fn map_phases(&self, f: &impl Fn(&PhaseExpr) -> PhaseExpr) -> Term {
        self.map_gens(false, &|g| match g {
            Generator::Z { inputs, outputs, phase } => Term::z(*inputs, *outputs, f(phase)),
            Generator::X { inputs, outputs, phase } => Term::x(*inputs, *outputs, f(phase)),
            other => Term::gen(other.clone()),
        })
    }

    /// Replace variables by real angles. Every variable of the term must be bound.
    pub fn substitute(&self, assignment: &BTreeMap<String, f64>) -> Result<Term> {
        if let Some(v) = self.vars().into_iter().find(|v| !assignment.contains_key(v)) {
            return Err(Error::UnboundVariable(v));
        }
        Ok(self.map_phases(&|p| p.substitute(assignment)))
    }

    /// Replace only the listed variables, leaving the others symbolic.
    pub fn substitute_partial(&self, assignment: &BTreeMap<String, f64>) -> Term {
        self.map_phases(&|p| p.substitute(assignment))
    }
}

/// `n` X-spiders `0→1` with phase `+var`, then `m` with phase `−var`.
pub fn x_beta(n: usize, m: usize, var: &str) -> Term {
    Term::tensor_all(
        std::iter::repeat_with(|| Term::x(0, 1, PhaseExpr::var(var, 1)))
            .take(n)
            .chain(std::iter::repeat_with(|| Term::x(0, 1, PhaseExpr::var(var, -1))).take(m)),
    )
}

/// `n` pairs `(X(−var), X(+var))` of single-output X-spiders.
pub fn y_beta(n: usize, var: &str) -> Term {
    Term::tensor_all(
        (0..n).flat_map(|_| [Term::x(0, 1, PhaseExpr::var(var, -1)), Term::x(0, 1, PhaseExpr::var(var, 1))]),
    )
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Gen(g) => match g {
                Generator::Z { inputs, outputs, phase } => write!(f, "Z{inputs}->{outputs}({phase})"),
                Generator::X { inputs, outputs, phase } => write!(f, "X{inputs}->{outputs}({phase})"),
                other => write!(f, "{}", other.kind_name()),
            },
            Node::Compose { later, earlier } => write!(f, "({later} . {earlier})"),
            Node::Tensor { left, right } => write!(f, "({left} x {right})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_arities() {
        assert_eq!(Term::cap().arity(), (0, 2));
        assert_eq!(Term::empty().arity(), (0, 0));
        assert_eq!(Term::tensor(&Term::h(), &Term::cup()).arity(), (3, 1));
    }

    #[test]
    fn mismatched_compose_is_rejected() {
        let err = Term::compose(&Term::cup(), &Term::h()).unwrap_err();
        assert_eq!(err.name(), "ArityMismatch");
    }

    #[test]
    fn dagger_swaps_cup_and_cap() {
        assert_eq!(Term::cap().dagger(), Term::cup());
        let z = Term::z(0, 1, PhaseExpr::var("beta", 1));
        assert_eq!(z.dagger(), Term::z(1, 0, PhaseExpr::var("beta", -1)));
    }

    #[test]
    fn blocks() {
        assert_eq!(x_beta(0, 0, "b"), Term::empty());
        assert_eq!(y_beta(0, "b"), Term::empty());
        assert_eq!(x_beta(2, 1, "b").arity(), (0, 3));
        assert_eq!(y_beta(2, "b").arity(), (0, 4));
    }

    #[test]
    fn substitute_requires_all_vars() {
        let t = x_beta(1, 0, "b");
        assert_eq!(t.substitute(&BTreeMap::new()).unwrap_err().name(), "UnboundVariable");
        let s = t.substitute(&BTreeMap::from([("b".into(), std::f64::consts::PI)])).unwrap();
        assert_eq!(s, Term::xq(0, 1, 4));
        let z = Term::z(1, 1, PhaseExpr::var("b", 2) + PhaseExpr::quarter(1));
        let s = z.substitute(&BTreeMap::from([("b".into(), std::f64::consts::FRAC_PI_2)])).unwrap();
        assert_eq!(s, Term::zq(1, 1, 5));
        assert_eq!(Term::h().substitute(&BTreeMap::new()).unwrap(), Term::h());
    }
}

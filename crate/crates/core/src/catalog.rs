//! Equations of the calculus, instantiated at small arities. Each entry is
//! a claim `⟦lhs⟧ = ⟦rhs⟧`; the test suite checks every one numerically.

use crate::builder::{permutation, Builder};
use crate::derivative::ctriangle;
use crate::gadgets::{inv_sqrt2, not, phase, sqrt2, sqrt2_pow, triangle, triangle_t, two, w_split};
use crate::phase::PhaseExpr;
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    Axiom,
    Lemma,
    TriangleDefinition,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Axiom => "axiom",
            Source::Lemma => "lemma",
            Source::TriangleDefinition => "triangle-def",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EquationCatalogEntry {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub source: Source,
}

fn alpha() -> PhaseExpr {
    PhaseExpr::var("alpha", 1)
}

fn beta() -> PhaseExpr {
    PhaseExpr::var("beta", 1)
}

fn hs(k: usize) -> Term {
    Term::tensor_all(std::iter::repeat_with(Term::h).take(k))
}

fn nots(k: usize) -> Term {
    Term::tensor_all(std::iter::repeat_with(not).take(k))
}

/// The axioms with their colour-swapped and upside-down variants.
fn axioms() -> Vec<(String, Term, Term)> {
    let mut out: Vec<(String, Term, Term)> = Vec::new();
    let mut push = |name: &str, lhs: Term, rhs: Term| out.push((name.to_string(), lhs, rhs));

    // Spider fusion along one wire.
    push(
        "S1-1-2-2",
        Term::tensor(&Term::z(1, 2, alpha()), &Term::id())
            .then(&Term::tensor(&Term::id(), &Term::z(2, 1, beta()))),
        Term::z(2, 2, alpha() + beta()),
    );
    push("S1-2-1-3", Term::z(2, 1, alpha()).then(&Term::z(1, 3, beta())), Term::z(2, 3, alpha() + beta()));
    push(
        "S1-3-3",
        Term::z(3, 1, alpha()).then(&Term::zq(1, 1, 1)).then(&Term::z(1, 3, beta())),
        Term::z(3, 3, alpha() + beta() + PhaseExpr::quarter(1)),
    );
    push("S1-scalar", Term::z(0, 1, alpha()).then(&Term::z(1, 0, beta())), Term::z(0, 0, alpha() + beta()));
    push("S2-id", Term::zq(1, 1, 0), Term::id());
    push("S2-cap", Term::zq(0, 2, 0), Term::cap());
    push("S2-cup", Term::zq(2, 0, 0), Term::cup());
    push("H", Term::h().then(&Term::h()), Term::id());
    push("H-1-1", Term::chain([Term::h(), Term::z(1, 1, alpha()), Term::h()]), Term::x(1, 1, alpha()));
    push("H-2-1", Term::chain([hs(2), Term::z(2, 1, alpha()), Term::h()]), Term::x(2, 1, alpha()));
    push("H-1-3", Term::chain([Term::h(), Term::z(1, 3, alpha()), hs(3)]), Term::x(1, 3, alpha()));
    push("H-3-0", hs(3).then(&Term::z(3, 0, alpha())), Term::x(3, 0, alpha()));
    push("E", Term::tensor_all([two(), inv_sqrt2(), inv_sqrt2()]), Term::empty());
    push(
        "B1",
        Term::tensor(&sqrt2(), &Term::xq(0, 1, 0).then(&Term::zq(1, 2, 0))),
        Term::tensor(&Term::xq(0, 1, 0), &Term::xq(0, 1, 0)),
    );
    push(
        "B2",
        Term::chain([
            Term::tensor(&Term::zq(1, 2, 0), &Term::zq(1, 2, 0)),
            permutation(&[0, 2, 1, 3]),
            Term::tensor(&Term::xq(2, 1, 0), &Term::xq(2, 1, 0)),
        ]),
        Term::tensor(&inv_sqrt2(), &Term::xq(2, 1, 0).then(&Term::zq(1, 2, 0))),
    );
    push(
        "K-1-2",
        nots(1).then(&Term::z(1, 2, alpha())),
        Term::tensor(&phase(alpha()), &Term::z(1, 2, -alpha()).then(&nots(2))),
    );
    push(
        "K-2-1",
        nots(2).then(&Term::z(2, 1, alpha())),
        Term::tensor(&phase(alpha()), &Term::z(2, 1, -alpha()).then(&nots(1))),
    );
    push(
        "EU",
        Term::h(),
        Term::tensor(
            &phase(PhaseExpr::quarter(-1)),
            &Term::chain([Term::zq(1, 1, 2), Term::xq(1, 1, 2), Term::zq(1, 1, 2)]),
        ),
    );
    push(
        "SUP",
        Term::tensor(&Term::z(0, 1, alpha()), &Term::z(0, 1, alpha() + PhaseExpr::pi()))
            .then(&Term::xq(2, 1, 0)),
        Term::tensor_all([
            sqrt2_pow(-2),
            Term::z(0, 0, alpha().scale(2) + PhaseExpr::pi()),
            Term::xq(0, 1, 0),
        ]),
    );
    // Controlled triangles sharing a target commute.
    let two_ctriangles = |first: usize, second: usize| {
        let (mut b, w) = Builder::new(3);
        let mut w = w;
        for c in [first, second] {
            let o = b.apply(&ctriangle(), &[w[c], w[2]]);
            w[c] = o[0];
            w[2] = o[1];
        }
        b.finish(&w)
    };
    push("C", two_ctriangles(0, 1), two_ctriangles(1, 0));
    push(
        "BW",
        w_split().then(&Term::tensor(&w_split(), &Term::id())),
        w_split().then(&Term::tensor(&Term::id(), &w_split())),
    );

    let mut variants = Vec::new();
    for (name, lhs, rhs) in &out {
        let base = name.split('-').next().unwrap();
        if ["S1", "B1", "H"].contains(&base) {
            variants.push((format!("{name}-colour-swapped"), lhs.color_swap(), rhs.color_swap()));
            variants.push((format!("{name}-upside-down"), lhs.dagger(), rhs.dagger()));
        }
    }
    out.extend(variants);
    out
}

fn lemmas() -> Vec<(String, Term, Term)> {
    let pi_z = || Term::zq(1, 1, 4);
    vec![
        ("sqrt-2-sqrt-1-over-2".into(), Term::tensor(&sqrt2(), &inv_sqrt2()), Term::empty()),
        ("sqrt-2-squared".into(), Term::tensor(&sqrt2(), &sqrt2()), two()),
        (
            "phase-scalars-product".into(),
            Term::tensor(&phase(alpha()), &phase(beta())),
            phase(alpha() + beta()),
        ),
        ("pi-push".into(), not().then(&Term::zq(1, 2, 0)), Term::zq(1, 2, 0).then(&nots(2))),
        ("zero-triangle-down".into(), Term::xq(0, 1, 0).then(&triangle()), Term::xq(0, 1, 0)),
        (
            "zero-triangle-up".into(),
            triangle().then(&Term::xq(1, 0, 0)),
            Term::tensor(&sqrt2(), &Term::zq(1, 0, 0)),
        ),
        (
            "pi-triangle-down".into(),
            Term::xq(0, 1, 4).then(&triangle()),
            Term::tensor(&sqrt2(), &Term::zq(0, 1, 0)),
        ),
        ("pi-triangle-up".into(), triangle().then(&Term::xq(1, 0, 4)), Term::xq(1, 0, 4)),
        (
            "two-pi-triangle-is-identity".into(),
            Term::chain([pi_z(), triangle(), pi_z(), triangle()]),
            Term::id(),
        ),
        (
            "factor-beta".into(),
            Term::tensor(&Term::tensor(&Term::x(0, 1, beta()), &Term::x(0, 1, beta())), &Term::id())
                .then(&Term::xq(3, 1, 1)),
            Term::x(1, 1, beta().scale(2) + PhaseExpr::quarter(1)),
        ),
    ]
}

fn triangle_definitions() -> Vec<(String, Term, Term)> {
    // Bending the triangle with a cap and a cup transposes it.
    let bent = Term::chain([
        Term::tensor(&Term::id(), &Term::cap()),
        Term::tensor_all([Term::id(), triangle(), Term::id()]),
        Term::tensor(&Term::cup(), &Term::id()),
    ]);
    vec![
        ("triangle-transpose".into(), bent, triangle_t()),
        ("triangle-not-conjugate".into(), Term::chain([not(), triangle(), not()]), triangle_t()),
    ]
}

/// Every catalogued equation, in a fixed order.
pub fn equation_catalog() -> Vec<EquationCatalogEntry> {
    let tag = |source: Source| {
        move |(name, lhs, rhs): (String, Term, Term)| EquationCatalogEntry { name, lhs, rhs, source }
    };
    axioms()
        .into_iter()
        .map(tag(Source::Axiom))
        .chain(lemmas().into_iter().map(tag(Source::Lemma)))
        .chain(triangle_definitions().into_iter().map(tag(Source::TriangleDefinition)))
        .collect()
}

//! Addition and differentiation of parametrized ZX-diagrams, carried out
//! inside the calculus and checked against a matrix semantics.

pub mod builder;
pub mod catalog;
pub mod cli;
pub mod controlize;
pub mod derivative;
pub mod error;
pub mod gadgets;
pub mod hamiltonian;
pub mod io;
pub mod phase;
pub mod random;
pub mod semantics;
pub mod term;

pub use error::{Error, Result};
pub use phase::PhaseExpr;
pub use term::{x_beta, y_beta, Generator, Term};

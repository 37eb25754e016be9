//! Circuit-style construction of terms over named wires.
//!
//! Wires are opaque handles. Applying an `a → b` term to `a` existing wires
//! consumes them and returns `b` fresh ones; the builder inserts the swap
//! networks needed to bring the operands together.

use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Wire(usize);

pub struct Builder {
    inputs: usize,
    order: Vec<Wire>,
    steps: Vec<Term>,
    next: usize,
}

impl Builder {
    /// A builder with `n` input wires.
    pub fn new(n: usize) -> (Builder, Vec<Wire>) {
        let wires: Vec<Wire> = (0..n).map(Wire).collect();
        let b = Builder { inputs: n, order: wires.clone(), steps: Vec::new(), next: n };
        (b, wires)
    }

    fn fresh(&mut self, k: usize) -> Vec<Wire> {
        let out = (self.next..self.next + k).map(Wire).collect();
        self.next += k;
        out
    }

    pub fn width(&self) -> usize {
        self.order.len()
    }

    /// Apply `op` to the wires `ins` (in that order) and return its output wires.
    pub fn apply(&mut self, op: &Term, ins: &[Wire]) -> Vec<Wire> {
        assert_eq!(op.inputs(), ins.len(), "operand count does not match the term");
        for w in ins {
            assert!(self.order.contains(w), "wire {w:?} is not live");
        }
        let width = self.order.len();
        // Fast path: operands already adjacent and in order.
        let start = match ins.first() {
            Some(first) => self.order.iter().position(|w| w == first).unwrap(),
            None => width,
        };
        let contiguous = start + ins.len() <= width && self.order[start..start + ins.len()] == *ins;
        let (pos, rest_order) = if contiguous {
            (start, None)
        } else {
            let mut target: Vec<Wire> = ins.to_vec();
            target.extend(self.order.iter().copied().filter(|w| !ins.contains(w)));
            (0, Some(target))
        };
        if let Some(target) = rest_order {
            self.permute_to(&target);
        }
        let outs = self.fresh(op.outputs());
        let before = pos;
        let after = self.order.len() - pos - ins.len();
        let mut parts = Vec::new();
        if before > 0 {
            parts.push(Term::ids(before));
        }
        parts.push(op.clone());
        if after > 0 {
            parts.push(Term::ids(after));
        }
        self.steps.push(Term::tensor_all(parts));
        let mut order: Vec<Wire> = self.order[..pos].to_vec();
        order.extend(&outs);
        order.extend(&self.order[pos + ins.len()..]);
        self.order = order;
        outs
    }

    /// Apply a `0 → k` state and return its wires.
    pub fn add_state(&mut self, state: &Term) -> Vec<Wire> {
        self.apply(state, &[])
    }

    /// Multiply by a `0 → 0` scalar diagram.
    pub fn scalar(&mut self, s: &Term) {
        assert_eq!(s.arity(), (0, 0));
        self.apply(s, &[]);
    }

    /// Reorder the live wires to `target` using layers of adjacent swaps.
    fn permute_to(&mut self, target: &[Wire]) {
        let mut cur = self.order.clone();
        let idx = |w: &Wire| target.iter().position(|t| t == w).unwrap();
        let k = cur.len();
        let mut round = 0;
        while cur != target {
            let mut layer: Vec<Term> = Vec::new();
            let mut changed = false;
            let mut j = 0;
            while j < k {
                if j % 2 == round % 2 && j + 1 < k && idx(&cur[j]) > idx(&cur[j + 1]) {
                    cur.swap(j, j + 1);
                    layer.push(Term::swap());
                    changed = true;
                    j += 2;
                } else {
                    layer.push(Term::id());
                    j += 1;
                }
            }
            if changed {
                self.steps.push(Term::tensor_all(layer));
            }
            round += 1;
        }
        self.order = cur;
    }

    /// Finish with the live wires in the requested order (all must be listed).
    pub fn finish(mut self, outputs: &[Wire]) -> Term {
        assert_eq!(outputs.len(), self.order.len(), "every live wire must be an output");
        if self.order != outputs {
            self.permute_to(outputs);
        }
        if self.steps.is_empty() {
            return Term::ids(self.inputs);
        }
        Term::chain(std::mem::take(&mut self.steps))
    }
}

/// Permutation term sending input position `i` to output position `perm[i]`.
pub fn permutation(perm: &[usize]) -> Term {
    let (b, ins) = Builder::new(perm.len());
    let mut outs = vec![ins[0]; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        outs[p] = ins[i];
    }
    b.finish(&outs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{interp_at, Assignment};
    use num_complex::Complex64 as C64;

    #[test]
    fn permutation_moves_basis_states() {
        let p = permutation(&[2, 0, 1]);
        let m = interp_at(&p, &Assignment::new()).unwrap();
        // input bits (a,b,c) = (1,0,0) lands at output position 2 -> |001⟩.
        assert_eq!(m[(0b001, 0b100)], C64::new(1.0, 0.0));
        assert_eq!(m[(0b100, 0b010)], C64::new(1.0, 0.0));
    }

    #[test]
    fn apply_routes_non_adjacent_wires() {
        let (mut b, w) = Builder::new(3);
        let op = Term::swap();
        let o = b.apply(&op, &[w[2], w[0]]);
        let t = b.finish(&[o[1], w[1], o[0]]);
        // The swap exchanges the two values; reading them back crosswise swaps wires 0 and 2.
        let m = interp_at(&t, &Assignment::new()).unwrap();
        assert_eq!(m[(0b001, 0b100)], C64::new(1.0, 0.0));
        assert_eq!(m[(0b010, 0b010)], C64::new(1.0, 0.0));
    }
}

//! Evaluation of a term as a tensor network.
//!
//! The term is flattened into spider/Hadamard nodes joined by edges (wires,
//! cups and caps are resolved by union-find), then contracted pairwise in a
//! greedy order that keeps intermediate tensors small. This gives exactly the
//! matrix of the compositional semantics without materialising the wide
//! intermediate Kronecker products that large gadget terms would need.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::phase::PhaseExpr;
use crate::term::{Generator, Node, Term};

pub(crate) trait Coeff: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

/// Supplies constants and phase factors `e^{iα}` in the coefficient ring.
pub(crate) trait Ring {
    type S: Coeff;
    fn constant(&self, c: C64) -> Self::S;
    fn phase(&self, p: &PhaseExpr) -> Result<Self::S>;
    /// Largest intermediate tensor rank allowed.
    fn max_rank(&self) -> usize;
}

impl Coeff for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

#[derive(Clone, Debug)]
struct Tensor<S> {
    legs: Vec<usize>,
    data: Vec<S>,
}

enum Kind {
    Z,
    X,
    H,
}

struct FlatNode {
    kind: Kind,
    phase: Option<PhaseExpr>,
    edges: Vec<usize>,
}

#[derive(Default)]
struct Flat {
    parent: Vec<usize>,
    nodes: Vec<FlatNode>,
}

impl Flat {
    fn new_edge(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut e: usize) -> usize {
        while self.parent[e] != e {
            self.parent[e] = self.parent[self.parent[e]];
            e = self.parent[e];
        }
        e
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn flatten(&mut self, t: &Term, inputs: &[usize]) -> Vec<usize> {
        match t.node() {
            Node::Compose { later, earlier } => {
                let mid = self.flatten(earlier, inputs);
                self.flatten(later, &mid)
            }
            Node::Tensor { left, right } => {
                let (a, b) = inputs.split_at(left.inputs());
                let mut out = self.flatten(left, a);
                out.extend(self.flatten(right, b));
                out
            }
            Node::Gen(g) => match g {
                Generator::Id => inputs.to_vec(),
                Generator::Swap => vec![inputs[1], inputs[0]],
                Generator::Empty => vec![],
                Generator::Cup => {
                    self.union(inputs[0], inputs[1]);
                    vec![]
                }
                Generator::Cap => {
                    let e = self.new_edge();
                    vec![e, e]
                }
                Generator::H => {
                    let out = self.new_edge();
                    self.nodes.push(FlatNode { kind: Kind::H, phase: None, edges: vec![inputs[0], out] });
                    vec![out]
                }
                Generator::Z { outputs, phase, .. } | Generator::X { outputs, phase, .. } => {
                    let outs: Vec<usize> = (0..*outputs).map(|_| self.new_edge()).collect();
                    let mut edges = inputs.to_vec();
                    edges.extend(&outs);
                    let kind = if matches!(g, Generator::Z { .. }) { Kind::Z } else { Kind::X };
                    self.nodes.push(FlatNode { kind, phase: Some(phase.clone()), edges });
                    outs
                }
            },
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum End {
    Leg(usize, usize),
    Boundary(usize),
}

/// Contract `t` into a dense matrix in row-major order, `2^outputs × 2^inputs`.
pub(crate) fn contract<R: Ring>(t: &Term, ring: &R) -> Result<Vec<R::S>> {
    let (n, m) = t.arity();
    let mut flat = Flat::default();
    let inputs: Vec<usize> = (0..n).map(|_| flat.new_edge()).collect();
    let outputs = flat.flatten(t, &inputs);

    // Boundary labels: outputs are 0..m, inputs m..m+n.
    let mut ends: HashMap<usize, Vec<End>> = HashMap::new();
    for e in 0..flat.parent.len() {
        let r = flat.find(e);
        ends.entry(r).or_default();
    }
    for (j, &e) in outputs.iter().enumerate() {
        let r = flat.find(e);
        ends.get_mut(&r).unwrap().push(End::Boundary(j));
    }
    for (i, &e) in inputs.iter().enumerate() {
        let r = flat.find(e);
        ends.get_mut(&r).unwrap().push(End::Boundary(m + i));
    }
    for k in 0..flat.nodes.len() {
        for p in 0..flat.nodes[k].edges.len() {
            let e = flat.nodes[k].edges[p];
            let r = flat.find(e);
            ends.get_mut(&r).unwrap().push(End::Leg(k, p));
        }
    }

    let mut scalar = ring.constant(C64::new(1.0, 0.0));
    let mut labels: Vec<Vec<usize>> = flat.nodes.iter().map(|nd| vec![usize::MAX; nd.edges.len()]).collect();
    let mut tensors: Vec<Tensor<R::S>> = Vec::new();
    let mut next_label = n + m;
    let one = ring.constant(C64::new(1.0, 0.0));
    let zero = R::S::zero();
    let mut roots: Vec<usize> = ends.keys().copied().collect();
    roots.sort_unstable();
    for r in roots {
        match ends[&r].as_slice() {
            [] => scalar = scalar.mul(&ring.constant(C64::new(2.0, 0.0))),
            [End::Leg(a, p), End::Leg(b, q)] => {
                labels[*a][*p] = next_label;
                labels[*b][*q] = next_label;
                next_label += 1;
            }
            [End::Leg(a, p), End::Boundary(j)] | [End::Boundary(j), End::Leg(a, p)] => {
                labels[*a][*p] = *j;
            }
            [End::Boundary(i), End::Boundary(j)] => tensors.push(Tensor {
                legs: vec![*i, *j],
                data: vec![one.clone(), zero.clone(), zero.clone(), one.clone()],
            }),
            other => unreachable!("edge with {} endpoints", other.len()),
        }
    }

    for (k, nd) in flat.nodes.iter().enumerate() {
        let rank = nd.edges.len();
        if rank > ring.max_rank() {
            return Err(Error::TooLarge(format!("spider with {rank} legs")));
        }
        let data = match nd.kind {
            Kind::H => {
                let s = ring.constant(C64::new(FRAC_1_SQRT_2, 0.0));
                let ms = ring.constant(C64::new(-FRAC_1_SQRT_2, 0.0));
                vec![s.clone(), s.clone(), s, ms]
            }
            Kind::Z => {
                let e = ring.phase(nd.phase.as_ref().unwrap())?;
                if rank == 0 {
                    vec![one.add(&e)]
                } else {
                    let mut d = vec![zero.clone(); 1 << rank];
                    d[0] = one.clone();
                    d[(1 << rank) - 1] = e;
                    d
                }
            }
            Kind::X => {
                let e = ring.phase(nd.phase.as_ref().unwrap())?;
                let s = ring.constant(C64::new(FRAC_1_SQRT_2.powi(rank as i32), 0.0));
                let even = s.mul(&one.add(&e));
                let odd = s.mul(&one.add(&e.mul(&ring.constant(C64::new(-1.0, 0.0)))));
                (0..1usize << rank)
                    .map(|x| if x.count_ones() % 2 == 0 { even.clone() } else { odd.clone() })
                    .collect()
            }
        };
        let t = trace_self_loops(Tensor { legs: labels[k].clone(), data });
        if t.legs.is_empty() {
            scalar = scalar.mul(&t.data[0]);
        } else {
            tensors.push(t);
        }
    }

    let result = contract_all(tensors, ring.max_rank())?;
    let target: Vec<usize> = (0..n + m).collect();
    let data = match result {
        None => vec![scalar],
        Some(t) => {
            let t = permute(&t, &target);
            t.data.into_iter().map(|x| x.mul(&scalar)).collect()
        }
    };
    Ok(data)
}

/// Sum over repeated labels within one tensor.
fn trace_self_loops<S: Coeff>(mut t: Tensor<S>) -> Tensor<S> {
    loop {
        let r = t.legs.len();
        let dup = (0..r).find_map(|p| ((p + 1)..r).find(|&q| t.legs[q] == t.legs[p]).map(|q| (p, q)));
        let Some((p, q)) = dup else { return t };
        let legs: Vec<usize> =
            t.legs.iter().enumerate().filter(|(k, _)| *k != p && *k != q).map(|(_, &l)| l).collect();
        let (bp, bq) = (r - 1 - p, r - 1 - q);
        let mut data = vec![S::zero(); 1 << legs.len()];
        for (idx, v) in t.data.iter().enumerate() {
            if (idx >> bp) & 1 != (idx >> bq) & 1 || v.is_zero() {
                continue;
            }
            let mut o = 0usize;
            for k in 0..r {
                if k != p && k != q {
                    o = (o << 1) | ((idx >> (r - 1 - k)) & 1);
                }
            }
            data[o] = data[o].add(v);
        }
        t = Tensor { legs, data };
    }
}

fn permute<S: Coeff>(t: &Tensor<S>, order: &[usize]) -> Tensor<S> {
    if t.legs == order {
        return t.clone();
    }
    let r = t.legs.len();
    let pos: Vec<usize> = order.iter().map(|l| t.legs.iter().position(|x| x == l).unwrap()).collect();
    let mut data = vec![S::zero(); 1 << r];
    for (o, slot) in data.iter_mut().enumerate() {
        let mut idx = 0usize;
        for (k, &p) in pos.iter().enumerate() {
            let bit = (o >> (r - 1 - k)) & 1;
            idx |= bit << (r - 1 - p);
        }
        *slot = t.data[idx].clone();
    }
    Tensor { legs: order.to_vec(), data }
}

/// Offsets into a tensor's data for every assignment of the chosen legs.
fn offsets(rank: usize, legs: &[usize]) -> Vec<usize> {
    let k = legs.len();
    (0..1usize << k)
        .map(|a| legs.iter().enumerate().map(|(j, &p)| ((a >> (k - 1 - j)) & 1) << (rank - 1 - p)).sum())
        .collect()
}

fn pair<S: Coeff>(a: &Tensor<S>, b: &Tensor<S>) -> Tensor<S> {
    let shared: Vec<usize> = a.legs.iter().copied().filter(|l| b.legs.contains(l)).collect();
    let a_free: Vec<usize> = (0..a.legs.len()).filter(|&p| !shared.contains(&a.legs[p])).collect();
    let b_free: Vec<usize> = (0..b.legs.len()).filter(|&p| !shared.contains(&b.legs[p])).collect();
    let a_sh: Vec<usize> = shared.iter().map(|l| a.legs.iter().position(|x| x == l).unwrap()).collect();
    let b_sh: Vec<usize> = shared.iter().map(|l| b.legs.iter().position(|x| x == l).unwrap()).collect();
    let (oaf, oas) = (offsets(a.legs.len(), &a_free), offsets(a.legs.len(), &a_sh));
    let (obf, obs) = (offsets(b.legs.len(), &b_free), offsets(b.legs.len(), &b_sh));
    let nb = obf.len();
    let mut data = vec![S::zero(); oaf.len() * nb];
    for (fa, &oa) in oaf.iter().enumerate() {
        let row = &mut data[fa * nb..(fa + 1) * nb];
        for (s, &sa) in oas.iter().enumerate() {
            let x = &a.data[oa + sa];
            if x.is_zero() {
                continue;
            }
            let sb = obs[s];
            for (fb, &ob) in obf.iter().enumerate() {
                let y = &b.data[ob + sb];
                if !y.is_zero() {
                    row[fb] = row[fb].add(&x.mul(y));
                }
            }
        }
    }
    let mut legs: Vec<usize> = a_free.iter().map(|&p| a.legs[p]).collect();
    legs.extend(b_free.iter().map(|&p| b.legs[p]));
    Tensor { legs, data }
}

fn contract_all<S: Coeff>(tensors: Vec<Tensor<S>>, max_rank: usize) -> Result<Option<Tensor<S>>> {
    let mut live: Vec<Option<Tensor<S>>> = tensors.into_iter().map(Some).collect();
    let mut alive: BTreeSet<usize> = (0..live.len()).collect();
    let mut holders: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, t) in live.iter().enumerate() {
        for &l in &t.as_ref().unwrap().legs {
            holders.entry(l).or_default().push(k);
        }
    }
    // Candidate pairs keyed by (result rank, combined rank, i, j). Tensors
    // never change once created, so a popped key is current iff both
    // tensors are still alive.
    let key = |a: &Tensor<S>, b: &Tensor<S>, i: usize, j: usize| {
        let shared = a.legs.iter().filter(|l| b.legs.contains(l)).count();
        let total = a.legs.len() + b.legs.len();
        Reverse((total - 2 * shared, total, i.min(j), i.max(j)))
    };
    let mut heap = BinaryHeap::new();
    for hs in holders.values() {
        if hs.len() == 2 && hs[0] != hs[1] {
            let (i, j) = (hs[0], hs[1]);
            heap.push(key(live[i].as_ref().unwrap(), live[j].as_ref().unwrap(), i, j));
        }
    }
    loop {
        if alive.len() <= 1 {
            return Ok(alive.first().and_then(|&k| live[k].take()));
        }
        let mut next = None;
        while let Some(Reverse((_, _, i, j))) = heap.pop() {
            if alive.contains(&i) && alive.contains(&j) {
                next = Some((i, j));
                break;
            }
        }
        // No connected pair left: take the outer product of the two smallest.
        let (i, j) = next.unwrap_or_else(|| {
            let mut by_rank: Vec<usize> = alive.iter().copied().collect();
            by_rank.sort_by_key(|&k| (live[k].as_ref().unwrap().legs.len(), k));
            (by_rank[0].min(by_rank[1]), by_rank[0].max(by_rank[1]))
        });
        let (a, b) = (live[i].take().unwrap(), live[j].take().unwrap());
        alive.remove(&i);
        alive.remove(&j);
        let shared = a.legs.iter().filter(|l| b.legs.contains(l)).count();
        let rank = a.legs.len() + b.legs.len() - 2 * shared;
        if rank > max_rank {
            return Err(Error::TooLarge(format!("intermediate tensor of rank {rank}")));
        }
        let c = pair(&a, &b);
        for l in a.legs.iter().chain(b.legs.iter()) {
            if let Some(hs) = holders.get_mut(l) {
                hs.retain(|&h| h != i && h != j);
                if hs.is_empty() {
                    holders.remove(l);
                }
            }
        }
        let k = live.len();
        for &l in &c.legs {
            let hs = holders.entry(l).or_default();
            for &other in hs.iter() {
                heap.push(key(&c, live[other].as_ref().unwrap(), k, other));
            }
            hs.push(k);
        }
        live.push(Some(c));
        alive.insert(k);
    }
}

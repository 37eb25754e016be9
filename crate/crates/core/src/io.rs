//! Diagram file format (JSON) and write-only DOT / TikZ export.
//!
//! ```json
//! {"op":"compose","later":N,"earlier":N}
//! {"op":"tensor","left":N,"right":N}
//! {"op":"gen","kind":"z","inputs":1,"outputs":2,"phase":{"const_q":1,"coeffs":{"beta":2}}}
//! ```
//!
//! `inputs`, `outputs` and `phase` appear only on spiders; `phase` defaults
//! to zero. Unknown fields are rejected. The optional `extra` field of a
//! phase is a float constant in radians, written only when nonzero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::phase::PhaseExpr;
use crate::term::{Generator, Node, Term};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhase {
    #[serde(default)]
    const_q: i64,
    #[serde(default)]
    coeffs: BTreeMap<String, i64>,
    #[serde(default)]
    extra: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNodeFields {
    op: String,
    later: Option<Box<RawNode>>,
    earlier: Option<Box<RawNode>>,
    left: Option<Box<RawNode>>,
    right: Option<Box<RawNode>>,
    kind: Option<String>,
    inputs: Option<usize>,
    outputs: Option<usize>,
    phase: Option<RawPhase>,
}

/// A shape-checked node; arities are checked afterwards so that mismatches
/// can be reported with their path.
#[derive(Deserialize)]
#[serde(try_from = "RawNodeFields")]
enum RawNode {
    Compose(Box<RawNode>, Box<RawNode>),
    Tensor(Box<RawNode>, Box<RawNode>),
    Gen(Generator),
}

impl TryFrom<RawNodeFields> for RawNode {
    type Error = String;

    fn try_from(r: RawNodeFields) -> std::result::Result<Self, String> {
        let gen_fields = r.kind.is_some() || r.inputs.is_some() || r.outputs.is_some() || r.phase.is_some();
        match r.op.as_str() {
            "compose" => {
                if gen_fields || r.left.is_some() || r.right.is_some() {
                    return Err("compose takes only \"later\" and \"earlier\"".into());
                }
                match (r.later, r.earlier) {
                    (Some(l), Some(e)) => Ok(RawNode::Compose(l, e)),
                    _ => Err("compose needs \"later\" and \"earlier\"".into()),
                }
            }
            "tensor" => {
                if gen_fields || r.later.is_some() || r.earlier.is_some() {
                    return Err("tensor takes only \"left\" and \"right\"".into());
                }
                match (r.left, r.right) {
                    (Some(l), Some(rt)) => Ok(RawNode::Tensor(l, rt)),
                    _ => Err("tensor needs \"left\" and \"right\"".into()),
                }
            }
            "gen" => {
                if r.later.is_some() || r.earlier.is_some() || r.left.is_some() || r.right.is_some() {
                    return Err("gen takes no subterms".into());
                }
                let kind = r.kind.ok_or("gen needs \"kind\"")?;
                let spider = |make: fn(usize, usize, PhaseExpr) -> Generator| {
                    let (Some(n), Some(m)) = (r.inputs, r.outputs) else {
                        return Err(format!("spider {kind:?} needs \"inputs\" and \"outputs\""));
                    };
                    let phase = r.phase.as_ref().map(phase_from_raw).transpose()?.unwrap_or_default();
                    Ok(make(n, m, phase))
                };
                let plain = |g: Generator| {
                    if r.inputs.is_some() || r.outputs.is_some() || r.phase.is_some() {
                        Err(format!("{kind:?} takes no arity or phase"))
                    } else {
                        Ok(g)
                    }
                };
                let g = match kind.as_str() {
                    "z" => spider(|inputs, outputs, phase| Generator::Z { inputs, outputs, phase })?,
                    "x" => spider(|inputs, outputs, phase| Generator::X { inputs, outputs, phase })?,
                    "h" => plain(Generator::H)?,
                    "id" => plain(Generator::Id)?,
                    "swap" => plain(Generator::Swap)?,
                    "cup" => plain(Generator::Cup)?,
                    "cap" => plain(Generator::Cap)?,
                    "empty" => plain(Generator::Empty)?,
                    other => return Err(format!("unknown generator kind {other:?}")),
                };
                Ok(RawNode::Gen(g))
            }
            other => Err(format!("unknown op {other:?}")),
        }
    }
}

fn phase_from_raw(p: &RawPhase) -> std::result::Result<PhaseExpr, String> {
    if !p.extra.is_finite() {
        return Err("phase extra must be finite".into());
    }
    let mut out = PhaseExpr::quarter(p.const_q) + PhaseExpr::angle(p.extra);
    for (v, &k) in &p.coeffs {
        out = out + PhaseExpr::var(v, k);
    }
    Ok(out)
}

fn build(node: RawNode, path: &mut String) -> Result<Term> {
    match node {
        RawNode::Gen(g) => Ok(Term::gen(g)),
        RawNode::Tensor(l, r) => {
            let len = path.len();
            path.push_str(".left");
            let l = build(*l, path)?;
            path.truncate(len);
            path.push_str(".right");
            let r = build(*r, path)?;
            path.truncate(len);
            Ok(Term::tensor(&l, &r))
        }
        RawNode::Compose(later, earlier) => {
            let len = path.len();
            path.push_str(".later");
            let later = build(*later, path)?;
            path.truncate(len);
            path.push_str(".earlier");
            let earlier = build(*earlier, path)?;
            path.truncate(len);
            Term::compose(&later, &earlier).map_err(|e| match e {
                Error::ArityMismatch { detail, .. } => {
                    Error::ArityMismatch { position: path.clone(), detail }
                }
                other => other,
            })
        }
    }
}

/// Parse a diagram file.
pub fn parse(text: &str) -> Result<Term> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let syntax = |e: serde_json::Error| Error::SyntaxError { line: e.line(), reason: e.to_string() };
    let raw = RawNode::deserialize(&mut de).map_err(syntax)?;
    de.end().map_err(syntax)?;
    build(raw, &mut "$".to_string())
}

pub fn phase_to_json(p: &PhaseExpr) -> Value {
    let mut v = json!({ "const_q": p.const_q, "coeffs": p.coeffs });
    if p.extra != 0.0 {
        v["extra"] = json!(p.extra);
    }
    v
}

pub fn to_json(t: &Term) -> Value {
    match t.node() {
        Node::Gen(g) => {
            let mut v = json!({ "op": "gen", "kind": g.kind_name() });
            if let Generator::Z { inputs, outputs, phase } | Generator::X { inputs, outputs, phase } = g {
                v["inputs"] = json!(inputs);
                v["outputs"] = json!(outputs);
                v["phase"] = phase_to_json(phase);
            }
            v
        }
        Node::Compose { later, earlier } => {
            json!({ "op": "compose", "later": to_json(later), "earlier": to_json(earlier) })
        }
        Node::Tensor { left, right } => {
            json!({ "op": "tensor", "left": to_json(left), "right": to_json(right) })
        }
    }
}

/// Serialize a diagram. Keys are sorted, so output is deterministic.
pub fn serialize(t: &Term) -> String {
    let v = to_json(t);
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::new(&mut buf);
    v.serialize(&mut ser).expect("json values serialize");
    String::from_utf8(buf).expect("json is utf-8")
}

// ---------------------------------------------------------------------------
// Graph export

#[derive(Clone, Debug)]
enum VKind {
    Input(usize),
    Output(usize),
    Z(String),
    X(String),
    H,
}

struct Vertex {
    kind: VKind,
    x: f64,
    y: f64,
}

/// The diagram as an undirected graph of spiders, Hadamards and boundary
/// points; wires, swaps, cups and caps become edges.
struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
}

struct Layout {
    parent: Vec<usize>,
    owner: Vec<Option<usize>>,
    vertices: Vec<Vertex>,
}

impl Layout {
    fn half_edge(&mut self, owner: Option<usize>) -> usize {
        self.parent.push(self.parent.len());
        self.owner.push(owner);
        self.parent.len() - 1
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }

    /// Lay out `t` with its top-left corner at `(x, y)`; returns the input
    /// and output half-edges and the (width, height) used.
    fn place(&mut self, t: &Term, x: f64, y: f64) -> (Vec<usize>, Vec<usize>, f64, f64) {
        match t.node() {
            Node::Gen(g) => {
                let (n, m) = g.arity();
                let vertex = match g {
                    Generator::Z { phase, .. } => Some(VKind::Z(label(phase))),
                    Generator::X { phase, .. } => Some(VKind::X(label(phase))),
                    Generator::H => Some(VKind::H),
                    _ => None,
                };
                let height = n.max(m).max(1) as f64;
                let owner = vertex.map(|kind| {
                    self.vertices.push(Vertex { kind, x, y: y + (height - 1.0) / 2.0 });
                    self.vertices.len() - 1
                });
                let ins: Vec<usize> = (0..n).map(|_| self.half_edge(owner)).collect();
                let outs: Vec<usize> = (0..m).map(|_| self.half_edge(owner)).collect();
                match g {
                    Generator::Id => self.join(ins[0], outs[0]),
                    Generator::Swap => {
                        self.join(ins[0], outs[1]);
                        self.join(ins[1], outs[0]);
                    }
                    Generator::Cup => self.join(ins[0], ins[1]),
                    Generator::Cap => self.join(outs[0], outs[1]),
                    _ => {}
                }
                let width = if owner.is_some() { 1.0 } else { 0.5 };
                (ins, outs, width, height)
            }
            Node::Compose { later, earlier } => {
                let (ins, mid, w1, h1) = self.place(earlier, x, y);
                let (mid2, outs, w2, h2) = self.place(later, x + w1, y);
                for (a, b) in mid.into_iter().zip(mid2) {
                    self.join(a, b);
                }
                (ins, outs, w1 + w2, h1.max(h2))
            }
            Node::Tensor { left, right } => {
                let (mut ins, mut outs, w1, h1) = self.place(left, x, y);
                let (i2, o2, w2, h2) = self.place(right, x, y + h1);
                ins.extend(i2);
                outs.extend(o2);
                (ins, outs, w1.max(w2), h1 + h2)
            }
        }
    }
}

fn label(p: &PhaseExpr) -> String {
    if p.is_zero() {
        String::new()
    } else {
        p.to_string()
    }
}

fn graph(t: &Term) -> Graph {
    let mut l = Layout { parent: Vec::new(), owner: Vec::new(), vertices: Vec::new() };
    let (ins, outs, width, _) = l.place(t, 1.0, 0.0);
    for (k, h) in ins.into_iter().enumerate() {
        l.vertices.push(Vertex { kind: VKind::Input(k), x: 0.0, y: k as f64 });
        let b = l.half_edge(Some(l.vertices.len() - 1));
        l.join(h, b);
    }
    for (k, h) in outs.into_iter().enumerate() {
        l.vertices.push(Vertex { kind: VKind::Output(k), x: width + 1.0, y: k as f64 });
        let b = l.half_edge(Some(l.vertices.len() - 1));
        l.join(h, b);
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for h in 0..l.parent.len() {
        if let Some(v) = l.owner[h] {
            let root = l.find(h);
            classes.entry(root).or_default().push(v);
        }
    }
    let edges = classes.into_values().filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect();
    Graph { vertices: l.vertices, edges }
}

/// Graphviz rendering (undirected, left to right).
pub fn to_dot(t: &Term) -> String {
    let g = graph(t);
    let mut s = String::from("graph zx {\n  rankdir=LR;\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let attrs = match &v.kind {
            VKind::Input(k) => format!("label=\"in{k}\", shape=plaintext"),
            VKind::Output(k) => format!("label=\"out{k}\", shape=plaintext"),
            VKind::Z(p) => format!("label=\"{p}\", shape=circle, style=filled, fillcolor=\"#ccffcc\""),
            VKind::X(p) => format!("label=\"{p}\", shape=circle, style=filled, fillcolor=\"#ff8888\""),
            VKind::H => "label=\"H\", shape=box, style=filled, fillcolor=yellow".to_string(),
        };
        writeln!(s, "  v{i} [{attrs}];").unwrap();
    }
    for (a, b) in g.edges {
        writeln!(s, "  v{a} -- v{b};").unwrap();
    }
    s.push_str("}\n");
    s
}

fn tikz_label(p: &str) -> String {
    if p.is_empty() {
        return String::new();
    }
    format!("${}$", p.replace("pi", "\\pi"))
}

/// TikZ rendering; expects `zxz`, `zxx` and `zxh` node styles in the preamble.
pub fn to_tikz(t: &Term) -> String {
    let g = graph(t);
    let mut s = String::from("\\begin{tikzpicture}\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let (style, text) = match &v.kind {
            VKind::Input(_) | VKind::Output(_) => ("inner sep=0pt", String::new()),
            VKind::Z(p) => ("zxz", tikz_label(p)),
            VKind::X(p) => ("zxx", tikz_label(p)),
            VKind::H => ("zxh", String::new()),
        };
        writeln!(s, "  \\node[{style}] (v{i}) at ({:.2}, {:.2}) {{{text}}};", v.x, -v.y).unwrap();
    }
    for (a, b) in g.edges {
        writeln!(s, "  \\draw (v{a}) -- (v{b});").unwrap();
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

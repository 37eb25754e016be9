//! Seeded random generation of small linear diagrams, for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::builder::{Builder, Wire};
use crate::phase::PhaseExpr;
use crate::term::Term;

#[derive(Clone, Debug)]
pub struct Config {
    /// Upper bound on the number of wires at every cut.
    pub max_wires: usize,
    /// Upper bound on the number of random generators (routing swaps excluded).
    pub max_gens: usize,
    /// Largest |k| in a phase `k·var + c`.
    pub max_coeff: i64,
    pub vars: Vec<String>,
    /// Probability that a spider phase mentions a variable.
    pub var_prob: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self { max_wires: 4, max_gens: 8, max_coeff: 2, vars: vec!["beta".into()], var_prob: 0.5 }
    }
}

pub fn random_phase<R: Rng>(rng: &mut R, cfg: &Config) -> PhaseExpr {
    let mut p = PhaseExpr::quarter(rng.gen_range(0..8));
    for v in &cfg.vars {
        if rng.gen_bool(cfg.var_prob) {
            let mut k = 0;
            while k == 0 {
                k = rng.gen_range(-cfg.max_coeff..=cfg.max_coeff);
            }
            p = p + PhaseExpr::var(v, k);
        }
    }
    p
}

fn pick<R: Rng>(rng: &mut R, live: &[Wire], k: usize) -> Vec<Wire> {
    let mut w = live.to_vec();
    w.shuffle(rng);
    w.truncate(k);
    w
}

fn spider<R: Rng>(rng: &mut R, cfg: &Config, a: usize, b: usize) -> Term {
    let phase = random_phase(rng, cfg);
    if rng.gen_bool(0.5) {
        Term::z(a, b, phase)
    } else {
        Term::x(a, b, phase)
    }
}

fn step<R: Rng>(rng: &mut R, cfg: &Config, b: &mut Builder, live: &mut Vec<Wire>) {
    let w = live.len();
    loop {
        match rng.gen_range(0..10) {
            0..=4 => {
                let a = rng.gen_range(0..=w.min(2));
                let room = cfg.max_wires - (w - a);
                let outs = rng.gen_range(0..=room.min(2));
                let ins = pick(rng, live, a);
                let op = spider(rng, cfg, a, outs);
                let o = b.apply(&op, &ins);
                live.retain(|x| !ins.contains(x));
                live.extend(o);
                return;
            }
            5 | 6 if w >= 1 => {
                let ins = pick(rng, live, 1);
                let o = b.apply(&Term::h(), &ins);
                live.retain(|x| !ins.contains(x));
                live.extend(o);
                return;
            }
            7 if w >= 2 => {
                let ins = pick(rng, live, 2);
                let o = b.apply(&Term::swap(), &ins);
                live.retain(|x| !ins.contains(x));
                live.extend(o);
                return;
            }
            8 if w >= 2 => {
                let ins = pick(rng, live, 2);
                b.apply(&Term::cup(), &ins);
                live.retain(|x| !ins.contains(x));
                return;
            }
            9 if w + 2 <= cfg.max_wires => {
                let o = b.add_state(&Term::cap());
                live.extend(o);
                return;
            }
            _ => {}
        }
    }
}

/// A random term with the given arity.
pub fn random_term_with_arity<R: Rng>(rng: &mut R, cfg: &Config, n: usize, m: usize) -> Term {
    assert!(n <= cfg.max_wires && m <= cfg.max_wires);
    let (mut b, ins) = Builder::new(n);
    let mut live = ins;
    let gens = rng.gen_range(1..=cfg.max_gens);
    for _ in 0..gens.saturating_sub(1) {
        step(rng, cfg, &mut b, &mut live);
    }
    // One final spider adjusts the width to exactly m.
    let w = live.len();
    let a = if w > m { w - m + rng.gen_range(0..=m.min(1)) } else { rng.gen_range(0..=w.min(1)) };
    let a = a.min(w);
    let outs = m - (w - a);
    let ins = pick(rng, &live, a);
    let o = b.apply(&spider(rng, cfg, a, outs), &ins);
    live.retain(|x| !ins.contains(x));
    live.extend(o);
    live.shuffle(rng);
    b.finish(&live)
}

/// A random term with a random arity within the wire bound.
pub fn random_term<R: Rng>(rng: &mut R, cfg: &Config) -> Term {
    let n = rng.gen_range(0..=cfg.max_wires.min(2));
    let m = rng.gen_range(0..=(cfg.max_wires - n).min(3));
    random_term_with_arity(rng, cfg, n, m)
}

//! Exponential polynomials `Σ c·e^{i⟨k,β⟩}` over a fixed, ordered variable list.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use smallvec::SmallVec;

pub type Exps = SmallVec<[i32; 4]>;

const PRUNE: f64 = 1e-15;

/// Terms are kept sorted by exponent vector, with no coefficient below 1e-15.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<(Exps, C64)>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        Self::monomial(std::iter::repeat_n(0, nvars).collect(), c)
    }

    pub fn monomial(k: Exps, c: C64) -> Self {
        let mut p = Self { terms: vec![(k, c)] };
        p.prune();
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exps, C64)>) -> Self {
        let mut map: BTreeMap<Exps, C64> = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_default() += c;
        }
        let mut p = Self { terms: map.into_iter().collect() };
        p.prune();
        p
    }

    fn prune(&mut self) {
        self.terms.retain(|(_, c)| c.norm() >= PRUNE);
    }

    pub fn terms(&self) -> &[(Exps, C64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        let mut p = Self { terms: out };
        p.prune();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 && other.terms[0].0.iter().all(|&k| k == 0) {
            return self.scale(other.terms[0].1);
        }
        if self.terms.len() == 1 && self.terms[0].0.iter().all(|&k| k == 0) {
            return other.scale(self.terms[0].1);
        }
        Self::from_terms(self.terms.iter().flat_map(|(ka, ca)| {
            other.terms.iter().map(move |(kb, cb)| {
                let k: Exps = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                (k, ca * cb)
            })
        }))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect() };
        p.prune();
        p
    }

    /// Complex conjugate for real variable values.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k.iter().map(|x| -x).collect(), c.conj())))
    }

    /// Derivative with respect to the variable at position `var`.
    pub fn diff(&self, var: usize) -> Self {
        let mut p = Self {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * C64::new(0.0, k[var] as f64))).collect(),
        };
        p.prune();
        p
    }

    pub fn eval(&self, values: &[f64]) -> C64 {
        self.terms
            .iter()
            .map(|(k, c)| {
                let theta: f64 = k.iter().zip(values).map(|(&k, x)| k as f64 * x).sum();
                c * C64::from_polar(1.0, theta)
            })
            .sum()
    }

    /// Largest coefficient difference after aligning terms.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.add(&other.scale(C64::new(-1.0, 0.0))).terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn arithmetic() {
        let a = ExpPoly::from_terms([(smallvec![1], c(1.0, 0.0)), (smallvec![0], c(2.0, 0.0))]);
        let b = ExpPoly::monomial(smallvec![-1], c(0.0, 1.0));
        let p = a.mul(&b);
        assert_eq!(p.terms().len(), 2);
        let x = 0.37;
        let want = a.eval(&[x]) * b.eval(&[x]);
        assert!((p.eval(&[x]) - want).norm() < 1e-14);
        assert!(a.add(&a.scale(c(-1.0, 0.0))).is_zero());
    }

    #[test]
    fn conj_and_diff() {
        let a = ExpPoly::from_terms([(smallvec![2], c(0.5, 0.25))]);
        let x = 1.1;
        assert!((a.conj().eval(&[x]) - a.eval(&[x]).conj()).norm() < 1e-14);
        let d = a.diff(0).eval(&[x]);
        let h = 1e-6;
        let fd = (a.eval(&[x + h]) - a.eval(&[x - h])) / (2.0 * h);
        assert!((d - fd).norm() < 1e-6);
    }
}

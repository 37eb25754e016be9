//! Linear phase expressions `Σ kᵢ·βᵢ + q·π/4`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// A phase that is an integer combination of named variables plus a
/// constant. The constant is normally a multiple of π/4 (`const_q`);
/// `extra` holds a float remainder produced only by [`PhaseExpr::substitute`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseExpr {
    pub const_q: u8,
    pub coeffs: BTreeMap<String, i64>,
    pub extra: f64,
}

impl PhaseExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `q · π/4`.
    pub fn quarter(q: i64) -> Self {
        Self { const_q: q.rem_euclid(8) as u8, ..Self::default() }
    }

    pub fn pi() -> Self {
        Self::quarter(4)
    }

    /// `k · var`.
    pub fn var(name: &str, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if k != 0 {
            coeffs.insert(name.to_string(), k);
        }
        Self { coeffs, ..Self::default() }
    }

    /// Arbitrary real constant, folded into `const_q` when it is a multiple of π/4.
    pub fn angle(theta: f64) -> Self {
        let mut p = Self::zero();
        p.add_float(theta);
        p
    }

    fn add_float(&mut self, theta: f64) {
        let total = (self.extra + theta).rem_euclid(2.0 * PI);
        let q = total / FRAC_PI_4;
        let r = q.round();
        if (q - r).abs() < 1e-12 {
            self.const_q = ((self.const_q as i64 + r as i64).rem_euclid(8)) as u8;
            self.extra = 0.0;
        } else {
            self.extra = total;
        }
    }

    /// Re-establish the invariants after a manual edit.
    pub fn normalized(mut self) -> Self {
        self.coeffs.retain(|_, k| *k != 0);
        self.const_q %= 8;
        let extra = std::mem::take(&mut self.extra);
        if extra != 0.0 {
            self.add_float(extra);
        }
        self
    }

    pub fn coeff(&self, var: &str) -> i64 {
        self.coeffs.get(var).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.const_q == 0 && self.extra == 0.0
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    /// The same expression with `var` removed.
    pub fn without(&self, var: &str) -> Self {
        let mut p = self.clone();
        p.coeffs.remove(var);
        p
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut p = Self {
            const_q: ((self.const_q as i64 * k).rem_euclid(8)) as u8,
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            extra: 0.0,
        };
        if self.extra != 0.0 {
            p.add_float(self.extra * k as f64);
        }
        p.normalized()
    }

    /// Constant part in radians.
    pub fn constant(&self) -> f64 {
        self.const_q as f64 * FRAC_PI_4 + self.extra
    }

    pub fn eval(&self, assignment: &BTreeMap<String, f64>) -> Result<f64> {
        let mut total = self.constant();
        for (v, k) in &self.coeffs {
            let x = assignment.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            total += *k as f64 * x;
        }
        Ok(total)
    }

    /// Replace every bound variable by its value; unbound variables are kept.
    pub fn substitute(&self, assignment: &BTreeMap<String, f64>) -> Self {
        let mut p = Self { const_q: self.const_q, extra: self.extra, coeffs: BTreeMap::new() };
        let mut shift = 0.0;
        for (v, k) in &self.coeffs {
            match assignment.get(v) {
                Some(x) => shift += *k as f64 * x,
                None => {
                    p.coeffs.insert(v.clone(), *k);
                }
            }
        }
        if shift != 0.0 {
            p.add_float(shift);
        }
        p
    }
}

impl Add for &PhaseExpr {
    type Output = PhaseExpr;
    fn add(self, rhs: &PhaseExpr) -> PhaseExpr {
        let mut p = self.clone();
        for (v, k) in &rhs.coeffs {
            *p.coeffs.entry(v.clone()).or_insert(0) += k;
        }
        p.const_q = (p.const_q + rhs.const_q) % 8;
        if rhs.extra != 0.0 {
            p.add_float(rhs.extra);
        }
        p.normalized()
    }
}

impl Add for PhaseExpr {
    type Output = PhaseExpr;
    fn add(self, rhs: PhaseExpr) -> PhaseExpr {
        &self + &rhs
    }
}

impl Neg for &PhaseExpr {
    type Output = PhaseExpr;
    fn neg(self) -> PhaseExpr {
        self.scale(-1)
    }
}

impl Neg for PhaseExpr {
    type Output = PhaseExpr;
    fn neg(self) -> PhaseExpr {
        self.scale(-1)
    }
}

impl Sub for &PhaseExpr {
    type Output = PhaseExpr;
    fn sub(self, rhs: &PhaseExpr) -> PhaseExpr {
        self + &(-rhs)
    }
}

impl Sub for PhaseExpr {
    type Output = PhaseExpr;
    fn sub(self, rhs: PhaseExpr) -> PhaseExpr {
        &self - &rhs
    }
}

impl fmt::Display for PhaseExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (v, k) in &self.coeffs {
            parts.push(match k {
                1 => v.clone(),
                -1 => format!("-{v}"),
                _ => format!("{k}{v}"),
            });
        }
        if self.const_q != 0 {
            parts.push(match self.const_q {
                1 => "pi/4".to_string(),
                2 => "pi/2".to_string(),
                4 => "pi".to_string(),
                6 => "3pi/2".to_string(),
                q => format!("{q}pi/4"),
            });
        }
        if self.extra != 0.0 {
            parts.push(format!("{:.6}", self.extra));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+").replace("+-", "-"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_wrap() {
        assert_eq!(PhaseExpr::quarter(9), PhaseExpr::quarter(1));
        assert_eq!(PhaseExpr::quarter(-1).const_q, 7);
    }

    #[test]
    fn cancelling_coefficients_are_dropped() {
        let p = PhaseExpr::var("b", 2) + PhaseExpr::var("b", -2);
        assert!(p.coeffs.is_empty());
        assert!(p.is_zero());
    }

    #[test]
    fn substitute_keeps_exact_angles() {
        let p = PhaseExpr::var("b", 2) + PhaseExpr::quarter(1);
        let a = BTreeMap::from([("b".to_string(), PI / 2.0)]);
        assert_eq!(p.substitute(&a), PhaseExpr::quarter(5));
        let q = PhaseExpr::var("b", 1).substitute(&BTreeMap::from([("b".to_string(), 0.3)]));
        assert!((q.constant() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn display() {
        let p = PhaseExpr::var("b", -2) + PhaseExpr::quarter(2);
        assert_eq!(p.to_string(), "-2b+pi/2");
    }
}

//! Polynomials over `E` in adjoined generators `T_l` with
//! `∂_x T_l = G_l` (primitive) or `∂_x T_l = ρ_l T_l + g_l` (twisted).

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::field::Field;
use crate::qtx::{DiffField, Derivation};
use crate::{AlgElem, RatFunc};

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `T' = integrand`.
    Primitive { integrand: AlgElem },
    /// `T' = weight·T + inhomogeneous`, `weight` not a logarithmic derivative.
    Twisted { weight: RatFunc, inhomogeneous: AlgElem },
}

impl Generator {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Generator::Primitive { .. })
    }
}

/// Exponent vectors carry no trailing zeros.
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

pub fn unit(l: usize) -> Monomial {
    let mut m = vec![0; l + 1];
    m[l] = 1;
    m
}

pub fn total_degree(m: &Monomial) -> u32 {
    m.iter().sum()
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GPoly {
    terms: BTreeMap<Monomial, AlgElem>,
}

impl GPoly {
    pub fn zero() -> Self {
        GPoly::default()
    }

    pub fn constant(c: AlgElem) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn term(m: Monomial, c: AlgElem) -> Self {
        let mut p = GPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(l: usize) -> Self {
        Self::term(unit(l), AlgElem::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &AlgElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> AlgElem {
        self.terms.get(&trim(m.clone())).cloned().unwrap_or_else(AlgElem::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: AlgElem) {
        if c.is_zero() {
            return;
        }
        let m = trim(m);
        let v = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-AlgElem::one()))
    }

    pub fn scale(&self, c: &AlgElem) -> Self {
        let mut out = GPoly::zero();
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = GPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let n = m1.len().max(m2.len());
                let m: Monomial = (0..n)
                    .map(|i| m1.get(i).copied().unwrap_or(0) + m2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    /// Largest total degree (`-1` for zero).
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| total_degree(m) as i64).max().unwrap_or(-1)
    }

    /// Generators occurring with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for m in self.terms.keys() {
            for (i, e) in m.iter().enumerate() {
                if *e > 0 && !out.contains(&i) {
                    out.push(i);
                }
            }
        }
        out.sort();
        out
    }

    /// Constant term as an element of `E`, if there are no generators.
    pub fn as_scalar(&self) -> Option<AlgElem> {
        if self.terms.keys().all(|m| m.is_empty()) {
            Some(self.coeff(&Vec::new()))
        } else {
            None
        }
    }

    /// `∂_x` using the derivative rules of `gens`.
    pub fn derive(&self, gens: &[Generator]) -> Self {
        let mut out = GPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.derive(Derivation::Dx));
            for (l, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let ec = &AlgElem::from_i64(e as i64) * c;
                let mut lower = m.clone();
                lower[l] -= 1;
                match &gens[l] {
                    Generator::Primitive { integrand } => out.add_term(lower, &ec * integrand),
                    Generator::Twisted { weight, inhomogeneous } => {
                        out.add_term(m.clone(), &ec * &AlgElem::from_base(weight.clone()));
                        out.add_term(lower, &ec * inhomogeneous);
                    }
                }
            }
        }
        out
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
                .collect();
            let cs = c.render();
            parts.push(match (mono.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => mono.join("*"),
                (false, false) => format!("({})*{}", cs, mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

/// All exponent vectors of total degree `k` in the generators `vars`.
pub fn monomials_of_degree(vars: &[usize], k: u32) -> Vec<Monomial> {
    fn rec(vars: &[usize], k: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if vars.is_empty() {
            if k == 0 {
                let n = cur.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
                let mut m = vec![0; n];
                for (i, e) in cur.iter() {
                    m[*i] = *e;
                }
                out.push(trim(m));
            }
            return;
        }
        for e in 0..=k {
            cur.push((vars[0], e));
            rec(&vars[1..], k - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtx::x_func;

    #[test]
    fn derivative_of_log_squared() {
        let g = vec![Generator::Primitive {
            integrand: AlgElem::from_base(&RatFunc::one() / &x_func()),
        }];
        let u = GPoly::generator(0);
        let d = u.mul(&u).derive(&g);
        let expect = u.scale(&AlgElem::from_base(&RatFunc::from_i64(2) / &x_func()));
        assert_eq!(d, expect);
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(&[0, 2], 2).len(), 3);
        assert_eq!(monomials_of_degree(&[], 0), vec![Vec::<u32>::new()]);
        assert!(monomials_of_degree(&[], 1).is_empty());
    }
}

//! Dense univariate polynomials over a [`Field`].

use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{var_name, Field};

/// Dense polynomial, coefficients stored lowest degree first with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    c: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(a: F) -> Self {
        Self::new(vec![a])
    }

    /// The monomial `a * X^k`.
    pub fn monomial(a: F, k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    /// The variable `X`.
    pub fn var() -> Self {
        Self::monomial(F::one(), 1)
    }

    /// `X - a`.
    pub fn linear(a: F) -> Self {
        Self::new(vec![-a, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lc(&self) -> Option<&F> {
        self.c.last()
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        Self::new(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + a.clone();
        }
        acc
    }

    /// Substitute a polynomial for the variable.
    pub fn compose(&self, g: &Poly<F>) -> Poly<F> {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(a.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero()];
        for (k, a) in self.c.iter().enumerate() {
            c.push(a.clone() / F::from_i64(k as i64 + 1));
        }
        Self::new(c)
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.c.iter().map(f).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().unwrap().inv();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut qc = vec![F::zero(); r.len() - dd];
        for k in (0..qc.len()).rev() {
            let coef = r[k + dd].clone() * inv.clone();
            if coef.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] = r[k + j].clone() - coef.clone() * b.clone();
            }
            qc[k] = coef;
        }
        (Self::new(qc), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd (zero when both inputs vanish).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.deg() > 0 && other.deg() > 0 {
            if F::coprime_hint(self, other) {
                return Self::one();
            }
            if let Some(g) = F::poly_gcd(self, other) {
                return g;
            }
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            // monic remainders keep coefficient growth over Frac fields down
            let l = r1.lc().unwrap().inv();
            r1 = r1.scale(&l);
            s1 = s1.scale(&l);
            t1 = t1.scale(&l);
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.lc().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.inv();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Solves `s*a + t*b = c` with `deg s < deg b`, for coprime `a, b`.
    pub fn diophantine(a: &Self, b: &Self, c: &Self) -> (Self, Self) {
        let (g, s0, _) = a.ext_gcd(b);
        debug_assert!(g.is_one());
        let s = (&s0 * c).rem(b);
        let t = (c - &(&s * a)).exact_div(b).expect("diophantine: inexact");
        (s, t)
    }

    /// Inverse modulo `m` (assumed coprime).
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        // one-sided extended Euclid with monic remainders: r_i ≡ s_i·self
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let l = r1.lc().unwrap().inv();
            r1 = r1.scale(&l);
            s1 = s1.scale(&l);
            let (q, r) = r0.div_rem(&r1);
            let s2 = (&s0 - &(&q * &s1)).rem(m);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        r0.is_one().then(|| s0.rem(m))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        (self * &other.exact_div(&g).unwrap()).monic()
    }

    /// Square-free decomposition (Yun). Returns `(c, [a_1, a_2, ...])` with
    /// `self = c * prod a_i^i`, each `a_i` monic square-free and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> (F, Vec<Self>) {
        let lc = match self.lc() {
            None => return (F::zero(), Vec::new()),
            Some(l) => l.clone(),
        };
        let f = self.monic();
        if f.is_constant() {
            return (lc, Vec::new());
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0).unwrap();
        let mut c = fp.exact_div(&a0).unwrap();
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            b = b.exact_div(&a).unwrap();
            c = d.exact_div(&a).unwrap();
            out.push(a);
            if b.is_constant() {
                break;
            }
            d = &c - &b.derivative();
        }
        while out.last().map(|p| p.is_one()).unwrap_or(false) {
            out.pop();
        }
        (lc, out)
    }

    /// Monic square-free part.
    pub fn squarefree_part(&self) -> Self {
        let (_, parts) = self.squarefree_decomposition();
        parts.iter().fold(Self::one(), |acc, p| &acc * p)
    }

    /// Multiplicity of the factor `p` (non-constant) in `self` (non-zero).
    pub fn valuation(&self, p: &Self) -> usize {
        let mut v = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(p) {
            v += 1;
            cur = q;
            if cur.is_constant() {
                break;
            }
        }
        v
    }

    pub fn render(&self) -> String {
        render_poly(self, var_name(F::DEPTH))
    }
}

pub(crate) fn render_poly<F: Field>(p: &Poly<F>, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for k in (0..p.c.len()).rev() {
        let a = &p.c[k];
        if a.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, k),
        };
        let (neg, body) = if a.is_negative_display() {
            (true, (-a.clone()))
        } else {
            (false, a.clone())
        };
        let term = if mono.is_empty() {
            body.render()
        } else if body.is_one() {
            mono
        } else if body.is_atomic() {
            format!("{}*{}", body.render(), mono)
        } else {
            let s = body.render();
            if s.contains(' ') {
                format!("({})*{}", s, mono)
            } else {
                format!("{}*{}", s, mono)
            }
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
            out.push_str(&term);
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    out
}

impl<'a, F: Field> Add for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &'a Poly<F>) -> Poly<F> {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(match (self.c.get(k), o.c.get(k)) {
                (Some(a), Some(b)) => a.clone() + b.clone(),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(c)
    }
}

impl<'a, F: Field> Sub for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &'a Poly<F>) -> Poly<F> {
        self + &(-o)
    }
}

impl<'a, F: Field> Neg for &'a Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly {
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl<'a, F: Field> Mul for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &'a Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, o: Poly<F>) -> Poly<F> {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: Field> Zero for Poly<F> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl<F: Field> One for Poly<F> {
    fn one() -> Self {
        Poly::one()
    }
}

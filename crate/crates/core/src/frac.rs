//! Rational functions `F(X)` in canonical form.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::field::Field;
use crate::poly::Poly;

/// A reduced fraction `num/den` with `den` monic and `gcd(num, den) = 1`.
/// Canonical, so structural equality is field equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Frac<F> {
    num: Poly<F>,
    den: Poly<F>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("division by zero")]
pub struct DivisionByZero;

impl<F: Field> Frac<F> {
    /// Normalizes `num/den`.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, DivisionByZero> {
        if den.is_zero() {
            return Err(DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Poly::zero()));
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let l = d.lc().unwrap().inv();
        Ok(Frac {
            num: n.scale(&l),
            den: d.scale(&l),
        })
    }

    /// Builds from parts already known to be coprime with nonzero `den`.
    pub fn from_parts(num: Poly<F>, den: Poly<F>) -> Self {
        Self::new(num, den).expect("zero denominator")
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        Frac { num: p, den: Poly::one() }
    }

    pub fn constant(a: F) -> Self {
        Self::from_poly(Poly::constant(a))
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value does not involve the variable.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value as a coefficient when it is free of the variable.
    pub fn as_coeff(&self) -> Option<F> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Splits into polynomial part and proper fraction numerator
    /// (`self = poly + rem/den`).
    pub fn split_poly(&self) -> (Poly<F>, Poly<F>) {
        self.num.div_rem(&self.den)
    }

    /// Derivative with respect to the own variable.
    pub fn derivative(&self) -> Self {
        self.derive_with(&|_| F::zero(), true)
    }

    /// Applies the derivation `D` with `D(X) = [own]` and `D(c) = coeff(c)`
    /// on coefficients.
    pub fn derive_with(&self, coeff: &dyn Fn(&F) -> F, own: bool) -> Self {
        let dpoly = |p: &Poly<F>| {
            let a = p.map_coeffs(coeff);
            if own {
                &a + &p.derivative()
            } else {
                a
            }
        };
        let dn = dpoly(&self.num);
        let dd = dpoly(&self.den);
        if dd.is_zero() {
            return Self::from_parts(dn, self.den.clone());
        }
        // with g = gcd(d, Dd): D(n/d) = (Dn d/g - n Dd/g) / (d d/g)
        let g = self.den.gcd(&dd);
        let dg = self.den.exact_div(&g).expect("gcd divides");
        let ddg = dd.exact_div(&g).expect("gcd divides");
        let n = &(&dn * &dg) - &(&self.num * &ddg);
        let den = &self.den * &dg;
        if own && self.den.map_coeffs(coeff).is_zero() && self.num.map_coeffs(coeff).is_zero() {
            // a prime p with p^e || d has p^(e-1) || d', so the quotient is
            // already reduced
            if n.is_zero() {
                return Self::from_poly(n);
            }
            let l = den.lc().unwrap().inv();
            return Frac {
                num: n.scale(&l),
                den: den.scale(&l),
            };
        }
        Self::from_parts(n, den)
    }

    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        Self::from_parts(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    pub fn powi(&self, e: i64) -> Result<Self, DivisionByZero> {
        if e >= 0 {
            Ok(Frac {
                num: self.num.pow(e as usize),
                den: self.den.pow(e as usize),
            }
            .renormalize())
        } else {
            if self.num.is_zero() {
                return Err(DivisionByZero);
            }
            Self::new(self.den.pow((-e) as usize), self.num.pow((-e) as usize))
        }
    }

    fn renormalize(self) -> Self {
        let l = self.den.lc().unwrap().inv();
        Frac {
            num: self.num.scale(&l),
            den: self.den.scale(&l),
        }
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl<F: Field> Zero for Frac<F> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for Frac<F> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<'a, F: Field> Add for &'a Frac<F> {
    type Output = Frac<F>;
    fn add(self, o: &'a Frac<F>) -> Frac<F> {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Frac::from_parts(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            // a prime of one denominator does not divide the sum's numerator
            let n = &(&self.num * &o.den) + &(&o.num * &self.den);
            return Frac {
                num: n,
                den: &self.den * &o.den,
            }
            .renormalize();
        }
        let a = self.den.exact_div(&g).unwrap();
        let b = o.den.exact_div(&g).unwrap();
        let mut n = &(&self.num * &b) + &(&o.num * &a);
        if n.is_zero() {
            return Frac::zero();
        }
        // common factors of the sum only involve primes of g
        let mut d = &(&a * &b) * &g;
        loop {
            let h = n.gcd(&g);
            if h.is_one() {
                break;
            }
            let dh = d.exact_div(&h);
            match (n.exact_div(&h), dh) {
                (Some(nn), Some(dd)) => {
                    n = nn;
                    d = dd;
                }
                _ => break,
            }
            if d.gcd(&h).is_one() {
                break;
            }
        }
        Frac { num: n, den: d }.renormalize()
    }
}

impl<'a, F: Field> Sub for &'a Frac<F> {
    type Output = Frac<F>;
    fn sub(self, o: &'a Frac<F>) -> Frac<F> {
        self + &(-o)
    }
}

impl<'a, F: Field> Neg for &'a Frac<F> {
    type Output = Frac<F>;
    fn neg(self) -> Frac<F> {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a, F: Field> Mul for &'a Frac<F> {
    type Output = Frac<F>;
    fn mul(self, o: &'a Frac<F>) -> Frac<F> {
        if self.num.is_zero() || o.num.is_zero() {
            return Frac::zero();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        Frac {
            num: &n1 * &n2,
            den: &d1 * &d2,
        }
        .renormalize()
    }
}

impl<'a, F: Field> Div for &'a Frac<F> {
    type Output = Frac<F>;
    fn div(self, o: &'a Frac<F>) -> Frac<F> {
        assert!(!o.num.is_zero(), "division by zero");
        let inv = Frac {
            num: o.den.clone(),
            den: o.num.clone(),
        }
        .renormalize();
        self * &inv
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Frac<F> {
            type Output = Frac<F>;
            fn $m(self, o: Frac<F>) -> Frac<F> {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl<F: Field> Neg for Frac<F> {
    type Output = Frac<F>;
    fn neg(self) -> Frac<F> {
        -&self
    }
}

/// Points at which coefficients are specialized in [`Field::coprime_hint`].
const SPECIALIZATION_POINTS: [i64; 3] = [7, -11, 29];

fn specialize<F: Field>(p: &Poly<Frac<F>>, c: &F) -> Option<Poly<F>> {
    let coeffs: Option<Vec<F>> = p.coeffs().iter().map(|a| a.eval(c)).collect();
    let s = Poly::new(coeffs?);
    (s.degree() == p.degree()).then_some(s)
}

/// Coefficients over `F[u]` after clearing denominators.
fn clear_denominators<F: Field>(p: &Poly<Frac<F>>) -> Vec<Poly<F>> {
    let l = p.coeffs().iter().fold(Poly::one(), |l: Poly<F>, c| l.lcm(&c.den));
    p.coeffs().iter().map(|c| &c.num * &l.exact_div(&c.den).expect("lcm")).collect()
}

fn primitive_part<F: Field>(mut p: Vec<Poly<F>>) -> Vec<Poly<F>> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let mut cs: Vec<&Poly<F>> = p.iter().filter(|c| !c.is_zero()).collect();
    cs.sort_by_key(|c| c.deg());
    let mut g = Poly::zero();
    for c in cs {
        g = g.gcd(c);
        if g.deg() == 0 {
            return p;
        }
    }
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.iter().map(|c| c.exact_div(&g).expect("content divides")).collect()
}

/// Pseudo-remainder of `a` by `b` over `F[u]`.
fn pseudo_rem<F: Field>(a: &[Poly<F>], b: &[Poly<F>]) -> Vec<Poly<F>> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&lr * bi);
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Monic gcd over `F(u)` via the primitive remainder sequence over `F[u]`.
fn primitive_prs_gcd<F: Field>(a: &Poly<Frac<F>>, b: &Poly<Frac<F>>) -> Poly<Frac<F>> {
    let mut a = primitive_part(clear_denominators(a));
    let mut b = primitive_part(clear_denominators(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = primitive_part(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    Poly::new(a.into_iter().map(Frac::from_poly).collect()).monic()
}

fn eval_coeffs<F: Field>(p: &[Poly<F>], u: &F) -> Poly<F> {
    Poly::new(p.iter().map(|c| c.eval(u)).collect())
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub(crate) fn interpolate<F: Field>(xs: &[F], ys: &[F]) -> Poly<F> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
        }
    }
    let mut out = Poly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        out = &(&out * &Poly::linear(xs[i].clone())) + &Poly::constant(dd[i].clone());
    }
    out
}

/// Gcd over `F(u)` from gcds of specializations `u = k`, scaled by the gcd
/// of the leading coefficients and interpolated in `u`. The candidate is
/// accepted only after it divides both inputs, so unlucky points merely
/// cause a fallback.
fn interpolation_gcd<F: Field>(a: &Poly<Frac<F>>, b: &Poly<Frac<F>>) -> Option<Poly<Frac<F>>> {
    let a = primitive_part(clear_denominators(a));
    let b = primitive_part(clear_denominators(b));
    let (la, lb) = (a.last()?, b.last()?);
    let gamma = la.gcd(lb);
    let udeg = |p: &[Poly<F>]| p.iter().map(|c| c.deg()).max().unwrap_or(0);
    let bound = (gamma.deg() + udeg(&a).min(udeg(&b))) as usize;
    let mut xs: Vec<F> = Vec::new();
    let mut gs: Vec<Poly<F>> = Vec::new();
    let mut deg = i64::MAX;
    let mut k = 0i64;
    while xs.len() < bound + 1 {
        k += 1;
        if k > 4 * bound as i64 + 64 {
            return None;
        }
        let u = F::from_i64(k);
        if la.eval(&u).is_zero() || lb.eval(&u).is_zero() {
            continue;
        }
        let g = eval_coeffs(&a, &u).gcd(&eval_coeffs(&b, &u));
        if g.deg() == 0 {
            return Some(Poly::one());
        }
        if g.deg() > deg {
            continue;
        }
        if g.deg() < deg {
            deg = g.deg();
            xs.clear();
            gs.clear();
        }
        gs.push(g.scale(&gamma.eval(&u)));
        xs.push(u);
    }
    let cand: Vec<Poly<F>> = (0..=deg as usize)
        .map(|i| {
            let ys: Vec<F> = gs.iter().map(|g| g.coeff(i)).collect();
            interpolate(&xs, &ys)
        })
        .collect();
    let cand = primitive_part(cand);
    if !pseudo_rem(&a, &cand).is_empty() || !pseudo_rem(&b, &cand).is_empty() {
        return None;
    }
    Some(Poly::new(cand.into_iter().map(Frac::from_poly).collect()).monic())
}

impl<F: Field> Field for Frac<F> {
    const DEPTH: usize = F::DEPTH + 1;

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        Some(interpolation_gcd(a, b).unwrap_or_else(|| primitive_prs_gcd(a, b)))
    }

    /// A specialization that keeps both degrees bounds the degree of the
    /// gcd from above, so a trivial specialized gcd is a proof.
    fn coprime_hint(a: &Poly<Self>, b: &Poly<Self>) -> bool {
        SPECIALIZATION_POINTS.iter().any(|&k| {
            let c = F::from_i64(k);
            match (specialize(a, &c), specialize(b, &c)) {
                (Some(sa), Some(sb)) => sa.gcd(&sb).is_one(),
                _ => false,
            }
        })
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::constant(F::from_rational(q))
    }

    fn render(&self) -> String {
        let (n, d) = F::display_pair(&self.num, &self.den);
        if d.is_one() {
            return n.render();
        }
        let ns = n.render();
        let ds = d.render();
        let ns = if n.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", ns)
        } else {
            ns
        };
        let simple_den = !ds.contains(' ') && !ds.contains('*') && !ds.contains('/') && !ds.starts_with('-');
        if simple_den {
            format!("{}/{}", ns, ds)
        } else {
            format!("{}/({})", ns, ds)
        }
    }

    fn is_atomic(&self) -> bool {
        if !self.den.is_one() {
            return false;
        }
        let nz = self.num.coeffs().iter().filter(|c| !c.is_zero()).count();
        nz == 1 && self.num.lc().map(|c| c.is_one()).unwrap_or(false)
    }

    fn is_negative_display(&self) -> bool {
        let (n, _) = F::display_pair(&self.num, &self.den);
        n.lc().map(|c| c.is_negative_display()).unwrap_or(false)
    }

    fn as_rational(&self) -> Option<BigRational> {
        self.as_coeff().and_then(|c| c.as_rational())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    type R = Frac<BigRational>;

    fn t() -> R {
        R::var()
    }

    #[test]
    fn gcd_over_rational_function_coefficients() {
        // g = x + t, h1 = x - t^2, h2 = t x + 1/(t + 1)
        let one = R::one();
        let g = Poly::new(vec![t(), one.clone()]);
        let h1 = Poly::new(vec![-&(&t() * &t()), one.clone()]);
        let h2 = Poly::new(vec![&one / &(&t() + &one), t()]);
        let a = &g * &h1;
        let b = &g * &h2;
        assert_eq!(a.gcd(&b), g);
        assert!(h1.gcd(&h2).is_one());
        assert!(R::coprime_hint(&h1, &h2));
        assert!(!R::coprime_hint(&a, &b));
    }

    #[test]
    fn canonical_form() {
        let a = R::new(Poly::new(vec![q(0, 1), q(2, 1)]), Poly::new(vec![q(2, 1)])).unwrap();
        assert_eq!(a, t());
        let b = &(&t() * &t()) - &R::one();
        let c = &b / &(&t() - &R::one());
        assert_eq!(c, &t() + &R::one());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(R::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn rendering_integer_form() {
        let f = &R::one() / &(&(&t() * &R::from_i64(2)) - &R::one());
        assert_eq!(f.render(), "1/(2*t - 1)");
        let g = &t() / &R::from_i64(2);
        assert_eq!(g.render(), "t/2");
    }
}

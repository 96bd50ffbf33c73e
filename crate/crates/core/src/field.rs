//! Scalar abstraction for the exact tower Q ⊂ Q(t) ⊂ Q(t)(x).
//!
//! Every layer of the tower is a [`Field`]; polynomials and rational
//! functions are generic over it so that the same code serves `Q[t]`,
//! `Q(t)[x]` and any further extension.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::poly::Poly;

/// An exact commutative field of characteristic zero.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Nesting depth in the tower; `Q` is 0.
    const DEPTH: usize;

    fn from_i64(n: i64) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Textual form in the input grammar (parseable back).
    fn render(&self) -> String;

    /// True when `render` yields a single token that needs no parentheses
    /// as a factor of a product (`t`, `3`, `x^2`).
    fn is_atomic(&self) -> bool;

    /// True when the rendered form begins with a minus sign.
    fn is_negative_display(&self) -> bool {
        false
    }

    /// Rescale a fraction `num/den` over `Self` into a display-friendly form.
    /// The value must not change.
    fn display_pair(num: &Poly<Self>, den: &Poly<Self>) -> (Poly<Self>, Poly<Self>) {
        (num.clone(), den.clone())
    }

    /// Returns the value as an element of `Q` if it lies there.
    fn as_rational(&self) -> Option<BigRational>;

    /// Cheap proof that two nonzero polynomials over `Self` are coprime.
    /// `false` means undecided.
    fn coprime_hint(_a: &Poly<Self>, _b: &Poly<Self>) -> bool {
        false
    }

    /// Monic gcd of two nonzero polynomials by a method better suited to
    /// `Self` than plain Euclid; `None` falls back to Euclid.
    fn poly_gcd(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }
}

/// Variable name used when printing a polynomial whose coefficients
/// live at depth `depth`.
pub fn var_name(depth: usize) -> &'static str {
    match depth {
        0 => "t",
        1 => "x",
        _ => "y",
    }
}

impl Field for BigRational {
    const DEPTH: usize = 0;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_atomic(&self) -> bool {
        self.is_integer() && !self.is_negative()
    }

    fn is_negative_display(&self) -> bool {
        self.is_negative()
    }

    fn display_pair(num: &Poly<Self>, den: &Poly<Self>) -> (Poly<Self>, Poly<Self>) {
        integer_pair(num, den)
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    /// Coprime modulo a prime that keeps both degrees implies coprime over Q.
    fn coprime_hint(a: &Poly<Self>, b: &Poly<Self>) -> bool {
        match (reduce_mod(a, PRIME), reduce_mod(b, PRIME)) {
            (Some(ra), Some(rb)) => gcd_mod(ra, rb, PRIME).len() == 1,
            _ => false,
        }
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        modular_gcd(a, b)
    }
}

const PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn residue(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// Coefficients modulo `p`, or `None` when a denominator or the leading
/// coefficient vanishes there.
fn reduce_mod(a: &Poly<BigRational>, p: u64) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(a.coeffs().len());
    for c in a.coeffs() {
        let d = residue(c.denom(), p);
        if d == 0 {
            return None;
        }
        out.push(residue(c.numer(), p) * inv_mod(d, p) % p);
    }
    (out.last().is_some_and(|&l| l != 0)).then_some(out)
}

/// Monic gcd over Z/p.
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let k = a.len() - b.len();
            let f = a.last().unwrap() * lb % p;
            for (i, &bi) in b.iter().enumerate() {
                a[k + i] = (a[k + i] + p - f * bi % p) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let li = inv_mod(l, p);
        a.iter_mut().for_each(|c| *c = *c * li % p);
    }
    a
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The largest primes below 2^31, descending.
fn primes() -> &'static [u64] {
    static PRIMES: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| (0..).map(|k| PRIME - 2 * k).filter(|&n| is_prime(n)).take(256).collect())
}

/// Integer polynomial proportional to `a` with content one.
fn integer_primitive(a: &Poly<BigRational>) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = a.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = a.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

/// Gcd over Q from gcds modulo word-size primes, combined by CRT with the
/// leading coefficient normalized to `gcd(lc a, lc b)`. The candidate is
/// accepted only after it divides both inputs exactly.
fn modular_gcd(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Option<Poly<BigRational>> {
    use num_integer::Integer;
    // Euclid is cheaper while the remainder sequence stays small
    let bits = |q: &Poly<BigRational>| q.coeffs().iter().map(|c| c.numer().bits() + c.denom().bits()).max().unwrap_or(0);
    if a.deg().min(b.deg()) <= 2 && bits(a).max(bits(b)) <= 64 {
        return None;
    }
    let (ia, ib) = (integer_primitive(a), integer_primitive(b));
    let gamma = ia.last()?.gcd(ib.last()?);
    let (pa, pb) = (Poly::new(ia.iter().cloned().map(BigRational::from_integer).collect()), Poly::new(ib.iter().cloned().map(BigRational::from_integer).collect()));
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut deg = usize::MAX;
    let mut last: Option<Vec<BigInt>> = None;
    for &p in primes() {
        let (Some(ra), Some(rb)) = (reduce_mod(&pa, p), reduce_mod(&pb, p)) else { continue };
        let g = gcd_mod(ra, rb, p);
        let d = g.len() - 1;
        if d == 0 {
            return Some(Poly::one());
        }
        if d > deg {
            continue;
        }
        let gm = residue(&gamma, p);
        let g: Vec<u64> = g.iter().map(|c| c * gm % p).collect();
        if d < deg {
            deg = d;
            acc = g.iter().map(|&c| BigInt::from(c)).collect();
            modulus = BigInt::from(p);
            last = None;
            continue;
        }
        let mi = inv_mod(residue(&modulus, p), p);
        for (x, &r) in acc.iter_mut().zip(&g) {
            let k = (r + p - residue(x, p)) % p * mi % p;
            *x += &modulus * BigInt::from(k);
        }
        modulus *= BigInt::from(p);
        let half = &modulus >> 1;
        let sym: Vec<BigInt> = acc.iter().map(|x| if x > &half { x - &modulus } else { x.clone() }).collect();
        if last.as_ref() == Some(&sym) {
            let cand = Poly::new(sym.iter().cloned().map(BigRational::from_integer).collect()).monic();
            if pa.rem(&cand).is_zero() && pb.rem(&cand).is_zero() {
                return Some(cand);
            }
        }
        last = Some(sym);
    }
    None
}

/// Scale `num/den` over Q to coprime integer-coefficient polynomials with a
/// positive leading denominator coefficient.
fn integer_pair(num: &Poly<BigRational>, den: &Poly<BigRational>) -> (Poly<BigRational>, Poly<BigRational>) {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for c in num.coeffs().iter().chain(den.coeffs()) {
        l = l.lcm(c.denom());
    }
    let scale = BigRational::from_integer(l);
    let n = num.scale(&scale);
    let d = den.scale(&scale);
    let mut g = BigInt::zero();
    for c in n.coeffs().iter().chain(d.coeffs()) {
        g = g.gcd(c.numer());
    }
    if g.is_zero() {
        return (num.clone(), den.clone());
    }
    if d.lc().map(|c| c.is_negative()).unwrap_or(false) {
        g = -g;
    }
    let inv = BigRational::from_integer(g).inv();
    (n.scale(&inv), d.scale(&inv))
}

/// Shorthand for building rationals in tests and examples.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Poly<BigRational> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn poly(cs: &[i64]) -> Poly<BigRational> {
        Poly::new(cs.iter().map(|&c| BigRational::from_i64(c)).collect())
    }

    #[test]
    fn modular_gcd_agrees_with_euclid() {
        // common factor with large coefficients and a non-monic leading term
        let g = poly(&[123456789, -987654321, 5, 0, 77777]);
        let big = BigRational::new(BigInt::from(10).pow(30) + 7, BigInt::from(3));
        let u = &poly(&[3, 0, -1, 2, 9]) + &Poly::new(vec![big.clone()]);
        let v = poly(&[-5, 11, 0, 0, 1, 4]);
        let (a, b) = (&g * &u, &(&g * &g) * &v);
        assert_eq!(modular_gcd(&a, &b).unwrap(), euclid(&a, &b));
        let c = poly(&[1, 1, 1, 1, 1, 1, 1]);
        assert!(modular_gcd(&(&u * &c), &(&v * &c)).unwrap().deg() == 6);
        assert_eq!(modular_gcd(&u, &v).unwrap(), Poly::one());
    }
}

//! Pole-factor classification over Q(t).
//!
//! Square-free parts of denominators are split into linear factors
//! `x - r(t)` with `r ∈ Q(t)`; what remains is kept as an atomic factor.
//! Linear factors are found by specializing `t`, taking rational roots,
//! lifting them t-adically by Newton iteration, recovering a rational
//! function by Padé approximation, and confirming by exact evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::Field;
use crate::frac::Frac;
use crate::poly::Poly;
use crate::{PolyT, PolyX, Q, RatFunc, RatT};

/// A monic pole factor of a denominator with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleFactor {
    pub factor: PolyX,
    pub multiplicity: usize,
    /// False for atomic factors of degree >= 4 that might still split
    /// over Q(t); residue data on those is factor-level only.
    pub irreducible: bool,
}

/// Rational roots of a polynomial over Q (distinct, ascending).
pub fn rational_roots(p: &PolyT) -> Vec<Q> {
    if p.is_zero() {
        return Vec::new();
    }
    let f = p.squarefree_part();
    let mut roots = Vec::new();
    let mut ints = integer_coeffs(&f);
    // strip zero roots
    let mut shift = 0;
    while shift < ints.len() && ints[shift].is_zero() {
        shift += 1;
    }
    if shift > 0 {
        roots.push(Q::zero());
        ints.drain(0..shift);
    }
    if ints.len() <= 1 {
        return roots;
    }
    let c0 = ints[0].abs();
    let lc = ints.last().unwrap().abs();
    let (Some(dn), Some(dd)) = (divisors(&c0), divisors(&lc)) else {
        return roots;
    };
    let poly = Poly::new(ints.iter().map(|c| Q::from_integer(c.clone())).collect());
    for a in &dn {
        for b in &dd {
            if !a.gcd(b).is_one() {
                continue;
            }
            for s in [1i64, -1] {
                let r = Q::new(a.clone() * BigInt::from(s), b.clone());
                if poly.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Integer roots only.
pub fn integer_roots(p: &PolyT) -> Vec<BigInt> {
    rational_roots(p)
        .into_iter()
        .filter(|r| r.is_integer())
        .map(|r| r.to_integer())
        .collect()
}

fn integer_coeffs(p: &PolyT) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

/// Positive divisors by trial division; `None` if the number is too large
/// to factor this way.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u128()?;
    if n == 0 {
        return Some(vec![BigInt::one()]);
    }
    if n > 1u128 << 80 {
        return None;
    }
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2u128;
    while d * d <= m {
        if d > 5_000_000 {
            return None;
        }
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e > 0 {
            primes.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![1u128];
    for (p, e) in primes {
        let cur = divs.clone();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p;
            divs.extend(cur.iter().map(|x| x * pk));
        }
    }
    divs.sort();
    Some(divs.into_iter().map(BigInt::from).collect())
}

/// Clears t-denominators: returns coefficients of `f` (by x-degree) as
/// polynomials in t, up to an overall nonzero Q(t) factor.
fn to_bivariate(f: &PolyX) -> Vec<PolyT> {
    let mut l = PolyT::one();
    for c in f.coeffs() {
        l = l.lcm(c.den());
    }
    f.coeffs()
        .iter()
        .map(|c| (c.num() * &l).exact_div(c.den()).unwrap())
        .collect()
}

fn trunc(p: &PolyT, n: usize) -> PolyT {
    Poly::new(p.coeffs().iter().take(n).cloned().collect())
}

fn series_inv(p: &PolyT, n: usize) -> PolyT {
    // Newton iteration for 1/p mod s^n, p(0) != 0
    let mut g = PolyT::constant(p.coeff(0).inv());
    let mut prec = 1;
    let two = PolyT::constant(Q::from_i64(2));
    while prec < n {
        prec = (2 * prec).min(n);
        let e = trunc(&(&trunc(p, prec) * &g), prec);
        g = trunc(&(&g * &(&two - &e)), prec);
    }
    g
}

/// Lift the simple root `x0` of `F(x, t0)` to a power series in `s = t - t0`.
fn newton_lift(shifted: &[PolyT], x0: &Q, n: usize) -> Option<PolyT> {
    let mut x = PolyT::constant(x0.clone());
    let deriv: Vec<PolyT> = (1..shifted.len())
        .map(|k| shifted[k].scale(&Q::from_i64(k as i64)))
        .collect();
    let eval = |coeffs: &[PolyT], x: &PolyT| {
        let mut acc = PolyT::zero();
        for c in coeffs.iter().rev() {
            acc = trunc(&(&(&acc * x) + c), n);
        }
        acc
    };
    let mut prec = 1;
    let mut iters = 0;
    while prec < n || iters < 2 {
        prec = (2 * prec).min(n);
        let fx = eval(shifted, &x);
        let dfx = eval(&deriv, &x);
        if dfx.coeff(0).is_zero() {
            return None;
        }
        let step = trunc(&(&fx * &series_inv(&dfx, n)), n);
        x = trunc(&(&x - &step), n);
        iters += 1;
        if iters > 64 {
            break;
        }
    }
    Some(x)
}

/// Padé reconstruction `a/b ≡ series mod s^n` with `deg a, deg b <= d`.
fn pade(series: &PolyT, n: usize, d: usize) -> Option<(PolyT, PolyT)> {
    let mut r0 = PolyT::monomial(Q::one(), n);
    let mut r1 = series.clone();
    let mut t0 = PolyT::zero();
    let mut t1 = PolyT::one();
    while r1.deg() > d as i64 {
        let (qq, r) = r0.div_rem(&r1);
        let t2 = &t0 - &(&qq * &t1);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    if t1.deg() > d as i64 || t1.coeff(0).is_zero() {
        return None;
    }
    Some((r1, t1))
}

/// Roots in Q(t) of a square-free `f ∈ Q(t)[x]`.
pub fn roots_in_qt(f: &PolyX) -> Vec<RatT> {
    let deg = match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    if deg == 1 {
        let c = f.monic();
        return vec![-c.coeff(0)];
    }
    let biv = to_bivariate(f);
    let dt = biv.iter().map(|c| c.deg().max(0) as usize).max().unwrap_or(0);
    let n = 2 * dt + 2;
    let candidates: [i64; 12] = [2, 3, 5, 7, -2, -3, 11, 13, -5, 17, 19, 23];
    for t0v in candidates {
        let t0 = Q::from_i64(t0v);
        let f0 = Poly::new(biv.iter().map(|c| c.eval(&t0)).collect());
        if f0.degree() != Some(deg) || !f0.gcd(&f0.derivative()).is_one() {
            continue;
        }
        let shift = PolyT::new(vec![t0.clone(), Q::one()]);
        let back = PolyT::new(vec![-t0.clone(), Q::one()]);
        let shifted: Vec<PolyT> = biv.iter().map(|c| trunc(&c.compose(&shift), n)).collect();
        let mut out = Vec::new();
        for x0 in rational_roots(&f0) {
            let Some(series) = newton_lift(&shifted, &x0, n) else { continue };
            let Some((a, b)) = pade(&series, n, dt) else { continue };
            let r = Frac::from_parts(a.compose(&back), b.compose(&back));
            if f.eval(&r).is_zero() && !out.contains(&r) {
                out.push(r);
            }
        }
        return out;
    }
    Vec::new()
}

/// Splits a square-free monic polynomial into linear factors over Q(t) and
/// an atomic cofactor.
pub fn split_squarefree(f: &PolyX) -> (Vec<PolyX>, PolyX) {
    let roots = roots_in_qt(f);
    let mut cof = f.monic();
    let mut lin = Vec::new();
    for r in roots {
        let l = PolyX::linear(r);
        if let Some(q) = cof.exact_div(&l) {
            cof = q;
            lin.push(l);
        }
    }
    (lin, cof)
}

/// Pole factors of `d` with multiplicities.
pub fn pole_factors(d: &PolyX) -> Vec<PoleFactor> {
    let (_, parts) = d.squarefree_decomposition();
    let mut out = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        if part.is_constant() {
            continue;
        }
        let (lin, cof) = split_squarefree(part);
        for l in lin {
            out.push(PoleFactor {
                factor: l,
                multiplicity: i + 1,
                irreducible: true,
            });
        }
        if !cof.is_constant() {
            let deg = cof.degree().unwrap();
            out.push(PoleFactor {
                factor: cof,
                multiplicity: i + 1,
                irreducible: deg <= 3,
            });
        }
    }
    sort_factors(&mut out);
    out
}

fn sort_factors(v: &mut [PoleFactor]) {
    v.sort_by(|a, b| {
        a.factor
            .deg()
            .cmp(&b.factor.deg())
            .then_with(|| a.factor.render().cmp(&b.factor.render()))
    });
}

/// A term `numerator / factor^exponent` with `deg numerator < deg factor`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionTerm {
    pub numerator: PolyX,
    pub factor: PolyX,
    pub exponent: usize,
}

impl FractionTerm {
    pub fn value(&self) -> RatFunc {
        Frac::from_parts(self.numerator.clone(), self.factor.pow(self.exponent))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub polynomial: PolyX,
    pub terms: Vec<FractionTerm>,
}

impl PartialFractions {
    pub fn recombine(&self) -> RatFunc {
        self.terms
            .iter()
            .fold(RatFunc::from_poly(self.polynomial.clone()), |acc, t| &acc + &t.value())
    }
}

/// Full partial-fraction decomposition in x over the pole factors of `f`.
pub fn partial_fractions_x(f: &RatFunc) -> PartialFractions {
    let (poly, rem) = f.split_poly();
    let den = f.den();
    let mut terms = Vec::new();
    if !rem.is_zero() {
        let factors = pole_factors(den);
        for pf in &factors {
            let pk = pf.factor.pow(pf.multiplicity);
            let cof = den.exact_div(&pk).unwrap();
            let inv = cof.inv_mod(&pk).expect("coprime factors");
            let mut a = (&rem * &inv).rem(&pk);
            let mut e = pf.multiplicity;
            let mut local = Vec::new();
            while !a.is_zero() && e > 0 {
                let (qq, r) = a.div_rem(&pf.factor);
                if !r.is_zero() {
                    local.push(FractionTerm {
                        numerator: r,
                        factor: pf.factor.clone(),
                        exponent: e,
                    });
                }
                a = qq;
                e -= 1;
            }
            local.reverse();
            terms.extend(local);
        }
    }
    PartialFractions { polynomial: poly, terms }
}

/// Residue of `a/s` (`s` square-free, `deg a < deg s`) along a factor `p`
/// of `s`, as a polynomial reduced mod `p`.
pub fn residue_mod(a: &PolyX, s: &PolyX, p: &PolyX) -> PolyX {
    if let Some(c) = constant_residue(a, s, p) {
        return PolyX::constant(c);
    }
    let ds = s.derivative().rem(p);
    let inv = ds.inv_mod(p).expect("square-free denominator");
    (&a.rem(p) * &inv).rem(p)
}

/// The residue of `a/s` along `p` when it is a constant `c`, found without
/// inverting `s'`: then `a ≡ c s' (mod p)`, so `c` is the ratio of leading
/// coefficients of the two remainders.
pub fn constant_residue(a: &PolyX, s: &PolyX, p: &PolyX) -> Option<RatT> {
    let ar = a.rem(p);
    if ar.is_zero() {
        return Some(RatT::zero());
    }
    let ds = s.derivative().rem(p);
    if ar.deg() != ds.deg() {
        return None;
    }
    let c = ar.lc()?.clone() / ds.lc()?.clone();
    (ar == ds.scale(&c)).then_some(c)
}

/// Refines coprime factors so that each part divides `by` or is coprime to it.
pub fn refine_by(parts: Vec<PolyX>, by: &PolyX) -> Vec<PolyX> {
    let mut out = Vec::new();
    for p in parts {
        let g = p.gcd(by);
        if g.is_constant() || g.deg() == p.deg() {
            out.push(p);
        } else {
            out.push(p.exact_div(&g).expect("gcd divides").monic());
            out.push(g.monic());
        }
    }
    out
}

/// Splits a square-free `p` into parts on which the residue polynomial `v`
/// (a class mod `p`) is a constant of Q(t). Residues at the roots of `p`
/// are the eigenvalues of multiplication by `v` on Q(t)[x]/(p), so the
/// constant ones are the Q(t)-roots of its characteristic polynomial.
/// The part without a Q(t)-valued residue, if any, comes last with its
/// residue polynomial.
pub fn residue_split(v: &PolyX, p: &PolyX) -> Vec<(PolyX, PolyX)> {
    if v.deg() <= 0 {
        return vec![(p.clone(), v.clone())];
    }
    let d = p.deg() as usize;
    let cols: Vec<Vec<RatT>> = (0..d)
        .map(|j| {
            let w = (v * &PolyX::monomial(RatT::one(), j)).rem(p);
            (0..d).map(|k| w.coeff(k)).collect()
        })
        .collect();
    let m = crate::matrix::Matrix::from_fn(d, d, |r, c| cols[c][r].clone());
    let xs: Vec<RatT> = (0..=d).map(|j| RatT::from_i64(j as i64)).collect();
    let ys: Vec<RatT> = xs
        .iter()
        .map(|l| crate::matrix::Matrix::from_fn(d, d, |r, c| if r == c { l - &m[(r, c)] } else { -m[(r, c)].clone() }).det())
        .collect();
    let chi = crate::frac::interpolate(&xs, &ys);
    let mut rest = p.clone();
    let mut out = Vec::new();
    for c in roots_in_qt(&chi.squarefree_part()) {
        let shifted = (v - &PolyX::constant(c.clone())).rem(&rest);
        let g = rest.gcd(&shifted);
        if !g.is_constant() {
            rest = rest.exact_div(&g).expect("gcd divides").monic();
            out.push((g.monic(), PolyX::constant(c)));
        }
    }
    if !rest.is_constant() {
        let w = v.rem(&rest);
        out.push((rest, w));
    }
    out
}

/// Q(t)-element from a rational number.
pub fn rat_const(q: &BigRational) -> RatT {
    RatT::from_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_split_separates_halves() {
        let x = PolyX::var();
        let one = PolyX::one();
        let q1 = &(&x * &x) + &one;
        let q2 = &(&x * &x) - &PolyX::constant(crate::qtx::t_rat());
        let s = &q1 * &q2;
        // a/s with residue 1 along q1 and -1 along q2
        let a = &(&q1.derivative() * &q2) - &(&q2.derivative() * &q1);
        let v = residue_mod(&a, &s, &s);
        let mut parts = residue_split(&v, &s);
        parts.sort_by_key(|(_, c)| c.coeff(0).render());
        assert_eq!(parts, vec![(q2, PolyX::constant(RatT::from_i64(-1))), (q1, PolyX::one())]);
    }

    use crate::qtx::{rat, t_rat, x_func};

    fn lin(r: RatT) -> PolyX {
        PolyX::linear(r)
    }

    #[test]
    fn rational_roots_simple() {
        // 2t^2 - 3t + 1 = (2t-1)(t-1)
        let p = PolyT::new(vec![Q::from_i64(1), Q::from_i64(-3), Q::from_i64(2)]);
        assert_eq!(rational_roots(&p), vec![crate::field::q(1, 2), Q::one()]);
    }

    #[test]
    fn linear_factors_with_parameter() {
        // (x - t)(x + 1)(x^2 + t)
        let f = &(&lin(t_rat()) * &lin(rat(-1, 1))) * &PolyX::new(vec![t_rat(), RatT::zero(), RatT::one()]);
        let (l, cof) = split_squarefree(&f);
        assert_eq!(l.len(), 2);
        assert_eq!(cof.degree(), Some(2));
    }

    #[test]
    fn rational_function_root() {
        // x - t/(t+1) times x - 2t^2
        let r1 = &t_rat() / &(&t_rat() + &RatT::one());
        let r2 = &(&t_rat() * &t_rat()) * &rat(2, 1);
        let f = &lin(r1.clone()) * &lin(r2.clone());
        let roots = roots_in_qt(&f);
        assert!(roots.contains(&r1) && roots.contains(&r2));
    }

    #[test]
    fn partial_fractions_examples() {
        let x = x_func();
        let one = RatFunc::one();
        let f = &one / &(&(&x * &x) - &x);
        let pf = partial_fractions_x(&f);
        assert_eq!(pf.terms.len(), 2);
        assert_eq!(pf.recombine(), f);
        let g = &(&(&x * &x) + &one) / &x;
        let pg = partial_fractions_x(&g);
        assert_eq!(pg.polynomial, PolyX::var());
        assert_eq!(pg.terms.len(), 1);
        assert_eq!(pg.recombine(), g);
    }
}

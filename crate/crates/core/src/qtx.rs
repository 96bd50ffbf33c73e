//! The differential field Q(t)(x) with the commuting derivations d/dx, d/dt.

use num_rational::BigRational;
use num_traits::Zero;

use crate::field::Field;
use crate::frac::Frac;
use crate::poly::Poly;
use crate::{PolyX, RatFunc, RatT};

/// One of the two commuting derivations of Q(t)(x).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Derivation {
    Dx,
    Dt,
}

/// A field carrying both derivations.
pub trait DiffField: Field {
    fn derive(&self, d: Derivation) -> Self;

    fn derive_n(&self, d: Derivation, n: usize) -> Self {
        let mut cur = self.clone();
        for _ in 0..n {
            cur = cur.derive(d);
        }
        cur
    }
}

/// d/dt on Q(t).
pub fn dt_rat(c: &RatT) -> RatT {
    c.derivative()
}

impl DiffField for RatFunc {
    fn derive(&self, d: Derivation) -> Self {
        match d {
            Derivation::Dx => self.derivative(),
            Derivation::Dt => self.derive_with(&dt_rat, false),
        }
    }
}

impl DiffField for RatT {
    fn derive(&self, d: Derivation) -> Self {
        match d {
            Derivation::Dx => RatT::zero(),
            Derivation::Dt => self.derivative(),
        }
    }
}

/// d/dt applied coefficientwise to a polynomial in x.
pub fn dt_poly(p: &PolyX) -> PolyX {
    p.map_coeffs(dt_rat)
}

pub fn rat(n: i64, d: i64) -> RatT {
    RatT::constant(crate::field::q(n, d))
}

pub fn t_rat() -> RatT {
    RatT::var()
}

pub fn x_func() -> RatFunc {
    RatFunc::var()
}

pub fn t_func() -> RatFunc {
    RatFunc::constant(RatT::var())
}

pub fn from_rat(c: RatT) -> RatFunc {
    RatFunc::constant(c)
}

/// Element of Q(t) if `f` is free of x.
pub fn as_rat_t(f: &RatFunc) -> Option<RatT> {
    f.as_coeff()
}

/// Element of Q if `c` is free of t.
pub fn as_q(c: &RatT) -> Option<BigRational> {
    c.as_coeff()
}

/// Evaluates a Q(t)-element at a rational `t` value.
pub fn eval_rat_t(c: &RatT, t0: &BigRational) -> Option<BigRational> {
    c.eval(t0)
}

/// Builds `num/den` from polynomials in x.
pub fn ratfunc(num: PolyX, den: PolyX) -> RatFunc {
    Frac::from_parts(num, den)
}

pub fn poly_x_from_rat(c: RatT) -> PolyX {
    Poly::constant(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn derivations_on_t_over_x() {
        let f = &t_func() / &x_func();
        assert_eq!(f.derive(Derivation::Dt), &RatFunc::one() / &x_func());
        let expect = -&(&t_func() / &(&x_func() * &x_func()));
        assert_eq!(f.derive(Derivation::Dx), expect);
    }

    #[test]
    fn dx_kills_t_only_elements() {
        let c = from_rat(&t_rat() / &(&t_rat() + &RatT::one()));
        assert!(c.derive(Derivation::Dx).is_zero());
        assert!(as_rat_t(&c).is_some());
        assert!(as_rat_t(&x_func()).is_none());
    }
}

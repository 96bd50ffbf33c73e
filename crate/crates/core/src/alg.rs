//! Quadratic extension Q(t)(x)[z]/(z^2 - q).

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::field::Field;
use crate::qtx::{DiffField, Derivation};
use crate::RatFunc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtensionError {
    #[error("modulus is not square-free in x")]
    NotSquarefree,
    #[error("modulus is zero")]
    Zero,
    #[error("elements from different extensions were combined")]
    FieldMismatch,
}

/// The value `a + b z` with `z^2 = q`. The modulus is shared by reference;
/// elements with `b = 0` may carry no modulus and then combine with any
/// extension.
#[derive(Clone, Debug)]
pub struct AlgElem {
    a: RatFunc,
    b: RatFunc,
    modulus: Option<Arc<RatFunc>>,
}

impl AlgElem {
    pub fn new(a: RatFunc, b: RatFunc, modulus: Option<Arc<RatFunc>>) -> Self {
        assert!(b.is_zero() || modulus.is_some(), "z-part without modulus");
        AlgElem { a, b, modulus }
    }

    /// Declares the extension `z^2 = q`; checks square-freeness in x.
    pub fn modulus(q: RatFunc) -> Result<Arc<RatFunc>, ExtensionError> {
        if q.is_zero() {
            return Err(ExtensionError::Zero);
        }
        let n = q.num();
        let d = q.den();
        let sqf_n = n.squarefree_decomposition().1.len() <= 1;
        let sqf_d = d.squarefree_decomposition().1.len() <= 1;
        if !(sqf_n && sqf_d) {
            return Err(ExtensionError::NotSquarefree);
        }
        Ok(Arc::new(q))
    }

    pub fn from_base(a: RatFunc) -> Self {
        AlgElem {
            a,
            b: RatFunc::zero(),
            modulus: None,
        }
    }

    /// The generator `z`.
    pub fn z(m: &Arc<RatFunc>) -> Self {
        AlgElem {
            a: RatFunc::zero(),
            b: RatFunc::one(),
            modulus: Some(m.clone()),
        }
    }

    pub fn even(&self) -> &RatFunc {
        &self.a
    }

    pub fn odd(&self) -> &RatFunc {
        &self.b
    }

    pub fn modulus_ref(&self) -> Option<&Arc<RatFunc>> {
        self.modulus.as_ref()
    }

    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }

    pub fn with_modulus(mut self, m: &Arc<RatFunc>) -> Self {
        self.modulus = Some(m.clone());
        self
    }

    /// `a - b z`.
    pub fn conj(&self) -> Self {
        AlgElem {
            a: self.a.clone(),
            b: -&self.b,
            modulus: self.modulus.clone(),
        }
    }

    /// `a^2 - b^2 q`.
    pub fn norm(&self) -> RatFunc {
        match &self.modulus {
            None => &self.a * &self.a,
            Some(q) => &(&self.a * &self.a) - &(&(&self.b * &self.b) * q.as_ref()),
        }
    }

    pub fn try_combine(&self, o: &Self) -> Result<Option<Arc<RatFunc>>, ExtensionError> {
        match (&self.modulus, &o.modulus) {
            (None, m) | (m, None) => Ok(m.clone()),
            (Some(a), Some(b)) => {
                if Arc::ptr_eq(a, b) || a == b {
                    Ok(Some(a.clone()))
                } else {
                    Err(ExtensionError::FieldMismatch)
                }
            }
        }
    }

    fn merged(&self, o: &Self) -> Option<Arc<RatFunc>> {
        self.try_combine(o).expect("elements of different quadratic extensions")
    }

    fn tidy(mut self) -> Self {
        if self.b.is_zero() {
            self.modulus = None;
        }
        self
    }
}

impl PartialEq for AlgElem {
    fn eq(&self, o: &Self) -> bool {
        if self.a != o.a || self.b != o.b {
            return false;
        }
        if self.b.is_zero() {
            return true;
        }
        match (&self.modulus, &o.modulus) {
            (Some(p), Some(q)) => p == q,
            _ => false,
        }
    }
}

impl Zero for AlgElem {
    fn zero() -> Self {
        AlgElem::from_base(RatFunc::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for AlgElem {
    fn one() -> Self {
        AlgElem::from_base(RatFunc::one())
    }
}

impl<'a> Add for &'a AlgElem {
    type Output = AlgElem;
    fn add(self, o: &'a AlgElem) -> AlgElem {
        let m = self.merged(o);
        AlgElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            modulus: m,
        }
        .tidy()
    }
}

impl<'a> Sub for &'a AlgElem {
    type Output = AlgElem;
    fn sub(self, o: &'a AlgElem) -> AlgElem {
        self + &(-o)
    }
}

impl<'a> Neg for &'a AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        AlgElem {
            a: -&self.a,
            b: -&self.b,
            modulus: self.modulus.clone(),
        }
    }
}

impl<'a> Mul for &'a AlgElem {
    type Output = AlgElem;
    fn mul(self, o: &'a AlgElem) -> AlgElem {
        let m = self.merged(o);
        let mut a = &self.a * &o.a;
        if !self.b.is_zero() && !o.b.is_zero() {
            let q = m.as_ref().unwrap();
            a = &a + &(&(&self.b * &o.b) * q.as_ref());
        }
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        AlgElem { a, b, modulus: m }.tidy()
    }
}

impl<'a> Div for &'a AlgElem {
    type Output = AlgElem;
    fn div(self, o: &'a AlgElem) -> AlgElem {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero");
        let c = o.conj();
        let p = self * &c;
        AlgElem {
            a: &p.a / &n,
            b: &p.b / &n,
            modulus: p.modulus,
        }
        .tidy()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for AlgElem {
            type Output = AlgElem;
            fn $m(self, o: AlgElem) -> AlgElem {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        -&self
    }
}

impl Field for AlgElem {
    const DEPTH: usize = 2;

    fn from_i64(n: i64) -> Self {
        AlgElem::from_base(RatFunc::from_i64(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        AlgElem::from_base(RatFunc::from_rational(q))
    }

    fn render(&self) -> String {
        if self.b.is_zero() {
            return self.a.render();
        }
        let zpart = if self.b.is_one() {
            "z".to_string()
        } else {
            format!("({})*z", self.b.render())
        };
        if self.a.is_zero() {
            zpart
        } else {
            format!("{} + {}", self.a.render(), zpart)
        }
    }

    fn is_atomic(&self) -> bool {
        self.b.is_zero() && self.a.is_atomic()
    }

    fn is_negative_display(&self) -> bool {
        self.b.is_zero() && self.a.is_negative_display()
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            self.a.as_rational()
        } else {
            None
        }
    }
}

impl DiffField for AlgElem {
    /// Uses `dz = (dq / 2q) z`.
    fn derive(&self, d: Derivation) -> Self {
        let da = self.a.derive(d);
        if self.b.is_zero() {
            return AlgElem::from_base(da);
        }
        let q = self.modulus.as_ref().unwrap();
        let half = RatFunc::from_rational(&crate::field::q(1, 2));
        let log_dq = &(&q.derive(d) / q.as_ref()) * &half;
        let db = &self.b.derive(d) + &(&self.b * &log_dq);
        AlgElem {
            a: da,
            b: db,
            modulus: self.modulus.clone(),
        }
        .tidy()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtx::{t_func, x_func};

    fn pf_modulus() -> Arc<RatFunc> {
        let x = x_func();
        let q = &(&x * &(&x - &RatFunc::one())) * &(&x - &t_func());
        AlgElem::modulus(q).unwrap()
    }

    #[test]
    fn z_squared_is_modulus() {
        let m = pf_modulus();
        let z = AlgElem::z(&m);
        assert_eq!(&z * &z, AlgElem::from_base(m.as_ref().clone()));
    }

    #[test]
    fn conjugate_product_is_norm() {
        let m = pf_modulus();
        let e = AlgElem::new(x_func(), t_func(), Some(m.clone()));
        assert_eq!(&e * &e.conj(), AlgElem::from_base(e.norm()));
    }

    #[test]
    fn derivative_of_inverse_z() {
        let m = pf_modulus();
        let z = AlgElem::z(&m);
        let inv = &AlgElem::one() / &z;
        let x = x_func();
        let one = RatFunc::one();
        let half = RatFunc::from_rational(&crate::field::q(-1, 2));
        let p = &half * &(&(&(&one / &x) + &(&one / &(&x - &one))) + &(&one / &(&x - &t_func())));
        assert_eq!(inv.derive(Derivation::Dx), &AlgElem::from_base(p) * &inv);
    }

    #[test]
    fn square_modulus_rejected() {
        let x = x_func();
        assert_eq!(AlgElem::modulus(&x * &x), Err(ExtensionError::NotSquarefree));
    }
}

//! Hermite reduction and rational integrals in x.

use num_traits::Zero;

use crate::factor::{pole_factors, residue_mod, residue_split};
use crate::field::Field;
use crate::frac::Frac;
use crate::poly::Poly;
use crate::{PolyX, RatFunc};

/// `f = polynomial' + rational' + log_num/log_den` where
/// `polynomial = ∫ poly part`, `log_den` is monic square-free and
/// `deg log_num < deg log_den`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermite<F> {
    pub polynomial: Poly<F>,
    pub rational: Frac<F>,
    pub log_num: Poly<F>,
    pub log_den: Poly<F>,
}

impl<F: Field> Hermite<F> {
    pub fn antiderivative(&self) -> Frac<F> {
        &Frac::from_poly(self.polynomial.clone()) + &self.rational
    }

    pub fn log_part(&self) -> Frac<F> {
        Frac::from_parts(self.log_num.clone(), self.log_den.clone())
    }

    pub fn is_exact(&self) -> bool {
        self.log_num.is_zero()
    }
}

/// Hermite reduction with respect to the own variable of `Frac<F>`.
pub fn hermite_reduce<F: Field>(f: &Frac<F>) -> Hermite<F> {
    let (p, mut a) = f.split_poly();
    let d = f.den().clone();
    let mut g = Frac::<F>::zero();
    let mut dm = d.gcd(&d.derivative());
    let ds = d.exact_div(&dm).unwrap();
    while dm.deg() > 0 {
        let dm2 = dm.gcd(&dm.derivative());
        let dms = dm.exact_div(&dm2).unwrap();
        let lhs = -(&ds * &dm.derivative()).exact_div(&dm).unwrap();
        let (b, c) = Poly::diophantine(&lhs, &dms, &a);
        a = &c - &(&b.derivative() * &ds.exact_div(&dms).unwrap());
        g = &g + &Frac::from_parts(b, dm.clone());
        dm = dm2;
    }
    let log = Frac::from_parts(a, ds);
    Hermite {
        polynomial: p.integral(),
        rational: g,
        log_num: log.num().clone(),
        log_den: log.den().clone(),
    }
}

/// Residue of an obstructed integrand along one pole factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Residue {
    pub factor: PolyX,
    /// Residue as a polynomial reduced modulo `factor`.
    pub value: PolyX,
    /// False when `factor` was not certified irreducible over Q(t).
    pub irreducible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OddObstruction {
    pub denominator: PolyX,
    pub numerator_degree_bound: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegralCertificate<E> {
    Exact {
        antiderivative: E,
    },
    Obstructed {
        residues: Vec<Residue>,
        /// Present when the z-part has no antiderivative within the bounds.
        odd: Option<OddObstruction>,
    },
}

impl<E> IntegralCertificate<E> {
    pub fn is_exact(&self) -> bool {
        matches!(self, IntegralCertificate::Exact { .. })
    }

    pub fn antiderivative(&self) -> Option<&E> {
        match self {
            IntegralCertificate::Exact { antiderivative } => Some(antiderivative),
            _ => None,
        }
    }
}

/// Per-factor residues of `a/s`, `s` square-free.
pub fn residues(a: &PolyX, s: &PolyX) -> Vec<Residue> {
    if a.is_zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for pf in pole_factors(s) {
        let v = residue_mod(a, s, &pf.factor);
        let parts = if pf.irreducible { vec![(pf.factor, v)] } else { residue_split(&v, &pf.factor) };
        for (factor, value) in parts {
            if !value.is_zero() {
                let irreducible = factor.deg() <= 3;
                out.push(Residue { factor, value, irreducible });
            }
        }
    }
    out
}

/// Decides whether `g = f'` for some `f ∈ Q(t)(x)`.
pub fn rational_integral(g: &RatFunc) -> IntegralCertificate<RatFunc> {
    let h = hermite_reduce(g);
    if h.is_exact() {
        IntegralCertificate::Exact {
            antiderivative: h.antiderivative(),
        }
    } else {
        IntegralCertificate::Obstructed {
            residues: residues(&h.log_num, &h.log_den),
            odd: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtx::{rat, t_func, x_func};
    use num_traits::One;

    #[test]
    fn reduction_recombines() {
        let x = x_func();
        let one = RatFunc::one();
        let f = &(&(&t_func() / &(&x * &x)) + &(&one / &(&x - &one))) + &(&x / &(&(&x + &one).powi(3).unwrap()));
        let h = hermite_reduce(&f);
        let back = &h.antiderivative().derivative() + &h.log_part();
        assert_eq!(back, f);
        assert_eq!(h.log_den.degree(), Some(1));
    }

    #[test]
    fn one_over_x_is_obstructed() {
        let r = rational_integral(&(&RatFunc::one() / &x_func()));
        match r {
            IntegralCertificate::Obstructed { residues, .. } => {
                assert_eq!(residues.len(), 1);
                assert_eq!(residues[0].factor, PolyX::var());
                assert_eq!(residues[0].value, PolyX::constant(rat(1, 1)));
            }
            _ => panic!("expected obstruction"),
        }
    }

    #[test]
    fn exact_integrals() {
        let x = x_func();
        let g = &(&x * &RatFunc::from_i64(2)) + &RatFunc::one();
        assert_eq!(
            *rational_integral(&g).antiderivative().unwrap(),
            &(&x * &x) + &x
        );
        let g2 = &t_func() / &(&x * &x);
        assert_eq!(*rational_integral(&g2).antiderivative().unwrap(), -&(&t_func() / &x));
    }
}

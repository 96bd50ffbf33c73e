//! Rational solutions: integrals, logarithmic derivatives, relations among
//! integrands, rational solutions of linear systems and annihilators.

pub mod integrate;
pub mod linear;
pub mod logderiv;
pub mod relations;
pub mod wronskian;

pub use integrate::{hermite_reduce, rational_integral, Hermite, IntegralCertificate, Residue};
pub use linear::{rational_system_solutions, scalar_solutions, AffineSolutions, SearchBounds};
pub use logderiv::{exponent_lattice, log_derivative_order, ExponentLattice, LogDerivative};
pub use relations::{algebraic_integral, constants_relations, constants_relations_rat, joint_relations, JointRelation, Relation};
pub use wronskian::{wronskian_annihilator, DegenerateInput};

use num_traits::{One, Zero};

use crate::field::Field;
use crate::poly::Poly;
use crate::{PolyT, Q, RatFunc, RatT};

/// Rows `R` over Q(t) with `∑ λ_c vals[c] = 0  ⇔  R λ = 0`.
pub fn coefficient_rows(vals: &[RatFunc]) -> Vec<Vec<RatT>> {
    let mut l = crate::PolyX::one();
    for v in vals {
        if !v.is_zero() {
            l = l.lcm(v.den());
        }
    }
    let nums: Vec<crate::PolyX> = vals
        .iter()
        .map(|v| {
            if v.is_zero() {
                crate::PolyX::zero()
            } else {
                v.num() * &l.exact_div(v.den()).unwrap()
            }
        })
        .collect();
    let deg = nums.iter().map(|n| n.deg()).max().unwrap_or(-1);
    if deg < 0 {
        return Vec::new();
    }
    (0..=deg as usize)
        .map(|k| nums.iter().map(|n| n.coeff(k)).collect::<Vec<RatT>>())
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .collect()
}

/// Rows over Q with `∑ n_c vals[c] = 0  ⇔  R n = 0` for `n ∈ Q^c`.
pub fn rational_rows(vals: &[RatT]) -> Vec<Vec<Q>> {
    let mut l = PolyT::one();
    for v in vals {
        if !v.is_zero() {
            l = l.lcm(v.den());
        }
    }
    let nums: Vec<PolyT> = vals
        .iter()
        .map(|v| if v.is_zero() { PolyT::zero() } else { v.num() * &l.exact_div(v.den()).unwrap() })
        .collect();
    let deg = nums.iter().map(|n| n.deg()).max().unwrap_or(-1);
    if deg < 0 {
        return Vec::new();
    }
    (0..=deg as usize)
        .map(|k| nums.iter().map(|n| n.coeff(k)).collect::<Vec<Q>>())
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .collect()
}

/// `x^k` as an element of Q(t)(x).
pub(crate) fn xpow(k: usize) -> RatFunc {
    RatFunc::from_poly(Poly::monomial(RatT::one(), k))
}

pub(crate) fn degree_at_infinity<F: Field>(f: &crate::frac::Frac<F>) -> i64 {
    if f.is_zero() {
        i64::MIN / 4
    } else {
        f.num().deg() - f.den().deg()
    }
}

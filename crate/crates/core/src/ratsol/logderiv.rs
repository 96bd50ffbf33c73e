//! Logarithmic derivatives `f'/f` and the exponent lattice of a family.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

use super::integrate::hermite_reduce;
use super::{coefficient_rows, rational_rows};
use crate::alg::AlgElem;
use crate::factor::{constant_residue, pole_factors, refine_by, residue_mod, residue_split};
use crate::field::Field;
use crate::lattice::{hnf_basis, integer_kernel, integrality_sublattice, torsion_order};
use crate::qtx::{DiffField, Derivation};
use crate::{PolyX, Q, RatFunc, RatT};

/// `order · r = witness' / witness` with `order` minimal.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDerivative<E> {
    pub order: BigInt,
    pub witness: E,
}

pub(crate) fn dlog<E: DiffField>(f: &E) -> E {
    f.derive(Derivation::Dx) / f.clone()
}

fn big_const(n: &BigInt) -> RatFunc {
    RatFunc::from_rational(&Q::from_integer(n.clone()))
}

/// Smallest `n ≥ 1` with `n r ∈ ∂_x(F*)/F*`, with a witness.
pub fn log_derivative_order(r: &RatFunc) -> Option<LogDerivative<RatFunc>> {
    if r.is_zero() {
        return Some(LogDerivative {
            order: BigInt::one(),
            witness: RatFunc::one(),
        });
    }
    let (p, a) = r.split_poly();
    if !p.is_zero() || r.den().squarefree_part().deg() != r.den().deg() {
        return None;
    }
    let mut res = Vec::new();
    for pf in pole_factors(r.den()) {
        if pf.irreducible {
            res.push((pf.factor.clone(), constant_residue(&a, r.den(), &pf.factor)?.as_coeff()?));
            continue;
        }
        let v = residue_mod(&a, r.den(), &pf.factor);
        for (part, v) in residue_split(&v, &pf.factor) {
            if v.deg() > 0 {
                return None;
            }
            res.push((part, v.coeff(0).as_coeff()?));
        }
    }
    let n = res.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut f = RatFunc::one();
    for (pi, c) in &res {
        let e = (c * Q::from_integer(n.clone())).to_integer();
        let e: i64 = e.try_into().ok()?;
        f = &f * &RatFunc::from_poly(pi.clone()).powi(e).ok()?;
    }
    (dlog(&f) == &big_const(&n) * r).then_some(LogDerivative { order: n, witness: f })
}

/// `{n ∈ Z^k : ∑ n_i r_i ∈ ∂_x(K*)/K*}` for `K = F` or `K = F(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentLattice {
    pub basis: Vec<Vec<BigInt>>,
    /// `∑ basis[l]_i r_i = w'/w`.
    pub witnesses: Vec<AlgElem>,
    pub rank: usize,
    /// Order of the torsion subgroup of `Z^k / Λ`.
    pub torsion: BigInt,
    /// False when some pole factor was not certified irreducible; the
    /// lattice is then a sub-lattice of the true one.
    pub complete: bool,
}

impl ExponentLattice {
    pub fn torus_dim(&self, k: usize) -> usize {
        k - self.rank
    }
}

fn combine(ns: &[BigInt], rs: &[RatFunc]) -> RatFunc {
    ns.iter()
        .zip(rs)
        .filter(|(n, _)| !n.is_zero())
        .fold(RatFunc::zero(), |acc, (n, r)| &acc + &(&big_const(n) * r))
}

/// Lattice in Z^k over F.
fn base_lattice(rs: &[RatFunc]) -> (Vec<Vec<BigInt>>, bool) {
    let k = rs.len();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let push_qt = |vals: Vec<RatT>, rows: &mut Vec<Vec<Q>>| rows.extend(rational_rows(&vals));
    let splits: Vec<_> = rs.iter().map(|r| r.split_poly()).collect();
    let pdeg = splits.iter().map(|(p, _)| p.deg()).max().unwrap_or(-1);
    for c in 0..pdeg + 1 {
        push_qt(splits.iter().map(|(p, _)| p.coeff(c as usize)).collect(), &mut rows);
    }
    let hs: Vec<_> = rs.iter().map(hermite_reduce).collect();
    for r in coefficient_rows(&hs.iter().map(|h| h.rational.clone()).collect::<Vec<_>>()) {
        push_qt(r, &mut rows);
    }
    let mut s = PolyX::one();
    for h in &hs {
        s = s.lcm(&h.log_den);
    }
    let mut complete = true;
    let mut consts: Vec<Vec<RatT>> = Vec::new();
    let mut parts = Vec::new();
    for pf in pole_factors(&s) {
        if pf.irreducible {
            parts.push(pf.factor);
            continue;
        }
        // composite atoms: split until each part divides or avoids every
        // denominator, and along Q(t)-valued residues
        let mut ps = vec![pf.factor];
        for h in &hs {
            ps = refine_by(ps, &h.log_den);
        }
        for h in hs.iter().filter(|h| !h.log_num.is_zero()) {
            ps = ps
                .into_iter()
                .flat_map(|p| {
                    if h.log_den.rem(&p).is_zero() {
                        let v = residue_mod(&h.log_num, &h.log_den, &p);
                        residue_split(&v, &p).into_iter().map(|(q, _)| q).collect()
                    } else {
                        vec![p]
                    }
                })
                .collect();
        }
        parts.extend(ps);
    }
    for factor in parts {
        let d = factor.degree().unwrap();
        complete &= d <= 3;
        let vals: Vec<PolyX> = hs
            .iter()
            .map(|h| {
                if h.log_num.is_zero() || !h.log_den.rem(&factor).is_zero() {
                    PolyX::zero()
                } else {
                    residue_mod(&h.log_num, &h.log_den, &factor)
                }
            })
            .collect();
        for c in 1..d {
            push_qt(vals.iter().map(|v| v.coeff(c)).collect(), &mut rows);
        }
        let kappa: Vec<RatT> = vals.iter().map(|v| v.coeff(0)).collect();
        push_qt(kappa.iter().map(|c| c.derivative()).collect(), &mut rows);
        consts.push(kappa);
    }
    let basis = if rows.is_empty() {
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        integer_kernel(&rows, k)
    };
    let t0 = (2..200i64)
        .map(|n| Q::from_integer(BigInt::from(n)))
        .find(|t0| consts.iter().flatten().all(|c| c.eval(t0).is_some()))
        .expect("evaluation point");
    let crows: Vec<Vec<Q>> = consts
        .iter()
        .map(|kappa| kappa.iter().map(|c| c.eval(&t0).unwrap()).collect())
        .collect();
    (integrality_sublattice(&basis, &crows, k), complete)
}

/// Exponent lattice of `rs`, optionally over the extension `z^2 = q`.
pub fn exponent_lattice(rs: &[RatFunc], ext: Option<&Arc<RatFunc>>) -> ExponentLattice {
    let k = rs.len();
    let half = RatFunc::from_rational(&crate::field::q(1, 2));
    let (basis, complete) = match ext {
        None => base_lattice(rs),
        Some(q) => {
            let mut all = rs.to_vec();
            all.push(&half * &dlog(q.as_ref()));
            let (b, c) = base_lattice(&all);
            let proj: Vec<Vec<BigInt>> = b.iter().map(|v| v[..k].to_vec()).collect();
            (hnf_basis(&proj, k), c)
        }
    };
    let mut witnesses = Vec::new();
    for b in &basis {
        let rho = combine(b, rs);
        let w = match log_derivative_order(&rho) {
            Some(ld) if ld.order.is_one() => AlgElem::from_base(ld.witness),
            _ => {
                let q = ext.expect("witness outside the base field");
                let ld = log_derivative_order(&(&rho - &(&half * &dlog(q.as_ref()))))
                    .filter(|l| l.order.is_one())
                    .expect("lattice vector without witness");
                &AlgElem::from_base(ld.witness) * &AlgElem::z(q)
            }
        };
        witnesses.push(w);
    }
    let torsion = torsion_order(&basis, k);
    ExponentLattice {
        rank: basis.len(),
        basis,
        witnesses,
        torsion,
        complete,
    }
}

/// Smallest `n ≥ 1` with `n r` a logarithmic derivative in `F(z)`.
pub fn log_derivative_order_ext(r: &RatFunc, q: &Arc<RatFunc>) -> Option<LogDerivative<AlgElem>> {
    let lat = exponent_lattice(&[r.clone()], Some(q));
    let b = lat.basis.first()?;
    Some(LogDerivative {
        order: b[0].abs(),
        witness: lat.witnesses[0].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtx::{t_func, x_func};

    fn p_coeff() -> RatFunc {
        let x = x_func();
        let one = RatFunc::one();
        let h = RatFunc::from_rational(&crate::field::q(-1, 2));
        &h * &(&(&(&one / &x) + &(&one / &(&x - &one))) + &(&one / &(&x - &t_func())))
    }

    #[test]
    fn order_two_for_half_residues() {
        let ld = log_derivative_order(&p_coeff()).unwrap();
        assert_eq!(ld.order, BigInt::from(2));
        let x = x_func();
        let expect = &RatFunc::one() / &(&(&x * &(&x - &RatFunc::one())) * &(&x - &t_func()));
        assert_eq!(ld.witness, expect);
    }

    /// `(x^2 + 1)(x^2 - t)` has no linear factor and stays one atomic
    /// quartic; residues of opposite sign on its two halves must still be
    /// seen.
    #[test]
    fn residues_on_halves_of_a_composite_factor() {
        let x = x_func();
        let one = RatFunc::one();
        let q1 = &(&x * &x) + &one;
        let q2 = &(&x * &x) - &t_func();
        let f = &q1 / &q2;
        let ld = log_derivative_order(&dlog(&f)).unwrap();
        assert_eq!(ld.order, BigInt::one());
        assert_eq!(dlog(&ld.witness), dlog(&f));

        let lat = exponent_lattice(&[dlog(&q1), dlog(&q2)], None);
        assert_eq!(lat.rank, 2);
        for (b, w) in lat.basis.iter().zip(&lat.witnesses) {
            let rho = combine(b, &[dlog(&q1), dlog(&q2)]);
            assert_eq!(AlgElem::from_base(rho), dlog(w));
        }
    }

    #[test]
    fn t_over_x_is_not_torsion() {
        assert!(log_derivative_order(&(&t_func() / &x_func())).is_none());
        let lat = exponent_lattice(&[&t_func() / &x_func()], None);
        assert_eq!(lat.rank, 0);
        assert_eq!(lat.torus_dim(1), 1);
    }

    #[test]
    fn lattice_of_related_pair() {
        let x = x_func();
        let one = RatFunc::one();
        let r1 = &one / &x;
        let r2 = &RatFunc::from_rational(&crate::field::q(1, 3)) / &x;
        let lat = exponent_lattice(&[r1, r2], None);
        assert_eq!(lat.rank, 2);
        assert_eq!(lat.torsion, BigInt::from(3));
    }

    #[test]
    fn extension_absorbs_half_residues() {
        let x = x_func();
        let q = AlgElem::modulus(&(&x * &(&x - &RatFunc::one())) * &(&x - &t_func())).unwrap();
        let ld = log_derivative_order_ext(&p_coeff(), &q).unwrap();
        assert_eq!(ld.order, BigInt::one());
        assert_eq!(dlog(&ld.witness), AlgElem::from_base(p_coeff()));
    }
}

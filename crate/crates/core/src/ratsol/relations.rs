//! Q(t)-linear relations among integrands: `∑ μ_j g_j ∈ ∂_x E`.

use num_traits::{One, Zero};
use std::sync::Arc;

use super::integrate::{hermite_reduce, residues, IntegralCertificate, OddObstruction};
use super::{coefficient_rows, degree_at_infinity, xpow};
use crate::alg::{AlgElem, ExtensionError};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::qtx::{DiffField, Derivation};
use crate::{PolyX, RatFunc, RatT};

/// `∑ coeffs_j g_j = witness'`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<E> {
    pub coeffs: Vec<RatT>,
    pub witness: E,
}

/// A relation shared by several families of integrands of equal length.
#[derive(Clone, Debug, PartialEq)]
pub struct JointRelation {
    pub coeffs: Vec<RatT>,
    pub witnesses: Vec<AlgElem>,
}

/// Extra numerator degrees allowed in the z-part ansatz.
const ODD_SLACK: i64 = 2;

struct OddAnsatz {
    modulus: Arc<RatFunc>,
    denominator: PolyX,
    images: Vec<RatFunc>,
}

impl OddAnsatz {
    fn bound(&self) -> usize {
        self.images.len()
    }
}

/// Ansatz `F = P / G` for `(F z)' = B z` with `B` ranging over `bs`.
fn odd_ansatz(bs: &[RatFunc], modulus: &Arc<RatFunc>) -> OddAnsatz {
    let mut g = PolyX::one();
    let mut dmax = i64::MIN / 4;
    for b in bs.iter().filter(|b| !b.is_zero()) {
        // pole orders of F are one less than those of B
        let d = b.den();
        g = g.lcm(&d.exact_div(&d.squarefree_part()).unwrap());
        dmax = dmax.max(degree_at_infinity(b) + 1);
    }
    let q = modulus.as_ref();
    let dq = q.num().deg() - q.den().deg();
    if dq % 2 == 0 {
        dmax = dmax.max(-dq / 2);
    }
    let top = g.deg() + dmax + ODD_SLACK;
    let gf = RatFunc::from_poly(g.clone());
    let images = (0..top.max(-1) + 1)
        .map(|k| {
            let f = AlgElem::new(RatFunc::zero(), &xpow(k as usize) / &gf, Some(modulus.clone()));
            f.derive(Derivation::Dx).odd().clone()
        })
        .collect();
    OddAnsatz {
        modulus: modulus.clone(),
        denominator: g,
        images,
    }
}

fn common_modulus(gs: &[AlgElem]) -> Result<Option<Arc<RatFunc>>, ExtensionError> {
    let mut m: Option<Arc<RatFunc>> = None;
    for g in gs {
        if let Some(gm) = g.modulus_ref() {
            match &m {
                None => m = Some(gm.clone()),
                Some(cur) if Arc::ptr_eq(cur, gm) || cur == gm => {}
                Some(_) => return Err(ExtensionError::FieldMismatch),
            }
        }
    }
    Ok(m)
}

/// All `μ ∈ Q(t)^p` such that, for every family, `∑ μ_j g_j` has an
/// antiderivative in `Q(t)(x)(z)`; returned as a Q(t)-basis.
pub fn joint_relations(families: &[Vec<AlgElem>]) -> Result<Vec<JointRelation>, ExtensionError> {
    let p = families.first().map(|f| f.len()).unwrap_or(0);
    assert!(families.iter().all(|f| f.len() == p), "families of unequal length");
    let mut rows: Vec<Vec<RatT>> = Vec::new();
    let mut evens = Vec::new();
    let mut odds: Vec<Option<OddAnsatz>> = Vec::new();
    let mut width = p;
    let mut offsets = Vec::new();
    for fam in families {
        let m = common_modulus(fam)?;
        let hs: Vec<_> = fam.iter().map(|g| hermite_reduce(g.even())).collect();
        let logs: Vec<RatFunc> = hs.iter().map(|h| h.log_part()).collect();
        evens.push(hs);
        let bs: Vec<RatFunc> = fam.iter().map(|g| g.odd().clone()).collect();
        let odd = match m {
            Some(m) if bs.iter().any(|b| !b.is_zero()) => Some(odd_ansatz(&bs, &m)),
            _ => None,
        };
        offsets.push(width);
        let aux = odd.as_ref().map(|o| o.bound()).unwrap_or(0);
        let start = width;
        width += aux;
        for r in coefficient_rows(&logs) {
            rows.push(r);
        }
        if let Some(o) = &odd {
            let mut vals: Vec<RatFunc> = bs.iter().map(|b| -b).collect();
            vals.extend(o.images.iter().cloned());
            for r in coefficient_rows(&vals) {
                let mut full = r[..p].to_vec();
                full.extend(std::iter::repeat(RatT::zero()).take(start - p));
                full.extend(r[p..].iter().cloned());
                rows.push(full);
            }
        }
        odds.push(odd);
    }
    let rows: Vec<Vec<RatT>> = rows
        .into_iter()
        .map(|mut r| {
            r.resize(width, RatT::zero());
            r
        })
        .collect();
    let kernel = if rows.is_empty() {
        (0..width)
            .map(|i| (0..width).map(|j| if i == j { RatT::one() } else { RatT::zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    let mut chosen: Vec<Vec<RatT>> = Vec::new();
    let mut out = Vec::new();
    for v in kernel {
        let mu = v[..p].to_vec();
        if mu.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(mu.clone());
        if Matrix::from_rows(trial.clone()).rank() < trial.len() {
            continue;
        }
        chosen = trial;
        let mut witnesses = Vec::new();
        for (f, fam_h) in evens.iter().enumerate() {
            let mut even = RatFunc::zero();
            for (c, h) in mu.iter().zip(fam_h) {
                if !c.is_zero() {
                    even = &even + &(&RatFunc::constant(c.clone()) * &h.antiderivative());
                }
            }
            let mut w = AlgElem::from_base(even);
            if let Some(o) = &odds[f] {
                let off = offsets[f];
                let mut num = PolyX::zero();
                for k in 0..o.bound() {
                    num = &num + &PolyX::monomial(v[off + k].clone(), k);
                }
                let odd = crate::qtx::ratfunc(num, o.denominator.clone());
                w = &w + &AlgElem::new(RatFunc::zero(), odd, Some(o.modulus.clone()));
            }
            witnesses.push(w);
        }
        out.push(JointRelation { coeffs: mu, witnesses });
    }
    Ok(out)
}

/// Relations `∑ μ_j g_j ∈ ∂_x E` among elements of one extension.
pub fn constants_relations(gs: &[AlgElem]) -> Result<Vec<Relation<AlgElem>>, ExtensionError> {
    Ok(joint_relations(&[gs.to_vec()])?
        .into_iter()
        .map(|r| Relation {
            coeffs: r.coeffs,
            witness: r.witnesses.into_iter().next().unwrap(),
        })
        .collect())
}

/// Relations among elements of Q(t)(x).
pub fn constants_relations_rat(gs: &[RatFunc]) -> Vec<Relation<RatFunc>> {
    let lifted: Vec<AlgElem> = gs.iter().cloned().map(AlgElem::from_base).collect();
    constants_relations(&lifted)
        .expect("base elements share a field")
        .into_iter()
        .map(|r| Relation {
            coeffs: r.coeffs,
            witness: r.witness.even().clone(),
        })
        .collect()
}

/// Decides whether `g = f'` for some `f ∈ Q(t)(x)(z)`.
pub fn algebraic_integral(g: &AlgElem) -> IntegralCertificate<AlgElem> {
    let h = hermite_reduce(g.even());
    let even_residues = residues(&h.log_num, &h.log_den);
    let rel = joint_relations(&[vec![g.clone()]]).expect("single element");
    if let Some(r) = rel.into_iter().next() {
        let c = RatFunc::constant(r.coeffs[0].inv());
        let w = &AlgElem::from_base(c) * &r.witnesses[0];
        return IntegralCertificate::Exact { antiderivative: w };
    }
    let odd = if g.odd().is_zero() || odd_integrable(g) {
        None
    } else {
        let o = odd_ansatz(&[g.odd().clone()], g.modulus_ref().unwrap());
        Some(OddObstruction {
            denominator: o.denominator.clone(),
            numerator_degree_bound: o.bound().saturating_sub(1),
        })
    };
    IntegralCertificate::Obstructed {
        residues: even_residues,
        odd,
    }
}

fn odd_integrable(g: &AlgElem) -> bool {
    let m = g.modulus_ref().unwrap().clone();
    let only = AlgElem::new(RatFunc::zero(), g.odd().clone(), Some(m));
    !joint_relations(&[vec![only]]).unwrap().is_empty()
}

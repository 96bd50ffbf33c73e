//! Presentations of Picard–Vessiot groups of triangular systems.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use crate::field::Field;
use std::sync::Arc;

use super::ring::{GPoly, Generator};
use crate::alg::AlgElem;
use crate::linsys::{DiffSystem, ProlongationKind};
use crate::qtx::{DiffField, Derivation};
use crate::ratsol::ExponentLattice;
use crate::RatFunc;

#[derive(Clone, Debug, PartialEq)]
pub enum ReductiveKind {
    FullTorus,
    FiniteCyclic(BigInt),
    Trivial,
}

/// Diagonal positions whose exponentials differ by elements of the base
/// field share one coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusCoordinate {
    pub positions: Vec<usize>,
    pub weight: RatFunc,
    pub kind: ReductiveKind,
}

/// `v' = weight·v + rhs` for the normalized entry `v` at `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryCertificate {
    pub row: usize,
    pub col: usize,
    pub weight: RatFunc,
    pub value: GPoly,
    pub rhs: GPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnipotentPart {
    pub dim: usize,
    pub generators: Vec<Generator>,
    pub entries: Vec<EntryCertificate>,
}

#[derive(Clone, Debug)]
pub struct Provenance {
    pub base: Arc<DiffSystem>,
    pub level: usize,
    pub kind: ProlongationKind,
}

impl PartialEq for Provenance {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.base, &o.base) || self.base == o.base) && self.level == o.level && self.kind == o.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupPresentation {
    pub reductive: Vec<TorusCoordinate>,
    /// Lattice over the class weights, in the order of `reductive`.
    pub lattice: ExponentLattice,
    pub unipotent: UnipotentPart,
    pub torus_dim: usize,
    pub dim: usize,
    pub component_count: BigInt,
    pub extension: Option<Arc<RatFunc>>,
    pub provenance: Option<Provenance>,
}

impl GroupPresentation {
    /// Re-verifies lattice witnesses and every entry certificate.
    pub fn verify(&self) -> bool {
        let weights: Vec<RatFunc> = self.reductive.iter().map(|c| c.weight.clone()).collect();
        for (b, w) in self.lattice.basis.iter().zip(&self.lattice.witnesses) {
            let mut sum = RatFunc::zero();
            for (n, r) in b.iter().zip(&weights) {
                if !n.is_zero() {
                    sum = &sum + &(&RatFunc::from_rational(&crate::Q::from_integer(n.clone())) * r);
                }
            }
            let lhs = &w.derive(Derivation::Dx) / w;
            if lhs != AlgElem::from_base(sum) {
                return false;
            }
        }
        let gens = &self.unipotent.generators;
        self.unipotent.entries.iter().all(|e| {
            let lhs = e.value.derive(gens);
            let rhs = e.value.scale(&AlgElem::from_base(e.weight.clone())).add(&e.rhs);
            lhs == rhs
        })
    }

    pub fn unipotent_dim(&self) -> usize {
        self.unipotent.dim
    }

    pub fn level(&self) -> Option<usize> {
        self.provenance.as_ref().map(|p| p.level)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count.is_one()
    }
}

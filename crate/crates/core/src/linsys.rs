//! Linear systems `∂_x Y = A Y`, gauge transformations and prolongations.

use std::sync::Arc;

use crate::matrix::Matrix;
use crate::qtx::{DiffField, Derivation};
use crate::{AlgElem, RatFunc};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SystemError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("block sizes do not sum to the dimension")]
    ShapeMismatch,
    #[error("non-zero entry below the declared diagonal blocks at ({0}, {1})")]
    NotBlockTriangular(usize, usize),
    #[error("gauge matrix is singular")]
    SingularGauge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub size: usize,
    /// Irreducibility asserted by the user.
    pub irreducible: bool,
}

/// Block upper triangular structure; block sizes sum to `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Shape {
    pub blocks: Vec<Block>,
}

impl Shape {
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.size;
                o
            })
            .collect()
    }

    /// Block index of row/column `i`.
    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (k, b) in self.blocks.iter().enumerate() {
            acc += b.size;
            if i < acc {
                return k;
            }
        }
        self.blocks.len()
    }

    pub fn unit(n: usize) -> Self {
        Shape {
            blocks: (0..n).map(|_| Block { size: 1, irreducible: true }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffSystem<E = AlgElem> {
    matrix: Matrix<E>,
    shape: Option<Shape>,
    extension: Option<Arc<RatFunc>>,
}

impl<E: DiffField> DiffSystem<E> {
    pub fn new(matrix: Matrix<E>, shape: Option<Shape>, extension: Option<Arc<RatFunc>>) -> Result<Self, SystemError> {
        if !matrix.is_square() {
            return Err(SystemError::NotSquare);
        }
        if let Some(sh) = &shape {
            if sh.blocks.iter().map(|b| b.size).sum::<usize>() != matrix.rows() {
                return Err(SystemError::ShapeMismatch);
            }
            for i in 0..matrix.rows() {
                for j in 0..matrix.cols() {
                    if sh.block_of(i) > sh.block_of(j) && !matrix[(i, j)].is_zero() {
                        return Err(SystemError::NotBlockTriangular(i, j));
                    }
                }
            }
        }
        Ok(DiffSystem { matrix, shape, extension })
    }

    pub fn from_matrix(matrix: Matrix<E>) -> Result<Self, SystemError> {
        Self::new(matrix, None, None)
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.matrix
    }

    pub fn shape(&self) -> Option<&Shape> {
        self.shape.as_ref()
    }

    pub fn extension(&self) -> Option<&Arc<RatFunc>> {
        self.extension.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    fn with_matrix(&self, matrix: Matrix<E>) -> Self {
        DiffSystem {
            matrix,
            shape: None,
            extension: self.extension.clone(),
        }
    }
}

impl DiffSystem<AlgElem> {
    /// Entries of the base field Q(t)(x), if all entries lie there.
    pub fn base_matrix(&self) -> Option<Matrix<RatFunc>> {
        if (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.matrix[(i, j)].is_base())) {
            Some(self.matrix.map(|e| e.even().clone()))
        } else {
            None
        }
    }

    pub fn from_base(m: &Matrix<RatFunc>) -> Self {
        DiffSystem {
            matrix: m.map(|e| AlgElem::from_base(e.clone())),
            shape: None,
            extension: None,
        }
    }
}

pub fn derive_matrix<E: DiffField>(m: &Matrix<E>, d: Derivation) -> Matrix<E> {
    m.map(|e| e.derive(d))
}

/// `∂_x(W) W⁻¹ + W A W⁻¹`.
pub fn gauge<E: DiffField>(a: &DiffSystem<E>, w: &Matrix<E>) -> Result<DiffSystem<E>, SystemError> {
    let winv = w.inverse().ok_or(SystemError::SingularGauge)?;
    let m = derive_matrix(w, Derivation::Dx).mul(&winv).add(&w.mul(&a.matrix).mul(&winv));
    Ok(a.with_matrix(m))
}

/// `[[A, ∂_t A], [0, A]]`.
pub fn prolong_once<E: DiffField>(a: &DiffSystem<E>) -> DiffSystem<E> {
    let n = a.dim();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.set_block(0, 0, &a.matrix);
    m.set_block(0, n, &derive_matrix(&a.matrix, Derivation::Dt));
    m.set_block(n, n, &a.matrix);
    a.with_matrix(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProlongationKind {
    Iterated,
    Jet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedSystem<E = AlgElem> {
    pub base: DiffSystem<E>,
    pub level: usize,
    pub kind: ProlongationKind,
    pub matrix: Matrix<E>,
}

impl<E: DiffField> ProlongedSystem<E> {
    pub fn system(&self) -> DiffSystem<E> {
        self.base.with_matrix(self.matrix.clone())
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Jet system of level `s` on `(∂_t^s Y, ..., ∂_t Y, Y)`: block `(k, l)` for
/// `l ≥ k` is `C(s-k, l-k) ∂_t^{l-k} A`.
pub fn jet_matrix<E: DiffField>(a: &Matrix<E>, s: usize) -> Matrix<E> {
    let n = a.rows();
    let mut ders = vec![a.clone()];
    for _ in 0..s {
        let d = derive_matrix(ders.last().unwrap(), Derivation::Dt);
        ders.push(d);
    }
    let mut m = Matrix::zeros(n * (s + 1), n * (s + 1));
    for k in 0..=s {
        for l in k..=s {
            let c = E::from_i64(binomial(s - k, l - k));
            m.set_block(k * n, l * n, &ders[l - k].scale(&c));
        }
    }
    m
}

pub fn total_prolongation<E: DiffField>(a: &DiffSystem<E>, s: usize, kind: ProlongationKind) -> ProlongedSystem<E> {
    let matrix = match kind {
        ProlongationKind::Iterated => {
            let mut cur = a.clone();
            for _ in 0..s {
                cur = prolong_once(&cur);
            }
            cur.matrix
        }
        ProlongationKind::Jet => jet_matrix(&a.matrix, s),
    };
    ProlongedSystem {
        base: a.clone(),
        level: s,
        kind,
        matrix,
    }
}

/// `∑_j C_j Z_(j)` where `Z_(j) = ∂_t^j Z` for a formal fundamental matrix
/// `Z` with `∂_x Z = A Z`.
#[derive(Clone, Debug, PartialEq)]
struct Formal<E> {
    terms: Vec<Matrix<E>>,
}

impl<E: DiffField> Formal<E> {
    fn zero(n: usize, levels: usize) -> Self {
        Formal {
            terms: vec![Matrix::zeros(n, n); levels],
        }
    }

    fn symbol(n: usize, levels: usize, j: usize) -> Self {
        let mut f = Self::zero(n, levels);
        f.terms[j] = Matrix::identity(n);
        f
    }

    fn add(&self, o: &Self) -> Self {
        Formal {
            terms: self.terms.iter().zip(&o.terms).map(|(a, b)| a.add(b)).collect(),
        }
    }

    fn left_mul(&self, m: &Matrix<E>) -> Self {
        Formal {
            terms: self.terms.iter().map(|c| m.mul(c)).collect(),
        }
    }

    /// Uses `∂_x Z_(j) = ∑_i C(j,i) ∂_t^i(A) Z_(j-i)`.
    fn dx(&self, ders: &[Matrix<E>]) -> Self {
        let levels = self.terms.len();
        let mut out = Formal {
            terms: self.terms.iter().map(|c| derive_matrix(c, Derivation::Dx)).collect(),
        };
        for (j, c) in self.terms.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..=j {
                let coef = E::from_i64(binomial(j, i));
                let add = c.mul(&ders[i]).scale(&coef);
                out.terms[j - i] = out.terms[j - i].add(&add);
            }
        }
        debug_assert_eq!(out.terms.len(), levels);
        out
    }
}

/// Checks symbolically that `[[Z, ∂_t Z], [0, Z]]` solves the first
/// prolongation and that the column `(∂_t^s Z, ..., Z)` solves the jet system
/// of level `s`.
pub fn fundamental_jet_check<E: DiffField>(a: &DiffSystem<E>, s: usize) -> bool {
    let n = a.dim();
    let levels = s.max(1) + 1;
    let mut ders = vec![a.matrix.clone()];
    for _ in 0..levels {
        let d = derive_matrix(ders.last().unwrap(), Derivation::Dt);
        ders.push(d);
    }
    // first prolongation, block matrix of formal entries
    let p1 = prolong_once(a).matrix;
    let blocks = [
        [Formal::symbol(n, levels, 0), Formal::symbol(n, levels, 1)],
        [Formal::zero(n, levels), Formal::symbol(n, levels, 0)],
    ];
    let ok1 = (0..2).all(|r| {
        (0..2).all(|c| {
            let lhs = blocks[r][c].dx(&ders);
            let rhs = (0..2).fold(Formal::zero(n, levels), |acc, k| {
                acc.add(&blocks[k][c].left_mul(&p1.block(r * n, k * n, n, n)))
            });
            lhs == rhs
        })
    });
    let j = jet_matrix(&a.matrix, s);
    let col: Vec<Formal<E>> = (0..=s).map(|k| Formal::symbol(n, levels, s - k)).collect();
    let ok2 = (0..=s).all(|r| {
        let lhs = col[r].dx(&ders);
        let rhs = (0..=s).fold(Formal::zero(n, levels), |acc, k| {
            acc.add(&col[k].left_mul(&j.block(r * n, k * n, n, n)))
        });
        lhs == rhs
    });
    ok1 && ok2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtx::{t_func, x_func};
    use num_traits::{One, Zero};

    fn ex1() -> DiffSystem<RatFunc> {
        DiffSystem::from_matrix(Matrix::from_rows(vec![vec![&t_func() / &x_func()]])).unwrap()
    }

    #[test]
    fn first_prolongation_of_ex1() {
        let p = prolong_once(&ex1());
        let a = &t_func() / &x_func();
        let b = &RatFunc::one() / &x_func();
        let expect = Matrix::from_rows(vec![vec![a.clone(), b], vec![RatFunc::zero(), a]]);
        assert_eq!(p.matrix(), &expect);
        assert_eq!(total_prolongation(&ex1(), 1, ProlongationKind::Jet).matrix, expect);
    }

    #[test]
    fn second_iterated_prolongation_of_ex1() {
        let p = total_prolongation(&ex1(), 2, ProlongationKind::Iterated);
        assert_eq!(p.matrix.rows(), 4);
        let a = &t_func() / &x_func();
        let b = &RatFunc::one() / &x_func();
        let z = RatFunc::zero();
        let expect = Matrix::from_rows(vec![
            vec![a.clone(), b.clone(), b.clone(), z.clone()],
            vec![z.clone(), a.clone(), z.clone(), b.clone()],
            vec![z.clone(), z.clone(), a.clone(), b.clone()],
            vec![z.clone(), z.clone(), z, a],
        ]);
        assert_eq!(p.matrix, expect);
    }

    #[test]
    fn gauge_examples() {
        let x = x_func();
        let zero = DiffSystem::from_matrix(Matrix::<RatFunc>::zeros(2, 2)).unwrap();
        let w = Matrix::from_rows(vec![vec![x.clone(), RatFunc::zero()], vec![RatFunc::zero(), RatFunc::one()]]);
        let g = gauge(&zero, &w).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![&RatFunc::one() / &x, RatFunc::zero()],
            vec![RatFunc::zero(), RatFunc::zero()],
        ]);
        assert_eq!(g.matrix(), &expect);
        let back = gauge(&g, &w.inverse().unwrap()).unwrap();
        assert_eq!(back.matrix(), zero.matrix());
        assert_eq!(gauge(&ex1(), &Matrix::identity(1)).unwrap().matrix(), ex1().matrix());
        let sing = Matrix::from_rows(vec![vec![x.clone(), x.clone()], vec![x.clone(), x]]);
        assert_eq!(gauge(&zero, &sing), Err(SystemError::SingularGauge));
    }

    #[test]
    fn jet_check_holds() {
        for s in 0..4 {
            assert!(fundamental_jet_check(&ex1(), s));
        }
        let zero = DiffSystem::from_matrix(Matrix::<RatFunc>::zeros(2, 2)).unwrap();
        assert!(fundamental_jet_check(&zero, 1));
    }

    #[test]
    fn shape_validation() {
        let x = x_func();
        let m = Matrix::from_rows(vec![vec![RatFunc::zero(), RatFunc::one()], vec![x, RatFunc::zero()]]);
        let sh = Shape::unit(2);
        assert_eq!(DiffSystem::new(m.clone(), Some(sh), None), Err(SystemError::NotBlockTriangular(1, 0)));
        let bad = Shape { blocks: vec![Block { size: 3, irreducible: false }] };
        assert_eq!(DiffSystem::new(m, Some(bad), None), Err(SystemError::ShapeMismatch));
    }
}

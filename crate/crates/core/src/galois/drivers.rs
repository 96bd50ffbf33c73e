//! The two parameterized drivers: the prolongation loop and the constant
//! reductive quotient test.

use num_traits::Zero;
use std::sync::Arc;

use super::oracle::pv_group_at;
use super::ppv::{injective_projection, ppv_presentation, PPVPresentation};
use super::presentation::GroupPresentation;
use super::GaloisError;
use crate::linsys::{derive_matrix, DiffSystem, ProlongationKind};
use crate::matrix::Matrix;
use crate::field::Field;
use crate::qtx::Derivation;
use crate::ratsol::{rational_integral, rational_system_solutions, IntegralCertificate, SearchBounds};
use crate::RatFunc;

pub const DEFAULT_MAX_S: usize = 5;

#[derive(Clone, Debug)]
pub enum Algorithm1Outcome {
    /// The projection from level `level + 1` to `level` is injective.
    Halted {
        level: usize,
        presentation: PPVPresentation,
        trajectory: Vec<GroupPresentation>,
    },
    NotHalted {
        max_s: usize,
        trajectory: Vec<GroupPresentation>,
    },
    Unsupported {
        level: usize,
        reason: String,
        trajectory: Vec<GroupPresentation>,
    },
}

impl Algorithm1Outcome {
    pub fn trajectory(&self) -> &[GroupPresentation] {
        match self {
            Algorithm1Outcome::Halted { trajectory, .. }
            | Algorithm1Outcome::NotHalted { trajectory, .. }
            | Algorithm1Outcome::Unsupported { trajectory, .. } => trajectory,
        }
    }
}

fn unsupported(level: usize, e: GaloisError, trajectory: Vec<GroupPresentation>) -> Algorithm1Outcome {
    Algorithm1Outcome::Unsupported {
        level,
        reason: e.to_string(),
        trajectory,
    }
}

/// Computes groups of successive prolongations until the projection from
/// level `s+1` to `s` is injective, for `s + 1 <= max_s`.
pub fn algorithm1(a: &Arc<DiffSystem>, max_s: usize, kind: ProlongationKind) -> Result<Algorithm1Outcome, GaloisError> {
    if max_s == 0 {
        return Err(GaloisError::InvalidBound);
    }
    let mut trajectory = Vec::new();
    match pv_group_at(a, 0, kind) {
        Ok(g) => trajectory.push(g),
        Err(e) => return Ok(unsupported(0, e, trajectory)),
    }
    for s in 0..max_s {
        let next = match pv_group_at(a, s + 1, kind) {
            Ok(g) => g,
            Err(e) => return Ok(unsupported(s + 1, e, trajectory)),
        };
        let injective = injective_projection(&trajectory[s], &next)?;
        trajectory.push(next);
        if injective {
            return match ppv_presentation(&trajectory[s], &trajectory[s + 1]) {
                Ok(presentation) => Ok(Algorithm1Outcome::Halted {
                    level: s,
                    presentation,
                    trajectory,
                }),
                Err(e @ GaloisError::Unsupported(_)) => Ok(unsupported(s + 1, e, trajectory)),
                Err(e) => Err(e),
            };
        }
    }
    Ok(Algorithm1Outcome::NotHalted { max_s, trajectory })
}

/// Why no rational `C` exists for one diagonal block.
#[derive(Clone, Debug, PartialEq)]
pub enum Obstruction {
    /// Scalar block: `∂_t b` has no rational antiderivative.
    Integral {
        block: usize,
        certificate: IntegralCertificate<RatFunc>,
    },
    /// The rational solution search of the linearized system is empty.
    EmptySearch { block: usize, bounds: SearchBounds },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Algorithm2Outcome {
    /// `∂_x C = ∂_t B + [B, C]` for the block diagonal `B`.
    Constant { c: Matrix<RatFunc> },
    NotConstant { obstruction: Obstruction },
    NeedsFactorization {
        block: usize,
        reason: String,
    },
}

/// `∂_x C − ∂_t B − BC + CB`.
pub fn integrability_defect(b: &Matrix<RatFunc>, c: &Matrix<RatFunc>) -> Matrix<RatFunc> {
    derive_matrix(c, Derivation::Dx)
        .sub(&derive_matrix(b, Derivation::Dt))
        .sub(&b.mul(c))
        .add(&c.mul(b))
}

/// Searches for a hyperexponential solution `e^{∫u} v` with `v` rational
/// and `u` a diagonal entry or zero. Finding one proves reducibility.
fn rank_one_factor(b: &Matrix<RatFunc>) -> Option<RatFunc> {
    let mut cands = vec![RatFunc::zero(), b[(0, 0)].clone(), b[(1, 1)].clone()];
    cands.dedup();
    cands.into_iter().find(|u| {
        let shifted = b.sub(&Matrix::identity(2).scale(u));
        !rational_system_solutions(&shifted, None).homogeneous.is_empty()
    })
}

/// The `m² x m²` matrix of `C ↦ BC − CB` on row-major `vec(C)`.
fn commutator_matrix(b: &Matrix<RatFunc>) -> Matrix<RatFunc> {
    let m = b.rows();
    let mut out = Matrix::zeros(m * m, m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let r = i * m + j;
                out[(r, k * m + j)] = &out[(r, k * m + j)] + &b[(i, k)];
                out[(r, i * m + k)] = &out[(r, i * m + k)] - &b[(k, j)];
            }
        }
    }
    out
}

fn solve_block(idx: usize, b: &Matrix<RatFunc>) -> Result<Matrix<RatFunc>, Obstruction> {
    let m = b.rows();
    let db = derive_matrix(b, Derivation::Dt);
    if db.is_zero() {
        return Ok(Matrix::zeros(m, m));
    }
    if m == 1 {
        let cert = rational_integral(&db[(0, 0)]);
        return match cert.antiderivative() {
            Some(c) => Ok(Matrix::from_rows(vec![vec![c.clone()]])),
            None => Err(Obstruction::Integral {
                block: idx,
                certificate: cert,
            }),
        };
    }
    let rhs: Vec<RatFunc> = (0..m * m).map(|r| db[(r / m, r % m)].clone()).collect();
    let sol = rational_system_solutions(&commutator_matrix(b), Some(&rhs));
    match sol.particular {
        Some(y) => Ok(Matrix::from_fn(m, m, |i, j| y[i * m + j].clone())),
        None => Err(Obstruction::EmptySearch {
            block: idx,
            bounds: sol.bounds,
        }),
    }
}

/// Decides whether the reductive quotient of the parameterized group is
/// constant, through an exact rational solution of the integrability
/// condition on the block diagonal.
pub fn algorithm2(a: &DiffSystem) -> Algorithm2Outcome {
    let Some(m) = a.base_matrix() else {
        return Algorithm2Outcome::NeedsFactorization {
            block: 0,
            reason: "entries outside Q(t)(x)".into(),
        };
    };
    let n = m.rows();
    let blocks: Vec<(usize, usize, bool)> = if m.is_upper_triangular() {
        (0..n).map(|i| (i, 1, true)).collect()
    } else {
        match a.shape() {
            Some(sh) => sh
                .offsets()
                .into_iter()
                .zip(&sh.blocks)
                .map(|(o, b)| (o, b.size, b.irreducible || b.size == 1))
                .collect(),
            None => {
                return Algorithm2Outcome::NeedsFactorization {
                    block: 0,
                    reason: "no block triangular shape given".into(),
                }
            }
        }
    };
    let mut c = Matrix::zeros(n, n);
    for (k, &(o, size, irreducible)) in blocks.iter().enumerate() {
        let b = m.block(o, o, size, size);
        if !irreducible {
            let reason = if size != 2 {
                format!("block of size {size} is not asserted irreducible")
            } else if let Some(u) = rank_one_factor(&b) {
                format!("block has a hyperexponential solution with logarithmic derivative shift {}", u.render())
            } else {
                "2x2 block not asserted irreducible and no rank one factor was found".into()
            };
            return Algorithm2Outcome::NeedsFactorization { block: k, reason };
        }
        match solve_block(k, &b) {
            Ok(cb) => c.set_block(o, o, &cb),
            Err(obstruction) => return Algorithm2Outcome::NotConstant { obstruction },
        }
    }
    let bdiag = Matrix::from_fn(n, n, |i, j| {
        let same = blocks.iter().any(|&(o, s, _)| (o..o + s).contains(&i) && (o..o + s).contains(&j));
        if same {
            m[(i, j)].clone()
        } else {
            RatFunc::zero()
        }
    });
    debug_assert!(integrability_defect(&bdiag, &c).is_zero());
    Algorithm2Outcome::Constant { c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsys::{Block, Shape};
    use crate::qtx::{t_func, x_func};
    use crate::AlgElem;
    use num_traits::One;

    fn sys(rows: Vec<Vec<RatFunc>>) -> Arc<DiffSystem> {
        Arc::new(DiffSystem::from_base(&Matrix::from_rows(rows)))
    }

    fn ex2() -> Arc<DiffSystem> {
        let x = x_func();
        let b = &(&t_func() / &x) + &(&RatFunc::one() / &(&x + &RatFunc::one()));
        sys(vec![vec![RatFunc::one(), b], vec![RatFunc::zero(), RatFunc::one()]])
    }

    fn halting_level(o: &Algorithm1Outcome) -> Option<usize> {
        match o {
            Algorithm1Outcome::Halted { level, .. } => Some(*level),
            _ => None,
        }
    }

    #[test]
    fn ex1_halts_at_one() {
        let a = sys(vec![vec![&t_func() / &x_func()]]);
        for kind in [ProlongationKind::Jet, ProlongationKind::Iterated] {
            let o = algorithm1(&a, DEFAULT_MAX_S, kind).unwrap();
            assert_eq!(halting_level(&o), Some(1));
            let dims: Vec<usize> = o.trajectory().iter().map(|g| g.dim).collect();
            assert_eq!(dims, vec![1, 2, 2]);
        }
    }

    #[test]
    fn ex2_halts_at_one() {
        let o = algorithm1(&ex2(), DEFAULT_MAX_S, ProlongationKind::Jet).unwrap();
        assert_eq!(halting_level(&o), Some(1));
    }

    #[test]
    fn exponential_of_tx_halts_immediately() {
        let a = sys(vec![vec![t_func()]]);
        let o = algorithm1(&a, 3, ProlongationKind::Jet).unwrap();
        let Algorithm1Outcome::Halted { level, presentation, .. } = o else { panic!("did not halt") };
        assert_eq!(level, 0);
        assert_eq!(presentation.multiplicative[0].operator.len(), 1);
    }

    #[test]
    fn bound_is_checked() {
        let a = sys(vec![vec![t_func()]]);
        assert_eq!(algorithm1(&a, 0, ProlongationKind::Jet).unwrap_err(), GaloisError::InvalidBound);
    }

    #[test]
    fn reductive_quotient_tests() {
        let ex1 = sys(vec![vec![&t_func() / &x_func()]]);
        assert!(matches!(algorithm2(&ex1), Algorithm2Outcome::NotConstant { .. }));
        match algorithm2(&ex2()) {
            Algorithm2Outcome::Constant { c } => assert!(c.is_zero()),
            o => panic!("{o:?}"),
        }
        let tfree = sys(vec![vec![&RatFunc::one() / &x_func()]]);
        assert!(matches!(algorithm2(&tfree), Algorithm2Outcome::Constant { .. }));
        // ∂_t(t/x^2) = 1/x^2 = ∂_x(-1/x)
        let exact = sys(vec![vec![&t_func() / &(&x_func() * &x_func())]]);
        match algorithm2(&exact) {
            Algorithm2Outcome::Constant { c } => assert_eq!(c[(0, 0)], -(&RatFunc::one() / &x_func())),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn unasserted_block_needs_factorization() {
        let x = x_func();
        let m = Matrix::from_rows(vec![vec![RatFunc::zero(), RatFunc::one()], vec![&t_func() / &(&x * &x), RatFunc::zero()]]);
        let shape = Shape {
            blocks: vec![Block { size: 2, irreducible: false }],
        };
        let a = DiffSystem::new(m.map(|e| AlgElem::from_base(e.clone())), Some(shape), None).unwrap();
        assert!(matches!(algorithm2(&a), Algorithm2Outcome::NeedsFactorization { block: 0, .. }));
    }

    #[test]
    fn asserted_block_uses_linearized_system() {
        let x = x_func();
        let m = Matrix::from_rows(vec![vec![RatFunc::zero(), &t_func() / &x], vec![&RatFunc::one() / &x, RatFunc::zero()]]);
        let shape = Shape {
            blocks: vec![Block { size: 2, irreducible: true }],
        };
        let a = DiffSystem::new(m.map(|e| AlgElem::from_base(e.clone())), Some(shape), None).unwrap();
        match algorithm2(&a) {
            Algorithm2Outcome::Constant { c } => assert!(integrability_defect(&m, &c).is_zero()),
            Algorithm2Outcome::NotConstant { obstruction } => {
                assert!(matches!(obstruction, Obstruction::EmptySearch { block: 0, .. }))
            }
            o => panic!("{o:?}"),
        }
    }
}

//! Monic annihilating operators in ∂_t from Wronskians.


use crate::matrix::Matrix;
use crate::qtx::{DiffField, Derivation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("no non-zero element to annihilate")]
pub struct DegenerateInput;

fn wronskian<E: DiffField>(ws: &[E], rows: usize) -> Matrix<E> {
    Matrix::from_fn(rows, ws.len(), |j, i| ws[i].derive_n(Derivation::Dt, j))
}

/// Monic `L = ∂_t^k + a_{k-1} ∂_t^{k-1} + ... + a_0` of least order with
/// `L(w) = 0` for every `w`; coefficients are returned low-first, ending in 1.
pub fn wronskian_annihilator<E: DiffField>(ws: &[E]) -> Result<Vec<E>, DegenerateInput> {
    let mut basis: Vec<E> = Vec::new();
    for w in ws {
        if w.is_zero() {
            continue;
        }
        let mut trial = basis.clone();
        trial.push(w.clone());
        if wronskian(&trial, trial.len()).rank() == trial.len() {
            basis = trial;
        }
    }
    if basis.is_empty() {
        return Err(DegenerateInput);
    }
    let k = basis.len();
    // rows i: sum_j a_j ∂^j b_i = -∂^k b_i
    let a = wronskian(&basis, k).transpose();
    let rhs: Vec<E> = basis.iter().map(|b| -b.derive_n(Derivation::Dt, k)).collect();
    let mut coeffs = a.solve(&rhs).expect("non-singular Wronskian");
    coeffs.push(E::one());
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtx::{rat, t_rat};
    use crate::RatT;
    use num_traits::{One, Zero};

    #[test]
    fn annihilator_of_t_and_t_squared() {
        let t = t_rat();
        let l = wronskian_annihilator(&[t.clone(), &t * &t]).unwrap();
        let ti = &RatT::one() / &t;
        assert_eq!(l, vec![&(&ti * &ti) * &rat(2, 1), -&(&ti * &rat(2, 1)), RatT::one()]);
    }

    #[test]
    fn dependent_inputs_pruned() {
        let t = t_rat();
        let l = wronskian_annihilator(&[t.clone(), &t * &rat(3, 1)]).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(wronskian_annihilator::<RatT>(&[RatT::zero()]), Err(DegenerateInput));
    }
}

//! Integer lattices: kernels, bases and torsion of quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

fn clear_row(row: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in row {
        l = l.lcm(c.denom());
    }
    row.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect()
}

/// Column-style echelon reduction of `a` (rows x k) by unimodular column
/// operations. Returns the transform `U` (k x k, stored by columns) and the
/// number of pivot columns; the trailing columns of `U` span the kernel.
fn column_echelon(mut a: Vec<Vec<BigInt>>, k: usize) -> (Vec<Vec<BigInt>>, usize) {
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|j| (0..k).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut col = 0;
    for row in 0..a.len() {
        if col == k {
            break;
        }
        loop {
            let nz: Vec<usize> = (col..k).filter(|&j| !a[row][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let j0 = *nz.iter().min_by_key(|&&j| a[row][j].abs()).unwrap();
            if j0 != col {
                for r in a.iter_mut() {
                    r.swap(j0, col);
                }
                u.swap(j0, col);
            }
            let mut done = true;
            for j in col + 1..k {
                if a[row][j].is_zero() {
                    continue;
                }
                let qq = a[row][j].div_floor(&a[row][col]);
                for r in a.iter_mut() {
                    let v = &r[j] - &qq * &r[col];
                    r[j] = v;
                }
                for i in 0..k {
                    let v = &u[j][i] - &qq * &u[col][i];
                    u[j][i] = v;
                }
                if !a[row][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[row][col].is_zero() {
            col += 1;
        }
    }
    (u, col)
}

/// Z-basis of `{n ∈ Z^k : rows · n = 0}` for rational `rows`.
pub fn integer_kernel(rows: &[Vec<Q>], k: usize) -> Vec<Vec<BigInt>> {
    let a: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_row(r)).collect();
    let (u, piv) = column_echelon(a, k);
    hnf_basis(&u[piv..], k)
}

/// Sub-lattice of the lattice spanned by `basis` on which every row of
/// `crows` takes integer values.
pub fn integrality_sublattice(basis: &[Vec<BigInt>], crows: &[Vec<Q>], k: usize) -> Vec<Vec<BigInt>> {
    if crows.is_empty() || basis.is_empty() {
        return basis.to_vec();
    }
    let r = basis.len();
    // values[p][l] = crow_p · b_l
    let mut vals: Vec<Vec<Q>> = Vec::new();
    for c in crows {
        vals.push(
            basis
                .iter()
                .map(|b| {
                    c.iter()
                        .zip(b)
                        .fold(Q::zero(), |acc, (x, y)| acc + x * Q::from_integer(y.clone()))
                })
                .collect(),
        );
    }
    let mut delta = BigInt::one();
    for row in &vals {
        for v in row {
            delta = delta.lcm(v.denom());
        }
    }
    // unknowns (w_1..w_r, m_1..m_p): delta*vals*w - delta*m = 0
    let p = vals.len();
    let rows: Vec<Vec<Q>> = (0..p)
        .map(|i| {
            let mut row: Vec<Q> = vals[i].iter().map(|v| v * Q::from_integer(delta.clone())).collect();
            for j in 0..p {
                row.push(if i == j { -Q::from_integer(delta.clone()) } else { Q::zero() });
            }
            row
        })
        .collect();
    let ker = {
        let a: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_row(r)).collect();
        let (u, piv) = column_echelon(a, r + p);
        u[piv..].to_vec()
    };
    let gens: Vec<Vec<BigInt>> = ker
        .iter()
        .map(|w| {
            (0..k)
                .map(|i| (0..r).fold(BigInt::zero(), |acc, l| acc + &w[l] * &basis[l][i]))
                .collect()
        })
        .collect();
    hnf_basis(&gens, k)
}

/// Row Hermite normal form basis of the lattice generated by `gens`.
pub fn hnf_basis(gens: &[Vec<BigInt>], k: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out = Vec::new();
    for c in 0..k {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let i0 = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nz {
                if i == i0 {
                    continue;
                }
                let qq = rows[i][c].div_floor(&rows[i0][c]);
                let sub: Vec<BigInt> = rows[i0].iter().map(|x| x * &qq).collect();
                for (x, s) in rows[i].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            let mut row = rows.swap_remove(i);
            if row[c].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(row);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let c = out[i].iter().position(|x| !x.is_zero()).unwrap();
        for j in 0..i {
            let qq = out[j][c].div_floor(&out[i][c]);
            if qq.is_zero() {
                continue;
            }
            let sub: Vec<BigInt> = out[i].iter().map(|x| x * &qq).collect();
            for (x, s) in out[j].iter_mut().zip(sub) {
                *x -= s;
            }
        }
    }
    out
}

/// Order of the torsion subgroup of `Z^k / L` for the lattice with basis
/// `basis`.
pub fn torsion_order(basis: &[Vec<BigInt>], k: usize) -> BigInt {
    let mut m: Vec<Vec<BigInt>> = basis.to_vec();
    let r = m.len();
    let mut prod = BigInt::one();
    for s in 0..r {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in s..r {
                for j in s..k {
                    if !m[i][j].is_zero()
                        && best.map(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()).unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return prod };
            m.swap(bi, s);
            for row in m.iter_mut() {
                row.swap(bj, s);
            }
            let p = m[s][s].clone();
            let mut clean = true;
            for i in s + 1..r {
                let qq = m[i][s].div_floor(&p);
                if !qq.is_zero() {
                    let sub: Vec<BigInt> = m[s].iter().map(|x| x * &qq).collect();
                    for (x, y) in m[i].iter_mut().zip(sub) {
                        *x -= y;
                    }
                }
                if !m[i][s].is_zero() {
                    clean = false;
                }
            }
            for j in s + 1..k {
                let qq = m[s][j].div_floor(&p);
                if !qq.is_zero() {
                    for row in m.iter_mut() {
                        let v = &row[j] - &row[s] * &qq;
                        row[j] = v;
                    }
                }
                if !m[s][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        prod *= m[s][s].abs();
    }
    prod
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_single_relation() {
        // 2a - b = 0
        let k = integer_kernel(&[vec![q(2, 1), q(-1, 1)]], 2);
        assert_eq!(k, vec![bi(&[1, 2])]);
    }

    #[test]
    fn half_integrality() {
        // n/2 integer  =>  n even
        let l = integrality_sublattice(&[bi(&[1])], &[vec![q(1, 2)]], 1);
        assert_eq!(l, vec![bi(&[2])]);
        assert_eq!(torsion_order(&l, 1), BigInt::from(2));
    }

    #[test]
    fn torsion_of_mixed_lattice() {
        let l = hnf_basis(&[bi(&[2, 0]), bi(&[0, 3])], 2);
        assert_eq!(torsion_order(&l, 2), BigInt::from(6));
        let l2 = hnf_basis(&[bi(&[1, -1])], 2);
        assert_eq!(torsion_order(&l2, 2), BigInt::from(1));
    }
}

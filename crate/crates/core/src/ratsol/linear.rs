//! Rational solutions of scalar linear ODEs and of first-order systems.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{coefficient_rows, rational_rows, xpow};
use crate::factor::{integer_roots, pole_factors};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::{PolyT, PolyX, Q, RatFunc, RatT};

/// Denominator and numerator degree used by a rational-solution search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchBounds {
    pub denominator: PolyX,
    /// Negative when only `y = 0` was admissible.
    pub numerator_degree: i64,
}

/// `L(y) = ∑ c_a g_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricSolution<E> {
    pub y: E,
    pub c: Vec<RatT>,
}

/// `λ^{(i)} = λ(λ-1)...(λ-i+1)` over Q.
fn falling(i: usize) -> PolyT {
    (0..i).fold(PolyT::one(), |acc, j| &acc * &PolyT::linear(Q::from_integer(BigInt::from(j))))
}

/// Integer roots of `∑ c_i λ^{(i)}` whose coefficients `c_i` are polynomials
/// in x over Q(t) (all of the same reduced form, compared coefficientwise).
fn indicial_integer_roots(terms: &[(usize, PolyX)]) -> Vec<BigInt> {
    let top = terms.iter().map(|(i, _)| *i).max().unwrap_or(0);
    let xdeg = terms.iter().map(|(_, c)| c.deg()).max().unwrap_or(-1);
    let mut g = PolyT::zero();
    for k in 0..xdeg + 1 {
        // coefficient of x^k as a polynomial in λ with Q(t) coefficients
        let mut by_l = vec![RatT::zero(); top + 1];
        for (i, c) in terms {
            let ck = c.coeff(k as usize);
            if ck.is_zero() {
                continue;
            }
            for (l, f) in falling(*i).coeffs().iter().enumerate() {
                by_l[l] = &by_l[l] + &(&ck * &RatT::constant(f.clone()));
            }
        }
        for row in rational_rows(&by_l) {
            g = g.gcd(&Poly::new(row));
        }
    }
    if g.is_zero() {
        return Vec::new();
    }
    integer_roots(&g)
}

/// Integer `λ` with `∑ c_i λ^{(i)}` sharing a root with the possibly
/// reducible `pi`: roots of the norm `det(∑ λ^{(i)} C_i)`, with `C_i` the
/// multiplication by `c_i` on `Q(t)[x]/(pi)`.
fn norm_integer_roots(terms: &[(usize, PolyX)], pi: &PolyX) -> Vec<BigInt> {
    let d = pi.deg() as usize;
    let mult = |c: &PolyX| -> Matrix<RatT> {
        let cols: Vec<Vec<RatT>> = (0..d).map(|j| {
            let v = (c * &PolyX::monomial(RatT::one(), j)).rem(pi);
            (0..d).map(|k| v.coeff(k)).collect()
        }).collect();
        Matrix::from_fn(d, d, |r, c| cols[c][r].clone())
    };
    let mats: Vec<(usize, Matrix<RatT>)> = terms.iter().map(|(i, c)| (*i, mult(c))).collect();
    let top = terms.iter().map(|(i, _)| *i).max().unwrap_or(0);
    let npts = top * d + 1;
    let xs: Vec<RatT> = (0..npts).map(|j| RatT::from_i64(j as i64)).collect();
    let ys: Vec<RatT> = xs
        .iter()
        .map(|l| {
            let lq = l.as_rational().unwrap();
            let mut acc = Matrix::zeros(d, d);
            for (i, m) in &mats {
                let f = RatT::constant(falling(*i).eval(&lq));
                acc = acc.add(&m.scale(&f));
            }
            acc.det()
        })
        .collect();
    let norm = crate::frac::interpolate(&xs, &ys);
    let mut g = PolyT::zero();
    for row in rational_rows(norm.coeffs()) {
        g = g.gcd(&Poly::new(row));
    }
    if g.is_zero() {
        return Vec::new();
    }
    integer_roots(&g)
}

/// `L = ∑ coeffs[i] ∂_x^i`; Q(t)-basis of all `(y, c)` with `y ∈ Q(t)(x)`,
/// `L(y) = ∑ c_a rhs[a]`.
pub fn scalar_solutions(coeffs: &[RatFunc], rhs: &[RatFunc]) -> (Vec<ParametricSolution<RatFunc>>, SearchBounds) {
    let n = coeffs.len() - 1;
    assert!(!coeffs[n].is_zero(), "leading coefficient vanishes");
    let mut l = PolyX::one();
    for c in coeffs.iter().chain(rhs) {
        if !c.is_zero() {
            l = l.lcm(c.den());
        }
    }
    let lf = RatFunc::from_poly(l);
    let p: Vec<PolyX> = coeffs.iter().map(|c| (c * &lf).num().clone()).collect();
    let h: Vec<RatFunc> = rhs.iter().map(|g| g * &lf).collect();

    // denominator from pole orders at the roots of the leading coefficient
    let mut den = PolyX::one();
    for pf in pole_factors(&p[n]) {
        let pi = &pf.factor;
        let dpi = pi.derivative();
        let vals: Vec<Option<usize>> = p.iter().map(|c| (!c.is_zero()).then(|| c.valuation(pi))).collect();
        let mu = vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| v as i64 - i as i64))
            .min()
            .unwrap();
        let terms: Vec<(usize, PolyX)> = vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                let v = (*v)?;
                (v as i64 - i as i64 == mu).then(|| {
                    let red = p[i].exact_div(&pi.pow(v)).unwrap();
                    (i, (&red * &dpi.pow(v)).rem(pi))
                })
            })
            .collect();
        let roots = if pf.irreducible {
            indicial_integer_roots(&terms)
        } else {
            norm_integer_roots(&terms, pi)
        };
        let mut m = mu.max(0);
        for r in roots {
            if r < BigInt::zero() {
                let e: i64 = (-r).try_into().unwrap_or(i64::MAX);
                m = m.max(e);
            }
        }
        if m > 0 {
            den = &den * &pi.pow(m as usize);
        }
    }

    // degree at infinity
    let nu = p.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| c.deg() - i as i64).max().unwrap();
    let terms: Vec<(usize, PolyX)> = p
        .iter()
        .enumerate()
        .filter(|(i, c)| !c.is_zero() && c.deg() - *i as i64 == nu)
        .map(|(i, c)| (i, PolyX::constant(c.lc().unwrap().clone())))
        .collect();
    let hdeg = h.iter().filter(|g| !g.is_zero()).map(|g| g.num().deg()).max();
    let mut delta = hdeg.map(|d| d - nu).unwrap_or(i64::MIN / 4);
    for r in indicial_integer_roots(&terms) {
        let r: i64 = r.try_into().unwrap_or(i64::MIN / 4);
        delta = delta.max(r);
    }
    let top = if delta <= i64::MIN / 8 { -1 } else { den.deg() + delta };
    let bounds = SearchBounds {
        denominator: den.clone(),
        numerator_degree: top,
    };

    let df = RatFunc::from_poly(den);
    let pf: Vec<RatFunc> = p.iter().cloned().map(RatFunc::from_poly).collect();
    let apply = |y: &RatFunc| -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut d = y.clone();
        for (i, c) in pf.iter().enumerate() {
            if i > 0 {
                d = d.derivative();
            }
            if !c.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    };
    let ny = (top + 1).max(0) as usize;
    let mut vals: Vec<RatFunc> = (0..ny).map(|k| apply(&(&xpow(k) / &df))).collect();
    vals.extend(h.iter().map(|g| -g));
    let width = vals.len();
    let rows = coefficient_rows(&vals);
    let kernel: Vec<Vec<RatT>> = if rows.is_empty() {
        (0..width)
            .map(|i| (0..width).map(|j| if i == j { RatT::one() } else { RatT::zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    let sols = kernel
        .into_iter()
        .map(|v| {
            let mut num = PolyX::zero();
            for (k, c) in v[..ny].iter().enumerate() {
                num = &num + &PolyX::monomial(c.clone(), k);
            }
            ParametricSolution {
                y: &RatFunc::from_poly(num) / &df,
                c: v[ny..].to_vec(),
            }
        })
        .collect();
    (sols, bounds)
}

/// Solutions of `Y' = M Y + b` in `Q(t)(x)^n`: one particular solution (if
/// any) and a basis of the homogeneous solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolutions {
    pub particular: Option<Vec<RatFunc>>,
    pub homogeneous: Vec<Vec<RatFunc>>,
    pub bounds: SearchBounds,
}

struct CyclicVector {
    /// Rows `u_0..u_{n-1}`, `u_{i+1} = u_i' + u_i M`.
    t: Matrix<RatFunc>,
    u: Vec<Vec<RatFunc>>,
    alpha: Vec<RatFunc>,
}

fn next_row(u: &[RatFunc], m: &Matrix<RatFunc>) -> Vec<RatFunc> {
    let n = u.len();
    (0..n)
        .map(|j| {
            let mut acc = u[j].derivative();
            for (k, uk) in u.iter().enumerate() {
                if !uk.is_zero() && !m[(k, j)].is_zero() {
                    acc = &acc + &(uk * &m[(k, j)]);
                }
            }
            acc
        })
        .collect()
}

fn cyclic_vector(m: &Matrix<RatFunc>) -> CyclicVector {
    let n = m.rows();
    let x = crate::qtx::x_func();
    let mut candidates: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect())
        .collect();
    let unit = |i: usize| -> Vec<RatFunc> { (0..n).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect() };
    for i in 0..n {
        for j in i + 1..n {
            for c in [RatFunc::one(), x.clone()] {
                let mut v = unit(i);
                v[j] = c;
                candidates.push(v);
            }
        }
    }
    for s in 1..40i64 {
        candidates.push(
            (0..n)
                .map(|i| {
                    let e = ((i as i64 * s) % (n as i64 + 1)) as i64;
                    &x.powi(e).unwrap() + &RatFunc::from_i64(s * i as i64 + (s % 3))
                })
                .collect(),
        );
    }
    for u0 in candidates {
        let mut u = vec![u0];
        for _ in 0..n {
            let nx = next_row(u.last().unwrap(), m);
            u.push(nx);
        }
        let t = Matrix::from_rows(u[..n].to_vec());
        if let Some(tinv) = t.inverse() {
            // u_n = alpha · T
            let alpha = tinv.transpose().mul_vec(&u[n]);
            return CyclicVector { t, u, alpha };
        }
    }
    panic!("no cyclic vector found");
}

fn dot(u: &[RatFunc], b: &[RatFunc]) -> RatFunc {
    u.iter().zip(b).fold(RatFunc::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            &acc + &(x * y)
        }
    })
}

/// Strongly connected components of the coupling graph `i -> j` when
/// `m[i][j] != 0`, ordered so that every block only couples to earlier ones.
fn coupling_blocks(m: &Matrix<RatFunc>) -> Vec<Vec<usize>> {
    let n = m.rows();
    let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || !m[(i, j)].is_zero()).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let b: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &b {
            seen[j] = true;
        }
        blocks.push(b);
    }
    // a block reaching another reaches strictly more indices
    blocks.sort_by_key(|b| reach[b[0]].iter().filter(|&&r| r).count());
    blocks
}

/// Block back substitution: each block is solved with the blocks it couples
/// to entering as parametric right-hand sides, taken over a basis of the
/// family solved so far.
fn decoupled_parametric(
    m: &Matrix<RatFunc>,
    bs: &[Vec<RatFunc>],
    blocks: &[Vec<usize>],
) -> (Vec<ParametricSolution<Vec<RatFunc>>>, SearchBounds) {
    let n = m.rows();
    let k = bs.len();
    // family elements: (full vector, zero outside solved blocks; parameters c)
    let mut family: Vec<(Vec<RatFunc>, Vec<RatT>)> = (0..k)
        .map(|a| {
            (
                vec![RatFunc::zero(); n],
                (0..k).map(|b| if a == b { RatT::one() } else { RatT::zero() }).collect(),
            )
        })
        .collect();
    let mut denominator = PolyX::one();
    let mut numerator_degree = -1;
    for blk in blocks {
        let sub = Matrix::from_fn(blk.len(), blk.len(), |a, b| m[(blk[a], blk[b])].clone());
        let rhs: Vec<Vec<RatFunc>> = family
            .iter()
            .map(|(y, c)| {
                blk.iter()
                    .map(|&i| {
                        let mut acc = RatFunc::zero();
                        for j in (0..n).filter(|j| !blk.contains(j)) {
                            if !m[(i, j)].is_zero() && !y[j].is_zero() {
                                acc = &acc + &(&m[(i, j)] * &y[j]);
                            }
                        }
                        for (ca, ba) in c.iter().zip(bs) {
                            if !ca.is_zero() && !ba[i].is_zero() {
                                acc = &acc + &(&RatFunc::constant(ca.clone()) * &ba[i]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let (sols, b) = if blk.len() == 1 {
            let rhs1: Vec<RatFunc> = rhs.iter().map(|r| r[0].clone()).collect();
            let (sols, b) = scalar_solutions(&[-sub[(0, 0)].clone(), RatFunc::one()], &rhs1);
            (sols.into_iter().map(|s| ParametricSolution { y: vec![s.y], c: s.c }).collect(), b)
        } else {
            system_parametric(&sub, &rhs)
        };
        denominator = denominator.lcm(&b.denominator);
        numerator_degree = numerator_degree.max(b.numerator_degree);
        family = sols
            .into_iter()
            .map(|s| {
                let mut y = vec![RatFunc::zero(); n];
                let mut c = vec![RatT::zero(); k];
                for (d, (fy, fc)) in s.c.iter().zip(&family) {
                    if d.is_zero() {
                        continue;
                    }
                    let df = RatFunc::constant(d.clone());
                    for (r, v) in y.iter_mut().zip(fy) {
                        if !v.is_zero() {
                            *r = &*r + &(&df * v);
                        }
                    }
                    for (ca, fa) in c.iter_mut().zip(fc) {
                        *ca = &*ca + &(d * fa);
                    }
                }
                for (a, &i) in blk.iter().enumerate() {
                    y[i] = s.y[a].clone();
                }
                (y, c)
            })
            .collect();
    }
    let out = family.into_iter().map(|(y, c)| ParametricSolution { y, c }).collect();
    (
        out,
        SearchBounds {
            denominator,
            numerator_degree,
        },
    )
}

/// Q(t)-basis of all `(Y, c)` with `Y' = M Y + ∑ c_a bs[a]`.
pub fn system_parametric(
    m: &Matrix<RatFunc>,
    bs: &[Vec<RatFunc>],
) -> (Vec<ParametricSolution<Vec<RatFunc>>>, SearchBounds) {
    let n = m.rows();
    if n > 1 {
        let blocks = coupling_blocks(m);
        if blocks.len() > 1 {
            return decoupled_parametric(m, bs, &blocks);
        }
    }
    let cv = cyclic_vector(m);
    let mut coeffs: Vec<RatFunc> = cv.alpha.iter().map(|a| -a).collect();
    coeffs.push(RatFunc::one());
    // beta(b) = u_{n-1} b + sum_{j<n-1} (u_j b)^{(n-1-j)} - sum_i alpha_i sum_{j<i} (u_j b)^{(i-1-j)}
    let beta = |b: &[RatFunc]| -> RatFunc {
        let ub: Vec<RatFunc> = (0..n).map(|j| dot(&cv.u[j], b)).collect();
        let ders: Vec<Vec<RatFunc>> = ub
            .iter()
            .map(|v| {
                let mut out = vec![v.clone()];
                for _ in 0..n {
                    let d = out.last().unwrap().derivative();
                    out.push(d);
                }
                out
            })
            .collect();
        let mut acc = ub[n - 1].clone();
        for j in 0..n.saturating_sub(1) {
            acc = &acc + &ders[j][n - 1 - j];
        }
        for i in 0..n {
            if cv.alpha[i].is_zero() {
                continue;
            }
            for j in 0..i {
                acc = &acc - &(&cv.alpha[i] * &ders[j][i - 1 - j]);
            }
        }
        acc
    };
    let rhs: Vec<RatFunc> = bs.iter().map(|b| beta(b)).collect();
    let (sols, bounds) = scalar_solutions(&coeffs, &rhs);
    let tinv = cv.t.inverse().unwrap();
    let out = sols
        .into_iter()
        .map(|s| {
            let mut b = vec![RatFunc::zero(); n];
            for (c, ba) in s.c.iter().zip(bs) {
                if c.is_zero() {
                    continue;
                }
                let cf = RatFunc::constant(c.clone());
                for i in 0..n {
                    b[i] = &b[i] + &(&cf * &ba[i]);
                }
            }
            let mut w = vec![s.y.clone()];
            for i in 0..n - 1 {
                let nx = &w[i].derivative() - &dot(&cv.u[i], &b);
                w.push(nx);
            }
            let y = tinv.mul_vec(&w);
            debug_assert!(check_solution(m, &y, &b));
            ParametricSolution { y, c: s.c }
        })
        .collect();
    (out, bounds)
}

/// `Y' == M Y + b`.
pub fn check_solution(m: &Matrix<RatFunc>, y: &[RatFunc], b: &[RatFunc]) -> bool {
    let my = m.mul_vec(y);
    (0..y.len()).all(|i| y[i].derivative() == &my[i] + &b[i])
}

/// Rational solutions of `Y' = M Y + b` (homogeneous when `b` is `None`).
pub fn rational_system_solutions(m: &Matrix<RatFunc>, b: Option<&[RatFunc]>) -> AffineSolutions {
    let n = m.rows();
    let bs: Vec<Vec<RatFunc>> = b.map(|b| vec![b.to_vec()]).unwrap_or_default();
    let (sols, bounds) = system_parametric(m, &bs);
    let mut homogeneous: Vec<Vec<RatFunc>> = Vec::new();
    let mut particular = None;
    for s in sols {
        match s.c.first() {
            Some(c) if !c.is_zero() && particular.is_none() => {
                let inv = RatFunc::constant(c.inv());
                particular = Some(s.y.iter().map(|v| v * &inv).collect());
            }
            Some(c) if !c.is_zero() => {
                // reduce against the chosen particular solution
                let p: &Vec<RatFunc> = particular.as_ref().unwrap();
                let cf = RatFunc::constant(c.clone());
                homogeneous.push((0..n).map(|i| &s.y[i] - &(&cf * &p[i])).collect());
            }
            _ => homogeneous.push(s.y),
        }
    }
    AffineSolutions {
        particular,
        homogeneous,
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtx::{t_func, x_func};

    #[test]
    fn poles_at_one_of_several_quadratic_factors() {
        // y = q2/q1 solves y' = (q2'/q2 - q1'/q1) y; q1 q2 has no linear factor
        let x = x_func();
        let t = t_func();
        let q1 = &(&x * &x) - &t;
        let q2 = &(&x * &x) + &t;
        let rho = &(&q2.derivative() / &q2) - &(&q1.derivative() / &q1);
        let (s, b) = scalar_solutions(&[-rho, RatFunc::one()], &[]);
        assert_eq!(s.len(), 1);
        assert!(b.denominator.rem(q1.num()).is_zero());
        let y = &s[0].y / &(&q2 / &q1);
        assert!(y.is_constant());
    }

    #[test]
    fn scalar_first_order() {
        // y' - (t/x) y = 0 has no rational solution; y' - (2/x) y = 0 has x^2
        let x = x_func();
        let (s, _) = scalar_solutions(&[-&(&t_func() / &x), RatFunc::one()], &[]);
        assert!(s.is_empty());
        let (s, _) = scalar_solutions(&[-&(&RatFunc::from_i64(2) / &x), RatFunc::one()], &[]);
        assert_eq!(s.len(), 1);
        let y = &s[0].y;
        assert_eq!(&y.derivative() * &x, &RatFunc::from_i64(2) * y);
    }

    #[test]
    fn inhomogeneous_scalar() {
        // y' = 1/x^2  =>  y = -1/x
        let x = x_func();
        let (s, _) = scalar_solutions(&[RatFunc::zero(), RatFunc::one()], &[&RatFunc::one() / &(&x * &x)]);
        let with_c: Vec<_> = s.iter().filter(|p| !p.c[0].is_zero()).collect();
        assert!(!with_c.is_empty());
        let p = with_c[0];
        assert_eq!(p.y.derivative(), &RatFunc::constant(p.c[0].clone()) * &(&RatFunc::one() / &(&x * &x)));
    }

    #[test]
    fn triangular_system() {
        let x = x_func();
        let one = RatFunc::one();
        let m = Matrix::from_rows(vec![vec![RatFunc::zero(), &one / &x], vec![RatFunc::zero(), RatFunc::zero()]]);
        let sols = rational_system_solutions(&m, None);
        // (1, 0) only; (log x, 1) is not rational
        assert_eq!(sols.homogeneous.len(), 1);
        let b = vec![RatFunc::zero(), &one / &(&x * &x)];
        let aff = rational_system_solutions(&m, Some(&b));
        let y = aff.particular.expect("particular solution");
        assert!(check_solution(&m, &y, &b));
    }
}

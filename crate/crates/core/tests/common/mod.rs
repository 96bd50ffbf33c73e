//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use ppvkit::cli::parse_expr;
use ppvkit::field::{q, Field};
use ppvkit::linsys::DiffSystem;
use ppvkit::matrix::Matrix;
use ppvkit::poly::Poly;
use ppvkit::qtx::{eval_rat_t, from_rat, t_rat, x_func};
use ppvkit::{AlgElem, PolyX, Q, RatFunc, RatT};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn rf(s: &str) -> RatFunc {
    parse_expr(s).unwrap().eval_base().unwrap()
}

pub fn alg(s: &str, ext: Option<&Arc<RatFunc>>) -> AlgElem {
    parse_expr(s).unwrap().eval(ext).unwrap()
}

pub fn system(rows: &[&[&str]]) -> Arc<DiffSystem> {
    let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s)).collect()).collect());
    Arc::new(DiffSystem::from_base(&m))
}

pub fn ex1() -> Arc<DiffSystem> {
    system(&[&["t/x"]])
}

pub fn ex2() -> Arc<DiffSystem> {
    system(&[&["1", "t/x + 1/(x+1)"], &["0", "1"]])
}

/// The pole factors allowed in random instances.
pub fn pole_factors() -> Vec<PolyX> {
    let x = PolyX::var();
    let one = PolyX::one();
    vec![
        x.clone(),
        &x - &one,
        &x + &one,
        &x - &PolyX::constant(t_rat()),
    ]
}

fn small_int(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> RatFunc {
    RatFunc::from_i64(r.gen_range(lo..=hi))
}

/// A random function `p / d` with `d` a product of at most three allowed
/// factors and `deg p <= 3`.
pub fn random_entry(r: &mut ChaCha8Rng) -> RatFunc {
    let fs = pole_factors();
    let mut den = PolyX::one();
    for _ in 0..r.gen_range(0..=3) {
        den = &den * &fs[r.gen_range(0..fs.len())];
    }
    let deg = r.gen_range(0..=3usize.min(den.deg().max(0) as usize + 1));
    let mut num = PolyX::zero();
    for k in 0..=deg {
        let c = r.gen_range(-2..=2i64);
        num = &num + &PolyX::monomial(RatT::from_i64(c), k);
    }
    RatFunc::from_parts(num, den)
}

/// `sum n_f / f`, the logarithmic derivative of `prod f^{n_f}`.
pub fn random_log_derivative(r: &mut ChaCha8Rng) -> RatFunc {
    let fs = pole_factors();
    let mut out = RatFunc::zero();
    for _ in 0..r.gen_range(0..=2) {
        let f = &fs[r.gen_range(0..fs.len())];
        let n = small_int(r, -2, 2);
        out = &out + &(&n / &RatFunc::from_poly(f.clone()));
    }
    out
}

pub struct Instance {
    pub m: Matrix<RatFunc>,
    pub b: Option<Vec<RatFunc>>,
}

/// Random systems `Y' = M Y (+ b)` of size at most 3. Half are upper
/// triangular with logarithmic-derivative diagonals so that solutions
/// exist; inhomogeneous terms are planted from a known rational `Y0`.
pub fn random_instance(r: &mut ChaCha8Rng) -> Instance {
    let n = r.gen_range(1..=3usize);
    let triangular = r.gen_bool(0.6);
    let m = Matrix::from_fn(n, n, |_, _| RatFunc::zero());
    let mut m = m;
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = if triangular {
                if i == j {
                    random_log_derivative(r)
                } else if i < j && r.gen_bool(0.5) {
                    random_entry(r)
                } else {
                    RatFunc::zero()
                }
            } else if r.gen_bool(0.6) {
                random_entry(r)
            } else {
                RatFunc::zero()
            };
        }
    }
    let b = match r.gen_range(0..3) {
        0 => None,
        1 => {
            let y0: Vec<RatFunc> = (0..n).map(|_| random_entry(r)).collect();
            let my = m.mul_vec(&y0);
            Some((0..n).map(|i| &y0[i].derivative() - &my[i]).collect())
        }
        _ => Some((0..n).map(|_| if r.gen_bool(0.5) { random_entry(r) } else { RatFunc::zero() }).collect()),
    };
    Instance { m, b }
}

/// Rational solutions found by an undetermined-coefficient ansatz
/// `Y = P / D` with `D = prod f^k` over the factors dividing the
/// denominators of the data: (homogeneous dimension, particular exists).
///
/// The oracle works in Q[x] at the specialization `t = t0`; kernel
/// dimensions can only grow under specialization, and `t0` is chosen away
/// from the finitely many exceptional values of small instances.
pub fn ansatz_oracle(inst: &Instance, pole_order: usize, extra_degree: usize) -> (usize, bool) {
    type P = Poly<Q>;
    let t0 = q(5, 1);
    let n = inst.m.rows();
    let to_q = |f: &RatFunc| -> (P, P) {
        let g = specialize_fn(f, &t0);
        let c = |c: &RatT| c.as_rational().expect("specialized coefficient");
        (g.num().map_coeffs(c), g.den().map_coeffs(c))
    };
    let m: Vec<Vec<(P, P)>> = (0..n).map(|i| inst.m.row(i).iter().map(to_q).collect()).collect();
    let zero_b = vec![RatFunc::zero(); n];
    let b: Vec<(P, P)> = inst.b.as_deref().unwrap_or(&zero_b).iter().map(to_q).collect();
    let mut l = P::one();
    for (_, d) in m.iter().flatten().chain(&b) {
        l = l.lcm(d);
    }
    let fs: Vec<P> = pole_factors()
        .iter()
        .map(|f| to_q(&RatFunc::from_poly(f.clone())).0)
        .filter(|f| l.rem(f).is_zero())
        .collect();
    let d = fs.iter().fold(P::one(), |acc, f| &acc * &f.pow(pole_order));
    let dd = d.derivative();
    let nmax = d.deg() as usize + extra_degree;
    let scaled = |(num, den): &(P, P)| -> P { &l.exact_div(den).expect("lcm") * num };
    let ml: Vec<Vec<P>> = m.iter().map(|r| r.iter().map(scaled).collect()).collect();
    let mut polys: Vec<Vec<P>> = Vec::new();
    for i in 0..n {
        for k in 0..=nmax {
            let xk = P::monomial(Q::one(), k);
            let dxk = xk.derivative();
            let own = &l * &(&(&dxk * &d) - &(&xk * &dd));
            let col: Vec<P> = (0..n)
                .map(|r| {
                    let v = -(&(&ml[r][i] * &xk) * &d);
                    if r == i {
                        &v + &own
                    } else {
                        v
                    }
                })
                .collect();
            polys.push(col);
        }
    }
    polys.push(b.iter().map(|e| -(&(&scaled(e) * &d) * &d)).collect());
    let top = polys.iter().flatten().map(|p| p.deg()).max().unwrap_or(0).max(0) as usize;
    let columns: Vec<Vec<Q>> = polys
        .iter()
        .map(|col| col.iter().flat_map(|p| (0..=top).map(|j| p.coeff(j))).collect())
        .collect();
    let rows = columns[0].len();
    let a = Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone());
    let ker = a.kernel();
    let last = columns.len() - 1;
    let particular = ker.iter().any(|v| !v[last].is_zero());
    let hom = if particular { ker.len() - 1 } else { ker.len() };
    (hom, particular && inst.b.is_some())
}

fn specialize_fn(f: &RatFunc, t0: &Q) -> RatFunc {
    let sp = |c: &RatT| RatT::constant(eval_rat_t(c, t0).expect("t0 is not a pole"));
    let num = f.num().map_coeffs(sp);
    let den = f.den().map_coeffs(sp);
    RatFunc::new(num, den).expect("t0 keeps the denominator nonzero")
}

pub fn specialize(inst: &Instance, t0: &Q) -> Instance {
    Instance {
        m: inst.m.map(|e| specialize_fn(e, t0)),
        b: inst.b.as_ref().map(|b| b.iter().map(|e| specialize_fn(e, t0)).collect()),
    }
}

pub fn rat_t(c: &RatT) -> RatFunc {
    from_rat(c.clone())
}

pub fn x() -> RatFunc {
    x_func()
}

pub fn half() -> RatT {
    RatT::constant(q(1, 2))
}

pub mod props;

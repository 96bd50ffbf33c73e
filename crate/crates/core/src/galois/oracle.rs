//! Picard–Vessiot groups of upper triangular systems with diagonal entries in
//! Q(t)(x), over Q(t)(x) or a declared quadratic extension.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Arc;

use super::presentation::{EntryCertificate, GroupPresentation, Provenance, ReductiveKind, TorusCoordinate, UnipotentPart};
use super::ring::{monomials_of_degree, unit, GPoly, Generator, Monomial};
use super::GaloisError;
use crate::alg::AlgElem;
use crate::field::Field;
use crate::linsys::{total_prolongation, DiffSystem, ProlongationKind};
use crate::matrix::Matrix;
use crate::qtx::DiffField;
use crate::ratsol::linear::scalar_solutions;
use crate::ratsol::logderiv::log_derivative_order_ext;
use crate::ratsol::{exponent_lattice, joint_relations, log_derivative_order};
use crate::{RatFunc, RatT};

#[derive(Clone, Debug, PartialEq)]
pub enum SupportedClass {
    Rank1,
    TriangularRank1Diagonal,
    Diagonal,
    Unsupported(String),
}

impl SupportedClass {
    pub fn is_supported(&self) -> bool {
        !matches!(self, SupportedClass::Unsupported(_))
    }
}

pub fn classify(a: &DiffSystem) -> SupportedClass {
    let m = a.matrix();
    let n = m.rows();
    if (0..n).any(|i| !m[(i, i)].is_base()) {
        return SupportedClass::Unsupported("diagonal entry outside Q(t)(x)".into());
    }
    if n == 1 {
        SupportedClass::Rank1
    } else if m.is_diagonal() {
        SupportedClass::Diagonal
    } else if m.is_upper_triangular() {
        SupportedClass::TriangularRank1Diagonal
    } else {
        SupportedClass::Unsupported(
            "irreducible block of size >= 2 that is not of Picard-Fuchs reducible form".into(),
        )
    }
}

#[derive(Clone, Debug)]
enum WeightClass {
    Ld(AlgElem),
    Torsion(BigInt),
    Free,
}

fn weight_class(rho: &RatFunc, ext: Option<&Arc<RatFunc>>) -> WeightClass {
    let ld = match ext {
        None => log_derivative_order(rho).map(|l| (l.order, AlgElem::from_base(l.witness))),
        Some(q) => log_derivative_order_ext(rho, q).map(|l| (l.order, l.witness)),
    };
    match ld {
        Some((n, w)) if n.is_one() => WeightClass::Ld(w),
        Some((n, _)) => WeightClass::Torsion(n),
        None => WeightClass::Free,
    }
}

struct Tower {
    gens: Vec<Generator>,
    ext: Option<Arc<RatFunc>>,
    cache: Vec<(RatFunc, WeightClass)>,
}

/// `y_β = a0 + ∑_p π_p a_p` in unknown constants `π`.
#[derive(Clone, Debug)]
struct Affine {
    a0: AlgElem,
    a: Vec<AlgElem>,
}

fn cst(c: &RatT) -> AlgElem {
    AlgElem::from_base(RatFunc::constant(c.clone()))
}

fn lin(v: &[AlgElem], mu: &[RatT]) -> AlgElem {
    v.iter().zip(mu).fold(AlgElem::zero(), |acc, (x, c)| {
        if c.is_zero() || x.is_zero() {
            acc
        } else {
            &acc + &(&cst(c) * x)
        }
    })
}

impl Tower {
    fn classify(&mut self, rho: &RatFunc) -> WeightClass {
        if let Some((_, c)) = self.cache.iter().find(|(r, _)| r == rho) {
            return c.clone();
        }
        let c = weight_class(rho, self.ext.as_ref());
        self.cache.push((rho.clone(), c.clone()));
        c
    }

    fn primitives(&self) -> Vec<usize> {
        (0..self.gens.len()).filter(|&l| self.gens[l].is_primitive()).collect()
    }

    fn has_twisted(&self, p: &GPoly) -> bool {
        p.support().iter().any(|&l| !self.gens[l].is_primitive())
    }

    fn integrand(&self, l: usize) -> AlgElem {
        match &self.gens[l] {
            Generator::Primitive { integrand } => integrand.clone(),
            _ => unreachable!(),
        }
    }

    /// `h_β = R_β - ∑_l (β_l + 1) G_l y_{β+e_l}` as an affine form.
    fn level_forms(&self, r: &GPoly, beta: &Monomial, ys: &[(Monomial, Affine)], np: usize, prims: &[usize]) -> Affine {
        let mut h = Affine {
            a0: r.coeff(beta),
            a: vec![AlgElem::zero(); np],
        };
        for &l in prims {
            let mut up = beta.clone();
            if up.len() <= l {
                up.resize(l + 1, 0);
            }
            up[l] += 1;
            let up = GPoly::term(up, AlgElem::one()).terms().next().unwrap().0.clone();
            let Some((_, y)) = ys.iter().find(|(m, _)| *m == up) else { continue };
            let f = &AlgElem::from_i64(beta.get(l).copied().unwrap_or(0) as i64 + 1) * &self.integrand(l);
            h.a0 = &h.a0 - &(&f * &y.a0);
            for p in 0..np {
                if !y.a[p].is_zero() {
                    h.a[p] = &h.a[p] - &(&f * &y.a[p]);
                }
            }
        }
        h
    }

    /// Solves `Y' = R` in `E[U]` for primitive generators `U`, adjoining a new
    /// primitive when the constant level fails.
    fn integrate(&mut self, r: &GPoly) -> Result<GPoly, GaloisError> {
        let prims = self.primitives();
        let d = r.degree().max(0) as u32;
        let mut ys: Vec<(Monomial, Affine)> = Vec::new();
        let mut np = 0usize;
        for k in (0..=d + 1).rev() {
            let betas = monomials_of_degree(&prims, k);
            if betas.is_empty() {
                continue;
            }
            let forms: Vec<Affine> = betas.iter().map(|b| self.level_forms(r, b, &ys, np, &prims)).collect();
            let families: Vec<Vec<AlgElem>> = forms
                .iter()
                .map(|h| std::iter::once(h.a0.clone()).chain(h.a.iter().cloned()).collect())
                .collect();
            let rels = joint_relations(&families).map_err(|e| GaloisError::Unsupported(e.to_string()))?;
            let Some(i0) = rels.iter().position(|rl| !rl.coeffs[0].is_zero()) else {
                if k == 0 {
                    let g = forms[0].a0.clone();
                    self.gens.push(Generator::Primitive { integrand: g });
                    let l = self.gens.len() - 1;
                    let mut y = GPoly::generator(l);
                    for (m, a) in &ys {
                        y.add_term(m.clone(), a.a0.clone());
                    }
                    return Ok(y);
                }
                return Err(GaloisError::Unsupported(format!(
                    "nested iterated integral at degree {}",
                    k
                )));
            };
            let c0 = rels[i0].coeffs[0].clone();
            let inv = c0.inv();
            let part: Vec<RatT> = rels[i0].coeffs.iter().map(|c| c * &inv).collect();
            let part_w: Vec<AlgElem> = rels[i0].witnesses.iter().map(|w| &cst(&inv) * w).collect();
            let mut homs: Vec<(Vec<RatT>, Vec<AlgElem>)> = Vec::new();
            for (i, rl) in rels.iter().enumerate() {
                if i == i0 {
                    continue;
                }
                let f = &rl.coeffs[0] * &inv;
                let v: Vec<RatT> = rl.coeffs.iter().zip(&rels[i0].coeffs).map(|(a, b)| a - &(&f * b)).collect();
                let w: Vec<AlgElem> = rl
                    .witnesses
                    .iter()
                    .zip(&rels[i0].witnesses)
                    .map(|(a, b)| a - &(&cst(&f) * b))
                    .collect();
                homs.push((v, w));
            }
            // new parameters: sigma_q (homs), then nu_beta (betas)
            let nq = homs.len();
            let new_np = nq + betas.len();
            for (_, y) in ys.iter_mut() {
                let a0 = &y.a0 + &lin(&y.a, &part[1..]);
                let mut a = vec![AlgElem::zero(); new_np];
                for (q, (v, _)) in homs.iter().enumerate() {
                    a[q] = lin(&y.a, &v[1..]);
                }
                *y = Affine { a0, a };
            }
            for (bi, b) in betas.iter().enumerate() {
                let mut a = vec![AlgElem::zero(); new_np];
                for (q, (_, w)) in homs.iter().enumerate() {
                    a[q] = w[bi].clone();
                }
                a[nq + bi] = AlgElem::one();
                ys.push((b.clone(), Affine { a0: part_w[bi].clone(), a }));
            }
            np = new_np;
        }
        let mut y = GPoly::zero();
        for (m, a) in ys {
            y.add_term(m, a.a0);
        }
        Ok(y)
    }

    /// Solves `Y' = ρ Y + R` in `F[U]` for a weight that is not a
    /// logarithmic derivative.
    fn twisted(&mut self, rho: &RatFunc, r: &GPoly) -> Result<GPoly, GaloisError> {
        let unsupported = |why: &str| Err(GaloisError::Unsupported(why.to_string()));
        if r.terms().any(|(_, c)| !c.is_base()) {
            return unsupported("twisted entry with coefficients in the quadratic extension");
        }
        let prims = self.primitives();
        if prims.iter().any(|&l| !self.integrand(l).is_base()) {
            return unsupported("twisted entry over primitives of the quadratic extension");
        }
        let d = r.degree().max(0) as u32;
        let mut ys: Vec<(Monomial, Affine)> = Vec::new();
        let coeffs = [-rho, RatFunc::one()];
        for k in (0..=d).rev() {
            for b in monomials_of_degree(&prims, k) {
                let h = self.level_forms(r, &b, &ys, 0, &prims).a0;
                let (sols, _) = scalar_solutions(&coeffs, &[h.even().clone()]);
                match sols.iter().find(|s| !s.c[0].is_zero()) {
                    Some(s) => {
                        let y = &s.y * &RatFunc::constant(s.c[0].inv());
                        ys.push((b, Affine { a0: AlgElem::from_base(y), a: Vec::new() }));
                    }
                    None if k == 0 => {
                        let v = self.new_twisted(rho, h.even())?;
                        let mut y = v;
                        for (m, a) in &ys {
                            y.add_term(m.clone(), a.a0.clone());
                        }
                        return Ok(y);
                    }
                    None => return unsupported("twisted entry needs a generator above degree zero"),
                }
            }
        }
        let mut y = GPoly::zero();
        for (m, a) in ys {
            y.add_term(m, a.a0);
        }
        Ok(y)
    }

    /// `y' = ρ y + g` over existing twisted generators of equivalent weight,
    /// otherwise a new generator.
    fn new_twisted(&mut self, rho: &RatFunc, g: &RatFunc) -> Result<GPoly, GaloisError> {
        let mut related: Vec<(usize, RatFunc, RatFunc)> = Vec::new();
        for (l, gen) in self.gens.iter().enumerate() {
            if let Generator::Twisted { weight, inhomogeneous } = gen {
                if let Some(ld) = log_derivative_order(&(rho - weight)) {
                    if ld.order.is_one() && inhomogeneous.is_base() {
                        let wg = &ld.witness * inhomogeneous.even();
                        related.push((l, ld.witness, wg));
                    }
                }
            }
        }
        if !related.is_empty() {
            let mut rhs = vec![g.clone()];
            rhs.extend(related.iter().map(|(_, _, wg)| wg.clone()));
            let (sols, _) = scalar_solutions(&[-rho, RatFunc::one()], &rhs);
            if let Some(s) = sols.iter().find(|s| !s.c[0].is_zero()) {
                let inv = RatFunc::constant(s.c[0].inv());
                let mut y = GPoly::constant(AlgElem::from_base(&s.y * &inv));
                for (i, (l, w, _)) in related.iter().enumerate() {
                    let a = -&(&(&RatFunc::constant(s.c[i + 1].clone()) * &inv) * w);
                    y.add_term(unit(*l), AlgElem::from_base(a));
                }
                return Ok(y);
            }
        }
        self.gens.push(Generator::Twisted {
            weight: rho.clone(),
            inhomogeneous: AlgElem::from_base(g.clone()),
        });
        Ok(GPoly::generator(self.gens.len() - 1))
    }

    fn solve_entry(&mut self, rho: &RatFunc, rhs: &GPoly) -> Result<GPoly, GaloisError> {
        if rhs.is_zero() {
            return Ok(GPoly::zero());
        }
        match self.classify(rho) {
            WeightClass::Ld(w) => {
                if self.has_twisted(rhs) {
                    return Err(GaloisError::Unsupported("integral over a twisted generator".into()));
                }
                let winv = &AlgElem::one() / &w;
                let y = self.integrate(&rhs.scale(&winv))?;
                Ok(y.scale(&w))
            }
            WeightClass::Torsion(n) if n == BigInt::from(2) && self.ext.is_none() => {
                // adjoin a square root of the order-two witness; the base
                // generators stay valid over F(z)
                let (q, w) = half_witness(rho);
                self.ext = Some(q);
                self.cache.clear();
                match self.classify(rho) {
                    WeightClass::Ld(v) => debug_assert_eq!(dlog_alg(&v), dlog_alg(&w)),
                    _ => unreachable!("order two weight is a logarithmic derivative over its root"),
                }
                self.solve_entry(rho, rhs)
            }
            WeightClass::Torsion(n) => Err(GaloisError::Unsupported(format!(
                "weight {} has finite order {}; requires an algebraic extension",
                rho.render(),
                n
            ))),
            WeightClass::Free => {
                if self.has_twisted(rhs) {
                    return Err(GaloisError::Unsupported("twisted entry over a twisted generator".into()));
                }
                self.twisted(rho, rhs)
            }
        }
    }
}

fn dlog_alg(f: &AlgElem) -> AlgElem {
    &f.derive(crate::qtx::Derivation::Dx) / f
}

/// For `2ρ = f'/f`: squarefree `q` and `w = z·s` with `w'/w = ρ`, `z^2 = q`.
fn half_witness(rho: &RatFunc) -> (Arc<RatFunc>, AlgElem) {
    let f = log_derivative_order(rho).expect("torsion weight has a witness").witness;
    // p = odd · square, both split off the square-free decomposition
    let split = |p: &crate::PolyX| {
        let (_, parts) = p.squarefree_decomposition();
        let mut odd = crate::PolyX::one();
        let mut root = crate::PolyX::one();
        for (i, a) in parts.iter().enumerate() {
            let m = i + 1;
            if m % 2 == 1 {
                odd = &odd * a;
            }
            for _ in 0..m / 2 {
                root = &root * a;
            }
        }
        (odd, root)
    };
    let (on, rn) = split(f.num());
    let (od, rd) = split(f.den());
    let q = AlgElem::modulus(RatFunc::from_poly(&on * &od)).expect("odd parts are square-free and coprime");
    let s = &RatFunc::from_poly(rn) / &RatFunc::from_poly(&od * &rd);
    let w = &AlgElem::z(&q) * &AlgElem::from_base(s);
    (q, w)
}

fn entry_extension(m: &Matrix<AlgElem>) -> Option<Arc<RatFunc>> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .find_map(|(i, j)| m[(i, j)].modulus_ref().cloned())
}

/// Group of `∂_x y = r y`.
pub fn pv_group_rank1(r: &RatFunc) -> GroupPresentation {
    let a = DiffSystem::from_base(&Matrix::from_rows(vec![vec![r.clone()]]));
    pv_group_triangular(&a).expect("rank one systems are supported")
}

pub fn pv_group_triangular(a: &DiffSystem) -> Result<GroupPresentation, GaloisError> {
    if let SupportedClass::Unsupported(why) = classify(a) {
        return Err(GaloisError::NotInSupportedClass(why));
    }
    let m = a.matrix();
    let n = m.rows();
    let red_ext = entry_extension(m);
    let unip_ext = a.extension().cloned().or_else(|| red_ext.clone());
    let diag: Vec<RatFunc> = (0..n).map(|i| m[(i, i)].even().clone()).collect();

    let mut classes: Vec<TorusCoordinate> = Vec::new();
    for (i, r) in diag.iter().enumerate() {
        let hit = classes.iter_mut().find(|c| {
            &c.weight == r
                || matches!(weight_class(&(r - &c.weight), red_ext.as_ref()), WeightClass::Ld(_))
        });
        match hit {
            Some(c) => c.positions.push(i),
            None => {
                let kind = match weight_class(r, red_ext.as_ref()) {
                    WeightClass::Ld(_) => ReductiveKind::Trivial,
                    WeightClass::Torsion(k) => ReductiveKind::FiniteCyclic(k),
                    WeightClass::Free => ReductiveKind::FullTorus,
                };
                classes.push(TorusCoordinate {
                    positions: vec![i],
                    weight: r.clone(),
                    kind,
                });
            }
        }
    }
    let weights: Vec<RatFunc> = classes.iter().map(|c| c.weight.clone()).collect();
    let lattice = exponent_lattice(&weights, red_ext.as_ref());
    let torus_dim = lattice.torus_dim(weights.len());

    let mut tower = Tower {
        gens: Vec::new(),
        ext: unip_ext.clone(),
        cache: Vec::new(),
    };
    let mut v: Vec<Vec<GPoly>> = vec![vec![GPoly::zero(); n]; n];
    let mut entries = Vec::new();
    for j in 0..n {
        v[j][j] = GPoly::constant(AlgElem::one());
        for i in (0..j).rev() {
            let mut rhs = GPoly::zero();
            for k in i + 1..=j {
                if !m[(i, k)].is_zero() && !v[k][j].is_zero() {
                    rhs = rhs.add(&v[k][j].scale(&m[(i, k)]));
                }
            }
            let rho = &diag[i] - &diag[j];
            let value = tower.solve_entry(&rho, &rhs)?;
            entries.push(EntryCertificate {
                row: i,
                col: j,
                weight: rho,
                value: value.clone(),
                rhs,
            });
            v[i][j] = value;
        }
    }
    let udim = tower.gens.len();
    let unip_ext = tower.ext.clone();
    Ok(GroupPresentation {
        reductive: classes,
        component_count: lattice.torsion.clone(),
        lattice,
        unipotent: UnipotentPart {
            dim: udim,
            generators: tower.gens,
            entries,
        },
        torus_dim,
        dim: torus_dim + udim,
        extension: unip_ext,
        provenance: None,
    })
}

/// Group of the level-`s` prolongation of `base`, tagged with provenance.
pub fn pv_group_at(base: &Arc<DiffSystem>, s: usize, kind: ProlongationKind) -> Result<GroupPresentation, GaloisError> {
    let p = total_prolongation(base.as_ref(), s, kind).system();
    let mut g = pv_group_triangular(&p)?;
    g.provenance = Some(Provenance {
        base: base.clone(),
        level: s,
        kind,
    });
    Ok(g)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::qtx::{t_func, x_func};

    fn sys(rows: Vec<Vec<RatFunc>>) -> Arc<DiffSystem> {
        Arc::new(DiffSystem::from_base(&Matrix::from_rows(rows)))
    }

    fn ex1() -> Arc<DiffSystem> {
        sys(vec![vec![&t_func() / &x_func()]])
    }

    fn ex2() -> Arc<DiffSystem> {
        let x = x_func();
        let b = &(&t_func() / &x) + &(&RatFunc::one() / &(&x + &RatFunc::one()));
        sys(vec![vec![RatFunc::one(), b], vec![RatFunc::zero(), RatFunc::one()]])
    }

    #[test]
    fn rank_one_kinds() {
        let x = x_func();
        let g = pv_group_rank1(&(&t_func() / &x));
        assert_eq!(g.reductive[0].kind, ReductiveKind::FullTorus);
        assert_eq!(g.dim, 1);
        let g = pv_group_rank1(&(&RatFunc::one() / &x));
        assert_eq!(g.reductive[0].kind, ReductiveKind::Trivial);
        assert_eq!(g.dim, 0);
    }

    /// Weight `1/(2x)`: the entry lives over `z^2 = x`, adjoined on demand.
    #[test]
    fn order_two_weight_adjoins_a_root() {
        let x = x_func();
        let one = RatFunc::one();
        let half = &RatFunc::from_rational(&crate::field::q(1, 2)) / &x;
        // y = z * 2z: algebraic
        let g = pv_group_triangular(&sys(vec![vec![half.clone(), one.clone()], vec![RatFunc::zero(), RatFunc::zero()]])).unwrap();
        assert_eq!(g.unipotent_dim(), 0);
        assert!(g.extension.is_some());
        assert!(g.verify());
        // ∫ dx / (z (x - 1)) is a logarithm
        let b = &one / &(&x - &one);
        let g = pv_group_triangular(&sys(vec![vec![half, b], vec![RatFunc::zero(), RatFunc::zero()]])).unwrap();
        assert_eq!(g.unipotent_dim(), 1);
        assert!(g.verify());
    }

    #[test]
    fn ex1_trajectory() {
        let dims: Vec<usize> = (0..3)
            .map(|s| pv_group_at(&ex1(), s, ProlongationKind::Jet).unwrap().dim)
            .collect();
        assert_eq!(dims, vec![1, 2, 2]);
        let g2 = pv_group_at(&ex1(), 2, ProlongationKind::Jet).unwrap();
        assert!(g2.verify());
    }

    #[test]
    fn ex2_trajectory() {
        let dims: Vec<usize> = (0..3)
            .map(|s| pv_group_at(&ex2(), s, ProlongationKind::Jet).unwrap().dim)
            .collect();
        assert_eq!(dims, vec![2, 3, 3]);
    }

    #[test]
    fn diagonal_lattice() {
        let x = x_func();
        let r = &t_func() / &x;
        let a = sys(vec![vec![r.clone(), RatFunc::zero()], vec![RatFunc::zero(), &RatFunc::from_i64(2) * &r]]);
        let g = pv_group_triangular(&a).unwrap();
        assert_eq!(g.torus_dim, 1);
        assert_eq!(g.lattice.rank, 1);
    }

    #[test]
    fn lower_triangular_rejected() {
        let a = sys(vec![vec![RatFunc::zero(), RatFunc::zero()], vec![x_func(), RatFunc::zero()]]);
        assert!(matches!(pv_group_triangular(&a), Err(GaloisError::NotInSupportedClass(_))));
    }

    pub(crate) fn pf() -> Arc<DiffSystem> {
        let x = x_func();
        let one = RatFunc::one();
        let q = &(&x * &(&x - &one)) * &(&x - &t_func());
        let h = RatFunc::from_rational(&crate::field::q(-1, 2));
        let p = &h * &(&(&(&one / &x) + &(&one / &(&x - &one))) + &(&one / &(&x - &t_func())));
        let m = Matrix::from_rows(vec![vec![RatFunc::zero(), one.clone()], vec![RatFunc::zero(), p]]);
        let ext = AlgElem::modulus(q).unwrap();
        Arc::new(DiffSystem::new(m.map(|e| AlgElem::from_base(e.clone())), None, Some(ext)).unwrap())
    }

    #[test]
    fn pf_trajectory() {
        let gs: Vec<GroupPresentation> = (0..3).map(|s| pv_group_at(&pf(), s, ProlongationKind::Jet).unwrap()).collect();
        let dims: Vec<usize> = gs.iter().map(|g| g.dim).collect();
        assert_eq!(dims, vec![1, 2, 2]);
        assert!(gs.iter().all(|g| g.component_count == BigInt::from(2)));
        assert!(gs[2].verify());
    }

    #[test]
    fn torsion_rich_triangular() {
        let x = x_func();
        let a = sys(vec![vec![RatFunc::zero(), &RatFunc::one() / &x], vec![RatFunc::zero(), &t_func() / &x]]);
        let dims: Vec<usize> = (0..4).map(|s| pv_group_at(&a, s, ProlongationKind::Jet).unwrap().dim).collect();
        assert_eq!(dims, vec![1, 2, 2, 2]);
    }
}

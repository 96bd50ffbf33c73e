//! Defining equations of the parameterized group, read off the first level
//! at which the projection of the trajectory is injective.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use super::presentation::{GroupPresentation, ReductiveKind};
use super::ring::Generator;
use super::GaloisError;
use crate::alg::AlgElem;
use crate::field::Field;
use crate::matrix::{in_span, span_basis, Matrix};
use crate::qtx::{DiffField, Derivation};
use crate::ratsol::constants_relations;
use crate::{PolyT, RatT, Q};

/// Whether a coordinate is read through `∂_t g / g` or directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinateKind {
    Multiplicative,
    Additive,
}

/// `L(θ) = 0` with `θ = ∂_t g/g` or `θ = b`. Coefficients are low order
/// first; an empty operator means the coordinate is unconstrained.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorConstraint {
    pub coordinate: String,
    pub kind: CoordinateKind,
    pub operator: Vec<PolyT>,
}

impl OperatorConstraint {
    pub fn order(&self) -> Option<usize> {
        self.operator.len().checked_sub(1)
    }

    pub fn render(&self) -> String {
        if self.operator.is_empty() {
            return format!("{} unconstrained", self.coordinate);
        }
        let arg = match self.kind {
            CoordinateKind::Multiplicative => format!("Dt({0})/{0}", self.coordinate),
            CoordinateKind::Additive => self.coordinate.clone(),
        };
        let terms: Vec<(RatT, String)> = self
            .operator
            .iter()
            .enumerate()
            .map(|(k, c)| (RatT::from_poly(c.clone()), dt_power(k, &arg)))
            .collect();
        format!("{} = 0", render_sum(&terms))
    }

    /// The constraint as a differential polynomial in the coordinate itself.
    pub fn expanded(&self) -> DiffPolynomial {
        match self.kind {
            CoordinateKind::Additive => {
                let mut d = DiffPolynomial::default();
                for (k, c) in self.operator.iter().enumerate() {
                    let mut m = vec![0; k + 1];
                    m[k] = 1;
                    d.add(m, c.clone());
                }
                d
            }
            CoordinateKind::Multiplicative => expand_log_operator(&self.operator),
        }
    }
}

/// `g^order = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteConstraint {
    pub coordinate: String,
    pub order: BigInt,
}

/// `∏ g_i^{n_i} = 1` among reductive coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialRelation {
    pub exponents: Vec<(String, BigInt)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearTerm {
    pub coordinate: String,
    pub kind: CoordinateKind,
    pub order: usize,
    pub coeff: PolyT,
}

/// `∑ c ∂_t^k θ = 0` across several coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRelation {
    pub terms: Vec<LinearTerm>,
}

impl LinearRelation {
    pub fn render(&self) -> String {
        let terms: Vec<(RatT, String)> = self
            .terms
            .iter()
            .map(|t| {
                let arg = match t.kind {
                    CoordinateKind::Multiplicative => format!("Dt({0})/{0}", t.coordinate),
                    CoordinateKind::Additive => t.coordinate.clone(),
                };
                (RatT::from_poly(t.coeff.clone()), dt_power(t.order, &arg))
            })
            .collect();
        format!("{} = 0", render_sum(&terms))
    }
}

/// One integrand of a chain: `∂_t^order` of the coordinate's logarithmic
/// derivative (multiplicative) or of the coordinate (additive) is the
/// group action on `∫ integrand`.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub coordinate: String,
    pub kind: CoordinateKind,
    pub order: usize,
    pub integrand: AlgElem,
}

/// `∑ coeffs_i candidates_i = ∂_x witness`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainRelation {
    pub coeffs: Vec<RatT>,
    pub witness: AlgElem,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PPVPresentation {
    /// Halting level `s`: the projection from level `s+1` to `s` is injective.
    pub level: usize,
    pub dim: usize,
    pub multiplicative: Vec<OperatorConstraint>,
    pub additive: Vec<OperatorConstraint>,
    pub finite: Vec<FiniteConstraint>,
    pub monomial: Vec<MonomialRelation>,
    pub linear: Vec<LinearRelation>,
    pub candidates: Vec<Candidate>,
    pub relations: Vec<ChainRelation>,
}

impl PPVPresentation {
    /// Re-checks every chain relation witness.
    pub fn verify(&self) -> bool {
        self.relations.iter().all(|r| {
            let mut sum = AlgElem::zero();
            for (c, cand) in r.coeffs.iter().zip(&self.candidates) {
                if !c.is_zero() {
                    sum = &sum + &(&AlgElem::from_base(crate::qtx::from_rat(c.clone())) * &cand.integrand);
                }
            }
            sum == r.witness.derive(Derivation::Dx)
        })
    }

    pub fn render_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self.multiplicative.iter().map(|c| c.render()).collect();
        out.extend(self.additive.iter().map(|c| c.render()));
        out.extend(self.finite.iter().map(|f| format!("{}^{} = 1", f.coordinate, f.order)));
        out.extend(self.monomial.iter().map(|m| {
            let parts: Vec<String> = m.exponents.iter().map(|(g, n)| format!("{g}^({n})")).collect();
            format!("{} = 1", parts.join("*"))
        }));
        out.extend(self.linear.iter().map(|l| l.render()));
        out
    }
}

fn dt_power(k: usize, arg: &str) -> String {
    match k {
        0 => arg.to_string(),
        1 => format!("Dt({arg})"),
        _ => format!("Dt^{k}({arg})"),
    }
}

fn render_sum(terms: &[(RatT, String)]) -> String {
    let mut s = String::new();
    for (c, body) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative_display();
        let mag = if neg { -c.clone() } else { c.clone() };
        let piece = if mag.is_one() {
            body.clone()
        } else if mag.is_atomic() {
            format!("{}*{}", mag.render(), body)
        } else {
            format!("({})*{}", mag.render(), body)
        };
        if s.is_empty() {
            s = if neg { format!("-{piece}") } else { piece };
        } else {
            s.push_str(if neg { " - " } else { " + " });
            s.push_str(&piece);
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Scales an operator over Q(t) to primitive integer polynomials with a
/// positive leading coefficient. Trailing zero coefficients are dropped.
pub fn normalize_operator(c: &[RatT]) -> Vec<PolyT> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    primitive_form(&c)
}

/// Same scaling as [`normalize_operator`] without trimming; the sign is
/// fixed by the last nonzero entry.
fn primitive_form(c: &[RatT]) -> Vec<PolyT> {
    if c.iter().all(|x| x.is_zero()) {
        return c.iter().map(|_| PolyT::zero()).collect();
    }
    let mut l = PolyT::one();
    for x in c {
        l = l.lcm(x.den());
    }
    let mut p: Vec<PolyT> = c
        .iter()
        .map(|x| &x.num().clone() * &l.exact_div(x.den()).expect("lcm is a multiple"))
        .collect();
    let g = p.iter().fold(PolyT::zero(), |g, x| g.gcd(x));
    p = p.iter().map(|x| x.exact_div(&g).expect("gcd divides")).collect();
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for x in &p {
        for a in x.coeffs() {
            den = den.lcm(a.denom());
        }
    }
    for x in &p {
        for a in x.coeffs() {
            num = num.gcd(&(a * Q::from_integer(den.clone())).to_integer());
        }
    }
    let mut scale = Q::new(den, num);
    if p.iter().rev().find(|x| !x.is_zero()).unwrap().lc().unwrap().is_negative() {
        scale = -scale;
    }
    p.iter().map(|x| x.scale(&scale)).collect()
}

/// Polynomial in `g, ∂_t g, ∂_t² g, …` over Q[t]; keys are exponent vectors
/// without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiffPolynomial {
    pub terms: BTreeMap<Vec<u32>, PolyT>,
}

impl DiffPolynomial {
    fn add(&mut self, mut m: Vec<u32>, c: PolyT) {
        while m.last() == Some(&0) {
            m.pop();
        }
        let e = self.terms.entry(m.clone()).or_insert_with(PolyT::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn scaled(&self, c: &PolyT) -> Self {
        let mut out = DiffPolynomial::default();
        for (m, a) in &self.terms {
            out.add(m.clone(), a * c);
        }
        out
    }

    /// Multiplies by `(∂_t^k g)^e`.
    fn times_var(&self, k: usize, e: u32) -> Self {
        let mut out = DiffPolynomial::default();
        for (m, a) in &self.terms {
            let mut m = m.clone();
            if m.len() <= k {
                m.resize(k + 1, 0);
            }
            m[k] += e;
            out.add(m, a.clone());
        }
        out
    }

    /// Total ∂_t derivative, for coefficients constant in t.
    fn derive_constant_coeffs(&self) -> Self {
        let mut out = DiffPolynomial::default();
        for (m, a) in &self.terms {
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut n = m.clone();
                n[k] -= 1;
                if n.len() <= k + 1 {
                    n.resize(k + 2, 0);
                }
                n[k + 1] += 1;
                out.add(n, a.scale(&Q::from_integer(BigInt::from(e))));
            }
        }
        out
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, a) in &o.terms {
            out.add(m.clone(), a.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn render(&self, name: &str) -> String {
        let terms: Vec<(RatT, String)> = self
            .terms
            .iter()
            .rev()
            .map(|(m, a)| {
                let factors: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| {
                        let v = dt_power(k, name);
                        if e == 1 {
                            v
                        } else {
                            format!("{v}^{e}")
                        }
                    })
                    .collect();
                let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
                (RatT::from_poly(a.clone()), body)
            })
            .collect();
        render_sum(&terms)
    }
}

/// `g^{ord+1} L(∂_t g/g)` via `∂_t^k(g'/g) = N_k / g^{k+1}` with
/// `N_0 = g'` and `N_{k+1} = g ∂_t N_k − (k+1) g' N_k`.
pub fn expand_log_operator(op: &[PolyT]) -> DiffPolynomial {
    let Some(ord) = op.len().checked_sub(1) else {
        return DiffPolynomial::default();
    };
    let mut n = DiffPolynomial::default();
    n.add(vec![0, 1], PolyT::one());
    let mut total = DiffPolynomial::default();
    for (k, c) in op.iter().enumerate() {
        if !c.is_zero() {
            total = total.sum(&n.times_var(0, (ord - k) as u32).scaled(c));
        }
        let kk = PolyT::constant(Q::from_integer(BigInt::from(k as u64 + 1)));
        n = n
            .derive_constant_coeffs()
            .times_var(0, 1)
            .sum(&n.times_var(1, 1).scaled(&-kk));
    }
    total
}

fn same_base(a: &GroupPresentation, b: &GroupPresentation) -> Result<(usize, usize), GaloisError> {
    let (Some(pa), Some(pb)) = (&a.provenance, &b.provenance) else {
        return Err(GaloisError::IncomparablePresentations("presentation without provenance".into()));
    };
    if !(std::sync::Arc::ptr_eq(&pa.base, &pb.base) || pa.base == pb.base) {
        return Err(GaloisError::IncomparablePresentations("different base systems".into()));
    }
    if pa.kind != pb.kind {
        return Err(GaloisError::IncomparablePresentations("different prolongation kinds".into()));
    }
    if pb.level != pa.level && pb.level != pa.level + 1 {
        return Err(GaloisError::IncomparablePresentations(format!(
            "levels {} and {} are not consecutive",
            pa.level, pb.level
        )));
    }
    Ok((pa.level, pb.level))
}

/// Whether the projection from the level of `next` onto the level of `g_s`
/// is injective. Presentations are exact, so equal dimension, component
/// count, torus rank and unipotent rank decide it.
pub fn injective_projection(g_s: &GroupPresentation, next: &GroupPresentation) -> Result<bool, GaloisError> {
    same_base(g_s, next)?;
    Ok(g_s.dim == next.dim
        && g_s.component_count == next.component_count
        && g_s.torus_dim == next.torus_dim
        && g_s.unipotent_dim() == next.unipotent_dim())
}

struct Chain {
    name: String,
    kind: CoordinateKind,
    indices: Vec<usize>,
}

fn name(prefix: &str, i: usize, n: usize) -> String {
    if n == 1 {
        prefix.to_string()
    } else {
        format!("{prefix}{}", i + 1)
    }
}

/// Vectors of the span of `rows` supported on `cols`.
fn supported_on(rows: &[Vec<RatT>], cols: &[usize], width: usize) -> Vec<Vec<RatT>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let outside: Vec<usize> = (0..width).filter(|j| !cols.contains(j)).collect();
    let lambdas: Vec<Vec<RatT>> = if outside.is_empty() {
        (0..rows.len())
            .map(|i| (0..rows.len()).map(|l| if l == i { RatT::one() } else { RatT::zero() }).collect())
            .collect()
    } else {
        Matrix::from_fn(outside.len(), rows.len(), |o, i| rows[i][outside[o]].clone()).kernel()
    };
    lambdas
        .iter()
        .map(|lam| {
            (0..width)
                .map(|j| {
                    lam.iter()
                        .zip(rows)
                        .fold(RatT::zero(), |acc, (l, r)| &acc + &(l * &r[j]))
                })
                .collect()
        })
        .collect()
}

/// Lowest-order nonzero vector of `vs` restricted to `cols` (in chain order).
fn minimal_operator(vs: &[Vec<RatT>], cols: &[usize]) -> Vec<RatT> {
    let rev: Vec<Vec<RatT>> = vs
        .iter()
        .map(|v| cols.iter().rev().map(|&j| v[j].clone()).collect())
        .collect();
    let basis = span_basis(&rev, cols.len());
    match basis.last() {
        None => Vec::new(),
        Some(b) => b.iter().rev().cloned().collect(),
    }
}

/// Rewrites the relations of the level-`s+1` group as differential
/// equations in the coordinates of the level-0 group.
pub fn ppv_presentation(g_s: &GroupPresentation, next: &GroupPresentation) -> Result<PPVPresentation, GaloisError> {
    let (s, sn) = same_base(g_s, next)?;
    if sn != s + 1 {
        return Err(GaloisError::IncomparablePresentations("levels must be consecutive".into()));
    }
    if !injective_projection(g_s, next)? {
        return Err(GaloisError::PrematureRewrite);
    }
    let prov = next.provenance.as_ref().unwrap();
    let g0 = if s == 0 {
        g_s.clone()
    } else {
        super::oracle::pv_group_at(&prov.base, 0, prov.kind)?
    };
    let mut integrands = Vec::new();
    for gen in &g0.unipotent.generators {
        match gen {
            Generator::Primitive { integrand } => integrands.push(integrand.clone()),
            Generator::Twisted { .. } => {
                return Err(GaloisError::Unsupported("twisted unipotent coordinate at level 0".into()))
            }
        }
    }

    let red: Vec<usize> = (0..g0.reductive.len())
        .filter(|&c| g0.reductive[c].kind != ReductiveKind::Trivial)
        .collect();
    let red_name = |c: usize| name("g", red.iter().position(|&x| x == c).unwrap(), red.len());

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut chains: Vec<Chain> = Vec::new();
    let mut torus_chain: BTreeMap<usize, usize> = BTreeMap::new();
    for (c, class) in g0.reductive.iter().enumerate() {
        if class.kind != ReductiveKind::FullTorus {
            continue;
        }
        let mut d = class.weight.derive(Derivation::Dt);
        let mut indices = Vec::new();
        for k in 0..=s {
            indices.push(candidates.len());
            candidates.push(Candidate {
                coordinate: red_name(c),
                kind: CoordinateKind::Multiplicative,
                order: k,
                integrand: AlgElem::from_base(d.clone()),
            });
            d = d.derive(Derivation::Dt);
        }
        torus_chain.insert(c, chains.len());
        chains.push(Chain {
            name: red_name(c),
            kind: CoordinateKind::Multiplicative,
            indices,
        });
    }
    for (l, h) in integrands.iter().enumerate() {
        let nm = name("b", l, integrands.len());
        let mut d = h.clone();
        let mut indices = Vec::new();
        for j in 0..=s + 1 {
            indices.push(candidates.len());
            candidates.push(Candidate {
                coordinate: nm.clone(),
                kind: CoordinateKind::Additive,
                order: j,
                integrand: d.clone(),
            });
            d = d.derive(Derivation::Dt);
        }
        chains.push(Chain {
            name: nm,
            kind: CoordinateKind::Additive,
            indices,
        });
    }

    let width = candidates.len();
    let integrals: Vec<AlgElem> = candidates.iter().map(|c| c.integrand.clone()).collect();
    let rels = constants_relations(&integrals).map_err(|e| GaloisError::Unsupported(e.to_string()))?;
    let rows: Vec<Vec<RatT>> = rels.iter().map(|r| r.coeffs.clone()).collect();
    let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(rows.clone()).rank() };
    let predicted = g0.torus_dim + width - rank;
    if predicted != next.dim {
        return Err(GaloisError::Unsupported(format!(
            "chain relations predict dimension {predicted} but the level {sn} group has dimension {}",
            next.dim
        )));
    }

    // Relations implied by the exponent lattice, one per chain order.
    let mut known: Vec<Vec<RatT>> = Vec::new();
    let mut finite = Vec::new();
    let mut monomial = Vec::new();
    for b in &g0.lattice.basis {
        let support: Vec<usize> = (0..b.len())
            .filter(|&c| !b[c].is_zero() && g0.reductive[c].kind != ReductiveKind::Trivial)
            .collect();
        match support.as_slice() {
            [] => {}
            [c] if matches!(g0.reductive[*c].kind, ReductiveKind::FiniteCyclic(_)) => finite.push(FiniteConstraint {
                coordinate: red_name(*c),
                order: b[*c].abs(),
            }),
            _ => monomial.push(MonomialRelation {
                exponents: support.iter().map(|&c| (red_name(c), b[c].clone())).collect(),
            }),
        }
        for k in 0..=s {
            let mut v = vec![RatT::zero(); width];
            let mut any = false;
            for (&c, &ch) in &torus_chain {
                if !b[c].is_zero() {
                    v[chains[ch].indices[k]] = RatT::from_rational(&Q::from_integer(b[c].clone()));
                    any = true;
                }
            }
            if any {
                known.push(v);
            }
        }
    }

    let mut multiplicative = Vec::new();
    let mut additive = Vec::new();
    for ch in &chains {
        let vs = supported_on(&rows, &ch.indices, width);
        let op = normalize_operator(&minimal_operator(&vs, &ch.indices));
        known.extend(vs);
        let oc = OperatorConstraint {
            coordinate: ch.name.clone(),
            kind: ch.kind,
            operator: op,
        };
        match ch.kind {
            CoordinateKind::Multiplicative => multiplicative.push(oc),
            CoordinateKind::Additive => additive.push(oc),
        }
    }
    let mut linear = Vec::new();
    for r in &rows {
        if in_span(&known, r) {
            continue;
        }
        known.push(r.clone());
        let p = primitive_form(r);
        let terms = p
            .into_iter()
            .zip(&candidates)
            .filter(|(c, _)| !c.is_zero())
            .map(|(coeff, cand)| LinearTerm {
                coordinate: cand.coordinate.clone(),
                kind: cand.kind,
                order: cand.order,
                coeff,
            })
            .collect();
        linear.push(LinearRelation { terms });
    }

    Ok(PPVPresentation {
        level: s,
        dim: next.dim,
        multiplicative,
        additive,
        finite,
        monomial,
        linear,
        candidates,
        relations: rels
            .into_iter()
            .map(|r| ChainRelation {
                coeffs: r.coeffs,
                witness: r.witness,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::pv_group_at;
    use crate::linsys::{DiffSystem, ProlongationKind};
    use crate::qtx::{t_func, x_func};
    use crate::RatFunc;
    use std::sync::Arc;

    fn sys(rows: Vec<Vec<RatFunc>>) -> Arc<DiffSystem> {
        Arc::new(DiffSystem::from_base(&Matrix::from_rows(rows)))
    }

    fn at(a: &Arc<DiffSystem>, s: usize) -> GroupPresentation {
        pv_group_at(a, s, ProlongationKind::Jet).unwrap()
    }

    fn tp(c: &[i64]) -> PolyT {
        PolyT::new(c.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    #[test]
    fn ex1_log_derivative_is_constant_in_t() {
        let a = sys(vec![vec![&t_func() / &x_func()]]);
        let (g1, g2) = (at(&a, 1), at(&a, 2));
        assert!(!injective_projection(&at(&a, 0), &g1).unwrap());
        assert!(matches!(ppv_presentation(&at(&a, 0), &g1), Err(GaloisError::PrematureRewrite)));
        let p = ppv_presentation(&g1, &g2).unwrap();
        assert!(p.verify());
        assert_eq!(p.multiplicative[0].operator, vec![tp(&[]), tp(&[1])]);
        assert_eq!(p.multiplicative[0].expanded().render("g"), "g*Dt^2(g) - Dt(g)^2");
    }

    #[test]
    fn ex2_constraints() {
        let x = x_func();
        let b = &(&t_func() / &x) + &(&RatFunc::one() / &(&x + &RatFunc::one()));
        let a = sys(vec![vec![RatFunc::one(), b], vec![RatFunc::zero(), RatFunc::one()]]);
        let p = ppv_presentation(&at(&a, 1), &at(&a, 2)).unwrap();
        assert_eq!(p.multiplicative[0].operator, vec![tp(&[1])]);
        assert_eq!(p.additive[0].operator, vec![tp(&[]), tp(&[]), tp(&[1])]);
        assert!(p.linear.is_empty());
    }

    #[test]
    fn picard_fuchs_operator() {
        let a = crate::galois::oracle::tests::pf();
        let p = ppv_presentation(&at(&a, 1), &at(&a, 2)).unwrap();
        assert!(p.verify());
        assert_eq!(p.finite, vec![FiniteConstraint { coordinate: "g".into(), order: BigInt::from(2) }]);
        assert_eq!(p.additive[0].operator, vec![tp(&[1]), tp(&[-4, 8]), tp(&[0, -4, 4])]);
    }

    #[test]
    fn lattice_relation_between_tori() {
        let r = &t_func() / &x_func();
        let a = sys(vec![vec![r.clone(), RatFunc::zero()], vec![RatFunc::zero(), &RatFunc::from_i64(2) * &r]]);
        let p = ppv_presentation(&at(&a, 1), &at(&a, 2)).unwrap();
        assert_eq!(p.monomial.len(), 1);
        assert!(p.linear.is_empty());
        assert_eq!(p.multiplicative.len(), 2);
    }

    #[test]
    fn normalization_is_primitive() {
        let c = vec![RatT::from_poly(tp(&[1])), &RatT::from_poly(tp(&[-2, 4])) * &RatT::constant(crate::field::q(1, 2)), RatT::zero()];
        assert_eq!(normalize_operator(&c), vec![tp(&[1]), tp(&[-1, 2])]);
        let neg: Vec<RatT> = c.iter().map(|x| -x.clone()).collect();
        assert_eq!(normalize_operator(&neg), vec![tp(&[1]), tp(&[-1, 2])]);
    }
}

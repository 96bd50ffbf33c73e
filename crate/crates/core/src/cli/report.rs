//! Command dispatch and the JSON / text reports.

use num_traits::Zero;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::sync::Arc;

use super::document::InputDocument;
use super::InputError;
use crate::field::Field;
use crate::galois::{
    algorithm1, algorithm2, classify, pv_group_triangular, Algorithm1Outcome, Algorithm2Outcome, CoordinateKind,
    GaloisError, Generator, GroupPresentation, Obstruction, OperatorConstraint, PPVPresentation, ReductiveKind,
    SupportedClass, DEFAULT_MAX_S,
};
use crate::galois::drivers::integrability_defect;
use crate::linsys::{total_prolongation, ProlongationKind};
use crate::matrix::Matrix;
use crate::ratsol::{algebraic_integral, constants_relations, rational_integral, IntegralCertificate, Residue, SearchBounds};
use crate::{AlgElem, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Prolong,
    Pv,
    Ppv,
    ConstantQuotient,
    RationalIntegral,
    Relations,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Prolong => "prolong",
            Command::Pv => "pv",
            Command::Ppv => "ppv",
            Command::ConstantQuotient => "constant-quotient",
            Command::RationalIntegral => "rational-integral",
            Command::Relations => "relations",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Command::Prolong,
            Command::Pv,
            Command::Ppv,
            Command::ConstantQuotient,
            Command::RationalIntegral,
            Command::Relations,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

/// Command line overrides of document options.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub max_s: Option<usize>,
    pub prolongation: Option<ProlongationKind>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    /// 0 for decided outcomes, 2 for unsupported or undecided ones.
    pub exit_code: i32,
}

struct Body {
    outcome: &'static str,
    decided: bool,
    fields: serde_json::Map<String, Value>,
    text: Vec<String>,
}

impl Body {
    fn new(outcome: &'static str, decided: bool) -> Self {
        Body {
            outcome,
            decided,
            fields: serde_json::Map::new(),
            text: vec![format!("outcome: {outcome}")],
        }
    }

    fn set(&mut self, k: &str, v: Value) {
        self.fields.insert(k.to_string(), v);
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }
}

fn kind_name(k: ProlongationKind) -> &'static str {
    match k {
        ProlongationKind::Jet => "jet",
        ProlongationKind::Iterated => "iterated",
    }
}

fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|i| json!(m.row(i).iter().map(|e| e.render()).collect::<Vec<_>>())).collect())
}

fn residues_json(rs: &[Residue]) -> Value {
    Value::Array(
        rs.iter()
            .map(|r| json!({"factor": r.factor.render(), "residue": r.value.render(), "irreducible": r.irreducible}))
            .collect(),
    )
}

fn integral_json<E: Field>(c: &IntegralCertificate<E>) -> Value {
    match c {
        IntegralCertificate::Exact { antiderivative } => json!({"verdict": "exact", "antiderivative": antiderivative.render()}),
        IntegralCertificate::Obstructed { residues, odd } => {
            let mut v = json!({"verdict": "obstructed", "residues": residues_json(residues)});
            if let Some(o) = odd {
                v["odd"] = json!({"denominator": o.denominator.render(), "numerator_degree_bound": o.numerator_degree_bound});
            }
            v
        }
    }
}

fn bounds_json(b: &SearchBounds) -> Value {
    json!({"denominator": b.denominator.render(), "numerator_degree": b.numerator_degree})
}

pub fn group_json(g: &GroupPresentation) -> Value {
    let reductive: Vec<Value> = g
        .reductive
        .iter()
        .map(|c| {
            let (kind, order) = match &c.kind {
                ReductiveKind::FullTorus => ("full_torus", None),
                ReductiveKind::FiniteCyclic(n) => ("finite_cyclic", Some(n.to_string())),
                ReductiveKind::Trivial => ("trivial", None),
            };
            let mut v = json!({"positions": c.positions, "weight": c.weight.render(), "kind": kind});
            if let Some(o) = order {
                v["order"] = json!(o);
            }
            v
        })
        .collect();
    let basis: Vec<Vec<String>> = g.lattice.basis.iter().map(|b| b.iter().map(|n| n.to_string()).collect()).collect();
    let gens: Vec<Value> = g
        .unipotent
        .generators
        .iter()
        .map(|gen| match gen {
            Generator::Primitive { integrand } => json!({"type": "primitive", "integrand": integrand.render()}),
            Generator::Twisted { weight, inhomogeneous } => {
                json!({"type": "twisted", "weight": weight.render(), "inhomogeneous": inhomogeneous.render()})
            }
        })
        .collect();
    json!({
        "level": g.level(),
        "dim": g.dim,
        "torus_dim": g.torus_dim,
        "unipotent_dim": g.unipotent_dim(),
        "component_count": g.component_count.to_string(),
        "reductive": reductive,
        "lattice": {
            "basis": basis,
            "rank": g.lattice.rank,
            "torsion": g.lattice.torsion.to_string(),
            "complete": g.lattice.complete,
        },
        "unipotent_generators": gens,
        "verified": g.verify(),
    })
}

fn group_line(g: &GroupPresentation) -> String {
    format!(
        "level {}: dim {} (torus {}, unipotent {}), components {}",
        g.level().map(|l| l.to_string()).unwrap_or_else(|| "base".into()),
        g.dim,
        g.torus_dim,
        g.unipotent_dim(),
        g.component_count
    )
}

fn operator_json(c: &OperatorConstraint) -> Value {
    let ty = match c.kind {
        CoordinateKind::Multiplicative => "mult_operator",
        CoordinateKind::Additive => "add_operator",
    };
    let expanded = c.expanded();
    json!({
        "coordinate": c.coordinate,
        "type": ty,
        "operator": c.operator.iter().map(|p| p.render()).collect::<Vec<_>>(),
        "equation": c.render(),
        "expanded": format!("{} = 0", expanded.render(&c.coordinate)),
    })
}

fn constraints_json(p: &PPVPresentation) -> Value {
    let mut out: Vec<Value> = p.multiplicative.iter().chain(&p.additive).map(operator_json).collect();
    for f in &p.finite {
        out.push(json!({
            "coordinate": f.coordinate,
            "type": "finite",
            "order": f.order.to_string(),
            "equation": format!("{}^{} = 1", f.coordinate, f.order),
        }));
    }
    for m in &p.monomial {
        out.push(json!({
            "type": "monomial",
            "exponents": m.exponents.iter().map(|(g, n)| json!({"coordinate": g, "exponent": n.to_string()})).collect::<Vec<_>>(),
        }));
    }
    for l in &p.linear {
        out.push(json!({
            "type": "linear",
            "terms": l.terms.iter().map(|t| json!({
                "coordinate": t.coordinate,
                "kind": if t.kind == CoordinateKind::Multiplicative { "mult" } else { "add" },
                "order": t.order,
                "coefficient": t.coeff.render(),
            })).collect::<Vec<_>>(),
            "equation": l.render(),
        }));
    }
    Value::Array(out)
}

fn ppv_certificate(p: &PPVPresentation) -> Value {
    json!({
        "candidates": p.candidates.iter().map(|c| json!({
            "coordinate": c.coordinate,
            "order": c.order,
            "integrand": c.integrand.render(),
        })).collect::<Vec<_>>(),
        "relations": p.relations.iter().map(|r| json!({
            "coefficients": r.coeffs.iter().map(|c| c.render()).collect::<Vec<_>>(),
            "witness": r.witness.render(),
        })).collect::<Vec<_>>(),
        "verified": p.verify(),
    })
}

fn ppv(doc: &InputDocument, opts: &Options) -> Result<Body, InputError> {
    let sys = Arc::new(doc.system()?);
    let max_s = opts.max_s.or(doc.max_s).unwrap_or(DEFAULT_MAX_S);
    let kind = opts.prolongation.or(doc.prolongation).unwrap_or(ProlongationKind::Jet);
    let outcome = match algorithm1(&sys, max_s, kind) {
        Ok(o) => o,
        Err(GaloisError::InvalidBound) => return Err(InputError::Document("max_s must be at least 1".into())),
        Err(e) => {
            let mut b = Body::new("unsupported", false);
            b.set("reason", json!(e.to_string()));
            b.line(e.to_string());
            return Ok(b);
        }
    };
    let traj: Vec<Value> = outcome.trajectory().iter().map(group_json).collect();
    let mut body = match &outcome {
        Algorithm1Outcome::Halted { level, presentation, .. } => {
            let mut b = Body::new("halted", true);
            b.set("halting_level", json!(level));
            b.set("dim", json!(presentation.dim));
            b.set("constraints", constraints_json(presentation));
            b.set("certificate", ppv_certificate(presentation));
            b.line(format!("halting level: {level}"));
            b.line(format!("projection from level {} to level {level} is injective", level + 1));
            for l in presentation.render_lines() {
                b.line(format!("  {l}"));
            }
            for c in &presentation.multiplicative {
                if !c.operator.is_empty() {
                    b.line(format!("  expanded: {} = 0", c.expanded().render(&c.coordinate)));
                }
            }
            b
        }
        Algorithm1Outcome::NotHalted { max_s, .. } => {
            let mut b = Body::new("not_halted", false);
            b.set("max_s", json!(max_s));
            b.line(format!("no injective projection up to level {max_s}"));
            b
        }
        Algorithm1Outcome::Unsupported { level, reason, .. } => {
            let mut b = Body::new("unsupported", false);
            b.set("level", json!(level));
            b.set("reason", json!(reason));
            b.line(format!("unsupported at level {level}: {reason}"));
            b
        }
    };
    body.line("trajectory:");
    for g in outcome.trajectory() {
        body.line(format!("  {}", group_line(g)));
    }
    body.set("prolongation", json!(kind_name(kind)));
    body.set("trajectory", Value::Array(traj));
    Ok(body)
}

fn constant_quotient(doc: &InputDocument) -> Result<Body, InputError> {
    let sys = doc.system()?;
    Ok(match algorithm2(&sys) {
        Algorithm2Outcome::Constant { c } => {
            let mut b = Body::new("constant", true);
            let bm = sys.base_matrix().expect("constant outcome needs base entries");
            let blockdiag = Matrix::from_fn(bm.rows(), bm.cols(), |i, j| {
                if c[(i, j)].is_zero() && !same_block(&sys, i, j) {
                    RatFunc::zero()
                } else {
                    bm[(i, j)].clone()
                }
            });
            let verified = integrability_defect(&blockdiag, &c).is_zero();
            let cj = if c.is_zero() { json!("0") } else { matrix_json(&c) };
            b.set("verdict", json!("constant"));
            b.set("certificate", json!({"C": cj, "verified": verified}));
            b.line(format!("C = {}", if c.is_zero() { "0".to_string() } else { cj.to_string() }));
            b
        }
        Algorithm2Outcome::NotConstant { obstruction } => {
            let mut b = Body::new("not_constant", true);
            b.set("verdict", json!("not_constant"));
            let ob = match &obstruction {
                Obstruction::Integral { block, certificate } => {
                    let mut v = integral_json(certificate);
                    v["block"] = json!(block);
                    v["kind"] = json!("integral");
                    if let IntegralCertificate::Obstructed { residues, .. } = certificate {
                        for r in residues {
                            b.line(format!("residue {} at factor {}", r.value.render(), r.factor.render()));
                        }
                    }
                    v
                }
                Obstruction::EmptySearch { block, bounds } => {
                    b.line(format!("no rational solution for block {block}"));
                    json!({"kind": "empty_search", "block": block, "bounds": bounds_json(bounds)})
                }
            };
            b.set("certificate", json!({"obstruction": ob}));
            b
        }
        Algorithm2Outcome::NeedsFactorization { block, reason } => {
            let mut b = Body::new("needs_factorization", false);
            b.set("verdict", json!("needs_factorization"));
            b.set("block", json!(block));
            b.set("reason", json!(reason));
            b.line(format!("block {block}: {reason}"));
            b
        }
    })
}

fn same_block(sys: &crate::linsys::DiffSystem, i: usize, j: usize) -> bool {
    if sys.matrix().is_upper_triangular() {
        return i == j;
    }
    match sys.shape() {
        Some(s) => s.block_of(i) == s.block_of(j),
        None => i == j,
    }
}

fn rational_integral_cmd(doc: &InputDocument) -> Result<Body, InputError> {
    let g = doc
        .integrand
        .clone()
        .ok_or_else(|| InputError::Document("missing key 'integrand'".into()))?;
    let v = if g.is_base() {
        integral_json(&rational_integral(g.even()))
    } else {
        integral_json(&algebraic_integral(&g))
    };
    let mut b = Body::new(if v["verdict"] == "exact" { "exact" } else { "obstructed" }, true);
    if let Some(a) = v.get("antiderivative") {
        b.line(format!("antiderivative: {}", a.as_str().unwrap_or_default()));
    }
    for r in v.get("residues").and_then(|r| r.as_array()).into_iter().flatten() {
        b.line(format!("residue {} at factor {}", r["residue"].as_str().unwrap_or_default(), r["factor"].as_str().unwrap_or_default()));
    }
    if let Value::Object(m) = v {
        for (k, x) in m {
            b.set(&k, x);
        }
    }
    Ok(b)
}

fn relations_cmd(doc: &InputDocument) -> Result<Body, InputError> {
    if doc.integrands.is_empty() {
        return Err(InputError::Document("missing key 'integrands'".into()));
    }
    let rels = constants_relations(&doc.integrands).map_err(|e| InputError::Document(e.to_string()))?;
    let mut b = Body::new("relations", true);
    b.set("dimension", json!(rels.len()));
    let mut out = Vec::new();
    for r in &rels {
        let mut sum = AlgElem::zero();
        for (c, g) in r.coeffs.iter().zip(&doc.integrands) {
            sum = &sum + &(&AlgElem::from_base(crate::qtx::from_rat(c.clone())) * g);
        }
        let verified = sum == crate::DiffField::derive(&r.witness, crate::Derivation::Dx);
        let coeffs: Vec<String> = r.coeffs.iter().map(|c| c.render()).collect();
        b.line(format!("({}) with witness {}", coeffs.join(", "), r.witness.render()));
        out.push(json!({"coefficients": coeffs, "witness": r.witness.render(), "verified": verified}));
    }
    b.set("relations", Value::Array(out));
    Ok(b)
}

fn prolong(doc: &InputDocument, opts: &Options) -> Result<Body, InputError> {
    let sys = doc.system()?;
    let s = opts.max_s.or(doc.max_s).unwrap_or(1);
    let kind = opts.prolongation.or(doc.prolongation).unwrap_or(ProlongationKind::Jet);
    let p = total_prolongation(&sys, s, kind);
    let mut b = Body::new("prolonged", true);
    b.set("level", json!(s));
    b.set("prolongation", json!(kind_name(kind)));
    b.set("matrix", matrix_json(&p.matrix));
    for i in 0..p.matrix.rows() {
        b.line(format!("[{}]", p.matrix.row(i).iter().map(|e| e.render()).collect::<Vec<_>>().join(", ")));
    }
    Ok(b)
}

fn pv(doc: &InputDocument) -> Result<Body, InputError> {
    let sys = doc.system()?;
    let class = classify(&sys);
    if let SupportedClass::Unsupported(why) = &class {
        let mut b = Body::new("unsupported", false);
        b.set("reason", json!(why));
        b.line(why.clone());
        return Ok(b);
    }
    Ok(match pv_group_triangular(&sys) {
        Ok(g) => {
            let mut b = Body::new("group", true);
            b.set("class", json!(format!("{class:?}")));
            b.line(group_line(&g));
            b.set("group", group_json(&g));
            b
        }
        Err(e) => {
            let mut b = Body::new("unsupported", false);
            b.set("reason", json!(e.to_string()));
            b.line(e.to_string());
            b
        }
    })
}

pub fn input_hash(input: &str) -> String {
    hex::encode(Sha256::digest(input.as_bytes()))
}

/// Runs `command` on the document text `input`.
pub fn run(command: Command, input: &str, opts: &Options) -> Result<Report, InputError> {
    let doc = InputDocument::parse(input)?;
    let body = match command {
        Command::Prolong => prolong(&doc, opts)?,
        Command::Pv => pv(&doc)?,
        Command::Ppv => ppv(&doc, opts)?,
        Command::ConstantQuotient => constant_quotient(&doc)?,
        Command::RationalIntegral => rational_integral_cmd(&doc)?,
        Command::Relations => relations_cmd(&doc)?,
    };
    let mut json = serde_json::Map::new();
    json.insert("command".into(), json!(command.name()));
    json.insert("input_hash".into(), json!(input_hash(input)));
    json.insert("outcome".into(), json!(body.outcome));
    let diagnostics = body.text.clone();
    for (k, v) in body.fields {
        json.insert(k, v);
    }
    json.insert("diagnostics".into(), json!(diagnostics));
    Ok(Report {
        json: Value::Object(json),
        text: body.text.join("\n"),
        exit_code: if body.decided { 0 } else { 2 },
    })
}

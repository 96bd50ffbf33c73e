//! TOML input documents.
//!
//! ```toml
//! matrix = [["t/x"]]
//! extension = "z^2 = x*(x-1)*(x-t)"   # optional
//! shape = [{ size = 2, irreducible = true }]   # optional
//! max_s = 3                            # optional
//! prolongation = "jet"                 # or "iterated"
//! integrands = ["1/z", "Dt(1/z)"]      # for `relations`
//! integrand = "1/x"                    # for `rational-integral`
//! ```

use serde::Deserialize;
use std::sync::Arc;

use super::expr::{parse_expr, parse_extension};
use super::InputError;
use crate::linsys::{Block, DiffSystem, ProlongationKind, Shape};
use crate::matrix::Matrix;
use crate::{AlgElem, RatFunc};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    size: usize,
    #[serde(default)]
    irreducible: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    matrix: Option<Vec<Vec<String>>>,
    extension: Option<String>,
    shape: Option<Vec<RawBlock>>,
    max_s: Option<usize>,
    prolongation: Option<String>,
    integrands: Option<Vec<String>>,
    integrand: Option<String>,
}

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub matrix: Option<Matrix<AlgElem>>,
    pub extension: Option<Arc<RatFunc>>,
    pub shape: Option<Shape>,
    pub max_s: Option<usize>,
    pub prolongation: Option<ProlongationKind>,
    pub integrands: Vec<AlgElem>,
    pub integrand: Option<AlgElem>,
}

fn element(s: &str, ext: Option<&Arc<RatFunc>>, field: &str) -> Result<AlgElem, InputError> {
    parse_expr(s).and_then(|e| e.eval(ext)).map_err(|e| e.within(field))
}

pub fn parse_prolongation(s: &str) -> Result<ProlongationKind, InputError> {
    match s {
        "jet" => Ok(ProlongationKind::Jet),
        "iterated" => Ok(ProlongationKind::Iterated),
        _ => Err(InputError::Document(format!("unknown prolongation kind '{s}'"))),
    }
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let raw: RawDocument = toml::from_str(text).map_err(|e| InputError::Document(e.to_string()))?;
        let extension = match &raw.extension {
            Some(s) => Some(parse_extension(s).map_err(|e| e.within("extension"))?),
            None => None,
        };
        let ext = extension.as_ref();
        let matrix = match &raw.matrix {
            None => None,
            Some(rows) => {
                let n = rows.len();
                if n == 0 || rows.iter().any(|r| r.len() != n) {
                    return Err(InputError::Document("matrix must be square and nonempty".into()));
                }
                let mut out = Vec::with_capacity(n);
                for (i, r) in rows.iter().enumerate() {
                    let mut row = Vec::with_capacity(n);
                    for (j, s) in r.iter().enumerate() {
                        row.push(element(s, ext, &format!("matrix[{i}][{j}]"))?);
                    }
                    out.push(row);
                }
                Some(Matrix::from_rows(out))
            }
        };
        let shape = raw.shape.map(|bs| Shape {
            blocks: bs
                .into_iter()
                .map(|b| Block {
                    size: b.size,
                    irreducible: b.irreducible,
                })
                .collect(),
        });
        let prolongation = raw.prolongation.as_deref().map(parse_prolongation).transpose()?;
        let integrands = raw
            .integrands
            .unwrap_or_default()
            .iter()
            .enumerate()
            .map(|(i, s)| element(s, ext, &format!("integrands[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let integrand = raw.integrand.as_deref().map(|s| element(s, ext, "integrand")).transpose()?;
        Ok(InputDocument {
            matrix,
            extension,
            shape,
            max_s: raw.max_s,
            prolongation,
            integrands,
            integrand,
        })
    }

    /// The system of the document, validated against its shape.
    pub fn system(&self) -> Result<DiffSystem, InputError> {
        let m = self
            .matrix
            .clone()
            .ok_or_else(|| InputError::Document("missing key 'matrix'".into()))?;
        DiffSystem::new(m, self.shape.clone(), self.extension.clone()).map_err(|e| InputError::Document(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picard_fuchs_document() {
        let doc = InputDocument::parse(
            r#"
            matrix = [["0", "1"], ["0", "-1/2*(1/x + 1/(x-1) + 1/(x-t))"]]
            extension = "z^2 = x*(x-1)*(x-t)"
            integrands = ["1/z", "Dt(1/z)", "Dt(Dt(1/z))"]
            "#,
        )
        .unwrap();
        assert_eq!(doc.integrands.len(), 3);
        assert_eq!(doc.system().unwrap().dim(), 2);
    }

    #[test]
    fn errors_carry_field() {
        let err = InputDocument::parse(r#"matrix = [["x^^2"]]"#).unwrap_err();
        match err {
            InputError::Syntax { column, message, .. } => {
                assert_eq!(column, 3);
                assert!(message.contains("matrix[0][0]"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            InputDocument::parse(r#"matrix = [["z"]]"#).unwrap_err(),
            InputError::UndeclaredExtension
        );
        assert!(InputDocument::parse(r#"matrix = [["1", "2"]]"#).is_err());
        assert!(InputDocument::parse("colour = 3").is_err());
    }
}

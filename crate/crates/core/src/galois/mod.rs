//! Picard–Vessiot groups of prolongations and the parameterized drivers.

pub mod drivers;
pub mod oracle;
pub mod ppv;
pub mod presentation;
pub mod ring;

pub use drivers::{algorithm1, algorithm2, Algorithm1Outcome, Algorithm2Outcome, Obstruction, DEFAULT_MAX_S};
pub use oracle::{classify, pv_group_at, pv_group_rank1, pv_group_triangular, SupportedClass};
pub use ppv::{injective_projection, normalize_operator, ppv_presentation, CoordinateKind, DiffPolynomial, OperatorConstraint, PPVPresentation};
pub use presentation::{EntryCertificate, GroupPresentation, Provenance, ReductiveKind, TorusCoordinate, UnipotentPart};
pub use ring::{GPoly, Generator};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaloisError {
    #[error("system outside the supported class: {0}")]
    NotInSupportedClass(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("presentations are not comparable: {0}")]
    IncomparablePresentations(String),
    #[error("projection not known to be injective")]
    PrematureRewrite,
    #[error("the halting bound must be at least 1")]
    InvalidBound,
}

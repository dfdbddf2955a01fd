//! Exact combinatorics of affine Weyl groups and the algebra built on them:
//! Kazhdan-Lusztig bases, moment graphs, sheaves on moment graphs,
//! Braden-MacPherson sheaves, and the combinatorial category of
//! Andersen-Jantzen-Soergel. All arithmetic is exact, over `Q` or `F_p`.

pub mod ajs;
pub mod bm;
pub mod field;
pub mod gsheaf;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod rootsys;
pub mod structure;
pub mod weyl;

pub use field::{Field, FieldSpec, Fp, PrimeField, Rationals, Scalar};
pub use laurent::LaurentPoly;
pub use rootsys::{AffineRoot, AffineWeight, RootDatum};
pub use weyl::{AffineWeylElem, Order, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    BadField(String),
    #[error("unknown root system type `{0}`")]
    UnknownType(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("the zero affine root has no normalization")]
    ZeroRoot,
    #[error("characteristic 2 is not allowed here")]
    CharTwo,
    #[error("GKM condition fails over {field}: {detail}")]
    Gkm { field: String, detail: String },
    #[error("new generators appear in degree {degree}, too close to the cutoff {cutoff}")]
    CutoffInstability { degree: i32, cutoff: i32 },
    #[error("module is not free: {0}")]
    NotFree(String),
    #[error("exact division failed: {0}")]
    Division(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/weyl.md")]
    mod weyl {}
    #[doc = include_str!("../../../book/src/hecke.md")]
    mod hecke {}
    #[doc = include_str!("../../../book/src/sheaves.md")]
    mod sheaves {}
    #[doc = include_str!("../../../book/src/bm.md")]
    mod bm {}
    #[doc = include_str!("../../../book/src/ajs.md")]
    mod ajs {}
}

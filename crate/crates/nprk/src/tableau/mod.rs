//! Method coefficient representations, the built-in catalog, and the
//! structural transformations between the full tensor form, sequentially
//! coupled tableaux, PRK pairs, and underlying classical RK methods.
//!
//! All tableau indices are 1-based in documentation and in the serialized
//! form; internal storage is 0-based where convenient.

mod catalog;
mod json;
mod transform;
mod types;

pub use catalog::{catalog, find};
pub use json::{from_json, to_json};
pub use transform::{
    classify_sparsity, evaluation_prk_pair, from_sirk, reduced_underlying, to_sequential,
    underlying_pair,
};
pub use types::{
    CatalogEntry, CatalogMethod, NprkMethod, PrkPair, RkTableau, SequentialMethod, SparsityClass,
    StageDiag, StageRow, TensorEntry,
};

//! Cluster-tendency assessment.
//!
//! The core pipeline computes Euclidean dissimilarities ([`distance`]),
//! reorders them with Prim's minimum spanning tree ([`vat`]) and renders the
//! result as a grayscale image ([`render`]). Each compute stage exists in a
//! readable naive form and an optimized form that must agree with it exactly.
//!
//! Around it sit the Hopkins statistic ([`hopkins`]), seeded synthetic data
//! ([`datagen`]), CSV I/O ([`ingest`]), reference clustering plus ARI
//! ([`clustering`]) and a timing harness ([`bench`]).

pub mod bench;
pub mod clustering;
pub mod datagen;
pub mod distance;
pub mod error;
pub mod flat;
pub mod hopkins;
pub mod ingest;
pub mod matrix;
pub mod render;
pub mod rng;
pub mod vat;

pub use error::{Error, Result};
pub use matrix::{permutation_apply, DataMatrix, DissimilarityMatrix, Permutation, VatResult};
pub use rng::Rng;
pub use vat::Variant;

//! Bug prediction from flattened syntax trees.
//!
//! The pipeline runs in five stages, one module each:
//!
//! * [`astflat`] turns Java-subset sources (or serialized trees from another
//!   front-end) into token sequences with scope-exit markers.
//! * [`embed`] trains PV-DM / PV-DBOW paragraph vectors over those sequences.
//! * [`dataset`] joins vectors, precomputed code metrics and bug labels into
//!   feature tables, and holds the standardizer and upsampler.
//! * [`learn`] is the classifier roster behind one fit/predict contract.
//! * [`eval`] runs stratified cross-validation, the embedding grid and the
//!   label-permutation test.
//!
//! [`cli`] wires everything into the `bugvec` binary.

pub mod astflat;
pub mod cli;
pub mod dataset;
pub mod embed;
pub mod eval;
pub mod learn;
pub mod matrix;
pub mod seed;

pub use matrix::Matrix;

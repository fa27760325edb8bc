//! Ground-truth oracle: explicit small matrix groups, exact character
//! tables (Dixon-Schur), Gelfand-Graev characters, and verification of
//! every label-side prediction against them.

#![allow(clippy::needless_range_loop)]

pub mod auto;
pub mod cache;
pub mod classes;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod gelfand;
pub mod group;
pub mod matching;
pub mod matrix;
pub mod modular;
pub mod table;
pub mod verify;

pub use cache::OracleCache;
pub use classes::ClassData;
pub use error::{OracleError, OracleResult};
pub use field::FieldTable;
pub use group::{GroupKind, MatrixGroup};
pub use matching::{Check, GroupData, MatchOutcome, Pipeline};
pub use table::{character_table, CharacterTable};
pub use verify::{run_pipeline, run_suite, Suite, VerifyReport};

/// Initialize the rayon worker pool (best effort; may only run once per
/// process).
pub fn init_threads(threads: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

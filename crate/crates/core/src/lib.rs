//! Evaluation codes from configurations of affine lines over prime fields.

pub mod bounds;
pub mod code;
pub mod codefile;
pub mod decoder;
pub mod error;
pub mod field;
pub mod geometry;
pub mod simulate;

pub use code::{CodeInstance, CodeParameters, Codeword, CoefficientVector, MonomialBasis};
pub use codefile::{format_vector, parse_vector, CodeFile, Construction};
pub use decoder::{
    collision_rank, count_effective_sets, decode, enumerate_effective_sets, sample_effective_set,
    solve_minor, CollisionRank, DecodeReport, EffectiveSet, ErrorVector, LineAssignment, Outcome,
    Strategy,
};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec, Matrix};
pub use geometry::{Configuration, Line, Point, PositionDefect};
pub use simulate::{corrupt, simulate, Simulation, SimulationRow, TrialRecord};

/// Work ceiling for exhaustive procedures: effective-set enumeration,
/// tableau subset counting, and the brute-force distance oracle.
pub const ENUMERATION_GUARD: u128 = 10_000_000;

//! Computable Mathias conditions, the extension order, and transformers that
//! meet the dense families used for canonical immunity and block avoidance.

pub mod condition;
pub mod deh;
pub mod generic;
pub mod set;

pub use condition::{
    extends, meet_avoidance, meet_size, thin_for_numbering, thinning_violations, Condition,
    Extension, ExtensionFailure,
};
pub use deh::{meet_d_eh, search_program, FixedPointWitness, MeetOutcome};
pub use generic::{build_generic, full_schedule, omega_start, ChainLink, GenericRun, Transformer};
pub use set::ComputableSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MathiasError {
    #[error("program is not in the total tier")]
    NotTotal,
    #[error("program is too deep to evaluate or encode")]
    TooDeep,
    #[error("enumerated value left the u64 range")]
    Overflow,
    #[error("enumeration does not increase at index {n}")]
    NotIncreasing { n: u64 },
    #[error("stem maximum {stem_max} is not below reservoir minimum {reservoir_min}")]
    StemAboveReservoir { stem_max: u64, reservoir_min: u64 },
    #[error("infinitude witness fails at element {n}")]
    InfinitudeWitness { n: u64 },
    #[error("step {step} ({name}) breaks the extension order: {reason}")]
    ExtensionViolated {
        step: usize,
        name: String,
        reason: String,
    },
    #[error("fixed-point domain disagrees with the native search at q = {q}; raise the verification budget")]
    FixedPointMismatch { q: u64 },
    #[error("malformed condition record {0:?}")]
    Parse(String),
}

//! A two-tier model of computable functions.
//!
//! The total tier (constants, projections, arithmetic and set primitives,
//! pairing, composition, primitive recursion, bounded conditionals, clocked
//! universal simulation) halts on every input. The partial tier adds
//! unbounded search, oracle queries and an unclocked universal function.
//! Every evaluation entry point takes an explicit step budget.

pub mod build;
pub mod codec;
pub mod eval;
pub mod library;
pub mod pairing;
pub mod program;
pub mod recursion;

pub use codec::ProgramCode;
pub use eval::{
    domain_bounded, eval_bounded, eval_oracle_bounded, eval_total, eval_total_u64, run, we_bounded,
    Halt, MachineError, OracleString, PartialOutcome, Run, StepBudget, TotalRun,
};
pub use pairing::{pair, unpair};
pub use program::{Nat, Op, Program};
pub use recursion::{fixed_point, smn, smn_program, FixedPoint};

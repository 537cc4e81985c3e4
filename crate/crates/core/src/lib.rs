//! Small Turing machines, Busy Beaver search, block-transformation
//! emulation between machines, and the asymptotic universality score
//! `Δ(x) = a·x / (a·x + 1)`.
//!
//! Module map:
//!
//! - [`machine`], [`simulate`], [`diagram`]: the `(n, k)` machine model,
//!   rule numbers, stepping and space-time diagrams.
//! - [`busy_beaver`]: Σ/S statistics, exhaustive search and the registry
//!   of known champions.
//! - [`transform`], [`emulation`]: block transformations ("compilers"),
//!   coarse-graining and the emulation search.
//! - [`scoring`]: Δ and group comparisons.
//! - [`behaviour`]: compression-length histograms, frontier rows and
//!   computed functions.
//! - [`harness`]: seeded experiment orchestration and result files.

pub mod behaviour;
pub mod busy_beaver;
pub mod diagram;
pub mod emulation;
mod error;
pub mod harness;
pub mod machine;
pub mod scoring;
pub mod seed;
pub mod simulate;
pub mod transform;

pub use diagram::{Outcome, SpaceTimeDiagram};
pub use error::{Error, Result};
pub use machine::{
    decode_rule, encode_rule, rule_space_size, sample_machines, Instruction, Move, State, Symbol, TuringMachine,
};
pub use simulate::{run, run_final, step, StepOutcome, TapeConfiguration, Topology};

//! Formal group laws, their module structures, and the constructions that
//! produce them.

mod honda;
mod law;
mod lubin_tate;
mod module;
mod solve;

pub use honda::{honda_group, honda_logarithm};
pub use law::{FormalGroupLaw, LawRecord, ASSOC_CHECK_DEGREE};
pub use lubin_tate::{lubin_tate_group, FrobeniusSeries};
pub use module::{base_change_unramified, unramified_embedding, ActionSource, Height, ModuleStructure, Scalar};
pub use solve::{commuting_series, floor_log, guard_digits, log_equation_series, IntegralLog, SolveOutcome};

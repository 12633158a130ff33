//! The Fenchel game `g(x, y) = ⟨x, y⟩ − f*(y)` played by two online
//! learners, with presets that reproduce classical first-order methods.

mod config;
mod dynamics;
mod error;
mod gap;
mod otob;
mod presets;
mod reference;

pub use config::{GameConfig, GradientSource, InitRule, Ordering, Payoff};
pub use dynamics::{run_dynamics, GameOutput, Problem, ShiftedObjective};
pub use error::EngineError;
pub use gap::equilibrium_gap;
pub use otob::online_to_batch;
pub use presets::{preset, Preset, PresetParams, PRESET_NAMES};
pub use reference::{reference_iterative, ReferenceRun, REFERENCE_NAMES};

//! Reductions from bounded-resource timed synthesis to untimed parity
//! games, and the lifting of the resulting controllers back to timed ones.

mod conditions;
mod controller;
mod enriched;
mod lift;
mod monitors;
mod solve;
mod spec;
mod transforms;

pub use conditions::{build_wdoubleprime, build_wprime, phi_inverse};
pub use controller::{parse_moves, simulate_controller, verify_controller, ConformStep, KMController, Rule};
pub use enriched::Enriched;
pub use lift::{complete_step, lift_controller, lift_step, lift_walk, CompleteState, LiftStep};
pub use monitors::{build_wi_monitors, build_wii_monitors, infinite_chain_monitor, Letter};
pub use solve::{constant_bound, solve_k, solve_km, Options, Solved};
pub use spec::GameSpec;
pub use transforms::{flagged, strict_monotonic_transform, zero_starting_transform, ZERO_MARK};

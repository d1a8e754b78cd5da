//! Timed automata with epsilon transitions, finite and Büchi acceptance.

mod automaton;
mod emptiness;
mod membership;
mod ops;
mod region_automaton;
mod simplify;
mod word;

pub use automaton::{Label, Mode, TimedAutomaton, Transition};
pub use emptiness::{instantiate_path, nta_emptiness, Witness};
pub use membership::{accepts_finite, accepts_finite_by_product, accepts_lasso};
pub use ops::{complement_dta, inverse_projection, is_deterministic, product, regionise, suffix_omega, union};
pub use region_automaton::{region_automaton, region_automaton_capped, RegionAutomaton};
pub use simplify::simplify;
pub use word::{TimedLasso, TimedWord};

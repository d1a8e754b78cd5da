//! Untimed automata over finite and infinite words, Büchi to parity
//! determinization and lasso membership.

mod degeneralize;
mod epsilon;
mod parity;
mod safra;
mod untimed;

pub use degeneralize::degeneralize;
pub use epsilon::remove_epsilon;
pub use parity::ParityAutomaton;
pub use safra::{determinize, DEFAULT_CAP};
pub use untimed::{LassoWord, UntimedAutomaton};

//! Timed automata, clock regions and bounded-resource synthesis of timed
//! controllers and separators.

pub mod dot;
pub mod error;
pub mod fixtures;
pub mod game;
mod graph;
pub mod omega;
pub mod rational;
pub mod regions;
pub mod separability;
pub mod synthesis;
pub mod timed;

pub use error::{Error, Result};
pub use rational::Rational;

//! Parity games, Zielonka's algorithm and Mealy controllers for untimed
//! synthesis.

mod arena;
mod mealy;
mod synth00;
mod zielonka;

pub use arena::{build_synthesis_arena, ParityGame, Player};
pub use mealy::MealyController;
pub use synth00::{controller_avoids, decide_00_synthesis, solve_untimed_game, UntimedGame};
pub use zielonka::{solve_parity, Solution};

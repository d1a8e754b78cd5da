//! Clocks, clock constraints, regions and fractional regions.

mod constraint;
mod fractional;
mod region;

pub use constraint::{Atom, ClockConstraint, ClockId, Cmp};
pub use fractional::{agrees, enumerate_fregions, xsuccessor, FractionalRegion};
pub use region::{Region, RegionSpace};

use crate::rational::Rational;

/// A valuation assigning a non-negative rational to every clock.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClockValuation(pub Vec<Rational>);

impl ClockValuation {
    pub fn zero(k: usize) -> Self {
        ClockValuation(vec![Rational::from_integer(0); k])
    }

    pub fn delay(&self, d: Rational) -> Self {
        ClockValuation(self.0.iter().map(|v| v + d).collect())
    }

    pub fn reset(&self, clocks: &[ClockId]) -> Self {
        let mut v = self.0.clone();
        for c in clocks {
            v[c.0] = Rational::from_integer(0);
        }
        ClockValuation(v)
    }

    pub fn get(&self, c: ClockId) -> Rational {
        self.0[c.0]
    }
}

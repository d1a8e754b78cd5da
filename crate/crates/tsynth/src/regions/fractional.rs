use std::collections::BTreeSet;

use itertools::Itertools;

use super::{ClockId, Region, RegionSpace};
use crate::error::{Error, Result};
use crate::rational::{frac, Rational};

const OUT: u8 = u8::MAX;

/// Fractional parts of a partial clock valuation, up to order.
///
/// Per clock: [`u8::MAX`] when outside the domain, 0 for a zero fractional
/// part, otherwise the rank of the fractional part (1 is smallest).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractionalRegion(pub(crate) Box<[u8]>);

impl FractionalRegion {
    pub fn empty(k: usize) -> Self {
        FractionalRegion(vec![OUT; k].into_boxed_slice())
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn of(values: &[Option<Rational>]) -> Self {
        let fracs: Vec<Rational> = values
            .iter()
            .flatten()
            .map(frac)
            .filter(|f| *f != Rational::from_integer(0))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let data = values
            .iter()
            .map(|v| match v {
                None => OUT,
                Some(v) => {
                    let f = frac(v);
                    if f == Rational::from_integer(0) {
                        0
                    } else {
                        (fracs.binary_search(&f).unwrap() + 1) as u8
                    }
                }
            })
            .collect();
        FractionalRegion(data)
    }

    pub fn in_dom(&self, x: usize) -> bool {
        self.0[x] != OUT
    }

    pub fn dom(&self) -> Vec<ClockId> {
        (0..self.k()).filter(|&x| self.in_dom(x)).map(ClockId).collect()
    }

    /// Domain clocks with fractional part zero.
    pub fn one(&self) -> Vec<ClockId> {
        (0..self.k()).filter(|&x| self.0[x] == 0).map(ClockId).collect()
    }

    pub fn value(&self, x: usize) -> Option<u8> {
        self.in_dom(x).then_some(self.0[x])
    }

    fn normalize(mut data: Vec<u8>) -> Self {
        let used: Vec<u8> = data.iter().copied().filter(|&r| r != OUT && r != 0).sorted().dedup().collect();
        for r in data.iter_mut() {
            if *r != OUT && *r != 0 {
                *r = (used.binary_search(r).unwrap() + 1) as u8;
            }
        }
        FractionalRegion(data.into_boxed_slice())
    }

    /// Restriction to `dom \ one`.
    pub fn drop_one(&self) -> Self {
        let data = self.0.iter().map(|&r| if r == 0 { OUT } else { r }).collect();
        Self::normalize(data)
    }

    /// Sets clocks in `y` to fractional part zero, adding them to the domain.
    pub fn reset(&self, y: &[ClockId]) -> Self {
        let mut data = self.0.to_vec();
        for c in y {
            data[c.0] = 0;
        }
        Self::normalize(data)
    }

    /// Fractional region reached after a short delay; the largest parts wrap
    /// to zero when none is zero.
    pub fn immediate_successor(&self) -> Result<Self> {
        let dom = self.dom();
        if dom.is_empty() {
            return Err(Error::Invalid("immediate successor of an empty fractional region".into()));
        }
        let mut data = self.0.to_vec();
        if dom.iter().any(|c| data[c.0] == 0) {
            for r in data.iter_mut() {
                if *r != OUT {
                    *r += 1;
                }
            }
        } else {
            let max = dom.iter().map(|c| data[c.0]).max().unwrap();
            for r in data.iter_mut() {
                if *r == max {
                    *r = 0;
                }
            }
        }
        Ok(Self::normalize(data))
    }

    pub fn describe(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        let zero: Vec<&str> = (0..self.k()).filter(|&x| self.0[x] == 0).map(|x| names[x].as_str()).collect();
        if !zero.is_empty() {
            parts.push(format!("{}=0", zero.join("=")));
        }
        let max = self.0.iter().filter(|&&r| r != OUT).max().copied().unwrap_or(0);
        let chain: Vec<String> =
            (1..=max).map(|r| (0..self.k()).filter(|&x| self.0[x] == r).map(|x| names[x].as_str()).join("=")).collect();
        if !chain.is_empty() {
            parts.push(format!("0<{}", chain.join("<")));
        }
        format!("{{{}}}", parts.join(";"))
    }
}

/// Agreement of a fractional region with a region, with the `> m`
/// escape on both the ordering and the zero tests.
pub fn agrees(f: &FractionalRegion, space: &RegionSpace, r: &Region) -> bool {
    let dom = f.dom();
    let key = |x: usize| if space.is_bounded(r, x) { Some(space.rank(r, x)) } else { None };
    for &x in &dom {
        let escaped = !space.is_bounded(r, x.0);
        let r_zero = space.is_bounded(r, x.0) && space.is_integral(r, x.0);
        if (f.0[x.0] == 0) != (r_zero || escaped) {
            return false;
        }
    }
    for &x in &dom {
        for &y in &dom {
            if x == y {
                continue;
            }
            let f_lt = f.0[x.0] < f.0[y.0];
            let r_lt = match (key(x.0), key(y.0)) {
                (Some(a), Some(b)) => a < b,
                _ => true,
            };
            if f_lt != r_lt {
                return false;
            }
        }
    }
    true
}

/// First time successor of `r` (including `r`) that agrees with `f`.
pub fn xsuccessor(space: &RegionSpace, r: &Region, f: &FractionalRegion) -> Option<Region> {
    space.successor_chain(r).into_iter().find(|s| agrees(f, space, s))
}

/// All fractional regions over `k` clocks, sorted.
pub fn enumerate_fregions(k: usize) -> Vec<FractionalRegion> {
    // each clock: out, zero, or in a block of an ordered partition
    let mut out = BTreeSet::new();
    let mut data = vec![OUT; k];
    fn rec(i: usize, k: usize, data: &mut Vec<u8>, out: &mut BTreeSet<FractionalRegion>) {
        if i == k {
            let d = data.clone();
            let used: BTreeSet<u8> = d.iter().copied().filter(|&r| r != OUT && r != 0).collect();
            if used.iter().enumerate().all(|(j, &r)| r as usize == j + 1) {
                out.insert(FractionalRegion(d.into_boxed_slice()));
            }
            return;
        }
        for v in std::iter::once(OUT).chain(0..=k as u8) {
            data[i] = v;
            rec(i + 1, k, data, out);
        }
        data[i] = OUT;
    }
    rec(0, k, &mut data, &mut out);
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::ClockValuation;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_fregions(0).len(), 1);
        assert_eq!(enumerate_fregions(1).len(), 3);
        assert_eq!(enumerate_fregions(2).len(), 11);
    }

    #[test]
    fn xsuccessor_escape() {
        let s = RegionSpace::classic(1, 1);
        let r = s.region_of(&ClockValuation(vec![q(3, 2)]));
        let f = FractionalRegion::of(&[Some(q(1, 1))]);
        assert_eq!(xsuccessor(&s, &r, &f), Some(r.clone()));
        let r = s.region_of(&ClockValuation(vec![q(1, 2)]));
        let got = xsuccessor(&s, &r, &f).unwrap();
        assert_eq!(s.describe(&got, &["x".to_string()]), "x = 1");
    }

    #[test]
    fn immediate_successor_wraps() {
        let f = FractionalRegion::of(&[Some(q(1, 1))]);
        let g = f.immediate_successor().unwrap();
        assert_eq!(g, FractionalRegion::of(&[Some(q(1, 2))]));
        assert_eq!(g.immediate_successor().unwrap(), f);
        let two = FractionalRegion::of(&[Some(q(1, 3)), Some(q(2, 3))]);
        assert_eq!(two.immediate_successor().unwrap(), FractionalRegion::of(&[Some(q(1, 3)), Some(q(1, 1))]));
        assert!(FractionalRegion::empty(2).immediate_successor().is_err());
    }
}

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{One, Zero};

use super::{Atom, ClockConstraint, ClockId, ClockValuation, Cmp};
use crate::rational::{frac, Rational};

/// Region equivalence class under a [`RegionSpace`].
///
/// Layout: one unary class per clock, one fractional rank per clock, one
/// difference class per tracked pair. Unary class `2c` means `x = c`,
/// `2c + 1` means `c < x < c + 1`, and `2m + 1` means `x > m`. Ranks order
/// the non-zero fractional parts of bounded clocks (1 is smallest, 0 for
/// integral or unbounded clocks).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region(pub(crate) Box<[u16]>);

/// Clock count, maximal constant and the diagonal pairs whose differences
/// stay observable above the constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSpace {
    k: usize,
    m: u32,
    pairs: Vec<(usize, usize)>,
    pair_slot: HashMap<(usize, usize), usize>,
}

#[derive(Clone, Copy, Debug)]
struct Bound {
    v: Rational,
    strict: bool,
}

fn tighter(a: Option<Bound>, b: Option<Bound>) -> Option<Bound> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => match a.v.cmp(&b.v) {
            Ordering::Less => Some(a),
            Ordering::Greater => Some(b),
            Ordering::Equal => Some(Bound { v: a.v, strict: a.strict || b.strict }),
        },
    }
}

fn add(a: Option<Bound>, b: Option<Bound>) -> Option<Bound> {
    match (a, b) {
        (Some(a), Some(b)) => Some(Bound { v: a.v + b.v, strict: a.strict || b.strict }),
        _ => None,
    }
}

impl RegionSpace {
    /// Classic regions: no difference tracking above the constant.
    pub fn classic(k: usize, m: u32) -> Self {
        Self::with_pairs(k, m, Vec::new())
    }

    /// Every pair tracked: equivalence over all atoms with constants up to `m`.
    pub fn full(k: usize, m: u32) -> Self {
        let pairs = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        Self::with_pairs(k, m, pairs)
    }

    pub fn with_pairs(k: usize, m: u32, mut pairs: Vec<(usize, usize)>) -> Self {
        assert!(m < 16000, "region constant too large");
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.retain(|p| p.0 != p.1);
        pairs.sort();
        pairs.dedup();
        let pair_slot = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        RegionSpace { k, m, pairs, pair_slot }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn top(&self) -> u16 {
        (2 * self.m + 1) as u16
    }

    fn diag_top(&self) -> u16 {
        (4 * self.m + 2) as u16
    }

    pub fn unary(&self, r: &Region, x: usize) -> u16 {
        r.0[x]
    }

    pub fn rank(&self, r: &Region, x: usize) -> u16 {
        r.0[self.k + x]
    }

    pub fn is_bounded(&self, r: &Region, x: usize) -> bool {
        r.0[x] < self.top()
    }

    pub fn is_integral(&self, r: &Region, x: usize) -> bool {
        r.0[x] % 2 == 0
    }

    /// Clocks with fractional part 0 and value at most `m`.
    pub fn frac_zero(&self, r: &Region, x: usize) -> bool {
        self.is_integral(r, x)
    }

    pub fn zero(&self) -> Region {
        let mut data = vec![0u16; 2 * self.k + self.pairs.len()];
        let eq0 = self.diag_of_int(0);
        for d in data[2 * self.k..].iter_mut() {
            *d = eq0;
        }
        Region(data.into_boxed_slice())
    }

    /// Difference class of an exact integer difference.
    fn diag_of_int(&self, d: i64) -> u16 {
        let m = self.m as i64;
        if d < -m {
            0
        } else if d > m {
            self.diag_top()
        } else {
            (2 * (d + m) + 1) as u16
        }
    }

    /// Difference class of the open interval `(f, f + 1)`.
    fn diag_of_open(&self, f: i64) -> u16 {
        let m = self.m as i64;
        if f < -m {
            0
        } else if f >= m {
            self.diag_top()
        } else {
            (2 * (f + m) + 2) as u16
        }
    }

    fn diag_of_rational(&self, d: Rational) -> u16 {
        if d.is_integer() {
            self.diag_of_int(d.to_integer())
        } else {
            self.diag_of_open(d.floor().to_integer())
        }
    }

    pub fn region_of(&self, v: &ClockValuation) -> Region {
        assert_eq!(v.0.len(), self.k);
        let m = Rational::from_integer(self.m as i64);
        let mut data = vec![0u16; 2 * self.k + self.pairs.len()];
        let mut fracs = BTreeSet::new();
        for (i, val) in v.0.iter().enumerate() {
            data[i] = if *val > m {
                self.top()
            } else if val.is_integer() {
                (2 * val.to_integer()) as u16
            } else {
                fracs.insert(frac(val));
                (2 * val.floor().to_integer() + 1) as u16
            };
        }
        let fracs: Vec<_> = fracs.into_iter().collect();
        for (i, val) in v.0.iter().enumerate() {
            if data[i] < self.top() && data[i] % 2 == 1 {
                data[self.k + i] = (fracs.binary_search(&frac(val)).unwrap() + 1) as u16;
            }
        }
        for (s, &(i, j)) in self.pairs.iter().enumerate() {
            data[2 * self.k + s] = self.diag_of_rational(v.0[i] - v.0[j]);
        }
        Region(data.into_boxed_slice())
    }

    fn compress_ranks(&self, data: &mut [u16]) {
        let used: BTreeSet<u16> = data[self.k..2 * self.k].iter().copied().filter(|&r| r > 0).collect();
        let map: HashMap<u16, u16> = used.iter().enumerate().map(|(i, &r)| (r, i as u16 + 1)).collect();
        for r in data[self.k..2 * self.k].iter_mut() {
            if *r > 0 {
                *r = map[r];
            }
        }
    }

    /// Immediate time successor; the all-unbounded region is its own successor.
    pub fn successor(&self, r: &Region) -> Region {
        let k = self.k;
        let top = self.top();
        let mut data = r.0.to_vec();
        let integral: Vec<usize> = (0..k).filter(|&x| data[x] < top && data[x] % 2 == 0).collect();
        if !integral.is_empty() {
            for x in 0..k {
                if data[k + x] > 0 {
                    data[k + x] += 1;
                }
            }
            for &x in &integral {
                data[x] += 1;
                data[k + x] = if data[x] < top { 1 } else { 0 };
            }
            self.compress_ranks(&mut data);
        } else {
            let max = (0..k).map(|x| data[k + x]).max().unwrap_or(0);
            if max == 0 {
                return r.clone();
            }
            for x in 0..k {
                if data[k + x] == max {
                    data[x] += 1;
                    data[k + x] = 0;
                }
            }
        }
        Region(data.into_boxed_slice())
    }

    /// `r` followed by its strict time successors up to the absorbing region.
    pub fn successor_chain(&self, r: &Region) -> Vec<Region> {
        let mut out = vec![r.clone()];
        loop {
            let next = self.successor(out.last().unwrap());
            if &next == out.last().unwrap() {
                return out;
            }
            out.push(next);
        }
    }

    /// Whether `b` is reachable from `a` by letting time pass.
    pub fn precedes(&self, a: &Region, b: &Region) -> bool {
        let mut cur = a.clone();
        loop {
            if &cur == b {
                return true;
            }
            let next = self.successor(&cur);
            if next == cur {
                return false;
            }
            cur = next;
        }
    }

    fn neg_unary_class(&self, u: u16) -> u16 {
        // class of -x for a clock of unary class u
        let c = (u / 2) as i64;
        if u >= self.top() {
            0
        } else if u % 2 == 0 {
            self.diag_of_int(-c)
        } else {
            self.diag_of_open(-c - 1)
        }
    }

    fn pos_unary_class(&self, u: u16) -> u16 {
        let c = (u / 2) as i64;
        if u >= self.top() {
            self.diag_top()
        } else if u % 2 == 0 {
            self.diag_of_int(c)
        } else {
            self.diag_of_open(c)
        }
    }

    pub fn reset(&self, r: &Region, clocks: &[ClockId]) -> Region {
        let k = self.k;
        let mut data = r.0.to_vec();
        let mut is_reset = vec![false; k];
        for c in clocks {
            is_reset[c.0] = true;
        }
        for (s, &(i, j)) in self.pairs.iter().enumerate() {
            data[2 * k + s] = match (is_reset[i], is_reset[j]) {
                (true, true) => self.diag_of_int(0),
                (true, false) => self.neg_unary_class(r.0[j]),
                (false, true) => self.pos_unary_class(r.0[i]),
                (false, false) => data[2 * k + s],
            };
        }
        for c in clocks {
            data[c.0] = 0;
            data[k + c.0] = 0;
        }
        self.compress_ranks(&mut data);
        Region(data.into_boxed_slice())
    }

    /// Difference class of `x_i - x_j`, when determined by the region.
    pub fn diag_class(&self, r: &Region, i: usize, j: usize) -> Option<u16> {
        if i == j {
            return Some(self.diag_of_int(0));
        }
        let key = (i.min(j), i.max(j));
        if let Some(&s) = self.pair_slot.get(&key) {
            let c = r.0[2 * self.k + s];
            return Some(if i < j { c } else { self.diag_top() - c });
        }
        let (ui, uj) = (r.0[i], r.0[j]);
        if ui >= self.top() || uj >= self.top() {
            return None;
        }
        let base = (ui / 2) as i64 - (uj / 2) as i64;
        let (ri, rj) = (r.0[self.k + i], r.0[self.k + j]);
        Some(match ri.cmp(&rj) {
            Ordering::Equal => self.diag_of_int(base),
            Ordering::Greater => self.diag_of_open(base),
            Ordering::Less => self.diag_of_open(base - 1),
        })
    }

    /// Position of the represented quantity relative to integer `c`.
    fn compare_unary(&self, u: u16, c: i64) -> Option<Ordering> {
        if u >= self.top() {
            return if c <= self.m as i64 { Some(Ordering::Greater) } else { None };
        }
        let a = (u / 2) as i64;
        Some(if u % 2 == 0 {
            a.cmp(&c)
        } else if c <= a {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    fn compare_diag(&self, d: u16, c: i64) -> Option<Ordering> {
        let m = self.m as i64;
        if d == 0 {
            return if c >= -m { Some(Ordering::Less) } else { None };
        }
        if d == self.diag_top() {
            return if c <= m { Some(Ordering::Greater) } else { None };
        }
        let d = d as i64;
        Some(if d % 2 == 1 {
            ((d - 1) / 2 - m).cmp(&c)
        } else {
            let f = d / 2 - 1 - m;
            if c <= f {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
    }

    pub fn try_atom(&self, r: &Region, a: &Atom) -> Option<bool> {
        let ord = match a.y {
            None => self.compare_unary(r.0[a.x.0], a.c)?,
            Some(y) => self.compare_diag(self.diag_class(r, a.x.0, y.0)?, a.c)?,
        };
        Some(a.cmp.holds(ord))
    }

    /// Evaluates a guard on a region; `None` if the region does not decide it.
    pub fn try_satisfies(&self, r: &Region, g: &ClockConstraint) -> Option<bool> {
        Some(match g {
            ClockConstraint::True => true,
            ClockConstraint::False => false,
            ClockConstraint::Atom(a) => self.try_atom(r, a)?,
            ClockConstraint::Not(c) => !self.try_satisfies(r, c)?,
            ClockConstraint::And(cs) => {
                for c in cs {
                    if !self.try_satisfies(r, c)? {
                        return Some(false);
                    }
                }
                true
            }
            ClockConstraint::Or(cs) => {
                for c in cs {
                    if self.try_satisfies(r, c)? {
                        return Some(true);
                    }
                }
                false
            }
        })
    }

    pub fn satisfies(&self, r: &Region, g: &ClockConstraint) -> bool {
        self.try_satisfies(r, g).expect("guard not decided by region: constant above m or untracked diagonal")
    }

    /// Whether every guard atom is decided by regions of this space.
    pub fn decides(&self, g: &ClockConstraint) -> bool {
        g.atoms().iter().all(|a| {
            a.c.unsigned_abs() <= self.m as u64
                && a.y.map_or(true, |y| y == a.x || self.pair_slot.contains_key(&(a.x.0.min(y.0), a.x.0.max(y.0))))
        })
    }

    pub fn contains(&self, r: &Region, v: &ClockValuation) -> bool {
        &self.region_of(v) == r
    }

    /// Difference bounds `b[i][j]` on `x_i - x_j`, index 0 being the zero clock.
    fn difference_bounds(&self, r: &Region) -> Vec<Vec<Option<Bound>>> {
        let n = self.k + 1;
        let mut b: Vec<Vec<Option<Bound>>> = vec![vec![None; n]; n];
        for (i, row) in b.iter_mut().enumerate() {
            row[i] = Some(Bound { v: Rational::zero(), strict: false });
        }
        let set = |b: &mut Vec<Vec<Option<Bound>>>, i: usize, j: usize, v: i64, strict: bool| {
            b[i][j] = tighter(b[i][j], Some(Bound { v: Rational::from_integer(v), strict }));
        };
        let m = self.m as i64;
        for x in 0..self.k {
            let u = r.0[x];
            let c = (u / 2) as i64;
            if u >= self.top() {
                set(&mut b, 0, x + 1, -m, true);
            } else if u % 2 == 0 {
                set(&mut b, x + 1, 0, c, false);
                set(&mut b, 0, x + 1, -c, false);
            } else {
                set(&mut b, x + 1, 0, c + 1, true);
                set(&mut b, 0, x + 1, -c, true);
            }
        }
        for i in 0..self.k {
            for j in 0..self.k {
                if i == j {
                    continue;
                }
                if let Some(d) = self.diag_class(r, i, j) {
                    let d = d as i64;
                    if d == 0 {
                        set(&mut b, i + 1, j + 1, -m, true);
                    } else if d == self.diag_top() as i64 {
                        set(&mut b, j + 1, i + 1, -m, true);
                    } else if d % 2 == 1 {
                        let v = (d - 1) / 2 - m;
                        set(&mut b, i + 1, j + 1, v, false);
                        set(&mut b, j + 1, i + 1, -v, false);
                    } else {
                        let f = d / 2 - 1 - m;
                        set(&mut b, i + 1, j + 1, f + 1, true);
                        set(&mut b, j + 1, i + 1, -f, true);
                    }
                }
            }
        }
        b
    }

    fn close(b: &mut [Vec<Option<Bound>>]) -> bool {
        let n = b.len();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = add(b[i][k], b[k][j]);
                    b[i][j] = tighter(b[i][j], via);
                }
            }
        }
        (0..n).all(|i| b[i][i].map_or(true, |d| d.v > Rational::zero() || (d.v.is_zero() && !d.strict)))
    }

    /// A rational valuation inside the region, or `None` if it is empty.
    pub fn representative(&self, r: &Region) -> Option<ClockValuation> {
        let mut b = self.difference_bounds(r);
        if !Self::close(&mut b) {
            return None;
        }
        let mut vals = vec![Rational::zero(); self.k];
        for x in 0..self.k {
            let i = x + 1;
            let lo = b[0][i].map(|d| Bound { v: -d.v, strict: d.strict }).unwrap();
            let v = match b[i][0] {
                Some(hi) if hi.v == lo.v => lo.v,
                Some(hi) => (lo.v + hi.v) / Rational::from_integer(2),
                None => lo.v + Rational::one(),
            };
            vals[x] = v;
            b[i][0] = tighter(b[i][0], Some(Bound { v, strict: false }));
            b[0][i] = tighter(b[0][i], Some(Bound { v: -v, strict: false }));
            if !Self::close(&mut b) {
                return None;
            }
        }
        let v = ClockValuation(vals);
        debug_assert!(self.contains(r, &v));
        Some(v)
    }

    /// Regions reachable from the zero region by delays and resets, sorted.
    pub fn enumerate(&self) -> Vec<Region> {
        let mut seen: BTreeSet<Region> = BTreeSet::new();
        let mut queue = VecDeque::new();
        let z = self.zero();
        seen.insert(z.clone());
        queue.push_back(z);
        let subsets: Vec<Vec<ClockId>> = (1u32..(1 << self.k))
            .map(|mask| (0..self.k).filter(|i| mask >> i & 1 == 1).map(ClockId).collect())
            .collect();
        while let Some(r) = queue.pop_front() {
            let mut nexts = vec![self.successor(&r)];
            for s in &subsets {
                nexts.push(self.reset(&r, s));
            }
            for n in nexts {
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Conjunction of atoms whose solutions are exactly the region.
    pub fn characteristic(&self, r: &Region) -> ClockConstraint {
        let m = self.m as i64;
        let mut parts = Vec::new();
        for x in 0..self.k {
            let u = r.0[x];
            let c = (u / 2) as i64;
            let id = ClockId(x);
            if u >= self.top() {
                parts.push(ClockConstraint::atom(id, Cmp::Gt, m));
            } else if u % 2 == 0 {
                parts.push(ClockConstraint::atom(id, Cmp::Eq, c));
            } else {
                parts.push(ClockConstraint::atom(id, Cmp::Gt, c));
                parts.push(ClockConstraint::atom(id, Cmp::Lt, c + 1));
            }
        }
        for i in 0..self.k {
            for j in i + 1..self.k {
                let both_frac = self.is_bounded(r, i) && self.is_bounded(r, j) && r.0[i] % 2 == 1 && r.0[j] % 2 == 1;
                let tracked_top =
                    self.pair_slot.contains_key(&(i, j)) && (!self.is_bounded(r, i) || !self.is_bounded(r, j));
                if !(both_frac || tracked_top) {
                    continue;
                }
                let d = self.diag_class(r, i, j).unwrap() as i64;
                let (x, y) = (ClockId(i), ClockId(j));
                if d == 0 {
                    parts.push(ClockConstraint::diag(x, y, Cmp::Lt, -m));
                } else if d == self.diag_top() as i64 {
                    parts.push(ClockConstraint::diag(x, y, Cmp::Gt, m));
                } else if d % 2 == 1 {
                    parts.push(ClockConstraint::diag(x, y, Cmp::Eq, (d - 1) / 2 - m));
                } else {
                    let f = d / 2 - 1 - m;
                    parts.push(ClockConstraint::diag(x, y, Cmp::Gt, f));
                    parts.push(ClockConstraint::diag(x, y, Cmp::Lt, f + 1));
                }
            }
        }
        ClockConstraint::and(parts)
    }

    pub fn describe(&self, r: &Region, names: &[String]) -> String {
        self.characteristic(r).display(names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::ClockValuation;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    fn names(k: usize) -> Vec<String> {
        ["x", "y", "z", "w"].iter().take(k).map(|s| s.to_string()).collect()
    }

    #[test]
    fn successor_examples() {
        let s = RegionSpace::classic(1, 1);
        let r0 = s.zero();
        let r1 = s.successor(&r0);
        assert_eq!(s.describe(&r1, &names(1)), "x > 0 && x < 1");
        let r2 = s.successor(&r1);
        assert_eq!(s.describe(&r2, &names(1)), "x = 1");
        let r3 = s.successor(&r2);
        assert_eq!(s.describe(&r3, &names(1)), "x > 1");
        assert_eq!(s.successor(&r3), r3);
    }

    #[test]
    fn enumerate_counts() {
        // Alur-Dill counts for one and two clocks
        assert_eq!(RegionSpace::classic(1, 1).enumerate().len(), 4);
        assert_eq!(RegionSpace::classic(1, 2).enumerate().len(), 6);
        assert_eq!(RegionSpace::classic(2, 1).enumerate().len(), 18);
        assert_eq!(RegionSpace::classic(0, 3).enumerate().len(), 1);
    }

    #[test]
    fn classic_top_pair_is_one_region() {
        let s = RegionSpace::classic(2, 1);
        let a = s.region_of(&ClockValuation(vec![q(3, 2), q(1, 1)]));
        let b = s.region_of(&ClockValuation(vec![q(5, 1), q(1, 1)]));
        assert_eq!(a, b);
        let f = RegionSpace::full(2, 1);
        let a = f.region_of(&ClockValuation(vec![q(3, 2), q(1, 1)]));
        let b = f.region_of(&ClockValuation(vec![q(5, 1), q(1, 1)]));
        assert_ne!(a, b);
    }

    #[test]
    fn representatives_round_trip() {
        for space in [RegionSpace::classic(3, 2), RegionSpace::full(3, 1)] {
            for r in space.enumerate() {
                let v = space.representative(&r).expect("non-empty region");
                assert_eq!(space.region_of(&v), r);
                assert!(space.characteristic(&r).eval(&v));
            }
        }
    }

    #[test]
    fn reset_matches_concrete() {
        let space = RegionSpace::full(3, 2);
        let v = ClockValuation(vec![q(7, 2), q(1, 3), q(5, 1)]);
        let r = space.region_of(&v);
        for y in [vec![ClockId(0)], vec![ClockId(1), ClockId(2)], vec![ClockId(2)]] {
            assert_eq!(space.reset(&r, &y), space.region_of(&v.reset(&y)));
        }
    }
}

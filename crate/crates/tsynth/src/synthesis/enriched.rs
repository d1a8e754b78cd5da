use crate::regions::{enumerate_fregions, ClockId, FractionalRegion};

/// Enriched alphabets `A' = (A ∪ {tick}) × fregions(X)` and
/// `B' = (B ∪ {tick}) × 2^X` for `k` clocks. Index `na` (resp. `nb`) is the
/// tick letter.
#[derive(Clone, Debug)]
pub struct Enriched {
    pub k: usize,
    pub a_names: Vec<String>,
    pub b_names: Vec<String>,
    pub fregions: Vec<FractionalRegion>,
    pub clock_names: Vec<String>,
}

pub const TICK: &str = "tick";

impl Enriched {
    pub fn new(a_names: Vec<String>, b_names: Vec<String>, k: usize) -> Self {
        Enriched {
            k,
            a_names,
            b_names,
            fregions: enumerate_fregions(k),
            clock_names: (1..=k).map(|i| format!("c{i}")).collect(),
        }
    }

    pub fn na(&self) -> usize {
        self.a_names.len()
    }

    pub fn nb(&self) -> usize {
        self.b_names.len()
    }

    pub fn a_size(&self) -> usize {
        (self.na() + 1) * self.fregions.len()
    }

    pub fn b_size(&self) -> usize {
        (self.nb() + 1) << self.k
    }

    pub fn a_letter(&self, a_ext: usize, f: usize) -> usize {
        a_ext * self.fregions.len() + f
    }

    pub fn b_letter(&self, b_ext: usize, mask: u32) -> usize {
        (b_ext << self.k) | mask as usize
    }

    /// `(a_ext, fregion index)`
    pub fn split_a(&self, x: usize) -> (usize, usize) {
        (x / self.fregions.len(), x % self.fregions.len())
    }

    /// `(b_ext, request mask)`
    pub fn split_b(&self, y: usize) -> (usize, u32) {
        (y >> self.k, (y & ((1 << self.k) - 1)) as u32)
    }

    pub fn f_index(&self, f: &FractionalRegion) -> usize {
        self.fregions.binary_search(f).expect("fractional region of k clocks")
    }

    pub fn mask_clocks(&self, mask: u32) -> Vec<ClockId> {
        (0..self.k).filter(|i| mask >> i & 1 == 1).map(ClockId).collect()
    }

    pub fn a_name(&self, x: usize) -> String {
        let (a, f) = self.split_a(x);
        let base = if a == self.na() { TICK } else { &self.a_names[a] };
        format!("{base}@{}", self.fregions[f].describe(&self.clock_names))
    }

    pub fn b_name(&self, y: usize) -> String {
        let (b, mask) = self.split_b(y);
        let base = if b == self.nb() { TICK } else { &self.b_names[b] };
        let clocks: Vec<&str> = self.mask_clocks(mask).iter().map(|c| self.clock_names[c.0].as_str()).collect();
        format!("{base}@{{{}}}", clocks.join(","))
    }

    pub fn a_alphabet(&self) -> Vec<String> {
        (0..self.a_size()).map(|x| self.a_name(x)).collect()
    }

    pub fn b_alphabet(&self) -> Vec<String> {
        (0..self.b_size()).map(|y| self.b_name(y)).collect()
    }

    /// Letters of `A' × B'`, index `a' * |B'| + b'`.
    pub fn alphabet(&self) -> Vec<String> {
        let b = self.b_alphabet();
        self.a_alphabet().iter().flat_map(|x| b.iter().map(move |y| format!("{x}|{y}"))).collect()
    }
}

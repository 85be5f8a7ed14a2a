//! The flip sequence of the canonical listing.
//!
//! `sigma(1) = 1^(k-1)` and `sigma(n) = (sigma(n-1), n)^(kn-1), sigma(n-1)`.
//! [`sigma_recursive`] materializes it from that recurrence; [`LoopFreeState`]
//! produces it one entry at a time with a constant number of steps per entry.

use crate::error::{Error, Result};
use crate::perm::PermSpace;

/// Largest flip sequence [`sigma_recursive`] will materialize.
pub const MATERIALIZE_LIMIT: u64 = 1 << 28;

/// The flip lengths taking each listing entry to the next; `k^n * n! - 1` of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSequence {
    n: usize,
    k: u32,
    lengths: Vec<usize>,
}

impl FlipSequence {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// The sequence followed by the closing flip of length `n`.
    pub fn closed(&self) -> impl Iterator<Item = usize> + '_ {
        self.lengths.iter().copied().chain(std::iter::once(self.n))
    }
}

pub fn sigma_recursive(space: &PermSpace) -> Result<FlipSequence> {
    let required = space.size() - 1;
    if required > MATERIALIZE_LIMIT {
        return Err(Error::Budget { what: "flip sequence", required, budget: MATERIALIZE_LIMIT });
    }
    let k = space.k() as usize;
    let mut seq = vec![1usize; k - 1];
    for t in 2..=space.n() {
        let repeats = k * t - 1;
        let mut next = Vec::with_capacity((seq.len() + 1) * (repeats + 1));
        for _ in 0..repeats {
            next.extend_from_slice(&seq);
            next.push(t);
        }
        next.extend_from_slice(&seq);
        seq = next;
    }
    debug_assert_eq!(seq.len() as u64, required);
    Ok(FlipSequence { n: space.n(), k: space.k(), lengths: seq })
}

/// Receives one tick per elementary step of [`LoopFreeState::advance_probed`].
pub trait OpProbe {
    fn tick(&mut self);
}

/// Discards ticks.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoProbe;

impl OpProbe for NoProbe {
    #[inline(always)]
    fn tick(&mut self) {}
}

/// Counts ticks.
#[derive(Debug, Default, Clone, Copy)]
pub struct OpCounter(pub u32);

impl OpProbe for OpCounter {
    fn tick(&mut self) {
        self.0 += 1;
    }
}

/// Counter and flip-length arrays `c_1..c_{n+1}`, `f_1..f_{n+1}`.
///
/// Each call to [`advance`](Self::advance) returns the next entry of the flip
/// sequence. The first value above `n` is the termination sentinel; it is not
/// part of the sequence and the state refuses further calls after it.
#[derive(Debug, Clone)]
pub struct LoopFreeState {
    n: usize,
    k: u64,
    // 1-based; slot n+2 only absorbs the sentinel's promotion
    counters: Vec<u64>,
    flips: Vec<usize>,
    terminated: bool,
}

impl LoopFreeState {
    pub fn new(space: &PermSpace) -> Self {
        let n = space.n();
        LoopFreeState {
            n,
            k: u64::from(space.k()),
            counters: vec![0; n + 3],
            flips: (0..n + 3).collect(),
            terminated: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// `c_x` for `1 <= x <= n + 1`.
    pub fn counter(&self, x: usize) -> u64 {
        self.counters[x]
    }

    /// `f_x` for `1 <= x <= n + 1`.
    pub fn flip_value(&self, x: usize) -> usize {
        self.flips[x]
    }

    pub fn advance(&mut self) -> Result<usize> {
        self.advance_probed(&mut NoProbe)
    }

    /// [`advance`](Self::advance) reporting each elementary step to `probe`.
    pub fn advance_probed<P: OpProbe>(&mut self, probe: &mut P) -> Result<usize> {
        probe.tick();
        if self.terminated {
            return Err(Error::Terminated);
        }
        let lowest = if self.k == 1 { 2 } else { 1 };
        probe.tick();
        let x = self.flips[lowest];
        probe.tick();
        self.flips[lowest] = lowest;
        probe.tick();
        self.counters[x] += 1;
        probe.tick();
        if self.counters[x] == self.k * x as u64 - 1 {
            probe.tick();
            self.counters[x] = 0;
            probe.tick();
            self.flips[x] = self.flips[x + 1];
            probe.tick();
            self.flips[x + 1] = x + 1;
        }
        probe.tick();
        self.terminated = x > self.n;
        Ok(x)
    }
}

/// Iterates the sequence, sentinel excluded.
impl IntoIterator for LoopFreeState {
    type Item = usize;
    type IntoIter = FlipSeqIter;

    fn into_iter(self) -> FlipSeqIter {
        FlipSeqIter { state: self }
    }
}

/// Iterator over the flip sequence driven by a [`LoopFreeState`].
#[derive(Debug, Clone)]
pub struct FlipSeqIter {
    state: LoopFreeState,
}

impl FlipSeqIter {
    pub fn new(space: &PermSpace) -> Self {
        LoopFreeState::new(space).into_iter()
    }
}

impl Iterator for FlipSeqIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.state.is_terminated() {
            return None;
        }
        let x = self.state.advance().ok()?;
        (x <= self.state.n).then_some(x)
    }
}

impl std::iter::FusedIterator for FlipSeqIter {}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize, k: u32) -> PermSpace {
        PermSpace::new(n, k).unwrap()
    }

    fn drain(n: usize, k: u32) -> (Vec<usize>, usize) {
        let mut st = LoopFreeState::new(&space(n, k));
        let mut out = Vec::new();
        loop {
            let x = st.advance().unwrap();
            if x > n {
                return (out, x);
            }
            out.push(x);
        }
    }

    #[test]
    fn recursive_small_cases() {
        assert_eq!(sigma_recursive(&space(1, 3)).unwrap().lengths(), &[1, 1]);
        assert_eq!(sigma_recursive(&space(3, 1)).unwrap().lengths(), &[2, 3, 2, 3, 2]);
        assert!(sigma_recursive(&space(1, 1)).unwrap().is_empty());
        let s23 = sigma_recursive(&space(2, 3)).unwrap();
        let mut expected = Vec::new();
        for _ in 0..5 {
            expected.extend([1, 1, 2]);
        }
        expected.extend([1, 1]);
        assert_eq!(s23.lengths(), expected.as_slice());
        assert_eq!(s23.len(), 17);
    }

    #[test]
    fn loop_free_traces() {
        assert_eq!(drain(2, 2), (vec![1, 2, 1, 2, 1, 2, 1], 3));
        assert_eq!(drain(3, 1), (vec![2, 3, 2, 3, 2], 4));
        assert_eq!(drain(1, 3), (vec![1, 1], 2));
        assert_eq!(drain(1, 1), (vec![], 2));
    }

    #[test]
    fn call_after_sentinel_is_an_error() {
        let mut st = LoopFreeState::new(&space(1, 2));
        assert_eq!(st.advance(), Ok(1));
        assert!(!st.is_terminated());
        assert_eq!(st.advance(), Ok(2));
        assert!(st.is_terminated());
        assert_eq!(st.advance(), Err(Error::Terminated));
    }

    #[test]
    fn iterator_matches_recursive() {
        for (n, k) in [(1, 1), (2, 1), (4, 1), (6, 1), (3, 2), (5, 2), (4, 3), (3, 4), (2, 10), (1, 7)] {
            let sp = space(n, k);
            let iterated: Vec<_> = FlipSeqIter::new(&sp).collect();
            assert_eq!(iterated, sigma_recursive(&sp).unwrap().lengths(), "n={n} k={k}");
        }
    }

    #[test]
    fn initial_state() {
        let st = LoopFreeState::new(&space(4, 2));
        for x in 1..=5 {
            assert_eq!(st.counter(x), 0);
            assert_eq!(st.flip_value(x), x);
        }
    }

    #[test]
    fn budget_guard() {
        let err = sigma_recursive(&space(12, 2)).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }
}

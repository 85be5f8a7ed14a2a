//! Four constructions of the same cyclic flip Gray code.
//!
//! * [`greedy`]: start at `1^0 2^0 ... n^0` and always take the shortest (or
//!   longest) flip that reaches an unvisited permutation. Needs a visited set
//!   with one bit per permutation.
//! * [`rec_listing`]: the recursive block structure over the circular word
//!   `rho(p)`.
//! * [`successor`]: the flip length leading to the next permutation, computed
//!   from the permutation alone in `O(n)`.
//! * [`FlipSeqWalk`]: flips driven by the loop-free flip sequence generator.

use std::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::genseq::{FlipSeqIter, LoopFreeState};
use crate::perm::{ColouredElement, ColouredPermutation, PermSpace, PrePerm};

/// Default cap on permutations held in memory (visited bits or listing entries).
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// An ordered list of coloured permutations over one [`PermSpace`].
///
/// Construction does not check the Gray code property; see
/// [`verify_listing`](crate::analysis::verify_listing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Listing {
    space: PermSpace,
    perms: Vec<ColouredPermutation>,
}

impl Listing {
    pub fn new(space: PermSpace, perms: Vec<ColouredPermutation>) -> Self {
        Listing { space, perms }
    }

    pub fn space(&self) -> &PermSpace {
        &self.space
    }

    pub fn perms(&self) -> &[ColouredPermutation] {
        &self.perms
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn first(&self) -> Option<&ColouredPermutation> {
        self.perms.first()
    }

    pub fn last(&self) -> Option<&ColouredPermutation> {
        self.perms.last()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ColouredPermutation> {
        self.perms.iter()
    }

    pub fn into_perms(self) -> Vec<ColouredPermutation> {
        self.perms
    }

    /// For each consecutive pair, the flip length joining them, if any.
    pub fn transitions(&self) -> Vec<Option<usize>> {
        self.perms.windows(2).map(|w| flip_between(&w[0], &w[1])).collect()
    }
}

impl<'a> IntoIterator for &'a Listing {
    type Item = &'a ColouredPermutation;
    type IntoIter = std::slice::Iter<'a, ColouredPermutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.perms.iter()
    }
}

impl fmt::Display for Listing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.perms {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The flip length `j` with `flip(from, j) == to`, if one exists.
///
/// A flip of length `j` moves the old first symbol to position `j`, so `j` is
/// the last position where the two differ. With one colour the length-1 flip
/// is the identity, so equal permutations are joined by `j = 1`.
pub fn flip_between(from: &ColouredPermutation, to: &ColouredPermutation) -> Option<usize> {
    if from.n() != to.n() || from.k() != to.k() {
        return None;
    }
    let Some(last_diff) = from.elements().iter().zip(to.elements()).rposition(|(a, b)| a != b) else {
        return (from.k() == 1).then_some(1);
    };
    let j = last_diff + 1;
    let k = from.k();
    let matches = from.elements()[..j].iter().rev().zip(&to.elements()[..j]).all(|(a, b)| a.shifted(1, k) == *b);
    matches.then_some(j)
}

/// Receives a listing one permutation at a time.
pub trait ListingVisitor {
    fn visit(&mut self, perm: &ColouredPermutation);

    /// Called once after the last permutation when the listing closes into a
    /// cycle; `closing_flip` takes the last permutation back to the first.
    fn close(&mut self, _closing_flip: usize) {}
}

impl<F: FnMut(&ColouredPermutation)> ListingVisitor for F {
    fn visit(&mut self, perm: &ColouredPermutation) {
        self(perm)
    }
}

fn check_budget(what: &'static str, required: u64, budget: u64) -> Result<()> {
    if required > budget {
        return Err(Error::Budget { what, required, budget });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Greedy

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Priority {
    MinFlip,
    MaxFlip,
}

/// Result of a greedy walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub listing: Listing,
    /// Flip lengths applied between consecutive entries.
    pub flips: Vec<usize>,
    /// Every permutation was reached.
    pub exhaustive: bool,
    /// Some flip takes the last entry back to the first.
    pub cyclic: bool,
}

impl GreedyOutcome {
    pub fn is_hamilton_cycle(&self) -> bool {
        self.exhaustive && self.cyclic
    }
}

/// Summary of a streamed greedy walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedySummary {
    pub visited: u64,
    pub exhaustive: bool,
    pub closing_flip: Option<usize>,
}

pub fn greedy(space: &PermSpace, priority: Priority) -> Result<GreedyOutcome> {
    greedy_with_budget(space, priority, DEFAULT_BUDGET)
}

pub fn greedy_with_budget(space: &PermSpace, priority: Priority, budget: u64) -> Result<GreedyOutcome> {
    let mut perms = Vec::new();
    let mut flips = Vec::new();
    let summary = greedy_walk(space, priority, budget, |p: &ColouredPermutation, flip: Option<usize>| {
        perms.push(p.clone());
        flips.extend(flip);
    })?;
    Ok(GreedyOutcome {
        listing: Listing::new(space.clone(), perms),
        flips,
        exhaustive: summary.exhaustive,
        cyclic: summary.closing_flip.is_some(),
    })
}

/// Streams the greedy path to `visit`, along with the flip that produced each
/// entry (`None` for the start). Memory is one bit per permutation.
pub fn greedy_walk<F>(space: &PermSpace, priority: Priority, budget: u64, mut visit: F) -> Result<GreedySummary>
where
    F: FnMut(&ColouredPermutation, Option<usize>),
{
    check_budget("greedy visited set", space.size(), budget)?;
    let n = space.n();
    let mut visited = bitvec![0; space.size() as usize];
    let first = space.identity();
    let mut current = first.clone();
    visited.set(current.packed_index() as usize, true);
    visit(&current, None);
    let mut count = 1u64;
    let mut candidate = current.clone();

    loop {
        let mut next_flip = None;
        for step in 0..n {
            let j = match priority {
                Priority::MinFlip => step + 1,
                Priority::MaxFlip => n - step,
            };
            candidate.clone_from(&current);
            candidate.apply_flip(j);
            if !visited[candidate.packed_index() as usize] {
                next_flip = Some(j);
                break;
            }
        }
        let Some(j) = next_flip else { break };
        std::mem::swap(&mut current, &mut candidate);
        visited.set(current.packed_index() as usize, true);
        count += 1;
        visit(&current, Some(j));
    }

    let closing_flip = flip_between(&current, &first);
    Ok(GreedySummary { visited: count, exhaustive: count == space.size(), closing_flip })
}

// ---------------------------------------------------------------------------
// Recursive construction

/// The listing of all rearrangements of the pre-perm `p` generated by the
/// block recursion: for `i = m` down to `1`, the listing of
/// `rho(p)_i` with `r_i` appended. A single symbol lists its `k` colour shifts.
///
/// The first entry is `p`; the last is `p` shifted by `k - 1` and reversed.
pub fn rec_listing(p: &PrePerm) -> Result<Vec<PrePerm>> {
    if p.is_empty() {
        return Err(Error::Invalid("empty pre-perm has no listing".into()));
    }
    let sub = PermSpace::new(p.len(), p.k())?;
    check_budget("recursive listing", sub.size(), DEFAULT_BUDGET)?;
    let mut out = Vec::with_capacity(sub.size() as usize);
    rec_into(p, &[], &mut out);
    Ok(out)
}

fn rec_into(p: &PrePerm, suffix: &[ColouredElement], out: &mut Vec<PrePerm>) {
    if p.len() == 1 {
        for s in 0..u64::from(p.k()) {
            let head = p.shift(s);
            out.push(append(&head, suffix));
        }
        return;
    }
    let word = p.rho();
    let mut inner_suffix = Vec::with_capacity(suffix.len() + 1);
    for i in (1..=word.len()).rev() {
        let sub = word.window_before(i).expect("index within 1..=m");
        inner_suffix.clear();
        inner_suffix.push(word.symbol(i));
        inner_suffix.extend_from_slice(suffix);
        rec_into(&sub, &inner_suffix, out);
    }
}

fn append(p: &PrePerm, suffix: &[ColouredElement]) -> PrePerm {
    suffix.iter().fold(p.clone(), |acc, &e| acc.push(e))
}

/// [`rec_listing`] of a full permutation, as a [`Listing`].
pub fn rec_listing_of(start: &ColouredPermutation) -> Result<Listing> {
    let perms =
        rec_listing(&start.as_pre_perm())?.into_iter().map(PrePerm::into_permutation).collect::<Result<Vec<_>>>()?;
    Ok(Listing::new(start.space(), perms))
}

// ---------------------------------------------------------------------------
// Successor rule

/// Length of the flip taking `pi` to the next permutation of the canonical
/// cyclic listing: the length of its longest decreasing prefix.
///
/// Scanning left to right, the prefix stops at the second ascent in value, at
/// an ascent to a value below the first, or (for `k > 1`) where the colour
/// pattern of a reversed increasing word breaks: descents keep the colour,
/// ascents raise it by one.
pub fn successor(pi: &ColouredPermutation) -> usize {
    let e = pi.elements();
    let n = e.len();
    let k = pi.k();
    let first = e[0].value;
    let mut ascents = 0;
    for j in 0..n - 1 {
        let (a, b) = (e[j], e[j + 1]);
        let ascent = a.value < b.value;
        if ascent {
            ascents += 1;
        }
        if ascents == 2 || (ascents == 1 && b.value < first) {
            return j + 1;
        }
        if k > 1 {
            if ascent && (b.colour + k - a.colour) % k != 1 {
                return j + 1;
            }
            if !ascent && a.colour != b.colour {
                return j + 1;
            }
        }
    }
    n
}

/// `flip(pi, successor(pi))`.
pub fn successor_perm(pi: &ColouredPermutation) -> ColouredPermutation {
    let mut next = pi.clone();
    next.apply_flip(successor(pi));
    next
}

/// Iterator over the canonical listing by repeated application of
/// [`successor`], stopping when the start recurs.
#[derive(Debug, Clone)]
pub struct SuccessorWalk {
    start: ColouredPermutation,
    current: Option<ColouredPermutation>,
    remaining: u64,
}

impl SuccessorWalk {
    pub fn new(space: &PermSpace) -> Self {
        SuccessorWalk { start: space.identity(), current: Some(space.identity()), remaining: space.size() }
    }
}

impl Iterator for SuccessorWalk {
    type Item = ColouredPermutation;

    fn next(&mut self) -> Option<ColouredPermutation> {
        let cur = self.current.take()?;
        self.remaining = self.remaining.checked_sub(1)?;
        let next = successor_perm(&cur);
        if next != self.start {
            self.current = Some(next);
        }
        Some(cur)
    }
}

pub fn generate_by_successor(space: &PermSpace) -> Result<Listing> {
    check_budget("successor listing", space.size(), DEFAULT_BUDGET)?;
    let mut walk = SuccessorWalk::new(space);
    let perms: Vec<_> = walk.by_ref().collect();
    // the walk stops early only if the start failed to recur within size steps
    if walk.current.is_some() {
        return Err(Error::Invalid(format!(
            "successor walk did not return to the start within {} steps",
            space.size()
        )));
    }
    Ok(Listing::new(space.clone(), perms))
}

// ---------------------------------------------------------------------------
// Flip-sequence driven

/// Iterator over the listing from `start`, applying flips from a
/// [`LoopFreeState`]. Yields all `k^n * n!` permutations without storing them.
#[derive(Debug, Clone)]
pub struct FlipSeqWalk {
    flips: FlipSeqIter,
    current: Option<ColouredPermutation>,
}

impl FlipSeqWalk {
    pub fn new(start: ColouredPermutation) -> Self {
        FlipSeqWalk { flips: LoopFreeState::new(&start.space()).into_iter(), current: Some(start) }
    }

    pub fn canonical(space: &PermSpace) -> Self {
        Self::new(space.identity())
    }
}

impl Iterator for FlipSeqWalk {
    type Item = ColouredPermutation;

    fn next(&mut self) -> Option<ColouredPermutation> {
        let cur = self.current.take()?;
        if let Some(x) = self.flips.next() {
            let mut next = cur.clone();
            next.apply_flip(x);
            self.current = Some(next);
        }
        Some(cur)
    }
}

/// Visits the listing from `start` in place, one flip per step, then reports
/// the closing flip of length `n`. Returns the number of permutations visited.
pub fn walk_flipseq<V: ListingVisitor + ?Sized>(start: &ColouredPermutation, visitor: &mut V) -> u64 {
    let mut state = LoopFreeState::new(&start.space());
    let n = start.n();
    let mut current = start.clone();
    let mut count = 0u64;
    loop {
        visitor.visit(&current);
        count += 1;
        let x = state.advance().expect("state checked before each call");
        if x > n {
            break;
        }
        current.apply_flip(x);
    }
    visitor.close(n);
    count
}

pub fn generate_by_flipseq(start: &ColouredPermutation) -> Result<Listing> {
    let space = start.space();
    check_budget("flip sequence listing", space.size(), DEFAULT_BUDGET)?;
    let perms = FlipSeqWalk::new(start.clone()).collect();
    Ok(Listing::new(space, perms))
}

// ---------------------------------------------------------------------------

/// Generation method selector shared by the CLI and equivalence checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    GreedyMin,
    GreedyMax,
    Recursive,
    Successor,
    FlipSeq,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::GreedyMin, Method::GreedyMax, Method::Recursive, Method::Successor, Method::FlipSeq];

    pub fn name(self) -> &'static str {
        match self {
            Method::GreedyMin => "greedy-min",
            Method::GreedyMax => "greedy-max",
            Method::Recursive => "recursive",
            Method::Successor => "successor",
            Method::FlipSeq => "flipseq",
        }
    }

    /// Whether the method can start from an arbitrary permutation.
    pub fn accepts_start(self) -> bool {
        matches!(self, Method::Recursive | Method::FlipSeq)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse { token: s.to_string(), reason: "unknown generation method".into() })
    }
}

/// Materializes the listing produced by `method`. `start` defaults to the
/// identity and must be `None` for methods tied to the canonical start.
pub fn generate(space: &PermSpace, method: Method, start: Option<&ColouredPermutation>) -> Result<Listing> {
    if start.is_some() && !method.accepts_start() {
        return Err(Error::Invalid(format!("method {method} always starts at the identity")));
    }
    let identity = space.identity();
    let start = start.unwrap_or(&identity);
    if start.n() != space.n() || start.k() != space.k() {
        return Err(Error::Invalid(format!(
            "start permutation has n={}, k={}, expected n={}, k={}",
            start.n(),
            start.k(),
            space.n(),
            space.k()
        )));
    }
    match method {
        Method::GreedyMin => Ok(greedy(space, Priority::MinFlip)?.listing),
        Method::GreedyMax => Ok(greedy(space, Priority::MaxFlip)?.listing),
        Method::Recursive => rec_listing_of(start),
        Method::Successor => generate_by_successor(space),
        Method::FlipSeq => generate_by_flipseq(start),
    }
}

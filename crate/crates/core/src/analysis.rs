//! Hamilton cycle certificates and flip-length statistics.

use std::borrow::Borrow;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::mpsc;
use std::thread;

use bitvec::prelude::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::generation::{self, flip_between, FlipSeqWalk, Method, DEFAULT_BUDGET};
use crate::genseq::FlipSeqIter;
use crate::perm::{ColouredPermutation, PermSpace};

/// Bad transitions kept verbatim in a report; the rest are only counted.
pub const MAX_RECORDED_BAD: usize = 64;

/// Largest listing for which [`check_equivalence`] runs all generators.
pub const EQUIVALENCE_LIMIT: u64 = 1_000_000;

/// Largest listing whose flip sequence [`avg_flip_length`] sums explicitly.
pub const EMPIRICAL_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadTransition {
    /// 0-based index of the entry that could not be reached.
    pub index: u64,
    pub reason: String,
}

/// Outcome of checking a listing against `CPERMS(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub total_visited: u64,
    pub expected: u64,
    pub duplicates: u64,
    pub bad_transition_count: u64,
    /// At most [`MAX_RECORDED_BAD`] entries.
    pub bad_transitions: Vec<BadTransition>,
    pub cyclic_closure: bool,
    /// Length of the flip from the last entry back to the first.
    pub closing_flip: Option<usize>,
    pub is_hamilton_cycle: bool,
}

impl VerificationReport {
    fn finish(mut self) -> Self {
        self.is_hamilton_cycle = self.total_visited == self.expected
            && self.duplicates == 0
            && self.bad_transition_count == 0
            && self.cyclic_closure;
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total:{}", self.total_visited)?;
        writeln!(f, "expected:{}", self.expected)?;
        writeln!(f, "duplicates:{}", self.duplicates)?;
        writeln!(f, "bad_transitions:{}", self.bad_transition_count)?;
        for bad in &self.bad_transitions {
            writeln!(f, "bad:{}:{}", bad.index, bad.reason)?;
        }
        writeln!(f, "cyclic:{}", self.cyclic_closure)?;
        match self.closing_flip {
            Some(j) => writeln!(f, "closing_flip:{j}")?,
            None => writeln!(f, "closing_flip:none")?,
        }
        writeln!(f, "hamilton:{}", self.is_hamilton_cycle)
    }
}

impl FromStr for VerificationReport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn field<T: FromStr>(line: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| Error::Parse { token: line.to_string(), reason: "bad value".into() })
        }
        let mut report = VerificationReport {
            total_visited: 0,
            expected: 0,
            duplicates: 0,
            bad_transition_count: 0,
            bad_transitions: Vec::new(),
            cyclic_closure: false,
            closing_flip: None,
            is_hamilton_cycle: false,
        };
        for line in s.lines().filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse { token: line.to_string(), reason: "expected key:value".into() })?;
            match key {
                "total" => report.total_visited = field(line, value)?,
                "expected" => report.expected = field(line, value)?,
                "duplicates" => report.duplicates = field(line, value)?,
                "bad_transitions" => report.bad_transition_count = field(line, value)?,
                "bad" => {
                    let (index, reason) = value.split_once(':').unwrap_or((value, ""));
                    report.bad_transitions.push(BadTransition { index: field(line, index)?, reason: reason.into() });
                }
                "cyclic" => report.cyclic_closure = field(line, value)?,
                "closing_flip" => report.closing_flip = if value == "none" { None } else { Some(field(line, value)?) },
                "hamilton" => report.is_hamilton_cycle = field(line, value)?,
                _ => return Err(Error::Parse { token: line.to_string(), reason: "unknown key".into() }),
            }
        }
        Ok(report)
    }
}

enum VisitedSet {
    Bits(BitVec),
    Hashed(HashSet<u64>),
}

impl VisitedSet {
    fn new(size: u64) -> Self {
        if size <= DEFAULT_BUDGET {
            VisitedSet::Bits(bitvec![0; size as usize])
        } else {
            VisitedSet::Hashed(HashSet::new())
        }
    }

    /// Returns false if `index` was already present.
    fn insert(&mut self, index: u64) -> bool {
        match self {
            VisitedSet::Bits(bits) => !bits.replace(index as usize, true),
            VisitedSet::Hashed(set) => set.insert(index),
        }
    }
}

/// Checks that `perms` lists every permutation of `space` exactly once, each
/// reachable from its predecessor by one flip, with the last flipping back to
/// the first. Problems are reported, never raised.
pub fn verify_listing<I>(perms: I, space: &PermSpace) -> VerificationReport
where
    I: IntoIterator,
    I::Item: Borrow<ColouredPermutation>,
{
    let mut report = VerificationReport {
        total_visited: 0,
        expected: space.size(),
        duplicates: 0,
        bad_transition_count: 0,
        bad_transitions: Vec::new(),
        cyclic_closure: false,
        closing_flip: None,
        is_hamilton_cycle: false,
    };
    let record_bad = |report: &mut VerificationReport, index: u64, reason: String| {
        report.bad_transition_count += 1;
        if report.bad_transitions.len() < MAX_RECORDED_BAD {
            report.bad_transitions.push(BadTransition { index, reason });
        }
    };

    let mut visited = VisitedSet::new(space.size());
    let mut first: Option<ColouredPermutation> = None;
    let mut prev: Option<ColouredPermutation> = None;
    for item in perms {
        let perm = item.borrow();
        let index = report.total_visited;
        report.total_visited += 1;
        if perm.n() != space.n() || perm.k() != space.k() {
            let reason = format!("n={} k={} outside CPERMS({}, {})", perm.n(), perm.k(), space.n(), space.k());
            record_bad(&mut report, index, reason);
            continue;
        }
        if !visited.insert(perm.packed_index()) {
            report.duplicates += 1;
        }
        match &mut prev {
            None => prev = Some(perm.clone()),
            Some(p) => {
                if flip_between(p, perm).is_none() {
                    record_bad(&mut report, index, format!("{p} -> {perm} is not a flip"));
                }
                p.clone_from(perm);
            }
        }
        if first.is_none() {
            first = Some(perm.clone());
        }
    }
    if let (Some(first), Some(last)) = (&first, &prev) {
        report.closing_flip = flip_between(last, first);
        report.cyclic_closure = report.closing_flip.is_some();
    }
    report.finish()
}

/// Generates the listing from `start` on a producer thread and verifies it on
/// the calling thread through a channel holding at most `bound` permutations.
pub fn verify_pipelined(start: ColouredPermutation, bound: usize) -> VerificationReport {
    let space = start.space();
    let (tx, rx) = mpsc::sync_channel(bound);
    let producer = thread::spawn(move || {
        for p in FlipSeqWalk::new(start) {
            if tx.send(p).is_err() {
                break;
            }
        }
    });
    let report = verify_listing(rx, &space);
    producer.join().expect("producer thread panicked");
    report
}

/// True iff greedy-min, recursive, successor and flip-sequence generation give
/// identical listings from the identity.
pub fn check_equivalence(space: &PermSpace) -> Result<bool> {
    if space.size() > EQUIVALENCE_LIMIT {
        return Err(Error::Budget { what: "equivalence check", required: space.size(), budget: EQUIVALENCE_LIMIT });
    }
    let reference = generation::generate(space, Method::GreedyMin, None)?;
    for method in [Method::Recursive, Method::Successor, Method::FlipSeq] {
        if generation::generate(space, method, None)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Flip-length statistics

/// A rational interval containing `e^(1/k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl Enclosure {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }
}

/// Encloses `e^(1/k)` between a Maclaurin partial sum `S_N` (with `N` at
/// least `min_terms`) and `S_N` plus a geometric bound on the tail, widening
/// `N` until the width is at most `max_width`.
pub fn exp_inverse_enclosure(k: u32, min_terms: usize, max_width: &BigRational) -> Enclosure {
    let x = BigRational::new(BigInt::one(), BigInt::from(k));
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    let mut j = 0usize;
    loop {
        // next term x^(j+1)/(j+1)!, tail after S_j bounded by next / (1 - x/(j+2))
        let next = &term * &x / BigInt::from(j + 1);
        let ratio = &x / BigInt::from(j + 2);
        let tail = &next / (BigRational::one() - ratio);
        if j >= min_terms && &tail <= max_width {
            return Enclosure { upper: &sum + tail, lower: sum };
        }
        j += 1;
        sum += &next;
        term = next;
    }
}

/// Mean flip length over the closed flip sequence (the sequence plus the
/// closing flip of length `n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipStats {
    pub n: usize,
    pub k: u32,
    /// `sum_{j=0}^{n-1} 1 / (k^j j!)`.
    pub exact_average: BigRational,
    /// Sum of the closed flip sequence over `k^n n!`; `None` above [`EMPIRICAL_LIMIT`].
    pub empirical_average: Option<BigRational>,
    /// Contains `e^(1/k)`; width at most `1e-12`.
    pub bound: Enclosure,
}

impl FlipStats {
    /// Certified `exact_average < e^(1/k)`: the average lies below the
    /// enclosure's lower end.
    pub fn below_bound(&self) -> bool {
        self.exact_average < self.bound.lower
    }

    pub fn empirical_matches(&self) -> Option<bool> {
        self.empirical_average.as_ref().map(|e| *e == self.exact_average)
    }

    pub fn bound_f64(&self) -> f64 {
        (1.0 / f64::from(self.k)).exp()
    }
}

pub fn exact_average(n: usize, k: u32) -> BigRational {
    let mut sum = BigRational::zero();
    let mut denom = BigInt::one();
    for j in 0..n {
        if j > 0 {
            denom *= BigInt::from(k) * BigInt::from(j);
        }
        sum += BigRational::new(BigInt::one(), denom.clone());
    }
    sum
}

pub fn avg_flip_length(space: &PermSpace) -> FlipStats {
    let (n, k) = (space.n(), space.k());
    let exact = exact_average(n, k);
    let empirical = (space.size() <= EMPIRICAL_LIMIT).then(|| {
        let total: u64 = FlipSeqIter::new(space).map(|x| x as u64).sum::<u64>() + n as u64;
        BigRational::new(BigInt::from(total), BigInt::from(space.size()))
    });
    let width = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12)));
    FlipStats { n, k, exact_average: exact, empirical_average: empirical, bound: exp_inverse_enclosure(k, n, &width) }
}

/// Occurrences of each flip length `1..=n` in the closed flip sequence;
/// index 0 is unused.
pub fn flip_histogram(space: &PermSpace) -> Vec<u64> {
    let mut counts = vec![0u64; space.n() + 1];
    for x in FlipSeqIter::new(space) {
        counts[x] += 1;
    }
    counts[space.n()] += 1;
    counts
}

/// `value` as a decimal string truncated to `digits` fractional digits.
pub fn decimal(value: &BigRational, digits: usize) -> String {
    let negative = value.is_negative();
    let v = value.abs();
    let (numer, denom) = (v.numer(), v.denom());
    let whole = numer / denom;
    let mut rem = numer % denom;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        out.push('.');
        for _ in 0..digits {
            rem *= 10;
            let d = &rem / denom;
            rem %= denom;
            out.push_str(&d.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::{greedy, Priority};

    fn space(n: usize, k: u32) -> PermSpace {
        PermSpace::new(n, k).unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn greedy_min_certifies() {
        let out = greedy(&space(3, 3), Priority::MinFlip).unwrap();
        let report = verify_listing(out.listing.iter(), &space(3, 3));
        assert!(report.is_hamilton_cycle);
        assert_eq!(report.total_visited, 162);
        assert_eq!(report.closing_flip, Some(3));
    }

    #[test]
    fn mutated_listing_fails() {
        let sp = space(3, 2);
        let mut perms = generation::generate(&sp, Method::FlipSeq, None).unwrap().into_perms();
        perms[10] = perms[20].clone();
        let report = verify_listing(&perms, &sp);
        assert!(!report.is_hamilton_cycle);
        assert_eq!(report.duplicates, 1);
        assert!(report.bad_transition_count > 0);
        assert_eq!(report.bad_transitions[0].index, 10);
    }

    #[test]
    fn truncated_and_foreign_entries_fail() {
        let sp = space(3, 2);
        let perms = generation::generate(&sp, Method::FlipSeq, None).unwrap().into_perms();
        let report = verify_listing(&perms[..47], &sp);
        assert!(!report.is_hamilton_cycle);
        assert_eq!(report.total_visited, 47);
        let mut with_foreign = perms.clone();
        with_foreign.push(space(3, 3).identity());
        let report = verify_listing(&with_foreign, &sp);
        assert_eq!(report.bad_transition_count, 1);
        assert!(!report.is_hamilton_cycle);
    }

    #[test]
    fn max_flip_path_is_not_hamiltonian() {
        let out = greedy(&space(2, 3), Priority::MaxFlip).unwrap();
        let report = verify_listing(out.listing.iter(), &space(2, 3));
        assert_eq!(report.total_visited, 12);
        assert!(!report.is_hamilton_cycle);
    }

    #[test]
    fn report_text_round_trip() {
        let sp = space(2, 2);
        let mut perms = generation::generate(&sp, Method::FlipSeq, None).unwrap().into_perms();
        perms.swap(2, 5);
        let report = verify_listing(&perms, &sp);
        let text = report.to_string();
        assert!(text.starts_with("total:8\nexpected:8\nduplicates:0\n"));
        assert!(text.ends_with("hamilton:false\n"));
        assert_eq!(text.parse::<VerificationReport>().unwrap(), report);
    }

    #[test]
    fn pipelined_verification() {
        let report = verify_pipelined(space(5, 2).identity(), 16);
        assert!(report.is_hamilton_cycle);
        assert_eq!(report.total_visited, 3840);
    }

    #[test]
    fn averages() {
        for k in 1..=6 {
            assert_eq!(exact_average(1, k), BigRational::one());
        }
        let s22 = avg_flip_length(&space(2, 2));
        assert_eq!(s22.exact_average, ratio(3, 2));
        assert_eq!(s22.empirical_average, Some(ratio(12, 8)));
        assert!(s22.below_bound());
        assert!(exact_average(10, 1) < ratio(27_182_819, 10_000_000));
    }

    #[test]
    fn enclosure_contains_float_value() {
        let width = ratio(1, 1_000_000_000_000);
        for k in [1u32, 2, 3, 10] {
            let enc = exp_inverse_enclosure(k, 0, &width);
            assert!(enc.width() <= width);
            let approx = (1.0 / f64::from(k)).exp();
            let lo: f64 = decimal(&enc.lower, 15).parse().unwrap();
            let hi: f64 = decimal(&enc.upper, 15).parse().unwrap();
            assert!(lo <= approx + 1e-15 && approx <= hi + 1e-15, "k={k}");
        }
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(decimal(&ratio(3, 2), 3), "1.500");
        assert_eq!(decimal(&ratio(-1, 3), 4), "-0.3333");
        assert_eq!(decimal(&ratio(5, 1), 0), "5");
    }

    #[test]
    fn histogram_small() {
        // closed sequence for (2,2): 1,2,1,2,1,2,1,2
        assert_eq!(flip_histogram(&space(2, 2)), [0, 4, 4]);
        assert_eq!(flip_histogram(&space(1, 1)), [0, 1]);
    }

    #[test]
    fn equivalence_limit() {
        assert!(check_equivalence(&space(1, 1)).unwrap());
        assert!(matches!(check_equivalence(&space(10, 1)), Err(Error::Budget { .. })));
    }
}

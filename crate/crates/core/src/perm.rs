//! Coloured permutations and the operations the listing is built from.
//!
//! A coloured permutation over `{1..n}` with `k` colours is written in one-line
//! notation as tokens `v^c`, e.g. `5^1 6^2 1^0 7^1 3^1 4^1 2^1`. Colours are
//! 0-based. A flip of length `i` reverses the first `i` symbols and increments
//! their colours modulo `k`.

use std::fmt;

use crate::error::{Error, Result};

/// A value together with its colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColouredElement {
    pub value: u32,
    pub colour: u32,
}

impl ColouredElement {
    pub const fn new(value: u32, colour: u32) -> Self {
        ColouredElement { value, colour }
    }

    /// Colour incremented by `s` modulo `k`.
    #[inline]
    pub fn shifted(self, s: u32, k: u32) -> Self {
        let colour = ((u64::from(self.colour) + u64::from(s)) % u64::from(k)) as u32;
        ColouredElement { value: self.value, colour }
    }
}

impl fmt::Display for ColouredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.value, self.colour)
    }
}

/// The set of `k`-coloured permutations of `{1..n}`.
///
/// Construction fails unless `k^n * n!` fits in a `u64`, which caps `n` at 20.
/// The factorial and power tables are shared by ranking and index packing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermSpace {
    n: usize,
    k: u32,
    size: u64,
    factorial: Vec<u64>,
    power: Vec<u64>,
}

impl PermSpace {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        let capacity = || Error::Capacity { n, k: u64::from(k) };
        if n == 0 || k == 0 {
            return Err(capacity());
        }
        let mut factorial = vec![1u64; n + 1];
        let mut power = vec![1u64; n + 1];
        for t in 1..=n {
            factorial[t] = factorial[t - 1].checked_mul(t as u64).ok_or_else(capacity)?;
            power[t] = power[t - 1].checked_mul(u64::from(k)).ok_or_else(capacity)?;
        }
        let size = factorial[n].checked_mul(power[n]).ok_or_else(capacity)?;
        Ok(PermSpace { n, k, size, factorial, power })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `k^n * n!`, the number of coloured permutations.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `t!` for `0 <= t <= n`.
    pub fn factorial(&self, t: usize) -> u64 {
        self.factorial[t]
    }

    /// `k^t` for `0 <= t <= n`.
    pub fn power(&self, t: usize) -> u64 {
        self.power[t]
    }

    /// `1^0 2^0 ... n^0`, the head of the canonical listing.
    pub fn identity(&self) -> ColouredPermutation {
        ColouredPermutation { k: self.k, elems: (1..=self.n as u32).map(|v| ColouredElement::new(v, 0)).collect() }
    }

    /// `n^(k-1) (n-1)^(k-1) ... 1^(k-1)`, the tail of the canonical listing.
    pub fn reversed_top(&self) -> ColouredPermutation {
        ColouredPermutation {
            k: self.k,
            elems: (1..=self.n as u32).rev().map(|v| ColouredElement::new(v, self.k - 1)).collect(),
        }
    }
}

/// A `k`-coloured permutation of `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColouredPermutation {
    k: u32,
    elems: Vec<ColouredElement>,
}

impl ColouredPermutation {
    /// Validates that the values are exactly `1..=n` and every colour is below `k`.
    pub fn new(elems: Vec<ColouredElement>, k: u32) -> Result<Self> {
        PermSpace::new(elems.len(), k)?;
        check_elements(&elems, elems.len(), k)?;
        if elems.is_empty() {
            return Err(Error::Invalid("empty permutation".into()));
        }
        Ok(ColouredPermutation { k, elems })
    }

    /// Builds from `(value, colour)` pairs.
    pub fn from_pairs(pairs: &[(u32, u32)], k: u32) -> Result<Self> {
        Self::new(pairs.iter().map(|&(v, c)| ColouredElement::new(v, c)).collect(), k)
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn elements(&self) -> &[ColouredElement] {
        &self.elems
    }

    pub fn space(&self) -> PermSpace {
        PermSpace::new(self.n(), self.k).expect("validated on construction")
    }

    pub fn flip(&self, i: usize) -> Result<Self> {
        let mut out = self.clone();
        out.flip_in_place(i)?;
        Ok(out)
    }

    pub fn flip_in_place(&mut self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            return Err(Error::Range { what: "flip length", value: i as u64, min: 1, max: self.n() as u64 });
        }
        self.apply_flip(i);
        Ok(())
    }

    /// Unchecked flip for the generator hot loops; `i` must be in `1..=n`.
    #[inline]
    pub(crate) fn apply_flip(&mut self, i: usize) {
        debug_assert!(i >= 1 && i <= self.elems.len());
        let k = self.k;
        let prefix = &mut self.elems[..i];
        prefix.reverse();
        for e in prefix {
            e.colour += 1;
            if e.colour == k {
                e.colour = 0;
            }
        }
    }

    /// Injective packing into `0..k^n * n!`: Lehmer rank of the values times
    /// `k^n`, plus the colours read as base-`k` digits.
    pub fn packed_index(&self) -> u64 {
        let n = self.n();
        let k = u64::from(self.k);
        let mut lehmer = 0u64;
        let mut colours = 0u64;
        for (i, e) in self.elems.iter().enumerate() {
            let smaller_after = self.elems[i + 1..].iter().filter(|o| o.value < e.value).count() as u64;
            lehmer = lehmer * (n - i) as u64 + smaller_after;
            colours = colours * k + u64::from(e.colour);
        }
        let kn = k.pow(n as u32);
        lehmer * kn + colours
    }

    pub fn as_pre_perm(&self) -> PrePerm {
        PrePerm { n: self.n(), k: self.k, elems: self.elems.clone() }
    }

    /// Parses the canonical text form: `v^c` tokens separated by single spaces.
    pub fn parse(text: &str, k: u32) -> Result<Self> {
        let elems = parse_elements(text, k)?;
        let n = elems.len();
        PermSpace::new(n, k)?;
        let mut seen = vec![false; n + 1];
        for (token, e) in text.split(' ').zip(&elems) {
            if e.value as usize > n {
                return Err(parse_error(token, format!("value exceeds n = {n}")));
            }
            if std::mem::replace(&mut seen[e.value as usize], true) {
                return Err(parse_error(token, "duplicate value"));
            }
        }
        Ok(ColouredPermutation { k, elems })
    }
}

impl fmt::Display for ColouredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_elements(f, &self.elems)
    }
}

/// A prefix of some coloured permutation in `CPERMS(n, k)`.
///
/// The empty pre-perm is allowed; it arises as the `j - 1 = 0` window of a
/// single-symbol circular word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrePerm {
    n: usize,
    k: u32,
    elems: Vec<ColouredElement>,
}

impl PrePerm {
    pub fn new(elems: Vec<ColouredElement>, n: usize, k: u32) -> Result<Self> {
        PermSpace::new(n, k)?;
        check_elements(&elems, n, k)?;
        Ok(PrePerm { n, k, elems })
    }

    pub fn from_pairs(pairs: &[(u32, u32)], n: usize, k: u32) -> Result<Self> {
        Self::new(pairs.iter().map(|&(v, c)| ColouredElement::new(v, c)).collect(), n, k)
    }

    /// Parses the canonical token text as a pre-perm of `CPERMS(n, k)`.
    pub fn parse(text: &str, n: usize, k: u32) -> Result<Self> {
        Self::new(parse_elements(text, k)?, n, k)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn elements(&self) -> &[ColouredElement] {
        &self.elems
    }

    /// Every colour incremented by `s` modulo `k`.
    pub fn shift(&self, s: u64) -> PrePerm {
        let s = (s % u64::from(self.k)) as u32;
        PrePerm { n: self.n, k: self.k, elems: self.elems.iter().map(|e| e.shifted(s, self.k)).collect() }
    }

    /// Order reversed, colours untouched. Not a flip when `k > 1`.
    pub fn reverse(&self) -> PrePerm {
        PrePerm { n: self.n, k: self.k, elems: self.elems.iter().rev().copied().collect() }
    }

    /// The circular word `p^{+(k-1)} p^{+(k-2)} ... p^{+0}`.
    pub fn rho(&self) -> CircularWord {
        let k = self.k;
        let symbols = (0..k).rev().flat_map(|s| self.elems.iter().map(move |e| e.shifted(s, k))).collect();
        CircularWord { k, n: self.n, block_len: self.len(), symbols }
    }

    /// The length `j - 1` window of `rho(self)` ending with `r_{i-1}`, for
    /// `1 <= i <= k * j`. Indices are circular, so `r_0` is `r_m`.
    pub fn rho_sub(&self, i: usize) -> Result<PrePerm> {
        self.rho().window_before(i)
    }

    /// The pre-perm followed by `e`; `e`'s value must not already occur.
    pub(crate) fn push(&self, e: ColouredElement) -> PrePerm {
        let mut elems = self.elems.clone();
        elems.push(e);
        PrePerm { n: self.n, k: self.k, elems }
    }

    /// Reinterprets a full-length pre-perm as a permutation.
    pub fn into_permutation(self) -> Result<ColouredPermutation> {
        if self.elems.len() != self.n {
            return Err(Error::Invalid(format!(
                "pre-perm of length {} is not a permutation of 1..{}",
                self.elems.len(),
                self.n
            )));
        }
        Ok(ColouredPermutation { k: self.k, elems: self.elems })
    }
}

impl fmt::Display for PrePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_elements(f, &self.elems)
    }
}

/// `rho(p)` as a 1-indexed circular sequence `r_1 ... r_m`, `m = k * j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularWord {
    k: u32,
    n: usize,
    block_len: usize,
    symbols: Vec<ColouredElement>,
}

impl CircularWord {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[ColouredElement] {
        &self.symbols
    }

    /// Block `b` (0-indexed), equal to the base pre-perm shifted by `k - 1 - b`.
    pub fn block(&self, b: usize) -> &[ColouredElement] {
        &self.symbols[b * self.block_len..(b + 1) * self.block_len]
    }

    /// `r_i` with `i` taken modulo `m`, so `r_0 = r_m`.
    pub fn symbol(&self, i: usize) -> ColouredElement {
        let m = self.len();
        self.symbols[(i + m - 1) % m]
    }

    pub(crate) fn window_before(&self, i: usize) -> Result<PrePerm> {
        let m = self.len();
        if i == 0 || i > m {
            return Err(Error::Range { what: "circular index", value: i as u64, min: 1, max: m as u64 });
        }
        let w = self.block_len - 1;
        // r_{i-w} .. r_{i-1}, circular
        let elems = (0..w).map(|t| self.symbol(i + m - w + t)).collect();
        Ok(PrePerm { n: self.n, k: self.k, elems })
    }
}

impl fmt::Display for CircularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_elements(f, &self.symbols)
    }
}

fn write_elements(f: &mut fmt::Formatter<'_>, elems: &[ColouredElement]) -> fmt::Result {
    for (i, e) in elems.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

fn check_elements(elems: &[ColouredElement], n: usize, k: u32) -> Result<()> {
    if elems.len() > n {
        return Err(Error::Invalid(format!("{} symbols exceed n = {n}", elems.len())));
    }
    let mut seen = vec![false; n + 1];
    for e in elems {
        if e.value == 0 || e.value as usize > n {
            return Err(Error::Invalid(format!("value {} outside 1..={n}", e.value)));
        }
        if e.colour >= k {
            return Err(Error::Invalid(format!("colour {} of {} not below k = {k}", e.colour, e.value)));
        }
        if std::mem::replace(&mut seen[e.value as usize], true) {
            return Err(Error::Invalid(format!("value {} repeated", e.value)));
        }
    }
    Ok(())
}

fn parse_error(token: &str, reason: impl Into<String>) -> Error {
    Error::Parse { token: token.to_string(), reason: reason.into() }
}

fn parse_number(token: &str, digits: &str, what: &str) -> Result<u32> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(token, format!("{what} is not a decimal number")));
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return Err(parse_error(token, format!("{what} has a leading zero")));
    }
    digits.parse().map_err(|_| parse_error(token, format!("{what} too large")))
}

/// Token-level parse; checks colours against `k` but not value ranges.
fn parse_elements(text: &str, k: u32) -> Result<Vec<ColouredElement>> {
    if text.is_empty() {
        return Err(parse_error(text, "empty permutation"));
    }
    text.split(' ')
        .map(|token| {
            let (v, c) = token.split_once('^').ok_or_else(|| parse_error(token, "expected `value^colour`"))?;
            let value = parse_number(token, v, "value")?;
            let colour = parse_number(token, c, "colour")?;
            if value == 0 {
                return Err(parse_error(token, "values start at 1"));
            }
            if colour >= k {
                return Err(parse_error(token, format!("colour must be below k = {k}")));
            }
            Ok(ColouredElement::new(value, colour))
        })
        .collect()
}

//! Ranking and unranking in the canonical listing from `1^0 2^0 ... n^0`.
//!
//! The listing splits into `nk` blocks of `k^(n-1) (n-1)!` permutations, one
//! per final symbol. The block index follows from the last symbol `v^c` as
//! `n(c+1) - v`; inside the block the first `n - 1` symbols are relabelled onto
//! the listing of `CPERMS(n-1, k)` and ranked recursively.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{ColouredElement, ColouredPermutation, PermSpace};

/// A 1-based position in the canonical listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(u64);

impl Rank {
    pub fn new(value: u64, space: &PermSpace) -> Result<Self> {
        if value == 0 || value > space.size() {
            return Err(Error::Range { what: "rank", value, min: 1, max: space.size() });
        }
        Ok(Rank(value))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of `pi` in the canonical listing, in `O(n^2)`.
pub fn rank(pi: &ColouredPermutation) -> Rank {
    let space = pi.space();
    let k = u64::from(pi.k());
    let mut values: Vec<u64> = pi.elements().iter().map(|e| u64::from(e.value)).collect();
    let mut colours: Vec<u64> = pi.elements().iter().map(|e| u64::from(e.colour)).collect();

    let mut r = 0u64;
    for t in (2..=pi.n()).rev() {
        let (last_value, last_colour) = (values[t - 1], colours[t - 1]);
        let tt = t as u64;
        for j in 0..t - 1 {
            colours[j] = if values[j] < last_value {
                (colours[j] + k - last_colour) % k
            } else {
                (colours[j] + 2 * k - last_colour - 1) % k
            };
            values[j] = (values[j] + tt - last_value) % tt;
        }
        let block = (last_colour + 1) * tt - last_value;
        r += block * space.factorial(t - 1) * space.power(t - 1);
    }
    Rank(r + colours[0] + 1)
}

/// The permutation at position `rank` of the canonical listing of `space`.
pub fn unrank(rank: u64, space: &PermSpace) -> Result<ColouredPermutation> {
    let mut rank = Rank::new(rank, space)?.get();
    let n = space.n();
    let k = u64::from(space.k());

    // block index of each suffix position, outermost first
    let mut blocks = vec![0u64; n + 1];
    for t in (2..=n).rev() {
        let block_size = space.factorial(t - 1) * space.power(t - 1);
        let x = (rank - 1) / block_size;
        rank -= x * block_size;
        blocks[t] = x;
    }

    let mut values = vec![0u64; n];
    let mut colours = vec![0u64; n];
    values[0] = 1;
    colours[0] = rank - 1;
    for t in 2..=n {
        let tt = t as u64;
        let x = blocks[t];
        let (vt, ct) = (tt - x % tt, x / tt);
        values[t - 1] = vt;
        colours[t - 1] = ct;
        for j in 0..t - 1 {
            values[j] = 1 + (values[j] + vt - 1) % tt;
            colours[j] = if values[j] < vt { (colours[j] + ct) % k } else { (colours[j] + ct + 1) % k };
        }
    }

    let elems = values.into_iter().zip(colours).map(|(v, c)| ColouredElement::new(v as u32, c as u32)).collect();
    ColouredPermutation::new(elems, space.k())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(text: &str, k: u32) -> ColouredPermutation {
        ColouredPermutation::parse(text, k).unwrap()
    }

    #[test]
    fn worked_example() {
        let p = perm("1^0 3^1 2^2", 3);
        assert_eq!(rank(&p).get(), 138);
        let space = PermSpace::new(3, 3).unwrap();
        assert_eq!(unrank(138, &space).unwrap(), p);
        // the recursive step lands on rank 12 of CPERMS(2, 3)
        let inner = PermSpace::new(2, 3).unwrap();
        assert_eq!(unrank(12, &inner).unwrap(), perm("2^1 1^1", 3));
        assert_eq!(rank(&perm("2^1 1^1", 3)).get(), 12);
    }

    #[test]
    fn ends_of_the_listing() {
        for (n, k) in [(1, 1), (1, 5), (3, 3), (6, 2), (20, 1), (15, 2), (9, 4)] {
            let space = PermSpace::new(n, k).unwrap();
            assert_eq!(rank(&space.identity()).get(), 1);
            assert_eq!(unrank(1, &space).unwrap(), space.identity());
            assert_eq!(unrank(space.size(), &space).unwrap(), space.reversed_top());
            assert_eq!(rank(&space.reversed_top()).get(), space.size());
        }
    }

    #[test]
    fn out_of_range() {
        let space = PermSpace::new(3, 3).unwrap();
        assert!(matches!(unrank(0, &space), Err(Error::Range { .. })));
        assert!(matches!(unrank(163, &space), Err(Error::Range { value: 163, max: 162, .. })));
        assert!(unrank(162, &space).is_ok());
    }
}

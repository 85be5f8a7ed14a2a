//! A Hamilton cycle in the k-sided pancake network.
//!
//! The vertices are `k`-coloured permutations of `{1..n}`; an edge applies a
//! flip, reversing a prefix and incrementing its colours modulo `k`. The crate
//! builds one cyclic flip Gray code over all `k^n * n!` vertices in four ways
//! (greedy min-flip, recursive, successor rule, loop-free flip sequence), ranks
//! and unranks within it, and certifies listings as Hamilton cycles.
//!
//! ```
//! use kpancake::{rank, unrank, successor, ColouredPermutation, PermSpace};
//!
//! let space = PermSpace::new(3, 3).unwrap();
//! let pi = ColouredPermutation::parse("1^0 3^1 2^2", 3).unwrap();
//! assert_eq!(rank(&pi).get(), 138);
//! assert_eq!(unrank(138, &space).unwrap(), pi);
//! assert_eq!(successor(&space.reversed_top()), 3);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod generation;
pub mod genseq;
pub mod perm;
pub mod rank;

pub use analysis::{avg_flip_length, check_equivalence, verify_listing, FlipStats, VerificationReport};
pub use error::{Error, Result};
pub use generation::{
    generate, generate_by_flipseq, generate_by_successor, greedy, rec_listing, rec_listing_of, successor,
    successor_perm, FlipSeqWalk, GreedyOutcome, Listing, ListingVisitor, Method, Priority,
};
pub use genseq::{sigma_recursive, FlipSeqIter, FlipSequence, LoopFreeState};
pub use perm::{CircularWord, ColouredElement, ColouredPermutation, PermSpace, PrePerm};
pub use rank::{rank, unrank, Rank};

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use kpancake::analysis::{exact_average, flip_histogram, verify_pipelined};
use kpancake::generation::{greedy, successor_perm, Priority};
use kpancake::genseq::LoopFreeState;
use kpancake::{
    check_equivalence, generate, rec_listing_of, sigma_recursive, verify_listing, ColouredPermutation, Method,
    PermSpace,
};

fn space(n: usize, k: u32) -> PermSpace {
    PermSpace::new(n, k).unwrap()
}

#[test]
fn greedy_min_takes_the_shortest_unvisited_flip() {
    for (n, k) in [(3, 3), (4, 2), (5, 1), (3, 4)] {
        let out = greedy(&space(n, k), Priority::MinFlip).unwrap();
        let mut seen: HashSet<ColouredPermutation> = HashSet::new();
        for (i, pair) in out.listing.perms().windows(2).enumerate() {
            seen.insert(pair[0].clone());
            let j = out.flips[i];
            assert_eq!(pair[0].flip(j).unwrap(), pair[1]);
            for shorter in 1..j {
                assert!(seen.contains(&pair[0].flip(shorter).unwrap()), "({n},{k}) step {i} skipped flip {shorter}");
            }
        }
    }
}

#[test]
fn successor_is_a_single_cycle() {
    for (n, k) in [(1, 1), (1, 4), (3, 1), (4, 1), (3, 2), (4, 2), (3, 3), (2, 5)] {
        let sp = space(n, k);
        let mut preimages: HashMap<ColouredPermutation, u32> = HashMap::new();
        let all: Vec<_> = (1..=sp.size()).map(|r| kpancake::unrank(r, &sp).unwrap()).collect();
        for p in &all {
            *preimages.entry(successor_perm(p)).or_default() += 1;
        }
        assert_eq!(preimages.len() as u64, sp.size(), "({n},{k}) not a bijection");

        let start = sp.identity();
        let mut cur = successor_perm(&start);
        let mut steps = 1u64;
        while cur != start {
            cur = successor_perm(&cur);
            steps += 1;
            assert!(steps <= sp.size());
        }
        assert_eq!(steps, sp.size(), "({n},{k}) cycle length");
    }
}

#[test]
fn max_flip_fails_only_for_k_above_two() {
    for k in 1..=2 {
        for n in 1..=5 {
            assert!(greedy(&space(n, k), Priority::MaxFlip).unwrap().exhaustive, "({n},{k})");
        }
    }
    for k in 3..=5 {
        assert!(!greedy(&space(2, k), Priority::MaxFlip).unwrap().exhaustive, "(2,{k})");
    }
}

#[test]
fn histogram_counts_the_flip_sequence() {
    for (n, k) in [(1, 3), (3, 1), (4, 2), (3, 3), (5, 1)] {
        let sp = space(n, k);
        let mut expected = vec![0u64; n + 1];
        for x in sigma_recursive(&sp).unwrap().closed() {
            expected[x] += 1;
        }
        assert_eq!(flip_histogram(&sp), expected, "({n},{k})");
        assert_eq!(expected.iter().sum::<u64>(), sp.size());
        // closed cycle: kn flips of length n, and (kj - 1) k^(n-j) n!/j! of each j < n
        let fact = |m: usize| (1..=m as u64).product::<u64>();
        let pow = |e: usize| u64::from(k).pow(e as u32);
        for (j, &got) in expected.iter().enumerate().take(n).skip(1) {
            let count = (u64::from(k) * j as u64 - 1) * pow(n - j) * fact(n) / fact(j);
            assert_eq!(got, count, "({n},{k}) j={j}");
        }
        assert_eq!(expected[n], u64::from(k) * n as u64);
    }
}

#[test]
fn average_grows_by_the_next_series_term() {
    for k in 1..=6u32 {
        for n in 1..=10usize {
            let step = exact_average(n + 1, k) - exact_average(n, k);
            let denom = BigInt::from(k).pow(n as u32) * (1..=n as u64).map(BigInt::from).product::<BigInt>();
            assert_eq!(step, BigRational::new(BigInt::from(1), denom), "n={n} k={k}");
        }
    }
}

#[test]
fn counters_stay_below_kx() {
    for (n, k) in [(6, 1), (4, 2), (3, 4), (2, 9)] {
        let mut st = LoopFreeState::new(&space(n, k));
        while !st.is_terminated() {
            st.advance().unwrap();
            for x in 1..=n + 1 {
                assert!(st.counter(x) < u64::from(k) * x as u64, "({n},{k}) c_{x}");
            }
        }
    }
}

#[test]
fn recursive_listing_from_other_starts() {
    for (text, k) in [("2^1 3^0 1^2", 3), ("4^1 1^0 3^1 2^0", 2), ("3^0 1^0 2^0", 1)] {
        let start = ColouredPermutation::parse(text, k).unwrap();
        let sp = start.space();
        let rec = rec_listing_of(&start).unwrap();
        assert_eq!(rec.first(), Some(&start));
        let flipseq = generate(&sp, Method::FlipSeq, Some(&start)).unwrap();
        assert_eq!(rec, flipseq, "{text}");
        let report = verify_listing(&rec, &sp);
        assert!(report.is_hamilton_cycle, "{report}");
        assert_eq!(report.closing_flip, Some(sp.n()));
    }
}

#[test]
fn broken_listings_are_reported() {
    let sp = space(3, 2);
    let mut perms = generate(&sp, Method::FlipSeq, None).unwrap().into_perms();

    perms.swap(5, 9);
    let report = verify_listing(&perms, &sp);
    assert!(!report.is_hamilton_cycle);
    assert!(report.bad_transition_count > 0);
    assert_eq!(report.duplicates, 0);
    perms.swap(5, 9);

    perms[10] = perms[3].clone();
    let report = verify_listing(&perms, &sp);
    assert_eq!(report.duplicates, 1);
    assert!(!report.is_hamilton_cycle);

    let short = &perms[..20];
    let report = verify_listing(short, &sp);
    assert_eq!(report.total_visited, 20);
    assert!(!report.is_hamilton_cycle);
}

#[test]
fn report_survives_a_text_round_trip() {
    let sp = space(3, 2);
    let mut perms = generate(&sp, Method::Recursive, None).unwrap().into_perms();
    perms.swap(1, 2);
    let report = verify_listing(&perms, &sp);
    let parsed: kpancake::VerificationReport = report.to_string().parse().unwrap();
    assert_eq!(parsed, report);
}

#[test]
fn pipelined_verification_agrees() {
    for (n, k) in [(5, 2), (4, 3), (7, 1)] {
        let sp = space(n, k);
        let report = verify_pipelined(sp.identity(), 64);
        assert!(report.is_hamilton_cycle, "({n},{k})");
        assert_eq!(report.total_visited, sp.size());
    }
}

#[test]
fn equivalence_check_up_to_a_few_thousand() {
    for (n, k) in [(5, 2), (4, 3), (6, 1), (3, 5)] {
        assert!(check_equivalence(&space(n, k)).unwrap(), "({n},{k})");
    }
}

//! End-to-end checks of the normalization pipeline: every valid graph is
//! driven by recorded moves to the canonical representative of its
//! invariant, and the recording survives serialization and independent
//! replay.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reebcob::enumerate::{enumerate_classes, random_graph};
use reebcob::iso::canonical_key;
use reebcob::moves::{canonical, decode_trace, encode_trace, normalize};
use reebcob::Sigma;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn normalization_lands_on_the_canonical_representative(seed in 0u64..100_000, size_pick in 0usize..7) {
        let n = [0usize, 2, 3, 5, 7, 9, 12][size_pick];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(n, &mut rng);
        let sigma = g.sigma().unwrap();

        let outcome = normalize(&g).unwrap();
        prop_assert_eq!(outcome.sigma, sigma);
        // Vertex ids of the endpoint are artifacts of the rewriting; the
        // shape and the heights must match the canonical representative.
        prop_assert_eq!(canonical_key(outcome.normalized()), canonical_key(&canonical(sigma)));
        let mut end_heights: Vec<_> = outcome
            .normalized()
            .vertex_ids()
            .map(|v| outcome.normalized().height(v).clone())
            .collect();
        end_heights.sort();
        let canon = canonical(sigma);
        let mut canon_heights: Vec<_> =
            canon.vertex_ids().map(|v| canon.height(v).clone()).collect();
        canon_heights.sort();
        prop_assert_eq!(end_heights, canon_heights);
        prop_assert_eq!(&outcome.trace.start, &g);
        outcome.verify().unwrap();

        // Deterministic, and stable through the text encoding.
        let again = normalize(&g).unwrap();
        prop_assert_eq!(&again.trace, &outcome.trace);
        let decoded = decode_trace(&encode_trace(&outcome.trace)).unwrap();
        prop_assert_eq!(&decoded, &outcome.trace);
        decoded.replay().unwrap();
    }
}

/// Two graphs normalize to equivalent endpoints exactly when their
/// invariants agree, across every class with at most five vertices.
#[test]
fn endpoints_coincide_exactly_on_matching_invariants() {
    let reps = enumerate_classes(5);
    let normalized: Vec<(Sigma, reebcob::iso::CanonicalKey)> = reps
        .iter()
        .map(|g| {
            let out = normalize(g).unwrap();
            out.verify().unwrap();
            (out.sigma, canonical_key(out.normalized()))
        })
        .collect();
    for (i, (sa, ka)) in normalized.iter().enumerate() {
        for (sb, kb) in &normalized[i + 1..] {
            assert_eq!(sa == sb, ka == kb, "endpoint mismatch for reps {i}");
        }
    }
}

/// The canonical representatives themselves are fixed points: normalizing
/// one returns a trace that ends where it started.
#[test]
fn canonical_representatives_are_fixed_points() {
    for t in -5i64..=5 {
        for d in 0u8..=1 {
            let sigma = Sigma { t, d };
            let g = canonical(sigma);
            assert_eq!(g.sigma().unwrap(), sigma);
            let out = normalize(&g).unwrap();
            assert_eq!(out.normalized(), &g);
            assert_eq!(canonical_key(out.normalized()), canonical_key(&g));
            out.verify().unwrap();
        }
    }
}

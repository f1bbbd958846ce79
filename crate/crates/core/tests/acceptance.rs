//! Acceptance gate for the whole pipeline, one test per criterion.
//!
//! Run with `cargo test --test acceptance`; each criterion reports exactly
//! one pass/fail line.  The checks are combinatorial and tolerance-free:
//! invariants must match exactly, searches must be exhaustive within their
//! stated caps, and runtime ceilings are asserted where a criterion carries
//! one.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reebcob::cobordism::{ClassOrder, Cobordance, CobordismClass};
use reebcob::enumerate::{enumerate_classes, random_graph};
use reebcob::fixtures::{by_name, FIXTURES};
use reebcob::iso::{canonical_key, is_isomorphic};
use reebcob::moves::{all_sites, apply, canonical, normalize};
use reebcob::reachability::reachable_classes;
use reebcob::surface::{extract_reeb, ReebExtraction, VertexFunction};
use reebcob::{Height, ReebFunction, Sigma, VertexId, VertexModel};

/// Shared corpus for the move-invariance and normalization criteria:
/// one thousand randomly grown graphs with up to twelve vertices.
fn corpus() -> Vec<ReebFunction> {
    let sizes = [0usize, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12];
    (0..1000u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(9000 + i);
            random_graph(sizes[i as usize % sizes.len()], &mut rng)
        })
        .collect()
}

/// An order-preserving height change: stretch all heights, then re-seat
/// every component at its own offset so components interleave differently.
fn reparametrized(g: &ReebFunction, rng: &mut impl Rng) -> ReebFunction {
    let comps = g.components();
    let stride = (g.vertex_count() as i64).max(comps.len() as i64).max(1) * 4;
    let mut offsets: Vec<i64> = (0..comps.len() as i64).collect();
    for i in (1..offsets.len()).rev() {
        offsets.swap(i, rng.gen_range(0..=i));
    }
    let mut heights: BTreeMap<VertexId, Height> = BTreeMap::new();
    for (comp, offset) in comps.into_iter().zip(offsets) {
        let mut vs: Vec<VertexId> = comp.into_iter().collect();
        vs.sort_by(|a, b| g.height(*a).cmp(g.height(*b)));
        for (rank, v) in vs.into_iter().enumerate() {
            heights.insert(v, Height::from_int(rank as i64 * stride + offset));
        }
    }
    g.with_heights(&heights)
}

fn degree_census(g: &ReebFunction) -> (i64, i64, i64) {
    let (mut deg1, mut deg2, mut deg3) = (0i64, 0i64, 0i64);
    for v in g.vertex_ids() {
        match g.classify(v).expect("valid graph") {
            VertexModel::Extremum(_) => deg1 += 1,
            VertexModel::PassThrough => deg2 += 1,
            VertexModel::Fork(_) => deg3 += 1,
        }
    }
    (deg1, deg2, deg3)
}

fn class_of(ext: &ReebExtraction) -> CobordismClass {
    CobordismClass::of(&ext.graph).expect("extracted graph is valid")
}

fn pass_line(number: u32, name: &str, elapsed: Duration, detail: &str) {
    println!("criterion {number} ({name}): PASS in {elapsed:.2?} — {detail}");
}

#[test]
fn c1_sigma_invariant_under_every_move_and_reparametrization() {
    let start = Instant::now();
    let graphs = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut site_count = 0usize;
    for g in &graphs {
        let sigma = g.sigma().unwrap();
        for site in all_sites(g) {
            let out = apply(g, &site).unwrap();
            assert_eq!(out.graph.sigma().unwrap(), sigma, "after {site:?}");
            site_count += 1;
        }
        let re = reparametrized(g, &mut rng);
        assert_eq!(re.sigma().unwrap(), sigma);
        assert!(is_isomorphic(g, &re), "reparametrization changed the class of {g:?}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "budget exceeded: {elapsed:.2?}");
    pass_line(
        1,
        "invariance under moves",
        elapsed,
        &format!("{} graphs, {site_count} move sites", graphs.len()),
    );
}

#[test]
fn c2_normalization_reaches_canonical_form_with_replayable_traces() {
    let start = Instant::now();
    let graphs = corpus();
    let mut move_total = 0usize;
    for g in &graphs {
        let sigma = g.sigma().unwrap();
        let out = normalize(g).unwrap();
        assert_eq!(out.sigma, sigma);
        assert!(
            is_isomorphic(out.normalized(), &canonical(sigma)),
            "normalization missed the canonical form for {g:?}"
        );
        out.verify().unwrap();
        move_total += out.trace.move_count();
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "budget exceeded: {elapsed:.2?}");
    pass_line(
        2,
        "normalization completeness",
        elapsed,
        &format!("{} graphs, {move_total} recorded moves, every trace replayed", graphs.len()),
    );
}

#[test]
fn c3_move_reachability_classes_are_exactly_the_invariant_fibers() {
    let start = Instant::now();
    let reps = enumerate_classes(6);
    let mut fibers: BTreeMap<(i64, u8), Vec<&ReebFunction>> = BTreeMap::new();
    for g in &reps {
        let s = g.sigma().unwrap();
        fibers.entry((s.t, s.d)).or_default().push(g);
    }
    let mut explored = 0usize;
    for (&(t, d), members) in &fibers {
        let sigma = Sigma { t, d };
        // Exhaustive breadth-first search over all classes with at most
        // eight vertices, starting from the canonical representative.  Two
        // extra vertices of room are required: six-vertex classes of equal
        // invariant are connected, but some pairs only through eight-vertex
        // intermediates.
        let set = reachable_classes(&canonical(sigma), 8, 200_000);
        assert!(set.exhausted, "search for {sigma} hit the class budget");
        for key in &set.classes {
            assert_eq!(key.sigma(), sigma, "a move escaped the {sigma} fiber");
        }
        for member in members {
            assert!(
                set.classes.contains(&canonical_key(member)),
                "class of {member:?} not reachable from the canonical form of {sigma}"
            );
        }
        explored += set.classes.len();
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "budget exceeded: {elapsed:.2?}");
    pass_line(
        3,
        "reachability matches invariant fibers",
        elapsed,
        &format!(
            "{} classes in {} fibers, {explored} classes explored exhaustively",
            reps.len(),
            fibers.len()
        ),
    );
}

#[test]
fn c4_euler_characteristic_identity_on_all_fixtures() {
    let start = Instant::now();
    let mut runs = 0usize;
    for fixture in FIXTURES {
        let surface = fixture.surface();
        let chi = surface.euler_characteristic();
        let mut rng = ChaCha8Rng::seed_from_u64(4000);
        let mut functions = vec![fixture.function()];
        functions.extend((0..100).map(|_| VertexFunction::random_generic(&surface, &mut rng)));
        for f in &functions {
            let ext = extract_reeb(&surface, f).unwrap();
            let (deg1, deg2, deg3) = degree_census(&ext.graph);
            assert_eq!(chi, deg1 - deg2 - deg3, "{}: Euler identity", fixture.name);
            runs += 1;
        }
    }
    pass_line(4, "Euler characteristic identity", start.elapsed(), &format!("{runs} extractions"));
}

#[test]
fn c5_pass_throughs_occur_only_and_actually_on_nonorientable_surfaces() {
    let start = Instant::now();
    let mut runs = 0usize;
    for fixture in FIXTURES {
        let surface = fixture.surface();
        let mut rng = ChaCha8Rng::seed_from_u64(5000);
        let mut functions = vec![fixture.function()];
        functions.extend((0..100).map(|_| VertexFunction::random_generic(&surface, &mut rng)));
        let mut passes_seen = 0i64;
        for f in &functions {
            let ext = extract_reeb(&surface, f).unwrap();
            let (_, deg2, _) = degree_census(&ext.graph);
            if surface.is_orientable() {
                assert_eq!(deg2, 0, "{}: pass-through on an orientable surface", fixture.name);
            }
            passes_seen += deg2;
            runs += 1;
        }
        if !surface.is_orientable() {
            assert!(passes_seen > 0, "{}: no pass-through ever appeared", fixture.name);
        }
    }
    pass_line(5, "orientability barrier", start.elapsed(), &format!("{runs} extractions"));
}

#[test]
fn c6_generators_and_element_orders() {
    let start = Instant::now();

    let rp2 = by_name("projective-six").unwrap();
    let rp2_ext = extract_reeb(&rp2.surface(), &rp2.function()).unwrap();
    let b = class_of(&rp2_ext);
    assert_eq!(b, CobordismClass::new(0, 1));
    assert_eq!(b.order(), ClassOrder::Two);
    assert_eq!(b.compose(b), CobordismClass::identity());

    // Doubling the projective-plane graph cancels the twist: its
    // normalization must land on the trivial canonical form.
    let doubled = rp2_ext.graph.disjoint_union(&rp2_ext.graph);
    let out = normalize(&doubled).unwrap();
    assert_eq!(out.sigma, Sigma { t: 0, d: 0 });
    assert!(is_isomorphic(out.normalized(), &canonical(Sigma { t: 0, d: 0 })));
    out.verify().unwrap();

    let sphere = by_name("octahedron").unwrap();
    let sphere_ext = extract_reeb(&sphere.surface(), &sphere.function()).unwrap();
    let a = class_of(&sphere_ext);
    assert_eq!(a, CobordismClass::new(1, 0));
    assert_eq!(a.order(), ClassOrder::Infinite);
    assert_eq!([a, b], CobordismClass::generators());

    // k-fold disjoint unions realize (k, 0), all pairwise distinct.
    let mut classes = vec![CobordismClass::identity()];
    let mut stack = sphere_ext.graph.clone();
    for k in 1..=5i64 {
        assert_eq!(CobordismClass::of(&stack).unwrap(), CobordismClass::new(k, 0));
        classes.push(CobordismClass::of(&stack).unwrap());
        stack = stack.disjoint_union(&sphere_ext.graph);
    }
    for (i, x) in classes.iter().enumerate() {
        for y in &classes[i + 1..] {
            assert_ne!(x, y);
        }
    }
    assert_eq!(CobordismClass::identity().order(), ClassOrder::One);
    pass_line(6, "generators and orders", start.elapsed(), "both generators verified");
}

#[test]
fn c7_realization_round_trip() {
    let start = Instant::now();
    let mut cases = 0usize;
    for t in -5i64..=5 {
        for d in 0u8..=1 {
            let class = CobordismClass::new(t, d);
            // Graph-level: the canonical representative carries the class.
            assert_eq!(CobordismClass::of(&class.realize()).unwrap(), class);
            // Surface-level: build an actual triangulated surface with a
            // vertex function, extract, and recover the class exactly.
            let (surface, f) = class.realize_surface();
            assert!(f.is_generic(&surface));
            let ext = extract_reeb(&surface, &f).unwrap();
            assert_eq!(class_of(&ext), class, "round trip failed for {class}");
            // The decision procedure agrees and its certificate replays.
            let verdict = Cobordance::decide(&ext.graph, &class.realize()).unwrap();
            assert!(verdict.cobordant());
            verdict.verify().unwrap();
            cases += 1;
        }
    }
    pass_line(7, "realization round trip", start.elapsed(), &format!("{cases} classes"));
}

#[test]
fn c8_sign_flip_negates_the_fork_surplus_and_keeps_parity() {
    let start = Instant::now();
    let mut runs = 0usize;
    for fixture in FIXTURES {
        let surface = fixture.surface();
        let mut rng = ChaCha8Rng::seed_from_u64(8000);
        let mut functions = vec![fixture.function()];
        functions.extend((0..100).map(|_| VertexFunction::random_generic(&surface, &mut rng)));
        for f in &functions {
            let sigma = extract_reeb(&surface, f).unwrap().graph.sigma().unwrap();
            let negated = VertexFunction::new(f.values().iter().map(Height::negated).collect());
            let flipped = extract_reeb(&surface, &negated).unwrap().graph.sigma().unwrap();
            assert_eq!((flipped.t, flipped.d), (-sigma.t, sigma.d), "{}", fixture.name);
            runs += 1;
        }
    }
    pass_line(8, "sign flip", start.elapsed(), &format!("{runs} function pairs"));
}

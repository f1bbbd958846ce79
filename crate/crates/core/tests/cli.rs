//! End-to-end tests of the command-line interface: every subcommand, the
//! documented exit codes, and the pipeline identities between them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use reebcob::cobordism::CobordismClass;
use reebcob::iso::is_isomorphic;
use reebcob::moves::{canonical, decode_trace};
use reebcob::{codec, Sigma};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reebcob"))
}

fn fixture_path(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(file)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn assert_code(out: &Output, want: i32) {
    assert_eq!(
        out.status.code(),
        Some(want),
        "stdout:\n{}\nstderr:\n{}",
        stdout(out),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn validate_accepts_every_fixture_surface_and_function() {
    for name in ["tetrahedron", "octahedron", "torus-seven", "projective-six", "klein-nine"] {
        let out = run(&[
            "validate",
            "--surface",
            fixture_path(&format!("{name}.off")).to_str().unwrap(),
            "--values",
            fixture_path(&format!("{name}.values")).to_str().unwrap(),
        ]);
        assert_code(&out, 0);
        assert!(stdout(&out).contains("closed surface"), "{name}");
        assert!(stdout(&out).contains("generic vertex function"), "{name}");
    }
}

#[test]
fn extract_report_matches_the_frozen_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let report = dir.path().join("r.json");
    let out = run(&[
        "extract",
        "--surface",
        fixture_path("projective-six.off").to_str().unwrap(),
        "--values",
        fixture_path("projective-six.values").to_str().unwrap(),
        "--out",
        graph.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert_eq!(stdout(&out).trim(), r#"{"t":0,"d":1}"#);

    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let frozen: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixture_path("projective-six.report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(written, frozen);

    // Pipeline identity: `sigma` on the extracted document prints the same
    // invariant the extraction reported.
    let sig = run(&["sigma", "--graph", graph.to_str().unwrap()]);
    assert_code(&sig, 0);
    assert_eq!(stdout(&sig).trim(), stdout(&out).trim());
}

#[test]
fn extract_is_deterministic_and_defaults_to_z_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for out_path in [&first, &second] {
        let out = run(&[
            "extract",
            "--surface",
            fixture_path("torus-seven.off").to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_code(&out, 0);
        assert_eq!(stdout(&out).trim(), r#"{"t":0,"d":0}"#);
    }
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap(),
        "identical inputs must produce identical documents"
    );
}

#[test]
fn normalize_self_check_lands_on_the_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let canon = dir.path().join("c.json");
    let trace = dir.path().join("t.json");
    assert_code(
        &run(&[
            "extract",
            "--surface",
            fixture_path("klein-nine.off").to_str().unwrap(),
            "--values",
            fixture_path("klein-nine.values").to_str().unwrap(),
            "--out",
            graph.to_str().unwrap(),
        ]),
        0,
    );
    let out = run(&[
        "normalize",
        "--graph",
        graph.to_str().unwrap(),
        "--out",
        canon.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--self-check",
    ]);
    assert_code(&out, 0);
    assert_eq!(stdout(&out).trim(), r#"{"t":0,"d":0}"#);

    let written = codec::decode(&std::fs::read_to_string(&canon).unwrap()).unwrap();
    assert!(is_isomorphic(&written, &canonical(Sigma { t: 0, d: 0 })));
    let recorded = decode_trace(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    recorded.replay().unwrap();
    assert_eq!(&recorded.end, &written);
}

#[test]
fn cobordant_is_reflexive_and_writes_a_shared_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    assert_code(
        &run(&[
            "extract",
            "--surface",
            fixture_path("projective-six.off").to_str().unwrap(),
            "--values",
            fixture_path("projective-six.values").to_str().unwrap(),
            "--out",
            graph.to_str().unwrap(),
        ]),
        0,
    );
    let cert = dir.path().join("cert");
    let out = run(&[
        "cobordant",
        graph.to_str().unwrap(),
        graph.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert_eq!(stdout(&out).trim(), "cobordant");

    // The certificate replays: both traces land on the one shared canonical
    // graph document.
    let shared = codec::decode(&std::fs::read_to_string(cert.join("canonical.json")).unwrap())
        .unwrap();
    for side in ["left-trace.json", "right-trace.json"] {
        let trace = decode_trace(&std::fs::read_to_string(cert.join(side)).unwrap()).unwrap();
        let end = trace.replay().unwrap();
        assert_eq!(end, shared, "{side}");
    }
}

#[test]
fn cobordant_expect_equal_fails_on_distinct_classes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_code(&run(&["canonical", "--t", "0", "--d", "1", "--out", a.to_str().unwrap()]), 0);
    assert_code(&run(&["canonical", "--t", "2", "--d", "0", "--out", b.to_str().unwrap()]), 0);

    let plain = run(&["cobordant", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_code(&plain, 0);
    assert_eq!(stdout(&plain).trim(), "not cobordant");

    let cert = dir.path().join("cert");
    let strict = run(&[
        "cobordant",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--expect-equal",
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_code(&strict, 1);
    // Negative verdicts still write both traces and the two distinct
    // canonical endpoints.
    for file in
        ["left-trace.json", "right-trace.json", "canonical-left.json", "canonical-right.json"]
    {
        assert!(cert.join(file).exists(), "{file} missing");
    }
    let left =
        codec::decode(&std::fs::read_to_string(cert.join("canonical-left.json")).unwrap()).unwrap();
    let right =
        codec::decode(&std::fs::read_to_string(cert.join("canonical-right.json")).unwrap())
            .unwrap();
    assert!(!is_isomorphic(&left, &right));
}

#[test]
fn canonical_writes_the_expected_shape_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = bin()
        .args(["canonical", "--t", "-3", "--d", "1", "--dot"])
        .arg(&dot)
        .output()
        .unwrap();
    assert_code(&out, 0);
    let g = codec::decode(&stdout(&out)).unwrap();
    assert_eq!(g.sigma().unwrap(), Sigma { t: -3, d: 1 });

    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(dot_text.matches("shape=box").count(), 1, "one pass-through box node");
    assert_eq!(dot_text.matches("[-]").count(), 3, "three downward fork nodes");
}

#[test]
fn realize_round_trips_through_extract() {
    let dir = tempfile::tempdir().unwrap();
    let surface = dir.path().join("s.off");
    let values = dir.path().join("f.values");
    let graph = dir.path().join("g.json");
    let out = run(&[
        "realize",
        "--t",
        "-2",
        "--d",
        "1",
        "--surface-out",
        surface.to_str().unwrap(),
        "--values-out",
        values.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert_eq!(stdout(&out).trim(), r#"{"t":-2,"d":1}"#);

    let ext = run(&[
        "extract",
        "--surface",
        surface.to_str().unwrap(),
        "--values",
        values.to_str().unwrap(),
        "--out",
        graph.to_str().unwrap(),
    ]);
    assert_code(&ext, 0);
    assert_eq!(stdout(&ext).trim(), r#"{"t":-2,"d":1}"#);
    let g = codec::decode(&std::fs::read_to_string(&graph).unwrap()).unwrap();
    assert_eq!(CobordismClass::of(&g).unwrap(), CobordismClass::new(-2, 1));
}

#[test]
fn oracles_agree_and_print_their_seed() {
    let enumerate = run(&["oracle", "enumerate", "--max-vertices", "4"]);
    assert_code(&enumerate, 0);
    assert!(stdout(&enumerate).contains("agreement: 8 classes"));

    let bfs = run(&["oracle", "bfs", "--max-vertices", "4"]);
    assert_code(&bfs, 0);
    assert!(stdout(&bfs).contains("reachability classes match invariant fibers"));

    let invariance = run(&["oracle", "invariance", "--max-vertices", "5", "--seed", "3"]);
    assert_code(&invariance, 0);
    assert!(stdout(&invariance).contains("seed 3"));
    assert!(stdout(&invariance).contains("invariant never drifted"));
}

#[test]
fn unusable_inputs_exit_with_code_two() {
    assert_code(&run(&["sigma", "--graph", "/nonexistent/graph.json"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.off");
    std::fs::write(&junk, "not an off file").unwrap();
    let out_path = dir.path().join("g.json");
    assert_code(
        &run(&["extract", "--surface", junk.to_str().unwrap(), "--out", out_path.to_str().unwrap()]),
        2,
    );

    // A well-formed document that breaks the graph invariants: unusable for
    // computing commands, a negative verdict for `validate`.
    let invalid = dir.path().join("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"version":1,"vertices":[{"id":0,"height":"0"},{"id":1,"height":"1"},{"id":2,"height":"2"}],"edges":[[0,1]]}"#,
    )
    .unwrap();
    assert_code(&run(&["sigma", "--graph", invalid.to_str().unwrap()]), 2);
    assert_code(&run(&["validate", "--graph", invalid.to_str().unwrap()]), 1);

    assert_code(&run(&["no-such-command"]), 2);
}

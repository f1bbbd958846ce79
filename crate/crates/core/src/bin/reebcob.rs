//! Command-line front end: validate inputs, extract contour graphs from
//! triangulated surfaces, compute the cobordism invariant, normalize graphs
//! to canonical form, decide cobordance with certificates, and run
//! self-checking oracles.
//!
//! Exit codes: 0 on success, 1 on a negative domain verdict (an invalid
//! artifact under `validate`, a failed oracle, non-cobordant inputs under
//! `cobordant --expect-equal`), 2 on unusable input (unreadable or malformed
//! files, graphs that violate the structural invariants a command requires).

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reebcob::cobordism::{Cobordance, CobordismClass};
use reebcob::codec;
use reebcob::enumerate::{enumerate_classes, random_graph};
use reebcob::iso::{canonical_key, is_isomorphic, CanonicalKey};
use reebcob::moves::{all_sites, apply, canonical, encode_trace, normalize};
use reebcob::reachability::reachable_classes;
use reebcob::surface::{
    extract_reeb, parse_off, parse_values, write_off, write_values, OffMesh, ReebExtraction,
    TriangulatedSurface, VertexFunction,
};
use reebcob::{Height, ReebFunction, Sigma, VertexId};

#[derive(Parser)]
#[command(
    name = "reebcob",
    version,
    about = "Reeb graphs of Morse functions on closed surfaces and their cobordism calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph document or a triangulated surface (with an optional
    /// vertex function) and report what it is.
    Validate(ValidateArgs),
    /// Extract the contour graph of a vertex function on a surface.
    Extract(ExtractArgs),
    /// Print the invariant (t, d) of a graph document.
    Sigma {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Rewrite a graph to the canonical representative of its invariant,
    /// recording a replayable trace.
    Normalize(NormalizeArgs),
    /// Decide whether two graphs are cobordant; optionally write the
    /// certificate files.
    Cobordant(CobordantArgs),
    /// Write the canonical representative of an invariant class.
    Canonical(CanonicalArgs),
    /// Build a triangulated surface and vertex function realizing a class.
    Realize(RealizeArgs),
    /// Self-checking consistency oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ValidateTarget {
    /// Graph document to check.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// OFF surface file to check.
    #[arg(long)]
    surface: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    target: ValidateTarget,
    /// Vertex function values to check against the surface (one per line).
    #[arg(long, requires = "surface")]
    values: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    /// OFF surface file.
    #[arg(long)]
    surface: PathBuf,
    /// Vertex function values (one per line); defaults to the z-coordinates.
    #[arg(long)]
    values: Option<PathBuf>,
    /// Where to write the extracted graph document.
    #[arg(long)]
    out: PathBuf,
    /// Also write a Graphviz rendering.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Also write an extraction report (classification, invariant, critical
    /// vertices).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct NormalizeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Where to write the canonical-form graph document.
    #[arg(long)]
    out: PathBuf,
    /// Also write the replayable rewrite trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Re-verify the result: replay the trace and compare against the
    /// canonical representative.
    #[arg(long)]
    self_check: bool,
}

#[derive(Args)]
struct CobordantArgs {
    /// First graph document.
    a: PathBuf,
    /// Second graph document.
    b: PathBuf,
    /// Directory for the certificate: both rewrite traces plus the shared
    /// canonical graph (or the two distinct canonical graphs when the
    /// verdict is negative).
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Exit with status 1 when the graphs are not cobordant.
    #[arg(long)]
    expect_equal: bool,
}

#[derive(Args)]
struct CanonicalArgs {
    /// Fork surplus (number of splits minus merges).
    #[arg(long, allow_hyphen_values = true)]
    t: i64,
    /// Twist parity.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    d: u8,
    /// Where to write the graph document (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a Graphviz rendering.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct RealizeArgs {
    /// Fork surplus (number of splits minus merges).
    #[arg(long, allow_hyphen_values = true)]
    t: i64,
    /// Twist parity.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    d: u8,
    /// Where to write the OFF surface.
    #[arg(long)]
    surface_out: PathBuf,
    /// Where to write the vertex function values.
    #[arg(long)]
    values_out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Largest vertex count to cover.
    #[arg(long, default_value_t = 6)]
    max_vertices: usize,
    /// Seed for randomized parts; printed so failures reproduce.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare the sweep enumerator of isomorphism classes against a
    /// first-principles brute force over ranked edge multisets.
    Enumerate(OracleArgs),
    /// Exhaustively explore the move graph per invariant fiber and confirm
    /// fibers are connected and never mix.
    Bfs(OracleArgs),
    /// Apply every enumerable move site on random graphs and confirm the
    /// invariant never drifts.
    Invariance(OracleArgs),
}

/// A failure with its exit status: 1 for negative verdicts, 2 for unusable
/// input.
enum Failure {
    Domain(String),
    Input(String),
}

impl Failure {
    fn domain(msg: impl Into<String>) -> Failure {
        Failure::Domain(msg.into())
    }
    fn input(msg: impl Into<String>) -> Failure {
        Failure::Input(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate(args) => run_validate(args),
        Command::Extract(args) => run_extract(args),
        Command::Sigma { graph } => {
            let g = read_graph(&graph)?;
            let sigma = g.sigma().expect("decoded graphs are valid");
            println!("{}", serde_json::to_string(&sigma).expect("serializable"));
            Ok(())
        }
        Command::Normalize(args) => run_normalize(args),
        Command::Cobordant(args) => run_cobordant(args),
        Command::Canonical(args) => run_canonical(args),
        Command::Realize(args) => run_realize(args),
        Command::Oracle(cmd) => match cmd {
            OracleCommand::Enumerate(args) => oracle_enumerate(args),
            OracleCommand::Bfs(args) => oracle_bfs(args),
            OracleCommand::Invariance(args) => oracle_invariance(args),
        },
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

/// Reads a graph document.  Decoding includes the full structural check, so
/// a graph this returns always satisfies the invariants; commands treat any
/// failure here as unusable input.
fn read_graph(path: &Path) -> Result<ReebFunction, Failure> {
    codec::decode(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_surface(path: &Path) -> Result<(OffMesh, TriangulatedSurface), Failure> {
    let mesh = parse_off(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let surface = TriangulatedSurface::from_mesh(&mesh)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((mesh, surface))
}

fn read_function(
    mesh: &OffMesh,
    surface: &TriangulatedSurface,
    values: Option<&Path>,
) -> Result<VertexFunction, Failure> {
    let f = match values {
        Some(path) => parse_values(&read_text(path)?)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => VertexFunction::new(mesh.z_values()),
    };
    f.check_matches(surface).map_err(|e| Failure::input(e.to_string()))?;
    Ok(f)
}

fn run_validate(args: ValidateArgs) -> Result<(), Failure> {
    if let Some(path) = &args.target.graph {
        // Splitting decode failures: a well-formed document describing a
        // graph that breaks the invariants is this command's negative
        // verdict, not unusable input.
        let g = match codec::decode(&read_text(path)?) {
            Ok(g) => g,
            Err(codec::DecodeError::Invalid(report)) => {
                return Err(Failure::domain(format!("invalid graph:\n{report}")));
            }
            Err(e) => return Err(Failure::input(format!("{}: {e}", path.display()))),
        };
        let sigma = g.sigma().expect("decoded graphs are valid");
        println!(
            "valid graph: {} vertices, {} edges, {} components, sigma {}",
            g.vertex_count(),
            g.edges().len(),
            g.components().len(),
            sigma
        );
        return Ok(());
    }
    let path = args.target.surface.as_ref().expect("clap group guarantees one target");
    let mesh = parse_off(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let surface = TriangulatedSurface::from_mesh(&mesh)
        .map_err(|e| Failure::domain(format!("not a closed surface: {e}")))?;
    println!(
        "closed surface: {} ({} vertices, {} triangles, Euler characteristic {}, {})",
        surface.classification(),
        surface.vertex_count(),
        surface.triangles().len(),
        surface.euler_characteristic(),
        if surface.is_orientable() { "orientable" } else { "nonorientable" },
    );
    if let Some(values_path) = &args.values {
        let f = parse_values(&read_text(values_path)?)
            .map_err(|e| Failure::input(format!("{}: {e}", values_path.display())))?;
        f.check_matches(&surface).map_err(|e| Failure::input(e.to_string()))?;
        if !f.is_generic(&surface) {
            return Err(Failure::domain(
                "vertex function is not generic: some critical vertex is degenerate",
            ));
        }
        println!("generic vertex function with {} critical points", f.criticals(&surface).len());
    }
    Ok(())
}

/// The extraction report written by `extract --report` and shipped with the
/// fixtures.
fn extraction_report(
    name: &str,
    surface: &TriangulatedSurface,
    ext: &ReebExtraction,
) -> reebcob::fixtures::FixtureReport {
    let models: BTreeMap<usize, String> = ext
        .vertex_map
        .iter()
        .map(|(&reeb, &vertex)| {
            (vertex, ext.graph.classify(reeb).expect("extracted").name().to_string())
        })
        .collect();
    reebcob::fixtures::FixtureReport {
        name: name.to_string(),
        classification: surface.classification(),
        euler_characteristic: surface.euler_characteristic(),
        orientable: surface.is_orientable(),
        sigma: ext.graph.sigma().expect("extracted graph is valid"),
        models,
        perturbed: ext.perturbed,
    }
}

fn run_extract(args: ExtractArgs) -> Result<(), Failure> {
    let (mesh, surface) = read_surface(&args.surface)?;
    let f = read_function(&mesh, &surface, args.values.as_deref())?;
    let ext = extract_reeb(&surface, &f).map_err(|e| Failure::input(e.to_string()))?;
    write_text(&args.out, &codec::encode(&ext.graph))?;
    if let Some(dot) = &args.dot {
        write_text(dot, &codec::to_dot(&ext.graph))?;
    }
    if let Some(report_path) = &args.report {
        let name = args
            .surface
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "surface".to_string());
        let report = extraction_report(&name, &surface, &ext);
        let text = serde_json::to_string_pretty(&report).expect("serializable");
        write_text(report_path, &format!("{text}\n"))?;
    }
    let sigma = ext.graph.sigma().expect("extracted graph is valid");
    println!("{}", serde_json::to_string(&sigma).expect("serializable"));
    Ok(())
}

fn run_normalize(args: NormalizeArgs) -> Result<(), Failure> {
    let g = read_graph(&args.graph)?;
    let outcome = normalize(&g).expect("decoded graphs are valid");
    write_text(&args.out, &codec::encode(outcome.normalized()))?;
    if let Some(trace_path) = &args.trace {
        write_text(trace_path, &encode_trace(&outcome.trace))?;
    }
    if args.self_check {
        outcome
            .verify()
            .map_err(|e| Failure::domain(format!("self-check failed: {e}")))?;
        let end = outcome.normalized();
        if !end.validate().is_valid() || !is_isomorphic(end, &canonical(outcome.sigma)) {
            return Err(Failure::domain(
                "self-check failed: result is not the canonical representative",
            ));
        }
        eprintln!("self-check passed: trace replays to the canonical representative");
    }
    println!("{}", serde_json::to_string(&outcome.sigma).expect("serializable"));
    Ok(())
}

fn run_cobordant(args: CobordantArgs) -> Result<(), Failure> {
    let a = read_graph(&args.a)?;
    let b = read_graph(&args.b)?;
    let verdict = Cobordance::decide(&a, &b).expect("decoded graphs are valid");
    verdict
        .verify()
        .map_err(|e| Failure::domain(format!("certificate failed to replay: {e}")))?;
    if let Some(dir) = &args.certificate {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
        write_text(&dir.join("left-trace.json"), &encode_trace(&verdict.left.trace))?;
        write_text(&dir.join("right-trace.json"), &encode_trace(&verdict.right.trace))?;
        if verdict.cobordant() {
            write_text(&dir.join("canonical.json"), &codec::encode(verdict.left.normalized()))?;
        } else {
            write_text(
                &dir.join("canonical-left.json"),
                &codec::encode(verdict.left.normalized()),
            )?;
            write_text(
                &dir.join("canonical-right.json"),
                &codec::encode(verdict.right.normalized()),
            )?;
        }
    }
    eprintln!("left sigma {}, right sigma {}", verdict.left.sigma, verdict.right.sigma);
    if verdict.cobordant() {
        println!("cobordant");
        Ok(())
    } else {
        println!("not cobordant");
        if args.expect_equal {
            Err(Failure::domain("graphs are not cobordant"))
        } else {
            Ok(())
        }
    }
}

fn run_canonical(args: CanonicalArgs) -> Result<(), Failure> {
    let g = canonical(Sigma { t: args.t, d: args.d });
    let doc = codec::encode(&g);
    match &args.out {
        Some(path) => write_text(path, &doc)?,
        None => print!("{doc}"),
    }
    if let Some(dot) = &args.dot {
        write_text(dot, &codec::to_dot(&g))?;
    }
    Ok(())
}

fn run_realize(args: RealizeArgs) -> Result<(), Failure> {
    let class = CobordismClass::new(args.t, args.d);
    let (surface, f) = class.realize_surface();
    let coords: Vec<[Height; 3]> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            [Height::from_int(i as i64), Height::from_int((3 * i as i64) % 7), z.clone()]
        })
        .collect();
    let mesh = OffMesh { coords, triangles: surface.triangles().to_vec() };
    write_text(&args.surface_out, &write_off(&mesh))?;
    write_text(&args.values_out, &write_values(&f))?;
    println!("{}", serde_json::to_string(&class.sigma).expect("serializable"));
    Ok(())
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

const ALLOWED_DEGREES: [(u8, u8); 5] = [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)];

/// Canonical keys of every valid graph with exactly `n` ranked vertices, by
/// brute force over edge multisets (no pair ever needs multiplicity three:
/// its endpoints would exceed the local models).
fn brute_force_keys_exact(n: usize) -> BTreeSet<CanonicalKey> {
    let mut keys = BTreeSet::new();
    if n == 0 {
        keys.insert(canonical_key(&ReebFunction::new()));
        return keys;
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();

    fn rec(
        k: usize,
        n: usize,
        pairs: &[(usize, usize)],
        mult: &mut Vec<u8>,
        down: &mut Vec<u8>,
        up: &mut Vec<u8>,
        keys: &mut BTreeSet<CanonicalKey>,
    ) {
        if k == pairs.len() {
            if (0..n).any(|v| !ALLOWED_DEGREES.contains(&(down[v], up[v]))) {
                return;
            }
            let heights = (0..n).map(|v| (VertexId(v as u64), Height::from_int(v as i64)));
            let edges = pairs.iter().zip(mult.iter()).flat_map(|(&(i, j), &m)| {
                (0..m).map(move |_| (VertexId(i as u64), VertexId(j as u64)))
            });
            let g = ReebFunction::from_parts(heights, edges).expect("well-formed by construction");
            keys.insert(canonical_key(&g));
            return;
        }
        let (i, j) = pairs[k];
        let vertex_done = pairs.get(k + 1).is_none_or(|next| next.0 != i);
        for m in 0..=2u8 {
            mult[k] = m;
            up[i] += m;
            down[j] += m;
            let within_bounds = up[i] <= 2 && down[j] <= 2;
            let block_ok = !vertex_done || ALLOWED_DEGREES.contains(&(down[i], up[i]));
            if within_bounds && block_ok {
                rec(k + 1, n, pairs, mult, down, up, keys);
            }
            up[i] -= m;
            down[j] -= m;
        }
        mult[k] = 0;
    }

    let mut mult = vec![0u8; pairs.len()];
    let (mut down, mut up) = (vec![0u8; n], vec![0u8; n]);
    rec(0, n, &pairs, &mut mult, &mut down, &mut up, &mut keys);
    keys
}

fn oracle_enumerate(args: OracleArgs) -> Result<(), Failure> {
    if args.max_vertices > 8 {
        return Err(Failure::input("--max-vertices above 8 is not supported for this oracle"));
    }
    println!("seed {} (unused: this oracle is exhaustive)", args.seed);
    let mut brute: BTreeSet<CanonicalKey> = BTreeSet::new();
    for n in 0..=args.max_vertices {
        let exact = brute_force_keys_exact(n);
        println!("exactly {n} vertices: {} classes", exact.len());
        brute.extend(exact);
    }
    let reps = enumerate_classes(args.max_vertices);
    let swept: BTreeSet<CanonicalKey> = reps.iter().map(canonical_key).collect();
    if swept.len() != reps.len() {
        return Err(Failure::domain("sweep enumerator repeated a class"));
    }
    if brute != swept {
        let missing = brute.difference(&swept).count();
        let extra = swept.difference(&brute).count();
        return Err(Failure::domain(format!(
            "enumerators disagree: {missing} classes missing from the sweep, {extra} unexpected"
        )));
    }
    println!(
        "agreement: {} classes with at most {} vertices, both enumerators",
        reps.len(),
        args.max_vertices
    );
    Ok(())
}

fn oracle_bfs(args: OracleArgs) -> Result<(), Failure> {
    if args.max_vertices < 2 {
        return Err(Failure::input("--max-vertices must be at least 2"));
    }
    println!("seed {} (unused: this oracle is exhaustive)", args.seed);
    let reps = enumerate_classes(args.max_vertices);
    let mut fibers: BTreeMap<(i64, u8), Vec<&ReebFunction>> = BTreeMap::new();
    for g in &reps {
        let s = g.sigma().expect("enumerated graphs are valid");
        fibers.entry((s.t, s.d)).or_default().push(g);
    }
    // Two extra vertices of room: equal-invariant classes are connected, but
    // some pairs only through slightly larger intermediates.
    let cap = args.max_vertices + 2;
    for (&(t, d), members) in &fibers {
        let sigma = Sigma { t, d };
        let set = reachable_classes(&canonical(sigma), cap, 500_000);
        if !set.exhausted {
            return Err(Failure::domain(format!(
                "fiber {sigma}: search hit the class budget before exhausting"
            )));
        }
        for key in &set.classes {
            if key.sigma() != sigma {
                return Err(Failure::domain(format!("fiber {sigma}: a move escaped the fiber")));
            }
        }
        for member in members {
            if !set.classes.contains(&canonical_key(member)) {
                return Err(Failure::domain(format!(
                    "fiber {sigma}: some class is unreachable from the canonical representative"
                )));
            }
        }
        println!(
            "fiber {sigma}: {} member classes, {} classes explored, connected and closed",
            members.len(),
            set.classes.len()
        );
    }
    println!("agreement: reachability classes match invariant fibers exactly");
    Ok(())
}

fn oracle_invariance(args: OracleArgs) -> Result<(), Failure> {
    if args.max_vertices == 1 {
        return Err(Failure::input("no valid graph has exactly one vertex"));
    }
    println!("seed {}", args.seed);
    let sizes: Vec<usize> = (0..=args.max_vertices).filter(|&n| n != 1).collect();
    let trials = 200usize;
    let mut sites_checked = 0usize;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(trial as u64));
        let g = random_graph(sizes[trial % sizes.len()], &mut rng);
        let sigma = g.sigma().expect("grown graphs are valid");
        for site in all_sites(&g) {
            let out = apply(&g, &site).map_err(|e| {
                Failure::domain(format!("trial {trial}: enumerated site failed to apply: {e}"))
            })?;
            if !out.graph.validate().is_valid() {
                return Err(Failure::domain(format!("trial {trial}: move produced an invalid graph")));
            }
            if out.graph.sigma().expect("just validated") != sigma {
                return Err(Failure::domain(format!("trial {trial}: invariant drifted")));
            }
            sites_checked += 1;
        }
    }
    println!("agreement: {trials} graphs, {sites_checked} move sites, invariant never drifted");
    Ok(())
}

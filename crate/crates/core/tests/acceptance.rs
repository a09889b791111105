//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Runs with `harness = false` so the lines are printed even when everything passes.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cupx::field::{ratio, rational_to_f64};
use cupx::graph::{
    cheeger_graph_exact, complete, cycle, laplacian_lambda2, margulis_like, path, random_regular,
    spectral_cheeger_bounds, star, SimplicialGraph,
};
use cupx::pairing::{
    cheeger_constant_coordinate, cheeger_constant_exhaustive, is_pairing_connected_exhaustive, q_valence_coordinate,
    q_valence_exhaustive, random_triple, PairingError, PairingTriple, Symmetry,
};
use cupx::raag::{build_triple, max_centralizer_rank};
use cupx::{Budgets, PrimeField, Subspace};

const SEED: u64 = 0x5eed;
const SUBSETS: u64 = 1 << 24;
const SUBSPACES: u64 = 400_000;
/// Projective bases of GF(5)^4 number about 1.9e7; the bottleneck lower bound usually stops the search early.
const BASES: u64 = 100_000_000;

type Check = Result<String, String>;

/// Identifier, description and the check itself.
type Criterion = (&'static str, &'static str, fn() -> Check);

fn gf(p: u32) -> PrimeField {
    PrimeField::new(p).expect("prime")
}

fn corpus(max_n: usize) -> impl Iterator<Item = SimplicialGraph> {
    (0..=max_n).flat_map(SimplicialGraph::all_labeled)
}

fn triple(g: &SimplicialGraph, p: u32) -> PairingTriple<PrimeField> {
    build_triple(g, gf(p)).into_triple()
}

fn edges_of(g: &SimplicialGraph) -> String {
    let e: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}{v}")).collect();
    format!("n={} edges=[{}]", g.vertex_count(), e.join(" "))
}

/// `None` for an undefined constant.
fn h_triple(t: &PairingTriple<PrimeField>) -> Result<Option<BigRational>, String> {
    match cheeger_constant_exhaustive(t, SUBSPACES) {
        Ok(r) => Ok(Some(r.value)),
        Err(PairingError::Undefined(_)) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("took {took:.1?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

/// Graph and triple Cheeger constants agree on every five-vertex graph, on one thread.
fn graph_equals_triple() -> Check {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut count = 0;
    pool.install(|| {
        for g in SimplicialGraph::all_labeled(5) {
            let t = triple(&g, 2);
            let hg = cheeger_graph_exact(&g, SUBSETS).map_err(|e| e.to_string())?.value;
            let hv = h_triple(&t)?.ok_or("undefined on five vertices")?;
            let hc = cheeger_constant_coordinate(&t, SUBSETS)
                .map_err(|e| e.to_string())?
                .value;
            if hg != hv || hv != hc {
                return Err(format!(
                    "{}: graph {hg}, exhaustive {hv}, coordinate {hc}",
                    edges_of(&g)
                ));
            }
            count += 1;
        }
        Ok(())
    })?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("{count} graphs agree, {:.1?} on one thread", start.elapsed()))
}

/// Exhaustive and coordinate-subspace values agree on 1000 sampled six-vertex graphs.
fn coordinate_sufficiency() -> Check {
    let start = Instant::now();
    let masks = sample(&mut ChaCha8Rng::seed_from_u64(SEED), 1 << 15, 1000);
    for mask in masks.iter() {
        let g = SimplicialGraph::from_edge_mask(6, mask as u64);
        let t = triple(&g, 2);
        let hv = h_triple(&t)?;
        let hc = cheeger_constant_coordinate(&t, SUBSETS)
            .map_err(|e| e.to_string())?
            .value;
        if hv.as_ref() != Some(&hc) {
            return Err(format!("{}: exhaustive {hv:?}, coordinate {hc}", edges_of(&g)));
        }
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!("1000 distinct graphs agree, {:.1?}", start.elapsed()))
}

/// The q-valence equals the maximum valence on every four-vertex graph.
fn valence_dictionary() -> Check {
    let start = Instant::now();
    for g in SimplicialGraph::all_labeled(4) {
        let d = q_valence_exhaustive(&triple(&g, 2), Budgets::default().bases)
            .map_err(|e| e.to_string())?
            .value;
        if d != g.max_valence() {
            return Err(format!(
                "{}: q-valence {d}, max valence {}",
                edges_of(&g),
                g.max_valence()
            ));
        }
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!("64 graphs agree, {:.1?}", start.elapsed()))
}

/// Pairing-connected exactly when the graph is connected, on every graph with at most five vertices.
fn connectivity_dictionary() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for g in corpus(5) {
        let pc = is_pairing_connected_exhaustive(&triple(&g, 2), SUBSPACES)
            .map_err(|e| e.to_string())?
            .connected;
        if pc != g.is_connected() {
            return Err(format!(
                "{}: pairing-connected {pc}, connected {}",
                edges_of(&g),
                g.is_connected()
            ));
        }
        count += 1;
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{count} graphs agree, {:.1?}", start.elapsed()))
}

/// Positive Cheeger constant forces pairing-connectedness on random antisymmetric triples.
fn positive_h_is_connected() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut positive = 0;
    for i in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=4);
        let t = random_triple(gf(2), n, m, Symmetry::Antisymmetric, &mut rng);
        if let Some(h) = h_triple(&t)? {
            if h > BigRational::zero() {
                positive += 1;
                if !is_pairing_connected_exhaustive(&t, SUBSPACES)
                    .map_err(|e| e.to_string())?
                    .connected
                {
                    return Err(format!(
                        "sample {i} (dim V {n}, dim W {m}) has h = {h} but is not pairing-connected"
                    ));
                }
            }
        }
    }
    Ok(format!("0 counterexamples; {positive} of 200 samples have h > 0"))
}

/// The Cheeger ratio of a coordinate subspace is the boundary ratio of its vertex set.
fn coordinate_identity() -> Check {
    let mut count = 0;
    for g in corpus(5) {
        let n = g.vertex_count();
        let t = triple(&g, 2);
        for mask in 1u32..1 << n {
            let members: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            if 2 * members.len() > n {
                continue;
            }
            let units = members
                .iter()
                .map(|&i| (0..n).map(|j| u32::from(i == j)).collect())
                .collect();
            let span = Subspace::span(gf(2), n, units).map_err(|e| e.to_string())?;
            let h = t.cheeger_of_subspace(&span).map_err(|e| e.to_string())?;
            let boundary = (0..n)
                .filter(|v| mask >> v & 1 == 0 && members.iter().any(|&u| g.has_edge(u, *v)))
                .count();
            let expected = ratio(boundary as i64, members.len() as i64);
            if h != expected {
                return Err(format!(
                    "{} B={members:?}: subspace {h}, boundary ratio {expected}",
                    edges_of(&g)
                ));
            }
            count += 1;
        }
    }
    Ok(format!("{count} (graph, subset) pairs agree"))
}

/// Maximum centralizer rank = max valence + 1 = coordinate q-valence + 1.
fn centralizer_dictionary() -> Check {
    let mut count = 0;
    for g in corpus(5).filter(|g| g.vertex_count() > 0) {
        let r = max_centralizer_rank(&g).map_err(|e| e.to_string())?;
        let d = q_valence_coordinate(&triple(&g, 2));
        if r != g.max_valence() + 1 || r != d + 1 {
            return Err(format!(
                "{}: rank {r}, max valence {}, coordinate q-valence {d}",
                edges_of(&g),
                g.max_valence()
            ));
        }
        count += 1;
    }
    Ok(format!("{count} nonempty graphs agree"))
}

/// Augmenting a cycle's triple keeps h, raises the coordinate valence by at most one,
/// and breaks alternation.
fn augmentation() -> Check {
    let mut lines = Vec::new();
    for n in 3..=6 {
        let t = triple(&cycle(n).map_err(|e| e.to_string())?, 2);
        let a = t.augment(0).map_err(|e| e.to_string())?;
        let (h, ha) = (h_triple(&t)?.ok_or("undefined")?, h_triple(&a)?.ok_or("undefined")?);
        let (d, da) = (q_valence_coordinate(&t), q_valence_coordinate(&a));
        let (alt, alt_a) = (t.is_alternating(), a.is_alternating());
        let ok = ha >= h && da <= d + 1 && alt && !alt_a;
        lines.push(format!(
            "C{n}: h {h} -> {ha}, d {d} -> {da}, alternating {alt} -> {alt_a}"
        ));
        if !ok {
            return Err(lines.join("; "));
        }
    }
    Ok(lines.join("; "))
}

/// h_V and d(V) do not depend on the field, on every graph with at most four vertices.
fn field_invariance() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for g in corpus(4) {
        let mut seen = Vec::new();
        for p in [2, 3, 5] {
            let t = triple(&g, p);
            let d = q_valence_exhaustive(&t, BASES).map_err(|e| e.to_string())?.value;
            seen.push((p, h_triple(&t)?, d));
        }
        if seen.windows(2).any(|w| w[0].1 != w[1].1 || w[0].2 != w[1].2) {
            return Err(format!("{}: {seen:?}", edges_of(&g)));
        }
        count += 1;
    }
    Ok(format!(
        "{count} graphs agree over GF(2), GF(3), GF(5), {:.1?}",
        start.elapsed()
    ))
}

/// Connected graphs with at most twelve vertices from the generator families.
fn spectral_fixtures() -> Result<Vec<(String, SimplicialGraph)>, String> {
    let mut out = Vec::new();
    let mut add = |name: String, g: Result<SimplicialGraph, cupx::graph::GraphError>| -> Result<(), String> {
        out.push((name, g.map_err(|e| e.to_string())?));
        Ok(())
    };
    for n in 3..=12 {
        add(format!("C{n}"), cycle(n))?;
    }
    for n in 2..=12 {
        add(format!("P{n}"), path(n))?;
        add(format!("K{n}"), complete(n))?;
    }
    for k in 1..=11 {
        add(format!("K1,{k}"), star(k))?;
    }
    for m in 2..=3 {
        add(format!("margulis{m}"), margulis_like(m))?;
    }
    for (n, d) in [
        (4, 3),
        (6, 3),
        (8, 3),
        (10, 3),
        (12, 3),
        (6, 4),
        (9, 4),
        (12, 4),
        (12, 5),
    ] {
        for seed in 0..3 {
            add(
                format!("random({n},{d},seed {seed})"),
                random_regular(n, d, SEED + seed),
            )?;
        }
    }
    Ok(out
        .into_iter()
        .filter(|(_, g)| g.is_connected() && g.vertex_count() >= 2)
        .collect())
}

/// `lambda2 / 2 - 1e-6 <= h <= sqrt(2 d lambda2) + 1e-6`, as stated.
fn spectral_sandwich() -> Check {
    let fixtures = spectral_fixtures()?;
    let mut violations = Vec::new();
    for (name, g) in &fixtures {
        let h = rational_to_f64(&cheeger_graph_exact(g, SUBSETS).map_err(|e| e.to_string())?.value);
        let lambda2 = laplacian_lambda2(g);
        let d = g.max_valence() as f64;
        let (lo, hi) = (lambda2 / 2.0, (2.0 * d * lambda2).sqrt());
        if !(lo - 1e-6 <= h && h <= hi + 1e-6) {
            violations.push(format!("{name} (h {h:.4}, lambda2/2 {lo:.4})"));
        }
    }
    if violations.is_empty() {
        Ok(format!("{} graphs inside", fixtures.len()))
    } else {
        let shown: Vec<&str> = violations.iter().take(6).map(String::as_str).collect();
        Err(format!(
            "{} of {} graphs violate the lower bound lambda2/2, e.g. {}",
            violations.len(),
            fixtures.len(),
            shown.join(", ")
        ))
    }
}

/// The bounds the library reports: `lambda2 / (2 d) <= h <= sqrt(2 d lambda2)`.
fn spectral_sandwich_vertex_form() -> Check {
    let fixtures = spectral_fixtures()?;
    for (name, g) in &fixtures {
        let h = rational_to_f64(&cheeger_graph_exact(g, SUBSETS).map_err(|e| e.to_string())?.value);
        let b = spectral_cheeger_bounds(g).map_err(|e| e.to_string())?;
        if !(b.lower - 1e-6 <= h && h <= b.upper + 1e-6) {
            return Err(format!("{name}: h {h}, bounds [{}, {}]", b.lower, b.upper));
        }
    }
    Ok(format!("{} graphs inside", fixtures.len()))
}

/// The `cupx` binary next to this test's `deps` directory.
fn cupx_binary() -> Result<PathBuf, String> {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let name = format!("cupx{}", std::env::consts::EXE_SUFFIX);
    let bin = exe
        .parent()
        .and_then(Path::parent)
        .map(|dir| dir.join(name))
        .ok_or("cannot locate the target directory")?;
    if bin.exists() {
        Ok(bin)
    } else {
        Err(format!(
            "{} not found; build it with `cargo build -p cupx-cli`",
            bin.display()
        ))
    }
}

/// Every subcommand prints byte-identical output across runs with 1 and 8 workers.
fn determinism() -> Check {
    let bin = cupx_binary()?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let g = SimplicialGraph::from_indices(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 3)])
        .map_err(|e| e.to_string())?;
    let graph = dir.path().join("graph.json");
    std::fs::write(&graph, g.to_json_string()).map_err(|e| e.to_string())?;
    let small = dir.path().join("small.json");
    std::fs::write(&small, star(3).map_err(|e| e.to_string())?.to_json_string()).map_err(|e| e.to_string())?;
    let tri = dir.path().join("triple.json");
    let t = build_triple(&g, gf(3)).to_json();
    std::fs::write(&tri, t.to_string()).map_err(|e| e.to_string())?;
    let (graph, small, tri) = (graph.to_str().unwrap(), small.to_str().unwrap(), tri.to_str().unwrap());
    let commands: Vec<Vec<&str>> = vec![
        vec!["graph-h", "--input", graph],
        vec!["graph-h", "--input", graph, "--mode", "spectral"],
        vec!["triple-h", "--input", tri],
        vec![
            "triple-h",
            "--input",
            graph,
            "--field",
            "rational",
            "--method",
            "coordinate",
        ],
        vec![
            "qvalence",
            "--input",
            small,
            "--field",
            "gf3",
            "--budget-bases",
            "100000",
        ],
        vec!["connectedness", "--input", tri],
        vec!["build-triple", "--input", graph, "--field", "gf5"],
        vec!["augment", "--input", tri, "--pivot", "1"],
        vec!["verify-theorem", "--all-graphs", "4", "--field", "gf2"],
        vec!["verify-augmentation", "--family", "cycle", "--sizes", "3,4,5,6"],
        vec![
            "family-report",
            "--family",
            "random-regular",
            "--sizes",
            "8,10,12",
            "--degree",
            "3",
            "--seed",
            "11",
        ],
        vec![
            "family-report",
            "--family",
            "cycle",
            "--sizes",
            "4,5,6",
            "--with-triples",
            "--format",
            "csv",
        ],
        vec![
            "gen",
            "--family",
            "random-regular",
            "--size",
            "16",
            "--degree",
            "4",
            "--seed",
            "3",
        ],
    ];
    for args in &commands {
        let mut outputs = Vec::new();
        for jobs in ["1", "8", "1", "8"] {
            let out = Command::new(&bin)
                .args(args)
                .args(["--jobs", jobs])
                .env_remove("CUPX_JOBS")
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!(
                    "{args:?} exited with {:?}: {}",
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
            outputs.push(out.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{args:?} differs between runs"));
        }
    }
    Ok(format!(
        "{} commands, 4 runs each (--jobs 1, 8, 1, 8), identical",
        commands.len()
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (
            "1",
            "graph h = triple h = coordinate h, 5-vertex graphs, GF(2)",
            graph_equals_triple,
        ),
        (
            "2",
            "exhaustive h = coordinate h, 1000 sampled 6-vertex graphs",
            coordinate_sufficiency,
        ),
        ("3", "q-valence = max valence, 4-vertex graphs", valence_dictionary),
        (
            "4",
            "pairing-connected iff connected, <= 5 vertices",
            connectivity_dictionary,
        ),
        (
            "5",
            "h > 0 implies pairing-connected, 200 random triples",
            positive_h_is_connected,
        ),
        (
            "6",
            "coordinate subspace ratio = |dB|/|B|, <= 5 vertices",
            coordinate_identity,
        ),
        (
            "7",
            "max centralizer rank = max valence + 1 = coordinate d + 1",
            centralizer_dictionary,
        ),
        (
            "8",
            "augmentation of C3..C6: h' >= h, d' <= d + 1, alternation lost",
            augmentation,
        ),
        (
            "9",
            "h and d independent of GF(2), GF(3), GF(5), <= 4 vertices",
            field_invariance,
        ),
        (
            "10",
            "lambda2/2 <= h <= sqrt(2 d lambda2), connected fixtures",
            spectral_sandwich,
        ),
        (
            "10*",
            "(reported bounds) lambda2/(2d) <= h <= sqrt(2 d lambda2)",
            spectral_sandwich_vertex_form,
        ),
        (
            "11",
            "byte-identical CLI output across runs and worker counts",
            determinism,
        ),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {id:<3} {status}  {name}  [{detail}; {took:.1?}]");
        if result.is_err() {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {}", failed.join(", "));
        std::process::exit(1);
    }
}

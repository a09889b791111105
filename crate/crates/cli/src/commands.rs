use std::io::Read;
use std::path::Path;

use cupx::family::{
    graph_family_report, graph_triple_family_report, triple_family_report, verify_augmentation, verify_main_theorem,
    FamilyReport, GraphMode, Verification,
};
use cupx::field::format_rational;
use cupx::graph::{
    cheeger_graph_exact, complete, cycle, margulis_like, path, random_regular, spectral_cheeger_bounds, star,
    GraphError, SimplicialGraph,
};
use cupx::pairing::{
    cheeger_constant_exhaustive, is_pairing_connected_exhaustive, q_valence_exhaustive, DynTriple, PairingError,
};
use cupx::raag::build_triple_dyn;
use serde_json::{json, Value};

use crate::output::{family_table, Outcome};
use crate::{CliError, Command, Family, GraphSource, InputArgs, Method, Mode, RunArgs};

/// A parsed input file.
enum Loaded {
    Graph(SimplicialGraph),
    Triple(DynTriple),
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// A JSON object with a `"tensor"` key is a triple; anything else is a graph.
fn load(path: &Path, format: Option<crate::GraphInputFormat>) -> Result<Loaded, CliError> {
    let text = read_text(path)?;
    let in_file = |e: String| CliError::Usage(format!("{}: {e}", path.display()));
    if format.is_none() && text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| in_file(format!("invalid JSON: {e}")))?;
        if v.get("tensor").is_some() {
            return DynTriple::from_json(&v)
                .map(Loaded::Triple)
                .map_err(|e| in_file(e.to_string()));
        }
    }
    SimplicialGraph::parse(&text, format.map(Into::into))
        .map(Loaded::Graph)
        .map_err(|e| in_file(e.to_string()))
}

fn load_graph(input: &InputArgs) -> Result<SimplicialGraph, CliError> {
    match load(&input.input, input.input_format)? {
        Loaded::Graph(g) => Ok(g),
        Loaded::Triple(_) => Err(CliError::Usage(format!(
            "{}: expected a graph, found a triple",
            input.input.display()
        ))),
    }
}

/// The triple in the file, or the cohomology triple over `--field` of the graph in it.
fn load_triple(input: &InputArgs, run: &RunArgs) -> Result<DynTriple, CliError> {
    match load(&input.input, input.input_format)? {
        Loaded::Triple(t) => Ok(t),
        Loaded::Graph(g) => Ok(build_triple_dyn(&g, run.field)?.0),
    }
}

fn family_member(family: Family, size: usize, degree: Option<usize>, seed: u64) -> Result<SimplicialGraph, CliError> {
    Ok(match family {
        Family::Cycle => cycle(size)?,
        Family::Path => path(size)?,
        Family::Complete => complete(size)?,
        Family::Star => star(size)?,
        Family::RandomRegular => {
            let d = degree.ok_or_else(|| CliError::Usage("--degree is required for random-regular".into()))?;
            random_regular(size, d, seed)?
        }
        Family::Margulis => margulis_like(size)?,
    })
}

fn collect_inputs(source: &GraphSource, run: &RunArgs) -> Result<Vec<Loaded>, CliError> {
    let mut items = Vec::new();
    for p in &source.input {
        items.push(load(p, source.input_format)?);
    }
    if let Some(n) = source.all_graphs {
        if n > 8 {
            return Err(CliError::Usage(format!("--all-graphs {n} is too large (at most 8)")));
        }
        items.extend(SimplicialGraph::all_labeled(n).map(Loaded::Graph));
    }
    if let Some(family) = source.family {
        if source.sizes.is_empty() {
            return Err(CliError::Usage("--family needs --sizes".into()));
        }
        for &size in &source.sizes {
            items.push(Loaded::Graph(family_member(family, size, source.degree, run.seed)?));
        }
    }
    if items.is_empty() {
        return Err(CliError::Usage(
            "no inputs: give --input, --all-graphs or --family".into(),
        ));
    }
    Ok(items)
}

fn collect_graphs(source: &GraphSource, run: &RunArgs) -> Result<Vec<SimplicialGraph>, CliError> {
    collect_inputs(source, run)?
        .into_iter()
        .map(|item| match item {
            Loaded::Graph(g) => Ok(g),
            Loaded::Triple(_) => Err(CliError::Usage("this command takes graphs, not triples".into())),
        })
        .collect()
}

pub(crate) fn execute(command: &Command, run: &RunArgs) -> Result<Outcome, CliError> {
    let budgets = run.budgets();
    match command {
        Command::GraphH { input, mode } => graph_h(&load_graph(input)?, *mode, run),
        Command::TripleH { input, method } => {
            let t = load_triple(input, run)?;
            let result = match method {
                Method::Exhaustive => cheeger_constant_exhaustive(t.finite()?, budgets.subspaces).map(|r| r.to_json()),
                Method::Coordinate => t.cheeger_coordinate_json(budgets.subsets),
            };
            let json = match result {
                Ok(v) => v,
                Err(PairingError::Undefined(_)) => json!({ "value": "undefined", "method": method_name(*method) }),
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome::new(json))
        }
        Command::Qvalence { input, method } => {
            let t = load_triple(input, run)?;
            let json = match method {
                Method::Exhaustive => q_valence_exhaustive(t.finite()?, budgets.bases)?.to_json(),
                Method::Coordinate => json!({ "value": t.q_valence_coordinate(), "method": "coordinate-upper-bound" }),
            };
            Ok(Outcome::new(json))
        }
        Command::Connectedness { input } => {
            let t = load_triple(input, run)?;
            Ok(Outcome::new(
                is_pairing_connected_exhaustive(t.finite()?, budgets.subspaces)?.to_json(),
            ))
        }
        Command::BuildTriple { input } => Ok(Outcome::new(build_triple_dyn(&load_graph(input)?, run.field)?.1)),
        Command::Augment { input, pivot } => Ok(Outcome::new(load_triple(input, run)?.augment(*pivot)?.to_json())),
        Command::VerifyTheorem { source } => Ok(verification(verify_main_theorem(
            &collect_graphs(source, run)?,
            run.field,
            &budgets,
        )?)),
        Command::VerifyAugmentation { source } => Ok(verification(verify_augmentation(
            &collect_graphs(source, run)?,
            run.field,
            &budgets,
        )?)),
        Command::FamilyReport {
            source,
            mode,
            with_triples,
            valence_bound,
        } => {
            let mode = match mode {
                Mode::Exact => GraphMode::Exact,
                Mode::Spectral => GraphMode::Spectral,
            };
            let (mut graphs, mut triples) = (Vec::new(), Vec::new());
            for item in collect_inputs(source, run)? {
                match item {
                    Loaded::Graph(g) => graphs.push(g),
                    Loaded::Triple(t) => triples.push(t),
                }
            }
            let report = if !triples.is_empty() {
                if !graphs.is_empty() {
                    return Err(CliError::Usage(
                        "family members must be all graphs or all triples".into(),
                    ));
                }
                triple_family_report(&triples, &budgets, *valence_bound)
            } else if *with_triples {
                graph_triple_family_report(&graphs, run.field, mode, &budgets, *valence_bound)?
            } else {
                graph_family_report(&graphs, mode, &budgets, *valence_bound)
            };
            Ok(family(report))
        }
        Command::Gen { family, size, degree } => {
            let g = family_member(*family, *size, *degree, run.seed)?;
            let mut out = Outcome::new(serde_json::to_value(g.to_json()).expect("graph JSON serializes"));
            out.edgelist = Some(g.to_edgelist());
            Ok(out)
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exhaustive => "exhaustive",
        Method::Coordinate => "coordinate",
    }
}

fn labels(g: &SimplicialGraph, members: &[usize]) -> Vec<String> {
    members.iter().map(|&i| g.label(i).to_string()).collect()
}

fn set_text(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn graph_h(g: &SimplicialGraph, mode: Mode, run: &RunArgs) -> Result<Outcome, CliError> {
    let n = g.vertex_count();
    if n < 2 {
        let mut out = Outcome::new(json!({ "h": "undefined", "minimizer": null }));
        out.human = Some(format!("h = undefined ({n} vertices)\n"));
        return Ok(out);
    }
    let exact = |h: String, minimizer: Vec<String>| {
        let human = format!("h = {h}\nminimizer = {}\n", set_text(&minimizer));
        let mut out = Outcome::new(json!({ "h": h, "minimizer": minimizer }));
        out.human = Some(human);
        out
    };
    match mode {
        Mode::Exact => {
            let r = cheeger_graph_exact(g, run.budget_subsets)?;
            Ok(exact(format_rational(&r.value), labels(g, &r.minimizer)))
        }
        Mode::Spectral => match spectral_cheeger_bounds(g) {
            Ok(b) => {
                let mut out =
                    Outcome::new(json!({ "bound": { "lower": b.lower, "upper": b.upper, "lambda2": b.lambda2 } }));
                out.human = Some(format!(
                    "h: bound [{:.6}, {:.6}]\nlambda2: bound {:.6}\n",
                    b.lower, b.upper, b.lambda2
                ));
                Ok(out)
            }
            Err(GraphError::Disconnected) => {
                // the smallest component has no boundary and at most half the vertices
                let smallest = g
                    .components()
                    .into_iter()
                    .min_by_key(Vec::len)
                    .expect("a graph with vertices has a component");
                Ok(exact("0".into(), labels(g, &smallest)))
            }
            Err(e) => Err(e.into()),
        },
    }
}

fn verification(v: Verification) -> Outcome {
    let mut human = format!("checked: {}\nfailed: {}\nchecks: {}\n", v.checked, v.failed, v.checks);
    for f in &v.failures {
        human.push_str(&format!("member {}: {} failed ({})\n", f.index, f.check, f.detail));
    }
    let mut out = Outcome::new(v.to_json());
    out.human = Some(human);
    out.passed = v.passed();
    out
}

fn family(report: FamilyReport) -> Outcome {
    let (header, rows) = family_table(&report);
    let mut human = crate::output::aligned(&header, &rows);
    human.push_str(&format!(
        "prefix infimum: {}\nmax valence seen: {}\nverdict: {}\nnote: {}\n",
        report
            .prefix_infimum
            .as_ref()
            .map_or("none".to_string(), ToString::to_string),
        report.max_valence_seen.map_or("unknown".to_string(), |v| v.to_string()),
        report.verdict,
        report.note,
    ));
    let mut out = Outcome::new(report.to_json());
    let within_bound = match (report.valence_bound, report.max_valence_seen) {
        (Some(bound), Some(seen)) => seen <= bound,
        _ => true,
    };
    out.passed = within_bound && report.entries.iter().all(|e| e.checks_passed != Some(false));
    out.table = Some((header, rows));
    out.human = Some(human);
    out
}

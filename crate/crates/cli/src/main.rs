//! `cca`: build groups and coloured Cayley graphs, decide the CCA property,
//! and rerun the stock examples and enumerations.

use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cca_core::cayley::{cayley, ColouredCayleyGraph, GraphJson};
use cca_core::constructions::{self, Example};
use cca_core::engine::{self, autc_group, quick_verdict};
use cca_core::enumerate::{self, Base, EnumerationOptions, EnumerationReport, Mode};
use cca_core::structure::{self, canonical_sets};
use cca_core::{build_str, limits, words, Error, FiniteGroup};

const GRAMMAR: &str = "\
group specs:
  zN                cyclic of order N
  dN                dihedral of order 2N
  sN, aN            symmetric and alternating groups of degree N
  q8, e2^N, q8xz2^N quaternion, elementary abelian, Q8 x Z2^N
  prod(G;H;..)      direct product
  sd(N;K;[i,..]/..) semidirect product; per generator of K, the images of
                    N's element indices under its automorphism
  wreath(G;H@m)     wreath product over a degree-m action of H
  dih(A)            generalised dihedral
  dic(A;y=LABEL)    generalised dicyclic
  f21, agl17, psl27, pgl27, f21xz2, agl17xz2
element sets:
  comma-separated words in the group's labels and symbols, e.g. `y^2, x*y^2, r`;
  `(w)^-1` inverts, `a^±1` expands to both signs, `(0 1)(2 3)` is cycle notation";

#[derive(Parser, Debug)]
#[command(name = "cca", version, about = "Colour-preserving automorphisms of Cayley graphs", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group operations.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Build a coloured Cayley graph.
    Cayley {
        spec: String,
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide the CCA property. TARGET is a group spec (with --set) or a graph JSON file (`-` for stdin).
    Check {
        target: String,
        #[arg(long)]
        set: Option<String>,
        /// Stop at the first witness instead of computing all of Aut_c.
        #[arg(long)]
        quick: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Rerun a stock example.
    Reproduce {
        #[arg(value_enum)]
        id: ExampleId,
        /// Exhaustive rather than canonical-pruned enumeration.
        #[arg(long)]
        slow: bool,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Number of extra Z2 factors in the knn-q8 example.
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Scan every inverse-closed connection set of a base group.
    Enumerate {
        #[arg(value_parser = parse_base)]
        base: Base,
        /// Test every subset instead of one per conjugacy class.
        #[arg(long)]
        slow: bool,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decompose Aut_c of a non-CCA graph and compute the reduced graph.
    Decompose {
        target: String,
        #[arg(long)]
        set: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum GroupAction {
    /// Build a group from its spec and describe it.
    Build {
        spec: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleId {
    F21Heawood,
    KnnQ8,
    Agl17Subdivision,
    WreathDemo,
    Thm45Sweep,
    Prop56F21,
    Prop56Agl17,
    Prop56F21xz2,
    Thm51Decompose,
    Prop53Roundtrip,
}

fn parse_base(s: &str) -> Result<Base, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Library(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn require(format: Format, allowed: &[Format]) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let names: Vec<String> = allowed.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
        Err(Failure::Usage(format!("format {format:?} is not available here; use one of: {}", names.join(", ")).to_lowercase()))
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("output serialises")
}

fn load_graph(target: &str, set: Option<&str>) -> CliResult<ColouredCayleyGraph> {
    if let Some(set) = set {
        let g = build_str(target)?;
        let s = words::resolve_set(&g, set)?;
        return Ok(cayley(g, &s)?);
    }
    let text = if target == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(target)
            .map_err(|e| Failure::Usage(format!("`{target}` is not a readable graph file ({e}); pass --set to treat it as a group spec")))?
    };
    let json: GraphJson =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("`{target}` is not a graph JSON file: {e}")))?;
    Ok(ColouredCayleyGraph::from_json(&json)?)
}

fn group_json(g: &FiniteGroup) -> Value {
    json!({
        "name": g.name(),
        "order": g.order(),
        "degree": g.degree(),
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "generators": g.generators().iter().map(|&i| g.label(i)).collect::<Vec<_>>(),
        "element_orders": g.order_histogram(),
        "elements": (0..g.order()).map(|i| g.label(i)).collect::<Vec<_>>(),
    })
}

fn check_json(graph: &ColouredCayleyGraph, quick: bool) -> CliResult<(Value, engine::Verdict)> {
    if quick {
        let (verdict, witness) = quick_verdict(graph)?;
        let v = json!({
            "order": graph.order(),
            "connection_set": graph.connection_labels(),
            "connected": graph.is_connected(),
            "verdict": verdict,
            "witness_permutation": witness.map(|w| w.to_vec()),
        });
        return Ok((v, verdict));
    }
    let autc = autc_group(graph)?;
    let mut v = serde_json::to_value(autc.to_json()).expect("serialises");
    v["connected"] = json!(graph.is_connected());
    v["stabiliser_shape_allowed"] = json!(engine::stabiliser_shape_is_allowed(&autc.stabiliser_group()?));
    Ok((v, autc.verdict))
}

fn example_json(id: &str, ex: &Example) -> CliResult<Value> {
    let graph = ex.construction.graph();
    let autc = autc_group(graph)?;
    Ok(json!({
        "id": id,
        "group": graph.group().name(),
        "vertices": graph.order(),
        "connection_set": graph.connection_labels(),
        "base_graph_vertices": ex.gamma.vertex_count(),
        "h_order": ex.construction.h_embedding.order(),
        "g_normal_in_h": ex.construction.g_normal_in_h,
        "verdict": autc.verdict,
        "autc_order": autc.full_group.order(),
        "stabiliser_order": autc.stabiliser.len(),
    }))
}

fn decomposition_json(name: &str, graph: &ColouredCayleyGraph) -> CliResult<Value> {
    let autc = autc_group(graph)?;
    let d = structure::decompose_structure(graph, &autc)?;
    let red = structure::reduction_gamma_prime(graph, &d)?;
    Ok(json!({
        "graph": name,
        "order": graph.order(),
        "connection_set": graph.connection_labels(),
        "autc_order": autc.full_group.order(),
        "decomposition": d.to_json(graph.group()),
        "all_properties_hold": d.all_hold(),
        "reduction": red.to_json(graph.group()),
        "orders_of_y": red.orders_of_y,
    }))
}

fn enumerate_report(base: Base, slow: bool, jobs: usize) -> CliResult<EnumerationReport> {
    let mode = if slow { Mode::Full } else { Mode::Canonical };
    Ok(enumerate::enumerate_connection_sets(base, EnumerationOptions { mode, jobs })?)
}

fn report_output(report: &EnumerationReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        _ => report.to_json(),
    }
}

/// Masks of the named non-CCA sets for a base, as canonical masks.
fn named_classes(base: Base) -> CliResult<Vec<u32>> {
    let c = canonical_sets()?;
    let units = enumerate::unit_system(base)?;
    let sets = match base {
        Base::F21 => vec![c.s21],
        Base::Agl17 => vec![c.s42_1, c.s42_2],
        Base::F21xz2 => return Ok(Vec::new()),
    };
    let mut out = Vec::new();
    for s in sets {
        out.push(units.canonical(units.mask_of(&s)?));
    }
    out.sort_unstable();
    Ok(out)
}

fn reproduce(id: ExampleId, slow: bool, jobs: usize, m: usize, format: Format) -> CliResult<String> {
    let prop56 = match id {
        ExampleId::Prop56F21 => Some(Base::F21),
        ExampleId::Prop56Agl17 => Some(Base::Agl17),
        ExampleId::Prop56F21xz2 => Some(Base::F21xz2),
        _ => None,
    };
    if let Some(base) = prop56 {
        require(format, &[Format::Json, Format::Csv])?;
        let report = enumerate_report(base, slow, jobs)?;
        if format == Format::Csv {
            return Ok(report.to_csv());
        }
        let mut found: Vec<u32> = report.non_cca_classes.iter().map(|c| c.mask).collect();
        found.sort_unstable();
        let mut v = serde_json::to_value(&report).expect("serialises");
        if base != Base::F21xz2 {
            v["named_sets_match"] = json!(found == named_classes(base)?);
        }
        return Ok(pretty(&v));
    }
    if id == ExampleId::Thm45Sweep {
        require(format, &[Format::Json, Format::Csv])?;
        let rows = engine::complete_sweep(32)?;
        if format == Format::Csv {
            let mut out = String::from("group,order,case,predicted_order,computed_order,exact_match\n");
            for r in &rows {
                out.push_str(&format!(
                    "\"{}\",{},{},{},{},{}\n",
                    r.group, r.order, r.case, r.predicted_order, r.computed_order, r.exact_match
                ));
            }
            return Ok(out);
        }
        let all = rows.iter().all(|r| r.exact_match);
        return Ok(pretty(&json!({ "id": "thm45-sweep", "groups": rows.len(), "all_match": all, "rows": rows })));
    }
    require(format, &[Format::Json])?;
    let v = match id {
        ExampleId::F21Heawood => example_json("f21-heawood", &constructions::example_f21_heawood()?)?,
        ExampleId::Agl17Subdivision => example_json("agl17-subdivision", &constructions::example_agl17_subdivision()?)?,
        ExampleId::KnnQ8 => example_json("knn-q8", &constructions::example_knn_q8(m)?)?,
        ExampleId::WreathDemo => {
            let w = constructions::example_wreath_demo()?;
            let autc = autc_group(&w.graph)?;
            let mut v = serde_json::to_value(w.to_json()).expect("serialises");
            v["id"] = json!("wreath-demo");
            v["verdict"] = json!(autc.verdict);
            v["autc_order"] = json!(autc.full_group.order());
            v
        }
        ExampleId::Thm51Decompose => {
            let c = canonical_sets()?;
            let sub = constructions::example_agl17_subdivision()?;
            let rows = vec![
                decomposition_json("S21", &cayley(c.f21.clone(), &c.s21)?)?,
                decomposition_json("S42_1", &cayley(c.agl17.clone(), &c.s42_1)?)?,
                decomposition_json("S42_2", &cayley(c.agl17.clone(), &c.s42_2)?)?,
                decomposition_json("agl17-subdivision", sub.construction.graph())?,
            ];
            json!({ "id": "thm51-decompose", "graphs": rows })
        }
        ExampleId::Prop53Roundtrip => {
            let ex = structure::converse_example()?;
            let res = structure::converse_build(Arc::clone(&ex.g), &ex.f, &ex.h, ex.r, &ex.s)?;
            let mut v = serde_json::to_value(res.to_json()).expect("serialises");
            v["id"] = json!("prop53-roundtrip");
            v["group"] = json!(ex.g.name());
            v["decomposition"] = decomposition_json("prop53", &res.graph)?;
            v
        }
        _ => unreachable!("handled above"),
    };
    Ok(pretty(&v))
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Group { action: GroupAction::Build { spec, format } } => {
            require(format, &[Format::Json, Format::Text])?;
            let g = build_str(&spec)?;
            Ok(match format {
                Format::Text => format!(
                    "{} order {} degree {}\n",
                    g.name().unwrap_or(&spec),
                    g.order(),
                    g.degree()
                ),
                _ => pretty(&group_json(&g)),
            })
        }
        Command::Cayley { spec, set, format } => {
            require(format, &[Format::Json, Format::Dot])?;
            let graph = load_graph(&spec, Some(&set))?;
            Ok(match format {
                Format::Dot => graph.to_dot(),
                _ => pretty(&graph.to_json()),
            })
        }
        Command::Check { target, set, quick, format } => {
            require(format, &[Format::Json, Format::Text])?;
            let graph = load_graph(&target, set.as_deref())?;
            let (v, verdict) = check_json(&graph, quick)?;
            Ok(match format {
                Format::Text => format!("{verdict}\n"),
                _ => pretty(&v),
            })
        }
        Command::Reproduce { id, slow, jobs, m, format } => reproduce(id, slow, jobs, m, format),
        Command::Enumerate { base, slow, jobs, format } => {
            require(format, &[Format::Json, Format::Csv])?;
            Ok(report_output(&enumerate_report(base, slow, jobs)?, format))
        }
        Command::Decompose { target, set, format } => {
            require(format, &[Format::Json])?;
            let graph = load_graph(&target, set.as_deref())?;
            Ok(pretty(&decomposition_json(&target, &graph)?))
        }
    }
}

fn apply_cap_from_env() -> CliResult<()> {
    if let Ok(text) = std::env::var("CCA_ENUM_CAP") {
        let cap: std::num::NonZeroUsize = text
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("CCA_ENUM_CAP must be a positive integer, got `{text}`")))?;
        limits::set_closure_cap(cap.get());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{GRAMMAR}");
            return ExitCode::from(64);
        }
    };
    let outcome = apply_cap_from_env().and_then(|_| run(cli));
    match outcome {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{GRAMMAR}");
            ExitCode::from(64)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_hypothesis_violation() { 2 } else { 1 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

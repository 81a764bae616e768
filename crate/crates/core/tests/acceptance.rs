//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines always reach the output. Pass `--ignored` (or
//! `--include-ignored`) to add the exhaustive AGL(1,7) scan.

mod support;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cca_core::cayley::{cayley, ColouredCayleyGraph};
use cca_core::constructions::{example_agl17_subdivision, example_f21_heawood, example_knn_q8};
use cca_core::engine::{autc_group, autc_stabiliser, complete_sweep, quick_verdict, stabiliser_shape_is_allowed, Verdict};
use cca_core::enumerate::{enumerate_connection_sets, unit_system, Base, EnumerationOptions, EnumerationReport, Mode};
use cca_core::structure::{canonical_sets, converse_build, converse_example, decompose_structure};
use cca_core::FiniteGroup;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if took > budget {
        o.pass = false;
        o.detail.push_str(&format!("; over budget ({took:.1?} > {budget:?})"));
    } else {
        o.detail.push_str(&format!(" [{took:.1?}]"));
    }
    o
}

fn canonical(base: Base) -> EnumerationReport {
    enumerate_connection_sets(base, EnumerationOptions { mode: Mode::Canonical, jobs: 0 }).unwrap()
}

fn criterion_1() -> Outcome {
    let rows = complete_sweep(32).unwrap();
    let bad: Vec<&str> = rows.iter().filter(|r| !r.exact_match).map(|r| r.group.as_str()).collect();
    outcome(bad.is_empty(), format!("{} catalog groups, mismatches: {bad:?}", rows.len()))
}

fn criterion_2(report: &EnumerationReport) -> Outcome {
    let c = canonical_sets().unwrap();
    let units = unit_system(Base::F21).unwrap();
    let s21 = units.canonical(units.mask_of(&c.s21).unwrap());
    let classes: Vec<u32> = report.non_cca_classes.iter().map(|k| k.mask).collect();
    outcome(
        report.scanned == 1024 && classes == [s21],
        format!("{} subsets scanned, non-CCA classes {classes:?}, S21 class {s21}", report.scanned),
    )
}

fn criterion_3(report: &EnumerationReport) -> Outcome {
    let family = report.family.clone().unwrap();
    outcome(
        report.non_cca_classes.len() == 11 && family.every_class_in_family && family.family_classes == 11,
        format!("{} classes, family check {family:?}", report.non_cca_classes.len()),
    )
}

fn criterion_4(report: &EnumerationReport) -> Outcome {
    let c = canonical_sets().unwrap();
    let units = unit_system(Base::Agl17).unwrap();
    let mut named: Vec<u32> = [&c.s42_1, &c.s42_2].iter().map(|s| units.canonical(units.mask_of(s).unwrap())).collect();
    named.sort_unstable();
    let found: Vec<u32> = report.non_cca_classes.iter().map(|k| k.mask).collect();
    let named_ok = [&c.s42_1, &c.s42_2].iter().all(|s| {
        let g = cayley(c.agl17.clone(), s).unwrap();
        g.is_connected() && quick_verdict(&g).unwrap().0 == Verdict::NonCca
    });
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a617);
    let mut disagreements = 0;
    let mut non_cca_seen = 0;
    for _ in 0..10_000 {
        let mask: u32 = rng.gen::<u32>() & ((1 << units.unit_count()) - 1);
        let graph = cayley(c.agl17.clone(), &units.elements(mask)).unwrap();
        let oracle = graph.is_connected() && named.contains(&units.canonical(mask));
        let engine = graph.is_connected() && quick_verdict(&graph).unwrap().0 == Verdict::NonCca;
        non_cca_seen += engine as usize;
        disagreements += (oracle != engine) as usize;
    }
    // Random subsets almost never land in the two small orbits, so the
    // orbits themselves are sampled too.
    let mut conjugates_ok = true;
    for s in [&c.s42_1, &c.s42_2] {
        let mask = units.mask_of(s).unwrap();
        for _ in 0..100 {
            let a = rng.gen_range(0..units.ambient().order());
            let graph = cayley(c.agl17.clone(), &units.elements(units.image(a, mask))).unwrap();
            conjugates_ok &= graph.is_connected() && quick_verdict(&graph).unwrap().0 == Verdict::NonCca;
        }
    }
    outcome(
        named_ok && found == named && disagreements == 0 && conjugates_ok,
        format!(
            "pruned classes {found:?} vs named {named:?}; named sets connected non-CCA: {named_ok}; \
             10000 random subsets, {non_cca_seen} non-CCA, {disagreements} disagreements; \
             200 random conjugates non-CCA: {conjugates_ok}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, ex, order, check) in [
        ("f21-heawood", example_f21_heawood().unwrap(), 21, (|a: usize| a == 168) as fn(usize) -> bool),
        ("agl17-subdivision", example_agl17_subdivision().unwrap(), 42, |a| a % 336 == 0),
        ("knn-q8", example_knn_q8(0).unwrap(), 64, |_| true),
    ] {
        let start = Instant::now();
        let graph = ex.construction.graph();
        let autc = autc_group(graph).unwrap();
        let ok = graph.order() == order
            && autc.verdict == Verdict::NonCca
            && check(autc.full_group.order())
            && start.elapsed() < Duration::from_secs(30);
        pass &= ok;
        parts.push(format!("{name}: {} vertices, |Aut_c| = {}", graph.order(), autc.full_group.order()));
    }
    outcome(pass, parts.join("; "))
}

fn decomposes(graph: &ColouredCayleyGraph) -> Option<[bool; 6]> {
    let autc = autc_group(graph).ok()?;
    decompose_structure(graph, &autc).ok().map(|d| d.properties)
}

fn criterion_6(f21: &EnumerationReport, agl17: &EnumerationReport) -> Outcome {
    let c = canonical_sets().unwrap();
    let mut graphs: Vec<(String, ColouredCayleyGraph)> = Vec::new();
    for k in &f21.non_cca_classes {
        graphs.push((format!("f21 class {:?}", k.representative), cayley(c.f21.clone(), &k.elements).unwrap()));
    }
    for k in &agl17.non_cca_classes {
        graphs.push((format!("agl17 class {:?}", k.representative), cayley(c.agl17.clone(), &k.elements).unwrap()));
    }
    graphs.push(("agl17-subdivision".into(), example_agl17_subdivision().unwrap().construction.graph().clone()));
    let bad: Vec<&str> =
        graphs.iter().filter(|(_, g)| decomposes(g) != Some([true; 6])).map(|(n, _)| n.as_str()).collect();
    outcome(bad.is_empty() && graphs.len() == 4, format!("{} graphs decomposed, failures: {bad:?}", graphs.len()))
}

fn criterion_7() -> Outcome {
    let ex = converse_example().unwrap();
    let res = converse_build(ex.g.clone(), &ex.f, &ex.h, ex.r, &ex.s).unwrap();
    outcome(
        res.agrees() && res.predicted == Verdict::NonCca && res.graph.order() == 210,
        format!(
            "order {}, predicted {}, engine {}, |Aut_c| = {}",
            res.graph.order(),
            res.predicted,
            res.engine,
            res.autc_order
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut shapes_ok = true;

    // (a) and (c) on random graphs
    let groups = support::catalog_groups(48);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut a_ok = true;
    for _ in 0..200 {
        let graph = support::random_connected_graph(&mut rng, &groups);
        let stab = autc_stabiliser(&graph).unwrap();
        a_ok &= stab.len().is_power_of_two();
        shapes_ok &= stabiliser_shape_is_allowed(&FiniteGroup::from_element_set(graph.order(), &stab).unwrap());
    }
    notes.push(format!("(a) 200 random graphs: {a_ok}"));

    // (b) and (c) on every inverse-closed generating set of order <= 8
    let mut b_ok = true;
    let mut b_count = 0;
    for g in support::catalog_groups(8) {
        let units = support::units(&g);
        for mask in 1u64..1 << units.len() {
            let graph = cayley(g.clone(), &support::set_from_mask(&units, mask)).unwrap();
            if !graph.is_connected() {
                continue;
            }
            b_count += 1;
            let stab = autc_stabiliser(&graph).unwrap();
            let ours: BTreeSet<Vec<usize>> = stab.iter().map(|p| p.to_vec()).collect();
            b_ok &= ours == support::brute_force_stabiliser(&graph);
            shapes_ok &= stabiliser_shape_is_allowed(&FiniteGroup::from_element_set(graph.order(), &stab).unwrap());
        }
    }
    notes.push(format!("(b) {b_count} graphs against brute force: {b_ok}"));
    notes.push(format!("(c) shapes: {shapes_ok}"));

    // (d)
    let combos = support::wreath_combinations();
    let d_ok = combos.len() >= 20 && combos.iter().all(|(_, w)| support::wreath_invariants(w) == [true; 3]);
    notes.push(format!("(d) {} wreath combinations: {d_ok}", combos.len()));

    outcome(a_ok && b_ok && shapes_ok && d_ok, notes.join("; "))
}

fn acceptance_criteria() -> bool {
    let mut lines = Vec::new();
    let mins = |m: u64| Duration::from_secs(60 * m);
    lines.push((1, timed(mins(2), criterion_1)));
    let mut f21 = None;
    lines.push((
        2,
        timed(mins(1), || {
            let r = canonical(Base::F21);
            let o = criterion_2(&r);
            f21 = Some(r);
            o
        }),
    ));
    lines.push((3, timed(mins(10), || criterion_3(&canonical(Base::F21xz2)))));
    let mut agl17 = None;
    lines.push((
        4,
        timed(mins(60), || {
            let r = canonical(Base::Agl17);
            let o = criterion_4(&r);
            agl17 = Some(r);
            o
        }),
    ));
    lines.push((5, timed(Duration::from_secs(90), criterion_5)));
    let (f21, agl17) = (f21.unwrap(), agl17.unwrap());
    lines.push((6, timed(mins(1), || criterion_6(&f21, &agl17))));
    lines.push((7, timed(mins(5), criterion_7)));
    lines.push((8, timed(mins(10), criterion_8)));
    for (n, o) in &lines {
        println!("criterion {n}: {} - {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let failed: Vec<usize> = lines.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
    }
    failed.is_empty()
}

/// Exhaustive version of criterion 4: every one of the 2^24 subsets is
/// tested and the classes must match the pruned scan.
fn criterion_4_full_enumeration() -> bool {
    let start = Instant::now();
    let full = enumerate_connection_sets(Base::Agl17, EnumerationOptions { mode: Mode::Full, jobs: 0 }).unwrap();
    let pruned = canonical(Base::Agl17);
    let same = full.non_cca_classes == pruned.non_cca_classes
        && full.connected_count == pruned.connected_count
        && full.connected_classes == pruned.connected_classes;
    let pass = same && full.non_cca_classes.len() == 2 && start.elapsed() < Duration::from_secs(3600);
    println!(
        "criterion 4 (full): {} - {} classes, full and pruned agree: {same} [{:.1?}]",
        if pass { "PASS" } else { "FAIL" },
        full.non_cca_classes.len(),
        start.elapsed()
    );
    pass
}

fn main() -> std::process::ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance_criteria: test");
        return std::process::ExitCode::SUCCESS;
    }
    // a name filter from `cargo test <filter>` that does not match skips the run
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance_criteria".contains(f.as_str())) {
        return std::process::ExitCode::SUCCESS;
    }
    let slow_only = args.iter().any(|a| a == "--ignored");
    let slow = slow_only || args.iter().any(|a| a == "--include-ignored");
    let mut ok = true;
    if !slow_only {
        ok &= acceptance_criteria();
    } else {
        println!("criterion 4 (full): running the exhaustive scan only");
    }
    if slow {
        ok &= criterion_4_full_enumeration();
    } else {
        println!("criterion 4 (full): skipped; pass --ignored to run the exhaustive AGL(1,7) scan");
    }
    if ok {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}

use std::sync::Arc;

use cca_core::cayley::{cayley, complete_cayley, ColouredCayleyGraph};
use cca_core::engine::{autc_group, Verdict};
use cca_core::enumerate::{enumerate_connection_sets, Base, EnumerationOptions};
use cca_core::structure::{
    canonical_sets, converse_build, converse_example, decompose_structure, reduction_gamma_prime,
};
use cca_core::{build_str, words, Error, FiniteGroup};

fn classes(base: Base) -> Vec<Vec<usize>> {
    enumerate_connection_sets(base, EnumerationOptions::default())
        .unwrap()
        .non_cca_classes
        .into_iter()
        .map(|c| c.elements)
        .collect()
}

/// Decompose, reduce, and rebuild through the converse; every check must
/// hold.
fn full_cycle(g: Arc<FiniteGroup>, s: &[usize]) -> (ColouredCayleyGraph, Vec<String>) {
    let graph = cayley(g.clone(), s).unwrap();
    let autc = autc_group(&graph).unwrap();
    assert_eq!(autc.verdict, Verdict::NonCca);
    let d = decompose_structure(&graph, &autc).unwrap();
    assert!(d.all_hold(), "{:?}", d.properties);
    assert_eq!(d.t.order(), 168);
    assert_eq!(d.f.order(), 21);
    assert_eq!(d.t.order() * d.j.order() * d.r_group.order(), d.a.order());
    assert_eq!(d.f.order() * d.h.order() * d.r_group.order(), g.order());
    let red = reduction_gamma_prime(&graph, &d).unwrap();
    assert_eq!(red.claims, [true; 3]);
    assert!(red.orders_of_y);
    assert_eq!(red.gamma_prime_verdict, Verdict::NonCca);
    assert_eq!(red.gamma_prime.order(), d.f.order() * d.r_group.order());
    let back = converse_build(g.clone(), &d.f_indices(), &d.h_indices(), d.r, s).unwrap();
    assert!(back.agrees());
    assert_eq!(back.autc_order, autc.full_group.order());
    let y = red.y.iter().map(|&i| g.label(i)).collect();
    (graph, y)
}

#[test]
fn f21_class_is_the_base_case() {
    let c = canonical_sets().unwrap();
    for s in classes(Base::F21) {
        let graph = cayley(c.f21.clone(), &s).unwrap();
        let autc = autc_group(&graph).unwrap();
        let d = decompose_structure(&graph, &autc).unwrap();
        assert_eq!((d.t.order(), d.j.order(), d.h.order(), d.r_group.order()), (168, 1, 1, 1));
        assert!(d.t.same_elements(&d.a));
        assert_eq!(d.r, None);
        let red = reduction_gamma_prime(&graph, &d).unwrap();
        assert!(red.y.is_empty());
        let mut sp = red.s_prime.clone();
        sp.sort_unstable();
        let mut s = s.clone();
        s.sort_unstable();
        assert_eq!(sp, s, "with trivial R the reduction leaves S alone");
    }
}

#[test]
fn agl17_classes_round_trip_and_satisfy_the_order_facts() {
    let c = canonical_sets().unwrap();
    for s in classes(Base::Agl17) {
        let (_, y) = full_cycle(c.agl17.clone(), &s);
        assert!(y.is_empty(), "{y:?}");
    }
}

#[test]
fn f21xz2_classes_have_nonempty_y() {
    let c = canonical_sets().unwrap();
    let found = classes(Base::F21xz2);
    assert_eq!(found.len(), 11);
    let mut nonempty = 0;
    for s in found {
        let (_, y) = full_cycle(c.f21xz2.clone(), &s);
        nonempty += !y.is_empty() as usize;
    }
    assert_eq!(nonempty, 10);
}

#[test]
fn converse_example_and_its_decomposition() {
    let ex = converse_example().unwrap();
    assert_eq!(ex.g.order(), 210);
    let res = converse_build(ex.g.clone(), &ex.f, &ex.h, ex.r, &ex.s).unwrap();
    assert_eq!((res.predicted, res.engine), (Verdict::NonCca, Verdict::NonCca));
    assert_eq!(res.autc_order, 3360);
    assert_eq!(res.reduction_graph.order(), 42);
    let autc = autc_group(&res.graph).unwrap();
    let d = decompose_structure(&res.graph, &autc).unwrap();
    assert_eq!(
        (d.t.order(), d.j.order(), d.f.order(), d.h.order(), d.r_group.order()),
        (168, 10, 21, 5, 2)
    );
    assert!(d.all_hold());
}

#[test]
fn converse_rejects_a_non_cyclic_sylow_three() {
    let g = Arc::new(build_str("prod(f21;z3)").unwrap());
    let f = g.closure_indices(&[words::resolve(&g, "x").unwrap(), words::resolve(&g, "y^2").unwrap()]);
    let s = words::resolve_set(&g, "y^2, y^-2, x*y^2, (x*y^2)^-1").unwrap();
    let err = converse_build(g, &f, &[0], None, &s).unwrap_err();
    assert!(matches!(err, Error::HypothesisViolated(_)), "{err}");
}

#[test]
fn converse_reproduces_the_base_case() {
    let c = canonical_sets().unwrap();
    let all: Vec<usize> = (0..21).collect();
    let res = converse_build(c.f21.clone(), &all, &[0], None, &c.s21).unwrap();
    assert!(res.agrees());
    assert_eq!(res.autc_order, 168);
}

#[test]
fn cca_graphs_are_refused() {
    let g = build_str("z5").unwrap();
    let graph = cayley(g, &[1, 4]).unwrap();
    let autc = autc_group(&graph).unwrap();
    assert!(matches!(decompose_structure(&graph, &autc), Err(Error::HypothesesNotMet(_))));
    let k = complete_cayley(build_str("d3").unwrap()).unwrap();
    let autc = autc_group(&k).unwrap();
    assert!(matches!(decompose_structure(&k, &autc), Err(Error::HypothesesNotMet(_))));
}

#[test]
fn named_sets_match_their_descriptions() {
    let c = canonical_sets().unwrap();
    let g = &c.agl17;
    let d = words::resolve(g, "d").unwrap();
    let y3 = words::resolve(g, "y^3").unwrap();
    let x = words::resolve(g, "x").unwrap();
    assert_eq!(d, g.conj(y3, x));
    assert_eq!(g.element_order(x), 7);
    assert_eq!(g.element_order(words::resolve(g, "y").unwrap()), 6);
    assert_eq!(g.element_order(d), 2);
    assert!(c.s21.iter().all(|&s| c.f21.element_order(s) == 3));
}

//! Helpers shared by the integration tests: independent oracles and input
//! generators.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use cca_core::builders::{self, catalog, MapName};
use cca_core::cayley::{cayley, ColouredCayleyGraph};
use cca_core::constructions::{wreath_witness, WreathWitness};
use cca_core::engine::predicted_autc_complete;
use cca_core::{build_str, Error, FiniteGroup, Permutation};

/// Inverse pairs and involutions of `g`, each as a sorted element list.
pub fn units(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in 1..g.order() {
        if !seen[x] {
            let y = g.inv(x);
            seen[x] = true;
            seen[y] = true;
            out.push(if x == y { vec![x] } else { vec![x, y] });
        }
    }
    out
}

pub fn set_from_mask(units: &[Vec<usize>], mask: u64) -> Vec<usize> {
    let mut s: Vec<usize> =
        units.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).flat_map(|(_, u)| u.iter().copied()).collect();
    s.sort_unstable();
    s
}

/// Colour of the edge `{v, w}`: the unit containing `w v^-1`.
fn edge_colour(g: &FiniteGroup, v: usize, w: usize) -> usize {
    let d = g.mul(w, g.inv(v));
    d.min(g.inv(d))
}

/// Colour-preserving automorphisms fixing the identity, by filtering every
/// permutation that fixes 0.
pub fn brute_force_stabiliser(graph: &ColouredCayleyGraph) -> BTreeSet<Vec<usize>> {
    let g = graph.group();
    let n = g.order();
    let edges: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|v| graph.connection().iter().map(move |&s| (v, s)))
        .map(|(v, s)| (v, g.mul(s, v)))
        .map(|(v, w)| (v, w, edge_colour(g, v, w)))
        .collect();
    let is_edge = |a: usize, b: usize| graph.connection().contains(&g.mul(b, g.inv(a)));
    let mut out = BTreeSet::new();
    for tail in (1..n).permutations(n - 1) {
        let mut p = Vec::with_capacity(n);
        p.push(0);
        p.extend(tail);
        if edges.iter().all(|&(v, w, c)| is_edge(p[v], p[w]) && edge_colour(g, p[v], p[w]) == c) {
            out.insert(p);
        }
    }
    out
}

/// Random connected coloured Cayley graphs over catalog groups of order at
/// most `max`.
pub fn random_connected_graph(rng: &mut impl Rng, groups: &[Arc<FiniteGroup>]) -> ColouredCayleyGraph {
    loop {
        let g = groups.choose(rng).expect("nonempty catalog").clone();
        let us = units(&g);
        let keep = rng.gen_range(1..=us.len().min(6));
        let mut idx: Vec<usize> = (0..us.len()).collect();
        idx.shuffle(rng);
        let set: Vec<usize> = idx[..keep].iter().flat_map(|&i| us[i].iter().copied()).collect();
        let graph = cayley(g, &set).expect("inverse-closed by construction");
        if graph.is_connected() {
            return graph;
        }
    }
}

pub fn catalog_groups(max: usize) -> Vec<Arc<FiniteGroup>> {
    catalog::small_groups(max).iter().map(|s| Arc::new(builders::build(s).expect("catalog builds"))).collect()
}

/// The three checks a wreath witness must pass, verified from scratch.
pub fn wreath_invariants(w: &WreathWitness) -> [bool; 3] {
    let x = &w.x;
    let t = &w.tau_prime;
    let fixes = t.apply(0) == 0;
    let graph = &w.graph;
    let colour_preserving = (0..x.order()).all(|v| {
        graph.connection().iter().all(|&s| {
            let a = t.apply(v);
            let b = t.apply(x.mul(s, v));
            let d = x.mul(b, x.inv(a));
            d == s || d == x.inv(s)
        })
    });
    let (a, b) = w.broken_product;
    let broken = t.apply(x.mul(a, b)) != x.mul(t.apply(a), t.apply(b));
    [fixes, colour_preserving, broken]
}

/// `(G, S, τ)` triples with τ satisfying the ±1 condition on `Cay(G, S)`.
pub fn wreath_bases() -> Vec<(FiniteGroup, Vec<usize>, Permutation, bool)> {
    let mut out = Vec::new();
    for spec in ["z3", "z4", "z5", "z6", "prod(z2;z4)"] {
        let g = build_str(spec).unwrap();
        let all: Vec<usize> = (1..g.order()).collect();
        let tau = builders::named_map(&g, &MapName::Inversion).unwrap().carrier;
        let is_aut = builders::is_automorphism(&g, &tau);
        out.push((g, all, tau, is_aut));
    }
    for spec in ["q8", "dic(z6;y=3)"] {
        let g = build_str(spec).unwrap();
        let all: Vec<usize> = (1..g.order()).collect();
        let pred = predicted_autc_complete(&g).unwrap();
        let tau = pred.generators.last().unwrap().clone();
        let is_aut = builders::is_automorphism(&g, &tau);
        out.push((g, all, tau, is_aut));
    }
    out
}

pub fn wreath_tops() -> Vec<FiniteGroup> {
    vec![FiniteGroup::trivial(1), build_str("z2").unwrap(), build_str("z3").unwrap(), build_str("s3").unwrap()]
}

/// All `(G, S, τ, H)` combinations that satisfy the hypotheses, with their
/// witnesses; combinations rejected by the second condition are checked to
/// be exactly those with trivial `H` and τ an automorphism.
pub fn wreath_combinations() -> Vec<(String, WreathWitness)> {
    let mut out = Vec::new();
    for (g, s, tau, tau_is_aut) in wreath_bases() {
        for h in wreath_tops() {
            let name = format!("{} / {}", g.name().unwrap_or("?"), h.name().unwrap_or("1"));
            if g.order().pow(h.degree() as u32) * h.order() > 6000 {
                continue;
            }
            match wreath_witness(&g, &s, &tau, &h) {
                Ok(w) => out.push((name, w)),
                Err(Error::HypothesisViolated(msg)) => {
                    assert!(tau_is_aut && h.order() == 1, "{name}: unexpected rejection {msg}");
                    assert!(msg.starts_with("second condition"), "{name}: {msg}");
                }
                Err(e) => panic!("{name}: {e}"),
            }
        }
    }
    out
}

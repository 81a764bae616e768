//! Non-CCA witnesses: wreath products, line graphs and subdivisions.

use std::collections::HashSet;

use serde::Serialize;

use crate::builders::{self, wreath_product, GroupSpec, MapName, QuaternionUnit};
use crate::cayley::{cayley, complete_cayley, ColouredCayleyGraph};
use crate::engine::{is_colour_preserving, predicted_autc_complete, CompleteCase};
use crate::error::{Error, Result};
use crate::group::{close_generators, is_normal, sylow_subgroup, ElementLabel, FiniteGroup};
use crate::iso::find_isomorphism;
use crate::perm::Permutation;
use crate::plain::{realize_line_graph_as_cayley, LineRealization, PlainGraph};

/// Cayley graph on `G wr H` with the colour-preserving non-automorphism `τ′`.
#[derive(Debug, Clone)]
pub struct WreathWitness {
    pub x: FiniteGroup,
    pub connection: Vec<usize>,
    pub tau_prime: Permutation,
    pub graph: ColouredCayleyGraph,
    /// Elements `a, b` of `X` with `τ′(ab) ≠ τ′(a) τ′(b)`.
    pub broken_product: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct WreathWitnessJson {
    pub group: String,
    pub order: usize,
    pub connection_set: Vec<String>,
    pub tau_prime: Vec<usize>,
    pub broken_product: [String; 2],
}

impl WreathWitness {
    pub fn to_json(&self) -> WreathWitnessJson {
        WreathWitnessJson {
            group: self.x.name().unwrap_or("").to_string(),
            order: self.x.order(),
            connection_set: self.graph.connection_labels(),
            tau_prime: self.tau_prime.to_vec(),
            broken_product: [self.x.label(self.broken_product.0), self.x.label(self.broken_product.1)],
        }
    }
}

fn violated(msg: impl Into<String>) -> Error {
    Error::HypothesisViolated(msg.into())
}

fn is_group_automorphism(g: &FiniteGroup, p: &Permutation) -> bool {
    builders::is_automorphism(g, p)
}

/// `τ(s g) ∈ {s τ(g), s^-1 τ(g)}` for all `g` and all `s` in `S`.
fn satisfies_pm1_condition(g: &FiniteGroup, set: &[usize], tau: &Permutation) -> bool {
    set.iter().all(|&s| {
        (0..g.order()).all(|v| {
            let t = tau.apply(g.mul(s, v));
            let tv = tau.apply(v);
            t == g.mul(s, tv) || t == g.mul(g.inv(s), tv)
        })
    })
}

/// Builds `Cay(X, T)` on `X = G wr_Ω H` with
/// `T = (H - 1) ∪ S_1 ∪ .. ∪ S_m` and `τ′: h g_1 .. g_m -> h τ(g_1) g_2 .. g_m`,
/// after checking the hypotheses on `(G, S, τ, H)`.
pub fn wreath_witness(g: &FiniteGroup, set: &[usize], tau: &Permutation, h: &FiniteGroup) -> Result<WreathWitness> {
    let base = cayley(g.clone(), set)?;
    if !base.is_connected() {
        return Err(violated("S does not generate G"));
    }
    if tau.degree() != g.order() {
        return Err(Error::DegreeMismatch { expected: g.order(), found: tau.degree() });
    }
    if tau.apply(0) != 0 || tau.is_identity() || !satisfies_pm1_condition(g, set, tau) {
        return Err(violated(
            "first condition: tau must be a non-identity permutation fixing 1 with tau(sg) = s^±1 tau(g)",
        ));
    }
    let h_trivial = h.order() == 1;
    if h_trivial && is_group_automorphism(g, tau) {
        return Err(violated("second condition: H is trivial and tau is a group automorphism"));
    }
    let m = h.degree();
    let h = match (0..m).find(|&j| h.elements().iter().any(|p| p.apply(j) != j)) {
        Some(j) if j != 0 && h.elements().iter().all(|p| p.apply(0) == 0) => {
            let swap = Permutation::from_cycles(m, &[&[0, j]])?;
            h.conjugated(&swap)
        }
        _ => h.clone(),
    };
    let h = match h.name() {
        Some(_) => h,
        None => h.with_name(format!("H{m}")),
    };
    let x = wreath_product(g, &h, m)?;
    let by_coords: std::collections::HashMap<Vec<u32>, usize> =
        (0..x.order()).map(|i| (x.coords(i).unwrap().to_vec(), i)).collect();
    let mut connection = Vec::new();
    for k in 1..h.order() {
        let mut c = vec![0u32; m + 1];
        c[0] = k as u32;
        connection.push(by_coords[&c]);
    }
    for i in 0..m {
        for &s in set {
            let mut c = vec![0u32; m + 1];
            c[1 + i] = s as u32;
            connection.push(by_coords[&c]);
        }
    }
    let tau_prime = builders::named_map(&x, &MapName::TauPrime(tau.clone()))?.carrier;
    let graph = cayley(x.clone(), &connection)?;
    if tau_prime.apply(0) != 0 {
        return Err(Error::Inconsistent("tau' moves the identity".into()));
    }
    if !is_colour_preserving(&graph, &tau_prime) {
        return Err(Error::Inconsistent("tau' is not colour-preserving".into()));
    }
    let broken_product = connection
        .iter()
        .flat_map(|&a| (0..x.order()).map(move |b| (a, b)))
        .find(|&(a, b)| tau_prime.apply(x.mul(a, b)) != x.mul(tau_prime.apply(a), tau_prime.apply(b)))
        .ok_or_else(|| Error::Inconsistent("tau' is a group automorphism".into()))?;
    Ok(WreathWitness { x, connection, tau_prime, graph, broken_product })
}

/// Outcome of testing whether `(G, B)` is a complete colour pair.
#[derive(Debug, Clone)]
pub struct CompleteColourPairCheck {
    pub local_g: FiniteGroup,
    pub local_b: FiniteGroup,
    pub is_pair: bool,
    pub case: CompleteCase,
}

/// `G` must be regular; `B` is tested for containing `G` and preserving
/// colours on `K_G` (points identified with elements via the image of 0).
pub fn is_complete_colour_pair(local_g: &FiniteGroup, local_b: &FiniteGroup) -> Result<CompleteColourPairCheck> {
    let n = local_g.degree();
    if local_b.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: local_b.degree() });
    }
    let mut elem_at = vec![usize::MAX; n];
    for (i, p) in local_g.elements().iter().enumerate() {
        let pt = p.apply(0);
        if elem_at[pt] != usize::MAX {
            return Err(Error::NotRegular);
        }
        elem_at[pt] = i;
    }
    if local_g.order() != n {
        return Err(Error::NotRegular);
    }
    let case = predicted_autc_complete(local_g)?.case;
    let contains_g = local_g.is_subgroup_of(local_b);
    let preserving = n < 2 || {
        let k = complete_cayley(local_g.clone())?;
        local_b.generator_perms().iter().all(|b| {
            let induced: Vec<usize> = (0..n).map(|i| elem_at[b.apply(local_g.element(i).apply(0))]).collect();
            is_colour_preserving(&k, &Permutation::from_images(induced).expect("bijection"))
        })
    };
    let is_pair = case != CompleteCase::Cca && contains_g && preserving;
    Ok(CompleteColourPairCheck { local_g: local_g.clone(), local_b: local_b.clone(), is_pair, case })
}

/// `K^{Γ(v)}`: the stabiliser of `v` in `K` restricted to the neighbours of
/// `v` (listed in increasing order).
pub fn local_action(gamma: &PlainGraph, k: &FiniteGroup, v: usize) -> Result<FiniteGroup> {
    let nbrs = gamma.neighbours(v);
    let d = nbrs.len().max(1);
    let mut seen = HashSet::new();
    let mut perms = Vec::new();
    for p in k.elements().iter().filter(|p| p.apply(v) == v) {
        let imgs: Vec<usize> = nbrs
            .iter()
            .map(|&u| nbrs.binary_search(&p.apply(u)).map_err(|_| violated("group does not act by automorphisms")))
            .collect::<Result<_>>()?;
        let imgs = if imgs.is_empty() { vec![0] } else { imgs };
        let q = Permutation::from_images(imgs)?;
        if seen.insert(q.clone()) {
            perms.push(q);
        }
    }
    FiniteGroup::from_element_set(d, &perms)
}

fn vertex_orbits(n: usize, k: &FiniteGroup) -> Vec<usize> {
    let mut orbit = vec![usize::MAX; n];
    let gens = k.generator_perms();
    let mut count = 0;
    for s in 0..n {
        if orbit[s] != usize::MAX {
            continue;
        }
        orbit[s] = count;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for g in &gens {
                let u = g.apply(v);
                if orbit[u] == usize::MAX {
                    orbit[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }
    orbit
}

/// `L(Γ)` as a Cayley graph on `G` with the induced action of `H`.
#[derive(Debug, Clone)]
pub struct LineConstruction {
    pub realization: LineRealization,
    /// `H` acting on the vertices of the Cayley graph (element indices of `G`).
    pub h_embedding: FiniteGroup,
    /// Whether the right-regular copy of `G` is normal in the embedded `H`.
    pub g_normal_in_h: bool,
}

impl LineConstruction {
    pub fn graph(&self) -> &ColouredCayleyGraph {
        &self.realization.graph
    }
}

/// Verifies the three hypotheses (edge-regular `G`; `H`-orbits are the
/// biparts; every local pair is equal or a complete colour pair) and builds
/// the Cayley realisation of `L(Γ)` with `H` acting on it.
pub fn line_graph_construction(gamma: &PlainGraph, g: &FiniteGroup, h: &FiniteGroup) -> Result<LineConstruction> {
    let n = gamma.vertex_count();
    if !gamma.is_connected() {
        return Err(violated("the graph is not connected"));
    }
    let sides = gamma.two_colouring().ok_or_else(|| violated("the graph is not bipartite"))?;
    if g.degree() != n || h.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: if g.degree() != n { g.degree() } else { h.degree() } });
    }
    if !g.is_subgroup_of(h) {
        return Err(violated("G is not a subgroup of H"));
    }
    if let Some(p) = h.generator_perms().iter().find(|p| !gamma.is_automorphism(p)) {
        return Err(violated(format!("H contains {p}, which is not a graph automorphism")));
    }
    let realization = realize_line_graph_as_cayley(gamma, g).map_err(|e| match e {
        Error::NotEdgeRegular(m) => violated(format!("first condition: G is not edge-regular ({m})")),
        other => other,
    })?;
    let orbits = vertex_orbits(n, h);
    let orbit_count = orbits.iter().max().map_or(0, |&m| m + 1);
    let matches = (0..n).all(|u| (0..n).all(|v| (orbits[u] == orbits[v]) == (sides[u] == sides[v])));
    if orbit_count != 2 || !matches {
        return Err(violated("second condition: the H-orbits on vertices are not the two biparts"));
    }
    for v in 0..n {
        let gv = local_action(gamma, g, v)?;
        let hv = local_action(gamma, h, v)?;
        if gv.same_elements(&hv) {
            continue;
        }
        let pair = is_complete_colour_pair(&gv, &hv).map(|c| c.is_pair).unwrap_or(false);
        if !pair {
            return Err(violated(format!(
                "third condition: at vertex {v} the local groups differ and do not form a complete colour pair"
            )));
        }
    }
    let graph = &realization.graph;
    let mut gens = Vec::new();
    for p in h.generator_perms() {
        let q = realization.induced(gamma, &p)?;
        if !is_colour_preserving(graph, &q) {
            return Err(Error::Inconsistent(format!("H element {p} is not colour-preserving on the line graph")));
        }
        gens.push(q);
    }
    let h_embedding = close_generators(&gens, g.order(), h.order())?;
    if h_embedding.order() != h.order() {
        return Err(Error::Inconsistent("H does not act faithfully on the edges".into()));
    }
    let g_normal_in_h = is_normal(&g.right_regular(), &h_embedding)?;
    Ok(LineConstruction { realization, h_embedding, g_normal_in_h })
}

/// Lifts a vertex permutation of `Γ` to `S(Γ)`.
fn lift_to_subdivision(gamma: &PlainGraph, p: &Permutation) -> Result<Permutation> {
    let n = gamma.vertex_count();
    let on_edges = gamma.edge_action(p)?;
    let mut imgs: Vec<usize> = (0..n).map(|v| p.apply(v)).collect();
    imgs.extend((0..gamma.edges().len()).map(|e| n + on_edges.apply(e)));
    Permutation::from_images(imgs)
}

/// Requires `G` arc-regular and every `(G_v^{Γ(v)}, H_v^{Γ(v)})` a complete
/// colour pair, then applies [`line_graph_construction`] to `S(Γ)`.
pub fn subdivision_construction(gamma: &PlainGraph, g: &FiniteGroup, h: &FiniteGroup) -> Result<LineConstruction> {
    let n = gamma.vertex_count();
    if g.degree() != n || h.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: g.degree() });
    }
    if let Some(p) = g.generator_perms().iter().chain(h.generator_perms().iter()).find(|p| !gamma.is_automorphism(p)) {
        return Err(violated(format!("{p} is not a graph automorphism")));
    }
    let arcs = 2 * gamma.edges().len();
    let Some(&(a, b)) = gamma.edges().first() else {
        return Err(Error::NotArcRegular("graph has no edges".into()));
    };
    let images: HashSet<(usize, usize)> = g.elements().iter().map(|p| (p.apply(a), p.apply(b))).collect();
    if g.order() != arcs || images.len() != arcs {
        return Err(Error::NotArcRegular(format!("|G| = {} on {arcs} arcs", g.order())));
    }
    for v in 0..n {
        let gv = local_action(gamma, g, v)?;
        let hv = local_action(gamma, h, v)?;
        if !is_complete_colour_pair(&gv, &hv).map(|c| c.is_pair).unwrap_or(false) {
            return Err(violated(format!("local pair at vertex {v} is not a complete colour pair")));
        }
    }
    let sub = gamma.subdivision();
    let m = sub.vertex_count();
    let g2 = g.transport(m, |p| lift_to_subdivision(gamma, p).expect("automorphism"))?;
    let h2 = h.transport(m, |p| lift_to_subdivision(gamma, p).expect("automorphism"))?;
    line_graph_construction(&sub, &g2, &h2)
}

/// Relabels `g` with the labels of `model` through an isomorphism.
fn relabel_like(g: &FiniteGroup, model: &FiniteGroup) -> Result<FiniteGroup> {
    let map = find_isomorphism(g, model)?.ok_or_else(|| Error::Inconsistent("groups are not isomorphic".into()))?;
    let labels: Vec<ElementLabel> = map
        .iter()
        .map(|&j| ElementLabel::new(model.label(j), model.coords(j).map(|c| c.to_vec()).unwrap_or_default()))
        .collect();
    let mut out = g.clone().with_labels(labels);
    if let Some(name) = model.name() {
        out = out.with_name(name);
    }
    Ok(out)
}

/// A worked construction together with the ambient graph data.
#[derive(Debug, Clone)]
pub struct Example {
    pub construction: LineConstruction,
    pub gamma: PlainGraph,
}

fn heawood_aut() -> Result<(PlainGraph, FiniteGroup)> {
    let gamma = PlainGraph::heawood();
    let auts = gamma.automorphisms(1000)?;
    let aut = FiniteGroup::from_element_set(14, &auts)?;
    Ok((gamma, aut))
}

/// `L(Heawood)` on the edge-regular `F21` inside the bipart-preserving
/// automorphism group.
pub fn example_f21_heawood() -> Result<Example> {
    let (gamma, aut) = heawood_aut()?;
    let keep: Vec<usize> = (0..aut.order()).filter(|&i| aut.element(i).apply(0) < 7).collect();
    let h = aut.subgroup_from_indices(&keep)?;
    let p7 = sylow_subgroup(&h, 7)?;
    let g = h.normalizer(&p7)?;
    let g = relabel_like(&g, &builders::build(&GroupSpec::F21)?)?;
    let construction = line_graph_construction(&gamma, &g, &h)?;
    Ok(Example { construction, gamma })
}

/// `L(S(Heawood))` on the arc-regular `AGL(1,7)` inside the full
/// automorphism group.
pub fn example_agl17_subdivision() -> Result<Example> {
    let (gamma, h) = heawood_aut()?;
    let p7 = sylow_subgroup(&h, 7)?;
    let g = h.normalizer(&p7)?;
    let g = relabel_like(&g, &builders::build(&GroupSpec::Agl17)?)?;
    let construction = subdivision_construction(&gamma, &g, &h)?;
    Ok(Example { construction, gamma: gamma.subdivision() })
}

/// `L(K_{n,n})` on `G = A × A` with `A = Q8 × Z2^m`, `n = |A|`, and
/// `H = B × B` where `B = <A_R, σ_i, σ_j, σ_k>`.
pub fn example_knn_q8(m: usize) -> Result<Example> {
    let a = builders::build(&GroupSpec::Q8TimesZ2n(m))?;
    let n = a.order();
    let ar = a.right_regular();
    let mut bgens = ar.generator_perms();
    for unit in [QuaternionUnit::I, QuaternionUnit::J, QuaternionUnit::K] {
        bgens.push(builders::named_map(&a, &MapName::Sigma(unit))?.carrier);
    }
    let b = close_generators(&bgens, n, 8 * n)?;
    let g = builders::direct_product(&[ar.clone(), ar])?.with_name(format!("prod({0};{0})", a.name().unwrap_or("A")));
    let h = builders::direct_product(&[b.clone(), b])?;
    let gamma = PlainGraph::complete_bipartite(n, n);
    let construction = line_graph_construction(&gamma, &g, &h)?;
    Ok(Example { construction, gamma })
}

/// `G = Z3`, `S = {1, 2}`, `τ` = inversion, `H = Z2` on two points.
pub fn example_wreath_demo() -> Result<WreathWitness> {
    let g = builders::build(&GroupSpec::Cyclic(3))?;
    let tau = builders::named_map(&g, &MapName::Inversion)?.carrier;
    let h = builders::build(&GroupSpec::Cyclic(2))?;
    wreath_witness(&g, &[1, 2], &tau, &h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_d3_is_a_complete_colour_pair() {
        let z3 = builders::build_str("z3").unwrap();
        let d3 = builders::build_str("d3").unwrap();
        let c = is_complete_colour_pair(&z3, &d3).unwrap();
        assert!(c.is_pair);
        assert_eq!(c.case, CompleteCase::Abelian);
    }

    #[test]
    fn elementary_two_group_gives_no_pair() {
        let v4 = builders::build_str("prod(z2;z2)").unwrap().right_regular();
        let s4 = builders::build_str("s4").unwrap();
        assert!(!is_complete_colour_pair(&v4, &s4).unwrap().is_pair);
    }

    #[test]
    fn non_regular_is_rejected() {
        let s3 = builders::build_str("s3").unwrap();
        assert!(matches!(is_complete_colour_pair(&s3, &s3), Err(Error::NotRegular)));
    }

    #[test]
    fn wreath_demo_has_18_vertices() {
        let w = example_wreath_demo().unwrap();
        assert_eq!(w.x.order(), 18);
        assert_eq!(w.connection.len(), 5);
    }

    #[test]
    fn wreath_rejects_automorphism_with_trivial_top() {
        let g = builders::build_str("z3").unwrap();
        let tau = builders::named_map(&g, &MapName::Inversion).unwrap().carrier;
        let h = FiniteGroup::trivial(1);
        let err = wreath_witness(&g, &[1, 2], &tau, &h).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(ref m) if m.contains("second")));
    }

    #[test]
    fn hexagon_with_z3_fails_a_hypothesis() {
        let c6 = PlainGraph::cycle(6).unwrap();
        let rot2 = Permutation::from_images((0..6).map(|i| (i + 2) % 6).collect()).unwrap();
        let z3 = close_generators(&[rot2], 6, 6).unwrap();
        assert!(line_graph_construction(&c6, &z3, &z3).is_err());
    }

    #[test]
    fn petersen_needs_arc_regular_group() {
        let p = PlainGraph::petersen();
        let auts = p.automorphisms(200).unwrap();
        let a = FiniteGroup::from_element_set(10, &auts).unwrap();
        let p5 = sylow_subgroup(&a, 5).unwrap();
        assert!(matches!(subdivision_construction(&p, &p5, &a), Err(Error::NotArcRegular(_))));
    }
}

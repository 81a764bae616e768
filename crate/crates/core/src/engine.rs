//! Colour-preserving automorphisms, `Aut_{±1}` and the CCA verdict.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::builders::{self, MapName, QuaternionUnit};
use crate::cayley::{complete_cayley, ColouredCayleyGraph, GraphJson};
use crate::error::{Error, Result};
use crate::group::{bfs_order, close_generators, is_normal, FiniteGroup};
use crate::iso::{extend_homomorphism, find_isomorphism, index_two_kernels};
use crate::limits;
use crate::perm::Permutation;

const UNSET: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "CCA")]
    Cca,
    #[serde(rename = "non-CCA")]
    NonCca,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Cca => "CCA",
            Verdict::NonCca => "non-CCA",
        })
    }
}

/// True iff `p` maps every edge to an edge of the same colour.
pub fn is_colour_preserving(graph: &ColouredCayleyGraph, p: &Permutation) -> bool {
    let n = graph.order();
    if p.degree() != n {
        return false;
    }
    let img = p.images();
    for k in 0..graph.connection().len() {
        let (_, sign) = graph.entry_class(k);
        if sign < 0 {
            continue;
        }
        let fwd = graph.left(k);
        let back = graph.left(graph.inverse_entry(k));
        for v in 0..n {
            let w = img[v] as usize;
            let u = img[fwd[v] as usize];
            if u != fwd[w] && u != back[w] {
                return false;
            }
        }
    }
    true
}

/// Whether a colour-preserving map fixing the identity is a group
/// automorphism, i.e. `p(s v) = p(s) p(v)` for every `s` in `S`.
fn respects_multiplication(graph: &ColouredCayleyGraph, img: &[u32]) -> bool {
    let g = graph.group();
    graph.connection().iter().enumerate().all(|(k, &s)| {
        let ps = img[s] as usize;
        let row = graph.left(k);
        (0..graph.order()).all(|v| img[row[v] as usize] as usize == g.mul(ps, img[v] as usize))
    })
}

/// Search state for colour-preserving maps fixing vertex 0.
struct StabiliserSearch<'a> {
    graph: &'a ColouredCayleyGraph,
    order: Vec<usize>,
    via: Vec<(usize, usize)>,
}

impl<'a> StabiliserSearch<'a> {
    fn new(graph: &'a ColouredCayleyGraph) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::NotConnected);
        }
        let n = graph.order();
        let mut via = vec![(usize::MAX, usize::MAX); n];
        let order = bfs_order(n, 0, |v| {
            graph.neighbours(v).map(|(u, _, _)| u).collect::<Vec<_>>()
        });
        let mut placed = vec![false; n];
        placed[0] = true;
        for &v in &order {
            for k in 0..graph.connection().len() {
                let u = graph.left(k)[v] as usize;
                if !placed[u] {
                    placed[u] = true;
                    via[u] = (v, k);
                }
            }
        }
        Ok(Self { graph, order, via })
    }

    /// Visits every colour-preserving map fixing 0 in search order; the
    /// visitor returns `false` to stop early.
    fn run(&self, mut visit: impl FnMut(&[u32]) -> Result<bool>) -> Result<()> {
        let g = self.graph;
        let n = g.order();
        let s = g.connection().len();
        let mut img = vec![UNSET; n];
        let mut used = vec![false; n];
        img[0] = 0;
        used[0] = true;
        if n == 1 {
            visit(&img)?;
            return Ok(());
        }
        let mut next = vec![0u8; n];
        let mut d = 1;
        loop {
            if d == n {
                if !visit(&img)? {
                    return Ok(());
                }
                d -= 1;
            }
            let v = self.order[d];
            if img[v] != UNSET {
                used[img[v] as usize] = false;
                img[v] = UNSET;
            }
            let (parent, k) = self.via[v];
            let base = img[parent] as usize;
            let cands = [g.left(k)[base], g.left(g.inverse_entry(k))[base]];
            let mut placed = false;
            while (next[d] as usize) < 2 {
                let c = next[d] as usize;
                next[d] += 1;
                let w = cands[c];
                if (c == 1 && w == cands[0]) || used[w as usize] {
                    continue;
                }
                let ok = (0..s).all(|j| {
                    let u = g.left(j)[v] as usize;
                    let iu = img[u];
                    iu == UNSET || iu == g.left(j)[w as usize] || iu == g.left(g.inverse_entry(j))[w as usize]
                });
                if ok {
                    img[v] = w;
                    used[w as usize] = true;
                    placed = true;
                    break;
                }
            }
            if placed {
                d += 1;
                if d < n {
                    next[d] = 0;
                }
            } else {
                next[d] = 0;
                d -= 1;
                if d == 0 {
                    return Ok(());
                }
            }
        }
    }
}

/// Every colour-preserving automorphism fixing vertex 0, in search order.
pub fn autc_stabiliser(graph: &ColouredCayleyGraph) -> Result<Vec<Permutation>> {
    let search = StabiliserSearch::new(graph)?;
    let mut out = Vec::new();
    search.run(|img| {
        let p = Permutation::from_u32_unchecked(img.to_vec());
        if !is_colour_preserving(graph, &p) {
            return Err(Error::Inconsistent("search produced a map that is not colour-preserving".into()));
        }
        out.push(p);
        if out.len() > limits::STABILISER_CAP {
            return Err(Error::StabiliserTooLarge { cap: limits::STABILISER_CAP });
        }
        Ok(true)
    })?;
    Ok(out)
}

/// The verdict alone, stopping at the first stabiliser element that is not
/// a group automorphism (which is then returned as the witness).
pub fn quick_verdict(graph: &ColouredCayleyGraph) -> Result<(Verdict, Option<Permutation>)> {
    let search = StabiliserSearch::new(graph)?;
    let mut witness = None;
    let mut seen = 0usize;
    search.run(|img| {
        seen += 1;
        if seen > limits::STABILISER_CAP {
            return Err(Error::StabiliserTooLarge { cap: limits::STABILISER_CAP });
        }
        if respects_multiplication(graph, img) {
            Ok(true)
        } else {
            witness = Some(Permutation::from_u32_unchecked(img.to_vec()));
            Ok(false)
        }
    })?;
    Ok(match witness {
        Some(w) => (Verdict::NonCca, Some(w)),
        None => (Verdict::Cca, None),
    })
}

/// `Aut_{±1}(G, S)` as permutations of element indices, found by trying
/// `s -> s^{±1}` on a minimal generating subset of `S`.
pub fn aut_pm1(group: &FiniteGroup, set: &[usize]) -> Result<FiniteGroup> {
    let n = group.order();
    let gens = group.greedy_generators(set);
    if group.closure_indices(&gens).len() != n {
        return Err(Error::NotConnected);
    }
    let mut found = Vec::new();
    for mask in 0u64..(1u64 << gens.len()) {
        let imgs: Vec<usize> =
            gens.iter().enumerate().map(|(i, &g)| if mask >> i & 1 == 1 { group.inv(g) } else { g }).collect();
        let Some(map) = extend_homomorphism(group, &gens, &imgs, |a, b| group.mul(a, b), Some(n)) else {
            continue;
        };
        if set.iter().all(|&s| map[s] == s || map[s] == group.inv(s)) {
            found.push(Permutation::from_images(map)?);
        }
    }
    FiniteGroup::from_element_set(n, &found)
}

/// `Aut_c` of a connected coloured Cayley graph with its cross-checked
/// verdict.
#[derive(Debug, Clone)]
pub struct AutcResult {
    pub graph: ColouredCayleyGraph,
    pub stabiliser: Vec<Permutation>,
    pub full_group: FiniteGroup,
    pub aut_pm1: FiniteGroup,
    pub verdict: Verdict,
    pub witness: Option<Permutation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AutcJson {
    pub graph: GraphJson,
    pub stabiliser_order: usize,
    pub full_group_order: usize,
    pub aut_pm1_order: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_permutation: Option<Vec<usize>>,
}

impl AutcResult {
    pub fn stabiliser_group(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_element_set(self.graph.order(), &self.stabiliser)
    }

    pub fn to_json(&self) -> AutcJson {
        AutcJson {
            graph: self.graph.to_json(),
            stabiliser_order: self.stabiliser.len(),
            full_group_order: self.full_group.order(),
            aut_pm1_order: self.aut_pm1.order(),
            verdict: self.verdict,
            witness_permutation: self.witness.as_ref().map(|w| w.to_vec()),
        }
    }
}

pub fn autc_group(graph: &ColouredCayleyGraph) -> Result<AutcResult> {
    let stabiliser = autc_stabiliser(graph)?;
    let g = graph.group();
    let n = g.order();
    let regular = g.right_regular();
    let stab_group = FiniteGroup::from_element_set(n, &stabiliser)?;
    let mut gens = regular.generator_perms();
    gens.extend(stab_group.generator_perms());
    let full_group = close_generators(&gens, n, limits::closure_cap())?;
    if full_group.order() != n * stabiliser.len() {
        return Err(Error::Inconsistent(format!(
            "|Aut_c| = {} but |G| |stabiliser| = {}",
            full_group.order(),
            n * stabiliser.len()
        )));
    }
    let pm1 = aut_pm1(g, graph.connection())?;
    let stab_set: HashSet<&Permutation> = stabiliser.iter().collect();
    if let Some(p) = pm1.elements().iter().find(|p| !stab_set.contains(p)) {
        return Err(Error::Inconsistent(format!("{p} is in Aut_{{±1}} but not colour-preserving")));
    }
    let normal = is_normal(&regular, &full_group)?;
    let witness = stabiliser.iter().find(|p| !pm1.contains(p)).cloned();
    if normal != witness.is_none() {
        return Err(Error::Inconsistent("normality of G_R disagrees with the stabiliser census".into()));
    }
    if let Some(w) = &witness {
        if regular.generator_perms().iter().all(|r| regular.contains(&r.conjugate_by(w))) {
            return Err(Error::Inconsistent("witness normalises G_R".into()));
        }
    }
    let verdict = if normal { Verdict::Cca } else { Verdict::NonCca };
    Ok(AutcResult { graph: graph.clone(), stabiliser, full_group, aut_pm1: pm1, verdict, witness })
}

/// Cases of the classification of groups `G` with `G_R < Aut_c(K_G)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompleteCase {
    /// Abelian, not an elementary abelian 2-group: `Aut_c(K_G) = Dih(G)`.
    Abelian,
    /// Generalised dicyclic, not `Q8 × Z2^n`: `G_R ⋊ <ι>`.
    Dicyclic,
    /// `Q8 × Z2^n`: `<G_R, σ_i, σ_j, σ_k>`.
    Quaternion,
    /// None of the above: `G_R ⋊ Aut_{±1}(G, G - 1)`.
    Cca,
}

impl fmt::Display for CompleteCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompleteCase::Abelian => "1",
            CompleteCase::Dicyclic => "2",
            CompleteCase::Quaternion => "3",
            CompleteCase::Cca => "CCA",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CompletePrediction {
    pub case: CompleteCase,
    pub predicted_order: usize,
    /// Permutations of element indices generating the predicted `Aut_c(K_G)`.
    pub generators: Vec<Permutation>,
}

/// If `G` is generalised dicyclic, the abelian index-2 subgroup `A` with an
/// `x` outside it inverting `A` and squaring to an involution of `A`.
pub fn dicyclic_kernel(g: &FiniteGroup) -> Option<Vec<usize>> {
    if g.is_abelian() {
        return None;
    }
    for a in index_two_kernels(g) {
        let sub = g.subgroup_from_indices(&a).ok()?;
        if !sub.is_abelian() {
            continue;
        }
        let mut member = vec![false; g.order()];
        for &i in &a {
            member[i] = true;
        }
        let a_gens = g.greedy_generators(&a);
        let found = (0..g.order()).any(|x| {
            let x2 = g.mul(x, x);
            !member[x] && member[x2] && g.element_order(x2) == 2 && a_gens.iter().all(|&s| g.conj(s, x) == g.inv(s))
        });
        if found {
            return Some(a);
        }
    }
    None
}

fn is_q8_times_z2n(g: &FiniteGroup) -> Result<Option<(usize, Vec<usize>)>> {
    let n = g.order();
    if n < 8 || !n.is_power_of_two() || g.is_abelian() {
        return Ok(None);
    }
    let k = n.trailing_zeros() as usize - 3;
    let q = builders::build(&builders::GroupSpec::Q8TimesZ2n(k))?;
    Ok(find_isomorphism(g, &q)?.map(|map| (k, map)))
}

pub fn predicted_autc_complete(g: &FiniteGroup) -> Result<CompletePrediction> {
    let n = g.order();
    let mut generators = g.right_regular().generator_perms();
    let inversion = Permutation::from_images((0..n).map(|i| g.inv(i)).collect())?;
    if g.is_abelian() && g.exponent() > 2 {
        generators.push(inversion);
        return Ok(CompletePrediction { case: CompleteCase::Abelian, predicted_order: 2 * n, generators });
    }
    if let Some((k, map)) = is_q8_times_z2n(g)? {
        let q = builders::build(&builders::GroupSpec::Q8TimesZ2n(k))?;
        let mut back = vec![0usize; n];
        for (x, &y) in map.iter().enumerate() {
            back[y] = x;
        }
        for unit in [QuaternionUnit::I, QuaternionUnit::J, QuaternionUnit::K] {
            let sigma = builders::named_map(&q, &MapName::Sigma(unit))?.carrier;
            generators.push(Permutation::from_images((0..n).map(|x| back[sigma.apply(map[x])]).collect())?);
        }
        return Ok(CompletePrediction { case: CompleteCase::Quaternion, predicted_order: 8 * n, generators });
    }
    if let Some(a) = dicyclic_kernel(g) {
        let mut member = vec![false; n];
        for &i in &a {
            member[i] = true;
        }
        let iota = Permutation::from_images((0..n).map(|x| if member[x] { x } else { g.inv(x) }).collect())?;
        generators.push(iota);
        return Ok(CompletePrediction { case: CompleteCase::Dicyclic, predicted_order: 2 * n, generators });
    }
    let all: Vec<usize> = (1..n).collect();
    let pm1 = if n == 1 { FiniteGroup::trivial(1) } else { aut_pm1(g, &all)? };
    generators.extend(pm1.generator_perms());
    Ok(CompletePrediction { case: CompleteCase::Cca, predicted_order: n * pm1.order(), generators })
}

/// One row of the complete-graph comparison.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub group: String,
    pub order: usize,
    pub case: String,
    pub predicted_order: usize,
    pub computed_order: usize,
    /// The predicted group and the computed `Aut_c(K_G)` have the same
    /// elements.
    pub exact_match: bool,
}

/// Computed against predicted `Aut_c(K_G)` for every catalog group of order
/// at most `max`.
pub fn complete_sweep(max: usize) -> Result<Vec<SweepRow>> {
    builders::catalog::complete_graph_sweep(max)
        .into_iter()
        .map(|spec| {
            let g = builders::build(&spec)?;
            let n = g.order();
            let prediction = predicted_autc_complete(&g)?;
            let autc = autc_group(&complete_cayley(g)?)?;
            let predicted = close_generators(&prediction.generators, n, limits::closure_cap())?;
            Ok(SweepRow {
                group: spec.to_string(),
                order: n,
                case: prediction.case.to_string(),
                predicted_order: prediction.predicted_order,
                computed_order: autc.full_group.order(),
                exact_match: predicted.order() == prediction.predicted_order && predicted.same_elements(&autc.full_group),
            })
        })
        .collect()
}

/// Forbidden shapes for a vertex stabiliser of a connected coloured Cayley
/// graph: cyclic of order at least 4, or dihedral of order at least 16.
pub fn stabiliser_shape_is_allowed(stab: &FiniteGroup) -> bool {
    let n = stab.order();
    let cyclic = (0..n).any(|x| stab.element_order(x) == n);
    if cyclic && n >= 4 {
        return false;
    }
    if n >= 16 && !stab.is_abelian() {
        let has_index_two_cycle = (0..n).any(|x| stab.element_order(x) == n / 2);
        let involutions = (1..n).filter(|&x| stab.element_order(x) == 2).count();
        if has_index_two_cycle && involutions == n / 2 + 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_str;
    use crate::cayley::{cayley, complete_cayley};
    use crate::words::resolve_set;

    fn cay(spec: &str, set: &str) -> ColouredCayleyGraph {
        let g = build_str(spec).unwrap();
        let s = resolve_set(&g, set).unwrap();
        cayley(g, &s).unwrap()
    }

    #[test]
    fn pentagon_is_cca_with_dihedral_group() {
        let r = autc_group(&cay("z5", "1,4")).unwrap();
        assert_eq!(r.verdict, Verdict::Cca);
        assert_eq!(r.full_group.order(), 10);
    }

    #[test]
    fn four_cycle_reflection() {
        let c = cay("z4", "1,3");
        let refl = Permutation::from_images(vec![0, 3, 2, 1]).unwrap();
        assert!(is_colour_preserving(&c, &refl));
        assert_eq!(autc_stabiliser(&c).unwrap().len(), 2);
    }

    #[test]
    fn right_translations_preserve_colours() {
        let c = cay("d4", "r,r^3,s");
        for p in c.group().right_regular().elements() {
            assert!(is_colour_preserving(&c, p));
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        assert!(matches!(autc_stabiliser(&cay("z6", "2,4")), Err(Error::NotConnected)));
    }

    #[test]
    fn single_edge_has_trivial_stabiliser() {
        let r = autc_group(&cay("z2", "1")).unwrap();
        assert_eq!(r.stabiliser.len(), 1);
        assert_eq!(r.verdict, Verdict::Cca);
    }

    #[test]
    fn complete_graph_cases() {
        let z6 = predicted_autc_complete(&build_str("z6").unwrap()).unwrap();
        assert_eq!((z6.case, z6.predicted_order), (CompleteCase::Abelian, 12));
        let q8 = predicted_autc_complete(&build_str("q8").unwrap()).unwrap();
        assert_eq!((q8.case, q8.predicted_order), (CompleteCase::Quaternion, 64));
        let v4 = predicted_autc_complete(&build_str("prod(z2;z2)").unwrap()).unwrap();
        assert_eq!(v4.case, CompleteCase::Cca);
        let r = autc_group(&complete_cayley(build_str("q8").unwrap()).unwrap()).unwrap();
        assert_eq!(r.stabiliser.len(), 8);
    }

    #[test]
    fn shape_check() {
        let z4 = build_str("z4").unwrap();
        assert!(!stabiliser_shape_is_allowed(&z4));
        assert!(!stabiliser_shape_is_allowed(&build_str("d8").unwrap()));
        assert!(stabiliser_shape_is_allowed(&build_str("d4").unwrap()));
        assert!(stabiliser_shape_is_allowed(&build_str("z2").unwrap()));
    }
}

//! Decomposition of `Aut_c` for non-CCA graphs on Sylow cyclic groups of
//! order not divisible by four, the reduction graph `Γ′`, and its converse.

use std::sync::Arc;

use serde::Serialize;

use crate::builders::{self, GroupSpec};
use crate::cayley::{cayley, ColouredCayleyGraph};
use crate::engine::{autc_group, quick_verdict, AutcResult, Verdict};
use crate::error::{Error, Result};
use crate::group::{is_sylow_cyclic_order_not_div_4, normal_subgroup_indices, sylow_subgroup, FiniteGroup};
use crate::iso::are_isomorphic;
use crate::words;

/// `G = (F × H) ⋊ R` inside `A = (T × J) ⋊ R`.
///
/// `t`, `j`, `f`, `h` and `r_group` are subgroups of `a` (all acting on the
/// vertices of the graph); `r` is the generator of `R` as an element of `G`.
#[derive(Debug, Clone)]
pub struct StructureDecomposition {
    pub a: FiniteGroup,
    pub t: FiniteGroup,
    pub j: FiniteGroup,
    pub f: FiniteGroup,
    pub h: FiniteGroup,
    pub r_group: FiniteGroup,
    pub r: Option<usize>,
    /// Properties (i)..(vi) in order.
    pub properties: [bool; 6],
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionJson {
    pub a_order: usize,
    pub t_order: usize,
    pub j_order: usize,
    pub f_order: usize,
    pub h_order: usize,
    pub r_order: usize,
    pub r: Option<String>,
    pub properties: [bool; 6],
}

/// Subgroup of the right-regular copy, as element indices of `G`.
fn to_g_indices(sub: &FiniteGroup) -> Vec<usize> {
    let mut v: Vec<usize> = sub.elements().iter().map(|p| p.apply(0)).collect();
    v.sort_unstable();
    v
}

impl StructureDecomposition {
    pub fn f_indices(&self) -> Vec<usize> {
        to_g_indices(&self.f)
    }

    pub fn h_indices(&self) -> Vec<usize> {
        to_g_indices(&self.h)
    }

    pub fn r_indices(&self) -> Vec<usize> {
        to_g_indices(&self.r_group)
    }

    pub fn all_hold(&self) -> bool {
        self.properties.iter().all(|&p| p)
    }

    pub fn to_json(&self, g: &FiniteGroup) -> DecompositionJson {
        DecompositionJson {
            a_order: self.a.order(),
            t_order: self.t.order(),
            j_order: self.j.order(),
            f_order: self.f.order(),
            h_order: self.h.order(),
            r_order: self.r_group.order(),
            r: self.r.map(|r| g.label(r)),
            properties: self.properties,
        }
    }
}

struct Members(Vec<bool>);

impl Members {
    fn new(n: usize, set: &[usize]) -> Self {
        let mut m = vec![false; n];
        for &i in set {
            m[i] = true;
        }
        Self(m)
    }

    fn has(&self, i: usize) -> bool {
        self.0[i]
    }
}

fn normal_in(a: &FiniteGroup, outer: &[usize], sub: &[usize]) -> bool {
    let m = Members::new(a.order(), sub);
    let gens = a.greedy_generators(outer);
    sub.iter().all(|&x| gens.iter().all(|&g| m.has(a.conj(x, g))))
}

fn intersect(a: &FiniteGroup, x: &[usize], y: &[usize]) -> Vec<usize> {
    let m = Members::new(a.order(), y);
    x.iter().copied().filter(|&i| m.has(i)).collect()
}

fn commute(a: &FiniteGroup, x: &[usize], y: &[usize]) -> bool {
    let gx = a.greedy_generators(x);
    let gy = a.greedy_generators(y);
    gx.iter().all(|&p| gy.iter().all(|&q| a.mul(p, q) == a.mul(q, p)))
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Decomposes the full colour-preserving group.
pub fn decompose_structure(graph: &ColouredCayleyGraph, autc: &AutcResult) -> Result<StructureDecomposition> {
    decompose_structure_in(graph, &autc.full_group)
}

/// Decomposes any colour-preserving group `A` (acting on the vertices and
/// containing `G_R`) in which `G_R` is not normal.
pub fn decompose_structure_in(graph: &ColouredCayleyGraph, a: &FiniteGroup) -> Result<StructureDecomposition> {
    let g = graph.group();
    if !is_sylow_cyclic_order_not_div_4(g) {
        return Err(Error::HypothesesNotMet("G is not Sylow cyclic of order not divisible by 4".into()));
    }
    let n = g.order();
    let gr_group = g.right_regular();
    let gr = sorted(a.indices_of(&gr_group).map_err(|_| Error::HypothesesNotMet("A does not contain G_R".into()))?);
    let all: Vec<usize> = (0..a.order()).collect();
    if normal_in(a, &all, &gr) {
        return Err(Error::HypothesesNotMet("G is normal in A".into()));
    }
    let psl = builders::build(&GroupSpec::Psl27)?;
    let f21 = builders::build(&GroupSpec::F21)?;
    let normals = normal_subgroup_indices(a)?;

    let mut t_found = None;
    for cand in normals.iter().filter(|c| c.len() == 168) {
        if are_isomorphic(&a.subgroup_from_indices(cand)?, &psl)? {
            t_found = Some(cand.clone());
            break;
        }
    }
    let t = t_found.ok_or_else(|| Error::DecompositionNotFound("no normal subgroup isomorphic to PSL(2,7)".into()))?;

    // R: a Sylow 2-subgroup of G_R generating a 2-group with the vertex
    // stabiliser.
    let stab: Vec<usize> = (0..a.order()).filter(|&i| a.element(i).apply(0) == 0).collect();
    let stab_gens = a.greedy_generators(&stab);
    let two_part = n & n.wrapping_neg();
    let r_a: Option<usize> = if two_part == 1 {
        None
    } else {
        let cands: Vec<usize> = gr.iter().copied().filter(|&i| a.element_order(i) == two_part).collect();
        let pick = cands.into_iter().find(|&r| {
            let mut gens = stab_gens.clone();
            gens.push(r);
            a.closure_indices(&gens).len().is_power_of_two()
        });
        Some(pick.ok_or_else(|| {
            Error::DecompositionNotFound("no Sylow 2-subgroup of G lies in a 2-group with the stabiliser".into())
        })?)
    };
    let r_set = sorted(a.closure_indices(&r_a.into_iter().collect::<Vec<_>>()));

    let f = sorted(intersect(a, &t, &gr));
    let f_ok = f.len() == 21 && are_isomorphic(&a.subgroup_from_indices(&f)?, &f21)?;

    for j in normals.iter() {
        if intersect(a, &t, j).len() != 1 || t.len() * j.len() * r_set.len() != a.order() {
            continue;
        }
        let mut gens = a.greedy_generators(&t);
        gens.extend(a.greedy_generators(j));
        gens.extend(r_a);
        if a.closure_indices(&gens).len() != a.order() {
            continue;
        }
        let h = sorted(intersect(a, j, &gr));
        // G = (F × H) ⋊ R
        if intersect(a, &f, &h).len() != 1 || !commute(a, &f, &h) || f.len() * h.len() * r_set.len() != n {
            continue;
        }
        let p1 = normal_in(a, &all, &t) && t.len() == 168;
        let p2 = f_ok;
        let p3 = normal_in(a, j, &h) && normal_in(a, &all, j);
        let centraliser = a.centralizer_indices(&h);
        let p4 = intersect(a, j, &centraliser).iter().all(|x| h.binary_search(x).is_ok());
        let jg = a.subgroup_from_indices(j)?;
        let p5 = {
            let p = sylow_subgroup(&jg, 2)?;
            let p_idx = a.indices_of(&p)?;
            intersect(a, &p_idx, &h).len() == 1 && p_idx.len() * h.len() == j.len()
        };
        let p6 = normal_in(a, &all, &h);
        let properties = [p1, p2, p3, p4, p5, p6];
        if properties.iter().all(|&p| p) {
            let sub = |s: &[usize]| a.subgroup_from_indices(s);
            return Ok(StructureDecomposition {
                a: a.clone(),
                t: sub(&t)?,
                j: jg,
                f: sub(&f)?,
                h: sub(&h)?,
                r_group: sub(&r_set)?,
                r: r_a.map(|i| a.element(i).apply(0)),
                properties,
            });
        }
    }
    Err(Error::DecompositionNotFound("no normal subgroup J satisfies all six properties".into()))
}

/// Data of the reduction `Γ′ = Cay(F ⋊ R, (F ∩ S) ∪ {r} ∪ {s^2 : s ∈ Y})`.
#[derive(Debug, Clone)]
pub struct ReductionData {
    /// `Y = S - (F ∪ (H ⋊ R))`, as elements of `G`.
    pub y: Vec<usize>,
    /// `S′`, as elements of `G`.
    pub s_prime: Vec<usize>,
    pub gamma_prime: ColouredCayleyGraph,
    pub gamma_prime_verdict: Verdict,
    /// Claims (1)..(3): `Γ′` connected and non-CCA; every `y = f z` with
    /// `|f| = 3`, `z ∈ Hr`, `|z| = 2`; `Y` nonempty forces `|R| = 2` and
    /// `[T, R] = 1`.
    pub claims: [bool; 3],
    /// Every `s ∈ Y` has order 6 with `s^3 ∈ Hr` and `s^2 ∈ F` of order 3.
    pub orders_of_y: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionJson {
    pub y: Vec<String>,
    pub s_prime: Vec<String>,
    pub gamma_prime_order: usize,
    pub gamma_prime_verdict: Verdict,
    pub claims: [bool; 3],
}

impl ReductionData {
    pub fn to_json(&self, g: &FiniteGroup) -> ReductionJson {
        ReductionJson {
            y: self.y.iter().map(|&i| g.label(i)).collect(),
            s_prime: self.s_prime.iter().map(|&i| g.label(i)).collect(),
            gamma_prime_order: self.gamma_prime.order(),
            gamma_prime_verdict: self.gamma_prime_verdict,
            claims: self.claims,
        }
    }
}

struct Reduced {
    y: Vec<usize>,
    s_prime: Vec<usize>,
    gamma_prime: ColouredCayleyGraph,
    factorises: bool,
    orders_of_y: bool,
}

fn reduce(g: &FiniteGroup, s: &[usize], f: &[usize], h: &[usize], r: Option<usize>) -> Result<Reduced> {
    let n = g.order();
    let in_f = Members::new(n, f);
    let in_h = Members::new(n, h);
    let mut hr_gens = g.greedy_generators(h);
    hr_gens.extend(r);
    let in_hr = Members::new(n, &g.closure_indices(&hr_gens));
    let y: Vec<usize> = s.iter().copied().filter(|&x| !in_f.has(x) && !in_hr.has(x)).collect();
    let mut s_prime: Vec<usize> = s.iter().copied().filter(|&x| in_f.has(x)).collect();
    s_prime.extend(r);
    for &x in &y {
        s_prime.push(g.mul(x, x));
    }
    let mut seen = vec![false; n];
    s_prime.retain(|&x| x != 0 && !std::mem::replace(&mut seen[x], true));
    let mut fr_gens = g.greedy_generators(f);
    fr_gens.extend(r);
    let fr = g.subgroup(&fr_gens);
    let local: Vec<usize> = s_prime
        .iter()
        .map(|&x| fr.index_of(g.element(x)).ok_or_else(|| Error::Inconsistent("S′ is not inside F ⋊ R".into())))
        .collect::<Result<_>>()?;
    let gamma_prime = cayley(Arc::new(fr), &local)?;
    let in_hr_coset = |z: usize| in_hr.has(z) && !in_h.has(z);
    let factorises = y.iter().all(|&x| {
        f.iter().any(|&fe| {
            let z = g.mul(g.inv(fe), x);
            g.element_order(fe) == 3 && in_hr_coset(z) && g.element_order(z) == 2
        })
    });
    let orders_of_y = y.iter().all(|&x| {
        let x2 = g.mul(x, x);
        let x3 = g.mul(x2, x);
        g.element_order(x) == 6 && in_hr_coset(x3) && in_f.has(x2) && g.element_order(x2) == 3
    });
    Ok(Reduced { y, s_prime, gamma_prime, factorises, orders_of_y })
}

fn verdict_of(graph: &ColouredCayleyGraph) -> Result<Option<Verdict>> {
    if !graph.is_connected() {
        return Ok(None);
    }
    Ok(Some(quick_verdict(graph)?.0))
}

/// Computes `Y`, `S′` and `Γ′` and checks the three claims directly.
pub fn reduction_gamma_prime(graph: &ColouredCayleyGraph, decomp: &StructureDecomposition) -> Result<ReductionData> {
    let g = graph.group();
    let red = reduce(g, graph.connection(), &decomp.f_indices(), &decomp.h_indices(), decomp.r)?;
    let verdict = verdict_of(&red.gamma_prime)?;
    let claim1 = verdict == Some(Verdict::NonCca);
    let claim3 = red.y.is_empty() || {
        let a = &decomp.a;
        let t = a.indices_of(&decomp.t)?;
        let r = a.indices_of(&decomp.r_group)?;
        decomp.r_group.order() == 2 && commute(a, &t, &r)
    };
    Ok(ReductionData {
        y: red.y,
        s_prime: red.s_prime,
        gamma_prime: red.gamma_prime,
        gamma_prime_verdict: verdict.unwrap_or(Verdict::Cca),
        claims: [claim1, red.factorises, claim3],
        orders_of_y: red.orders_of_y,
    })
}

/// Result of building `Cay(G, S)` from a decomposition `G = (F × H) ⋊ R`.
#[derive(Debug, Clone)]
pub struct ConverseResult {
    pub graph: ColouredCayleyGraph,
    pub reduction_graph: ColouredCayleyGraph,
    pub predicted: Verdict,
    pub engine: Verdict,
    pub autc_order: usize,
}

impl ConverseResult {
    pub fn agrees(&self) -> bool {
        self.predicted == self.engine
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConverseJson {
    pub order: usize,
    pub connection_set: Vec<String>,
    pub reduction_order: usize,
    pub predicted: Verdict,
    pub engine: Verdict,
    pub autc_order: usize,
    pub agrees: bool,
}

impl ConverseResult {
    pub fn to_json(&self) -> ConverseJson {
        ConverseJson {
            order: self.graph.order(),
            connection_set: self.graph.connection_labels(),
            reduction_order: self.reduction_graph.order(),
            predicted: self.predicted,
            engine: self.engine,
            autc_order: self.autc_order,
            agrees: self.agrees(),
        }
    }
}

/// Checks the hypotheses on `G = (F × H) ⋊ R` and conditions (1)..(3) on
/// the derived `Γ′`, then runs the engine on `Cay(G, S)`.
///
/// `f` and `h` are element sets of `G`; `r` generates `R` (`None` for
/// trivial `R`).
pub fn converse_build(
    g: Arc<FiniteGroup>,
    f: &[usize],
    h: &[usize],
    r: Option<usize>,
    s: &[usize],
) -> Result<ConverseResult> {
    let violated = |m: &str| Error::HypothesisViolated(m.into());
    let n = g.order();
    if !is_sylow_cyclic_order_not_div_4(&g) {
        return Err(violated("G is not Sylow cyclic of order not divisible by 4"));
    }
    let all: Vec<usize> = (0..n).collect();
    let fg = g.subgroup_from_indices(f).map_err(|_| violated("F is not a subgroup"))?;
    let hg = g.subgroup_from_indices(h).map_err(|_| violated("H is not a subgroup"))?;
    if !are_isomorphic(&fg, &builders::build(&GroupSpec::F21)?)? {
        return Err(violated("F is not isomorphic to F21"));
    }
    if !normal_in(&g, &all, f) || !normal_in(&g, &all, h) {
        return Err(violated("F and H must be normal in G"));
    }
    let r_set = g.closure_indices(&r.into_iter().collect::<Vec<_>>());
    let two_part = n & n.wrapping_neg();
    if r_set.len() != two_part {
        return Err(violated("R is not a Sylow 2-subgroup of G"));
    }
    if intersect(&g, f, h).len() != 1 || !commute(&g, f, h) || fg.order() * hg.order() * r_set.len() != n {
        return Err(violated("G is not (F x H) ⋊ R"));
    }
    let graph = cayley(g.clone(), s)?;
    if !graph.is_connected() {
        return Err(violated("S does not generate G"));
    }
    let red = reduce(&g, graph.connection(), f, h, r)?;
    if verdict_of(&red.gamma_prime)? != Some(Verdict::NonCca) {
        return Err(violated("condition (1): the reduction graph is not connected and non-CCA"));
    }
    if !red.factorises {
        return Err(violated("condition (2): some element of Y is not f z with |f| = 3, z in Hr, |z| = 2"));
    }
    if !red.y.is_empty() && !(r_set.len() == 2 && commute(&g, f, &r_set)) {
        return Err(violated("condition (3): Y is nonempty but |R| != 2 or F does not commute with R"));
    }
    let result = autc_group(&graph)?;
    Ok(ConverseResult {
        graph,
        reduction_graph: red.gamma_prime,
        predicted: Verdict::NonCca,
        engine: result.verdict,
        autc_order: result.full_group.order(),
    })
}

/// The named connection sets, with the groups they live in and the ambient
/// groups used for conjugacy.
#[derive(Debug, Clone)]
pub struct CanonicalSets {
    pub f21: Arc<FiniteGroup>,
    pub agl17: Arc<FiniteGroup>,
    pub f21xz2: Arc<FiniteGroup>,
    pub agl17xz2: Arc<FiniteGroup>,
    pub s21: Vec<usize>,
    pub s42_1: Vec<usize>,
    pub s42_2: Vec<usize>,
    /// `{y^±2, (xy^2)^±1, y^±2 r, (xy^2)^±1 r, r}` in `F21 × Z2`.
    pub f21xz2_family: Vec<usize>,
}

pub const S21_TEXT: &str = "y^2, y^-2, x*y^2, (x*y^2)^-1";
pub const S42_1_TEXT: &str = "y^2, y^-2, d";
pub const S42_2_TEXT: &str = "y^2, y^-2, d^-1*y^2*d, d^-1*y^-2*d, d";
pub const F21XZ2_FAMILY_TEXT: &str = "y^2, y^-2, x*y^2, (x*y^2)^-1, y^2*r, y^-2*r, x*y^2*r, (x*y^2)^-1*r, r";

pub fn canonical_sets() -> Result<CanonicalSets> {
    let f21 = builders::build(&GroupSpec::F21)?;
    let agl17 = builders::build(&GroupSpec::Agl17)?;
    let f21xz2 = builders::build(&GroupSpec::F21xZ2)?;
    let agl17xz2 = builders::build(&GroupSpec::Agl17xZ2)?;
    Ok(CanonicalSets {
        s21: words::resolve_set(&f21, S21_TEXT)?,
        s42_1: words::resolve_set(&agl17, S42_1_TEXT)?,
        s42_2: words::resolve_set(&agl17, S42_2_TEXT)?,
        f21xz2_family: words::resolve_set(&f21xz2, F21XZ2_FAMILY_TEXT)?,
        f21: Arc::new(f21),
        agl17: Arc::new(agl17),
        f21xz2: Arc::new(f21xz2),
        agl17xz2: Arc::new(agl17xz2),
    })
}

/// The group `F21 × D5` of order 210 with `F`, `H` = rotations of `D5`,
/// `R` = a reflection, and `S = S21 ∪ {h, h^-1, r}`.
#[derive(Debug, Clone)]
pub struct ConverseExample {
    pub g: Arc<FiniteGroup>,
    pub f: Vec<usize>,
    pub h: Vec<usize>,
    pub r: Option<usize>,
    pub s: Vec<usize>,
}

pub fn converse_example() -> Result<ConverseExample> {
    let g = builders::build_str("prod(f21;d5)")?;
    let x = words::resolve(&g, "x")?;
    let y2 = words::resolve(&g, "y^2")?;
    let rot = words::resolve(&g, "r")?;
    let refl = words::resolve(&g, "s")?;
    let f = g.closure_indices(&[x, y2]);
    let h = g.closure_indices(&[rot]);
    let s = words::resolve_set(&g, &format!("{S21_TEXT}, r, r^-1, s"))?;
    Ok(ConverseExample { g: Arc::new(g), f, h, r: Some(refl), s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_set_sizes() {
        let c = canonical_sets().unwrap();
        assert_eq!(c.s21.len(), 4);
        assert_eq!(c.s42_1.len(), 3);
        assert_eq!(c.s42_2.len(), 5);
        assert!(c.s42_1.iter().all(|x| c.s42_2.contains(x)));
        assert_eq!(c.f21xz2_family.len(), 9);
    }

    #[test]
    fn s21_decomposes_as_base_case() {
        let c = canonical_sets().unwrap();
        let graph = cayley(c.f21.clone(), &c.s21).unwrap();
        let autc = autc_group(&graph).unwrap();
        let d = decompose_structure(&graph, &autc).unwrap();
        assert_eq!((d.t.order(), d.f.order(), d.h.order(), d.j.order(), d.r_group.order()), (168, 21, 1, 1, 1));
        assert!(d.all_hold());
        let red = reduction_gamma_prime(&graph, &d).unwrap();
        assert!(red.y.is_empty());
        assert_eq!(red.claims, [true; 3]);
    }

    #[test]
    fn cca_graph_is_rejected() {
        let g = builders::build_str("z5").unwrap();
        let graph = cayley(g, &[1, 4]).unwrap();
        let autc = autc_group(&graph).unwrap();
        assert!(matches!(decompose_structure(&graph, &autc), Err(Error::HypothesesNotMet(_))));
    }

    #[test]
    fn non_cyclic_sylow_is_rejected() {
        let g = Arc::new(builders::build_str("prod(f21;z3)").unwrap());
        let x = words::resolve(&g, "x").unwrap();
        let y2 = words::resolve(&g, "y^2").unwrap();
        let f = g.closure_indices(&[x, y2]);
        let h = g.closure_indices(&[words::resolve(&g, "g").unwrap()]);
        let s = words::resolve_set(&g, &format!("{S21_TEXT}, g, g^-1")).unwrap();
        assert!(matches!(converse_build(g, &f, &h, None, &s), Err(Error::HypothesisViolated(_))));
    }
}

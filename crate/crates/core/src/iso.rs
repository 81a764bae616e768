//! Homomorphism extension and isomorphism search by generator images.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::limits;

const UNSET: usize = usize::MAX;

/// Extends `gens[i] -> imgs[i]` over the subgroup generated by `gens`,
/// breadth-first, checking `phi(v g) = phi(v) phi(g)` on every edge.
///
/// `mul` multiplies in the target. With `injective`, distinct elements must
/// get distinct images (`target_order` sizes the bookkeeping). Returns the
/// partial map (unset outside the closure) or `None` on a conflict.
pub fn extend_homomorphism(
    src: &FiniteGroup,
    gens: &[usize],
    imgs: &[usize],
    mul: impl Fn(usize, usize) -> usize,
    injective: Option<usize>,
) -> Option<Vec<usize>> {
    let mut map = vec![UNSET; src.order()];
    let mut used = injective.map(|n| vec![false; n]);
    map[0] = 0;
    if let Some(u) = used.as_mut() {
        u[0] = true;
    }
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for (&g, &h) in gens.iter().zip(imgs) {
            let u = src.mul(v, g);
            let w = mul(map[v], h);
            if map[u] == UNSET {
                if let Some(used) = used.as_mut() {
                    if used[w] {
                        return None;
                    }
                    used[w] = true;
                }
                map[u] = w;
                queue.push(u);
            } else if map[u] != w {
                return None;
            }
        }
    }
    Some(map)
}

/// A short generating sequence, preferring elements whose order is rare in
/// `rarity_of` (fewer candidate images during search).
fn search_generators(g: &FiniteGroup, rarity: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut cand: Vec<usize> = (1..g.order()).collect();
    cand.sort_by_key(|&x| (rarity(g.element_order(x)), std::cmp::Reverse(g.element_order(x)), x));
    g.greedy_generators(&cand)
}

/// Finds a group isomorphism `G -> H` as an index map, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<Vec<usize>>> {
    let bound = limits::ISOMORPHISM_BOUND;
    for x in [g, h] {
        if x.order() > bound {
            return Err(Error::BoundExceeded { order: x.order(), bound });
        }
    }
    if g.order() != h.order() || g.order_histogram() != h.order_histogram() {
        return Ok(None);
    }
    let hist = h.order_histogram();
    let count = |o: usize| hist.iter().find(|(k, _)| *k == o).map_or(0, |(_, c)| *c);
    let gens = search_generators(g, count);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| (0..h.order()).filter(|&y| h.element_order(y) == g.element_order(x)).collect())
        .collect();
    let mut imgs = Vec::with_capacity(gens.len());
    Ok(search(g, h, &gens, &candidates, &mut imgs))
}

fn search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    imgs: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = imgs.len();
    if k == gens.len() {
        let map = extend_homomorphism(g, gens, imgs, |a, b| h.mul(a, b), Some(h.order()))?;
        return map.iter().all(|&m| m != UNSET).then_some(map);
    }
    for &c in &candidates[k] {
        imgs.push(c);
        if extend_homomorphism(g, &gens[..=k], imgs, |a, b| h.mul(a, b), Some(h.order())).is_some() {
            if let Some(found) = search(g, h, gens, candidates, imgs) {
                return Some(found);
            }
        }
        imgs.pop();
    }
    None
}

pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Result<bool> {
    Ok(find_isomorphism(g, h)?.is_some())
}

/// All homomorphisms onto `Z_2` (as 0/1 vectors), i.e. index-2 subgroups
/// given by their kernels, excluding the trivial homomorphism.
pub fn index_two_kernels(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let gens = g.greedy_generators(&(1..g.order()).collect::<Vec<_>>());
    let k = gens.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << k) {
        let imgs: Vec<usize> = (0..k).map(|i| ((mask >> i) & 1) as usize).collect();
        if let Some(map) = extend_homomorphism(g, &gens, &imgs, |a, b| a ^ b, None) {
            out.push((0..g.order()).filter(|&x| map[x] == 0).collect());
        }
    }
    out
}

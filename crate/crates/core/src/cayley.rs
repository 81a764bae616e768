//! Edge-coloured Cayley graphs.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::builders;
use crate::error::{Error, Result};
use crate::group::{bfs_order, close_generators, is_normal, ElementLabel, FiniteGroup};
use crate::perm::Permutation;

const PALETTE: [&str; 12] = [
    "red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan", "gold", "gray40", "navy",
    "olivedrab",
];

/// `Cay(G, S)`: vertices are element indices of `G`, and every `s` in `S`
/// contributes edges `{g, s g}` coloured by the class `{s, s^-1}`.
///
/// Colour classes are numbered in order of first appearance in `S`; the
/// sign of an `S` entry is `+1` for the class representative and `-1` for
/// its inverse (involutions are their own representative).
#[derive(Debug, Clone)]
pub struct ColouredCayleyGraph {
    group: Arc<FiniteGroup>,
    connection: Vec<usize>,
    classes: Vec<(usize, usize)>,
    entry_class: Vec<(usize, i8)>,
    inverse_entry: Vec<usize>,
    left: Vec<Vec<u32>>,
}

/// Serialized form of a coloured Cayley graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub group_spec: String,
    pub connection_set: Vec<String>,
    pub edges: Vec<[usize; 3]>,
}

pub fn cayley(group: impl Into<Arc<FiniteGroup>>, set: &[usize]) -> Result<ColouredCayleyGraph> {
    let group = group.into();
    let mut connection = Vec::new();
    let mut seen = HashSet::new();
    for &s in set {
        if s >= group.order() {
            return Err(Error::UnknownElement(format!("element index {s}")));
        }
        if s == 0 {
            return Err(Error::ContainsIdentity);
        }
        if seen.insert(s) {
            connection.push(s);
        }
    }
    for &s in &connection {
        if !seen.contains(&group.inv(s)) {
            return Err(Error::NotInverseClosed(group.label(s)));
        }
    }
    let mut classes: Vec<(usize, usize)> = Vec::new();
    let mut entry_class = Vec::with_capacity(connection.len());
    for &s in &connection {
        let t = group.inv(s);
        match classes.iter().position(|&(a, _)| a == t) {
            Some(c) => entry_class.push((c, -1)),
            None => {
                classes.push((s, t));
                entry_class.push((classes.len() - 1, 1));
            }
        }
    }
    let inverse_entry = connection
        .iter()
        .map(|&s| connection.iter().position(|&t| t == group.inv(s)).unwrap())
        .collect();
    let left = connection
        .iter()
        .map(|&s| (0..group.order()).map(|v| group.mul(s, v) as u32).collect())
        .collect();
    Ok(ColouredCayleyGraph { group, connection, classes, entry_class, inverse_entry, left })
}

/// `K_G = Cay(G, G - {1})`.
pub fn complete_cayley(group: impl Into<Arc<FiniteGroup>>) -> Result<ColouredCayleyGraph> {
    let group = group.into();
    if group.order() < 2 {
        return Err(Error::InvalidSpec("complete Cayley graph needs |G| >= 2".into()));
    }
    let set: Vec<usize> = (1..group.order()).collect();
    cayley(group, &set)
}

impl ColouredCayleyGraph {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Connection set in input order, without duplicates.
    pub fn connection(&self) -> &[usize] {
        &self.connection
    }

    /// Colour classes as `(representative, inverse)` pairs.
    pub fn classes(&self) -> &[(usize, usize)] {
        &self.classes
    }

    pub fn colour_count(&self) -> usize {
        self.classes.len()
    }

    /// Colour index and sign of the `k`-th connection-set entry.
    pub fn entry_class(&self, k: usize) -> (usize, i8) {
        self.entry_class[k]
    }

    /// Position in the connection set of the inverse of entry `k`.
    pub fn inverse_entry(&self, k: usize) -> usize {
        self.inverse_entry[k]
    }

    /// `left(k)[v]` is the vertex `S[k] v`.
    pub fn left(&self, k: usize) -> &[u32] {
        &self.left[k]
    }

    /// `(neighbour, colour, sign)` for every connection-set entry.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.left.iter().zip(&self.entry_class).map(move |(row, &(c, sign))| (row[v] as usize, c, sign))
    }

    /// Undirected edges `[u, v, colour]`, each listed once, sorted.
    pub fn edges(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (c, &(s, t)) in self.classes.iter().enumerate() {
            let k = self.connection.iter().position(|&x| x == s).unwrap();
            for v in 0..self.order() {
                let u = self.left[k][v] as usize;
                if s != t || v < u {
                    out.push([v.min(u), v.max(u), c]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Connectivity checked on the graph and on the group; they must agree.
    pub fn is_connected(&self) -> bool {
        let graph_side = bfs_order(self.order(), 0, |v| self.neighbours(v).map(|(u, _, _)| u)).len() == self.order();
        let group_side = self.group.closure_indices(&self.connection).len() == self.order();
        assert_eq!(graph_side, group_side, "graph and group connectivity disagree");
        graph_side
    }

    pub fn connection_labels(&self) -> Vec<String> {
        self.connection.iter().map(|&s| self.group.label(s)).collect()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            group_spec: self.group.name().unwrap_or("").to_string(),
            connection_set: self.connection_labels(),
            edges: self.edges(),
        }
    }

    /// Rebuilds a graph from its JSON form, checking the edge list when one
    /// is given.
    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let group = builders::build_str(&json.group_spec)?;
        let set = json
            .connection_set
            .iter()
            .map(|l| crate::words::resolve(&group, l))
            .collect::<Result<Vec<_>>>()?;
        let graph = cayley(group, &set)?;
        if !json.edges.is_empty() {
            let mut given = json.edges.clone();
            given.sort_unstable();
            if given != graph.edges() {
                return Err(Error::Inconsistent("edge list does not match Cay(G, S)".into()));
            }
        }
        Ok(graph)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cayley {\n");
        for v in 0..self.order() {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", self.group.label(v).replace('"', "'"));
        }
        for [u, v, c] in self.edges() {
            let _ = writeln!(out, "  {u} -- {v} [color={}];", PALETTE[c % PALETTE.len()]);
        }
        out.push_str("}\n");
        out
    }
}

/// A quotient `Γ/N` together with the projection of vertices onto it.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub graph: ColouredCayleyGraph,
    pub projection: Vec<usize>,
}

/// `Γ/N = Cay(G/N, S/N)` for `N` normal in `G`; `N` is given as a subgroup
/// in `G`'s own permutation action.
pub fn quotient_graph(graph: &ColouredCayleyGraph, n: &FiniteGroup) -> Result<Quotient> {
    let g = graph.group();
    if !is_normal(n, g)? {
        return Err(Error::NotNormal);
    }
    let members = g.indices_of(n)?;
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for v in 0..g.order() {
        if coset[v] == usize::MAX {
            for &m in &members {
                coset[g.mul(m, v)] = reps.len();
            }
            reps.push(v);
        }
    }
    let k = reps.len();
    let act = |x: usize| -> Permutation {
        Permutation::from_u32_unchecked(reps.iter().map(|&r| coset[g.mul(r, x)] as u32).collect())
    };
    let gens: Vec<Permutation> = g.generators().iter().map(|&x| act(x)).collect();
    let q = close_generators(&gens, k, g.order())?;
    let projection: Vec<usize> = (0..g.order()).map(|x| q.index_of(&act(x)).unwrap()).collect();
    let mut labels = vec![ElementLabel::new("", vec![]); q.order()];
    for &r in &reps {
        labels[projection[r]] = ElementLabel::new(g.label(r), g.coords(r).map(|c| c.to_vec()).unwrap_or_default());
    }
    let name = format!("{}/N", g.name().unwrap_or("G"));
    let q = q.with_labels(labels).with_name(name);
    let mut set = Vec::new();
    for &s in graph.connection() {
        let t = projection[s];
        if t != 0 && !set.contains(&t) {
            set.push(t);
        }
    }
    Ok(Quotient { graph: cayley(q, &set)?, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_str;
    use crate::words::resolve_set;

    fn cay(spec: &str, set: &str) -> ColouredCayleyGraph {
        let g = build_str(spec).unwrap();
        let s = resolve_set(&g, set).unwrap();
        cayley(g, &s).unwrap()
    }

    #[test]
    fn four_cycle_has_one_colour() {
        let c = cay("z4", "1,3");
        assert_eq!(c.colour_count(), 1);
        assert_eq!(c.edges().len(), 4);
        assert!(c.is_connected());
    }

    #[test]
    fn rejects_bad_sets() {
        let g = build_str("z5").unwrap();
        assert!(matches!(cayley(g.clone(), &[1]), Err(Error::NotInverseClosed(_))));
        assert!(matches!(cayley(g, &[0, 1, 4]), Err(Error::ContainsIdentity)));
    }

    #[test]
    fn two_triangles_are_disconnected() {
        assert!(!cay("z6", "2,4").is_connected());
        assert!(cay("z6", "1,5").is_connected());
    }

    #[test]
    fn complete_q8_colour_census() {
        let k = complete_cayley(build_str("q8").unwrap()).unwrap();
        assert_eq!(k.colour_count(), 4);
        assert_eq!(k.edges().len(), 28);
    }

    #[test]
    fn involution_edges_are_listed_once() {
        let k = complete_cayley(build_str("z2").unwrap()).unwrap();
        assert_eq!(k.edges(), vec![[0, 1, 0]]);
    }

    #[test]
    fn quotients_of_hexagon() {
        let c = cay("z6", "1,5");
        let g = c.group().clone();
        let two = g.subgroup(&resolve_set(&g, "2").unwrap());
        let q = quotient_graph(&c, &two).unwrap();
        assert_eq!(q.graph.order(), 2);
        assert_eq!(q.graph.connection().len(), 1);
        let whole = g.clone();
        let q = quotient_graph(&c, &whole).unwrap();
        assert_eq!(q.graph.order(), 1);
        assert!(q.graph.connection().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let c = cay("d4", "r,r^3,s");
        let json = c.to_json();
        let back = ColouredCayleyGraph::from_json(&json).unwrap();
        assert_eq!(back.edges(), c.edges());
        assert!(c.to_dot().contains("color=red"));
    }
}

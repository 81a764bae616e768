//! Simple undirected graphs and the operators applied to them.

use std::collections::{HashMap, VecDeque};

use crate::cayley::{cayley, ColouredCayleyGraph};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    bipartition: Option<Vec<u8>>,
}

impl PlainGraph {
    /// Builds a simple graph; edges are normalised to `u < v` and sorted.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut es: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NotSimple(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::NotSimple(format!("loop at {u}")));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        if es.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotSimple("repeated edge".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &es {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Self { n, edges: es, adj, bipartition: None })
    }

    /// Records a bipartition (side 0 or 1 per vertex), which must be proper.
    pub fn with_bipartition(mut self, sides: Vec<u8>) -> Result<Self> {
        if sides.len() != self.n || self.edges.iter().any(|&(u, v)| sides[u] == sides[v]) {
            return Err(Error::NotSimple("bipartition is not proper".into()));
        }
        self.bipartition = Some(sides);
        Ok(self)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, &edges).expect("complete graph is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        let sides = (0..a + b).map(|v| u8::from(v >= a)).collect();
        Self::new(a + b, &edges).and_then(|g| g.with_bipartition(sides)).expect("K_{a,b}")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, &edges).expect("Petersen graph")
    }

    /// Point-line incidence graph of the Fano plane: points `0..7`, line
    /// `7 + i` is `{i, i+1, i+3}` mod 7.
    pub fn heawood() -> Self {
        let mut edges = Vec::new();
        for i in 0..7 {
            for d in [0, 1, 3] {
                edges.push(((i + d) % 7, 7 + i));
            }
        }
        let sides = (0..14).map(|v| u8::from(v >= 7)).collect();
        Self::new(14, &edges).and_then(|g| g.with_bipartition(sides)).expect("Heawood graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn bipartition(&self) -> Option<&[u8]> {
        self.bipartition.as_deref()
    }

    /// A proper 2-colouring if the graph is bipartite (stored bipartition
    /// first, otherwise by BFS).
    pub fn two_colouring(&self) -> Option<Vec<u8>> {
        if let Some(b) = &self.bipartition {
            return Some(b.clone());
        }
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &u in &self.adj[v] {
                    if side[u] == u8::MAX {
                        side[u] = 1 - side[v];
                        q.push_back(u);
                    } else if side[u] == side[v] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn distances_from(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &u in &self.adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &u in &self.adj[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        q.push_back(u);
                    } else if parent[v] != u {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Vertices are the edge indices of `self`; two are adjacent when the
    /// edges share an endpoint.
    pub fn line_graph(&self) -> PlainGraph {
        let mut edges = Vec::new();
        for v in 0..self.n {
            let inc: Vec<usize> = self.adj[v].iter().map(|&u| self.edge_index(v, u).unwrap()).collect();
            for (a, &e) in inc.iter().enumerate() {
                for &f in &inc[a + 1..] {
                    edges.push((e, f));
                }
            }
        }
        PlainGraph::new(self.edges.len(), &edges).expect("line graph of a simple graph is simple")
    }

    /// Original vertices keep their indices; edge `i` becomes vertex `n + i`.
    pub fn subdivision(&self) -> PlainGraph {
        let mut edges = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            edges.push((u, self.n + i));
            edges.push((v, self.n + i));
        }
        let sides = (0..self.n + self.edges.len()).map(|v| u8::from(v >= self.n)).collect();
        PlainGraph::new(self.n + self.edges.len(), &edges)
            .and_then(|g| g.with_bipartition(sides))
            .expect("subdivision is simple and bipartite")
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.n && self.edges.iter().all(|&(u, v)| self.has_edge(p.apply(u), p.apply(v)))
    }

    /// Image of every edge under a vertex permutation, as a permutation of
    /// edge indices.
    pub fn edge_action(&self, p: &Permutation) -> Result<Permutation> {
        let imgs = self
            .edges
            .iter()
            .map(|&(u, v)| {
                self.edge_index(p.apply(u), p.apply(v))
                    .ok_or_else(|| Error::HypothesisViolated(format!("{p} is not a graph automorphism")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(imgs)
    }

    /// All automorphisms, by backtracking over vertex images with distance
    /// pruning. Fails once more than `cap` are found.
    pub fn automorphisms(&self, cap: usize) -> Result<Vec<Permutation>> {
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        let dist: Vec<Vec<usize>> = (0..n).map(|s| self.distances_from(s)).collect();
        let mut order = Vec::new();
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                order.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        q.push_back(u);
                    }
                }
            }
        }
        let mut img = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut out = Vec::new();
        let mut next = vec![0usize; n + 1];
        let mut d = 0;
        loop {
            if d == n {
                out.push(Permutation::from_u32_unchecked(img.iter().map(|&x| x as u32).collect()));
                if out.len() > cap {
                    return Err(Error::BoundExceeded { order: out.len(), bound: cap });
                }
                d -= 1;
            }
            let v = order[d];
            if img[v] != usize::MAX {
                used[img[v]] = false;
                img[v] = usize::MAX;
            }
            let mut placed = false;
            while next[d] < n {
                let w = next[d];
                next[d] += 1;
                if used[w] || self.degree(w) != self.degree(v) {
                    continue;
                }
                let ok = order[..d].iter().all(|&u| dist[u][v] == dist[img[u]][w]);
                if ok {
                    img[v] = w;
                    used[w] = true;
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
                if d == 0 {
                    break;
                }
                d -= 1;
            }
        }
        Ok(out)
    }
}

/// `L(Γ)` realised as a Cayley graph on an edge-regular group `G`.
#[derive(Debug, Clone)]
pub struct LineRealization {
    pub graph: ColouredCayleyGraph,
    /// The base edge `e0`, as an index into `Γ`'s edge list.
    pub base_edge: usize,
    /// `edge_of[g]` is the edge `e0^g`.
    pub edge_of: Vec<usize>,
}

impl LineRealization {
    /// The permutation of `G`'s element indices induced by an automorphism
    /// of `Γ`.
    pub fn induced(&self, gamma: &PlainGraph, p: &Permutation) -> Result<Permutation> {
        let on_edges = gamma.edge_action(p)?;
        let mut elem_of = vec![0usize; self.edge_of.len()];
        for (g, &e) in self.edge_of.iter().enumerate() {
            elem_of[e] = g;
        }
        Permutation::from_images(self.edge_of.iter().map(|&e| elem_of[on_edges.apply(e)]).collect())
    }
}

/// Identifies vertex `g` of `Cay(G, S)` with the edge `e0^g`, where `e0` is
/// the least edge, and `S` collects the `s` with `e0^s` meeting `e0`.
pub fn realize_line_graph_as_cayley(gamma: &PlainGraph, group: &FiniteGroup) -> Result<LineRealization> {
    if group.degree() != gamma.vertex_count() {
        return Err(Error::DegreeMismatch { expected: gamma.vertex_count(), found: group.degree() });
    }
    if let Some(p) = group.generator_perms().iter().find(|p| !gamma.is_automorphism(p)) {
        return Err(Error::NotEdgeRegular(format!("{p} is not an automorphism")));
    }
    let m = gamma.edges().len();
    if m == 0 || group.order() != m {
        return Err(Error::NotEdgeRegular(format!("|G| = {} but there are {m} edges", group.order())));
    }
    let base_edge = 0;
    let (a, b) = gamma.edges()[base_edge];
    let mut hit = vec![false; m];
    let mut edge_of = Vec::with_capacity(m);
    for p in group.elements() {
        let e = gamma.edge_index(p.apply(a), p.apply(b)).unwrap();
        if hit[e] {
            return Err(Error::NotEdgeRegular("edge stabiliser is nontrivial".into()));
        }
        hit[e] = true;
        edge_of.push(e);
    }
    let meets = |e: usize| {
        let (u, v) = gamma.edges()[e];
        e != base_edge && (u == a || u == b || v == a || v == b)
    };
    let set: Vec<usize> = (0..m).filter(|&g| meets(edge_of[g])).collect();
    let graph = cayley(group.clone(), &set)?;
    Ok(LineRealization { graph, base_edge, edge_of })
}

/// Map from each vertex of `Γ` to the edges through it.
pub fn incident_edges(gamma: &PlainGraph) -> HashMap<usize, Vec<usize>> {
    (0..gamma.vertex_count())
        .map(|v| (v, gamma.neighbours(v).iter().map(|&u| gamma.edge_index(v, u).unwrap()).collect()))
        .collect()
}

//! Fully enumerated permutation groups.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits;
use crate::perm::Permutation;

/// Display text plus the structured coordinates a builder assigned to an
/// element (factor indices, exponents, matrix entries, ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementLabel {
    pub text: String,
    pub coords: Vec<u32>,
}

impl ElementLabel {
    pub fn new(text: impl Into<String>, coords: Vec<u32>) -> Self {
        Self { text: text.into(), coords }
    }
}

/// A finite permutation group with every element listed.
///
/// Element 0 is always the identity. Elements are addressed by index, and
/// all products are taken in the right-action convention of
/// [`Permutation::compose`].
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: Option<String>,
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    labels: Option<Arc<Vec<ElementLabel>>>,
    symbols: Arc<Vec<(String, Permutation)>>,
    table: OnceLock<Option<Arc<Vec<u32>>>>,
    base: OnceLock<Option<Arc<BaseLookup>>>,
    orders: OnceLock<Vec<usize>>,
}

/// A few points whose images determine each element, for products without
/// a full table.
#[derive(Debug)]
struct BaseLookup {
    points: Vec<usize>,
    map: HashMap<u64, u32>,
}

const MAX_BASE: usize = 4;

impl BaseLookup {
    fn key(&self, f: impl Fn(usize) -> usize) -> u64 {
        self.points.iter().enumerate().fold(0u64, |k, (i, &b)| k | (f(b) as u64) << (16 * i))
    }

    fn build(degree: usize, elements: &[Permutation]) -> Option<Self> {
        if degree > 1 << 16 {
            return None;
        }
        let mut points = Vec::new();
        let mut distinct = 1;
        for b in 0..degree {
            let mut trial = points.clone();
            trial.push(b);
            let keys: HashSet<Vec<usize>> =
                elements.iter().map(|p| trial.iter().map(|&t| p.apply(t)).collect()).collect();
            if keys.len() > distinct {
                distinct = keys.len();
                points = trial;
                if distinct == elements.len() || points.len() == MAX_BASE {
                    break;
                }
            }
        }
        if distinct != elements.len() {
            return None;
        }
        let mut out = Self { points, map: HashMap::with_capacity(elements.len()) };
        for (i, p) in elements.iter().enumerate() {
            let k = out.key(|b| p.apply(b));
            out.map.insert(k, i as u32);
        }
        Some(out)
    }
}

/// Closes `gens` under composition, breadth-first from the identity with
/// generators applied in input order.
pub fn close_generators(gens: &[Permutation], degree: usize, cap: usize) -> Result<FiniteGroup> {
    if degree == 0 {
        return Err(Error::InvalidPermutation("degree must be positive".into()));
    }
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
        }
    }
    let gens: Vec<&Permutation> = gens.iter().filter(|g| !g.is_identity()).collect();
    let mut elements = vec![Permutation::identity(degree)];
    let mut index = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut head = 0;
    while head < elements.len() {
        for g in &gens {
            let p = elements[head].compose(g);
            if !index.contains_key(&p) {
                if elements.len() >= cap {
                    return Err(Error::ClosureExceedsCap { cap });
                }
                index.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        head += 1;
    }
    let mut generators = Vec::new();
    for g in gens {
        let i = index[g];
        if !generators.contains(&i) {
            generators.push(i);
        }
    }
    Ok(FiniteGroup::from_indexed(degree, elements, index, generators))
}

impl FiniteGroup {
    fn from_indexed(
        degree: usize,
        elements: Vec<Permutation>,
        index: HashMap<Permutation, usize>,
        generators: Vec<usize>,
    ) -> Self {
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        Self {
            name: None,
            degree,
            elements,
            index,
            inverses,
            generators,
            labels: None,
            symbols: Arc::new(Vec::new()),
            table: OnceLock::new(),
            base: OnceLock::new(),
            orders: OnceLock::new(),
        }
    }

    /// Builds a group from an element list already known to be closed, with
    /// the identity first.
    pub(crate) fn from_closed_list(degree: usize, elements: Vec<Permutation>, generators: Vec<usize>) -> Self {
        debug_assert!(elements[0].is_identity());
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Self::from_indexed(degree, elements, index, generators)
    }

    /// The trivial group of the given degree.
    pub fn trivial(degree: usize) -> Self {
        Self::from_closed_list(degree, vec![Permutation::identity(degree)], Vec::new())
    }

    /// Builds the group whose elements are exactly `perms`; fails with
    /// [`Error::NotASubgroup`] if they are not closed.
    pub fn from_element_set(degree: usize, perms: &[Permutation]) -> Result<Self> {
        let target: HashSet<&Permutation> = perms.iter().collect();
        let mut gens: Vec<Permutation> = Vec::new();
        let mut current = Self::trivial(degree);
        for p in perms {
            if !target.contains(&p.inverse()) {
                return Err(Error::NotASubgroup);
            }
            if !current.contains(p) {
                gens.push(p.clone());
                current = close_generators(&gens, degree, target.len().max(1))
                    .map_err(|_| Error::NotASubgroup)?;
            }
        }
        if current.order() != target.len() || !current.elements.iter().all(|e| target.contains(e)) {
            return Err(Error::NotASubgroup);
        }
        Ok(current)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<ElementLabel>) -> Self {
        assert_eq!(labels.len(), self.order());
        self.labels = Some(Arc::new(labels));
        self
    }

    pub fn with_symbols(mut self, symbols: Vec<(String, Permutation)>) -> Self {
        self.symbols = Arc::new(symbols);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_perms(&self) -> Vec<Permutation> {
        self.generators.iter().map(|&g| self.elements[g].clone()).collect()
    }

    pub fn symbols(&self) -> &[(String, Permutation)] {
        &self.symbols
    }

    pub fn labels(&self) -> Option<&[ElementLabel]> {
        self.labels.as_deref().map(|v| v.as_slice())
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].text.clone(),
            None => self.elements[i].to_string(),
        }
    }

    pub fn coords(&self, i: usize) -> Option<&[u32]> {
        self.labels.as_ref().map(|l| l[i].coords.as_slice())
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of_label(&self, text: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l.text == text)
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    fn table(&self) -> Option<&Arc<Vec<u32>>> {
        self.table
            .get_or_init(|| {
                let n = self.order();
                if n > limits::TABLE_LIMIT {
                    return None;
                }
                let mut t = vec![0u32; n * n];
                let base = self.base();
                for a in 0..n {
                    let pa = &self.elements[a];
                    for b in 0..n {
                        let pb = &self.elements[b];
                        t[a * n + b] = match base {
                            Some(base) => base.map[&base.key(|x| pb.apply(pa.apply(x)))],
                            None => self.index[&pa.compose(pb)] as u32,
                        };
                    }
                }
                Some(Arc::new(t))
            })
            .as_ref()
    }

    fn base(&self) -> Option<&Arc<BaseLookup>> {
        self.base.get_or_init(|| BaseLookup::build(self.degree, &self.elements).map(Arc::new)).as_ref()
    }

    /// Index of the product `a * b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = self.table() {
            return t[a * self.order() + b] as usize;
        }
        if let Some(base) = self.base() {
            let (pa, pb) = (&self.elements[a], &self.elements[b]);
            return base.map[&base.key(|x| pb.apply(pa.apply(x)))] as usize;
        }
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    /// `b^-1 a b`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        (0..e.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.orders.get_or_init(|| self.elements.iter().map(|p| p.order()).collect())[i]
    }

    /// Number of elements of each order, sorted by order.
    pub fn order_histogram(&self) -> Vec<(usize, usize)> {
        let mut h: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.order() {
            *h.entry(self.element_order(i)).or_default() += 1;
        }
        let mut v: Vec<_> = h.into_iter().collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, i| crate::perm::lcm(acc, self.element_order(i)))
    }

    /// Indices of the subgroup generated by `gens`, breadth-first.
    pub fn closure_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![0];
        seen[0] = true;
        let mut head = 0;
        while head < out.len() {
            let a = out[head];
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    out.push(b);
                }
            }
            head += 1;
        }
        out
    }

    /// The subgroup generated by the given elements, as a group in the
    /// same permutation representation.
    pub fn subgroup(&self, gens: &[usize]) -> FiniteGroup {
        let idx = self.closure_indices(gens);
        let elements: Vec<Permutation> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut generators: Vec<usize> = gens.iter().map(|g| pos[g]).filter(|&k| k != 0).collect();
        generators.dedup();
        let mut out = Self::from_closed_list(self.degree, elements, generators);
        if let Some(labels) = &self.labels {
            out.labels = Some(Arc::new(idx.iter().map(|&i| labels[i].clone()).collect()));
        }
        out.symbols = self.symbols.clone();
        out
    }

    /// The subgroup whose elements are exactly `set` (indices into `self`).
    pub fn subgroup_from_indices(&self, set: &[usize]) -> Result<FiniteGroup> {
        let mut member = vec![false; self.order()];
        for &i in set {
            member[i] = true;
        }
        let want = member.iter().filter(|&&m| m).count();
        let gens = self.greedy_generators(set);
        let closure = self.closure_indices(&gens);
        if closure.len() != want || !closure.iter().all(|&i| member[i]) {
            return Err(Error::NotASubgroup);
        }
        Ok(self.subgroup(&gens))
    }

    /// Picks elements of `set` in order, keeping each one that is not yet
    /// in the subgroup generated by the previous picks.
    pub fn greedy_generators(&self, set: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut gens = Vec::new();
        for &s in set {
            if inside[s] {
                continue;
            }
            gens.push(s);
            for i in self.closure_indices(&gens) {
                inside[i] = true;
            }
        }
        gens
    }

    /// Indices (into `self`) of the elements of a group given in the same
    /// representation, or [`Error::NotASubgroup`].
    pub fn indices_of(&self, sub: &FiniteGroup) -> Result<Vec<usize>> {
        if sub.degree != self.degree {
            return Err(Error::NotASubgroup);
        }
        sub.elements.iter().map(|p| self.index_of(p).ok_or(Error::NotASubgroup)).collect()
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        other.indices_of(self).is_ok()
    }

    /// Same element set, regardless of ordering.
    pub fn same_elements(&self, other: &FiniteGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = vec![x];
            class_of[x] = id;
            let mut head = 0;
            while head < class.len() {
                let a = class[head];
                for &g in &self.generators {
                    let b = self.conj(a, g);
                    if class_of[b] == usize::MAX {
                        class_of[b] = id;
                        class.push(b);
                    }
                }
                head += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    pub fn centralizer_indices(&self, set: &[usize]) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| set.iter().all(|&s| self.mul(g, s) == self.mul(s, g)))
            .collect()
    }

    pub fn center(&self) -> FiniteGroup {
        let gens = self.generators.clone();
        let idx = self.centralizer_indices(&gens);
        self.subgroup_from_indices(&idx).expect("centre is a subgroup")
    }

    /// Elements normalising the subgroup with the given element indices.
    pub fn normalizer_indices(&self, sub: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        for &i in sub {
            member[i] = true;
        }
        let gens = self.greedy_generators(sub);
        (0..self.order()).filter(|&g| gens.iter().all(|&h| member[self.conj(h, g)])).collect()
    }

    pub fn normalizer(&self, sub: &FiniteGroup) -> Result<FiniteGroup> {
        let idx = self.indices_of(sub)?;
        self.subgroup_from_indices(&self.normalizer_indices(&idx))
    }

    pub fn intersection(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let idx: Vec<usize> = (0..self.order()).filter(|&i| other.contains(&self.elements[i])).collect();
        self.subgroup_from_indices(&idx)
    }

    /// Right-regular representation: element `g` acts on indices by
    /// `v -> v * g`. Element `i` of the result corresponds to element `i`
    /// of `self`.
    pub fn right_regular(&self) -> FiniteGroup {
        let n = self.order();
        let elements: Vec<Permutation> = (0..n)
            .map(|g| Permutation::from_u32_unchecked((0..n).map(|v| self.mul(v, g) as u32).collect()))
            .collect();
        let mut out = Self::from_closed_list(n, elements, self.generators.clone());
        out.labels = self.labels.clone();
        out.name = self.name.as_ref().map(|s| format!("{s}_R"));
        out
    }

    /// The same abstract group in another faithful action: element `i` of
    /// the result is `f(element i)`. Labels, name and generators carry over.
    pub fn transport(&self, degree: usize, f: impl Fn(&Permutation) -> Permutation) -> Result<FiniteGroup> {
        let elements: Vec<Permutation> = self.elements.iter().map(&f).collect();
        if elements.iter().any(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch { expected: degree, found: elements[0].degree() });
        }
        let mut out = Self::from_closed_list(degree, elements, self.generators.clone());
        if out.index.len() != self.order() {
            return Err(Error::Inconsistent("transported action is not faithful".into()));
        }
        for &a in &self.generators {
            for b in 0..self.order() {
                if out.elements[self.mul(b, a)] != out.elements[b].compose(&out.elements[a]) {
                    return Err(Error::Inconsistent("transported action is not a homomorphism".into()));
                }
            }
        }
        out.labels = self.labels.clone();
        out.name = self.name.clone();
        Ok(out)
    }

    /// Relabels the group through `perm` acting on points, i.e. replaces
    /// every element `p` by `perm^-1 p perm`.
    pub fn conjugated(&self, perm: &Permutation) -> FiniteGroup {
        let elements = self.elements.iter().map(|p| p.conjugate_by(perm)).collect();
        let mut out = Self::from_closed_list(self.degree, elements, self.generators.clone());
        out.labels = self.labels.clone();
        out.name = self.name.clone();
        out
    }
}

/// True iff `h^g` lies in `sub` for every `h` in `sub` and every generator
/// `g` of `group`.
pub fn is_normal(sub: &FiniteGroup, group: &FiniteGroup) -> Result<bool> {
    group.indices_of(sub)?;
    for h in sub.elements() {
        for g in group.generator_perms() {
            if !sub.contains(&h.conjugate_by(&g)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: usize) -> Vec<usize> {
    prime_factors(n).into_iter().map(|(p, _)| p).collect()
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: usize, p: usize) -> usize {
    let mut q = 1;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        q *= p;
    }
    q
}

/// A Sylow `p`-subgroup, grown greedily: while the current `p`-subgroup `P`
/// is too small, adjoin the first element `x` that normalises `P`, lies
/// outside it and has `x^p` in `P`.
pub fn sylow_subgroup(group: &FiniteGroup, p: usize) -> Result<FiniteGroup> {
    Ok(group.subgroup(&sylow_generators(group, p)?))
}

pub(crate) fn sylow_generators(group: &FiniteGroup, p: usize) -> Result<Vec<usize>> {
    let target = p_part(group.order(), p);
    let mut gens: Vec<usize> = Vec::new();
    let mut member = vec![false; group.order()];
    member[0] = true;
    let mut size = 1;
    while size < target {
        let found = (0..group.order()).find(|&x| {
            !member[x]
                && member[group.pow(x, p as i64)]
                && gens.iter().all(|&q| member[group.conj(q, x)])
        });
        let Some(x) = found else {
            return Err(Error::Inconsistent(format!("Sylow {p}-subgroup growth stalled at order {size}")));
        };
        gens.push(x);
        member.iter_mut().for_each(|m| *m = false);
        let closure = group.closure_indices(&gens);
        size = closure.len();
        for i in closure {
            member[i] = true;
        }
    }
    if size != target {
        return Err(Error::Inconsistent(format!("Sylow {p}-subgroup has order {size}, expected {target}")));
    }
    Ok(gens)
}

/// Order not divisible by four, and every Sylow subgroup cyclic.
pub fn is_sylow_cyclic_order_not_div_4(group: &FiniteGroup) -> bool {
    !group.order().is_multiple_of(4) && is_sylow_cyclic(group)
}

pub fn is_sylow_cyclic(group: &FiniteGroup) -> bool {
    prime_divisors(group.order()).into_iter().all(|p| {
        let sylow = sylow_subgroup(group, p).expect("Sylow growth");
        (0..sylow.order()).any(|i| sylow.element_order(i) == sylow.order())
    })
}

/// The subgroup generated by all squares.
pub fn squares_subgroup(group: &FiniteGroup) -> FiniteGroup {
    let mut squares: Vec<usize> = (0..group.order()).map(|x| group.mul(x, x)).collect();
    squares.sort_unstable();
    squares.dedup();
    let gens = group.greedy_generators(&squares);
    group.subgroup(&gens)
}

/// All normal subgroups, as joins of normal closures of conjugacy classes,
/// sorted by order and then by sorted element list.
pub fn normal_subgroups(group: &FiniteGroup) -> Result<Vec<FiniteGroup>> {
    Ok(normal_subgroup_indices(group)?
        .into_iter()
        .map(|set| group.subgroup_from_indices(&set).expect("normal subgroup"))
        .collect())
}

pub(crate) fn normal_subgroup_indices(group: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    let cap = limits::closure_cap();
    if group.order() > cap {
        return Err(Error::BoundExceeded { order: group.order(), bound: cap });
    }
    let classes = group.conjugacy_classes();
    if classes.len() > limits::NORMAL_SUBGROUP_CLASS_BOUND {
        return Err(Error::BoundExceeded { order: classes.len(), bound: limits::NORMAL_SUBGROUP_CLASS_BOUND });
    }
    let class_gens: Vec<Vec<usize>> =
        classes.iter().filter(|c| c[0] != 0).map(|c| group.greedy_generators(c)).collect();
    let key = |set: &[usize]| {
        let mut s = set.to_vec();
        s.sort_unstable();
        s
    };
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![0], Vec::new())];
    found.insert(vec![0]);
    while let Some((set, gens)) = stack.pop() {
        let mut member = vec![false; group.order()];
        for &i in &set {
            member[i] = true;
        }
        for cg in &class_gens {
            if cg.iter().all(|&c| member[c]) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.extend_from_slice(cg);
            let joined = key(&group.closure_indices(&g2));
            if found.insert(joined.clone()) {
                let g2 = group.greedy_generators(&g2);
                stack.push((joined, g2));
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// True iff `a^-1 S1 a = S2` as sets for some `a` in the ambient group.
pub fn are_conjugate_subsets(ambient: &FiniteGroup, s1: &[Permutation], s2: &[Permutation]) -> Result<bool> {
    Ok(conjugator(ambient, s1, s2)?.is_some())
}

/// The first element of `ambient` conjugating `s1` onto `s2`, if any.
pub fn conjugator(ambient: &FiniteGroup, s1: &[Permutation], s2: &[Permutation]) -> Result<Option<usize>> {
    for p in s1.iter().chain(s2) {
        if !ambient.contains(p) {
            return Err(Error::NotASubgroup);
        }
    }
    let target: HashSet<&Permutation> = s2.iter().collect();
    let source: HashSet<&Permutation> = s1.iter().collect();
    if source.len() != target.len() {
        return Ok(None);
    }
    Ok((0..ambient.order()).find(|&a| {
        let a = ambient.element(a);
        source.iter().all(|s| target.contains(&s.conjugate_by(a)))
    }))
}

/// Breadth-first distances from `start` in a graph given by neighbour lists.
pub(crate) fn bfs_order<F: Fn(usize) -> I, I: IntoIterator<Item = usize>>(
    n: usize,
    start: usize,
    neighbours: F,
) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut order = vec![start];
    seen[start] = true;
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        for u in neighbours(v) {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
                q.push_back(u);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroup {
        let g = Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap();
        close_generators(&[g], n, 1000).unwrap()
    }

    #[test]
    fn closes_three_cycle() {
        let g = close_generators(&[Permutation::from_images(vec![1, 2, 0]).unwrap()], 3, 10).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = close_generators(&[], 4, 10).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.generators().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let s4 = [
            Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
        ];
        assert_eq!(close_generators(&s4, 4, 23).unwrap_err(), Error::ClosureExceedsCap { cap: 23 });
        assert_eq!(close_generators(&s4, 4, 24).unwrap().order(), 24);
    }

    #[test]
    fn closure_ordering_is_breadth_first() {
        let g = cyclic(5);
        let r = g.element(1).clone();
        for k in 0..5 {
            assert_eq!(g.element(k), &r.pow(k as i64));
        }
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let a = Permutation::identity(3);
        assert!(matches!(close_generators(&[a], 4, 10), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn sylow_of_cyclic_groups() {
        let z12 = cyclic(12);
        assert_eq!(sylow_subgroup(&z12, 2).unwrap().order(), 4);
        assert_eq!(sylow_subgroup(&z12, 3).unwrap().order(), 3);
        assert_eq!(sylow_subgroup(&cyclic(5), 2).unwrap().order(), 1);
    }

    #[test]
    fn squares_of_z4() {
        let sq = squares_subgroup(&cyclic(4));
        assert_eq!(sq.order(), 2);
    }

    #[test]
    fn normal_subgroups_of_z6() {
        let ns = normal_subgroups(&cyclic(6)).unwrap();
        let orders: Vec<usize> = ns.iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn is_normal_requires_subgroup() {
        let z6 = cyclic(6);
        let z5 = cyclic(5);
        assert_eq!(is_normal(&z5, &z6), Err(Error::NotASubgroup));
        assert!(is_normal(&z6, &z6).unwrap());
    }

    #[test]
    fn from_element_set_rejects_non_subgroup() {
        let z4 = cyclic(4);
        let bad = vec![z4.element(0).clone(), z4.element(1).clone()];
        assert_eq!(FiniteGroup::from_element_set(4, &bad).unwrap_err(), Error::NotASubgroup);
    }

    #[test]
    fn right_regular_matches_indices() {
        let g = cyclic(6);
        let r = g.right_regular();
        for a in 0..6 {
            for v in 0..6 {
                assert_eq!(r.element(a).apply(v), g.mul(v, a));
            }
        }
    }
}

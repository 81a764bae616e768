//! Exhaustive search over inverse-closed connection sets, grouped into
//! classes under conjugation by an ambient group that normalises `G`.
//!
//! A connection set is a bit mask over *units*: an involution, or an
//! element together with its inverse. Ambient elements permute units, and
//! the induced action on masks is evaluated with per-byte lookup tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::builders::{self, GroupSpec};
use crate::cayley::cayley;
use crate::engine::{autc_group, quick_verdict, Verdict};
use crate::error::{Error, Result};
use crate::group::{squares_subgroup, FiniteGroup};
use crate::structure::{canonical_sets, CanonicalSets};

/// The three base groups of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    F21,
    Agl17,
    F21xz2,
}

impl Base {
    pub const ALL: [Base; 3] = [Base::F21, Base::Agl17, Base::F21xz2];

    pub fn group_spec(self) -> GroupSpec {
        match self {
            Base::F21 => GroupSpec::F21,
            Base::Agl17 => GroupSpec::Agl17,
            Base::F21xz2 => GroupSpec::F21xZ2,
        }
    }

    /// The group whose conjugation defines the classes.
    pub fn ambient_spec(self) -> GroupSpec {
        match self {
            Base::F21 | Base::Agl17 => GroupSpec::Agl17,
            Base::F21xz2 => GroupSpec::Agl17xZ2,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::F21 => "f21",
            Base::Agl17 => "agl17",
            Base::F21xz2 => "f21xz2",
        })
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f21" => Ok(Base::F21),
            "agl17" => Ok(Base::Agl17),
            "f21xz2" | "f21xe2" => Ok(Base::F21xz2),
            other => Err(Error::InvalidSpec(format!("unknown enumeration base `{other}` (expected f21, agl17 or f21xz2)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every subset is tested; classes are formed afterwards.
    Full,
    /// Only the least mask of each orbit is tested.
    Canonical,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Canonical => "canonical",
        })
    }
}

/// Units of an inverse-closed set and the ambient action on them.
#[derive(Debug, Clone)]
pub struct UnitSystem {
    group: Arc<FiniteGroup>,
    ambient: Arc<FiniteGroup>,
    units: Vec<Vec<usize>>,
    unit_of: Vec<Option<usize>>,
    // tables[a][byte][value]: image under ambient element a of the units
    // in byte position `byte` of a mask.
    tables: Vec<[[u32; 256]; 4]>,
}

impl UnitSystem {
    /// `ambient` must have the same degree as `group`, contain it, and
    /// normalise it.
    pub fn new(group: Arc<FiniteGroup>, ambient: Arc<FiniteGroup>) -> Result<Self> {
        if group.degree() != ambient.degree() || !group.is_subgroup_of(&ambient) {
            return Err(Error::NotASubgroup);
        }
        let n = group.order();
        let mut units = Vec::new();
        let mut unit_of = vec![None; n];
        for g in 1..n {
            if unit_of[g].is_none() {
                let inv = group.inv(g);
                unit_of[g] = Some(units.len());
                unit_of[inv] = Some(units.len());
                units.push(if inv == g { vec![g] } else { vec![g.min(inv), g.max(inv)] });
            }
        }
        if units.len() > 32 {
            return Err(Error::BoundExceeded { order: units.len(), bound: 32 });
        }
        let in_ambient: Vec<usize> = (0..n)
            .map(|g| ambient.index_of(group.element(g)).ok_or(Error::NotASubgroup))
            .collect::<Result<_>>()?;
        let mut tables = Vec::with_capacity(ambient.order());
        for a in 0..ambient.order() {
            let mut unit_image = Vec::with_capacity(units.len());
            for unit in &units {
                let c = ambient.conj(in_ambient[unit[0]], a);
                let img = group.index_of(ambient.element(c)).ok_or(Error::NotNormal)?;
                unit_image.push(unit_of[img].expect("non-identity element has a unit"));
            }
            let mut t = [[0u32; 256]; 4];
            for (byte, row) in t.iter_mut().enumerate() {
                for (v, slot) in row.iter_mut().enumerate() {
                    *slot = (0..8)
                        .filter(|bit| v >> bit & 1 == 1)
                        .map(|bit| 8 * byte + bit)
                        .filter(|&u| u < units.len())
                        .fold(0, |m, u| m | 1 << unit_image[u]);
                }
            }
            tables.push(t);
        }
        Ok(Self { group, ambient, units, unit_of, tables })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn units(&self) -> &[Vec<usize>] {
        &self.units
    }

    /// Number of masks, `2^units`.
    pub fn subset_count(&self) -> u64 {
        1u64 << self.units.len()
    }

    pub fn mask_of(&self, set: &[usize]) -> Result<u32> {
        let mut mask = 0u32;
        for &s in set {
            match self.unit_of.get(s).copied().flatten() {
                Some(u) => mask |= 1 << u,
                None if s == 0 => return Err(Error::ContainsIdentity),
                None => return Err(Error::UnknownElement(s.to_string())),
            }
        }
        if self.elements(mask).len() != {
            let mut v = set.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len()
        } {
            return Err(Error::NotInverseClosed(self.group.label(set[0])));
        }
        Ok(mask)
    }

    /// Elements of the set described by `mask`, sorted.
    pub fn elements(&self, mask: u32) -> Vec<usize> {
        let mut out: Vec<usize> =
            (0..self.units.len()).filter(|u| mask >> u & 1 == 1).flat_map(|u| self.units[u].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    #[inline]
    pub fn image(&self, a: usize, mask: u32) -> u32 {
        let t = &self.tables[a];
        t[0][(mask & 0xff) as usize]
            | t[1][(mask >> 8 & 0xff) as usize]
            | t[2][(mask >> 16 & 0xff) as usize]
            | t[3][(mask >> 24) as usize]
    }

    /// The least mask in the orbit.
    pub fn canonical(&self, mask: u32) -> u32 {
        (0..self.tables.len()).map(|a| self.image(a, mask)).min().unwrap_or(mask)
    }

    #[inline]
    pub fn is_canonical(&self, mask: u32) -> bool {
        (1..self.tables.len()).all(|a| self.image(a, mask) >= mask)
    }

    pub fn orbit_size(&self, mask: u32) -> u64 {
        let fixed = (0..self.tables.len()).filter(|&a| self.image(a, mask) == mask).count();
        (self.tables.len() / fixed) as u64
    }

    /// Whether the set generates `G`.
    pub fn generates(&self, mask: u32) -> bool {
        let set = self.elements(mask);
        let n = self.group.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &s in &set {
                let w = self.group.mul(s, v);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    /// Least mask of the class, as element labels.
    pub representative: Vec<String>,
    pub orbit_size: u64,
    pub autc_order: usize,
    #[serde(skip)]
    pub mask: u32,
    #[serde(skip)]
    pub elements: Vec<usize>,
}

/// Outcome of the membership check against the nine-element family in
/// `F21 × Z2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    /// Classes met by connected non-CCA subsets of the family.
    pub family_classes: usize,
    /// Every reported class has a conjugate inside the family.
    pub every_class_in_family: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub base: Base,
    pub mode: Mode,
    pub units: usize,
    pub scanned: u64,
    pub connected_count: u64,
    pub connected_classes: u64,
    pub non_cca_classes: Vec<ClassRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyCheck>,
}

impl EnumerationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["representative", "orbit_size", "autc_order"]).expect("in-memory write");
        for c in &self.non_cca_classes {
            w.write_record([c.representative.join(" "), c.orbit_size.to_string(), c.autc_order.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("labels are utf-8")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub mode: Mode,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { mode: Mode::Canonical, jobs: 0 }
    }
}

pub fn unit_system(base: Base) -> Result<UnitSystem> {
    let g = builders::build(&base.group_spec())?;
    let amb = builders::build(&base.ambient_spec())?;
    UnitSystem::new(Arc::new(g), Arc::new(amb))
}

#[derive(Debug, Default)]
struct Tally {
    connected: u64,
    connected_classes: u64,
    orbit_total: u64,
    // canonical mask -> masks seen in the class
    non_cca: BTreeMap<u32, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.connected += other.connected;
        self.connected_classes += other.connected_classes;
        self.orbit_total += other.orbit_total;
        for (k, v) in other.non_cca {
            *self.non_cca.entry(k).or_default() += v;
        }
        self
    }
}

const CHUNK: u64 = 1 << 12;

fn scan(units: &UnitSystem, mode: Mode, lo: u64, hi: u64, outside: u32) -> Result<Tally> {
    let mut t = Tally::default();
    for m in lo..hi {
        let mask = m as u32;
        let canonical = mode == Mode::Full || units.is_canonical(mask);
        if !canonical {
            continue;
        }
        let weight = match mode {
            Mode::Full => 1,
            Mode::Canonical => units.orbit_size(mask),
        };
        t.orbit_total += weight;
        if mask & outside == 0 || !units.generates(mask) {
            continue;
        }
        t.connected += weight;
        let least = match mode {
            Mode::Full => units.canonical(mask),
            Mode::Canonical => mask,
        };
        if least == mask {
            t.connected_classes += 1;
        }
        let graph = cayley(units.group().clone(), &units.elements(mask))?;
        if quick_verdict(&graph)?.0 == Verdict::NonCca {
            *t.non_cca.entry(least).or_default() += weight;
        }
    }
    Ok(t)
}

fn run_in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Scan every inverse-closed subset of `units.group()`.
pub fn enumerate_units(units: &UnitSystem, options: EnumerationOptions) -> Result<EnumerationReport> {
    let total = units.subset_count();
    let squares = squares_subgroup(units.group());
    // A generating set cannot lie inside a proper subgroup, so masks that miss
    // every unit outside the subgroup of squares are rejected up front.
    let outside = if squares.order() < units.group().order() {
        (0..units.unit_count())
            .filter(|&u| !squares.contains(units.group().element(units.units()[u][0])))
            .fold(0u32, |m, u| m | 1 << u)
    } else {
        u32::MAX
    };
    let chunks = total.div_ceil(CHUNK);
    let tally = run_in_pool(options.jobs, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| scan(units, options.mode, c * CHUNK, ((c + 1) * CHUNK).min(total), outside))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    })??;
    if tally.orbit_total != total {
        return Err(Error::Inconsistent(format!("orbit sizes sum to {} of {total} subsets", tally.orbit_total)));
    }
    let mut classes = Vec::with_capacity(tally.non_cca.len());
    for (&mask, &seen) in &tally.non_cca {
        let orbit_size = units.orbit_size(mask);
        if seen != orbit_size {
            return Err(Error::Inconsistent(format!(
                "class of mask {mask:#x} has orbit size {orbit_size} but {seen} non-CCA members"
            )));
        }
        let elements = units.elements(mask);
        let graph = cayley(units.group().clone(), &elements)?;
        let autc = autc_group(&graph)?;
        if autc.verdict != Verdict::NonCca {
            return Err(Error::Inconsistent(format!("mask {mask:#x}: quick and full verdicts differ")));
        }
        classes.push(ClassRecord {
            representative: elements.iter().map(|&e| units.group().label(e)).collect(),
            orbit_size,
            autc_order: autc.full_group.order(),
            mask,
            elements,
        });
    }
    Ok(EnumerationReport {
        base: Base::F21,
        mode: options.mode,
        units: units.unit_count(),
        scanned: total,
        connected_count: tally.connected,
        connected_classes: tally.connected_classes,
        non_cca_classes: classes,
        family: None,
    })
}

/// Connected non-CCA classes among subsets of `family`, and whether every
/// class in `classes` is one of them.
pub fn family_check(units: &UnitSystem, family: &[usize], classes: &[ClassRecord]) -> Result<FamilyCheck> {
    let fam = units.mask_of(family)?;
    let members: Vec<usize> = (0..units.unit_count()).filter(|u| fam >> u & 1 == 1).collect();
    let mut found = BTreeSet::new();
    for bits in 0u32..1 << members.len() {
        let mask = members.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).fold(0u32, |m, (_, &u)| m | 1 << u);
        if !units.generates(mask) {
            continue;
        }
        let graph = cayley(units.group().clone(), &units.elements(mask))?;
        if quick_verdict(&graph)?.0 == Verdict::NonCca {
            found.insert(units.canonical(mask));
        }
    }
    Ok(FamilyCheck {
        family_classes: found.len(),
        every_class_in_family: classes.iter().all(|c| found.contains(&units.canonical(c.mask))),
    })
}

pub fn enumerate_connection_sets(base: Base, options: EnumerationOptions) -> Result<EnumerationReport> {
    let units = unit_system(base)?;
    let mut report = enumerate_units(&units, options)?;
    report.base = base;
    if base == Base::F21xz2 {
        let CanonicalSets { f21xz2, f21xz2_family, .. } = canonical_sets()?;
        if !f21xz2.same_elements(units.group()) {
            return Err(Error::Inconsistent("F21 x Z2 realisations differ".into()));
        }
        report.family = Some(family_check(&units, &f21xz2_family, &report.non_cca_classes)?);
    }
    Ok(report)
}

//! Constructors for the named groups and maps.
//!
//! Every builder returns a [`FiniteGroup`] whose name is the canonical spec
//! string and whose element labels carry structured coordinates:
//!
//! | spec | coordinates |
//! |------|-------------|
//! | `z<n>` | `[k]` for `k` |
//! | `d<n>` | `[e, k]` for `s^e r^k` |
//! | `q8` | `[q]`, `q` indexing `1,-1,i,-i,j,-j,k,-k` |
//! | `e2^<n>` | bit vector |
//! | `q8xz2^<n>` | `[q, bits..]` |
//! | `prod(..)` | factor element indices |
//! | `dih(A)`, `dic(A;y=..)` | `[e, a]` for `a t^e` / `a x^e` |
//! | `sd(N;K;..)` | `[k, n]` for `k n` |
//! | `wreath(G;H@m)` | `[h, g_1, .., g_m]` for `h g_1 .. g_m` |
//! | `f21`, `agl17`, `psl27`, `pgl27` | normalised matrix `[a, b, c, d]` |
//! | `f21xz2`, `agl17xz2` | matrix then `[e]` for the `r` factor |

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{close_generators, ElementLabel, FiniteGroup};
use crate::iso::extend_homomorphism;
use crate::limits;
use crate::perm::Permutation;
use crate::words;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Dihedral group of order `2n` on `n` points.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    ElementaryAbelian2(usize),
    Q8TimesZ2n(usize),
    DirectProduct(Vec<GroupSpec>),
    /// `K ⋉ N` with one automorphism of `N` (as an image list over `N`'s
    /// element indices) per generator of `K`.
    Semidirect { normal: Box<GroupSpec>, acting: Box<GroupSpec>, action: Vec<Vec<usize>> },
    Wreath { base: Box<GroupSpec>, top: Box<GroupSpec>, points: usize },
    GeneralizedDihedral(Box<GroupSpec>),
    GeneralizedDicyclic { base: Box<GroupSpec>, y: String },
    F21,
    Agl17,
    Psl27,
    Pgl27,
    F21xZ2,
    Agl17xZ2,
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupSpec::*;
        match self {
            Cyclic(n) => write!(f, "z{n}"),
            Dihedral(n) => write!(f, "d{n}"),
            Symmetric(n) => write!(f, "s{n}"),
            Alternating(n) => write!(f, "a{n}"),
            Quaternion8 => write!(f, "q8"),
            ElementaryAbelian2(n) => write!(f, "e2^{n}"),
            Q8TimesZ2n(n) => write!(f, "q8xz2^{n}"),
            DirectProduct(fs) => {
                write!(f, "prod(")?;
                for (k, x) in fs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Semidirect { normal, acting, action } => {
                write!(f, "sd({normal};{acting};")?;
                for (k, a) in action.iter().enumerate() {
                    if k > 0 {
                        write!(f, "/")?;
                    }
                    let items: Vec<String> = a.iter().map(|i| i.to_string()).collect();
                    write!(f, "[{}]", items.join(","))?;
                }
                write!(f, ")")
            }
            Wreath { base, top, points } => write!(f, "wreath({base};{top}@{points})"),
            GeneralizedDihedral(a) => write!(f, "dih({a})"),
            GeneralizedDicyclic { base, y } => write!(f, "dic({base};y={y})"),
            F21 => write!(f, "f21"),
            Agl17 => write!(f, "agl17"),
            Psl27 => write!(f, "psl27"),
            Pgl27 => write!(f, "pgl27"),
            F21xZ2 => write!(f, "f21xz2"),
            Agl17xZ2 => write!(f, "agl17xz2"),
        }
    }
}

fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ';' if depth == 0 => {
                out.push(s[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_usize(s: &str, whole: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::InvalidSpec(format!("bad number in `{whole}`")))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use GroupSpec::*;
        let s = s.trim();
        let bad = |why: &str| Error::InvalidSpec(format!("`{s}`: {why}"));
        if let Some(open) = s.find('(') {
            let head = &s[..open];
            let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
            let args = split_args(inner);
            return match head {
                "prod" => Ok(DirectProduct(args.iter().map(|a| a.parse()).collect::<Result<_>>()?)),
                "dih" if args.len() == 1 => Ok(GeneralizedDihedral(Box::new(args[0].parse()?))),
                "dic" if args.len() == 2 => {
                    let y = args[1].strip_prefix("y=").ok_or_else(|| bad("expected `y=<element>`"))?;
                    Ok(GeneralizedDicyclic { base: Box::new(args[0].parse()?), y: y.trim().to_string() })
                }
                "wreath" if args.len() == 2 => {
                    let (top, m) = args[1].rsplit_once('@').ok_or_else(|| bad("expected `<top>@<points>`"))?;
                    Ok(Wreath {
                        base: Box::new(args[0].parse()?),
                        top: Box::new(top.parse()?),
                        points: parse_usize(m, s)?,
                    })
                }
                "sd" if args.len() == 3 => {
                    let mut action = Vec::new();
                    for part in args[2].split('/') {
                        let body = part
                            .trim()
                            .strip_prefix('[')
                            .and_then(|p| p.strip_suffix(']'))
                            .ok_or_else(|| bad("action images must be `[i,j,..]`"))?;
                        action.push(body.split(',').map(|x| parse_usize(x, s)).collect::<Result<Vec<_>>>()?);
                    }
                    Ok(Semidirect { normal: Box::new(args[0].parse()?), acting: Box::new(args[1].parse()?), action })
                }
                _ => Err(bad("unknown constructor or wrong argument count")),
            };
        }
        match s {
            "q8" => return Ok(Quaternion8),
            "f21" => return Ok(F21),
            "agl17" => return Ok(Agl17),
            "psl27" => return Ok(Psl27),
            "pgl27" => return Ok(Pgl27),
            "f21xz2" => return Ok(F21xZ2),
            "agl17xz2" => return Ok(Agl17xZ2),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("q8xz2^") {
            return Ok(Q8TimesZ2n(parse_usize(n, s)?));
        }
        if let Some(n) = s.strip_prefix("e2^").or_else(|| s.strip_prefix("z2^")) {
            return Ok(ElementaryAbelian2(parse_usize(n, s)?));
        }
        let (kind, num) = s.split_at(1.min(s.len()));
        let n = parse_usize(num, s)?;
        match kind {
            "z" => Ok(Cyclic(n)),
            "d" => Ok(Dihedral(n)),
            "s" => Ok(Symmetric(n)),
            "a" => Ok(Alternating(n)),
            _ => Err(bad("unknown group")),
        }
    }
}

/// Builds the group described by `spec`.
pub fn build(spec: &GroupSpec) -> Result<FiniteGroup> {
    use GroupSpec::*;
    let g = match spec {
        Cyclic(n) => cyclic(*n)?,
        Dihedral(n) => dihedral(*n)?,
        Symmetric(n) => symmetric(*n)?,
        Alternating(n) => alternating(*n)?,
        Quaternion8 => quaternion8()?,
        ElementaryAbelian2(n) => elementary_abelian_2(*n)?,
        Q8TimesZ2n(n) => q8_times_z2n(*n)?,
        DirectProduct(fs) => {
            if fs.is_empty() {
                return Err(Error::InvalidSpec("empty direct product".into()));
            }
            let built: Vec<FiniteGroup> = fs.iter().map(build).collect::<Result<_>>()?;
            direct_product(&built)?
        }
        Semidirect { normal, acting, action } => semidirect(&build(normal)?, &build(acting)?, action)?,
        Wreath { base, top, points } => {
            let top = build(top)?;
            if top.degree() > *points {
                return Err(Error::InvalidSpec(format!(
                    "top group has degree {} > {points} points",
                    top.degree()
                )));
            }
            let padded = pad_degree(&top, *points);
            wreath_product(&build(base)?, &padded, *points)?
        }
        GeneralizedDihedral(a) => generalized_dihedral(&build(a)?)?,
        GeneralizedDicyclic { base, y } => generalized_dicyclic(&build(base)?, y)?,
        F21 => projective(ProjectiveKind::F21)?,
        Agl17 => projective(ProjectiveKind::Agl17)?,
        Psl27 => projective(ProjectiveKind::Psl27)?,
        Pgl27 => projective(ProjectiveKind::Pgl27)?,
        F21xZ2 => with_r_factor(ProjectiveKind::F21)?,
        Agl17xZ2 => with_r_factor(ProjectiveKind::Agl17)?,
    };
    Ok(g.with_name(spec.to_string()))
}

/// Parses and builds a spec string.
pub fn build_str(spec: &str) -> Result<FiniteGroup> {
    build(&spec.parse()?)
}

fn pad_degree(g: &FiniteGroup, degree: usize) -> FiniteGroup {
    if g.degree() == degree {
        return g.clone();
    }
    let gens: Vec<Permutation> = g.generator_perms().iter().map(|p| p.embed(0, degree)).collect();
    let mut out = close_generators(&gens, degree, g.order()).expect("padding preserves order");
    if let Some(name) = g.name() {
        out = out.with_name(name);
    }
    out
}

/// Right-regular realisation of an abstractly multiplied group.
/// `elements[0]` must be the identity.
fn regular_group<T: Clone + Eq + Hash>(
    elements: &[T],
    mul: impl Fn(&T, &T) -> T,
    gens: &[T],
    label: impl Fn(&T) -> ElementLabel,
    symbols: &[(&str, T)],
) -> Result<FiniteGroup> {
    let n = elements.len();
    if n > limits::closure_cap() {
        return Err(Error::ClosureExceedsCap { cap: limits::closure_cap() });
    }
    let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let regular = |t: &T| -> Permutation {
        Permutation::from_u32_unchecked(elements.iter().map(|e| index[&mul(e, t)] as u32).collect())
    };
    let perms: Vec<Permutation> = gens.iter().map(&regular).collect();
    let g = close_generators(&perms, n, n)?;
    if g.order() != n {
        return Err(Error::InvalidSpec(format!("generators give order {} instead of {n}", g.order())));
    }
    let labels = g.elements().iter().map(|p| label(&elements[p.apply(0)])).collect();
    let symbols = symbols.iter().map(|(name, t)| (name.to_string(), regular(t))).collect();
    Ok(g.with_labels(labels).with_symbols(symbols))
}

fn power_label(sym: &str, k: usize) -> String {
    match k {
        0 => "1".into(),
        1 => sym.into(),
        _ => format!("{sym}^{k}"),
    }
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidSpec("z0".into()));
    }
    let r = Permutation::from_u32_unchecked((0..n as u32).map(|i| (i + 1) % n as u32).collect());
    let g = close_generators(std::slice::from_ref(&r), n, n)?;
    let labels = g.elements().iter().map(|p| ElementLabel::new(p.apply(0).to_string(), vec![p.apply(0) as u32])).collect();
    Ok(g.with_labels(labels).with_symbols(vec![("g".into(), r)]))
}

fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidSpec(format!("d{n}: dihedral groups need n >= 3")));
    }
    let r = Permutation::from_u32_unchecked((0..n).map(|i| ((i + 1) % n) as u32).collect());
    let s = Permutation::from_u32_unchecked((0..n).map(|i| ((n - i) % n) as u32).collect());
    let g = close_generators(&[r.clone(), s.clone()], n, 2 * n)?;
    let labels = g
        .elements()
        .iter()
        .map(|p| {
            let k = p.apply(0);
            let e = usize::from(p.apply(1) != (k + 1) % n);
            let text = match (e, k) {
                (0, _) => power_label("r", k),
                (_, 0) => "s".into(),
                _ => format!("s*{}", power_label("r", k)),
            };
            ElementLabel::new(text, vec![e as u32, k as u32])
        })
        .collect();
    Ok(g.with_labels(labels).with_symbols(vec![("r".into(), r), ("s".into(), s)]))
}

fn symmetric(n: usize) -> Result<FiniteGroup> {
    let n1 = n.max(1);
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[&[0, 1]])?);
        gens.push(Permutation::from_cycles(n, &[&(0..n).collect::<Vec<_>>()])?);
    }
    close_generators(&gens, n1, limits::closure_cap())
}

fn alternating(n: usize) -> Result<FiniteGroup> {
    let n1 = n.max(1);
    let gens: Vec<Permutation> =
        (2..n).map(|k| Permutation::from_cycles(n, &[&[0, 1, k]])).collect::<Result<_>>()?;
    close_generators(&gens, n1, limits::closure_cap())
}

const Q8_NAMES: [&str; 8] = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];

/// Quaternion product on codes `2u + s` (unit `u` in `1,i,j,k`, sign `s`).
fn q8_mul(a: u8, b: u8) -> u8 {
    let (ua, sa) = (a / 2, a % 2);
    let (ub, sb) = (b / 2, b % 2);
    // unit products: (sign, unit)
    let (s, u) = match (ua, ub) {
        (0, x) | (x, 0) => (0, x),
        (x, y) if x == y => (1, 0),
        (1, 2) => (0, 3),
        (2, 1) => (1, 3),
        (2, 3) => (0, 1),
        (3, 2) => (1, 1),
        (3, 1) => (0, 2),
        (1, 3) => (1, 2),
        _ => unreachable!(),
    };
    2 * u + (s ^ sa ^ sb)
}

fn quaternion8() -> Result<FiniteGroup> {
    let elements: Vec<u8> = (0..8).collect();
    regular_group(
        &elements,
        |a, b| q8_mul(*a, *b),
        &[2, 4],
        |q| ElementLabel::new(Q8_NAMES[*q as usize], vec![*q as u32]),
        &[("i", 2), ("j", 4), ("k", 6)],
    )
}

fn elementary_abelian_2(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Ok(FiniteGroup::trivial(1).with_labels(vec![ElementLabel::new("0", vec![])]));
    }
    let degree = 2 * n;
    let gens: Vec<Permutation> =
        (0..n).map(|i| Permutation::from_cycles(degree, &[&[2 * i, 2 * i + 1]])).collect::<Result<_>>()?;
    let g = close_generators(&gens, degree, 1 << n)?;
    let labels = g
        .elements()
        .iter()
        .map(|p| {
            let bits: Vec<u32> = (0..n).map(|i| u32::from(p.apply(2 * i) != 2 * i)).collect();
            let text = if n == 1 {
                bits[0].to_string()
            } else {
                format!("({})", bits.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
            };
            ElementLabel::new(text, bits)
        })
        .collect();
    let symbols = gens.iter().enumerate().map(|(i, p)| (format!("e{}", i + 1), p.clone())).collect();
    Ok(g.with_labels(labels).with_symbols(symbols))
}

fn q8_times_z2n(n: usize) -> Result<FiniteGroup> {
    let q8 = quaternion8()?;
    if n == 0 {
        return Ok(q8);
    }
    let e = elementary_abelian_2(n)?;
    let g = direct_product(&[q8.clone(), e.clone()])?;
    let labels = (0..g.order())
        .map(|i| {
            let c = g.coords(i).unwrap();
            let q = q8.coords(c[0] as usize).unwrap()[0];
            let bits = e.coords(c[1] as usize).unwrap().to_vec();
            let mut text = Q8_NAMES[q as usize].to_string();
            for b in &bits {
                text.push_str(&format!(",{b}"));
            }
            let mut coords = vec![q];
            coords.extend(bits);
            ElementLabel::new(format!("({text})"), coords)
        })
        .collect();
    Ok(g.with_labels(labels))
}

/// Direct product acting on the disjoint union of the factors' points.
pub fn direct_product(factors: &[FiniteGroup]) -> Result<FiniteGroup> {
    let degree: usize = factors.iter().map(|f| f.degree()).sum();
    let mut offsets = Vec::new();
    let mut gens = Vec::new();
    let mut off = 0;
    for f in factors {
        offsets.push(off);
        gens.extend(f.generator_perms().iter().map(|p| p.embed(off, degree)));
        off += f.degree();
    }
    let expected: usize = factors.iter().map(|f| f.order()).product();
    if expected > limits::closure_cap() {
        return Err(Error::ClosureExceedsCap { cap: limits::closure_cap() });
    }
    let g = close_generators(&gens, degree, expected)?;
    let restrict = |p: &Permutation, k: usize| -> usize {
        let (o, d) = (offsets[k], factors[k].degree());
        let q = Permutation::from_u32_unchecked((0..d).map(|i| (p.apply(o + i) - o) as u32).collect());
        factors[k].index_of(&q).expect("factor element")
    };
    let labels = g
        .elements()
        .iter()
        .map(|p| {
            let idx: Vec<usize> = (0..factors.len()).map(|k| restrict(p, k)).collect();
            let text: Vec<String> = idx.iter().enumerate().map(|(k, &i)| factors[k].label(i)).collect();
            ElementLabel::new(format!("({})", text.join(",")), idx.iter().map(|&i| i as u32).collect())
        })
        .collect();
    let mut symbols = Vec::new();
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for f in factors {
        for (name, _) in f.symbols() {
            *counts.entry(name.as_str()).or_default() += 1;
        }
    }
    for (k, f) in factors.iter().enumerate() {
        for (name, p) in f.symbols() {
            let q = p.embed(offsets[k], degree);
            if counts[name.as_str()] == 1 {
                symbols.push((name.clone(), q.clone()));
            }
            symbols.push((format!("{name}_{}", k + 1), q));
        }
    }
    Ok(g.with_labels(labels).with_symbols(symbols))
}

fn semidirect(normal: &FiniteGroup, acting: &FiniteGroup, action: &[Vec<usize>]) -> Result<FiniteGroup> {
    let n = normal.order();
    if action.len() != acting.generators().len() {
        return Err(Error::InvalidSpec(format!(
            "need one action image list per generator of the acting group ({})",
            acting.generators().len()
        )));
    }
    let mut auts = Vec::new();
    for imgs in action {
        let p = Permutation::from_images(imgs.clone())
            .map_err(|_| Error::InvalidSpec("action image list is not a permutation".into()))?;
        if p.degree() != n || p.apply(0) != 0 {
            return Err(Error::InvalidSpec("action must permute the normal subgroup and fix 1".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if p.apply(normal.mul(a, b)) != normal.mul(p.apply(a), p.apply(b)) {
                    return Err(Error::InvalidSpec("action image is not an automorphism".into()));
                }
            }
        }
        auts.push(p);
    }
    let aut_group = close_generators(&auts, n, limits::closure_cap())?;
    let imgs: Vec<usize> = auts.iter().map(|p| aut_group.index_of(p).unwrap()).collect();
    let hom = extend_homomorphism(acting, acting.generators(), &imgs, |a, b| aut_group.mul(a, b), None)
        .ok_or_else(|| Error::InvalidSpec("action does not define a homomorphism".into()))?;
    let phi = |k: usize, x: usize| aut_group.element(hom[k]).apply(x);
    let elements: Vec<(usize, usize)> = (0..acting.order()).flat_map(|k| (0..n).map(move |x| (k, x))).collect();
    let mut gens: Vec<(usize, usize)> = acting.generators().iter().map(|&k| (k, 0)).collect();
    gens.extend(normal.generators().iter().map(|&x| (0, x)));
    regular_group(
        &elements,
        |&(k, x), &(k2, x2)| (acting.mul(k, k2), normal.mul(phi(k2, x), x2)),
        &gens,
        |&(k, x)| ElementLabel::new(format!("({},{})", acting.label(k), normal.label(x)), vec![k as u32, x as u32]),
        &[],
    )
}

/// `G wr_Ω H = H ⋉ (G_1 × .. × G_m)`, with `g^h` in coordinate `i^h` when
/// `g` is in coordinate `i`. `top` must act on `points` points.
pub fn wreath_product(base: &FiniteGroup, top: &FiniteGroup, points: usize) -> Result<FiniteGroup> {
    if top.degree() != points {
        return Err(Error::InvalidSpec(format!("top group acts on {} points, expected {points}", top.degree())));
    }
    let size = (base.order() as u128).pow(points as u32) * top.order() as u128;
    if size > limits::closure_cap() as u128 {
        return Err(Error::ClosureExceedsCap { cap: limits::closure_cap() });
    }
    let m = points;
    let mut elements: Vec<Vec<usize>> = Vec::with_capacity(size as usize);
    for h in 0..top.order() {
        let mut tuple = vec![0usize; m];
        loop {
            let mut e = vec![h];
            e.extend_from_slice(&tuple);
            elements.push(e);
            let mut k = m;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                tuple[k] += 1;
                if tuple[k] < base.order() {
                    break;
                }
                tuple[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX || m == 0 {
                break;
            }
        }
    }
    let mul = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> {
        let hb = top.element(b[0]);
        let mut moved = vec![0usize; m];
        for i in 0..m {
            moved[hb.apply(i)] = a[1 + i];
        }
        let mut out = vec![top.mul(a[0], b[0])];
        out.extend((0..m).map(|j| base.mul(moved[j], b[1 + j])));
        out
    };
    let mut gens = Vec::new();
    for &h in top.generators() {
        let mut e = vec![h];
        e.extend(std::iter::repeat_n(0, m));
        gens.push(e);
    }
    for i in 0..m {
        for &g in base.generators() {
            let mut e = vec![0; m + 1];
            e[1 + i] = g;
            gens.push(e);
        }
    }
    let label = |e: &Vec<usize>| {
        let coords: Vec<String> = e[1..].iter().map(|&g| base.label(g)).collect();
        ElementLabel::new(
            format!("({};{})", top.label(e[0]), coords.join(",")),
            e.iter().map(|&x| x as u32).collect(),
        )
    };
    let g = regular_group(&elements, mul, &gens, label, &[])?;
    let name = format!(
        "wreath({};{}@{m})",
        base.name().unwrap_or("G"),
        top.name().unwrap_or("H")
    );
    Ok(g.with_name(name))
}

fn require_abelian_exp_gt_2(a: &FiniteGroup, what: &str) -> Result<()> {
    if !a.is_abelian() {
        return Err(Error::InvalidSpec(format!("{what}: base group must be abelian")));
    }
    if a.exponent() <= 2 {
        return Err(Error::InvalidSpec(format!("{what}: base group must have exponent greater than 2")));
    }
    Ok(())
}

fn lift_symbols(a: &FiniteGroup) -> Vec<(String, usize)> {
    a.symbols().iter().filter_map(|(n, p)| a.index_of(p).map(|i| (n.clone(), i))).collect()
}

fn generalized_dihedral(a: &FiniteGroup) -> Result<FiniteGroup> {
    require_abelian_exp_gt_2(a, "generalised dihedral")?;
    let elements: Vec<(u8, usize)> = [0u8, 1].iter().flat_map(|&e| (0..a.order()).map(move |x| (e, x))).collect();
    let mut gens: Vec<(u8, usize)> = a.generators().iter().map(|&x| (0, x)).collect();
    gens.push((1, 0));
    let lifted = lift_symbols(a);
    let mut symbols: Vec<(&str, (u8, usize))> = lifted.iter().map(|(n, i)| (n.as_str(), (0, *i))).collect();
    symbols.push(("t", (1, 0)));
    regular_group(
        &elements,
        |&(e, x), &(f, y)| {
            let y = if e == 1 { a.inv(y) } else { y };
            (e ^ f, a.mul(x, y))
        },
        &gens,
        |&(e, x)| {
            let text = match (e, x) {
                (0, _) => a.label(x),
                (_, 0) => "t".into(),
                _ => format!("{}*t", a.label(x)),
            };
            ElementLabel::new(text, vec![e as u32, x as u32])
        },
        &symbols,
    )
}

fn generalized_dicyclic(a: &FiniteGroup, y: &str) -> Result<FiniteGroup> {
    require_abelian_exp_gt_2(a, "generalised dicyclic")?;
    if !a.order().is_multiple_of(2) {
        return Err(Error::InvalidSpec("generalised dicyclic: base group must have even order".into()));
    }
    let yi = words::resolve(a, y).map_err(|_| Error::InvalidSpec(format!("cannot resolve y = `{y}`")))?;
    if a.element_order(yi) != 2 {
        return Err(Error::InvalidSpec(format!("y = `{y}` is not an involution")));
    }
    let elements: Vec<(u8, usize)> = [0u8, 1].iter().flat_map(|&e| (0..a.order()).map(move |x| (e, x))).collect();
    let mut gens: Vec<(u8, usize)> = a.generators().iter().map(|&x| (0, x)).collect();
    gens.push((1, 0));
    let lifted = lift_symbols(a);
    let mut symbols: Vec<(&str, (u8, usize))> = lifted.iter().map(|(n, i)| (n.as_str(), (0, *i))).collect();
    symbols.push(("x", (1, 0)));
    regular_group(
        &elements,
        |&(e, p), &(f, q)| {
            let q = if e == 1 { a.inv(q) } else { q };
            let mut v = a.mul(p, q);
            if e == 1 && f == 1 {
                v = a.mul(v, yi);
            }
            (e ^ f, v)
        },
        &gens,
        |&(e, p)| {
            let text = match (e, p) {
                (0, _) => a.label(p),
                (_, 0) => "x".into(),
                _ => format!("{}*x", a.label(p)),
            };
            ElementLabel::new(text, vec![e as u32, p as u32])
        },
        &symbols,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ProjectiveKind {
    F21,
    Agl17,
    Psl27,
    Pgl27,
}

const P: u32 = 7;
const INF: u32 = 7;

fn inv_mod(a: u32) -> u32 {
    (1..P).find(|&b| a * b % P == 1).expect("nonzero residue")
}

/// `z -> (az + b)/(cz + d)` on the projective line `{0..6, ∞ = 7}`.
pub(crate) fn mobius(a: u32, b: u32, c: u32, d: u32) -> Permutation {
    let img = |z: u32| -> u32 {
        if z == INF {
            return if c == 0 { INF } else { a * inv_mod(c) % P };
        }
        let num = (a * z + b) % P;
        let den = (c * z + d) % P;
        if den == 0 {
            INF
        } else {
            num * inv_mod(den) % P
        }
    };
    Permutation::from_u32_unchecked((0..=INF).map(img).collect())
}

fn projective_symbols() -> Vec<(String, Permutation)> {
    let x = mobius(1, 1, 0, 1);
    let y = mobius(3, 0, 0, 1);
    let d = y.pow(3).conjugate_by(&x);
    let w = mobius(0, 6, 1, 0);
    vec![("x".into(), x), ("y".into(), y), ("d".into(), d), ("w".into(), w)]
}

/// Normalised matrix for every element of PGL(2,7).
fn matrix_table() -> HashMap<Permutation, [u32; 4]> {
    let mut out = HashMap::new();
    for a in 0..P {
        for b in 0..P {
            for (c, d) in (0..P).map(|d| (0, d)).chain((0..P).map(|d| (1, d))) {
                if c == 0 && d != 1 {
                    continue;
                }
                if (a * d + P * P - b * c).is_multiple_of(P) {
                    continue;
                }
                out.insert(mobius(a, b, c, d), [a, b, c, d]);
            }
        }
    }
    out
}

fn projective_label(m: [u32; 4]) -> String {
    let [a, b, c, _] = m;
    if c == 0 {
        // z -> 3^k z + b, written y^k * x^b
        let k = (0..6).find(|&k| 3u32.pow(k) % P == a).unwrap() as usize;
        match (k, b) {
            (0, 0) => "1".into(),
            (0, _) => power_label("x", b as usize),
            (_, 0) => power_label("y", k),
            _ => format!("{}*{}", power_label("y", k), power_label("x", b as usize)),
        }
    } else {
        format!("[{},{};{},{}]", m[0], m[1], m[2], m[3])
    }
}

fn projective(kind: ProjectiveKind) -> Result<FiniteGroup> {
    let x = mobius(1, 1, 0, 1);
    let y = mobius(3, 0, 0, 1);
    let y2 = mobius(2, 0, 0, 1);
    let w = mobius(0, 6, 1, 0);
    let gens = match kind {
        ProjectiveKind::F21 => vec![x, y2],
        ProjectiveKind::Agl17 => vec![x, y],
        ProjectiveKind::Psl27 => vec![x, y2, w],
        ProjectiveKind::Pgl27 => vec![x, y, w],
    };
    let g = close_generators(&gens, 8, 336)?;
    let table = matrix_table();
    let labels = g
        .elements()
        .iter()
        .map(|p| {
            let m = table[p];
            ElementLabel::new(projective_label(m), m.to_vec())
        })
        .collect();
    Ok(g.with_labels(labels).with_symbols(projective_symbols()))
}

fn with_r_factor(kind: ProjectiveKind) -> Result<FiniteGroup> {
    let base = projective(kind)?;
    let z2 = cyclic(2)?;
    let g = direct_product(&[base.clone(), z2])?;
    let labels = (0..g.order())
        .map(|i| {
            let c = g.coords(i).unwrap();
            let (f, e) = (c[0] as usize, c[1]);
            let fl = base.label(f);
            let text = match (e, fl.as_str()) {
                (0, _) => fl.clone(),
                (_, "1") => "r".into(),
                _ => format!("{fl}*r"),
            };
            let mut coords = base.coords(f).unwrap().to_vec();
            coords.push(e);
            ElementLabel::new(text, coords)
        })
        .collect();
    let mut symbols: Vec<(String, Permutation)> =
        projective_symbols().into_iter().map(|(n, p)| (n, p.embed(0, 10))).collect();
    symbols.push(("r".into(), Permutation::from_cycles(10, &[&[8, 9]])?));
    Ok(g.with_labels(labels).with_symbols(symbols))
}

/// Names of the maps [`named_map`] can realise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapName {
    /// Fixes `A` pointwise and inverts the coset `Ax` of `Dic(A, y)`.
    IotaDicyclic,
    /// Inverts `{±α} × Z_2^n` in `Q8 × Z_2^n` and fixes everything else.
    Sigma(QuaternionUnit),
    Inversion,
    /// `h g_1 g_2 .. g_m -> h tau(g_1) g_2 .. g_m` on a wreath product, for a
    /// permutation `tau` of the base group's element indices.
    TauPrime(Permutation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuaternionUnit {
    I,
    J,
    K,
}

impl fmt::Display for MapName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapName::IotaDicyclic => write!(f, "iota-dicyclic"),
            MapName::Sigma(QuaternionUnit::I) => write!(f, "sigma-i"),
            MapName::Sigma(QuaternionUnit::J) => write!(f, "sigma-j"),
            MapName::Sigma(QuaternionUnit::K) => write!(f, "sigma-k"),
            MapName::Inversion => write!(f, "inversion"),
            MapName::TauPrime(_) => write!(f, "tau-prime"),
        }
    }
}

/// A named map realised as a permutation of a group's element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap {
    pub name: String,
    pub carrier: Permutation,
}

fn spec_of(g: &FiniteGroup) -> Option<GroupSpec> {
    g.name()?.parse().ok()
}

pub fn named_map(g: &FiniteGroup, which: &MapName) -> Result<NamedMap> {
    let incompatible = |reason: &str| Error::IncompatibleGroup { map: which.to_string(), reason: reason.into() };
    let n = g.order();
    let images: Vec<usize> = match which {
        MapName::Inversion => (0..n).map(|i| g.inv(i)).collect(),
        MapName::IotaDicyclic => {
            if !matches!(spec_of(g), Some(GroupSpec::GeneralizedDicyclic { .. })) {
                return Err(incompatible("requires a generalised dicyclic group"));
            }
            (0..n).map(|i| if g.coords(i).unwrap()[0] == 1 { g.inv(i) } else { i }).collect()
        }
        MapName::Sigma(unit) => {
            if !matches!(spec_of(g), Some(GroupSpec::Q8TimesZ2n(_)) | Some(GroupSpec::Quaternion8)) {
                return Err(incompatible("requires Q8 x Z2^n"));
            }
            let codes = match unit {
                QuaternionUnit::I => [2, 3],
                QuaternionUnit::J => [4, 5],
                QuaternionUnit::K => [6, 7],
            };
            (0..n).map(|i| if codes.contains(&g.coords(i).unwrap()[0]) { g.inv(i) } else { i }).collect()
        }
        MapName::TauPrime(tau) => {
            if !matches!(spec_of(g), Some(GroupSpec::Wreath { .. })) && !g.name().is_some_and(|s| s.starts_with("wreath(")) {
                return Err(incompatible("requires a wreath product"));
            }
            let by_coords: HashMap<&[u32], usize> = (0..n).map(|i| (g.coords(i).unwrap(), i)).collect();
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let mut c = g.coords(i).unwrap().to_vec();
                if c.len() < 2 {
                    return Err(incompatible("wreath product over an empty point set"));
                }
                let g1 = c[1] as usize;
                if g1 >= tau.degree() {
                    return Err(incompatible("tau does not act on the base group"));
                }
                c[1] = tau.apply(g1) as u32;
                out.push(*by_coords.get(c.as_slice()).ok_or_else(|| incompatible("tau image out of range"))?);
            }
            out
        }
    };
    let carrier = Permutation::from_images(images)?;
    debug_assert_eq!(carrier.apply(0), 0);
    Ok(NamedMap { name: which.to_string(), carrier })
}

/// Whether the permutation of element indices is a group automorphism.
pub fn is_automorphism(g: &FiniteGroup, p: &Permutation) -> bool {
    g.generators()
        .iter()
        .all(|&s| (0..g.order()).all(|v| p.apply(g.mul(s, v)) == g.mul(p.apply(s), p.apply(v))))
}

/// Small catalogues of specs used by sweeps and property tests.
pub mod catalog {
    use super::GroupSpec;
    use crate::group::prime_divisors;

    fn partitions(k: usize, max: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=k.min(max)).rev() {
            for mut rest in partitions(k - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    /// All abelian groups of the given order, as products of cyclic
    /// prime-power factors.
    pub fn abelian(order: usize) -> Vec<GroupSpec> {
        let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
        for p in prime_divisors(order) {
            let k = (1..).take_while(|&e| order.is_multiple_of(p.pow(e))).count();
            choices.push(partitions(k, k).into_iter().map(|lam| lam.iter().map(|&e| p.pow(e as u32)).collect()).collect());
        }
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for c in choices {
            combos = combos
                .into_iter()
                .flat_map(|pre| {
                    c.iter().map(move |f| {
                        let mut v = pre.clone();
                        v.extend(f);
                        v
                    })
                })
                .collect();
        }
        combos
            .into_iter()
            .map(|mut fs| {
                fs.sort_unstable();
                if fs.is_empty() {
                    GroupSpec::Cyclic(1)
                } else if fs.len() == 1 {
                    GroupSpec::Cyclic(fs[0])
                } else {
                    GroupSpec::DirectProduct(fs.into_iter().map(GroupSpec::Cyclic).collect())
                }
            })
            .collect()
    }

    /// Generalised dicyclic groups `Dic(A, y)` for every abelian `A` of the
    /// given order with exponent > 2 and every involution `y`.
    pub fn dicyclic(base_order: usize) -> Vec<GroupSpec> {
        let mut out = Vec::new();
        for a in abelian(base_order) {
            let Ok(g) = super::build(&a) else { continue };
            if g.exponent() <= 2 || g.order() % 2 != 0 {
                continue;
            }
            for i in 0..g.order() {
                if g.element_order(i) == 2 {
                    out.push(GroupSpec::GeneralizedDicyclic { base: Box::new(a.clone()), y: g.label(i) });
                }
            }
        }
        out
    }

    /// Groups swept when checking the complete-graph classification:
    /// abelian groups, dihedral groups, generalised dicyclic groups over
    /// bases of order 4..12, and `Q8 × Z_2^n`, all of order at most `max`.
    pub fn complete_graph_sweep(max: usize) -> Vec<GroupSpec> {
        let mut out = Vec::new();
        for n in 2..=max {
            out.extend(abelian(n));
        }
        for n in 3..=max / 2 {
            out.push(GroupSpec::Dihedral(n));
        }
        for a in [4, 6, 8, 10, 12] {
            if 2 * a <= max {
                out.extend(dicyclic(a));
            }
        }
        for n in 0..=2 {
            if 8 << n <= max {
                out.push(GroupSpec::Q8TimesZ2n(n));
            }
        }
        out
    }

    /// Assorted small groups (orders up to `max`) for randomised tests.
    pub fn small_groups(max: usize) -> Vec<GroupSpec> {
        let mut out = Vec::new();
        for n in 2..=max {
            out.extend(abelian(n));
        }
        for n in 3..=max / 2 {
            out.push(GroupSpec::Dihedral(n));
        }
        out.push(GroupSpec::Quaternion8);
        if max >= 21 {
            out.push(GroupSpec::F21);
        }
        if max >= 42 {
            out.push(GroupSpec::Agl17);
            out.push(GroupSpec::F21xZ2);
        }
        if max >= 24 {
            out.push(GroupSpec::Symmetric(4));
            out.push(GroupSpec::Q8TimesZ2n(1));
        }
        if max >= 12 {
            out.push(GroupSpec::Alternating(4));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trips_through_text() {
        for s in ["f21", "dic(z4;y=2)", "wreath(z3;z2@2)", "prod(z2;z4)", "dih(z5)", "q8xz2^2", "e2^3", "sd(z3;z2;[0,2,1])"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("foo".parse::<GroupSpec>().is_err());
        assert!("dic(z4)".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn q8_multiplication() {
        // i*j = k, j*i = -k
        assert_eq!(q8_mul(2, 4), 6);
        assert_eq!(q8_mul(4, 2), 7);
        assert_eq!(q8_mul(2, 2), 1);
    }

    #[test]
    fn dihedral_needs_three_points() {
        assert!(matches!(build_str("d2"), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn generalized_dihedral_rejects_exponent_two() {
        let err = build_str("dih(e2^2)").unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(ref m) if m.contains("exponent")));
    }

    #[test]
    fn dicyclic_rejects_non_involution() {
        assert!(build_str("dic(z4;y=1)").is_err());
        assert!(build_str("dic(z3;y=1)").is_err());
    }

    #[test]
    fn projective_labels() {
        let g = build_str("agl17").unwrap();
        let y = words::resolve(&g, "y").unwrap();
        assert_eq!(g.label(y), "y");
        assert_eq!(g.element_order(y), 6);
        let x = words::resolve(&g, "x").unwrap();
        assert_eq!(g.element_order(x), 7);
        // every element of AGL(1,7) is labelled y^k*x^b
        assert!((0..g.order()).all(|i| !g.label(i).starts_with('[')));
    }

    #[test]
    fn semidirect_rejects_non_automorphism() {
        assert!(build_str("sd(z3;z2;[0,1,2])").is_ok());
        assert!(build_str("sd(z4;z2;[0,2,1,3])").is_err());
    }

    #[test]
    fn abelian_catalogue_counts() {
        // number of abelian groups of order 8, 16, 32, 36
        assert_eq!(catalog::abelian(8).len(), 3);
        assert_eq!(catalog::abelian(16).len(), 5);
        assert_eq!(catalog::abelian(32).len(), 7);
        assert_eq!(catalog::abelian(36).len(), 4);
    }
}

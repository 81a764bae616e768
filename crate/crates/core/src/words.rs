//! Resolving element expressions such as `y^2`, `x*y^-2`, `(x*y^2)^-1`
//! or `y^±2*r` against a group's labels and named symbols.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

/// Splits a set literal on top-level commas; surrounding braces are
/// optional.
pub fn split_set(text: &str) -> Vec<String> {
    let t = text.trim();
    let t = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(t);
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in t.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Expands every `±` into both signs.
pub fn expand_pm(item: &str) -> Vec<String> {
    match item.find('±') {
        None => vec![item.to_string()],
        Some(pos) => {
            let (head, tail) = item.split_at(pos);
            let tail = &tail['±'.len_utf8()..];
            let mut out = expand_pm(&format!("{head}{tail}"));
            out.extend(expand_pm(&format!("{head}-{tail}")));
            out
        }
    }
}

/// Resolves a set literal to sorted, deduplicated element indices.
pub fn resolve_set(group: &FiniteGroup, text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in split_set(text) {
        for e in expand_pm(&item) {
            let i = resolve(group, &e)?;
            if !out.contains(&i) {
                out.push(i);
            }
        }
    }
    Ok(out)
}

/// Resolves one element expression to an element index.
pub fn resolve(group: &FiniteGroup, expr: &str) -> Result<usize> {
    let expr = expr.trim();
    if let Some(i) = group.index_of_label(expr) {
        return Ok(i);
    }
    let perm = evaluate(group, expr)?;
    group.index_of(&perm).ok_or_else(|| Error::UnknownElement(expr.to_string()))
}

/// Evaluates an expression to a permutation in the group's representation,
/// which need not lie in the group itself.
pub fn evaluate(group: &FiniteGroup, expr: &str) -> Result<Permutation> {
    let mut p = Parser { group, src: expr.as_bytes(), pos: 0, text: expr };
    let v = p.product()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::UnknownElement(expr.to_string()));
    }
    Ok(v)
}

struct Parser<'a> {
    group: &'a FiniteGroup,
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self) -> Error {
        Error::UnknownElement(self.text.to_string())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<Permutation> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = acc.compose(&rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Permutation> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let braced = self.src.get(self.pos) == Some(&b'{');
            if braced {
                self.pos += 1;
            }
            let start = self.pos;
            if self.src.get(self.pos) == Some(&b'-') {
                self.pos += 1;
            }
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: i64 = self.text[start..self.pos].parse().map_err(|_| self.err())?;
            if braced {
                if self.src.get(self.pos) != Some(&b'}') {
                    return Err(self.err());
                }
                self.pos += 1;
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    /// Cycle notation such as `(0 1 2)(3 4)` or `()`, read as a product of
    /// cycles on the group's points. Returns `None` without consuming input
    /// when the bracket holds anything other than point numbers.
    fn cycle_literal(&mut self) -> Result<Option<Permutation>> {
        let degree = self.group.degree();
        let mut acc: Option<Permutation> = None;
        let mut pos = self.pos;
        while self.src.get(pos) == Some(&b'(') {
            let Some(len) = self.src[pos + 1..].iter().position(|&c| c == b')') else { break };
            let inner = &self.text[pos + 1..pos + 1 + len];
            if !inner.bytes().all(|c| c.is_ascii_digit() || c == b',' || c.is_ascii_whitespace()) {
                break;
            }
            let points = inner
                .split(|c: char| c == ',' || c.is_ascii_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| self.err()))
                .collect::<Result<Vec<_>>>()?;
            let distinct: std::collections::HashSet<_> = points.iter().collect();
            if distinct.len() != points.len() {
                return Err(self.err());
            }
            let cycle = Permutation::from_cycles(degree, &[&points]).map_err(|_| self.err())?;
            acc = Some(match acc {
                None => cycle,
                Some(a) => a.compose(&cycle),
            });
            pos += len + 2;
        }
        if acc.is_some() {
            self.pos = pos;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Permutation> {
        match self.peek() {
            Some(b'(') | Some(b'[') => {
                let open = self.src[self.pos];
                let close = if open == b'(' { b')' } else { b']' };
                let start = self.pos;
                let mut depth = 0;
                let mut end = None;
                for (k, &c) in self.src[start..].iter().enumerate() {
                    if c == open {
                        depth += 1;
                    } else if c == close {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(start + k);
                            break;
                        }
                    }
                }
                let end = end.ok_or_else(|| self.err())?;
                let whole = &self.text[start..=end];
                if let Some(i) = self.group.index_of_label(whole) {
                    self.pos = end + 1;
                    return Ok(self.group.element(i).clone());
                }
                if open == b'[' {
                    return Err(self.err());
                }
                if let Some(p) = self.cycle_literal()? {
                    return Ok(p);
                }
                self.pos = start + 1;
                let inner = self.product()?;
                if self.peek() != Some(b')') {
                    return Err(self.err());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    if c == b'*' || c == b'^' || c == b'(' || c == b')' || c.is_ascii_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                let tok = &self.text[start..self.pos];
                if tok.is_empty() {
                    return Err(self.err());
                }
                if let Some(i) = self.group.index_of_label(tok) {
                    return Ok(self.group.element(i).clone());
                }
                if let Some((_, p)) = self.group.symbols().iter().find(|(n, _)| n == tok) {
                    return Ok(p.clone());
                }
                if tok == "1" || tok == "e" {
                    return Ok(Permutation::identity(self.group.degree()));
                }
                Err(Error::UnknownElement(tok.to_string()))
            }
            None => Err(self.err()),
        }
    }
}

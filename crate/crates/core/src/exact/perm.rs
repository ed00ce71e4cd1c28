use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, …, d-1}` stored as its image list.
///
/// Composition is "apply the right operand first": `a.compose(&b)` maps
/// `i` to `a(b(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection",
                    images
                )));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::new(images.clone()).is_ok());
        Self { images }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            images: (0..d).collect(),
        }
    }

    /// Builds a permutation from 0-based cycles; points not mentioned are fixed.
    pub fn from_cycles(d: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..d).collect();
        let mut used = vec![false; d];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a >= d || used[a] {
                    return Err(Error::InvalidPermutation(format!(
                        "bad cycle entry {}",
                        a + 1
                    )));
                }
                used[a] = true;
                images[a] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(Self { images })
    }

    /// Parses cycle notation with 1-based points, e.g. `(1,4,7)(2,3)` or `(1 2)(3)`.
    /// The degree is `d` if given, otherwise the largest point mentioned.
    pub fn parse_cycles(s: &str, d: Option<usize>) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        if rest.is_empty() || rest == "()" || rest == "id" {
            return Ok(Self::identity(d.unwrap_or(1)));
        }
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let mut cyc = Vec::new();
            for tok in body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
            {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {tok:?}")))?;
                if v == 0 {
                    return Err(Error::Parse("points are 1-based".into()));
                }
                cyc.push(v - 1);
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = open[close + 1..].trim_start();
        }
        let max = cycles.iter().flatten().map(|&x| x + 1).max().unwrap_or(1);
        let d = d.unwrap_or(max);
        if max > d {
            return Err(Error::Parse(format!("point {max} exceeds degree {d}")));
        }
        Self::from_cycles(d, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn compose(&self, b: &Permutation) -> Result<Permutation> {
        if self.degree() != b.degree() {
            return Err(Error::DegreeMismatch(self.degree(), b.degree()));
        }
        Ok(self.compose_unchecked(b))
    }

    pub(crate) fn compose_unchecked(&self, b: &Permutation) -> Permutation {
        Permutation {
            images: b.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `t ∘ self ∘ t⁻¹`.
    pub fn conjugate_by(&self, t: &Permutation) -> Permutation {
        let mut out = vec![0; self.degree()];
        for i in 0..self.degree() {
            out[t.apply(i)] = t.apply(self.apply(i));
        }
        Permutation { images: out }
    }

    /// Cycles (including fixed points), each starting at its smallest point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, num_integer::lcm)
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut out = Permutation::identity(self.degree());
        for _ in 0..k {
            out = self.compose_unchecked(&out);
        }
        out
    }

    /// 1-based cycle notation, non-trivial cycles only; `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                format!(
                    "({})",
                    c.iter()
                        .map(|x| (x + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        if parts.is_empty() {
            "()".into()
        } else {
            parts.concat()
        }
    }

    /// 1-based cycles including fixed points (the JSON form).
    pub fn to_cycles_one_based(&self) -> Vec<Vec<usize>> {
        self.cycles()
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

/// True if the group generated by `gens` acts transitively.
pub fn is_transitive(gens: &[&Permutation]) -> bool {
    let Some(first) = gens.first() else {
        return true;
    };
    let d = first.degree();
    if d == 0 {
        return true;
    }
    let mut seen = vec![false; d];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count == d
}

/// Finds `τ` with `τ r1 τ⁻¹ = r2` and `τ u1 τ⁻¹ = u2`.
///
/// Both pairs must generate transitive groups. Each candidate image of 0 is
/// propagated breadth-first along `r`- and `u`-edges.
pub fn simultaneous_conjugacy(
    r1: &Permutation,
    u1: &Permutation,
    r2: &Permutation,
    u2: &Permutation,
) -> Option<Permutation> {
    let d = r1.degree();
    if u1.degree() != d || r2.degree() != d || u2.degree() != d {
        return None;
    }
    if d == 0 {
        return Some(Permutation::identity(0));
    }
    (0..d).find_map(|j| propagate_conjugator(r1, u1, r2, u2, j))
}

/// The unique conjugator sending 0 to `j`, if the propagation is consistent.
pub(crate) fn propagate_conjugator(
    r1: &Permutation,
    u1: &Permutation,
    r2: &Permutation,
    u2: &Permutation,
    j: usize,
) -> Option<Permutation> {
    let d = r1.degree();
    const UNSET: usize = usize::MAX;
    let mut tau = vec![UNSET; d];
    let mut used = vec![false; d];
    tau[0] = j;
    used[j] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let tx = tau[x];
        for (a, b) in [(r1, r2), (u1, u2)] {
            let (y, ty) = (a.apply(x), b.apply(tx));
            if tau[y] == UNSET {
                if used[ty] {
                    return None;
                }
                tau[y] = ty;
                used[ty] = true;
                queue.push_back(y);
            } else if tau[y] != ty {
                return None;
            }
        }
    }
    if tau.contains(&UNSET) {
        return None;
    }
    let tau = Permutation { images: tau };
    (r1.conjugate_by(&tau) == *r2 && u1.conjugate_by(&tau) == *u2).then_some(tau)
}

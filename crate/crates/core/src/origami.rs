//! Origamis as pairs of permutations `(r, u)`, their strata, canonical forms,
//! the SL₂(ℤ)-action and quotient origamis from block systems.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{is_transitive, simultaneous_conjugacy, Permutation};
use crate::modular::{StLetter, WordST};
use crate::monodromy::aut::{lift_to_aut, Aut2};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origami {
    r: Permutation,
    u: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumData {
    pub genus: usize,
    /// Zero orders, descending; regular points are omitted.
    pub kappa: Vec<usize>,
    /// Cone angles in units of 2π, descending (all vertices).
    pub vertex_cycles: Vec<usize>,
    /// Number of punctures: every vertex is punctured.
    pub punctures: usize,
}

impl fmt::Display for StratumData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k: Vec<String> = self.kappa.iter().map(ToString::to_string).collect();
        write!(f, "H_{}({})", self.genus, k.join(","))
    }
}

/// On-disk form: 1-based cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrigamiJson {
    pub d: usize,
    pub r: Vec<Vec<usize>>,
    pub u: Vec<Vec<usize>>,
}

/// A quotient origami together with the square map `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub origami: Origami,
    pub map: Vec<usize>,
}

impl Origami {
    pub fn new(r: Permutation, u: Permutation) -> Result<Self> {
        if r.degree() != u.degree() {
            return Err(Error::DegreeMismatch(r.degree(), u.degree()));
        }
        if r.degree() == 0 {
            return Err(Error::InvalidInput(
                "an origami needs at least one square".into(),
            ));
        }
        let o = Origami { r, u };
        o.validate()?;
        Ok(o)
    }

    pub(crate) fn new_unchecked(r: Permutation, u: Permutation) -> Self {
        Origami { r, u }
    }

    pub fn torus() -> Self {
        Origami {
            r: Permutation::identity(1),
            u: Permutation::identity(1),
        }
    }

    /// The L-shaped origami with three squares: `r = (1 2)`, `u = (1 3)`.
    pub fn l22() -> Self {
        Self::parse("r=(1,2)(3); u=(1,3)(2)").expect("valid")
    }

    /// The 9-square origami in H₄(2,2,2).
    pub fn qmod9() -> Self {
        Self::parse("r=(1,4,7)(2,3,5,6,8,9); u=(1,6,8,7,3,2)(4,9,5)").expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        if is_transitive(&[&self.r, &self.u]) {
            Ok(())
        } else {
            Err(Error::NotConnected)
        }
    }

    pub fn degree(&self) -> usize {
        self.r.degree()
    }

    pub fn r(&self) -> &Permutation {
        &self.r
    }

    pub fn u(&self) -> &Permutation {
        &self.u
    }

    /// Accepts JSON `{"d":…,"r":[[…]],"u":[[…]]}` or text `r=(1,2)(3); u=(1,3)(2)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            let j: OrigamiJson =
                serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            return Self::from_json(&j);
        }
        let mut r = None;
        let mut u = None;
        let mut d = None;
        for part in t
            .split([';', '\n'])
            .map(str::trim)
            .filter(|p| !p.is_empty())
        {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            match k.trim() {
                "r" => r = Some(v.trim().to_string()),
                "u" => u = Some(v.trim().to_string()),
                "d" => {
                    d = Some(
                        v.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad degree {v:?}")))?,
                    )
                }
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let (r, u) = match (r, u) {
            (Some(r), Some(u)) => (r, u),
            _ => return Err(Error::Parse("both r and u are required".into())),
        };
        let max_point = |c: &str| {
            c.split(|ch: char| !ch.is_ascii_digit())
                .filter_map(|x| x.parse::<usize>().ok())
                .max()
                .unwrap_or(1)
        };
        let d = d.unwrap_or_else(|| max_point(&r).max(max_point(&u)));
        Self::new(
            Permutation::parse_cycles(&r, Some(d))?,
            Permutation::parse_cycles(&u, Some(d))?,
        )
    }

    pub fn from_json(j: &OrigamiJson) -> Result<Self> {
        let conv = |cycles: &[Vec<usize>]| -> Result<Permutation> {
            let zero: Result<Vec<Vec<usize>>> = cycles
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&x| {
                            if x == 0 {
                                Err(Error::Parse("points are 1-based".into()))
                            } else {
                                Ok(x - 1)
                            }
                        })
                        .collect()
                })
                .collect();
            Permutation::from_cycles(j.d, &zero?)
        };
        Self::new(conv(&j.r)?, conv(&j.u)?)
    }

    pub fn to_json(&self) -> OrigamiJson {
        OrigamiJson {
            d: self.degree(),
            r: self.r.to_cycles_one_based(),
            u: self.u.to_cycles_one_based(),
        }
    }

    /// Vertex permutation `c = r u r⁻¹ u⁻¹`.
    pub fn commutator(&self) -> Permutation {
        self.r
            .compose_unchecked(&self.u)
            .compose_unchecked(&self.r.inverse())
            .compose_unchecked(&self.u.inverse())
    }

    pub fn stratum(&self) -> StratumData {
        let ct = self.commutator().cycle_type();
        let n = ct.len();
        let d = self.degree();
        let genus = (d + 2 - n) / 2;
        StratumData {
            genus,
            kappa: ct.iter().filter(|&&l| l > 1).map(|l| l - 1).collect(),
            vertex_cycles: ct,
            punctures: n,
        }
    }

    /// `act(g, O)`: the origami with monodromy `m ∘ σ_g⁻¹`.
    pub fn act_generator(&self, g: StLetter) -> Origami {
        self.act_aut(&Aut2::lift_letter(g.inverse()))
    }

    /// `act(w, O)` for a word, letter by letter from the right.
    pub fn act_word(&self, w: &WordST) -> Origami {
        self.act_aut(&lift_to_aut(&w.inverse()))
    }

    /// The origami whose monodromy is `m ∘ φ`.
    pub fn act_aut(&self, phi: &Aut2) -> Origami {
        let (r, u) = phi.pull_monodromy(&self.r, &self.u);
        Origami { r, u }
    }

    /// Image under `−I`, i.e. rotation by π.
    pub fn rotate_half(&self) -> Origami {
        Origami {
            r: self.r.inverse(),
            u: self.u.inverse(),
        }
    }

    pub fn is_equivalent(&self, o: &Origami) -> bool {
        simultaneous_conjugacy(&self.r, &self.u, &o.r, &o.u).is_some()
    }

    /// Relabeling by `τ`: `(τ r τ⁻¹, τ u τ⁻¹)`.
    pub fn relabel(&self, tau: &Permutation) -> Origami {
        Origami {
            r: self.r.conjugate_by(tau),
            u: self.u.conjugate_by(tau),
        }
    }

    /// Lexicographically least relabeling among the breadth-first labelings from each square.
    pub fn canonical_form(&self) -> Origami {
        let d = self.degree();
        (0..d)
            .map(|s| {
                let mut label = vec![usize::MAX; d];
                label[s] = 0;
                let mut next = 1;
                let mut queue = VecDeque::from([s]);
                while let Some(x) = queue.pop_front() {
                    for p in [&self.r, &self.u] {
                        let y = p.apply(x);
                        if label[y] == usize::MAX {
                            label[y] = next;
                            next += 1;
                            queue.push_back(y);
                        }
                    }
                }
                self.relabel(&Permutation::from_images_unchecked(label))
            })
            .min()
            .expect("at least one square")
    }

    /// Class key modulo `±I`.
    pub fn projective_key(&self) -> Origami {
        let a = self.canonical_form();
        let b = self.rotate_half().canonical_form();
        a.min(b)
    }

    /// Quotients by all non-trivial block systems of `⟨r, u⟩`, coarsest last; the torus is always present.
    pub fn quotient_covers(&self) -> Vec<Quotient> {
        let d = self.degree();
        let mut systems: BTreeSet<Vec<usize>> = BTreeSet::new();
        let minimal: Vec<Vec<usize>> = (1..d).map(|j| self.block_closure(&[(0, j)])).collect();
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        for m in minimal {
            if systems.insert(m.clone()) {
                frontier.push(m);
            }
        }
        // close under joins
        while let Some(a) = frontier.pop() {
            let snapshot: Vec<Vec<usize>> = systems.iter().cloned().collect();
            for b in snapshot {
                let pairs: Vec<(usize, usize)> = block_pairs(&a).chain(block_pairs(&b)).collect();
                let j = self.block_closure(&pairs);
                if systems.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        systems.insert(vec![0; d]);
        let mut out: Vec<Quotient> = systems
            .into_iter()
            .map(|blocks| self.quotient_by(&blocks))
            .collect();
        if d > 1 {
            out.retain(|q| q.origami.degree() < d);
        }
        out.sort_by(|a, b| {
            b.origami
                .degree()
                .cmp(&a.origami.degree())
                .then(a.map.cmp(&b.map))
        });
        out
    }

    /// Finest block system in which each given pair lies in a common block; returned as
    /// block labels numbered by first occurrence.
    fn block_closure(&self, pairs: &[(usize, usize)]) -> Vec<usize> {
        let d = self.degree();
        let mut parent: Vec<usize> = (0..d).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for &(a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
                queue.push_back((a, b));
            }
        }
        while let Some((a, b)) = queue.pop_front() {
            for g in [&self.r, &self.u] {
                let (ga, gb) = (g.apply(a), g.apply(b));
                let (ra, rb) = (find(&mut parent, ga), find(&mut parent, gb));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                    queue.push_back((ga, gb));
                }
            }
        }
        let mut label = vec![usize::MAX; d];
        let mut out = vec![0; d];
        let mut next = 0;
        for (i, o) in out.iter_mut().enumerate() {
            let root = find(&mut parent, i);
            if label[root] == usize::MAX {
                label[root] = next;
                next += 1;
            }
            *o = label[root];
        }
        out
    }

    fn quotient_by(&self, blocks: &[usize]) -> Quotient {
        let b = blocks.iter().max().map_or(0, |m| m + 1);
        let mut r = vec![0; b];
        let mut u = vec![0; b];
        for i in 0..self.degree() {
            r[blocks[i]] = blocks[self.r.apply(i)];
            u[blocks[i]] = blocks[self.u.apply(i)];
        }
        Quotient {
            origami: Origami::new_unchecked(
                Permutation::from_images_unchecked(r),
                Permutation::from_images_unchecked(u),
            ),
            map: blocks.to_vec(),
        }
    }

    /// Permutations commuting with both `r` and `u`.
    pub fn deck_group(&self) -> Vec<Permutation> {
        (0..self.degree())
            .filter_map(|j| {
                crate::exact::perm::propagate_conjugator(&self.r, &self.u, &self.r, &self.u, j)
            })
            .collect()
    }
}

/// Pairs `(i, first point of i's block)` describing a block labeling.
fn block_pairs(labels: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut first = vec![usize::MAX; labels.len()];
    for (i, &l) in labels.iter().enumerate() {
        if first[l] == usize::MAX {
            first[l] = i;
        }
    }
    labels
        .iter()
        .enumerate()
        .map(move |(i, &l)| (i, first[l]))
        .filter(|(i, j)| i != j)
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}; u={}", self.r, self.u)
    }
}

impl Serialize for Origami {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Origami {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = OrigamiJson::deserialize(d)?;
        Origami::from_json(&j).map_err(serde::de::Error::custom)
    }
}

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{AlternatingForm, FreeWord, Letter, MatZ, Permutation};
use crate::origami::Origami;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    X,
    Y,
}

/// The directed edge leaving `square` to the right (`X`) or upwards (`Y`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub square: usize,
    pub kind: EdgeKind,
}

impl Edge {
    /// Position in edge vectors: x-edges first, then y-edges.
    pub fn slot(&self, d: usize) -> usize {
        match self.kind {
            EdgeKind::X => self.square,
            EdgeKind::Y => d + self.square,
        }
    }
}

/// How crossings between x- and y-edges are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionRule {
    /// Push the second cycle off by `(−ε, −ε)`: the x-edge at `r⁻¹(k)` meets the y-edge at `k`,
    /// and the y-edge at `u⁻¹(k)` meets the x-edge at `k`.
    Shifted,
    /// Pair the x- and y-edge of the same square.
    SameSquare,
}

/// Spanning tree of the square graph with the fundamental cycles it determines.
#[derive(Clone, Debug)]
pub struct SpanningTreeData {
    origami: Origami,
    r_inv: Permutation,
    u_inv: Permutation,
    pub tree_edges: Vec<Edge>,
    pub non_tree_edges: Vec<Edge>,
    /// Tree path from square 0 to each square.
    paths: Vec<FreeWord>,
    /// Index of each edge slot among the non-tree edges.
    slot_to_cycle: Vec<Option<usize>>,
}

impl SpanningTreeData {
    pub fn origami(&self) -> &Origami {
        &self.origami
    }

    pub fn degree(&self) -> usize {
        self.origami.degree()
    }

    /// Number of fundamental cycles, `d + 1`.
    pub fn rank(&self) -> usize {
        self.non_tree_edges.len()
    }

    pub fn path(&self, s: usize) -> &FreeWord {
        &self.paths[s]
    }

    pub fn r_inv(&self) -> &Permutation {
        &self.r_inv
    }

    pub fn u_inv(&self) -> &Permutation {
        &self.u_inv
    }

    /// Edge traversal counts of a path starting at `start`; returns the counts and the endpoint.
    pub fn edge_counts(&self, start: usize, w: &FreeWord) -> (Vec<BigInt>, usize) {
        let d = self.degree();
        let (r, u) = (self.origami.r(), self.origami.u());
        let mut counts = vec![BigInt::zero(); 2 * d];
        let mut s = start;
        for l in w.letters() {
            match (l.gen, l.inv) {
                (0, false) => {
                    counts[s] += 1;
                    s = r.apply(s);
                }
                (0, true) => {
                    s = self.r_inv.apply(s);
                    counts[s] -= 1;
                }
                (_, false) => {
                    counts[d + s] += 1;
                    s = u.apply(s);
                }
                (_, true) => {
                    s = self.u_inv.apply(s);
                    counts[d + s] -= 1;
                }
            }
        }
        (counts, s)
    }

    /// Coordinates of a closed edge chain in the fundamental-cycle basis.
    pub fn t_coords(&self, edges: &[BigInt]) -> Vec<BigInt> {
        self.non_tree_edges
            .iter()
            .map(|e| edges[e.slot(self.degree())].clone())
            .collect()
    }

    /// Edge chain of a vector given in the fundamental-cycle basis.
    pub fn edge_vector(&self, t: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        let mut out = vec![BigInt::zero(); 2 * d];
        for (j, c) in t.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (e, _) = self.edge_counts(0, &self.h_word(j));
            for (o, x) in out.iter_mut().zip(e) {
                *o += c * x;
            }
        }
        out
    }

    /// `u_j = (path to tail) · letter · (path to head)⁻¹`.
    pub fn h_word(&self, j: usize) -> FreeWord {
        let e = self.non_tree_edges[j];
        let (letter, head) = match e.kind {
            EdgeKind::X => (Letter::X, self.origami.r().apply(e.square)),
            EdgeKind::Y => (Letter::Y, self.origami.u().apply(e.square)),
        };
        self.paths[e.square]
            .mul(&FreeWord::from_letters([letter]))
            .mul(&self.paths[head].inverse())
    }

    pub fn h_generators(&self) -> Vec<FreeWord> {
        (0..self.rank()).map(|j| self.h_word(j)).collect()
    }

    /// Abelianized class of a loop at square 0 in the fundamental-cycle basis.
    pub fn loop_class(&self, w: &FreeWord) -> Result<Vec<BigInt>> {
        let (counts, end) = self.edge_counts(0, w);
        if end != 0 {
            return Err(Error::PathNotClosed);
        }
        Ok(self.t_coords(&counts))
    }

    pub fn intersection_gram(&self) -> Result<AlternatingForm> {
        self.intersection_gram_with(IntersectionRule::Shifted)
    }

    pub fn intersection_gram_with(&self, rule: IntersectionRule) -> Result<AlternatingForm> {
        let n = self.rank();
        let chains: Vec<Vec<BigInt>> = (0..n)
            .map(|j| {
                let mut t = vec![BigInt::zero(); n];
                t[j] = BigInt::one();
                self.edge_vector(&t)
            })
            .collect();
        let mut g = MatZ::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.pair_chains(&chains[i], &chains[j], rule);
            }
        }
        AlternatingForm::new(g)
    }

    /// Algebraic intersection number of two closed edge chains.
    pub fn pair_chains(&self, a: &[BigInt], b: &[BigInt], rule: IntersectionRule) -> BigInt {
        let d = self.degree();
        let mut s = BigInt::zero();
        for k in 0..d {
            let (xa, ya) = match rule {
                IntersectionRule::Shifted => (&a[self.r_inv.apply(k)], &a[d + self.u_inv.apply(k)]),
                IntersectionRule::SameSquare => (&a[k], &a[d + k]),
            };
            s += xa * &b[d + k] - ya * &b[k];
        }
        s
    }
}

/// Breadth-first spanning tree from square 0, preferring x-edges; non-tree edges are
/// ordered x-edges by square, then y-edges by square.
pub fn graph_and_tree(o: &Origami) -> SpanningTreeData {
    let d = o.degree();
    let (r, u) = (o.r(), o.u());
    let (r_inv, u_inv) = (r.inverse(), u.inverse());
    let mut paths: Vec<Option<FreeWord>> = vec![None; d];
    paths[0] = Some(FreeWord::identity());
    let mut in_tree = vec![false; 2 * d];
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let ps = paths[s].clone().expect("visited");
        let moves = [
            (
                r.apply(s),
                Letter::X,
                Edge {
                    square: s,
                    kind: EdgeKind::X,
                },
            ),
            (
                r_inv.apply(s),
                Letter::XI,
                Edge {
                    square: r_inv.apply(s),
                    kind: EdgeKind::X,
                },
            ),
            (
                u.apply(s),
                Letter::Y,
                Edge {
                    square: s,
                    kind: EdgeKind::Y,
                },
            ),
            (
                u_inv.apply(s),
                Letter::YI,
                Edge {
                    square: u_inv.apply(s),
                    kind: EdgeKind::Y,
                },
            ),
        ];
        for (t, l, e) in moves {
            if paths[t].is_none() {
                let mut p = ps.clone();
                p.push(l);
                paths[t] = Some(p);
                in_tree[e.slot(d)] = true;
                queue.push_back(t);
            }
        }
    }
    let all: Vec<Edge> = (0..d)
        .map(|s| Edge {
            square: s,
            kind: EdgeKind::X,
        })
        .chain((0..d).map(|s| Edge {
            square: s,
            kind: EdgeKind::Y,
        }))
        .collect();
    let tree_edges: Vec<Edge> = all.iter().copied().filter(|e| in_tree[e.slot(d)]).collect();
    let non_tree_edges: Vec<Edge> = all
        .iter()
        .copied()
        .filter(|e| !in_tree[e.slot(d)])
        .collect();
    let mut slot_to_cycle = vec![None; 2 * d];
    for (j, e) in non_tree_edges.iter().enumerate() {
        slot_to_cycle[e.slot(d)] = Some(j);
    }
    SpanningTreeData {
        origami: o.clone(),
        r_inv,
        u_inv,
        tree_edges,
        non_tree_edges,
        paths: paths
            .into_iter()
            .map(|p| p.expect("origami is connected"))
            .collect(),
        slot_to_cycle,
    }
}

impl SpanningTreeData {
    /// Cycle index of a non-tree edge.
    pub fn cycle_of(&self, e: Edge) -> Option<usize> {
        self.slot_to_cycle[e.slot(self.degree())]
    }
}

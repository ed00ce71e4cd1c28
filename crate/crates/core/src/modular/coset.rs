//! HLT coset enumeration over `⟨s, t | s², (st)³⟩`, optionally carrying a
//! homomorphism label on every table entry.
//!
//! With labels, each entry `c --x--> d` stores `ρ(w_c · x · w_d⁻¹)` where `w_c`
//! is the word along which coset `c` was defined. Subgroup generator loops at
//! coset 0 are required to carry `ρ(generator)`, relator loops the identity.
//! Coincidences are merged with a weighted union-find, so the labels stay
//! consistent; a closed loop with the wrong label means the prescribed images
//! do not define a homomorphism.

use std::collections::VecDeque;

use super::mat2::Mat2Z;
use super::word::{StLetter, WordST};
use crate::error::{Error, Result};

pub(crate) const COL_S: usize = 0;
pub(crate) const COL_T: usize = 1;
pub(crate) const COL_TI: usize = 2;
const INV: [usize; 3] = [COL_S, COL_TI, COL_T];
const NONE: usize = usize::MAX;

const RELATORS: [&[usize]; 2] = [&[COL_S, COL_S], &[COL_S, COL_T, COL_S, COL_T, COL_S, COL_T]];

/// Group elements attached to table entries.
pub(crate) trait Label: Clone {
    fn id() -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
    fn same(&self, o: &Self) -> bool;
}

impl Label for () {
    fn id() {}
    fn mul(&self, _: &()) {}
    fn inv(&self) {}
    fn same(&self, _: &()) -> bool {
        true
    }
}

/// Elements of PSL₂(ℤ) (equality up to sign).
impl Label for Mat2Z {
    fn id() -> Self {
        Mat2Z::identity()
    }
    fn mul(&self, o: &Self) -> Self {
        Mat2Z::mul(self, o)
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
    fn same(&self, o: &Self) -> bool {
        self.proj_eq(o)
    }
}

pub(crate) fn word_columns(w: &WordST) -> Vec<usize> {
    w.letters()
        .iter()
        .map(|l| match l {
            StLetter::S | StLetter::SInv => COL_S,
            StLetter::T => COL_T,
            StLetter::TInv => COL_TI,
        })
        .collect()
}

/// A closed, standardized coset table: `table[c][col]` plus entry labels.
pub(crate) struct ClosedTable<L> {
    pub table: Vec<[usize; 3]>,
    pub labels: Vec<[L; 3]>,
}

struct Enumerator<L: Label> {
    table: Vec<[usize; 3]>,
    labels: Vec<[L; 3]>,
    parent: Vec<usize>,
    plabel: Vec<L>,
    queue: VecDeque<usize>,
    live: usize,
    limit: usize,
    hard_cap: usize,
}

impl<L: Label> Enumerator<L> {
    fn new(limit: usize) -> Self {
        let mut e = Enumerator {
            table: Vec::new(),
            labels: Vec::new(),
            parent: Vec::new(),
            plabel: Vec::new(),
            queue: VecDeque::new(),
            live: 0,
            limit,
            hard_cap: limit.saturating_mul(16).saturating_add(1024),
        };
        e.new_coset();
        e
    }

    fn new_coset(&mut self) -> usize {
        let n = self.table.len();
        self.table.push([NONE; 3]);
        self.labels.push([L::id(), L::id(), L::id()]);
        self.parent.push(n);
        self.plabel.push(L::id());
        self.live += 1;
        n
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.live >= self.limit || self.table.len() >= self.hard_cap {
            return Err(Error::EnumerationOverflow { limit: self.limit });
        }
        let d = self.new_coset();
        self.set_entry(c, x, d, L::id())
    }

    fn set_entry(&mut self, c: usize, x: usize, d: usize, l: L) -> Result<()> {
        if x == COL_S && c == d && !l.same(&l.inv()) {
            return Err(Error::RelatorViolation(
                "image of an involution is not an involution".into(),
            ));
        }
        self.table[d][INV[x]] = c;
        self.labels[d][INV[x]] = l.inv();
        self.table[c][x] = d;
        self.labels[c][x] = l;
        Ok(())
    }

    /// Root of `c` and the label `ρ(w_c w_root⁻¹)`, compressing the path.
    fn find(&mut self, c: usize) -> (usize, L) {
        let mut path = Vec::new();
        let mut x = c;
        while self.parent[x] != x {
            path.push(x);
            x = self.parent[x];
        }
        let root = x;
        let mut acc = L::id();
        for &p in path.iter().rev() {
            acc = self.plabel[p].mul(&acc);
            self.parent[p] = root;
            self.plabel[p] = acc.clone();
        }
        let l = if path.is_empty() {
            L::id()
        } else {
            self.plabel[c].clone()
        };
        (root, l)
    }

    /// Records `w_a ≡ w_b` with `ρ(w_a w_b⁻¹) = k`.
    fn merge(&mut self, a: usize, b: usize, k: L) -> Result<()> {
        let (ra, la) = self.find(a);
        let (rb, lb) = self.find(b);
        let kk = la.inv().mul(&k).mul(&lb);
        if ra == rb {
            if !kk.same(&L::id()) {
                return Err(Error::RelatorViolation(
                    "coincidence with inconsistent images".into(),
                ));
            }
            return Ok(());
        }
        let (keep, kill, lab) = if ra < rb {
            (ra, rb, kk.inv())
        } else {
            (rb, ra, kk)
        };
        self.parent[kill] = keep;
        self.plabel[kill] = lab;
        self.live -= 1;
        self.queue.push_back(kill);
        Ok(())
    }

    fn coincidence(&mut self, a: usize, b: usize, k: L) -> Result<()> {
        self.merge(a, b, k)?;
        while let Some(e) = self.queue.pop_front() {
            for (x, &ix) in INV.iter().enumerate() {
                let d = self.table[e][x];
                if d == NONE {
                    continue;
                }
                let lx = self.labels[e][x].clone();
                if self.table[d][ix] == e {
                    self.table[d][ix] = NONE;
                }
                self.table[e][x] = NONE;
                let (e1, le) = self.find(e);
                let (d1, ld) = self.find(d);
                let m = le.inv().mul(&lx).mul(&ld);
                if self.table[e1][x] != NONE {
                    let g = self.table[e1][x];
                    let lg = self.labels[e1][x].clone();
                    self.merge(g, d1, lg.inv().mul(&m))?;
                } else if self.table[d1][ix] != NONE {
                    let h = self.table[d1][ix];
                    let lh = self.labels[d1][ix].clone();
                    self.merge(h, e1, lh.inv().mul(&m.inv()))?;
                } else {
                    self.set_entry(e1, x, d1, m)?;
                }
            }
        }
        Ok(())
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize], target: &L) -> Result<()> {
        let n = w.len();
        let (mut f, mut fl) = (c, L::id());
        let (mut b, mut bl) = (c, L::id());
        let (mut i, mut j) = (0usize, n);
        loop {
            while i < j && self.table[f][w[i]] != NONE {
                fl = fl.mul(&self.labels[f][w[i]]);
                f = self.table[f][w[i]];
                i += 1;
            }
            if i == j {
                let k = fl.inv().mul(target).mul(&bl.inv());
                return self.coincidence(f, b, k);
            }
            while j > i && self.table[b][INV[w[j - 1]]] != NONE {
                let lb = self.labels[b][INV[w[j - 1]]].clone();
                bl = lb.inv().mul(&bl);
                b = self.table[b][INV[w[j - 1]]];
                j -= 1;
            }
            if j == i {
                let k = fl.inv().mul(target).mul(&bl.inv());
                return self.coincidence(f, b, k);
            }
            if j == i + 1 {
                let l = fl.inv().mul(target).mul(&bl.inv());
                return self.set_entry(f, w[i], b, l);
            }
            self.define(f, w[i])?;
        }
    }

    fn run(&mut self, gens: &[(Vec<usize>, L)]) -> Result<()> {
        for (w, target) in gens {
            self.scan_and_fill(0, w, target)?;
        }
        let mut c = 0;
        while c < self.table.len() {
            if self.alive(c) {
                for r in RELATORS {
                    self.scan_and_fill(c, r, &L::id())?;
                    if !self.alive(c) {
                        break;
                    }
                }
                if self.alive(c) {
                    for x in 0..3 {
                        if self.table[c][x] == NONE {
                            self.define(c, x)?;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Renumbers live cosets breadth-first (columns s, t, t⁻¹) and rebases labels on the BFS tree.
    fn standardize(mut self) -> ClosedTable<L> {
        let total = self.table.len();
        let mut newnum = vec![NONE; total];
        let mut order = vec![0usize];
        let mut mu: Vec<L> = vec![L::id()];
        newnum[0] = 0;
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            for x in 0..3 {
                let d = self.table[c][x];
                debug_assert!(d != NONE && self.alive(d));
                if newnum[d] == NONE {
                    newnum[d] = order.len();
                    order.push(d);
                    // μ_d = μ_c · L(c, x), so that tree edges get the identity label
                    mu.push(mu[k].mul(&self.labels[c][x]));
                }
            }
            k += 1;
        }
        let n = order.len();
        let mut table = vec![[NONE; 3]; n];
        let mut labels = vec![[L::id(), L::id(), L::id()]; n];
        for (i, &c) in order.iter().enumerate() {
            for x in 0..3 {
                let d = self.table[c][x];
                let j = newnum[d];
                table[i][x] = j;
                labels[i][x] = mu[i].mul(&self.labels[c][x]).mul(&mu[j].inv());
            }
        }
        self.table.clear();
        ClosedTable { table, labels }
    }
}

/// Plain coset enumeration for the subgroup generated by `gens`.
pub(crate) fn enumerate(gens: &[WordST], max_cosets: usize) -> Result<ClosedTable<()>> {
    let cols: Vec<(Vec<usize>, ())> = gens.iter().map(|w| (word_columns(w), ())).collect();
    let mut e = Enumerator::<()>::new(max_cosets);
    e.run(&cols)?;
    Ok(e.standardize())
}

/// Coset enumeration carrying the projective homomorphism `gens[i] ↦ images[i]`.
pub(crate) fn enumerate_labeled(
    gens: &[WordST],
    images: &[Mat2Z],
    max_cosets: usize,
) -> Result<ClosedTable<Mat2Z>> {
    assert_eq!(gens.len(), images.len());
    let cols: Vec<(Vec<usize>, Mat2Z)> = gens
        .iter()
        .zip(images)
        .map(|(w, m)| (word_columns(w), m.clone()))
        .collect();
    let mut e = Enumerator::<Mat2Z>::new(max_cosets);
    e.run(&cols)?;
    Ok(e.standardize())
}

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::coset::{self, ClosedTable, COL_S, COL_T, COL_TI};
use super::mat2::{Cusp, Mat2Z};
use super::word::{StLetter, WordST};
use crate::error::{Error, Result};
use crate::exact::Permutation;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// A Schreier generator `w_c · x · w_d⁻¹` for a non-tree edge `c --x--> d`, `x ∈ {S, T}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierGen {
    pub coset: usize,
    pub letter: char,
    pub word: WordST,
    pub matrix: Mat2Z,
}

/// A cusp class of a subgroup: one σ_T-orbit on cosets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspClass {
    pub coset: usize,
    pub rep_word: WordST,
    pub width: usize,
    pub point: Cusp,
    /// `g T^w g⁻¹` for `g` the representative word.
    pub parabolic: Mat2Z,
}

/// Signed occurrence of a Schreier generator in a rewritten word.
pub type Syllable = (usize, i8);

/// A finite-index subgroup of PSL₂(ℤ) given by its coset table under `S`, `T`.
///
/// Cosets are right cosets `Γw`, acted on by right multiplication; coset 0 is `Γ`.
#[derive(Clone, Debug)]
pub struct ModularSubgroup {
    sigma_s: Permutation,
    sigma_t: Permutation,
    coset_words: Vec<WordST>,
    schreier: Vec<SchreierGen>,
    /// `edge_gen[c] = [gen for (c, S), gen for (c, T)]`, stored with the orientation of the generator.
    edge_gen: Vec<[Option<(usize, i8)>; 2]>,
    supplied: Vec<WordST>,
}

impl PartialEq for ModularSubgroup {
    fn eq(&self, o: &Self) -> bool {
        self.sigma_s == o.sigma_s && self.sigma_t == o.sigma_t
    }
}
impl Eq for ModularSubgroup {}

impl ModularSubgroup {
    /// Builds the subgroup from a coset table (any numbering; coset 0 is the subgroup),
    /// standardizing the numbering breadth-first over the columns `S, T, T⁻¹`.
    pub fn from_table(sigma_s: &Permutation, sigma_t: &Permutation) -> Result<Self> {
        let n = sigma_s.degree();
        if sigma_t.degree() != n || n == 0 {
            return Err(Error::InvalidInput("coset table degrees differ".into()));
        }
        if !sigma_s.compose_unchecked(sigma_s).is_identity() {
            return Err(Error::RelatorViolation("sigma_S^2 != id".into()));
        }
        let st = sigma_t.compose_unchecked(sigma_s);
        if !st.pow(3).is_identity() {
            return Err(Error::RelatorViolation("(sigma_S sigma_T)^3 != id".into()));
        }
        let ti = sigma_t.inverse();
        let step = |c: usize, x: usize| match x {
            COL_S => sigma_s.apply(c),
            COL_T => sigma_t.apply(c),
            _ => ti.apply(c),
        };
        const NONE: usize = usize::MAX;
        let mut newnum = vec![NONE; n];
        let mut order = vec![0usize];
        newnum[0] = 0;
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            for x in [COL_S, COL_T, COL_TI] {
                let d = step(c, x);
                if newnum[d] == NONE {
                    newnum[d] = order.len();
                    order.push(d);
                }
            }
            k += 1;
        }
        if order.len() != n {
            return Err(Error::InvalidInput("coset table is not transitive".into()));
        }
        let s_img: Vec<usize> = order.iter().map(|&c| newnum[sigma_s.apply(c)]).collect();
        let t_img: Vec<usize> = order.iter().map(|&c| newnum[sigma_t.apply(c)]).collect();
        let sigma_s = Permutation::new(s_img)?;
        let sigma_t = Permutation::new(t_img)?;
        Ok(Self::build(sigma_s, sigma_t, Vec::new()))
    }

    /// Assumes a standardized table.
    fn build(sigma_s: Permutation, sigma_t: Permutation, supplied: Vec<WordST>) -> Self {
        let n = sigma_s.degree();
        let ti = sigma_t.inverse();
        let mut words: Vec<Option<WordST>> = vec![None; n];
        words[0] = Some(WordST::identity());
        // tree[c][col] for columns S, T, T⁻¹
        let mut tree = vec![[false; 3]; n];
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for (x, letter) in [
                (COL_S, StLetter::S),
                (COL_T, StLetter::T),
                (COL_TI, StLetter::TInv),
            ] {
                let d = match x {
                    COL_S => sigma_s.apply(c),
                    COL_T => sigma_t.apply(c),
                    _ => ti.apply(c),
                };
                if words[d].is_none() {
                    let mut w = words[c].clone().unwrap();
                    w.push(letter);
                    words[d] = Some(w);
                    tree[c][x] = true;
                    let back = match x {
                        COL_S => COL_S,
                        COL_T => COL_TI,
                        _ => COL_T,
                    };
                    tree[d][back] = true;
                    queue.push_back(d);
                }
            }
        }
        let coset_words: Vec<WordST> = words.into_iter().map(Option::unwrap).collect();
        let mut schreier = Vec::new();
        let mut edge_gen = vec![[None, None]; n];
        for c in 0..n {
            let d = sigma_s.apply(c);
            if !tree[c][COL_S] && c <= d {
                let word = coset_words[c]
                    .mul(&WordST::s())
                    .mul(&coset_words[d].inverse());
                let idx = schreier.len();
                schreier.push(SchreierGen {
                    coset: c,
                    letter: 'S',
                    matrix: word.to_matrix(),
                    word,
                });
                edge_gen[c][0] = Some((idx, 1));
                if d != c {
                    edge_gen[d][0] = Some((idx, -1));
                }
            }
            let d = sigma_t.apply(c);
            if !tree[c][COL_T] {
                let word = coset_words[c]
                    .mul(&WordST::t())
                    .mul(&coset_words[d].inverse());
                let idx = schreier.len();
                schreier.push(SchreierGen {
                    coset: c,
                    letter: 'T',
                    matrix: word.to_matrix(),
                    word,
                });
                edge_gen[c][1] = Some((idx, 1));
            }
        }
        ModularSubgroup {
            sigma_s,
            sigma_t,
            coset_words,
            schreier,
            edge_gen,
            supplied,
        }
    }

    pub fn full() -> Self {
        Self::build(
            Permutation::identity(1),
            Permutation::identity(1),
            Vec::new(),
        )
    }

    pub fn index(&self) -> usize {
        self.sigma_s.degree()
    }

    pub fn sigma_s(&self) -> &Permutation {
        &self.sigma_s
    }

    pub fn sigma_t(&self) -> &Permutation {
        &self.sigma_t
    }

    pub fn coset_words(&self) -> &[WordST] {
        &self.coset_words
    }

    pub fn schreier_gens(&self) -> &[SchreierGen] {
        &self.schreier
    }

    pub fn supplied_gens(&self) -> &[WordST] {
        &self.supplied
    }

    pub(crate) fn with_supplied(mut self, gens: Vec<WordST>) -> Self {
        self.supplied = gens;
        self
    }

    /// Coset reached from `c` by the letter.
    pub fn act_letter(&self, c: usize, l: StLetter) -> usize {
        match l {
            StLetter::S | StLetter::SInv => self.sigma_s.apply(c),
            StLetter::T => self.sigma_t.apply(c),
            StLetter::TInv => self.sigma_t.inverse().apply(c),
        }
    }

    /// Coset `Γ · w` (traced from coset 0).
    pub fn coset_of_word(&self, w: &WordST) -> usize {
        let ti = self.sigma_t.inverse();
        w.letters().iter().fold(0, |c, l| match l {
            StLetter::S | StLetter::SInv => self.sigma_s.apply(c),
            StLetter::T => self.sigma_t.apply(c),
            StLetter::TInv => ti.apply(c),
        })
    }

    pub fn coset_of(&self, m: &Mat2Z) -> usize {
        self.coset_of_word(&WordST::from_matrix(m))
    }

    pub fn contains(&self, m: &Mat2Z) -> bool {
        self.coset_of(m) == 0
    }

    pub fn contains_word(&self, w: &WordST) -> bool {
        self.coset_of_word(w) == 0
    }

    /// Reidemeister–Schreier rewriting of a word starting at coset `start`.
    /// Returns the syllables and the coset where the trace ends.
    pub fn rewrite_from(&self, start: usize, w: &WordST) -> (Vec<Syllable>, usize) {
        let ti = self.sigma_t.inverse();
        let mut c = start;
        let mut out = Vec::new();
        for l in w.letters() {
            match l {
                StLetter::S | StLetter::SInv => {
                    if let Some(g) = self.edge_gen[c][0] {
                        out.push(g);
                    }
                    c = self.sigma_s.apply(c);
                }
                StLetter::T => {
                    if let Some((g, _)) = self.edge_gen[c][1] {
                        out.push((g, 1));
                    }
                    c = self.sigma_t.apply(c);
                }
                StLetter::TInv => {
                    let d = ti.apply(c);
                    if let Some((g, _)) = self.edge_gen[d][1] {
                        out.push((g, -1));
                    }
                    c = d;
                }
            }
        }
        (out, c)
    }

    pub fn rewrite_word(&self, w: &WordST) -> Result<Vec<Syllable>> {
        let (syl, end) = self.rewrite_from(0, w);
        if end != 0 {
            return Err(Error::NotAMember);
        }
        Ok(syl)
    }

    /// Rewrites `m` in the Schreier generators; also returns the sign `ε` with
    /// `∏ gens = ε · m` in SL₂(ℤ).
    pub fn rewrite_in_schreier(&self, m: &Mat2Z) -> Result<(Vec<Syllable>, i8)> {
        let key = m.projective_key();
        for (i, g) in self.schreier.iter().enumerate() {
            if g.matrix.projective_key() == key {
                return Ok((vec![(i, 1)], if &g.matrix == m { 1 } else { -1 }));
            }
        }
        let syl = self.rewrite_word(&WordST::from_matrix(m))?;
        let prod = self.evaluate(&syl, |i| self.schreier[i].matrix.clone());
        let sign = if &prod == m { 1 } else { -1 };
        debug_assert!(prod.proj_eq(m));
        Ok((syl, sign))
    }

    /// Multiplies images along a rewritten word.
    pub fn evaluate(&self, syl: &[Syllable], image: impl Fn(usize) -> Mat2Z) -> Mat2Z {
        syl.iter().fold(Mat2Z::identity(), |acc, &(g, e)| {
            let m = image(g);
            acc.mul(&if e > 0 { m } else { m.inverse() })
        })
    }

    /// The relators `s²` and `(st)³` traced at every coset, rewritten in the Schreier generators.
    pub fn schreier_relators(&self) -> Vec<Vec<Syllable>> {
        let s2 = WordST::from_letters([StLetter::S, StLetter::S]);
        let st3 = WordST::from_letters([
            StLetter::S,
            StLetter::T,
            StLetter::S,
            StLetter::T,
            StLetter::S,
            StLetter::T,
        ]);
        let mut out = Vec::new();
        for c in 0..self.index() {
            for r in [&s2, &st3] {
                let (syl, end) = self.rewrite_from(c, r);
                debug_assert_eq!(end, c);
                if !syl.is_empty() {
                    out.push(syl);
                }
            }
        }
        out
    }

    /// One class per σ_T-orbit, represented by its smallest coset.
    pub fn cusps(&self) -> Vec<CuspClass> {
        self.sigma_t
            .cycles()
            .into_iter()
            .map(|cyc| {
                let c = cyc[0];
                let g = self.coset_words[c].clone();
                let gm = g.to_matrix();
                let w = cyc.len();
                let parabolic = gm.mul(&Mat2Z::t_pow(w as i64)).mul(&gm.inverse());
                CuspClass {
                    coset: c,
                    point: gm.act(&Cusp::infinity()),
                    rep_word: g,
                    width: w,
                    parabolic,
                }
            })
            .collect()
    }

    /// Index of the cusp class (position in [`Self::cusps`]) containing `g·∞`.
    pub fn cusp_index_of(&self, g: &Mat2Z) -> usize {
        let c = self.coset_of(g);
        let cycles = self.sigma_t.cycles();
        cycles
            .iter()
            .position(|cyc| cyc.contains(&c))
            .expect("σ_T-orbits cover all cosets")
    }

    /// Γ₁ ∩ Γ₂ from the diagonal action on pairs of cosets.
    pub fn intersect(&self, other: &ModularSubgroup) -> Result<ModularSubgroup> {
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(0usize, 0usize)];
        ids.insert((0, 0), 0);
        let mut s_img = Vec::new();
        let mut t_img = Vec::new();
        let mut k = 0;
        while k < pairs.len() {
            let (a, b) = pairs[k];
            for (img, pa, pb) in [
                (&mut s_img, self.sigma_s.apply(a), other.sigma_s.apply(b)),
                (&mut t_img, self.sigma_t.apply(a), other.sigma_t.apply(b)),
            ] {
                let id = *ids.entry((pa, pb)).or_insert_with(|| {
                    pairs.push((pa, pb));
                    pairs.len() - 1
                });
                img.push(id);
            }
            k += 1;
        }
        ModularSubgroup::from_table(&Permutation::new(s_img)?, &Permutation::new(t_img)?)
    }

    pub fn is_subgroup_of(&self, other: &ModularSubgroup) -> bool {
        self.schreier.iter().all(|g| other.contains(&g.matrix))
    }

    pub fn to_json(&self) -> SubgroupJson {
        SubgroupJson {
            index: self.index(),
            sigma_s: self.sigma_s.to_one_based(),
            sigma_t: self.sigma_t.to_one_based(),
            generators: self.schreier.iter().map(|g| g.word.clone()).collect(),
            cusps: self
                .cusps()
                .into_iter()
                .map(|c| CuspJson {
                    width: c.width,
                    rep_word: c.rep_word,
                })
                .collect(),
        }
    }
}

/// Serialized form of a [`ModularSubgroup`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub index: usize,
    #[serde(rename = "sigma_S")]
    pub sigma_s: Vec<usize>,
    #[serde(rename = "sigma_T")]
    pub sigma_t: Vec<usize>,
    pub generators: Vec<WordST>,
    pub cusps: Vec<CuspJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspJson {
    pub width: usize,
    pub rep_word: WordST,
}

fn from_closed<L>(t: &ClosedTable<L>) -> (Permutation, Permutation) {
    let s = t.table.iter().map(|r| r[COL_S]).collect();
    let tt = t.table.iter().map(|r| r[COL_T]).collect();
    (
        Permutation::from_images_unchecked(s),
        Permutation::from_images_unchecked(tt),
    )
}

/// Todd–Coxeter enumeration of the subgroup generated (projectively) by `gens`.
pub fn coset_enumerate(gens: &[WordST], max_cosets: usize) -> Result<ModularSubgroup> {
    if gens.is_empty() {
        return Err(Error::InvalidInput(
            "at least one generator is required".into(),
        ));
    }
    let closed = coset::enumerate(gens, max_cosets)?;
    let (s, t) = from_closed(&closed);
    Ok(ModularSubgroup::build(s, t, gens.to_vec()))
}

/// Enumerates the subgroup generated by `gens` while transporting the projective
/// homomorphism `gens[i] ↦ images[i]`; returns the subgroup and the image of each
/// of its Schreier generators.
pub fn coset_enumerate_with_images(
    gens: &[WordST],
    images: &[Mat2Z],
    max_cosets: usize,
) -> Result<(ModularSubgroup, Vec<Mat2Z>)> {
    if gens.is_empty() || gens.len() != images.len() {
        return Err(Error::InvalidInput("need one image per generator".into()));
    }
    let closed = coset::enumerate_labeled(gens, images, max_cosets)?;
    let (s, t) = from_closed(&closed);
    let g = ModularSubgroup::build(s, t, gens.to_vec());
    let imgs = g
        .schreier
        .iter()
        .map(|sg| {
            let col = if sg.letter == 'S' { COL_S } else { COL_T };
            closed.labels[sg.coset][col].clone()
        })
        .collect();
    Ok((g, imgs))
}

/// Stabilizer of point 0 for the action of `Γ = ⟨gens⟩` in which `gens[i]` acts on the
/// right by `perms[i]`. The index over `Γ` must come out as the number of points, which
/// rejects assignments that are not actions.
pub fn stabilizer_of_action(
    gens: &[WordST],
    perms: &[Permutation],
    max_cosets: usize,
) -> Result<ModularSubgroup> {
    if gens.is_empty() || gens.len() != perms.len() {
        return Err(Error::InvalidInput(
            "need one permutation per generator".into(),
        ));
    }
    let n = perms[0].degree();
    if perms.iter().any(|p| p.degree() != n) {
        return Err(Error::InvalidInput(
            "permutations of different degrees".into(),
        ));
    }
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let mut words: Vec<Option<WordST>> = vec![None; n];
    words[0] = Some(WordST::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        let wp = words[p].clone().expect("visited");
        for (i, g) in gens.iter().enumerate() {
            for (q, step) in [
                (perms[i].apply(p), g.clone()),
                (inverses[i].apply(p), g.inverse()),
            ] {
                if words[q].is_none() {
                    words[q] = Some(wp.mul(&step));
                    queue.push_back(q);
                }
            }
        }
    }
    let words: Vec<WordST> = words
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("the action is not transitive".into()))?;
    let mut stab: Vec<WordST> = Vec::new();
    for (p, wp) in words.iter().enumerate() {
        for (i, g) in gens.iter().enumerate() {
            let w = wp.mul(g).mul(&words[perms[i].apply(p)].inverse());
            if !w.is_empty() {
                stab.push(w);
            }
        }
    }
    stab.sort();
    stab.dedup();
    let whole = coset_enumerate(gens, max_cosets)?;
    if stab.is_empty() {
        return Ok(whole);
    }
    let sub = coset_enumerate(&stab, max_cosets)?;
    if sub.index() != n * whole.index() || !sub.is_subgroup_of(&whole) {
        return Err(Error::InvalidInput(
            "the permutations do not define an action of the group".into(),
        ));
    }
    Ok(sub)
}

//! From an origami to the integral symplectic action of its Veech group on
//! the homology of the closed surface.
//!
//! Pipeline per Veech element `w`: lift to `Aut(F₂)`, correct by an inner
//! automorphism so that the subgroup `H = π₁(O*)` is preserved, read off the
//! action on the fundamental cycles of a spanning tree, then pass to the
//! symplectic basis of `H₁(O)` and drop the puncture classes.

pub mod aut;
pub mod tree;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::matrix::inverse_z;
use crate::exact::{
    symplectic_reduce, AlternatingForm, FreeWord, MatZ, Permutation, SymplecticBasis,
};
use crate::exec::Exec;
use crate::modular::{Mat2Z, StLetter, WordST};
use crate::origami::Origami;
use crate::veech::VeechGroup;

pub use aut::{lift_to_aut, Aut2};
pub use tree::{graph_and_tree, Edge, EdgeKind, IntersectionRule, SpanningTreeData};

/// Composes `a` with the conjugation by a tree path so that every generator of `H`
/// is mapped into `H`.
pub fn stabilize_h(a: &Aut2, t: &SpanningTreeData) -> Result<Aut2> {
    let o = t.origami();
    let (r, u) = (o.r(), o.u());
    let images: Vec<FreeWord> = t.h_generators().iter().map(|g| a.apply(g)).collect();
    for s in 0..t.degree() {
        if images
            .iter()
            .all(|w| w.trace(s, r, u, t.r_inv(), t.u_inv()) == s)
        {
            return Ok(Aut2::conjugation(t.path(s)).compose(a));
        }
    }
    Err(Error::NotInVeechGroup)
}

/// Matrix of `a` on `H_ab` in the fundamental-cycle basis (columns are images).
pub fn rewrite_action(a: &Aut2, t: &SpanningTreeData) -> Result<MatZ> {
    let cols: Result<Vec<Vec<BigInt>>> = t
        .h_generators()
        .iter()
        .map(|g| t.loop_class(&a.apply(g)))
        .collect();
    Ok(MatZ::from_cols(t.rank(), &cols?))
}

/// Inverse transpose: the action on cohomology.
pub fn dualize(m: &MatZ) -> Result<MatZ> {
    inverse_z(m)
        .map(|i| i.transpose())
        .ok_or(Error::NonUnimodular)
}

#[derive(Clone, Debug, Serialize)]
pub struct RepGenerator {
    pub word: WordST,
    pub matrix: MatZ,
}

/// The action of a Veech group on `H₁` of the closed surface in a symplectic basis.
#[derive(Clone, Debug)]
pub struct SymplecticRep {
    pub genus: usize,
    /// Symplectic and radical basis, in fundamental-cycle coordinates.
    pub basis: SymplecticBasis,
    pub radical_dim: usize,
    pub generators: Vec<RepGenerator>,
    tree: SpanningTreeData,
    form: AlternatingForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticRepJson {
    pub genus: usize,
    pub generators: Vec<RepGenerator>,
    pub radical_dim: usize,
}

impl SymplecticRep {
    pub fn tree(&self) -> &SpanningTreeData {
        &self.tree
    }

    pub fn origami(&self) -> &Origami {
        self.tree.origami()
    }

    /// Intersection form on the fundamental cycles.
    pub fn cycle_form(&self) -> &AlternatingForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    /// Coordinates in the symplectic basis of the image in `H₁(O)` of a class given in
    /// fundamental-cycle coordinates.
    pub fn project(&self, t: &[BigInt]) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.dim());
        for pair in self.basis.symplectic.chunks(2) {
            let (e, f) = (&pair[0], &pair[1]);
            out.push(self.form.pair(t, f));
            out.push(-self.form.pair(t, e));
        }
        out
    }

    /// A representative in fundamental-cycle coordinates.
    pub fn lift(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.tree.rank()];
        for (c, b) in v.iter().zip(&self.basis.symplectic) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Class of a closed edge chain.
    pub fn chain_class(&self, edges: &[BigInt]) -> Vec<BigInt> {
        self.project(&self.tree.t_coords(edges))
    }

    /// Action on the fundamental cycles of an element that stabilizes the origami exactly.
    pub fn t_action(&self, w: &WordST) -> Result<MatZ> {
        let a = stabilize_h(&lift_to_aut(w), &self.tree)?;
        rewrite_action(&a, &self.tree)
    }

    fn reduce(&self, t_matrix: &MatZ) -> MatZ {
        let cols: Vec<Vec<BigInt>> = self
            .basis
            .symplectic
            .iter()
            .map(|b| self.project(&t_matrix.mul_vec(b)))
            .collect();
        MatZ::from_cols(self.dim(), &cols)
    }

    /// Action on `H₁(O)` of an element of the Veech group. Elements that only fix the
    /// origami up to `−I` are replaced by `S² w`.
    pub fn action(&self, w: &WordST) -> Result<MatZ> {
        match self.t_action(w) {
            Ok(m) => Ok(self.reduce(&m)),
            Err(Error::NotInVeechGroup) => {
                let w2 = WordST::from_letters([StLetter::S, StLetter::S]).mul(w);
                Ok(self.reduce(&self.t_action(&w2)?))
            }
            Err(e) => Err(e),
        }
    }

    /// Action on `H₁(O)` of a permutation of squares commuting with `r` and `u`.
    pub fn deck_action(&self, tau: &Permutation) -> MatZ {
        let d = self.tree.degree();
        let cols: Vec<Vec<BigInt>> = self
            .basis
            .symplectic
            .iter()
            .map(|b| {
                let e = self.tree.edge_vector(b);
                let mut moved = vec![BigInt::zero(); 2 * d];
                for s in 0..d {
                    moved[tau.apply(s)] = e[s].clone();
                    moved[d + tau.apply(s)] = e[d + s].clone();
                }
                self.chain_class(&moved)
            })
            .collect();
        MatZ::from_cols(self.dim(), &cols)
    }

    /// Classes of the sums of all horizontal and of all vertical edges.
    pub fn tautological_plane(&self) -> [Vec<BigInt>; 2] {
        let d = self.tree.degree();
        let h: Vec<BigInt> = (0..2 * d).map(|i| BigInt::from(u8::from(i < d))).collect();
        let v: Vec<BigInt> = (0..2 * d).map(|i| BigInt::from(u8::from(i >= d))).collect();
        [self.chain_class(&h), self.chain_class(&v)]
    }

    pub fn to_json(&self) -> SymplecticRepJson {
        SymplecticRepJson {
            genus: self.genus,
            generators: self.generators.clone(),
            radical_dim: self.radical_dim,
        }
    }
}

/// Fundamental cycles, intersection form and symplectic basis, without any generators.
pub fn homology_basis(o: &Origami) -> Result<SymplecticRep> {
    let tree = graph_and_tree(o);
    let form = tree.intersection_gram()?;
    let basis = symplectic_reduce(&form)?;
    let m = o.stratum().punctures;
    if basis.radical.len() != m - 1 {
        return Err(Error::RadicalDimensionMismatch {
            expected: m - 1,
            found: basis.radical.len(),
        });
    }
    Ok(SymplecticRep {
        genus: basis.genus(),
        radical_dim: basis.radical.len(),
        basis,
        generators: Vec::new(),
        tree,
        form,
    })
}

/// Builds the symplectic basis for an origami and evaluates every Veech Schreier generator.
pub fn homology_rep(v: &VeechGroup, exec: Exec) -> Result<SymplecticRep> {
    let mut rep = homology_basis(&v.origami)?;
    let words: Vec<WordST> = v.schreier_gens.iter().map(|(w, _)| w.clone()).collect();
    let mats = exec.try_map(&words, |w| rep.action(w))?;
    rep.generators = words
        .into_iter()
        .zip(mats)
        .map(|(word, matrix)| RepGenerator { word, matrix })
        .collect();
    Ok(rep)
}

/// `Mᵀ J M = J` for the standard form with blocks `[[0,1],[−1,0]]`.
pub fn is_symplectic(m: &MatZ) -> bool {
    let j = MatZ::standard_j(m.rows());
    m.rows() == m.cols() && m.transpose().mul(&j).mul(m) == j
}

/// Restriction of a matrix acting on `ℤ²` coordinates to [`Mat2Z`].
pub fn to_mat2(m: &MatZ) -> Result<Mat2Z> {
    Mat2Z::from_matz(m)
}

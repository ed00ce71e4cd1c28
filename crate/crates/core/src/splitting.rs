//! Invariant rational subspaces of a symplectic representation and their
//! rank-two restrictions.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::matrix::{echelon_basis, kernel_q, primitive_integer, saturate, to_q, vec_to_q};
use crate::exact::{
    cyclotomic_kernel, scaled_symplectic_basis_rank2, AlternatingForm, MatQ, MatZ, Permutation, Q,
};
use crate::modular::{
    coset_enumerate, Mat2Z, ModularSubgroup, SubgroupJson, WordST, DEFAULT_MAX_COSETS,
};
use crate::monodromy::SymplecticRep;
use crate::origami::Quotient;
use crate::veech::VeechGroup;

/// A subspace of `Qⁿ`, stored by its reduced row-echelon basis (the equality key).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn new(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        Subspace {
            ambient,
            basis: echelon_basis(ambient, vectors),
        }
    }

    pub fn from_integer(ambient: usize, vectors: &[Vec<BigInt>]) -> Self {
        let q: Vec<Vec<Q>> = vectors.iter().map(|v| vec_to_q(v)).collect();
        Self::new(ambient, &q)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let id: Vec<Vec<Q>> = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        Subspace { ambient, basis: id }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        echelon_basis(self.ambient, &vs).len() == self.dim()
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        self.sum(o).dim() == self.dim()
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Subspace::new(self.ambient, &vs)
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        if self.is_zero() || o.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // a·U = b·W  ⇔  [Uᵀ | −Wᵀ] (a, b) = 0
        let (k1, k2) = (self.dim(), o.dim());
        let mut m = MatQ::zeros(self.ambient, k1 + k2);
        for i in 0..self.ambient {
            for j in 0..k1 {
                m[(i, j)] = self.basis[j][i].clone();
            }
            for j in 0..k2 {
                m[(i, k1 + j)] = -o.basis[j][i].clone();
            }
        }
        let vs: Vec<Vec<Q>> = kernel_q(&m)
            .into_iter()
            .map(|c| {
                (0..self.ambient)
                    .map(|i| {
                        (0..k1).fold(Q::zero(), |acc, j| {
                            acc + c[j].clone() * self.basis[j][i].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        Subspace::new(self.ambient, &vs)
    }

    /// Image under a square matrix.
    pub fn image(&self, m: &MatZ) -> Subspace {
        let mq = to_q(m);
        let vs: Vec<Vec<Q>> = self.basis.iter().map(|b| mq.mul_vec(b)).collect();
        Subspace::new(self.ambient, &vs)
    }

    pub fn is_invariant(&self, m: &MatZ) -> bool {
        self.image(m) == *self
    }

    /// Annihilator under the standard symplectic form.
    pub fn symplectic_annihilator(&self) -> Subspace {
        let j = to_q(&MatZ::standard_j(self.ambient));
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        // rows uᵀ J
        let rows: Vec<Vec<Q>> = self
            .basis
            .iter()
            .map(|u| {
                (0..self.ambient)
                    .map(|c| {
                        (0..self.ambient)
                            .fold(Q::zero(), |a, r| a + u[r].clone() * j[(r, c)].clone())
                    })
                    .collect()
            })
            .collect();
        Subspace::new(self.ambient, &kernel_q(&MatQ::from_rows(rows)))
    }

    /// True if the standard symplectic form is non-degenerate on the subspace.
    pub fn is_symplectic(&self) -> bool {
        self.intersect(&self.symplectic_annihilator()).is_zero()
    }

    /// `ℤ`-basis of the lattice `S ∩ ℤⁿ`.
    pub fn integer_basis(&self) -> Vec<Vec<BigInt>> {
        let prim: Vec<Vec<BigInt>> = self.basis.iter().map(|b| primitive_integer(b)).collect();
        saturate(self.ambient, &prim)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .integer_basis()
            .iter()
            .map(|v| {
                format!(
                    "({})",
                    v.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

/// The plane spanned by the horizontal and vertical core classes.
pub fn tautological_subspace(rep: &SymplecticRep) -> Subspace {
    let [h, v] = rep.tautological_plane();
    Subspace::from_integer(rep.dim(), &[h, v])
}

/// Span of the transfers of a symplectic basis of the quotient; no invariance check.
pub fn pullback_span(q: &Quotient, rep_src: &SymplecticRep, rep_dst: &SymplecticRep) -> Subspace {
    let d = q.map.len();
    let b = rep_dst.tree().degree();
    let vecs: Vec<Vec<BigInt>> = rep_dst
        .basis
        .symplectic
        .iter()
        .map(|z| {
            let down = rep_dst.tree().edge_vector(z);
            let mut up = vec![BigInt::zero(); 2 * d];
            for i in 0..d {
                up[i] = down[q.map[i]].clone();
                up[d + i] = down[b + q.map[i]].clone();
            }
            rep_src.chain_class(&up)
        })
        .collect();
    Subspace::from_integer(rep_src.dim(), &vecs)
}

fn check_invariant(s: &Subspace, rep: &SymplecticRep) -> Result<()> {
    for g in &rep.generators {
        if !s.is_invariant(&g.matrix) {
            return Err(Error::NotInvariant(format!(
                "{} does not preserve {}",
                g.word, s
            )));
        }
    }
    Ok(())
}

/// Transfer image of `H₁` of a quotient, required to be invariant under every generator of `rep_src`.
pub fn pullback_subspace(
    q: &Quotient,
    rep_src: &SymplecticRep,
    rep_dst: &SymplecticRep,
) -> Result<Subspace> {
    let s = pullback_span(q, rep_src, rep_dst);
    check_invariant(&s, rep_src)?;
    Ok(s)
}

/// Symplectic complement, required to be invariant under every generator.
pub fn symplectic_complement(s: &Subspace, rep: &SymplecticRep) -> Result<Subspace> {
    let c = s.symplectic_annihilator();
    check_invariant(&c, rep)?;
    Ok(c)
}

/// `ker Φ_e(M_τ)` for every divisor `e` of the order of `τ`.
pub fn isotypic_cyclic(rep: &SymplecticRep, tau: &Permutation) -> Result<Vec<Subspace>> {
    if tau.is_identity() {
        return Err(Error::InvalidInput(
            "the deck transformation must be non-trivial".into(),
        ));
    }
    let m = to_q(&rep.deck_action(tau));
    let n = tau.order();
    (1..=n)
        .filter(|e| n.is_multiple_of(*e))
        .map(|e| Ok(Subspace::new(rep.dim(), &cyclotomic_kernel(&m, n, e)?)))
        .collect()
}

/// Subgroup of the Veech group preserving `s`, from the orbit of `s` under the generator matrices.
pub fn stabilizer_of_subspace(
    v: &VeechGroup,
    rep: &SymplecticRep,
    s: &Subspace,
    max_orbit: usize,
) -> Result<ModularSubgroup> {
    let gens: Vec<(&WordST, &MatZ, MatZ)> = rep
        .generators
        .iter()
        .map(|g| {
            let inv = crate::exact::matrix::inverse_z(&g.matrix).ok_or(Error::NonUnimodular)?;
            Ok((&g.word, &g.matrix, inv))
        })
        .collect::<Result<_>>()?;
    let mut index: HashMap<Subspace, usize> = HashMap::from([(s.clone(), 0)]);
    let mut points = vec![s.clone()];
    // word a_p with ρ(a_p)·s = p
    let mut words = vec![WordST::identity()];
    let mut stab: Vec<WordST> = Vec::new();
    let mut k = 0;
    while k < points.len() {
        for (w, m, mi) in &gens {
            for (img, gw) in [
                (points[k].image(m), (*w).clone()),
                (points[k].image(mi), w.inverse()),
            ] {
                let a = gw.mul(&words[k]);
                match index.get(&img) {
                    Some(&j) => {
                        let st = words[j].inverse().mul(&a);
                        if !st.is_empty() {
                            stab.push(st);
                        }
                    }
                    None => {
                        if points.len() >= max_orbit {
                            return Err(Error::OrbitOverflow { limit: max_orbit });
                        }
                        index.insert(img.clone(), points.len());
                        points.push(img);
                        words.push(a);
                    }
                }
            }
        }
        k += 1;
    }
    if points.len() == 1 {
        return Ok(v.subgroup.clone());
    }
    stab.sort();
    stab.dedup();
    let g = coset_enumerate(&stab, DEFAULT_MAX_COSETS.max(max_orbit * v.index()))?;
    Ok(g.with_supplied(stab))
}

/// A rank-two piece with images of the domain's Schreier generators in SL₂(ℤ).
#[derive(Clone, Debug)]
pub struct RankTwoRep {
    pub domain: ModularSubgroup,
    pub images: Vec<Mat2Z>,
    pub scale: BigInt,
    /// Lattice basis of the piece in symplectic coordinates.
    pub basis: [Vec<BigInt>; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct RankTwoRepJson {
    pub domain: SubgroupJson,
    pub images: Vec<ImageJson>,
    pub scale: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageJson {
    pub word: WordST,
    pub matrix: [[String; 2]; 2],
}

impl RankTwoRep {
    pub fn to_json(&self) -> RankTwoRepJson {
        RankTwoRepJson {
            domain: self.domain.to_json(),
            images: self
                .domain
                .schreier_gens()
                .iter()
                .zip(&self.images)
                .map(|(g, m)| ImageJson {
                    word: g.word.clone(),
                    matrix: [
                        [m.a.to_string(), m.b.to_string()],
                        [m.c.to_string(), m.d.to_string()],
                    ],
                })
                .collect(),
            scale: self.scale.to_string(),
        }
    }
}

/// Matrix of `m` on the plane spanned by `basis`, in that basis.
fn restrict_matrix(
    m: &MatZ,
    basis: &[Vec<BigInt>; 2],
    form: &AlternatingForm,
    k: &BigInt,
) -> Option<Mat2Z> {
    // for v = α b₁ + β b₂:  ⟨v, b₂⟩ = α k and ⟨b₁, v⟩ = β k
    let mut entries = Vec::with_capacity(4);
    let mut cols = Vec::with_capacity(2);
    for b in basis {
        let v = m.mul_vec(b);
        let (a, ra) = form.pair(&v, &basis[1]).div_rem(k);
        let (c, rc) = form.pair(&basis[0], &v).div_rem(k);
        if !ra.is_zero() || !rc.is_zero() {
            return None;
        }
        let back: Vec<BigInt> = basis[0]
            .iter()
            .zip(&basis[1])
            .map(|(x, y)| &a * x + &c * y)
            .collect();
        if back != v {
            return None;
        }
        cols.push((a, c));
    }
    entries.push(cols[0].0.clone());
    entries.push(cols[1].0.clone());
    entries.push(cols[0].1.clone());
    entries.push(cols[1].1.clone());
    Mat2Z::new(
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
        entries[3].clone(),
    )
    .ok()
}

/// Restricts the representation to an invariant plane over `domain`.
pub fn restrict_to_rank2(
    rep: &SymplecticRep,
    s: &Subspace,
    domain: &ModularSubgroup,
) -> Result<RankTwoRep> {
    if s.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "expected a plane, got dimension {}",
            s.dim()
        )));
    }
    let form = AlternatingForm::new(MatZ::standard_j(rep.dim()))?;
    let lat = s.integer_basis();
    let (basis, k) = scaled_symplectic_basis_rank2(&form, &[lat[0].clone(), lat[1].clone()])?;
    let mut images = Vec::with_capacity(domain.schreier_gens().len());
    for g in domain.schreier_gens() {
        let m = rep.action(&g.word)?;
        let img = restrict_matrix(&m, &basis, &form, &k)
            .ok_or_else(|| Error::NotInvariant(format!("{} does not preserve {}", g.word, s)))?;
        images.push(img);
    }
    for rel in domain.schreier_relators() {
        if !domain.evaluate(&rel, |i| images[i].clone()).is_central() {
            return Err(Error::RelatorViolation(
                "restricted images do not satisfy a relator".into(),
            ));
        }
    }
    Ok(RankTwoRep {
        domain: domain.clone(),
        images,
        scale: k,
        basis,
    })
}

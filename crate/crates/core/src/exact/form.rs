use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::MatZ;
use crate::error::{Error, Result};

/// An integer alternating bilinear form given by its gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingForm {
    gram: MatZ,
}

impl AlternatingForm {
    pub fn new(gram: MatZ) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::InvalidInput("gram matrix must be square".into()));
        }
        let n = gram.rows();
        for i in 0..n {
            if !gram[(i, i)].is_zero() {
                return Err(Error::InvalidInput("gram diagonal must vanish".into()));
            }
            for j in 0..i {
                if gram[(i, j)] != -gram[(j, i)].clone() {
                    return Err(Error::InvalidInput("gram must be antisymmetric".into()));
                }
            }
        }
        Ok(Self { gram })
    }

    pub fn gram(&self) -> &MatZ {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn pair(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        self.gram.bilinear(u, v)
    }
}

/// Output of [`symplectic_reduce`]: `symplectic` is ordered `e₁, f₁, …, e_g, f_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub radical: Vec<Vec<BigInt>>,
    pub symplectic: Vec<Vec<BigInt>>,
}

impl SymplecticBasis {
    pub fn genus(&self) -> usize {
        self.symplectic.len() / 2
    }
}

/// Integer symplectic reduction of an alternating form.
///
/// Works on a basis of `Zⁿ` by unimodular moves: pick the smallest nonzero
/// pairing `⟨vᵢ,vⱼ⟩`, reduce the rest of rows `i` and `j` modulo it, and split
/// off the pair once both rows are cleared. What remains when all pairings
/// vanish is the radical. The union of the output vectors is a basis of `Zⁿ`.
pub fn symplectic_reduce(f: &AlternatingForm) -> Result<SymplecticBasis> {
    let n = f.dim();
    let mut vecs: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            v
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut symplectic = Vec::new();
    loop {
        let h = |a: usize, b: usize, vecs: &Vec<Vec<BigInt>>| f.pair(&vecs[a], &vecs[b]);
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (ai, &a) in active.iter().enumerate() {
            for &b in &active[ai + 1..] {
                let p = h(a, b, &vecs);
                if !p.is_zero() && best.as_ref().is_none_or(|(_, _, q)| p.abs() < q.abs()) {
                    best = Some((a, b, p));
                }
            }
        }
        let Some((i, j, d)) = best else { break };
        let mut changed = false;
        for &k in &active {
            if k == i || k == j {
                continue;
            }
            let hik = h(i, k, &vecs);
            if !hik.is_zero() {
                let q = hik.div_floor(&d);
                if !(&hik - &q * &d).is_zero() {
                    changed = true;
                }
                let vj = vecs[j].clone();
                for (x, y) in vecs[k].iter_mut().zip(&vj) {
                    *x -= &q * y;
                }
            }
            let hjk = h(j, k, &vecs);
            if !hjk.is_zero() {
                let dji = -d.clone();
                let q = hjk.div_floor(&dji);
                if !(&hjk - &q * &dji).is_zero() {
                    changed = true;
                }
                let vi = vecs[i].clone();
                for (x, y) in vecs[k].iter_mut().zip(&vi) {
                    *x -= &q * y;
                }
            }
        }
        if changed {
            continue;
        }
        if d.abs() != BigInt::one() {
            return Err(Error::NonUnimodular);
        }
        if d.is_positive() {
            symplectic.push(vecs[i].clone());
            symplectic.push(vecs[j].clone());
        } else {
            symplectic.push(vecs[j].clone());
            symplectic.push(vecs[i].clone());
        }
        active.retain(|&k| k != i && k != j);
    }
    let radical = active.into_iter().map(|k| vecs[k].clone()).collect();
    Ok(SymplecticBasis {
        radical,
        symplectic,
    })
}

/// Normalizes a basis `(b₁, b₂)` of a rank-2 lattice so that its gram is `[[0,k],[-k,0]]` with `k > 0`.
///
/// Any basis of the lattice realizes the minimal `|k|`, so only orientation needs fixing.
pub fn scaled_symplectic_basis_rank2(
    f: &AlternatingForm,
    basis: &[Vec<BigInt>; 2],
) -> Result<([Vec<BigInt>; 2], BigInt)> {
    let k = f.pair(&basis[0], &basis[1]);
    if k.is_zero() {
        return Err(Error::DegenerateForm);
    }
    if k.is_positive() {
        Ok((basis.clone(), k))
    } else {
        Ok(([basis[1].clone(), basis[0].clone()], -k))
    }
}

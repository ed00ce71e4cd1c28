//! Veech groups of origamis by orbit enumeration.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Permutation;
use crate::modular::{Mat2Z, ModularSubgroup, StLetter, SubgroupJson, WordST};
use crate::origami::Origami;

pub const DEFAULT_MAX_ORBIT: usize = 100_000;

/// The Veech group of the punctured surface, computed modulo `±I`.
///
/// Coset `Γw` corresponds to the orbit point `act(w⁻¹, O)`, so right
/// multiplication by `g` acts on orbit points by `act(g⁻¹, ·)`.
#[derive(Clone, Debug)]
pub struct VeechGroup {
    pub origami: Origami,
    pub subgroup: ModularSubgroup,
    /// Representatives of the orbit classes, indexed by coset.
    pub orbit: Vec<Origami>,
    /// Schreier generators, each word sending the base origami to itself exactly (not only up to `−I`).
    pub schreier_gens: Vec<(WordST, Mat2Z)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VeechJson {
    #[serde(flatten)]
    pub subgroup: SubgroupJson,
    pub orbit_size: usize,
    pub stabilizing_words: Vec<WordST>,
}

pub fn veech_group(o: &Origami, max_orbit: usize) -> Result<VeechGroup> {
    let mut index: HashMap<Origami, usize> = HashMap::new();
    let mut reps = vec![o.clone()];
    index.insert(o.projective_key(), 0);
    let mut table: Vec<[usize; 3]> = Vec::new();
    let mut k = 0;
    while k < reps.len() {
        let p = reps[k].clone();
        let mut row = [0usize; 3];
        // p·S, p·T, p·T⁻¹
        for (col, g) in [StLetter::SInv, StLetter::TInv, StLetter::T]
            .into_iter()
            .enumerate()
        {
            let q = p.act_generator(g);
            let key = q.projective_key();
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    if reps.len() >= max_orbit {
                        return Err(Error::OrbitOverflow { limit: max_orbit });
                    }
                    index.insert(key, reps.len());
                    reps.push(q);
                    reps.len() - 1
                }
            };
            row[col] = id;
        }
        table.push(row);
        k += 1;
    }
    let sigma_s = Permutation::new(table.iter().map(|r| r[0]).collect())
        .map_err(|_| Error::RelatorViolation("S does not act bijectively on the orbit".into()))?;
    let sigma_t = Permutation::new(table.iter().map(|r| r[1]).collect())
        .map_err(|_| Error::RelatorViolation("T does not act bijectively on the orbit".into()))?;
    if table
        .iter()
        .enumerate()
        .any(|(c, r)| sigma_t.apply(r[2]) != c)
    {
        return Err(Error::RelatorViolation(
            "T⁻¹ is not inverse to T on the orbit".into(),
        ));
    }
    let subgroup = ModularSubgroup::from_table(&sigma_s, &sigma_t)?;
    // from_table renumbers breadth-first over S, T, T⁻¹, which is the discovery order above
    debug_assert_eq!(subgroup.sigma_t(), &sigma_t);
    let schreier_gens = subgroup
        .schreier_gens()
        .iter()
        .map(|g| {
            let w = exact_stabilizer_word(o, &g.word);
            let m = w.to_matrix();
            (w, m)
        })
        .collect();
    Ok(VeechGroup {
        origami: o.clone(),
        subgroup,
        orbit: reps,
        schreier_gens,
    })
}

/// Given `w` stabilizing the class of `o` modulo `−I`, returns `w` or `S²w`, whichever fixes `o`.
pub fn exact_stabilizer_word(o: &Origami, w: &WordST) -> WordST {
    if o.act_word(w).is_equivalent(o) {
        w.clone()
    } else {
        WordST::from_letters([StLetter::S, StLetter::S]).mul(w)
    }
}

impl VeechGroup {
    pub fn index(&self) -> usize {
        self.subgroup.index()
    }

    pub fn contains(&self, m: &Mat2Z) -> bool {
        self.subgroup.contains(m)
    }

    pub fn to_json(&self) -> VeechJson {
        VeechJson {
            subgroup: self.subgroup.to_json(),
            orbit_size: self.orbit.len(),
            stabilizing_words: self.schreier_gens.iter().map(|(w, _)| w.clone()).collect(),
        }
    }
}

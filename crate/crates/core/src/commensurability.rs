//! Commensurability of two modular embeddings, decided exactly on the intersection of
//! their domains, and the exponent as a negative test for weak commensurability.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::lyapunov::{
    lyapunov_exponent, matrix_json, IntJson, LyapunovReport, ModularEmbeddingData,
};
use crate::modular::{classify, ElementType, Mat2Z, ModularSubgroup, SubgroupJson, WordST};

#[derive(Clone, Debug)]
pub struct Witness {
    pub word: WordST,
    pub image1: Mat2Z,
    pub image2: Mat2Z,
    pub type1: ElementType,
    pub type2: ElementType,
}

#[derive(Clone, Debug)]
pub enum Commensurability {
    Yes { common: ModularSubgroup },
    No { witness: Box<Witness> },
}

/// Compares `ρ₁` and `ρ₂` projectively on the Schreier generators of `Γ₁ ∩ Γ₂`.
pub fn commensurable(
    d1: &ModularEmbeddingData,
    d2: &ModularEmbeddingData,
) -> Result<Commensurability> {
    let common = d1.domain().intersect(d2.domain())?;
    for g in common.schreier_gens() {
        let (a, b) = (d1.rho(&g.matrix)?, d2.rho(&g.matrix)?);
        if !a.proj_eq(&b) {
            let (type1, type2) = (classify(&a), classify(&b));
            return Ok(Commensurability::No {
                witness: Box::new(Witness {
                    word: g.word.clone(),
                    image1: a,
                    image2: b,
                    type1,
                    type2,
                }),
            });
        }
    }
    Ok(Commensurability::Yes { common })
}

/// Image type of a cusp with the fixed point dropped.
fn profile_entry(t: &ElementType) -> String {
    match t {
        ElementType::Parabolic { .. } => "parabolic".into(),
        other => other.short(),
    }
}

#[derive(Clone, Debug)]
pub struct WeakInvariants {
    pub lambda: BigRational,
    /// Sorted image types of the cusps of the domain. Heuristic only: equal profiles prove nothing.
    pub cusp_image_profile: Vec<String>,
    pub report: LyapunovReport,
}

pub fn weak_invariants(d: &ModularEmbeddingData, max_cosets: usize) -> Result<WeakInvariants> {
    let report = lyapunov_exponent(d, max_cosets)?;
    let mut cusp_image_profile: Vec<String> = report
        .cusp_table
        .iter()
        .map(|r| profile_entry(&r.image_type))
        .collect();
    cusp_image_profile.sort();
    Ok(WeakInvariants {
        lambda: report.lambda.clone(),
        cusp_image_profile,
        report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

/// Commensurable data are weakly commensurable; different exponents rule it out; nothing else is decided.
pub fn weak_verdict(c: &Commensurability, i1: &WeakInvariants, i2: &WeakInvariants) -> Verdict {
    match c {
        Commensurability::Yes { .. } => Verdict::Yes,
        Commensurability::No { .. } if i1.lambda != i2.lambda => Verdict::No,
        Commensurability::No { .. } => Verdict::Undecided,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommensurabilityReport {
    pub commensurable: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub common_subgroup: Option<SubgroupJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    pub weakly_commensurable: Verdict,
    pub invariants: [InvariantsJson; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub word: WordST,
    pub image1: [[IntJson; 2]; 2],
    pub image2: [[IntJson; 2]; 2],
    pub type1: String,
    pub type2: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsJson {
    pub lambda: String,
    pub cusp_image_profile: Vec<String>,
}

impl From<&WeakInvariants> for InvariantsJson {
    fn from(w: &WeakInvariants) -> Self {
        InvariantsJson {
            lambda: w.lambda.to_string(),
            cusp_image_profile: w.cusp_image_profile.clone(),
        }
    }
}

/// Full comparison: exact commensurability, both sets of invariants and the weak verdict.
pub fn compare(
    d1: &ModularEmbeddingData,
    d2: &ModularEmbeddingData,
    max_cosets: usize,
) -> Result<CommensurabilityReport> {
    let c = commensurable(d1, d2)?;
    let (i1, i2) = (
        weak_invariants(d1, max_cosets)?,
        weak_invariants(d2, max_cosets)?,
    );
    let weakly_commensurable = weak_verdict(&c, &i1, &i2);
    let (commensurable, common_subgroup, witness) = match c {
        Commensurability::Yes { common } => (Verdict::Yes, Some(common.to_json()), None),
        Commensurability::No { witness: w } => (
            Verdict::No,
            None,
            Some(WitnessJson {
                word: w.word,
                image1: matrix_json(&w.image1),
                image2: matrix_json(&w.image2),
                type1: w.type1.short(),
                type2: w.type2.short(),
            }),
        ),
    };
    Ok(CommensurabilityReport {
        commensurable,
        common_subgroup,
        witness,
        weakly_commensurable,
        invariants: [(&i1).into(), (&i2).into()],
    })
}

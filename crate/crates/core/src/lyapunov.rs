//! The non-negative Lyapunov exponent of a rank-two representation with image in SL₂(ℤ),
//! computed from cusps: `λ = [PSL₂(ℤ):Δ] / [PSL₂(ℤ):Γ] · deg`, where the degree of the
//! induced map of modular curves is read off as a sum of parabolic indices.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::{
    classify, coset_enumerate, coset_enumerate_with_images, translation_exponent, CuspClass,
    ElementType, Mat2Z, ModularSubgroup, SubgroupJson, WordST, DEFAULT_MAX_COSETS,
};
use crate::splitting::RankTwoRep;

/// Closures larger than this are taken to be infinite; finite subgroups of PSL₂(ℤ) have order at most 3.
pub const FINITE_CLOSURE_CAP: usize = 48;

/// A homomorphism `ρ: Γ → PSL₂(ℤ)` given on the Schreier generators of `Γ`.
#[derive(Clone, Debug)]
pub struct ModularEmbeddingData {
    domain: ModularSubgroup,
    images: Vec<Mat2Z>,
}

impl ModularEmbeddingData {
    /// Checks that the images satisfy every relator of `Γ` up to sign.
    pub fn new(domain: ModularSubgroup, images: Vec<Mat2Z>) -> Result<Self> {
        if images.len() != domain.schreier_gens().len() {
            return Err(Error::InvalidInput(format!(
                "{} images for {} generators",
                images.len(),
                domain.schreier_gens().len()
            )));
        }
        for rel in domain.schreier_relators() {
            if !domain.evaluate(&rel, |i| images[i].clone()).is_central() {
                return Err(Error::RelatorViolation(
                    "images do not define a homomorphism".into(),
                ));
            }
        }
        Ok(ModularEmbeddingData { domain, images })
    }

    /// `Γ = ⟨words⟩` with `words[i] ↦ images[i]`; rejects assignments that are not homomorphisms.
    pub fn from_generators(words: &[WordST], images: &[Mat2Z], max_cosets: usize) -> Result<Self> {
        let (domain, imgs) = coset_enumerate_with_images(words, images, max_cosets)?;
        ModularEmbeddingData::new(domain, imgs)
    }

    /// The identity embedding of `Γ`.
    pub fn inclusion(domain: ModularSubgroup) -> Self {
        let images = domain
            .schreier_gens()
            .iter()
            .map(|g| g.matrix.clone())
            .collect();
        ModularEmbeddingData { domain, images }
    }

    pub fn domain(&self) -> &ModularSubgroup {
        &self.domain
    }

    pub fn images(&self) -> &[Mat2Z] {
        &self.images
    }

    /// `ρ(m)` for `m ∈ Γ`, defined up to sign.
    pub fn rho(&self, m: &Mat2Z) -> Result<Mat2Z> {
        let (syl, _) = self.domain.rewrite_in_schreier(m)?;
        Ok(self.domain.evaluate(&syl, |i| self.images[i].clone()))
    }

    /// Restriction to a subgroup `Γ′ ≤ Γ`.
    pub fn restrict(&self, sub: &ModularSubgroup) -> Result<Self> {
        let images = sub
            .schreier_gens()
            .iter()
            .map(|g| self.rho(&g.matrix))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModularEmbeddingData {
            domain: sub.clone(),
            images,
        })
    }

    pub fn to_json(&self) -> EmbeddingJson {
        EmbeddingJson {
            generators: self
                .domain
                .schreier_gens()
                .iter()
                .zip(&self.images)
                .map(|(g, m)| GeneratorImageJson {
                    word: g.word.clone(),
                    matrix: matrix_json(m),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &EmbeddingJson, max_cosets: usize) -> Result<Self> {
        let words: Vec<WordST> = j.generators.iter().map(|g| g.word.clone()).collect();
        let images = j
            .generators
            .iter()
            .map(|g| parse_matrix(&g.matrix))
            .collect::<Result<Vec<_>>>()?;
        ModularEmbeddingData::from_generators(&words, &images, max_cosets)
    }

    pub fn parse(text: &str, max_cosets: usize) -> Result<Self> {
        let j: EmbeddingJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ModularEmbeddingData::from_json(&j, max_cosets)
    }
}

impl From<&RankTwoRep> for ModularEmbeddingData {
    fn from(r: &RankTwoRep) -> Self {
        ModularEmbeddingData {
            domain: r.domain.clone(),
            images: r.images.clone(),
        }
    }
}

/// Integer entry given either as a JSON number or as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntJson {
    Num(i64),
    Str(String),
}

impl IntJson {
    fn value(&self) -> Result<BigInt> {
        match self {
            IntJson::Num(n) => Ok(BigInt::from(*n)),
            IntJson::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

/// `{"generators": [{"word": "T^2", "matrix": [[1,1],[0,1]]}, ...]}`; `images` is accepted
/// as an alias so rank-two restrictions can be read back directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    #[serde(alias = "images")]
    pub generators: Vec<GeneratorImageJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImageJson {
    pub word: WordST,
    #[serde(alias = "image")]
    pub matrix: [[IntJson; 2]; 2],
}

fn parse_matrix(m: &[[IntJson; 2]; 2]) -> Result<Mat2Z> {
    Mat2Z::new(
        m[0][0].value()?,
        m[0][1].value()?,
        m[1][0].value()?,
        m[1][1].value()?,
    )
}

pub fn matrix_json(m: &Mat2Z) -> [[IntJson; 2]; 2] {
    let s = |x: &BigInt| IntJson::Str(x.to_string());
    [[s(&m.a), s(&m.b)], [s(&m.c), s(&m.d)]]
}

/// The image `Δ = ρ(Γ)`.
#[derive(Clone, Debug)]
pub enum ImageGroup {
    Finite { order: usize },
    Lattice(ModularSubgroup),
}

/// Classifies the image: finite by closure, otherwise by enumerating the subgroup its generators span.
pub fn image_subgroup(d: &ModularEmbeddingData, max_cosets: usize) -> Result<ImageGroup> {
    let gens: Vec<Mat2Z> = d
        .images
        .iter()
        .filter(|m| !m.is_central())
        .map(Mat2Z::projective_key)
        .collect();
    if let Some(order) = finite_closure(&gens) {
        return Ok(ImageGroup::Finite { order });
    }
    let mut words: Vec<WordST> = gens.iter().map(WordST::from_matrix).collect();
    words.sort();
    words.dedup();
    match coset_enumerate(&words, max_cosets) {
        Ok(g) => Ok(ImageGroup::Lattice(g)),
        Err(Error::EnumerationOverflow { limit }) => Err(Error::ThinOrUnbounded { limit }),
        Err(e) => Err(e),
    }
}

fn finite_closure(gens: &[Mat2Z]) -> Option<usize> {
    let mut seen: HashSet<Mat2Z> = HashSet::from([Mat2Z::identity()]);
    let mut frontier = vec![Mat2Z::identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g).projective_key();
            if seen.insert(y.clone()) {
                if seen.len() > FINITE_CLOSURE_CAP {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(seen.len())
}

/// What one cusp of `Γ` contributes to the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contribution {
    Parabolic { image_cusp: usize, k: usize },
    NoContribution,
}

/// One line of the cusp-by-cusp derivation.
#[derive(Clone, Debug)]
pub struct CuspRow {
    pub cusp: CuspClass,
    pub image: Mat2Z,
    pub image_type: ElementType,
    pub contribution: Contribution,
}

fn image_of_cusp(d: &ModularEmbeddingData, c: &CuspClass) -> Result<(Mat2Z, ElementType)> {
    let img = d.rho(&c.parabolic)?;
    let t = classify(&img);
    Ok((img, t))
}

/// Parabolic index of the image of the primitive parabolic of `c` inside `Δ`.
pub fn cusp_contribution(
    d: &ModularEmbeddingData,
    c: &CuspClass,
    delta: &ModularSubgroup,
) -> Result<CuspRow> {
    let (image, image_type) = image_of_cusp(d, c)?;
    let contribution = match &image_type {
        ElementType::Center | ElementType::Elliptic { .. } => Contribution::NoContribution,
        ElementType::Hyperbolic => {
            return Err(Error::HyperbolicImage(format!(
                "{} ↦ {}",
                c.rep_word, image
            )));
        }
        ElementType::Parabolic { .. } => {
            let (g, m) = translation_exponent(&image)?;
            let j = delta.cusp_index_of(&g);
            let w = delta.cusps()[j].width;
            let (k, rem) = m.abs().div_rem(&BigInt::from(w));
            if !rem.is_zero() {
                return Err(Error::DivisibilityViolation {
                    m: m.to_string(),
                    w,
                });
            }
            let k = k.to_usize().ok_or_else(|| Error::DivisibilityViolation {
                m: m.to_string(),
                w,
            })?;
            Contribution::Parabolic { image_cusp: j, k }
        }
    };
    Ok(CuspRow {
        cusp: c.clone(),
        image,
        image_type,
        contribution,
    })
}

#[derive(Clone, Debug)]
pub struct LyapunovReport {
    pub lambda: BigRational,
    pub image: ImageGroup,
    /// `deg p̄`; absent for finite images.
    pub degree: Option<usize>,
    /// `[PSL₂(ℤ):Δ] / [PSL₂(ℤ):Γ]`; absent for finite images.
    pub vol_ratio: Option<BigRational>,
    pub domain_index: usize,
    pub cusp_table: Vec<CuspRow>,
}

impl LyapunovReport {
    pub fn is_finite(&self) -> bool {
        matches!(self.image, ImageGroup::Finite { .. })
    }

    pub fn to_json(&self) -> LyapunovReportJson {
        let (classification, finite_order, image) = match &self.image {
            ImageGroup::Finite { order } => ("finite", Some(*order), None),
            ImageGroup::Lattice(g) => ("lattice", None, Some(g.to_json())),
        };
        LyapunovReportJson {
            lambda: self.lambda.to_string(),
            classification: classification.into(),
            finite_order,
            degree: self.degree,
            vol_ratio: self.vol_ratio.as_ref().map(ToString::to_string),
            domain_index: self.domain_index,
            image,
            cusp_table: self
                .cusp_table
                .iter()
                .map(|r| CuspRowJson {
                    cusp: r.cusp.point.to_string(),
                    width: r.cusp.width,
                    parabolic: WordST::from_matrix(&r.cusp.parabolic),
                    image: matrix_json(&r.image),
                    image_type: r.image_type.short(),
                    image_cusp: match r.contribution {
                        Contribution::Parabolic { image_cusp, .. } => Some(image_cusp),
                        Contribution::NoContribution => None,
                    },
                    k: match r.contribution {
                        Contribution::Parabolic { k, .. } => Some(k),
                        Contribution::NoContribution => None,
                    },
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovReportJson {
    pub lambda: String,
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_order: Option<usize>,
    pub degree: Option<usize>,
    pub vol_ratio: Option<String>,
    pub domain_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image: Option<SubgroupJson>,
    pub cusp_table: Vec<CuspRowJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CuspRowJson {
    pub cusp: String,
    pub width: usize,
    pub parabolic: WordST,
    pub image: [[IntJson; 2]; 2],
    pub image_type: String,
    pub image_cusp: Option<usize>,
    pub k: Option<usize>,
}

/// Evaluates the cusp formula, checking that every cusp of `Δ` is hit with the same total index.
pub fn lyapunov_exponent(d: &ModularEmbeddingData, max_cosets: usize) -> Result<LyapunovReport> {
    let domain_index = d.domain.index();
    for c in d.domain.cusps() {
        let (image, t) = image_of_cusp(d, &c)?;
        if t == ElementType::Hyperbolic {
            return Err(Error::HyperbolicImage(format!(
                "{} ↦ {}",
                c.rep_word, image
            )));
        }
    }
    let delta = match image_subgroup(d, max_cosets)? {
        ImageGroup::Finite { order } => {
            let cusp_table = d
                .domain
                .cusps()
                .into_iter()
                .map(|c| {
                    let (image, image_type) = image_of_cusp(d, &c)?;
                    Ok(CuspRow {
                        cusp: c,
                        image,
                        image_type,
                        contribution: Contribution::NoContribution,
                    })
                })
                .collect::<Result<_>>()?;
            return Ok(LyapunovReport {
                lambda: BigRational::zero(),
                image: ImageGroup::Finite { order },
                degree: None,
                vol_ratio: None,
                domain_index,
                cusp_table,
            });
        }
        ImageGroup::Lattice(g) => g,
    };
    let cusp_table = d
        .domain
        .cusps()
        .iter()
        .map(|c| cusp_contribution(d, c, &delta))
        .collect::<Result<Vec<_>>>()?;
    let mut sums = vec![0usize; delta.cusps().len()];
    for row in &cusp_table {
        if let Contribution::Parabolic { image_cusp, k } = row.contribution {
            sums[image_cusp] += k;
        }
    }
    if let Some(j) = sums.iter().position(|&s| s == 0) {
        return Err(Error::UncoveredImageCusp(j));
    }
    if sums.iter().any(|&s| s != sums[0]) {
        return Err(Error::DegreeInconsistency(sums));
    }
    let degree = sums[0];
    let vol_ratio = BigRational::new(delta.index().into(), domain_index.into());
    let lambda = &vol_ratio * BigInt::from(degree);
    Ok(LyapunovReport {
        lambda,
        image: ImageGroup::Lattice(delta),
        degree: Some(degree),
        vol_ratio: Some(vol_ratio),
        domain_index,
        cusp_table,
    })
}

/// Reports for `ρ` and for its restriction to `Γ′ ≤ Γ`; the exponents must agree.
pub fn finite_index_invariance_check(
    d: &ModularEmbeddingData,
    sub: &ModularSubgroup,
    max_cosets: usize,
) -> Result<(LyapunovReport, LyapunovReport)> {
    let full = lyapunov_exponent(d, max_cosets)?;
    let restricted = lyapunov_exponent(&d.restrict(sub)?, max_cosets)?;
    Ok((full, restricted))
}

/// Convenience wrapper with the default enumeration limit.
pub fn lambda_of(d: &ModularEmbeddingData) -> Result<BigRational> {
    lyapunov_exponent(d, DEFAULT_MAX_COSETS).map(|r| r.lambda)
}

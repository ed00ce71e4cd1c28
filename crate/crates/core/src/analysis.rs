//! The whole pipeline for one origami: Veech group, symplectic action, invariant pieces
//! and the exponent of every rank-two piece.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lyapunov::{
    lyapunov_exponent, LyapunovReport, LyapunovReportJson, ModularEmbeddingData,
};
use crate::modular::{SubgroupJson, DEFAULT_MAX_COSETS};
use crate::monodromy::{homology_basis, homology_rep, SymplecticRep};
use crate::origami::{Origami, OrigamiJson, StratumData};
use crate::splitting::{
    isotypic_cyclic, pullback_span, restrict_to_rank2, stabilizer_of_subspace,
    tautological_subspace, RankTwoRep, Subspace,
};
use crate::veech::{veech_group, VeechGroup, DEFAULT_MAX_ORBIT};

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_orbit: usize,
    pub max_cosets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_orbit: DEFAULT_MAX_ORBIT,
            max_cosets: DEFAULT_MAX_COSETS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Validate,
    VeechGroup,
    Monodromy,
    Splitting,
    Restriction,
    Lyapunov,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Validate => "validate",
            Stage::VeechGroup => "veech group",
            Stage::Monodromy => "monodromy",
            Stage::Splitting => "splitting",
            Stage::Restriction => "rank-2 restriction",
            Stage::Lyapunov => "lyapunov",
        };
        f.write_str(s)
    }
}

/// An error tagged with the pipeline stage that raised it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

trait At<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError>;
}

impl<T> At<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

/// Where an invariant subspace came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Tautological,
    /// Pullback of a quotient origami, with the tautological plane removed.
    Pullback {
        degree: usize,
        genus: usize,
        map: Vec<usize>,
    },
    /// Kernel of the `e`-th cyclotomic polynomial of a deck transformation of order `order`.
    Deck {
        order: usize,
        divisor: usize,
    },
    Complement,
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub origin: Origin,
    pub subspace: Subspace,
    /// Present for planes only.
    pub rank2: Option<RankTwoRep>,
    pub report: Option<LyapunovReport>,
}

impl Piece {
    pub fn lambda(&self) -> Option<&BigRational> {
        self.report.as_ref().map(|r| &r.lambda)
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub origami: Origami,
    pub stratum: StratumData,
    pub veech: VeechGroup,
    pub rep: SymplecticRep,
    pub pieces: Vec<Piece>,
}

impl Analysis {
    /// Non-negative exponents of the rank-two pieces, in decreasing order.
    pub fn spectrum(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = self
            .pieces
            .iter()
            .filter_map(|p| p.lambda().cloned())
            .collect();
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// The spectrum together with its negative half.
    pub fn full_spectrum(&self) -> Vec<BigRational> {
        let pos = self.spectrum();
        let neg = pos.iter().rev().map(|x| -x);
        pos.iter().cloned().chain(neg).collect()
    }

    /// Whether the pieces span the whole of `H₁`.
    pub fn is_complete(&self) -> bool {
        self.pieces.iter().map(|p| p.subspace.dim()).sum::<usize>() == self.rep.dim()
    }

    pub fn to_json(&self) -> AnalysisJson {
        AnalysisJson {
            origami: self.origami.to_json(),
            stratum: StratumJson {
                name: self.stratum.to_string(),
                genus: self.stratum.genus,
                kappa: self.stratum.kappa.clone(),
                punctures: self.stratum.punctures,
            },
            veech: self.veech.subgroup.to_json(),
            representation: RepresentationJson {
                genus: self.rep.genus,
                radical_dim: self.rep.radical_dim,
                generators: self.rep.generators.len(),
            },
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceJson {
                    origin: p.origin.clone(),
                    dim: p.subspace.dim(),
                    domain_index: p.rank2.as_ref().map(|r| r.domain.index()),
                    lambda: p
                        .lambda()
                        .map_or_else(|| "n/a".to_string(), ToString::to_string),
                    lyapunov: p.report.as_ref().map(LyapunovReport::to_json),
                })
                .collect(),
            spectrum: self.spectrum().iter().map(ToString::to_string).collect(),
            full_spectrum: self
                .full_spectrum()
                .iter()
                .map(ToString::to_string)
                .collect(),
            complete: self.is_complete(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisJson {
    pub origami: OrigamiJson,
    pub stratum: StratumJson,
    pub veech: SubgroupJson,
    pub representation: RepresentationJson,
    pub pieces: Vec<PieceJson>,
    pub spectrum: Vec<String>,
    pub full_spectrum: Vec<String>,
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumJson {
    pub name: String,
    pub genus: usize,
    pub kappa: Vec<usize>,
    pub punctures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationJson {
    pub genus: usize,
    pub radical_dim: usize,
    pub generators: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceJson {
    pub origin: Origin,
    pub dim: usize,
    pub domain_index: Option<usize>,
    pub lambda: String,
    pub lyapunov: Option<LyapunovReportJson>,
}

/// Splits `H₁` into the tautological plane, pullbacks of quotients, deck-isotypic pieces
/// and a final complement. Each candidate is cut down to the symplectic complement of the
/// tautological plane and kept only if it is symplectic and meets the earlier pieces trivially.
pub fn split_homology(o: &Origami, rep: &SymplecticRep) -> Result<Vec<(Origin, Subspace)>> {
    let n = rep.dim();
    let taut = tautological_subspace(rep);
    let taut_perp = taut.symplectic_annihilator();
    let mut pieces = vec![(Origin::Tautological, taut.clone())];
    let mut total = taut;
    let accept = |origin: Origin,
                  s: Subspace,
                  pieces: &mut Vec<(Origin, Subspace)>,
                  total: &mut Subspace| {
        if !s.is_zero() && s.is_symplectic() && s.intersect(total).is_zero() {
            *total = total.sum(&s);
            pieces.push((origin, s));
        }
    };
    let mut seen: Vec<Subspace> = Vec::new();
    for q in o.quotient_covers() {
        let genus = q.origami.stratum().genus;
        if genus <= 1 {
            continue;
        }
        let span = pullback_span(&q, rep, &homology_basis(&q.origami)?);
        if seen.contains(&span) {
            continue;
        }
        seen.push(span.clone());
        let origin = Origin::Pullback {
            degree: q.origami.degree(),
            genus,
            map: q.map.iter().map(|i| i + 1).collect(),
        };
        accept(origin, span.intersect(&taut_perp), &mut pieces, &mut total);
    }
    if let Some(tau) = o
        .deck_group()
        .into_iter()
        .filter(|t| !t.is_identity())
        .max_by_key(|t| t.order())
    {
        let order = tau.order();
        let divisors = (1..=order).filter(|e| order % e == 0);
        for (e, s) in divisors.zip(isotypic_cyclic(rep, &tau)?) {
            accept(
                Origin::Deck { order, divisor: e },
                s.intersect(&taut_perp),
                &mut pieces,
                &mut total,
            );
        }
    }
    if total.dim() < n {
        pieces.push((Origin::Complement, total.symplectic_annihilator()));
    }
    Ok(pieces)
}

fn rank2_piece(
    v: &VeechGroup,
    rep: &SymplecticRep,
    s: &Subspace,
    limits: Limits,
) -> std::result::Result<(RankTwoRep, LyapunovReport), StageError> {
    let domain = stabilizer_of_subspace(v, rep, s, limits.max_orbit).at(Stage::Restriction)?;
    let r2 = restrict_to_rank2(rep, s, &domain).at(Stage::Restriction)?;
    let report = lyapunov_exponent(&ModularEmbeddingData::from(&r2), limits.max_cosets)
        .at(Stage::Lyapunov)?;
    Ok((r2, report))
}

/// Runs the full pipeline.
pub fn analyze(
    o: &Origami,
    limits: Limits,
    exec: Exec,
) -> std::result::Result<Analysis, StageError> {
    o.validate().at(Stage::Validate)?;
    let stratum = o.stratum();
    let veech = veech_group(o, limits.max_orbit).at(Stage::VeechGroup)?;
    let rep = homology_rep(&veech, exec).at(Stage::Monodromy)?;
    let split = split_homology(o, &rep).at(Stage::Splitting)?;
    let results = exec.map(&split, |(_, s)| {
        (s.dim() == 2).then(|| rank2_piece(&veech, &rep, s, limits))
    });
    let mut pieces = Vec::with_capacity(split.len());
    for ((origin, subspace), res) in split.into_iter().zip(results) {
        let (rank2, report) = match res.transpose()? {
            Some((r2, rep)) => (Some(r2), Some(rep)),
            None => (None, None),
        };
        pieces.push(Piece {
            origin,
            subspace,
            rank2,
            report,
        });
    }
    let analysis = Analysis {
        origami: o.clone(),
        stratum,
        veech,
        rep,
        pieces,
    };
    if let Some(Piece {
        report: Some(r), ..
    }) = analysis.pieces.first()
    {
        if !r.lambda.is_one() {
            return Err(StageError {
                stage: Stage::Lyapunov,
                error: Error::Inconsistent(format!("tautological piece has exponent {}", r.lambda)),
            });
        }
    }
    Ok(analysis)
}

//! Realizing a rational `λ ∈ (0, 1]` as the exponent of a covering of the thrice-punctured
//! sphere, branched over `r` further interior points with fibers of sizes `t₁, …, t_r`:
//! `λ = d / (d(r+1) − Σ tᵢ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_transitive, Permutation};
use crate::exec::Exec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub r: usize,
    pub d: usize,
    pub t: Vec<usize>,
}

fn small(x: &BigInt, what: &str) -> Result<usize> {
    x.to_usize()
        .ok_or_else(|| Error::OutOfRange(format!("{what} {x} is too large")))
}

/// Smallest `r`, then smallest `d` (a multiple of `p`), with a balanced ascending `t`.
///
/// Writing `λ = p/q` and `c = q/p − 1`, a solution needs `r > c` (or `r = c = 0`), and
/// then `Σ tᵢ = d(r+1) − dq/p` lies in `[r, rd]` exactly when `d(rp − q + p) ≥ rp`.
pub fn solve_parameters(lambda: &BigRational) -> Result<Parameters> {
    if !lambda.is_positive() || lambda > &BigRational::one() {
        return Err(Error::OutOfRange(format!("{lambda} is not in (0, 1]")));
    }
    let p = small(lambda.numer(), "numerator")?;
    let q = small(lambda.denom(), "denominator")?;
    if p == q {
        return Ok(Parameters {
            r: 0,
            d: 1,
            t: Vec::new(),
        });
    }
    let r = (q - p) / p + 1;
    let gap = r * p + p - q;
    let d = p * r.div_ceil(gap);
    let l = d * (r + 1) - d * q / p;
    if l < r || l > r * d {
        return Err(Error::InvalidParameters(format!(
            "no fiber sizes for r = {r}, d = {d}"
        )));
    }
    let (base, extra) = (l / r, l % r);
    let t = (0..r)
        .map(|i| if i < r - extra { base } else { base + 1 })
        .collect();
    Ok(Parameters { r, d, t })
}

/// Kind of a puncture of the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Cusp,
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoint {
    pub label: String,
    pub kind: PointKind,
    pub sigma: Permutation,
}

/// Monodromy of the covering around `0, 1, ∞, x₁, …, x_r`; the product
/// `σ₀ σ₁ σ_∞ σ_{x₁} ⋯ σ_{x_r}` is the identity, and `σ₁` is the one determined by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSpec {
    pub params: Parameters,
    pub points: Vec<BranchPoint>,
    pub determined: String,
}

/// `σ₀ = id`, `σ_∞ = (0 1 … d−1)`, `σ_{xᵢ}` a single `(d − tᵢ + 1)`-cycle.
pub fn build_covering(params: &Parameters) -> Result<CoveringSpec> {
    let Parameters { r, d, t } = params;
    if *d == 0 || t.len() != *r || t.iter().any(|&ti| ti == 0 || ti > *d) {
        return Err(Error::InvalidParameters(format!(
            "r = {r}, d = {d}, t = {t:?}"
        )));
    }
    let d = *d;
    let cycle = |len: usize| Permutation::from_cycles(d, &[(0..len).collect()]);
    let sigma_inf = cycle(d)?;
    let sigma_x: Vec<Permutation> = t
        .iter()
        .map(|&ti| cycle(d - ti + 1))
        .collect::<Result<_>>()?;
    let sigma_0 = Permutation::identity(d);
    let rest = sigma_x
        .iter()
        .try_fold(sigma_inf.clone(), |acc, s| acc.compose(s))?;
    let sigma_1 = sigma_0.compose(&rest)?.inverse();
    let mut points = vec![
        BranchPoint {
            label: "0".into(),
            kind: PointKind::Cusp,
            sigma: sigma_0,
        },
        BranchPoint {
            label: "1".into(),
            kind: PointKind::Cusp,
            sigma: sigma_1,
        },
        BranchPoint {
            label: "oo".into(),
            kind: PointKind::Cusp,
            sigma: sigma_inf,
        },
    ];
    for (i, s) in sigma_x.into_iter().enumerate() {
        points.push(BranchPoint {
            label: format!("x{}", i + 1),
            kind: PointKind::Interior,
            sigma: s,
        });
    }
    Ok(CoveringSpec {
        params: params.clone(),
        points,
        determined: "1".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub genus: usize,
    pub cusps: usize,
    pub euler_characteristic: i64,
    pub lambda: BigRational,
}

/// Euler characteristic of the punctured cover, genus by Riemann–Hurwitz and the exponent.
pub fn certify(spec: &CoveringSpec) -> Result<Certificate> {
    let bad = |m: String| Err(Error::InconsistentSpec(m));
    let d = spec.params.d;
    let sigmas: Vec<&Permutation> = spec.points.iter().map(|p| &p.sigma).collect();
    if sigmas.iter().any(|s| s.degree() != d) {
        return bad("permutations of different degrees".into());
    }
    if !is_transitive(&sigmas) {
        return bad("monodromy group is not transitive".into());
    }
    let product = sigmas
        .iter()
        .try_fold(Permutation::identity(d), |acc, s| acc.compose(s))?;
    if !product.is_identity() {
        return bad("product of the local monodromies is not the identity".into());
    }
    let interior: Vec<&BranchPoint> = spec
        .points
        .iter()
        .filter(|p| p.kind == PointKind::Interior)
        .collect();
    for (p, &ti) in interior.iter().zip(&spec.params.t) {
        if p.sigma.cycle_count() != ti {
            return bad(format!(
                "{} has {} cycles, expected {ti}",
                p.label,
                p.sigma.cycle_count()
            ));
        }
    }
    let (d, r) = (d as i64, interior.len() as i64);
    let filled: i64 = interior.iter().map(|p| p.sigma.cycle_count() as i64).sum();
    let chi = -d * (1 + r) + filled;
    let cusps: i64 = spec
        .points
        .iter()
        .filter(|p| p.kind == PointKind::Cusp)
        .map(|p| p.sigma.cycle_count() as i64)
        .sum();
    // 2g − 2 = −2d + Σ_p (d − #cycles(σ_p))
    let ramification: i64 = spec
        .points
        .iter()
        .map(|p| d - p.sigma.cycle_count() as i64)
        .sum();
    let (two_g, rem) = (ramification - 2 * d + 2).div_rem(&2);
    if rem != 0 || two_g < 0 {
        return bad(format!(
            "Riemann–Hurwitz gives a non-integral genus ({ramification})"
        ));
    }
    if -chi != 2 * two_g - 2 + cusps {
        return bad(format!(
            "-χ = {} but 2g − 2 + s = {}",
            -chi,
            2 * two_g - 2 + cusps
        ));
    }
    Ok(Certificate {
        genus: two_g as usize,
        cusps: cusps as usize,
        euler_characteristic: chi,
        lambda: BigRational::new(d.into(), (-chi).into()),
    })
}

/// Result of realizing one rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `λ = 0` comes from a constant family; no covering is built.
    ConstantFamily,
    Covering {
        spec: CoveringSpec,
        certificate: Certificate,
    },
}

impl Construction {
    pub fn lambda(&self) -> BigRational {
        match self {
            Construction::ConstantFamily => BigRational::zero(),
            Construction::Covering { certificate, .. } => certificate.lambda.clone(),
        }
    }

    pub fn to_json(&self, requested: &BigRational) -> ConstructionJson {
        match self {
            Construction::ConstantFamily => ConstructionJson {
                lambda: requested.to_string(),
                constant_family: true,
                parameters: None,
                covering: None,
                certificate: None,
            },
            Construction::Covering { spec, certificate } => ConstructionJson {
                lambda: requested.to_string(),
                constant_family: false,
                parameters: Some(spec.params.clone()),
                covering: Some(CoveringJson {
                    degree: spec.params.d,
                    determined: spec.determined.clone(),
                    monodromy: spec
                        .points
                        .iter()
                        .map(|p| MonodromyJson {
                            point: p.label.clone(),
                            kind: p.kind,
                            cycles: p.sigma.to_cycles_one_based(),
                        })
                        .collect(),
                }),
                certificate: Some(CertificateJson {
                    genus: certificate.genus,
                    cusps: certificate.cusps,
                    euler_characteristic: certificate.euler_characteristic,
                    lambda: certificate.lambda.to_string(),
                }),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionJson {
    pub lambda: String,
    pub constant_family: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Parameters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering: Option<CoveringJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringJson {
    pub degree: usize,
    pub determined: String,
    pub monodromy: Vec<MonodromyJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyJson {
    pub point: String,
    pub kind: PointKind,
    pub cycles: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub genus: usize,
    pub cusps: usize,
    pub euler_characteristic: i64,
    pub lambda: String,
}

/// Solve, build and certify; the certified exponent must equal the requested one.
pub fn construct(lambda: &BigRational) -> Result<Construction> {
    if lambda.is_zero() {
        return Ok(Construction::ConstantFamily);
    }
    let params = solve_parameters(lambda)?;
    let spec = build_covering(&params)?;
    let certificate = certify(&spec)?;
    if &certificate.lambda != lambda {
        return Err(Error::InconsistentSpec(format!(
            "certified {} for requested {lambda}",
            certificate.lambda
        )));
    }
    Ok(Construction::Covering { spec, certificate })
}

/// Parses `p/q`, an integer, or a decimal-free fraction with surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
            d.trim().parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Every rational in `(0, 1]` with denominator at most `n` in lowest terms, ordered by
/// denominator then numerator, preceded by `0`.
pub fn rationals_up_to(n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    for q in 1..=n {
        for p in 1..=q {
            if p.gcd(&q) == 1 {
                out.push(BigRational::new(p.into(), q.into()));
            }
        }
    }
    out
}

/// Runs [`construct`] on every rational of [`rationals_up_to`].
pub fn sweep(n: usize, exec: Exec) -> Result<Vec<(BigRational, Construction)>> {
    let values = rationals_up_to(n);
    let built = exec.try_map(&values, construct)?;
    Ok(values.into_iter().zip(built).collect())
}

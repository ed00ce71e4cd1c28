use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::mat2::{Cusp, Mat2Z};
use crate::error::{Error, Result};
use crate::exact::matrix::ext_gcd;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ElementType {
    Center,
    Elliptic { order: u32 },
    Parabolic { fixed_point: Cusp },
    Hyperbolic,
}

impl ElementType {
    pub fn short(&self) -> String {
        match self {
            ElementType::Center => "central".into(),
            ElementType::Elliptic { order } => format!("elliptic({order})"),
            ElementType::Parabolic { fixed_point } => format!("parabolic@{fixed_point}"),
            ElementType::Hyperbolic => "hyperbolic".into(),
        }
    }

    pub fn is_parabolic(&self) -> bool {
        matches!(self, ElementType::Parabolic { .. })
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self, ElementType::Elliptic { .. })
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.short())
    }
}

pub fn classify(m: &Mat2Z) -> ElementType {
    if m.is_central() {
        return ElementType::Center;
    }
    let tr = m.trace().abs();
    match tr.to_u32() {
        Some(0) => ElementType::Elliptic { order: 2 },
        Some(1) => ElementType::Elliptic { order: 3 },
        Some(2) => ElementType::Parabolic {
            fixed_point: parabolic_fixed_point(m),
        },
        _ => ElementType::Hyperbolic,
    }
}

fn parabolic_fixed_point(m: &Mat2Z) -> Cusp {
    if m.c.is_zero() {
        Cusp::infinity()
    } else {
        // double root of c z² + (d − a) z − b = 0
        Cusp::from_rational(&BigRational::new(&m.a - &m.d, BigInt::from(2) * &m.c))
    }
}

/// For parabolic `p`, returns `(g, m)` with `g·∞` the fixed point and `g⁻¹ p g = ±T^m`.
pub fn translation_exponent(p: &Mat2Z) -> Result<(Mat2Z, BigInt)> {
    let ElementType::Parabolic { fixed_point } = classify(p) else {
        return Err(Error::NotParabolic);
    };
    let g = if fixed_point.is_infinity() {
        Mat2Z::identity()
    } else {
        let (pn, qd) = (fixed_point.num.clone(), fixed_point.den.clone());
        // p·y − x·q = 1
        let (gcd, s, t) = ext_gcd(&pn, &qd);
        debug_assert!(gcd.is_one());
        Mat2Z::new(pn, -t, qd, s).expect("unimodular completion")
    };
    let conj = g.inverse().mul(p).mul(&g);
    debug_assert!(conj.c.is_zero() && conj.a == conj.d);
    let m = if conj.a.is_positive() {
        conj.b.clone()
    } else {
        -conj.b.clone()
    };
    Ok((g, m))
}

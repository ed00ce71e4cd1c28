use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::MatZ;

/// An element of SL₂(ℤ), entries `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.det() != BigInt::one() {
            return Err(Error::InvalidInput(format!(
                "{m} does not have determinant 1"
            )));
        }
        Ok(m)
    }

    /// Panics unless the determinant is 1; intended for literals.
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into()).expect("determinant 1")
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    pub fn minus_identity() -> Self {
        Self::from_i64(-1, 0, 0, -1)
    }

    pub fn s() -> Self {
        Self::from_i64(0, -1, 1, 0)
    }

    pub fn t() -> Self {
        Self::from_i64(1, 1, 0, 1)
    }

    pub fn t_pow(k: i64) -> Self {
        Self::from_i64(1, k, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2Z) -> Mat2Z {
        Mat2Z {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> Mat2Z {
        Mat2Z {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Mat2Z {
        Mat2Z {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> Mat2Z {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Mat2Z::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2Z::identity()
    }

    /// `±I`.
    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Sign-normalized representative of the class in PSL₂(ℤ): first nonzero of `(c, d)` positive.
    pub fn projective_key(&self) -> Mat2Z {
        let flip = if self.c.is_zero() {
            self.d.is_negative()
        } else {
            self.c.is_negative()
        };
        if flip {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn proj_eq(&self, o: &Mat2Z) -> bool {
        self == o || *self == o.neg()
    }

    /// Möbius action on a point of ℙ¹(ℚ).
    pub fn act(&self, p: &Cusp) -> Cusp {
        Cusp::from_pair(
            &self.a * &p.num + &self.b * &p.den,
            &self.c * &p.num + &self.d * &p.den,
        )
    }

    pub fn to_matz(&self) -> MatZ {
        MatZ::from_rows(vec![
            vec![self.a.clone(), self.b.clone()],
            vec![self.c.clone(), self.d.clone()],
        ])
    }

    pub fn from_matz(m: &MatZ) -> Result<Mat2Z> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::InvalidInput("expected a 2x2 matrix".into()));
        }
        Mat2Z::new(
            m[(0, 0)].clone(),
            m[(0, 1)].clone(),
            m[(1, 0)].clone(),
            m[(1, 1)].clone(),
        )
    }

    pub fn to_rows(&self) -> [[BigInt; 2]; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [self.c.clone(), self.d.clone()],
        ]
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A point of ℙ¹(ℚ) in lowest terms with `den ≥ 0`; `∞ = (1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cusp {
    pub num: BigInt,
    pub den: BigInt,
}

impl Cusp {
    pub fn infinity() -> Self {
        Cusp {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn from_pair(num: BigInt, den: BigInt) -> Self {
        let g = num.gcd(&den);
        assert!(!g.is_zero(), "0/0 is not a point of P^1");
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() || (d.is_zero() && n.is_negative()) {
            n = -n;
            d = -d;
        }
        Cusp { num: n, den: d }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_pair(q.numer().clone(), q.denom().clone())
    }

    pub fn is_infinity(&self) -> bool {
        self.den.is_zero()
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("oo")
        } else if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

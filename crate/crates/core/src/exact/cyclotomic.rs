use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::{kernel_q, MatQ, Q};
use crate::error::{Error, Result};

/// Coefficients (constant term first) of the `d`-th cyclotomic polynomial.
pub fn cyclotomic_poly(d: usize) -> Vec<BigInt> {
    assert!(d > 0);
    // xᵈ − 1 divided by Φₑ for every proper divisor e of d
    let mut p = vec![BigInt::zero(); d + 1];
    p[0] = -BigInt::one();
    p[d] = BigInt::one();
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        p = div_exact(&p, &cyclotomic_poly(e));
    }
    p
}

/// Exact division of monic integer polynomials.
fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        for (i, a) in den.iter().enumerate() {
            rem[k + i] -= &c * a;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// `p(m)` by Horner's rule.
pub fn eval_poly(p: &[BigInt], m: &MatQ) -> MatQ {
    let n = m.rows();
    let mut acc = MatQ::zeros(n, n);
    for c in p.iter().rev() {
        acc = acc
            .mul(m)
            .add(&MatQ::identity(n).scale(&Q::from_integer(c.clone())));
    }
    acc
}

/// Basis of `ker Φ_d(m)`, where `mⁿ = 1` and `d | n`.
pub fn cyclotomic_kernel(m: &MatQ, n: usize, d: usize) -> Result<Vec<Vec<Q>>> {
    if !m.is_square() || n == 0 || d == 0 || !n.is_multiple_of(d) {
        return Err(Error::InvalidInput(
            "cyclotomic_kernel needs a square matrix and d | n".into(),
        ));
    }
    if !m.pow(n).is_identity() {
        return Err(Error::OrderMismatch { n });
    }
    Ok(kernel_q(&eval_poly(&cyclotomic_poly(d), m)))
}

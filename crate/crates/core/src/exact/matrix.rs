use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Q = BigRational;

pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}
impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Dense row-major matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatZ = Matrix<BigInt>;
pub type MatQ = Matrix<Q>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `n`).
    pub fn from_cols(n: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| {
                    if v[j].is_zero() {
                        acc
                    } else {
                        acc + self[(i, j)].clone() * v[j].clone()
                    }
                })
            })
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows) && self.is_square()
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// The block-diagonal standard symplectic form with blocks `[[0,1],[-1,0]]`.
    pub fn standard_j(n: usize) -> Self {
        let mut j = Self::zeros(n, n);
        for k in 0..n / 2 {
            j[(2 * k, 2 * k + 1)] = T::one();
            j[(2 * k + 1, 2 * k)] = -T::one();
        }
        j
    }

    /// `uᵀ G v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        let gv = self.mul_vec(v);
        u.iter()
            .zip(gv)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zi(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn mat_z(rows: &[&[i64]]) -> MatZ {
    MatZ::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
}

pub fn to_q(m: &MatZ) -> MatQ {
    m.map(|x| Q::from_integer(x.clone()))
}

pub fn vec_to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// Converts back to integers, or `None` if some entry is not integral.
pub fn to_z(m: &MatQ) -> Option<MatZ> {
    if m.data.iter().any(|x| !x.is_integer()) {
        return None;
    }
    Some(m.map(|x| x.to_integer()))
}

/// Reduced row-echelon form and pivot columns.
pub fn rref(m: &MatQ) -> (MatQ, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(row, j)].clone();
                a[(row, j)] = tmp;
            }
        }
        let inv = Q::one() / a[(row, col)].clone();
        for j in col..a.cols {
            a[(row, j)] = a[(row, j)].clone() * inv.clone();
        }
        for i in 0..a.rows {
            if i != row && !a[(i, col)].is_zero() {
                let f = a[(i, col)].clone();
                for j in col..a.cols {
                    let v = a[(row, j)].clone();
                    if !v.is_zero() {
                        a[(i, j)] = a[(i, j)].clone() - f.clone() * v;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &MatQ) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column.
pub fn kernel_q(m: &MatQ) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(m);
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect()
}

pub fn inverse_q(m: &MatQ) -> Option<MatQ> {
    assert!(m.is_square());
    let n = m.rows;
    let mut aug = MatQ::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Q::one();
    }
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let mut inv = MatQ::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = r[(i, n + j)].clone();
        }
    }
    Some(inv)
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_z(m: &MatZ) -> Option<MatZ> {
    inverse_q(&to_q(m)).and_then(|i| to_z(&i))
}

/// Canonical basis (nonzero rows of the RREF) of the span of `vectors` in `Qⁿ`.
pub fn echelon_basis(n: usize, vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = MatQ::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols, n);
    let (r, piv) = rref(&m);
    (0..piv.len()).map(|i| r.row(i)).collect()
}

/// Clears denominators and divides by the content, giving a primitive integer vector.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Extended gcd: `(g, s, t)` with `s a + t b = g ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Z-basis of `span_Q(vectors) ∩ Zⁿ` (the saturation of the integer lattice they span).
///
/// Unimodular row operations bring the `n×k` matrix of the vectors to echelon
/// form `U B = [H; 0]`; the first `rank` columns of `U⁻¹` then span the saturation.
pub fn saturate(n: usize, vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = vectors.len();
    let mut b = MatZ::from_cols(n, vectors);
    let mut uinv = MatZ::identity(n);
    let mut row = 0;
    for col in 0..k {
        if row == n {
            break;
        }
        // pivot on the nonzero entry of smallest absolute value in this column below `row`
        while let Some(p) = (row..n)
            .filter(|&i| !b[(i, col)].is_zero())
            .min_by(|&i, &j| b[(i, col)].abs().cmp(&b[(j, col)].abs()))
        {
            swap_rows(&mut b, p, row);
            swap_cols(&mut uinv, p, row);
            let mut done = true;
            for i in row + 1..n {
                if b[(i, col)].is_zero() {
                    continue;
                }
                let f = b[(i, col)].div_floor(&b[(row, col)]);
                // row_i -= f row_row ; inverse update: col_row += f col_i
                for j in 0..k {
                    let v = b[(row, j)].clone();
                    b[(i, j)] -= &f * v;
                }
                for r in 0..n {
                    let v = uinv[(r, i)].clone();
                    uinv[(r, row)] += &f * v;
                }
                if !b[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !b[(row, col)].is_zero() {
            row += 1;
        }
    }
    (0..row).map(|j| uinv.col(j)).collect()
}

fn swap_rows(m: &mut MatZ, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols {
            m.data.swap(a * m.cols + j, b * m.cols + j);
        }
    }
}

fn swap_cols(m: &mut MatZ, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows {
            m.data.swap(i * m.cols + a, i * m.cols + b);
        }
    }
}

/// Coordinates of `v` in terms of the linearly independent `basis`, if `v` lies in their span.
pub fn coordinates_in(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let n = v.len();
    let k = basis.len();
    let mut aug = MatQ::zeros(n, k + 1);
    for i in 0..n {
        for (j, b) in basis.iter().enumerate() {
            aug[(i, j)] = b[i].clone();
        }
        aug[(i, k)] = v[i].clone();
    }
    let (r, piv) = rref(&aug);
    if piv.contains(&k) {
        return None;
    }
    let mut x = vec![Q::zero(); k];
    for (i, &p) in piv.iter().enumerate() {
        x[p] = r[(i, k)].clone();
    }
    Some(x)
}

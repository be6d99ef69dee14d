//! Exact integer matrices and rational vectors.
//!
//! Everything here runs on arbitrary-precision integers. Linear systems are
//! solved with Bareiss fraction-free elimination followed by a rational back
//! substitution, so no floating point value is ever produced.

use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("singular system")]
    Singular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self, LinalgError>
    where
        T: Clone + Into<BigInt>,
    {
        let dim = rows.len();
        if dim == 0 {
            return Err(LinalgError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, values) in rows.iter().enumerate() {
            if values.len() != dim {
                return Err(LinalgError::NotSquare { row, len: values.len(), dim });
            }
            entries.extend(values.iter().cloned().map(Into::into));
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn neg(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|x| -x).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn mul_int(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        self.check_len(x.len())?;
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn mul_rational(&self, x: &[BigRational]) -> Result<RationalVector, LinalgError> {
        self.check_len(x.len())?;
        Ok(RationalVector(
            (0..self.dim)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(x)
                        .fold(BigRational::zero(), |acc, (a, b)| acc + b * a)
                })
                .collect(),
        ))
    }

    fn check_len(&self, got: usize) -> Result<(), LinalgError> {
        if got != self.dim {
            return Err(LinalgError::DimensionMismatch { expected: self.dim, got });
        }
        Ok(())
    }

    /// Sylvester's criterion applied to `-self`: every leading principal minor
    /// of `-self` must be strictly positive.
    ///
    /// Bareiss elimination without pivoting leaves the k-th leading principal
    /// minor on the diagonal at step k, so the first non-positive pivot ends
    /// the test.
    pub fn is_negative_definite(&self) -> Result<bool, LinalgError> {
        if let Some((i, j)) = self.first_asymmetry() {
            return Err(LinalgError::NotSymmetric(i, j));
        }
        let n = self.dim;
        let mut a: Vec<Vec<BigInt>> = self.neg().rows();
        let mut prev = BigInt::one();
        for k in 0..n {
            if !a[k][k].is_positive() {
                return Ok(false);
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(true)
    }

    /// Exact determinant via Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        let mut a = self.rows();
        match bareiss(&mut a, self.dim) {
            Ok(sign) => sign * a[self.dim - 1][self.dim - 1].clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Solves `self * x = b` exactly.
    pub fn solve_exact(&self, b: &[BigInt]) -> Result<RationalVector, LinalgError> {
        self.check_len(b.len())?;
        let n = self.dim;
        let mut aug: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        bareiss(&mut aug, n)?;
        Ok(RationalVector(back_substitute(&aug, n, n)))
    }

    pub fn solve_exact_i64(&self, b: &[i64]) -> Result<RationalVector, LinalgError> {
        let b: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
        self.solve_exact(&b)
    }

    /// Exact inverse, returned as rows of rationals.
    pub fn inverse_exact(&self) -> Result<RationalMatrix, LinalgError> {
        let n = self.dim;
        let mut aug: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        bareiss(&mut aug, n)?;
        let columns: Vec<Vec<BigRational>> =
            (0..n).map(|c| back_substitute(&aug, n, n + c)).collect();
        let rows = (0..n).map(|i| (0..n).map(|j| columns[j][i].clone()).collect()).collect();
        Ok(RationalMatrix { dim: n, rows })
    }
}

/// Forward Bareiss elimination on the first `n` columns of `a`, with row swaps
/// to the first nonzero pivot. Returns the sign of the row permutation.
fn bareiss(a: &mut [Vec<BigInt>], n: usize) -> Result<BigInt, LinalgError> {
    let width = a[0].len();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(LinalgError::Singular)?;
        if pivot != k {
            a.swap(pivot, k);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..width {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign)
}

fn back_substitute(a: &[Vec<BigInt>], n: usize, col: usize) -> Vec<BigRational> {
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(a[i][col].clone());
        for j in (i + 1)..n {
            acc -= &x[j] * BigRational::from_integer(a[i][j].clone());
        }
        x[i] = acc / BigRational::from_integer(a[i][i].clone());
    }
    x
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    rows: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.rows[row][col]
    }

    pub fn column(&self, col: usize) -> Vec<BigRational> {
        self.rows.iter().map(|r| r[col].clone()).collect()
    }

    pub fn mul_int(&self, x: &[BigInt]) -> Result<RationalVector, LinalgError> {
        if x.len() != self.dim {
            return Err(LinalgError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(RationalVector(
            self.rows
                .iter()
                .map(|r| {
                    r.iter().zip(x).fold(BigRational::zero(), |acc, (a, b)| {
                        acc + a * BigRational::from_integer(b.clone())
                    })
                })
                .collect(),
        ))
    }

    /// `self * other` where `other` is an integer matrix.
    pub fn mul_exact(&self, other: &ExactMatrix) -> RationalMatrix {
        let n = self.dim;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(BigRational::zero(), |acc, k| {
                            acc + &self.rows[i][k] * BigRational::from_integer(other.get(k, j).clone())
                        })
                    })
                    .collect()
            })
            .collect();
        RationalMatrix { dim: n, rows }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }
}

/// Exact rationals indexed by vertex position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn from_integers(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// The entries as machine integers, if every entry is an integer that fits.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Formats each entry as `n` or `n/d`.
    pub fn display_entries(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl Deref for RationalVector {
    type Target = [BigRational];
    fn deref(&self) -> &[BigRational] {
        &self.0
    }
}

impl Index<usize> for RationalVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.display_entries().join(", "))
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

/// Ceiling of an exact rational.
pub fn ceil_rational(x: &BigRational) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

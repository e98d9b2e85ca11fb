//! Small dense square matrices over arbitrary-precision integers.
//!
//! Matrices act on column vectors: the `j`-th column holds the coordinates
//! of the image of the `j`-th basis vector.

use std::fmt;
use std::ops::Mul;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SquareMatrix {
    #[serde(with = "crate::serde_big::matrix")]
    rows: Vec<Vec<BigInt>>,
}

impl SquareMatrix {
    /// Builds a matrix from its rows. Panics if the rows are ragged or the
    /// shape is not square, since every caller constructs fixed shapes.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let dim = rows.len();
        assert!(
            rows.iter().all(|row| row.len() == dim),
            "matrix must be square"
        );
        Self { rows }
    }

    pub fn from_i64<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn diagonal(entries: Vec<BigInt>) -> Self {
        let dim = entries.len();
        let mut m = Self::identity(dim);
        for (i, e) in entries.into_iter().enumerate() {
            m.rows[i][i] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.rows[row][col]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
            .collect();
        Self { rows }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(BigInt::zero(), |acc, k| {
                            acc + &self.rows[i][k] * &rhs.rows[k][j]
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Self { rows })
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    /// Determinant by cofactor expansion; the matrices here are at most 3x3.
    pub fn determinant(&self) -> BigInt {
        fn det(rows: &[Vec<BigInt>]) -> BigInt {
            match rows.len() {
                0 => BigInt::one(),
                1 => rows[0][0].clone(),
                2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
                n => {
                    let mut total = BigInt::zero();
                    for col in 0..n {
                        let minor: Vec<Vec<BigInt>> = rows[1..]
                            .iter()
                            .map(|row| {
                                row.iter()
                                    .enumerate()
                                    .filter(|&(j, _)| j != col)
                                    .map(|(_, x)| x.clone())
                                    .collect()
                            })
                            .collect();
                        let term = &rows[0][col] * det(&minor);
                        if col % 2 == 0 {
                            total += term;
                        } else {
                            total -= term;
                        }
                    }
                    total
                }
            }
        }
        det(&self.rows)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

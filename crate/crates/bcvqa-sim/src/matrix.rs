//! Small dense complex square matrices used for verification and oracles.
//!
//! Simulation never builds full matrices; these exist to compare circuits against
//! explicit matrices and dense reference computations.

use crate::scalar::Real;
use num_complex::Complex;
use std::ops::Mul;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    /// All-zero `dim × dim` matrix.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Builds a matrix from complex rows; every row must have `rows.len()` entries.
    ///
    /// # Panics
    /// Panics if the rows do not form a square matrix.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, *v);
            }
        }
        m
    }

    /// Builds a real-valued matrix from `f64` rows.
    ///
    /// # Panics
    /// Panics if the rows do not form a square matrix.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cr: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| Complex::new(T::of(x), T::zero()))
                    .collect()
            })
            .collect();
        Self::from_rows(&cr)
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at row `r`, column `c`.
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.dim + c]
    }

    /// Sets the entry at row `r`, column `c`.
    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.dim + c] = v;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.set(c, r, self.get(r, c).conj());
            }
        }
        m
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.set(c, r, self.get(r, c));
            }
        }
        m
    }

    /// Matrix product `self · rhs`.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..n {
                    let idx = r * n + c;
                    m.data[idx] = m.data[idx] + a * rhs.get(k, c);
                }
            }
        }
        m
    }

    /// Matrix-vector product.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|r| {
                (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, c| {
                    acc + self.get(r, c) * v[c]
                })
            })
            .collect()
    }

    /// Elementwise sum.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Multiplies every entry by a real factor.
    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Multiplies every entry by a complex factor.
    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs` (rhs occupies the low-order index bits).
    pub fn kron(&self, rhs: &Self) -> Self {
        let n = self.dim * rhs.dim;
        let mut m = Self::zeros(n);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                for r2 in 0..rhs.dim {
                    for c2 in 0..rhs.dim {
                        m.set(r1 * rhs.dim + r2, c1 * rhs.dim + c2, a * rhs.get(r2, c2));
                    }
                }
            }
        }
        m
    }

    /// Largest elementwise modulus of `self − rhs`.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Whether `self · self† = I` within `tol` elementwise.
    pub fn is_unitary(&self, tol: T) -> bool {
        self.matmul(&self.dagger())
            .max_abs_diff(&Self::identity(self.dim))
            <= tol
    }

    /// Real parts as nested rows (convenient for printing and comparisons).
    pub fn real_rows(&self) -> Vec<Vec<T>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c).re).collect())
            .collect()
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

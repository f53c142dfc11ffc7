//! Dense row-major matrices over complex and real scalars.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{re, Cx, Real};

/// Rows at or above this size are multiplied in parallel.
const PAR_THRESHOLD: usize = 64;

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<Cx<T>>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::Dimension {
                expected: m,
                got: bad.len(),
            });
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: rows.concat(),
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn diagonal(diag: &[Cx<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Cx<T>] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn map(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(Cx::zero(), |a, b| a + b)
    }

    /// Real part entrywise.
    pub fn real_part(&self) -> RealMatrix<T> {
        debug_assert!(self.is_square());
        RealMatrix::from_fn(self.rows, |i, j| self[(i, j)].re)
    }

    /// Imaginary part entrywise.
    pub fn imag_part(&self) -> RealMatrix<T> {
        debug_assert!(self.is_square());
        RealMatrix::from_fn(self.rows, |i, j| self[(i, j)].im)
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn norm_fro(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn mul_vec(&self, x: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        if x.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Cx::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    /// Matrix product. Large products are split over rows with rayon; each
    /// output row is accumulated sequentially, so results do not depend on
    /// the thread count.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let (n, m) = (self.rows, rhs.cols);
        let mut out = vec![Cx::zero(); n * m];
        let kernel = |(i, out_row): (usize, &mut [Cx<T>])| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        };
        if n >= PAR_THRESHOLD && m > 0 {
            out.par_chunks_mut(m).enumerate().for_each(kernel);
        } else if m > 0 {
            out.chunks_mut(m).enumerate().for_each(kernel);
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: out,
        })
    }

    /// `self + s * I`.
    pub fn add_diagonal(&self, s: Cx<T>) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += s;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cx<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in add"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in sub"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Dense real square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// `(M + Mᵀ) / 2`.
    pub fn symmetric_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.n, |i, j| (self[(i, j)] + self[(j, i)]) * half)
    }

    /// `(M − Mᵀ) / 2`.
    pub fn antisymmetric_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.n, |i, j| (self[(i, j)] - self[(j, i)]) * half)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|v| v.abs()).fold(T::zero(), T::max)
    }

    pub fn is_zero_within(&self, tol: T) -> bool {
        self.max_abs() <= tol
    }

    /// `(M ξ, η) = ηᵀ M ξ` for real vectors.
    pub fn bilinear(&self, xi: &[T], eta: &[T]) -> T {
        debug_assert_eq!(xi.len(), self.n);
        debug_assert_eq!(eta.len(), self.n);
        let mut acc = T::zero();
        for (k, &e) in eta.iter().enumerate() {
            let row = &self.data[k * self.n..(k + 1) * self.n];
            let mx: T = row.iter().zip(xi).map(|(&m, &x)| m * x).sum();
            acc += e * mx;
        }
        acc
    }

    /// `(M ξ, ξ)`.
    pub fn quadratic(&self, xi: &[T]) -> T {
        self.bilinear(xi, xi)
    }

    pub fn to_complex(&self) -> CMatrix<T> {
        CMatrix::from_fn(self.n, self.n, |i, j| re(self[(i, j)]))
    }

    /// Embeds `s · M` as the imaginary part of a complex matrix.
    pub fn to_imaginary(&self, s: T) -> CMatrix<T> {
        CMatrix::from_fn(self.n, self.n, |i, j| Cx::new(T::zero(), s * self[(i, j)]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T> Index<(usize, usize)> for RealMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for RealMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Add for &RealMatrix<T> {
    type Output = RealMatrix<T>;
    fn add(self, rhs: &RealMatrix<T>) -> RealMatrix<T> {
        assert_eq!(self.n, rhs.n, "shape mismatch in add");
        RealMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &RealMatrix<T> {
    type Output = RealMatrix<T>;
    fn sub(self, rhs: &RealMatrix<T>) -> RealMatrix<T> {
        assert_eq!(self.n, rhs.n, "shape mismatch in sub");
        RealMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(v: &[Cx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `Σ u_k conj(v_k)`.
pub fn inner<T: Real>(u: &[Cx<T>], v: &[Cx<T>]) -> Cx<T> {
    u.iter()
        .zip(v)
        .fold(Cx::zero(), |acc, (a, b)| acc + *a * b.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn matmul_matches_hand_computation() {
        let a = CMatrix::<f64>::from_rows(&[
            vec![cx(1.0, 0.0), cx(0.0, 1.0)],
            vec![cx(2.0, 0.0), cx(1.0, -1.0)],
        ])
        .unwrap();
        let p = a.matmul(&a).unwrap();
        // [[1 + 2i, i + i(1-i)], [2 + 2(1-i), 2i + (1-i)^2]]
        assert_eq!(p[(0, 0)], cx(1.0, 2.0));
        assert_eq!(p[(0, 1)], cx(1.0, 2.0));
        assert_eq!(p[(1, 0)], cx(4.0, -2.0));
        assert_eq!(p[(1, 1)], cx(0.0, 0.0));
    }

    #[test]
    fn parallel_and_serial_products_agree_bitwise() {
        let n = 70;
        let a = CMatrix::<f64>::from_fn(n, n, |i, j| {
            cx((i as f64 * 0.37 + j as f64).sin(), (i * j) as f64 * 1e-3)
        });
        let b = a.adjoint();
        let p = a.matmul(&b).unwrap();
        for i in [0usize, 13, 69] {
            for j in [0usize, 5, 69] {
                let mut acc = Cx::zero();
                for k in 0..n {
                    acc += a[(i, k)] * b[(k, j)];
                }
                assert_eq!(p[(i, j)], acc);
            }
        }
    }

    #[test]
    fn bilinear_convention_is_eta_transpose_m_xi() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        // (M xi, eta) = eta^T M xi = eta_0 * xi_1
        assert_eq!(m.bilinear(&[0.0, 3.0], &[2.0, 0.0]), 6.0);
        assert_eq!(m.bilinear(&[2.0, 0.0], &[0.0, 3.0]), 0.0);
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let err =
            CMatrix::<f64>::from_rows(&[vec![Cx::zero(); 2], vec![Cx::zero(); 1]]).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }
}

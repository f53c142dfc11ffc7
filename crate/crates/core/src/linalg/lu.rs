//! LU factorisation with partial pivoting for dense complex systems.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::matrix::CMatrix;
use crate::scalar::{Cx, Real};

/// `P A = L U` packed in a single matrix.
#[derive(Clone, Debug)]
pub struct LuFactor<T> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> LuFactor<T> {
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        let n = a.ensure_square()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.norm_max();
        let tiny = scale * T::epsilon() * T::from_usize_lossy(n.max(1)) * T::lit(1e-3);
        for col in 0..n {
            let (piv, piv_mag) = (col..n).map(|r| (r, lu[(r, col)].norm())).fold(
                (col, T::neg_infinity()),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
            if piv_mag <= tiny || piv_mag.is_zero() {
                return Err(Error::Singular);
            }
            if piv != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
                perm.swap(col, piv);
            }
            let inv = Cx::new(T::one(), T::zero()) / lu[(col, col)];
            for r in (col + 1)..n {
                let f = lu[(r, col)] * inv;
                lu[(r, col)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in (col + 1)..n {
                    let u = lu[(col, j)];
                    lu[(r, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve_vec(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        let mut x: Vec<Cx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve_mat(&self, b: &CMatrix<T>) -> Result<CMatrix<T>> {
        let n = self.dim();
        if b.rows() != n {
            return Err(Error::Dimension {
                expected: n,
                got: b.rows(),
            });
        }
        let mut out = CMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col: Vec<_> = (0..n).map(|i| b[(i, j)]).collect();
            let x = self.solve_vec(&col)?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }
}

/// One-shot solve of `A x = b`.
pub fn solve<T: Real>(a: &CMatrix<T>, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    LuFactor::new(a)?.solve_vec(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn solves_pivoting_system() {
        let a = CMatrix::from_rows(&[
            vec![cx(0.0, 0.0), cx(1.0, 1.0), cx(2.0, 0.0)],
            vec![cx(3.0, 0.0), cx(0.0, -1.0), cx(1.0, 0.0)],
            vec![cx(1.0, 2.0), cx(1.0, 0.0), cx(0.0, 0.0)],
        ])
        .unwrap();
        let x_true = vec![cx(1.0, -1.0), cx(0.5, 2.0), cx(-2.0, 0.25)];
        let b = a.mul_vec(&x_true).unwrap();
        let x = solve(&a, &b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((*u - *v).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = CMatrix::from_rows(&[
            vec![cx(1.0, 0.0), cx(2.0, 0.0)],
            vec![cx(2.0, 0.0), cx(4.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(LuFactor::new(&a).unwrap_err(), Error::Singular);
    }

    #[test]
    fn solve_mat_inverts() {
        let a = CMatrix::from_rows(&[
            vec![cx(2.0, 1.0), cx(1.0, 0.0)],
            vec![cx(0.0, 1.0), cx(3.0, 0.0)],
        ])
        .unwrap();
        let inv = LuFactor::new(&a)
            .unwrap()
            .solve_mat(&CMatrix::identity(2))
            .unwrap();
        assert!(a.matmul(&inv).unwrap().max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }
}

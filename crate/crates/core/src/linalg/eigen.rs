//! Hermitian eigendecomposition by the cyclic complex Jacobi method.
//!
//! Intended for the small matrices this crate works with (coefficient
//! matrices up to 64×64, Gram matrices of modest propagators). Each rotation
//! first removes the phase of the pivot and then applies a real Givens
//! rotation, so eigenvalues come out exactly real.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::matrix::CMatrix;
use crate::scalar::{cis, Cx, Real};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and unitary eigenvector matrix (columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Cx<T>> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    pub fn max_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    pub fn min_value(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }
}

/// Eigen-decomposes a Hermitian matrix. Only the upper triangle's pairing
/// with the lower one matters; the input is symmetrised as `(A + A*)/2`.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = a.ensure_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let half = T::lit(0.5);
    let mut m = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half);
    let mut v = CMatrix::identity(n);
    let scale = m.norm_fro();
    if scale.is_zero() {
        return Ok(HermitianEigen {
            values: vec![T::zero(); n],
            vectors: v,
        });
    }
    let tol = T::epsilon() * T::epsilon() * scale * scale;

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate_pair(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)]
            .re
            .partial_cmp(&m[(j, j)].re)
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only.
pub fn hermitian_eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<T>> {
    Ok(hermitian_eigen(a)?.values)
}

fn rotate_pair<T: Real>(m: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag <= T::min_positive_value() {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (mag + mag);
    let t = {
        let denom = tau.abs() + (T::one() + tau * tau).sqrt();
        if tau >= T::zero() {
            T::one() / denom
        } else {
            -T::one() / denom
        }
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] with apq = |apq| e^{iφ}
    let phase = cis(-apq.arg());
    let u_pp = Cx::new(c, T::zero());
    let u_pq = Cx::new(s, T::zero());
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    let n = m.rows();
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * u_pp + mq * u_qp;
        m[(i, q)] = mp * u_pq + mq * u_qq;
    }
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = u_pp.conj() * mp + u_qp.conj() * mq;
        m[(q, j)] = u_pq.conj() * mp + u_qq.conj() * mq;
    }
    m[(p, q)] = Cx::zero();
    m[(q, p)] = Cx::zero();
    m[(p, p)] = Cx::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Cx::new(m[(q, q)].re, T::zero());
    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * u_pp + vq * u_qp;
        v[(i, q)] = vp * u_pq + vq * u_qq;
    }
}

/// Largest singular value, via the Gram matrix `A* A`.
pub fn spectral_norm<T: Real>(a: &CMatrix<T>) -> Result<T> {
    let gram = a.adjoint().matmul(a)?;
    Ok(hermitian_eigen(&gram)?.max_value().max(T::zero()).sqrt())
}

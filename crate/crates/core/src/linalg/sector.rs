//! Sectors `Σ_θ = { r e^{iβ} : r ≥ 0, |β| ≤ θ }` and the least sector that
//! contains the numerical range of a coefficient matrix.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::decomp::{decompose, MatrixDecomposition};
use crate::linalg::eigen::hermitian_eigen;
use crate::linalg::matrix::{vec_norm, CMatrix};
use crate::scalar::{Cx, Real};

/// Kernel detection threshold relative to `λ_max(Re C)`.
pub const KERNEL_REL_TOL: f64 = 1e-12;
/// Allowed size of `Im C` on the kernel of `Re C`, relative to `‖Im C‖`.
pub const KERNEL_IM_TOL: f64 = 1e-10;

/// Semi-angle `θ ∈ [0, π/2)` of a sector with vertex 0.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SectorAngle<T>(T);

impl<T: Real> SectorAngle<T> {
    pub fn new(theta: T) -> Result<Self> {
        if theta.is_finite() && theta >= T::zero() && theta < T::FRAC_PI_2() {
            Ok(Self(theta))
        } else {
            Err(Error::SectorAngleRange(theta.as_f64()))
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    #[inline]
    pub fn radians(self) -> T {
        self.0
    }

    #[inline]
    pub fn tan(self) -> T {
        self.0.tan()
    }

    /// Whether `z` lies in the closed sector, allowing `slack` radians.
    pub fn contains(self, z: Cx<T>, slack: T) -> bool {
        z.is_zero() || (z.re >= T::zero() && z.arg().abs() <= self.0 + slack)
    }
}

impl<T: Real> fmt::Display for SectorAngle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Why a matrix has no enclosing sector of angle below `π/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// `Re C` has a negative eigenvalue.
    NegativeRealPart,
    /// `Im C` does not annihilate the kernel of `Re C`.
    KernelCoupling,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegativeRealPart => f.write_str("Re C has a negative eigenvalue"),
            Self::KernelCoupling => f.write_str("Im C does not vanish on the kernel of Re C"),
        }
    }
}

/// Rejection with a witness vector `ξ`.
///
/// For [`RejectReason::NegativeRealPart`], `Re (Cξ, ξ) < 0`. For
/// [`RejectReason::KernelCoupling`], `ξ` lies in the kernel of `Re C` while
/// `Im C ξ ≠ 0`, so the quotient `|(Im C η, η)| / (Re C η, η)` is unbounded
/// along `η = t ξ + (Im C) ξ` as `t → ∞` (or `(Im C ξ, ξ) ≠ 0` outright).
#[derive(Clone, Debug, PartialEq)]
pub struct SectorRejection<T> {
    pub reason: RejectReason,
    pub witness: Vec<Cx<T>>,
}

impl<T: Real> fmt::Display for SectorRejection<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reason)
    }
}

/// Outcome of [`minimal_sector_angle`].
pub type SectorResult<T> = std::result::Result<SectorAngle<T>, SectorRejection<T>>;

/// Least `θ*` with `(Cξ, ξ) ∈ Σ_{θ*}` for every `ξ ∈ ℂ^d`.
///
/// With `H = Re C` and `S = Im C`, this is `tan θ* = sup |(Sξ,ξ)| / (Hξ,ξ)`.
/// The supremum is the spectral radius of the compressed pencil
/// `Λ^{-1/2} V* S V Λ^{-1/2}` on the range of `H`, provided `S` vanishes
/// on the kernel of `H`; otherwise the matrix is rejected.
pub fn minimal_sector_angle<T: Real>(c: &CMatrix<T>) -> Result<SectorResult<T>> {
    let dec = decompose(c)?;
    Ok(sector_angle_of(&dec))
}

/// [`minimal_sector_angle`] on an existing decomposition.
pub fn sector_angle_of<T: Real>(dec: &MatrixDecomposition<T>) -> SectorResult<T> {
    let d = dec.dim();
    let h = hermitian_eigen(&dec.re_c).expect("Hermitian part is square and finite");
    let s = &dec.im_c;
    let lam_max = h.max_value();
    let s_norm = s.norm_fro();
    let kernel_tol = T::lit(KERNEL_REL_TOL) * lam_max.max(T::zero());

    if h.min_value() < -kernel_tol || (lam_max < T::zero()) {
        return Err(SectorRejection {
            reason: RejectReason::NegativeRealPart,
            witness: h.vector(0),
        });
    }

    let im_tol = T::lit(KERNEL_IM_TOL) * s_norm;
    let mut range = Vec::with_capacity(d);
    for (k, &lam) in h.values.iter().enumerate() {
        if lam > kernel_tol && lam > T::zero() {
            range.push(k);
            continue;
        }
        let v = h.vector(k);
        let sv = s.mul_vec(&v).expect("square");
        if vec_norm(&sv) > im_tol {
            return Err(SectorRejection {
                reason: RejectReason::KernelCoupling,
                witness: v,
            });
        }
    }
    if range.is_empty() || s_norm.is_zero() {
        return Ok(SectorAngle::zero());
    }

    // W_ij = (v_i* S v_j) / sqrt(λ_i λ_j) on the range of H
    let vecs: Vec<Vec<Cx<T>>> = range.iter().map(|&k| h.vector(k)).collect();
    let svecs: Vec<Vec<Cx<T>>> = vecs.iter().map(|v| s.mul_vec(v).expect("square")).collect();
    let r = range.len();
    let w = CMatrix::from_fn(r, r, |i, j| {
        let num = vecs[i]
            .iter()
            .zip(&svecs[j])
            .fold(Cx::zero(), |acc, (a, b)| acc + a.conj() * *b);
        num / (h.values[range[i]] * h.values[range[j]]).sqrt()
    });
    let mu = hermitian_eigen(&w).expect("compressed pencil is finite");
    let rho = mu.max_value().abs().max(mu.min_value().abs());
    SectorAngle::new(rho.atan()).map_err(|_| SectorRejection {
        reason: RejectReason::KernelCoupling,
        witness: vecs[0].clone(),
    })
}

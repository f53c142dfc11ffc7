//! Pointwise inequalities satisfied by sector matrices, evaluated on samples.
//!
//! Each check reports the largest *relative violation* over the samples:
//! `(lhs − rhs) / scale` with `scale = d · max|C| · (|ξ|² + |η|²)`, which
//! bounds every form appearing in the inequality. A value `≤ 0` means the
//! inequality held with slack on every sample; a small positive value is
//! rounding; a large positive value means the matrix was not in the sector.

use crate::error::{Error, Result};
use crate::linalg::decomp::{sesquilinear, MatrixDecomposition};
use crate::linalg::eigen::hermitian_eigen;
use crate::linalg::matrix::{CMatrix, RealMatrix};
use crate::linalg::sector::SectorAngle;
use crate::scalar::{Cx, Real};

/// `B_a = 0` is accepted when `max|B_a| ≤ BA_ZERO_TOL · max|C|`.
pub const BA_ZERO_TOL: f64 = 1e-12;
/// Eigenvalue floor for the PSD precondition, relative to `max|Q|`.
pub const PSD_TOL: f64 = 1e-12;
/// Violations of the trace bound beyond this fraction of `tr(U*QU)` fail it.
pub const TRACE_BOUND_TOL: f64 = 1e-10;

/// Largest relative violation per inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport<T> {
    /// `|(R_s ξ, η)| ≤ ½((R_s ξ, ξ) + (R_s η, η))`
    pub polarization: T,
    /// `|(B_s ξ, η)| ≤ ½ tan θ ((R_s ξ, ξ) + (R_s η, η))`
    pub imaginary_symmetric: T,
    /// `|(B_s ξ,ξ) + (B_s η,η) − 2(R_a ξ,η)| ≤ tan θ ((R_s ξ,ξ) + (R_s η,η) + 2(B_a ξ,η))`
    pub sector_equivalent: T,
    /// `|(R_a ξ, η)| ≤ tan θ ((R_s ξ, ξ) + (R_s η, η))`, only when `B_a = 0`.
    pub antisymmetric: Option<T>,
    /// `(R_s w, w) ≥ 0` for complex `w = ξ + iη`.
    pub positivity_real: T,
    /// `((tan θ R_s ± B_s) w, w) ≥ 0`.
    pub positivity_imaginary: T,
    /// `((2 tan θ R_s ± i R_a) w, w) ≥ 0`, only when `B_a = 0`.
    pub positivity_antisymmetric: Option<T>,
    pub samples: usize,
}

impl<T: Real> LemmaReport<T> {
    /// `(name, violation)` pairs; inapplicable checks are `None`.
    pub fn entries(&self) -> [(&'static str, Option<T>); 7] {
        [
            ("polarization", Some(self.polarization)),
            ("imaginary-symmetric", Some(self.imaginary_symmetric)),
            ("sector-equivalent", Some(self.sector_equivalent)),
            ("antisymmetric", self.antisymmetric),
            ("positivity-real", Some(self.positivity_real)),
            ("positivity-imaginary", Some(self.positivity_imaginary)),
            ("positivity-antisymmetric", self.positivity_antisymmetric),
        ]
    }

    pub fn max_violation(&self) -> T {
        self.entries()
            .iter()
            .filter_map(|(_, v)| *v)
            .fold(T::neg_infinity(), T::max)
    }

    /// Merges two reports, keeping the worst value of each check.
    pub fn merge(&self, other: &Self) -> Self {
        let opt = |a: Option<T>, b: Option<T>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        };
        Self {
            polarization: self.polarization.max(other.polarization),
            imaginary_symmetric: self.imaginary_symmetric.max(other.imaginary_symmetric),
            sector_equivalent: self.sector_equivalent.max(other.sector_equivalent),
            antisymmetric: opt(self.antisymmetric, other.antisymmetric),
            positivity_real: self.positivity_real.max(other.positivity_real),
            positivity_imaginary: self.positivity_imaginary.max(other.positivity_imaginary),
            positivity_antisymmetric: opt(
                self.positivity_antisymmetric,
                other.positivity_antisymmetric,
            ),
            samples: self.samples + other.samples,
        }
    }
}

/// Normaliser shared by the inequality checks.
pub(crate) fn form_scale<T: Real>(dec: &MatrixDecomposition<T>, xi: &[T], eta: &[T]) -> T {
    let nrm: T = xi.iter().chain(eta).map(|v| *v * *v).sum();
    let s = T::from_usize_lossy(dec.dim()) * dec.c.norm_max() * nrm;
    if s > T::zero() {
        s
    } else {
        T::one()
    }
}

/// Evaluates every constant-matrix inequality on the given real vector pairs.
pub fn lemma_suite<T: Real>(
    dec: &MatrixDecomposition<T>,
    theta: SectorAngle<T>,
    samples: &[(Vec<T>, Vec<T>)],
) -> Result<LemmaReport<T>> {
    let d = dec.dim();
    for (xi, eta) in samples {
        for v in [xi, eta] {
            if v.len() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: v.len(),
                });
            }
        }
    }
    let t = theta.tan();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let ba_zero = dec.ba_vanishes(T::lit(BA_ZERO_TOL));

    let i_ra = dec.r_a.to_imaginary(T::one());
    let rs_c = dec.r_s.to_complex();
    let bs_c = dec.b_s.to_complex();
    let pos_imag = [&rs_c.scale_real(t) + &bs_c, &rs_c.scale_real(t) - &bs_c];
    let pos_anti = [
        &rs_c.scale_real(two * t) + &i_ra,
        &rs_c.scale_real(two * t) - &i_ra,
    ];

    let neg = T::neg_infinity();
    let mut rep = LemmaReport {
        polarization: neg,
        imaginary_symmetric: neg,
        sector_equivalent: neg,
        antisymmetric: ba_zero.then_some(neg),
        positivity_real: neg,
        positivity_imaginary: neg,
        positivity_antisymmetric: ba_zero.then_some(neg),
        samples: samples.len(),
    };

    for (xi, eta) in samples {
        let scale = form_scale(dec, xi, eta);
        let rs_xx = dec.r_s.quadratic(xi);
        let rs_yy = dec.r_s.quadratic(eta);
        let rs_sum = rs_xx + rs_yy;
        let rs_xy = dec.r_s.bilinear(xi, eta);
        let bs_xy = dec.b_s.bilinear(xi, eta);
        let ra_xy = dec.r_a.bilinear(xi, eta);
        let ba_xy = dec.b_a.bilinear(xi, eta);
        let bs_sum = dec.b_s.quadratic(xi) + dec.b_s.quadratic(eta);

        let up = |slot: &mut T, lhs: T, rhs: T| *slot = slot.max((lhs - rhs) / scale);
        up(&mut rep.polarization, rs_xy.abs(), half * rs_sum);
        up(&mut rep.imaginary_symmetric, bs_xy.abs(), half * t * rs_sum);
        up(
            &mut rep.sector_equivalent,
            (bs_sum - two * ra_xy).abs(),
            t * (rs_sum + two * ba_xy),
        );
        if let Some(slot) = rep.antisymmetric.as_mut() {
            up(slot, ra_xy.abs(), t * rs_sum);
        }

        let w: Vec<Cx<T>> = xi.iter().zip(eta).map(|(&a, &b)| Cx::new(a, b)).collect();
        let form = |m: &CMatrix<T>| sesquilinear(m, &w).expect("dimension checked").re;
        up(&mut rep.positivity_real, T::zero(), form(&rs_c));
        for m in &pos_imag {
            up(&mut rep.positivity_imaginary, T::zero(), form(m));
        }
        if let Some(slot) = rep.positivity_antisymmetric.as_mut() {
            for m in &pos_anti {
                up(slot, T::zero(), form(m));
            }
        }
    }
    Ok(rep)
}

/// Largest `((Q U ξ, U ξ) − tr(U* Q U) ‖ξ‖²) / tr(U* Q U)` over the samples.
///
/// Errors if `Q` is not positive semidefinite (eigenvalue below
/// `−PSD_TOL · max|Q|`) or dimensions disagree.
pub fn trace_bound_excess<T: Real>(
    q: &RealMatrix<T>,
    u: &CMatrix<T>,
    samples: &[Vec<Cx<T>>],
) -> Result<T> {
    let d = q.dim();
    if u.rows() != d || u.cols() != d {
        return Err(Error::Dimension {
            expected: d,
            got: u.rows().max(u.cols()),
        });
    }
    let qc = q.to_complex();
    let eig = hermitian_eigen(&qc)?;
    if eig.min_value() < -T::lit(PSD_TOL) * q.max_abs() {
        return Err(Error::Precondition(format!(
            "Q is not positive semidefinite (min eigenvalue {})",
            eig.min_value()
        )));
    }
    let tr = u.adjoint().matmul(&qc)?.matmul(u)?.trace().re;
    let denom = if tr > T::zero() { tr } else { T::one() };
    let mut worst = T::neg_infinity();
    for xi in samples {
        let uxi = u.mul_vec(xi)?;
        let lhs = sesquilinear(&qc, &uxi)?.re;
        let nrm: T = xi.iter().map(|z| z.norm_sqr()).sum();
        worst = worst.max((lhs - tr * nrm) / denom);
    }
    if worst == T::neg_infinity() {
        worst = T::zero();
    }
    Ok(worst)
}

/// `(Q U ξ, U ξ) ≤ tr(U* Q U) ‖ξ‖²` on every sample, up to
/// `TRACE_BOUND_TOL · tr(U* Q U)`.
pub fn trace_bound_check<T: Real>(
    q: &RealMatrix<T>,
    u: &CMatrix<T>,
    samples: &[Vec<Cx<T>>],
) -> Result<bool> {
    Ok(trace_bound_excess(q, u, samples)? <= T::lit(TRACE_BOUND_TOL))
}

//! Splitting a complex coefficient matrix into its real/imaginary and
//! symmetric/antisymmetric constituents.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::matrix::{CMatrix, RealMatrix};
use crate::scalar::{cis, Cx, Real};

/// The eight constituent matrices of `C = R + iB`.
///
/// `R_s, R_a` are the symmetric and antisymmetric parts of `R`, and likewise
/// for `B`. The Hermitian parts are `Re C = R_s + i B_a` and
/// `Im C = B_s − i R_a`, so that `C = Re C + i Im C`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixDecomposition<T> {
    pub c: CMatrix<T>,
    pub r: RealMatrix<T>,
    pub b: RealMatrix<T>,
    pub r_s: RealMatrix<T>,
    pub r_a: RealMatrix<T>,
    pub b_s: RealMatrix<T>,
    pub b_a: RealMatrix<T>,
    pub re_c: CMatrix<T>,
    pub im_c: CMatrix<T>,
}

impl<T: Real> MatrixDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.c.rows()
    }

    /// `R + iB` rebuilt from the four real parts.
    pub fn reassemble(&self) -> CMatrix<T> {
        let r = &self.r_s + &self.r_a;
        let b = &self.b_s + &self.b_a;
        CMatrix::from_fn(self.dim(), self.dim(), |i, j| Cx::new(r[(i, j)], b[(i, j)]))
    }

    /// Whether `B_a` vanishes up to `tol · max|C|`.
    pub fn ba_vanishes(&self, tol: T) -> bool {
        self.b_a
            .is_zero_within(tol * self.c.norm_max().max(T::min_positive_value()))
    }

    /// Whether `R_a` vanishes up to `tol · max|C|`.
    pub fn ra_vanishes(&self, tol: T) -> bool {
        self.r_a
            .is_zero_within(tol * self.c.norm_max().max(T::min_positive_value()))
    }
}

/// Decomposes a finite square complex matrix.
pub fn decompose<T: Real>(c: &CMatrix<T>) -> Result<MatrixDecomposition<T>> {
    let d = c.ensure_square()?;
    if d == 0 {
        return Err(Error::Dimension {
            expected: 1,
            got: 0,
        });
    }
    if !c.is_finite() {
        return Err(Error::NonFinite);
    }
    let r = c.real_part();
    let b = c.imag_part();
    let r_s = r.symmetric_part();
    let r_a = r.antisymmetric_part();
    let b_s = b.symmetric_part();
    let b_a = b.antisymmetric_part();
    let re_c = CMatrix::from_fn(d, d, |i, j| Cx::new(r_s[(i, j)], b_a[(i, j)]));
    let im_c = CMatrix::from_fn(d, d, |i, j| Cx::new(b_s[(i, j)], -r_a[(i, j)]));
    Ok(MatrixDecomposition {
        c: c.clone(),
        r,
        b,
        r_s,
        r_a,
        b_s,
        b_a,
        re_c,
        im_c,
    })
}

/// The form `(Cξ, ξ) = ξ* C ξ = Σ_{k,l} conj(ξ_k) c_kl ξ_l`.
pub fn sesquilinear<T: Real>(c: &CMatrix<T>, xi: &[Cx<T>]) -> Result<Cx<T>> {
    let d = c.ensure_square()?;
    if xi.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: xi.len(),
        });
    }
    let mut acc = Cx::zero();
    for k in 0..d {
        let row: Cx<T> = c
            .row(k)
            .iter()
            .zip(xi)
            .fold(Cx::zero(), |a, (&m, &x)| a + m * x);
        acc += xi[k].conj() * row;
    }
    Ok(acc)
}

/// Decomposition of `e^{iα} C`.
pub fn rotate<T: Real>(c: &CMatrix<T>, alpha: T) -> Result<MatrixDecomposition<T>> {
    decompose(&c.scale(cis(alpha)))
}

/// Largest entrywise residual between the decomposition of `e^{iα}C` and the
/// closed forms valid when `B_a(C) = 0`:
///
/// ```text
/// R_α   = (R_s + R_a) cos α − B_s sin α      B_α   = (R_s + R_a) sin α + B_s cos α
/// R_s,α = R_s cos α − B_s sin α               B_s,α = R_s sin α + B_s cos α
/// R_a,α = R_a cos α                           B_a,α = R_a sin α
/// Re C_α = R_s cos α − B_s sin α + i R_a sin α
/// Im C_α = R_s sin α + B_s cos α − i R_a cos α
/// ```
pub fn rotation_identity_residual<T: Real>(
    base: &MatrixDecomposition<T>,
    rotated: &MatrixDecomposition<T>,
    alpha: T,
) -> T {
    let (s, c) = alpha.sin_cos();
    let r_full = &base.r_s + &base.r_a;
    let r_alpha = &r_full.scale(c) - &base.b_s.scale(s);
    let b_alpha = &r_full.scale(s) + &base.b_s.scale(c);
    let rs_alpha = &base.r_s.scale(c) - &base.b_s.scale(s);
    let bs_alpha = &base.r_s.scale(s) + &base.b_s.scale(c);
    let ra_alpha = base.r_a.scale(c);
    let ba_alpha = base.r_a.scale(s);
    let d = base.dim();
    let re_alpha = CMatrix::from_fn(d, d, |i, j| Cx::new(rs_alpha[(i, j)], base.r_a[(i, j)] * s));
    let im_alpha = CMatrix::from_fn(d, d, |i, j| {
        Cx::new(bs_alpha[(i, j)], -base.r_a[(i, j)] * c)
    });

    [
        rotated.r.max_abs_diff(&r_alpha),
        rotated.b.max_abs_diff(&b_alpha),
        rotated.r_s.max_abs_diff(&rs_alpha),
        rotated.b_s.max_abs_diff(&bs_alpha),
        rotated.r_a.max_abs_diff(&ra_alpha),
        rotated.b_a.max_abs_diff(&ba_alpha),
        rotated.re_c.max_abs_diff(&re_alpha),
        rotated.im_c.max_abs_diff(&im_alpha),
    ]
    .into_iter()
    .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn identity_decomposes_trivially() {
        let dec = decompose(&CMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(dec.r_s, RealMatrix::identity(3));
        assert!(dec.r_a.is_zero_within(0.0));
        assert!(dec.b_s.is_zero_within(0.0));
        assert!(dec.b_a.is_zero_within(0.0));
    }

    #[test]
    fn two_by_two_worked_example() {
        // C = [[1, 2+i], [i, 3]]
        let c = CMatrix::from_rows(&[
            vec![cx(1.0, 0.0), cx(2.0, 1.0)],
            vec![cx(0.0, 1.0), cx(3.0, 0.0)],
        ])
        .unwrap();
        let dec = decompose(&c).unwrap();
        assert_eq!(
            dec.r_s,
            RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 3.0]]).unwrap()
        );
        assert_eq!(
            dec.r_a,
            RealMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap()
        );
        assert_eq!(
            dec.b_s,
            RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
        );
        assert!(dec.b_a.is_zero_within(0.0));
    }

    #[test]
    fn hermitian_parts_match_adjoint_definition() {
        let c = CMatrix::from_rows(&[
            vec![cx(1.0, 0.5), cx(2.0, -1.0)],
            vec![cx(0.3, 1.0), cx(-3.0, 0.2)],
        ])
        .unwrap();
        let dec = decompose(&c).unwrap();
        let adj = c.adjoint();
        let re_c = (&c + &adj).scale_real(0.5);
        let im_c = (&c - &adj).scale(cx(0.0, -0.5));
        assert!(dec.re_c.max_abs_diff(&re_c) < 1e-15);
        assert!(dec.im_c.max_abs_diff(&im_c) < 1e-15);
        assert_eq!(dec.re_c.hermitian_defect(), 0.0);
        assert_eq!(dec.im_c.hermitian_defect(), 0.0);
    }

    #[test]
    fn sesquilinear_of_identity_is_squared_norm() {
        let xi = vec![cx(1.0, 2.0), cx(-0.5, 0.25)];
        let v = sesquilinear(&CMatrix::<f64>::identity(2), &xi).unwrap();
        assert!((v - cx(5.3125, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sesquilinear_uses_conjugate_on_left_slot() {
        // C = e_0 e_1ᵀ: ξ* C ξ = conj(ξ_0) ξ_1
        let mut c = CMatrix::<f64>::zeros(2, 2);
        c[(0, 1)] = cx(1.0, 0.0);
        let xi = vec![cx(0.0, 1.0), cx(2.0, 0.0)];
        assert_eq!(sesquilinear(&c, &xi).unwrap(), cx(0.0, -2.0));
    }

    #[test]
    fn sesquilinear_rejects_mismatch() {
        let err = sesquilinear(&CMatrix::<f64>::identity(2), &[cx(1.0, 0.0)]).unwrap_err();
        assert_eq!(
            err,
            Error::Dimension {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn decompose_rejects_non_square() {
        let err = decompose(&CMatrix::<f64>::zeros(2, 3)).unwrap_err();
        assert_eq!(err, Error::NotSquare { rows: 2, cols: 3 });
    }

    #[test]
    fn decompose_rejects_nan() {
        let mut c = CMatrix::<f64>::identity(2);
        c[(1, 0)] = cx(f64::NAN, 0.0);
        assert_eq!(decompose(&c).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn rotation_by_zero_is_decomposition() {
        let c = CMatrix::from_rows(&[
            vec![cx(1.0, 0.5), cx(2.0, -1.0)],
            vec![cx(0.3, 1.0), cx(-3.0, 0.2)],
        ])
        .unwrap();
        assert_eq!(rotate(&c, 0.0).unwrap(), decompose(&c).unwrap());
    }

    #[test]
    fn rotating_real_symmetric_matrix() {
        let c = CMatrix::from_rows(&[
            vec![cx(2.0, 0.0), cx(0.5, 0.0)],
            vec![cx(0.5, 0.0), cx(1.0, 0.0)],
        ])
        .unwrap();
        let a = std::f64::consts::FRAC_PI_6;
        let rot = rotate(&c, a).unwrap();
        let base = c.real_part();
        assert!(rot.r_s.max_abs_diff(&base.scale(a.cos())) < 1e-15);
        assert!(rot.b_s.max_abs_diff(&base.scale(a.sin())) < 1e-15);
        assert!(rot.r_a.is_zero_within(1e-16));
        assert!(rot.b_a.is_zero_within(1e-16));
    }

    #[test]
    fn f32_instantiation_reassembles() {
        let c = CMatrix::<f32>::from_rows(&[
            vec![cx(1.0, 0.5), cx(2.0, -1.0)],
            vec![cx(0.3, 1.0), cx(-3.0, 0.2)],
        ])
        .unwrap();
        let dec = decompose(&c).unwrap();
        assert!(dec.reassemble().max_abs_diff(&c) < 1e-6);
    }
}

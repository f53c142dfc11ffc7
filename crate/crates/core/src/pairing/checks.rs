//! Quadrature checks of the sectorial estimate, rotated accretivity and the
//! gradient inequality.
//!
//! Each check evaluates at `N` and `2N` points per axis, reports the values
//! at `2N`, and uses `|value(N) − value(2N)|` as the quadrature slack.

use rayon::prelude::*;

use crate::angles::AngleBundle;
use crate::error::{Error, Result};
use crate::field::{CoefficientField, Smoothness};
use crate::linalg::decomp::rotate;
use crate::pairing::quadrature::{
    check_inputs, grid_point, masked_sum, pairing_direct, PairingValue, XiEta, ZERO_SET_REL,
};
use crate::pairing::test_function::TestFunction;
use crate::scalar::{cis, Cx, Real};

fn require_ba_zero<T: Real, F: CoefficientField<T> + ?Sized>(field: &F) -> Result<()> {
    if field.ba_zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{} does not have B_a = 0",
            field.name()
        )))
    }
}

fn require_regime<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    bundle: &AngleBundle<T>,
) -> Result<()> {
    if bundle.regime.ra_zero && !field.ra_zero() {
        Err(Error::Precondition(format!(
            "{} has R_a ≠ 0 but the R_a = 0 constants were requested",
            field.name()
        )))
    } else {
        Ok(())
    }
}

/// Outcome of [`sectorial_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorialCheck<T> {
    /// `|Im|` of the pairing.
    pub lhs: T,
    /// `K · Re` of the pairing.
    pub rhs: T,
    pub margin: T,
    /// `|margin(N) − margin(2N)|`.
    pub slack: T,
    pub pairing: PairingValue<T>,
}

/// `|Im (A u, |u|^{p−2} u)| ≤ K Re (A u, |u|^{p−2} u)`.
pub fn sectorial_check<T, F, U>(
    field: &F,
    u: &U,
    bundle: &AngleBundle<T>,
    n: usize,
) -> Result<SectorialCheck<T>>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    require_ba_zero(field)?;
    require_regime(field, bundle)?;
    let eval = |n| -> Result<(T, T, PairingValue<T>)> {
        let v = pairing_direct(field, u, bundle.p, n)?;
        Ok((v.im.abs(), bundle.k * v.re, v))
    };
    let (l1, r1, _) = eval(n)?;
    let (lhs, rhs, pairing) = eval(2 * n)?;
    Ok(SectorialCheck {
        lhs,
        rhs,
        margin: rhs - lhs,
        slack: ((r1 - l1) - (rhs - lhs)).abs(),
        pairing,
    })
}

/// Outcome of [`rotated_accretivity_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AccretivityCheck<T> {
    /// `Re e^{iα} (A u, |u|^{p−2} u)`.
    pub re_pairing: T,
    pub slack: T,
    /// Minimum over nodes of `P / (‖C(x)‖_F (|ξ′|² + |η|²))`; nodes where the
    /// normaliser vanishes are skipped.
    pub min_p_integrand: T,
}

/// Integrand `P(x)` and its normaliser at one point.
pub fn p_integrand<T: Real>(
    c_alpha_parts: &crate::linalg::decomp::MatrixDecomposition<T>,
    xe: &XiEta<T>,
    p: T,
) -> (T, T) {
    let dec = c_alpha_parts;
    let xi = xe.xi_prime(p);
    let eta = &xe.eta;
    let sq = (p - T::one()).sqrt();
    let val = dec.r_s.quadratic(&xi)
        + dec.r_s.quadratic(eta)
        + p / sq * dec.b_a.bilinear(&xi, eta)
        + (p - T::lit(2.0)) / sq * dec.b_s.bilinear(&xi, eta);
    let nrm: T = xi.iter().chain(eta).map(|v| *v * *v).sum();
    (val, dec.c.norm_fro() * nrm)
}

/// `Re (e^{iα} A u, |u|^{p−2} u) ≥ 0` for `|α| < ψ`, plus the nodewise
/// integrand behind it.
pub fn rotated_accretivity_check<T, F, U>(
    field: &F,
    u: &U,
    bundle: &AngleBundle<T>,
    alpha: T,
    n: usize,
) -> Result<AccretivityCheck<T>>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    Ok(rotated_accretivity_sweep(field, u, bundle, &[alpha], n)?.remove(0))
}

/// [`rotated_accretivity_check`] for several angles; the pairings are
/// computed once and rotated.
pub fn rotated_accretivity_sweep<T, F, U>(
    field: &F,
    u: &U,
    bundle: &AngleBundle<T>,
    alphas: &[T],
    n: usize,
) -> Result<Vec<AccretivityCheck<T>>>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    require_ba_zero(field)?;
    require_regime(field, bundle)?;
    if let Some(a) = alphas.iter().find(|a| !(a.abs() < bundle.psi)) {
        return Err(Error::AngleRange(format!(
            "|α| = {} is not below ψ = {}",
            a.abs(),
            bundle.psi
        )));
    }
    let coarse = pairing_direct(field, u, bundle.p, n)?.value();
    let fine = pairing_direct(field, u, bundle.p, 2 * n)?.value();

    let d = field.dim();
    let total = (2 * n).pow(d as u32);
    let mods: Vec<T> = (0..total)
        .into_par_iter()
        .map(|i| u.value(&grid_point(i, 2 * n, d)).norm())
        .collect();
    let tau = T::lit(ZERO_SET_REL) * mods.iter().copied().fold(T::zero(), T::max);
    let mins: Vec<Vec<T>> = (0..total)
        .into_par_iter()
        .filter(|&i| mods[i] > tau)
        .map(|i| {
            let x = grid_point(i, 2 * n, d);
            let c = field.value(&x);
            let xe = XiEta::new(u.value(&x), &u.grad(&x));
            alphas
                .iter()
                .map(|&a| {
                    let dec = rotate(&c, a).expect("finite field value");
                    let (val, scale) = p_integrand(&dec, &xe, bundle.p);
                    if scale > T::zero() {
                        val / scale
                    } else {
                        T::infinity()
                    }
                })
                .collect()
        })
        .collect();
    Ok(alphas
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let rot = cis(a);
            let (c, f) = ((coarse * rot).re, (fine * rot).re);
            let min_p = mins.iter().map(|m| m[k]).fold(T::infinity(), T::min);
            AccretivityCheck {
                re_pairing: f,
                slack: (c - f).abs(),
                min_p_integrand: min_p,
            }
        })
        .collect())
}

/// `∂_j (A u)(x)` for `j = 1..d`, using second derivatives of `C` and third
/// derivatives of `u`.
pub fn operator_gradient<T, F, U>(field: &F, u: &U, x: &[T]) -> Result<Vec<Cx<T>>>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    let d = field.dim();
    if u.dim() != d || x.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: u.dim().min(x.len()),
        });
    }
    let c = field.value(x);
    let g = u.grad(x);
    let hs = u.hess(x);
    let d1: Vec<_> = (0..d).map(|l| field.d1(x, l)).collect();
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let mut acc = Cx::new(T::zero(), T::zero());
        for l in 0..d {
            let djl = field
                .d2(x, j, l)
                .ok_or_else(|| Error::Capability(field.name()))?;
            for k in 0..d {
                acc += djl[(k, l)] * g[k]
                    + d1[l][(k, l)] * hs[(j, k)]
                    + d1[j][(k, l)] * hs[(l, k)]
                    + c[(k, l)] * u.third(x, j, l, k);
            }
        }
        out.push(-acc);
    }
    Ok(out)
}

/// Outcome of [`gradient_inequality_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientCheck<T> {
    /// `Re Σ_j ∫ ∂_j(e^{iα} A u) |∇u|^{p−2} ∂_j ū`.
    pub integral: T,
    /// `‖∇u‖_p^p`.
    pub grad_norm_pp: T,
    /// `integral + M ‖∇u‖_p^p`.
    pub value: T,
    pub slack: T,
    /// Smallest `M ≥ 0` for which `value ≥ 0`.
    pub minimal_m: T,
}

fn gradient_terms<T, F, U>(field: &F, u: &U, p: T, alpha: T, n: usize) -> Result<(T, T)>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    let d = field.dim();
    let rot = cis(alpha);
    let grad_mod = |x: &[T]| u.grad(x).iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let (s, _) = masked_sum(n, d, grad_mod, |x| {
        let g = u.grad(x);
        let gm = g.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let w = gm.powf(p - T::lit(2.0));
        let dau = operator_gradient(field, u, x).expect("capability checked");
        let integrand: Cx<T> = dau.iter().zip(&g).map(|(a, b)| *a * rot * b.conj()).sum();
        Cx::new((integrand * w).re, gm.powf(p))
    })?;
    Ok((s.re, s.im))
}

/// `Re Σ_j ∫ ∂_j(e^{iα} A u) |∇u|^{p−2} ∂_j ū + M ‖∇u‖_p^p ≥ 0` for
/// `|α| < γ`.
pub fn gradient_inequality_check<T, F, U>(
    field: &F,
    u: &U,
    bundle: &AngleBundle<T>,
    alpha: T,
    m: T,
    n: usize,
) -> Result<GradientCheck<T>>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    if field.smoothness() != Smoothness::W2Inf {
        return Err(Error::Capability(field.name()));
    }
    require_ba_zero(field)?;
    require_regime(field, bundle)?;
    check_inputs(field.dim(), u.dim(), bundle.p, n)?;
    if !(alpha.abs() < bundle.gamma) {
        return Err(Error::AngleRange(format!(
            "|α| = {} is not below γ = {}",
            alpha.abs(),
            bundle.gamma
        )));
    }
    let (i1, g1) = gradient_terms(field, u, bundle.p, alpha, n)?;
    let (integral, grad_norm_pp) = gradient_terms(field, u, bundle.p, alpha, 2 * n)?;
    let value = integral + m * grad_norm_pp;
    let slack = ((i1 + m * g1) - value).abs();
    let minimal_m = if grad_norm_pp > T::zero() {
        (-integral / grad_norm_pp).max(T::zero())
    } else {
        T::zero()
    };
    Ok(GradientCheck {
        integral,
        grad_norm_pp,
        value,
        slack,
        minimal_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{make_bundle, Regime};
    use crate::field::LibraryField;
    use crate::linalg::matrix::CMatrix;
    use crate::linalg::sector::SectorAngle;
    use crate::pairing::test_function::TrigPoly;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn wave() -> TrigPoly<f64> {
        TrigPoly::mode(vec![1])
    }

    #[test]
    fn equality_case_at_p_two() {
        let t0 = 0.4;
        let f = LibraryField::rotated_laplacian(1, t0).unwrap();
        let b = make_bundle(2.0, SectorAngle::new(t0).unwrap(), Regime::RA_ZERO).unwrap();
        let c = sectorial_check(&f, &wave(), &b, 32).unwrap();
        assert!(c.margin.abs() < 1e-12 * c.rhs);
    }

    #[test]
    fn real_data_has_zero_lhs() {
        let f: LibraryField<f64> = LibraryField::CosineModulated { d: 1 };
        let b = make_bundle(3.0, SectorAngle::zero(), Regime::RA_ZERO).unwrap();
        let c = sectorial_check(&f, &TrigPoly::shifted_cosine(1, 2.0), &b, 32).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!(c.margin >= 0.0);
    }

    #[test]
    fn regime_and_ba_preconditions() {
        let f: LibraryField<f64> = LibraryField::DriftAntisym { theta0: 0.3 };
        let b = make_bundle(2.0, SectorAngle::new(0.3).unwrap(), Regime::RA_ZERO).unwrap();
        let u = TrigPoly::mode(vec![1, 0]);
        assert!(matches!(
            sectorial_check(&f, &u, &b, 16),
            Err(Error::Precondition(_))
        ));
        let c = CMatrix::from_rows(&[
            vec![Cx::new(2.0, 0.0), Cx::new(0.0, 0.3)],
            vec![Cx::new(0.0, -0.3), Cx::new(2.0, 0.0)],
        ])
        .unwrap();
        let g = LibraryField::constant(c).unwrap();
        let b = make_bundle(2.0, SectorAngle::new(0.3).unwrap(), Regime::RA_NONZERO).unwrap();
        assert!(matches!(
            sectorial_check(&g, &u, &b, 16),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rotation_of_p_two_pairing() {
        let t0 = 0.3;
        let f = LibraryField::rotated_laplacian(1, t0).unwrap();
        let b = make_bundle(2.0, SectorAngle::new(t0).unwrap(), Regime::RA_ZERO).unwrap();
        for alpha in [0.0, FRAC_PI_2 - t0 - 1e-3, -(FRAC_PI_2 - t0 - 1e-3)] {
            let a = rotated_accretivity_check(&f, &wave(), &b, alpha, 16).unwrap();
            assert!((a.re_pairing - TAU * (t0 + alpha).cos()).abs() < 1e-12);
            assert!(a.min_p_integrand >= -1e-14);
        }
        assert!(matches!(
            rotated_accretivity_check(&f, &wave(), &b, b.psi, 16),
            Err(Error::AngleRange(_))
        ));
    }

    #[test]
    fn gradient_constant_field_needs_no_m() {
        let f: LibraryField<f64> = LibraryField::Constant(CMatrix::identity(1));
        let b = make_bundle(2.0, SectorAngle::zero(), Regime::RA_ZERO).unwrap();
        let g = gradient_inequality_check(&f, &wave(), &b, 0.0, 0.0, 16).unwrap();
        // Re(∇Au, ∇u) = ∫ |∇u|² = 2π for the unit wave
        assert!((g.integral - TAU).abs() < 1e-12);
        assert_eq!(g.minimal_m, 0.0);
    }

    #[test]
    fn gradient_needs_second_derivatives() {
        let f: LibraryField<f64> = LibraryField::Kinked { d: 1 };
        let b = make_bundle(2.0, SectorAngle::zero(), Regime::RA_ZERO).unwrap();
        assert!(matches!(
            gradient_inequality_check(&f, &wave(), &b, 0.0, 0.0, 16),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn operator_gradient_matches_finite_difference() {
        let f: LibraryField<f64> = LibraryField::ComplexSymmetric { d: 2, theta0: 0.3 };
        let u = TrigPoly::random(&mut crate::sampling::rng(3), 2, 3, true);
        let x = [0.9, 2.1];
        let h = 1e-5;
        let g = operator_gradient(&f, &u, &x).unwrap();
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fd = (crate::pairing::apply_operator(&f, &u, &xp).unwrap()
                - crate::pairing::apply_operator(&f, &u, &xm).unwrap())
                / (2.0 * h);
            assert!(
                (fd - g[j]).norm() < 1e-6 * (1.0 + g[j].norm()),
                "{j}: {fd} vs {}",
                g[j]
            );
        }
    }
}

//! Admissibility of `(p, θ)` and the angle constants `φ`, `K`, `ψ`, `γ`.
//!
//! With `x = |1 − 2/p|`, `φ = arccos x`. The trigonometric values of `φ` are
//! computed algebraically (`sin φ = √((1 − x)(1 + x))`, `cot φ = x / sin φ`)
//! so that `p = 2` gives `cot φ = 0` exactly.

use crate::error::{Error, Result};
use crate::linalg::decomp::MatrixDecomposition;
use crate::linalg::lemmas::form_scale;
use crate::linalg::sector::SectorAngle;
use crate::scalar::Real;

/// Which branch of the constants applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Regime {
    /// `R_a = 0` identically.
    pub ra_zero: bool,
}

impl Regime {
    pub const RA_ZERO: Self = Self { ra_zero: true };
    pub const RA_NONZERO: Self = Self { ra_zero: false };
}

/// Angle constants for an admissible `(p, θ, regime)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleBundle<T> {
    pub p: T,
    pub theta: SectorAngle<T>,
    pub regime: Regime,
    pub phi: T,
    pub sin_phi: T,
    pub cot_phi: T,
    /// Sectoriality constant: `|Im| ≤ K Re`.
    pub k: T,
    /// Holomorphy angle.
    pub psi: T,
    /// Supremum of `β < π/2` with `3 tan θ tan β < 1`; `π/2` at `θ = 0`.
    pub beta_star: T,
    /// Contraction angle.
    pub gamma: T,
}

/// Both sides of `tan ψ₁ ≤ tan(φ − θ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleComparison<T> {
    pub tan_psi1: T,
    pub tan_phi_minus_theta: T,
}

fn check_exponent<T: Real>(p: T) -> Result<()> {
    if p.is_finite() && p > T::one() {
        Ok(())
    } else {
        Err(Error::ExponentDomain(p.as_f64()))
    }
}

/// `|1 − 2/p|`.
pub fn exponent_distance<T: Real>(p: T) -> Result<T> {
    check_exponent(p)?;
    Ok((T::one() - T::lit(2.0) / p).abs())
}

/// `q = p / (p − 1)`.
pub fn dual_exponent<T: Real>(p: T) -> Result<T> {
    check_exponent(p)?;
    Ok(p / (p - T::one()))
}

/// `(φ, sin φ, cot φ)`.
pub fn phi_parts<T: Real>(p: T) -> Result<(T, T, T)> {
    let x = exponent_distance(p)?;
    let sin_phi = ((T::one() - x) * (T::one() + x)).sqrt();
    Ok((sin_phi.atan2(x), sin_phi, x / sin_phi))
}

/// `|1 − 2/p| < cos θ`.
pub fn is_admissible<T: Real>(p: T, theta: SectorAngle<T>) -> Result<bool> {
    Ok(exponent_distance(p)? < theta.radians().cos())
}

fn ensure_admissible<T: Real>(p: T, theta: SectorAngle<T>) -> Result<()> {
    let lhs = exponent_distance(p)?;
    let rhs = theta.radians().cos();
    if lhs < rhs {
        Ok(())
    } else {
        Err(Error::Inadmissible {
            lhs: lhs.as_f64(),
            rhs: rhs.as_f64(),
        })
    }
}

pub fn make_bundle<T: Real>(p: T, theta: SectorAngle<T>, regime: Regime) -> Result<AngleBundle<T>> {
    ensure_admissible(p, theta)?;
    let (phi, sin_phi, cot_phi) = phi_parts(p)?;
    let t = theta.tan();
    let one = T::one();
    let denom = one - t * cot_phi;
    assert!(denom > T::zero(), "admissibility implies tan θ cot φ < 1");

    let (k, psi) = if regime.ra_zero {
        ((cot_phi + t) / denom, phi - theta.radians())
    } else {
        let k = ((T::lit(2.0) / sin_phi - one) * t + cot_phi) / denom;
        (k, T::FRAC_PI_2() - k.atan())
    };
    let beta_star = if t == T::zero() {
        T::FRAC_PI_2()
    } else {
        (one / (T::lit(3.0) * t)).atan()
    };
    let gamma = if regime.ra_zero {
        psi
    } else {
        psi.min(beta_star)
    };
    Ok(AngleBundle {
        p,
        theta,
        regime,
        phi,
        sin_phi,
        cot_phi,
        k,
        psi,
        beta_star,
        gamma,
    })
}

pub fn angle_comparison<T: Real>(p: T, theta: SectorAngle<T>) -> Result<AngleComparison<T>> {
    ensure_admissible(p, theta)?;
    let (_, sin_phi, cot_phi) = phi_parts(p)?;
    let t = theta.tan();
    let num = T::one() - t * cot_phi;
    Ok(AngleComparison {
        tan_psi1: num / ((T::lit(2.0) / sin_phi - T::one()) * t + cot_phi),
        tan_phi_minus_theta: num / (t + cot_phi),
    })
}

/// Largest relative violation of
/// `(cot φ + tan θ) S ≤ tan(π/2 − φ + θ) (S + (p−2)/√(p−1) (B_s ξ, η))`
/// with `S = (R_s ξ, ξ) + (R_s η, η)`, over the samples.
pub fn lemma_ps_check<T: Real>(
    p: T,
    theta: SectorAngle<T>,
    dec: &MatrixDecomposition<T>,
    samples: &[(Vec<T>, Vec<T>)],
) -> Result<T> {
    let bundle = make_bundle(p, theta, Regime::RA_ZERO)?;
    let d = dec.dim();
    let coef = (p - T::lit(2.0)) / (p - T::one()).sqrt();
    let left = bundle.cot_phi + theta.tan();
    let mut worst = T::neg_infinity();
    for (xi, eta) in samples {
        for v in [xi, eta] {
            if v.len() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: v.len(),
                });
            }
        }
        let s = dec.r_s.quadratic(xi) + dec.r_s.quadratic(eta);
        let lhs = left * s;
        let rhs = bundle.k * (s + coef * dec.b_s.bilinear(xi, eta));
        worst = worst.max((lhs - rhs) / form_scale(dec, xi, eta));
    }
    Ok(worst)
}

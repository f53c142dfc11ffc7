//! Coefficient fields `x ↦ C(x)` on the torus `[0, 2π)^d`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::decomp::{decompose, rotate};
use crate::linalg::matrix::CMatrix;
use crate::linalg::sector::{minimal_sector_angle, SectorAngle};
use crate::sampling::halton_torus;
use crate::scalar::{cis, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    W1Inf,
    W2Inf,
}

/// A `2π`-periodic matrix field with analytic derivatives.
pub trait CoefficientField<T: Real>: Send + Sync {
    /// Canonical `name(args)` string, parseable by [`parse_field`].
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn value(&self, x: &[T]) -> CMatrix<T>;
    /// `∂_j C(x)`.
    fn d1(&self, x: &[T], j: usize) -> CMatrix<T>;
    /// `∂_j ∂_l C(x)`, `None` for fields without second derivatives.
    fn d2(&self, x: &[T], j: usize, l: usize) -> Option<CMatrix<T>>;
    fn declared_theta(&self) -> SectorAngle<T>;
    fn ba_zero(&self) -> bool;
    fn ra_zero(&self) -> bool;
    fn smoothness(&self) -> Smoothness;
    /// Whether `C(x)` is diagonal for every `x`.
    fn is_diagonal(&self) -> bool;
}

/// The built-in fields.
#[derive(Clone, Debug, PartialEq)]
pub enum LibraryField<T> {
    /// Constant matrix.
    Constant(CMatrix<T>),
    /// `e^{iθ₀} I`.
    RotatedLaplacian { d: usize, theta0: T },
    /// `(2 + cos x₁) I`.
    CosineModulated { d: usize },
    /// `diag(1, sin² x₁)` in `d = 2`; `R_s` is singular on `{sin x₁ = 0}`.
    Degenerate,
    /// `[[a, r], [−r, a]]` with `a = 2 + cos x₂`, `r = tan θ₀ · a · cos x₁`.
    DriftAntisym { theta0: T },
    /// `e^{iθ₀ sin x₁} S(x)` with `S` real symmetric positive definite.
    ComplexSymmetric { d: usize, theta0: T },
    /// `(2 + |sin x₁|) I`, Lipschitz only.
    Kinked { d: usize },
}

fn zeros<T: Real>(d: usize) -> CMatrix<T> {
    CMatrix::zeros(d, d)
}

fn scalar_id<T: Real>(d: usize, z: Cx<T>) -> CMatrix<T> {
    CMatrix::identity(d).scale(z)
}

fn real<T: Real>(x: T) -> Cx<T> {
    Cx::new(x, T::zero())
}

impl<T: Real> LibraryField<T> {
    /// `S`, `∂_j S`, `∂_j∂_l S` for [`LibraryField::ComplexSymmetric`].
    fn sym_part(d: usize, x: &[T], order: &[usize]) -> CMatrix<T> {
        let (s1, c1) = x[0].sin_cos();
        let half = T::lit(0.5);
        if d == 1 {
            let v = match order {
                [] => T::lit(2.0) + c1,
                [_] => -s1,
                _ => -c1,
            };
            return CMatrix::diagonal(&[real(v)]);
        }
        let (s2, c2) = x[1].sin_cos();
        let m = |a: T, b: T, c: T| {
            CMatrix::from_fn(2, 2, |i, j| {
                real(match (i, j) {
                    (0, 0) => a,
                    (1, 1) => c,
                    _ => b,
                })
            })
        };
        let z = T::zero();
        match order {
            [] => m(T::lit(2.0) + c1, half * s2, T::lit(2.0) + c2),
            [0] => m(-s1, z, z),
            [1] => m(z, half * c2, -s2),
            [0, 0] => m(-c1, z, z),
            [1, 1] => m(z, -half * s2, -c2),
            _ => m(z, z, z),
        }
    }
}

impl<T: Real> CoefficientField<T> for LibraryField<T> {
    fn name(&self) -> String {
        match self {
            Self::Constant(c) => {
                let d = c.rows();
                let ident = c.max_abs_diff(&CMatrix::identity(d)) == T::zero();
                if ident {
                    format!("constant({d})")
                } else {
                    let entries: Vec<String> = c
                        .as_slice()
                        .iter()
                        .flat_map(|z| [z.re.to_string(), z.im.to_string()])
                        .collect();
                    format!("constant({d}, {})", entries.join(", "))
                }
            }
            Self::RotatedLaplacian { d, theta0 } => format!("rotated_laplacian({d}, {theta0})"),
            Self::CosineModulated { d } => format!("cosine_modulated({d})"),
            Self::Degenerate => "degenerate()".into(),
            Self::DriftAntisym { theta0 } => format!("drift_antisym({theta0})"),
            Self::ComplexSymmetric { d, theta0 } => format!("complex_symmetric({d}, {theta0})"),
            Self::Kinked { d } => format!("kinked({d})"),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Self::Constant(c) => c.rows(),
            Self::RotatedLaplacian { d, .. }
            | Self::CosineModulated { d }
            | Self::ComplexSymmetric { d, .. }
            | Self::Kinked { d } => *d,
            Self::Degenerate | Self::DriftAntisym { .. } => 2,
        }
    }

    fn value(&self, x: &[T]) -> CMatrix<T> {
        let two = T::lit(2.0);
        match self {
            Self::Constant(c) => c.clone(),
            Self::RotatedLaplacian { d, theta0 } => scalar_id(*d, cis(*theta0)),
            Self::CosineModulated { d } => scalar_id(*d, real(two + x[0].cos())),
            Self::Degenerate => {
                let s = x[0].sin();
                CMatrix::diagonal(&[real(T::one()), real(s * s)])
            }
            Self::DriftAntisym { theta0 } => {
                let a = two + x[1].cos();
                let r = theta0.tan() * a * x[0].cos();
                CMatrix::from_fn(2, 2, |i, j| {
                    real(match (i, j) {
                        (0, 1) => r,
                        (1, 0) => -r,
                        _ => a,
                    })
                })
            }
            Self::ComplexSymmetric { d, theta0 } => {
                Self::sym_part(*d, x, &[]).scale(cis(*theta0 * x[0].sin()))
            }
            Self::Kinked { d } => scalar_id(*d, real(two + x[0].sin().abs())),
        }
    }

    fn d1(&self, x: &[T], j: usize) -> CMatrix<T> {
        let d = self.dim();
        match self {
            Self::Constant(_) | Self::RotatedLaplacian { .. } => zeros(d),
            Self::CosineModulated { .. } if j == 0 => scalar_id(d, real(-x[0].sin())),
            Self::Degenerate if j == 0 => {
                CMatrix::diagonal(&[real(T::zero()), real((T::lit(2.0) * x[0]).sin())])
            }
            Self::CosineModulated { .. } | Self::Degenerate | Self::Kinked { .. } if j != 0 => {
                zeros(d)
            }
            Self::DriftAntisym { theta0 } => {
                let t = theta0.tan();
                let (s1, c1) = x[0].sin_cos();
                let (s2, c2) = x[1].sin_cos();
                let a = T::lit(2.0) + c2;
                let (da, dr) = if j == 0 {
                    (T::zero(), -t * a * s1)
                } else {
                    (-s2, -t * s2 * c1)
                };
                antisym_block(da, dr)
            }
            Self::ComplexSymmetric { d, theta0 } => {
                let e = cis(*theta0 * x[0].sin());
                let beta_j = if j == 0 {
                    *theta0 * x[0].cos()
                } else {
                    T::zero()
                };
                let s = Self::sym_part(*d, x, &[]);
                let sj = Self::sym_part(*d, x, &[j]);
                (&s.scale(Cx::new(T::zero(), beta_j)) + &sj).scale(e)
            }
            Self::Kinked { .. } => {
                let (s, c) = x[0].sin_cos();
                let sign = if s > T::zero() {
                    T::one()
                } else if s < T::zero() {
                    -T::one()
                } else {
                    T::zero()
                };
                scalar_id(d, real(sign * c))
            }
            _ => unreachable!("derivative index handled above"),
        }
    }

    fn d2(&self, x: &[T], j: usize, l: usize) -> Option<CMatrix<T>> {
        let d = self.dim();
        let both0 = j == 0 && l == 0;
        Some(match self {
            Self::Kinked { .. } => return None,
            Self::Constant(_) | Self::RotatedLaplacian { .. } => zeros(d),
            Self::CosineModulated { .. } if both0 => scalar_id(d, real(-x[0].cos())),
            Self::Degenerate if both0 => CMatrix::diagonal(&[
                real(T::zero()),
                real(T::lit(2.0) * (T::lit(2.0) * x[0]).cos()),
            ]),
            Self::CosineModulated { .. } | Self::Degenerate => zeros(d),
            Self::DriftAntisym { theta0 } => {
                let t = theta0.tan();
                let (s1, c1) = x[0].sin_cos();
                let (s2, c2) = x[1].sin_cos();
                let a = T::lit(2.0) + c2;
                let (da, dr) = match (j.min(l), j.max(l)) {
                    (0, 0) => (T::zero(), -t * a * c1),
                    (0, 1) => (T::zero(), t * s2 * s1),
                    _ => (-c2, -t * c2 * c1),
                };
                antisym_block(da, dr)
            }
            Self::ComplexSymmetric { d, theta0 } => {
                let th = *theta0;
                let e = cis(th * x[0].sin());
                let (s1, c1) = x[0].sin_cos();
                let beta = |k: usize| if k == 0 { th * c1 } else { T::zero() };
                let beta_jl = if both0 { -th * s1 } else { T::zero() };
                let s = Self::sym_part(*d, x, &[]);
                let sj = Self::sym_part(*d, x, &[j]);
                let sl = Self::sym_part(*d, x, &[l]);
                let mut ord = [j, l];
                ord.sort_unstable();
                let sjl = Self::sym_part(*d, x, &ord);
                let i = |v: T| Cx::new(T::zero(), v);
                let sum = &(&(&s.scale(Cx::new(-beta(j) * beta(l), beta_jl))
                    + &sl.scale(i(beta(j))))
                    + &sj.scale(i(beta(l))))
                    + &sjl;
                sum.scale(e)
            }
        })
    }

    fn declared_theta(&self) -> SectorAngle<T> {
        match self {
            Self::Constant(c) => match minimal_sector_angle(c) {
                Ok(Ok(t)) => t,
                _ => unreachable!("constant fields are validated at construction"),
            },
            Self::RotatedLaplacian { theta0, .. }
            | Self::DriftAntisym { theta0 }
            | Self::ComplexSymmetric { theta0, .. } => {
                SectorAngle::new(theta0.abs()).expect("validated at construction")
            }
            Self::CosineModulated { .. } | Self::Degenerate | Self::Kinked { .. } => {
                SectorAngle::zero()
            }
        }
    }

    fn ba_zero(&self) -> bool {
        match self {
            Self::Constant(c) => decompose(c)
                .map(|dec| dec.ba_vanishes(T::lit(1e-12)))
                .unwrap_or(false),
            _ => true,
        }
    }

    fn ra_zero(&self) -> bool {
        match self {
            Self::Constant(c) => decompose(c)
                .map(|dec| dec.ra_vanishes(T::lit(1e-12)))
                .unwrap_or(false),
            Self::DriftAntisym { theta0 } => *theta0 == T::zero(),
            _ => true,
        }
    }

    fn smoothness(&self) -> Smoothness {
        match self {
            Self::Kinked { .. } => Smoothness::W1Inf,
            _ => Smoothness::W2Inf,
        }
    }

    fn is_diagonal(&self) -> bool {
        match self {
            Self::Constant(c) => {
                let d = c.rows();
                (0..d).all(|i| (0..d).all(|j| i == j || c[(i, j)] == Cx::new(T::zero(), T::zero())))
            }
            Self::DriftAntisym { theta0 } => *theta0 == T::zero(),
            Self::ComplexSymmetric { d, .. } => *d == 1,
            _ => true,
        }
    }
}

impl<T: Real> fmt::Display for LibraryField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn antisym_block<T: Real>(diag: T, off: T) -> CMatrix<T> {
    CMatrix::from_fn(2, 2, |i, j| {
        real(match (i, j) {
            (0, 1) => off,
            (1, 0) => -off,
            _ => diag,
        })
    })
}

fn field_err(name: &str, reason: impl Into<String>) -> Error {
    Error::FieldArgs {
        name: name.into(),
        reason: reason.into(),
    }
}

fn check_angle<T: Real>(name: &str, theta0: T) -> Result<T> {
    if theta0.is_finite() && theta0.abs() < T::FRAC_PI_2() {
        Ok(theta0)
    } else {
        Err(field_err(
            name,
            format!("angle {theta0} must satisfy |θ₀| < π/2"),
        ))
    }
}

fn check_dim(name: &str, d: f64, allowed: &[usize]) -> Result<usize> {
    let ok = d.fract() == 0.0 && d >= 1.0 && allowed.contains(&(d as usize));
    if ok {
        Ok(d as usize)
    } else {
        Err(field_err(name, format!("dimension {d} not in {allowed:?}")))
    }
}

impl<T: Real> LibraryField<T> {
    /// Constant field; rejects matrices without a sector of angle `< π/2`.
    pub fn constant(c: CMatrix<T>) -> Result<Self> {
        match minimal_sector_angle(&c)? {
            Ok(_) => Ok(Self::Constant(c)),
            Err(rej) => Err(Error::SectorRejected {
                x: vec![],
                reason: rej.reason.to_string(),
            }),
        }
    }

    pub fn rotated_laplacian(d: usize, theta0: T) -> Result<Self> {
        Ok(Self::RotatedLaplacian {
            d,
            theta0: check_angle("rotated_laplacian", theta0)?,
        })
    }

    pub fn drift_antisym(theta0: T) -> Result<Self> {
        Ok(Self::DriftAntisym {
            theta0: check_angle("drift_antisym", theta0)?,
        })
    }

    pub fn complex_symmetric(d: usize, theta0: T) -> Result<Self> {
        if !(d == 1 || d == 2) {
            return Err(field_err("complex_symmetric", "dimension must be 1 or 2"));
        }
        Ok(Self::ComplexSymmetric {
            d,
            theta0: check_angle("complex_symmetric", theta0)?,
        })
    }
}

const DIMS: [usize; 3] = [1, 2, 3];

/// Parses `name(args)` into a library field.
///
/// | name | arguments |
/// |---|---|
/// | `constant` | `d` (identity) or `d` followed by `2d²` numbers `re, im` row-major |
/// | `rotated_laplacian` | `d, θ₀` |
/// | `cosine_modulated` | `d` |
/// | `degenerate` | none |
/// | `drift_antisym` | `θ₀` |
/// | `complex_symmetric` | `d ∈ {1, 2}, θ₀` |
/// | `kinked` | `d` |
pub fn parse_field<T: Real>(text: &str) -> Result<LibraryField<T>> {
    let text = text.trim();
    let (name, args) = match text.find('(') {
        Some(open) if text.ends_with(')') => (text[..open].trim(), &text[open + 1..text.len() - 1]),
        None => (text, ""),
        _ => return Err(Error::UnknownField(text.into())),
    };
    let nums: Vec<f64> = if args.trim().is_empty() {
        vec![]
    } else {
        args.split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|e| field_err(name, format!("`{}`: {e}", a.trim())))
            })
            .collect::<Result<_>>()?
    };
    let arity = |n: usize| -> Result<()> {
        if nums.len() == n {
            Ok(())
        } else {
            Err(field_err(
                name,
                format!("expected {n} arguments, got {}", nums.len()),
            ))
        }
    };
    match name {
        "constant" => {
            let d = check_dim(
                name,
                *nums
                    .first()
                    .ok_or_else(|| field_err(name, "missing dimension"))?,
                &DIMS,
            )?;
            if nums.len() == 1 {
                return LibraryField::constant(CMatrix::identity(d));
            }
            arity(1 + 2 * d * d)?;
            let data = nums[1..]
                .chunks(2)
                .map(|c| Cx::new(T::lit(c[0]), T::lit(c[1])))
                .collect();
            LibraryField::constant(CMatrix::from_vec(d, d, data)?)
        }
        "rotated_laplacian" => {
            arity(2)?;
            LibraryField::rotated_laplacian(check_dim(name, nums[0], &DIMS)?, T::lit(nums[1]))
        }
        "cosine_modulated" => {
            arity(1)?;
            Ok(LibraryField::CosineModulated {
                d: check_dim(name, nums[0], &DIMS)?,
            })
        }
        "degenerate" => {
            arity(0)?;
            Ok(LibraryField::Degenerate)
        }
        "drift_antisym" => {
            arity(1)?;
            LibraryField::drift_antisym(T::lit(nums[0]))
        }
        "complex_symmetric" => {
            arity(2)?;
            LibraryField::complex_symmetric(check_dim(name, nums[0], &[1, 2])?, T::lit(nums[1]))
        }
        "kinked" => {
            arity(1)?;
            Ok(LibraryField::Kinked {
                d: check_dim(name, nums[0], &DIMS)?,
            })
        }
        _ => Err(Error::UnknownField(name.into())),
    }
}

/// The fields exercised by default suites, in a fixed order.
pub fn standard_library<T: Real>() -> Vec<LibraryField<T>> {
    let a = T::lit(0.3);
    vec![
        LibraryField::Constant(CMatrix::identity(2)),
        LibraryField::RotatedLaplacian {
            d: 1,
            theta0: T::lit(std::f64::consts::FRAC_PI_6),
        },
        LibraryField::CosineModulated { d: 2 },
        LibraryField::Degenerate,
        LibraryField::DriftAntisym { theta0: a },
        LibraryField::ComplexSymmetric { d: 1, theta0: a },
        LibraryField::ComplexSymmetric { d: 2, theta0: a },
    ]
}

/// Outcome of [`verify_sector`].
#[derive(Clone, Debug, PartialEq)]
pub struct SectorVerification<T> {
    /// `max_x θ*(C(x)) − θ`; `≤ 0` means every sample lies in `Σ_θ`.
    pub max_excess: T,
    pub worst_x: Vec<T>,
}

pub fn verify_sector<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    theta: SectorAngle<T>,
    n_points: usize,
) -> Result<SectorVerification<T>> {
    if n_points == 0 {
        return Err(Error::Precondition("n_points must be at least 1".into()));
    }
    let pts = halton_torus::<T>(n_points, field.dim());
    let angles: Vec<Result<T>> = pts
        .par_iter()
        .map(|x| match minimal_sector_angle(&field.value(x))? {
            Ok(a) => Ok(a.radians()),
            Err(rej) => Err(Error::SectorRejected {
                x: x.iter().map(|v| v.as_f64()).collect(),
                reason: rej.reason.to_string(),
            }),
        })
        .collect();
    let mut best = SectorVerification {
        max_excess: T::neg_infinity(),
        worst_x: pts[0].clone(),
    };
    for (x, a) in pts.iter().zip(angles) {
        let excess = a? - theta.radians();
        if excess > best.max_excess {
            best = SectorVerification {
                max_excess: excess,
                worst_x: x.clone(),
            };
        }
    }
    Ok(best)
}

/// Default sample count for sup-norm estimates.
pub fn default_points(d: usize) -> usize {
    4096 * d
}

/// `max_{x, l} max|∂_l² C(x)|` over Halton points.
pub fn sup_norm_d2<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    n_points: usize,
) -> Result<T> {
    if field.smoothness() != Smoothness::W2Inf {
        return Err(Error::Capability(field.name()));
    }
    let d = field.dim();
    let pts = halton_torus::<T>(n_points, d);
    let vals: Vec<Option<T>> = pts
        .par_iter()
        .map(|x| {
            (0..d).try_fold(T::zero(), |acc, l| {
                field.d2(x, l, l).map(|m| acc.max(m.norm_max()))
            })
        })
        .collect();
    vals.into_iter()
        .try_fold(T::zero(), |acc, v| v.map(|v| acc.max(v)))
        .ok_or_else(|| Error::Capability(field.name()))
}

/// `M = 32 d (1 + tan(θ + |α|))² ‖∂_l² C‖_∞`.
pub fn oleinik_constant<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    theta: SectorAngle<T>,
    alpha: T,
    n_points: usize,
) -> Result<T> {
    let ang = theta.radians() + alpha.abs();
    if !(ang < T::FRAC_PI_2()) {
        return Err(Error::AngleRange(format!(
            "θ + |α| = {ang} is not below π/2"
        )));
    }
    let sup = sup_norm_d2(field, n_points)?;
    let g = T::one() + ang.tan();
    Ok(T::lit(32.0) * T::from_usize_lossy(field.dim()) * g * g * sup)
}

/// Outcome of [`oleinik_inequality_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OleinikCheck<T> {
    /// `max (|tr((∂_j C_α) U)|² − M tr(U R_{s,α} Ū))`.
    pub max_violation: T,
    /// The same difference divided by `|tr(..)|² + M |tr(..)|` (0 when both vanish).
    pub max_relative: T,
    pub m: T,
}

pub fn oleinik_inequality_check<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    theta: SectorAngle<T>,
    alpha: T,
    samples: &[(Vec<T>, CMatrix<T>)],
    n_points: usize,
) -> Result<OleinikCheck<T>> {
    if !field.ba_zero() {
        return Err(Error::Precondition(format!(
            "{} does not have B_a = 0",
            field.name()
        )));
    }
    let d = field.dim();
    for (x, u) in samples {
        if x.len() != d || u.rows() != d || u.cols() != d {
            return Err(Error::Dimension {
                expected: d,
                got: x.len().max(u.rows()),
            });
        }
        let asym = u.max_abs_diff(&u.transpose());
        if asym > T::lit(1e-12) * u.norm_max() {
            return Err(Error::Precondition("U is not symmetric".into()));
        }
    }
    let m = oleinik_constant(field, theta, alpha, n_points)?;
    let rot = cis(alpha);
    let per: Vec<Result<(T, T)>> = samples
        .par_iter()
        .map(|(x, u)| {
            let c = field.value(x);
            if !decompose(&c)?.ba_vanishes(T::lit(1e-12)) {
                return Err(Error::Precondition(format!("B_a ≠ 0 at x = {x:?}")));
            }
            let dec = rotate(&c, alpha)?;
            let rhs_tr = u
                .matmul(&dec.r_s.to_complex())?
                .matmul(&u.conj())?
                .trace()
                .re;
            let rhs = m * rhs_tr;
            let mut worst = (T::neg_infinity(), T::neg_infinity());
            for j in 0..d {
                let lhs = field.d1(x, j).scale(rot).matmul(u)?.trace().norm_sqr();
                let diff = lhs - rhs;
                let denom = lhs + rhs.abs();
                let rel = if denom > T::zero() {
                    diff / denom
                } else {
                    T::zero()
                };
                worst = (worst.0.max(diff), worst.1.max(rel));
            }
            Ok(worst)
        })
        .collect();
    let mut out = OleinikCheck {
        max_violation: T::neg_infinity(),
        max_relative: T::neg_infinity(),
        m,
    };
    for r in per {
        let (v, rel) = r?;
        out.max_violation = out.max_violation.max(v);
        out.max_relative = out.max_relative.max(rel);
    }
    Ok(out)
}

/// Largest `|analytic − central difference| / (1 + max|C|)` for `d1` and `d2`
/// at the given points with step `h`. Second derivatives are compared only
/// when available.
pub fn derivative_defect<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    points: &[Vec<T>],
    h: T,
) -> T {
    let d = field.dim();
    let shift = |x: &[T], j: usize, s: T| {
        let mut y = x.to_vec();
        y[j] += s;
        y
    };
    let two_h = h + h;
    let mut worst = T::zero();
    for x in points {
        let scale = T::one() + field.value(x).norm_max();
        for j in 0..d {
            let fd = (&field.value(&shift(x, j, h)) - &field.value(&shift(x, j, -h)))
                .scale_real(T::one() / two_h);
            worst = worst.max(fd.max_abs_diff(&field.d1(x, j)) / scale);
            for l in 0..d {
                if let Some(exact) = field.d2(x, j, l) {
                    let fd = (&field.d1(&shift(x, l, h), j) - &field.d1(&shift(x, l, -h), j))
                        .scale_real(T::one() / two_h);
                    worst = worst.max(fd.max_abs_diff(&exact) / scale);
                }
            }
        }
    }
    worst
}

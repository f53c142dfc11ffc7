//! Trapezoidal quadrature of the `L_p` duality pairing on the torus.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::linalg::decomp::decompose;
use crate::pairing::test_function::TestFunction;
use crate::scalar::{Cx, Real};

/// Relative threshold for excluding near-zeros of `u`.
pub const ZERO_SET_REL: f64 = 1e-12;
/// Minimum points per axis.
pub const MIN_POINTS: usize = 8;
const CHUNK: usize = 256;

/// Result of a quadrature pairing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairingValue<T> {
    pub re: T,
    pub im: T,
    pub quadrature_points: usize,
    /// Fraction of nodes dropped by the zero-set threshold.
    pub excluded_mass: T,
}

impl<T: Real> PairingValue<T> {
    pub fn value(&self) -> Cx<T> {
        Cx::new(self.re, self.im)
    }
}

/// `u ∇ū = ξ + iη` split into real vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct XiEta<T> {
    pub xi: Vec<T>,
    pub eta: Vec<T>,
}

impl<T: Real> XiEta<T> {
    pub fn new(u: Cx<T>, grad: &[Cx<T>]) -> Self {
        let w: Vec<Cx<T>> = grad.iter().map(|g| u * g.conj()).collect();
        Self {
            xi: w.iter().map(|z| z.re).collect(),
            eta: w.iter().map(|z| z.im).collect(),
        }
    }

    /// `ξ′ = √(p − 1) ξ`.
    pub fn xi_prime(&self, p: T) -> Vec<T> {
        let s = (p - T::one()).sqrt();
        self.xi.iter().map(|v| *v * s).collect()
    }
}

/// Node `idx` of the `N^d` uniform grid, first axis fastest.
pub fn grid_point<T: Real>(idx: usize, n: usize, d: usize) -> Vec<T> {
    let h = T::TAU() / T::from_usize_lossy(n);
    let mut rest = idx;
    (0..d)
        .map(|_| {
            let k = rest % n;
            rest /= n;
            T::from_usize_lossy(k) * h
        })
        .collect()
}

pub(crate) fn check_inputs<T: Real>(d_field: usize, d_u: usize, p: T, n: usize) -> Result<()> {
    if d_field != d_u {
        return Err(Error::Dimension {
            expected: d_field,
            got: d_u,
        });
    }
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::ExponentDomain(p.as_f64()));
    }
    if n < MIN_POINTS {
        return Err(Error::GridSize(n));
    }
    Ok(())
}

/// `h^d Σ f(x)` over nodes whose weight `w(x)` exceeds `ZERO_SET_REL · max w`.
///
/// Sums are formed per fixed-size chunk and then added in chunk order, so the
/// result does not depend on the thread count.
pub(crate) fn masked_sum<T, W, F>(n: usize, d: usize, weight: W, f: F) -> Result<(Cx<T>, T)>
where
    T: Real,
    W: Fn(&[T]) -> T + Sync,
    F: Fn(&[T]) -> Cx<T> + Sync,
{
    let total = n.pow(d as u32);
    let weights: Vec<T> = (0..total)
        .into_par_iter()
        .map(|i| weight(&grid_point(i, n, d)))
        .collect();
    let wmax = weights.iter().copied().fold(T::zero(), T::max);
    let tau = T::lit(ZERO_SET_REL) * wmax;
    let partial: Vec<(Cx<T>, usize)> = weights
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, ws)| {
            let mut acc = Cx::new(T::zero(), T::zero());
            let mut kept = 0;
            for (o, &w) in ws.iter().enumerate() {
                if w > tau {
                    acc += f(&grid_point(c * CHUNK + o, n, d));
                    kept += 1;
                }
            }
            (acc, kept)
        })
        .collect();
    let kept: usize = partial.iter().map(|p| p.1).sum();
    if kept == 0 {
        return Err(Error::AllExcluded);
    }
    let sum = partial
        .iter()
        .fold(Cx::new(T::zero(), T::zero()), |a, p| a + p.0);
    let h = T::TAU() / T::from_usize_lossy(n);
    let excluded = T::from_usize_lossy(total - kept) / T::from_usize_lossy(total);
    Ok((sum * h.powi(d as i32), excluded))
}

/// `(A u)(x) = −Σ_{k,l} [(∂_l c_kl)(∂_k u) + c_kl ∂_l∂_k u]`.
pub fn apply_operator<T, F, U>(field: &F, u: &U, x: &[T]) -> Result<Cx<T>>
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
    let mut acc = Cx::new(T::zero(), T::zero());
    for l in 0..d {
        let dl = field.d1(x, l);
        for k in 0..d {
            acc += dl[(k, l)] * g[k] + c[(k, l)] * hs[(l, k)];
        }
    }
    Ok(-acc)
}

/// `∫ (A u) |u|^{p−2} ū` over `[u ≠ 0]`.
pub fn pairing_direct<T, F, U>(field: &F, u: &U, p: T, n: usize) -> Result<PairingValue<T>>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    check_inputs(field.dim(), u.dim(), p, n)?;
    let pm2 = p - T::lit(2.0);
    let (s, excluded) = masked_sum(
        n,
        field.dim(),
        |x| u.value(x).norm(),
        |x| {
            let v = u.value(x);
            let au = apply_operator(field, u, x).expect("dimensions checked");
            au * v.conj() * v.norm().powf(pm2)
        },
    )?;
    Ok(PairingValue {
        re: s.re,
        im: s.im,
        quadrature_points: n.pow(field.dim() as u32),
        excluded_mass: excluded,
    })
}

/// The same pairing through the quadratic-form expansion in `(ξ, η)`.
pub fn pairing_via_forms<T, F, U>(field: &F, u: &U, p: T, n: usize) -> Result<PairingValue<T>>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    check_inputs(field.dim(), u.dim(), p, n)?;
    let one = T::one();
    let two = T::lit(2.0);
    let (s, excluded) = masked_sum(
        n,
        field.dim(),
        |x| u.value(x).norm(),
        |x| {
            let v = u.value(x);
            let XiEta { xi, eta } = XiEta::new(v, &u.grad(x));
            let dec = decompose(&field.value(x)).expect("finite square field value");
            let w = v.norm().powf(p - T::lit(4.0));
            let re = (p - one) * dec.r_s.quadratic(&xi)
                + dec.r_s.quadratic(&eta)
                + (p - two) * dec.b_s.bilinear(&xi, &eta)
                + p * dec.b_a.bilinear(&xi, &eta);
            let im = (p - one) * dec.b_s.quadratic(&xi) + dec.b_s.quadratic(&eta)
                - (p - two) * dec.r_s.bilinear(&xi, &eta)
                - p * dec.r_a.bilinear(&xi, &eta);
            Cx::new(re * w, im * w)
        },
    )?;
    Ok(PairingValue {
        re: s.re,
        im: s.im,
        quadrature_points: n.pow(field.dim() as u32),
        excluded_mass: excluded,
    })
}

/// `|pairing_direct − pairing_via_forms|`.
pub fn ibp_residual<T, F, U>(field: &F, u: &U, p: T, n: usize) -> Result<T>
where
    T: Real,
    F: CoefficientField<T> + ?Sized,
    U: TestFunction<T> + ?Sized,
{
    let a = pairing_direct(field, u, p, n)?;
    let b = pairing_via_forms(field, u, p, n)?;
    Ok((a.value() - b.value()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::LibraryField;
    use crate::linalg::matrix::CMatrix;
    use crate::pairing::test_function::TrigPoly;
    use std::f64::consts::TAU;

    fn wave() -> TrigPoly<f64> {
        TrigPoly::mode(vec![1])
    }

    #[test]
    fn laplacian_of_plane_wave() {
        let id: LibraryField<f64> = LibraryField::Constant(CMatrix::identity(1));
        let x = [0.4];
        let au = apply_operator(&id, &wave(), &x).unwrap();
        assert!((au - wave().value(&x)).norm() < 1e-15);
    }

    #[test]
    fn constant_symbol() {
        // (C k, k) = Σ conj(k_k) c_kl k_l for real k
        let c = CMatrix::from_rows(&[
            vec![Cx::new(2.0, 0.1), Cx::new(0.3, -0.2)],
            vec![Cx::new(-0.1, 0.0), Cx::new(1.0, 0.4)],
        ])
        .unwrap();
        let f = LibraryField::Constant(c.clone());
        let u = TrigPoly::<f64>::mode(vec![2, -3]);
        let k = [2.0, -3.0];
        let symbol: Cx<f64> = (0..2)
            .flat_map(|a| (0..2).map(move |b| (a, b)))
            .map(|(a, b)| c[(a, b)] * k[a] * k[b])
            .sum();
        let x = [0.2, 0.9];
        assert!((apply_operator(&f, &u, &x).unwrap() - symbol * u.value(&x)).norm() < 1e-13);
    }

    #[test]
    fn identity_pairings() {
        let id: LibraryField<f64> = LibraryField::Constant(CMatrix::identity(1));
        for p in [2.0, 4.0] {
            let v = pairing_direct(&id, &wave(), p, 16).unwrap();
            assert!((v.re - TAU).abs() < 1e-13 && v.im.abs() < 1e-13);
            assert_eq!(v.excluded_mass, 0.0);
        }
        let v = pairing_via_forms(&id, &wave(), 4.0, 16).unwrap();
        assert!((v.re - TAU).abs() < 1e-13 && v.im.abs() < 1e-13);
    }

    #[test]
    fn rotated_identity_ratio() {
        let t0 = 0.7;
        let f = LibraryField::rotated_laplacian(1, t0).unwrap();
        let v = pairing_direct(&f, &wave(), 2.0, 64).unwrap();
        assert!((v.im / v.re - t0.tan()).abs() < 1e-12);
    }

    #[test]
    fn real_data_has_zero_imaginary_part() {
        let f: LibraryField<f64> = LibraryField::CosineModulated { d: 1 };
        let u = TrigPoly::shifted_cosine(1, 2.0);
        let v = pairing_via_forms(&f, &u, 3.0, 32).unwrap();
        assert_eq!(v.im, 0.0);
        assert!(ibp_residual(&f, &u, 3.0, 128).unwrap() <= 1e-10);
    }

    #[test]
    fn zero_function_is_degenerate() {
        let id: LibraryField<f64> = LibraryField::Constant(CMatrix::identity(1));
        let z = TrigPoly::<f64>::new(1, vec![]);
        assert_eq!(
            pairing_direct(&id, &z, 2.0, 16).unwrap_err(),
            Error::AllExcluded
        );
    }

    #[test]
    fn input_validation() {
        let id: LibraryField<f64> = LibraryField::Constant(CMatrix::identity(2));
        assert!(matches!(
            pairing_direct(&id, &wave(), 2.0, 16),
            Err(Error::Dimension { .. })
        ));
        let id1: LibraryField<f64> = LibraryField::Constant(CMatrix::identity(1));
        assert_eq!(
            pairing_direct(&id1, &wave(), 2.0, 4).unwrap_err(),
            Error::GridSize(4)
        );
        assert!(matches!(
            pairing_direct(&id1, &wave(), 1.0, 16),
            Err(Error::ExponentDomain(_))
        ));
    }
}

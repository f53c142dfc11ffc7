//! Seeded random inputs and low-discrepancy torus points.
//!
//! Every random draw in the crate goes through [`Rng`], a ChaCha8 stream
//! seeded from a `u64`. Parallel loops derive one independent stream per work
//! item with [`stream_rng`], so results do not depend on scheduling.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::matrix::{CMatrix, RealMatrix};
use crate::linalg::sector::minimal_sector_angle;
use crate::scalar::{cis, Cx, Real};

pub type Rng = ChaCha8Rng;

/// Algorithm name recorded in reports.
pub const RNG_NAME: &str = "ChaCha8";

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut r = rng(seed);
    r.set_stream(stream);
    r
}

pub fn normal<T: Real>(rng: &mut Rng) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

pub fn uniform<T: Real>(rng: &mut Rng, lo: f64, hi: f64) -> T {
    T::lit(rng.random_range(lo..hi))
}

pub fn real_vector<T: Real>(rng: &mut Rng, d: usize) -> Vec<T> {
    (0..d).map(|_| normal(rng)).collect()
}

pub fn complex_vector<T: Real>(rng: &mut Rng, d: usize) -> Vec<Cx<T>> {
    (0..d).map(|_| Cx::new(normal(rng), normal(rng))).collect()
}

/// Real vector pairs `(ξ, η)`, including the structured cases `η = 0`,
/// `η = ξ`, `η = −ξ` and widely different magnitudes.
pub fn vector_pairs<T: Real>(rng: &mut Rng, d: usize, n: usize) -> Vec<(Vec<T>, Vec<T>)> {
    (0..n)
        .map(|i| {
            let xi: Vec<T> = real_vector(rng, d);
            let eta: Vec<T> = match i % 8 {
                0 => vec![T::zero(); d],
                1 => xi.clone(),
                2 => xi.iter().map(|v| -*v).collect(),
                3 => real_vector::<T>(rng, d)
                    .into_iter()
                    .map(|v| v * T::lit(1e3))
                    .collect(),
                _ => real_vector(rng, d),
            };
            (xi, eta)
        })
        .collect()
}

/// Haar-ish random orthogonal matrix by Gram–Schmidt on Gaussian columns.
pub fn orthogonal<T: Real>(rng: &mut Rng, d: usize) -> RealMatrix<T> {
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<T> = real_vector(rng, d);
        for _ in 0..2 {
            for c in &cols {
                let dot: T = v.iter().zip(c).map(|(a, b)| *a * *b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= dot * *b);
            }
        }
        let n = v.iter().map(|a| *a * *a).sum::<T>().sqrt();
        if n > T::lit(1e-8) {
            cols.push(v.into_iter().map(|a| a / n).collect());
        }
    }
    RealMatrix::from_fn(d, |i, j| cols[j][i])
}

/// `V diag(λ) Vᵀ`.
fn spectral<T: Real>(v: &RealMatrix<T>, lam: &[T]) -> RealMatrix<T> {
    let d = v.dim();
    RealMatrix::from_fn(d, |i, j| {
        (0..d).map(|k| v[(i, k)] * lam[k] * v[(j, k)]).sum()
    })
}

/// Random positive semidefinite matrix of rank `rank`.
pub fn psd<T: Real>(rng: &mut Rng, d: usize, rank: usize) -> RealMatrix<T> {
    let v = orthogonal(rng, d);
    let lam: Vec<T> = (0..d)
        .map(|k| {
            if k < rank {
                uniform(rng, 0.1, 3.0)
            } else {
                T::zero()
            }
        })
        .collect();
    spectral(&v, &lam)
}

/// Random complex symmetric (`Uᵀ = U`) matrix.
pub fn complex_symmetric<T: Real>(rng: &mut Rng, d: usize) -> CMatrix<T> {
    let mut u = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let z = Cx::new(normal(rng), normal(rng));
            u[(i, j)] = z;
            u[(j, i)] = z;
        }
    }
    u
}

/// Shape of a generated sector matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectorShape {
    /// `e^{iβ}(P + i t Q + s A)`: every part may be nonzero.
    General,
    /// `e^{iβ}(P + i t Q) + s A`: `B_a = 0`, `R_a ≠ 0` in general.
    BaZero,
    /// `e^{iβ}(P + i t Q)`: `R_a = B_a = 0`.
    Symmetric,
}

/// Random coefficient matrix with a finite sector angle.
///
/// `P` is PSD of random rank (singular when the rank is below `d`); `Q` and
/// the antisymmetric `A` are compressed onto the range of `P`, which keeps
/// the numerical range inside a sector of angle `< π/2`. The angle itself is
/// not prescribed; compute it with
/// [`minimal_sector_angle`](crate::linalg::sector::minimal_sector_angle).
pub fn sector_matrix<T: Real>(rng: &mut Rng, d: usize, shape: SectorShape) -> CMatrix<T> {
    let v = orthogonal::<T>(rng, d);
    let rank = rng.random_range(1..=d);
    let lam: Vec<T> = (0..d)
        .map(|k| {
            if k < rank {
                uniform(rng, 0.1, 3.0)
            } else {
                T::zero()
            }
        })
        .collect();
    let ones: Vec<T> = lam
        .iter()
        .map(|l| if *l > T::zero() { T::one() } else { T::zero() })
        .collect();
    let p = spectral(&v, &lam);
    let proj = spectral(&v, &ones);
    let compress = |m: &RealMatrix<T>| -> RealMatrix<T> {
        RealMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| {
                    (0..d)
                        .map(|l| proj[(i, k)] * m[(k, l)] * proj[(l, j)])
                        .sum::<T>()
                })
                .sum()
        })
    };
    let g = RealMatrix::from_fn(d, |_, _| normal::<T>(rng));
    let q = compress(&g.symmetric_part());
    let h = RealMatrix::from_fn(d, |_, _| normal::<T>(rng));
    let a = compress(&h.antisymmetric_part());

    // Rescale the imaginary perturbation to a target angle θ₁, then rotate
    // by |β| ≤ 1.3 − θ₁ so the total stays well inside π/2.
    let theta1: T = uniform(rng, 0.0, 1.0);
    let beta: T = uniform::<T>(rng, -1.0, 1.0) * (T::lit(1.3) - theta1);
    let t: T = normal(rng);
    let s: T = if shape == SectorShape::Symmetric {
        T::zero()
    } else {
        normal(rng)
    };
    let pc = p.to_complex();
    let tq = q.to_imaginary(t);
    let sa = a.to_complex().scale_real(s);
    let imag = match shape {
        SectorShape::General => &tq + &sa,
        _ => tq,
    };
    let inner_tan = match minimal_sector_angle(&(&pc + &imag)) {
        Ok(Ok(th)) => th.tan(),
        _ => T::zero(),
    };
    let kappa = if inner_tan > T::zero() {
        theta1.tan() / inner_tan
    } else {
        T::zero()
    };
    let inner = &pc + &imag.scale_real(kappa);
    let mut c = inner.scale(cis(beta));
    if shape == SectorShape::BaZero {
        // shrink the outer antisymmetric term until the angle is ≤ 1.4
        let mut sa = sa;
        loop {
            let cand = &c + &sa;
            match minimal_sector_angle(&cand) {
                Ok(Ok(th)) if th.radians() <= T::lit(1.4) => {
                    c = cand;
                    break;
                }
                _ => sa = sa.scale_real(T::lit(0.5)),
            }
        }
    }
    c
}

/// First `n` points of the Halton sequence mapped to `[0, 2π)^d` (`d ≤ 8`).
pub fn halton_torus<T: Real>(n: usize, d: usize) -> Vec<Vec<T>> {
    const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    assert!(d <= PRIMES.len(), "Halton points supported up to d = 8");
    (1..=n as u64)
        .map(|i| {
            PRIMES[..d]
                .iter()
                .map(|&b| {
                    let (mut f, mut r, mut k) = (1.0f64, 0.0f64, i);
                    while k > 0 {
                        f /= b as f64;
                        r += f * (k % b) as f64;
                        k /= b;
                    }
                    T::lit(r) * T::TAU()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::decomp::decompose;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = real_vector(&mut stream_rng(7, 3), 4);
        let b: Vec<f64> = real_vector(&mut stream_rng(7, 3), 4);
        let c: Vec<f64> = real_vector(&mut stream_rng(7, 4), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let v = orthogonal::<f64>(&mut rng(1), 5);
        let vt = v.transpose();
        let g = RealMatrix::from_fn(5, |i, j| {
            (0..5).map(|k| vt[(i, k)] * v[(k, j)]).sum::<f64>()
        });
        assert!(g.max_abs_diff(&RealMatrix::identity(5)) < 1e-14);
    }

    #[test]
    fn generated_matrices_have_sector_and_shape() {
        let mut r = rng(11);
        for d in 1..=4 {
            for _ in 0..50 {
                for shape in [
                    SectorShape::General,
                    SectorShape::BaZero,
                    SectorShape::Symmetric,
                ] {
                    let c = sector_matrix::<f64>(&mut r, d, shape);
                    assert!(minimal_sector_angle(&c).unwrap().is_ok(), "{shape:?} {c:?}");
                    let dec = decompose(&c).unwrap();
                    if shape != SectorShape::General {
                        assert!(dec.ba_vanishes(1e-12));
                    }
                    if shape == SectorShape::Symmetric {
                        assert!(dec.ra_vanishes(1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn halton_first_points() {
        let pts = halton_torus::<f64>(3, 2);
        let tau = std::f64::consts::TAU;
        assert!((pts[0][0] - 0.5 * tau).abs() < 1e-15);
        assert!((pts[0][1] - tau / 3.0).abs() < 1e-15);
        assert!((pts[2][0] - 0.75 * tau).abs() < 1e-15);
    }
}

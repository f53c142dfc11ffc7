//! Matrix exponential by scaling and squaring with the degree-13 diagonal
//! Padé approximant.

use crate::error::{Error, Result};
use crate::linalg::lu::LuFactor;
use crate::linalg::matrix::CMatrix;
use crate::scalar::{re, Real};

/// Padé(13,13) numerator coefficients `b_0 … b_13`.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Scaling threshold on the 1-norm for the degree-13 approximant.
pub const THETA_13: f64 = 5.371_920_351_148_152;

const MAX_SQUARINGS: u32 = 1000;

/// Exponential plus the number of squarings that produced it.
#[derive(Clone, Debug)]
pub struct Expm<T> {
    pub value: CMatrix<T>,
    pub squarings: u32,
}

pub fn expm<T: Real>(a: &CMatrix<T>) -> Result<Expm<T>> {
    let n = a.ensure_square()?;
    let norm = a.norm_1();
    if !norm.is_finite() {
        return Err(Error::Scaling(norm.as_f64()));
    }
    if n == 0 {
        return Ok(Expm {
            value: CMatrix::zeros(0, 0),
            squarings: 0,
        });
    }
    let theta = T::lit(THETA_13);
    let s = if norm > theta {
        (norm / theta).log2().ceil().to_u32().unwrap_or(u32::MAX)
    } else {
        0
    };
    if s > MAX_SQUARINGS {
        return Err(Error::Scaling(norm.as_f64()));
    }
    let scaled = a.scale_real(T::lit(0.5).powi(s as i32));
    let mut value = pade13(&scaled)?;
    for _ in 0..s {
        value = value.matmul(&value)?;
    }
    if !value.is_finite() {
        return Err(Error::Scaling(norm.as_f64()));
    }
    Ok(Expm {
        value,
        squarings: s,
    })
}

fn pade13<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let b = |k: usize| re(T::lit(PADE13[k]));
    let a2 = a.matmul(a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;
    // c6·A⁶ + c4·A⁴ + c2·A² + c0·I
    let even = |c6: usize, c4: usize, c2: usize, c0: usize| {
        (&(&a6.scale(b(c6)) + &a4.scale(b(c4))) + &a2.scale(b(c2))).add_diagonal(b(c0))
    };
    let upper_u = &(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9));
    let u = a.matmul(&(&a6.matmul(&upper_u)? + &even(7, 5, 3, 1)))?;
    let upper_v = &(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8));
    let v = &a6.matmul(&upper_v)? + &even(6, 4, 2, 0);

    let num = &v + &u;
    let den = &v - &u;
    LuFactor::new(&den)?.solve_mat(&num)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn exponential_of_zero_is_identity() {
        let e = expm(&CMatrix::<f64>::zeros(4, 4)).unwrap();
        assert!(e.value.max_abs_diff(&CMatrix::identity(4)) < 1e-15);
        assert_eq!(e.squarings, 0);
    }

    #[test]
    fn diagonal_matrix_exponentiates_entrywise() {
        let d = [cx(-3.0f64, 1.0), cx(0.5, 0.0), cx(-40.0, -7.0)];
        let e = expm(&CMatrix::diagonal(&d)).unwrap();
        for (i, z) in d.iter().enumerate() {
            assert!((e.value[(i, i)] - z.exp()).norm() < 1e-13 * z.exp().norm().max(1.0));
        }
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, t], [-t, 0]]) = [[cos t, sin t], [-sin t, cos t]]
        let t = 2.5f64;
        let a = CMatrix::from_rows(&[
            vec![cx(0.0, 0.0), cx(t, 0.0)],
            vec![cx(-t, 0.0), cx(0.0, 0.0)],
        ])
        .unwrap();
        let e = expm(&a).unwrap().value;
        assert!((e[(0, 0)] - cx(t.cos(), 0.0)).norm() < 1e-14);
        assert!((e[(0, 1)] - cx(t.sin(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn overflowing_norm_is_a_scaling_failure() {
        let a = CMatrix::diagonal(&[cx(f64::INFINITY, 0.0)]);
        assert!(matches!(expm(&a), Err(Error::Scaling(_))));
    }

    #[test]
    fn matches_scaled_taylor_series() {
        let mut r = crate::sampling::rng(3);
        for n in [3, 8, 16] {
            let v = crate::sampling::complex_vector::<f64>(&mut r, n * n);
            let a = CMatrix::from_vec(n, n, v).unwrap().scale_real(0.8);
            let s = 6;
            let b = a.scale_real(0.5f64.powi(s));
            let mut term = CMatrix::identity(n);
            let mut sum = CMatrix::identity(n);
            for k in 1..=200 {
                term = term.matmul(&b).unwrap().scale_real(1.0 / k as f64);
                sum = &sum + &term;
            }
            for _ in 0..s {
                sum = sum.matmul(&sum).unwrap();
            }
            let e = expm(&a).unwrap().value;
            assert!(e.max_abs_diff(&sum) <= 1e-11 * sum.norm_max(), "n={n}");
        }
    }
}

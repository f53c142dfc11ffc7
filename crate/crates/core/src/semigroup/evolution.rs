//! `exp(−z A_h)` on rays of the sector and the `l_p` contraction check.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::eigen::spectral_norm;
use crate::linalg::expm::expm;
use crate::linalg::matrix::CMatrix;
use crate::sampling::stream_rng;
use crate::scalar::{cis, cx, Cx, Real};
use crate::semigroup::grid::{lp_norm, random_grid_vector, GridOperator};

/// `exp(−z A_h)`.
#[derive(Clone, Debug)]
pub struct Propagator<T> {
    pub z: Cx<T>,
    pub matrix: CMatrix<T>,
    pub squarings: u32,
}

pub fn propagate<T: Real>(op: &GridOperator<T>, z: Cx<T>) -> Result<Propagator<T>> {
    if z.re < T::zero() {
        return Err(Error::AngleRange(format!("Re z = {} < 0", z.re.as_f64())));
    }
    let e = expm(&op.matrix.scale(-z))?;
    Ok(Propagator {
        z,
        matrix: e.value,
        squarings: e.squarings,
    })
}

/// Sampling plan for [`contraction_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionPlan<T> {
    /// Rays `arg z = ±γ(1 − 1/n)·j/n`, `j = 0..=n` (`2n + 1` rays).
    pub n_rays: usize,
    /// Times `t_max · 4^{k−(n_times−1)}`, `k < n_times`.
    pub n_times: usize,
    pub t_max: T,
    pub n_vectors: usize,
    /// Also compute the exact operator 2-norm (only used for `p = 2`).
    pub exact_norm: bool,
    pub seed: u64,
}

impl<T: Real> Default for ContractionPlan<T> {
    fn default() -> Self {
        Self {
            n_rays: 2,
            n_times: 8,
            t_max: T::lit(4.0),
            n_vectors: 10,
            exact_norm: false,
            seed: 0,
        }
    }
}

impl<T: Real> ContractionPlan<T> {
    pub fn ray_angles(&self, gamma: T) -> Vec<T> {
        let n = T::from_usize_lossy(self.n_rays.max(1));
        let top = gamma * (T::one() - T::one() / n);
        let mut out = vec![T::zero()];
        for j in 1..=self.n_rays {
            let w = top * T::from_usize_lossy(j) / n;
            out.push(w);
            out.push(-w);
        }
        out
    }

    pub fn times(&self) -> Vec<T> {
        let k = self.n_times.max(1);
        (0..k)
            .map(|i| self.t_max * T::lit(4.0).powi(i as i32 - (k as i32 - 1)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionResult<T> {
    /// `max ‖e^{−zA_h} u‖_p / ‖u‖_p` over all samples.
    pub max_ratio: T,
    pub worst_z: Cx<T>,
    pub worst_vector: usize,
    /// `max_z ‖e^{−zA_h}‖_{2→2}` when requested for `p = 2`.
    pub exact_norm: Option<T>,
    pub samples: usize,
}

/// Ratios `‖e^{−zA_h} u‖_p / ‖u‖_p` on rays inside `Σ_γ`.
///
/// Along each ray the first propagator is formed with [`expm`] and later
/// times by two squarings each, unless the exact 2-norm is requested, in
/// which case every propagator comes from [`expm`].
pub fn contraction_check<T: Real>(
    op: &GridOperator<T>,
    p: T,
    gamma: T,
    plan: &ContractionPlan<T>,
) -> Result<ContractionResult<T>> {
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::ExponentDomain(p.as_f64()));
    }
    if !(gamma > T::zero() && gamma <= T::FRAC_PI_2()) {
        return Err(Error::AngleRange(format!(
            "γ = {} outside (0, π/2]",
            gamma.as_f64()
        )));
    }
    let w = op.h.powi(op.d as i32);
    let vectors: Vec<(Vec<Cx<T>>, T)> = (0..plan.n_vectors)
        .map(|v| {
            let u = random_grid_vector::<T>(&mut stream_rng(plan.seed, v as u64), op.d, op.n, v);
            let nrm = lp_norm(&u, p, w);
            (u, nrm)
        })
        .collect();
    let times = plan.times();
    let exact = plan.exact_norm && p == T::lit(2.0);
    let per_ray: Vec<Result<Vec<(T, Cx<T>, usize, Option<T>)>>> = plan
        .ray_angles(gamma)
        .into_par_iter()
        .map(|omega| {
            let dir = cis(omega);
            let mut e = propagate(op, dir * times[0])?.matrix;
            let mut out = Vec::with_capacity(times.len());
            for (k, &t) in times.iter().enumerate() {
                if k > 0 && exact {
                    // squaring amplifies rounding beyond the exact-norm tolerance
                    e = propagate(op, dir * t)?.matrix;
                } else if k > 0 {
                    e = e.matmul(&e)?;
                    e = e.matmul(&e)?;
                }
                let (mut best, mut arg) = (T::neg_infinity(), 0);
                for (idx, (u, nrm)) in vectors.iter().enumerate() {
                    let r = lp_norm(&e.mul_vec(u)?, p, w) / *nrm;
                    if r > best {
                        best = r;
                        arg = idx;
                    }
                }
                let en = if exact {
                    Some(spectral_norm(&e)?)
                } else {
                    None
                };
                out.push((best, dir * t, arg, en));
            }
            Ok(out)
        })
        .collect();
    let mut res = ContractionResult {
        max_ratio: T::neg_infinity(),
        worst_z: cx(T::zero(), T::zero()),
        worst_vector: 0,
        exact_norm: if exact { Some(T::neg_infinity()) } else { None },
        samples: 0,
    };
    for ray in per_ray {
        for (r, z, v, en) in ray? {
            res.samples += plan.n_vectors;
            if r > res.max_ratio {
                res.max_ratio = r;
                res.worst_z = z;
                res.worst_vector = v;
            }
            if let (Some(acc), Some(en)) = (res.exact_norm.as_mut(), en) {
                *acc = acc.max(en);
            }
        }
    }
    Ok(res)
}

//! Resolvent bound `|λ| ‖(λ + A_h)^{-1}‖_{p→p} ≤ 1/sin ε` on `Σ_{π−arctan K−ε}`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::lu::LuFactor;
use crate::sampling::stream_rng;
use crate::scalar::{cis, cx, Cx, Real};
use crate::semigroup::grid::{lp_norm, random_grid_vector, GridOperator};

/// Sampling plan for [`resolvent_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventPlan<T> {
    /// Equally spaced arguments on `[−(π − arctan K − ε), π − arctan K − ε]`.
    pub n_rays: usize,
    /// `|λ|` log-spaced over `[1e-2, 1e4] · ‖A_h‖_1`.
    pub n_moduli: usize,
    pub n_vectors: usize,
    pub eps: T,
    pub seed: u64,
}

impl<T: Real> Default for ResolventPlan<T> {
    fn default() -> Self {
        Self {
            n_rays: 5,
            n_moduli: 4,
            n_vectors: 5,
            eps: T::lit(0.1),
            seed: 0,
        }
    }
}

impl<T: Real> ResolventPlan<T> {
    pub fn lambdas(&self, k: T, scale: T) -> Vec<Cx<T>> {
        let top = T::PI() - k.atan() - self.eps;
        let rays = self.n_rays.max(2);
        let moduli = self.n_moduli.max(2);
        let mut out = Vec::with_capacity(rays * moduli);
        for r in 0..rays {
            let arg = top
                * (T::lit(2.0) * T::from_usize_lossy(r) / T::from_usize_lossy(rays - 1) - T::one());
            for m in 0..moduli {
                let e = T::lit(-2.0)
                    + T::lit(6.0) * T::from_usize_lossy(m) / T::from_usize_lossy(moduli - 1);
                out.push(cis(arg) * (scale * T::lit(10.0).powf(e)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolventResult<T> {
    /// `max (sin ε |λ| ‖(λ + A_h)^{-1} u‖_p / ‖u‖_p) − 1`.
    pub max_excess: T,
    pub worst_lambda: Cx<T>,
    pub samples: usize,
}

pub fn resolvent_check<T: Real>(
    op: &GridOperator<T>,
    p: T,
    k: T,
    plan: &ResolventPlan<T>,
) -> Result<ResolventResult<T>> {
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::ExponentDomain(p.as_f64()));
    }
    if !(k >= T::zero() && k.is_finite()) {
        return Err(Error::Precondition(format!(
            "K = {} must be finite and nonnegative",
            k.as_f64()
        )));
    }
    if !(plan.eps > T::zero() && plan.eps < T::PI() - k.atan()) {
        return Err(Error::AngleRange(format!("ε = {}", plan.eps.as_f64())));
    }
    let w = op.h.powi(op.d as i32);
    let scale = op.matrix.norm_1().max(T::min_positive_value());
    let vectors: Vec<(Vec<Cx<T>>, T)> = (0..plan.n_vectors)
        .map(|v| {
            let u = random_grid_vector::<T>(&mut stream_rng(plan.seed, v as u64), op.d, op.n, v);
            let nrm = lp_norm(&u, p, w);
            (u, nrm)
        })
        .collect();
    let sin_eps = plan.eps.sin();
    let rows: Vec<Result<(T, Cx<T>)>> = plan
        .lambdas(k, scale)
        .into_par_iter()
        .map(|lam| {
            let lu = LuFactor::new(&op.matrix.add_diagonal(lam))?;
            let mut worst = T::neg_infinity();
            for (u, nrm) in &vectors {
                let x = lu.solve_vec(u)?;
                worst = worst.max(lp_norm(&x, p, w) / *nrm * lam.norm() * sin_eps - T::one());
            }
            Ok((worst, lam))
        })
        .collect();
    let mut res = ResolventResult {
        max_excess: T::neg_infinity(),
        worst_lambda: cx(T::zero(), T::zero()),
        samples: 0,
    };
    for row in rows {
        let (e, lam) = row?;
        res.samples += plan.n_vectors;
        if e > res.max_excess {
            res.max_excess = e;
            res.worst_lambda = lam;
        }
    }
    Ok(res)
}

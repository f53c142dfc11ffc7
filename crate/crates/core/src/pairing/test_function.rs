//! Trigonometric-polynomial test functions with exact derivatives.

use rand::Rng as _;

use crate::linalg::matrix::CMatrix;
use crate::sampling::{normal, uniform, Rng};
use crate::scalar::{cis, Cx, Real};

/// Smooth periodic complex function with derivatives up to order three.
pub trait TestFunction<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[T]) -> Cx<T>;
    fn grad(&self, x: &[T]) -> Vec<Cx<T>>;
    /// `∂_j ∂_k u`.
    fn hess(&self, x: &[T]) -> CMatrix<T>;
    /// `∂_j ∂_k ∂_l u`.
    fn third(&self, x: &[T], j: usize, k: usize, l: usize) -> Cx<T>;
    /// `false` only when `u` is known to have no zeros.
    fn vanishing(&self) -> bool;
}

/// `u(x) = Σ_m a_m e^{i m·x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<T> {
    d: usize,
    terms: Vec<(Vec<i32>, Cx<T>)>,
}

impl<T: Real> TrigPoly<T> {
    pub fn new(d: usize, terms: Vec<(Vec<i32>, Cx<T>)>) -> Self {
        assert!(
            terms.iter().all(|(m, _)| m.len() == d),
            "mode dimension mismatch"
        );
        Self { d, terms }
    }

    /// `e^{i m·x}`.
    pub fn mode(m: Vec<i32>) -> Self {
        let d = m.len();
        Self::new(d, vec![(m, Cx::new(T::one(), T::zero()))])
    }

    /// `c + cos x₁` (real valued, positive for `c > 1`).
    pub fn shifted_cosine(d: usize, c: T) -> Self {
        let mut e = vec![0; d];
        let half = Cx::new(T::lit(0.5), T::zero());
        let mut terms = vec![(vec![0; d], Cx::new(c, T::zero()))];
        e[0] = 1;
        terms.push((e.clone(), half));
        e[0] = -1;
        terms.push((e, half));
        Self::new(d, terms)
    }

    pub fn terms(&self) -> &[(Vec<i32>, Cx<T>)] {
        &self.terms
    }

    /// Random polynomial of degree `≤ degree` per axis.
    ///
    /// With `nonvanishing`, a constant term dominating the sum of the other
    /// moduli is added, so `|u| ≥ |c₀| − Σ|a_m| > 0`.
    pub fn random(rng: &mut Rng, d: usize, degree: i32, nonvanishing: bool) -> Self {
        let n_terms = if d == 1 { (2 * degree + 1) as usize } else { 6 };
        let mut terms: Vec<(Vec<i32>, Cx<T>)> = Vec::with_capacity(n_terms + 1);
        for t in 0..n_terms {
            let m: Vec<i32> = if d == 1 {
                vec![t as i32 - degree]
            } else {
                (0..d).map(|_| rng.random_range(-degree..=degree)).collect()
            };
            if m.iter().all(|&k| k == 0) {
                continue;
            }
            let decay = T::one() / (T::one() + T::lit(m.iter().map(|&k| (k * k) as f64).sum()));
            terms.push((m, Cx::new(normal::<T>(rng), normal::<T>(rng)) * decay));
        }
        if nonvanishing {
            let total: T = terms.iter().map(|(_, a)| a.norm()).sum();
            let amp = total * uniform::<T>(rng, 1.5, 3.0) + T::lit(0.1);
            terms.push((
                vec![0; d],
                cis(uniform::<T>(rng, 0.0, std::f64::consts::TAU)) * amp,
            ));
        }
        Self::new(d, terms)
    }

    fn fold<F: Fn(&[i32]) -> Cx<T>>(&self, x: &[T], weight: F) -> Cx<T> {
        self.terms
            .iter()
            .fold(Cx::new(T::zero(), T::zero()), |acc, (m, a)| {
                let phase: T = m.iter().zip(x).map(|(&k, &xi)| T::lit(k as f64) * xi).sum();
                acc + *a * weight(m) * cis(phase)
            })
    }

    /// Lower bound `max_m (|a_m| − Σ_{m' ≠ m} |a_{m'}|)` on `|u|`.
    pub fn modulus_lower_bound(&self) -> T {
        let total: T = self.terms.iter().map(|(_, a)| a.norm()).sum();
        self.terms
            .iter()
            .map(|(_, a)| a.norm() - (total - a.norm()))
            .fold(T::neg_infinity(), T::max)
    }
}

impl<T: Real> TestFunction<T> for TrigPoly<T> {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, x: &[T]) -> Cx<T> {
        self.fold(x, |_| Cx::new(T::one(), T::zero()))
    }

    fn grad(&self, x: &[T]) -> Vec<Cx<T>> {
        (0..self.d)
            .map(|j| self.fold(x, |m| Cx::new(T::zero(), T::lit(m[j] as f64))))
            .collect()
    }

    fn hess(&self, x: &[T]) -> CMatrix<T> {
        CMatrix::from_fn(self.d, self.d, |j, k| {
            self.fold(x, |m| Cx::new(-T::lit((m[j] * m[k]) as f64), T::zero()))
        })
    }

    fn third(&self, x: &[T], j: usize, k: usize, l: usize) -> Cx<T> {
        self.fold(x, |m| {
            Cx::new(T::zero(), -T::lit((m[j] * m[k] * m[l]) as f64))
        })
    }

    fn vanishing(&self) -> bool {
        self.modulus_lower_bound() <= T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;

    #[test]
    fn plane_wave_derivatives() {
        let u = TrigPoly::<f64>::mode(vec![2, -1]);
        let x = [0.3, 1.1];
        let v = u.value(&x);
        let g = u.grad(&x);
        assert!((g[0] - v * Cx::new(0.0, 2.0)).norm() < 1e-15);
        assert!((g[1] - v * Cx::new(0.0, -1.0)).norm() < 1e-15);
        assert!((u.hess(&x)[(0, 1)] - v * 2.0).norm() < 1e-15);
        assert!((u.third(&x, 0, 0, 1) - v * Cx::new(0.0, 4.0)).norm() < 1e-14);
        assert!(!u.vanishing());
    }

    #[test]
    fn random_nonvanishing_has_positive_bound() {
        let mut r = rng(5);
        for d in 1..=3 {
            let u = TrigPoly::<f64>::random(&mut r, d, 4, true);
            assert!(u.modulus_lower_bound() > 0.0);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut r = rng(9);
        let u = TrigPoly::<f64>::random(&mut r, 2, 3, false);
        let x = [0.7, 2.3];
        let h = 1e-5;
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fd = (u.value(&xp) - u.value(&xm)) / (2.0 * h);
            assert!((fd - u.grad(&x)[j]).norm() < 1e-8);
            for k in 0..2 {
                let fd = (u.grad(&xp)[k] - u.grad(&xm)[k]) / (2.0 * h);
                assert!((fd - u.hess(&x)[(j, k)]).norm() < 1e-7);
                let fd = (u.hess(&xp)[(k, 1)] - u.hess(&xm)[(k, 1)]) / (2.0 * h);
                assert!((fd - u.third(&x, j, k, 1)).norm() < 1e-6);
            }
        }
    }
}

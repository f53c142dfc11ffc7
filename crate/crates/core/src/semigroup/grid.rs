//! Finite-difference realisation of the divergence-form operator on the
//! periodic grid, grid functions and their `l_p` norms.

use crate::error::{Error, Result};
use crate::field::CoefficientField;
use crate::linalg::matrix::CMatrix;
use crate::pairing::quadrature::{grid_point, PairingValue, ZERO_SET_REL};
use crate::pairing::test_function::TestFunction;
use crate::sampling::{complex_vector, normal, stream_rng, Rng};
use crate::scalar::{Cx, Real};

/// Default bound on the number of grid nodes.
pub const DEFAULT_NODE_CAP: usize = 4096;

/// Name of the stencil recorded with every assembled operator.
pub const SCHEME: &str = "flux-midpoint-diagonal/central-mixed";

/// Dense matrix `A_h` on the `N^d` periodic grid.
#[derive(Clone, Debug)]
pub struct GridOperator<T> {
    pub d: usize,
    pub n: usize,
    pub h: T,
    pub matrix: CMatrix<T>,
    pub field: String,
    pub scheme: &'static str,
}

impl<T: Real> GridOperator<T> {
    pub fn nodes(&self) -> usize {
        self.matrix.rows()
    }
}

/// Multi-index helpers with the first axis fastest.
struct Lattice {
    n: usize,
    d: usize,
}

impl Lattice {
    fn shift(&self, idx: usize, axis: usize, by: isize) -> usize {
        let stride = self.n.pow(axis as u32);
        let k = (idx / stride) % self.n;
        let moved = (k as isize + by).rem_euclid(self.n as isize) as usize;
        idx - k * stride + moved * stride
    }

    fn total(&self) -> usize {
        self.n.pow(self.d as u32)
    }
}

pub fn assemble<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    n: usize,
) -> Result<GridOperator<T>> {
    assemble_with_cap(field, n, DEFAULT_NODE_CAP)
}

/// Assembles
///
/// ```text
/// (A_h u)_i = − Σ_k  D⁻_k [ c_kk(x + h e_k/2) D⁺_k u ]_i
///             − Σ_{k≠l} D⁰_l [ c_kl D⁰_k u ]_i
/// ```
///
/// Diagonal terms use the compact flux form with midpoint coefficients;
/// mixed terms use central differences with nodal coefficients, which keeps
/// the scheme second order. Rows sum to zero.
pub fn assemble_with_cap<T: Real, F: CoefficientField<T> + ?Sized>(
    field: &F,
    n: usize,
    cap: usize,
) -> Result<GridOperator<T>> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::GridSize(n));
    }
    let d = field.dim();
    let nodes = n.checked_pow(d as u32).unwrap_or(usize::MAX);
    if nodes > cap {
        return Err(Error::SizeCap { nodes, cap });
    }
    let lat = Lattice { n, d };
    let h = T::TAU() / T::from_usize_lossy(n);
    let inv_h2 = T::one() / (h * h);
    let inv_4h2 = inv_h2 * T::lit(0.25);
    let half_h = h * T::lit(0.5);
    let mut a = CMatrix::zeros(nodes, nodes);

    for i in 0..lat.total() {
        let x: Vec<T> = grid_point(i, n, d);
        for k in 0..d {
            let mut xp = x.clone();
            xp[k] += half_h;
            let mut xm = x.clone();
            xm[k] -= half_h;
            let cp = field.value(&xp)[(k, k)] * inv_h2;
            let cm = field.value(&xm)[(k, k)] * inv_h2;
            let ip = lat.shift(i, k, 1);
            let im = lat.shift(i, k, -1);
            a[(i, i)] += cp + cm;
            a[(i, ip)] -= cp;
            a[(i, im)] -= cm;
        }
        // −D⁰_l (c_kl D⁰_k u) at node i
        for l in 0..d {
            for (sign, step) in [(T::one(), 1isize), (-T::one(), -1isize)] {
                let j = lat.shift(i, l, step);
                let xj = grid_point::<T>(j, n, d);
                let cj = field.value(&xj);
                for k in 0..d {
                    if k == l {
                        continue;
                    }
                    let w = cj[(k, l)] * inv_4h2 * sign;
                    a[(i, lat.shift(j, k, 1))] -= w;
                    a[(i, lat.shift(j, k, -1))] += w;
                }
            }
        }
    }
    Ok(GridOperator {
        d,
        n,
        h,
        matrix: a,
        field: field.name(),
        scheme: SCHEME,
    })
}

/// Values at the `N^d` grid nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    pub d: usize,
    pub n: usize,
    pub values: Vec<Cx<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(d: usize, n: usize, values: Vec<Cx<T>>) -> Result<Self> {
        let expected = n.pow(d as u32);
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { d, n, values })
    }

    pub fn constant(d: usize, n: usize, c: Cx<T>) -> Self {
        Self {
            d,
            n,
            values: vec![c; n.pow(d as u32)],
        }
    }

    pub fn sample<U: TestFunction<T> + ?Sized>(u: &U, n: usize) -> Self {
        let d = u.dim();
        let values = (0..n.pow(d as u32))
            .map(|i| u.value(&grid_point(i, n, d)))
            .collect();
        Self { d, n, values }
    }

    pub fn h(&self) -> T {
        T::TAU() / T::from_usize_lossy(self.n)
    }

    /// `(h^d Σ |u_i|^p)^{1/p}`.
    pub fn lp_norm(&self, p: T) -> T {
        lp_norm(&self.values, p, self.h().powi(self.d as i32))
    }
}

/// Weighted discrete `l_p` norm, scaled by the largest modulus to avoid
/// overflow for large `p`.
pub fn lp_norm<T: Real>(values: &[Cx<T>], p: T, weight: T) -> T {
    let m = values.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if m == T::zero() {
        return T::zero();
    }
    let s: T = values.iter().map(|z| (z.norm() / m).powf(p)).sum();
    m * (weight * s).powf(T::one() / p)
}

/// `h^d Σ (A_h u)_i |u_i|^{p−2} conj(u_i)` over `|u_i| > τ`.
pub fn discrete_pairing<T: Real>(
    op: &GridOperator<T>,
    u: &GridFunction<T>,
    p: T,
) -> Result<PairingValue<T>> {
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::ExponentDomain(p.as_f64()));
    }
    if u.values.len() != op.nodes() {
        return Err(Error::Dimension {
            expected: op.nodes(),
            got: u.values.len(),
        });
    }
    let au = op.matrix.mul_vec(&u.values)?;
    let umax = u.values.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let tau = T::lit(ZERO_SET_REL) * umax;
    let mut acc = Cx::new(T::zero(), T::zero());
    let mut kept = 0usize;
    for (a, v) in au.iter().zip(&u.values) {
        let r = v.norm();
        if r > tau {
            acc += *a * v.conj() * r.powf(p - T::lit(2.0));
            kept += 1;
        }
    }
    if kept == 0 {
        return Err(Error::AllExcluded);
    }
    let total = op.nodes();
    let w = op.h.powi(op.d as i32);
    Ok(PairingValue {
        re: acc.re * w,
        im: acc.im * w,
        quadrature_points: total,
        excluded_mass: T::from_usize_lossy(total - kept) / T::from_usize_lossy(total),
    })
}

/// Random grid vector of one of several shapes, chosen by `kind % 5`:
/// complex noise, real noise, a smooth random trigonometric sample,
/// a nonnegative bump, or a single spike.
pub fn random_grid_vector<T: Real>(rng: &mut Rng, d: usize, n: usize, kind: usize) -> Vec<Cx<T>> {
    let total = n.pow(d as u32);
    match kind % 5 {
        0 => complex_vector(rng, total),
        1 => (0..total)
            .map(|_| Cx::new(normal(rng), T::zero()))
            .collect(),
        2 => {
            let u = crate::pairing::test_function::TrigPoly::<T>::random(rng, d, 3, false);
            GridFunction::sample(&u, n).values
        }
        3 => {
            let centre: Vec<T> = (0..d)
                .map(|_| crate::sampling::uniform(rng, 0.0, std::f64::consts::TAU))
                .collect();
            (0..total)
                .map(|i| {
                    let x = grid_point::<T>(i, n, d);
                    let r2: T = x
                        .iter()
                        .zip(&centre)
                        .map(|(a, c)| T::one() - (*a - *c).cos())
                        .sum();
                    Cx::new((-T::lit(4.0) * r2).exp(), T::zero())
                })
                .collect()
        }
        _ => {
            let mut v = vec![Cx::new(T::zero(), T::zero()); total];
            let at = (normal::<T>(rng).abs() * T::lit(1e6))
                .to_usize()
                .unwrap_or(0)
                % total;
            v[at] = Cx::new(T::one(), T::zero());
            v
        }
    }
}

/// Samples `−(A_h u, |u|^{p−2} u)` over random `u` with `‖u‖_p = 1`.
pub fn numerical_range_sample<T: Real>(
    op: &GridOperator<T>,
    p: T,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Cx<T>>> {
    (0..n_samples)
        .map(|s| {
            let mut r = stream_rng(seed, s as u64);
            let v = random_grid_vector::<T>(&mut r, op.d, op.n, s);
            let mut u = GridFunction::new(op.d, op.n, v)?;
            let nrm = u.lp_norm(p);
            u.values.iter_mut().for_each(|z| *z = *z / nrm);
            Ok(-discrete_pairing(op, &u, p)?.value())
        })
        .collect()
}

/// Largest `(|Im z| − K |Re z|) / |z|` over the samples; `≤ 0` means all lie
/// in the closed sector of angle `arctan K` about the real axis.
pub fn sector_excess<T: Real>(samples: &[Cx<T>], k: T) -> T {
    samples
        .iter()
        .filter(|z| z.norm() > T::zero())
        .map(|z| (z.im.abs() - k * z.re.abs()) / z.norm())
        .fold(T::neg_infinity(), T::max)
}

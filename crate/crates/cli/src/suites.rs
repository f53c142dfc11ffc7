//! Suite runners. Each turns a [`RunConfig`] into check records.

use rayon::prelude::*;

use seclab_core::angles::{angle_comparison, is_admissible, lemma_ps_check, make_bundle, Regime};
use seclab_core::field::{
    default_points, derivative_defect, oleinik_constant, oleinik_inequality_check, parse_field,
    standard_library, verify_sector, CoefficientField, Smoothness,
};
use seclab_core::linalg::{decompose, lemma_suite, rotate, trace_bound_excess, LemmaReport};
use seclab_core::pairing::{
    gradient_inequality_check, pairing_via_forms, rotated_accretivity_sweep, sectorial_check, TrigPoly,
};
use seclab_core::sampling::{complex_symmetric, complex_vector, halton_torus, stream_rng, vector_pairs, Rng};
use seclab_core::semigroup::{
    assemble, contraction_check, numerical_range_sample, resolvent_check, sector_excess, ContractionPlan,
    ResolventPlan,
};
use seclab_core::{Angle, Bundle, Error, Field};

use crate::anchors::lemma_anchor;
use crate::config::{RegimeChoice, RunConfig, Suite};
use crate::error::CliError;
use crate::report::Record;

type Out = Result<Vec<Record>, CliError>;

/// Exponents used when none are configured.
pub const DEFAULT_PS: [f64; 4] = [1.5, 2.0, 3.0, 4.0];
/// Exponent axis of the default `angles` grid.
pub const ANGLE_PS: [f64; 11] = [1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0];
/// `θ` axis of the default `angles` grid, as fractions of `0.9 φ`.
pub const ANGLE_STEPS: usize = 11;
/// Halton points and vector pairs per point for `lemmas`.
pub const LEMMA_POINTS: usize = 64;
pub const LEMMA_PAIRS: usize = 64;
pub const ACCRETIVITY_ALPHAS: usize = 8;
pub const GRADIENT_ALPHAS: [f64; 4] = [-0.75, -0.25, 0.25, 0.75];
pub const NUMERICAL_RANGE_SAMPLES: usize = 20;
/// Largest node count for which the exact 2-norm is computed.
pub const EXACT_NORM_NODES: usize = 64;
/// Relative step for the derivative plumbing check and its threshold.
const FD_STEP: f64 = 1e-5;
const FD_THRESHOLD: f64 = 1e-6;

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Out {
    match suite {
        Suite::Angles => angles(cfg),
        Suite::Lemmas => lemmas(cfg),
        Suite::Sector => sector(cfg),
        Suite::Estimate => estimate(cfg),
        Suite::Accretivity => accretivity(cfg),
        Suite::Gradient => gradient(cfg),
        Suite::Semigroup => semigroup(cfg),
        Suite::Resolvent => resolvent(cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::ORDERED {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
    }
}

/// FNV-1a over a tag and indices: one random stream per work item.
fn stream(tag: &str, parts: &[usize]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let bytes = tag.bytes().chain(parts.iter().flat_map(|p| (*p as u64).to_le_bytes()));
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn rng_for(cfg: &RunConfig, tag: &str, parts: &[usize]) -> Rng {
    stream_rng(cfg.seed, stream(tag, parts))
}

fn fields(cfg: &RunConfig) -> Result<Vec<Field>, CliError> {
    match &cfg.field {
        Some(text) => Ok(vec![parse_field(text)?]),
        None => Ok(standard_library()),
    }
}

fn ps(cfg: &RunConfig) -> Vec<f64> {
    cfg.p.clone().unwrap_or_else(|| DEFAULT_PS.to_vec())
}

fn theta_for(cfg: &RunConfig, f: &Field) -> Result<Angle, CliError> {
    match cfg.theta {
        Some(t) => Ok(Angle::new(t)?),
        None => Ok(f.declared_theta()),
    }
}

fn skip(suite: &str, what: String) {
    eprintln!("seclab: {suite}: skipped {what}");
}

/// Constants for `(field, p)`, or `None` when the combination is skipped.
fn bundle_for(cfg: &RunConfig, suite: &str, f: &Field, p: f64, theta: Angle) -> Result<Option<Bundle>, CliError> {
    if !is_admissible(p, theta)? {
        skip(suite, format!("{} at p = {p}: inadmissible for θ = {}", f.name(), theta));
        return Ok(None);
    }
    let regime = match cfg.regime {
        RegimeChoice::Auto => Regime { ra_zero: f.ra_zero() },
        RegimeChoice::RaZero => Regime::RA_ZERO,
        RegimeChoice::RaNonzero => Regime::RA_NONZERO,
    };
    if regime.ra_zero && !f.ra_zero() {
        skip(suite, format!("{}: R_a ≠ 0 but the R_a = 0 regime was requested", f.name()));
        return Ok(None);
    }
    Ok(Some(make_bundle(p, theta, regime)?))
}

/// Points per axis for the quadrature suites.
fn quad_n(cfg: &RunConfig, d: usize) -> usize {
    cfg.n.unwrap_or(match d {
        1 => 64,
        2 => 32,
        _ => 16,
    })
}

/// Grid size for the semigroup suites.
fn grid_n(cfg: &RunConfig, d: usize) -> usize {
    cfg.n.unwrap_or(match d {
        1 => 64,
        2 => 16,
        _ => 8,
    })
}

fn test_function(rng: &mut Rng, d: usize) -> TrigPoly<f64> {
    TrigPoly::random(rng, d, if d == 1 { 3 } else { 2 }, true)
}

fn id(parts: &[String]) -> String {
    parts.join("/")
}

fn rounding(cfg: &RunConfig, re: f64, im: f64) -> f64 {
    cfg.tolerances.rounding * (re.abs() + im.abs())
}

fn angles(cfg: &RunConfig) -> Out {
    const S: &str = "angles";
    let regime = match cfg.regime {
        RegimeChoice::RaNonzero => Regime::RA_NONZERO,
        _ => Regime::RA_ZERO,
    };
    let ps = cfg.p.clone().unwrap_or_else(|| ANGLE_PS.to_vec());
    let mut out = Vec::new();
    for p in ps {
        let phi = (1.0 - 2.0 / p).abs().acos();
        let thetas: Vec<f64> = match cfg.theta {
            Some(t) => vec![t],
            None => (0..ANGLE_STEPS)
                .map(|j| 0.9 * phi * j as f64 / (ANGLE_STEPS - 1) as f64)
                .collect(),
        };
        for t in thetas {
            let theta = Angle::new(t)?;
            if !is_admissible(p, theta)? {
                skip(S, format!("p = {p}, θ = {t}: inadmissible"));
                continue;
            }
            let b = make_bundle(p, theta, regime)?;
            let oracle = if regime.ra_zero {
                1.0 / (phi - t).tan()
            } else {
                let (s, c) = phi.sin_cos();
                ((2.0 / s - 1.0) * t.tan() + c / s) / (1.0 - t.tan() * c / s)
            };
            let tol = cfg.tolerances.angles * oracle.abs().max(1.0);
            out.push(Record::equality(
                S,
                id(&[format!("K[p={p},theta={t}]")]),
                "sector-constant-K",
                b.k,
                oracle,
                tol,
            ));
            if !regime.ra_zero {
                let c = angle_comparison(p, theta)?;
                out.push(Record::new(
                    S,
                    id(&[format!("tan-psi[p={p},theta={t}]")]),
                    "angle-comparison",
                    c.tan_psi1,
                    c.tan_phi_minus_theta,
                    cfg.tolerances.angles * c.tan_phi_minus_theta.abs().max(1.0),
                    0.0,
                ));
            }
        }
    }
    Ok(out)
}

fn lemmas(cfg: &RunConfig) -> Out {
    const S: &str = "lemmas";
    let tol = cfg.tolerances.lemmas;
    let n_points = cfg.samples.unwrap_or(LEMMA_POINTS);
    let mut out = Vec::new();
    for (fi, f) in fields(cfg)?.iter().enumerate() {
        let name = f.name();
        let d = f.dim();
        let theta = theta_for(cfg, f)?;
        let pts = halton_torus::<f64>(n_points, d);
        let per_point: Vec<_> = pts
            .par_iter()
            .enumerate()
            .map(|(k, x)| -> Result<_, Error> {
                let mut rng = rng_for(cfg, S, &[fi, k]);
                let c = f.value(x);
                let dec = decompose(&c)?;
                let pairs = vector_pairs::<f64>(&mut rng, d, LEMMA_PAIRS);
                let report = lemma_suite(&dec, theta, &pairs)?;
                let u = complex_symmetric::<f64>(&mut rng, d);
                let vs: Vec<_> = (0..8).map(|_| complex_vector::<f64>(&mut rng, d)).collect();
                let trace = trace_bound_excess(&dec.r_s, &u, &vs)?;
                Ok((dec, pairs, report, u, trace))
            })
            .collect::<Result<_, _>>()?;

        let mut merged: Option<LemmaReport<f64>> = None;
        for (_, _, r, _, _) in &per_point {
            merged = Some(match merged {
                Some(m) => m.merge(r),
                None => r.clone(),
            });
        }
        if let Some(m) = merged {
            for (entry, v) in m.entries() {
                if let Some(v) = v {
                    out.push(Record::new(S, id(&[entry.into(), name.clone()]), lemma_anchor(entry), v, 0.0, tol, 0.0));
                }
            }
        }
        let trace = per_point.iter().map(|t| t.4).fold(f64::NEG_INFINITY, f64::max);
        out.push(Record::new(S, id(&["trace-bound".into(), name.clone()]), "trace-bound", trace, 0.0, tol, 0.0));

        let room = std::f64::consts::FRAC_PI_2 - theta.radians();
        for a in [-0.9, 0.0, 0.9] {
            let alpha = a * room;
            let mut worst = f64::NEG_INFINITY;
            for (dec, _, _, u, _) in &per_point {
                let rs = rotate(&dec.c, alpha)?.r_s.to_complex();
                let tr = u.matmul(&rs)?.matmul(&u.conj())?.trace().re;
                let scale = u.norm_fro().powi(2) * dec.c.norm_fro();
                if scale > 0.0 {
                    worst = worst.max(-tr / scale);
                }
            }
            out.push(Record::new(
                S,
                id(&["rotated-trace".into(), name.clone(), format!("alpha={alpha}")]),
                "rotated-trace-form",
                worst,
                0.0,
                tol,
                0.0,
            ));
        }

        if f.smoothness() == Smoothness::W2Inf && f.ba_zero() {
            let samples: Vec<_> = pts.iter().cloned().zip(per_point.iter().map(|t| t.3.clone())).collect();
            for a in [-0.5, 0.0, 0.5] {
                let alpha = a * room;
                let r = oleinik_inequality_check(f, theta, alpha, &samples, default_points(d))?;
                out.push(Record::new(
                    S,
                    id(&["oleinik".into(), name.clone(), format!("alpha={alpha}")]),
                    "oleinik-bound",
                    r.max_relative,
                    0.0,
                    tol,
                    0.0,
                ));
            }
        }

        for p in ps(cfg) {
            if !is_admissible(p, theta)? {
                skip(S, format!("{name} at p = {p}: inadmissible"));
                continue;
            }
            let mut worst = f64::NEG_INFINITY;
            for (dec, pairs, _, _, _) in &per_point {
                worst = worst.max(lemma_ps_check(p, theta, dec, pairs)?);
            }
            out.push(Record::new(
                S,
                id(&["combined-form".into(), name.clone(), format!("p={p}")]),
                "combined-form-bound",
                worst,
                0.0,
                tol,
                0.0,
            ));
        }
    }
    Ok(out)
}

fn sector(cfg: &RunConfig) -> Out {
    const S: &str = "sector";
    let tol = cfg.tolerances.sector;
    let mut out = Vec::new();
    for f in fields(cfg)? {
        let name = f.name();
        let d = f.dim();
        let theta = theta_for(cfg, &f)?;
        let n_points = default_points(d);
        let lhs = match verify_sector(&f, theta, n_points) {
            Ok(v) => theta.radians() + v.max_excess,
            Err(Error::SectorRejected { x, reason }) => {
                eprintln!("seclab: {S}: {name} has no sector at x = {x:?}: {reason}");
                f64::INFINITY
            }
            Err(e) => return Err(e.into()),
        };
        out.push(Record::new(S, id(&["sector-angle".into(), name.clone()]), "sector-condition", lhs, theta.radians(), tol, 0.0));

        let pts = halton_torus::<f64>(n_points, d);
        let (mut ba, mut ra, mut off) = (0.0f64, 0.0f64, 0.0f64);
        for x in &pts {
            let c = f.value(x);
            let dec = decompose(&c)?;
            let scale = c.norm_max().max(f64::MIN_POSITIVE);
            ba = ba.max(dec.b_a.max_abs() / scale);
            ra = ra.max(dec.r_a.max_abs() / scale);
            let diag = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|(i, j)| i != j);
            off = off.max(diag.map(|(i, j)| c[(i, j)].norm()).fold(0.0, f64::max) / scale);
        }
        let claims = [("ba-zero", f.ba_zero(), ba), ("ra-zero", f.ra_zero(), ra), ("diagonal", f.is_diagonal(), off)];
        for (claim, held, v) in claims {
            if held {
                out.push(Record::new(S, id(&[format!("claim-{claim}"), name.clone()]), "plumbing", v, 0.0, cfg.tolerances.rounding, 0.0));
            }
        }

        // offset keeps the points away from the kinks of Lipschitz fields
        let fd_pts: Vec<Vec<f64>> = halton_torus::<f64>(256, d)
            .into_iter()
            .map(|x| x.into_iter().map(|v| v + 0.1).collect())
            .collect();
        let defect = derivative_defect(&f, &fd_pts, FD_STEP);
        out.push(Record::new(S, id(&["derivatives".into(), name.clone()]), "plumbing", defect, FD_THRESHOLD, 0.0, 0.0));
    }
    Ok(out)
}

/// Fields with `B_a = 0`; others are reported as skipped.
fn ba_zero_fields(cfg: &RunConfig, suite: &str) -> Result<Vec<Field>, CliError> {
    Ok(fields(cfg)?
        .into_iter()
        .filter(|f| {
            let ok = f.ba_zero();
            if !ok {
                skip(suite, format!("{}: B_a ≠ 0", f.name()));
            }
            ok
        })
        .collect())
}

fn estimate(cfg: &RunConfig) -> Out {
    const S: &str = "estimate";
    let n_u = cfg.samples.unwrap_or(10);
    let mut out = Vec::new();
    for (fi, f) in ba_zero_fields(cfg, S)?.iter().enumerate() {
        let name = f.name();
        let d = f.dim();
        let n = quad_n(cfg, d);
        let theta = theta_for(cfg, f)?;
        for (pi, p) in ps(cfg).into_iter().enumerate() {
            let Some(b) = bundle_for(cfg, S, f, p, theta)? else { continue };
            for k in 0..n_u {
                let u = test_function(&mut rng_for(cfg, S, &[fi, pi, k]), d);
                let c = sectorial_check(f, &u, &b, n)?;
                let tag = |what: &str| id(&[what.into(), name.clone(), format!("p={p}"), format!("u={k}")]);
                let (re, im) = (c.pairing.re, c.pairing.im);
                out.push(Record::new(S, tag("sectorial"), "sectorial-estimate", c.lhs, c.rhs, rounding(cfg, re, im), c.slack));
                let forms = pairing_via_forms(f, &u, p, 2 * n)?;
                let resid = (c.pairing.value() - forms.value()).norm() / (1.0 + c.pairing.value().norm());
                out.push(Record::new(S, tag("ibp"), "integration-by-parts", resid, 0.0, cfg.tolerances.ibp, 0.0));
            }
        }
    }
    Ok(out)
}

fn accretivity(cfg: &RunConfig) -> Out {
    const S: &str = "accretivity";
    let n_u = cfg.samples.unwrap_or(10);
    let mut out = Vec::new();
    for (fi, f) in ba_zero_fields(cfg, S)?.iter().enumerate() {
        let name = f.name();
        let d = f.dim();
        let n = quad_n(cfg, d);
        let theta = theta_for(cfg, f)?;
        for (pi, p) in ps(cfg).into_iter().enumerate() {
            let Some(b) = bundle_for(cfg, S, f, p, theta)? else { continue };
            let m = ACCRETIVITY_ALPHAS;
            let alphas: Vec<f64> = (0..m)
                .map(|j| b.psi * (2.0 * j as f64 + 1.0 - m as f64) / m as f64)
                .collect();
            for k in 0..n_u {
                let u = test_function(&mut rng_for(cfg, S, &[fi, pi, k]), d);
                let sweep = rotated_accretivity_sweep(f, &u, &b, &alphas, n)?;
                let tag = |what: &str| id(&[what.into(), name.clone(), format!("p={p}"), format!("u={k}")]);
                let min_p = sweep.iter().map(|c| c.min_p_integrand).fold(f64::INFINITY, f64::min);
                out.push(Record::new(S, tag("integrand"), "rotated-accretivity", -min_p, 0.0, cfg.tolerances.integrand, 0.0));
                let worst = sweep
                    .iter()
                    .min_by(|a, b| (a.re_pairing + a.slack).total_cmp(&(b.re_pairing + b.slack)))
                    .expect("at least one angle");
                let scale = sweep.iter().map(|c| c.re_pairing.abs()).fold(0.0, f64::max);
                out.push(Record::new(
                    S,
                    tag("re-pairing"),
                    "rotated-accretivity",
                    -worst.re_pairing,
                    0.0,
                    cfg.tolerances.rounding * scale,
                    worst.slack,
                ));
            }
        }
    }
    Ok(out)
}

fn gradient(cfg: &RunConfig) -> Out {
    const S: &str = "gradient";
    let n_u = cfg.samples.unwrap_or(5);
    let mut out = Vec::new();
    for (fi, f) in ba_zero_fields(cfg, S)?.iter().enumerate() {
        let name = f.name();
        if f.smoothness() != Smoothness::W2Inf {
            skip(S, format!("{name}: no second derivatives"));
            continue;
        }
        let d = f.dim();
        let n = quad_n(cfg, d);
        let theta = theta_for(cfg, f)?;
        for (pi, p) in ps(cfg).into_iter().enumerate() {
            let Some(b) = bundle_for(cfg, S, f, p, theta)? else { continue };
            for a in GRADIENT_ALPHAS {
                let alpha = a * b.gamma;
                let m = match cfg.gradient_m {
                    Some(m) => m,
                    None => oleinik_constant(f, theta, alpha, default_points(d))?,
                };
                for k in 0..n_u {
                    let u = test_function(&mut rng_for(cfg, S, &[fi, pi, k]), d);
                    let c = gradient_inequality_check(f, &u, &b, alpha, m, n)?;
                    let rhs = m * c.grad_norm_pp;
                    out.push(Record::new(
                        S,
                        id(&["gradient".into(), name.clone(), format!("p={p}"), format!("alpha={alpha}"), format!("u={k}")]),
                        "gradient-inequality",
                        -c.integral,
                        rhs,
                        rounding(cfg, c.integral, rhs),
                        c.slack,
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn semigroup(cfg: &RunConfig) -> Out {
    const S: &str = "semigroup";
    let n_vectors = cfg.samples.unwrap_or(10);
    let mut out = Vec::new();
    for (fi, f) in fields(cfg)?.iter().enumerate() {
        let name = f.name();
        let d = f.dim();
        let op = assemble(f, grid_n(cfg, d))?;
        let theta = theta_for(cfg, f)?;
        for (pi, p) in ps(cfg).into_iter().enumerate() {
            let Some(b) = bundle_for(cfg, S, f, p, theta)? else { continue };
            let plan = ContractionPlan {
                n_vectors,
                exact_norm: p == 2.0 && op.nodes() <= EXACT_NORM_NODES,
                seed: stream(S, &[cfg.seed as usize, fi, pi]),
                ..Default::default()
            };
            let r = contraction_check(&op, p, b.gamma, &plan)?;
            let tag = |what: &str| id(&[what.into(), name.clone(), format!("p={p}")]);
            out.push(Record::new(S, tag("contraction"), "semigroup-contraction", r.max_ratio, 1.0, cfg.tolerances.contraction, 0.0));
            if let Some(e) = r.exact_norm {
                out.push(Record::new(S, tag("exact-2-norm"), "semigroup-contraction", e, 1.0, cfg.tolerances.exact_norm, 0.0));
            }
        }
    }
    Ok(out)
}

fn resolvent(cfg: &RunConfig) -> Out {
    const S: &str = "resolvent";
    let n_vectors = cfg.samples.unwrap_or(5);
    let mut out = Vec::new();
    for (fi, f) in fields(cfg)?.iter().enumerate() {
        let name = f.name();
        let d = f.dim();
        let n = grid_n(cfg, d);
        let op = assemble(f, n)?;
        let coarse = if n / 2 >= 8 && (n / 2) % 2 == 0 { Some(assemble(f, n / 2)?) } else { None };
        let theta = theta_for(cfg, f)?;
        for (pi, p) in ps(cfg).into_iter().enumerate() {
            let Some(b) = bundle_for(cfg, S, f, p, theta)? else { continue };
            let seed = stream(S, &[cfg.seed as usize, fi, pi]);
            let plan = ResolventPlan { n_vectors, seed, ..Default::default() };
            let r = resolvent_check(&op, p, b.k, &plan)?;
            let tag = |what: &str| id(&[what.into(), name.clone(), format!("p={p}")]);
            out.push(Record::new(S, tag("resolvent"), "resolvent-bound", 1.0 + r.max_excess, 1.0, cfg.tolerances.resolvent, 0.0));

            let fine = sector_excess(&numerical_range_sample(&op, p, NUMERICAL_RANGE_SAMPLES, seed)?, b.k);
            let slack = match &coarse {
                Some(c) => {
                    let v = sector_excess(&numerical_range_sample(c, p, NUMERICAL_RANGE_SAMPLES, seed)?, b.k);
                    (v - fine).abs()
                }
                None => 0.0,
            };
            out.push(Record::new(S, tag("numerical-range"), "numerical-range", fine, 0.0, cfg.tolerances.sector, slack));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn streams_differ_by_index() {
        assert_ne!(stream("a", &[0, 1]), stream("a", &[1, 0]));
        assert_ne!(stream("a", &[0]), stream("b", &[0]));
    }

    #[test]
    fn default_angle_grid_has_121_rows() {
        let r = angles(&RunConfig::default()).unwrap();
        assert_eq!(r.len(), 121);
        assert!(r.iter().all(|x| x.status == Status::Pass));
    }

    #[test]
    fn k_increases_along_theta() {
        let r = angles(&RunConfig::default()).unwrap();
        for row in r.chunks(ANGLE_STEPS) {
            assert!(row.windows(2).all(|w| w[1].lhs > w[0].lhs));
        }
    }

    #[test]
    fn p_two_theta_point_three() {
        let cfg = RunConfig { p: Some(vec![2.0]), theta: Some(0.3), ..Default::default() };
        let r = angles(&cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].lhs - 0.3f64.tan()).abs() < 1e-15);
        assert_eq!(r[0].status, Status::Pass);
    }

    #[test]
    fn ra_nonzero_grid_adds_comparisons() {
        let cfg = RunConfig { regime: RegimeChoice::RaNonzero, p: Some(vec![3.0]), ..Default::default() };
        let r = angles(&cfg).unwrap();
        assert_eq!(r.len(), 2 * ANGLE_STEPS);
        assert!(r.iter().all(|x| x.status == Status::Pass));
    }
}

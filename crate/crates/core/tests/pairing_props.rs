use proptest::prelude::*;
use seclab_core::angles::{dual_exponent, make_bundle, Regime};
use seclab_core::field::{standard_library, CoefficientField, LibraryField};
use seclab_core::linalg::SectorAngle;
use seclab_core::pairing::*;
use seclab_core::sampling::rng;
use seclab_core::scalar::cis;

fn regime(f: &LibraryField<f64>) -> Regime {
    if f.ra_zero() {
        Regime::RA_ZERO
    } else {
        Regime::RA_NONZERO
    }
}

fn ladder(d: usize) -> [usize; 3] {
    if d == 1 {
        [16, 32, 64]
    } else {
        [8, 16, 32]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ibp_residual_converges(seed in any::<u64>(), which in 0usize..7, pi in 0usize..4) {
        let f = &standard_library::<f64>()[which];
        let p = [1.5, 2.0, 3.0, 4.0][pi];
        let u = TrigPoly::random(&mut rng(seed), f.dim(), 2, true);
        let scale = 1.0 + pairing_direct(f, &u, p, 32).unwrap().value().norm();
        let floor = 1e-13 * scale;
        let res: Vec<f64> = ladder(f.dim()).iter().map(|&n| ibp_residual(f, &u, p, n).unwrap()).collect();
        for w in res.windows(2) {
            if w[0] > floor && w[1] > floor {
                prop_assert!(w[0] / w[1] >= 4.0, "{res:?}");
            }
        }
        prop_assert!(res[2] <= 1e-6 * scale, "{res:?}");
    }

    #[test]
    fn sectorial_margin_within_slack(seed in any::<u64>(), which in 0usize..7, pi in 0usize..4) {
        let f = &standard_library::<f64>()[which];
        prop_assume!(f.ba_zero());
        let p = [1.5, 2.0, 3.0, 4.0][pi];
        let b = make_bundle(p, f.declared_theta(), regime(f)).unwrap();
        let u = TrigPoly::random(&mut rng(seed), f.dim(), 3, true);
        let c = sectorial_check(f, &u, &b, ladder(f.dim())[1]).unwrap();
        let tol = 1e-12 * (c.pairing.re.abs() + c.pairing.im.abs());
        prop_assert!(c.margin >= -(c.slack + tol), "{c:?}");
    }

    #[test]
    fn p2_ratio_is_the_rotation(seed in any::<u64>(), t0 in 0.0f64..1.4, d in 1usize..3) {
        let f = LibraryField::rotated_laplacian(d, t0).unwrap();
        let u = TrigPoly::random(&mut rng(seed), d, 2, true);
        let v = pairing_direct(&f, &u, 2.0, 16).unwrap();
        prop_assert!((v.im / v.re - t0.tan()).abs() <= 1e-12 * t0.tan().max(1.0));
    }

    #[test]
    fn rotated_pairing_is_complex_multiple(seed in any::<u64>(), frac in -0.95f64..0.95) {
        let f = LibraryField::complex_symmetric(1, 0.3).unwrap();
        let b = make_bundle(3.0, f.declared_theta(), Regime::RA_ZERO).unwrap();
        let alpha = frac * b.psi;
        let u = TrigPoly::random(&mut rng(seed), 1, 3, true);
        let acc = rotated_accretivity_check(&f, &u, &b, alpha, 32).unwrap();
        let plain = pairing_direct(&f, &u, 3.0, 64).unwrap().value();
        prop_assert!((acc.re_pairing - (plain * cis(alpha)).re).abs() <= 1e-13 * plain.norm());
        prop_assert!(acc.min_p_integrand >= -1e-10);
        prop_assert!(acc.re_pairing >= -acc.slack);
    }

    #[test]
    fn bound_prediction_is_dual_symmetric(seed in any::<u64>(), p in 1.2f64..6.0) {
        let f: LibraryField<f64> = LibraryField::CosineModulated { d: 1 };
        let q = dual_exponent(p).unwrap();
        let u = TrigPoly::random(&mut rng(seed), 1, 2, true);
        let bp = make_bundle(p, SectorAngle::zero(), Regime::RA_ZERO).unwrap();
        let bq = make_bundle(q, SectorAngle::zero(), Regime::RA_ZERO).unwrap();
        let cp = sectorial_check(&f, &u, &bp, 16).unwrap();
        let cq = sectorial_check(&f, &u, &bq, 16).unwrap();
        let kp = cp.rhs / cp.pairing.re;
        let kq = cq.rhs / cq.pairing.re;
        prop_assert!((kp - kq).abs() <= 1e-12 * kp.max(1.0));
    }
}

#[test]
fn closed_form_exemplars() {
    let id: LibraryField<f64> = LibraryField::rotated_laplacian(1, 0.0).unwrap();
    let wave = TrigPoly::<f64>::mode(vec![1]);
    for p in [1.5, 2.0, 3.0, 4.0] {
        assert!(ibp_residual(&id, &wave, p, 128).unwrap() <= 1e-10);
        let v = pairing_direct(&id, &wave, p, 128).unwrap();
        assert!((v.re - std::f64::consts::TAU).abs() <= 1e-12);
    }
    let f: LibraryField<f64> = LibraryField::CosineModulated { d: 1 };
    let u = TrigPoly::shifted_cosine(1, 2.0);
    for p in [1.5, 3.0] {
        assert!(ibp_residual(&f, &u, p, 128).unwrap() <= 1e-10);
    }
}

#[test]
fn gradient_inequality_with_oleinik_constant() {
    let f: LibraryField<f64> = LibraryField::CosineModulated { d: 1 };
    let b = make_bundle(3.0, SectorAngle::zero(), Regime::RA_ZERO).unwrap();
    let m = seclab_core::field::oleinik_constant(&f, SectorAngle::zero(), 0.2, 1024).unwrap() + 1.0;
    let mut r = rng(3);
    for _ in 0..5 {
        let u = TrigPoly::random(&mut r, 1, 3, true);
        let g = gradient_inequality_check(&f, &u, &b, 0.2, m, 32).unwrap();
        assert!(g.value >= -g.slack, "{g:?}");
        assert!(g.minimal_m <= m);
    }
}

//! End-to-end acceptance checks for the library. Each test covers one
//! numbered criterion and prints a single `criterion N: PASS/FAIL` line
//! (visible with `--nocapture`); assertions carry the details.

use std::f64::consts::{E, FRAC_1_SQRT_2, PI};
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};

use mulgeo::curve::catalog::{circle, helix, sphcurve};
use mulgeo::curve::{curve_from_curvature_jets, FrameStart};
use mulgeo::jet::Taylor;
use mulgeo::{
    bertrand_partner, bertrand_verify, classify_helix, frenet, frenet_residuals, is_natural,
    mannheim_lambda, mannheim_partner, mannheim_verify, parse_mexpr, rectifying_fit,
    render_mexpr, slant_helix_sigma, spherical_check, star_derivative, star_integral_definite,
    CheckStatus, CurveKind, Error, MExpr, MNum, MVec2, MVec3, ScalarMapJet,
};
use mulgeo::calc::star_integral_definite_tol;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn criterion(n: usize, what: &str, body: impl FnOnce() + UnwindSafe) {
    let outcome = catch_unwind(body);
    match &outcome {
        Ok(()) => println!("criterion {n}: PASS: {what}"),
        Err(_) => println!("criterion {n}: FAIL: {what}"),
    }
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
}

#[test]
fn criterion_01_arithmetic() {
    criterion(1, "arithmetic semantics, 1000 randomized cases at 1e-12 on logs", || {
        assert_eq!(MNum::ZERO_STAR.value(), 1.0);
        assert_eq!(MNum::ONE_STAR.value(), E);
        assert!((MNum::from_value(0.5).unwrap().mabs().value() - 2.0).abs() <= 1e-12);
        assert!((MNum::from_value(3.0).unwrap().mabs().value() - 3.0).abs() <= 1e-12);

        let mut rng = StdRng::seed_from_u64(0xA1CE);
        for _ in 0..1000 {
            let la: f64 = rng.gen_range(-6.0..6.0);
            let lb: f64 = rng.gen_range(-6.0..6.0);
            let a = MNum::from_log(la);
            let b = MNum::from_log(lb);

            assert_eq!(a.madd(b).log(), la + lb);
            assert_eq!(a.msub(b).log(), la - lb);
            assert!((a.mmul(b).log() - la * lb).abs() <= 1e-12);
            if lb != 0.0 {
                assert!((a.mdiv(b).unwrap().log() - la / lb).abs() <= 1e-12);
            }

            assert_eq!(a.madd(MNum::ZERO_STAR).log(), la);
            assert!((a.mmul(MNum::ONE_STAR).log() - la).abs() <= 1e-12);
            assert_eq!(a.madd(a.mneg()).log(), 0.0);
            assert_eq!(a.mabs().log(), la.abs());

            // square of a multiplicative sum, and difference of squares
            let two = MNum::from_log(2.0);
            let lhs = a.madd(b).mpow(2.0).unwrap();
            let rhs = a
                .mpow(2.0)
                .unwrap()
                .madd(two.mmul(a).mmul(b))
                .madd(b.mpow(2.0).unwrap());
            assert!((lhs.log() - rhs.log()).abs() <= 1e-12);

            let lhs = a.mpow(2.0).unwrap().msub(b.mpow(2.0).unwrap());
            let rhs = a.madd(b).mmul(a.msub(b));
            assert!((lhs.log() - rhs.log()).abs() <= 1e-12);
        }
    });
}

#[test]
fn criterion_02_trig() {
    criterion(2, "trig identities, 1000 randomized cases at 1e-12 on logs", || {
        let mut rng = StdRng::seed_from_u64(0xBEEF);
        for _ in 0..1000 {
            let lt: f64 = rng.gen_range(-6.0..6.0);
            let th = MNum::from_log(lt);
            let s = th.msin();
            let c = th.mcos();

            let pyth = s.mpow(2.0).unwrap().madd(c.mpow(2.0).unwrap());
            assert!((pyth.log() - 1.0).abs() <= 1e-12);

            assert!((th.mneg().msin().log() + s.log()).abs() <= 1e-12);
            assert!((th.mneg().mcos().log() - c.log()).abs() <= 1e-12);

            if c.log().abs() > 1e-6 {
                let t = th.mtan().unwrap();
                let ratio = s.log() / c.log();
                assert!((t.log() - ratio).abs() <= 1e-12 * (1.0 + ratio.abs()));
            }
        }
        // inverse identity across [0, pi] on logs, endpoints included
        for k in 0..=1000 {
            let lt = PI * k as f64 / 1000.0;
            let back = MNum::from_log(lt).mcos().marccos().unwrap();
            assert!((back.log() - lt).abs() <= 1e-12, "lt={lt}");
        }
    });
}

#[test]
fn criterion_03_vectors() {
    criterion(3, "cross-product orthogonality, frozen example, bridge norms and angles", || {
        let u = MVec3::from_logs([5.0, 3.0, -2.0]);
        let v = MVec3::from_logs([4.0, 2.0, 13.0]);
        let w = u.mcross(&v);
        assert_eq!(w.log_image(), [43.0, -73.0, -2.0]);
        assert!(u.minner(&w).log().abs() <= 1e-12);
        assert!(v.minner(&w).log().abs() <= 1e-12);

        let mut rng = StdRng::seed_from_u64(0xC0FFEE);
        for _ in 0..200 {
            let mut logs = [[0.0; 3]; 2];
            for l in logs.iter_mut().flatten() {
                *l = rng.gen_range(-3.0..3.0);
            }
            let a = MVec3::from_logs(logs[0]);
            let b = MVec3::from_logs(logs[1]);
            let c = a.mcross(&b);
            assert!(a.minner(&c).log().abs() <= 1e-12);
            assert!(b.minner(&c).log().abs() <= 1e-12);

            // collinear factors have the multiplicative zero cross product
            let k = MNum::from_log(rng.gen_range(-2.0..2.0));
            let parallel = a.mcross(&a.smul(k));
            for l in parallel.log_image() {
                assert!(l.abs() <= 1e-12);
            }

            // norm and angle are the classical ones on the log image
            let na: f64 = logs[0].iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((a.mnorm().log() - na).abs() <= 1e-12);
            if na > 0.1 {
                let nb: f64 = logs[1].iter().map(|x| x * x).sum::<f64>().sqrt();
                if nb > 0.1 {
                    let dot: f64 = logs[0].iter().zip(&logs[1]).map(|(x, y)| x * y).sum();
                    let ang = (dot / (na * nb)).clamp(-1.0, 1.0).acos();
                    assert!((a.mangle(&b).unwrap().log() - ang).abs() <= 1e-12);
                }
            }
        }
    });
}

#[test]
fn criterion_04_calculus() {
    criterion(4, "star derivative closed forms, fundamental theorem, jets vs finite differences", || {
        // 20 closed forms: pairs of f(s) and the log of its first star
        // derivative, s f'(s) / f(s)
        type Case = (fn(f64) -> f64, fn(f64) -> f64);
        let cases: [Case; 20] = [
            (|s| s, |_| 1.0),
            (|s| s * s, |_| 2.0),
            (|s| s.powf(2.5), |_| 2.5),
            (|s| 1.0 / s, |_| -1.0),
            (|s| s.exp(), |s| s),
            (|s| (2.0 * s).exp(), |s| 2.0 * s),
            (|s| s * s.exp(), |s| 1.0 + s),
            (|s| (s * s).exp(), |s| 2.0 * s * s),
            (|s| (1.0 + s).ln(), |s| s / ((1.0 + s) * (1.0 + s).ln())),
            (|s| 1.0 + s * s, |s| 2.0 * s * s / (1.0 + s * s)),
            (|s| (1.0 + s).powi(3), |s| 3.0 * s / (1.0 + s)),
            (|s| (1.0 + s * s).sqrt(), |s| s * s / (1.0 + s * s)),
            (|s| 2.0 + s.sin(), |s| s * s.cos() / (2.0 + s.sin())),
            (|s| s.sin().exp(), |s| s * s.cos()),
            (|s| s.cosh(), |s| s * s.tanh()),
            (|s| s.sinh(), |s| s / s.tanh()),
            (|s| 2f64.powf(s), |s| s * 2f64.ln()),
            (|s| s.powf(s), |s| s * (s.ln() + 1.0)),
            (|s| 1.0 / (1.0 + s), |s| -s / (1.0 + s)),
            (|s| s.atan() + 1.0, |s| s / ((1.0 + s * s) * (s.atan() + 1.0))),
        ];
        for (i, (f, sd)) in cases.iter().copied().enumerate() {
            let map = ScalarMapJet::from_eval(move |x: MNum| MNum::from_value(f(x.value())));
            for u in [0.2, 0.9, 1.5] {
                let s = MNum::from_log(u);
                let got = star_derivative(&map, s, 1).unwrap();
                assert!(
                    (got.log() - sd(s.value())).abs() <= 1e-8,
                    "case {i} at log s = {u}: got {}, want {}",
                    got.log(),
                    sd(s.value())
                );
            }
        }

        // fundamental theorem, both directions, on f(s) = exp(sin s)
        let fmap = ScalarMapJet::from_eval(|x: MNum| MNum::from_value(x.value().sin().exp()));
        let a = MNum::from_log(0.3);
        let b = MNum::from_log(1.2);
        let deriv = {
            let fmap = fmap.clone();
            ScalarMapJet::from_eval(move |x: MNum| star_derivative(&fmap, x, 1))
        };
        let total = star_integral_definite(&deriv, a, b).unwrap();
        let want = b.value().sin() - a.value().sin();
        assert!((total.log() - want).abs() <= 1e-8);

        let accum = {
            let fmap = fmap.clone();
            ScalarMapJet::from_eval(move |x: MNum| star_integral_definite_tol(&fmap, a, x, 1e-14))
        };
        let s0 = MNum::from_log(0.9);
        let got = star_derivative(&accum, s0, 1).unwrap();
        assert!((got.log() - s0.value().sin()).abs() <= 1e-8);

        // analytic jets against the finite-difference fallback, orders 1-2
        for src in [
            "msin(s) +* s ^* 2.0",
            "(s .* s) -* mcos(s)",
            "msqrt((s ^* 2.0) +* e^1)",
        ] {
            let ast = parse_mexpr(src).unwrap();
            let analytic = ast.to_map();
            let shadow = ast.clone();
            let fd = ScalarMapJet::from_eval(move |x| shadow.eval(x));
            for u in [0.4, 1.1, 2.0] {
                let s = MNum::from_log(u);
                for k in 1..=2 {
                    let ja = star_derivative(&analytic, s, k).unwrap();
                    let jf = star_derivative(&fd, s, k).unwrap();
                    assert!(
                        (ja.log() - jf.log()).abs() <= 1e-5,
                        "{src} order {k} at log s = {u}: {} vs {}",
                        ja.log(),
                        jf.log()
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_05_circle() {
    criterion(5, "catalog circle is natural and lies at distance e from (1, 1)", || {
        let c = circle();
        let rep = is_natural(&c).unwrap();
        assert!(rep.natural);
        assert!(rep.max_deviation <= 1e-9, "deviation {}", rep.max_deviation);

        let center = MVec2::from_values([1.0, 1.0]).unwrap();
        for k in 0..64 {
            let u = 2.0 * PI * (k as f64 + 0.5) / 64.0;
            let p = c.point(MNum::from_log(u)).unwrap();
            let img = p.log_image();
            let q = MVec2::from_logs([img[0], img[1]]);
            assert!((q.mdistance(&center).log() - 1.0).abs() <= 1e-12, "u={u}");
        }
    });
}

#[test]
fn criterion_06_frenet() {
    criterion(6, "Frenet frame invariants on both catalog helices at 1e-8 / 1e-9", || {
        for (a, b) in [(FRAC_1_SQRT_2, FRAC_1_SQRT_2), (1.6, 0.8)] {
            let h = helix(a, b).unwrap();
            let (u0, u1) = h.u_domain();
            let m2 = a * a + b * b;
            for k in 0..16 {
                let u = u0 + (u1 - u0) * (k as f64 + 0.5) / 16.0;
                let s = MNum::from_log(u);
                let fr = frenet(&h, s).unwrap();
                assert!((fr.kappa.log() - a / m2).abs() <= 1e-9, "a={a} b={b} u={u}");
                assert!((fr.tau.log() - b / m2).abs() <= 1e-9, "a={a} b={b} u={u}");

                // orthonormality and closure of the frame
                assert!((fr.t.mnorm().log() - 1.0).abs() <= 1e-8);
                assert!((fr.n.mnorm().log() - 1.0).abs() <= 1e-8);
                assert!((fr.b.mnorm().log() - 1.0).abs() <= 1e-8);
                assert!(fr.t.minner(&fr.n).log().abs() <= 1e-8);
                assert!(fr.t.minner(&fr.b).log().abs() <= 1e-8);
                assert!(fr.n.minner(&fr.b).log().abs() <= 1e-8);
                let closure = fr.t.mcross(&fr.n);
                for i in 0..3 {
                    assert!((closure.log_image()[i] - fr.b.log_image()[i]).abs() <= 1e-8);
                }

                let res = frenet_residuals(&h, s).unwrap();
                assert!(res.max() <= 1e-8, "residuals {res:?} at u={u}");
            }
        }
    });
}

#[test]
fn criterion_07_classifiers() {
    criterion(7, "helix, slant-helix, spherical, and rectifying classifiers", || {
        let h = helix(1.6, 0.8).unwrap();

        let rep = classify_helix(&h, 64, 1e-6).unwrap();
        assert_eq!(rep.kind, CurveKind::Helix);
        assert!((rep.constants["c"].log() - 0.5).abs() <= 1e-9);
        assert!(rep.residual <= 1e-9);

        let slant = slant_helix_sigma(&h, 64, 1e-6).unwrap();
        assert_eq!(slant.kind, CurveKind::SlantHelix);
        assert!(slant.constants["sigma"].log().abs() <= 1e-8);

        let sph = sphcurve(0.5).unwrap();
        let center = MVec3::from_values([1.0, 1.0, 1.0]).unwrap();
        let sc = spherical_check(&sph, 64, 1e-6, Some((center, MNum::ONE_STAR))).unwrap();
        assert_eq!(sc.kind, CurveKind::Spherical);
        assert!(sc.residual <= 1e-6, "residual {}", sc.residual);
        assert!((sc.constants["radius"].log() - 1.0).abs() <= 1e-6);

        let hs = spherical_check(&h, 64, 1e-6, None).unwrap();
        assert_ne!(hs.kind, CurveKind::Spherical);
        assert!(hs.residual > 1e-3, "helix should fail, residual {}", hs.residual);

        let rect = curve_from_curvature_jets(
            |_| Ok(Taylor::constant(1.0)),
            |u| Ok(Taylor::variable(u)),
            (0.5, 2.5),
            FrameStart::default(),
        )
        .unwrap();
        let rf = rectifying_fit(&rect, 64, 1e-3).unwrap();
        assert_eq!(rf.kind, CurveKind::Rectifying);
        assert!((rf.constants["a"].log() - 1.0).abs() <= 1e-3);
        assert!(rf.constants["b"].log().abs() <= 1e-3);
    });
}

#[test]
fn criterion_08_bertrand() {
    criterion(8, "Bertrand pair passes all identity groups; unrelated pair fails", || {
        let x = helix(1.6, 0.8).unwrap();
        let y = bertrand_partner(&x, MNum::from_log(3.2)).unwrap();
        let rep = bertrand_verify(&x, &y, 64, 1e-6).unwrap();
        assert!(rep.verdict, "{:#?}", rep.checks);
        for ch in &rep.checks {
            assert_eq!(ch.status, CheckStatus::Pass, "{}: {ch:#?}", ch.name);
            assert!(ch.max_residual <= 1e-6, "{}: {}", ch.name, ch.max_residual);
        }
        assert!(rep.lambda_max_deviation <= 1e-9);
        let theorem = rep.check("lambda_kappa_mu_tau_theorem").unwrap();
        assert!(theorem.max_residual <= 1e-8);

        // unrelated curves over the same domain are rejected
        let z = helix(0.8, 1.6).unwrap();
        let neg = bertrand_verify(&x, &z, 64, 1e-6).unwrap();
        assert!(!neg.verdict);
    });
}

#[test]
fn criterion_09_mannheim() {
    criterion(9, "Mannheim offset, degenerate-partner checks, Bertrand negative control", || {
        let x = helix(1.6, 0.8).unwrap();
        let (lambda, _) = mannheim_lambda(&x, 64).unwrap();
        assert!((lambda.log() - 1.6).abs() <= 1e-12);

        let y = mannheim_partner(&x).unwrap();
        let rep = mannheim_verify(&x, &y, 64, 1e-6).unwrap();
        assert!(rep.verdict, "{:#?}", rep.checks);
        for name in [
            "normal_binormal_collinearity",
            "offset_parallel_to_normal",
            "lambda_constant",
            "reciprocal_offset",
            "angle_constant",
            "tangent_frame_relation",
            "partner_curvature_relation",
            "partner_torsion_relation",
            "lambda_formula",
        ] {
            let ch = rep.check(name).expect(name);
            assert_eq!(ch.status, CheckStatus::Pass, "{name}: {ch:#?}");
            assert!(ch.max_residual <= 1e-6, "{name}: {}", ch.max_residual);
        }
        assert_eq!(
            rep.check("torsion_curvature_ratio_relation").unwrap().status,
            CheckStatus::Indeterminate
        );

        let bert = bertrand_partner(&x, MNum::from_log(3.2)).unwrap();
        let neg = mannheim_verify(&x, &bert, 64, 1e-6).unwrap();
        assert!(!neg.verdict);
        assert_eq!(
            neg.check("normal_binormal_collinearity").unwrap().status,
            CheckStatus::Fail
        );
    });
}

fn gen_expr(rng: &mut StdRng, depth: usize) -> MExpr {
    use mulgeo::expr::{BinOp, UnaryFn};
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.4) {
            MExpr::Param
        } else {
            MExpr::Literal(MNum::from_log(rng.gen_range(-4.0..4.0)))
        };
    }
    match rng.gen_range(0..8u32) {
        0 => MExpr::Binary(
            BinOp::Madd,
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        1 => MExpr::Binary(
            BinOp::Msub,
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        2 => MExpr::Binary(
            BinOp::Mmul,
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        3 => MExpr::Binary(
            BinOp::Mdiv,
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        4 => {
            let f = [
                UnaryFn::Msin,
                UnaryFn::Mcos,
                UnaryFn::Mtan,
                UnaryFn::Mcot,
                UnaryFn::Msqrt,
                UnaryFn::Mneg,
                UnaryFn::Mabs,
            ][rng.gen_range(0..7usize)];
            MExpr::Unary(f, Box::new(gen_expr(rng, depth - 1)))
        }
        5 | 6 => {
            let k = [-2.0, -0.5, 0.5, 1.0, 2.0, 3.0][rng.gen_range(0..6usize)];
            MExpr::Pow(Box::new(gen_expr(rng, depth - 1)), k)
        }
        _ => MExpr::Unary(UnaryFn::Mneg, Box::new(gen_expr(rng, depth - 1))),
    }
}

#[test]
fn criterion_10_parser() {
    criterion(10, "grammar round trip, precedence, error offsets, 1000 generated expressions", || {
        // precedence: pow over mul over add, all left-associative
        let e = parse_mexpr("e^1 +* e^2 .* e^3 ^* 2.0").unwrap();
        assert_eq!(e.eval(MNum::ZERO_STAR).unwrap().log(), 1.0 + 2.0 * 9.0);
        let e = parse_mexpr("(e^1 +* e^2) .* e^3").unwrap();
        assert_eq!(e.eval(MNum::ZERO_STAR).unwrap().log(), 9.0);
        let e = parse_mexpr("e^8 -* e^3 -* e^1").unwrap();
        assert_eq!(e.eval(MNum::ZERO_STAR).unwrap().log(), 4.0);

        // frozen error offsets
        for (src, offset) in [("msin(s", 6), ("s +* ", 5), ("foo(s)", 0), ("s s", 2), ("s ^* x", 5)]
        {
            match parse_mexpr(src) {
                Err(Error::Parse { offset: got, .. }) => {
                    assert_eq!(got, offset, "source {src:?}")
                }
                other => panic!("expected parse error for {src:?}, got {other:?}"),
            }
        }

        // generated expressions: render/parse identity and eval agreement
        // between the value route and the bridge route
        let mut rng = StdRng::seed_from_u64(0x9E11);
        let mut compared = 0usize;
        for _ in 0..1000 {
            let ast = gen_expr(&mut rng, 4);
            let rendered = render_mexpr(&ast);
            let back = parse_mexpr(&rendered)
                .unwrap_or_else(|e| panic!("round trip failed for {rendered:?}: {e:?}"));
            assert_eq!(back, ast, "{rendered}");

            let map = ast.to_map();
            for u in [-0.7, 0.4, 1.3] {
                if let Ok(v) = ast.eval(MNum::from_log(u)) {
                    if let Ok(w) = map.bridge_value(u) {
                        assert!(
                            (v.log() - w).abs() <= 1e-12 * (1.0 + w.abs()),
                            "{rendered} at U={u}: {} vs {w}",
                            v.log()
                        );
                        compared += 1;
                    }
                }
            }
        }
        assert!(compared > 1000, "only {compared} comparable evaluations");
    });
}

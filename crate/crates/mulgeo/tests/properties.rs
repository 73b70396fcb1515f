//! Randomized algebraic properties for the number type, the jets, and the
//! expression language.

use proptest::prelude::*;

use mulgeo::expr::{BinOp, UnaryFn};
use mulgeo::jet::Taylor;
use mulgeo::{parse_mexpr, render_mexpr, MExpr, MNum};

fn mnum() -> impl Strategy<Value = MNum> {
    (-40.0..40.0f64).prop_map(MNum::from_log)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn madd_commutes_exactly(a in mnum(), b in mnum()) {
        prop_assert_eq!(a.madd(b).log(), b.madd(a).log());
    }

    #[test]
    fn madd_associates_within_rounding(a in mnum(), b in mnum(), c in mnum()) {
        let l = a.madd(b).madd(c).log();
        let r = a.madd(b.madd(c)).log();
        let scale = 1.0 + a.log().abs() + b.log().abs() + c.log().abs();
        prop_assert!((l - r).abs() <= 1e-14 * scale);
    }

    #[test]
    fn msub_undoes_madd(a in mnum(), b in mnum()) {
        let got = a.madd(b).msub(b).log();
        let scale = 1.0 + a.log().abs().max(b.log().abs());
        prop_assert!((got - a.log()).abs() <= 1e-14 * scale);
    }

    #[test]
    fn mmul_commutes_within_rounding(a in mnum(), b in mnum()) {
        prop_assert!(close(a.mmul(b).log(), b.mmul(a).log(), 1e-15));
    }

    #[test]
    fn mmul_distributes_over_madd(a in mnum(), b in mnum(), c in mnum()) {
        let l = a.mmul(b.madd(c)).log();
        let r = a.mmul(b).madd(a.mmul(c)).log();
        let scale = 1.0 + a.log().abs() * (b.log().abs() + c.log().abs());
        prop_assert!((l - r).abs() <= 4e-15 * scale);
    }

    #[test]
    fn identities_behave(a in mnum()) {
        prop_assert_eq!(a.madd(MNum::ZERO_STAR).log(), a.log());
        prop_assert!(close(a.mmul(MNum::ONE_STAR).log(), a.log(), 1e-15));
        prop_assert_eq!(a.madd(a.mneg()).log(), MNum::ZERO_STAR.log());
    }

    #[test]
    fn trig_pythagoras(a in mnum()) {
        let s2 = a.msin().mpow(2.0).unwrap();
        let c2 = a.mcos().mpow(2.0).unwrap();
        prop_assert!((s2.madd(c2).log() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn display_round_trips(a in mnum()) {
        let back: MNum = a.to_string().parse().unwrap();
        prop_assert!(close(back.log(), a.log(), 1e-14));
    }

    #[test]
    fn serde_round_trips_exactly(a in mnum()) {
        let back: MNum = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back.log(), a.log());
    }
}

fn taylor(u: f64) -> impl Strategy<Value = Taylor> {
    proptest::array::uniform6(-1.5..1.5f64).prop_map(move |c| {
        let mut t = Taylor::variable(u);
        t.c = c;
        t
    })
}

proptest! {
    #[test]
    fn jet_mul_div_round_trips(a in taylor(0.3), mut b in taylor(0.3)) {
        b.c[0] += 3.0;
        let back = a.mul(&b).div(&b).unwrap();
        for k in 0..6 {
            prop_assert!(close(back.c[k], a.c[k], 1e-10));
        }
    }

    #[test]
    fn jet_exp_ln_round_trips(a in taylor(0.3)) {
        let back = a.exp().ln().unwrap();
        for k in 0..6 {
            prop_assert!(close(back.c[k], a.c[k], 1e-10));
        }
    }

    #[test]
    fn jet_derivative_inverts_integration(a in taylor(0.3)) {
        let back = a.integrate().differentiate();
        // integration truncates the top coefficient
        for k in 0..5 {
            prop_assert!(close(back.c[k], a.c[k], 1e-12));
        }
    }

    #[test]
    fn jet_sin_cos_pythagoras(a in taylor(0.3)) {
        let (s, c) = a.sin_cos();
        let one = s.mul(&s).add(&c.mul(&c));
        prop_assert!(close(one.c[0], 1.0, 1e-12));
        for k in 1..6 {
            prop_assert!(one.c[k].abs() <= 1e-10);
        }
    }
}

fn mexpr() -> impl Strategy<Value = MExpr> {
    let leaf = prop_oneof![
        2 => Just(MExpr::Param),
        3 => (-4.0..4.0f64).prop_map(|l| MExpr::Literal(MNum::from_log(l))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let unary = prop_oneof![
            Just(UnaryFn::Msin),
            Just(UnaryFn::Mcos),
            Just(UnaryFn::Mneg),
            Just(UnaryFn::Mabs),
            Just(UnaryFn::Msqrt),
        ];
        let binop = prop_oneof![
            Just(BinOp::Madd),
            Just(BinOp::Msub),
            Just(BinOp::Mmul),
            Just(BinOp::Mdiv),
        ];
        prop_oneof![
            3 => (binop, inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| MExpr::Binary(op, Box::new(a), Box::new(b))),
            2 => (unary, inner.clone())
                .prop_map(|(f, a)| MExpr::Unary(f, Box::new(a))),
            1 => (inner, prop_oneof![Just(-2.0), Just(0.5), Just(2.0), Just(3.0)])
                .prop_map(|(a, k)| MExpr::Pow(Box::new(a), k)),
        ]
    })
}

proptest! {
    #[test]
    fn render_parse_is_the_identity(e in mexpr()) {
        let text = render_mexpr(&e);
        let back = parse_mexpr(&text).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn eval_agrees_with_the_bridge_jet(e in mexpr(), u in -1.5..1.5f64) {
        let s = MNum::from_log(u);
        let direct = e.eval(s);
        let map = e.to_map();
        let via_jet = map.eval(s);
        match (direct, via_jet) {
            (Ok(a), Ok(b)) => {
                prop_assert!(close(a.log(), b.log(), 1e-12));
            }
            (Err(_), _) | (_, Err(_)) => {}
        }
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use zetalab::gauge::{
    CharPolySummand, DieudonneGauge, GaugeSpec, HodgeTable, SlopeSummand, Summand, TorsionGauge,
};
use zetalab::isocrystal::{IsocrystalCharPoly, SlopeDatum};
use zetalab::padic::{parse_rational, Matrix, PAdicContext, RatPolynomial};
use zetalab::zeta::{
    ord_at, shift_law, special_value_limit, twist_shift_laws, verify_theorem, zeta_from_gauge, Verdict,
};

fn poly(c: &PAdicContext, coeffs: Vec<BigInt>, degree: i64, hodge: Option<HodgeTable>) -> Summand {
    Summand::CharPoly(CharPolySummand {
        poly: IsocrystalCharPoly::new(RatPolynomial::from_ints(coeffs), c).unwrap(),
        hodge,
        degree,
    })
}

/// `{1 - t; 1 - a t + q t^2; 1 - q t}` in degrees 0, 1, 2.
fn elliptic(c: &PAdicContext, a: i64) -> GaugeSpec {
    let q = c.q().clone();
    GaugeSpec::new(c)
        .with(poly(c, vec![1.into(), (-1).into()], 0, None))
        .with(poly(c, vec![1.into(), (-a).into(), q.clone()], 1, None))
        .with(poly(c, vec![1.into(), -q], 2, None))
}

fn plane(c: &PAdicContext) -> GaugeSpec {
    let q = c.q().clone();
    let h = |i| Some(HodgeTable::from_entries([((i, i), 1)]));
    GaugeSpec::new(c)
        .with(poly(c, vec![1.into(), (-1).into()], 0, h(0)))
        .with(poly(c, vec![1.into(), -q.clone()], 2, h(1)))
        .with(poly(c, vec![1.into(), -(&q * &q)], 4, h(2)))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn worked_numbers() {
    let c = PAdicContext::prime_field(5).unwrap();

    // lim = P_1(1/5) / (P_0(1/5) (1 - 5t)/(1 - 5t)) = 1 / (4/5)
    let rep = verify_theorem(&elliptic(&c, 1), 1);
    assert_eq!(rep.verdict, Verdict::Verified, "{:?}", rep.problems);
    assert_eq!((rep.rho, rep.lhs_exponent, rep.mu_exponent, rep.chi), (-1, -1, 1, 0));
    assert_eq!(special_value_limit(&zeta_from_gauge(&elliptic(&c, 1)), 1), rat(5, 4));

    // lim = (1 + 1/5) / (4/5) = 3/2
    let rep = verify_theorem(&elliptic(&c, 0), 1);
    assert_eq!(rep.verdict, Verdict::Verified);
    assert_eq!((rep.lhs_exponent, rep.mu_exponent, rep.chi), (0, 0, 0));
    assert_eq!(special_value_limit(&zeta_from_gauge(&elliptic(&c, 0)), 1), rat(3, 2));

    for (p, n) in [(2u64, 1u32), (3, 1), (5, 1), (2, 2), (3, 2)] {
        let c = PAdicContext::new(p, n).unwrap();
        let rep = verify_theorem(&plane(&c), 1);
        assert_eq!(rep.verdict, Verdict::Verified, "{:?}", rep.problems);
        assert_eq!((rep.rho, rep.lhs_exponent, rep.mu_exponent, rep.chi), (-1, -(n as i64), 0, 1));
        // lim = 1 / ((1 - 1/q)(1 - q)) = -q / (q - 1)^2
        let q = BigRational::from_integer(c.q().clone());
        let one = BigRational::from_integer(1.into());
        let expected = -&q / ((&q - &one) * (&q - &one));
        assert_eq!(special_value_limit(&zeta_from_gauge(&plane(&c)), 1), expected);
    }
}

#[test]
fn slope_against_declared_hodge() {
    let c = PAdicContext::prime_field(3).unwrap();
    let g = GaugeSpec::new(&c).with(poly(
        &c,
        vec![1.into(), (-3).into()],
        0,
        Some(HodgeTable::from_entries([((0, 0), 1)])),
    ));
    let rep = verify_theorem(&g, 1);
    assert_eq!(rep.verdict, Verdict::InconsistentInput);
    assert_eq!(rep.slope_sum, 0);
    assert_eq!(rep.chi, 1);
}

fn v_p(mut x: i64, p: i64) -> i64 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Elliptic curves over `F_p`: `a` in the Hasse range.
fn curve() -> impl Strategy<Value = (u64, i64)> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7)].prop_flat_map(|p| {
        let bound = (2.0 * (p as f64).sqrt()).floor() as i64;
        (Just(p), -bound..=bound)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elliptic_curves_verify((p, a) in curve()) {
        let c = PAdicContext::prime_field(p).unwrap();
        let g = elliptic(&c, a);
        for r in -3..=5 {
            let rep = verify_theorem(&g, r);
            prop_assert_eq!(rep.verdict, Verdict::Verified, "r={} {:?}", r, rep.problems);
        }
        // μ_syn(E, 1) = p^{v_p(#E(F_p))} for ordinary E, and 1 otherwise.
        let points = 1 - a + p as i64;
        let expected = if a.rem_euclid(p as i64) == 0 { 0 } else { v_p(points, p as i64) };
        prop_assert_eq!(verify_theorem(&g, 1).mu_exponent, expected);
    }

    #[test]
    fn laws_on_elliptic_curves((p, a) in curve(), i in -2i64..=2, r in -3i64..=5) {
        let c = PAdicContext::prime_field(p).unwrap();
        let g = elliptic(&c, a);
        prop_assert!(twist_shift_laws(&g, i, r).holds());
        prop_assert!(shift_law(&g, i, r).holds());
    }

    #[test]
    fn direct_sums_add((p, a) in curve(), b in -1i64..=1, r in -3i64..=5) {
        let c = PAdicContext::prime_field(p).unwrap();
        let g1 = elliptic(&c, a);
        let g2 = plane(&c).twist(b).shift(1);
        let sum = verify_theorem(&g1.direct_sum(&g2).unwrap(), r);
        let (x, y) = (verify_theorem(&g1, r), verify_theorem(&g2, r));
        prop_assert_eq!(sum.verdict, Verdict::Verified);
        prop_assert_eq!(sum.rho, x.rho + y.rho);
        prop_assert_eq!(sum.lhs_exponent, x.lhs_exponent + y.lhs_exponent);
        prop_assert_eq!(sum.mu_exponent, x.mu_exponent + y.mu_exponent);
        prop_assert_eq!(sum.chi, x.chi + y.chi);
    }
}

#[test]
fn extension_fields() {
    // Elliptic curves over F_4 and F_9, including supersingular ones.
    for (p, n, a_values) in [(2u64, 2u32, vec![-4, -3, -1, 0, 1, 2, 4]), (3, 2, vec![-6, -3, -1, 0, 2, 3, 5])] {
        let c = PAdicContext::new(p, n).unwrap();
        for a in a_values {
            let g = elliptic(&c, a);
            for r in -3..=5 {
                let rep = verify_theorem(&g, r);
                assert_eq!(rep.verdict, Verdict::Verified, "q={} a={a} r={r} {:?}", c.q(), rep.problems);
            }
        }
    }
}

#[test]
fn pure_slope_summands() {
    for (p, n) in [(3u64, 1u32), (2, 2), (5, 3)] {
        let c = PAdicContext::new(p, n).unwrap();
        for (s, r) in [(0i64, 1i64), (1, 1), (1, 2), (1, 3), (2, 3), (3, 2)] {
            let slopes = vec![SlopeDatum::new(parse_rational(&format!("{s}/{r}")).unwrap(), r as usize)];
            for degree in [0, 1] {
                let g = GaugeSpec::new(&c).with(Summand::Slope(SlopeSummand::new(slopes.clone(), degree, &c).unwrap()));
                for w in -3..=5 {
                    let rep = verify_theorem(&g, w);
                    assert_eq!(rep.verdict, Verdict::Verified, "E_{s}/{r} n={n} w={w} {:?}", rep.problems);
                }
            }
        }
    }
}

#[test]
fn dieudonne_and_torsion_summands() {
    let c = PAdicContext::prime_field(3).unwrap();
    let e = DieudonneGauge::new(1, 1, Matrix::from_i64(&[vec![2, -3], vec![1, 0]]), &c).unwrap();
    let g = GaugeSpec::new(&c)
        .with(Summand::Dieudonne(DieudonneGauge::unit(&c).unwrap()))
        .with(Summand::Dieudonne(e.clone().placed(1)))
        .with(Summand::Dieudonne(DieudonneGauge::multiplicative(&c).unwrap().placed(2)))
        .with(Summand::Torsion(TorsionGauge::new(e.clone(), 2).unwrap().placed(1)))
        .with(Summand::Torsion(TorsionGauge::new(e, 1).unwrap().twisted(1)));
    for r in -3..=5 {
        let rep = verify_theorem(&g, r);
        assert_eq!(rep.verdict, Verdict::Verified, "r={r} {:?}", rep.problems);
        assert_eq!(rep.syntomic_order, Some(rep.rho));
        assert_eq!((rep.mu_torsion, rep.chi_torsion), (0, 0));
        for i in -2..=2 {
            assert!(twist_shift_laws(&g, i, r).holds(), "i={i} r={r}");
        }
    }
}

#[test]
fn unit_gauge_and_twists() {
    let c = PAdicContext::prime_field(2).unwrap();
    let unit = GaugeSpec::new(&c).with(Summand::Dieudonne(DieudonneGauge::unit(&c).unwrap()));
    let z = zeta_from_gauge(&unit);
    assert_eq!(z.factors().len(), 1);
    assert_eq!(z.factor(0), RatPolynomial::from_i64(&[1, -1]));
    assert_eq!(zeta_from_gauge(&unit.shift(1)).factor(1), RatPolynomial::from_i64(&[1, -1]));
    assert_eq!(ord_at(&z, 0), -1);
    assert_eq!(ord_at(&z, 1), 0);
    for i in -2..=2 {
        for r in -3..=5 {
            let rep = verify_theorem(&unit.twist(i), r);
            assert_eq!(rep.verdict, Verdict::Verified);
            // χ(Z_p{i}, r) = max(r + i, 0) and μ_syn = 1.
            assert_eq!(rep.chi, (r + i).max(0));
            assert_eq!(rep.mu_exponent, 0);
        }
    }
}

use aim_spectrum::numerics::{recenter_polynomial, Jet, PScalar, Precision};
use aim_spectrum::potential::{inverse_r_p, transform_x_p};
use proptest::prelude::*;

fn prec() -> Precision {
    Precision::new(256).unwrap()
}

fn jet(center: f64, coeffs: &[f64]) -> Jet {
    let c = PScalar::from_f64(center, prec());
    Jet::from_f64s(&c, coeffs).unwrap()
}

/// `|a - b| <= 2^-bits * max(scale, 1)` with scale taken from the operands.
fn close(a: &PScalar, b: &PScalar, bits: i64, scale: &PScalar) -> bool {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return true;
    }
    let s = scale.binary_exponent().unwrap_or(0).max(0);
    diff.binary_exponent().unwrap() <= s - bits
}

fn jets_close(a: &Jet, b: &Jet, bits: i64) -> bool {
    a.degree() == b.degree()
        && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| close(x, y, bits, &x.abs().max(&y.abs()).clone()))
}

fn coeff_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_rule(a in coeff_vec(8), b in coeff_vec(8), c in -0.9f64..0.9) {
        let (a, b) = (jet(c, &a), jet(c, &b));
        let lhs = a.mul(&b, 7).unwrap().diff().unwrap();
        let rhs = a.diff().unwrap().mul(&b, 6).unwrap().add(&a.mul(&b.diff().unwrap(), 6).unwrap()).unwrap();
        prop_assert!(jets_close(&lhs, &rhs, 240));
    }

    #[test]
    fn multiplication_is_associative(a in coeff_vec(6), b in coeff_vec(6), d in coeff_vec(6)) {
        let (a, b, d) = (jet(0.25, &a), jet(0.25, &b), jet(0.25, &d));
        let left = a.mul(&b, 5).unwrap().mul(&d, 5).unwrap();
        let right = a.mul(&b.mul(&d, 5).unwrap(), 5).unwrap();
        prop_assert!(jets_close(&left, &right, 236));
    }

    #[test]
    fn division_round_trip(n in coeff_vec(7), mut d in coeff_vec(7)) {
        d[0] = if d[0] >= 0.0 { d[0] + 1.0 } else { d[0] - 1.0 };
        let (n, d) = (jet(-0.3, &n), jet(-0.3, &d));
        let q = n.div(&d, 6).unwrap();
        let back = q.mul(&d, 6).unwrap();
        let bits = prec().bits() as i64 - 16;
        for (x, y) in back.coeffs().iter().zip(n.coeffs()) {
            prop_assert!(close(x, y, bits, &q.coeffs().iter().fold(PScalar::one(prec()), |m, c| m.max(&c.abs()).clone())));
        }
    }

    #[test]
    fn recentred_polynomial_matches_horner(p in coeff_vec(5), x0 in -0.95f64..0.95, t in -0.5f64..0.5) {
        let poly: Vec<PScalar> = p.iter().map(|&v| PScalar::from_f64(v, prec())).collect();
        let x0 = PScalar::from_f64(x0, prec());
        let shifted = recenter_polynomial(&poly, &x0, 4);
        let x = &x0 + &PScalar::from_f64(t, prec());
        let origin = Jet::new(PScalar::zero(prec()), poly).unwrap();
        let direct = origin.eval_at(&x);
        let via_shift = shifted.eval_at(&x);
        prop_assert!(close(&direct, &via_shift, 240, &direct.abs()));
    }

    #[test]
    fn transform_round_trip(r in 1e-6f64..20.0, lambda in 0.5f64..3.0) {
        // x carries absolute error 2^-p near x = 1, which r amplifies by e^{λr}
        let lost = (lambda * r / std::f64::consts::LN_2).ceil() as i64;
        let r = PScalar::from_f64(r, prec());
        let lambda = PScalar::from_f64(lambda, prec());
        let back = inverse_r_p(&lambda, &transform_x_p(&lambda, &r)).unwrap();
        prop_assert!(close(&back, &r, prec().bits() as i64 - 16 - lost, &r));
    }
}

#[test]
fn truncated_product_follows_the_truncation_law() {
    let a = jet(0.0, &[1.0, 1.0]);
    let sq = a.mul(&a, 2).unwrap();
    assert_eq!(sq.coeffs().iter().map(PScalar::to_f64).collect::<Vec<_>>(), vec![1.0, 2.0, 1.0]);
    let x = jet(0.0, &[0.0, 1.0]);
    assert!(x.mul(&x, 1).unwrap().coeffs().iter().all(PScalar::is_zero));
    let mismatched = jet(0.5, &[1.0]);
    assert!(a.add(&mismatched).is_err());
}

use maclab_core::algebra::{
    rat, rational_eq, Coeff, FactoredRational, LaurentPolynomial, Monomial, QtSeries,
    RationalFunction, Vars,
};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn xyz() -> Vars {
    Vars::new(["x", "y", "z"])
}

fn coeff() -> impl Strategy<Value = Coeff> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn laurent(
    vars: Vars,
    lo: i32,
    hi: i32,
    max_terms: usize,
) -> impl Strategy<Value = LaurentPolynomial> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(lo..=hi, n), coeff()), 0..=max_terms).prop_map(
        move |ts| {
            LaurentPolynomial::from_terms(
                &vars,
                ts.into_iter().map(|(e, c)| (Monomial::from_slice(&e), c)),
            )
        },
    )
}

fn poly() -> impl Strategy<Value = LaurentPolynomial> {
    laurent(xyz(), -2, 2, 4)
}

/// `(1 - c m)^e` factors with `m` a nontrivial monomial.
fn factors() -> impl Strategy<Value = Vec<(Vec<i32>, i64, i32)>> {
    prop::collection::vec(
        (
            prop::collection::vec(-2i32..=2, 3)
                .prop_filter("nontrivial", |e| e.iter().any(|&x| x != 0)),
            prop::sample::select(vec![-2i64, -1, 1, 2, 3]),
            prop::sample::select(vec![-2i32, -1, 1, 2]),
        ),
        0..=4,
    )
}

fn build(vars: &Vars, fs: &[(Vec<i32>, i64, i32)]) -> FactoredRational {
    let mut acc = FactoredRational::one(vars);
    for (e, c, p) in fs {
        let f = LaurentPolynomial::one_minus(vars, Monomial::from_slice(e), rat(*c));
        acc = acc.mul_poly_pow(&f, *p).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&LaurentPolynomial::one(&xyz())), a);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
    }

    #[test]
    fn factored_order_does_not_matter(fs in factors()) {
        let vars = xyz();
        let mut rev = fs.clone();
        rev.reverse();
        prop_assert!(rational_eq(&build(&vars, &fs), &build(&vars, &rev)));
        let f = build(&vars, &fs);
        prop_assert!(f.mul(&f.inv().unwrap()).is_one());
    }

    #[test]
    fn factored_agrees_with_expanded(fs in factors(), pt in prop::collection::vec(2i64..=9, 3)) {
        let vars = xyz();
        let f = build(&vars, &fs);
        let point: Vec<Coeff> = pt.iter().map(|&v| rat(v)).collect();
        let num = f.numerator().eval(&point).unwrap();
        let den = f.denominator().eval(&point).unwrap();
        prop_assume!(!den.is_zero());
        let r = f.to_ratfunc();
        let rd = r.den_poly().eval(&point).unwrap();
        prop_assume!(!rd.is_zero());
        prop_assert_eq!(f.eval(&point), Some(&num / &den));
        prop_assert_eq!(r.num().eval(&point).unwrap() / rd, num / den);
        prop_assert!(RationalFunction::from_factored(&f).mul_factored(&f.inv().unwrap()).equals(&RationalFunction::one(&vars)));
    }

    #[test]
    fn series_inverse(h in laurent(Vars::new(["q", "t"]), 0, 3, 4), order in 0i64..=5) {
        let vars = Vars::new(["q", "t"]);
        // 1 + (terms of positive degree) is a unit.
        let h = h.filter_terms(|m| m.degree() > 0);
        let f = LaurentPolynomial::one(&vars).add(&h);
        let inv = QtSeries::inverse(&f, order).unwrap();
        let prod = inv.mul_poly(&f);
        prop_assert!(prod.agrees_to(&QtSeries::one(&vars, order), order));
    }
}

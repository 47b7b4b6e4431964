use omfq::series::{binomial, Constraint};
use omfq::{int, rat, Error, LaurentSeries, Rational, TruncationRegion};
use proptest::prelude::*;

fn poly(nvars: usize, bound: i64, terms: &[(Vec<i64>, Rational)]) -> LaurentSeries {
    LaurentSeries::from_terms(nvars, 1, TruncationRegion::total_degree(nvars, int(bound)), terms.iter().cloned()).unwrap()
}

#[test]
fn geometric_series() {
    let f = poly(1, 8, &[(vec![0], int(1)), (vec![1], int(-1))]);
    let g = f.invert_unit(None).unwrap();
    for k in 0..=8 {
        assert_eq!(g.coeff(&[k]), int(1));
    }
    assert!(!g.contains(&[9]));
}

#[test]
fn square_root_has_binomial_coefficients() {
    let f = poly(1, 10, &[(vec![0], int(1)), (vec![1], int(1))]);
    let r = f.pow_rational(&rat(1, 2)).unwrap();
    assert_eq!(r.coeff(&[1]), rat(1, 2));
    assert_eq!(r.coeff(&[2]), rat(-1, 8));
    assert_eq!(r.coeff(&[3]), rat(1, 16));
    for j in 0..=10u32 {
        assert_eq!(r.coeff(&[j as i64]), binomial(&rat(1, 2), j));
    }
    assert_eq!(&r * &r, f);
}

#[test]
fn laurent_inverse_shifts_the_region() {
    // q^-1 (1 - q)
    let f = poly(1, 6, &[(vec![-1], int(1)), (vec![0], int(-1))]);
    let g = f.invert_unit(None).unwrap();
    assert_eq!(g.coeff(&[1]), int(1));
    assert_eq!(g.coeff(&[0]), int(0));
    let one = &f * &g;
    assert_eq!(one.coeff(&[0]), int(1));
    for k in 1..=5 {
        assert_eq!(one.coeff(&[k]), int(0), "q^{k}");
    }
}

#[test]
fn regions_intersect_by_constraint() {
    let r = TruncationRegion::total_degree(2, int(5)).with(Constraint { weights: vec![int(1), int(0)], bound: int(2) });
    assert!(r.contains(&[2, 3], 1));
    assert!(!r.contains(&[3, 0], 1));
    assert!(!r.contains(&[2, 4], 1));
    let tighter = r.intersect(&TruncationRegion::total_degree(2, int(4)));
    assert_eq!(tighter.constraints().len(), 2);
    assert!(!tighter.contains(&[2, 3], 1));
    assert!(TruncationRegion::weighted(vec![int(1), int(-1)], int(1)).is_err());
    assert!(TruncationRegion::weighted(vec![int(0), int(0)], int(1)).is_err());
}

#[test]
fn fractional_exponents() {
    let a = LaurentSeries::monomial(1, 24, vec![1], int(1));
    let b = LaurentSeries::monomial(1, 8, vec![1], int(3));
    let p = a.try_mul(&b).unwrap();
    assert_eq!(p.denom(), 24);
    assert_eq!(p.coeff(&[4]), int(3));
    let q = p.with_denom(48).unwrap();
    assert_eq!(q.coeff(&[8]), int(3));
    assert!(matches!(p.with_denom(12), Err(Error::Structural(_))));
}

#[test]
fn zero_has_no_inverse() {
    let z = LaurentSeries::zero(1, 1, TruncationRegion::total_degree(1, int(3)));
    assert!(matches!(z.invert_unit(None), Err(Error::NonInvertible(_))));
}

#[test]
fn exp_substitution() {
    // r + r^-1 -> 2 + w^2 + w^4/12
    let f = LaurentSeries::from_terms(1, 1, TruncationRegion::exact(), [(vec![1], int(1)), (vec![-1], int(1))]).unwrap();
    let g = f.exp_substitute(0, 4).unwrap();
    assert_eq!(g.coeff(&[0]), int(2));
    assert_eq!(g.coeff(&[1]), int(0));
    assert_eq!(g.coeff(&[2]), int(1));
    assert_eq!(g.coeff(&[4]), rat(1, 12));
}

fn arb_series() -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec(((0i64..=3, 0i64..=3), -4i64..=4, 1i64..=3), 0..8).prop_map(|ts| {
        let mut s = LaurentSeries::zero(2, 1, TruncationRegion::total_degree(2, int(5)));
        for ((a, b), n, d) in ts {
            s.add_term(vec![a, b], rat(n, d));
        }
        s
    })
}

fn arb_unit() -> impl Strategy<Value = LaurentSeries> {
    (arb_series(), 1i64..=5).prop_map(|(s, c)| {
        let mut s = s.try_sub(&LaurentSeries::constant(2, s.coeff(&[0, 0]))).unwrap();
        s.add_term(vec![0, 0], int(1));
        s.scale(&int(c))
    })
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))).unwrap());
    }

    #[test]
    fn multiplication_distributes(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(u in arb_unit()) {
        let v = u.invert_unit(None).unwrap();
        let one = &u * &v;
        prop_assert!(one.agrees_with(&LaurentSeries::one(2)).unwrap());
    }

    #[test]
    fn rational_powers_compose(u in arb_unit()) {
        let c = u.coeff(&[0, 0]);
        let u = u.scale(&(int(1) / c));
        let r = u.pow_rational(&rat(1, 3)).unwrap();
        prop_assert!((&(&r * &r) * &r).agrees_with(&u).unwrap());
    }
}

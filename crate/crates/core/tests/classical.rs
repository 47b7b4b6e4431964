use omfq::classical::*;
use omfq::{int, rat, LaurentSeries};

#[test]
fn ramanujan_tau() {
    let d = delta(6);
    let tau: Vec<i64> = vec![1, -24, 252, -1472, 4830, -6048];
    for (n, t) in tau.into_iter().enumerate() {
        assert_eq!(d.coeff(&[n as i64 + 1]), int(t));
    }
    assert_eq!(d.coeff(&[0]), int(0));
}

#[test]
fn eisenstein_coefficients() {
    let e4 = eisenstein(4, 4).unwrap();
    let e6 = eisenstein(6, 4).unwrap();
    assert_eq!([1, 2, 3].map(|n| e4.coeff(&[n])), [int(240), int(2160), int(6720)]);
    assert_eq!([1, 2, 3].map(|n| e6.coeff(&[n])), [int(-504), int(-16632), int(-122976)]);
    assert!(eisenstein(2, 4).is_err());
    assert!(eisenstein(7, 4).is_err());
}

#[test]
fn bernoulli_numbers() {
    let b = bernoulli(8);
    assert_eq!(b[1], rat(-1, 2));
    assert_eq!(b[2], rat(1, 6));
    assert_eq!(b[3], int(0));
    assert_eq!(b[4], rat(-1, 30));
    assert_eq!(b[8], rat(-1, 30));
}

#[test]
fn discriminant_identity() {
    let prec = 8;
    let e4 = eisenstein(4, prec).unwrap();
    let e6 = eisenstein(6, prec).unwrap();
    let lhs = &(&(&e4 * &e4) * &e4) - &(&e6 * &e6);
    assert_eq!(lhs, delta(prec).scale(&int(1728)));
}

#[test]
fn eta_powers_multiply() {
    let a = eta_power(5, 3);
    let b = eta_power(5, 21);
    let p: LaurentSeries = a.try_mul(&b).unwrap();
    assert!(p.agrees_with(&eta_power(5, 24)).unwrap());
    // eta^3 = sum (-1)^n (2n+1) q^{(2n+1)^2/8}
    assert_eq!(a.coeff(&[3]), int(1));
    assert_eq!(a.coeff(&[27]), int(-3));
    assert_eq!(a.coeff(&[75]), int(5));
    assert_eq!(a.coeff(&[51]), int(0));
}

#[test]
fn weak_jacobi_form_of_weight_minus_two() {
    let phi = phi_m2_1_series(2).unwrap();
    let c = |n: i64, t: i64| phi.coeff(&[n, t]);
    assert_eq!([c(0, 1), c(0, 0), c(0, -1)], [int(1), int(-2), int(1)]);
    assert_eq!([c(1, 2), c(1, 1), c(1, 0), c(1, -1), c(1, -2)], [int(-2), int(8), int(-12), int(8), int(-2)]);
    // phi(tau, 0) = 0
    for n in 0..=2 {
        let s: omfq::Rational = (-4..=4).map(|t| c(n, t)).sum();
        assert_eq!(s, int(0), "q^{n}");
    }
    let j = phi_10_1(2).unwrap();
    assert_eq!(j.weight(), &int(10));
    assert!(!j.is_weak());
    assert!(phi_m2_1(2).unwrap().is_weak());
}

#[test]
fn level_one_bases() {
    assert_eq!(level_one_basis(12, LevelOneBasis::EisensteinOnly), vec![(3, 0, 0), (0, 2, 0)]);
    assert_eq!(level_one_basis(12, LevelOneBasis::DeltaPowers), vec![(3, 0, 0), (0, 0, 1)]);
    assert_eq!(level_one_basis(2, LevelOneBasis::DeltaPowers), vec![]);
    assert_eq!(level_one_basis(26, LevelOneBasis::DeltaPowers).len(), 2);
}

#[test]
fn membership_in_weight_twelve() {
    let prec = 6;
    let f = &delta(prec).scale(&int(3)) + &eisenstein(12, prec).unwrap();
    let m = level_one_membership(&f, 12, LevelOneBasis::DeltaPowers).unwrap();
    assert!(m.is_member());
    let e12 = eisenstein(12, prec).unwrap();
    let mut not = e12.clone();
    not.add_term(vec![5], int(1));
    assert!(!level_one_membership(&not, 12, LevelOneBasis::DeltaPowers).unwrap().is_member());
}

use omfq::classical::{delta, phi_10_1};
use omfq::lattice::{orthogonal_complement, GramLattice, SublatticeSplit};
use omfq::lift::gritsenko_lift;
use omfq::ortho::*;
use omfq::{int, Error, Rational};

fn psi10() -> OrthoFormExpansion {
    let phi = phi_10_1(5).unwrap();
    gritsenko_lift(&phi, &ConeRegion::new(vec![int(1), int(1), int(0)], int(4))).unwrap()
}

#[test]
fn second_pullback_to_the_diagonal_is_delta_squared() {
    let f = psi10();
    let d = delta(3);
    for n in [0, 1] {
        let (p, _) = pullback_heegner(&f, &[0, 0, 1], n).unwrap();
        assert!(p.is_zero(), "P{n} should vanish");
    }
    let (p, report) = pullback_heegner(&f, &[0, 0, 1], 2).unwrap();
    assert!(report.omitted.is_empty());
    assert_eq!(p.weight(), &int(12));
    assert_eq!(p.lattice().gram(), &vec![vec![0, 1], vec![1, 0]]);
    for a in 1..=3 {
        for b in 1..=(4 - a) {
            let want = int(20) * d.coeff(&[a]) * d.coeff(&[b]);
            assert_eq!(p.coeff(&[int(a), int(b)]), want, "({a}, {b})");
        }
    }
}

#[test]
fn quasi_pullback_differs_by_the_constant() {
    let f = psi10();
    let q = quasi_pullback(&f, &[0, 0, 1], 2).unwrap();
    let (p, _) = pullback_heegner(&f, &[0, 0, 1], 2).unwrap();
    let c = quasi_pullback_constant(f.weight(), 3, 2);
    assert_eq!(c, int(20));
    assert_eq!(q.scale(&c), p);
    assert_eq!(q.coeff(&[int(1), int(1)]), int(1));
    assert!(matches!(quasi_pullback(&f, &[0, 0, 1], 3), Err(Error::NotVanishing(_))));
}

#[test]
fn divisor_must_be_negative_norm() {
    let f = psi10();
    assert!(pullback_heegner(&f, &[1, 0, 0], 1).is_err());
    assert!(pullback_heegner(&f, &[1, 1, 0], 1).is_err());
}

#[test]
fn heegner_pullback_is_a_rank_one_cycle_pullback() {
    let f = psi10();
    let lam = vec![0, 0, 1];
    let perp = orthogonal_complement(f.lattice(), &vec![lam.clone()]).unwrap();
    let split = SublatticeSplit::new(f.lattice(), perp.complement, vec![lam]).unwrap();
    for n in 0..4u32 {
        let (t, _) = pullback_cycle(&f, &split, n).unwrap();
        let (p, _) = pullback_heegner(&f, &[0, 0, 1], n).unwrap();
        let idx = vec![0; n as usize];
        assert_eq!(t.component(&idx).unwrap(), p, "order {n}");
    }
}

#[test]
fn cusp_support_and_weights() {
    let f = psi10();
    assert!(f.is_cusp() && f.has_cusp_support());
    for n in 0..4u32 {
        let (p, _) = pullback_heegner(&f, &[0, 0, 1], n).unwrap();
        assert_eq!(p.weight(), &int(10 + n as i64));
        assert!(p.has_cusp_support());
    }
    assert_eq!(heegner_parameter(&int(10), 3), int(9));
}

#[test]
fn sums_and_truncation() {
    let f = psi10();
    let g = f.try_add(&f.scale(&int(-1))).unwrap();
    assert!(g.is_zero());
    let t = f.truncate(&int(2));
    assert!(t.coeffs().keys().all(|x| t.region().height(t.lattice(), x) <= int(2)));
    assert!(t.coeffs().len() < f.coeffs().len());
    let other = GramLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
    let z = OrthoFormExpansion::zero(other, int(10), ConeRegion::new(vec![int(1), int(1)], int(2))).unwrap();
    assert!(f.try_add(&z).is_err());
}

#[test]
fn kernel_is_the_rescaled_gegenbauer_polynomial() {
    let s: Rational = int(9);
    assert_eq!(heegner_kernel(2, &s, &int(1), &int(1)), int(10 - 2));
}

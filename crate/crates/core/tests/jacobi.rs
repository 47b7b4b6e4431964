use omfq::classical::{delta, phi_10_1, phi_m2_1};
use omfq::jacobi::*;
use omfq::lattice::{discriminant_group, GramLattice};
use omfq::lift::gritsenko_lift;
use omfq::ortho::ConeRegion;
use omfq::verify::{relations_hold, small_even_lattices};
use omfq::weil::*;
use omfq::{int, rat};

#[test]
fn theta_decomposition_round_trips() {
    for phi in [phi_10_1(4).unwrap(), phi_m2_1(4).unwrap()] {
        let f = theta_decompose(&phi).unwrap();
        assert_eq!(f.group().order(), 2);
        let back = theta_recompose(&f, phi.index()).unwrap();
        // the vector-valued bound drops by the shortest coset norm, 1/4
        assert_eq!(back.bound(), &rat(15, 4));
        assert_eq!(back.coeffs(), phi.truncate(back.bound()).coeffs());
        assert_eq!(back.weight(), phi.weight());
    }
}

#[test]
fn theta_components_of_phi_10_1() {
    let f = theta_decompose(&phi_10_1(3).unwrap()).unwrap();
    let g = f.group();
    let zero = g.zero();
    let half = g.elements().iter().find(|c| **c != zero).unwrap().clone();
    // h_1 has q^{3/4} leading coefficient 1, h_0 has q^1 leading coefficient -2
    assert_eq!(f.coeff(&half, &rat(3, 4)), int(1));
    assert_eq!(f.coeff(&zero, &int(1)), int(-2));
    assert_eq!(f.coeff(&zero, &int(0)), int(0));
}

#[test]
fn second_development_coefficient_of_phi_10_1() {
    let phi = phi_10_1(4).unwrap();
    assert!(dev_coeff(&phi, 0).unwrap().coeffs.is_empty());
    assert!(dev_coeff(&phi, 1).unwrap().coeffs.is_empty());
    let d2 = dev_coeff(&phi, 2).unwrap();
    assert_eq!(d2.weight, int(12));
    let vals = d2.evaluate(&[vec![int(1)], vec![int(1)]]).unwrap();
    let d = delta(4);
    for n in 1..=4 {
        assert_eq!(vals.get(&int(n)).cloned().unwrap_or_default(), int(20) * d.coeff(&[n]), "q^{n}");
    }
}

#[test]
fn first_fourier_jacobi_coefficient_of_the_lift() {
    let phi = phi_10_1(5).unwrap();
    let psi = gritsenko_lift(&phi, &ConeRegion::new(vec![int(1), int(1), int(0)], int(4))).unwrap();
    let fj = fourier_jacobi(&psi).unwrap();
    let (b, first) = &fj[0];
    assert_eq!(*b, 1);
    assert_eq!(first.weight(), &int(10));
    for ((n, r), c) in first.coeffs() {
        assert_eq!(&phi.coeff(n, r), c, "q^{n} at {r:?}");
    }
    assert!(fourier_jacobi_zero(&psi).unwrap().is_empty());
}

#[test]
fn cyclotomic_arithmetic() {
    let z = CyclotomicNumber::zeta(8, 1);
    let mut p = CyclotomicNumber::one(8);
    for _ in 0..4 {
        p = &p * &z;
    }
    assert_eq!(p, -&CyclotomicNumber::one(8));
    assert_eq!(CyclotomicNumber::zeta(4, 1), CyclotomicNumber::zeta(8, 2));
    assert_eq!(&z * &z.conj(), CyclotomicNumber::one(8));
    assert_eq!(CyclotomicNumber::zeta(12, 1).coords().len(), 4);
    assert!(CyclotomicNumber::e(8, &rat(1, 3)).is_err());
}

#[test]
fn weil_representation_on_a1() {
    let g = discriminant_group(&GramLattice::new(vec![vec![2]]).unwrap()).unwrap();
    let n = weil_field_order(&g);
    let i = CyclotomicNumber::zeta(4, 1).lift(n);
    let one = CyclotomicNumber::one(n);
    assert_eq!(gauss_sum(&g), &one + &i);
    let half = g.index_of(g.elements().iter().find(|c| **c != g.zero()).unwrap());
    let t = weil_matrix(&g, WeilGenerator::T).unwrap();
    assert_eq!(t[half][half], i);
    // S e_0 = (1 - i)/2 (e_0 + e_1)
    let s = weil_matrix(&g, WeilGenerator::S).unwrap();
    let c = (&one + &-&i).scale(&rat(1, 2));
    assert!(s[g.index_of(&g.zero())].iter().all(|x| *x == c));
}

#[test]
fn weil_relations_on_small_lattices() {
    for l in small_even_lattices().into_iter().take(6) {
        let g = discriminant_group(&l).unwrap();
        assert!(relations_hold(&g).unwrap(), "{:?}", l.gram());
    }
}

#[test]
fn development_weights() {
    let phi = phi_m2_1(3).unwrap();
    for n in 0..4u32 {
        let d = dev_coeff(&phi, n).unwrap();
        assert_eq!(d.weight, int(-2 + n as i64));
        assert_eq!(d.degree, n as usize);
    }
}

use omfq::lattice::*;
use omfq::linalg::{determinant, smith_left, to_rational};
use omfq::{int, rat, Error, Rational};
use proptest::prelude::*;

fn lat(g: &[&[i64]]) -> GramLattice {
    GramLattice::new(g.iter().map(|r| r.to_vec()).collect()).unwrap()
}

#[test]
fn a2_discriminant_form() {
    let l = lat(&[&[2, -1], &[-1, 2]]);
    let g = discriminant_group(&l).unwrap();
    assert_eq!(g.order(), 3);
    assert_eq!(g.level(), 3);
    let mut qs: Vec<Rational> = g.elements().iter().map(|c| g.q_value(c)).collect();
    qs.sort();
    assert_eq!(qs, vec![int(0), rat(1, 3), rat(1, 3)]);
}

#[test]
fn hyperbolic_plane_is_unimodular() {
    let g = discriminant_group(&lat(&[&[0, 1], &[1, 0]])).unwrap();
    assert_eq!(g.order(), 1);
    assert_eq!(g.level(), 1);
}

#[test]
fn d4_discriminant_is_the_klein_group() {
    let d4 = lat(&[&[2, -1, 0, 0], &[-1, 2, -1, -1], &[0, -1, 2, 0], &[0, -1, 0, 2]]);
    let g = discriminant_group(&d4).unwrap();
    assert_eq!(g.orders(), &[2, 2]);
    let nonzero: Vec<Rational> = g.elements().iter().filter(|c| **c != g.zero()).map(|c| g.q_value(c)).collect();
    assert_eq!(nonzero, vec![rat(1, 2); 3]);
}

#[test]
fn signatures() {
    assert_eq!(lat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]).signature(), (1, 2));
    assert!(lat(&[&[2, 0], &[0, -2]]).is_lorentzian());
    assert!(lat(&[&[-2, 1], &[1, -2]]).is_negative_definite());
    assert!(matches!(GramLattice::new(vec![vec![1, 0], vec![0, 2]]), Err(_)));
    assert!(matches!(discriminant_group(&lat(&[&[2, 2], &[2, 2]])), Err(Error::Degenerate(_))));
}

#[test]
fn dual_vectors_of_bounded_norm() {
    let l = lat(&[&[-2, 1], &[1, -2]]).negated();
    let xs = enumerate_dual(&l, &DualRegion::Definite { bound: rat(1, 3) }).unwrap();
    // the zero vector and the six minimal vectors of the A2 dual
    assert_eq!(xs.len(), 7);
    assert!(xs.iter().all(|x| l.is_dual(x) && l.norm(x) <= rat(1, 3)));
}

#[test]
fn cone_enumeration_stays_in_the_closed_cone() {
    let l = lat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
    let w0 = vec![int(1), int(1), int(0)];
    let xs = enumerate_dual(&l, &DualRegion::Cone { w0: w0.clone(), bound: int(3) }).unwrap();
    assert!(!xs.is_empty());
    for x in &xs {
        assert!(l.norm(x) >= int(0));
        assert!(in_closed_cone(&l, &w0, x));
        assert!(l.bilinear(x, &w0) <= int(3));
    }
    assert!(xs.contains(&vec![int(1), int(1), rat(1, 2)]));
}

#[test]
fn orthogonal_complement_is_saturated() {
    let l = lat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
    let s = orthogonal_complement(&l, &vec![vec![1, -1, 0]]).unwrap();
    assert_eq!(s.complement.len(), 2);
    for v in &s.complement {
        let v: Vec<Rational> = v.iter().map(|x| int(*x)).collect();
        assert_eq!(l.bilinear(&v, &[int(1), int(-1), int(0)]), int(0));
    }
    let k = s.complement_lattice();
    assert_eq!(k.signature(), (1, 1));
}

#[test]
fn split_projections_add_up() {
    let l = lat(&[&[2, 1, 0], &[1, -2, 0], &[0, 0, -2]]);
    let s = SublatticeSplit::new(&l, vec![vec![1, 0, 0], vec![0, 1, 0]], vec![vec![0, 0, 1]]).unwrap();
    let x = vec![rat(1, 5), rat(2, 5), rat(1, 2)];
    let a = s.sub_to_ambient(&s.sub_coords(&x));
    let b = s.complement_to_ambient(&s.complement_coords(&x));
    let sum: Vec<Rational> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
    assert_eq!(sum, x);
    assert!(SublatticeSplit::new(&l, vec![vec![1, 0, 0]], vec![vec![0, 1, 0]]).is_err());
}

fn arb_gram() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (prop::collection::vec(-3i64..=3, 3), prop::collection::vec(-4i64..=4, 3)).prop_map(|(off, diag)| {
        vec![
            vec![2 * diag[0], off[0], off[1]],
            vec![off[0], 2 * diag[1], off[2]],
            vec![off[1], off[2], 2 * diag[2]],
        ]
    })
}

proptest! {
    #[test]
    fn group_order_is_the_determinant(g in arb_gram()) {
        let det = determinant(&to_rational(&g));
        prop_assume!(det != int(0));
        let l = GramLattice::new(g.clone()).unwrap();
        let d = discriminant_group(&l).unwrap();
        prop_assert_eq!(int(d.order() as i64), num_traits::Signed::abs(&det));
        let (diag, _) = smith_left(&g);
        for w in diag.windows(2) {
            prop_assert!(w[0] == 0 || w[1] % w[0] == 0);
        }
    }

    #[test]
    fn quadratic_form_is_well_defined(g in arb_gram(), i in 0usize..64, j in 0usize..64) {
        prop_assume!(determinant(&to_rational(&g)) != int(0));
        let l = GramLattice::new(g).unwrap();
        let d = discriminant_group(&l).unwrap();
        let (a, b) = (&d.elements()[i % d.order()], &d.elements()[j % d.order()]);
        let s = d.add(a, b);
        // Q(a + b) = Q(a) + Q(b) + <a, b> mod 1
        prop_assert_eq!(d.q_value(&s), frac(&(d.q_value(a) + d.q_value(b) + d.b_value(a, b))));
        prop_assert_eq!(d.b_value(a, b), d.b_value(b, a));
        prop_assert_eq!(d.add(a, &d.neg(a)), d.zero());
        // classes are stable under adding lattice vectors
        let x = d.representative(a);
        let mut y = x.clone();
        y[0] += int(1);
        prop_assert_eq!(d.class_of(&y), d.class_of(&x));
        prop_assert_eq!(d.q_value(a), frac(&l.norm(&x)));
    }
}

use omfq::classical::phi_10_1;
use omfq::lift::gritsenko_lift;
use omfq::ortho::ConeRegion;
use omfq::{int, rat, Rational};

fn siegel_index(t1: i64, t2: i64, t3: i64) -> Vec<Rational> {
    vec![int(t3), int(t1), rat(-t2, 2)]
}

#[test]
fn psi10_leading_block() {
    let phi = phi_10_1(3).unwrap();
    let psi = gritsenko_lift(&phi, &ConeRegion::new(vec![int(1), int(1), int(0)], int(3))).unwrap();
    let a = |t1, t2, t3| psi.coeff(&siegel_index(t1, t2, t3));
    assert_eq!((a(1, 1, 1), a(1, 0, 1), a(1, -1, 1)), (int(1), int(-2), int(1)));
    assert_eq!((a(2, 2, 1), a(2, 1, 1), a(2, 0, 1)), (int(-2), int(-16), int(36)));
    assert_eq!(a(1, 2, 2), a(2, 2, 1));
    assert_eq!(a(1, 1, 2), int(-16));
}

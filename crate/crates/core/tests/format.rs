use omfq::classical::{delta, phi_10_1};
use omfq::format::{emit, parse, Expansion};
use omfq::jacobi::theta_decompose;
use omfq::lift::gritsenko_lift;
use omfq::ortho::ConeRegion;
use omfq::special::igusa_psi35_seed;
use omfq::{int, Error};

fn round_trip(x: Expansion) {
    let text = emit(&x);
    let back = parse(&text).unwrap();
    assert_eq!(back, x, "{}", x.kind());
    assert_eq!(emit(&back), text);
}

#[test]
fn every_kind_round_trips() {
    round_trip(Expansion::Series { weight: int(12), series: delta(6) });
    let phi = phi_10_1(4).unwrap();
    round_trip(Expansion::Vvmf(theta_decompose(&phi).unwrap()));
    let lift = gritsenko_lift(&phi, &ConeRegion::new(vec![int(1), int(1), int(0)], int(3))).unwrap();
    round_trip(Expansion::Ortho(lift));
    round_trip(Expansion::Jacobi(phi));
    round_trip(Expansion::Siegel(igusa_psi35_seed().unwrap()));
}

const DELTA: &str = "omfq v1\nkind series\nweight 12\nvariables 1\ndenominator 1\ntruncation 1 <= 3\ncoeff 1 1\ncoeff 2 -24\ncoeff 3 252\n";

#[test]
fn reads_a_hand_written_series() {
    let Expansion::Series { weight, series } = parse(DELTA).unwrap() else { panic!("wrong kind") };
    assert_eq!(weight, int(12));
    assert_eq!(series, delta(3));
}

#[test]
fn header_only_is_the_zero_form() {
    let text = "omfq v1\nkind series\nweight 4\nvariables 1\ndenominator 1\ntruncation 1 <= 5\n";
    let Expansion::Series { series, .. } = parse(text).unwrap() else { panic!("wrong kind") };
    assert!(series.is_zero());
    assert!(series.contains(&[5]));
}

fn line_of(text: &str) -> usize {
    match parse(text) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn errors_carry_line_numbers() {
    assert_eq!(line_of(&DELTA.replace("coeff 3 252", "coeff 2 252")), 9);
    assert_eq!(line_of(&DELTA.replace("coeff 2 -24", "coeff 2 0")), 8);
    assert_eq!(line_of(&format!("{DELTA}weight 4\n")), 10);
    assert_eq!(line_of(&DELTA.replace("kind series", "kind hilbert")), 9);
    assert_eq!(line_of(&DELTA.replace("omfq v1", "omfq v2")), 1);
    assert_eq!(line_of(&DELTA.replace("coeff 3 252", "coeff 3 x")), 9);
    assert_eq!(line_of(&DELTA.replace("denominator 1", "denominator 0")), 5);
    assert_eq!(line_of(""), 1);
}

#[test]
fn coefficients_outside_the_truncation_are_rejected() {
    assert!(parse(&DELTA.replace("coeff 3 252", "coeff 4 252")).is_err());
    assert!(parse(&DELTA.replace("coeff 3 252", "coeff 3 1 252")).is_err());
}

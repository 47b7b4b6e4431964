use omfq::classical::{eta_power, level_one_membership, phi_10_1, LevelOneBasis};
use omfq::format::{emit, parse, Expansion};
use omfq::gegenbauer::multi_indices;
use omfq::lattice::{orthogonal_complement, SublatticeSplit};
use omfq::lift::gritsenko_lift;
use omfq::ortho::{heegner_split_for, pullback_cycle, pullback_heegner, pullback_meromorphic, ConeRegion, Normalization};
use omfq::special::*;
use omfq::series::Constraint;
use omfq::{int, rat, Error, LaurentSeries, Rational, TruncationRegion};

fn psi10(bound: i64) -> SiegelExpansion {
    let phi = phi_10_1(bound * bound / 4 + 1).unwrap();
    let lift = gritsenko_lift(&phi, &ConeRegion::new(vec![int(1), int(1), int(0)], int(bound))).unwrap();
    SiegelExpansion::from_ortho(&lift).unwrap()
}

#[test]
fn psi35_seed_transcription() {
    let f = igusa_psi35_seed().unwrap();
    assert_eq!(f.weight, 35);
    assert_eq!(f.bound, 7);
    assert_eq!(f.coeffs().len(), 32);
    assert_eq!(f.coeff(3, 1, 2), int(1));
    assert_eq!(f.coeff(2, 1, 3), int(-1));
    assert_eq!(f.coeff(4, 1, 3), int(-129421));
    assert_eq!(f.coeff(3, 2, 4), int(32384));
    assert_eq!(f.swap_sign(), Some(-1));
    for (&(t1, t2, t3), c) in f.coeffs() {
        assert!(4 * t1 * t3 > t2 * t2, "c({t1},{t2},{t3}) is not on a positive definite index");
        assert_eq!(&f.coeff(t1, -t2, t3), &-c, "odd in t2 at ({t1},{t2},{t3})");
    }
}

#[test]
fn psi35_first_fourier_jacobi_matches_eta_theta() {
    let f = igusa_psi35_seed().unwrap();
    // eta^69 theta(tau, 2z) with theta(tau, z) = sum_n (-4/n) q^{n^2/8} zeta^{n/2}
    let prec = 5;
    let eta = eta_power(prec, 69);
    let chi = |n: i64| match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    };
    let mut expected = std::collections::BTreeMap::new();
    for (e, c) in eta.terms() {
        for n in (-9i64..=9).filter(|n| n % 2 != 0) {
            // exponents over 24: e + 3 n^2
            let total = e[0] + 3 * n * n;
            assert_eq!(total % 24, 0);
            let a = total / 24;
            if a <= prec {
                *expected.entry((a, n)).or_insert_with(|| int(0)) += c * int(chi(n));
            }
        }
    }
    expected.retain(|_, c: &mut Rational| *c != int(0));
    let slice: std::collections::BTreeMap<(i64, i64), Rational> =
        f.coeffs().iter().filter(|((_, _, t3), _)| *t3 == 2).map(|(&(t1, t2, _), c)| ((t1, t2), c.clone())).collect();
    assert_eq!(slice, expected);
}

#[test]
fn psi35_seed_round_trips_byte_for_byte() {
    let x = parse(PSI35_SEED).unwrap();
    assert_eq!(emit(&x), PSI35_SEED);
}

#[test]
fn psi10_mixed_curve_pullback_matches_lattice_route() {
    let f = psi10(6);
    let a = sym2(1, 0, 1);
    let bs = [sym2(1, 0, -1), sym2(0, 1, 0)];
    let dirs: Vec<Vec<i64>> = bs.iter().map(|b| siegel_direction(b).unwrap()).collect();
    let l = siegel_lattice();
    let perp = orthogonal_complement(&l, &dirs).unwrap();
    assert_eq!(perp.complement, vec![vec![-1, -1, 0]]);
    let split = SublatticeSplit::new(&l, perp.complement, dirs).unwrap();
    let mut seen_nonzero = false;
    for n in 0..=3u32 {
        let (p, _) = pullback_cycle(&f.to_ortho().unwrap(), &split, n).unwrap();
        let nfact: i64 = (1..=n as i64).product();
        for idx in multi_indices(n as usize, 2) {
            let lattice = p.component(&idx).unwrap();
            let sel: Vec<Sym2> = idx.iter().map(|&i| bs[i].clone()).collect();
            let curve = siegel_curve_pullback(&f, &a, &sel).unwrap();
            for (x, c) in lattice.coeffs() {
                // coordinate along -(1, 1, 0) is -tr(TA)/2
                let e = -&x[0] * int(2);
                assert!(e.is_integer());
                let e: i64 = e.to_integer().try_into().unwrap();
                assert_eq!(c, &(curve.coeff(&[e]) * int(nfact)), "N={n} {idx:?} q^{e}");
                seen_nonzero = true;
            }
        }
    }
    assert!(seen_nonzero);
}

#[test]
fn psi35_curve_pullback_values() {
    let f = igusa_psi35_seed().unwrap();
    let a = sym2(1, 0, 1);
    let mixed = siegel_curve_pullback(&f, &a, &[sym2(1, 0, -1), sym2(0, 1, 0)]).unwrap();
    let top = LaurentSeries::from_terms(1, 1, mixed.region().clone(), [(vec![5], int(71)), (vec![6], int(-10224)), (vec![7], int(-13257972))]).unwrap();
    assert_eq!(mixed, top);
    let m = level_one_membership(&mixed, 74, LevelOneBasis::DeltaPowers).unwrap();
    assert!(m.is_member());
    for b in [sym2(1, 0, -1), sym2(0, 1, 0)] {
        assert!(siegel_curve_pullback(&f, &a, &[b.clone(), b]).unwrap().is_zero());
    }
}

#[test]
fn scalar_curve_pullback_is_the_diagonal_of_the_multilinear_one() {
    let f = igusa_psi35_seed().unwrap();
    let a = sym2(1, 0, 1);
    let b = sym2(1, 1, -1);
    for n in 0..=3u32 {
        let scalar = siegel_curve_pullback_scalar(&f, &a, n, &b).unwrap();
        let multi = siegel_curve_pullback(&f, &a, &vec![b.clone(); n as usize]).unwrap();
        let nfact: i64 = (1..=n as i64).product();
        assert_eq!(scalar, multi.scale(&int(nfact)), "N={n}");
    }
}

#[test]
fn curve_data_must_be_orthogonal() {
    let f = igusa_psi35_seed().unwrap();
    let e = siegel_curve_pullback(&f, &sym2(1, 0, 1), &[sym2(1, 0, 1)]).unwrap_err();
    assert!(matches!(e, Error::Invalid(_)));
}

#[test]
fn humbert_pullback_agrees_with_heegner_pullback() {
    let f = psi10(6);
    let ortho = f.to_ortho().unwrap();
    for (a, b, c) in [(1, 1, -1), (1, 2, -1), (1, 3, -1)] {
        let disc = b * b - 4 * a * c;
        let lambda = vec![-2 * a, -2 * c, b];
        let split = heegner_split_for(&ortho.lattice().clone(), &lambda).unwrap();
        let lam = QuadElem::rational(disc, int(a));
        let mu = QuadElem::new(disc, rat(-b, 2), rat(1, 2));
        for n in 0..=3u32 {
            let hilbert = siegel_humbert_pullback(&f, a, b, c, n).unwrap();
            let (heegner, _) = pullback_heegner(&ortho, &lambda, n).unwrap();
            assert!(!heegner.coeffs().is_empty());
            for (r, v) in heegner.coeffs() {
                let nu = split.sub_to_ambient(r);
                // nu = (t3, t1, -t2/2)
                let (t1, t2, t3) = (nu[1].clone(), &nu[2] * int(-2), nu[0].clone());
                let idx = &(&(&lam * &lam).scale(&t1) + &(&lam * &mu).scale(&t2)) + &(&mu * &mu).scale(&t3);
                assert_eq!(&hilbert.coeff(&idx), v, "D={disc} N={n} at {idx}");
            }
        }
    }
}

#[test]
fn humbert_pullback_weight() {
    let f = psi10(4);
    for n in 0..=3 {
        let h = siegel_humbert_pullback(&f, 1, 1, -1, n).unwrap();
        assert_eq!(h.weight, int(10 + n as i64));
        assert_eq!(h.d, 5);
    }
}

#[test]
fn split_discriminant_is_directed_elsewhere() {
    let f = psi10(4);
    for (a, b, c) in [(1, 0, -1), (1, 1, 0), (1, 0, 1)] {
        let e = siegel_humbert_pullback(&f, a, b, c, 0).unwrap_err();
        assert!(matches!(e, Error::Invalid(_)), "{a} {b} {c}");
    }
}

#[test]
fn diagonal_pullback_is_the_pole_free_meromorphic_pullback() {
    let f = psi10(6);
    let region = TruncationRegion::exact().with(Constraint { weights: vec![int(1), int(0), int(1)], bound: int(f.bound) });
    let series = LaurentSeries::from_terms(3, 1, region, f.coeffs().iter().map(|(&(a, b, c), v)| (vec![a, b, c], v.clone()))).unwrap();
    let quad = |e: &[Rational]| &e[0] * &e[1];
    for n in 0..=3u32 {
        let w = series.exp_substitute(1, n.max(1)).unwrap();
        let mero = pullback_meromorphic(&w, 1, &int(10), 3, 0, n, &quad, Normalization::Rescaled).unwrap();
        let diag = siegel_diagonal_pullback(&f, n);
        assert!(diag.agrees_with(&mero).unwrap(), "N={n}");
    }
    // vanishing to order two along the diagonal, and Delta x Delta as the leading term
    assert!(siegel_diagonal_pullback(&f, 0).is_zero());
    assert!(siegel_diagonal_pullback(&f, 1).is_zero());
    let p2 = siegel_diagonal_pullback(&f, 2);
    assert_eq!(p2.coeff(&[1, 1]), int(20));
    assert_eq!(p2.coeff(&[1, 2]), int(-480));
    assert_eq!(p2.coeff(&[2, 2]), int(20 * 576));
}

#[test]
fn siegel_round_trip_through_the_lattice_model() {
    let f = psi10(5);
    let g = SiegelExpansion::from_ortho(&f.to_ortho().unwrap()).unwrap();
    assert_eq!(f, g);
    assert_eq!(siegel_matrix(&siegel_index(2, -3, 4)), (2, -3, 4));
    match parse(&emit(&Expansion::Siegel(f.clone()))).unwrap() {
        Expansion::Siegel(h) => assert_eq!(h, f),
        other => panic!("parsed as {}", other.kind()),
    }
}

#[test]
fn quadratic_arithmetic() {
    let phi = QuadElem::new(5, rat(1, 2), rat(1, 2));
    assert_eq!(phi.norm(), int(-1));
    assert_eq!(phi.trace(), int(1));
    assert_eq!(&phi * &phi, &phi + &QuadElem::rational(5, int(1)));
    assert_eq!(&phi * &phi.inverse().unwrap(), QuadElem::rational(5, int(1)));
    assert!(!phi.is_totally_positive());
    assert!(phi.pow(2).is_totally_positive());
    let o = QuadraticOrder::from_disc(20).unwrap();
    assert_eq!(o.disc(), 20);
    assert!(o.contains(&QuadElem::new(5, int(0), int(1))));
    assert!(!o.contains(&phi));
    assert!(QuadraticOrder::from_disc(5).unwrap().contains(&phi));
    assert!(QuadraticOrder::from_disc(9).is_err());
    assert!(QuadraticOrder::from_disc(-4).is_err());
}

#[test]
fn cohen_operator_needs_totally_positive_lambda() {
    let f = HilbertExpansion::new(5, int(2), [(QuadElem::new(5, rat(1, 2), rat(1, 2)).pow(2), int(1))]).unwrap();
    let bad = QuadElem::new(5, int(0), int(1));
    assert!(cohen_operator(&f, 1, &bad).is_err());
    let s = cohen_operator(&f, 2, &QuadElem::rational(5, int(1))).unwrap();
    assert_eq!(s.weight, int(8));
}

#[test]
fn generating_identity_through_degree_eight() {
    for k in [int(2), rat(5, 2), int(3), rat(7, 2)] {
        let (l, r) = generating_identity_sides(&k, 8).unwrap();
        assert_eq!(l, r);
    }
}

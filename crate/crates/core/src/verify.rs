//! Self-contained verification suites with pass/fail reports.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{delta, level_one_membership, phi_10_1, phi_m2_1, LevelOneBasis, Membership};
use crate::error::Result;
use crate::gegenbauer::{classical_coefficient, coefficient, coefficient_polynomials, g_eval, g_multilinear, multi_indices, GegenbauerScalar};
use crate::jacobi::{fourier_jacobi, partial_dev_coeff, theta_decompose, theta_recompose, JacobiFormExpansion, VVMFExpansion};
use crate::lattice::{discriminant_group, enumerate_dual, in_closed_cone, orthogonal_complement, to_rational_vec, DiscriminantGroup, GramLattice, SublatticeSplit};
use crate::lift::{check_lift_commutes, gritsenko_lift};
use crate::linalg::IntMatrix;
use crate::ortho::{pullback_cycle, pullback_heegner, pullback_meromorphic, ConeRegion, Normalization, OrthoFormExpansion};
use crate::series::{fmt_rat, int, rat, rising_factorial, Constraint, LaurentSeries, Rational, TruncationRegion};
use crate::special::{cohen_gegenbauer_sides, generating_identity_sides, igusa_psi35_seed, siegel_curve_pullback, sym2, QuadElem, SiegelExpansion, Sym2};
use crate::weil::{gauss_sum, trace_map, weil_matrix, weil_field_order, CyclotomicNumber, Intertwiner, WeilGenerator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Gegenbauer,
    Weil,
    Prop56,
    Prop57,
    Prop62,
    Lemma63,
    Ex64,
    Ex65,
}

impl Suite {
    pub const ALL: [Suite; 8] =
        [Suite::Gegenbauer, Suite::Weil, Suite::Prop56, Suite::Prop57, Suite::Prop62, Suite::Lemma63, Suite::Ex64, Suite::Ex65];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gegenbauer => "gegenbauer",
            Suite::Weil => "weil",
            Suite::Prop56 => "prop56",
            Suite::Prop57 => "prop57",
            Suite::Prop62 => "prop62",
            Suite::Lemma63 => "lemma63",
            Suite::Ex64 => "ex64",
            Suite::Ex65 => "ex65",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.into(), checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{tag} {}/{}", self.suite, c.name)?;
            } else {
                writeln!(f, "{tag} {}/{}: {}", self.suite, c.name, c.detail)?;
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        write!(f, "{}: {}/{} checks passed", self.suite, passed, self.checks.len())
    }
}

pub fn run(suite: Suite) -> Result<SuiteReport> {
    match suite {
        Suite::Gegenbauer => gegenbauer_suite(),
        Suite::Weil => weil_suite(),
        Suite::Prop56 => prop56_suite(30, 0x56),
        Suite::Prop57 => prop57_suite(100, 0x57),
        Suite::Prop62 => prop62_suite(),
        Suite::Lemma63 => lemma63_suite(),
        Suite::Ex64 => Ok(run_ex64(6)?.report),
        Suite::Ex65 => Ok(run_ex65()?.report),
    }
}

fn diff_series(a: &LaurentSeries, b: &LaurentSeries) -> Result<String> {
    let d = a.try_sub(b)?;
    Ok(if d.is_zero() { String::new() } else { format!("residual {d}") })
}

// ---------------------------------------------------------------- gegenbauer

pub fn gegenbauer_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("gegenbauer");
    let top = 12u32;
    for s in [int(2), rat(5, 2), int(3), int(-13)] {
        // (1 - x t + y t^2)^{-s} in variables (x, y, t)
        let region = TruncationRegion::exact().with(Constraint { weights: vec![int(0), int(0), int(1)], bound: int(top as i64) });
        let base = LaurentSeries::from_terms(
            3,
            1,
            region,
            vec![(vec![0, 0, 0], int(1)), (vec![1, 0, 1], int(-1)), (vec![0, 1, 2], int(1))],
        )?;
        let gen = base.pow_rational(&-&s)?;
        let mut bad = Vec::new();
        for n in 0..=top {
            let c = n.div_ceil(2);
            let lead = rising_factorial(&s, c);
            let nfact = Rational::from_integer(crate::series::factorial(n));
            for n1 in 0..=n / 2 {
                let n2 = n - 2 * n1;
                let g = gen.coeff(&[n2 as i64, n1 as i64, n as i64]);
                if g != classical_coefficient(n, n1, &s) || coefficient(n, n1, &s) * &lead != &nfact * &g {
                    bad.push(format!("N={n} n1={n1}"));
                }
            }
        }
        rep.check(format!("generating function s={}", fmt_rat(&s)), bad.is_empty(), bad.join(", "));
    }

    let mut bad = Vec::new();
    for n in 0..=top {
        for (n1, p) in coefficient_polynomials(n) {
            if p.iter().any(|c| !c.is_integer()) {
                bad.push(format!("N={n} n1={n1}"));
            }
            for s in [int(-13), rat(1, 3), int(7)] {
                let v: Rational = p.iter().rev().fold(Rational::zero(), |acc, c| acc * &s + c);
                if v != coefficient(n, n1, &s) {
                    bad.push(format!("N={n} n1={n1} s={}", fmt_rat(&s)));
                }
            }
        }
    }
    rep.check("integral coefficients in Z[s]", bad.is_empty(), bad.join(", "));

    let mut bad = Vec::new();
    for n in 0..=top {
        for (a, x, y, s) in [(int(2), int(3), int(-1), rat(5, 2)), (rat(-1, 3), int(1), int(4), int(-13)), (int(5), rat(1, 2), rat(2, 7), int(3))] {
            let lhs = g_eval(n, &s, &(&a * &x), &(&a * &a * &y));
            let rhs = crate::series::pow(&a, n) * g_eval(n, &s, &x, &y);
            if lhs != rhs {
                bad.push(format!("N={n}"));
            }
        }
    }
    rep.check("homogeneity G(ax, a^2 y) = a^N G(x, y)", bad.is_empty(), bad.join(", "));

    let mut bad = Vec::new();
    let r = vec![int(1), int(-2), rat(1, 2)];
    let m = vec![vec![int(2), int(1), int(0)], vec![int(1), int(-4), int(3)], vec![int(0), int(3), rat(1, 3)]];
    let v = vec![int(2), int(1), int(-3)];
    for n in 0..=6u32 {
        let s = rat(7, 2);
        let t = g_multilinear(n, &s, &r, &m)?;
        let x: Rational = r.iter().zip(&v).map(|(a, b)| a * b).sum();
        let mut y = Rational::zero();
        for i in 0..3 {
            for j in 0..3 {
                y += &m[i][j] * &v[i] * &v[j];
            }
        }
        if t.diagonal(&v)? != g_eval(n, &s, &x, &y) || !t.is_symmetric() {
            bad.push(format!("N={n}"));
        }
    }
    rep.check("multilinear diagonal", bad.is_empty(), bad.join(", "));
    Ok(rep)
}

// ---------------------------------------------------------------- weil

/// All even Gram matrices of rank one and two with `|det| <= 8` and entries
/// bounded by 4.
pub fn small_even_lattices() -> Vec<GramLattice> {
    let mut out = Vec::new();
    for a in [-8, -6, -4, -2, 2, 4, 6, 8] {
        out.push(GramLattice::new(vec![vec![a]]).expect("even rank one"));
    }
    for a in (-4..=4).step_by(2) {
        for c in (-4..=4).step_by(2) {
            for b in -4..=4i64 {
                let det = a * c - b * b;
                if det != 0 && det.abs() <= 8 {
                    out.push(GramLattice::new(vec![vec![a, b], vec![b, c]]).expect("even rank two"));
                }
            }
        }
    }
    out
}

fn basis_vector(n: u64, len: usize, i: usize) -> Vec<CyclotomicNumber> {
    (0..len).map(|j| if i == j { CyclotomicNumber::one(n) } else { CyclotomicNumber::zero(n) }).collect()
}

/// `sum_i v_i cols[i]`.
fn apply(cols: &[Vec<CyclotomicNumber>], v: &[CyclotomicNumber], zero: &CyclotomicNumber) -> Vec<CyclotomicNumber> {
    let mut out = vec![zero.clone(); cols.first().map_or(0, Vec::len)];
    for (c, x) in cols.iter().zip(v).filter(|(_, x)| !x.is_zero()) {
        for (o, m) in out.iter_mut().zip(c) {
            if !m.is_zero() {
                *o = &*o + &(m * x);
            }
        }
    }
    out
}

fn twist(g: &DiscriminantGroup, quarters: i64) -> Result<CyclotomicNumber> {
    let (p, q) = g.lattice().signature();
    CyclotomicNumber::e(weil_field_order(g), &rat(quarters * (p as i64 - q as i64), 4))
}

/// `(ST)^3 = S^2`, `S^2 e_g = e(-sig/4) e_{-g}` and Milgram's formula.
pub fn relations_hold(g: &DiscriminantGroup) -> Result<bool> {
    let n = weil_field_order(g);
    let zero = CyclotomicNumber::zero(n);
    let gs = gauss_sum(g);
    if &gs * &gs != twist(g, 1)?.scale(&int(g.order() as i64)) {
        return Ok(false);
    }
    let s = weil_matrix(g, WeilGenerator::S)?;
    let t = weil_matrix(g, WeilGenerator::T)?;
    let back = twist(g, -1)?;
    for i in 0..g.order() {
        let e = basis_vector(n, g.order(), i);
        let s2 = apply(&s, &s[i], &zero);
        let mut w = e;
        for _ in 0..3 {
            w = apply(&s, &apply(&t, &w, &zero), &zero);
        }
        if w != s2 {
            return Ok(false);
        }
        let neg = g.index_of(&g.neg(&g.elements()[i]));
        let expect: Vec<CyclotomicNumber> = basis_vector(n, g.order(), neg).iter().map(|x| x * &back).collect();
        if s2 != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn intertwines(l: &GramLattice, basis: IntMatrix) -> Result<bool> {
    let tw = Intertwiner::new(l, basis)?;
    let (big, small) = (tw.big(), tw.small());
    let nb = weil_field_order(big);
    let ns = weil_field_order(small);
    let zero = CyclotomicNumber::zero(1);
    for gen in [WeilGenerator::S, WeilGenerator::T] {
        let (cb, cs) = (weil_matrix(big, gen)?, weil_matrix(small, gen)?);
        for i in 0..big.order() {
            let lhs = tw.down(&cb[i], &zero);
            let rhs = apply(&cs, &tw.down(&basis_vector(nb, big.order(), i), &zero), &zero);
            if lhs != rhs {
                return Ok(false);
            }
        }
        for j in 0..small.order() {
            let lhs = tw.up(&cs[j], &zero, |a, b| a + b);
            let rhs = apply(&cb, &tw.up(&basis_vector(ns, small.order(), j), &zero, |a, b| a + b), &zero);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Equivariance of the trace `C[L + Lambda + Lambda(-1)] -> C[L]`.
///
/// The generators act factorwise, so on `e_b (x) e_g (x) e_d` the identity
/// reduces to the contraction of the `Lambda` and `Lambda(-1)` columns
/// reproducing `[g = d]`.
pub fn trace_equivariant(l: &GramLattice, lam: &GramLattice) -> Result<bool> {
    let gl = discriminant_group(l)?;
    let ga = discriminant_group(lam)?;
    let gn = discriminant_group(&lam.negated())?;
    let zero = CyclotomicNumber::zero(1);
    let one = CyclotomicNumber::one(1);
    let ident: Vec<usize> = gn.elements().iter().map(|d| ga.index_of(&ga.class_of(&gn.representative(d)))).collect();
    for gen in [WeilGenerator::S, WeilGenerator::T] {
        let (cg, cd) = (weil_matrix(&ga, gen)?, weil_matrix(&gn, gen)?);
        for g in 0..ga.order() {
            for d in 0..gn.order() {
                let mut x: BTreeMap<(usize, usize, usize), CyclotomicNumber> = BTreeMap::new();
                for (k, xd) in cd[d].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    let xg = &cg[g][ident[k]];
                    if !xg.is_zero() {
                        x.insert((0, ident[k], k), xg * xd);
                    }
                }
                let lhs = trace_map(&gl, &ga, &gn, &x, &zero, |a, b| a + b);
                let mut e = BTreeMap::new();
                e.insert((0, g, d), one.clone());
                let rhs = trace_map(&gl, &ga, &gn, &e, &zero, |a, b| a + b);
                if lhs.iter().zip(&rhs).any(|(a, b)| a != b) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn weil_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("weil");
    let family = small_even_lattices();
    let mut bad = Vec::new();
    for l in &family {
        if !relations_hold(&discriminant_group(l)?)? {
            bad.push(format!("{:?}", l.gram()));
        }
    }
    rep.check(format!("(ST)^3 = S^2 and Milgram on {} lattices", family.len()), bad.is_empty(), bad.join(" "));

    let rank1: Vec<IntMatrix> = vec![vec![vec![1]], vec![vec![2]]];
    let rank2: Vec<IntMatrix> = vec![
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, 0], vec![0, 1]],
        vec![vec![1, 0], vec![0, 2]],
        vec![vec![2, 0], vec![0, 2]],
        vec![vec![1, 1], vec![0, 2]],
    ];
    let mut bad = Vec::new();
    let mut count = 0;
    for l in &family {
        let bases = if l.dim() == 1 { &rank1 } else { &rank2 };
        for b in bases {
            count += 1;
            if !intertwines(l, b.clone())? {
                bad.push(format!("{:?} in {:?}", b, l.gram()));
            }
        }
    }
    rep.check(format!("intertwining on {count} sublattices"), bad.is_empty(), bad.join(" "));

    let small = [GramLattice::new(vec![vec![2]])?, GramLattice::new(vec![vec![-4]])?];
    let mut bad = Vec::new();
    for lam in &family {
        for l in &small {
            if !trace_equivariant(l, lam)? {
                bad.push(format!("{:?} with {:?}", l.gram(), lam.gram()));
            }
        }
    }
    rep.check(format!("trace equivariance on {} pairs", family.len() * small.len()), bad.is_empty(), bad.join(" "));

    let mut bad = Vec::new();
    for phi in [phi_10_1(5)?, phi_m2_1(5)?] {
        let vv = theta_decompose(&phi)?;
        let back = theta_recompose(&vv, phi.index())?;
        let expect = phi.truncate(back.bound());
        if back.coeffs() != expect.coeffs() || back.weight() != phi.weight() {
            bad.push(format!("weight {}", fmt_rat(phi.weight())));
        }
    }
    rep.check("theta decomposition round trip", bad.is_empty(), bad.join(", "));
    Ok(rep)
}

// ---------------------------------------------------------------- pullbacks and lifts

fn random_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    let v: i64 = rng.gen_range(-5..=5);
    if rng.gen_bool(0.3) {
        rat(v, rng.gen_range(1..=3))
    } else {
        int(v)
    }
}

/// A random expansion supported on the closed positive cone.
pub fn random_ortho(rng: &mut ChaCha8Rng, lat: &GramLattice, region: &ConeRegion, weight: Rational) -> Result<OrthoFormExpansion> {
    let mut terms = Vec::new();
    for nu in enumerate_dual(lat, &region.to_dual_region())? {
        if in_closed_cone(lat, &region.w0, &nu) && rng.gen_bool(0.6) {
            terms.push((nu, random_coefficient(rng)));
        }
    }
    OrthoFormExpansion::new(lat.clone(), weight, region.clone(), false, terms)
}

/// Random cusp-supported vector-valued coefficients (`0 < n <= bound`).
pub fn random_vvmf(rng: &mut ChaCha8Rng, lat: &GramLattice, weight: Rational, bound: &Rational) -> Result<VVMFExpansion> {
    let g = discriminant_group(lat)?;
    let mut terms = Vec::new();
    for gamma in g.elements() {
        let q = g.q_value(gamma);
        let mut n = &q - (&q).floor();
        if n.is_zero() {
            n = int(1);
        }
        while &n <= bound {
            if rng.gen_bool(0.7) {
                terms.push(((gamma.clone(), n.clone()), random_coefficient(rng)));
            }
            n += int(1);
        }
    }
    VVMFExpansion::with_group(g, weight, bound.clone(), terms)
}

fn prop56_case(rng: &mut ChaCha8Rng) -> Result<(String, usize, Vec<String>)> {
    let ls: [[[i64; 2]; 2]; 5] = [[[2, 0], [0, 2]], [[2, 1], [1, 2]], [[2, 1], [1, 4]], [[2, 0], [0, 4]], [[4, 1], [1, 2]]];
    let lg = ls[rng.gen_range(0..ls.len())];
    let l = GramLattice::new(lg.iter().map(|r| r.to_vec()).collect())?;
    let ks: [[i64; 2]; 5] = [[1, 0], [0, 1], [1, 1], [1, -1], [2, 1]];
    let k = ks[rng.gen_range(0..ks.len())];
    let lsplit = orthogonal_complement(&l, &vec![k.to_vec()])?;
    let kperp = lsplit.complement[0].clone();
    let lam = crate::lift::gritsenko_lattice(&l)?;
    let pad = |v: &[i64]| -> Vec<i64> {
        let mut x = vec![0, 0];
        x.extend(v);
        x
    };
    let split = SublatticeSplit::new(&lam, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], pad(&k)], vec![pad(&kperp)])?;
    let region = ConeRegion::new(vec![int(1), int(1), int(0), int(0)], int(4));
    let weight = int(rng.gen_range(4..=12));
    let f = random_ortho(rng, &lam, &region, weight)?;
    let n = rng.gen_range(0..=3u32);
    let label = format!("L={lg:?} K={k:?} N={n}");
    let (pb, _) = pullback_cycle(&f, &split, n)?;
    let fj_f: BTreeMap<i64, JacobiFormExpansion> = fourier_jacobi(&f)?.into_iter().collect();
    let mut diffs = Vec::new();
    let mut compared = 0;
    for idx in multi_indices(n as usize, 1) {
        let comp = pb.component(&idx)?;
        for (b, phi) in fourier_jacobi(&comp)? {
            let Some(src) = fj_f.get(&b) else { continue };
            let dev = partial_dev_coeff(src, &vec![k.to_vec()], n)?.component(&idx)?;
            let top = phi.bound().clone().min(dev.bound().clone());
            let (x, y) = (phi.truncate(&top), dev.truncate(&top));
            compared += x.coeffs().len();
            if x.coeffs() != y.coeffs() {
                let keys: std::collections::BTreeSet<_> = x.coeffs().keys().chain(y.coeffs().keys()).cloned().collect();
                for key in keys {
                    let (a, c) = (x.coeff(&key.0, &key.1), y.coeff(&key.0, &key.1));
                    if a != c {
                        diffs.push(format!("b={b} n={} r={:?}: {} vs {}", fmt_rat(&key.0), key.1.iter().map(fmt_rat).collect::<Vec<_>>(), fmt_rat(&a), fmt_rat(&c)));
                    }
                }
            }
        }
    }
    Ok((label, compared, diffs))
}

pub fn prop56_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("prop56");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let (label, compared, diffs) = prop56_case(&mut rng)?;
        let detail = if diffs.is_empty() {
            format!("{compared} nonzero coefficients")
        } else {
            diffs.into_iter().take(5).collect::<Vec<_>>().join("; ")
        };
        rep.check(format!("trial {t} ({label})"), compared > 0 && detail.ends_with("coefficients"), detail);
    }
    Ok(rep)
}

struct LiftCase {
    gram: IntMatrix,
    sub: IntMatrix,
    complement: IntMatrix,
    w0: Vec<i64>,
}

fn lift_cases() -> Vec<LiftCase> {
    let case = |gram: IntMatrix, sub: IntMatrix, complement: IntMatrix, w0: Vec<i64>| LiftCase { gram, sub, complement, w0 };
    let mut out = Vec::new();
    for a in [2, 4, 6] {
        for c in [2, 4, 6] {
            out.push(case(vec![vec![a, 0], vec![0, -c]], vec![vec![1, 0]], vec![vec![0, 1]], vec![1, 0]));
        }
    }
    out.push(case(vec![vec![0, 1], vec![1, 0]], vec![vec![1, 1]], vec![vec![1, -1]], vec![1, 1]));
    for c in [2, 4] {
        out.push(case(
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -c]],
            vec![vec![1, 0, 0], vec![0, 1, 0]],
            vec![vec![0, 0, 1]],
            vec![1, 1, 0],
        ));
    }
    out.push(case(vec![vec![2, 0, 0], vec![0, -2, 0], vec![0, 0, -2]], vec![vec![1, 0, 0]], vec![vec![0, 1, 0], vec![0, 0, 1]], vec![1, 0, 0]));
    out.push(case(vec![vec![4, 0, 0], vec![0, -2, 1], vec![0, 1, -2]], vec![vec![1, 0, 0]], vec![vec![0, 1, 0], vec![0, 0, 1]], vec![1, 0, 0]));
    out.push(case(
        vec![vec![2, 1, 0], vec![1, -2, 0], vec![0, 0, -2]],
        vec![vec![1, 0, 0], vec![0, 1, 0]],
        vec![vec![0, 0, 1]],
        vec![1, 0, 0],
    ));
    out
}

fn max_norm(l: &GramLattice, region: &ConeRegion) -> Result<Rational> {
    Ok(enumerate_dual(l, &region.to_dual_region())?.iter().map(|x| l.norm(x)).max().unwrap_or_else(Rational::zero))
}

pub fn prop57_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("prop57");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = lift_cases();
    let mut live = [false; 4];
    for t in 0..trials {
        let c = &cases[rng.gen_range(0..cases.len())];
        let lat = GramLattice::new(c.gram.clone())?;
        let split = SublatticeSplit::new(&lat, c.sub.clone(), c.complement.clone())?;
        let region = ConeRegion::new(to_rational_vec(&c.w0), int(6));
        let sub_region = ConeRegion::new(split.sub_coords(&region.w0), int(6));
        let bound = max_norm(&lat, &region)?.max(max_norm(split.sub_lattice(), &sub_region)?);
        // weight k + 1 - dim/2 with k integral
        let k = rng.gen_range(3..=10);
        let weight = int(k + 1) - rat(lat.dim() as i64, 2);
        let f = random_vvmf(&mut rng, &lat, weight, &bound)?;
        let n = (t % 4) as u32;
        let report = check_lift_commutes(&f, &split, n, &region)?;
        let detail = if report.is_ok() {
            format!("{} coefficients, {} nonzero", report.compared, report.nonzero)
        } else {
            report
                .diffs
                .iter()
                .take(5)
                .map(|d| format!("{:?}@{:?}: {} vs {}", d.component, d.index.iter().map(fmt_rat).collect::<Vec<_>>(), fmt_rat(&d.pullback_of_lift), fmt_rat(&d.lift_of_development)))
                .collect::<Vec<_>>()
                .join("; ")
        };
        live[n as usize] |= report.nonzero > 0;
        rep.check(format!("trial {t} gram={:?} N={n}", c.gram), report.is_ok(), detail);
    }
    let dead: Vec<String> = (0..4).filter(|n| !live[*n]).map(|n| n.to_string()).collect();
    rep.check("every order N <= 3 meets nonzero coefficients", dead.is_empty(), dead.join(", "));
    Ok(rep)
}

// ---------------------------------------------------------------- hilbert and siegel

pub fn prop62_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("prop62");
    let q = |a: Rational, b: Rational| QuadElem::new(5, a, b);
    let pairs = [
        (q(int(1), int(0)), q(int(0), int(1))),
        (q(rat(3, 2), rat(1, 2)), q(rat(5, 2), rat(3, 2))),
        (q(int(2), int(0)), q(int(0), int(3))),
    ];
    let nus: Vec<QuadElem> = (-3..=3).flat_map(|a| (-2..=2).map(move |b| (a, b))).map(|(a, b)| q(rat(a, 2), rat(b, 2))).filter(|x| (&x.a + &x.b).is_integer()).collect();
    for (lambda, mu) in &pairs {
        let mut bad = Vec::new();
        let mut count = 0;
        for k in 4..=12 {
            for n in 0..=4u32 {
                for nu in &nus {
                    count += 1;
                    let (lhs, rhs) = cohen_gegenbauer_sides(&int(k), n, lambda, mu, nu)?;
                    if lhs != rhs {
                        bad.push(format!("k={k} N={n} nu={nu}: {lhs} vs {rhs}"));
                    }
                }
            }
        }
        rep.check(format!("lambda={lambda} mu={mu}, {count} samples"), bad.is_empty(), bad.into_iter().take(3).collect::<Vec<_>>().join("; "));
    }
    Ok(rep)
}

pub fn lemma63_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("lemma63");
    for k in [int(2), rat(5, 2), int(3), rat(7, 2)] {
        let (lhs, rhs) = generating_identity_sides(&k, 8)?;
        let d = diff_series(&lhs, &rhs)?;
        rep.check(format!("k={} through degree 8", fmt_rat(&k)), d.is_empty(), d);
    }
    Ok(rep)
}

pub struct Ex64 {
    pub psi10: SiegelExpansion,
    pub pullbacks: BTreeMap<u32, LaurentSeries>,
    pub report: SuiteReport,
}

fn as_series(f: &SiegelExpansion) -> Result<LaurentSeries> {
    let region = TruncationRegion::exact().with(Constraint { weights: vec![int(1), int(0), int(1)], bound: int(f.bound) });
    LaurentSeries::from_terms(3, 1, region, f.coeffs().iter().map(|(&(a, b, c), v)| (vec![a, b, c], v.clone())))
}

/// Weight -10 meromorphic form `w^2 / Psi_10` on the diagonal: builds
/// `Psi_10` as a Gritsenko lift, expands in `w` with `r = exp(w)`, and
/// pulls back with pretend weight `-12` on a lattice of dimension 3.
pub fn run_ex64(prec: i64) -> Result<Ex64> {
    let mut rep = SuiteReport::new("ex64");
    let phi = phi_10_1(prec * prec / 4 + 1)?;
    let lift = gritsenko_lift(&phi, &ConeRegion::new(vec![int(1), int(1), int(0)], int(prec)))?;
    let psi10 = SiegelExpansion::from_ortho(&lift)?;
    let block = [((1, 1, 1), 1), ((1, 0, 1), -2), ((1, -1, 1), 1), ((2, 2, 1), -2), ((2, 1, 1), -16), ((2, 0, 1), 36), ((2, -1, 1), -16), ((2, -2, 1), -2)];
    let bad: Vec<String> = block
        .iter()
        .flat_map(|&((a, b, c), v)| [(a, b, c), (c, b, a)].map(|t| (t, v)))
        .filter(|&((a, b, c), v)| psi10.coeff(a, b, c) != int(v))
        .map(|((a, b, c), v)| format!("c({a},{b},{c}) = {} (expected {v})", fmt_rat(&psi10.coeff(a, b, c))))
        .collect();
    rep.check("Psi10 leading block q1 q2 (r - 2 + 1/r)(1 - 2(r + 10 + 1/r)(q1 + q2))", bad.is_empty(), bad.join("; "));
    rep.check("Psi10 swap symmetry", psi10.swap_sign() == Some(1), "");

    let order = 5u32;
    let series = as_series(&psi10)?.exp_substitute(1, order)?;
    let inv = series.invert_unit(None)?;
    let quad = |e: &[Rational]| &e[0] * &e[1];
    let mut pullbacks = BTreeMap::new();
    for n in 0..=3u32 {
        let p = pullback_meromorphic(&inv, 1, &int(-12), 3, 2, n, &quad, Normalization::Rescaled)?;
        pullbacks.insert(n, p);
    }
    let dd = {
        let d = delta(prec + 2);
        let r = TruncationRegion::total_degree(2, int(2 * prec + 2));
        let d1 = d.map_exponents(2, r.clone(), |e| vec![e[0], 0])?;
        let d2 = d.map_exponents(2, r, |e| vec![0, e[0]])?;
        d1.try_mul(&d2)?.invert_unit(None)?
    };
    let p0 = &pullbacks[&0];
    let d = diff_series(p0, &dd)?;
    let depth = p0.region().constraints().iter().map(|c| fmt_rat(&(&c.bound + int(2)))).collect::<Vec<_>>().join(",");
    rep.check(format!("P0 = 1/(Delta(q1) Delta(q2)) through relative degree {depth}"), d.is_empty(), d);
    for n in 1..=3u32 {
        let p = &pullbacks[&n];
        rep.check(format!("P{n} = 0"), p.is_zero(), if p.is_zero() { String::new() } else { format!("{p}") });
    }
    let c28 = pullback_meromorphic(&inv, 1, &int(-12), 3, 2, 28, &quad, Normalization::Classical)?;
    rep.check("classical g_28^{-13} pullback = 0", c28.is_zero(), "");
    let nonzero = GegenbauerScalar::new(28, &int(-13)).terms.values().any(|c| !c.is_zero());
    rep.check("rescaled G_28^{-13} is not identically zero", nonzero, "");
    Ok(Ex64 { psi10, pullbacks, report: rep })
}

pub struct Ex65 {
    pub psi35: SiegelExpansion,
    pub mixed: LaurentSeries,
    pub membership: Membership,
    pub report: SuiteReport,
}

fn multisets(n: usize, items: &[Sym2]) -> Vec<Vec<Sym2>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in multisets(n - 1, &items[i..]) {
            rest.insert(0, x.clone());
            out.push(rest);
        }
    }
    out
}

pub fn run_ex65() -> Result<Ex65> {
    let mut rep = SuiteReport::new("ex65");
    let psi35 = igusa_psi35_seed()?;
    rep.check("seed antisymmetric under t1 <-> t3", psi35.swap_sign() == Some(-1), "");
    let a = sym2(1, 0, 1);
    let b1 = sym2(1, 0, -1);
    let b2 = sym2(0, 1, 0);
    for n in [0usize, 1, 3] {
        let bad: Vec<String> = multisets(n, &[b1.clone(), b2.clone()])
            .into_iter()
            .map(|bs| siegel_curve_pullback(&psi35, &a, &bs).map(|p| (bs.len(), p)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(_, p)| format!("{p}"))
            .collect();
        rep.check(format!("P{n} = 0"), bad.is_empty(), bad.join("; "));
    }
    for (name, b) in [("B1", &b1), ("B2", &b2)] {
        let p = siegel_curve_pullback(&psi35, &a, &[b.clone(), b.clone()])?;
        rep.check(format!("P2({name}(x){name}) = 0"), p.is_zero(), if p.is_zero() { String::new() } else { format!("{p}") });
    }
    let mixed = siegel_curve_pullback(&psi35, &a, &[b1.clone(), b2.clone()])?;
    let expect = LaurentSeries::from_terms(
        1,
        1,
        mixed.region().clone(),
        vec![(vec![5], int(71)), (vec![6], int(-10224)), (vec![7], int(-13257972))],
    )?;
    let d = diff_series(&mixed, &expect)?;
    rep.check("P2(B1(x)B2) = 71 q^5 - 10224 q^6 - 13257972 q^7", d.is_empty(), d);
    let membership = level_one_membership(&mixed, 74, LevelOneBasis::DeltaPowers)?;
    let desc = membership.describe();
    let ok = membership.is_member() && desc == "71 E4^2 E6 Delta^5";
    rep.check(format!("P2(B1⊗B2) = {desc} (through q^7)"), ok, if membership.is_member() { String::new() } else { format!("residual {:?}", membership.residual) });
    Ok(Ex65 { psi35, mixed, membership, report: rep })
}

/// Rank-one Heegner pullbacks agree with the tensor-valued cycle pullback
/// along the same vector, and scale by `c^N` when `lambda` is replaced by
/// `c lambda`.
pub fn structural_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("structural");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lats: Vec<(IntMatrix, Vec<i64>)> = vec![
        (vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]], vec![0, 0, 1]),
        (vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]], vec![1, -1, 0]),
        (vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, -2, -1], vec![0, 0, -1, -2]], vec![0, 0, 1, 0]),
        (vec![vec![2, 0, 0], vec![0, -2, 0], vec![0, 0, -4]], vec![0, 1, 1]),
    ];
    for t in 0..trials {
        let (g, lam) = &lats[rng.gen_range(0..lats.len())];
        let lat = GramLattice::new(g.clone())?;
        let mut w0 = vec![int(0); lat.dim()];
        if g[0][0] == 0 {
            w0[0] = int(1);
            w0[1] = int(1);
        } else {
            w0[0] = int(1);
        }
        let region = ConeRegion::new(w0, int(4));
        let weight = int(rng.gen_range(2..=12));
        let f = random_ortho(&mut rng, &lat, &region, weight.clone())?;
        let n = rng.gen_range(0..=4u32);
        let (h, _) = pullback_heegner(&f, lam, n)?;
        let split = crate::ortho::heegner_split_for(&lat, lam)?;
        let (cyc, _) = pullback_cycle(&f, &split, n)?;
        let scalar = cyc.component(&vec![0; n as usize])?;
        let hn = &weight + int(n as i64);
        rep.check(
            format!("trial {t}: weight and cusp bookkeeping (N={n})"),
            h.weight() == &hn && cyc.weight == hn && (n == 0 || (h.is_cusp() && h.has_cusp_support())),
            "",
        );
        rep.check(format!("trial {t}: Heegner = rank-one cycle component"), scalar.coeffs() == h.coeffs(), "");
        let lam2: Vec<i64> = lam.iter().map(|x| 2 * x).collect();
        let (h2, _) = pullback_heegner(&f, &lam2, n)?;
        let scaled = h.scale(&crate::series::pow(&int(2), n));
        let common = h.region().bound.clone().min(h2.region().bound.clone());
        rep.check(
            format!("trial {t}: homogeneity in lambda"),
            h2.truncate(&common).coeffs() == scaled.truncate(&common).coeffs(),
            "",
        );
    }
    Ok(rep)
}

pub fn run_all() -> Result<Vec<SuiteReport>> {
    Suite::ALL.into_iter().map(run).collect()
}

//! Hilbert modular forms and Cohen operators, and Siegel modular forms of
//! degree two with their pullbacks to Humbert surfaces and modular curves.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gegenbauer::{g_eval, g_multilinear};
use crate::lattice::{DualVector, GramLattice};
use crate::ortho::{ConeRegion, OrthoFormExpansion};
use crate::series::{binomial, factorial, fmt_rat, int, rat, rising_factorial, LaurentSeries, Rational, TruncationRegion};

/// `a + b sqrt(d)` for a fixed non-square `d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadElem {
    pub d: i64,
    pub a: Rational,
    pub b: Rational,
}

impl QuadElem {
    pub fn new(d: i64, a: Rational, b: Rational) -> Self {
        QuadElem { d, a, b }
    }

    pub fn rational(d: i64, a: Rational) -> Self {
        QuadElem { d, a, b: Rational::zero() }
    }

    pub fn conj(&self) -> Self {
        QuadElem { d: self.d, a: self.a.clone(), b: -&self.b }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(self.d) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a * int(2)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Both real embeddings are positive.
    pub fn is_totally_positive(&self) -> bool {
        self.a.is_positive() && self.norm().is_positive()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadElem { d: self.d, a: &self.a * c, b: &self.b * c }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = QuadElem::rational(self.d, Rational::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Invalid("zero has no inverse".into()));
        }
        Ok(self.conj().scale(&(Rational::one() / n)))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rat(&self.a))
        } else {
            write!(f, "{} + {}*sqrt({})", fmt_rat(&self.a), fmt_rat(&self.b), self.d)
        }
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        assert_eq!(self.d, o.d, "elements of different fields");
        QuadElem { d: self.d, a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        self + &(-o)
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { d: self.d, a: -&self.a, b: -&self.b }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        assert_eq!(self.d, o.d, "elements of different fields");
        QuadElem {
            d: self.d,
            a: &self.a * &o.a + int(self.d) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

/// The order `Z[f (d_K + sqrt d_K)/2]` of discriminant `f^2 d_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticOrder {
    pub d_k: i64,
    pub conductor: i64,
}

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = num_integer::Roots::sqrt(&n);
        r * r == n
    }
}

impl QuadraticOrder {
    /// Splits a positive non-square discriminant `D = f^2 d_K`.
    pub fn from_disc(disc: i64) -> Result<Self> {
        if disc <= 0 || is_square(disc) || !matches!(disc.rem_euclid(4), 0 | 1) {
            return Err(Error::Invalid(format!("{disc} is not a positive non-square discriminant")));
        }
        let mut f = 1;
        let mut g = 2;
        while g * g <= disc {
            let d = disc / (g * g);
            if disc % (g * g) == 0 && matches!(d.rem_euclid(4), 0 | 1) {
                f = g;
            }
            g += 1;
        }
        Ok(QuadraticOrder { d_k: disc / (f * f), conductor: f })
    }

    pub fn disc(&self) -> i64 {
        self.conductor * self.conductor * self.d_k
    }

    /// Membership for an element written over `sqrt(d_K)`:
    /// `O = Z + Z w`, `w = f (d_K + sqrt d_K)/2`.
    pub fn contains(&self, x: &QuadElem) -> bool {
        assert_eq!(x.d, self.d_k, "element must be written over sqrt(d_K)");
        // x = u + v w  =>  v = 2b/f, u = a - v f d_K / 2
        let v = &x.b * int(2) / int(self.conductor);
        let u = &x.a - &v * int(self.conductor * self.d_k) / int(2);
        v.is_integer() && u.is_integer()
    }
}

/// `f(tau_1, tau_2) = sum_nu c(nu) e(nu' tau_1 + nu tau_2)`, indices written
/// as `a + b sqrt(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertExpansion {
    pub d: i64,
    pub weight: Rational,
    pub coeffs: BTreeMap<QuadElem, Rational>,
}

impl HilbertExpansion {
    pub fn new<I: IntoIterator<Item = (QuadElem, Rational)>>(d: i64, weight: Rational, terms: I) -> Result<Self> {
        let mut coeffs: BTreeMap<QuadElem, Rational> = BTreeMap::new();
        for (nu, c) in terms {
            if nu.d != d {
                return Err(Error::Structural("index written over the wrong square root".into()));
            }
            *coeffs.entry(nu).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(HilbertExpansion { d, weight, coeffs })
    }

    pub fn coeff(&self, nu: &QuadElem) -> Rational {
        self.coeffs.get(nu).cloned().unwrap_or_else(Rational::zero)
    }

    /// `c(nu') = (-1)^k c(nu)` for every stored index.
    pub fn has_graded_symmetry(&self) -> bool {
        let Some(k) = self.weight.is_integer().then(|| self.weight.to_integer()) else { return false };
        let sign = if (k % 2u8) == 0u8.into() { int(1) } else { int(-1) };
        self.coeffs.iter().all(|(nu, c)| self.coeff(&nu.conj()) == &sign * c)
    }
}

/// A q-series with coefficients in a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSeries {
    pub d: i64,
    pub weight: Rational,
    pub coeffs: BTreeMap<Rational, QuadElem>,
}

impl QuadSeries {
    pub fn coeff(&self, m: &Rational) -> QuadElem {
        self.coeffs.get(m).cloned().unwrap_or_else(|| QuadElem::rational(self.d, Rational::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `sum_r (-1)^r C(k+N-1, r) C(k+N-1, N-r) u^r v^(N-r)`.
pub fn cohen_kernel(k: &Rational, n: u32, u: &QuadElem, v: &QuadElem) -> QuadElem {
    let top = k + int(n as i64) - int(1);
    let mut acc = QuadElem::rational(u.d, Rational::zero());
    for r in 0..=n {
        let c = binomial(&top, r) * binomial(&top, n - r);
        let c = if r % 2 == 1 { -c } else { c };
        acc = &acc + &(&u.pow(r) * &v.pow(n - r)).scale(&c);
    }
    acc
}

/// The `N`-th Cohen operator along a totally positive `lambda`: the
/// coefficient of `q^m`, `m = Tr(nu' lambda)`, is
/// `sum c(nu) cohen_kernel(k, N, nu lambda', nu' lambda)`.
pub fn cohen_operator(f: &HilbertExpansion, n: u32, lambda: &QuadElem) -> Result<QuadSeries> {
    if lambda.d != f.d || !lambda.is_totally_positive() {
        return Err(Error::Invalid(format!("{lambda} is not totally positive")));
    }
    let mut coeffs: BTreeMap<Rational, QuadElem> = BTreeMap::new();
    for (nu, c) in &f.coeffs {
        let u = nu * &lambda.conj();
        let v = &nu.conj() * lambda;
        let m = (&u + &v).a;
        let val = cohen_kernel(&f.weight, n, &u, &v).scale(c);
        let e = coeffs.entry(m).or_insert_with(|| QuadElem::rational(f.d, Rational::zero()));
        *e = &*e + &val;
    }
    coeffs.retain(|_, v| !v.is_zero());
    Ok(QuadSeries { d: f.d, weight: &f.weight * int(2) + int(2 * n as i64), coeffs })
}

/// Both sides of the Gegenbauer/Cohen comparison for one index `nu`:
/// `G_N^{k-1/2}(Tr(nu mu'), -(N(mu)/(4 N(lambda))) Tr(nu lambda')^2)` and
/// `N!/((k+floor(N/2))...(k+N-1)) (mu/lambda)^N cohen_kernel(k, N, nu lambda', nu' lambda)`.
pub fn cohen_gegenbauer_sides(k: &Rational, n: u32, lambda: &QuadElem, mu: &QuadElem, nu: &QuadElem) -> Result<(QuadElem, QuadElem)> {
    if !(lambda * &mu.conj()).trace().is_zero() {
        return Err(Error::Invalid("lambda and mu are not orthogonal".into()));
    }
    let d = lambda.d;
    let x = (nu * &mu.conj()).trace();
    let t = (nu * &lambda.conj()).trace();
    let y = -(mu.norm() / (int(4) * lambda.norm())) * &t * &t;
    let lhs = QuadElem::rational(d, g_eval(n, &(k - rat(1, 2)), &x, &y));
    let half = n / 2;
    let c = Rational::from_integer(factorial(n)) / rising_factorial(&(k + int(half as i64)), n - half);
    let ratio = (mu * &lambda.inverse()?).pow(n);
    let kern = cohen_kernel(k, n, &(nu * &lambda.conj()), &(&nu.conj() * lambda));
    Ok((lhs, (&ratio * &kern).scale(&c)))
}

/// Formal identity in `x, y` through total degree `deg`:
/// `sum_N (2k-1)_N/(k)_N sum_{r+s=N} C(k+N-1, r) C(k+N-1, s) x^r y^s`
/// against `(1 - 2(x+y) + (x-y)^2)^{1/2-k}`. Returns both sides.
pub fn generating_identity_sides(k: &Rational, deg: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let region = TruncationRegion::total_degree(2, int(deg));
    let mut lhs = LaurentSeries::zero(2, 1, region.clone());
    for n in 0..=deg as u32 {
        let f = rising_factorial(&(k * int(2) - int(1)), n) / rising_factorial(k, n);
        let top = k + int(n as i64) - int(1);
        for r in 0..=n {
            lhs.add_term(vec![r as i64, (n - r) as i64], &f * binomial(&top, r) * binomial(&top, n - r));
        }
    }
    let base = LaurentSeries::from_terms(
        2,
        1,
        region,
        vec![
            (vec![0, 0], int(1)),
            (vec![1, 0], int(-2)),
            (vec![0, 1], int(-2)),
            (vec![2, 0], int(1)),
            (vec![1, 1], int(-2)),
            (vec![0, 2], int(1)),
        ],
    )?;
    let rhs = base.pow_rational(&(rat(1, 2) - k))?;
    Ok((lhs, rhs))
}

/// Degree-two Siegel modular form `sum c(T) q^{t1} r^{t2} s^{t3}` for
/// `T = [[t1, t2/2], [t2/2, t3]]`, known for `t1 + t3 <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelExpansion {
    pub weight: i64,
    coeffs: BTreeMap<(i64, i64, i64), Rational>,
    pub bound: i64,
}

impl SiegelExpansion {
    pub fn new<I: IntoIterator<Item = ((i64, i64, i64), Rational)>>(weight: i64, bound: i64, terms: I) -> Result<Self> {
        let mut coeffs: BTreeMap<(i64, i64, i64), Rational> = BTreeMap::new();
        for ((t1, t2, t3), c) in terms {
            if t1 < 0 || t3 < 0 || 4 * t1 * t3 < t2 * t2 {
                return Err(Error::Invalid(format!("T = ({t1}, {t2}, {t3}) is not positive semidefinite")));
            }
            if t1 + t3 > bound {
                return Err(Error::Invalid(format!("T = ({t1}, {t2}, {t3}) lies beyond the truncation")));
            }
            *coeffs.entry((t1, t2, t3)).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(SiegelExpansion { weight, coeffs, bound })
    }

    pub fn coeffs(&self) -> &BTreeMap<(i64, i64, i64), Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, t1: i64, t2: i64, t3: i64) -> Rational {
        self.coeffs.get(&(t1, t2, t3)).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(eps)` if `c(t3, t2, t1) = eps c(t1, t2, t3)` throughout.
    pub fn swap_sign(&self) -> Option<i64> {
        [1, -1].into_iter().find(|&eps| {
            self.coeffs.iter().all(|(&(t1, t2, t3), c)| self.coeff(t3, t2, t1) == c * int(eps))
        })
    }

    /// The same form on the lattice model `II_{1,1} + A_1(-1)`.
    pub fn to_ortho(&self) -> Result<OrthoFormExpansion> {
        let region = ConeRegion::new(vec![int(1), int(1), int(0)], int(self.bound));
        let terms = self.coeffs.iter().map(|(&(t1, t2, t3), c)| (siegel_index(t1, t2, t3), c.clone()));
        OrthoFormExpansion::new(siegel_lattice(), int(self.weight), region, false, terms)
    }

    pub fn from_ortho(f: &OrthoFormExpansion) -> Result<Self> {
        if f.lattice() != &siegel_lattice() || f.region().w0 != vec![int(1), int(1), int(0)] {
            return Err(Error::Structural("not on the Siegel lattice model".into()));
        }
        let w = f.weight();
        if !w.is_integer() {
            return Err(Error::Structural("Siegel weight must be an integer".into()));
        }
        let bound = f.region().bound.floor().to_integer();
        let terms = f.coeffs().iter().map(|(nu, c)| (siegel_matrix(nu), c.clone()));
        Self::new(to_i64(&w.to_integer()), to_i64(&bound), terms)
    }
}

fn to_i64(x: &num_bigint::BigInt) -> i64 {
    num_traits::ToPrimitive::to_i64(x).expect("small integer")
}

/// Gram `[[0,1,0],[1,0,0],[0,0,-2]]`: `Q(x) = x_0 x_1 - x_2^2`.
pub fn siegel_lattice() -> GramLattice {
    GramLattice::new(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]).expect("valid Gram matrix")
}

/// `T -> (t3, t1, -t2/2)`, so that `Q = det T` and `<T, M> = tr(T adj M)`.
pub fn siegel_index(t1: i64, t2: i64, t3: i64) -> DualVector {
    vec![int(t3), int(t1), rat(-t2, 2)]
}

pub fn siegel_matrix(nu: &[Rational]) -> (i64, i64, i64) {
    let t2 = -&nu[2] * int(2);
    (to_i64(&nu[1].to_integer()), to_i64(&t2.to_integer()), to_i64(&nu[0].to_integer()))
}

/// Pullback to the Humbert surface of `A = (a, b, c)` with non-square
/// discriminant `D = b^2 - 4ac`: indices `lambda^2 t1 + lambda mu t2 + mu^2 t3`
/// with `lambda = a`, `mu = (-b + sqrt D)/2` (written over `sqrt D`), kernel
/// `G_N^{k-1}(-2(a t1 - b t2/2 + c t3), D det T + (a t1 - b t2/2 + c t3)^2)`.
pub fn siegel_humbert_pullback(f: &SiegelExpansion, a: i64, b: i64, c: i64, n: u32) -> Result<HilbertExpansion> {
    let disc = b * b - 4 * a * c;
    if disc <= 0 || is_square(disc) {
        return Err(Error::Invalid(format!(
            "discriminant {disc} is not a positive non-square; use the diagonal pullback for split forms"
        )));
    }
    let lam = QuadElem::rational(disc, int(a));
    let mu = QuadElem::new(disc, rat(-b, 2), rat(1, 2));
    let s = int(f.weight - 1);
    let mut terms = Vec::new();
    for (&(t1, t2, t3), coef) in &f.coeffs {
        let h = int(a * t1 + c * t3) - rat(b * t2, 2);
        let det = int(t1 * t3) - rat(t2 * t2, 4);
        let k = g_eval(n, &s, &(&h * int(-2)), &(int(disc) * det + &h * &h));
        let idx = &(&(&lam * &lam).scale(&int(t1)) + &(&lam * &mu).scale(&int(t2))) + &(&mu * &mu).scale(&int(t3));
        terms.push((idx, k * coef));
    }
    HilbertExpansion::new(disc, int(f.weight + n as i64), terms)
}

/// Pullback to the diagonal `z = 0`:
/// `sum c(T) G_N^{k-1}(t2, t1 t3) q1^{t1} q2^{t3}`.
pub fn siegel_diagonal_pullback(f: &SiegelExpansion, n: u32) -> LaurentSeries {
    let s = int(f.weight - 1);
    let mut out = LaurentSeries::zero(2, 1, TruncationRegion::total_degree(2, int(f.bound)));
    for (&(t1, t2, t3), c) in &f.coeffs {
        out.add_term(vec![t1, t3], g_eval(n, &s, &int(t2), &int(t1 * t3)) * c);
    }
    out
}

/// A symmetric rational `2x2` matrix `[[m11, m12], [m12, m22]]`.
pub type Sym2 = [[Rational; 2]; 2];

pub fn sym2(m11: i64, m12: i64, m22: i64) -> Sym2 {
    [[int(m11), int(m12)], [int(m12), int(m22)]]
}

fn tr_mul(x: &Sym2, y: &Sym2) -> Rational {
    &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0] * int(2) + &x[1][1] * &y[1][1]
}

fn adj(x: &Sym2) -> Sym2 {
    [[x[1][1].clone(), -&x[0][1]], [-&x[1][0], x[0][0].clone()]]
}

fn det2(x: &Sym2) -> Rational {
    &x[0][0] * &x[1][1] - &x[0][1] * &x[1][0]
}

fn t_matrix(t1: i64, t2: i64, t3: i64) -> Sym2 {
    [[int(t1), rat(t2, 2)], [rat(t2, 2), int(t3)]]
}

fn check_curve_data(a: &Sym2, bs: &[&Sym2]) -> Result<()> {
    if !a[0][0].is_positive() || !det2(a).is_positive() || a[0][1] != a[1][0] {
        return Err(Error::Invalid("A must be symmetric positive definite".into()));
    }
    for b in bs {
        if b[0][1] != b[1][0] {
            return Err(Error::Invalid("B must be symmetric".into()));
        }
        if !tr_mul(&adj(b), a).is_zero() {
            return Err(Error::Invalid("tr(adj(B) A) must vanish".into()));
        }
    }
    Ok(())
}

/// Largest `m` such that every `T` with `tr(TA) <= m` has `t1 + t3 <= bound`.
fn curve_bound(a: &Sym2, bound: i64) -> Rational {
    // lambda_min(A) >= (tr - ceil(sqrt(tr^2 - 4 det)))/2
    let tr = &a[0][0] + &a[1][1];
    let disc = &tr * &tr - det2(a) * int(4);
    let mut s = disc.ceil().to_integer().sqrt();
    while Rational::from_integer(&s * &s) < disc {
        s += 1;
    }
    let lam = (&tr - Rational::from_integer(s)) / int(2);
    (lam * int(bound + 1)).ceil() - int(1)
}

/// Pullback to the modular curve `A H` evaluated at `B_1 (x) ... (x) B_N`,
/// normalized by divided powers: `1/N!` times the symmetric multilinear form
/// whose diagonal is `G_N^{k-1/2}(tr(TB), -det(B) tr(TA)^2/(4 det A))`.
pub fn siegel_curve_pullback(f: &SiegelExpansion, a: &Sym2, bs: &[Sym2]) -> Result<LaurentSeries> {
    let refs: Vec<&Sym2> = bs.iter().collect();
    check_curve_data(a, &refs)?;
    let n = bs.len() as u32;
    let s = int(f.weight) - rat(1, 2);
    let da = det2(a);
    let region = TruncationRegion::total_degree(1, curve_bound(a, f.bound));
    let mut out = LaurentSeries::zero(1, 1, region);
    let pair: Vec<Vec<Rational>> = bs.iter().map(|bi| bs.iter().map(|bj| -tr_mul(&adj(bi), bj) / int(2)).collect()).collect();
    let nfact = Rational::from_integer(factorial(n));
    let idx: Vec<usize> = (0..bs.len()).collect();
    for (&(t1, t2, t3), c) in &f.coeffs {
        let t = t_matrix(t1, t2, t3);
        let ta = tr_mul(&t, a);
        let r: Vec<Rational> = bs.iter().map(|b| tr_mul(&t, b)).collect();
        let scale = &ta * &ta / (int(4) * &da);
        let m: Vec<Vec<Rational>> = pair.iter().map(|row| row.iter().map(|x| x * &scale).collect()).collect();
        let g = g_multilinear(n, &s, &r, &m)?;
        out.add_term(vec![to_i64(&ta.to_integer())], g.get(&idx) * c / &nfact);
    }
    Ok(out)
}

/// The scalar pullback `sum c(T) G_N^{k-1/2}(tr(TB), -det(B) tr(TA)^2/(4 det A)) q^{tr(TA)}`.
pub fn siegel_curve_pullback_scalar(f: &SiegelExpansion, a: &Sym2, n: u32, b: &Sym2) -> Result<LaurentSeries> {
    check_curve_data(a, &[b])?;
    let s = int(f.weight) - rat(1, 2);
    let da = det2(a);
    let mut out = LaurentSeries::zero(1, 1, TruncationRegion::total_degree(1, curve_bound(a, f.bound)));
    for (&(t1, t2, t3), c) in &f.coeffs {
        let t = t_matrix(t1, t2, t3);
        let ta = tr_mul(&t, a);
        let y = -det2(b) * &ta * &ta / (int(4) * &da);
        out.add_term(vec![to_i64(&ta.to_integer())], g_eval(n, &s, &tr_mul(&t, b), &y) * c);
    }
    Ok(out)
}

/// The lattice-model vector of a symmetric matrix `M`: pairing with it
/// computes `tr(T M)`.
pub fn siegel_direction(m: &Sym2) -> Result<Vec<i64>> {
    // nu_{adj M} = (M11, M22, M12)
    let v = [&m[0][0], &m[1][1], &m[0][1]];
    v.iter()
        .map(|x| {
            if x.is_integer() {
                Ok(to_i64(&x.to_integer()))
            } else {
                Err(Error::Invalid("direction must be integral".into()))
            }
        })
        .collect()
}

/// Weight-35 Siegel cusp form from its published expansion through
/// `t1 + t3 <= 7`.
pub fn igusa_psi35_seed() -> Result<SiegelExpansion> {
    match crate::format::parse(PSI35_SEED)? {
        crate::format::Expansion::Siegel(f) => Ok(f),
        _ => Err(Error::Structural("seed file is not a Siegel expansion".into())),
    }
}

pub const PSI35_SEED: &str = include_str!("../data/psi35.omfq");

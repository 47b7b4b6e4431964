//! Level-one elliptic modular forms and the index-one Jacobi forms built
//! from theta and eta.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jacobi::JacobiFormExpansion;
use crate::lattice::GramLattice;
use crate::series::{binomial, int, rat, Constraint, LaurentSeries, Rational, TruncationRegion};

fn sigma(k: u32, n: i64) -> Rational {
    (1..=n).filter(|d| n % d == 0).map(|d| crate::series::pow(&int(d), k)).sum()
}

fn q_region(prec: i64) -> TruncationRegion {
    TruncationRegion::total_degree(1, int(prec))
}

/// Coefficients of `prod_{n>=1} (1 - q^n)^e` up to `q^m`, from the
/// logarithmic derivative `n p_n = -e sum_j sigma(j) p_{n-j}`.
fn euler_power(e: i64, m: i64) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    for n in 1..=m.max(0) {
        let mut acc = Rational::zero();
        for j in 1..=n {
            acc += sigma(1, j) * &p[(n - j) as usize];
        }
        p.push(acc * int(-e) / int(n));
    }
    p
}

/// `eta(tau)^e = q^{e/24} prod (1 - q^n)^e`, known through `q^prec`, with
/// exponent denominator 24.
pub fn eta_power(prec: i64, e: i64) -> LaurentSeries {
    let region = q_region(prec);
    // terms q^{e/24 + n} with e/24 + n <= prec
    let top = (int(prec) - rat(e, 24)).floor().to_integer();
    let top: i64 = num_traits::ToPrimitive::to_i64(&top).expect("small precision");
    let coeffs = euler_power(e, top);
    let mut s = LaurentSeries::zero(1, 24, region);
    for (n, c) in coeffs.into_iter().enumerate() {
        s.add_term(vec![e + 24 * n as i64], c);
    }
    s
}

/// `Delta = eta^24`, exponent denominator 1.
pub fn delta(prec: i64) -> LaurentSeries {
    integral(&eta_power(prec, 24))
}

fn integral(s: &LaurentSeries) -> LaurentSeries {
    let d = s.denom();
    let mut out = LaurentSeries::zero(1, 1, s.region().clone());
    for (e, c) in s.terms() {
        assert!(e[0] % d == 0, "series has fractional exponents");
        out.add_term(vec![e[0] / d], c.clone());
    }
    out
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: u32) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += binomial(&int(m as i64 + 1), k as u32) * bk;
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
}

/// `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n` for even `k >= 4`.
pub fn eisenstein(k: u32, prec: i64) -> Result<LaurentSeries> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Invalid(format!("no level-one Eisenstein series of weight {k}")));
    }
    let bk = bernoulli(k)[k as usize].clone();
    let factor = -int(2 * k as i64) / bk;
    let mut s = LaurentSeries::zero(1, 1, q_region(prec));
    s.add_term(vec![0], Rational::one());
    for n in 1..=prec {
        s.add_term(vec![n], &factor * sigma(k - 1, n));
    }
    Ok(s)
}

/// `phi_{-2,1} = theta_1(tau, z)^2 / eta^6` as a series in `(q, zeta)` with
/// integral `zeta` exponents, known for `q`-degree `<= prec`.
pub fn phi_m2_1_series(prec: i64) -> Result<LaurentSeries> {
    let region = TruncationRegion::exact().with(Constraint { weights: vec![int(1), int(0)], bound: int(prec) });
    let poly = |terms: Vec<(Vec<i64>, i64)>| {
        LaurentSeries::from_terms(2, 1, region.clone(), terms.into_iter().map(|(e, c)| (e, int(c))))
    };
    let mut acc = poly(vec![(vec![0, 1], 1), (vec![0, 0], -2), (vec![0, -1], 1)])?;
    for n in 1..=prec {
        for t in [1, -1] {
            let f = poly(vec![(vec![0, 0], 1), (vec![n, t], -2), (vec![2 * n, 2 * t], 1)])?;
            acc = acc.try_mul(&f)?;
        }
    }
    let inv = euler_power(-4, prec);
    let mut eta = LaurentSeries::zero(2, 1, region);
    for (n, c) in inv.into_iter().enumerate() {
        eta.add_term(vec![n as i64, 0], c);
    }
    acc.try_mul(&eta)
}

fn jacobi_from_series(s: &LaurentSeries, weight: i64, prec: i64, weak: bool) -> Result<JacobiFormExpansion> {
    let index = GramLattice::new(vec![vec![2]])?;
    let terms = s.terms().map(|(e, c)| ((int(e[0]), vec![rat(e[1], 2)]), c.clone()));
    JacobiFormExpansion::new(index, int(weight), int(prec), weak, terms)
}

/// `phi_{-2,1}` as a weak Jacobi form of index `[2]` (`zeta^t` has lattice
/// coordinate `t/2`).
pub fn phi_m2_1(prec: i64) -> Result<JacobiFormExpansion> {
    Ok(jacobi_from_series(&phi_m2_1_series(prec)?, -2, prec, true)?.with_multiplier("trivial"))
}

/// `phi_{10,1} = Delta phi_{-2,1}`, the Jacobi cusp form of weight 10 and
/// index 1.
pub fn phi_10_1(prec: i64) -> Result<JacobiFormExpansion> {
    let phi = phi_m2_1_series(prec)?;
    let region = phi.region().clone();
    let d = delta(prec).map_exponents(2, region, |e| vec![e[0], 0])?;
    Ok(jacobi_from_series(&phi.try_mul(&d)?, 10, prec, false)?.with_multiplier("trivial"))
}

/// Monomial bases of `M_k(SL_2(Z))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelOneBasis {
    /// All `E4^a E6^b` with `4a + 6b = k`.
    EisensteinOnly,
    /// `E4^a E6^b Delta^c` with `a <= 2`, `b <= 1`, one per `c`.
    DeltaPowers,
}

/// Exponents `(a, b, c)` of `E4^a E6^b Delta^c` spanning `M_k`.
pub fn level_one_basis(k: u32, basis: LevelOneBasis) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    match basis {
        LevelOneBasis::EisensteinOnly => {
            for b in 0..=k / 6 {
                let rest = k - 6 * b;
                if rest % 4 == 0 {
                    out.push((rest / 4, b, 0));
                }
            }
        }
        LevelOneBasis::DeltaPowers => {
            for c in 0..=k / 12 {
                let w = k - 12 * c;
                if w == 2 {
                    continue;
                }
                let b = if w % 4 == 0 { 0 } else { 1 };
                if w >= 6 * b && (w - 6 * b) % 4 == 0 {
                    out.push(((w - 6 * b) / 4, b, c));
                }
            }
        }
    }
    out
}

/// Coordinates of a q-series in a monomial basis, with the residual on all
/// known coefficients (empty when `f` lies in the span).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub basis: Vec<(u32, u32, u32)>,
    pub coords: Vec<Rational>,
    pub residual: Vec<(i64, Rational)>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.residual.is_empty()
    }

    /// Human-readable combination such as `71 E4^2 E6 Delta^5`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (c, (a, b, d)) in self.coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            let mut s = crate::series::fmt_rat(c);
            for (name, e) in [("E4", a), ("E6", b), ("Delta", d)] {
                match e {
                    0 => {}
                    1 => s.push_str(&format!(" {name}")),
                    _ => s.push_str(&format!(" {name}^{e}")),
                }
            }
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn basis_series(a: u32, b: u32, c: u32, prec: i64) -> Result<LaurentSeries> {
    let e4 = eisenstein(4, prec)?;
    let e6 = eisenstein(6, prec)?;
    let d = delta(prec);
    let mut s = LaurentSeries::one(1).truncate(&q_region(prec));
    for (f, e) in [(&e4, a), (&e6, b), (&d, c)] {
        for _ in 0..e {
            s = s.try_mul(f)?;
        }
    }
    Ok(s)
}

/// Writes `f` (integral exponents, known through some `q^P`) in a basis of
/// `M_k`. Fails with a precision error when the known coefficients do not
/// determine the coordinates.
pub fn level_one_membership(f: &LaurentSeries, k: u32, basis: LevelOneBasis) -> Result<Membership> {
    if f.nvars() != 1 {
        return Err(Error::Structural("expected a series in q".into()));
    }
    let f = integral(f);
    let prec = f
        .region()
        .constraints()
        .iter()
        .map(|c| (&c.bound / &c.weights[0]).floor())
        .min()
        .ok_or_else(|| Error::Precision("series has no truncation bound".into()))?;
    let prec: i64 = num_traits::ToPrimitive::to_i64(&prec.to_integer()).expect("small precision");
    let monos = level_one_basis(k, basis);
    let cols: Vec<LaurentSeries> = monos.iter().map(|&(a, b, c)| basis_series(a, b, c, prec)).collect::<Result<_>>()?;
    let rows = (prec + 1) as usize;
    if rows < monos.len() {
        return Err(Error::Precision(format!("{} coefficients cannot determine {} coordinates", rows, monos.len())));
    }
    // augmented matrix, solved by exact elimination
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|n| {
            let mut row: Vec<Rational> = cols.iter().map(|s| s.coeff(&[n as i64])).collect();
            row.push(f.coeff(&[n as i64]));
            row
        })
        .collect();
    let ncols = monos.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let fct = m[i][c].clone();
                let prow = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(prow) {
                    *x -= &fct * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() < ncols {
        return Err(Error::Precision("known coefficients do not determine the coordinates".into()));
    }
    let coords: Vec<Rational> = (0..ncols).map(|i| m[i][ncols].clone()).collect();
    let mut residual = Vec::new();
    for n in 0..=prec {
        let mut v = f.coeff(&[n]);
        for (c, s) in coords.iter().zip(&cols) {
            v -= c * s.coeff(&[n]);
        }
        if !v.is_zero() {
            residual.push((n, v));
        }
    }
    Ok(Membership { basis: monos, coords, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_coefficients() {
        let d = delta(4);
        let got: Vec<Rational> = (1..=4).map(|n| d.coeff(&[n])).collect();
        assert_eq!(got, vec![int(1), int(-24), int(252), int(-1472)]);
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(6);
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
    }

    #[test]
    fn dimension_count() {
        assert_eq!(level_one_basis(74, LevelOneBasis::DeltaPowers).len(), 6);
        assert_eq!(level_one_basis(12, LevelOneBasis::EisensteinOnly), vec![(3, 0, 0), (0, 2, 0)]);
    }
}

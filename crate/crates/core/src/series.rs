//! Exact rationals and truncated multivariate Laurent series.
//!
//! A series stores integer exponent vectors together with a global
//! denominator `D`; the true exponent of variable `i` is `e[i] / D`.
//! What is known about a series is described by a [`TruncationRegion`]:
//! every coefficient whose exponent lies inside the region is exact, and
//! nothing is claimed outside of it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `x (x+1) ... (x+n-1)`, with the empty product equal to 1.
pub fn rising_factorial(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t += Rational::one();
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Generalized binomial coefficient `alpha choose j`.
pub fn binomial(alpha: &Rational, j: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j {
        acc *= alpha - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rat(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// One linear condition `sum_i weights[i] * e[i] / D <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub weights: Vec<Rational>,
    pub bound: Rational,
}

impl Constraint {
    pub fn height(&self, e: &[i64], denom: i64) -> Rational {
        let mut h = Rational::zero();
        for (w, &x) in self.weights.iter().zip(e) {
            if x != 0 && !w.is_zero() {
                h += w * int(x);
            }
        }
        h / int(denom)
    }

    fn has_nonnegative_weights(&self) -> bool {
        self.weights.iter().all(|w| !w.is_negative())
    }
}

/// Intersection of finitely many [`Constraint`]s. The empty intersection
/// means the series is known exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruncationRegion {
    constraints: Vec<Constraint>,
}

impl TruncationRegion {
    pub fn exact() -> Self {
        TruncationRegion::default()
    }

    /// Total-degree mode: `sum_i e[i] / D <= bound`.
    pub fn total_degree(nvars: usize, bound: Rational) -> Self {
        TruncationRegion::exact().with(Constraint { weights: vec![int(1); nvars], bound })
    }

    /// Weighted-height mode. Weights must be nonnegative with at least one
    /// strictly positive entry.
    pub fn weighted(weights: Vec<Rational>, bound: Rational) -> Result<Self> {
        if weights.iter().any(|w| w.is_negative()) || weights.iter().all(|w| w.is_zero()) {
            return Err(Error::InvalidRegion(
                "weighted-height mode needs nonnegative weights, not all zero".into(),
            ));
        }
        Ok(TruncationRegion::exact().with(Constraint { weights, bound }))
    }

    /// Adds a constraint; a constraint with identical weights keeps the
    /// smaller bound.
    pub fn with(mut self, c: Constraint) -> Self {
        if let Some(old) = self.constraints.iter_mut().find(|o| o.weights == c.weights) {
            if c.bound < old.bound {
                old.bound = c.bound;
            }
        } else {
            self.constraints.push(c);
            self.constraints.sort_by(|a, b| a.weights.cmp(&b.weights));
        }
        self
    }

    pub fn intersect(&self, other: &TruncationRegion) -> TruncationRegion {
        other.constraints.iter().cloned().fold(self.clone(), |r, c| r.with(c))
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_exact(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn contains(&self, e: &[i64], denom: i64) -> bool {
        self.constraints.iter().all(|c| c.height(e, denom) <= c.bound)
    }

    /// The region seen after multiplying by the monomial with exponent `m`.
    pub fn shifted(&self, m: &[i64], denom: i64) -> TruncationRegion {
        TruncationRegion {
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint { weights: c.weights.clone(), bound: &c.bound + c.height(m, denom) })
                .collect(),
        }
    }

    fn nvars(&self) -> Option<usize> {
        self.constraints.first().map(|c| c.weights.len())
    }
}

/// A truncated Laurent series in `nvars` variables with exact rational
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    nvars: usize,
    denom: i64,
    terms: BTreeMap<Vec<i64>, Rational>,
    region: TruncationRegion,
}

impl LaurentSeries {
    pub fn zero(nvars: usize, denom: i64, region: TruncationRegion) -> Self {
        assert!(denom > 0, "exponent denominator must be positive");
        if let Some(n) = region.nvars() {
            assert_eq!(n, nvars, "region dimension does not match the series");
        }
        LaurentSeries { nvars, denom, terms: BTreeMap::new(), region }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut s = Self::zero(nvars, 1, TruncationRegion::exact());
        s.insert(vec![0; nvars], c);
        s
    }

    pub fn monomial(nvars: usize, denom: i64, e: Vec<i64>, c: Rational) -> Self {
        let mut s = Self::zero(nvars, denom, TruncationRegion::exact());
        s.insert(e, c);
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeated
    /// exponents and dropping everything outside `region`.
    pub fn from_terms<I>(nvars: usize, denom: i64, region: TruncationRegion, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        if let Some(n) = region.nvars() {
            if n != nvars {
                return Err(Error::Structural(format!("region has {n} weights, series has {nvars} variables")));
            }
        }
        if denom <= 0 {
            return Err(Error::Structural("exponent denominator must be positive".into()));
        }
        let mut s = Self::zero(nvars, denom, region);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Structural(format!("exponent {e:?} has the wrong length, expected {nvars}")));
            }
            s.add_term(e, c);
        }
        Ok(s)
    }

    fn insert(&mut self, e: Vec<i64>, c: Rational) {
        if !c.is_zero() {
            self.terms.insert(e, c);
        }
    }

    /// Adds `c` to the coefficient at `e` if `e` lies in the region.
    pub fn add_term(&mut self, e: Vec<i64>, c: Rational) {
        if c.is_zero() || !self.region.contains(&e, self.denom) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn region(&self) -> &TruncationRegion {
        &self.region
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no nonzero coefficient is known (the series may still be
    /// truncated).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at exponent `e`, given in units of `1/D`.
    pub fn coeff(&self, e: &[i64]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        self.region.contains(e, self.denom)
    }

    /// Re-expresses exponents over a multiple of the current denominator.
    pub fn with_denom(&self, denom: i64) -> Result<Self> {
        if denom <= 0 || denom % self.denom != 0 {
            return Err(Error::Structural(format!("cannot rescale denominator {} to {denom}", self.denom)));
        }
        let f = denom / self.denom;
        Ok(LaurentSeries {
            nvars: self.nvars,
            denom,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|x| x * f).collect(), c.clone())).collect(),
            region: self.region.clone(),
        })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.nvars != other.nvars {
            return Err(Error::Structural(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        let d = self.denom.lcm(&other.denom);
        Ok((self.with_denom(d)?, other.with_denom(d)?))
    }

    /// Restricts to the intersection with `region`.
    pub fn truncate(&self, region: &TruncationRegion) -> Self {
        let region = self.region.intersect(region);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| region.contains(e, self.denom))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        LaurentSeries { nvars: self.nvars, denom: self.denom, terms, region }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let mut out = Self::zero(a.nvars, a.denom, a.region.intersect(&b.region));
        for (e, c) in a.terms.iter().chain(b.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars, self.denom, self.region.clone());
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    fn min_height(&self, c: &Constraint) -> Option<Rational> {
        self.terms.keys().map(|e| c.height(e, self.denom)).min()
    }

    fn product_region(a: &Self, b: &Self) -> TruncationRegion {
        let mut region = TruncationRegion::exact();
        for (x, y) in [(a, b), (b, a)] {
            for c in &x.region.constraints {
                let shift = match y.min_height(c) {
                    Some(h) => h,
                    None => y
                        .region
                        .constraints
                        .iter()
                        .find(|d| d.weights == c.weights)
                        .map(|d| d.bound.clone())
                        .unwrap_or_else(Rational::zero),
                };
                region = region.with(Constraint { weights: c.weights.clone(), bound: &c.bound + shift });
            }
        }
        region
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let exactly_zero = |s: &Self| s.terms.is_empty() && s.region.is_exact();
        if exactly_zero(&a) || exactly_zero(&b) {
            return Ok(Self::zero(a.nvars, a.denom, TruncationRegion::exact()));
        }
        let region = Self::product_region(&a, &b);
        let mut acc: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if !region.contains(&e, a.denom) {
                    continue;
                }
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(LaurentSeries { nvars: a.nvars, denom: a.denom, terms: acc, region })
    }

    /// Multiplies by the monomial `x^m` (exponents in units of `1/D`).
    pub fn shift(&self, m: &[i64]) -> Self {
        LaurentSeries {
            nvars: self.nvars,
            denom: self.denom,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
            region: self.region.shifted(m, self.denom),
        }
    }

    /// Componentwise minimum of the support, or `None` for the zero series.
    pub fn min_exponent(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |m, e| m.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    /// Inverse of `m * u` where `u` has an invertible constant term.
    /// `monomial` defaults to the componentwise-minimal exponent, which must
    /// itself carry a nonzero coefficient.
    pub fn invert_unit(&self, monomial: Option<&[i64]>) -> Result<Self> {
        let m: Vec<i64> = match monomial {
            Some(m) => m.to_vec(),
            None => self
                .min_exponent()
                .ok_or_else(|| Error::NonInvertible("the zero series has no inverse".into()))?,
        };
        if m.len() != self.nvars {
            return Err(Error::Structural("monomial has the wrong number of variables".into()));
        }
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        let u = self.shift(&neg);
        let c0 = u.coeff(&vec![0; self.nvars]);
        if c0.is_zero() {
            return Err(Error::NonInvertible(format!(
                "no unique minimal monomial: coefficient at {m:?} vanishes"
            )));
        }
        let gens: Vec<(&Vec<i64>, &Rational)> = u.terms.iter().filter(|(e, _)| e.iter().any(|&x| x != 0)).collect();
        if gens.iter().any(|(e, _)| e.iter().any(|&x| x < 0)) {
            return Err(Error::NonInvertible(format!("support is not above the minimal monomial {m:?}")));
        }
        let inv_c0 = c0.recip();
        if gens.is_empty() {
            return Ok(Self::monomial(self.nvars, self.denom, vec![0; self.nvars], inv_c0)
                .truncate(&u.region)
                .shift(&neg));
        }
        let cons = u.region.constraints();
        if cons.is_empty() || cons.iter().any(|c| !c.has_nonnegative_weights()) {
            return Err(Error::NonInvertible(
                "inversion needs a truncation region with nonnegative weights".into(),
            ));
        }
        for (e, _) in &gens {
            if cons.iter().all(|c| c.height(e, 1).is_zero()) {
                return Err(Error::NonInvertible(format!(
                    "exponent {e:?} has zero weight in every constraint; the inverse is infinite"
                )));
            }
        }
        let grade = |e: &[i64]| -> Rational { cons.iter().map(|c| c.height(e, self.denom)).sum() };

        let origin = vec![0; self.nvars];
        let mut support: BTreeSet<Vec<i64>> = BTreeSet::new();
        if u.region.contains(&origin, self.denom) {
            support.insert(origin.clone());
        }
        let mut frontier: Vec<Vec<i64>> = support.iter().cloned().collect();
        while let Some(p) = frontier.pop() {
            for (g, _) in &gens {
                let e: Vec<i64> = p.iter().zip(g.iter()).map(|(a, b)| a + b).collect();
                if u.region.contains(&e, self.denom) && support.insert(e.clone()) {
                    frontier.push(e);
                }
            }
        }
        let mut order: Vec<(Rational, Vec<i64>)> = support.into_iter().map(|e| (grade(&e), e)).collect();
        order.sort();

        let mut inv: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (_, e) in order {
            let val = if e == origin {
                inv_c0.clone()
            } else {
                let mut acc = Rational::zero();
                for (g, ug) in &gens {
                    let d: Vec<i64> = e.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
                    if let Some(bd) = inv.get(&d) {
                        acc += *ug * bd;
                    }
                }
                -acc * &inv_c0
            };
            if !val.is_zero() {
                inv.insert(e, val);
            }
        }
        let b = LaurentSeries { nvars: self.nvars, denom: self.denom, terms: inv, region: u.region.clone() };
        Ok(b.shift(&neg))
    }

    /// Substitutes `x_var^k -> exp(k w)` truncated at `w^order`, where `w`
    /// takes the place of `x_var` (its exponents are whole powers of `w`).
    pub fn exp_substitute(&self, var: usize, order: u32) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::Structural(format!("variable index {var} out of range")));
        }
        if self.region.constraints().iter().any(|c| !c.weights[var].is_zero()) {
            return Err(Error::Structural(format!(
                "variable {var} is not bounded by a Laurent polynomial support; cannot substitute"
            )));
        }
        let mut weights = vec![Rational::zero(); self.nvars];
        weights[var] = Rational::one();
        let region = self.region.clone().with(Constraint { weights, bound: int(order as i64) });
        let mut out = Self::zero(self.nvars, self.denom, region);
        for (e, c) in &self.terms {
            let k = rat(e[var], self.denom);
            let mut power = Rational::one();
            for j in 0..=order {
                if j > 0 {
                    power = power * &k / int(j as i64);
                }
                if power.is_zero() && j > 0 {
                    break;
                }
                let mut ne = e.clone();
                ne[var] = j as i64 * self.denom;
                out.add_term(ne, c * &power);
            }
        }
        Ok(out)
    }

    /// `(self)^alpha` for a series with constant term 1 and all other
    /// exponents of positive weight.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self> {
        let origin = vec![0; self.nvars];
        if self.coeff(&origin) != Rational::one() {
            return Err(Error::NonInvertible("binomial series needs constant term 1".into()));
        }
        let cons = self.region.constraints();
        let mut u = self.clone();
        u.terms.remove(&origin);
        for e in u.terms.keys() {
            if e.iter().any(|&x| x < 0) || cons.iter().all(|c| !c.height(e, self.denom).is_positive()) {
                return Err(Error::NonInvertible(format!("exponent {e:?} does not have positive weight")));
            }
        }
        let mut out = Self::one(self.nvars).with_denom(self.denom)?.truncate(&self.region);
        let mut power = out.clone();
        let mut j = 0u32;
        loop {
            j += 1;
            power = power.try_mul(&u)?.truncate(&self.region);
            if power.is_zero() {
                break;
            }
            out = out.try_add(&power.scale(&binomial(alpha, j)))?;
        }
        Ok(out)
    }

    /// Replaces each exponent vector `e` by `f(e)` in a new variable space.
    /// The caller supplies the image region.
    pub fn map_exponents<F>(&self, nvars: usize, region: TruncationRegion, f: F) -> Result<Self>
    where
        F: Fn(&[i64]) -> Vec<i64>,
    {
        let mut out = Self::zero(nvars, self.denom, region);
        for (e, c) in &self.terms {
            let ne = f(e);
            if ne.len() != nvars {
                return Err(Error::Structural("exponent map produced the wrong length".into()));
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Compares two series on the intersection of their regions.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.is_zero())
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.try_add(rhs).expect("series shapes must agree")
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.try_sub(rhs).expect("series shapes must agree")
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.try_mul(rhs).expect("series shapes must agree")
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", fmt_rat(c))?;
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    write!(f, "*x{}^{}", i, fmt_rat(&rat(x, self.denom)))?;
                }
            }
        }
        Ok(())
    }
}

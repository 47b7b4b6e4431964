//! Orthogonal modular form expansions on Lorentzian lattices and their
//! higher pullbacks to Heegner divisors and special cycles.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gegenbauer::{self, g_multilinear, GegenbauerScalar, TensorForm};
use crate::lattice::{enumerate_dual, in_closed_cone, to_rational_vec, DualRegion, DualVector, GramLattice, SublatticeSplit};
use crate::linalg;
use crate::series::{factorial, fmt_rat, int, pow, rat, rising_factorial, Constraint, LaurentSeries, Rational, TruncationRegion};

/// The closed positive cone containing `w0`, cut at `<x, w0> <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRegion {
    pub w0: DualVector,
    pub bound: Rational,
}

impl ConeRegion {
    pub fn new(w0: DualVector, bound: Rational) -> Self {
        ConeRegion { w0, bound }
    }

    pub fn height(&self, l: &GramLattice, x: &[Rational]) -> Rational {
        l.bilinear(x, &self.w0)
    }

    pub fn contains(&self, l: &GramLattice, x: &[Rational]) -> bool {
        in_closed_cone(l, &self.w0, x) && self.height(l, x) <= self.bound
    }

    pub fn to_dual_region(&self) -> DualRegion {
        DualRegion::Cone { w0: self.w0.clone(), bound: self.bound.clone() }
    }
}

/// `F = sum c(lambda) q^lambda` over dual vectors of a Lorentzian lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoFormExpansion {
    lattice: GramLattice,
    weight: Rational,
    coeffs: BTreeMap<DualVector, Rational>,
    region: ConeRegion,
    cusp: bool,
}

impl OrthoFormExpansion {
    pub fn new<I>(lattice: GramLattice, weight: Rational, region: ConeRegion, cusp: bool, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DualVector, Rational)>,
    {
        if !lattice.is_lorentzian() {
            return Err(Error::Signature(format!("index lattice has signature {:?}", lattice.signature())));
        }
        if region.w0.len() != lattice.dim() || !lattice.norm(&region.w0).is_positive() {
            return Err(Error::InvalidRegion("w0 must be a positive-norm vector of the lattice span".into()));
        }
        let mut f = OrthoFormExpansion { lattice, weight, coeffs: BTreeMap::new(), region, cusp };
        for (x, c) in coeffs {
            f.add_coeff(x, c)?;
        }
        Ok(f)
    }

    pub fn zero(lattice: GramLattice, weight: Rational, region: ConeRegion) -> Result<Self> {
        Self::new(lattice, weight, region, false, std::iter::empty())
    }

    fn add_coeff(&mut self, x: DualVector, c: Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if x.len() != self.lattice.dim() || !self.lattice.is_dual(&x) {
            return Err(Error::Invalid(format!("{} is not a dual lattice vector", show(&x))));
        }
        if !self.region.contains(&self.lattice, &x) {
            return Err(Error::Invalid(format!("{} lies outside the cone region", show(&x))));
        }
        if self.cusp && !self.lattice.norm(&x).is_positive() {
            return Err(Error::Invalid(format!("cusp form has a coefficient at the boundary index {}", show(&x))));
        }
        let entry = self.coeffs.entry(x).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn region(&self) -> &ConeRegion {
        &self.region
    }

    pub fn is_cusp(&self) -> bool {
        self.cusp
    }

    pub fn coeffs(&self) -> &BTreeMap<DualVector, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, x: &[Rational]) -> Rational {
        self.coeffs.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Every stored index has strictly positive norm.
    pub fn has_cusp_support(&self) -> bool {
        self.coeffs.keys().all(|x| self.lattice.norm(x).is_positive())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|(x, v)| (x.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect();
        out
    }

    /// Sum on the common region (the smaller height bound; `w0` must agree).
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.lattice != other.lattice || self.region.w0 != other.region.w0 {
            return Err(Error::Structural("expansions live on different lattices or cones".into()));
        }
        let bound = self.region.bound.clone().min(other.region.bound.clone());
        let region = ConeRegion::new(self.region.w0.clone(), bound);
        let mut out = OrthoFormExpansion {
            lattice: self.lattice.clone(),
            weight: self.weight.clone(),
            coeffs: BTreeMap::new(),
            region,
            cusp: self.cusp && other.cusp,
        };
        for (x, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if out.region.contains(&out.lattice, x) {
                out.add_coeff(x.clone(), c.clone())?;
            }
        }
        Ok(out)
    }

    /// Restricts to a smaller height bound.
    pub fn truncate(&self, bound: &Rational) -> Self {
        let mut out = self.clone();
        if bound < &out.region.bound {
            out.region.bound = bound.clone();
        }
        let (l, r) = (&out.lattice, &out.region);
        out.coeffs = self.coeffs.iter().filter(|(x, _)| r.contains(l, x)).map(|(x, c)| (x.clone(), c.clone())).collect();
        out
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.weight = weight;
        self
    }
}

fn show(x: &[Rational]) -> String {
    format!("({})", x.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for OrthoFormExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "weight {} on lattice {:?}", fmt_rat(&self.weight), self.lattice.gram())?;
        for (x, c) in &self.coeffs {
            writeln!(f, "  {} : {}", show(x), fmt_rat(c))?;
        }
        Ok(())
    }
}

/// A pullback to a special cycle: coefficients are symmetric multilinear
/// forms on the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorValuedExpansion {
    pub lattice: GramLattice,
    pub weight: Rational,
    pub degree: usize,
    pub dim: usize,
    pub coeffs: BTreeMap<DualVector, TensorForm>,
    pub region: ConeRegion,
    pub cusp: bool,
}

impl TensorValuedExpansion {
    /// Scalar expansion obtained by evaluating every coefficient at
    /// `(v_1, ..., v_N)` (coordinates in the complement basis).
    pub fn evaluate(&self, vs: &[Vec<Rational>]) -> Result<OrthoFormExpansion> {
        let mut terms = Vec::new();
        for (x, t) in &self.coeffs {
            terms.push((x.clone(), t.eval(vs)?));
        }
        OrthoFormExpansion::new(self.lattice.clone(), self.weight.clone(), self.region.clone(), self.cusp, terms)
    }

    /// The scalar expansion of one tensor component.
    pub fn component(&self, idx: &[usize]) -> Result<OrthoFormExpansion> {
        let terms: Vec<_> = self.coeffs.iter().map(|(x, t)| (x.clone(), t.get(idx).clone())).collect();
        OrthoFormExpansion::new(self.lattice.clone(), self.weight.clone(), self.region.clone(), self.cusp, terms)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|t| t.is_zero())
    }
}

/// Output indices that could not be computed because part of their fiber
/// lies outside the input truncation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrecisionReport {
    pub omitted: Vec<DualVector>,
}

struct Fibers {
    /// sub-lattice coordinates -> [(ambient vector, coefficient)]
    groups: BTreeMap<DualVector, Vec<(DualVector, Rational)>>,
    region: ConeRegion,
    report: PrecisionReport,
}

/// Groups the coefficients of `f` by their projection to the sublattice and
/// determines the largest output region whose fibers are fully known.
fn collect_fibers(f: &OrthoFormExpansion, split: &SublatticeSplit, out_bound: Option<&Rational>) -> Result<Fibers> {
    let l = split.sub_lattice();
    let lam = &f.lattice;
    let w0 = split.sub_coords(&f.region.w0);
    if !l.norm(&w0).is_positive() {
        return Err(Error::InvalidRegion("w0 projects to a non-positive vector".into()));
    }
    let w0_perp = split.complement_coords(&f.region.w0);
    let region = ConeRegion::new(w0.clone(), out_bound.cloned().unwrap_or_else(|| f.region.bound.clone()));

    let mut undetermined: Vec<(Rational, DualVector)> = Vec::new();
    if w0_perp.iter().any(|x| !x.is_zero()) {
        let k = split.complement_lattice();
        for r in enumerate_dual(l, &region.to_dual_region())? {
            let qr = l.norm(&r);
            let amb = split.sub_to_ambient(&r);
            let mus = enumerate_dual(k, &DualRegion::Definite { bound: qr })?;
            let bad = mus.iter().any(|mu| {
                let mut nu = amb.clone();
                for (a, b) in nu.iter_mut().zip(split.complement_to_ambient(mu)) {
                    *a += b;
                }
                lam.is_dual(&nu) && !f.region.contains(lam, &nu)
            });
            if bad {
                undetermined.push((region.height(l, &r), r));
            }
        }
    }
    undetermined.sort();
    let mut region = region;
    if let Some((h, r)) = undetermined.first() {
        if out_bound.is_some() {
            return Err(Error::Precision(format!("output coefficient at {} is not determined by the input", show(r))));
        }
        // Largest height strictly below the first undetermined one that
        // occurs among dual vectors (heights of L' in direction w0 are
        // discrete, so a tiny step back is exact).
        let below: Option<Rational> = enumerate_dual(l, &region.to_dual_region())?
            .into_iter()
            .map(|x| region.height(l, &x))
            .filter(|x| x < h)
            .max();
        region.bound = below.unwrap_or_else(|| h - rat(1, 1_000_000));
    }
    let report = PrecisionReport { omitted: undetermined.into_iter().map(|(_, r)| r).collect() };

    let mut groups: BTreeMap<DualVector, Vec<(DualVector, Rational)>> = BTreeMap::new();
    for (nu, c) in &f.coeffs {
        let r = split.sub_coords(nu);
        if region.contains(l, &r) {
            groups.entry(r).or_default().push((nu.clone(), c.clone()));
        }
    }
    Ok(Fibers { groups, region, report })
}

fn heegner_split(lattice: &GramLattice, lambda: &[i64]) -> Result<(SublatticeSplit, Rational)> {
    if lambda.len() != lattice.dim() {
        return Err(Error::Structural("divisor vector has the wrong dimension".into()));
    }
    let m = -lattice.norm(&to_rational_vec(lambda));
    if !m.is_positive() {
        return Err(Error::InvalidDivisor(format!("Q(lambda) = {} is not negative", fmt_rat(&-m))));
    }
    let perp = crate::lattice::orthogonal_complement(lattice, &vec![lambda.to_vec()])?;
    let split = SublatticeSplit::new(lattice, perp.complement, vec![lambda.to_vec()])?;
    Ok((split, m))
}

/// The split `lambda^perp + Z lambda` used by Heegner pullbacks.
pub fn heegner_split_for(lattice: &GramLattice, lambda: &[i64]) -> Result<SublatticeSplit> {
    Ok(heegner_split(lattice, lambda)?.0)
}

/// `s = k + (1 - l)/2` for an ambient lattice of dimension `l`.
pub fn heegner_parameter(weight: &Rational, ambient_dim: usize) -> Rational {
    weight + rat(1 - ambient_dim as i64, 2)
}

/// The `N`-th higher pullback to the Heegner divisor `lambda^perp`:
/// `sum_x c(r, x) G_N^s(x, m Q(r))` with `x = <nu, lambda>`, `m = -Q(lambda)`.
pub fn pullback_heegner(f: &OrthoFormExpansion, lambda: &[i64], n: u32) -> Result<(OrthoFormExpansion, PrecisionReport)> {
    pullback_heegner_to(f, lambda, n, None)
}

/// As [`pullback_heegner`], but with a requested output height bound; fails
/// with a precision error if some index below it is not determined.
pub fn pullback_heegner_to(
    f: &OrthoFormExpansion,
    lambda: &[i64],
    n: u32,
    out_bound: Option<&Rational>,
) -> Result<(OrthoFormExpansion, PrecisionReport)> {
    let (split, m) = heegner_split(&f.lattice, lambda)?;
    let lam = to_rational_vec(lambda);
    let s = heegner_parameter(&f.weight, f.lattice.dim());
    let g = GegenbauerScalar::new(n, &s);
    let fib = collect_fibers(f, &split, out_bound)?;
    let l = split.sub_lattice();
    let mut terms = Vec::new();
    for (r, fiber) in &fib.groups {
        let y = &m * l.norm(r);
        let mut acc = Rational::zero();
        for (nu, c) in fiber {
            acc += c * g.eval(&f.lattice.bilinear(nu, &lam), &y);
        }
        terms.push((r.clone(), acc));
    }
    let out = OrthoFormExpansion::new(l.clone(), &f.weight + int(n as i64), fib.region, n >= 1 || f.cusp, terms)?;
    Ok((out, fib.report))
}

/// The Taylor coefficient of order `N` along `lambda^perp` of a form that
/// vanishes there to order `N`: `sum_x c(r, x) x^N / N!`.
pub fn quasi_pullback(f: &OrthoFormExpansion, lambda: &[i64], n: u32) -> Result<OrthoFormExpansion> {
    let (split, _) = heegner_split(&f.lattice, lambda)?;
    let lam = to_rational_vec(lambda);
    let fib = collect_fibers(f, &split, None)?;
    let nfact = Rational::from_integer(factorial(n));
    let mut terms = Vec::new();
    for (r, fiber) in &fib.groups {
        let xs: Vec<(Rational, &Rational)> = fiber.iter().map(|(nu, c)| (f.lattice.bilinear(nu, &lam), c)).collect();
        for j in 0..n {
            let t: Rational = xs.iter().map(|(x, c)| *c * pow(x, j)).sum();
            if !t.is_zero() {
                return Err(Error::NotVanishing(format!(
                    "Taylor coefficient of order {j} at {} is {}",
                    show(r),
                    fmt_rat(&t)
                )));
            }
        }
        let t: Rational = xs.iter().map(|(x, c)| *c * pow(x, n)).sum();
        terms.push((r.clone(), t / &nfact));
    }
    let l = split.sub_lattice().clone();
    OrthoFormExpansion::new(l, &f.weight + int(n as i64), fib.region, f.cusp, terms)
}

/// `N! Gamma(s+N)/Gamma(s+ceil(N/2))` with `s = k + (1-l)/2`: the factor with
/// `pullback_heegner = constant * quasi_pullback` for forms vanishing to
/// order `N`.
pub fn quasi_pullback_constant(weight: &Rational, ambient_dim: usize, n: u32) -> Rational {
    let s = heegner_parameter(weight, ambient_dim);
    let c = n.div_ceil(2);
    Rational::from_integer(factorial(n)) * rising_factorial(&(s + int(c as i64)), n - c)
}

/// Pullback to the special cycle of a split `L + L^perp` with `L^perp`
/// negative definite: coefficient at `lambda` is
/// `sum_mu c(lambda, mu) G_N^{k - dim L/2}(<., mu>, -Q(lambda) B/2)`.
pub fn pullback_cycle(f: &OrthoFormExpansion, split: &SublatticeSplit, n: u32) -> Result<(TensorValuedExpansion, PrecisionReport)> {
    if split.ambient != f.lattice {
        return Err(Error::Structural("split does not belong to the form's lattice".into()));
    }
    if !split.sub_lattice().is_lorentzian() {
        return Err(Error::Signature("the cycle lattice must be Lorentzian".into()));
    }
    if !split.complement_lattice().is_negative_definite() {
        return Err(Error::Signature("the complement must be negative definite".into()));
    }
    let l = split.sub_lattice();
    let dim = split.complement.len();
    let s = &f.weight - rat(l.dim() as i64, 2);
    let b = linalg::to_rational(split.complement_lattice().gram());
    let basis: Vec<DualVector> = split.complement.iter().map(|v| to_rational_vec(v)).collect();
    let fib = collect_fibers(f, split, None)?;
    let mut coeffs = BTreeMap::new();
    for (lam, fiber) in &fib.groups {
        let factor = -l.norm(lam) / int(2);
        let m: Vec<Vec<Rational>> = b.iter().map(|row| row.iter().map(|x| x * &factor).collect()).collect();
        let mut acc = TensorForm::zero(n as usize, dim);
        for (nu, c) in fiber {
            let r: Vec<Rational> = basis.iter().map(|bi| f.lattice.bilinear(nu, bi)).collect();
            acc.add_scaled(&g_multilinear(n, &s, &r, &m)?, c);
        }
        if !acc.is_zero() {
            coeffs.insert(lam.clone(), acc);
        }
    }
    let out = TensorValuedExpansion {
        lattice: l.clone(),
        weight: &f.weight + int(n as i64),
        degree: n as usize,
        dim,
        coeffs,
        region: fib.region,
        cusp: n >= 1 || f.cusp,
    };
    Ok((out, fib.report))
}

/// Which Gegenbauer normalization a meromorphic pullback applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// The rescaled `G_N^s`.
    Rescaled,
    /// The classical `g_N^s`, the `t^N` coefficient of `(1-xt+yt^2)^{-s}`.
    Classical,
}

/// Higher pullback of a meromorphic form given on Fourier data.
///
/// `f` is a series in q-variables and `w = 2 pi i w` (variable `w_var`).
/// The form `w^pole_order * f` is treated as holomorphic of weight
/// `pretend_weight`; `x^{n2}` acts as `n2! [w^{n2}]` and `y` as
/// multiplication by `quad(e)` on the q-monomial with true exponent `e`.
#[allow(clippy::too_many_arguments)]
pub fn pullback_meromorphic(
    f: &LaurentSeries,
    w_var: usize,
    pretend_weight: &Rational,
    ambient_dim: usize,
    pole_order: i64,
    n: u32,
    quad: &dyn Fn(&[Rational]) -> Rational,
    normalization: Normalization,
) -> Result<LaurentSeries> {
    let d = f.denom();
    let mut shift = vec![0; f.nvars()];
    shift[w_var] = pole_order * d;
    let g = f.shift(&shift);
    for (e, _) in g.terms() {
        if e[w_var] < 0 {
            return Err(Error::Pole(format!("negative power of w remains at exponent {e:?}")));
        }
        if e[w_var] % d != 0 {
            return Err(Error::Structural("w must appear with integral exponents".into()));
        }
    }
    let s = heegner_parameter(pretend_weight, ambient_dim);
    let kernel = match normalization {
        Normalization::Rescaled => GegenbauerScalar::new(n, &s),
        Normalization::Classical => GegenbauerScalar::classical(n, &s),
    };
    let needed: Vec<(u32, u32, Rational)> = kernel
        .terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&n1, c)| (n1, n - 2 * n1, c.clone()))
        .collect();
    let nq = f.nvars() - 1;
    let drop_w = |e: &[i64]| -> Vec<i64> { e.iter().enumerate().filter(|(i, _)| *i != w_var).map(|(_, x)| *x).collect() };
    let max_n2 = needed.iter().map(|t| t.1).max();

    let mut region = TruncationRegion::exact();
    for c in g.region().constraints() {
        let ww = &c.weights[w_var];
        let qw = drop_w_weights(&c.weights, w_var);
        let Some(top) = max_n2 else { continue };
        if qw.iter().all(|x| x.is_zero()) {
            if ww.is_positive() && &(ww * int(top as i64)) > &c.bound {
                return Err(Error::Precision(format!(
                    "need w^{top} but the input is only known to w-height {}",
                    fmt_rat(&c.bound)
                )));
            }
            continue;
        }
        let worst = if ww.is_positive() { ww * int(top as i64) } else { Rational::zero() };
        region = region.with(Constraint { weights: qw, bound: &c.bound - worst });
    }

    let mut out = LaurentSeries::zero(nq, d, region);
    for (e, c) in g.terms() {
        let n2 = (e[w_var] / d) as u32;
        for (n1, m2, coef) in &needed {
            if *m2 != n2 {
                continue;
            }
            let q = drop_w(e);
            let true_exp: Vec<Rational> = q.iter().map(|&x| rat(x, d)).collect();
            let y = quad(&true_exp);
            let val = c * coef * Rational::from_integer(factorial(n2)) * pow(&y, *n1);
            out.add_term(q, val);
        }
    }
    Ok(out)
}

fn drop_w_weights(w: &[Rational], w_var: usize) -> Vec<Rational> {
    w.iter().enumerate().filter(|(i, _)| *i != w_var).map(|(_, x)| x.clone()).collect()
}

/// The scalar Gegenbauer kernel used by Heegner pullbacks, exposed for
/// cross-checks.
pub fn heegner_kernel(n: u32, s: &Rational, x: &Rational, y: &Rational) -> Rational {
    gegenbauer::g_eval(n, s, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_lattice() -> GramLattice {
        GramLattice::new(vec![vec![2, 0], vec![0, -2]]).unwrap()
    }

    #[test]
    fn restriction_sums_fibers() {
        let l = diag_lattice();
        let region = ConeRegion::new(vec![int(1), int(0)], int(10));
        let f = OrthoFormExpansion::new(
            l,
            int(4),
            region,
            false,
            vec![
                (vec![int(2), int(1)], int(3)),
                (vec![int(2), int(-1)], int(5)),
                (vec![int(2), int(0)], int(7)),
                (vec![rat(3, 2), rat(1, 2)], int(1)),
            ],
        )
        .unwrap();
        let (p, rep) = pullback_heegner(&f, &[0, 1], 0).unwrap();
        assert!(rep.omitted.is_empty());
        assert_eq!(p.lattice().gram(), &vec![vec![2]]);
        let key = |x: Rational| -> Rational {
            let r = p.coeffs().keys().find(|k| k[0].abs() == x).unwrap();
            p.coeff(r)
        };
        assert_eq!(key(int(2)), int(15));
        assert_eq!(key(rat(3, 2)), int(1));
        assert_eq!(p.weight(), &int(4));
    }

    #[test]
    fn positive_divisor_is_rejected() {
        let l = diag_lattice();
        let f = OrthoFormExpansion::zero(l, int(4), ConeRegion::new(vec![int(1), int(0)], int(4))).unwrap();
        assert!(matches!(pullback_heegner(&f, &[1, 0], 1), Err(Error::InvalidDivisor(_))));
    }

    #[test]
    fn quasi_constant_value() {
        assert_eq!(quasi_pullback_constant(&int(35), 3, 2), int(70));
        assert_eq!(quasi_pullback_constant(&int(9), 3, 0), int(1));
    }
}

//! Jacobi forms of lattice index, vector-valued forms for the Weil
//! representation, theta decomposition and development coefficients.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gegenbauer::{g_multilinear, TensorForm};
use crate::lattice::{
    discriminant_group, enumerate_dual, frac, orthogonal_complement, to_rational_vec, Coset, DiscriminantGroup, DualRegion,
    DualVector, GramLattice, SublatticeSplit,
};
use crate::linalg::{self, IntMatrix, RatMatrix};
use crate::ortho::OrthoFormExpansion;
use crate::series::{fmt_rat, int, rat, Rational};
use crate::weil::{trace_map, Intertwiner};

fn show(x: &[Rational]) -> String {
    format!("({})", x.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
}

/// `phi(tau, z) = sum c(n, r) q^n zeta^r` with `r` in the dual of the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiFormExpansion {
    index: GramLattice,
    weight: Rational,
    coeffs: BTreeMap<(Rational, DualVector), Rational>,
    bound: Rational,
    weak: bool,
    multiplier: String,
}

impl JacobiFormExpansion {
    /// Coefficients are known for `n <= bound`. Unless `weak`, every stored
    /// index must satisfy `Q(r) <= n`.
    pub fn new<I>(index: GramLattice, weight: Rational, bound: Rational, weak: bool, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((Rational, DualVector), Rational)>,
    {
        if !index.is_positive_definite() {
            return Err(Error::Signature("Jacobi index lattice must be positive definite".into()));
        }
        let mut phi = JacobiFormExpansion { index, weight, coeffs: BTreeMap::new(), bound, weak, multiplier: String::new() };
        for ((n, r), c) in coeffs {
            phi.add_coeff(n, r, c)?;
        }
        Ok(phi)
    }

    fn add_coeff(&mut self, n: Rational, r: DualVector, c: Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if r.len() != self.index.dim() || !self.index.is_dual(&r) {
            return Err(Error::MalformedJacobi(format!("{} is not in the dual of the index lattice", show(&r))));
        }
        if n > self.bound {
            return Err(Error::MalformedJacobi(format!("q^{} lies beyond the truncation", fmt_rat(&n))));
        }
        if !self.weak && self.index.norm(&r) > n {
            return Err(Error::MalformedJacobi(format!("c({}, {}) is nonzero but Q(r) > n", fmt_rat(&n), show(&r))));
        }
        let key = (n, r);
        let v = self.coeffs.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    pub fn with_multiplier(mut self, label: impl Into<String>) -> Self {
        self.multiplier = label.into();
        self
    }

    pub fn index(&self) -> &GramLattice {
        &self.index
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn is_weak(&self) -> bool {
        self.weak
    }

    pub fn multiplier(&self) -> &str {
        &self.multiplier
    }

    pub fn coeffs(&self) -> &BTreeMap<(Rational, DualVector), Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, n: &Rational, r: &[Rational]) -> Rational {
        self.coeffs.get(&(n.clone(), r.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Keeps the terms with `n <= bound`.
    pub fn truncate(&self, bound: &Rational) -> Self {
        let mut out = self.clone();
        if bound < &out.bound {
            out.bound = bound.clone();
        }
        out.coeffs.retain(|(n, _), _| n <= &out.bound);
        out
    }
}

/// `F = sum_gamma sum_n c(gamma, n) q^n e_gamma`.
#[derive(Clone, Debug)]
pub struct VVMFExpansion {
    group: DiscriminantGroup,
    weight: Rational,
    coeffs: BTreeMap<(Coset, Rational), Rational>,
    bound: Rational,
}

impl PartialEq for VVMFExpansion {
    fn eq(&self, o: &Self) -> bool {
        self.group.lattice() == o.group.lattice() && self.weight == o.weight && self.coeffs == o.coeffs && self.bound == o.bound
    }
}

impl VVMFExpansion {
    pub fn new<I>(lattice: &GramLattice, weight: Rational, bound: Rational, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((Coset, Rational), Rational)>,
    {
        let group = discriminant_group(lattice)?;
        Self::with_group(group, weight, bound, coeffs)
    }

    pub fn with_group<I>(group: DiscriminantGroup, weight: Rational, bound: Rational, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((Coset, Rational), Rational)>,
    {
        let mut f = VVMFExpansion { group, weight, coeffs: BTreeMap::new(), bound };
        for ((g, n), c) in coeffs {
            f.add_coeff(g, n, c)?;
        }
        Ok(f)
    }

    fn add_coeff(&mut self, g: Coset, n: Rational, c: Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if !frac(&(&n - self.group.q_value(&g))).is_zero() {
            return Err(Error::Invalid(format!("exponent {} is not in Z + Q(gamma) for {:?}", fmt_rat(&n), g)));
        }
        if n > self.bound {
            return Err(Error::Invalid(format!("q^{} lies beyond the truncation", fmt_rat(&n))));
        }
        let key = (g, n);
        let v = self.coeffs.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    pub fn lattice(&self) -> &GramLattice {
        self.group.lattice()
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn coeffs(&self) -> &BTreeMap<(Coset, Rational), Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, g: &Coset, n: &Rational) -> Rational {
        self.coeffs.get(&(g.clone(), n.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn min_exponent(&self) -> Rational {
        self.coeffs.keys().map(|(_, n)| n.clone()).min().unwrap_or_else(Rational::zero).min(Rational::zero())
    }
}

/// The scalar q-series with symmetric-tensor coefficients of `D_N phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorQSeries {
    pub weight: Rational,
    pub degree: usize,
    pub dim: usize,
    pub coeffs: BTreeMap<Rational, TensorForm>,
    pub bound: Rational,
}

impl TensorQSeries {
    /// `n -> T_n(v_1, ..., v_N)`.
    pub fn evaluate(&self, vs: &[Vec<Rational>]) -> Result<BTreeMap<Rational, Rational>> {
        let mut out = BTreeMap::new();
        for (n, t) in &self.coeffs {
            let v = t.eval(vs)?;
            if !v.is_zero() {
                out.insert(n.clone(), v);
            }
        }
        Ok(out)
    }
}

/// A Jacobi form whose coefficients are symmetric tensors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorJacobiExpansion {
    pub index: GramLattice,
    pub weight: Rational,
    pub degree: usize,
    pub dim: usize,
    pub coeffs: BTreeMap<(Rational, DualVector), TensorForm>,
    pub bound: Rational,
    pub weak: bool,
}

impl TensorJacobiExpansion {
    pub fn evaluate(&self, vs: &[Vec<Rational>]) -> Result<JacobiFormExpansion> {
        let mut terms = Vec::new();
        for (k, t) in &self.coeffs {
            terms.push((k.clone(), t.eval(vs)?));
        }
        JacobiFormExpansion::new(self.index.clone(), self.weight.clone(), self.bound.clone(), self.weak, terms)
    }

    pub fn component(&self, idx: &[usize]) -> Result<JacobiFormExpansion> {
        let terms: Vec<_> = self.coeffs.iter().map(|(k, t)| (k.clone(), t.get(idx).clone())).collect();
        JacobiFormExpansion::new(self.index.clone(), self.weight.clone(), self.bound.clone(), self.weak, terms)
    }
}

/// A vector-valued form whose coefficients are symmetric tensors.
#[derive(Clone, Debug)]
pub struct TensorVVMF {
    pub group: DiscriminantGroup,
    pub weight: Rational,
    pub degree: usize,
    pub dim: usize,
    pub coeffs: BTreeMap<(Coset, Rational), TensorForm>,
    pub bound: Rational,
}

impl PartialEq for TensorVVMF {
    fn eq(&self, o: &Self) -> bool {
        self.group.lattice() == o.group.lattice()
            && self.weight == o.weight
            && self.degree == o.degree
            && self.coeffs == o.coeffs
            && self.bound == o.bound
    }
}

impl TensorVVMF {
    pub fn evaluate(&self, vs: &[Vec<Rational>]) -> Result<VVMFExpansion> {
        let mut terms = Vec::new();
        for (k, t) in &self.coeffs {
            terms.push((k.clone(), t.eval(vs)?));
        }
        VVMFExpansion::with_group(self.group.clone(), self.weight.clone(), self.bound.clone(), terms)
    }

    pub fn component(&self, idx: &[usize]) -> Result<VVMFExpansion> {
        let terms: Vec<_> = self.coeffs.iter().map(|(k, t)| (k.clone(), t.get(idx).clone())).collect();
        VVMFExpansion::with_group(self.group.clone(), self.weight.clone(), self.bound.clone(), terms)
    }
}

/// `c_vv(gamma, n - Q(r)) = c(n, r)`, a vector-valued form for `L(-1)` of
/// weight `k - dim L / 2`. All representatives inside the truncation must
/// carry the same coefficient.
pub fn theta_decompose(phi: &JacobiFormExpansion) -> Result<VVMFExpansion> {
    let l = &phi.index;
    let neg = l.negated();
    let group = discriminant_group(&neg)?;
    let mut vv: BTreeMap<(Coset, Rational), Rational> = BTreeMap::new();
    for ((n, r), c) in &phi.coeffs {
        let key = (group.class_of(r), n - l.norm(r));
        match vv.get(&key) {
            Some(v) if v != c => {
                return Err(Error::MalformedJacobi(format!(
                    "representatives of {:?} at q^{} disagree",
                    key.0,
                    fmt_rat(&key.1)
                )))
            }
            _ => {
                vv.insert(key, c.clone());
            }
        }
    }
    // every other representative inside the truncation must also match
    for ((g, m), c) in &vv {
        let reach = &phi.bound - m;
        for r in enumerate_dual(l, &DualRegion::Definite { bound: reach })? {
            if &group.class_of(&r) != g {
                continue;
            }
            let n = m + l.norm(&r);
            if &phi.coeff(&n, &r) != c {
                return Err(Error::MalformedJacobi(format!(
                    "c({}, {}) differs from another representative of the same class",
                    fmt_rat(&n),
                    show(&r)
                )));
            }
        }
    }
    // c_vv(gamma, m) is known once the shortest representative is in range
    let mut worst = Rational::zero();
    for g in group.elements() {
        let rep = group.representative(g);
        let reach = l.norm(&rep);
        let shortest = enumerate_dual(l, &DualRegion::Definite { bound: reach })?
            .into_iter()
            .filter(|r| &group.class_of(r) == g)
            .map(|r| l.norm(&r))
            .min()
            .unwrap_or_else(Rational::zero);
        worst = worst.max(shortest);
    }
    let bound = &phi.bound - worst;
    let terms: Vec<_> = vv.into_iter().filter(|((_, m), _)| m <= &bound).collect();
    VVMFExpansion::with_group(group, &phi.weight - rat(l.dim() as i64, 2), bound, terms)
}

/// Inverse of [`theta_decompose`]: `c(n, r) = c_vv(r + L, n - Q(r))`.
pub fn theta_recompose(f: &VVMFExpansion, l: &GramLattice) -> Result<JacobiFormExpansion> {
    if &l.negated() != f.lattice() {
        return Err(Error::Structural("the vector-valued form must live on L(-1)".into()));
    }
    let group = &f.group;
    let mut terms = Vec::new();
    let mut weak = false;
    for ((g, m), c) in &f.coeffs {
        let reach = &f.bound - m;
        if m.is_negative() {
            weak = true;
        }
        for r in enumerate_dual(l, &DualRegion::Definite { bound: reach })? {
            if &group.class_of(&r) == g {
                terms.push(((m + l.norm(&r), r), c.clone()));
            }
        }
    }
    JacobiFormExpansion::new(l.clone(), &f.weight + rat(l.dim() as i64, 2), f.bound.clone(), weak, terms)
}

fn scaled_gram(b: &RatMatrix, f: &Rational) -> RatMatrix {
    b.iter().map(|row| row.iter().map(|x| x * f).collect()).collect()
}

/// `D_N phi = sum_n (sum_r c(n, r) G_N^{k-1}(<r, .>, n B/2)) q^n`.
pub fn dev_coeff(phi: &JacobiFormExpansion, n: u32) -> Result<TensorQSeries> {
    let l = &phi.index;
    let b = linalg::to_rational(l.gram());
    let s = &phi.weight - int(1);
    let mut coeffs: BTreeMap<Rational, TensorForm> = BTreeMap::new();
    for ((m, r), c) in &phi.coeffs {
        let t = g_multilinear(n, &s, &l.pairings(r), &scaled_gram(&b, &(m / int(2))))?;
        coeffs.entry(m.clone()).or_insert_with(|| TensorForm::zero(n as usize, l.dim())).add_scaled(&t, c);
    }
    coeffs.retain(|_, t| !t.is_zero());
    Ok(TensorQSeries { weight: &phi.weight + int(n as i64), degree: n as usize, dim: l.dim(), coeffs, bound: phi.bound.clone() })
}

/// Development along the complement of `K` inside the index lattice: a
/// Jacobi form of index `K` whose coefficients are tensors on `K^perp`,
/// with kernel `G_N^{k-1-dim K/2}(r_perp, (n - Q(r_K)) B/2)`.
pub fn partial_dev_coeff(phi: &JacobiFormExpansion, k_basis: &IntMatrix, n: u32) -> Result<TensorJacobiExpansion> {
    let l = &phi.index;
    let split = orthogonal_complement(l, k_basis)?;
    let kl = split.sub_lattice();
    let perp: Vec<DualVector> = split.complement.iter().map(|v| to_rational_vec(v)).collect();
    let b = linalg::to_rational(split.complement_lattice().gram());
    let s = &phi.weight - int(1) - rat(kl.dim() as i64, 2);
    let mut coeffs: BTreeMap<(Rational, DualVector), TensorForm> = BTreeMap::new();
    for ((m, r), c) in &phi.coeffs {
        let rk = split.sub_coords(r);
        let y = m - kl.norm(&rk);
        let rp: Vec<Rational> = perp.iter().map(|v| l.bilinear(r, v)).collect();
        let t = g_multilinear(n, &s, &rp, &scaled_gram(&b, &(y / int(2))))?;
        coeffs.entry((m.clone(), rk)).or_insert_with(|| TensorForm::zero(n as usize, perp.len())).add_scaled(&t, c);
    }
    coeffs.retain(|_, t| !t.is_zero());
    Ok(TensorJacobiExpansion {
        index: kl.clone(),
        weight: &phi.weight + int(n as i64),
        degree: n as usize,
        dim: perp.len(),
        coeffs,
        bound: phi.bound.clone(),
        weak: phi.weak,
    })
}

fn check_dev_split(f: &VVMFExpansion, split: &SublatticeSplit) -> Result<()> {
    if &split.ambient != f.lattice() {
        return Err(Error::Structural("split does not belong to the form's lattice".into()));
    }
    if split.sub.len() + split.complement.len() != split.ambient.dim() {
        return Err(Error::Structural("the split is not of full rank".into()));
    }
    if !split.complement_lattice().is_negative_definite() {
        return Err(Error::Signature("the complement must be negative definite".into()));
    }
    Ok(())
}

/// Development coefficient of a vector-valued form along `L`, from the
/// explicit Fourier expansion
/// `sum_lambda c(n + Q(lambda), beta + lambda) G_N^{k-1+dim L^perp/2}(<lambda, .>, n B_{L^perp(-1)}/2)`.
pub fn dev_coeff_vvmf(f: &VVMFExpansion, split: &SublatticeSplit, n: u32) -> Result<TensorVVMF> {
    check_dev_split(f, split)?;
    let lam = f.lattice();
    let gl = discriminant_group(split.sub_lattice())?;
    let kperp = split.complement_lattice();
    let dk = kperp.dim();
    let b = linalg::to_rational(kperp.gram());
    let s = &f.weight - int(1) + rat(dk as i64, 2);
    let lambdas = enumerate_dual(kperp, &DualRegion::Definite { bound: &f.bound - f.min_exponent() })?;
    let mut by_class: BTreeMap<&Coset, Vec<(&Rational, &Rational)>> = BTreeMap::new();
    for ((g, m), c) in &f.coeffs {
        by_class.entry(g).or_default().push((m, c));
    }
    let mut coeffs: BTreeMap<(Coset, Rational), TensorForm> = BTreeMap::new();
    for beta in gl.elements() {
        let b0 = split.sub_to_ambient(&gl.representative(beta));
        for lv in &lambdas {
            let mut amb = b0.clone();
            for (a, x) in amb.iter_mut().zip(split.complement_to_ambient(lv)) {
                *a += x;
            }
            if !lam.is_dual(&amb) {
                continue;
            }
            let Some(terms) = by_class.get(&f.group.class_of(&amb)) else { continue };
            let ql = kperp.norm(lv);
            let r = kperp.pairings(lv);
            for (m, c) in terms {
                let out_n = *m - &ql;
                if out_n > f.bound {
                    continue;
                }
                let t = g_multilinear(n, &s, &r, &scaled_gram(&b, &(-&out_n / int(2))))?;
                coeffs.entry((beta.clone(), out_n)).or_insert_with(|| TensorForm::zero(n as usize, dk)).add_scaled(&t, c);
            }
        }
    }
    coeffs.retain(|_, t| !t.is_zero());
    Ok(TensorVVMF { group: gl, weight: &f.weight + int(n as i64) + rat(dk as i64, 2), degree: n as usize, dim: dk, coeffs, bound: f.bound.clone() })
}

type JacobiTerms = BTreeMap<(Rational, DualVector), Rational>;

/// The same development coefficient computed from its definition:
/// restrict to `L + L^perp` with the down-arrow, multiply by
/// `Theta_{L^perp(-1)}(tau, -z)`, contract with the trace map and apply
/// `D_N` to each component.
pub fn dev_coeff_vvmf_by_composition(f: &VVMFExpansion, split: &SublatticeSplit, n: u32) -> Result<TensorVVMF> {
    check_dev_split(f, split)?;
    let tw = Intertwiner::for_split(split)?;
    let gl = discriminant_group(split.sub_lattice())?;
    let kperp = split.complement_lattice();
    let gk = discriminant_group(kperp)?;
    let gk_neg = discriminant_group(&kperp.negated())?;
    let dl = split.sub.len();
    let dk = kperp.dim();

    // the down-arrow, one coefficient vector per exponent
    let small = tw.small();
    let mut down: BTreeMap<(usize, Rational), Rational> = BTreeMap::new();
    for ((g, m), c) in &f.coeffs {
        let gi = f.group.index_of(g);
        for (di, _) in small.elements().iter().enumerate() {
            if tw.image(di) == Some(gi) {
                down.insert((di, m.clone()), c.clone());
            }
        }
    }

    // (down F) (x) Theta, as a tensor in C[L'/L] (x) C[K'/K] (x) C[K(-1)'/K(-1)]
    let lambdas = enumerate_dual(kperp, &DualRegion::Definite { bound: &f.bound - f.min_exponent() })?;
    let mut tensor: BTreeMap<(usize, usize, usize), JacobiTerms> = BTreeMap::new();
    for ((di, m), c) in &down {
        let rep = small.representative(&small.elements()[*di]);
        let (dlv, dkv) = rep.split_at(dl);
        let bi = gl.index_of(&gl.class_of(dlv));
        let ei = gk.index_of(&gk.class_of(dkv));
        for lv in &lambdas {
            let out_n = m - kperp.norm(lv);
            if out_n > f.bound {
                continue;
            }
            let ti = gk_neg.index_of(&gk_neg.class_of(lv));
            let r: DualVector = lv.iter().map(|x| -x).collect();
            let entry = tensor.entry((bi, ei, ti)).or_default();
            *entry.entry((out_n, r)).or_insert_with(Rational::zero) += c;
        }
    }
    let merge = |a: &JacobiTerms, b: &JacobiTerms| -> JacobiTerms {
        let mut out = a.clone();
        for (k, v) in b {
            *out.entry(k.clone()).or_insert_with(Rational::zero) += v;
        }
        out
    };
    let traced = trace_map(&gl, &gk, &gk_neg, &tensor, &JacobiTerms::new(), merge);

    let index = kperp.negated();
    let kw = &f.weight + rat(dk as i64, 2);
    let mut coeffs: BTreeMap<(Coset, Rational), TensorForm> = BTreeMap::new();
    for (bi, terms) in traced.into_iter().enumerate() {
        let phi = JacobiFormExpansion::new(index.clone(), kw.clone(), f.bound.clone(), true, terms)?;
        let d = dev_coeff(&phi, n)?;
        for (m, t) in d.coeffs {
            coeffs.insert((gl.elements()[bi].clone(), m), t);
        }
    }
    Ok(TensorVVMF { group: gl, weight: &kw + int(n as i64), degree: n as usize, dim: dk, coeffs, bound: f.bound.clone() })
}

/// Checks that the lattice is `II_{1,1} + L(-1)` with the hyperbolic pair
/// as the first two basis vectors; returns `L`.
pub fn hyperbolic_tail(lat: &GramLattice) -> Result<GramLattice> {
    let g = lat.gram();
    let d = lat.dim();
    let ok = d >= 2 && g[0][0] == 0 && g[1][1] == 0 && g[0][1] == 1 && (2..d).all(|j| g[0][j] == 0 && g[1][j] == 0);
    if !ok {
        return Err(Error::Structural("the first two basis vectors must form a hyperbolic plane split".into()));
    }
    let tail: IntMatrix = (2..d).map(|i| (2..d).map(|j| -g[i][j]).collect()).collect();
    if tail.is_empty() {
        return Ok(GramLattice::zero_rank());
    }
    let l = GramLattice::new(tail)?;
    if !l.is_positive_definite() {
        return Err(Error::Signature("the complement of the hyperbolic plane must be negative definite".into()));
    }
    Ok(l)
}

/// The Fourier-Jacobi coefficients `phi_b` (`b >= 1`) of `F = sum phi_b s^b`.
/// For `nu = alpha e + beta f + x`, the term lands in `phi_alpha` at
/// `q^beta zeta^{-x/alpha}`, index `L(alpha)`.
pub fn fourier_jacobi(f: &OrthoFormExpansion) -> Result<Vec<(i64, JacobiFormExpansion)>> {
    let lat = f.lattice();
    let l = hyperbolic_tail(lat)?;
    let w0 = &f.region().w0;
    if w0[2..].iter().any(|x| !x.is_zero()) || !w0[0].is_positive() || !w0[1].is_positive() {
        return Err(Error::InvalidRegion("w0 must be a positive combination of the hyperbolic pair".into()));
    }
    // height <nu, w0> = w0[1] * beta + w0[0] * alpha
    let (wa, wb) = (&w0[1], &w0[0]);
    let bound = &f.region().bound;
    let mut out = Vec::new();
    let mut b = 1i64;
    loop {
        let jb = (bound - wb * int(b)) / wa;
        if jb.is_negative() {
            break;
        }
        let terms: Vec<_> = f
            .coeffs()
            .iter()
            .filter(|(nu, _)| nu[0] == int(b))
            .map(|(nu, c)| {
                let r: DualVector = nu[2..].iter().map(|x| -x / int(b)).collect();
                ((nu[1].clone(), r), c.clone())
            })
            .collect();
        let idx = if l.dim() == 0 { l.clone() } else { l.scaled(b)? };
        let phi = JacobiFormExpansion::new(idx, f.weight().clone(), jb, false, terms)?.with_multiplier(format!("rho_L({b})"));
        out.push((b, phi));
        b += 1;
    }
    Ok(out)
}

/// The `s^0` part: stored coefficients with `<nu, f> = 0`.
pub fn fourier_jacobi_zero(f: &OrthoFormExpansion) -> Result<Vec<(DualVector, Rational)>> {
    hyperbolic_tail(f.lattice())?;
    Ok(f.coeffs().iter().filter(|(nu, _)| nu[0].is_zero()).map(|(nu, c)| (nu.clone(), c.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram2() -> GramLattice {
        GramLattice::new(vec![vec![2]]).unwrap()
    }

    #[test]
    fn decompose_shifts_by_norm() {
        let phi = JacobiFormExpansion::new(
            gram2(),
            int(10),
            int(1),
            false,
            vec![((int(1), vec![rat(1, 2)]), int(1)), ((int(1), vec![rat(-1, 2)]), int(1))],
        )
        .unwrap();
        let f = theta_decompose(&phi).unwrap();
        let g = f.group().class_of(&[rat(1, 2)]);
        assert_eq!(f.coeff(&g, &rat(3, 4)), int(1));
        assert_eq!(f.weight(), &rat(19, 2));
    }

    #[test]
    fn lone_representative_is_malformed() {
        let phi = JacobiFormExpansion::new(gram2(), int(10), int(1), false, vec![((int(1), vec![rat(1, 2)]), int(1))]).unwrap();
        assert!(matches!(theta_decompose(&phi), Err(Error::MalformedJacobi(_))));
    }

    #[test]
    fn second_development_coefficient() {
        let phi = JacobiFormExpansion::new(gram2(), int(10), int(3), false, vec![((int(2), vec![int(1)]), int(1))]).unwrap();
        let d = dev_coeff(&phi, 2).unwrap();
        // k <r,v>^2 - n <v,v> with <r,v> = 2, <v,v> = 2
        assert_eq!(d.coeffs[&int(2)].get(&[0, 0]), &int(10 * 4 - 2 * 2));
    }
}

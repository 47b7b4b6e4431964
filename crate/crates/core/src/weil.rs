//! Exact cyclotomic numbers and the Weil representation of a discriminant
//! form, with the intertwiners between a lattice and a full-rank sublattice.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{discriminant_group, frac, DiscriminantGroup, GramLattice};
use crate::linalg::{self, IntMatrix};
use crate::series::{int, Rational};

/// Element of `Q(zeta_n)`, stored as its remainder modulo the `n`-th
/// cyclotomic polynomial so that equal numbers have equal coordinates.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    order: u64,
    coords: Vec<Rational>,
}

fn cyclotomic_poly(n: u64) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&n) {
        return p.clone();
    }
    let p = cyclotomic_poly_uncached(n);
    cache.lock().expect("cache lock").insert(n, p.clone());
    p
}

fn cyclotomic_poly_uncached(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for all proper divisors d.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    q
}

/// Remainder of a polynomial in `zeta_n` modulo `Phi_n`.
fn reduce(order: u64, mut r: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_poly(order);
    let deg = phi.len() - 1;
    for i in (deg..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut r[i]);
        for (j, pj) in phi[..deg].iter().enumerate() {
            if *pj != 0 {
                r[i - deg + j] -= &c * int(*pj);
            }
        }
    }
    r.resize(deg, Rational::zero());
    r
}

impl CyclotomicNumber {
    fn from_poly(order: u64, poly: Vec<Rational>) -> Self {
        CyclotomicNumber { order, coords: reduce(order, poly) }
    }

    pub fn zero(order: u64) -> Self {
        Self::from_poly(order, Vec::new())
    }

    pub fn rational(order: u64, q: Rational) -> Self {
        Self::from_poly(order, vec![q])
    }

    pub fn one(order: u64) -> Self {
        Self::rational(order, int(1))
    }

    /// `zeta_order^k`.
    pub fn zeta(order: u64, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut p = vec![Rational::zero(); k + 1];
        p[k] = int(1);
        Self::from_poly(order, p)
    }

    /// `e(x) = exp(2 pi i x)`; `order * x` must be an integer.
    pub fn e(order: u64, x: &Rational) -> Result<Self> {
        let k = x * int(order as i64);
        if !k.is_integer() {
            return Err(Error::Invalid(format!("e({x}) is not an {order}-th root of unity")));
        }
        Ok(Self::zeta(order, k.to_integer().to_i64().expect("small exponent")))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coordinates in the power basis `1, zeta, ..., zeta^(phi(n)-1)`.
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The same number written in `Q(zeta_m)`, `order | m`.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.order == 0, "order must divide the target order");
        if m == self.order {
            return self.clone();
        }
        let f = (m / self.order) as usize;
        let mut p = vec![Rational::zero(); self.coords.len().saturating_sub(1) * f + 1];
        for (k, c) in self.coords.iter().enumerate() {
            p[k * f] = c.clone();
        }
        Self::from_poly(m, p)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.lift(m), other.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicNumber { order: self.order, coords: self.coords.iter().map(|c| c * q).collect() }
    }

    /// Complex conjugate (`zeta -> zeta^-1`).
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut p = vec![Rational::zero(); n];
        for (k, c) in self.coords.iter().enumerate() {
            p[(n - k) % n] = c.clone();
        }
        Self::from_poly(self.order, p)
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coords == other.coords;
        }
        let (a, b) = self.common(other);
        a.coords == b.coords
    }
}

impl Eq for CyclotomicNumber {}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, o: &CyclotomicNumber) -> CyclotomicNumber {
        if self.order == o.order {
            let coords = self.coords.iter().zip(&o.coords).map(|(x, y)| x + y).collect();
            return CyclotomicNumber { order: self.order, coords };
        }
        let (a, b) = self.common(o);
        &a + &b
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, o: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-o)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { order: self.order, coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, o: &CyclotomicNumber) -> CyclotomicNumber {
        if self.order != o.order {
            let (a, b) = self.common(o);
            return &a * &b;
        }
        let mut p = vec![Rational::zero(); (self.coords.len() * 2).saturating_sub(1)];
        for (i, x) in self.coords.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in o.coords.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                p[i + j] += x * y;
            }
        }
        CyclotomicNumber::from_poly(self.order, p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeilGenerator {
    S,
    T,
}

/// `lcm(8, level)`: every constant of the representation lies in this field.
pub fn weil_field_order(g: &DiscriminantGroup) -> u64 {
    (8i64.lcm(&g.level())) as u64
}

/// `sum_gamma e(Q(gamma))`, which equals `sqrt|A| e(sigma/8)`.
pub fn gauss_sum(g: &DiscriminantGroup) -> CyclotomicNumber {
    let n = weil_field_order(g);
    let mut s = CyclotomicNumber::zero(n);
    for c in g.elements() {
        s = &s + &CyclotomicNumber::e(n, &g.q_value(c)).expect("level divides the field order");
    }
    s
}

/// Image of `v` (indexed like `g.elements()`) under a generator.
pub fn weil_action(g: &DiscriminantGroup, gen: WeilGenerator, v: &[CyclotomicNumber]) -> Result<Vec<CyclotomicNumber>> {
    if v.len() != g.order() {
        return Err(Error::Structural("vector length differs from the group order".into()));
    }
    let n = weil_field_order(g);
    let els = g.elements();
    match gen {
        WeilGenerator::T => els
            .iter()
            .zip(v)
            .map(|(c, x)| Ok(&CyclotomicNumber::e(n, &g.q_value(c))? * x))
            .collect(),
        WeilGenerator::S => {
            let factor = gauss_sum(g).conj().scale(&Rational::new(1.into(), (g.order() as i64).into()));
            let mut out = vec![CyclotomicNumber::zero(n); els.len()];
            for (i, gamma) in els.iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let vi = &factor * &v[i];
                for (j, beta) in els.iter().enumerate() {
                    let e = CyclotomicNumber::e(n, &frac(&-g.b_value(gamma, beta)))?;
                    out[j] = &out[j] + &(&vi * &e);
                }
            }
            Ok(out)
        }
    }
}

/// Columns `rho(gen) e_i`, indexed like `g.elements()`.
pub fn weil_matrix(g: &DiscriminantGroup, gen: WeilGenerator) -> Result<Vec<Vec<CyclotomicNumber>>> {
    let n = weil_field_order(g);
    let els = g.elements();
    let zero = CyclotomicNumber::zero(n);
    match gen {
        WeilGenerator::T => els
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut col = vec![zero.clone(); els.len()];
                col[i] = CyclotomicNumber::e(n, &g.q_value(c))?;
                Ok(col)
            })
            .collect(),
        WeilGenerator::S => {
            let factor = gauss_sum(g).conj().scale(&Rational::new(1.into(), (g.order() as i64).into()));
            let powers: Vec<CyclotomicNumber> =
                (0..n as i64).map(|k| &factor * &CyclotomicNumber::zeta(n, -k)).collect();
            els.iter()
                .map(|gamma| {
                    els.iter()
                        .map(|beta| {
                            let k = frac(&g.b_value(gamma, beta)) * int(n as i64);
                            Ok(powers[k.to_integer().to_usize().expect("level divides the field order")].clone())
                        })
                        .collect()
                })
                .collect()
        }
    }
}

/// The pair of intertwiners between `Lambda` and a full-rank sublattice
/// `M` (given by a basis in `Lambda` coordinates).
#[derive(Clone, Debug)]
pub struct Intertwiner {
    big: DiscriminantGroup,
    small: DiscriminantGroup,
    basis: IntMatrix,
    /// For each element of `M'/M`, its image in `Lambda'/Lambda` if the
    /// representative lies in `Lambda'`.
    up: Vec<Option<usize>>,
}

impl Intertwiner {
    pub fn new(ambient: &GramLattice, basis: IntMatrix) -> Result<Self> {
        if basis.len() != ambient.dim() || linalg::determinant(&linalg::to_rational(&basis)).is_zero() {
            return Err(Error::Structural("sublattice is not of full rank".into()));
        }
        let small_lattice = ambient.restrict(&basis)?;
        Self::with_lattices(ambient, small_lattice, basis)
    }

    fn with_lattices(ambient: &GramLattice, small_lattice: GramLattice, basis: IntMatrix) -> Result<Self> {
        let big = discriminant_group(ambient)?;
        let small = discriminant_group(&small_lattice)?;
        let bt = linalg::transpose(&linalg::to_rational(&basis));
        let up = small
            .elements()
            .iter()
            .map(|d| {
                let x = linalg::mat_vec(&bt, &small.representative(d));
                ambient.is_dual(&x).then(|| big.index_of(&big.class_of(&x)))
            })
            .collect();
        Ok(Intertwiner { big, small, basis, up })
    }

    /// For a split `L + L^perp`, the sublattice with basis `sub` followed by
    /// `complement`.
    pub fn for_split(split: &crate::lattice::SublatticeSplit) -> Result<Self> {
        let mut basis = split.sub.clone();
        basis.extend(split.complement.iter().cloned());
        if basis.len() != split.ambient.dim() {
            return Err(Error::Structural("the split is not of full rank".into()));
        }
        let small = split.sub_lattice().direct_sum(split.complement_lattice());
        Self::with_lattices(&split.ambient, small, basis)
    }

    pub fn big(&self) -> &DiscriminantGroup {
        &self.big
    }

    pub fn small(&self) -> &DiscriminantGroup {
        &self.small
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Image of the small-group element with index `i`, if any.
    pub fn image(&self, i: usize) -> Option<usize> {
        self.up[i]
    }

    /// `e_gamma -> sum_{delta + Lambda = gamma} e_delta`.
    pub fn down<T: Clone>(&self, v: &[T], zero: &T) -> Vec<T> {
        self.up.iter().map(|u| u.map(|g| v[g].clone()).unwrap_or_else(|| zero.clone())).collect()
    }

    /// `e_delta -> e_{delta + Lambda}` if `delta` is in `Lambda'`, else 0.
    pub fn up<T: Clone>(&self, v: &[T], zero: &T, add: impl Fn(&T, &T) -> T) -> Vec<T> {
        let mut out = vec![zero.clone(); self.big.order()];
        for (i, u) in self.up.iter().enumerate() {
            if let Some(g) = u {
                out[*g] = add(&out[*g], &v[i]);
            }
        }
        out
    }
}

/// The contraction `e_beta (x) e_gamma (x) e_delta -> [gamma = delta] e_beta`
/// from `C[L'/L] (x) C[Lambda'/Lambda] (x) C[Lambda(-1)'/Lambda(-1)]`, with
/// entries indexed by the element positions of the respective groups.
pub fn trace_map<T: Clone>(
    l: &DiscriminantGroup,
    lam: &DiscriminantGroup,
    lam_neg: &DiscriminantGroup,
    x: &std::collections::BTreeMap<(usize, usize, usize), T>,
    zero: &T,
    add: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let ident: Vec<usize> =
        lam_neg.elements().iter().map(|d| lam.index_of(&lam.class_of(&lam_neg.representative(d)))).collect();
    let mut out = vec![zero.clone(); l.order()];
    for ((b, g, d), v) in x {
        if ident[*d] == *g {
            out[*b] = add(&out[*b], v);
        }
    }
    out
}

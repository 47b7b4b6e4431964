//! Even lattices given by Gram matrices, their duals, discriminant groups,
//! orthogonal splits and dual-vector enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, RatMatrix};
use crate::series::{int, Rational};

/// A vector of the rational span given by its coordinates in the lattice
/// basis. Elements of `L'` are exactly those with `S x` integral.
pub type DualVector = Vec<Rational>;

pub fn to_rational_vec(v: &[i64]) -> DualVector {
    v.iter().map(|&x| int(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    signature: (usize, usize),
    nullity: usize,
    inverse: Option<RatMatrix>,
}

impl GramLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural("Gram matrix must be square".into()));
            }
            if row[i] % 2 != 0 {
                return Err(Error::Structural(format!("diagonal entry {} is odd", row[i])));
            }
            for j in 0..n {
                if gram[j][i] != row[j] {
                    return Err(Error::Structural("Gram matrix must be symmetric".into()));
                }
            }
        }
        let q = linalg::to_rational(&gram);
        let (p, m, z) = linalg::inertia(&q);
        let inverse = if z == 0 { linalg::inverse(&q) } else { None };
        Ok(GramLattice { gram, signature: (p, m), nullity: z, inverse })
    }

    /// Like [`GramLattice::new`] but also checks a claimed signature.
    pub fn with_signature(gram: IntMatrix, signature: (usize, usize)) -> Result<Self> {
        let l = Self::new(gram)?;
        if l.signature != signature {
            return Err(Error::Signature(format!("claimed {signature:?}, Sylvester gives {:?}", l.signature)));
        }
        Ok(l)
    }

    pub fn zero_rank() -> Self {
        GramLattice { gram: Vec::new(), signature: (0, 0), nullity: 0, inverse: Some(Vec::new()) }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nullity == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.nullity == 0 && self.signature.1 == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.nullity == 0 && self.signature.0 == 0
    }

    pub fn is_lorentzian(&self) -> bool {
        self.nullity == 0 && self.signature.0 == 1
    }

    pub fn inverse_gram(&self) -> Result<&RatMatrix> {
        self.inverse.as_ref().ok_or_else(|| Error::Degenerate("singular Gram matrix".into()))
    }

    pub fn det(&self) -> Rational {
        linalg::determinant(&linalg::to_rational(&self.gram))
    }

    /// `S x`, the vector of pairings with the basis.
    pub fn pairings(&self, x: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&linalg::to_rational(&self.gram), x)
    }

    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && !yj.is_zero() {
                    s += xi * yj * int(g);
                }
            }
        }
        s
    }

    /// `Q(x) = x^T S x / 2`.
    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.bilinear(x, x) / int(2)
    }

    pub fn is_dual(&self, x: &[Rational]) -> bool {
        self.pairings(x).iter().all(|v| v.is_integer())
    }

    /// Dual vector with prescribed pairings `y = S x`.
    pub fn from_pairings(&self, y: &[Rational]) -> Result<DualVector> {
        Ok(linalg::mat_vec(self.inverse_gram()?, y))
    }

    /// `L(n)`: the same module with the form scaled by `n`.
    pub fn scaled(&self, n: i64) -> Result<Self> {
        Self::new(self.gram.iter().map(|r| r.iter().map(|x| x * n).collect()).collect())
    }

    pub fn negated(&self) -> Self {
        Self::new(self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect()).expect("negation of a valid Gram")
    }

    pub fn direct_sum(&self, other: &GramLattice) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut g = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            g[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            g[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        Self::new(g).expect("direct sum of valid Gram matrices")
    }

    /// Gram matrix of the sublattice spanned by the rows of `basis`.
    pub fn restrict(&self, basis: &IntMatrix) -> Result<Self> {
        let rows: Vec<DualVector> = basis.iter().map(|b| to_rational_vec(b)).collect();
        let g = rows
            .iter()
            .map(|x| {
                rows.iter()
                    .map(|y| self.bilinear(x, y).to_integer().to_i64().expect("small Gram entries"))
                    .collect()
            })
            .collect();
        Self::new(g)
    }
}

/// The finite quadratic module `L'/L`.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    lattice: GramLattice,
    orders: Vec<i64>,
    /// Rows of the Smith transform restricted to the nontrivial factors.
    transform: IntMatrix,
    generators: Vec<DualVector>,
    elements: Vec<Vec<i64>>,
    index: BTreeMap<Vec<i64>, usize>,
    level: i64,
    /// Generator pairings `<g_i, g_j>` as numerators over `2 * den`.
    pair: Vec<Vec<i64>>,
    den: i64,
}

/// An element of a discriminant group, in Smith coordinates.
pub type Coset = Vec<i64>;

pub fn discriminant_group(l: &GramLattice) -> Result<DiscriminantGroup> {
    if !l.is_nondegenerate() {
        return Err(Error::Degenerate("discriminant group of a singular Gram matrix".into()));
    }
    let n = l.dim();
    let (d, u) = if n == 0 { (Vec::new(), Vec::new()) } else { linalg::smith_left(l.gram()) };
    let uinv = if n == 0 { Vec::new() } else { linalg::int_inverse(&u) };
    let mut orders = Vec::new();
    let mut transform = Vec::new();
    let mut generators = Vec::new();
    for i in 0..n {
        if d[i] > 1 {
            orders.push(d[i]);
            transform.push(u[i].clone());
            let y: Vec<Rational> = (0..n).map(|r| int(uinv[r][i])).collect();
            generators.push(l.from_pairings(&y)?);
        }
    }
    let mut elements = vec![Vec::new()];
    for &o in &orders {
        elements = elements
            .into_iter()
            .flat_map(|e: Vec<i64>| {
                (0..o).map(move |x| {
                    let mut v = e.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let raw: Vec<Vec<Rational>> =
        generators.iter().map(|a| generators.iter().map(|b| l.bilinear(a, b)).collect()).collect();
    let half: Vec<Rational> = generators.iter().map(|a| l.norm(a)).collect();
    let den = raw.iter().flatten().chain(&half).fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let den = den.to_i64().expect("small denominator");
    let to_num = |x: &Rational| (x * int(2 * den)).to_integer().to_i64().expect("small pairing");
    let mut pair: Vec<Vec<i64>> = raw.iter().map(|r| r.iter().map(to_num).collect()).collect();
    for (i, h) in half.iter().enumerate() {
        pair[i][i] = to_num(h);
    }
    let mut g = DiscriminantGroup { lattice: l.clone(), orders, transform, generators, elements, index, level: 1, pair, den };
    g.level = g.compute_level();
    Ok(g)
}

impl DiscriminantGroup {
    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn generators(&self) -> &[DualVector] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Coset] {
        &self.elements
    }

    pub fn index_of(&self, c: &Coset) -> usize {
        self.index[c]
    }

    /// Smallest `N` with `N Q(gamma)` integral for every element.
    pub fn level(&self) -> i64 {
        self.level
    }

    fn compute_level(&self) -> i64 {
        let mut lev = BigInt::one();
        for e in &self.elements {
            let q = self.q_value(e);
            let den = q.denom().clone();
            lev = num_integer::Integer::lcm(&lev, &den);
        }
        lev.to_i64().expect("level fits in i64")
    }

    /// Class of a dual vector.
    pub fn class_of(&self, x: &[Rational]) -> Coset {
        let y = self.lattice.pairings(x);
        self.transform
            .iter()
            .zip(&self.orders)
            .map(|(row, &o)| {
                let mut s = Rational::zero();
                for (a, b) in row.iter().zip(&y) {
                    s += int(*a) * b;
                }
                assert!(s.is_integer(), "vector is not in the dual lattice");
                let v = s.to_integer().to_i64().expect("small coordinates");
                v.rem_euclid(o)
            })
            .collect()
    }

    pub fn representative(&self, c: &Coset) -> DualVector {
        let n = self.lattice.dim();
        let mut v = vec![Rational::zero(); n];
        for (k, g) in c.iter().zip(&self.generators) {
            for i in 0..n {
                v[i] += int(*k) * &g[i];
            }
        }
        v
    }

    /// `Q(gamma) mod 1`, normalized to `[0, 1)`.
    pub fn q_value(&self, c: &Coset) -> Rational {
        // The diagonal of `pair` holds Q(g_i); off-diagonal pairs appear twice.
        let mut s: i128 = 0;
        for (i, a) in c.iter().enumerate() {
            s += (*a as i128) * (*a as i128) * self.pair[i][i] as i128;
            for (j, b) in c.iter().enumerate().skip(i + 1) {
                s += (*a as i128) * (*b as i128) * self.pair[i][j] as i128;
            }
        }
        self.reduce_mod_one(s)
    }

    /// `<gamma, delta> mod 1`, normalized to `[0, 1)`.
    pub fn b_value(&self, c: &Coset, d: &Coset) -> Rational {
        let mut s: i128 = 0;
        for (i, a) in c.iter().enumerate() {
            for (j, b) in d.iter().enumerate() {
                let p = if i == j { 2 * self.pair[i][i] } else { self.pair[i][j] };
                s += (*a as i128) * (*b as i128) * p as i128;
            }
        }
        self.reduce_mod_one(s)
    }

    fn reduce_mod_one(&self, s: i128) -> Rational {
        let m = 2 * self.den as i128;
        Rational::new(BigInt::from(s.rem_euclid(m)), BigInt::from(m))
    }

    pub fn add(&self, a: &Coset, b: &Coset) -> Coset {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), o)| (x + y).rem_euclid(*o)).collect()
    }

    pub fn neg(&self, a: &Coset) -> Coset {
        a.iter().zip(&self.orders).map(|(x, o)| (-x).rem_euclid(*o)).collect()
    }

    pub fn zero(&self) -> Coset {
        vec![0; self.orders.len()]
    }
}

pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// An orthogonal decomposition `L + L^perp` of (a finite-index sublattice of)
/// an ambient lattice, with rational projections.
#[derive(Clone, Debug)]
pub struct SublatticeSplit {
    pub ambient: GramLattice,
    pub sub: IntMatrix,
    pub complement: IntMatrix,
    sub_lattice: GramLattice,
    complement_lattice: GramLattice,
    /// Maps ambient coordinates to coordinates in the `sub` basis.
    to_sub: RatMatrix,
    to_complement: RatMatrix,
}

impl SublatticeSplit {
    /// Split with explicitly chosen bases (rows in ambient coordinates).
    pub fn new(ambient: &GramLattice, sub: IntMatrix, complement: IntMatrix) -> Result<Self> {
        let n = ambient.dim();
        if sub.iter().chain(&complement).any(|v| v.len() != n) {
            return Err(Error::Structural("basis vectors must have ambient length".into()));
        }
        for x in &sub {
            for y in &complement {
                if !ambient.bilinear(&to_rational_vec(x), &to_rational_vec(y)).is_zero() {
                    return Err(Error::Structural("sublattice and complement are not orthogonal".into()));
                }
            }
        }
        let sub_lattice = ambient.restrict(&sub)?;
        let complement_lattice = ambient.restrict(&complement)?;
        if !sub_lattice.is_nondegenerate() || !complement_lattice.is_nondegenerate() {
            return Err(Error::Degenerate("the form restricted to the split is degenerate".into()));
        }
        let coord_map = |basis: &IntMatrix, l: &GramLattice| -> Result<RatMatrix> {
            // coordinates c = G^{-1} B S x
            let bs = linalg::mat_mul(&linalg::to_rational(basis), &linalg::to_rational(ambient.gram()));
            Ok(linalg::mat_mul(l.inverse_gram()?, &bs))
        };
        let to_sub = coord_map(&sub, &sub_lattice)?;
        let to_complement = coord_map(&complement, &complement_lattice)?;
        Ok(SublatticeSplit { ambient: ambient.clone(), sub, complement, sub_lattice, complement_lattice, to_sub, to_complement })
    }

    pub fn sub_lattice(&self) -> &GramLattice {
        &self.sub_lattice
    }

    pub fn complement_lattice(&self) -> &GramLattice {
        &self.complement_lattice
    }

    /// Coordinates of the projection to `L (x) Q` in the `sub` basis.
    pub fn sub_coords(&self, x: &[Rational]) -> DualVector {
        linalg::mat_vec(&self.to_sub, x)
    }

    pub fn complement_coords(&self, x: &[Rational]) -> DualVector {
        linalg::mat_vec(&self.to_complement, x)
    }

    pub fn sub_to_ambient(&self, c: &[Rational]) -> DualVector {
        combine(&self.sub, c, self.ambient.dim())
    }

    pub fn complement_to_ambient(&self, c: &[Rational]) -> DualVector {
        combine(&self.complement, c, self.ambient.dim())
    }

    /// Projection matrix onto `L (x) Q`, acting on ambient coordinates.
    pub fn projection_sub(&self) -> RatMatrix {
        linalg::mat_mul(&linalg::transpose(&linalg::to_rational(&self.sub)), &self.to_sub)
    }

    pub fn projection_complement(&self) -> RatMatrix {
        linalg::mat_mul(&linalg::transpose(&linalg::to_rational(&self.complement)), &self.to_complement)
    }
}

fn combine(basis: &IntMatrix, c: &[Rational], n: usize) -> DualVector {
    let mut v = vec![Rational::zero(); n];
    for (b, ci) in basis.iter().zip(c) {
        if ci.is_zero() {
            continue;
        }
        for i in 0..n {
            if b[i] != 0 {
                v[i] += ci * int(b[i]);
            }
        }
    }
    v
}

/// Splits off the saturated orthogonal complement of the span of `sub`.
pub fn orthogonal_complement(ambient: &GramLattice, sub: &IntMatrix) -> Result<SublatticeSplit> {
    let n = ambient.dim();
    let rows: IntMatrix = sub
        .iter()
        .map(|v| {
            (0..n)
                .map(|j| (0..n).map(|i| v[i] * ambient.gram()[i][j]).sum())
                .collect()
        })
        .collect();
    let complement = linalg::integer_kernel(&rows, n);
    SublatticeSplit::new(ambient, sub.clone(), complement)
}

/// Finite regions of the dual lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualRegion {
    /// `|Q(x)| <= bound` on a definite lattice.
    Definite { bound: Rational },
    /// Closure of the positive-cone component containing `w0`, cut at
    /// height `<x, w0> <= bound`.
    Cone { w0: DualVector, bound: Rational },
}

/// Upper bound for `sqrt(x)` as an exact rational (`x >= 0`).
fn sqrt_upper(x: &Rational) -> Rational {
    let scale = BigInt::from(1u64 << 20);
    let scaled = (x * Rational::from_integer(&scale * &scale)).ceil().to_integer();
    let r = scaled.sqrt() + BigInt::one();
    Rational::new(r, scale)
}

fn box_scan(l: &GramLattice, lo: &[BigInt], hi: &[BigInt], keep: &mut dyn FnMut(DualVector)) -> Result<()> {
    let n = l.dim();
    let inv = l.inverse_gram()?.clone();
    let mut y: Vec<BigInt> = lo.to_vec();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Ok(());
    }
    loop {
        let yr: Vec<Rational> = y.iter().map(|v| Rational::from_integer(v.clone())).collect();
        keep(linalg::mat_vec(&inv, &yr));
        let mut i = 0;
        loop {
            if i == n {
                return Ok(());
            }
            if y[i] < hi[i] {
                y[i] += 1;
                break;
            }
            y[i] = lo[i].clone();
            i += 1;
        }
    }
}

/// All dual vectors in `region`, sorted and without duplicates.
pub fn enumerate_dual(l: &GramLattice, region: &DualRegion) -> Result<Vec<DualVector>> {
    let n = l.dim();
    let mut out = Vec::new();
    if n == 0 {
        let ok = match region {
            DualRegion::Definite { bound } => !bound.is_negative(),
            DualRegion::Cone { bound, .. } => !bound.is_negative(),
        };
        if ok {
            out.push(Vec::new());
        }
        return Ok(out);
    }
    match region {
        DualRegion::Definite { bound } => {
            let sign = if l.is_positive_definite() {
                int(1)
            } else if l.is_negative_definite() {
                int(-1)
            } else {
                return Err(Error::InvalidRegion("definite enumeration on an indefinite lattice".into()));
            };
            if bound.is_negative() {
                return Ok(out);
            }
            // |<x, e_i>|^2 <= 4 |Q(x)| |Q(e_i)|
            let mut lo = Vec::with_capacity(n);
            let mut hi = Vec::with_capacity(n);
            for i in 0..n {
                let qe = int(l.gram()[i][i].abs()) / int(2);
                let r = sqrt_upper(&(int(4) * bound * qe)).floor().to_integer();
                lo.push(-r.clone());
                hi.push(r);
            }
            box_scan(l, &lo, &hi, &mut |x| {
                if &(&sign * l.norm(&x)) <= bound {
                    out.push(x);
                }
            })?;
        }
        DualRegion::Cone { w0, bound } => {
            if w0.len() != n {
                return Err(Error::InvalidRegion("w0 has the wrong dimension".into()));
            }
            let qw = l.norm(w0);
            if !l.is_lorentzian() || !qw.is_positive() {
                return Err(Error::InvalidRegion("w0 must have positive norm in a Lorentzian lattice".into()));
            }
            if bound.is_negative() {
                return Ok(out);
            }
            let mut lo = Vec::with_capacity(n);
            let mut hi = Vec::with_capacity(n);
            for i in 0..n {
                let mut e = vec![Rational::zero(); n];
                e[i] = int(1);
                let pair = l.bilinear(w0, &e);
                let c = &pair / (int(2) * &qw);
                let mut eperp = e.clone();
                for k in 0..n {
                    eperp[k] -= &c * &w0[k];
                }
                let r = sqrt_upper(&(-l.norm(&eperp) / &qw));
                let a = bound * (&c - &r);
                let b = bound * (&c + &r);
                let low = if a.is_negative() { a } else { Rational::zero() };
                let high = if b.is_positive() { b } else { Rational::zero() };
                lo.push(low.floor().to_integer());
                hi.push(high.ceil().to_integer());
            }
            box_scan(l, &lo, &hi, &mut |x| {
                let h = l.bilinear(&x, w0);
                if !h.is_negative() && &h <= bound && !l.norm(&x).is_negative() {
                    out.push(x);
                }
            })?;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Membership in the closed positive cone determined by `w0`.
pub fn in_closed_cone(l: &GramLattice, w0: &[Rational], x: &[Rational]) -> bool {
    !l.norm(x).is_negative() && !l.bilinear(x, w0).is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn discriminant_examples() {
        let h = GramLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(discriminant_group(&h).unwrap().order(), 1);

        let a1 = GramLattice::new(vec![vec![2]]).unwrap();
        let g = discriminant_group(&a1).unwrap();
        assert_eq!(g.order(), 2);
        let gamma = g.class_of(&[rat(1, 2)]);
        assert_ne!(gamma, g.zero());
        assert_eq!(g.q_value(&gamma), rat(1, 4));

        let a2 = GramLattice::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(discriminant_group(&a2).unwrap().order(), 3);
    }

    #[test]
    fn singular_gram_is_degenerate() {
        let l = GramLattice::new(vec![vec![2, 2], vec![2, 2]]).unwrap();
        assert!(matches!(discriminant_group(&l), Err(Error::Degenerate(_))));
    }

    #[test]
    fn complement_in_diagonal_lattice() {
        let l = GramLattice::new(vec![vec![2, 0], vec![0, -2]]).unwrap();
        let s = orthogonal_complement(&l, &vec![vec![1, 0]]).unwrap();
        assert_eq!(s.complement.len(), 1);
        assert_eq!(s.complement[0][0], 0);
        assert_eq!(s.complement[0][1].abs(), 1);
    }

    #[test]
    fn enumerate_a1_small_ball() {
        let l = GramLattice::new(vec![vec![2]]).unwrap();
        let v = enumerate_dual(&l, &DualRegion::Definite { bound: int(1) }).unwrap();
        let expect: Vec<DualVector> =
            vec![vec![int(-1)], vec![rat(-1, 2)], vec![int(0)], vec![rat(1, 2)], vec![int(1)]];
        assert_eq!(v, expect);
        assert!(enumerate_dual(&l, &DualRegion::Definite { bound: int(-1) }).unwrap().is_empty());
    }

    #[test]
    fn enumerate_hyperbolic_cone() {
        let l = GramLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let v = enumerate_dual(&l, &DualRegion::Cone { w0: vec![int(1), int(1)], bound: int(2) }).unwrap();
        let mut expect = Vec::new();
        for a in 0..=2i64 {
            for b in 0..=2i64 {
                if a + b <= 2 {
                    expect.push(vec![int(a), int(b)]);
                }
            }
        }
        expect.sort();
        assert_eq!(v, expect);
    }

    #[test]
    fn cone_region_needs_positive_w0() {
        let l = GramLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let r = enumerate_dual(&l, &DualRegion::Cone { w0: vec![int(1), int(-1)], bound: int(2) });
        assert!(matches!(r, Err(Error::InvalidRegion(_))));
    }
}

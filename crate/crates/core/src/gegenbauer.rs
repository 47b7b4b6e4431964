//! Homogenized Gegenbauer polynomials `G_N^s(x, y)`, their multilinear
//! (tensor-valued) versions, and polarization of homogeneous forms.
//!
//! With `c = ceil(N/2)` the coefficient of `x^{n2} y^{n1}` (`2 n1 + n2 = N`)
//! in `G_N^s` is `(-1)^{n1} N!/(n1! n2!) * (s+c)(s+c+1)...(s+n1+n2-1)`.
//! Because `n1 <= floor(N/2)` the rising factorial always has nonnegative
//! length, so `G_N^s` is a polynomial in `s` and no Gamma value is needed.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::series::{factorial, int, pow, rising_factorial, Rational};

fn ceil_half(n: u32) -> u32 {
    n.div_ceil(2)
}

/// Coefficient of `x^{N-2 n1} y^{n1}` in `G_N^s`.
pub fn coefficient(n: u32, n1: u32, s: &Rational) -> Rational {
    assert!(2 * n1 <= n);
    let n2 = n - 2 * n1;
    let c = ceil_half(n);
    let sign = if n1 % 2 == 0 { int(1) } else { int(-1) };
    let multinomial = Rational::new(factorial(n), factorial(n1) * factorial(n2));
    sign * multinomial * rising_factorial(&(s + int(c as i64)), n1 + n2 - c)
}

/// Coefficient of `x^{N-2 n1} y^{n1}` in the classical Gegenbauer
/// polynomial `g_N^s`, the coefficient of `t^N` in `(1 - x t + y t^2)^{-s}`.
pub fn classical_coefficient(n: u32, n1: u32, s: &Rational) -> Rational {
    let n2 = n - 2 * n1;
    let sign = if n1 % 2 == 0 { int(1) } else { int(-1) };
    sign * rising_factorial(s, n1 + n2) / Rational::from_integer(factorial(n1) * factorial(n2))
}

/// The coefficients of `G_N^s` as polynomials in `s` (lowest degree first),
/// keyed by `n1`.
pub fn coefficient_polynomials(n: u32) -> BTreeMap<u32, Vec<Rational>> {
    let c = ceil_half(n);
    let mut out = BTreeMap::new();
    for n1 in 0..=n / 2 {
        let n2 = n - 2 * n1;
        let sign = if n1 % 2 == 0 { int(1) } else { int(-1) };
        let mut poly = vec![sign * Rational::new(factorial(n), factorial(n1) * factorial(n2))];
        for i in 0..(n1 + n2 - c) {
            // multiply by (s + c + i)
            let a = int((c + i) as i64);
            let mut next = vec![Rational::zero(); poly.len() + 1];
            for (k, p) in poly.iter().enumerate() {
                next[k] += p * &a;
                next[k + 1] += p;
            }
            poly = next;
        }
        out.insert(n1, poly);
    }
    out
}

/// `G_N^s` specialized at a value of `s`: the map `n1 -> coefficient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GegenbauerScalar {
    pub n: u32,
    pub terms: BTreeMap<u32, Rational>,
}

impl GegenbauerScalar {
    pub fn new(n: u32, s: &Rational) -> Self {
        GegenbauerScalar { n, terms: (0..=n / 2).map(|n1| (n1, coefficient(n, n1, s))).collect() }
    }

    pub fn classical(n: u32, s: &Rational) -> Self {
        GegenbauerScalar { n, terms: (0..=n / 2).map(|n1| (n1, classical_coefficient(n, n1, s))).collect() }
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&n1, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            acc += c * pow(x, self.n - 2 * n1) * pow(y, n1);
        }
        acc
    }
}

pub fn g_eval(n: u32, s: &Rational, x: &Rational, y: &Rational) -> Rational {
    GegenbauerScalar::new(n, s).eval(x, y)
}

/// A multilinear form of degree `N` on a `dim`-dimensional space, stored as
/// the full array of components `T(e_{i1}, ..., e_{iN})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorForm {
    degree: usize,
    dim: usize,
    comps: Vec<Rational>,
}

impl TensorForm {
    pub fn zero(degree: usize, dim: usize) -> Self {
        TensorForm { degree, dim, comps: vec![Rational::zero(); dim.pow(degree as u32)] }
    }

    pub fn scalar(c: Rational, dim: usize) -> Self {
        TensorForm { degree: 0, dim, comps: vec![c] }
    }

    pub fn from_fn(degree: usize, dim: usize, mut f: impl FnMut(&[usize]) -> Rational) -> Self {
        let comps = multi_indices(degree, dim).iter().map(|idx| f(idx)).collect();
        TensorForm { degree, dim, comps }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &Rational {
        &self.comps[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Rational) {
        let o = self.offset(idx);
        self.comps[o] = v;
    }

    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> {
        multi_indices(self.degree, self.dim).into_iter().zip(self.comps.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TensorForm { degree: self.degree, dim: self.dim, comps: self.comps.iter().map(|x| x * c).collect() }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &TensorForm, c: &Rational) {
        assert_eq!((self.degree, self.dim), (other.degree, other.dim), "tensor shapes differ");
        for (x, y) in self.comps.iter_mut().zip(&other.comps) {
            if !y.is_zero() {
                *x += y * c;
            }
        }
    }

    /// `T(v_1, ..., v_N)`.
    pub fn eval(&self, vs: &[Vec<Rational>]) -> Result<Rational> {
        if vs.len() != self.degree || vs.iter().any(|v| v.len() != self.dim) {
            return Err(Error::Structural(format!(
                "expected {} vectors of length {}",
                self.degree, self.dim
            )));
        }
        let mut acc = Rational::zero();
        for (idx, c) in self.components() {
            if c.is_zero() {
                continue;
            }
            let mut t = c.clone();
            for (v, &i) in vs.iter().zip(&idx) {
                if v[i].is_zero() {
                    t = Rational::zero();
                    break;
                }
                t *= &v[i];
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn diagonal(&self, v: &[Rational]) -> Result<Rational> {
        self.eval(&vec![v.to_vec(); self.degree])
    }

    pub fn is_symmetric(&self) -> bool {
        self.components().all(|(idx, c)| {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            self.get(&sorted) == c
        })
    }
}

/// All index tuples of length `degree` over `0..dim`, in row-major order.
pub fn multi_indices(degree: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..degree {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..dim).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

/// Sum over the ways of splitting the slots `idx` into `singles` singletons
/// (weighted by `r`) and pairs (weighted by `m`), with the number of ways.
fn pairing_sum(idx: &[usize], singles: usize, r: &[Rational], m: &RatMatrix) -> (Rational, u64) {
    if idx.is_empty() {
        return (Rational::one(), 1);
    }
    let (first, rest) = (idx[0], &idx[1..]);
    let mut total = Rational::zero();
    let mut count = 0;
    if singles > 0 {
        let (s, c) = pairing_sum(rest, singles - 1, r, m);
        total += &r[first] * s;
        count += c;
    }
    if rest.len() > singles {
        for j in 0..rest.len() {
            let mut remaining = rest.to_vec();
            let partner = remaining.remove(j);
            let (s, c) = pairing_sum(&remaining, singles, r, m);
            total += &m[first][partner] * s;
            count += c;
        }
    }
    (total, count)
}

/// The symmetrized coefficient of `t^N` in `(1 - r t + m t^2)^{-s}`, rescaled
/// like `G_N^s`: `sum_{n1} coefficient(N, n1, s) Sym(r^{n2} (x) m^{n1})`.
pub fn g_multilinear(n: u32, s: &Rational, r: &[Rational], m: &RatMatrix) -> Result<TensorForm> {
    let dim = r.len();
    if m.len() != dim || m.iter().any(|row| row.len() != dim) {
        return Err(Error::Structural(format!("bilinear form must be {dim}x{dim}")));
    }
    let coeffs: Vec<(usize, Rational)> =
        (0..=n / 2).map(|n1| ((n - 2 * n1) as usize, coefficient(n, n1, s))).collect();
    let mut cache: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    Ok(TensorForm::from_fn(n as usize, dim, |idx| {
        let mut key = idx.to_vec();
        key.sort_unstable();
        cache
            .entry(key.clone())
            .or_insert_with(|| {
                let mut acc = Rational::zero();
                for (n2, c) in &coeffs {
                    if c.is_zero() {
                        continue;
                    }
                    let (sum, count) = pairing_sum(&key, *n2, r, m);
                    acc += c * sum / int(count as i64);
                }
                acc
            })
            .clone()
    }))
}

/// Recovers the symmetric `N`-form whose diagonal is `diag`, by the
/// finite-difference polarization formula over subset sums of basis
/// vectors. The result is checked against `diag` on a few test vectors.
pub fn polarize<F>(mut diag: F, n: usize, dim: usize) -> Result<TensorForm>
where
    F: FnMut(&[Rational]) -> Result<Rational>,
{
    let mut memo: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    let mut eval = |v: Vec<Rational>, memo: &mut BTreeMap<Vec<Rational>, Rational>| -> Result<Rational> {
        if let Some(x) = memo.get(&v) {
            return Ok(x.clone());
        }
        let x = diag(&v)?;
        memo.insert(v, x.clone());
        Ok(x)
    };
    let nfact = Rational::from_integer(factorial(n as u32));
    let mut by_multiset: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut t = TensorForm::zero(n, dim);
    for idx in multi_indices(n, dim) {
        let mut key = idx.clone();
        key.sort_unstable();
        if !by_multiset.contains_key(&key) {
            let mut acc = Rational::zero();
            for mask in 0u32..(1 << n) {
                let mut v = vec![Rational::zero(); dim];
                for (j, &i) in key.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        v[i] += int(1);
                    }
                }
                let val = eval(v, &mut memo)?;
                if (n as u32 - mask.count_ones()) % 2 == 0 {
                    acc += val;
                } else {
                    acc -= val;
                }
            }
            by_multiset.insert(key.clone(), acc / &nfact);
        }
        t.set(&idx, by_multiset[&key].clone());
    }
    let probes: Vec<Vec<Rational>> = vec![
        (0..dim).map(|i| int(i as i64 + 1)).collect(),
        (0..dim).map(|i| int(if i % 2 == 0 { 2 } else { -3 })).collect(),
        (0..dim).map(|i| int(1 - 2 * (i as i64 * i as i64))).collect(),
    ];
    for v in probes {
        if t.diagonal(&v)? != eval(v.clone(), &mut memo)? {
            return Err(Error::InconsistentDiagonal(format!(
                "the polarized form does not reproduce the diagonal at {:?}",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            )));
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn first_order_is_identity_in_x() {
        assert_eq!(g_eval(1, &rat(5, 2), &int(3), &int(7)), int(3));
    }

    #[test]
    fn second_order_formula() {
        // (s+1) x^2 - 2 y at s = 3
        assert_eq!(g_eval(2, &int(3), &int(2), &int(5)), int(6));
    }

    #[test]
    fn vanishes_at_origin() {
        for n in 1..=8 {
            assert!(g_eval(n, &rat(7, 3), &int(0), &int(0)).is_zero());
        }
        assert_eq!(g_eval(0, &int(-13), &int(0), &int(0)), int(1));
    }

    #[test]
    fn multilinear_low_degrees() {
        let r = vec![int(2), int(-1)];
        let m = vec![vec![int(1), rat(1, 2)], vec![rat(1, 2), int(3)]];
        let s = rat(7, 2);
        let t1 = g_multilinear(1, &s, &r, &m).unwrap();
        assert_eq!(t1.get(&[0]), &int(2));
        assert_eq!(t1.get(&[1]), &int(-1));
        let t2 = g_multilinear(2, &s, &r, &m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = (&s + int(1)) * &r[i] * &r[j] - int(2) * &m[i][j];
                assert_eq!(t2.get(&[i, j]), &expect);
            }
        }
    }

    #[test]
    fn polarize_quadratic() {
        // Q(v) = v0^2 + v0 v1 + v1^2 has polar form B/2 with B = [[2,1],[1,2]]
        let q = |v: &[Rational]| Ok(&v[0] * &v[0] + &v[0] * &v[1] + &v[1] * &v[1]);
        let t = polarize(q, 2, 2).unwrap();
        assert_eq!(t.get(&[0, 0]), &int(1));
        assert_eq!(t.get(&[0, 1]), &rat(1, 2));
        assert_eq!(t.get(&[1, 1]), &int(1));
        let lin = |v: &[Rational]| Ok(int(3) * &v[0] - &v[1]);
        let t = polarize(lin, 1, 2).unwrap();
        assert_eq!(t.get(&[0]), &int(3));
        assert_eq!(t.get(&[1]), &int(-1));
    }

    #[test]
    fn polarize_rejects_wrong_degree() {
        let cubic = |v: &[Rational]| Ok(&v[0] * &v[0] * &v[0]);
        assert!(matches!(polarize(cubic, 2, 1), Err(Error::InconsistentDiagonal(_))));
    }
}

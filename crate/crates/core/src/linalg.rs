//! Small exact matrix routines: rational Gaussian elimination and integer
//! unimodular reductions (column echelon form, Smith form).

use num_traits::{One, Signed, Zero};

use crate::series::{int, Rational};

pub type IntMatrix = Vec<Vec<i64>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect()
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Rational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &RatMatrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            let mut s = Rational::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    s += x * y;
                }
            }
            s
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Inverse over the rationals, or `None` when singular.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(m: &RatMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &p;
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    det
}

/// Signature `(positive, negative, zero)` of a symmetric rational matrix,
/// by symmetric elimination (congruence), which preserves inertia.
pub fn inertia(m: &RatMatrix) -> (usize, usize, usize) {
    let mut a = m.clone();
    let n = a.len();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                // e_i <- e_i + e_j gives diagonal entry 2 a_ij.
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let piv = a[p][p].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &r in &active {
            if a[r][p].is_zero() {
                continue;
            }
            let f = &a[r][p] / &piv;
            for &c in &active {
                let v = &f * &a[p][c];
                a[r][c] -= v;
            }
        }
        for &r in &active {
            a[r][p] = Rational::zero();
            a[p][r] = Rational::zero();
        }
    }
    (pos, neg, n - pos - neg)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Integer basis (as rows) of `{v in Z^n : a v = 0}`. The basis spans a
/// saturated sublattice since it comes from a unimodular transform.
pub fn integer_kernel(a: &IntMatrix, n: usize) -> IntMatrix {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivot_col = 0;
    for row in 0..m.len() {
        if pivot_col >= n {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (pivot_col..n).filter(|&c| m[row][c] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let c = nonzero[0];
                swap_cols(&mut m, &mut u, pivot_col, c);
                pivot_col += 1;
                break;
            }
            let (c1, c2) = (nonzero[0], nonzero[1]);
            let (x, y) = (m[row][c1], m[row][c2]);
            let (g, s, t) = ext_gcd(x, y);
            let (p, q) = (x / g, y / g);
            // [c1 c2] <- [s*c1 + t*c2, -q*c1 + p*c2], determinant s p + t q = 1
            combine_cols(&mut m, &mut u, c1, c2, s, t, -q, p);
        }
    }
    (pivot_col..n).map(|c| u.iter().map(|r| r[c] as i64).collect()).collect()
}

fn swap_cols(m: &mut [Vec<i128>], u: &mut [Vec<i128>], a: usize, b: usize) {
    for r in m.iter_mut().chain(u.iter_mut()) {
        r.swap(a, b);
    }
}

#[allow(clippy::too_many_arguments)]
fn combine_cols(m: &mut [Vec<i128>], u: &mut [Vec<i128>], c1: usize, c2: usize, a: i128, b: i128, c: i128, d: i128) {
    for r in m.iter_mut().chain(u.iter_mut()) {
        let (x, y) = (r[c1], r[c2]);
        r[c1] = a * x + b * y;
        r[c2] = c * x + d * y;
    }
}

/// Smith form of a square nonsingular integer matrix: returns the
/// elementary divisors `d` and a unimodular `U` such that `U m V = diag(d)`
/// for some unimodular `V`.
pub fn smith_left(m: &IntMatrix) -> (Vec<i64>, IntMatrix) {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    for t in 0..n {
        loop {
            let Some((pr, pc)) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
            else {
                return (finish_diag(&a), to_i64(&u));
            };
            a.swap(t, pr);
            u.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in 0..n {
                        a[i][j] -= q * a[t][j];
                        u[i][j] -= q * u[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: pivot must divide the remaining block.
            let bad = (t + 1..n).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % a[t][t] != 0);
            match bad {
                Some((i, _)) => {
                    for j in 0..n {
                        a[t][j] += a[i][j];
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
    }
    (finish_diag(&a), to_i64(&u))
}

fn finish_diag(a: &[Vec<i128>]) -> Vec<i64> {
    (0..a.len()).map(|i| a[i][i].abs() as i64).collect()
}

fn to_i64(u: &[Vec<i128>]) -> IntMatrix {
    u.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

pub fn int_inverse(u: &IntMatrix) -> IntMatrix {
    let inv = inverse(&to_rational(u)).expect("unimodular matrix");
    inv.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix is not unimodular");
                    num_traits::ToPrimitive::to_i64(x.numer()).expect("entry fits in i64")
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row() {
        let k = integer_kernel(&vec![vec![2, 3, 0]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] + 3 * v[1], 0);
        }
    }

    #[test]
    fn smith_of_small_matrices() {
        let (d, _) = smith_left(&vec![vec![2, 1], vec![1, 2]]);
        let mut d = d;
        d.sort();
        assert_eq!(d, vec![1, 3]);
        let (d, u) = smith_left(&vec![vec![2, 0], vec![0, 4]]);
        assert_eq!(d.iter().product::<i64>(), 8);
        assert_eq!(int_inverse(&u).len(), 2);
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        assert_eq!(inertia(&to_rational(&vec![vec![0, 1], vec![1, 0]])), (1, 1, 0));
        assert_eq!(inertia(&to_rational(&vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]])), (1, 2, 0));
        assert_eq!(inertia(&to_rational(&vec![vec![2, 2], vec![2, 2]])), (1, 0, 1));
    }
}

//! Smith normal form of integer matrices with unimodular transforms,
//! over arbitrary-precision integers so that elimination never overflows.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Decomposition `U * A * V = D` with `U`, `V` unimodular and `D` diagonal
/// with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrixSnf {
    pub input: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
}

impl IntMatrixSnf {
    /// Diagonal entries of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let r = self.d.len();
        let c = self.d.first().map_or(0, |row| row.len());
        (0..r.min(c)).map(|i| self.d[i][i].clone()).collect()
    }

    /// Rank of the input matrix.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Recompute `U * A * V` and compare with `D`; also check the
    /// divisibility chain and that the transforms are unimodular.
    pub fn verify(&self) -> bool {
        let uav = mat_mul(&mat_mul(&self.u, &self.input), &self.v);
        if uav != self.d {
            return false;
        }
        let du = det_bareiss(&self.u);
        let dv = det_bareiss(&self.v);
        if du.magnitude() != &num_bigint::BigUint::one()
            || dv.magnitude() != &num_bigint::BigUint::one()
        {
            return false;
        }
        let diag = self.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() && !w[1].is_zero() {
                return false;
            }
            if !w[0].is_zero() && !(&w[1] % &w[0]).is_zero() {
                return false;
            }
        }
        // off-diagonal zeros
        for (i, row) in self.d.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if i != j && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = val;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form of a rectangular integer matrix. Returns the full
/// decomposition; `input` keeps a copy of the argument for verification.
pub fn smith_normal_form(rows: &[Vec<i64>]) -> IntMatrixSnf {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let input = m.clone();
    let mut u = identity(r);
    let mut v = identity(c);

    let mut t = 0;
    while t < r.min(c) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if m[i][j].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if m[i][j].abs() < m[pi][pj].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break; // remaining block is zero
        };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);

        // clear row and column of the pivot, restarting when a remainder
        // produces a smaller pivot
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = &m[i][t] / &m[t][t];
                row_sub(&mut m, i, t, &q);
                row_sub(&mut u, i, t, &q);
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = &m[t][j] / &m[t][t];
                col_sub(&mut m, j, t, &q);
                col_sub(&mut v, j, t, &q);
                if !m[t][j].is_zero() {
                    swap_cols(&mut m, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // divisibility: if some later entry is not divisible by the pivot,
        // fold its row into row t and redo the block
        let mut fixed = true;
        'scan: for i in t + 1..r {
            for j in t + 1..c {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    row_add(&mut m, t, i);
                    row_add(&mut u, t, i);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue; // re-run pivoting at the same t
        }

        if m[t][t].is_negative() {
            negate_row(&mut m, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }

    IntMatrixSnf {
        input,
        u,
        v,
        d: m,
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn row_sub(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(src.iter()) {
        *t -= q * s;
    }
}

fn row_add(m: &mut [Vec<BigInt>], target: usize, source: usize) {
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(src.iter()) {
        *t += s;
    }
}

fn negate_row(m: &mut [Vec<BigInt>], row: usize) {
    for e in m[row].iter_mut() {
        let v = -(&*e);
        *e = v;
    }
}

fn col_sub(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * &s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag_i64(snf: &IntMatrixSnf) -> Vec<i64> {
        snf.diagonal()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn identity_matrix() {
        let snf = smith_normal_form(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(diag_i64(&snf), vec![1, 1]);
        assert!(snf.verify());
    }

    #[test]
    fn worked_example() {
        // |det| = 8 factors as 2 * 4 with the divisibility chain
        let snf = smith_normal_form(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(diag_i64(&snf), vec![2, 4]);
        assert!(snf.verify());
    }

    #[test]
    fn zero_row_vector() {
        let snf = smith_normal_form(&[vec![0, 0]]);
        assert_eq!(diag_i64(&snf), vec![0]);
        assert_eq!(snf.rank(), 0);
        assert!(snf.verify());
    }

    #[test]
    fn rectangular_and_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let r = rng.random_range(1..=6);
            let c = rng.random_range(1..=6);
            let m: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.random_range(-20..=20)).collect())
                .collect();
            let snf = smith_normal_form(&m);
            assert!(snf.verify(), "failed on {m:?}");
        }
    }
}

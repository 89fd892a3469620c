//! Small dense exact matrices over the integers and rationals.

use num_traits::{One, Zero};

use crate::Q;

/// Square integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        IntMatrix { n, data }
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let rows: Vec<Vec<i64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        IntMatrix::from_rows(&rows)
    }

    /// Determinant by Bareiss fraction-free elimination. The empty matrix has determinant 1.
    pub fn det(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                    return 0;
                };
                for c in 0..n {
                    m.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            let pivot = m[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i * n + j] = (m[i * n + j] * pivot - m[i * n + k] * m[k * n + j]) / prev;
                }
            }
            prev = pivot;
        }
        i64::try_from(sign * m[n * n - 1]).expect("determinant overflows i64")
    }

    /// Exact inverse by Gauss-Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut a: Vec<Q> = self.data.iter().map(|&x| Q::from_integer(x)).collect();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                    inv.data.swap(p * n + c, col * n + c);
                }
            }
            let piv = a[col * n + col];
            for c in 0..n {
                a[col * n + c] /= piv;
                inv.data[col * n + c] /= piv;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col];
                for c in 0..n {
                    let av = a[col * n + c];
                    let iv = inv.data[col * n + c];
                    a[r * n + c] -= factor * av;
                    inv.data[r * n + c] -= factor * iv;
                }
            }
        }
        Some(inv)
    }

    /// `self * v` for a rational column vector.
    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Q::zero(), |acc, (&e, &x)| acc + x * e)
            })
            .collect()
    }

    /// `v^T * self` for a rational row vector.
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|j| (0..self.n).fold(Q::zero(), |acc, i| acc + v[i] * self.get(i, j)))
            .collect()
    }
}

/// Square rational matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Q>,
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Q::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Q::one();
        }
        RatMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.data[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    /// `v^T * self` for a rational row vector.
    pub fn vec_mul(&self, v: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|j| (0..self.n).fold(Q::zero(), |acc, i| acc + v[i] * self.get(i, j)))
            .collect()
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|i| (0..self.n).fold(Q::zero(), |acc, j| acc + self.get(i, j) * v[j]))
            .collect()
    }
}

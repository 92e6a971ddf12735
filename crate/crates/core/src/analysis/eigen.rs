//! Dense symmetric eigenvalues: Householder reduction to tridiagonal form
//! followed by implicit-shift QL.

use alloc::vec::Vec;

use crate::math;

const MAX_QL_ITERATIONS: usize = 60;

/// A row-major dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: alloc::vec![0.0; n * n],
        }
    }

    /// Takes the row-major entries as given; only the lower triangle is
    /// read by [`symmetric_eigenvalues`].
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Reduces `a` in place and returns the diagonal and sub-diagonal of the
/// similar tridiagonal matrix (`off[i]` couples `i` and `i + 1`; the last
/// entry is zero).
#[allow(clippy::needless_range_loop)]
fn tridiagonalize(a: &mut SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    // Work on a full symmetric copy built from the lower triangle.
    for i in 0..n {
        for j in 0..i {
            let v = a.get(i, j);
            a.set(j, i, v);
        }
    }
    let mut v = alloc::vec![0.0; n];
    let mut p = alloc::vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let norm = math::sqrt((lo..n).map(|i| a.get(i, k) * a.get(i, k)).sum());
        if norm == 0.0 {
            continue;
        }
        let x0 = a.get(lo, k);
        let alpha = if x0 > 0.0 { -norm } else { norm };
        for i in lo..n {
            v[i] = a.get(i, k);
        }
        v[lo] -= alpha;
        let vnorm = math::sqrt((lo..n).map(|i| v[i] * v[i]).sum());
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut().take(n).skip(lo) {
            *vi /= vnorm;
        }
        // B ← B − 2(v wᵀ + w vᵀ), w = Bv − (vᵀBv) v.
        for i in lo..n {
            p[i] = (lo..n).map(|j| a.get(i, j) * v[j]).sum();
        }
        let c: f64 = (lo..n).map(|i| v[i] * p[i]).sum();
        for i in lo..n {
            p[i] -= c * v[i];
        }
        for i in lo..n {
            for j in lo..n {
                let upd = a.get(i, j) - 2.0 * (v[i] * p[j] + p[i] * v[j]);
                a.set(i, j, upd);
            }
        }
        a.set(lo, k, alpha);
        a.set(k, lo, alpha);
        for i in (lo + 1)..n {
            a.set(i, k, 0.0);
            a.set(k, i, 0.0);
        }
    }
    let diag = (0..n).map(|i| a.get(i, i)).collect();
    let mut off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| a.get(i + 1, i)).collect();
    off.push(0.0);
    (diag, off)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues are left
/// in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<(), NoConvergence> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoConvergence;

/// All eigenvalues of a symmetric matrix in ascending order. Only the lower
/// triangle of `m` is read.
pub fn symmetric_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>, NoConvergence> {
    let mut a = m.clone();
    let (mut d, mut e) = tridiagonalize(&mut a);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

//! Symmetric banded matrices, with an optional periodic wrap-around.
//!
//! Entries are stored by row and lower offset: `band[i * (b + 1) + d]` holds
//! `A[i][i - d]` (indices taken modulo `n` for periodic matrices). Periodic
//! systems are solved by splitting off the corner blocks and applying the
//! Sherman–Morrison–Woodbury identity around a banded Cholesky factor.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BandedMatrix {
    n: usize,
    bw: usize,
    periodic: bool,
    band: Vec<f64>,
}

impl BandedMatrix {
    /// Zero matrix of order `n` and half-bandwidth `bw`.
    pub fn zeros(n: usize, bw: usize, periodic: bool) -> Result<BandedMatrix> {
        if n == 0 {
            return Err(Error::InvalidArgument("banded matrix of order 0".into()));
        }
        if periodic && n < 2 * bw + 1 {
            return Err(Error::InvalidArgument(format!(
                "periodic banded matrix needs n >= {} for bandwidth {bw}, got {n}",
                2 * bw + 1
            )));
        }
        Ok(BandedMatrix {
            n,
            bw,
            periodic,
            band: vec![0.0; n * (bw + 1)],
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Storage slot of `(i, j)` if it is the stored half of a band entry.
    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let d = if self.periodic {
            (i + self.n - j) % self.n
        } else if i >= j {
            i - j
        } else {
            return None;
        };
        (d <= self.bw).then_some(i * (self.bw + 1) + d)
    }

    /// Accumulates `v` into `A[i][j]`. Only the stored half is written, so
    /// callers assembling a symmetric matrix pass every ordered pair.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        if let Some(s) = self.slot(i, j) {
            self.band[s] += v;
        }
    }

    /// `A[i][j]`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j)
            .or_else(|| self.slot(j, i))
            .map_or(0.0, |s| self.band[s])
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let w = self.bw + 1;
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] += self.band[i * w] * x[i];
            for d in 1..=self.bw {
                let v = self.band[i * w + d];
                if v == 0.0 {
                    continue;
                }
                let j = if self.periodic {
                    (i + n - d) % n
                } else if i >= d {
                    i - d
                } else {
                    continue;
                };
                y[i] += v * x[j];
                y[j] += v * x[i];
            }
        }
        y
    }

    /// `⟨A x, x⟩`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `⟨A x, y⟩`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.matvec(x).iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Gerschgorin interval `[min_i (a_ii - r_i), max_i (a_ii + r_i)]`.
    pub fn gerschgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut r = 0.0;
            let mut diag = 0.0;
            for j in 0..self.n {
                let v = self.get(i, j);
                if i == j {
                    diag = v;
                } else {
                    r += v.abs();
                }
            }
            lo = lo.min(diag - r);
            hi = hi.max(diag + r);
        }
        (lo, hi)
    }

    /// Factors the matrix; fails if a pivot is not positive.
    pub fn factor(&self) -> Result<BandedCholesky> {
        if !self.periodic {
            let chol = cholesky(self.n, self.bw, |i, d| self.band[i * (self.bw + 1) + d])?;
            return Ok(BandedCholesky {
                inner: chol,
                wrap: None,
            });
        }
        // Split A = B + U M U^T where B carries the entries whose direct index
        // distance is within the band and U selects the first and last `bw` rows.
        let n = self.n;
        let bw = self.bw;
        let w = bw + 1;
        let chol = cholesky(n, bw, |i, d| if i >= d { self.band[i * w + d] } else { 0.0 })?;
        let m = 2 * bw;
        let idx: Vec<usize> = (0..bw).chain(n - bw..n).collect();
        let mut mmat = vec![vec![0.0; m]; m];
        for (a, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                let direct = i.abs_diff(j);
                if direct > bw {
                    mmat[a][c] = self.get(i, j);
                }
            }
        }
        // Y = B^{-1} U, Z = U^T Y
        let mut ycols = Vec::with_capacity(m);
        for &i in &idx {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            chol.solve_in_place(&mut e);
            ycols.push(e);
        }
        let mut k = vec![vec![0.0; m]; m];
        for a in 0..m {
            for c in 0..m {
                // (I + M Z)[a][c] with Z[e][c] = Y_c[idx[e]]
                let mut s = if a == c { 1.0 } else { 0.0 };
                for e in 0..m {
                    s += mmat[a][e] * ycols[c][idx[e]];
                }
                k[a][c] = s;
            }
        }
        let lu = DenseLu::new(k)?;
        Ok(BandedCholesky {
            inner: chol,
            wrap: Some(Wrap {
                idx,
                mmat,
                ycols,
                lu,
            }),
        })
    }
}

/// Lower band Cholesky factor, stored like `BandedMatrix`.
#[derive(Clone, Debug)]
struct BandChol {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

fn cholesky<F: Fn(usize, usize) -> f64>(n: usize, bw: usize, a: F) -> Result<BandChol> {
    let w = bw + 1;
    let mut l = vec![0.0; n * w];
    for i in 0..n {
        let j0 = i.saturating_sub(bw);
        for j in j0..=i {
            let mut s = a(i, i - j);
            let k0 = j0.max(j.saturating_sub(bw));
            for k in k0..j {
                s -= l[i * w + (i - k)] * l[j * w + (j - k)];
            }
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(Error::NotSpd { row: i, pivot: s });
                }
                l[i * w] = s.sqrt();
            } else {
                l[i * w + (i - j)] = s / l[j * w];
            }
        }
    }
    Ok(BandChol { n, bw, l })
}

impl BandChol {
    fn solve_in_place(&self, x: &mut [f64]) {
        let w = self.bw + 1;
        let n = self.n;
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= self.l[i * w + (i - k)] * x[k];
            }
            x[i] = s / self.l[i * w];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..(i + w).min(n) {
                s -= self.l[k * w + (k - i)] * x[k];
            }
            x[i] = s / self.l[i * w];
        }
    }
}

#[derive(Clone, Debug)]
struct Wrap {
    idx: Vec<usize>,
    mmat: Vec<Vec<f64>>,
    ycols: Vec<Vec<f64>>,
    lu: DenseLu,
}

/// Factored banded matrix, ready for repeated solves.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    inner: BandChol,
    wrap: Option<Wrap>,
}

impl BandedCholesky {
    pub fn dim(&self) -> usize {
        self.inner.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        if x.len() != self.inner.n {
            return Err(Error::DimensionMismatch {
                expected: self.inner.n,
                found: x.len(),
            });
        }
        self.inner.solve_in_place(x);
        if let Some(wrap) = &self.wrap {
            let m = wrap.idx.len();
            let mut rhs = vec![0.0; m];
            for a in 0..m {
                rhs[a] = (0..m).map(|e| wrap.mmat[a][e] * x[wrap.idx[e]]).sum();
            }
            let coef = wrap.lu.solve(&rhs);
            for (c, col) in wrap.ycols.iter().enumerate() {
                let s = coef[c];
                if s != 0.0 {
                    for (xi, yi) in x.iter_mut().zip(col) {
                        *xi -= s * yi;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }
}

/// Small dense LU with partial pivoting.
#[derive(Clone, Debug)]
pub(crate) struct DenseLu {
    a: Vec<Vec<f64>>,
    piv: Vec<usize>,
}

impl DenseLu {
    pub(crate) fn new(mut a: Vec<Vec<f64>>) -> Result<DenseLu> {
        let n = a.len();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
                .unwrap_or(k);
            if a[p][k] == 0.0 {
                return Err(Error::InvalidArgument("singular dense block".into()));
            }
            a.swap(k, p);
            piv.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in k + 1..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        Ok(DenseLu { a, piv })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.a.len();
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.a[i][j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.a[i][j] * x[j];
            }
            x[i] /= self.a[i][i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_solve(a: Vec<Vec<f64>>, b: &[f64]) -> Vec<f64> {
        DenseLu::new(a).unwrap().solve(b)
    }

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn periodic_tridiagonal_matches_dense() {
        let n = 6;
        let mut m = BandedMatrix::zeros(n, 1, true).unwrap();
        for i in 0..n {
            m.add(i, i, 4.0 + i as f64 * 0.1);
            let j = (i + 1) % n;
            m.add(i, j, 1.0);
            m.add(j, i, 1.0);
        }
        assert_eq!(m.get(0, 5), 1.0);
        assert_eq!(m.get(5, 0), 1.0);
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.3).collect();
        let x = m.factor().unwrap().solve(&b).unwrap();
        let xd = dense_solve(m.to_dense(), &b);
        assert!(max_abs_diff(&x, &xd) < 1e-12);
    }

    #[test]
    fn random_spd_band_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &periodic in &[false, true] {
            for bw in 1..=3 {
                for n in [2 * bw + 1, 9, 17, 32] {
                    let mut m = BandedMatrix::zeros(n, bw, periodic).unwrap();
                    for i in 0..n {
                        m.add(i, i, 2.0 * bw as f64 + 1.0 + rng.gen::<f64>());
                        for d in 1..=bw {
                            let j = if periodic { (i + d) % n } else if i + d < n { i + d } else { continue };
                            let v = rng.gen_range(-1.0..1.0);
                            m.add(i, j, v);
                            m.add(j, i, v);
                        }
                    }
                    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let x = m.factor().unwrap().solve(&b).unwrap();
                    let xd = dense_solve(m.to_dense(), &b);
                    assert!(max_abs_diff(&x, &xd) < 1e-12, "n={n} bw={bw} periodic={periodic}");
                    let r = m.matvec(&x);
                    assert!(max_abs_diff(&r, &b) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn not_spd_is_reported() {
        let mut m = BandedMatrix::zeros(3, 1, false).unwrap();
        m.add(0, 0, 1.0);
        m.add(1, 1, -1.0);
        m.add(2, 2, 1.0);
        let err = m.factor().unwrap_err();
        assert!(err.to_string().contains("not SPD"));
    }

    #[test]
    fn dimension_checked() {
        let mut m = BandedMatrix::zeros(3, 1, false).unwrap();
        for i in 0..3 {
            m.add(i, i, 1.0);
        }
        let f = m.factor().unwrap();
        assert!(f.solve(&[1.0, 2.0]).is_err());
    }
}

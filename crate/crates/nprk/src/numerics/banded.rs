use crate::error::{Error, Result};

/// Real banded matrix with `kl` sub- and `ku` super-diagonals.
///
/// Storage follows the LAPACK band convention with `kl` extra rows of
/// headroom for fill-in from partial pivoting: entry (i, j) lives at
/// `band[kl + ku + i - j][j]`.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    band: Vec<f64>, // (2*kl + ku + 1) x n, row-major
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        assert!(kl < n.max(1) && ku < n.max(1), "bandwidth must be < n");
        BandedMatrix { n, kl, ku, band: vec![0.0; (2 * kl + ku + 1) * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        (self.kl + self.ku + i - j) * self.n + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i + self.ku || i > j + self.kl {
            0.0
        } else {
            self.band[self.slot(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j <= i + self.ku && i <= j + self.kl,
            "entry ({i},{j}) outside band"
        );
        let s = self.slot(i, j);
        self.band[s] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.band[s] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let jlo = i.saturating_sub(self.kl);
            let jhi = (i + self.ku).min(self.n - 1);
            let mut s = 0.0;
            for j in jlo..=jhi {
                s += self.band[self.slot(i, j)] * x[j];
            }
            y[i] = s;
        }
        y
    }

    /// LU factorization with partial pivoting; uses the band headroom for fill-in.
    pub fn factor(mut self) -> Result<BandedLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let kv = kl + ku; // effective upper bandwidth after pivoting
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let ilim = (k + kl).min(n - 1);
            // pivot search in column k, rows k..=ilim
            let mut p = k;
            let mut best = self.band[self.slot(k, k)].abs();
            for i in k + 1..=ilim {
                let v = self.band[self.slot(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular);
            }
            pivots[k] = p;
            if p != k {
                let jhi = (k + kv).min(n - 1);
                for j in k..=jhi {
                    let a = self.slot(k, j);
                    let b = self.slot(p, j);
                    self.band.swap(a, b);
                }
            }
            let piv = self.band[self.slot(k, k)];
            for i in k + 1..=ilim {
                let m = self.band[self.slot(i, k)] / piv;
                let s = self.slot(i, k);
                self.band[s] = m; // store multiplier
                if m != 0.0 {
                    let jhi = (k + kv).min(n - 1);
                    for j in k + 1..=jhi {
                        let a = self.slot(k, j);
                        let b = self.slot(i, j);
                        self.band[b] -= m * self.band[a];
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, kv, band: self.band, pivots })
    }
}

/// Factored form of a [`BandedMatrix`].
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    kv: usize,
    band: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    fn slot(&self, i: usize, j: usize) -> usize {
        // same layout as BandedMatrix::slot, with kl + ku = kv
        (self.kv + i - j) * self.n + j
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n);
        let mut x = rhs.to_vec();
        let n = self.n;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let ilim = (k + self.kl).min(n - 1);
            for i in k + 1..=ilim {
                x[i] -= self.band[self.slot(i, k)] * x[k];
            }
        }
        for k in (0..n).rev() {
            let jhi = (k + self.kv).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=jhi {
                s -= self.band[self.slot(k, j)] * x[j];
            }
            x[k] = s / self.band[self.slot(k, k)];
        }
        x
    }
}

/// Factor and solve in one call.
pub fn banded_solve(m: BandedMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    Ok(m.factor()?.solve(rhs))
}

/// Tridiagonal helper: build from sub/main/super diagonals.
pub fn tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64]) -> BandedMatrix {
    let n = diag.len();
    assert_eq!(sub.len(), n - 1);
    assert_eq!(sup.len(), n - 1);
    let mut m = BandedMatrix::zeros(n, 1, 1);
    for i in 0..n {
        m.set(i, i, diag[i]);
    }
    for i in 0..n - 1 {
        m.set(i + 1, i, sub[i]);
        m.set(i, i + 1, sup[i]);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::dense::{dense_solve, Mat};
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_returns_rhs() {
        let mut m = BandedMatrix::zeros(5, 1, 1);
        for i in 0..5 {
            m.set(i, i, 1.0);
        }
        let rhs = vec![1.0, -2.0, 3.0, -4.0, 5.0];
        let x = banded_solve(m, &rhs).unwrap();
        assert_eq!(x, rhs);
    }

    #[test]
    fn laplacian_matches_dense_oracle() {
        let n = 4;
        let m = tridiagonal(&[-1.0; 3], &[2.0; 4], &[-1.0; 3]);
        let rhs = vec![1.0, 0.0, 0.0, 1.0];
        let x = banded_solve(m, &rhs).unwrap();
        let mut d = Mat::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = 2.0;
            if i > 0 {
                d[(i, i - 1)] = -1.0;
            }
            if i + 1 < n {
                d[(i, i + 1)] = -1.0;
            }
        }
        let xd = dense_solve(d, rhs).unwrap();
        for (a, b) in x.iter().zip(&xd) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = BandedMatrix::zeros(3, 1, 1); // all zero
        assert!(matches!(banded_solve(m, &[1.0, 1.0, 1.0]), Err(Error::Singular)));
    }

    #[test]
    fn random_band_residual_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 40;
            let (kl, ku) = (2, 1);
            let mut m = BandedMatrix::zeros(n, kl, ku);
            for i in 0..n {
                for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                    m.set(i, j, rng.random::<f64>() - 0.5);
                }
                m.add(i, i, 3.0);
            }
            let x_true: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            let rhs = m.matvec(&x_true);
            let x = banded_solve(m.clone(), &rhs).unwrap();
            let res = m.matvec(&x);
            let num: f64 = res
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let den: f64 = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(num <= 1e-12 * den.max(1.0));
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_diagonal() {
        // first pivot must come from the row below
        let m = tridiagonal(&[1.0, 1.0], &[0.0, 1.0, 2.0], &[1.0, 1.0]);
        let rhs = vec![1.0, 2.0, 3.0];
        let x = banded_solve(m.clone(), &rhs).unwrap();
        let res = m.matvec(&x);
        for (a, b) in res.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}

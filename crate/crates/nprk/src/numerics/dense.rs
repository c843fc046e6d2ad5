use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve the square real system `a x = rhs` by LU with partial pivoting.
/// `a` is consumed as workspace.
pub fn dense_solve(mut a: Mat, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    assert_eq!(rhs.len(), n);
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if a[(i, k)].abs() > a[(p, k)].abs() {
                p = i;
            }
        }
        if a[(p, k)] == 0.0 {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            rhs.swap(k, p);
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let m = a[(i, k)] / piv;
            if m != 0.0 {
                for j in k + 1..n {
                    a[(i, j)] -= m * a[(k, j)];
                }
                rhs[i] -= m * rhs[k];
            }
            a[(i, k)] = 0.0;
        }
    }
    for k in (0..n).rev() {
        let mut s = rhs[k];
        for j in k + 1..n {
            s -= a[(k, j)] * rhs[j];
        }
        rhs[k] = s / a[(k, k)];
    }
    Ok(rhs)
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone)]
pub struct DenseComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseComplexMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl std::ops::Index<(usize, usize)> for DenseComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant by complex LU with partial pivoting, sign tracked.
/// A singular matrix yields zero rather than an error.
pub fn complex_det(m: &DenseComplexMatrix) -> Complex64 {
    let n = m.n;
    let mut a = m.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in k + 1..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        for i in k + 1..n {
            let mult = a[i * n + k] / piv;
            if mult != Complex64::new(0.0, 0.0) {
                for j in k + 1..n {
                    let t = mult * a[k * n + j];
                    a[i * n + j] -= t;
                }
            }
        }
    }
    det
}

/// Solve the square complex system `a x = rhs` by LU with partial pivoting.
pub fn complex_solve(m: &DenseComplexMatrix, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = m.n;
    assert_eq!(rhs.len(), n);
    let mut a = m.data.clone();
    let mut x = rhs.to_vec();
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in k + 1..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(Error::Singular);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            let mult = a[i * n + k] / piv;
            if mult != Complex64::new(0.0, 0.0) {
                for j in k + 1..n {
                    let t = mult * a[k * n + j];
                    a[i * n + j] -= t;
                }
                let t = mult * x[k];
                x[i] -= t;
            }
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= a[k * n + j] * x[j];
        }
        x[k] = s / a[k * n + k];
    }
    Ok(x)
}

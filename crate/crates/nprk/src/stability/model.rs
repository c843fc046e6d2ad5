use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{complex_det, complex_solve, DenseComplexMatrix, Mat};
use crate::tableau::{reduced_underlying, underlying_pair, NprkMethod, SequentialMethod};

/// Linear stability data of a method: the underlying ARK coefficients (with
/// unused stages removed) plus the polynomial coefficients of the rational
/// stability function
///
///   R(z1, z2) = det(I - z1 A1 - z2 A2 + e (z1 b1 + z2 b2)^T)
///               / det(I - z1 A1 - z2 A2).
///
/// The numerator is stored as the bivariate coefficient matrix num[i][j] of
/// z1^i z2^j with total degree at most s; the denominator is the expanded
/// product of (1 - A1_kk z1 - A2_kk z2) over the stages, which for IMEX
/// methods (A2 strictly lower-triangular) is univariate in z1 with d_0 = 1
/// and d_s = (-1)^s prod A1_kk.
#[derive(Debug, Clone)]
pub struct StabilityModel {
    a1: Mat,
    a2: Mat,
    b1: Vec<f64>,
    b2: Vec<f64>,
    num: Vec<Vec<f64>>,
    den: Vec<Vec<f64>>,
}

/// Limit of R as one variable goes to infinity, expressed in the other
/// variable ("w"): either divergent, identically zero, or a ratio of
/// polynomials in w.
#[derive(Debug, Clone)]
pub enum StiffLimit {
    Divergent,
    Zero,
    Rational { num: Vec<f64>, den: Vec<f64> },
}

/// Which variable is sent to infinity in a stiff limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StiffVariable {
    Z1,
    Z2,
}

/// beta_inf(eps) = lim_{|z1| -> inf} R(z1, eps z1), a polynomial in eps for
/// DIRK-type IMEX methods. `coeffs[k]` multiplies eps^k.
#[derive(Debug, Clone)]
pub struct EpsPolynomial {
    pub coeffs: Vec<f64>,
}

impl EpsPolynomial {
    pub fn eval(&self, eps: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * eps + c;
        }
        acc
    }
}

/// gamma(theta) = |beta_inf(e^{i theta})|^2 as a cosine series
/// sum_n d_n cos(n theta).
#[derive(Debug, Clone)]
pub struct CosineSeries {
    pub d: Vec<f64>,
}

impl CosineSeries {
    pub fn eval(&self, theta: f64) -> f64 {
        self.d
            .iter()
            .enumerate()
            .map(|(n, dn)| dn * (n as f64 * theta).cos())
            .sum()
    }
}

fn prune_unused(a1: &mut Mat, a2: &mut Mat, b1: &mut Vec<f64>, b2: &mut Vec<f64>) {
    loop {
        let s = b1.len();
        let keep: Vec<usize> = (0..s)
            .filter(|&k| {
                b1[k] != 0.0
                    || b2[k] != 0.0
                    || (0..s).any(|i| a1[(i, k)] != 0.0 || a2[(i, k)] != 0.0)
            })
            .collect();
        if keep.len() == s {
            return;
        }
        let m = keep.len();
        let mut na1 = Mat::zeros(m, m);
        let mut na2 = Mat::zeros(m, m);
        for (pi, &i) in keep.iter().enumerate() {
            for (pj, &j) in keep.iter().enumerate() {
                na1[(pi, pj)] = a1[(i, j)];
                na2[(pi, pj)] = a2[(i, j)];
            }
        }
        *b1 = keep.iter().map(|&i| b1[i]).collect();
        *b2 = keep.iter().map(|&i| b2[i]).collect();
        *a1 = na1;
        *a2 = na2;
    }
}

fn is_lower(m: &Mat) -> bool {
    let s = m.rows();
    (0..s).all(|i| (i + 1..s).all(|j| m[(i, j)] == 0.0))
}

impl StabilityModel {
    /// Build from a sequentially coupled method. IMEX methods use the reduced
    /// underlying pair directly; methods with implicit-in-second stages go
    /// through the full tensor form.
    pub fn from_sequential(m: &SequentialMethod) -> Result<Self> {
        if m.is_imex() {
            let pair = reduced_underlying(m)?;
            Self::from_parts(
                pair.implicit.a().clone(),
                pair.explicit.a().clone(),
                pair.b().to_vec(),
                pair.b().to_vec(),
            )
        } else {
            Self::from_nprk(&m.to_nprk())
        }
    }

    /// Build from the full tensor form via its underlying ARK pair.
    pub fn from_nprk(m: &NprkMethod) -> Result<Self> {
        let (first, second) = underlying_pair(m)?;
        Self::from_parts(
            first.a().clone(),
            second.a().clone(),
            first.b().to_vec(),
            second.b().to_vec(),
        )
    }

    fn from_parts(mut a1: Mat, mut a2: Mat, mut b1: Vec<f64>, mut b2: Vec<f64>) -> Result<Self> {
        prune_unused(&mut a1, &mut a2, &mut b1, &mut b2);
        if !is_lower(&a1) || !is_lower(&a2) {
            return Err(Error::UnsupportedStructure(
                "stability model needs triangular underlying tableaux",
            ));
        }
        let s = b1.len();
        // denominator: expand prod_k (1 - A1_kk z1 - A2_kk z2)
        let mut den = vec![vec![0.0; s + 1]; s + 1];
        den[0][0] = 1.0;
        for k in 0..s {
            let (d1, d2) = (a1[(k, k)], a2[(k, k)]);
            let mut next = vec![vec![0.0; s + 1]; s + 1];
            for i in 0..=s {
                for j in 0..=s {
                    let c = den[i][j];
                    if c == 0.0 {
                        continue;
                    }
                    next[i][j] += c;
                    if d1 != 0.0 {
                        next[i + 1][j] -= d1 * c;
                    }
                    if d2 != 0.0 {
                        next[i][j + 1] -= d2 * c;
                    }
                }
            }
            den = next;
        }

        let mut model = StabilityModel { a1, a2, b1, b2, num: Vec::new(), den };
        model.num = model.interpolate_numerator(0.5).or_else(|e| {
            if matches!(e, Error::SingularInterpolation | Error::Singular) {
                model.interpolate_numerator(1.0 / 3.0)
            } else {
                Err(e)
            }
        })?;
        Ok(model)
    }

    pub fn stage_count(&self) -> usize {
        self.b1.len()
    }

    pub fn a1(&self) -> &Mat {
        &self.a1
    }

    pub fn a2(&self) -> &Mat {
        &self.a2
    }

    pub fn b1(&self) -> &[f64] {
        &self.b1
    }

    pub fn b2(&self) -> &[f64] {
        &self.b2
    }

    /// Numerator coefficients c_ij of z1^i z2^j.
    pub fn numerator_coeffs(&self) -> &[Vec<f64>] {
        &self.num
    }

    /// Bivariate denominator coefficients; for IMEX methods only the j = 0
    /// column is nonzero.
    pub fn denominator_coeffs(&self) -> &[Vec<f64>] {
        &self.den
    }

    /// Univariate denominator d_i of z1^i, available when the second
    /// tableau's diagonal vanishes (IMEX class).
    pub fn denominator_z1(&self) -> Option<Vec<f64>> {
        let s = self.stage_count();
        if (0..s).all(|k| self.a2[(k, k)] == 0.0) {
            Some(self.den.iter().map(|row| row[0]).collect())
        } else {
            None
        }
    }

    fn numerator_det(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let s = self.stage_count();
        let mut m = DenseComplexMatrix::zeros(s);
        for i in 0..s {
            for j in 0..s {
                let mut v = -(z1 * self.a1[(i, j)] + z2 * self.a2[(i, j)]);
                v += z1 * self.b1[j] + z2 * self.b2[j];
                if i == j {
                    v += 1.0;
                }
                m[(i, j)] = v;
            }
        }
        complex_det(&m)
    }

    fn denominator_det(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let s = self.stage_count();
        let mut m = DenseComplexMatrix::zeros(s);
        for i in 0..s {
            for j in 0..s {
                let mut v = -(z1 * self.a1[(i, j)] + z2 * self.a2[(i, j)]);
                if i == j {
                    v += 1.0;
                }
                m[(i, j)] = v;
            }
        }
        complex_det(&m)
    }

    /// Recover c_ij by sampling the numerator determinant on a tensor grid of
    /// scaled roots of unity and solving the interpolation system by LU.
    fn interpolate_numerator(&self, radius: f64) -> Result<Vec<Vec<f64>>> {
        let s = self.stage_count();
        let m = s + 1;
        let omega = 2.0 * std::f64::consts::PI / m as f64;
        let pts: Vec<Complex64> = (0..m)
            .map(|p| Complex64::from_polar(radius, omega * p as f64))
            .collect();
        let mut sys = DenseComplexMatrix::zeros(m * m);
        let mut rhs = vec![Complex64::new(0.0, 0.0); m * m];
        for p in 0..m {
            for q in 0..m {
                let row = p * m + q;
                rhs[row] = self.numerator_det(pts[p], pts[q]);
                let mut z1pow = Complex64::new(1.0, 0.0);
                for i in 0..m {
                    let mut z2pow = Complex64::new(1.0, 0.0);
                    for j in 0..m {
                        sys[(row, i * m + j)] = z1pow * z2pow;
                        z2pow *= pts[q];
                    }
                    z1pow *= pts[p];
                }
            }
        }
        let sol = complex_solve(&sys, &rhs).map_err(|_| Error::SingularInterpolation)?;
        let scale = sol.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
        let mut coeffs = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let c = sol[i * m + j];
                if c.im.abs() > 1e-8 * scale {
                    return Err(Error::SingularInterpolation);
                }
                if i + j > s {
                    // total degree bound: these must vanish
                    if c.re.abs() > 1e-8 * scale {
                        return Err(Error::SingularInterpolation);
                    }
                    continue;
                }
                coeffs[i][j] = if c.re.abs() <= 1e-13 * scale { 0.0 } else { c.re };
            }
        }
        Ok(coeffs)
    }
}

/// Evaluate R(z1, z2) by the determinant-ratio formula (complex LU with
/// partial pivoting), not the interpolated polynomials.
pub fn stability_value(model: &StabilityModel, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    let den = model.denominator_det(z1, z2);
    if den.norm() == 0.0 {
        return Err(Error::PoleEncountered(z1, z2));
    }
    Ok(model.numerator_det(z1, z2) / den)
}

/// Evaluate the interpolated numerator and expanded denominator polynomials.
pub fn stability_value_poly(model: &StabilityModel, z1: Complex64, z2: Complex64) -> Complex64 {
    let eval = |coeffs: &[Vec<f64>]| {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut z1pow = Complex64::new(1.0, 0.0);
        for row in coeffs {
            let mut z2pow = Complex64::new(1.0, 0.0);
            for &c in row {
                if c != 0.0 {
                    acc += c * z1pow * z2pow;
                }
                z2pow *= z2;
            }
            z1pow *= z1;
        }
        acc
    };
    eval(&model.num) / eval(&model.den)
}

/// The polynomial beta_inf(eps) = c~_s(eps) / d_s with
/// c~_s(eps) = sum_i c_{i, s-i} eps^{s-i}.
///
/// Requires an IMEX-structured model whose implicit diagonal entries are all
/// nonzero (after unused-stage removal).
pub fn beta_infinity(model: &StabilityModel) -> Result<EpsPolynomial> {
    let s = model.stage_count();
    let den = model
        .denominator_z1()
        .ok_or(Error::UnsupportedStructure("beta_inf needs an IMEX model"))?;
    for k in 0..s {
        if model.a1[(k, k)] == 0.0 {
            return Err(Error::ZeroDiagonal(k + 1));
        }
    }
    let ds = den[s];
    debug_assert!(ds != 0.0);
    let coeffs = (0..=s).map(|k| model.num[s - k][k] / ds).collect();
    Ok(EpsPolynomial { coeffs })
}

/// Cosine-series coefficients of gamma(theta) = |beta_inf(e^{i theta})|^2:
/// d_0 = sum c_j^2 and d_n = 2 sum_{j >= n} c_j c_{j-n}.
pub fn gamma_series(model: &StabilityModel) -> Result<CosineSeries> {
    let beta = beta_infinity(model)?;
    let c = &beta.coeffs;
    let s = c.len() - 1;
    let mut d = vec![0.0; s + 1];
    d[0] = c.iter().map(|x| x * x).sum();
    for n in 1..=s {
        d[n] = 2.0 * (n..=s).map(|j| c[j] * c[j - n]).sum::<f64>();
    }
    Ok(CosineSeries { d })
}

/// Maximum of gamma over [0, 2 pi), from 4096 uniform samples refined by
/// golden-section search around the best sample; stable iff max <= 1 + tol.
pub fn coupled_stiff_z2_stable(model: &StabilityModel, tol: f64) -> Result<(bool, f64)> {
    let gamma = gamma_series(model)?;
    let n = 4096usize;
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let v = gamma.eval(step * k as f64);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    // golden-section maximization on the bracket around the best sample
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut lo = step * (best_k as f64 - 1.0);
    let mut hi = step * (best_k as f64 + 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = gamma.eval(x1);
    let mut f2 = gamma.eval(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = gamma.eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = gamma.eval(x1);
        }
    }
    let max = best.max(f1).max(f2);
    Ok((max <= 1.0 + tol, max))
}

fn leading_rows(
    coeffs: &[Vec<f64>],
    which: StiffVariable,
    tol: f64,
) -> (usize, Vec<f64>, bool) {
    // returns (degree, leading coefficient row as a polynomial in the other
    // variable, rows-above-degree-all-zero)
    let m = coeffs.len();
    let row_of = |i: usize| -> Vec<f64> {
        match which {
            StiffVariable::Z1 => coeffs[i].clone(),
            StiffVariable::Z2 => (0..m).map(|r| coeffs[r][i]).collect(),
        }
    };
    let scale = coeffs
        .iter()
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(1.0);
    let mut deg = 0;
    for i in (0..m).rev() {
        if row_of(i).iter().any(|c| c.abs() > tol * scale) {
            deg = i;
            break;
        }
    }
    (deg, row_of(deg), true)
}

/// Structure of lim R as `which` tends to infinity, from the leading
/// polynomial coefficients. Coefficients below `tol` (relative to the largest
/// coefficient) are treated as zero.
pub fn stiff_limit_form(model: &StabilityModel, which: StiffVariable, tol: f64) -> StiffLimit {
    let (dn, nrow, _) = leading_rows(&model.num, which, tol);
    let (dd, drow, _) = leading_rows(&model.den, which, tol);
    if dn > dd {
        return StiffLimit::Divergent;
    }
    if dn < dd {
        return StiffLimit::Zero;
    }
    let nscale = model
        .num
        .iter()
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(1.0);
    if nrow.iter().all(|c| c.abs() <= tol * nscale) {
        return StiffLimit::Zero;
    }
    StiffLimit::Rational { num: nrow, den: drow }
}

fn poly_eval(p: &[f64], w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        acc = acc * w + c;
    }
    acc
}

/// Limit of R as `which` tends to infinity, evaluated at the other variable.
pub fn stiff_limit(
    model: &StabilityModel,
    which: StiffVariable,
    other: Complex64,
) -> Result<Complex64> {
    match stiff_limit_form(model, which, 1e-12) {
        StiffLimit::Divergent => Err(Error::DivergentLimit),
        StiffLimit::Zero => Ok(Complex64::new(0.0, 0.0)),
        StiffLimit::Rational { num, den } => {
            let d = poly_eval(&den, other);
            if d.norm() == 0.0 {
                return Err(Error::PoleEncountered(other, other));
            }
            Ok(poly_eval(&num, other) / d)
        }
    }
}

/// L-stable in the stiff `which` limit: the limit is the zero polynomial in
/// the other variable, to the given coefficient tolerance.
pub fn is_l_stable_in_limit(model: &StabilityModel, which: StiffVariable, tol: f64) -> bool {
    matches!(stiff_limit_form(model, which, tol), StiffLimit::Zero)
}

/// A-stable in the stiff `which` limit: |lim R| <= 1 + tol for the other
/// variable sampled on a grid covering the closed left half-plane (negative
/// real axis, imaginary axis, and interior points).
pub fn is_a_stable_in_limit(
    model: &StabilityModel,
    which: StiffVariable,
    grid_n: usize,
    tol: f64,
) -> Result<bool> {
    match stiff_limit_form(model, which, 1e-12) {
        StiffLimit::Divergent => Ok(false),
        StiffLimit::Zero => Ok(true),
        StiffLimit::Rational { num, den } => {
            let n = grid_n.max(2);
            for p in 0..n {
                for q in 0..n {
                    let re = -100.0 * p as f64 / (n - 1) as f64;
                    let im = -100.0 + 200.0 * q as f64 / (n - 1) as f64;
                    let w = Complex64::new(re, im);
                    let d = poly_eval(&den, w);
                    if d.norm() == 0.0 {
                        return Ok(false);
                    }
                    if (poly_eval(&num, w) / d).norm() > 1.0 + tol {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::tableau::{find, CatalogMethod};
    use rand::{Rng, SeedableRng};

    pub(crate) fn model_of(name: &str) -> StabilityModel {
        match &find(name).unwrap().method {
            CatalogMethod::Sequential(m) => StabilityModel::from_sequential(m).unwrap(),
            CatalogMethod::General(m) => StabilityModel::from_nprk(m).unwrap(),
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn euler_closed_form() {
        // R(z1, z2) = (1 + z2) / (1 - z1)
        let m = model_of("IMEX-NPRK1[21]");
        assert_eq!(m.stage_count(), 1);
        assert_eq!(m.num[0][0], 1.0);
        assert_eq!(m.num[0][1], 1.0);
        let d = m.denominator_z1().unwrap();
        assert_eq!(d, vec![1.0, -1.0]);
        let v = stability_value(&m, c(-1.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((v - c(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn consistency_r00_is_one_for_all_methods() {
        for e in crate::tableau::catalog() {
            let m = model_of(e.name);
            let v = stability_value(&m, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            assert!((v - c(1.0, 0.0)).norm() < 1e-14, "{}", e.name);
        }
    }

    #[test]
    fn explicit_method_denominator_is_one() {
        // an EXEX tensor: explicit midpoint embedded diagonally
        let m = crate::tableau::NprkMethod::new(
            "expl",
            2,
            vec![crate::tableau::TensorEntry { i: 2, j: 1, k: 1, value: 0.5 }],
            vec![(2, 2, 1.0)],
        )
        .unwrap();
        let model = StabilityModel::from_nprk(&m).unwrap();
        let d = model.denominator_z1().unwrap();
        assert_eq!(d[0], 1.0);
        assert!(d[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn imim_midpoint_closed_form() {
        for name in ["IMIM-Midpoint", "IMIM-Midpoint/CrankNicolson"] {
            let m = model_of(name);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
            for _ in 0..100 {
                let z1 = c(rng.random::<f64>() * 8.0 - 4.0, rng.random::<f64>() * 8.0 - 4.0);
                let z2 = c(rng.random::<f64>() * 8.0 - 4.0, rng.random::<f64>() * 8.0 - 4.0);
                let expect = (z1 + 2.0) * (z2 + 2.0) / ((z1 - 2.0) * (z2 - 2.0));
                let got = stability_value(&m, z1, z2).unwrap();
                assert!((got - expect).norm() <= 1e-12 * expect.norm().max(1.0), "{name}");
            }
        }
    }

    #[test]
    fn transposed_imim_swaps_arguments() {
        let m = model_of("IMIM-Midpoint-T");
        let v = stability_value(&m, c(-3.0, 1.0), c(-0.5, 0.0)).unwrap();
        let (z1, z2) = (c(-3.0, 1.0), c(-0.5, 0.0));
        let expect = (z1 + 2.0) * (z2 + 2.0) / ((z1 - 2.0) * (z2 - 2.0));
        assert!((v - expect).norm() < 1e-13);
    }

    #[test]
    fn midpoint_stiff_z1_limit_is_minus_one_plus_z2() {
        let m = model_of("IMEX-NPRK2[31]");
        match stiff_limit_form(&m, StiffVariable::Z1, 1e-12) {
            StiffLimit::Rational { num, den } => {
                // num/den = -(1 + z2): den is the scalar leading denominator
                assert_eq!(den.len(), m.stage_count() + 1);
                let d = den[0];
                assert!((num[0] / d + 1.0).abs() < 1e-12);
                assert!((num[1] / d + 1.0).abs() < 1e-12);
                for extra in &num[2..] {
                    assert!(extra.abs() < 1e-12);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
        // sampled far out on the negative axis: ~ -(1 + z2); the polynomial
        // route stays accurate where the determinant form cancels
        let v = stability_value_poly(&m, c(-1e10, 0.0), c(0.3, 0.0));
        assert!((v - c(-1.3, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn beta_infinity_ground_truth() {
        // true limits: 1[21] -> -eps (the paper's beta_inf(eps) = eps refers
        // to the modulus form); both SiSa variants -> -eps^3; 3[54]-Sa -> +eps^4
        let b = beta_infinity(&model_of("IMEX-NPRK1[21]")).unwrap();
        assert_eq!(b.coeffs.len(), 2);
        assert!((b.coeffs[0]).abs() < 1e-12 && (b.coeffs[1] + 1.0).abs() < 1e-12);

        for name in ["IMEX-NPRK2[43]-SiSa", "IMEX-NPRK2[43]b-SiSa"] {
            let b = beta_infinity(&model_of(name)).unwrap();
            assert_eq!(b.coeffs.len(), 4, "{name}");
            for k in 0..3 {
                assert!(b.coeffs[k].abs() < 1e-12, "{name} coeff {k} = {}", b.coeffs[k]);
            }
            assert!((b.coeffs[3] + 1.0).abs() < 1e-12, "{name}");
        }

        let b = beta_infinity(&model_of("IMEX-NPRK3[54]-Sa")).unwrap();
        assert!((b.coeffs[4] - 1.0).abs() < 1e-12);
        for k in 0..4 {
            assert!(b.coeffs[k].abs() < 1e-12);
        }
    }

    #[test]
    fn beta_infinity_matches_sampled_limit() {
        // evaluation at eps matches the sampled R(z1, eps z1); the gap decays
        // like 1/|z1|, so |z1| = 1e10 brings it below 1e-8
        for name in [
            "IMEX-NPRK1[21]",
            "IMEX-NPRK2[32]a",
            "IMEX-NPRK2[42]b",
            "IMEX-NPRK2[43]-Si",
            "IMEX-NPRK2[43]-SiSa",
            "IMEX-NPRK3[54]-Sa",
            "IMEX-NPRK3[54]-Si",
        ] {
            let m = model_of(name);
            let b = beta_infinity(&m).unwrap();
            let z1 = c(-1e10, 0.0);
            for eps in
                [c(0.3, 0.0), c(-0.8, 0.0), c(0.0, 0.9), c(0.5, -0.5), c(1.0, 0.0)]
            {
                let sampled = stability_value_poly(&m, z1, eps * z1);
                let poly = b.eval(eps);
                assert!(
                    (sampled - poly).norm() <= 1e-8 * poly.norm().max(1.0),
                    "{name} at eps {eps}: {sampled} vs {poly}"
                );
            }
        }
    }

    #[test]
    fn beta_rejects_zero_diagonal() {
        assert!(matches!(
            beta_infinity(&model_of("IMEX-NPRK2[31]")),
            Err(Error::ZeroDiagonal(_))
        ));
    }

    #[test]
    fn pruning_enables_beta_for_two_solve_methods() {
        // 2[42]a's shift pair carries an unused middle stage; after pruning
        // the model is 2-stage with nonzero diagonals
        let m = model_of("IMEX-NPRK2[42]a");
        assert_eq!(m.stage_count(), 2);
        assert!(beta_infinity(&m).is_ok());
    }

    #[test]
    fn gamma_ground_truth() {
        let rt2 = std::f64::consts::SQRT_2;
        // 1[21]: gamma == 1
        let g = gamma_series(&model_of("IMEX-NPRK1[21]")).unwrap();
        assert!((g.eval(0.0) - 1.0).abs() < 1e-14);
        assert!((g.eval(2.1) - 1.0).abs() < 1e-14);

        let g = gamma_series(&model_of("IMEX-NPRK2[32]a")).unwrap();
        assert!((g.eval(0.0) - (57.0 - 40.0 * rt2)).abs() < 1e-10);
        assert!((g.eval(std::f64::consts::PI) - 1.0).abs() < 1e-10);

        let g = gamma_series(&model_of("IMEX-NPRK2[32]b")).unwrap();
        assert!((g.eval(0.0) - (57.0 + 40.0 * rt2)).abs() < 1e-8);
    }

    #[test]
    fn gamma_equals_squared_modulus_of_beta_on_samples() {
        for name in ["IMEX-NPRK2[32]a", "IMEX-NPRK2[43]-Si", "IMEX-NPRK3[54]-Si"] {
            let m = model_of(name);
            let b = beta_infinity(&m).unwrap();
            let g = gamma_series(&m).unwrap();
            for k in 0..1024 {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 1024.0;
                let bv = b.eval(Complex64::from_polar(1.0, th)).norm_sqr();
                assert!((g.eval(th) - bv).abs() <= 1e-12 * bv.max(1.0), "{name}");
            }
        }
    }

    #[test]
    fn coupled_stiff_z2_classification() {
        let stable = [
            "IMEX-NPRK1[21]",
            "IMEX-NPRK2[32]a",
            "IMEX-NPRK2[42]a",
            "IMEX-NPRK2[43]-Si",
            "IMEX-NPRK2[43]-SiSa",
            "IMEX-NPRK2[43]b-SiSa",
            "IMEX-NPRK3[54]-Sa",
        ];
        let unstable = ["IMEX-NPRK2[32]b", "IMEX-NPRK2[42]b", "IMEX-NPRK3[54]-Si"];
        for name in stable {
            let (ok, max) = coupled_stiff_z2_stable(&model_of(name), 1e-9).unwrap();
            assert!(ok, "{name} should be stable, max gamma {max}");
        }
        for name in unstable {
            let (ok, max) = coupled_stiff_z2_stable(&model_of(name), 1e-9).unwrap();
            assert!(!ok && max > 1.0 + 1e-6, "{name} should be unstable, max gamma {max}");
        }
        // the paper reports max gamma 57 + 40 sqrt(2) for the b-variants
        let (_, max) = coupled_stiff_z2_stable(&model_of("IMEX-NPRK2[42]b"), 1e-9).unwrap();
        assert!((max - (57.0 + 40.0 * std::f64::consts::SQRT_2)).abs() < 1e-8);
    }

    #[test]
    fn l_stability_in_z1_flags() {
        let l_stable = [
            "IMEX-NPRK1[21]",
            "IMEX-NPRK2[32]a",
            "IMEX-NPRK2[32]b",
            "IMEX-NPRK2[42]a",
            "IMEX-NPRK2[42]b",
            "IMEX-NPRK2[43]-Si",
            "IMEX-NPRK2[43]-SiSa",
            "IMEX-NPRK2[43]b-SiSa",
            "IMEX-NPRK3[54]-Sa",
        ];
        for name in l_stable {
            assert!(
                is_l_stable_in_limit(&model_of(name), StiffVariable::Z1, 1e-12),
                "{name}"
            );
        }
        assert!(!is_l_stable_in_limit(&model_of("IMEX-NPRK2[31]"), StiffVariable::Z1, 1e-12));
        assert!(!is_l_stable_in_limit(&model_of("IMEX-NPRK3[54]-Si"), StiffVariable::Z1, 1e-12));
    }

    #[test]
    fn nprk354_si_constant_stiff_limit() {
        // lim_{z1 -> inf} R = -0.43590521547562336..., independent of z2
        let m = model_of("IMEX-NPRK3[54]-Si");
        let v = stiff_limit(&m, StiffVariable::Z1, c(0.7, -0.3)).unwrap();
        assert!((v - c(-0.4359052154756234, 0.0)).norm() < 1e-12);
        let v2 = stiff_limit(&m, StiffVariable::Z1, c(-5.0, 2.0)).unwrap();
        assert!((v - v2).norm() < 1e-12);
    }

    #[test]
    fn imex_z2_limit_diverges() {
        assert!(matches!(
            stiff_limit(&model_of("IMEX-NPRK1[21]"), StiffVariable::Z2, c(-1.0, 0.0)),
            Err(Error::DivergentLimit)
        ));
    }

    #[test]
    fn imim_a_stable_in_both_limits() {
        for name in ["IMIM-Midpoint", "IMIM-Midpoint/CrankNicolson"] {
            let m = model_of(name);
            for which in [StiffVariable::Z1, StiffVariable::Z2] {
                assert!(is_a_stable_in_limit(&m, which, 64, 1e-10).unwrap(), "{name}");
                assert!(!is_l_stable_in_limit(&m, which, 1e-12), "{name}");
            }
            // limits to infinity in both variables compose to 1
            let v = stiff_limit(&m, StiffVariable::Z1, c(-1e9, 0.0)).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-7, "{name}: {v}");
        }
    }

    #[test]
    fn polynomials_match_determinants_on_random_sample() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for name in ["IMEX-NPRK2[43]-SiSa", "IMEX-NPRK3[54]-Si", "IMIM-Midpoint"] {
            let m = model_of(name);
            for _ in 0..1000 {
                let z1 = c(
                    200.0 * rng.random::<f64>() - 100.0,
                    200.0 * rng.random::<f64>() - 100.0,
                );
                let z2 = c(
                    200.0 * rng.random::<f64>() - 100.0,
                    200.0 * rng.random::<f64>() - 100.0,
                );
                let direct = stability_value(&m, z1, z2).unwrap();
                let poly = stability_value_poly(&m, z1, z2);
                assert!(
                    (direct - poly).norm() <= 1e-10 * direct.norm().max(1.0),
                    "{name} at ({z1}, {z2})"
                );
            }
        }
    }

    #[test]
    fn diagonal_line_matches_determinant_oracle() {
        let m = model_of("IMEX-NPRK1[21]");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let z = c(6.0 * rng.random::<f64>() - 3.0, 6.0 * rng.random::<f64>() - 3.0);
            let v = stability_value(&m, z, z).unwrap();
            let expect = (1.0 + z) / (1.0 - z);
            assert!((v - expect).norm() <= 1e-12 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn denominator_leading_coefficient_identity() {
        // d_s = (-1)^s prod A1_kk for IMEX models
        for name in ["IMEX-NPRK2[43]-SiSa", "IMEX-NPRK3[54]-Si", "IMEX-NPRK2[42]a"] {
            let m = model_of(name);
            let s = m.stage_count();
            let d = m.denominator_z1().unwrap();
            let prod: f64 = (0..s).map(|k| m.a1()[(k, k)]).product();
            let expect = if s % 2 == 0 { prod } else { -prod };
            assert!((d[s] - expect).abs() <= 1e-12 * expect.abs(), "{name}");
        }
    }
}

use num_complex::Complex64;

use crate::stability::model::{
    stability_value, stiff_limit_form, StabilityModel, StiffLimit, StiffVariable,
};

/// Rectangular z2 grid: n x n points spanning [re0, re1] x [im0, im1].
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn point(&self, p: usize, q: usize) -> Complex64 {
        let fr = if self.n > 1 { p as f64 / (self.n - 1) as f64 } else { 0.0 };
        let fi = if self.n > 1 { q as f64 / (self.n - 1) as f64 } else { 0.0 };
        Complex64::new(self.re0 + fr * (self.re1 - self.re0), self.im0 + fi * (self.im1 - self.im0))
    }
}

/// Which family of two-dimensional slices a set of values belongs to.
#[derive(Debug, Clone, Copy)]
pub enum SliceKind {
    /// P(z1): fixed z1, symmetrized over conj(z1).
    FixedZ1(Complex64),
    /// P~(theta): supremum over the rays arg(z1) = +-theta.
    Wedge(f64),
}

/// Amplification magnitudes on a z2 grid; `values[q * n + p]` belongs to
/// `grid.point(p, q)`. Poles map to infinity.
#[derive(Debug, Clone)]
pub struct RegionSlice {
    pub grid: GridSpec,
    pub kind: SliceKind,
    pub values: Vec<f64>,
}

impl RegionSlice {
    pub fn value(&self, p: usize, q: usize) -> f64 {
        self.values[q * self.grid.n + p]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let n = self.grid.n;
        (0..n).flat_map(move |q| {
            (0..n).map(move |p| (self.grid.point(p, q), self.value(p, q)))
        })
    }
}

fn magnitude(model: &StabilityModel, z1: Complex64, z2: Complex64) -> f64 {
    match stability_value(model, z1, z2) {
        Ok(v) => v.norm(),
        Err(_) => f64::INFINITY,
    }
}

/// Slice at fixed z1: per grid point z2 the value is
/// max(|R(z1, z2)|, |R(conj z1, z2)|), symmetric about the real z1 axis.
pub fn region_slice(model: &StabilityModel, z1: Complex64, grid: GridSpec) -> RegionSlice {
    let n = grid.n;
    let mut values = vec![0.0; n * n];
    for q in 0..n {
        for p in 0..n {
            let z2 = grid.point(p, q);
            values[q * n + p] =
                magnitude(model, z1, z2).max(magnitude(model, z1.conj(), z2));
        }
    }
    RegionSlice { grid, kind: SliceKind::FixedZ1(z1), values }
}

/// Wedge slice P~(theta): per z2 the maximum of |R(gamma e^{+-i theta}, z2)|
/// over log-spaced gamma in [1e-3, 1e6] plus the analytic z1 -> infinity
/// limit. Finite sampling under-approximates the true supremum.
pub fn wedge_slice(
    model: &StabilityModel,
    theta: f64,
    grid: GridSpec,
    gamma_samples: usize,
) -> RegionSlice {
    let n = grid.n;
    let count = gamma_samples.max(2);
    let (lo, hi) = (1e-3f64, 1e6f64);
    let gammas: Vec<f64> = (0..count)
        .map(|k| lo * (hi / lo).powf(k as f64 / (count - 1) as f64))
        .collect();
    let limit = stiff_limit_form(model, StiffVariable::Z1, 1e-12);
    let mut values = vec![0.0; n * n];
    for q in 0..n {
        for p in 0..n {
            let z2 = grid.point(p, q);
            let mut best = match &limit {
                StiffLimit::Divergent => f64::INFINITY,
                StiffLimit::Zero => 0.0,
                StiffLimit::Rational { num, den } => {
                    let ev = |poly: &[f64]| {
                        poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z2 + c)
                    };
                    let d = ev(den);
                    if d.norm() == 0.0 {
                        f64::INFINITY
                    } else {
                        (ev(num) / d).norm()
                    }
                }
            };
            for &g in &gammas {
                for sign in [1.0, -1.0] {
                    let z1 = Complex64::from_polar(g, sign * theta);
                    best = best.max(magnitude(model, z1, z2));
                }
            }
            values[q * n + p] = best;
        }
    }
    RegionSlice { grid, kind: SliceKind::Wedge(theta), values }
}

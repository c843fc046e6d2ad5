//! Concrete nonlinearly partitioned problems: the two-parameter Dahlquist
//! test equation and viscous Burgers u_t = eps u_xx + u u_x in two nonlinear
//! partitions, with the solver capabilities the steppers need.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{newton_solve, tridiagonal, Mat, NewtonCfg};

/// Capability contract for problems y' = F(y, y).
///
/// `eval_f` is mandatory; everything else has a usable default: the
/// F = F_E + F_I split defaults to F_E = 0, F_I = F, and the implicit solves
/// fall back to Newton iteration with a finite-difference Jacobian
/// (relative tolerance 1e-12, absolute 1e-14, at most 50 iterations).
/// Implementations should override the solves whenever a closed form or a
/// banded factorization exists.
///
/// Solver methods return the iteration count so drivers can record
/// diagnostics. Instances must be safe to share across concurrent runs;
/// per-solve workspaces are allocated per call.
pub trait NonlinearPartitionProblem: Sync {
    fn dim(&self) -> usize;

    /// Designated initial state for experiments.
    fn initial_state(&self) -> Vec<f64>;

    /// F(u, v).
    fn eval_f(&self, u: &[f64], v: &[f64], out: &mut [f64]);

    /// Monolithic right-hand side G(y) = F(y, y).
    fn eval_g(&self, y: &[f64], out: &mut [f64]) {
        self.eval_f(y, y, out);
    }

    /// Non-stiff component F_E(v) of the split F = F_E + F_I.
    fn eval_f_explicit(&self, _v: &[f64], out: &mut [f64]) {
        out.fill(0.0);
    }

    /// Stiff component F_I(u, v) of the split F = F_E + F_I.
    fn eval_f_implicit(&self, u: &[f64], v: &[f64], out: &mut [f64]) {
        self.eval_f(u, v, out);
    }

    /// Solve Y = rhs + tau * F_I(Y, v) for Y.
    fn solve_implicit_first(
        &self,
        tau: f64,
        v: &[f64],
        rhs: &[f64],
        out: &mut [f64],
    ) -> Result<u32> {
        let mut fi = vec![0.0; self.dim()];
        let (y, iters) = newton_solve(
            |x, r| {
                self.eval_f_implicit(x, v, &mut fi);
                for i in 0..x.len() {
                    r[i] = x[i] - rhs[i] - tau * fi[i];
                }
            },
            rhs,
            &NewtonCfg::default(),
        )?;
        out.copy_from_slice(&y);
        Ok(iters)
    }

    /// Solve Y = rhs + tau * F(u, Y) for Y.
    fn solve_implicit_second(
        &self,
        tau: f64,
        u: &[f64],
        rhs: &[f64],
        out: &mut [f64],
    ) -> Result<u32> {
        let mut f = vec![0.0; self.dim()];
        let (y, iters) = newton_solve(
            |x, r| {
                self.eval_f(u, x, &mut f);
                for i in 0..x.len() {
                    r[i] = x[i] - rhs[i] - tau * f[i];
                }
            },
            rhs,
            &NewtonCfg::default(),
        )?;
        out.copy_from_slice(&y);
        Ok(iters)
    }

    /// Solve Y = rhs + tau * G(Y) for Y (fully implicit step).
    fn solve_implicit_monolithic(&self, tau: f64, rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        let mut g = vec![0.0; self.dim()];
        let (y, iters) = newton_solve(
            |x, r| {
                self.eval_g(x, &mut g);
                for i in 0..x.len() {
                    r[i] = x[i] - rhs[i] - tau * g[i];
                }
            },
            rhs,
            &NewtonCfg::default(),
        )?;
        out.copy_from_slice(&y);
        Ok(iters)
    }

    /// Whether G splits additively as G1 + G2 (for the additive IMEX Euler).
    fn has_additive_split(&self) -> bool {
        false
    }

    /// G1(y) and G2(y) with G = G1 + G2.
    fn eval_additive(&self, _y: &[f64], _g1: &mut [f64], _g2: &mut [f64]) -> Result<()> {
        Err(Error::MissingCapability("additive split G1 + G2"))
    }

    /// Solve Y = rhs + tau * G1(Y) for Y.
    fn solve_additive_implicit(&self, tau: f64, rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        if !self.has_additive_split() {
            return Err(Error::MissingCapability("additive split G1 + G2"));
        }
        let n = self.dim();
        let mut g1 = vec![0.0; n];
        let mut g2 = vec![0.0; n];
        let (y, iters) = newton_solve(
            |x, r| {
                self.eval_additive(x, &mut g1, &mut g2).expect("additive split");
                for i in 0..x.len() {
                    r[i] = x[i] - rhs[i] - tau * g1[i];
                }
            },
            rhs,
            &NewtonCfg::default(),
        )?;
        out.copy_from_slice(&y);
        Ok(iters)
    }

    /// Exact Jacobian dG/dy, if available.
    fn jacobian(&self, _y: &[f64]) -> Result<Mat> {
        Err(Error::MissingCapability("right-hand-side Jacobian"))
    }

    /// Solve (I - tau J(y)) x = rhs (the Rosenbrock stage system).
    fn rosenbrock_solve(&self, tau: f64, y: &[f64], rhs: &[f64], out: &mut [f64]) -> Result<()> {
        let n = self.dim();
        let jac = self.jacobian(y)?;
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = -tau * jac[(i, j)];
            }
            m[(i, i)] += 1.0;
        }
        let x = crate::numerics::dense_solve(m, rhs.to_vec())?;
        out.copy_from_slice(&x);
        Ok(())
    }

    /// Exact solution at time t from state y0 at time 0, if known.
    fn exact_solution(&self, _t: f64, _y0: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

// ---------------------------------------------------------------------------
// Partitioned Dahlquist equation
// ---------------------------------------------------------------------------

/// y' = f(y, y) with f(u, v) = lambda1 u + lambda2 v. Complex rates are
/// represented on a 2-dimensional real state via the standard rotation
/// embedding a + bi -> [[a, -b], [b, a]], so one step reproduces the complex
/// amplification factor exactly in (Re, Im) coordinates.
pub struct DahlquistProblem {
    l1: Complex64,
    l2: Complex64,
    complex: bool,
}

impl DahlquistProblem {
    pub fn new(l1: Complex64, l2: Complex64) -> Self {
        let complex = l1.im != 0.0 || l2.im != 0.0;
        DahlquistProblem { l1, l2, complex }
    }

    pub fn real(l1: f64, l2: f64) -> Self {
        Self::new(Complex64::new(l1, 0.0), Complex64::new(l2, 0.0))
    }

    pub fn rates(&self) -> (Complex64, Complex64) {
        (self.l1, self.l2)
    }

    fn apply(&self, l: Complex64, x: &[f64], out: &mut [f64], add: bool) {
        if self.complex {
            let (r, i) = (l.re, l.im);
            let (a, b) = (x[0], x[1]);
            let (u, v) = (r * a - i * b, i * a + r * b);
            if add {
                out[0] += u;
                out[1] += v;
            } else {
                out[0] = u;
                out[1] = v;
            }
        } else if add {
            out[0] += l.re * x[0];
        } else {
            out[0] = l.re * x[0];
        }
    }

    /// Solve (I - tau * l) y = rhs on the embedded state.
    fn resolvent(&self, tau: f64, l: Complex64, rhs: &[f64], out: &mut [f64]) {
        if self.complex {
            let m = Complex64::new(1.0, 0.0) - tau * l;
            let r = Complex64::new(rhs[0], rhs[1]);
            let y = r / m;
            out[0] = y.re;
            out[1] = y.im;
        } else {
            out[0] = rhs[0] / (1.0 - tau * l.re);
        }
    }
}

impl NonlinearPartitionProblem for DahlquistProblem {
    fn dim(&self) -> usize {
        if self.complex {
            2
        } else {
            1
        }
    }

    fn initial_state(&self) -> Vec<f64> {
        if self.complex {
            vec![1.0, 0.0]
        } else {
            vec![1.0]
        }
    }

    fn eval_f(&self, u: &[f64], v: &[f64], out: &mut [f64]) {
        self.apply(self.l1, u, out, false);
        self.apply(self.l2, v, out, true);
    }

    fn solve_implicit_first(&self, tau: f64, v: &[f64], rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        // Y = rhs + tau (l1 Y + l2 v)
        let mut r = rhs.to_vec();
        let mut l2v = vec![0.0; self.dim()];
        self.apply(self.l2, v, &mut l2v, false);
        for i in 0..r.len() {
            r[i] += tau * l2v[i];
        }
        self.resolvent(tau, self.l1, &r, out);
        Ok(0)
    }

    fn solve_implicit_second(&self, tau: f64, u: &[f64], rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        let mut r = rhs.to_vec();
        let mut l1u = vec![0.0; self.dim()];
        self.apply(self.l1, u, &mut l1u, false);
        for i in 0..r.len() {
            r[i] += tau * l1u[i];
        }
        self.resolvent(tau, self.l2, &r, out);
        Ok(0)
    }

    fn solve_implicit_monolithic(&self, tau: f64, rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        self.resolvent(tau, self.l1 + self.l2, rhs, out);
        Ok(0)
    }

    fn has_additive_split(&self) -> bool {
        true
    }

    fn eval_additive(&self, y: &[f64], g1: &mut [f64], g2: &mut [f64]) -> Result<()> {
        self.apply(self.l1, y, g1, false);
        self.apply(self.l2, y, g2, false);
        Ok(())
    }

    fn solve_additive_implicit(&self, tau: f64, rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        self.resolvent(tau, self.l1, rhs, out);
        Ok(0)
    }

    fn jacobian(&self, _y: &[f64]) -> Result<Mat> {
        let l = self.l1 + self.l2;
        if self.complex {
            let mut m = Mat::zeros(2, 2);
            m[(0, 0)] = l.re;
            m[(0, 1)] = -l.im;
            m[(1, 0)] = l.im;
            m[(1, 1)] = l.re;
            Ok(m)
        } else {
            let mut m = Mat::zeros(1, 1);
            m[(0, 0)] = l.re;
            Ok(m)
        }
    }

    fn exact_solution(&self, t: f64, y0: &[f64]) -> Option<Vec<f64>> {
        let w = ((self.l1 + self.l2) * t).exp();
        if self.complex {
            let y = w * Complex64::new(y0[0], y0[1]);
            Some(vec![y.re, y.im])
        } else {
            Some(vec![w.re * y0[0]])
        }
    }
}

/// Partitioned Dahlquist problem f(u, v) = l1 u + l2 v.
pub fn dahlquist(l1: Complex64, l2: Complex64) -> DahlquistProblem {
    DahlquistProblem::new(l1, l2)
}

// ---------------------------------------------------------------------------
// Viscous Burgers
// ---------------------------------------------------------------------------

/// Nonlinear partition of the discrete advection term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BurgersPartition {
    /// F(u, v) = eps D u + diag(v) A u
    NonConservative,
    /// F(u, v) = eps D u + (1/2) A (diag(v) u)
    Conservative,
}

/// Grid and physics for the viscous Burgers problem on [x0, x1] with
/// homogeneous Dirichlet boundaries and the initial profile exp(-3 x^2).
/// D and A are the classical second-order centered difference matrices,
/// scaled 1/hx^2 and 1/(2 hx).
#[derive(Debug, Clone)]
pub struct BurgersSpec {
    pub eps: f64,
    pub n: usize,
    pub x0: f64,
    pub x1: f64,
    pub partition: BurgersPartition,
}

impl BurgersSpec {
    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / (self.n + 1) as f64
    }
}

pub struct BurgersProblem {
    spec: BurgersSpec,
    x: Vec<f64>,
}

/// Build a Burgers problem; requires at least three interior points.
pub fn burgers(spec: BurgersSpec) -> Result<BurgersProblem> {
    if spec.n < 3 {
        return Err(Error::InvalidConfig(format!("burgers needs n >= 3, got {}", spec.n)));
    }
    if spec.eps < 0.0 || !(spec.x1 > spec.x0) {
        return Err(Error::InvalidConfig("burgers needs eps >= 0 and x1 > x0".into()));
    }
    let hx = spec.hx();
    let x = (1..=spec.n).map(|i| spec.x0 + hx * i as f64).collect();
    Ok(BurgersProblem { spec, x })
}

impl BurgersProblem {
    pub fn spec(&self) -> &BurgersSpec {
        &self.spec
    }

    pub fn grid(&self) -> &[f64] {
        &self.x
    }

    /// Second difference (u_{i+1} - 2 u_i + u_{i-1}) / hx^2 with zero
    /// boundary values.
    fn d_apply(&self, u: &[f64], out: &mut [f64]) {
        let n = self.spec.n;
        let s = 1.0 / (self.spec.hx() * self.spec.hx());
        for i in 0..n {
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < n { u[i + 1] } else { 0.0 };
            out[i] = s * (right - 2.0 * u[i] + left);
        }
    }

    /// Centered difference (u_{i+1} - u_{i-1}) / (2 hx) with zero boundaries.
    fn a_apply(&self, u: &[f64], out: &mut [f64]) {
        let n = self.spec.n;
        let s = 1.0 / (2.0 * self.spec.hx());
        for i in 0..n {
            let left = if i > 0 { u[i - 1] } else { 0.0 };
            let right = if i + 1 < n { u[i + 1] } else { 0.0 };
            out[i] = s * (right - left);
        }
    }

    /// Tridiagonal I - tau eps D - tau M(v), where M(v) is the partition's
    /// advection operator (linear in the first argument).
    fn first_arg_system(&self, tau: f64, v: &[f64]) -> crate::numerics::BandedMatrix {
        let n = self.spec.n;
        let hx = self.spec.hx();
        let d = self.spec.eps / (hx * hx);
        let a = 1.0 / (2.0 * hx);
        let mut sub = vec![0.0; n - 1];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n - 1];
        for i in 0..n {
            diag[i] = 1.0 + 2.0 * tau * d;
        }
        match self.spec.partition {
            BurgersPartition::NonConservative => {
                // row i of M: v_i * (+a at i+1, -a at i-1)
                for i in 0..n - 1 {
                    sup[i] = -tau * (d + v[i] * a);
                    sub[i] = -tau * (d - v[i + 1] * a);
                }
            }
            BurgersPartition::Conservative => {
                // row i of M = (1/2) A diag(v): +a/2 v_{i+1} at i+1, -a/2 v_{i-1} at i-1
                for i in 0..n - 1 {
                    sup[i] = -tau * (d + 0.5 * v[i + 1] * a);
                    sub[i] = -tau * (d - 0.5 * v[i] * a);
                }
            }
        }
        tridiagonal(&sub, &diag, &sup)
    }

    /// Tridiagonal analytic Jacobian of G as (sub, diag, sup).
    fn jacobian_bands(&self, y: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.spec.n;
        let hx = self.spec.hx();
        let d = self.spec.eps / (hx * hx);
        let a = 1.0 / (2.0 * hx);
        let mut sub = vec![0.0; n - 1];
        let mut diag = vec![-2.0 * d; n];
        let mut sup = vec![0.0; n - 1];
        match self.spec.partition {
            BurgersPartition::NonConservative => {
                // J = eps D + diag(A y) + diag(y) A
                let mut ay = vec![0.0; n];
                self.a_apply(y, &mut ay);
                for i in 0..n {
                    diag[i] += ay[i];
                }
                for i in 0..n - 1 {
                    sup[i] = d + y[i] * a;
                    sub[i] = d - y[i + 1] * a;
                }
            }
            BurgersPartition::Conservative => {
                // G = eps D y + (1/2) A (y . y)  =>  J = eps D + A diag(y)
                for i in 0..n - 1 {
                    sup[i] = d + y[i + 1] * a;
                    sub[i] = d - y[i] * a;
                }
            }
        }
        (sub, diag, sup)
    }
}

impl NonlinearPartitionProblem for BurgersProblem {
    fn dim(&self) -> usize {
        self.spec.n
    }

    fn initial_state(&self) -> Vec<f64> {
        self.x.iter().map(|x| (-3.0 * x * x).exp()).collect()
    }

    fn eval_f(&self, u: &[f64], v: &[f64], out: &mut [f64]) {
        let n = self.spec.n;
        self.d_apply(u, out);
        for o in out.iter_mut() {
            *o *= self.spec.eps;
        }
        let mut work = vec![0.0; n];
        match self.spec.partition {
            BurgersPartition::NonConservative => {
                self.a_apply(u, &mut work);
                for i in 0..n {
                    out[i] += v[i] * work[i];
                }
            }
            BurgersPartition::Conservative => {
                let vu: Vec<f64> = v.iter().zip(u).map(|(a, b)| a * b).collect();
                self.a_apply(&vu, &mut work);
                for i in 0..n {
                    out[i] += 0.5 * work[i];
                }
            }
        }
    }

    fn solve_implicit_first(&self, tau: f64, v: &[f64], rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        let sys = self.first_arg_system(tau, v);
        let y = sys.factor()?.solve(rhs);
        out.copy_from_slice(&y);
        Ok(1)
    }

    fn solve_implicit_second(&self, tau: f64, u: &[f64], rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        let n = self.spec.n;
        // Y = rhs + tau (eps D u + M2(u) Y) with M2 the second-argument operator
        let mut base = vec![0.0; n];
        self.d_apply(u, &mut base);
        for (b, r) in base.iter_mut().zip(rhs) {
            *b = r + tau * self.spec.eps * *b;
        }
        match self.spec.partition {
            BurgersPartition::NonConservative => {
                // M2(u) = diag(A u): diagonal solve
                let mut au = vec![0.0; n];
                self.a_apply(u, &mut au);
                for i in 0..n {
                    let denom = 1.0 - tau * au[i];
                    if denom == 0.0 {
                        return Err(Error::Singular);
                    }
                    out[i] = base[i] / denom;
                }
            }
            BurgersPartition::Conservative => {
                // M2(u) = (1/2) A diag(u): tridiagonal
                let hx = self.spec.hx();
                let a = 1.0 / (2.0 * hx);
                let mut sub = vec![0.0; n - 1];
                let diag = vec![1.0; n];
                let mut sup = vec![0.0; n - 1];
                for i in 0..n - 1 {
                    sup[i] = -tau * 0.5 * u[i + 1] * a;
                    sub[i] = tau * 0.5 * u[i] * a;
                }
                let y = tridiagonal(&sub, &diag, &sup).factor()?.solve(&base);
                out.copy_from_slice(&y);
            }
        }
        Ok(1)
    }

    fn solve_implicit_monolithic(&self, tau: f64, rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        // Newton with the analytic tridiagonal Jacobian
        let n = self.spec.n;
        let cfg = NewtonCfg::default();
        let mut y = rhs.to_vec();
        let mut g = vec![0.0; n];
        let mut res = vec![0.0; n];
        for iter in 0..cfg.max_iter {
            self.eval_g(&y, &mut g);
            let mut rn = 0.0;
            let mut yn = 0.0;
            for i in 0..n {
                res[i] = y[i] - rhs[i] - tau * g[i];
                rn += res[i] * res[i];
                yn += y[i] * y[i];
            }
            if !rn.is_finite() {
                return Err(Error::MaxIterExceeded { max_iter: iter, residual: rn.sqrt() });
            }
            if rn.sqrt() <= cfg.tol_abs.max(cfg.tol_rel * yn.sqrt()) {
                out.copy_from_slice(&y);
                return Ok(iter);
            }
            let (sub, diag, sup) = self.jacobian_bands(&y);
            let m = tridiagonal(
                &sub.iter().map(|v| -tau * v).collect::<Vec<_>>(),
                &diag.iter().map(|v| 1.0 - tau * v).collect::<Vec<_>>(),
                &sup.iter().map(|v| -tau * v).collect::<Vec<_>>(),
            );
            let neg: Vec<f64> = res.iter().map(|r| -r).collect();
            let dy = m.factor()?.solve(&neg);
            for i in 0..n {
                y[i] += dy[i];
            }
        }
        let rn = res.iter().map(|r| r * r).sum::<f64>().sqrt();
        Err(Error::MaxIterExceeded { max_iter: cfg.max_iter, residual: rn })
    }

    fn has_additive_split(&self) -> bool {
        true
    }

    fn eval_additive(&self, y: &[f64], g1: &mut [f64], g2: &mut [f64]) -> Result<()> {
        let n = self.spec.n;
        self.d_apply(y, g1);
        for v in g1.iter_mut() {
            *v *= self.spec.eps;
        }
        match self.spec.partition {
            BurgersPartition::NonConservative => {
                let mut ay = vec![0.0; n];
                self.a_apply(y, &mut ay);
                for i in 0..n {
                    g2[i] = y[i] * ay[i];
                }
            }
            BurgersPartition::Conservative => {
                let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
                self.a_apply(&yy, g2);
                for v in g2.iter_mut() {
                    *v *= 0.5;
                }
            }
        }
        Ok(())
    }

    fn solve_additive_implicit(&self, tau: f64, rhs: &[f64], out: &mut [f64]) -> Result<u32> {
        // (I - tau eps D) y = rhs
        let n = self.spec.n;
        let hx = self.spec.hx();
        let d = self.spec.eps / (hx * hx);
        let sub = vec![-tau * d; n - 1];
        let diag = vec![1.0 + 2.0 * tau * d; n];
        let sup = vec![-tau * d; n - 1];
        let y = tridiagonal(&sub, &diag, &sup).factor()?.solve(rhs);
        out.copy_from_slice(&y);
        Ok(1)
    }

    fn jacobian(&self, y: &[f64]) -> Result<Mat> {
        let n = self.spec.n;
        let (sub, diag, sup) = self.jacobian_bands(y);
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
            if i > 0 {
                m[(i, i - 1)] = sub[i - 1];
            }
            if i + 1 < n {
                m[(i, i + 1)] = sup[i];
            }
        }
        Ok(m)
    }

    fn rosenbrock_solve(&self, tau: f64, y: &[f64], rhs: &[f64], out: &mut [f64]) -> Result<()> {
        let (sub, diag, sup) = self.jacobian_bands(y);
        let m = tridiagonal(
            &sub.iter().map(|v| -tau * v).collect::<Vec<_>>(),
            &diag.iter().map(|v| 1.0 - tau * v).collect::<Vec<_>>(),
            &sup.iter().map(|v| -tau * v).collect::<Vec<_>>(),
        );
        let x = m.factor()?.solve(rhs);
        out.copy_from_slice(&x);
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Preconfigured experiments
// ---------------------------------------------------------------------------

/// Which published Burgers study to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BurgersExperiment {
    /// Euler-family comparison, eps = 1/200, domain [-2, 2], t = 0.6.
    Fig1Eps200,
    /// Euler-family comparison, eps = 1/10000.
    Fig1Eps10000,
    /// Seven IMEX methods on both partitions, domain [-8, 8], t = 20.
    Fig3,
}

impl std::str::FromStr for BurgersExperiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1-eps200" => Ok(BurgersExperiment::Fig1Eps200),
            "fig1-eps10000" => Ok(BurgersExperiment::Fig1Eps10000),
            "fig3" => Ok(BurgersExperiment::Fig3),
            other => Err(Error::InvalidConfig(format!(
                "unknown experiment '{other}' (expected fig1-eps200, fig1-eps10000, fig3)"
            ))),
        }
    }
}

/// One convergence sweep: a problem, methods, a step grid, and the reference
/// policy (the most accurate catalog method at min-h divided by `refine`).
pub struct ExperimentCase {
    pub label: String,
    pub problem: BurgersProblem,
    /// Catalog method names, or `euler:<variant>` for the Euler family.
    pub methods: Vec<String>,
    pub t_final: f64,
    pub steps: Vec<usize>,
    pub reference_method: String,
    pub reference_refine: usize,
}

pub struct ExperimentPlan {
    pub label: String,
    pub cases: Vec<ExperimentCase>,
}

const FIG3_METHODS: [&str; 7] = [
    "IMEX-NPRK1[21]",
    "IMEX-NPRK2[31]",
    "IMEX-NPRK2[42]a",
    "IMEX-NPRK2[42]b",
    "IMEX-NPRK2[43]-SiSa",
    "IMEX-NPRK3[54]-Sa",
    "IMEX-NPRK3[54]-Si",
];

const EULER_METHODS: [&str; 5] = [
    "euler:explicit",
    "euler:implicit",
    "euler:rosenbrock",
    "euler:imex-additive",
    "euler:nprk",
];

/// Assemble a published experiment at the given grid resolution (the papers'
/// figures use n = 1000; n = 200 is the reduced desk scale). The step grids
/// h = T / 2^k are a reconstruction; the figures do not state them.
pub fn burgers_experiment(which: BurgersExperiment, n: usize) -> Result<ExperimentPlan> {
    let steps = |ks: std::ops::RangeInclusive<u32>| -> Vec<usize> {
        ks.map(|k| 1usize << k).collect()
    };
    match which {
        BurgersExperiment::Fig1Eps200 | BurgersExperiment::Fig1Eps10000 => {
            let eps = if which == BurgersExperiment::Fig1Eps200 { 1.0 / 200.0 } else { 1e-4 };
            let label = if which == BurgersExperiment::Fig1Eps200 {
                "fig1-eps200"
            } else {
                "fig1-eps10000"
            };
            let problem = burgers(BurgersSpec {
                eps,
                n,
                x0: -2.0,
                x1: 2.0,
                partition: BurgersPartition::NonConservative,
            })?;
            Ok(ExperimentPlan {
                label: label.into(),
                cases: vec![ExperimentCase {
                    label: label.into(),
                    problem,
                    methods: EULER_METHODS.iter().map(|s| s.to_string()).collect(),
                    t_final: 0.6,
                    steps: steps(2..=10),
                    reference_method: "IMEX-NPRK3[54]-Sa".into(),
                    reference_refine: 32,
                }],
            })
        }
        BurgersExperiment::Fig3 => {
            let mut cases = Vec::new();
            for (label, partition) in [
                ("fig3-non-conservative", BurgersPartition::NonConservative),
                ("fig3-conservative", BurgersPartition::Conservative),
            ] {
                let problem = burgers(BurgersSpec {
                    eps: 1.0 / 200.0,
                    n,
                    x0: -8.0,
                    x1: 8.0,
                    partition,
                })?;
                cases.push(ExperimentCase {
                    label: label.into(),
                    problem,
                    methods: FIG3_METHODS.iter().map(|s| s.to_string()).collect(),
                    t_final: 20.0,
                    steps: steps(4..=10),
                    reference_method: "IMEX-NPRK3[54]-Sa".into(),
                    reference_refine: 32,
                });
            }
            Ok(ExperimentPlan { label: "fig3".into(), cases })
        }
    }
}

//! Time-stepping engines: the general restricted-ansatz NPRK step, the
//! sequential IMEX step in its practical accumulator form, the five
//! first-order reference methods, fixed-step drivers, and convergence
//! studies.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numerics::fit_loglog_slope;
use crate::problems::NonlinearPartitionProblem;
use crate::tableau::{find, CatalogMethod, NprkMethod, SequentialMethod, StageDiag};

/// Fixed-step driver settings.
#[derive(Debug, Clone, Copy)]
pub struct StepConfig {
    pub h: f64,
    pub n_steps: usize,
}

impl StepConfig {
    pub fn new(h: f64, n_steps: usize) -> Result<Self> {
        if !(h > 0.0) || n_steps == 0 {
            return Err(Error::InvalidConfig(format!(
                "step config needs h > 0 and n_steps >= 1, got h = {h}, n_steps = {n_steps}"
            )));
        }
        Ok(StepConfig { h, n_steps })
    }
}

/// Recorded fixed-step run. `solver_iterations[k]` counts the implicit-solve
/// iterations in step k; a run that exceeds the blow-up threshold (state norm
/// above 1e10 times the initial norm), goes non-finite, or loses its stage
/// solver is truncated with `diverged` set. Divergence is data, not an error.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub solver_iterations: Vec<u32>,
    pub diverged: bool,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// One step of a restricted-ansatz NPRK method: stages in index order, each
/// either explicit, implicit in the first argument (solve
/// Y = r + h a_{i,i,i-1} F(Y, Y_{i-1})), or implicit in the second (solve
/// Y = r + h a_{i,i-1,i} F(Y_{i-1}, Y)); the output applies the b_{jk}
/// double sum. Returns the new state and the total implicit-solve iterations.
pub fn nprk_step(
    problem: &dyn NonlinearPartitionProblem,
    m: &NprkMethod,
    y: &[f64],
    h: f64,
) -> Result<(Vec<f64>, u32)> {
    m.check_restricted_ansatz()?;
    let n = problem.dim();
    let s = m.stages();
    let mut stages: Vec<Vec<f64>> = Vec::with_capacity(s);
    stages.push(y.to_vec());
    let mut evals: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    let mut iters_total = 0u32;

    let mut eval_pair = |j: usize,
                         k: usize,
                         stages: &[Vec<f64>],
                         evals: &mut HashMap<(usize, usize), Vec<f64>>| {
        evals.entry((j, k)).or_insert_with(|| {
            let mut out = vec![0.0; n];
            problem.eval_f(&stages[j - 1], &stages[k - 1], &mut out);
            out
        });
    };

    for i in 2..=s {
        let mut r = y.to_vec();
        let mut diag = StageDiag::Explicit;
        for e in m.a_entries().iter().filter(|e| e.i == i) {
            if e.j == i {
                diag = StageDiag::ImplicitFirst(e.value);
            } else if e.k == i {
                diag = StageDiag::ImplicitSecond(e.value);
            } else {
                eval_pair(e.j, e.k, &stages, &mut evals);
                axpy(&mut r, h * e.value, &evals[&(e.j, e.k)]);
            }
        }
        let prev = &stages[i - 2];
        let mut new_stage = vec![0.0; n];
        match diag {
            StageDiag::Explicit => new_stage.copy_from_slice(&r),
            StageDiag::ImplicitFirst(alpha) => {
                // Y = r + h alpha (F_E(Y_prev) + F_I(Y, Y_prev))
                let mut fe = vec![0.0; n];
                problem.eval_f_explicit(prev, &mut fe);
                axpy(&mut r, h * alpha, &fe);
                let iters = problem
                    .solve_implicit_first(h * alpha, prev, &r, &mut new_stage)
                    .map_err(|e| stage_error(i, e))?;
                iters_total += iters;
            }
            StageDiag::ImplicitSecond(alpha) => {
                let iters = problem
                    .solve_implicit_second(h * alpha, prev, &r, &mut new_stage)
                    .map_err(|e| stage_error(i, e))?;
                iters_total += iters;
            }
        }
        stages.push(new_stage);
    }

    let mut out = y.to_vec();
    for (j, k, w) in m.b_entries() {
        eval_pair(j, k, &stages, &mut evals);
        axpy(&mut out, h * w, &evals[&(j, k)]);
    }
    Ok((out, iters_total))
}

fn stage_error(stage: usize, e: Error) -> Error {
    match e {
        Error::MaxIterExceeded { .. } | Error::Singular => {
            Error::SolverDiverged { stage, detail: e.to_string() }
        }
        other => other,
    }
}

/// One step of a sequentially coupled IMEX method in the practical
/// accumulator form: running right-hand sides r_i, the explicit part
/// delta = h F_E(Y_old), the implicit solve, then
/// delta += (Y_new - r_j) / a_{j,j,j-1} to recover h F(Y_new, Y_old) without
/// applying the implicit operator. Explicit stages set Y_new = Y_old and
/// evaluate delta directly. Each stage's delta feeds the future r_i and the
/// output with its own weight b_{j,j-1}.
pub fn imex_step(
    problem: &dyn NonlinearPartitionProblem,
    m: &SequentialMethod,
    y: &[f64],
    h: f64,
) -> Result<(Vec<f64>, u32)> {
    if !m.is_imex() {
        return Err(Error::UnsupportedStructure(
            "the practical IMEX step needs implicit-in-first stages only; \
             use nprk_step for implicit-in-second methods",
        ));
    }
    let n = problem.dim();
    let s = m.stages();
    let mut y_old;
    let mut y_new = y.to_vec();
    let mut y_out = y.to_vec();
    // r[i - 2] accumulates y_n + h sum_{j < i} a_{i,j,j-1} F(Y_j, Y_{j-1})
    let mut r: Vec<Vec<f64>> = vec![y.to_vec(); s - 1];
    let mut delta = vec![0.0; n];
    let mut iters_total = 0u32;

    for j in 2..=s {
        y_old = std::mem::take(&mut y_new);
        match m.row(j).diag {
            StageDiag::ImplicitFirst(alpha) => {
                problem.eval_f_explicit(&y_old, &mut delta);
                for d in delta.iter_mut() {
                    *d *= h;
                }
                let rj = &mut r[j - 2];
                axpy(rj, alpha, &delta);
                y_new = vec![0.0; n];
                let iters = problem
                    .solve_implicit_first(h * alpha, &y_old, rj, &mut y_new)
                    .map_err(|e| stage_error(j, e))?;
                iters_total += iters;
                // delta becomes h F(Y_new, Y_old) without applying F_I
                for i in 0..n {
                    delta[i] += (y_new[i] - rj[i]) / alpha;
                }
            }
            StageDiag::Explicit => {
                // explicit stage in the implicit variable; guarded against
                // the zero-diagonal division above
                y_new = y_old.clone();
                problem.eval_f(&y_new, &y_old, &mut delta);
                for d in delta.iter_mut() {
                    *d *= h;
                }
            }
            StageDiag::ImplicitSecond(_) => unreachable!("checked by is_imex"),
        }
        axpy(&mut y_out, m.weight(j), &delta);
        for i in j + 1..=s {
            let a = m.a_seq(i, j);
            if a != 0.0 {
                axpy(&mut r[i - 2], a, &delta);
            }
        }
    }
    Ok((y_out, iters_total))
}

/// The five first-order reference methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerVariant {
    /// y1 = y + h G(y)
    Explicit,
    /// y1 = y + h G(y1)
    Implicit,
    /// (I - h J(y)) (y1 - y) = h G(y)
    Rosenbrock,
    /// y1 = y + h G1(y1) + h G2(y)
    ImexAdditive,
    /// y1 = y + h F(y1, y)
    Nprk,
}

impl EulerVariant {
    pub const ALL: [EulerVariant; 5] = [
        EulerVariant::Explicit,
        EulerVariant::Implicit,
        EulerVariant::Rosenbrock,
        EulerVariant::ImexAdditive,
        EulerVariant::Nprk,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            EulerVariant::Explicit => "euler:explicit",
            EulerVariant::Implicit => "euler:implicit",
            EulerVariant::Rosenbrock => "euler:rosenbrock",
            EulerVariant::ImexAdditive => "euler:imex-additive",
            EulerVariant::Nprk => "euler:nprk",
        }
    }
}

impl std::str::FromStr for EulerVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim_start_matches("euler:") {
            "explicit" => Ok(EulerVariant::Explicit),
            "implicit" => Ok(EulerVariant::Implicit),
            "rosenbrock" => Ok(EulerVariant::Rosenbrock),
            "imex-additive" | "imex" => Ok(EulerVariant::ImexAdditive),
            "nprk" => Ok(EulerVariant::Nprk),
            other => Err(Error::UnknownMethod(format!("euler:{other}"))),
        }
    }
}

/// One step of the requested first-order method.
pub fn euler_family_step(
    problem: &dyn NonlinearPartitionProblem,
    variant: EulerVariant,
    y: &[f64],
    h: f64,
) -> Result<(Vec<f64>, u32)> {
    let n = problem.dim();
    match variant {
        EulerVariant::Explicit => {
            let mut g = vec![0.0; n];
            problem.eval_g(y, &mut g);
            let mut out = y.to_vec();
            axpy(&mut out, h, &g);
            Ok((out, 0))
        }
        EulerVariant::Implicit => {
            let mut out = vec![0.0; n];
            let iters = problem
                .solve_implicit_monolithic(h, y, &mut out)
                .map_err(|e| stage_error(1, e))?;
            Ok((out, iters))
        }
        EulerVariant::Rosenbrock => {
            let mut g = vec![0.0; n];
            problem.eval_g(y, &mut g);
            for v in g.iter_mut() {
                *v *= h;
            }
            let mut dy = vec![0.0; n];
            problem.rosenbrock_solve(h, y, &g, &mut dy)?;
            let mut out = y.to_vec();
            axpy(&mut out, 1.0, &dy);
            Ok((out, 1))
        }
        EulerVariant::ImexAdditive => {
            let mut g1 = vec![0.0; n];
            let mut g2 = vec![0.0; n];
            problem.eval_additive(y, &mut g1, &mut g2)?;
            let mut rhs = y.to_vec();
            axpy(&mut rhs, h, &g2);
            let mut out = vec![0.0; n];
            let iters = problem
                .solve_additive_implicit(h, &rhs, &mut out)
                .map_err(|e| stage_error(1, e))?;
            Ok((out, iters))
        }
        EulerVariant::Nprk => {
            // y1 = y + h F(y1, y) = y + h F_E(y) + h F_I(y1, y)
            let mut fe = vec![0.0; n];
            problem.eval_f_explicit(y, &mut fe);
            let mut rhs = y.to_vec();
            axpy(&mut rhs, h, &fe);
            let mut out = vec![0.0; n];
            let iters = problem
                .solve_implicit_first(h, y, &rhs, &mut out)
                .map_err(|e| stage_error(1, e))?;
            Ok((out, iters))
        }
    }
}

/// A method bound to a stepping routine.
#[derive(Debug, Clone)]
pub enum TimeStepper {
    Nprk(NprkMethod),
    Imex(SequentialMethod),
    Euler(EulerVariant),
}

impl TimeStepper {
    /// Resolve a method label: a catalog name, or `euler:<variant>`.
    /// Sequential IMEX catalog entries use the practical accumulator step,
    /// IMIM entries the general restricted-ansatz step.
    pub fn by_name(name: &str) -> Result<Self> {
        if name.starts_with("euler:") {
            return Ok(TimeStepper::Euler(name.parse()?));
        }
        let entry = find(name)?;
        Ok(match &entry.method {
            CatalogMethod::Sequential(m) => TimeStepper::Imex(m.clone()),
            CatalogMethod::General(m) => TimeStepper::Nprk(m.clone()),
        })
    }

    pub fn label(&self) -> String {
        match self {
            TimeStepper::Nprk(m) => m.name().to_owned(),
            TimeStepper::Imex(m) => m.name().to_owned(),
            TimeStepper::Euler(v) => v.label().to_owned(),
        }
    }

    pub fn step(
        &self,
        problem: &dyn NonlinearPartitionProblem,
        y: &[f64],
        h: f64,
    ) -> Result<(Vec<f64>, u32)> {
        match self {
            TimeStepper::Nprk(m) => nprk_step(problem, m, y, h),
            TimeStepper::Imex(m) => imex_step(problem, m, y, h),
            TimeStepper::Euler(v) => euler_family_step(problem, *v, y, h),
        }
    }
}

const BLOWUP_FACTOR: f64 = 1e10;

/// Fixed-step integration from (t0, y0). Solver failures and norm blow-up
/// beyond 1e10 times the initial norm truncate the run with the divergence
/// flag set.
pub fn integrate(
    problem: &dyn NonlinearPartitionProblem,
    stepper: &TimeStepper,
    y0: &[f64],
    t0: f64,
    cfg: &StepConfig,
) -> Trajectory {
    let limit = BLOWUP_FACTOR * norm2(y0).max(f64::MIN_POSITIVE);
    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![y0.to_vec()],
        solver_iterations: Vec::new(),
        diverged: false,
    };
    let mut y = y0.to_vec();
    for k in 0..cfg.n_steps {
        match stepper.step(problem, &y, cfg.h) {
            Ok((next, iters)) => {
                y = next;
                traj.solver_iterations.push(iters);
            }
            Err(_) => {
                traj.diverged = true;
                break;
            }
        }
        let t = t0 + cfg.h * (k + 1) as f64;
        traj.times.push(t);
        traj.states.push(y.clone());
        let norm = norm2(&y);
        if !norm.is_finite() || norm > limit {
            traj.diverged = true;
            break;
        }
    }
    traj
}

/// How the reference solution of a convergence study is produced.
pub enum ReferencePolicy {
    /// Use the problem's exact solution.
    Exact,
    /// Integrate with the given stepper at h_min / refine.
    Computed { stepper: TimeStepper, refine: usize },
}

impl ReferencePolicy {
    /// Default for problems without a closed-form solution: the third-order
    /// stiffly accurate catalog method at one thirty-second of the smallest
    /// step.
    pub fn fine_default() -> Self {
        ReferencePolicy::Computed {
            stepper: TimeStepper::by_name("IMEX-NPRK3[54]-Sa").expect("catalog"),
            refine: 32,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub method: String,
    pub h: f64,
    /// Final-time discrete L2 error; None when the run diverged.
    pub error: Option<f64>,
    pub diverged: bool,
    /// Pairwise observed order against the previous grid level.
    pub pairwise_order: Option<f64>,
}

#[derive(Debug)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of log(error) vs log(h) per method over the
    /// non-saturated, non-diverged range.
    pub slopes: Vec<(String, Option<f64>)>,
    pub reference_norm: f64,
}

impl ConvergenceTable {
    pub fn slope(&self, method: &str) -> Option<f64> {
        self.slopes.iter().find(|(m, _)| m == method).and_then(|(_, s)| *s)
    }

    pub fn rows_for<'a>(&'a self, method: &'a str) -> impl Iterator<Item = &'a ConvergenceRow> + 'a {
        self.rows.iter().filter(move |r| r.method == method)
    }
}

/// Fixed-step convergence study: error is the discrete L2 norm of
/// y_N - y_ref at the final time; the observed order is the least-squares
/// slope over the non-saturated range (diverged runs and errors at the
/// round-off floor are excluded from the fit).
pub fn convergence_study(
    problem: &dyn NonlinearPartitionProblem,
    y0: &[f64],
    t_final: f64,
    methods: &[TimeStepper],
    steps: &[usize],
    reference: &ReferencePolicy,
) -> Result<ConvergenceTable> {
    if steps.is_empty() {
        return Err(Error::InsufficientData("empty step grid"));
    }
    let y_ref = match reference {
        ReferencePolicy::Exact => problem
            .exact_solution(t_final, y0)
            .ok_or(Error::MissingCapability("exact solution"))?,
        ReferencePolicy::Computed { stepper, refine } => {
            let n_ref = steps.iter().copied().max().unwrap() * refine.max(&1);
            let cfg = StepConfig::new(t_final / n_ref as f64, n_ref)?;
            let traj = integrate(problem, stepper, y0, 0.0, &cfg);
            if traj.diverged {
                return Err(Error::SolverDiverged {
                    stage: 0,
                    detail: "reference integration diverged".into(),
                });
            }
            traj.final_state().to_vec()
        }
    };
    let ref_norm = norm2(&y_ref);
    let floor = 1e3 * f64::EPSILON * ref_norm.max(1.0);

    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for stepper in methods {
        let label = stepper.label();
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for &n_steps in steps {
            let h = t_final / n_steps as f64;
            let cfg = StepConfig::new(h, n_steps)?;
            let traj = integrate(problem, stepper, y0, 0.0, &cfg);
            let (error, diverged) = if traj.diverged {
                (None, true)
            } else {
                let e = traj
                    .final_state()
                    .iter()
                    .zip(&y_ref)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                (Some(e), false)
            };
            let pairwise = match (prev, error) {
                (Some((hp, ep)), Some(e)) if e > 0.0 && ep > 0.0 => {
                    Some((ep / e).ln() / (hp / h).ln())
                }
                _ => None,
            };
            if let Some(e) = error {
                prev = Some((h, e));
                if e > floor {
                    hs.push(h);
                    errs.push(e);
                }
            } else {
                prev = None;
            }
            rows.push(ConvergenceRow {
                method: label.clone(),
                h,
                error,
                diverged,
                pairwise_order: pairwise,
            });
        }
        slopes.push((label, fit_loglog_slope(&hs, &errs).ok()));
    }
    Ok(ConvergenceTable { rows, slopes, reference_norm: ref_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{burgers, dahlquist, BurgersPartition, BurgersSpec, DahlquistProblem};
    use crate::stability::{stability_value, StabilityModel};
    use crate::tableau::{catalog, to_sequential, TensorEntry};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn as_complex(p: &DahlquistProblem, y: &[f64]) -> Complex64 {
        if y.len() == 2 {
            c(y[0], y[1])
        } else {
            c(y[0], 0.0)
        }
    }

    #[test]
    fn euler_nprk_step_examples() {
        // linear: y1 = (1 + h l2)/(1 - h l1) y0
        let p = DahlquistProblem::real(-10.0, -1.0);
        let m = find("IMEX-NPRK1[21]").unwrap().method.as_nprk();
        let (y1, _) = nprk_step(&p, &m, &[1.0], 0.1).unwrap();
        assert!((y1[0] - 0.45).abs() < 1e-15);
    }

    /// Scalar problem F(u, v) = u * v with closed-form first-argument solve.
    struct ProductProblem;
    impl NonlinearPartitionProblem for ProductProblem {
        fn dim(&self) -> usize {
            1
        }
        fn initial_state(&self) -> Vec<f64> {
            vec![1.0]
        }
        fn eval_f(&self, u: &[f64], v: &[f64], out: &mut [f64]) {
            out[0] = u[0] * v[0];
        }
        fn solve_implicit_first(&self, tau: f64, v: &[f64], rhs: &[f64], out: &mut [f64]) -> Result<u32> {
            // y = rhs + tau y v  =>  y = rhs / (1 - tau v)
            out[0] = rhs[0] / (1.0 - tau * v[0]);
            Ok(0)
        }
    }

    #[test]
    fn product_problem_euler_step_solves_scalar_stage() {
        // y = 1 + 0.5 y  =>  y = 2
        let m = find("IMEX-NPRK1[21]").unwrap().method.as_nprk();
        let (y1, _) = nprk_step(&ProductProblem, &m, &[1.0], 0.5).unwrap();
        assert!((y1[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_rk4_embedding_matches_classical_step() {
        // classical RK4 embedded diagonally (a_ijk = 0 for j != k, b diagonal)
        // applied to y' = y reproduces the 4th-order truncation of e^h
        let a = [
            (2usize, 1usize, 0.5),
            (3, 2, 0.5),
            (4, 3, 1.0),
        ];
        let entries: Vec<TensorEntry> = a
            .iter()
            .map(|&(i, j, v)| TensorEntry { i, j, k: j, value: v })
            .collect();
        let b = vec![
            (1, 1, 1.0 / 6.0),
            (2, 2, 1.0 / 3.0),
            (3, 3, 1.0 / 3.0),
            (4, 4, 1.0 / 6.0),
        ];
        let m = NprkMethod::new("rk4-diag", 4, entries, b).unwrap();
        let p = DahlquistProblem::real(0.5, 0.5); // G(y) = y
        let h = 0.25;
        let (y1, _) = nprk_step(&p, &m, &[1.0], h).unwrap();
        let expect = 1.0 + h + h * h / 2.0 + h.powi(3) / 6.0 + h.powi(4) / 24.0;
        assert!((y1[0] - expect).abs() < 1e-15, "{} vs {expect}", y1[0]);
    }

    #[test]
    fn linear_problem_oracle_all_catalog_methods() {
        // one step equals R(h l1, h l2) y0 to 1e-13 relative, for random
        // left-half-plane rates
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for e in catalog() {
            let model = match &e.method {
                CatalogMethod::Sequential(m) => StabilityModel::from_sequential(m).unwrap(),
                CatalogMethod::General(m) => StabilityModel::from_nprk(m).unwrap(),
            };
            let nprk = e.method.as_nprk();
            for _ in 0..20 {
                let l1 = c(-4.0 * rng.random::<f64>(), 2.0 * rng.random::<f64>() - 1.0);
                let l2 = c(-2.0 * rng.random::<f64>(), 2.0 * rng.random::<f64>() - 1.0);
                let p = dahlquist(l1, l2);
                let h = 0.4;
                let y0 = p.initial_state();
                let (y1, _) = nprk_step(&p, &nprk, &y0, h).unwrap();
                let expect = stability_value(&model, h * l1, h * l2).unwrap();
                let got = as_complex(&p, &y1);
                assert!(
                    (got - expect).norm() <= 1e-13 * expect.norm().max(1.0),
                    "{}: {got} vs {expect}",
                    e.name
                );
            }
        }
    }

    #[test]
    fn imex_step_equals_nprk_step_on_catalog() {
        // dual-path comparison on a nonlinear scalar problem
        for e in catalog() {
            let CatalogMethod::Sequential(m) = &e.method else { continue };
            let nprk = m.to_nprk();
            let h = 0.05;
            let (ya, _) = imex_step(&ProductProblem, m, &[1.0], h).unwrap();
            let (yb, _) = nprk_step(&ProductProblem, &nprk, &[1.0], h).unwrap();
            assert!(
                (ya[0] - yb[0]).abs() <= 1e-13 * yb[0].abs().max(1.0),
                "{}: {} vs {}",
                e.name,
                ya[0],
                yb[0]
            );
        }
    }

    #[test]
    fn imex_step_with_trivial_split_equals_nprk_euler() {
        let p = DahlquistProblem::real(-3.0, -0.5);
        let entry = find("IMEX-NPRK1[21]").unwrap();
        let CatalogMethod::Sequential(m) = &entry.method else { panic!() };
        let (ya, _) = imex_step(&p, m, &[1.0], 0.2).unwrap();
        let (yb, _) = euler_family_step(&p, EulerVariant::Nprk, &[1.0], 0.2).unwrap();
        assert!((ya[0] - yb[0]).abs() < 1e-15);
    }

    #[test]
    fn sisa_imex_step_matches_stability_function_on_dahlquist() {
        let entry = find("IMEX-NPRK2[43]-SiSa").unwrap();
        let CatalogMethod::Sequential(m) = &entry.method else { panic!() };
        let model = StabilityModel::from_sequential(m).unwrap();
        let p = DahlquistProblem::real(-7.0, -0.9);
        let h = 0.3;
        let (y1, _) = imex_step(&p, m, &[1.0], h).unwrap();
        let expect = stability_value(&model, c(-7.0 * h, 0.0), c(-0.9 * h, 0.0)).unwrap();
        assert!((y1[0] - expect.re).abs() < 1e-13);
    }

    /// Random restricted-ansatz tensor on a scalar product nonlinearity.
    fn random_restricted(rng: &mut impl Rng, s: usize) -> NprkMethod {
        let mut entries = Vec::new();
        for i in 2..=s {
            for j in 1..i {
                for k in 1..i {
                    if rng.random::<f64>() < 0.6 {
                        entries.push(TensorEntry {
                            i,
                            j,
                            k,
                            value: 0.6 * (rng.random::<f64>() - 0.5),
                        });
                    }
                }
            }
            match rng.random_range(0..3) {
                0 => entries.push(TensorEntry {
                    i,
                    j: i,
                    k: i - 1,
                    value: 0.3 + 0.4 * rng.random::<f64>(),
                }),
                1 => entries.push(TensorEntry {
                    i,
                    j: i - 1,
                    k: i,
                    value: 0.3 + 0.4 * rng.random::<f64>(),
                }),
                _ => {}
            }
        }
        let mut b = Vec::new();
        for j in 1..=s {
            for k in 1..=s {
                if rng.random::<f64>() < 0.4 {
                    b.push((j, k, 0.5 * (rng.random::<f64>() - 0.5)));
                }
            }
        }
        NprkMethod::new("random", s, entries, b).unwrap()
    }

    /// Scalar F(u, v) = u v + 0.3 sin(v), implicit-first and implicit-second
    /// solves in closed or iterative form.
    struct MixedScalar;
    impl NonlinearPartitionProblem for MixedScalar {
        fn dim(&self) -> usize {
            1
        }
        fn initial_state(&self) -> Vec<f64> {
            vec![1.0]
        }
        fn eval_f(&self, u: &[f64], v: &[f64], out: &mut [f64]) {
            out[0] = u[0] * v[0] + 0.3 * v[0].sin();
        }
    }

    #[test]
    fn sequential_conversion_preserves_steps_on_random_tensors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(97);
        let h = 0.1;
        let mut exercised = 0usize;
        for trial in 0..50 {
            let s = 2 + (trial % 3);
            let m = random_restricted(&mut rng, s);
            let seq = to_sequential(&m).unwrap();
            let (ya, _) = nprk_step(&MixedScalar, &m, &[1.0], h).unwrap();
            let (yb, _) = nprk_step(&MixedScalar, &seq.to_nprk(), &[1.0], h).unwrap();
            assert!(
                (ya[0] - yb[0]).abs() <= 1e-13 * ya[0].abs().max(1.0),
                "trial {trial}: {} vs {}",
                ya[0],
                yb[0]
            );
            if seq.stages() > s {
                exercised += 1;
            }
        }
        assert!(exercised > 10, "duplicate-stage machinery should be exercised");
    }

    #[test]
    fn additive_reduction_matches_assembled_ark_step() {
        // on F(u, v) = G1(u) + G2(v) an NPRK step equals the ARK step built
        // from the underlying pair
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        for e in catalog() {
            let m = e.method.as_nprk();
            let (t1, t2) = crate::tableau::underlying_pair(&m).unwrap();
            let (l1, l2) = (-1.3, -0.41);
            let p = DahlquistProblem::real(l1, l2);
            let h = 0.21;
            let y0 = vec![1.0];
            let (ya, _) = nprk_step(&p, &m, &y0, h).unwrap();
            // dense ARK step on the scalar problem: solve the stage system
            let s = t1.stages();
            let mut stages = vec![0.0; s];
            for i in 0..s {
                // Y_i = 1 + h sum_j (a1_ij l1 + a2_ij l2) Y_j, diagonally implicit
                let mut rhs = 1.0;
                for j in 0..i {
                    rhs += h * (t1.a()[(i, j)] * l1 + t2.a()[(i, j)] * l2) * stages[j];
                }
                let d = 1.0 - h * (t1.a()[(i, i)] * l1 + t2.a()[(i, i)] * l2);
                stages[i] = rhs / d;
            }
            let mut yb = 1.0;
            for i in 0..s {
                yb += h * (t1.b()[i] * l1 + t2.b()[i] * l2) * stages[i];
            }
            assert!(
                (ya[0] - yb).abs() <= 1e-13 * yb.abs().max(1.0),
                "{}: {} vs {yb}",
                e.name,
                ya[0]
            );
            let _ = &mut rng;
        }
    }

    #[test]
    fn sirk_embedding_step_matches_direct_sirk() {
        use crate::numerics::Mat;
        use crate::tableau::{from_sirk, RkTableau};
        // 2-stage IMEX Euler pair on the duplicated system
        let ai = RkTableau::new(
            Mat::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]),
            vec![0.0, 1.0],
        )
        .unwrap();
        let ae = RkTableau::new(
            Mat::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]),
            vec![0.0, 1.0],
        )
        .unwrap();
        let b = [0.0, 1.0];
        let m = from_sirk(&ai, &ae, &b).unwrap();
        let p = ProductProblem;
        let h = 0.2;
        let (ya, _) = nprk_step(&p, &m, &[1.0], h).unwrap();
        // direct SIRK/PRK step: Ystar explicit stages, Y implicit stages
        let s = 2;
        let mut ystar = vec![0.0; s];
        let mut yimp = vec![0.0; s];
        let mut evals = vec![0.0; s];
        for i in 0..s {
            let mut se = 1.0;
            let mut si = 1.0;
            for j in 0..i {
                se += h * ae.a()[(i, j)] * evals[j];
            }
            for j in 0..i {
                si += h * ai.a()[(i, j)] * evals[j];
            }
            ystar[i] = se;
            // Y_i = si + h aI_ii F(Y_i, Ystar_i) with F = u v
            yimp[i] = si / (1.0 - h * ai.a()[(i, i)] * ystar[i]);
            evals[i] = yimp[i] * ystar[i];
        }
        let mut yb = 1.0;
        for i in 0..s {
            yb += h * b[i] * evals[i];
        }
        assert!((ya[0] - yb).abs() < 1e-14, "{} vs {yb}", ya[0]);
    }

    #[test]
    fn zero_explicit_tableau_reduces_to_implicit_rk() {
        use crate::numerics::Mat;
        use crate::tableau::{from_sirk, RkTableau};
        // F(u, v) = G(u): implicit Euler embedding ignores explicit stages
        let ai = RkTableau::new(Mat::from_rows(&[vec![1.0]]), vec![1.0]).unwrap();
        let ae = RkTableau::new(Mat::from_rows(&[vec![0.0]]), vec![1.0]).unwrap();
        let m = from_sirk(&ai, &ae, &[1.0]).unwrap();
        let p = DahlquistProblem::real(-2.0, 0.0); // F(u, v) = -2u
        let (y1, _) = nprk_step(&p, &m, &[1.0], 0.5).unwrap();
        assert!((y1[0] - 1.0 / 2.0).abs() < 1e-15); // implicit Euler: 1/(1+1)
    }

    #[test]
    fn euler_family_on_linear_problem() {
        let p = DahlquistProblem::real(-1.5, -0.5); // G(y) = -2y
        let h = 0.1;
        let y0 = [1.0];
        let (ye, _) = euler_family_step(&p, EulerVariant::Explicit, &y0, h).unwrap();
        assert!((ye[0] - 0.8).abs() < 1e-15);
        let (yi, _) = euler_family_step(&p, EulerVariant::Implicit, &y0, h).unwrap();
        assert!((yi[0] - 1.0 / 1.2).abs() < 1e-14);
        // Rosenbrock with the exact Jacobian of a linear G equals implicit Euler
        let (yr, _) = euler_family_step(&p, EulerVariant::Rosenbrock, &y0, h).unwrap();
        assert!((yr[0] - yi[0]).abs() < 1e-14);
        let (ya, _) = euler_family_step(&p, EulerVariant::ImexAdditive, &y0, h).unwrap();
        assert!((ya[0] - 0.95 / 1.15).abs() < 1e-14);
        let (yn, _) = euler_family_step(&p, EulerVariant::Nprk, &y0, h).unwrap();
        assert!((yn[0] - 0.95 / 1.15).abs() < 1e-14);
    }

    #[test]
    fn imex_additive_with_zero_eps_equals_explicit_euler() {
        let p = burgers(BurgersSpec {
            eps: 0.0,
            n: 20,
            x0: -2.0,
            x1: 2.0,
            partition: BurgersPartition::NonConservative,
        })
        .unwrap();
        let y0 = p.initial_state();
        let h = 1e-3;
        let (ya, _) = euler_family_step(&p, EulerVariant::ImexAdditive, &y0, h).unwrap();
        let (yb, _) = euler_family_step(&p, EulerVariant::Explicit, &y0, h).unwrap();
        for (a, b) in ya.iter().zip(&yb) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn integrate_matches_power_of_amplification() {
        let p = DahlquistProblem::real(-10.0, -1.0);
        let stepper = TimeStepper::by_name("IMEX-NPRK1[21]").unwrap();
        let cfg = StepConfig::new(0.1, 10).unwrap();
        let traj = integrate(&p, &stepper, &[1.0], 0.0, &cfg);
        assert!(!traj.diverged);
        let r = 0.9 / 2.0; // R(h l1, h l2)
        assert!((traj.final_state()[0] - r.powi(10)).abs() < 1e-14);
        assert_eq!(traj.times.len(), 11);
    }

    #[test]
    fn explicit_euler_above_stability_limit_diverges() {
        let p = DahlquistProblem::real(-30.0, 0.0);
        let stepper = TimeStepper::Euler(EulerVariant::Explicit);
        let cfg = StepConfig::new(0.1, 500).unwrap(); // |1 + h l| = 2
        let traj = integrate(&p, &stepper, &[1.0], 0.0, &cfg);
        assert!(traj.diverged);
    }

    #[test]
    fn zero_steps_rejected() {
        assert!(StepConfig::new(0.1, 0).is_err());
        assert!(StepConfig::new(-0.1, 5).is_err());
    }

    #[test]
    fn dahlquist_convergence_orders() {
        let p = DahlquistProblem::real(-2.0, -1.0);
        let methods: Vec<TimeStepper> = ["IMEX-NPRK1[21]", "IMEX-NPRK2[42]a", "IMEX-NPRK3[54]-Sa"]
            .iter()
            .map(|n| TimeStepper::by_name(n).unwrap())
            .collect();
        let steps: Vec<usize> = (2..=7).map(|k| 1usize << k).collect();
        let table = convergence_study(
            &p,
            &[1.0],
            2.0,
            &methods,
            &steps,
            &ReferencePolicy::Exact,
        )
        .unwrap();
        let expectations = [
            ("IMEX-NPRK1[21]", 1.0),
            ("IMEX-NPRK2[42]a", 2.0),
            ("IMEX-NPRK3[54]-Sa", 3.0),
        ];
        for (name, order) in expectations {
            let slope = table.slope(name).unwrap();
            assert!((slope - order).abs() < 0.2, "{name}: slope {slope}");
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Mat;

/// Sparsity families of the coefficient tensor, ordered from most to least
/// restrictive. Each family pins which stage couplings may be nonzero:
///
/// * `Exex`               — a_ijk = 0 for j >= i or k >= i (both explicit)
/// * `ImexFirstImplicit`  — a_ijk = 0 for j > i or k >= i
/// * `ImimDiag`           — a_ijk = 0 for j > i or k > i
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SparsityClass {
    #[serde(rename = "EXEX")]
    Exex,
    #[serde(rename = "IMEX-first-implicit")]
    ImexFirstImplicit,
    #[serde(rename = "IMIM-diag")]
    ImimDiag,
    #[serde(rename = "general")]
    General,
}

impl std::fmt::Display for SparsityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SparsityClass::Exex => "EXEX",
            SparsityClass::ImexFirstImplicit => "IMEX-first-implicit",
            SparsityClass::ImimDiag => "IMIM-diag",
            SparsityClass::General => "general",
        };
        f.write_str(s)
    }
}

/// One nonzero entry a_{ijk} of the coefficient tensor. Indices are 1-based,
/// matching the serialized form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// A full two-argument method: rank-3 stage tensor a_{ijk} plus the s x s
/// output weight matrix b_{ij}.
#[derive(Debug, Clone, PartialEq)]
pub struct NprkMethod {
    name: String,
    s: usize,
    a: Vec<TensorEntry>, // sorted by (i, j, k), unique, nonzero
    b: Vec<f64>,         // dense s*s, row-major, b[(i-1)*s + (j-1)]
    class: SparsityClass,
}

impl NprkMethod {
    pub fn new(
        name: impl Into<String>,
        s: usize,
        a_entries: Vec<TensorEntry>,
        b_entries: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidMethod("stage count must be positive".into()));
        }
        let mut a: Vec<TensorEntry> =
            a_entries.into_iter().filter(|e| e.value != 0.0).collect();
        for e in &a {
            if e.i < 1 || e.i > s || e.j < 1 || e.j > s || e.k < 1 || e.k > s {
                return Err(Error::InvalidMethod(format!(
                    "tensor index ({},{},{}) out of range for s = {s}",
                    e.i, e.j, e.k
                )));
            }
            if !e.value.is_finite() {
                return Err(Error::InvalidMethod(format!(
                    "non-finite coefficient at ({},{},{})",
                    e.i, e.j, e.k
                )));
            }
        }
        a.sort_by_key(|e| (e.i, e.j, e.k));
        if a.windows(2).any(|w| (w[0].i, w[0].j, w[0].k) == (w[1].i, w[1].j, w[1].k)) {
            return Err(Error::InvalidMethod("duplicate tensor entry".into()));
        }
        let mut b = vec![0.0; s * s];
        for (i, j, v) in b_entries {
            if i < 1 || i > s || j < 1 || j > s {
                return Err(Error::InvalidMethod(format!(
                    "weight index ({i},{j}) out of range for s = {s}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidMethod(format!("non-finite weight at ({i},{j})")));
            }
            b[(i - 1) * s + (j - 1)] = v;
        }
        let class = classify_entries(s, &a);
        Ok(NprkMethod { name: name.into(), s, a, b, class })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.s
    }

    pub fn class(&self) -> SparsityClass {
        self.class
    }

    pub fn a_entries(&self) -> &[TensorEntry] {
        &self.a
    }

    /// Tensor coefficient a_{ijk} (1-based indices).
    pub fn a(&self, i: usize, j: usize, k: usize) -> f64 {
        self.a
            .iter()
            .find(|e| (e.i, e.j, e.k) == (i, j, k))
            .map_or(0.0, |e| e.value)
    }

    /// Output weight b_{ij} (1-based indices).
    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.b[(i - 1) * self.s + (j - 1)]
    }

    /// Nonzero output weights as (i, j, value) with 1-based indices.
    pub fn b_entries(&self) -> Vec<(usize, usize, f64)> {
        let s = self.s;
        let mut out = Vec::new();
        for i in 1..=s {
            for j in 1..=s {
                let v = self.b(i, j);
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Check membership in the restricted diagonally-implicit ansatz: every
    /// stage may couple explicitly to earlier stage pairs plus at most one of
    /// the two diagonal terms a_{i,i,i-1} (implicit in the first argument) or
    /// a_{i,i-1,i} (implicit in the second).
    pub fn check_restricted_ansatz(&self) -> Result<()> {
        for i in 1..=self.s {
            let mut first = false;
            let mut second = false;
            for e in self.a.iter().filter(|e| e.i == i) {
                let explicit = e.j < i && e.k < i;
                let diag_first = e.j == i && e.k + 1 == i;
                let diag_second = e.k == i && e.j + 1 == i;
                if diag_first {
                    first = true;
                } else if diag_second {
                    second = true;
                } else if !explicit {
                    return Err(Error::NotInAnsatz(format!(
                        "stage {i} has coefficient a_({},{},{}) outside the allowed pattern",
                        e.i, e.j, e.k
                    )));
                }
            }
            if first && second {
                return Err(Error::NotInAnsatz(format!(
                    "stage {i} is implicit in both arguments"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn classify_entries(s: usize, entries: &[TensorEntry]) -> SparsityClass {
    let _ = s;
    let exex = entries.iter().all(|e| e.j < e.i && e.k < e.i);
    if exex {
        return SparsityClass::Exex;
    }
    let imex = entries.iter().all(|e| e.j <= e.i && e.k < e.i);
    if imex {
        return SparsityClass::ImexFirstImplicit;
    }
    let imim = entries.iter().all(|e| e.j <= e.i && e.k <= e.i);
    if imim {
        return SparsityClass::ImimDiag;
    }
    SparsityClass::General
}

/// Diagonal (implicit) part of one sequential stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StageDiag {
    /// Stage value is a pure linear combination of earlier evaluations.
    Explicit,
    /// a_{i,i,i-1} != 0: solve Y = r + tau F(Y, Y_prev).
    ImplicitFirst(f64),
    /// a_{i,i-1,i} != 0: solve Y = r + tau F(Y_prev, Y).
    ImplicitSecond(f64),
}

impl StageDiag {
    pub fn is_explicit(&self) -> bool {
        matches!(self, StageDiag::Explicit)
    }
}

/// One stage row of a sequentially coupled method: the explicit coefficients
/// a_{i,j,j-1} for j = 2..=i-1, plus the stage's diagonal kind.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRow {
    pub coeffs: Vec<f64>,
    pub diag: StageDiag,
}

/// A sequentially coupled method: all evaluations are F(Y_j, Y_{j-1}) plus at
/// most one diagonal term per stage. IMEX catalog methods have every diagonal
/// either explicit or implicit-in-first; conversions out of the general
/// ansatz may also produce implicit-in-second stages.
#[derive(Debug, Clone, PartialEq)]
pub struct SequentialMethod {
    name: String,
    s: usize,
    rows: Vec<StageRow>, // stages 2..=s
    weights: Vec<f64>,   // b_{j,j-1} for j = 2..=s
}

impl SequentialMethod {
    pub fn new(
        name: impl Into<String>,
        rows: Vec<StageRow>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let s = rows.len() + 1;
        if s < 2 {
            return Err(Error::InvalidMethod("sequential method needs s >= 2".into()));
        }
        for (idx, row) in rows.iter().enumerate() {
            let i = idx + 2;
            if row.coeffs.len() != i - 2 {
                return Err(Error::InvalidMethod(format!(
                    "stage {i} expects {} explicit coefficients, got {}",
                    i - 2,
                    row.coeffs.len()
                )));
            }
            let finite = row.coeffs.iter().all(|v| v.is_finite())
                && match row.diag {
                    StageDiag::Explicit => true,
                    StageDiag::ImplicitFirst(v) | StageDiag::ImplicitSecond(v) => v.is_finite(),
                };
            if !finite {
                return Err(Error::InvalidMethod(format!("non-finite coefficient in stage {i}")));
            }
        }
        if weights.len() != s - 1 {
            return Err(Error::InvalidMethod(format!(
                "expected {} weights, got {}",
                s - 1,
                weights.len()
            )));
        }
        Ok(SequentialMethod { name: name.into(), s, rows, weights })
    }

    /// Convenience constructor for IMEX tableaux given as full lower rows
    /// `[a_{i,2,1}, ..., a_{i,i,i-1}]` per stage i = 2..=s, where the last
    /// entry is the implicit diagonal (zero means an explicit stage).
    pub fn from_imex_rows(
        name: impl Into<String>,
        rows: &[Vec<f64>],
        weights: &[f64],
    ) -> Result<Self> {
        let built = rows
            .iter()
            .map(|r| {
                let mut coeffs = r.clone();
                let diag_val = coeffs.pop().unwrap_or(0.0);
                let diag = if diag_val == 0.0 {
                    StageDiag::Explicit
                } else {
                    StageDiag::ImplicitFirst(diag_val)
                };
                StageRow { coeffs, diag }
            })
            .collect();
        SequentialMethod::new(name, built, weights.to_vec())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.s
    }

    pub fn rows(&self) -> &[StageRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &StageRow {
        &self.rows[i - 2]
    }

    /// Weight b_{j,j-1} for j = 2..=s.
    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j - 2]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Tableau coefficient a_{i,j,j-1} for 2 <= j <= i <= s. The diagonal
    /// j = i reads from the implicit-in-first coefficient.
    pub fn a_seq(&self, i: usize, j: usize) -> f64 {
        debug_assert!((2..=self.s).contains(&i) && (2..=i).contains(&j));
        if j == i {
            match self.rows[i - 2].diag {
                StageDiag::ImplicitFirst(v) => v,
                _ => 0.0,
            }
        } else {
            self.rows[i - 2].coeffs[j - 2]
        }
    }

    /// True when no stage is implicit in the second argument, i.e. the method
    /// fits the IMEX tableau form used by the practical stepping algorithm.
    pub fn is_imex(&self) -> bool {
        self.rows.iter().all(|r| !matches!(r.diag, StageDiag::ImplicitSecond(_)))
    }

    pub fn implicit_solve_count(&self) -> usize {
        self.rows.iter().filter(|r| !r.diag.is_explicit()).count()
    }

    /// Weights equal to the last stage row (so y_{n+1} = Y_s).
    pub fn is_stiffly_accurate(&self, tol: f64) -> bool {
        let s = self.s;
        (2..=s).all(|j| (self.weight(j) - self.a_seq(s, j)).abs() <= tol)
    }

    /// Rank-3 tensor form of the same method.
    pub fn to_nprk(&self) -> NprkMethod {
        let mut a = Vec::new();
        for i in 2..=self.s {
            let row = &self.rows[i - 2];
            for (idx, &v) in row.coeffs.iter().enumerate() {
                let j = idx + 2;
                if v != 0.0 {
                    a.push(TensorEntry { i, j, k: j - 1, value: v });
                }
            }
            match row.diag {
                StageDiag::Explicit => {}
                StageDiag::ImplicitFirst(v) => a.push(TensorEntry { i, j: i, k: i - 1, value: v }),
                StageDiag::ImplicitSecond(v) => a.push(TensorEntry { i, j: i - 1, k: i, value: v }),
            }
        }
        let b = (2..=self.s)
            .filter(|&j| self.weight(j) != 0.0)
            .map(|j| (j, j - 1, self.weight(j)))
            .collect();
        NprkMethod::new(self.name.clone(), self.s, a, b).expect("sequential form is always valid")
    }
}

/// Classical Butcher tableau with the row-sum abscissa convention.
#[derive(Debug, Clone, PartialEq)]
pub struct RkTableau {
    a: Mat,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl RkTableau {
    /// Build from the coefficient matrix and weights; abscissae are the row
    /// sums of `a`.
    pub fn new(a: Mat, b: Vec<f64>) -> Result<Self> {
        let s = a.rows();
        if a.cols() != s || b.len() != s {
            return Err(Error::DimensionMismatch(format!(
                "tableau a is {}x{}, b has {}",
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        let c = (0..s).map(|i| a.row(i).iter().sum()).collect();
        Ok(RkTableau { a, b, c })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.stages()).map(|i| self.a[(i, i)]).collect()
    }

    pub fn is_lower_triangular(&self) -> bool {
        let s = self.stages();
        (0..s).all(|i| (i + 1..s).all(|j| self.a[(i, j)] == 0.0))
    }

    pub fn is_strictly_lower_triangular(&self) -> bool {
        let s = self.stages();
        self.is_lower_triangular() && (0..s).all(|i| self.a[(i, i)] == 0.0)
    }
}

/// Two classical tableaux with shared weights: the order-condition substrate.
/// The `implicit` part integrates the first argument of F, the `explicit`
/// part the second.
#[derive(Debug, Clone, PartialEq)]
pub struct PrkPair {
    pub implicit: RkTableau,
    pub explicit: RkTableau,
}

impl PrkPair {
    pub fn new(implicit: RkTableau, explicit: RkTableau) -> Result<Self> {
        if implicit.stages() != explicit.stages() {
            return Err(Error::DimensionMismatch(format!(
                "pair stage counts {} vs {}",
                implicit.stages(),
                explicit.stages()
            )));
        }
        let dev = implicit
            .b()
            .iter()
            .zip(explicit.b())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        if dev > 0.0 {
            return Err(Error::SharedWeightViolation(dev));
        }
        Ok(PrkPair { implicit, explicit })
    }

    pub fn stages(&self) -> usize {
        self.implicit.stages()
    }

    pub fn b(&self) -> &[f64] {
        self.implicit.b()
    }
}

/// A catalog method in its natural representation.
#[derive(Debug, Clone)]
pub enum CatalogMethod {
    Sequential(SequentialMethod),
    General(NprkMethod),
}

impl CatalogMethod {
    pub fn as_nprk(&self) -> NprkMethod {
        match self {
            CatalogMethod::Sequential(m) => m.to_nprk(),
            CatalogMethod::General(m) => m.clone(),
        }
    }

    pub fn stages(&self) -> usize {
        match self {
            CatalogMethod::Sequential(m) => m.stages(),
            CatalogMethod::General(m) => m.stages(),
        }
    }
}

/// Catalog entry: a method plus its design metadata. The flags are claims
/// checked by the order and stability modules' tests.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub method: CatalogMethod,
    pub design_order: u8,
    pub implicit_solves: usize,
    pub stiffly_accurate: bool,
    pub singly_implicit: bool,
    pub coupled_stiff_z2_stable: bool,
}

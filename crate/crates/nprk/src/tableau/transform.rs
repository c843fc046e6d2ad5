//! Structural transformations between method representations: underlying RK
//! pairs, the sequential-coupling construction, the SIRK embedding, and
//! sparsity classification.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::Mat;
use crate::tableau::types::{
    classify_entries, NprkMethod, PrkPair, RkTableau, SequentialMethod, SparsityClass, StageDiag,
    StageRow, TensorEntry,
};

/// The two classical RK methods an NPRK method reduces to when F depends on
/// only one argument: first tableau a1_ij = sum_k a_ijk with b1_i = sum_j b_ij,
/// second tableau a2_ik = sum_j a_ijk with b2_j = sum_i b_ij.
///
/// The two abscissa vectors coincide by construction; a deviation beyond
/// 1e-14 signals a method outside the shared-abscissa class.
pub fn underlying_pair(m: &NprkMethod) -> Result<(RkTableau, RkTableau)> {
    let s = m.stages();
    let mut a1 = Mat::zeros(s, s);
    let mut a2 = Mat::zeros(s, s);
    for e in m.a_entries() {
        a1[(e.i - 1, e.j - 1)] += e.value;
        a2[(e.i - 1, e.k - 1)] += e.value;
    }
    let mut b1 = vec![0.0; s];
    let mut b2 = vec![0.0; s];
    for (i, j, v) in m.b_entries() {
        b1[i - 1] += v;
        b2[j - 1] += v;
    }
    let first = RkTableau::new(a1, b1)?;
    let second = RkTableau::new(a2, b2)?;
    let dev = first
        .c()
        .iter()
        .zip(second.c())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    if dev > 1e-14 {
        return Err(Error::AbscissaMismatch(dev));
    }
    Ok((first, second))
}

/// Reduced underlying pair of a sequentially coupled IMEX method: the
/// (s-1)-stage tableaux A_ij = a_{i+1,j+1,j}, Ahat_ij = a_{i,j+1,j} with the
/// shared weights b_i = b_{i+1,i}. A is lower-triangular and Ahat strictly
/// lower-triangular; this equals the underlying pair with unused stages
/// removed.
pub fn reduced_underlying(m: &SequentialMethod) -> Result<PrkPair> {
    if !m.is_imex() {
        return Err(Error::UnsupportedStructure(
            "reduced underlying pair requires an IMEX sequential method \
             (no implicit-in-second stages)",
        ));
    }
    let s = m.stages();
    let n = s - 1;
    let mut a = Mat::zeros(n, n);
    let mut ahat = Mat::zeros(n, n);
    // a_seq(i, j) = a_{i,j,j-1} is defined for 2 <= j <= i <= s
    for i in 1..=n {
        for j in 1..=n {
            if i + 1 >= j + 1 {
                a[(i - 1, j - 1)] = m.a_seq(i + 1, j + 1);
            }
            if i >= j + 1 {
                ahat[(i - 1, j - 1)] = m.a_seq(i, j + 1);
            }
        }
    }
    let b: Vec<f64> = (2..=s).map(|j| m.weight(j)).collect();
    PrkPair::new(RkTableau::new(a, b.clone())?, RkTableau::new(ahat, b)?)
}

/// PRK pair of any restricted-ansatz method over its evaluation pairs: each
/// distinct F(Y_j, Y_k) used anywhere becomes one PRK stage whose implicit row
/// collects the coefficients in Y_j's equation and whose explicit row those in
/// Y_k's. Weights are shared by construction. For sequentially coupled IMEX
/// methods this coincides with [`reduced_underlying`].
pub fn evaluation_prk_pair(m: &NprkMethod) -> Result<PrkPair> {
    m.check_restricted_ansatz()?;
    // collect evaluation pairs in deterministic order
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for e in m.a_entries() {
        if seen.insert((e.j, e.k)) {
            pairs.push((e.j, e.k));
        }
    }
    for (j, k, _) in m.b_entries() {
        if seen.insert((j, k)) {
            pairs.push((j, k));
        }
    }
    pairs.sort_by_key(|&(j, k)| (j.max(k), j, k));
    let n = pairs.len();
    let mut a = Mat::zeros(n, n);
    let mut ahat = Mat::zeros(n, n);
    let mut b = vec![0.0; n];
    for (p, &(j, k)) in pairs.iter().enumerate() {
        for (q, &(jq, kq)) in pairs.iter().enumerate() {
            a[(p, q)] = m.a(j, jq, kq);
            ahat[(p, q)] = m.a(k, jq, kq);
        }
        b[p] = m.b(j, k);
    }
    PrkPair::new(RkTableau::new(a, b.clone())?, RkTableau::new(ahat, b)?)
}

/// Embed a SIRK double tableau (implicit A^I, explicit A^E, shared weights)
/// as a 2s-stage NPRK method: a_{2i-1,2j,2j-1} = A^E_ij, a_{2i,2j,2j-1} =
/// A^I_ij, b_{2i,2i-1} = b_i.
pub fn from_sirk(a_implicit: &RkTableau, a_explicit: &RkTableau, b_shared: &[f64]) -> Result<NprkMethod> {
    let s = a_implicit.stages();
    if a_explicit.stages() != s || b_shared.len() != s {
        return Err(Error::DimensionMismatch(format!(
            "SIRK tableaux sizes {} / {} / weights {}",
            s,
            a_explicit.stages(),
            b_shared.len()
        )));
    }
    if !a_implicit.is_lower_triangular() {
        return Err(Error::NotInAnsatz("SIRK implicit tableau must be lower-triangular".into()));
    }
    if !a_explicit.is_strictly_lower_triangular() {
        return Err(Error::NotInAnsatz(
            "SIRK explicit tableau must be strictly lower-triangular".into(),
        ));
    }
    let mut a = Vec::new();
    for i in 1..=s {
        for j in 1..=s {
            let ae = a_explicit.a()[(i - 1, j - 1)];
            if ae != 0.0 {
                a.push(TensorEntry { i: 2 * i - 1, j: 2 * j, k: 2 * j - 1, value: ae });
            }
            let ai = a_implicit.a()[(i - 1, j - 1)];
            if ai != 0.0 {
                a.push(TensorEntry { i: 2 * i, j: 2 * j, k: 2 * j - 1, value: ai });
            }
        }
    }
    let b = (1..=s)
        .filter(|&i| b_shared[i - 1] != 0.0)
        .map(|i| (2 * i, 2 * i - 1, b_shared[i - 1]))
        .collect();
    NprkMethod::new("sirk-embedding", 2 * s, a, b)
}

/// Most restrictive sparsity family the tensor satisfies.
pub fn classify_sparsity(m: &NprkMethod) -> SparsityClass {
    classify_entries(m.stages(), m.a_entries())
}

// ---------------------------------------------------------------------------
// Sequential-coupling construction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct BuildStage {
    orig: usize,
    row: BTreeMap<usize, f64>, // pair index nu -> coefficient on F(Y~_nu, Y~_{nu-1})
    diag: StageDiag,
}

struct SeqBuilder<'a> {
    m: &'a NprkMethod,
    stages: Vec<BuildStage>,
    // (orig_j, orig_k) -> sequential index nu with Y~_nu = Y_j, Y~_{nu-1} = Y_k
    avail: BTreeMap<(usize, usize), usize>,
}

/// Pieces of an original stage definition, in terms of original stage pairs.
struct OrigStageDef {
    explicit: Vec<(usize, usize, f64)>,
    diag: StageDiag,
}

impl<'a> SeqBuilder<'a> {
    fn new(m: &'a NprkMethod) -> Self {
        SeqBuilder {
            m,
            stages: vec![BuildStage { orig: 1, row: BTreeMap::new(), diag: StageDiag::Explicit }],
            avail: BTreeMap::new(),
        }
    }

    fn last_orig(&self) -> usize {
        self.stages.last().unwrap().orig
    }

    fn stage_def(&self, t: usize) -> OrigStageDef {
        let mut explicit = Vec::new();
        let mut diag = StageDiag::Explicit;
        for e in self.m.a_entries().iter().filter(|e| e.i == t) {
            if e.j == t && e.k + 1 == t {
                diag = StageDiag::ImplicitFirst(e.value);
            } else if e.k == t && e.j + 1 == t {
                diag = StageDiag::ImplicitSecond(e.value);
            } else {
                explicit.push((e.j, e.k, e.value));
            }
        }
        OrigStageDef { explicit, diag }
    }

    /// Append a stage; registers the adjacency pair (orig, previous orig).
    fn push(&mut self, orig: usize, row: BTreeMap<usize, f64>, diag: StageDiag) -> usize {
        let prev_orig = self.last_orig();
        self.stages.push(BuildStage { orig, row, diag });
        let nu = self.stages.len();
        self.avail.entry((orig, prev_orig)).or_insert(nu);
        nu
    }

    /// Make pair (j, k) referenceable as F(Y~_nu, Y~_{nu-1}); returns nu.
    fn ensure_pair(&mut self, j: usize, k: usize) -> usize {
        if let Some(&nu) = self.avail.get(&(j, k)) {
            return nu;
        }
        self.ensure_expressible(j);
        self.ensure_expressible(k);
        // the ensures may have materialized the pair as a side effect
        if let Some(&nu) = self.avail.get(&(j, k)) {
            return nu;
        }
        if self.last_orig() != k {
            let row = self.explicit_dup_row(k);
            self.push(k, row, StageDiag::Explicit);
        }
        let row = self.explicit_dup_row(j);
        self.push(j, row, StageDiag::Explicit)
    }

    /// Make every pair needed for an explicit duplicate of stage t available.
    fn ensure_expressible(&mut self, t: usize) {
        if t == 1 {
            return;
        }
        let def = self.stage_def(t);
        for &(p, q, _) in &def.explicit {
            self.ensure_pair(p, q);
        }
        match def.diag {
            StageDiag::Explicit => {}
            // the pair (t, t-1) was registered when stage t was first built
            StageDiag::ImplicitFirst(_) => {
                debug_assert!(self.avail.contains_key(&(t, t - 1)));
            }
            // the defining evaluation F(Y_{t-1}, Y_t) is reversed relative to
            // the sequential pair orientation; materialize it with a re-solve
            StageDiag::ImplicitSecond(alpha) => {
                if !self.avail.contains_key(&(t - 1, t)) {
                    self.ensure_expressible(t - 1);
                    if self.last_orig() != t - 1 {
                        let row = self.explicit_dup_row(t - 1);
                        self.push(t - 1, row, StageDiag::Explicit);
                    }
                    // re-solve Y~ = y_n + [explicit part] + alpha h F(Y_{t-1}, Y~)
                    let row = self.explicit_part_row(t);
                    self.push(t, row, StageDiag::ImplicitSecond(alpha));
                    let row = self.explicit_dup_row(t - 1);
                    self.push(t - 1, row, StageDiag::Explicit);
                    debug_assert!(self.avail.contains_key(&(t - 1, t)));
                }
            }
        }
    }

    /// Row realizing only the explicit part of stage t's definition.
    /// All pairs must already be available.
    fn explicit_part_row(&self, t: usize) -> BTreeMap<usize, f64> {
        let def = self.stage_def(t);
        let mut row = BTreeMap::new();
        for (p, q, v) in def.explicit {
            *row.entry(self.avail[&(p, q)]).or_insert(0.0) += v;
        }
        row
    }

    /// Row for a fully explicit duplicate of stage t, including its former
    /// diagonal term as a now-known evaluation.
    fn explicit_dup_row(&self, t: usize) -> BTreeMap<usize, f64> {
        let mut row = self.explicit_part_row(t);
        match self.stage_def(t).diag {
            StageDiag::Explicit => {}
            StageDiag::ImplicitFirst(v) => {
                *row.entry(self.avail[&(t, t - 1)]).or_insert(0.0) += v;
            }
            StageDiag::ImplicitSecond(v) => {
                *row.entry(self.avail[&(t - 1, t)]).or_insert(0.0) += v;
            }
        }
        row
    }

    fn build(mut self) -> Result<SequentialMethod> {
        let s = self.m.stages();
        for sigma in 2..=s {
            let def = self.stage_def(sigma);
            let mut row = BTreeMap::new();
            for &(p, q, v) in &def.explicit {
                let nu = self.ensure_pair(p, q);
                *row.entry(nu).or_insert(0.0) += v;
            }
            match def.diag {
                StageDiag::Explicit => {
                    self.push(sigma, row, StageDiag::Explicit);
                }
                diag => {
                    if self.last_orig() != sigma - 1 {
                        self.ensure_expressible(sigma - 1);
                        if self.last_orig() != sigma - 1 {
                            let dup = self.explicit_dup_row(sigma - 1);
                            self.push(sigma - 1, dup, StageDiag::Explicit);
                        }
                    }
                    self.push(sigma, row, diag);
                }
            }
        }
        // output weights, renaming b_{jk} to a "stage s+1" row
        let mut out = BTreeMap::new();
        for (j, k, v) in self.m.b_entries() {
            let nu = self.ensure_pair(j, k);
            *out.entry(nu).or_insert(0.0) += v;
        }

        let s_hat = self.stages.len();
        let mut rows = Vec::with_capacity(s_hat - 1);
        for (idx, st) in self.stages.iter().enumerate().skip(1) {
            let i = idx + 1; // sequential stage index, 1-based
            let mut coeffs = vec![0.0; i - 2];
            for (&nu, &v) in &st.row {
                if nu >= i {
                    return Err(Error::NotInAnsatz("stage references a future pair".into()));
                }
                coeffs[nu - 2] += v;
            }
            rows.push(StageRow { coeffs, diag: st.diag });
        }
        let mut weights = vec![0.0; s_hat - 1];
        for (&nu, &v) in &out {
            weights[nu - 2] += v;
        }
        SequentialMethod::new(format!("{}-seq", self.m.name()), rows, weights)
    }
}

/// Express a restricted-ansatz method as a sequentially coupled method with
/// identical step outputs. Evaluations whose arguments are not consecutive
/// stages are realized by appending duplicate stages; implicit stages keep
/// their original solves, and implicit-in-second duplicates are materialized
/// by re-solving the same stage equation.
pub fn to_sequential(m: &NprkMethod) -> Result<SequentialMethod> {
    m.check_restricted_ansatz()?;
    SeqBuilder::new(m).build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::catalog::find;
    use crate::tableau::types::CatalogMethod;

    fn seq_catalog(name: &str) -> SequentialMethod {
        match &find(name).unwrap().method {
            CatalogMethod::Sequential(m) => m.clone(),
            _ => panic!("not sequential"),
        }
    }

    #[test]
    fn euler_underlying_pair() {
        // 1[21]: first tableau row sums give c = (0, 1); second is the
        // shifted explicit Euler
        let m = seq_catalog("IMEX-NPRK1[21]").to_nprk();
        let (first, second) = underlying_pair(&m).unwrap();
        assert_eq!(first.a()[(1, 1)], 1.0);
        assert_eq!(first.b(), &[0.0, 1.0]);
        assert_eq!(second.a()[(1, 0)], 1.0);
        assert_eq!(second.b(), &[1.0, 0.0]);
        assert_eq!(first.c(), second.c());
    }

    #[test]
    fn diagonal_tensor_reduces_to_classical_rk() {
        // explicit midpoint embedded diagonally: a_{ijk} = 0 for j != k
        let m = NprkMethod::new(
            "diag-midpoint",
            2,
            vec![TensorEntry { i: 2, j: 1, k: 1, value: 0.5 }],
            vec![(2, 2, 1.0)],
        )
        .unwrap();
        let (first, second) = underlying_pair(&m).unwrap();
        for t in [&first, &second] {
            assert_eq!(t.a()[(1, 0)], 0.5);
            assert_eq!(t.b(), &[0.0, 1.0]);
        }
    }

    #[test]
    fn catalog_abscissae_agree() {
        for e in crate::tableau::catalog::catalog() {
            let m = e.method.as_nprk();
            underlying_pair(&m).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn reduced_pair_of_euler_is_one_stage() {
        let pair = reduced_underlying(&seq_catalog("IMEX-NPRK1[21]")).unwrap();
        assert_eq!(pair.stages(), 1);
        assert_eq!(pair.implicit.a()[(0, 0)], 1.0);
        assert_eq!(pair.explicit.a()[(0, 0)], 0.0);
        assert_eq!(pair.b(), &[1.0]);
    }

    #[test]
    fn reduced_pair_of_midpoint_methods() {
        // 2[31] reduces to the implicit and explicit midpoint pair
        let pair = reduced_underlying(&seq_catalog("IMEX-NPRK2[31]")).unwrap();
        assert_eq!(pair.stages(), 2);
        assert_eq!(pair.implicit.a()[(0, 0)], 0.5);
        assert_eq!(pair.implicit.a()[(1, 0)], 0.5);
        assert_eq!(pair.implicit.a()[(1, 1)], 0.0);
        assert_eq!(pair.explicit.a()[(1, 0)], 0.5);
        assert!(pair.explicit.is_strictly_lower_triangular());
        assert_eq!(pair.b(), &[0.0, 1.0]);
    }

    #[test]
    fn reduced_pair_shift_layout_for_four_stages() {
        // s = 4: A_ij = a_{i+1,j+1,j}, Ahat_ij = a_{i,j+1,j}
        let m = SequentialMethod::from_imex_rows(
            "shift",
            &[vec![2.0], vec![3.0, 5.0], vec![7.0, 11.0, 13.0]],
            &[17.0, 19.0, 23.0],
        )
        .unwrap();
        let pair = reduced_underlying(&m).unwrap();
        let a = pair.implicit.a();
        assert_eq!(
            [a[(0, 0)], a[(1, 0)], a[(1, 1)], a[(2, 0)], a[(2, 1)], a[(2, 2)]],
            [2.0, 3.0, 5.0, 7.0, 11.0, 13.0]
        );
        let ah = pair.explicit.a();
        assert_eq!([ah[(1, 0)], ah[(2, 0)], ah[(2, 1)]], [2.0, 3.0, 5.0]);
        assert!(pair.explicit.is_strictly_lower_triangular());
        assert_eq!(pair.b(), &[17.0, 19.0, 23.0]);
        // abscissae follow the one-row shift
        assert_eq!(pair.implicit.c()[0], 2.0);
        assert_eq!(pair.implicit.c()[1], 8.0);
        assert_eq!(pair.explicit.c()[1], 2.0);
        assert_eq!(pair.explicit.c()[2], 8.0);
    }

    #[test]
    fn evaluation_pair_prunes_unused_couplings() {
        // 2[42]a never evaluates F(Y_3, Y_2): b_32 = 0 and no later stage
        // references it, so the evaluation pair has one stage fewer than the
        // shift pair
        let m = seq_catalog("IMEX-NPRK2[42]a");
        assert_eq!(reduced_underlying(&m).unwrap().stages(), 3);
        assert_eq!(evaluation_prk_pair(&m.to_nprk()).unwrap().stages(), 2);
    }

    #[test]
    fn evaluation_pair_matches_reduced_for_sequential() {
        for name in ["IMEX-NPRK2[43]-SiSa", "IMEX-NPRK3[54]-Sa"] {
            let m = seq_catalog(name);
            let shifted = reduced_underlying(&m).unwrap();
            let eval = evaluation_prk_pair(&m.to_nprk()).unwrap();
            assert_eq!(shifted.stages(), eval.stages(), "{name}");
            for i in 0..eval.stages() {
                for j in 0..eval.stages() {
                    assert_eq!(shifted.implicit.a()[(i, j)], eval.implicit.a()[(i, j)]);
                    assert_eq!(shifted.explicit.a()[(i, j)], eval.explicit.a()[(i, j)]);
                }
            }
            assert_eq!(shifted.b(), eval.b());
        }
    }

    #[test]
    fn evaluation_pair_of_imim_midpoint_is_second_order() {
        let m = find("IMIM-Midpoint").unwrap().method.as_nprk();
        let pair = evaluation_prk_pair(&m).unwrap();
        assert_eq!(pair.stages(), 2);
        // shared-weight order two: sum b = 1, b.c = b.chat = 1/2
        let b = pair.b();
        let c = pair.implicit.c();
        let ch = pair.explicit.c();
        let s1: f64 = b.iter().sum();
        let s2: f64 = b.iter().zip(c).map(|(x, y)| x * y).sum();
        let s3: f64 = b.iter().zip(ch).map(|(x, y)| x * y).sum();
        assert!((s1 - 1.0).abs() < 1e-15);
        assert!((s2 - 0.5).abs() < 1e-15);
        assert!((s3 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sirk_embedding_shape_and_class() {
        // 2-stage IMEX Euler pair
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
        let m = from_sirk(&ai, &ae, &[0.0, 1.0]).unwrap();
        assert_eq!(m.stages(), 4);
        assert_eq!(classify_sparsity(&m), SparsityClass::ImexFirstImplicit);
        assert_eq!(m.a(3, 2, 1), 1.0); // A^E_{21} at (2i-1, 2j, 2j-1)
        assert_eq!(m.a(4, 4, 3), 1.0); // A^I_{22} at (2i, 2j, 2j-1)
        assert_eq!(m.b(4, 3), 1.0);
    }

    #[test]
    fn classify_examples() {
        let euler = seq_catalog("IMEX-NPRK1[21]").to_nprk();
        assert_eq!(classify_sparsity(&euler), SparsityClass::ImexFirstImplicit);
        let imim = find("IMIM-Midpoint").unwrap().method.as_nprk();
        assert_eq!(classify_sparsity(&imim), SparsityClass::ImimDiag);
        let general = NprkMethod::new(
            "general",
            3,
            vec![TensorEntry { i: 1, j: 2, k: 3, value: 1.0 }],
            vec![],
        )
        .unwrap();
        assert_eq!(classify_sparsity(&general), SparsityClass::General);
    }

    #[test]
    fn to_sequential_is_identity_like_on_sequential_input() {
        let m = seq_catalog("IMEX-NPRK3[54]-Sa");
        let out = to_sequential(&m.to_nprk()).unwrap();
        assert_eq!(out.stages(), m.stages());
        for i in 2..=m.stages() {
            for j in 2..=i {
                assert_eq!(out.a_seq(i, j), m.a_seq(i, j), "a({i},{j})");
            }
            assert_eq!(out.weight(i), m.weight(i));
        }
    }

    #[test]
    fn to_sequential_duplicates_for_diagonal_output_weight() {
        // 2-stage method with b_22 != 0 needs F(Y_2, Y_2) realized by a
        // duplicated stage pair
        let m = NprkMethod::new(
            "b22",
            2,
            vec![TensorEntry { i: 2, j: 2, k: 1, value: 0.5 }],
            vec![(2, 1, 0.25), (2, 2, 0.75)],
        )
        .unwrap();
        let out = to_sequential(&m).unwrap();
        assert!(out.stages() > 2, "duplicate stages expected");
        // two adjacent trailing stages both equal Y_2
        let n = out.stages();
        assert_eq!(out.weight(n), 0.75);
    }

    #[test]
    fn to_sequential_rejects_non_ansatz_input() {
        let m = NprkMethod::new(
            "bad",
            3,
            vec![TensorEntry { i: 2, j: 3, k: 1, value: 1.0 }],
            vec![],
        )
        .unwrap();
        assert!(matches!(to_sequential(&m), Err(Error::NotInAnsatz(_))));
    }
}

//! The built-in method catalog.
//!
//! Coefficients with closed forms (rationals and surds such as 1 + 1/sqrt(2))
//! are evaluated from those forms at full floating precision; only
//! IMEX-NPRK3[54]-Si has no closed form and is stored as 20-digit decimal
//! strings parsed to binary.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::tableau::types::{
    CatalogEntry, CatalogMethod, NprkMethod, SequentialMethod, TensorEntry,
};

fn seq(name: &str, rows: &[Vec<f64>], weights: &[f64]) -> SequentialMethod {
    SequentialMethod::from_imex_rows(name, rows, weights).expect("catalog tableau")
}

/// Three-stage two-solve family, L-stable in z1; b32 selects the member.
fn family_232(name: &str, b32: f64) -> SequentialMethod {
    let a221 = 1.0 / (2.0 * b32);
    let a321 = (-2.0 * b32.powi(3) + 6.0 * b32 * b32 - 4.0 * b32 + 1.0)
        / (2.0 * b32 * b32 * (2.0 * b32 - 1.0));
    let a332 = (b32 - 1.0) / (2.0 * b32 - 1.0);
    seq(name, &[vec![a221], vec![a321, a332]], &[1.0 - b32, b32])
}

/// Four-stage two-solve family, L-stable in z1; (a221, b43) select the member.
fn family_242(name: &str, a221: f64, b43: f64) -> SequentialMethod {
    let a321 = 1.0 / (2.0 * b43);
    let a421 = (a221 * (2.0 * a221 * (b43 - 1.0) - 4.0 * b43 + 3.0) + b43 - 1.0)
        / (2.0 * (a221 - 1.0) * b43);
    let a443 = 1.0 / (2.0 * (a221 - 1.0)) + 1.0;
    seq(
        name,
        &[vec![a221], vec![a321, 0.0], vec![a421, 0.0, a443]],
        &[1.0 - b43, 0.0, b43],
    )
}

/// Four-stage three-solve singly-implicit family, L-stable in z1.
fn family_243_si(name: &str, g: f64, b32: f64, b43: f64) -> SequentialMethod {
    let a321 = (1.0 - 2.0 * g * (b32 + b43)) / (2.0 * b43);
    let a432 = (g * (-2.0 * (g - 2.0) * g - 1.0)) / (2.0 * g * (b32 + b43) - 1.0);
    let b21 = -b32 - b43 + 1.0;
    let a421 = 0.5
        * ((b32 * (2.0 * b32 * g - 1.0)) / (b43 * b43)
            + (2.0 * (b32 - 1.0) * g + 1.0) / b43
            + (2.0 * g * (2.0 * (g - 2.0) * g + 1.0)) / (2.0 * g * (b32 + b43) - 1.0));
    seq(
        name,
        &[vec![g], vec![a321, g], vec![a421, a432, g]],
        &[b21, b32, b43],
    )
}

/// Four-stage three-solve stiffly-accurate singly-implicit families; the sign
/// selects the branch of f(gamma) = sqrt(1 - 4 gamma^2 (gamma (3 gamma - 8) + 3)).
fn family_243_sisa(name: &str, g: f64, sign: f64) -> SequentialMethod {
    let f = (1.0 - 4.0 * g * g * (g * (3.0 * g - 8.0) + 3.0)).sqrt();
    let a321 = (1.0 - 2.0 * g * g + sign * f) / (4.0 * g);
    let a421 = (-1.0 + 4.0 * g - 2.0 * g * g + sign * f) / (4.0 * g);
    let a432 = (1.0 - 2.0 * g * g - sign * f) / (4.0 * g);
    seq(
        name,
        &[vec![g], vec![a321, g], vec![a421, a432, g]],
        &[a421, a432, g],
    )
}

/// IMEX-NPRK3[54]-Si coefficients, 20 decimal digits, gamma = 54/100.
const NPRK354_SI: [[&str; 4]; 5] = [
    ["0.54000000000000000000", "0", "0", "0"],
    ["0.10402085874596586377", "0.54000000000000000000", "0", "0"],
    ["-1.2409681743028102473", "0.42383482979738431001", "0.54000000000000000000", "0"],
    [
        "0.42903447708369521671",
        "-1.0829950086155536734",
        "0.24651165580639138296",
        "0.54000000000000000000",
    ],
    [
        "-0.32058288115984556996",
        "1.0095140978756513629",
        "0.044585281470753018014",
        "0.26648350181344118903",
    ],
];

fn nprk354_si() -> SequentialMethod {
    let parse = |s: &str| s.parse::<f64>().expect("catalog decimal");
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..=i).map(|j| parse(NPRK354_SI[i][j])).collect())
        .collect();
    let weights: Vec<f64> = (0..4).map(|j| parse(NPRK354_SI[4][j])).collect();
    seq("IMEX-NPRK3[54]-Si", &rows, &weights)
}

fn imim(name: &str, s: usize, a: &[(usize, usize, usize, f64)], b: &[(usize, usize, f64)]) -> NprkMethod {
    let entries = a
        .iter()
        .map(|&(i, j, k, value)| TensorEntry { i, j, k, value })
        .collect();
    NprkMethod::new(name, s, entries, b.to_vec()).expect("catalog tensor")
}

fn build_catalog() -> Vec<CatalogEntry> {
    let rt2 = std::f64::consts::SQRT_2;
    let half = 0.5;

    let mut entries = Vec::new();
    let mut push_seq = |m: SequentialMethod,
                        design_order: u8,
                        coupled_stiff_z2_stable: bool| {
        let implicit_solves = m.implicit_solve_count();
        let stiffly_accurate = m.is_stiffly_accurate(0.0);
        let diags: Vec<f64> = m
            .rows()
            .iter()
            .filter_map(|r| match r.diag {
                crate::tableau::types::StageDiag::ImplicitFirst(v)
                | crate::tableau::types::StageDiag::ImplicitSecond(v) => Some(v),
                crate::tableau::types::StageDiag::Explicit => None,
            })
            .collect();
        let singly_implicit = diags.windows(2).all(|w| w[0] == w[1]);
        let name: &'static str = Box::leak(m.name().to_owned().into_boxed_str());
        entries.push(CatalogEntry {
            name,
            method: CatalogMethod::Sequential(m),
            design_order,
            implicit_solves,
            stiffly_accurate,
            singly_implicit,
            coupled_stiff_z2_stable,
        });
    };

    push_seq(seq("IMEX-NPRK1[21]", &[vec![1.0]], &[1.0]), 1, true);
    push_seq(
        seq("IMEX-NPRK2[31]", &[vec![half], vec![half, 0.0]], &[0.0, 1.0]),
        2,
        false,
    );
    push_seq(family_232("IMEX-NPRK2[32]a", 1.0 - 1.0 / rt2), 2, true);
    push_seq(family_232("IMEX-NPRK2[32]b", 1.0 + 1.0 / rt2), 2, false);
    push_seq(
        family_242("IMEX-NPRK2[42]a", 1.0 + 1.0 / rt2, (78.0 + 9.0 * rt2) / 94.0),
        2,
        true,
    );
    push_seq(
        family_242("IMEX-NPRK2[42]b", 1.0 - 1.0 / rt2, (78.0 - 9.0 * rt2) / 94.0),
        2,
        false,
    );
    push_seq(
        family_243_si("IMEX-NPRK2[43]-Si", 0.553658, -0.0054849, 0.237378),
        2,
        true,
    );
    push_seq(family_243_sisa("IMEX-NPRK2[43]-SiSa", 0.386585, 1.0), 2, true);
    push_seq(family_243_sisa("IMEX-NPRK2[43]b-SiSa", 0.325754, -1.0), 2, true);
    push_seq(
        seq(
            "IMEX-NPRK3[54]-Sa",
            &[
                vec![1.0],
                vec![-2.0 / 3.0, 2.0 / 3.0],
                vec![5.0 / 12.0, -5.0 / 12.0, half],
                vec![-half, 1.0 / 6.0, 2.0 / 3.0, 2.0 / 3.0],
            ],
            &[-half, 1.0 / 6.0, 2.0 / 3.0, 2.0 / 3.0],
        ),
        3,
        true,
    );
    push_seq(nprk354_si(), 3, false);

    let mut push_imim = |m: NprkMethod, solves: usize| {
        let name: &'static str = Box::leak(m.name().to_owned().into_boxed_str());
        entries.push(CatalogEntry {
            name,
            method: CatalogMethod::General(m),
            design_order: 2,
            implicit_solves: solves,
            stiffly_accurate: false,
            singly_implicit: true,
            coupled_stiff_z2_stable: true,
        });
    };

    push_imim(
        imim(
            "IMIM-Midpoint",
            3,
            &[(2, 2, 1, half), (3, 2, 3, half)],
            &[(2, 3, 1.0)],
        ),
        2,
    );
    push_imim(
        imim(
            "IMIM-Midpoint/CrankNicolson",
            3,
            &[(2, 2, 1, half), (3, 2, 1, half), (3, 2, 3, half)],
            &[(2, 1, half), (2, 3, half)],
        ),
        2,
    );
    push_imim(
        imim(
            "IMIM-Midpoint-T",
            3,
            &[(2, 1, 2, half), (3, 3, 2, half)],
            &[(3, 2, 1.0)],
        ),
        2,
    );
    push_imim(
        imim(
            "IMIM-Midpoint/CrankNicolson-T",
            3,
            &[(2, 1, 2, half), (3, 1, 2, half), (3, 3, 2, half)],
            &[(1, 2, half), (3, 2, half)],
        ),
        2,
    );

    entries
}

/// All built-in methods.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

/// Look up a catalog entry by its exact name.
pub fn find(name: &str) -> Result<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownMethod(name.to_owned()))
}

//! Published reference values for the tabulated problem configurations,
//! stored exactly as printed. Comparison reports treat them as the last
//! tier of the ground-truth hierarchy: recurrence oracle first, closed
//! form second, reference tables last.

/// One reference column: (n, printed value) rows. Labels quote the
/// source captions, which call these columns "eigenfunctions" even for
/// the initial-value relaxation runs; the term is kept in labels only.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceColumn {
    pub label: &'static str,
    pub rows: &'static [(i64, f64)],
}

/// Hydrogen column at lambda = 1 with A = 1, q(n) = 1/sqrt(n).
pub const TABLE1_HYDROGEN: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 1 (hydrogen)",
    rows: &[
        (1, 0.866025),
        (2, 2.59808),
        (3, 4.86821),
        (4, 6.70353),
        (5, 6.86296),
        (6, 4.60124),
        (13, 6.18061),
        (14, 4.53803),
        (15, -0.105595),
        (16, -4.67793),
        (21, 5.26773),
        (23, -3.99289),
        (24, -6.01193),
        (25, -3.49672),
    ],
};

/// Coulomb column at lambda = 1 with l = 2, q(n) = 1/sqrt(n).
pub const TABLE1_COULOMB: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 1 (coulomb)",
    rows: &[
        (1, 0.866025),
        (2, 5.19615),
        (3, 10.6024),
        (4, 11.5276),
        (5, 5.24802),
        (6, -4.77228),
        (13, -7.29527),
        (14, -11.2966),
        (15, -5.75247),
        (16, 4.67243),
        (21, -9.75089),
        (23, 8.78504),
        (24, 10.8038),
        (25, 3.43627),
    ],
};

/// Hydrogen column at lambda = 2 - sqrt(2).
// the 0.707107 cells are verbatim table data, not a rounded 1/sqrt(2)
#[allow(clippy::approx_constant)]
pub const TABLE2_HYDROGEN: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 2 - sqrt 2 (hydrogen)",
    rows: &[
        (1, 0.707107),
        (2, 2.41421),
        (3, 5.62132),
        (4, 10.6548),
        (5, 17.4379),
        (6, 25.2922),
        (13, -7.27102),
        (14, -22.8474),
        (15, -32.7782),
        (16, -34.1566),
        (21, 32.7366),
        (23, 19.0974),
        (24, 0.835118),
        (25, -17.7111),
    ],
};

/// Coulomb column at lambda = 2 - sqrt(2).
#[allow(clippy::approx_constant)]
pub const TABLE2_COULOMB: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 2 - sqrt 2 (coulomb)",
    rows: &[
        (1, 0.707107),
        (2, 4.53553),
        (3, 11.182),
        (4, 17.7341),
        (5, 20.5481),
        (6, 17.227),
        (13, 6.52242),
        (14, 16.3393),
        (15, 19.1177),
        (16, 13.5942),
        (21, -17.9177),
        (23, 2.89076),
        (24, 19.0276),
        (25, 15.2384),
    ],
};

/// Rows of [`TABLE2_COULOMB`] whose printed values reproduce the solution
/// at n - 1 instead of n (they match x(n-1) to about 4e-6 while differing
/// from x(n) by more than 8). The surrounding rows, including n = 24 and
/// n = 25, match at their printed index, so these two cells carry an
/// index-transcription slip; the column is stored as printed and the
/// comparison for these cells is made against x(n-1).
pub const TABLE2_COULOMB_SHIFTED_ROWS: &[i64] = &[21, 23];

/// Fourth-order relaxation column at lambda = 0.0625, q(n) = 1/(n+1).
pub const TABLE3_INVERSE: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 0.0625, q(n) = 1/(n+1) (relaxation)",
    rows: &[
        (0, 1.0),
        (1, 1.0),
        (2, 1.0),
        (3, 1.0),
        (4, 16.9467),
        (5, 80.7556),
        (6, 240.321),
        (7, 559.519),
        (8, 1373.36),
        (9, 4308.94),
        (10, 14838.5),
        (11, 47386.4),
        (12, 138351.0),
        (13, 393074.0),
    ],
};

/// Fourth-order relaxation column at lambda = 0.0625, q(n) = 1/sqrt(n+1).
pub const TABLE3_INVERSE_SQRT: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 0.0625, q(n) = 1/sqrt(n+1) (relaxation)",
    rows: &[
        (0, 1.0),
        (1, 1.0),
        (2, 1.0),
        (3, 1.0),
        (4, 2.0407),
        (5, 5.9615),
        (6, 15.2739),
        (7, 33.0829),
        (8, 63.0968),
        (9, 109.83),
        (10, 179.1),
        (11, 279.4),
        (12, 932.08),
        (13, 1377.6),
    ],
};

/// Fourth-order relaxation column at lambda = 0.1296, q(n) = 1/(n+1).
pub const TABLE4_INVERSE: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 0.1296, q(n) = 1/(n+1) (relaxation)",
    rows: &[
        (0, 1.0),
        (1, 1.0),
        (2, 1.0),
        (3, 1.0),
        (4, 5.8606),
        (5, 14.6518),
        (6, 31.0511),
        (7, 58.1807),
        (8, 100.113),
        (9, 162.983),
        (10, 257.093),
        (11, 400.414),
        (12, 624.004),
        (13, 980.151),
    ],
};

/// Fourth-order relaxation column at lambda = 0.1296, q(n) = 1/sqrt(n+1).
pub const TABLE4_INVERSE_SQRT: ReferenceColumn = ReferenceColumn {
    label: "eigenfunctions at lambda = 0.1296, q(n) = 1/sqrt(n+1) (relaxation)",
    rows: &[
        (0, 1.0),
        (1, 1.0),
        (2, 1.0),
        (3, 1.0),
        (4, 2.1832),
        (5, 6.6554),
        (6, 17.3085),
        (7, 37.7361),
        (8, 72.3270),
        (9, 126.80),
        (10, 209.55),
        (11, 820.25),
        (12, 1289.4),
        (13, 2043.5),
    ],
};

impl ReferenceColumn {
    pub fn value_at(&self, n: i64) -> Option<f64> {
        self.rows
            .iter()
            .find(|&&(row, _)| row == n)
            .map(|&(_, v)| v)
    }
}

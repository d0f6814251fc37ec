//! Small dense complex linear algebra: LU factorization with partial
//! pivoting for determinants and linear solves. Matrix orders here are
//! tiny (the equation order, at most single digits).

use num_complex::Complex64;

pub(crate) struct LuOutcome {
    pub det: Complex64,
    /// Smallest pivot magnitude seen during elimination, relative to the
    /// pre-elimination magnitude of its column. A dependent column cancels
    /// to roundoff during elimination and drives this toward machine
    /// epsilon; a merely small (but independent) column keeps it near 1.
    pub min_pivot_ratio: f64,
}

/// Determinant of a (consumed) square matrix via LU with partial pivoting.
#[allow(clippy::needless_range_loop)] // two rows of `a` are indexed at once
pub(crate) fn lu_det(mut a: Vec<Vec<Complex64>>) -> LuOutcome {
    let n = a.len();
    let col_scale: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| a[i][j].norm()).fold(0.0_f64, f64::max))
        .collect();
    let mut det = Complex64::new(1.0, 0.0);
    let mut min_ratio = f64::INFINITY;
    for k in 0..n {
        let mut piv = k;
        for r in k + 1..n {
            if a[r][k].norm() > a[piv][k].norm() {
                piv = r;
            }
        }
        let pmag = a[piv][k].norm();
        let ratio = if col_scale[k] > 0.0 {
            pmag / col_scale[k]
        } else {
            0.0
        };
        min_ratio = min_ratio.min(ratio);
        if pmag == 0.0 {
            return LuOutcome {
                det: Complex64::new(0.0, 0.0),
                min_pivot_ratio: 0.0,
            };
        }
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= a[k][k];
        for r in k + 1..n {
            let factor = a[r][k] / a[k][k];
            for c in k + 1..n {
                let sub = factor * a[k][c];
                a[r][c] -= sub;
            }
        }
    }
    LuOutcome {
        det,
        min_pivot_ratio: min_ratio,
    }
}

/// Solve A x = b for a (consumed) square matrix. Returns `None` when
/// elimination meets a zero pivot.
///
/// Unlike [`lu_det`], pivots are judged against the overall matrix
/// magnitude: the unknowns of a condition fit share units, so a column
/// at roundoff scale (e.g. sin(b theta) at an eigenvalue) makes the
/// system genuinely rank deficient rather than merely column-scaled.
#[allow(clippy::needless_range_loop)]
pub(crate) fn lu_solve(
    mut a: Vec<Vec<Complex64>>,
    mut b: Vec<Complex64>,
) -> Option<(Vec<Complex64>, f64)> {
    let n = a.len();
    let matrix_scale = a.iter().flatten().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let mut min_ratio = f64::INFINITY;
    for k in 0..n {
        let mut piv = k;
        for r in k + 1..n {
            if a[r][k].norm() > a[piv][k].norm() {
                piv = r;
            }
        }
        let pmag = a[piv][k].norm();
        let ratio = if matrix_scale > 0.0 {
            pmag / matrix_scale
        } else {
            0.0
        };
        min_ratio = min_ratio.min(ratio);
        if pmag == 0.0 {
            return None;
        }
        if piv != k {
            a.swap(piv, k);
            b.swap(piv, k);
        }
        for r in k + 1..n {
            let factor = a[r][k] / a[k][k];
            for c in k + 1..n {
                let sub = factor * a[k][c];
                a[r][c] -= sub;
            }
            let rhs = factor * b[k];
            b[r] -= rhs;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for c in k + 1..n {
            acc -= a[k][c] * x[c];
        }
        x[k] = acc / a[k][k];
    }
    Some((x, min_ratio))
}

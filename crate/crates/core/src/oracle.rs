//! Independent brute-force verifier: expands a delta-operator equation
//! into a plain recurrence through the binomial expansion
//!
//! ```text
//! delta^N x(n) = sum_{k=0}^{N} (-1)^k C(N, k) x(n + N - k)
//! ```
//!
//! and steps it forward. Ground truth for every other module: float mode
//! for speed, exact big-rational mode to settle disputes beyond doubt.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::problem::{DifferenceProblem, GridSolution, Shift};
use crate::sequence::Sequence;

/// Exact integer binomial coefficient (arguments stay tiny here).
fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

#[derive(Clone)]
enum Taps {
    Constant(Vec<f64>),
    Varying(Arc<dyn Fn(i64) -> Result<Vec<f64>> + Send + Sync>),
}

/// A plain forward recurrence x(n + N) = sum_j a_j(n) x(n + j) + q(n).
#[derive(Clone)]
pub struct ExpandedRecurrence {
    horizon: usize,
    taps: Taps,
    forcing: Sequence,
}

/// Tap coefficients for the unshifted equation: with r_N = 1 the
/// combined coefficient of x(n + j) is T_j = sum_{k >= j} r_k (-1)^{k-j}
/// C(k, j), and the stepping taps are a_j = -T_j for j < N.
fn unshifted_taps(coefficients: &[f64]) -> Vec<f64> {
    let n = coefficients.len();
    let r = |k: usize| if k == n { 1.0 } else { coefficients[k] };
    (0..n)
        .map(|j| {
            let mut t = 0.0;
            for k in j..=n {
                let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
                t += r(k) * sign * binomial(k, j) as f64;
            }
            -t
        })
        .collect()
}

/// Expand a constant-coefficient problem into stepping form.
pub fn expand(problem: &DifferenceProblem) -> ExpandedRecurrence {
    match problem.shift() {
        Shift::Unshifted => ExpandedRecurrence {
            horizon: problem.order(),
            taps: Taps::Constant(unshifted_taps(problem.coefficients())),
            forcing: problem.forcing().clone(),
        },
        Shift::SecondOrderShifted => {
            // delta^2 x(n-1) + lambda x(n) = q(n) steps as
            // x(m+2) = (2 - lambda) x(m+1) - x(m) + q(m+1)
            let lambda = problem.coefficients()[0];
            ExpandedRecurrence {
                horizon: 2,
                taps: Taps::Constant(vec![-1.0, 2.0 - lambda]),
                forcing: problem.forcing().shifted(1),
            }
        }
    }
}

impl ExpandedRecurrence {
    /// The stepping form of -delta^2 x(n-1) + V(n) x(n) = lambda x(n):
    /// x(m+2) = (2 - lambda + V(m+1)) x(m+1) - x(m).
    pub fn second_order_with_potential(lambda: f64, potential: Sequence) -> Self {
        ExpandedRecurrence {
            horizon: 2,
            taps: Taps::Varying(Arc::new(move |m| {
                Ok(vec![-1.0, 2.0 - lambda + potential.eval(m + 1)?])
            })),
            forcing: Sequence::zero(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Constant taps a_0..a_{N-1}, when the recurrence has them.
    pub fn constant_taps(&self) -> Option<&[f64]> {
        match &self.taps {
            Taps::Constant(t) => Some(t),
            Taps::Varying(_) => None,
        }
    }

    fn taps_at(&self, n: i64) -> Result<Vec<f64>> {
        match &self.taps {
            Taps::Constant(t) => Ok(t.clone()),
            Taps::Varying(f) => f(n),
        }
    }

    /// Re-collapse constant stepping taps to the delta-form coefficients
    /// r_0..r_{N-1} through the inverse binomial identity.
    pub fn collapse(&self) -> Option<Vec<f64>> {
        let taps = self.constant_taps()?;
        let n = taps.len();
        let tt = |j: usize| if j == n { 1.0 } else { -taps[j] };
        Some(
            (0..n)
                .map(|k| (k..=n).map(|j| tt(j) * binomial(j, k) as f64).sum())
                .collect(),
        )
    }

    /// Deterministic forward stepping from `seed` = x(0..N-1).
    pub fn run(&self, seed: &[f64], n_max: usize) -> Result<GridSolution> {
        assert_eq!(
            seed.len(),
            self.horizon,
            "seed length must equal the horizon"
        );
        let mut values = seed.to_vec();
        values.truncate(n_max + 1);
        while values.len() <= n_max {
            let n = (values.len() - self.horizon) as i64;
            let taps = self.taps_at(n)?;
            let mut next = self.forcing.eval(n)?;
            for (j, a) in taps.iter().enumerate() {
                next += a * values[n as usize + j];
            }
            values.push(next);
        }
        let residual_norm = self.residual(&values)?;
        Ok(GridSolution {
            values,
            lambda: None,
            label: "oracle".into(),
            residual_norm,
        })
    }

    /// Max over n of |x(n+N) - predicted| / max(1, |x(n+N)|).
    pub fn residual(&self, values: &[f64]) -> Result<f64> {
        Ok(self
            .defects(values)?
            .into_iter()
            .flatten()
            .fold(0.0_f64, f64::max))
    }

    /// Per-row relative defect: entry m compares x(m) with the
    /// prediction from the window ending at m; the first N rows have no
    /// complete window.
    pub fn defects(&self, values: &[f64]) -> Result<Vec<Option<f64>>> {
        let mut out = vec![None; values.len().min(self.horizon)];
        if values.len() < self.horizon + 1 {
            return Ok(out);
        }
        for m in self.horizon..values.len() {
            let n = m - self.horizon;
            let taps = self.taps_at(n as i64)?;
            let mut pred = self.forcing.eval(n as i64)?;
            for (j, a) in taps.iter().enumerate() {
                pred += a * values[n + j];
            }
            out.push(Some(
                (values[m] - pred).abs() / 1.0_f64.max(values[m].abs()),
            ));
        }
        Ok(out)
    }
}

/// Rational-valued forcing for the exact mode.
pub type RationalSeq = Arc<dyn Fn(i64) -> Result<BigRational> + Send + Sync>;

/// Exact-rational twin of [`ExpandedRecurrence`]: identical inputs give
/// bit-identical outputs, settling float-vs-table disputes.
#[derive(Clone)]
pub struct ExactRecurrence {
    horizon: usize,
    taps: Vec<BigRational>,
    forcing: RationalSeq,
}

/// Exact conversion of an f64 (every finite f64 is rational).
pub fn rational_from_f64(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::NumericalFailure(format!("{v} is not finite")))
}

impl ExactRecurrence {
    /// Exact expansion of the unshifted equation; coefficients are
    /// converted exactly from their f64 values.
    pub fn from_unshifted(coefficients: &[f64], forcing: RationalSeq) -> Result<Self> {
        let n = coefficients.len();
        let rs: Vec<BigRational> = coefficients
            .iter()
            .map(|&c| rational_from_f64(c))
            .collect::<Result<_>>()?;
        let r = |k: usize| {
            if k == n {
                BigRational::one()
            } else {
                rs[k].clone()
            }
        };
        let taps = (0..n)
            .map(|j| {
                let mut t = BigRational::zero();
                for k in j..=n {
                    let b = BigRational::from_integer(BigInt::from(binomial(k, j)));
                    let term = r(k) * b;
                    if (k - j) % 2 == 0 {
                        t += term;
                    } else {
                        t -= term;
                    }
                }
                -t
            })
            .collect();
        Ok(ExactRecurrence {
            horizon: n,
            taps,
            forcing,
        })
    }

    /// Exact expansion of delta^2 x(n-1) + lambda x(n) = q(n).
    pub fn from_second_order_shifted(lambda: f64, forcing: RationalSeq) -> Result<Self> {
        let lam = rational_from_f64(lambda)?;
        let two = BigRational::from_integer(BigInt::from(2));
        Ok(ExactRecurrence {
            horizon: 2,
            taps: vec![-BigRational::one(), two - lam],
            forcing: Arc::new(move |n| forcing(n + 1)),
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Exact collapse back to r_0..r_{N-1}.
    pub fn collapse(&self) -> Vec<BigRational> {
        let n = self.horizon;
        let tt = |j: usize| {
            if j == n {
                BigRational::one()
            } else {
                -self.taps[j].clone()
            }
        };
        (0..n)
            .map(|k| {
                let mut acc = BigRational::zero();
                for j in k..=n {
                    acc += tt(j) * BigRational::from_integer(BigInt::from(binomial(j, k)));
                }
                acc
            })
            .collect()
    }

    pub fn run(&self, seed: &[BigRational], n_max: usize) -> Result<Vec<BigRational>> {
        assert_eq!(
            seed.len(),
            self.horizon,
            "seed length must equal the horizon"
        );
        let mut values = seed.to_vec();
        values.truncate(n_max + 1);
        while values.len() <= n_max {
            let n = (values.len() - self.horizon) as i64;
            let mut next = (self.forcing)(n)?;
            for (j, a) in self.taps.iter().enumerate() {
                next += a * &values[n as usize + j];
            }
            values.push(next);
        }
        Ok(values)
    }

    /// Run from f64 seeds (converted exactly) and project back to f64.
    pub fn run_f64(&self, seed: &[f64], n_max: usize) -> Result<Vec<f64>> {
        let exact_seed: Vec<BigRational> = seed
            .iter()
            .map(|&v| rational_from_f64(v))
            .collect::<Result<_>>()?;
        let values = self.run(&exact_seed, n_max)?;
        values
            .iter()
            .map(|v| {
                v.to_f64().ok_or_else(|| {
                    Error::NumericalFailure("exact value does not fit in f64".into())
                })
            })
            .collect()
    }
}

/// Rational forcing from a parsed expression; errors at points where the
/// expression is not exactly rational.
pub fn rational_forcing(expr: &crate::expr::PotentialExpr) -> RationalSeq {
    let owned = expr.clone();
    Arc::new(move |n| owned.eval_rational(n).map_err(Error::Eval))
}

/// Rational forcing for a constant.
pub fn rational_constant(v: f64) -> RationalSeq {
    Arc::new(move |_| rational_from_f64(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::SideData;

    fn unshifted(coefficients: Vec<f64>, forcing: Sequence) -> DifferenceProblem {
        let n = coefficients.len();
        DifferenceProblem::unshifted(coefficients, forcing, SideData::Initial(vec![0.0; n]))
            .unwrap()
    }

    #[test]
    fn expand_fourth_order() {
        // delta^4 x - lambda x = q  ->  x(n+4) = 4x(n+3) - 6x(n+2) + 4x(n+1) + (lambda-1)x(n) + q(n)
        let lambda = 0.0625;
        let rec = expand(&unshifted(vec![-lambda, 0.0, 0.0, 0.0], Sequence::zero()));
        assert_eq!(
            rec.constant_taps().unwrap(),
            &[lambda - 1.0, 4.0, -6.0, 4.0]
        );
    }

    #[test]
    fn expand_first_order() {
        let p = 0.25;
        let rec = expand(&unshifted(vec![-p], Sequence::zero()));
        assert_eq!(rec.constant_taps().unwrap(), &[1.0 + p]);
    }

    #[test]
    fn expand_shifted_second_order() {
        let lambda = 0.75;
        let problem = DifferenceProblem::second_order_shifted(
            lambda,
            Sequence::zero(),
            SideData::Initial(vec![0.0, 1.0]),
        )
        .unwrap();
        let rec = expand(&problem);
        assert_eq!(rec.constant_taps().unwrap(), &[-1.0, 2.0 - lambda]);
    }

    #[test]
    fn run_doubling() {
        let rec = expand(&unshifted(vec![-1.0], Sequence::zero()));
        let sol = rec.run(&[1.0], 10).unwrap();
        assert_eq!(sol.values[10], 1024.0);
        assert_eq!(sol.residual_norm, 0.0);
    }

    #[test]
    fn run_relaxation_step() {
        let q = Sequence::from_fn("1/(n+1)", |n| 1.0 / (n as f64 + 1.0));
        let rec = expand(&unshifted(vec![-0.0625, 0.0, 0.0, 0.0], q));
        let sol = rec.run(&[1.0, 1.0, 1.0, 1.0], 4).unwrap();
        assert_eq!(sol.values[4], 2.0625);
    }

    #[test]
    fn run_hydrogen_from_table_seed() {
        // V(n) = 1/n + 1/sqrt(n), lambda = 1; x(2) from the tabulated x(1)
        let potential = Sequence::from_fallible("1/n + 1/sqrt(n)", |n| {
            if n <= 0 {
                return Err(Error::OutOfDomain { n });
            }
            Ok(1.0 / n as f64 + 1.0 / (n as f64).sqrt())
        });
        let rec = ExpandedRecurrence::second_order_with_potential(1.0, potential);
        let sol = rec.run(&[0.0, 0.866025], 2).unwrap();
        assert!((sol.values[2] - 2.59808).abs() < 1e-5);
    }

    #[test]
    fn residual_detects_perturbation() {
        let rec = expand(&unshifted(vec![-0.0625, 0.0, 0.0, 0.0], Sequence::zero()));
        let sol = rec.run(&[1.0, 1.0, 1.0, 1.0], 12).unwrap();
        assert!(rec.residual(&sol.values).unwrap() <= 1e-15);
        let mut perturbed = sol.values.clone();
        perturbed[6] += 1e-3;
        assert!(rec.residual(&perturbed).unwrap() >= 1e-4);
    }

    #[test]
    fn constant_one_solves_pure_fourth_difference() {
        let rec = expand(&unshifted(vec![0.0, 0.0, 0.0, 0.0], Sequence::zero()));
        let ones = vec![1.0; 12];
        assert_eq!(rec.residual(&ones).unwrap(), 0.0);
    }

    #[test]
    fn exact_mode_is_deterministic_and_matches_float() {
        let coeffs = vec![-0.0625, 0.0, 0.0, 0.0];
        let expr = crate::expr::PotentialExpr::parse("1/(n+1)").unwrap();
        let exact = ExactRecurrence::from_unshifted(&coeffs, rational_forcing(&expr)).unwrap();
        let a = exact.run_f64(&[1.0; 4], 13).unwrap();
        let b = exact.run_f64(&[1.0; 4], 13).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[4], 2.0625);

        let float_rec = expand(&unshifted(coeffs, Sequence::from_expr(&expr)));
        let f = float_rec.run(&[1.0; 4], 13).unwrap();
        for (x, y) in a.iter().zip(&f.values) {
            assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn expand_collapse_roundtrip_is_exact() {
        let coeffs = vec![-0.3137, 0.25, -1.75, 0.1];
        let exact = ExactRecurrence::from_unshifted(&coeffs, rational_constant(0.0)).unwrap();
        let back = exact.collapse();
        for (orig, got) in coeffs.iter().zip(&back) {
            assert_eq!(rational_from_f64(*orig).unwrap(), *got);
        }
        // float collapse agrees too
        let rec = expand(&unshifted(coeffs.clone(), Sequence::zero()));
        let approx = rec.collapse().unwrap();
        for (orig, got) in coeffs.iter().zip(&approx) {
            assert!((orig - got).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_mode_rejects_irrational_forcing() {
        let expr = crate::expr::PotentialExpr::parse("1/sqrt(n+1)").unwrap();
        let exact =
            ExactRecurrence::from_unshifted(&[-0.0625, 0.0, 0.0, 0.0], rational_forcing(&expr))
                .unwrap();
        assert!(exact.run_f64(&[1.0; 4], 8).is_err());
    }
}

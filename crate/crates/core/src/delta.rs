//! Delta-difference calculus on the integer lattice N_a: the forward
//! difference operator, regressive coefficient sequences, the delta
//! exponential and trigonometric functions, the circle-plus operation,
//! and delta integration.
//!
//! The delta exponential e_p(n, s) is the two-branch product
//!
//! ```text
//! e_p(n, s) = prod_{tau=s}^{n-1} (1 + p(tau))          for n >= s
//! e_p(n, s) = prod_{tau=n}^{s-1} (1 + p(tau))^{-1}     for n <  s
//! ```
//!
//! with the empty product equal to 1. It solves the first-order problem
//! `delta x = p x, x(s) = 1` and satisfies `e_p e_q = e_{p (+) q}` where
//! `p (+) q = p + q + p q`.
//!
//! All exponential evaluation runs over complex scalars even for real
//! inputs; real results are extracted through [`crate::error::expect_real`].

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{expect_real, Error, Result};
use crate::sequence::Sequence;

/// Index on the integer lattice N_a.
pub type GridPoint = i64;

/// A coefficient sequence p(n) satisfying 1 + p(n) != 0 wherever it is
/// evaluated. Constant sequences are represented without materializing
/// values; varying sequences are total closures.
#[derive(Clone)]
pub struct RegressiveSequence {
    base: i64,
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    Constant(Complex64),
    Varying(Arc<dyn Fn(i64) -> Complex64 + Send + Sync>),
}

impl RegressiveSequence {
    /// A constant sequence p(n) = p.
    pub fn constant(p: impl Into<Complex64>) -> Self {
        RegressiveSequence {
            base: 0,
            kind: Kind::Constant(p.into()),
        }
    }

    /// A varying sequence given as a total closure on N_base.
    pub fn from_fn(base: i64, f: impl Fn(i64) -> Complex64 + Send + Sync + 'static) -> Self {
        RegressiveSequence {
            base,
            kind: Kind::Varying(Arc::new(f)),
        }
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn eval(&self, n: i64) -> Complex64 {
        match &self.kind {
            Kind::Constant(c) => *c,
            Kind::Varying(f) => f(n),
        }
    }
}

/// Forward difference of a real sequence: f(n+1) - f(n).
pub fn delta(f: &Sequence, n: GridPoint) -> Result<f64> {
    Ok(f.eval(n + 1)? - f.eval(n)?)
}

/// Forward difference of a complex-valued function.
pub fn delta_fn<F: Fn(i64) -> Complex64>(f: F, n: GridPoint) -> Complex64 {
    f(n + 1) - f(n)
}

/// k-fold forward difference by repeated differencing of the k+1
/// evaluations f(n), ..., f(n+k).
pub fn delta_iter<F: Fn(i64) -> Complex64>(f: F, k: usize, n: GridPoint) -> Complex64 {
    let mut vals: Vec<Complex64> = (0..=k as i64).map(|j| f(n + j)).collect();
    for level in 0..k {
        for i in 0..k - level {
            vals[i] = vals[i + 1] - vals[i];
        }
    }
    vals[0]
}

/// The circle-plus group operation: p (+) q = p + q + p q.
pub fn circle_plus(p: Complex64, q: Complex64) -> Complex64 {
    p + q + p * q
}

/// The delta exponential e_p(n, s).
///
/// Constant p uses binary exponentiation of (1 + p); varying p uses
/// iterative product accumulation. Errors with the first grid point at
/// which 1 + p vanishes.
pub fn delta_exp(p: &RegressiveSequence, n: GridPoint, s: GridPoint) -> Result<Complex64> {
    match &p.kind {
        Kind::Constant(c) => {
            let w = Complex64::new(1.0, 0.0) + c;
            if w == Complex64::new(0.0, 0.0) {
                return Err(Error::NonRegressive { n: n.min(s) });
            }
            let exp = n - s;
            let exp32 = i32::try_from(exp)
                .map_err(|_| Error::NumericalFailure(format!("exponent {exp} out of range")))?;
            Ok(w.powi(exp32))
        }
        Kind::Varying(f) => {
            let (lo, hi) = if n >= s { (s, n) } else { (n, s) };
            let mut acc = Complex64::new(1.0, 0.0);
            for tau in lo..hi {
                let w = Complex64::new(1.0, 0.0) + f(tau);
                if w == Complex64::new(0.0, 0.0) {
                    return Err(Error::NonRegressive { n: tau });
                }
                acc *= w;
            }
            if n >= s {
                Ok(acc)
            } else {
                Ok(acc.finv())
            }
        }
    }
}

/// Delta cosine for a constant (possibly complex) p:
/// cos_p(n, a) = (e_{ip}(n, a) + e_{-ip}(n, a)) / 2.
pub fn delta_cos(p: Complex64, n: GridPoint, a: GridPoint) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let plus = delta_exp(&RegressiveSequence::constant(i * p), n, a)?;
    let minus = delta_exp(&RegressiveSequence::constant(-i * p), n, a)?;
    Ok((plus + minus) / 2.0)
}

/// Delta sine for a constant (possibly complex) p:
/// sin_p(n, a) = (e_{ip}(n, a) - e_{-ip}(n, a)) / (2i).
pub fn delta_sin(p: Complex64, n: GridPoint, a: GridPoint) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let plus = delta_exp(&RegressiveSequence::constant(i * p), n, a)?;
    let minus = delta_exp(&RegressiveSequence::constant(-i * p), n, a)?;
    Ok((plus - minus) / (2.0 * i))
}

/// Delta cosine of a real p; the imaginary part is checked against the
/// guard and discarded.
pub fn delta_cos_real(p: f64, n: GridPoint, a: GridPoint) -> Result<f64> {
    expect_real(delta_cos(Complex64::new(p, 0.0), n, a)?)
}

/// Delta sine of a real p; the imaginary part is checked against the
/// guard and discarded.
pub fn delta_sin_real(p: f64, n: GridPoint, a: GridPoint) -> Result<f64> {
    expect_real(delta_sin(Complex64::new(p, 0.0), n, a)?)
}

/// Delta integral with the half-open convention:
/// int_c^d f(n) delta n = sum_{n=c}^{d-1} f(n), zero when d <= c.
///
/// This canonicalization makes int_a^b + int_b^c = int_a^c hold.
pub fn delta_integral(f: &Sequence, c: GridPoint, d: GridPoint) -> Result<f64> {
    let mut acc = 0.0;
    for n in c..d {
        acc += f.eval(n)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_of_simple_sequences() {
        let constant = Sequence::constant(42.0);
        assert_eq!(delta(&constant, 9).unwrap(), 0.0);
        let identity = Sequence::from_fn("n", |n| n as f64);
        assert_eq!(delta(&identity, 5).unwrap(), 1.0);
        let triangular = Sequence::from_fn("n(n-1)/2", |n| (n * (n - 1)) as f64 / 2.0);
        assert_eq!(delta(&triangular, 3).unwrap(), 3.0);
    }

    #[test]
    fn delta_exp_zero_coefficient_is_one() {
        let p = RegressiveSequence::constant(0.0);
        assert_eq!(delta_exp(&p, 7, 0).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn delta_exp_constant_one() {
        let p = RegressiveSequence::constant(1.0);
        assert_eq!(delta_exp(&p, 5, 0).unwrap(), c(32.0, 0.0));
        // backward branch
        assert_eq!(delta_exp(&p, 0, 3).unwrap(), c(0.125, 0.0));
    }

    #[test]
    fn delta_exp_varying() {
        let p = RegressiveSequence::from_fn(1, |tau| c(tau as f64, 0.0));
        assert_eq!(delta_exp(&p, 4, 1).unwrap(), c(24.0, 0.0));
    }

    #[test]
    fn delta_exp_varying_backward_branch() {
        let p = RegressiveSequence::from_fn(1, |tau| c(tau as f64, 0.0));
        let forward = delta_exp(&p, 4, 1).unwrap();
        let backward = delta_exp(&p, 1, 4).unwrap();
        assert_eq!(backward, forward.finv());
        assert!((backward - c(1.0 / 24.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn delta_exp_at_base_point_is_one() {
        for s in [-3, 0, 11] {
            let p = RegressiveSequence::constant(c(0.3, -0.2));
            assert_eq!(delta_exp(&p, s, s).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn delta_exp_detects_non_regressive_point() {
        let p =
            RegressiveSequence::from_fn(0, |tau| if tau == 2 { c(-1.0, 0.0) } else { c(0.5, 0.0) });
        assert_eq!(
            delta_exp(&p, 5, 0).unwrap_err(),
            Error::NonRegressive { n: 2 }
        );
        let q = RegressiveSequence::constant(-1.0);
        assert_eq!(
            delta_exp(&q, 5, 0).unwrap_err(),
            Error::NonRegressive { n: 0 }
        );
    }

    #[test]
    fn circle_plus_examples() {
        assert_eq!(circle_plus(c(2.0, 0.0), c(3.0, 0.0)), c(11.0, 0.0));
        let p = c(0.7, -1.3);
        assert_eq!(circle_plus(p, c(0.0, 0.0)), p);
        assert_eq!(circle_plus(c(0.0, 1.0), c(0.0, -1.0)), c(1.0, 0.0));
    }

    #[test]
    fn trig_values_at_small_n() {
        assert_eq!(delta_sin_real(1.0, 0, 0).unwrap(), 0.0);
        assert_eq!(delta_cos_real(1.0, 0, 0).unwrap(), 1.0);
        // (1+i)^2 = 2i, (1-i)^2 = -2i
        assert_eq!(delta_cos_real(1.0, 2, 0).unwrap(), 0.0);
        assert_eq!(delta_sin_real(1.0, 2, 0).unwrap(), 2.0);
    }

    #[test]
    fn trig_rejects_non_regressive_parameter() {
        // 1 + i*(-i) = 0
        assert!(matches!(
            delta_cos(c(0.0, -1.0), 3, 0),
            Err(Error::NonRegressive { .. })
        ));
    }

    #[test]
    fn trig_bridge_at_sixty_degrees() {
        // e_alpha(n,0) * sin_gamma(n,0) = sin(n*theta) with
        // alpha = cos(theta) - 1, gamma = tan(theta)
        let theta = std::f64::consts::PI / 3.0;
        let alpha = RegressiveSequence::constant(theta.cos() - 1.0);
        let gamma = theta.tan();
        let n = 3;
        let e = delta_exp(&alpha, n, 0).unwrap();
        let s = delta_sin(c(gamma, 0.0), n, 0).unwrap();
        let value = expect_real(e * s).unwrap();
        assert!((value - (3.0 * theta).sin()).abs() < 1e-12);
        assert!(value.abs() < 1e-12); // sin(pi) = 0
    }

    #[test]
    fn delta_integral_half_open() {
        let identity = Sequence::from_fn("n", |n| n as f64);
        assert_eq!(delta_integral(&identity, 0, 4).unwrap(), 6.0);
        assert_eq!(delta_integral(&identity, 5, 5).unwrap(), 0.0);
        assert_eq!(delta_integral(&identity, 7, 2).unwrap(), 0.0);
        let one = Sequence::constant(1.0);
        assert_eq!(delta_integral(&one, 0, 10).unwrap(), 10.0);
    }

    #[test]
    fn delta_integral_is_additive_over_adjacent_ranges() {
        let f = Sequence::from_fn("n^2", |n| (n * n) as f64);
        let whole = delta_integral(&f, 0, 9).unwrap();
        let split = delta_integral(&f, 0, 4).unwrap() + delta_integral(&f, 4, 9).unwrap();
        assert_eq!(whole, split);
    }

    #[test]
    fn delta_integral_propagates_domain_errors() {
        let f = Sequence::from_fallible("partial", |n| {
            if n == 2 {
                Err(Error::OutOfDomain { n })
            } else {
                Ok(1.0)
            }
        });
        assert_eq!(
            delta_integral(&f, 0, 5).unwrap_err(),
            Error::OutOfDomain { n: 2 }
        );
    }

    #[test]
    fn delta_iter_matches_binomial_expansion() {
        let f = |n: i64| c((n * n * n) as f64, 0.0);
        // third difference of n^3 is 3! = 6, fourth is 0
        assert_eq!(delta_iter(f, 3, 2), c(6.0, 0.0));
        assert_eq!(delta_iter(f, 4, 2), c(0.0, 0.0));
    }
}

//! Real-valued sequences on the integer grid, supplied as total functions
//! (closures or parsed expressions) rather than stored arrays.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::PotentialExpr;

/// A real-valued sequence q(n). Evaluation is fallible so that
/// expression-backed sequences (e.g. `1/sqrt(n)` at n = 0) can report
/// domain errors instead of producing NaN.
#[derive(Clone)]
pub struct Sequence {
    f: Arc<dyn Fn(i64) -> Result<f64> + Send + Sync>,
    label: String,
}

impl Sequence {
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Sequence {
            f: Arc::new(move |_| Ok(c)),
            label: format!("{c}"),
        }
    }

    /// A total sequence from an infallible closure.
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Sequence {
            f: Arc::new(move |n| Ok(f(n))),
            label: label.into(),
        }
    }

    pub fn from_fallible(
        label: impl Into<String>,
        f: impl Fn(i64) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Sequence {
            f: Arc::new(f),
            label: label.into(),
        }
    }

    pub fn from_expr(expr: &PotentialExpr) -> Self {
        let label = expr.source().to_owned();
        let owned = expr.clone();
        Sequence {
            f: Arc::new(move |n| owned.eval(n).map_err(Error::Eval)),
            label,
        }
    }

    /// The sequence m -> q(m + offset).
    pub fn shifted(&self, offset: i64) -> Self {
        let inner = self.f.clone();
        Sequence {
            f: Arc::new(move |n| inner(n + offset)),
            label: format!("{}@n+{offset}", self.label),
        }
    }

    pub fn eval(&self, n: i64) -> Result<f64> {
        (self.f)(n)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequence({})", self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_closure() {
        assert_eq!(Sequence::constant(3.5).eval(-7).unwrap(), 3.5);
        let sq = Sequence::from_fn("n^2", |n| (n * n) as f64);
        assert_eq!(sq.eval(5).unwrap(), 25.0);
    }

    #[test]
    fn shifted_composes() {
        let s = Sequence::from_fn("n", |n| n as f64).shifted(1);
        assert_eq!(s.eval(4).unwrap(), 5.0);
    }

    #[test]
    fn expression_backed_errors_propagate() {
        let e = PotentialExpr::parse("1/sqrt(n)").unwrap();
        let s = Sequence::from_expr(&e);
        assert_eq!(s.eval(4).unwrap(), 0.5);
        assert!(matches!(s.eval(0), Err(Error::Eval(_))));
    }

    #[test]
    fn shared_values_are_thread_safe() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Sequence>();
        assert_send_sync::<crate::delta::RegressiveSequence>();
        assert_send_sync::<crate::charpoly::SolutionBasis>();
        assert_send_sync::<crate::problem::DifferenceProblem>();
        assert_send_sync::<crate::oracle::ExpandedRecurrence>();
        assert_send_sync::<crate::oracle::ExactRecurrence>();
    }
}

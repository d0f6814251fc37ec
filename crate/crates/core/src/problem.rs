//! Problem and solution containers shared by the solver and the
//! brute-force recurrence oracle.

use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// Where the difference operator sits relative to the unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    /// delta^N x(n) + r_{N-1} delta^{N-1} x(n) + ... + r_0 x(n) = q(n)
    Unshifted,
    /// delta^2 x(n-1) + lambda x(n) = q(n)
    SecondOrderShifted,
}

/// Side conditions pinning the N free constants.
#[derive(Debug, Clone, PartialEq)]
pub enum SideData {
    /// x(0), x(1), ..., x(N-1).
    Initial(Vec<f64>),
    /// N point/value pairs (n_k, x(n_k)).
    Boundary(Vec<(i64, f64)>),
}

impl SideData {
    pub fn len(&self) -> usize {
        match self {
            SideData::Initial(v) => v.len(),
            SideData::Boundary(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// An Nth-order constant-coefficient linear difference equation with
/// forcing and side data.
#[derive(Debug, Clone)]
pub struct DifferenceProblem {
    coefficients: Vec<f64>,
    forcing: Sequence,
    shift: Shift,
    side_data: SideData,
}

impl DifferenceProblem {
    /// delta^N x + r_{N-1} delta^{N-1} x + ... + r_0 x = q with
    /// `coefficients` = [r_0, ..., r_{N-1}].
    pub fn unshifted(
        coefficients: Vec<f64>,
        forcing: Sequence,
        side_data: SideData,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::NumericalFailure(
                "equation order must be at least 1".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NumericalFailure("non-finite coefficient".into()));
        }
        let p = DifferenceProblem {
            coefficients,
            forcing,
            shift: Shift::Unshifted,
            side_data,
        };
        p.check_side_count()?;
        Ok(p)
    }

    /// delta^2 x(n-1) + lambda x(n) = q(n).
    pub fn second_order_shifted(
        lambda: f64,
        forcing: Sequence,
        side_data: SideData,
    ) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NumericalFailure("non-finite coefficient".into()));
        }
        let p = DifferenceProblem {
            coefficients: vec![lambda],
            forcing,
            shift: Shift::SecondOrderShifted,
            side_data,
        };
        p.check_side_count()?;
        Ok(p)
    }

    fn check_side_count(&self) -> Result<()> {
        if self.side_data.len() != self.order() {
            return Err(Error::NumericalFailure(format!(
                "need {} side conditions for an order-{} equation, got {}",
                self.order(),
                self.order(),
                self.side_data.len()
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        match self.shift {
            Shift::Unshifted => self.coefficients.len(),
            Shift::SecondOrderShifted => 2,
        }
    }

    /// r_0..r_{N-1} for the unshifted form; [lambda] for the shifted form.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn forcing(&self) -> &Sequence {
        &self.forcing
    }

    pub fn shift(&self) -> Shift {
        self.shift
    }

    pub fn side_data(&self) -> &SideData {
        &self.side_data
    }

    /// The equivalent unshifted equation. The shifted second-order form
    /// delta^2 x(n-1) + lambda x(n) = q(n) rewrites, with k = n - 1, to
    /// delta^2 x(k) + lambda delta x(k) + lambda x(k) = q(k+1).
    pub fn normalized(&self) -> Self {
        match self.shift {
            Shift::Unshifted => self.clone(),
            Shift::SecondOrderShifted => {
                let lambda = self.coefficients[0];
                DifferenceProblem {
                    coefficients: vec![lambda, lambda],
                    forcing: self.forcing.shifted(1),
                    shift: Shift::Unshifted,
                    side_data: self.side_data.clone(),
                }
            }
        }
    }
}

/// A solution sampled on n = 0..=n_max, with the defect of the equation
/// it was checked against. The residual is always recorded, never assumed.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub values: Vec<f64>,
    pub lambda: Option<f64>,
    pub label: String,
    pub residual_norm: f64,
}

impl GridSolution {
    pub fn n_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_count_must_match_order() {
        let err = DifferenceProblem::unshifted(
            vec![1.0, 2.0],
            Sequence::zero(),
            SideData::Initial(vec![0.0]),
        );
        assert!(err.is_err());
    }

    #[test]
    fn shifted_problem_is_second_order() {
        let p = DifferenceProblem::second_order_shifted(
            1.0,
            Sequence::zero(),
            SideData::Initial(vec![0.0, 0.5]),
        )
        .unwrap();
        assert_eq!(p.order(), 2);
        let norm = p.normalized();
        assert_eq!(norm.coefficients(), &[1.0, 1.0]);
        assert_eq!(norm.shift(), Shift::Unshifted);
    }

    #[test]
    fn normalized_shifts_the_forcing() {
        let q = Sequence::from_fn("n", |n| n as f64);
        let p = DifferenceProblem::second_order_shifted(0.5, q, SideData::Initial(vec![0.0, 1.0]))
            .unwrap();
        assert_eq!(p.normalized().forcing().eval(3).unwrap(), 4.0);
    }
}

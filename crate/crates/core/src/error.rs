//! Error types shared across the crate.

use std::fmt;

use num_complex::Complex64;

use crate::expr::EvalError;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the calculus operations and solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A sequence was evaluated at a grid point outside its domain.
    OutOfDomain { n: i64 },
    /// A coefficient sequence has 1 + p(n) = 0 at the named grid point.
    NonRegressive { n: i64 },
    /// A characteristic root with |1 + m| below the regressivity floor;
    /// the delta-exponential framework cannot represent its solution.
    NonRegressiveRoot { root: Complex64 },
    /// A complex root pair with real part -1; the real trigonometric
    /// basis of such a pair is undefined (gamma = beta / (1 + alpha)).
    DegenerateComplexPair { root: Complex64 },
    /// The Casoratian determinant is numerically singular at n, which
    /// signals a linearly dependent solution basis.
    SingularCasoratian { n: i64 },
    /// The initial/boundary condition matrix is singular; for boundary
    /// problems this signals that lambda is an eigenvalue.
    SingularConditions,
    /// The spectral parameter lies outside (0, 4), where the oscillatory
    /// sum representation does not apply.
    NotOscillatory { lambda: f64 },
    /// A computation that must produce a real value left an imaginary
    /// part exceeding the guard |Im| <= 1e-9 * (1 + |Re|).
    ImaginaryResidue { re: f64, im: f64 },
    /// An iteration failed to converge or a sanity check failed.
    NumericalFailure(String),
    /// Expression evaluation failed (division by zero, domain error, ...).
    Eval(EvalError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfDomain { n } => write!(f, "sequence undefined at n = {n}"),
            Error::NonRegressive { n } => {
                write!(f, "sequence is not regressive: 1 + p({n}) = 0")
            }
            Error::NonRegressiveRoot { root } => {
                write!(f, "characteristic root {root} has 1 + m too close to 0")
            }
            Error::DegenerateComplexPair { root } => {
                write!(f, "complex root pair {root} has real part -1")
            }
            Error::SingularCasoratian { n } => {
                write!(f, "Casoratian is numerically singular at n = {n}")
            }
            Error::SingularConditions => write!(f, "side-condition matrix is singular"),
            Error::NotOscillatory { lambda } => {
                write!(
                    f,
                    "lambda = {lambda} is outside the oscillatory range (0, 4)"
                )
            }
            Error::ImaginaryResidue { re, im } => write!(
                f,
                "expected a real value but got imaginary residue {im:e} (real part {re:e})"
            ),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<EvalError> for Error {
    fn from(e: EvalError) -> Self {
        Error::Eval(e)
    }
}

/// Extract the real part of `z`, rejecting values whose imaginary part
/// exceeds the guard |Im| <= 1e-9 * (1 + |Re|).
pub fn expect_real(z: Complex64) -> Result<f64> {
    if z.im.abs() <= 1e-9 * (1.0 + z.re.abs()) {
        Ok(z.re)
    } else {
        Err(Error::ImaginaryResidue { re: z.re, im: z.im })
    }
}

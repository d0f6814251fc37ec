//! Discrete delta calculus and closed-form solvers for constant-coefficient
//! linear difference equations.
//!
//! The crate builds up from the delta exponential e_p(n, s), the product
//! analogue of the continuous exponential, to a full variation-of-parameters
//! engine: characteristic polynomial, complex root basis, Casoratian Cramer
//! system, parameter sums, and constant fitting. On top of the engine sit
//! two families of worked problems (a discrete Schrodinger/Sturm-Liouville
//! pair with Coulomb-type potentials and a fourth-order relaxation
//! equation), an independent brute-force recurrence oracle with an exact
//! big-rational mode, a potential-expression parser, and reference tables
//! for reproduction reports.

pub mod charpoly;
pub mod delta;
pub mod error;
pub mod expr;
mod linalg;
pub mod oracle;
pub mod problem;
pub mod reference;
pub mod relaxation;
pub mod schrodinger;
pub mod sequence;
pub mod verify;
pub mod vop;

pub use error::{Error, Result};
pub use problem::{DifferenceProblem, GridSolution, Shift, SideData};
pub use sequence::Sequence;

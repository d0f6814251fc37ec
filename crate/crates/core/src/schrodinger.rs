//! Discrete Schrodinger-type boundary problems on [0, b]:
//!
//! ```text
//! -delta^2 x(n-1) + V(n) x(n) = lambda x(n),    x(0) = x(b) = 0
//! ```
//!
//! with the hydrogen-atom potential V(n) = A/n + q(n) or the Coulomb
//! Sturm-Liouville potential V(n) = q(n) - 2/n + l(l+1)/n^2.
//!
//! For 0 < lambda < 4 the substitution lambda = 2 - 2 cos(theta) turns
//! the free solutions into sin(n theta), cos(n theta), and the full
//! problem into the Volterra-type sum representation
//!
//! ```text
//! x(n) = sin(n theta) + (1/sin theta) * sum_{s=1}^{n-1} V(s) x(s) sin((n-s) theta)
//! ```
//!
//! which this module evaluates as an explicit forward recursion (the
//! s = n term vanishes identically). Outside (0, 4) only trivial
//! solutions satisfy the boundary conditions, so the eigenvalue scan
//! sweeps theta over (0, pi).
//!
//! Sign convention: the printed form of the Coulomb equation carries
//! (-q + 2/n - l(l+1)/n^2) on the -delta^2 side, but the tabulated
//! solutions are only consistent with the potential q - 2/n + l(l+1)/n^2
//! inside the kernel sum. The table-consistent convention is implemented
//! here.

use crate::charpoly::{build_exponential_basis, find_roots, CharPolynomial, SolutionBasis};
use crate::error::{Error, Result};
use crate::problem::GridSolution;
use crate::sequence::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Hydrogen,
    Coulomb,
}

/// A discrete Schrodinger/Sturm-Liouville spec on the grid [0, b].
#[derive(Clone)]
pub struct SchrodingerSpec {
    pub kind: PotentialKind,
    /// Coulomb strength A in the hydrogen potential A/n + q(n).
    pub coulomb_strength: f64,
    /// Angular quantum number l in l(l+1)/n^2.
    pub angular: u32,
    pub q: Sequence,
    /// Right endpoint of the grid (b >= 2).
    pub b: i64,
    /// Spectral parameter (energy).
    pub lambda: f64,
}

impl SchrodingerSpec {
    pub fn hydrogen(coulomb_strength: f64, q: Sequence, b: i64, lambda: f64) -> Result<Self> {
        Self::validate(b)?;
        Ok(SchrodingerSpec {
            kind: PotentialKind::Hydrogen,
            coulomb_strength,
            angular: 0,
            q,
            b,
            lambda,
        })
    }

    pub fn coulomb(angular: u32, q: Sequence, b: i64, lambda: f64) -> Result<Self> {
        Self::validate(b)?;
        Ok(SchrodingerSpec {
            kind: PotentialKind::Coulomb,
            coulomb_strength: 0.0,
            angular,
            q,
            b,
            lambda,
        })
    }

    fn validate(b: i64) -> Result<()> {
        if b < 2 {
            return Err(Error::NumericalFailure(format!(
                "right endpoint b = {b} must be >= 2"
            )));
        }
        Ok(())
    }

    pub fn potential_label(&self) -> String {
        match self.kind {
            PotentialKind::Hydrogen => {
                format!(
                    "{}/n + q(n), q(n) = {}",
                    self.coulomb_strength,
                    self.q.label()
                )
            }
            PotentialKind::Coulomb => format!(
                "q(n) - 2/n + {}/n^2, q(n) = {}",
                self.angular * (self.angular + 1),
                self.q.label()
            ),
        }
    }
}

/// Classification of the spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaClass {
    /// lambda = 0: only the trivial solution meets the boundary data.
    Zero,
    /// lambda = 4: only the trivial solution.
    Four,
    /// lambda outside [0, 4]: no nontrivial solution exists.
    Outside,
    /// 0 < lambda < 4 with lambda = 2 - 2 cos(theta).
    Oscillatory { theta: f64 },
}

/// Four-case analysis of lambda; oscillatory values carry
/// theta = arccos(1 - lambda/2).
pub fn classify_lambda(lambda: f64) -> LambdaClass {
    if lambda == 0.0 {
        LambdaClass::Zero
    } else if lambda == 4.0 {
        LambdaClass::Four
    } else if lambda > 0.0 && lambda < 4.0 {
        LambdaClass::Oscillatory {
            theta: theta_of(lambda),
        }
    } else {
        LambdaClass::Outside
    }
}

/// theta with lambda = 2 - 2 cos(theta); the arccos argument is clamped
/// at 1e-15 slack so lambda at the edges of (0, 4) does not NaN.
pub fn theta_of(lambda: f64) -> f64 {
    let mut arg = 1.0 - lambda / 2.0;
    if arg > 1.0 && arg < 1.0 + 1e-15 {
        arg = 1.0;
    }
    if arg < -1.0 && arg > -1.0 - 1e-15 {
        arg = -1.0;
    }
    arg.acos()
}

/// The effective potential V(n) inside the kernel sum.
pub fn effective_potential(spec: &SchrodingerSpec, n: i64) -> Result<f64> {
    if n <= 0 {
        return Err(Error::OutOfDomain { n });
    }
    let nf = n as f64;
    match spec.kind {
        PotentialKind::Hydrogen => Ok(spec.coulomb_strength / nf + spec.q.eval(n)?),
        PotentialKind::Coulomb => {
            let l = spec.angular as f64;
            Ok(spec.q.eval(n)? - 2.0 / nf + l * (l + 1.0) / (nf * nf))
        }
    }
}

/// Solve by the oscillatory sum representation: x(0) = 0 and
///
/// ```text
/// x(n) = sin(n theta) + (1/sin theta) sum_{s=1}^{n-1} V(s) x(s) sin((n-s) theta)
/// ```
///
/// for n = 1..=b. The defect of the equivalent three-term recurrence
/// x(n+1) = (2 - lambda + V(n)) x(n) - x(n-1) is recorded as the
/// residual norm.
pub fn sum_representation_solve(spec: &SchrodingerSpec) -> Result<GridSolution> {
    let LambdaClass::Oscillatory { theta } = classify_lambda(spec.lambda) else {
        return Err(Error::NotOscillatory {
            lambda: spec.lambda,
        });
    };
    let sin_theta = theta.sin();
    let b = spec.b as usize;
    let potential: Vec<f64> = (1..spec.b)
        .map(|n| effective_potential(spec, n))
        .collect::<Result<_>>()?;

    let mut values = vec![0.0_f64; b + 1];
    for n in 1..=b {
        let mut kernel = 0.0;
        for s in 1..n {
            kernel += potential[s - 1] * values[s] * ((n - s) as f64 * theta).sin();
        }
        values[n] = (n as f64 * theta).sin() + kernel / sin_theta;
    }

    let mut residual_norm = 0.0_f64;
    for n in 1..b {
        let predicted = (2.0 - spec.lambda + potential[n - 1]) * values[n] - values[n - 1];
        let defect = (values[n + 1] - predicted).abs() / 1.0_f64.max(values[n + 1].abs());
        residual_norm = residual_norm.max(defect);
    }

    Ok(GridSolution {
        values,
        lambda: Some(spec.lambda),
        label: format!("sum representation, V(n) = {}", spec.potential_label()),
        residual_norm,
    })
}

/// One eigenvalue found by the boundary scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanHit {
    pub lambda: f64,
    pub theta: f64,
    /// |x(b, lambda)| after refinement.
    pub boundary_value: f64,
}

/// Scan theta over (0, pi) at the given resolution, bracket sign changes
/// of x(b, lambda(theta)), and refine each bracket by bisection until
/// |x(b, lambda)| <= 1e-10 * max(1, max_n |x(n)|). The spectral
/// parameter of `spec` is ignored; eigenvalues return in ascending
/// lambda order. Only (0, 4) hosts nontrivial solutions, so the scan is
/// complete.
pub fn eigenvalue_scan(spec: &SchrodingerSpec, resolution: usize) -> Result<Vec<ScanHit>> {
    let resolution = resolution.max(16);
    let b = spec.b as usize;
    let potential: Vec<f64> = (1..spec.b)
        .map(|n| effective_potential(spec, n))
        .collect::<Result<_>>()?;

    // forward stepping of the three-term recurrence from x(0)=0, x(1)=sin(theta)
    let boundary = |theta: f64| -> (f64, f64) {
        let lambda = 2.0 - 2.0 * theta.cos();
        let mut prev = 0.0_f64;
        let mut here = theta.sin();
        let mut scale = here.abs();
        for n in 1..b {
            let next = (2.0 - lambda + potential[n - 1]) * here - prev;
            prev = here;
            here = next;
            scale = scale.max(here.abs());
        }
        (here, scale.max(1.0))
    };

    let grid: Vec<f64> = (1..resolution)
        .map(|j| std::f64::consts::PI * j as f64 / resolution as f64)
        .collect();
    let samples: Vec<f64> = grid.iter().map(|&t| boundary(t).0).collect();

    let mut hits: Vec<ScanHit> = Vec::new();
    let mut push_hit = |theta: f64, value: f64| {
        let lambda = 2.0 - 2.0 * theta.cos();
        if !hits
            .iter()
            .any(|h: &ScanHit| (h.lambda - lambda).abs() <= 1e-9)
        {
            hits.push(ScanHit {
                lambda,
                theta,
                boundary_value: value.abs(),
            });
        }
    };

    for j in 0..grid.len() {
        if samples[j] == 0.0 {
            push_hit(grid[j], 0.0);
            continue;
        }
        if j + 1 >= grid.len() || samples[j + 1] == 0.0 {
            continue;
        }
        if samples[j].signum() == samples[j + 1].signum() {
            continue;
        }
        let (mut lo, mut hi) = (grid[j], grid[j + 1]);
        let mut flo = samples[j];
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..200 {
            mid = 0.5 * (lo + hi);
            let (fmid, scale) = boundary(mid);
            if fmid.abs() <= 1e-10 * scale || (hi - lo) <= f64::EPSILON * mid {
                break;
            }
            if fmid.signum() == flo.signum() {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        push_hit(mid, boundary(mid).0);
    }

    hits.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(hits)
}

/// The homogeneous basis of delta^2 x(n-1) + lambda x(n) = 0 as a pure
/// exponential pair e_{m1}, e_{m2} with m = (-lambda +/- sqrt(lambda
/// (lambda - 4)))/2, ordered upper root first. Works for every
/// regressive lambda (including lambda = 2, where the real pair form
/// degenerates) and has the constant Casoratian
/// W = m2 - m1 = -sqrt(lambda(lambda - 4)).
pub fn hydrogen_basis(lambda: f64) -> Result<SolutionBasis> {
    let roots = find_roots(&CharPolynomial::new(vec![lambda, lambda]))?;
    build_exponential_basis(&roots, 0)
}

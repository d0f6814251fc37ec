//! Characteristic polynomials of constant-coefficient delta-form
//! equations, complex root extraction with multiplicities, and the
//! homogeneous solution basis built from the roots.
//!
//! Substituting x(n) = e_m(n, 0) into the unshifted equation yields the
//! monic polynomial m^N + r_{N-1} m^{N-1} + ... + r_0. Each root then
//! contributes basis solutions:
//!
//! * distinct real m: e_m(n, a) = (1 + m)^(n-a)
//! * complex pair alpha +/- i beta: e_alpha cos_gamma and
//!   e_alpha sin_gamma with gamma = beta / (1 + alpha), which evaluate to
//!   the real and imaginary parts of (1 + alpha + i beta)^(n-a)
//! * a root r of multiplicity k: (n - a)^j e_r(n, a) for j = 0..k-1
//!   (the double-root rule, extended naturally to k > 2 and verified
//!   against the recurrence oracle rather than derived in closed form)
//!
//! Degrees 1 and 2 use closed root formulas; higher degrees use
//! simultaneous Aberth-Ehrlich iteration with deterministic starting
//! points on a circle of radius 1 + max |r_k|.

use num_complex::Complex64;

use crate::error::{expect_real, Error, Result};
use crate::problem::{DifferenceProblem, Shift};

const REGRESSIVITY_FLOOR: f64 = 1e-12;
const CLUSTER_TOL: f64 = 1e-8;

/// Monic characteristic polynomial; `low` holds r_0..r_{N-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPolynomial {
    low: Vec<f64>,
}

impl CharPolynomial {
    pub fn new(low_coefficients: Vec<f64>) -> Self {
        assert!(!low_coefficients.is_empty(), "degree must be at least 1");
        CharPolynomial {
            low: low_coefficients,
        }
    }

    pub fn degree(&self) -> usize {
        self.low.len()
    }

    /// r_0..r_{N-1} (the leading coefficient is exactly 1).
    pub fn low_coefficients(&self) -> &[f64] {
        &self.low
    }

    pub fn eval(&self, m: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for &r in self.low.iter().rev() {
            acc = acc * m + Complex64::new(r, 0.0);
        }
        acc
    }

    pub fn eval_derivative(&self, m: Complex64) -> Complex64 {
        let n = self.degree();
        let mut acc = Complex64::new(n as f64, 0.0);
        for k in (1..n).rev() {
            acc = acc * m + Complex64::new(k as f64 * self.low[k], 0.0);
        }
        acc
    }
}

/// Characteristic polynomial of a difference problem.
///
/// Unshifted: m^N + r_{N-1} m^{N-1} + ... + r_0. The shifted form
/// delta^2 x(n-1) + lambda x(n) = 0 gives m^2/(1+m) + lambda = 0, which
/// clears to m^2 + lambda m + lambda.
pub fn char_poly_from_equation(problem: &DifferenceProblem) -> CharPolynomial {
    match problem.shift() {
        Shift::Unshifted => CharPolynomial::new(problem.coefficients().to_vec()),
        Shift::SecondOrderShifted => {
            let lambda = problem.coefficients()[0];
            CharPolynomial::new(vec![lambda, lambda])
        }
    }
}

/// The roots of a characteristic polynomial with multiplicities.
///
/// Ordering is deterministic: real roots ascending, then complex
/// conjugate pairs by ascending imaginary part of the upper member, each
/// pair listed upper (+i beta) first. This fixes the Casoratian sign.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    entries: Vec<(Complex64, usize)>,
}

impl RootSet {
    /// Build a root set directly. Enforces regressivity (|1 + m| above
    /// the floor) and conjugate pairing of complex entries.
    pub fn new(entries: Vec<(Complex64, usize)>) -> Result<Self> {
        for &(m, mult) in &entries {
            assert!(mult > 0, "zero multiplicity");
            if (Complex64::new(1.0, 0.0) + m).norm() <= REGRESSIVITY_FLOOR {
                return Err(Error::NonRegressiveRoot { root: m });
            }
        }
        let set = RootSet { entries };
        set.check_conjugate_pairing()?;
        Ok(set)
    }

    fn check_conjugate_pairing(&self) -> Result<()> {
        for &(m, mult) in &self.entries {
            if m.im != 0.0 {
                let has_partner = self
                    .entries
                    .iter()
                    .any(|&(w, wm)| wm == mult && w == m.conj());
                if !has_partner {
                    return Err(Error::NumericalFailure(format!(
                        "complex root {m} lacks a conjugate partner of equal multiplicity"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[(Complex64, usize)] {
        &self.entries
    }

    /// Sum of multiplicities (the equation order).
    pub fn order(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Expand prod (m - root)^mult; returns the low coefficients
    /// r_0..r_{N-1} of the monic polynomial.
    pub fn monic_low_coefficients(&self) -> Result<Vec<f64>> {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &(root, mult) in &self.entries {
            for _ in 0..mult {
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (i, &c) in coeffs.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= root * c;
                }
                coeffs = next;
            }
        }
        // coeffs[k] multiplies m^k; the leading entry is 1
        coeffs.pop();
        coeffs.into_iter().map(expect_real).collect()
    }
}

/// Find all complex roots with multiplicity clustering.
///
/// Clustering starts at the 1e-8 * (1 + |m|) tolerance and escalates
/// through a short ladder when the tight level produces an inconsistent
/// set: a root of multiplicity k is located by the iteration only to
/// about eps^(1/k), so a smeared multiple root first becomes a valid
/// conjugate-paired cluster at a wider level. Each candidate set must
/// rebuild the input coefficients to relative 1e-8 and leave per-root
/// residuals |p(m)| <= 1e-10 * max(1, |m|^N), so over-merging of
/// genuinely distinct roots is rejected.
pub fn find_roots(poly: &CharPolynomial) -> Result<RootSet> {
    let n = poly.degree();
    let raw: Vec<Complex64> = match n {
        1 => vec![Complex64::new(-poly.low[0], 0.0)],
        2 => quadratic_roots(poly.low[1], poly.low[0]),
        _ => aberth(poly)?,
    };
    let mut last_failure = String::new();
    for level in 0..5 {
        let tol = CLUSTER_TOL * 10f64.powi(level);
        match candidate_root_set(poly, &raw, tol) {
            Ok(set) => return Ok(set),
            Err(Error::NonRegressiveRoot { root }) => {
                return Err(Error::NonRegressiveRoot { root })
            }
            Err(e) => last_failure = e.to_string(),
        }
    }
    Err(Error::NumericalFailure(format!(
        "no consistent root clustering found: {last_failure}"
    )))
}

fn candidate_root_set(poly: &CharPolynomial, raw: &[Complex64], tol: f64) -> Result<RootSet> {
    let n = poly.degree();
    let clustered: Vec<(Complex64, usize)> = cluster(raw, tol)
        .into_iter()
        .map(|(z, mult)| (refine_cluster_root(poly, z, mult), mult))
        .collect();
    let snapped: Vec<(Complex64, usize)> = clustered
        .into_iter()
        .map(|(z, mult)| {
            if z.im.abs() <= tol * (1.0 + z.norm()) {
                (Complex64::new(z.re, 0.0), mult)
            } else {
                (z, mult)
            }
        })
        .collect();
    let paired = pair_conjugates(snapped, tol)?;

    let mut reals: Vec<(Complex64, usize)> = Vec::new();
    let mut uppers: Vec<(Complex64, usize)> = Vec::new();
    for &(m, mult) in &paired {
        if m.im == 0.0 {
            reals.push((m, mult));
        } else if m.im > 0.0 {
            uppers.push((m, mult));
        }
    }
    reals.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    uppers.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));
    let mut entries = reals;
    for (m, mult) in uppers {
        entries.push((m, mult));
        entries.push((m.conj(), mult));
    }

    let total: usize = entries.iter().map(|&(_, m)| m).sum();
    if total != n {
        return Err(Error::NumericalFailure(format!(
            "root multiplicities sum to {total}, expected {n}"
        )));
    }
    for &(m, _) in &entries {
        let scale = 1.0_f64.max(m.norm().powi(n as i32));
        let residual = poly.eval(m).norm();
        if residual > 1e-10 * scale {
            return Err(Error::NumericalFailure(format!(
                "root {m} has residual {residual:e} above tolerance"
            )));
        }
    }
    let set = RootSet::new(entries)?;
    let rebuilt = set.monic_low_coefficients()?;
    for (orig, re) in poly.low.iter().zip(&rebuilt) {
        if (orig - re).abs() > 1e-8 * (1.0 + orig.abs()) {
            return Err(Error::NumericalFailure(format!(
                "clustered roots rebuild coefficient {orig} as {re}"
            )));
        }
    }
    Ok(set)
}

/// Roots of the monic quadratic m^2 + b m + c, with a discriminant snap
/// so that exact squares reliably take the double-root branch.
fn quadratic_roots(b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * c;
    let scale = (b * b).max(c.abs()).max(1.0);
    if disc.abs() <= 1e-12 * scale {
        let r = Complex64::new(-b / 2.0, 0.0);
        return vec![r, r];
    }
    if disc > 0.0 {
        let sq = disc.sqrt();
        // avoid cancellation: compute the larger-magnitude root first
        let q = -0.5 * (b + b.signum() * sq);
        if q == 0.0 {
            // b = 0, c < 0
            let r = (-c).sqrt();
            return vec![Complex64::new(-r, 0.0), Complex64::new(r, 0.0)];
        }
        vec![Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let im = (-disc).sqrt() / 2.0;
        let re = -b / 2.0;
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Simultaneous Aberth-Ehrlich iteration with deterministic starting
/// points; converges quadratically for simple roots and stops on either
/// step size or residual for clustered ones.
fn aberth(poly: &CharPolynomial) -> Result<Vec<Complex64>> {
    let n = poly.degree();
    let radius = 1.0 + poly.low.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        let mut max_residual_ratio = 0.0_f64;
        for k in 0..n {
            let pk = poly.eval(z[k]);
            let dk = poly.eval_derivative(z[k]);
            let scale = 1.0_f64.max(z[k].norm().powi(n as i32));
            max_residual_ratio = max_residual_ratio.max(pk.norm() / scale);
            if pk.norm() == 0.0 {
                continue;
            }
            let newton = if dk.norm() > 0.0 {
                pk / dk
            } else {
                Complex64::new(1e-3, 0.0)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.finv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step <= 1e-14 || max_residual_ratio <= 1e-14 {
            // one guarded Newton refinement per root
            for zk in z.iter_mut() {
                let d = poly.eval_derivative(*zk);
                if d.norm() > 1e-12 {
                    let candidate = *zk - poly.eval(*zk) / d;
                    if poly.eval(candidate).norm() <= poly.eval(*zk).norm() {
                        *zk = candidate;
                    }
                }
            }
            return Ok(z);
        }
    }
    Err(Error::NumericalFailure(
        "root iteration did not converge".into(),
    ))
}

fn eval_coeffs(coeffs: &[f64], m: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * m + Complex64::new(c, 0.0);
    }
    acc
}

fn derivative_coeffs(coeffs: &[f64]) -> Vec<f64> {
    (1..coeffs.len()).map(|j| j as f64 * coeffs[j]).collect()
}

/// A multiplicity-k root of p is a simple root of p^(k-1), where Newton
/// iteration is well conditioned; the smeared cluster mean only locates
/// a multiple root to about eps^(1/k), so refine it there.
fn refine_cluster_root(poly: &CharPolynomial, root: Complex64, mult: usize) -> Complex64 {
    if mult < 2 {
        return root;
    }
    let mut coeffs: Vec<f64> = poly.low.clone();
    coeffs.push(1.0);
    for _ in 1..mult {
        coeffs = derivative_coeffs(&coeffs);
    }
    let slope = derivative_coeffs(&coeffs);
    let mut z = root;
    for _ in 0..40 {
        let d = eval_coeffs(&slope, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = eval_coeffs(&coeffs, z) / d;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Greedy clustering: roots within tol * (1 + |m|) of a cluster mean are
/// merged, so the double-root branch triggers reliably for exact squares.
fn cluster(roots: &[Complex64], base_tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &z in roots {
        let mut placed = false;
        for (mean, count) in clusters.iter_mut() {
            let tol = base_tol * (1.0 + mean.norm().max(z.norm()));
            if (*mean - z).norm() <= tol {
                let total = *count as f64;
                *mean = (*mean * total + z) / (total + 1.0);
                *count += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((z, 1));
        }
    }
    clusters
}

/// Enforce exact conjugate symmetry on complex clusters (coefficients are
/// real, so complex roots come in pairs).
fn pair_conjugates(
    clusters: Vec<(Complex64, usize)>,
    base_tol: f64,
) -> Result<Vec<(Complex64, usize)>> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    let mut used = vec![false; clusters.len()];
    for i in 0..clusters.len() {
        if used[i] {
            continue;
        }
        let (z, mult) = clusters[i];
        if z.im == 0.0 {
            out.push((z, mult));
            used[i] = true;
            continue;
        }
        let mut partner = None;
        for (j, &(w, wmult)) in clusters.iter().enumerate() {
            if j != i && !used[j] && wmult == mult {
                let tol = base_tol * (1.0 + z.norm());
                if (w - z.conj()).norm() <= tol {
                    partner = Some(j);
                    break;
                }
            }
        }
        let Some(j) = partner else {
            return Err(Error::NumericalFailure(format!(
                "complex root {z} lacks a conjugate partner"
            )));
        };
        let symmetrized = (z + clusters[j].0.conj()) / 2.0;
        let upper = if symmetrized.im > 0.0 {
            symmetrized
        } else {
            symmetrized.conj()
        };
        out.push((upper, mult));
        out.push((upper.conj(), mult));
        used[i] = true;
        used[j] = true;
    }
    Ok(out)
}

/// One member of the homogeneous solution basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction {
    pub kind: BasisKind,
    /// Exponent of the (n - a) polynomial factor attached to repeated roots.
    pub power: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisKind {
    /// (n-a)^power * (1 + m)^(n-a) for the root m (real or complex).
    Exponential(Complex64),
    /// (n-a)^power * Re((1 + m)^(n-a)): e_alpha cos_gamma for the pair
    /// m = alpha + i beta, gamma = beta / (1 + alpha).
    CosPair(Complex64),
    /// (n-a)^power * Im((1 + m)^(n-a)): e_alpha sin_gamma.
    SinPair(Complex64),
}

impl BasisFunction {
    pub fn eval(&self, n: i64, origin: i64) -> Complex64 {
        let k = n - origin;
        let poly = if self.power == 0 {
            1.0
        } else {
            (k as f64).powi(self.power as i32)
        };
        let grow = |m: Complex64| (Complex64::new(1.0, 0.0) + m).powi(k as i32);
        match self.kind {
            BasisKind::Exponential(m) => poly * grow(m),
            BasisKind::CosPair(m) => Complex64::new(poly * grow(m).re, 0.0),
            BasisKind::SinPair(m) => Complex64::new(poly * grow(m).im, 0.0),
        }
    }
}

/// N linearly independent homogeneous solutions with their defining roots.
#[derive(Debug, Clone)]
pub struct SolutionBasis {
    origin: i64,
    functions: Vec<BasisFunction>,
    roots: RootSet,
}

impl SolutionBasis {
    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn order(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    /// x_j(n).
    pub fn eval(&self, j: usize, n: i64) -> Complex64 {
        self.functions[j].eval(n, self.origin)
    }

    /// delta^k x_j(n), computed by repeated forward differencing of basis
    /// evaluations.
    pub fn delta_pow(&self, j: usize, k: usize, n: i64) -> Complex64 {
        crate::delta::delta_iter(|m| self.eval(j, m), k, n)
    }

    /// The low coefficients r_0..r_{N-1} of the monic characteristic
    /// polynomial these solutions satisfy.
    pub fn characteristic_low_coefficients(&self) -> Result<Vec<f64>> {
        self.roots.monic_low_coefficients()
    }
}

/// Build the real solution basis from a root set: real roots become delta
/// exponentials, complex pairs become e_alpha cos_gamma / e_alpha
/// sin_gamma, and multiplicity k attaches (n-a)^j factors for j < k.
pub fn build_basis(roots: &RootSet, origin: i64) -> Result<SolutionBasis> {
    let mut functions = Vec::with_capacity(roots.order());
    for &(m, mult) in roots.entries() {
        if m.im == 0.0 {
            for j in 0..mult {
                functions.push(BasisFunction {
                    kind: BasisKind::Exponential(m),
                    power: j as u32,
                });
            }
        } else if m.im > 0.0 {
            // the conjugate entry contributes the same pair of functions
            if (1.0 + m.re).abs() <= REGRESSIVITY_FLOOR {
                return Err(Error::DegenerateComplexPair { root: m });
            }
            for j in 0..mult {
                functions.push(BasisFunction {
                    kind: BasisKind::CosPair(m),
                    power: j as u32,
                });
                functions.push(BasisFunction {
                    kind: BasisKind::SinPair(m),
                    power: j as u32,
                });
            }
        }
    }
    Ok(SolutionBasis {
        origin,
        functions,
        roots: roots.clone(),
    })
}

/// Build the basis of pure delta exponentials e_m(n, a), keeping complex
/// pairs as complex-valued solutions. This is the complex-root path used
/// when the real pair form degenerates (alpha = -1) and for Casoratian
/// work in the roots' own ordering.
pub fn build_exponential_basis(roots: &RootSet, origin: i64) -> Result<SolutionBasis> {
    let mut functions = Vec::with_capacity(roots.order());
    for &(m, mult) in roots.entries() {
        for j in 0..mult {
            functions.push(BasisFunction {
                kind: BasisKind::Exponential(m),
                power: j as u32,
            });
        }
    }
    Ok(SolutionBasis {
        origin,
        functions,
        roots: roots.clone(),
    })
}

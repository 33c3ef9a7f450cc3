//! Membership in the absolute-FEF set: states whose fully entangled fraction
//! stays at or below 1/d under every global unitary.
//!
//! Membership is decided by the largest eigenvalue alone: the supremum of
//! the FEF over the global unitary orbit of ρ equals λ_max(ρ), attained by
//! rotating the top eigenvector onto |ψ⁺>.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fef::{fef, FefOptions};
use crate::matcore::{basis_ket, re, ComplexMatrix, ComplexVector, DensityMatrix};
use crate::random;
use crate::states::max_entangled;

/// Slack used for every comparison against the 1/d threshold.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Spectral membership verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub absolute: bool,
    /// |λ_max − 1/d| ≤ 1e-9; such states are reported as members.
    pub boundary: bool,
    pub lambda_max: f64,
    pub threshold: f64,
}

/// λ_max(ρ) ≤ 1/d (with [`BOUNDARY_TOL`] slack).
pub fn is_absolute_fef(rho: &DensityMatrix) -> Result<Membership> {
    let d = rho.local_dim()?;
    let lambda_max = rho.spectrum().lambda_max();
    Ok(membership(lambda_max, 1.0 / d as f64))
}

pub(crate) fn membership(lambda_max: f64, threshold: f64) -> Membership {
    Membership {
        absolute: lambda_max <= threshold + BOUNDARY_TOL,
        boundary: (lambda_max - threshold).abs() <= BOUNDARY_TOL,
        lambda_max,
        threshold,
    }
}

/// Supremum of the FEF over all global unitaries: λ_max(ρ).
pub fn max_global_fef(rho: &DensityMatrix) -> Result<f64> {
    rho.local_dim()?;
    Ok(rho.spectrum().lambda_max())
}

/// A global unitary U with <ψ⁺|UρU†|ψ⁺> = λ_max(ρ).
///
/// U = Σ_k |m_k><v_k| where v_k are the eigenvectors of ρ in descending
/// order and m_k is an orthonormal basis starting with |ψ⁺>, completed by
/// Gram-Schmidt over the computational basis.
pub fn activating_unitary(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let d = rho.local_dim()?;
    let n = d * d;
    let targets = completed_basis(&max_entangled(d)?);
    let spectrum = rho.spectrum();
    debug_assert_eq!(targets.ncols(), n);
    Ok(targets * spectrum.eigenvectors().adjoint())
}

/// Orthonormal basis (as columns) whose first column is `first`.
fn completed_basis(first: &ComplexVector) -> ComplexMatrix {
    let n = first.len();
    let mut columns: Vec<ComplexVector> = vec![first.clone()];
    for i in 0..n {
        if columns.len() == n {
            break;
        }
        let mut v = basis_ket(n, i);
        // Two passes of modified Gram-Schmidt keep the basis orthonormal to
        // machine precision.
        for _ in 0..2 {
            for col in &columns {
                let proj = col.dotc(&v);
                v -= col * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            columns.push(v / re(norm));
        }
    }
    ComplexMatrix::from_columns(&columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    /// FEF > 1/d already.
    Useful,
    /// FEF ≤ 1/d but λ_max > 1/d: a global unitary can push it above 1/d.
    Activatable,
    /// λ_max ≤ 1/d: no global unitary helps.
    Absolute,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::Useful => "USEFUL",
            Label::Activatable => "ACTIVATABLE",
            Label::Absolute => "ABSOLUTE",
        })
    }
}

/// k-copy nonlocality as far as the FEF criterion can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KCopyVerdict {
    True,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub label: Label,
    pub lambda_max: f64,
    pub fef_value: f64,
    pub threshold: f64,
    pub boundary: bool,
    /// FEF > 1/d (now, or after activation) implies k-copy nonlocality. For
    /// ABSOLUTE states this is false, meaning no conclusion, not locality.
    pub k_copy_nonlocal: bool,
    pub teleportation_useful: bool,
    pub fef_restarts: usize,
    pub fef_converged: bool,
}

impl ClassificationReport {
    pub fn k_copy_verdict(&self) -> KCopyVerdict {
        if self.k_copy_nonlocal {
            KCopyVerdict::True
        } else {
            KCopyVerdict::Unknown
        }
    }
}

/// Three-way classification of a d⊗d state.
pub fn classify(rho: &DensityMatrix, opts: &FefOptions) -> Result<ClassificationReport> {
    let member = is_absolute_fef(rho)?;
    let result = fef(rho, opts)?;
    let threshold = member.threshold;
    let label = if result.value > threshold + BOUNDARY_TOL {
        Label::Useful
    } else if member.absolute {
        Label::Absolute
    } else {
        Label::Activatable
    };
    let fef_on_boundary = (result.value - threshold).abs() <= BOUNDARY_TOL;
    let boundary = match label {
        Label::Absolute => member.boundary,
        Label::Useful => fef_on_boundary,
        Label::Activatable => fef_on_boundary || member.boundary,
    };
    Ok(ClassificationReport {
        label,
        lambda_max: member.lambda_max,
        fef_value: result.value,
        threshold,
        boundary,
        k_copy_nonlocal: label != Label::Absolute,
        teleportation_useful: label == Label::Useful,
        fef_restarts: result.restarts_used,
        fef_converged: result.converged,
    })
}

/// Two-qubit absolute separability: λ1 ≤ λ3 + 2√(λ2 λ4) for a descending spectrum.
pub fn is_absolutely_separable_2q(spectrum: &[f64]) -> Result<bool> {
    if spectrum.len() != 4 {
        return Err(Error::Domain(format!(
            "two-qubit spectrum needs 4 eigenvalues, got {}",
            spectrum.len()
        )));
    }
    if spectrum.iter().any(|l| l.is_nan() || *l < -1e-12) {
        return Err(Error::Domain(format!(
            "spectrum {spectrum:?} has a negative entry"
        )));
    }
    if spectrum.windows(2).any(|w| w[0] < w[1] - 1e-12) {
        return Err(Error::Domain(format!(
            "spectrum {spectrum:?} is not descending"
        )));
    }
    let sum: f64 = spectrum.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("spectrum sums to {sum}, expected 1")));
    }
    let [l1, l2, l3, l4] = [spectrum[0], spectrum[1], spectrum[2], spectrum[3].max(0.0)];
    Ok(l1 <= l3 + 2.0 * (l2 * l4).sqrt() + 1e-12)
}

/// Tr(ρ²).
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Purity thresholds bracketing the absolute-FEF set in d⊗d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityBounds {
    pub d: usize,
    /// max Tr ρ² over λ_max ≤ 1/d; closed form 1/d.
    pub max_purity_absolute: f64,
    /// Same maximum from the seeded random search.
    pub max_purity_numeric: f64,
    /// Maximizing spectrum: d eigenvalues 1/d, the rest zero.
    pub max_spectrum: Vec<f64>,
    /// The maximum is attained.
    pub max_attained: bool,
    /// inf Tr ρ² over λ_max > 1/d; closed form 1/d² + (d−1)/(d²(d+1)).
    pub min_purity_nonabsolute: f64,
    /// Limit of the numeric minima at λ_max = 1/d + ε, extrapolated to ε → 0.
    pub min_purity_numeric: f64,
    /// (ε, numeric minimum at λ_max = 1/d + ε) for ε = 1e-3, 1e-4, 1e-5.
    pub min_sequence: Vec<(f64, f64)>,
    /// Limiting spectrum: 1/d, then 1/(d(d+1)) repeated.
    pub min_spectrum: Vec<f64>,
    /// Always false: the constraint λ_max > 1/d is open.
    pub min_attained: bool,
}

const MIN_EPSILONS: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Solves both purity problems analytically and numerically. `grid` is the
/// number of random moves per search; `seed` fixes the search.
pub fn purity_bounds(d: usize, grid: usize, seed: u64) -> Result<PurityBounds> {
    if d < 2 {
        return Err(Error::Domain(format!(
            "local dimension d = {d} must be at least 2"
        )));
    }
    if grid == 0 {
        return Err(Error::Domain(
            "the random search needs at least one move".into(),
        ));
    }
    let n = d * d;
    let df = d as f64;
    let cap = 1.0 / df;

    let max_purity_absolute = 1.0 / df;
    let mut max_spectrum = vec![0.0; n];
    max_spectrum[..d].iter_mut().for_each(|x| *x = cap);
    let min_purity_nonabsolute = 1.0 / (df * df) + (df - 1.0) / (df * df * (df + 1.0));
    let mut min_spectrum = vec![1.0 / (df * (df + 1.0)); n];
    min_spectrum[0] = cap;

    let mut rng = random::rng(seed, 0);
    let max_purity_numeric = (0..8)
        .map(|_| search_max_purity(n, cap, grid, &mut rng))
        .fold(f64::NEG_INFINITY, f64::max);

    let min_sequence: Vec<(f64, f64)> = MIN_EPSILONS
        .iter()
        .map(|&eps| (eps, search_min_purity(n, cap + eps, grid, &mut rng)))
        .collect();
    let (e1, f1) = min_sequence[1];
    let (e2, f2) = min_sequence[2];
    // Linear extrapolation of f(ε) to ε = 0 from the two smallest ε.
    let min_purity_numeric = (e1 * f2 - e2 * f1) / (e1 - e2);

    Ok(PurityBounds {
        d,
        max_purity_absolute,
        max_purity_numeric,
        max_spectrum,
        max_attained: true,
        min_purity_nonabsolute,
        min_purity_numeric,
        min_sequence,
        min_spectrum,
        min_attained: false,
    })
}

/// Maximizes Σλ² on the simplex with every λ ≤ cap: random pair moves that
/// shift weight from the smaller to the larger entry as far as feasibility
/// allows. Each move never decreases the objective.
fn search_max_purity<R: Rng>(n: usize, cap: f64, moves: usize, rng: &mut R) -> f64 {
    let mut p = random::capped_simplex(n, cap, rng);
    for _ in 0..moves {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let (hi, lo) = if p[i] >= p[j] { (i, j) } else { (j, i) };
        let delta = (cap - p[hi]).min(p[lo]);
        if delta > 0.0 {
            p[hi] += delta;
            p[lo] -= delta;
        }
    }
    p.iter().map(|x| x * x).sum()
}

/// Minimizes Σλ² with λ_1 pinned at `top` and the remaining entries on the
/// scaled simplex below it: random pair averaging, each step non-increasing.
fn search_min_purity<R: Rng>(n: usize, top: f64, moves: usize, rng: &mut R) -> f64 {
    let rest = 1.0 - top;
    let m = n - 1;
    let mut p: Vec<f64> = random::capped_simplex(m, (top / rest).max(1.0 / m as f64), rng)
        .into_iter()
        .map(|x| x * rest)
        .collect();
    // Enough averaging moves to reach the fixed point to machine precision.
    let moves = moves.max(200 * m);
    for _ in 0..moves {
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        if i != j {
            let mean = 0.5 * (p[i] + p[j]);
            p[i] = mean;
            p[j] = mean;
        }
    }
    top * top + p.iter().map(|x| x * x).sum::<f64>()
}

//! Two-party marginals of three-party states and their absolute-FEF
//! membership: can two collaborating parties lift the FEF of their share
//! above 1/d with a joint unitary?

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::absolute::{membership, BOUNDARY_TOL};
use crate::error::{Error, Result};
use crate::matcore::{
    basis_ket, c, partial_trace, projector, re, real_matrix, ComplexMatrix, ComplexVector,
    DensityMatrix, Spectrum,
};
use crate::states::{ghz3, w3};

/// Rounding slack for parameter-space thresholds.
const PARAM_ROUNDING: f64 = 1e-12;

/// Canonical five-amplitude form of a pure three-qubit state:
/// x0|000> + x1 e^{iθ}|100> + x2|101> + x3|110> + x4|111>.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcinParams {
    x: [f64; 5],
    theta: f64,
}

impl AcinParams {
    pub fn new(x: [f64; 5], theta: f64) -> Result<Self> {
        if let Some(v) = x.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(Error::Domain(format!("amplitude {v} must be nonnegative")));
        }
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "squared amplitudes sum to {norm2}, expected 1"
            )));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!(
                "theta = {theta} must lie in [0, pi]"
            )));
        }
        Ok(Self { x, theta })
    }

    /// Parameters of (|000> + |111>)/√2.
    pub fn ghz() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            x: [h, 0.0, 0.0, 0.0, h],
            theta: 0.0,
        }
    }

    pub fn x(&self) -> [f64; 5] {
        self.x
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

pub fn acin_state(params: &AcinParams) -> ComplexVector {
    let [x0, x1, x2, x3, x4] = params.x;
    let mut v = ComplexVector::zeros(8);
    v[0b000] = re(x0);
    v[0b100] = C64Polar::polar(x1, params.theta);
    v[0b101] = re(x2);
    v[0b110] = re(x3);
    v[0b111] = re(x4);
    v
}

struct C64Polar;

impl C64Polar {
    fn polar(r: f64, theta: f64) -> crate::matcore::C64 {
        c(r * theta.cos(), r * theta.sin())
    }
}

/// S_k of the marginal obtained by dropping qubit `drop` (1-based). The
/// marginal eigenvalues are 0, 0, ½(1 ± √S_k).
pub fn acin_s_value(params: &AcinParams, drop: usize) -> Result<f64> {
    let [x0, x1, x2, x3, x4] = params.x;
    let (q0, q1, q2, q3, q4) = (x0 * x0, x1 * x1, x2 * x2, x3 * x3, x4 * x4);
    let cross = 2.0 * params.theta.cos() * x1 * x2 * x3 * x4;
    match drop {
        // 4 det of the Gram matrix of the two branches on qubit 1.
        1 => Ok(1.0 - 4.0 * q0 * (q2 + q3 + q4)),
        2 => Ok(1.0 - 4.0 * (q0 * q3 + q2 * q3 - cross + q0 * q4 + q1 * q4)),
        3 => Ok(1.0 - 4.0 * (q0 * q2 + q2 * q3 - cross + q0 * q4 + q1 * q4)),
        _ => Err(Error::Domain(format!(
            "drop index {drop} must be 1, 2 or 3"
        ))),
    }
}

/// An uncorrected closed form for S_1 that is in circulation for this
/// family, kept to document the discrepancy: it evaluates to −1 at GHZ,
/// where the marginal spectrum {½, ½, 0, 0} forces S_1 = 0.
pub fn acin_s1_uncorrected(params: &AcinParams) -> f64 {
    let [_, x1, x2, x3, x4] = params.x;
    let (q1, q2, q3, q4) = (x1 * x1, x2 * x2, x3 * x3, x4 * x4);
    1.0 + 4.0
        * (q2 + q3 - q4
            + q1 * q4
            + q3 * (-1.0 + q1 + 2.0 * q4)
            + q2 * (-1.0 + q1 + 2.0 * q3 + 2.0 * q4))
}

/// Analysis of one two-party marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalReport {
    /// 1-based index of the traced-out party.
    pub dropped: usize,
    pub marginal: DensityMatrix,
    pub spectrum: Spectrum,
    /// Eigenvalues from the family's closed form, descending.
    pub closed_form_eigenvalues: Vec<f64>,
    /// S_k for Acín-form states.
    pub s_value: Option<f64>,
    pub absolute: bool,
    pub boundary: bool,
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn check_drop(drop: usize) -> Result<()> {
    if !(1..=3).contains(&drop) {
        return Err(Error::Domain(format!(
            "drop index {drop} must be 1, 2 or 3"
        )));
    }
    Ok(())
}

/// Two-party marginal of an Acín-form state. Membership is the equality
/// S_k = 0 (within 1e-9), which always sits on the boundary λ_max = ½.
pub fn acin_marginal(params: &AcinParams, drop: usize) -> Result<MarginalReport> {
    check_drop(drop)?;
    let psi = acin_state(params);
    let marginal = partial_trace(&projector(&psi), &[2, 2, 2], drop - 1)?;
    let marginal = DensityMatrix::new(marginal, 2, 2)?;
    let spectrum = marginal.spectrum();
    let s = acin_s_value(params, drop)?;
    let root = s.max(0.0).sqrt();
    let closed = sorted_desc(vec![0.5 * (1.0 + root), 0.5 * (1.0 - root), 0.0, 0.0]);
    let absolute = s <= BOUNDARY_TOL;
    Ok(MarginalReport {
        dropped: drop,
        marginal,
        spectrum,
        closed_form_eigenvalues: closed,
        s_value: Some(s),
        absolute,
        boundary: absolute,
    })
}

/// p |GHZ><GHZ| + (1 − p) |W><W| on three qubits.
pub fn ghzw_state(p: f64) -> Result<ComplexMatrix> {
    check_unit_interval("p", p)?;
    Ok(projector(&ghz3()) * re(p) + projector(&w3()) * re(1.0 - p))
}

/// The two-qubit marginal of the GHZ-W mixture in closed form (identical
/// for every dropped party).
pub fn ghzw_marginal_matrix(p: f64) -> ComplexMatrix {
    let a = (2.0 + p) / 6.0;
    let b = (1.0 - p) / 3.0;
    let e = p / 2.0;
    real_matrix(
        4,
        4,
        &[
            a, 0.0, 0.0, 0.0, 0.0, b, b, 0.0, 0.0, b, b, 0.0, 0.0, 0.0, 0.0, e,
        ],
    )
}

/// Marginal of the GHZ-W mixture after dropping qubit 3. Eigenvalues
/// {0, 2(1−p)/3, p/2, (2+p)/6}; absolute iff p ≥ ¼.
pub fn ghzw_marginal(p: f64) -> Result<MarginalReport> {
    ghzw_marginal_dropping(p, 3)
}

/// As [`ghzw_marginal`] with an explicit dropped party (1-based).
pub fn ghzw_marginal_dropping(p: f64, drop: usize) -> Result<MarginalReport> {
    check_drop(drop)?;
    let state = ghzw_state(p)?;
    let marginal = DensityMatrix::new(partial_trace(&state, &[2, 2, 2], drop - 1)?, 2, 2)?;
    let spectrum = marginal.spectrum();
    let closed = sorted_desc(vec![0.0, 2.0 * (1.0 - p) / 3.0, p / 2.0, (2.0 + p) / 6.0]);
    // λ_max ≤ ½ exactly when p ≥ ¼. Deciding on p (with rounding slack
    // only) puts the flip at ¼ itself rather than where the 1e-9 slack on
    // λ_max would move it (¼ − 1.5e-9).
    Ok(MarginalReport {
        dropped: drop,
        marginal,
        spectrum,
        closed_form_eigenvalues: closed.clone(),
        s_value: None,
        absolute: p >= 0.25 - PARAM_ROUNDING,
        boundary: membership(closed[0], 0.5).boundary,
    })
}

/// α |GHZ₃><GHZ₃| + β |ψ₃><ψ₃| + (1 − α − β) I/27 on three qutrits, with
/// |ψ₃> the uniform superposition of the six permutations of |012>.
pub fn three_qutrit_state(alpha: f64, beta: f64) -> Result<ComplexMatrix> {
    check_qutrit_domain(alpha, beta)?;
    let idx = |i: usize, j: usize, k: usize| 9 * i + 3 * j + k;
    let mut ghz = ComplexVector::zeros(27);
    for i in 0..3 {
        ghz[idx(i, i, i)] = re(1.0 / 3f64.sqrt());
    }
    let mut perm = ComplexVector::zeros(27);
    for (i, j, k) in [
        (0, 1, 2),
        (0, 2, 1),
        (1, 0, 2),
        (1, 2, 0),
        (2, 0, 1),
        (2, 1, 0),
    ] {
        perm[idx(i, j, k)] = re(1.0 / 6f64.sqrt());
    }
    Ok(projector(&ghz) * re(alpha)
        + projector(&perm) * re(beta)
        + ComplexMatrix::identity(27, 27) * re((1.0 - alpha - beta) / 27.0))
}

fn check_qutrit_domain(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "(alpha, beta) = ({alpha}, {beta}) must satisfy alpha, beta >= 0 and alpha + beta <= 1"
        )));
    }
    Ok(())
}

/// Closed-form two-qutrit marginal of the three-qutrit family.
pub fn three_qutrit_marginal_matrix(alpha: f64, beta: f64) -> ComplexMatrix {
    let diag_same = (1.0 + 2.0 * alpha - beta) / 9.0;
    let diag_diff = (2.0 - 2.0 * alpha + beta) / 18.0;
    let coupling = beta / 6.0;
    let mut m = ComplexMatrix::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            let a = 3 * i + j;
            m[(a, a)] = re(if i == j { diag_same } else { diag_diff });
            if i != j {
                m[(a, 3 * j + i)] = re(coupling);
            }
        }
    }
    m
}

/// Marginal of the three-qutrit family (any dropped party gives the same
/// matrix). Eigenvalues (1−α−β)/9, (1+2α−β)/9, (1−α+2β)/9, each threefold.
pub fn three_qutrit_marginal(alpha: f64, beta: f64) -> Result<MarginalReport> {
    let state = three_qutrit_state(alpha, beta)?;
    let marginal = DensityMatrix::new(partial_trace(&state, &[3, 3, 3], 2)?, 3, 3)?;
    let spectrum = marginal.spectrum();
    let distinct = [
        (1.0 - alpha - beta) / 9.0,
        (1.0 + 2.0 * alpha - beta) / 9.0,
        (1.0 - alpha + 2.0 * beta) / 9.0,
    ];
    let closed = sorted_desc(distinct.iter().flat_map(|&l| [l; 3]).collect());
    let verdict = membership(closed[0], 1.0 / 3.0);
    Ok(MarginalReport {
        dropped: 3,
        marginal,
        spectrum,
        closed_form_eigenvalues: closed,
        s_value: None,
        absolute: verdict.absolute,
        boundary: verdict.boundary,
    })
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} must lie in [0, 1]")));
    }
    Ok(())
}

/// |000> as a column, for the product-state limit.
pub fn product_000() -> ComplexVector {
    basis_ket(8, 0)
}

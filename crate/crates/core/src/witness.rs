//! Teleportation witnesses, their unitary pullbacks S = U†WU, and local
//! operator decompositions for measurement prescriptions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    ensure_unitary, hs_inner, kron, max_asymmetry, re, BasisKind, ComplexMatrix, DensityMatrix,
    OperatorBasis,
};
use crate::states::max_entangled_projector;

/// A Hermitian witness operator with its construction history.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOperator {
    matrix: ComplexMatrix,
    d: usize,
    pullback: Option<ComplexMatrix>,
}

impl WitnessOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Local dimension of the base witness.
    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// The global unitary U when this is U†WU.
    pub fn pullback_unitary(&self) -> Option<&ComplexMatrix> {
        self.pullback.as_ref()
    }
}

/// W = I/d − |ψ⁺><ψ⁺|, nonnegative on every state with FEF ≤ 1/d.
pub fn teleportation_witness(d: usize) -> Result<WitnessOperator> {
    if d < 2 {
        return Err(Error::Domain(format!(
            "local dimension d = {d} must be at least 2"
        )));
    }
    let n = d * d;
    let matrix = ComplexMatrix::identity(n, n) * re(1.0 / d as f64) - max_entangled_projector(d);
    Ok(WitnessOperator {
        matrix,
        d,
        pullback: None,
    })
}

/// S = U† W U. Composes with an existing pullback: (U†W'U) with W' = V†WV
/// records V·U as the total unitary.
pub fn pullback(w: &WitnessOperator, u: &ComplexMatrix) -> Result<WitnessOperator> {
    if u.shape() != w.matrix.shape() {
        return Err(Error::Shape(format!(
            "unitary is {:?}, witness is {:?}",
            u.shape(),
            w.matrix.shape()
        )));
    }
    ensure_unitary(u, 1e-10)?;
    let matrix = u.adjoint() * &w.matrix * u;
    let total = match &w.pullback {
        Some(v) => v * u,
        None => u.clone(),
    };
    Ok(WitnessOperator {
        matrix,
        d: w.d,
        pullback: Some(total),
    })
}

/// Tr(Sρ).
pub fn evaluate(s: &WitnessOperator, rho: &DensityMatrix) -> Result<f64> {
    if s.matrix.shape() != rho.matrix().shape() {
        return Err(Error::Shape(format!(
            "witness is {:?}, state is {:?}",
            s.matrix.shape(),
            rho.matrix().shape()
        )));
    }
    // Tr(Sρ) = Tr(S†ρ) for Hermitian S.
    Ok(hs_inner(&s.matrix, rho.matrix())?.re)
}

/// Real coefficients c_ij of H = Σ c_ij B_i ⊗ B_j over a local operator set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDecomposition {
    pub kind: BasisKind,
    pub labels: Vec<String>,
    /// Row-major: `coefficients[i][j]` multiplies `B_i ⊗ B_j`.
    pub coefficients: Vec<Vec<f64>>,
}

/// One nonzero term of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub left: String,
    pub right: String,
    pub coefficient: f64,
}

impl BasisDecomposition {
    pub fn coefficient(&self, left: &str, right: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == left)?;
        let j = self.labels.iter().position(|l| l == right)?;
        Some(self.coefficients[i][j])
    }

    /// Terms with |c| > `threshold`, in basis order (identity first).
    pub fn terms(&self, threshold: f64) -> Vec<DecompositionTerm> {
        let mut out = Vec::new();
        for (i, row) in self.coefficients.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c.abs() > threshold {
                    out.push(DecompositionTerm {
                        left: self.labels[i].clone(),
                        right: self.labels[j].clone(),
                        coefficient: c,
                    });
                }
            }
        }
        out
    }

    /// Σ c_ij B_i ⊗ B_j.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let basis = self.kind.basis();
        let d = self.kind.local_dim();
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for (i, bi) in basis.elements().iter().enumerate() {
            for (j, bj) in basis.elements().iter().enumerate() {
                let c = self.coefficients[i][j];
                if c != 0.0 {
                    out += kron(bi, bj) * re(c);
                }
            }
        }
        out
    }
}

/// Expands a Hermitian two-party operator over products of local basis
/// elements. Orthogonal bases use c_ij = Tr[(B_i⊗B_j)H]/(‖B_i‖²‖B_j‖²); the
/// overcomplete polarization set uses the minimum-norm solution.
pub fn decompose(h: &ComplexMatrix, kind: BasisKind) -> Result<BasisDecomposition> {
    let d = kind.local_dim();
    if h.nrows() != d * d || h.ncols() != d * d {
        return Err(Error::Shape(format!(
            "{kind} decomposition needs a {n}x{n} operator, got {:?}",
            h.shape(),
            n = d * d
        )));
    }
    let asym = max_asymmetry(h);
    if asym > 1e-10 {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    if kind.is_orthogonal() {
        let basis = kind.basis();
        return Ok(orthogonal_decomposition(h, &basis));
    }

    // Polarization: write H in Pauli coordinates p, then c = (M⁺ ⊗ M⁺) p where
    // column k of M holds the Pauli coordinates of projector k.
    let pauli = OperatorBasis::pauli();
    let pol = kind.basis();
    let p = orthogonal_decomposition(h, &pauli);
    let m = DMatrix::from_fn(pauli.len(), pol.len(), |i, k| {
        hs_inner(&pauli.elements()[i], &pol.elements()[k])
            .expect("same shape")
            .re
            / pauli.normalization()[i]
    });
    let m_pinv = m
        .pseudo_inverse(1e-12)
        .expect("pseudo-inverse of a full-rank 4x6 matrix");
    let p_mat = DMatrix::from_fn(pauli.len(), pauli.len(), |i, j| p.coefficients[i][j]);
    let c = &m_pinv * p_mat * m_pinv.transpose();
    Ok(BasisDecomposition {
        kind,
        labels: pol.labels().iter().map(|s| s.to_string()).collect(),
        coefficients: (0..pol.len())
            .map(|k| (0..pol.len()).map(|l| c[(k, l)]).collect())
            .collect(),
    })
}

fn orthogonal_decomposition(h: &ComplexMatrix, basis: &OperatorBasis) -> BasisDecomposition {
    let elements = basis.elements();
    let norms = basis.normalization();
    let coefficients = (0..elements.len())
        .map(|i| {
            (0..elements.len())
                .map(|j| {
                    let product = kron(&elements[i], &elements[j]);
                    hs_inner(&product, h).expect("shapes checked").re / (norms[i] * norms[j])
                })
                .collect()
        })
        .collect();
    BasisDecomposition {
        kind: basis.kind(),
        labels: basis.labels().iter().map(|s| s.to_string()).collect(),
        coefficients,
    }
}

/// The qutrit witness U3† W U3 written through Gell-Mann products:
/// ⅓(I⊗I − (Λ1⊗Λ6 − Λ2⊗Λ7)/√2 − 2 A⊗B − B⊗C) with
/// A = Λ3/2 + Λ8/(2√3) + I/3, B = −Λ3/2 + Λ8/(2√3) + I/3, C = −Λ8/√3 + I/3.
pub fn qutrit_witness_gellmann_form() -> ComplexMatrix {
    let g = OperatorBasis::gellmann();
    let l = |name: &str| g.element(name).expect("Gell-Mann label").clone();
    let id = ComplexMatrix::identity(3, 3);
    let r3 = 3f64.sqrt();
    let a = l("L3") * re(0.5) + l("L8") * re(1.0 / (2.0 * r3)) + &id * re(1.0 / 3.0);
    let b = l("L3") * re(-0.5) + l("L8") * re(1.0 / (2.0 * r3)) + &id * re(1.0 / 3.0);
    let c = l("L8") * re(-1.0 / r3) + &id * re(1.0 / 3.0);
    let cross = kron(&l("L1"), &l("L6")) - kron(&l("L2"), &l("L7"));
    (kron(&id, &id)
        - cross * re(std::f64::consts::FRAC_1_SQRT_2)
        - kron(&a, &b) * re(2.0)
        - kron(&b, &c))
        * re(1.0 / 3.0)
}

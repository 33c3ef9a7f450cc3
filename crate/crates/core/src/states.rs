//! Constructors for the named state families and the fixed global unitaries
//! used in the worked examples.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    basis_ket, kron, projector, re, real_matrix, unitarity_deviation, ComplexMatrix, ComplexVector,
    DensityMatrix, OperatorBasis,
};

/// A named state family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// 2/9 |φ⁺><φ⁺| + 1/9 |01><01| + 1/9 |10><10| + 5/9 |00><00|.
    X1,
    /// q |φ⁺><φ⁺| + (1 − q) |01><01| on two qubits, q ∈ (0, 1].
    X2 { q: f64 },
    /// q |φ⁺><φ⁺| + (1 − q) |01><01| on two qutrits, q ∈ (0, 1].
    Y3 { q: f64 },
    /// β |ψ⁺><ψ⁺| + (1 − β) I / d², β ∈ [−1/(d²−1), 1].
    Isotropic { d: usize, beta: f64 },
    /// a|00><00| + b|01><01| + c|10><10| + d|11><11|.
    CompDiag { weights: [f64; 4] },
    /// ¼ I⊗I + Σ t_ii σ_i⊗σ_i.
    BellDiag { t: [f64; 3] },
    /// Three-qubit GHZ, split as qubit 1 | qubits 2,3.
    Ghz,
    /// Three-qubit W, split as qubit 1 | qubits 2,3.
    W,
    /// diag(1/2, 3/10, 1/5, 0).
    AfNotAsExample,
    /// |ψ⁺><ψ⁺| in d⊗d.
    MaxEntangled { d: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::X1 => "x1",
            Family::X2 { .. } => "x2",
            Family::Y3 { .. } => "y3",
            Family::Isotropic { .. } => "isotropic",
            Family::CompDiag { .. } => "comp_diag",
            Family::BellDiag { .. } => "bell_diag",
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::AfNotAsExample => "af_not_as_example",
            Family::MaxEntangled { .. } => "max_entangled",
        }
    }

    /// Checks parameters against the family's domain.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::X2 { q } | Family::Y3 { q } => {
                if !(q > 0.0 && q <= 1.0) {
                    return Err(Error::Domain(format!("q = {q} must lie in (0, 1]")));
                }
            }
            Family::Isotropic { d, beta } => {
                check_dim(d)?;
                let lower = -1.0 / (d * d - 1) as f64;
                if !(beta >= lower - 1e-12 && beta <= 1.0 + 1e-12) {
                    return Err(Error::Domain(format!(
                        "beta = {beta} must lie in [-1/(d^2-1), 1] = [{lower}, 1] for d = {d}"
                    )));
                }
            }
            Family::CompDiag { weights } => check_simplex(&weights)?,
            Family::BellDiag { .. } => {}
            Family::MaxEntangled { d } => check_dim(d)?,
            Family::X1 | Family::Ghz | Family::W | Family::AfNotAsExample => {}
        }
        Ok(())
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!(
            "local dimension d = {d} must be at least 2"
        )));
    }
    Ok(())
}

pub(crate) fn check_simplex(weights: &[f64]) -> Result<()> {
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::Domain(format!("weight {w} is negative")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("weights sum to {sum}, expected 1")));
    }
    Ok(())
}

/// |ψ⁺> = Σ_i |ii> / √d.
pub fn max_entangled(d: usize) -> Result<ComplexVector> {
    check_dim(d)?;
    let amp = re(1.0 / (d as f64).sqrt());
    let mut v = ComplexVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    Ok(v)
}

/// |ψ⁺><ψ⁺| as a matrix.
pub(crate) fn max_entangled_projector(d: usize) -> ComplexMatrix {
    projector(&max_entangled(d).expect("d >= 2"))
}

/// Builds the density matrix of a named family member.
pub fn construct(family: &Family) -> Result<DensityMatrix> {
    family.validate()?;
    match *family {
        Family::X1 => {
            let m = max_entangled_projector(2) * re(2.0 / 9.0)
                + diag_projector(4, 1) * re(1.0 / 9.0)
                + diag_projector(4, 2) * re(1.0 / 9.0)
                + diag_projector(4, 0) * re(5.0 / 9.0);
            DensityMatrix::new(m, 2, 2)
        }
        Family::X2 { q } => {
            let m = max_entangled_projector(2) * re(q) + diag_projector(4, 1) * re(1.0 - q);
            DensityMatrix::new(m, 2, 2)
        }
        Family::Y3 { q } => {
            // |0>|1> in two qutrits is index 0*3 + 1.
            let m = max_entangled_projector(3) * re(q) + diag_projector(9, 1) * re(1.0 - q);
            DensityMatrix::new(m, 3, 3)
        }
        Family::Isotropic { d, beta } => {
            let n = d * d;
            let m = max_entangled_projector(d) * re(beta)
                + ComplexMatrix::identity(n, n) * re((1.0 - beta) / n as f64);
            DensityMatrix::new(m, d, d)
        }
        Family::CompDiag { weights } => {
            let m = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
                4,
                weights.iter().map(|&w| re(w)),
            ));
            DensityMatrix::new(m, 2, 2)
        }
        Family::BellDiag { t } => {
            let pauli = OperatorBasis::pauli();
            let p = pauli.elements();
            let mut m = ComplexMatrix::identity(4, 4) * re(0.25);
            for k in 0..3 {
                m += kron(&p[k + 1], &p[k + 1]) * re(t[k]);
            }
            DensityMatrix::new(m, 2, 2).map_err(|e| match e {
                Error::Positivity { min_eigenvalue, .. } => Error::Domain(format!(
                    "correlations {t:?} give a non-positive operator (smallest eigenvalue {min_eigenvalue:.3e})"
                )),
                other => other,
            })
        }
        Family::Ghz => DensityMatrix::from_pure(&ghz3(), 2, 4),
        Family::W => DensityMatrix::from_pure(&w3(), 2, 4),
        Family::AfNotAsExample => construct(&Family::CompDiag {
            weights: [0.5, 0.3, 0.2, 0.0],
        }),
        Family::MaxEntangled { d } => DensityMatrix::from_pure(&max_entangled(d)?, d, d),
    }
}

fn diag_projector(n: usize, index: usize) -> ComplexMatrix {
    projector(&basis_ket(n, index))
}

/// (|000> + |111>)/√2.
pub fn ghz3() -> ComplexVector {
    let mut v = ComplexVector::zeros(8);
    v[0] = re(FRAC_1_SQRT_2);
    v[7] = re(FRAC_1_SQRT_2);
    v
}

/// (|001> + |010> + |100>)/√3.
pub fn w3() -> ComplexVector {
    let a = re(1.0 / 3f64.sqrt());
    let mut v = ComplexVector::zeros(8);
    v[1] = a;
    v[2] = a;
    v[4] = a;
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FixtureId {
    U1,
    U2,
    U3,
}

impl FixtureId {
    pub const ALL: [FixtureId; 3] = [FixtureId::U1, FixtureId::U2, FixtureId::U3];

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "U1" => Some(FixtureId::U1),
            "U2" => Some(FixtureId::U2),
            "U3" => Some(FixtureId::U3),
            _ => None,
        }
    }
}

/// One of the fixed global unitaries that activate X1, X2 and Y3.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureUnitary {
    pub id: FixtureId,
    pub matrix: ComplexMatrix,
}

pub fn fixture_unitary(id: FixtureId) -> FixtureUnitary {
    let s = FRAC_1_SQRT_2;
    let r2 = std::f64::consts::SQRT_2;
    let matrix = match id {
        FixtureId::U1 => real_matrix(
            4,
            4,
            &[
                s, 0.0, 0.0, -s, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, s, 0.0, 0.0, s,
            ],
        ),
        FixtureId::U2 => {
            real_matrix(
                4,
                4,
                &[
                    -1.0, r2, 0.0, -1.0, 0.0, 0.0, 2.0, 0.0, -r2, 0.0, 0.0, r2, 1.0, r2, 0.0, 1.0,
                ],
            ) * re(0.5)
        }
        FixtureId::U3 => {
            let mut m = nalgebra::DMatrix::<f64>::zeros(9, 9);
            m[(0, 0)] = -1.0;
            m[(0, 1)] = r2;
            m[(0, 8)] = -1.0;
            for row in 1..7 {
                m[(row, row + 1)] = 2.0;
            }
            m[(7, 0)] = -r2;
            m[(7, 8)] = r2;
            m[(8, 0)] = 1.0;
            m[(8, 1)] = r2;
            m[(8, 8)] = 1.0;
            m.map(|x| re(x / 2.0))
        }
    };
    let deviation = unitarity_deviation(&matrix);
    assert!(
        deviation <= 1e-12,
        "fixture {id:?} is not unitary ({deviation:e})"
    );
    FixtureUnitary { id, matrix }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{conjugate, max_entry_diff};

    #[test]
    fn max_entangled_vectors() {
        let v2 = max_entangled(2).unwrap();
        assert!(
            (v2[0].re - FRAC_1_SQRT_2).abs() < 1e-15 && (v2[3].re - FRAC_1_SQRT_2).abs() < 1e-15
        );
        assert_eq!(v2[1], re(0.0));
        let v3 = max_entangled(3).unwrap();
        for (i, z) in v3.iter().enumerate() {
            let want = if [0, 4, 8].contains(&i) {
                1.0 / 3f64.sqrt()
            } else {
                0.0
            };
            assert!((z.re - want).abs() < 1e-15 && z.im == 0.0);
        }
        for d in 2..=5 {
            assert!((max_entangled(d).unwrap().norm() - 1.0).abs() < 1e-14);
        }
        assert!(matches!(max_entangled(1), Err(Error::Domain(_))));
    }

    #[test]
    fn x1_entries() {
        let m = construct(&Family::X1).unwrap().into_matrix();
        let n = 1.0 / 9.0;
        let expected = real_matrix(
            4,
            4,
            &[
                6.0 * n,
                0.0,
                0.0,
                n,
                0.0,
                n,
                0.0,
                0.0,
                0.0,
                0.0,
                n,
                0.0,
                n,
                0.0,
                0.0,
                n,
            ],
        );
        assert!(max_entry_diff(&m, &expected) < 1e-15);
    }

    #[test]
    fn isotropic_beta_zero_is_maximally_mixed() {
        let m = construct(&Family::Isotropic { d: 2, beta: 0.0 })
            .unwrap()
            .into_matrix();
        assert!(max_entry_diff(&m, &(ComplexMatrix::identity(4, 4) * re(0.25))) < 1e-15);
    }

    #[test]
    fn x2_pure_limit() {
        let m = construct(&Family::X2 { q: 1.0 }).unwrap().into_matrix();
        assert!(max_entry_diff(&m, &max_entangled_projector(2)) < 1e-15);
    }

    #[test]
    fn af_not_as_example_diagonal() {
        let m = construct(&Family::AfNotAsExample).unwrap().into_matrix();
        let expected = [0.5, 0.3, 0.2, 0.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expected[i] } else { 0.0 };
                assert_eq!(m[(i, j)], re(want));
            }
        }
    }

    #[test]
    fn domain_errors() {
        for bad in [
            Family::X2 { q: 0.0 },
            Family::Y3 { q: 1.5 },
            Family::Isotropic { d: 2, beta: -0.5 },
            Family::Isotropic { d: 1, beta: 0.0 },
            Family::CompDiag {
                weights: [0.5, 0.5, 0.5, 0.0],
            },
            Family::CompDiag {
                weights: [1.2, -0.2, 0.0, 0.0],
            },
            Family::BellDiag {
                t: [0.25, 0.25, 0.25],
            },
        ] {
            assert!(matches!(construct(&bad), Err(Error::Domain(_))), "{bad:?}");
        }
    }

    #[test]
    fn u1_rotates_x1() {
        let x1 = construct(&Family::X1).unwrap();
        let u1 = fixture_unitary(FixtureId::U1).matrix;
        let rotated = conjugate(&u1, x1.matrix());
        let expected = max_entangled_projector(2) * re(5.0 / 9.0)
            + diag_projector(4, 1) * re(1.0 / 9.0)
            + diag_projector(4, 2) * re(1.0 / 9.0)
            + diag_projector(4, 3) * re(2.0 / 9.0);
        assert!(max_entry_diff(&rotated, &expected) < 1e-15);
    }

    #[test]
    fn u2_dagger_maps_bell_to_01() {
        let u2 = fixture_unitary(FixtureId::U2).matrix;
        let out = u2.adjoint() * max_entangled(2).unwrap();
        let diff = (out - basis_ket(4, 1)).norm();
        assert!(diff < 1e-15);
    }

    #[test]
    fn fixtures_unitary() {
        for id in FixtureId::ALL {
            assert!(unitarity_deviation(&fixture_unitary(id).matrix) <= 1e-12);
        }
        assert_eq!(fixture_unitary(FixtureId::U3).matrix.nrows(), 9);
    }
}

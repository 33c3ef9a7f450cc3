//! Two-qubit Bloch parameters and closed-form membership tests for the
//! Bell-diagonal (Class I) and computational-diagonal (Class II) families.
//!
//! Normalization: ρ = ¼ I⊗I + ½ Σ a_i σ_i⊗I + ½ Σ b_j I⊗σ_j + Σ t_ij σ_i⊗σ_j,
//! so a_i = ½ Tr(ρ σ_i⊗I), b_j = ½ Tr(ρ I⊗σ_j), t_ij = ¼ Tr(ρ σ_i⊗σ_j).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hs_inner, kron, re, ComplexMatrix, DensityMatrix, OperatorBasis};
use crate::states::check_simplex;

const CRITERION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochParams {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl BlochParams {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let pauli = OperatorBasis::pauli();
        let p = pauli.elements();
        let id = &p[0];
        let mut m = ComplexMatrix::identity(4, 4) * re(0.25);
        for i in 0..3 {
            m += kron(&p[i + 1], id) * re(0.5 * self.a[i]);
            m += kron(id, &p[i + 1]) * re(0.5 * self.b[i]);
            for j in 0..3 {
                m += kron(&p[i + 1], &p[j + 1]) * re(self.t[i][j]);
            }
        }
        m
    }
}

pub fn bloch_extract(rho: &DensityMatrix) -> Result<BlochParams> {
    if rho.dim_a() != 2 || rho.dim_b() != 2 {
        return Err(Error::Shape(format!(
            "Bloch parameters need a two-qubit state, got {}x{}",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let pauli = OperatorBasis::pauli();
    let p = pauli.elements();
    let expect = |op: ComplexMatrix| hs_inner(&op, rho.matrix()).expect("4x4").re;
    let mut params = BlochParams {
        a: [0.0; 3],
        b: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        params.a[i] = 0.5 * expect(kron(&p[i + 1], &p[0]));
        params.b[i] = 0.5 * expect(kron(&p[0], &p[i + 1]));
        for j in 0..3 {
            params.t[i][j] = 0.25 * expect(kron(&p[i + 1], &p[j + 1]));
        }
    }
    Ok(params)
}

/// Verdict for a Bell-diagonal state ¼I + Σ t_ii σ_i⊗σ_i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassOneVerdict {
    pub member: bool,
    /// ¼(1−4(t11+t22+t33)), ¼(1+4(t11+t22−t33)), ¼(1+4(t11−t22+t33)), ¼(1+4(t22+t33−t11)).
    pub eigenvalues: [f64; 4],
}

/// Member iff max{−(t11+t22+t33), t11+t22−t33, t11−t22+t33, −t11+t22+t33} ≤ ¼.
pub fn class_one_membership(t11: f64, t22: f64, t33: f64) -> Result<ClassOneVerdict> {
    let combos = [
        -(t11 + t22 + t33),
        t11 + t22 - t33,
        t11 - t22 + t33,
        t22 + t33 - t11,
    ];
    let eigenvalues = combos.map(|x| 0.25 * (1.0 + 4.0 * x));
    if let Some(&neg) = eigenvalues.iter().find(|&&l| l < -1e-12) {
        return Err(Error::Domain(format!(
            "correlations ({t11}, {t22}, {t33}) give a non-positive operator (eigenvalue {neg})"
        )));
    }
    let worst = combos.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ClassOneVerdict {
        member: worst <= 0.25 + CRITERION_SLACK,
        eigenvalues,
    })
}

/// a3, b3 and t33 of diag(a, b, c, d).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassTwoComponents {
    pub a3: f64,
    pub b3: f64,
    pub t33: f64,
}

impl ClassTwoComponents {
    pub fn of(weights: [f64; 4]) -> Self {
        let [a, b, c, d] = weights;
        Self {
            a3: (a + b - c - d) / 2.0,
            b3: (a + c - b - d) / 2.0,
            t33: (a - b - c + d) / 4.0,
        }
    }

    /// |a3 + b3| + 2 t33; at most ½ iff max(a, d) ≤ ½.
    pub fn plus_branch(&self) -> f64 {
        (self.a3 + self.b3).abs() + 2.0 * self.t33
    }

    /// |a3 − b3| − 2 t33; at most ½ iff max(b, c) ≤ ½.
    pub fn minus_branch(&self) -> f64 {
        (self.a3 - self.b3).abs() - 2.0 * self.t33
    }
}

/// Membership of a|00><00| + b|01><01| + c|10><10| + d|11><11|. The weights
/// need not be ordered.
pub fn class_two_membership(weights: [f64; 4]) -> Result<bool> {
    check_simplex(&weights)?;
    let comps = ClassTwoComponents::of(weights);
    Ok(comps.plus_branch() <= 0.5 + CRITERION_SLACK
        && comps.minus_branch() <= 0.5 + CRITERION_SLACK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::max_entry_diff;
    use crate::states::{construct, Family};

    #[test]
    fn maximally_mixed_has_zero_parameters() {
        let m = construct(&Family::Isotropic { d: 2, beta: 0.0 }).unwrap();
        let p = bloch_extract(&m).unwrap();
        assert_eq!(p.a, [0.0; 3]);
        assert_eq!(p.b, [0.0; 3]);
        assert_eq!(p.t, [[0.0; 3]; 3]);
    }

    #[test]
    fn bell_state_correlations() {
        let bell = construct(&Family::MaxEntangled { d: 2 }).unwrap();
        let p = bloch_extract(&bell).unwrap();
        let want = [[0.25, 0.0, 0.0], [0.0, -0.25, 0.0], [0.0, 0.0, 0.25]];
        assert!(p.a.iter().chain(&p.b).all(|x| x.abs() < 1e-15));
        for (row, want_row) in p.t.iter().zip(&want) {
            for (x, w) in row.iter().zip(want_row) {
                assert!((x - w).abs() < 1e-15);
            }
        }
        assert!(max_entry_diff(&p.reconstruct(), bell.matrix()) < 1e-12);
    }

    #[test]
    fn comp_diag_a3() {
        let w = [0.4, 0.3, 0.2, 0.1];
        let rho = construct(&Family::CompDiag { weights: w }).unwrap();
        let p = bloch_extract(&rho).unwrap();
        assert!((p.a[2] - (0.4 + 0.3 - 0.2 - 0.1) / 2.0).abs() < 1e-15);
        let comps = ClassTwoComponents::of(w);
        assert!((p.a[2] - comps.a3).abs() < 1e-15);
        assert!((p.b[2] - comps.b3).abs() < 1e-15);
        assert!((p.t[2][2] - comps.t33).abs() < 1e-15);
    }

    #[test]
    fn wrong_dimension() {
        let y3 = construct(&Family::Y3 { q: 0.5 }).unwrap();
        assert!(bloch_extract(&y3).is_err());
    }

    #[test]
    fn class_one_examples() {
        assert!(class_one_membership(0.0, 0.0, 0.0).unwrap().member);
        assert!(!class_one_membership(0.25, -0.25, 0.25).unwrap().member);
        assert!(class_one_membership(0.25, 0.25, 0.25).is_err());
    }

    #[test]
    fn werner_boundary_at_one_third() {
        for k in 0..=30 {
            let p = k as f64 / 30.0;
            let t = -p / 4.0;
            let v = class_one_membership(t, t, t).unwrap();
            assert_eq!(v.member, p <= 1.0 / 3.0 + 1e-12, "p = {p}");
            let lmax = v
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((lmax - (1.0 + 3.0 * p) / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn class_two_examples() {
        assert!(class_two_membership([0.5, 0.3, 0.2, 0.0]).unwrap());
        assert!(!class_two_membership([0.6, 0.2, 0.1, 0.1]).unwrap());
        assert!(class_two_membership([0.25; 4]).unwrap());
        assert!(class_two_membership([0.5, 0.5, 0.5, 0.0]).is_err());
    }

    #[test]
    fn naive_case_reduction_rejects_a_member() {
        // Case a > d, b > c. The spectral criterion accepts; the reduction
        // "max(4a − 1, 1 − 4c) ≤ ½" rejects, since 4a − 1 = 0.8.
        let w = [0.45, 0.25, 0.2, 0.1];
        assert!(class_two_membership(w).unwrap());
        let [a, _, c, _] = w;
        let reduced = (4.0 * a - 1.0).max(1.0 - 4.0 * c);
        assert!(reduced > 0.5);
    }
}

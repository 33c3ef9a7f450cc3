//! Fixed local operator sets: Pauli (qubit), Gell-Mann (qutrit) and the six
//! polarization projectors (qubit, overcomplete).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{c, complex_matrix, projector, re, real_matrix, ComplexMatrix, ComplexVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Pauli,
    GellMann,
    Polarization,
}

impl BasisKind {
    /// Local dimension the basis acts on.
    pub fn local_dim(self) -> usize {
        match self {
            BasisKind::Pauli | BasisKind::Polarization => 2,
            BasisKind::GellMann => 3,
        }
    }

    /// Whether the elements are pairwise Hilbert-Schmidt orthogonal.
    pub fn is_orthogonal(self) -> bool {
        !matches!(self, BasisKind::Polarization)
    }

    pub fn basis(self) -> OperatorBasis {
        match self {
            BasisKind::Pauli => OperatorBasis::pauli(),
            BasisKind::GellMann => OperatorBasis::gellmann(),
            BasisKind::Polarization => OperatorBasis::polarization(),
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Pauli => "pauli",
            BasisKind::GellMann => "gellmann",
            BasisKind::Polarization => "polarization",
        })
    }
}

/// An ordered set of local operators with their labels and squared
/// Hilbert-Schmidt norms.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    kind: BasisKind,
    labels: Vec<&'static str>,
    elements: Vec<ComplexMatrix>,
    normalization: Vec<f64>,
}

impl OperatorBasis {
    fn from_parts(kind: BasisKind, parts: Vec<(&'static str, ComplexMatrix)>) -> Self {
        let normalization = parts
            .iter()
            .map(|(_, m)| m.iter().map(|z| z.norm_sqr()).sum())
            .collect();
        let (labels, elements) = parts.into_iter().unzip();
        Self {
            kind,
            labels,
            elements,
            normalization,
        }
    }

    /// I, σx, σy, σz.
    pub fn pauli() -> Self {
        Self::from_parts(
            BasisKind::Pauli,
            vec![
                ("I", ComplexMatrix::identity(2, 2)),
                ("X", real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])),
                (
                    "Y",
                    complex_matrix(2, 2, &[re(0.0), c(0.0, -1.0), c(0.0, 1.0), re(0.0)]),
                ),
                ("Z", real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0])),
            ],
        )
    }

    /// I, Λ1 … Λ8 in the standard Gell-Mann order.
    pub fn gellmann() -> Self {
        let i = c(0.0, 1.0);
        let o = re(0.0);
        let l = re(1.0);
        let s = 1.0 / 3f64.sqrt();
        Self::from_parts(
            BasisKind::GellMann,
            vec![
                ("I", ComplexMatrix::identity(3, 3)),
                ("L1", complex_matrix(3, 3, &[o, l, o, l, o, o, o, o, o])),
                ("L2", complex_matrix(3, 3, &[o, -i, o, i, o, o, o, o, o])),
                ("L3", complex_matrix(3, 3, &[l, o, o, o, -l, o, o, o, o])),
                ("L4", complex_matrix(3, 3, &[o, o, l, o, o, o, l, o, o])),
                ("L5", complex_matrix(3, 3, &[o, o, -i, o, o, o, i, o, o])),
                ("L6", complex_matrix(3, 3, &[o, o, o, o, o, l, o, l, o])),
                ("L7", complex_matrix(3, 3, &[o, o, o, o, o, -i, o, i, o])),
                (
                    "L8",
                    real_matrix(3, 3, &[s, 0.0, 0.0, 0.0, s, 0.0, 0.0, 0.0, -2.0 * s]),
                ),
            ],
        )
    }

    /// Projectors onto |H>, |V>, |D>, |F>, |L>, |R> with
    /// H = |0>, V = |1>, D/F = (H ± V)/√2, L/R = (H ± iV)/√2.
    pub fn polarization() -> Self {
        let h = FRAC_1_SQRT_2;
        let ket =
            |a: (f64, f64), b: (f64, f64)| ComplexVector::from_vec(vec![c(a.0, a.1), c(b.0, b.1)]);
        Self::from_parts(
            BasisKind::Polarization,
            vec![
                ("H", projector(&ket((1.0, 0.0), (0.0, 0.0)))),
                ("V", projector(&ket((0.0, 0.0), (1.0, 0.0)))),
                ("D", projector(&ket((h, 0.0), (h, 0.0)))),
                ("F", projector(&ket((h, 0.0), (-h, 0.0)))),
                ("L", projector(&ket((h, 0.0), (0.0, h)))),
                ("R", projector(&ket((h, 0.0), (0.0, -h)))),
            ],
        )
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn labels(&self) -> &[&'static str] {
        &self.labels
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Tr(B_i† B_i) for each element.
    pub fn normalization(&self) -> &[f64] {
        &self.normalization
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Element by label, e.g. `"L6"` or `"Z"`.
    pub fn element(&self, label: &str) -> Option<&ComplexMatrix> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .map(|k| &self.elements[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{hs_inner, max_asymmetry};
    use nalgebra::DMatrix;

    fn assert_orthogonal(basis: &OperatorBasis) {
        for (i, a) in basis.elements().iter().enumerate() {
            for (j, b) in basis.elements().iter().enumerate() {
                let ip = hs_inner(a, b).unwrap();
                if i == j {
                    assert!((ip.re - basis.normalization()[i]).abs() < 1e-12);
                } else {
                    assert!(
                        ip.norm() < 1e-12,
                        "{} vs {}",
                        basis.labels()[i],
                        basis.labels()[j]
                    );
                }
            }
        }
    }

    #[test]
    fn pauli_orthogonal() {
        assert_orthogonal(&OperatorBasis::pauli());
        assert_eq!(
            OperatorBasis::pauli().normalization(),
            &[2.0, 2.0, 2.0, 2.0]
        );
    }

    #[test]
    fn gellmann_orthogonal_and_hermitian() {
        let g = OperatorBasis::gellmann();
        assert_orthogonal(&g);
        for m in g.elements() {
            assert_eq!(max_asymmetry(m), 0.0);
        }
        assert!((g.normalization()[0] - 3.0).abs() < 1e-15);
        for n in &g.normalization()[1..] {
            assert!((n - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gellmann_entries_exact() {
        let g = OperatorBasis::gellmann();
        let l2 = g.element("L2").unwrap();
        assert_eq!(l2[(0, 1)], c(0.0, -1.0));
        assert_eq!(l2[(1, 0)], c(0.0, 1.0));
        let l5 = g.element("L5").unwrap();
        assert_eq!(l5[(0, 2)], c(0.0, -1.0));
        assert_eq!(l5[(2, 0)], c(0.0, 1.0));
        let l7 = g.element("L7").unwrap();
        assert_eq!(l7[(1, 2)], c(0.0, -1.0));
        assert_eq!(l7[(2, 1)], c(0.0, 1.0));
        let l8 = g.element("L8").unwrap();
        assert_eq!(l8[(2, 2)], re(-2.0 / 3f64.sqrt()));
    }

    #[test]
    fn polarization_spans_qubit_hermitian_space() {
        // Real coordinates of each projector in the Pauli basis; rank 4 means
        // the six projectors span all 2x2 Hermitian operators.
        let pauli = OperatorBasis::pauli();
        let pol = OperatorBasis::polarization();
        let coords = DMatrix::from_fn(4, 6, |i, k| {
            hs_inner(&pauli.elements()[i], &pol.elements()[k])
                .unwrap()
                .re
                / 2.0
        });
        assert_eq!(coords.rank(1e-10), 4);
        for p in pol.elements() {
            assert!((p.trace().re - 1.0).abs() < 1e-15);
            assert!(crate::matcore::max_entry_diff(&(p * p), p) < 1e-15);
        }
    }
}

use super::{
    conjugate, eig_hermitian, ensure_unitary, max_asymmetry, re, ComplexMatrix, ComplexVector,
    HERMITIAN_TOL,
};
use crate::error::{Error, Result};

/// Eigenvalues (descending) with their orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub(crate) fn new(eigenvalues: Vec<f64>, eigenvectors: ComplexMatrix) -> Self {
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is never empty")
    }

    /// Sum of squared eigenvalues.
    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }

    /// Σ λ_k v_k v_k†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let lambdas = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| re(l)),
        ));
        v * lambdas * v.adjoint()
    }
}

/// A validated bipartite density matrix on C^dim_a ⊗ C^dim_b.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

/// Validates `m` as a density matrix on `dim_a ⊗ dim_b` with tolerance `tol`
/// for hermiticity, trace and positivity. The error names the first violated
/// invariant and its magnitude.
pub fn validate_density(
    m: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    tol: f64,
) -> Result<DensityMatrix> {
    let n = dim_a * dim_b;
    if dim_a == 0 || dim_b == 0 || m.nrows() != n || m.ncols() != n {
        return Err(Error::Shape(format!(
            "expected a {n}x{n} matrix for dims ({dim_a}, {dim_b}), got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let asym = max_asymmetry(&m);
    if asym > tol {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    let deviation = (m.trace() - re(1.0)).norm();
    if deviation > tol {
        return Err(Error::Trace { deviation });
    }
    // Hermiticity was checked against `tol`, which may be looser than the
    // eigensolver's own gate.
    let herm = (&m + m.adjoint()) * re(0.5);
    let min_eigenvalue = eig_hermitian(&herm)?.lambda_min();
    if min_eigenvalue < -tol {
        return Err(Error::Positivity {
            min_eigenvalue,
            violation: -min_eigenvalue,
        });
    }
    Ok(DensityMatrix {
        dim_a,
        dim_b,
        matrix: m,
    })
}

impl DensityMatrix {
    /// Validates with the crate-wide tolerances.
    pub fn new(m: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        validate_density(m, dim_a, dim_b, HERMITIAN_TOL)
    }

    /// `|psi><psi|` for a unit vector `psi`.
    pub fn from_pure(psi: &ComplexVector, dim_a: usize, dim_b: usize) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!(
                "state vector norm is {norm}, expected 1"
            )));
        }
        Self::new(psi * psi.adjoint(), dim_a, dim_b)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Total dimension dim_a * dim_b.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// The common local dimension d of a d⊗d state.
    pub fn local_dim(&self) -> Result<usize> {
        if self.dim_a != self.dim_b {
            return Err(Error::NonSquareBipartition {
                dim_a: self.dim_a,
                dim_b: self.dim_b,
            });
        }
        Ok(self.dim_a)
    }

    pub fn spectrum(&self) -> Spectrum {
        eig_hermitian(&self.matrix).expect("validated density matrices are Hermitian")
    }

    /// Tr(ρ²), computed as the squared Hilbert-Schmidt norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// U ρ U† for a global unitary U.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Shape(format!(
                "unitary is {:?}, state dimension is {}",
                u.shape(),
                self.dim()
            )));
        }
        ensure_unitary(u, 1e-10)?;
        Ok(Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: conjugate(u, &self.matrix),
        })
    }

    /// λ ρ + (1 − λ) σ.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if (self.dim_a, self.dim_b) != (other.dim_a, other.dim_b) {
            return Err(Error::Shape("mixing states of different dimensions".into()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!(
                "mixing weight {lambda} outside [0, 1]"
            )));
        }
        Ok(Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: &self.matrix * re(lambda) + &other.matrix * re(1.0 - lambda),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, max_entry_diff, real_matrix};

    fn x1() -> ComplexMatrix {
        let n = 1.0 / 9.0;
        real_matrix(
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
        )
    }

    #[test]
    fn x1_is_valid() {
        let rho = DensityMatrix::new(x1(), 2, 2).unwrap();
        let lmax = rho.spectrum().lambda_max();
        assert!((lmax - (7.0 + 29f64.sqrt()) / 18.0).abs() < 1e-14);
    }

    #[test]
    fn trace_violation_magnitude() {
        let m = ComplexMatrix::identity(4, 4) * re(0.5);
        match DensityMatrix::new(m, 2, 2) {
            Err(Error::Trace { deviation }) => assert!((deviation - 1.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn positivity_violation_magnitude() {
        let m = real_matrix(
            4,
            4,
            &[
                1.1, 0.0, 0.0, 0.0, 0.0, -0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ],
        );
        match DensityMatrix::new(m, 2, 2) {
            Err(Error::Positivity { violation, .. }) => assert!((violation - 0.1).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hermiticity_violation() {
        let mut m = ComplexMatrix::identity(4, 4) * re(0.25);
        m[(0, 1)] = c(0.0, 0.01);
        assert!(matches!(
            DensityMatrix::new(m, 2, 2),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn shape_violation() {
        let m = ComplexMatrix::identity(4, 4) * re(0.25);
        assert!(matches!(DensityMatrix::new(m, 2, 3), Err(Error::Shape(_))));
    }

    #[test]
    fn spectrum_reconstructs() {
        let s = eig_hermitian(&x1()).unwrap();
        assert!(max_entry_diff(&s.reconstruct(), &x1()) < 1e-12);
        let sum: f64 = s.eigenvalues().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}

//! Dense complex linear algebra at the sizes this crate needs (n <= 81).
//!
//! Matrices are `nalgebra` dense matrices over `Complex<f64>`. Composite
//! indices use row-major lexicographic order: for two qubits the basis is
//! |00>, |01>, |10>, |11>, and for a list of subsystem dimensions the last
//! subsystem varies fastest.

mod basis;
mod density;

pub use basis::{BasisKind, OperatorBasis};
pub use density::{validate_density, DensityMatrix, Spectrum};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Hermiticity tolerance used by every validation in the crate.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-10;
/// Floor on the smallest eigenvalue of a density matrix.
pub const PSD_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Builds a matrix from row-major real entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(
        entries.len(),
        rows * cols,
        "entries length must equal rows*cols"
    );
    ComplexMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| re(x)))
}

/// Builds a matrix from row-major complex entries.
pub fn complex_matrix(rows: usize, cols: usize, entries: &[C64]) -> ComplexMatrix {
    assert_eq!(
        entries.len(),
        rows * cols,
        "entries length must equal rows*cols"
    );
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

/// Computational basis vector |index> in dimension `dim`.
pub fn basis_ket(dim: usize, index: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[index] = re(1.0);
    v
}

/// |v><v|
pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// Kronecker product A ⊗ B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of two column vectors.
pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

/// Hilbert-Schmidt inner product Tr(A^dagger B).
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "hs_inner of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Largest entrywise modulus of `A - A^dagger`. Non-square input yields infinity.
pub fn max_asymmetry(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entrywise modulus of `U^dagger U - I`.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let g = u.adjoint() * u;
    max_entry_diff(&g, &ComplexMatrix::identity(u.nrows(), u.ncols()))
}

/// Largest entrywise modulus of `A - B` (infinity on shape mismatch).
pub fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Checks `u` is unitary within `tol`.
pub fn ensure_unitary(u: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = unitarity_deviation(u);
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// `U M U^dagger`
pub fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u * m * u.adjoint()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Input is checked for hermiticity within [`HERMITIAN_TOL`]; the Hermitian
/// part is decomposed. Within a degenerate eigenspace the returned basis is
/// arbitrary but orthonormal.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<Spectrum> {
    if !h.is_square() {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {:?}",
            h.shape()
        )));
    }
    let asym = max_asymmetry(h);
    if asym > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
        });
    }
    let herm = (h + h.adjoint()) * re(0.5);
    let eig = SymmetricEigen::new(herm);

    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the decomposition deterministic for ties.
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(Spectrum::new(eigenvalues, eigenvectors))
}

/// Eigenvalues of a real symmetric matrix, sorted descending.
pub fn eigvals_real_symmetric(m: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

/// Traces out subsystem `drop` of an operator on a tensor product with
/// subsystem dimensions `dims`. The result acts on the remaining subsystems
/// in their original order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], drop: usize) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Shape(format!(
            "invalid subsystem dimensions {dims:?}"
        )));
    }
    if !m.is_square() || m.nrows() != total {
        return Err(Error::Shape(format!(
            "matrix is {:?} but subsystem dimensions {dims:?} multiply to {total}",
            m.shape()
        )));
    }
    if drop >= dims.len() {
        return Err(Error::Shape(format!(
            "cannot drop subsystem {drop} of {}",
            dims.len()
        )));
    }
    let traced = dims[drop];
    let inner: usize = dims[drop + 1..].iter().product();
    let outer: usize = dims[..drop].iter().product();
    let kept = outer * inner;

    let full_index = |reduced: usize, k: usize| {
        let (o, i) = (reduced / inner, reduced % inner);
        (o * traced + k) * inner + i
    };

    let mut out = ComplexMatrix::zeros(kept, kept);
    for r in 0..kept {
        for col in 0..kept {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..traced {
                acc += m[(full_index(r, k), full_index(col, k))];
            }
            out[(r, col)] = acc;
        }
    }
    Ok(out)
}

/// Matrix exponential `exp(i H)` of a Hermitian `H`, via its eigendecomposition.
pub fn expi_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(h)?;
    let v = spec.eigenvectors();
    let phases = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        spec.eigenvalues().len(),
        spec.eigenvalues().iter().map(|&l| C64::from_polar(1.0, l)),
    ));
    Ok(v * phases * v.adjoint())
}

//! Seeded random sampling of unitaries, spectra and density matrices.
//!
//! Used by the numeric searches and by the property and acceptance tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matcore::{c, kron, re, ComplexMatrix, ComplexVector, DensityMatrix};

/// Deterministic generator for a `(seed, stream)` pair.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Standard normal via Box-Muller.
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// n×n matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| c(normal(rng), normal(rng)))
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase of R's diagonal removed).
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / re(d.norm())
        } else {
            re(1.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random local unitary U_a ⊗ U_b on d⊗d.
pub fn local_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    kron(&unitary(d, rng), &unitary(d, rng))
}

/// Random unit vector.
pub fn pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let v = ComplexVector::from_fn(n, |_, _| c(normal(rng), normal(rng)));
    let norm = v.norm();
    v / re(norm)
}

/// Full-rank random density matrix G G† / Tr(G G†) on d_a⊗d_b.
pub fn density<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim_a * dim_b, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m / re(tr);
    let m = (&m + m.adjoint()) * re(0.5);
    DensityMatrix::new(m, dim_a, dim_b).expect("Wishart matrices are density matrices")
}

/// Density matrix with a random rank between 1 and n, so pure and
/// low-rank states appear as well as full-rank ones.
pub fn density_any_rank<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> DensityMatrix {
    let n = dim_a * dim_b;
    let rank = rng.gen_range(1..=n);
    let g = ComplexMatrix::from_fn(n, rank, |_, _| c(normal(rng), normal(rng)));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m / re(tr);
    let m = (&m + m.adjoint()) * re(0.5);
    DensityMatrix::new(m, dim_a, dim_b).expect("Wishart matrices are density matrices")
}

/// Uniform point on the probability simplex with `n` entries.
pub fn simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Simplex point with every entry at most `cap` (requires `cap * n >= 1`),
/// by rejection with a fallback that mixes toward the uniform point.
pub fn capped_simplex<R: Rng + ?Sized>(n: usize, cap: f64, rng: &mut R) -> Vec<f64> {
    assert!(cap * n as f64 >= 1.0, "cap too small for the simplex");
    for _ in 0..64 {
        let p = simplex(n, rng);
        if p.iter().all(|&x| x <= cap) {
            return p;
        }
    }
    let p = simplex(n, rng);
    let max = p.iter().cloned().fold(0.0, f64::max);
    let uniform = 1.0 / n as f64;
    // Largest t with (1 - t) uniform + t max <= cap.
    let t = if max > uniform {
        ((cap - uniform) / (max - uniform)).min(1.0)
    } else {
        1.0
    };
    p.into_iter().map(|x| (1.0 - t) * uniform + t * x).collect()
}

/// U diag(spectrum) U† for a Haar-random U.
pub fn state_with_spectrum<R: Rng + ?Sized>(
    spectrum: &[f64],
    dim_a: usize,
    dim_b: usize,
    rng: &mut R,
) -> DensityMatrix {
    let n = dim_a * dim_b;
    assert_eq!(spectrum.len(), n);
    let u = unitary(n, rng);
    let d = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        n,
        spectrum.iter().map(|&l| re(l)),
    ));
    let m = &u * d * u.adjoint();
    let m = (&m + m.adjoint()) * re(0.5);
    DensityMatrix::new(m, dim_a, dim_b).expect("rotated spectrum is a density matrix")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, rng);
    (&g + g.adjoint()) * re(0.5)
}

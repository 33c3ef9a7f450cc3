//! Fully entangled fraction
//!
//! F(ρ) = max over local unitaries U of <ψ⁺|(I⊗U†) ρ (I⊗U)|ψ⁺>.
//!
//! Three routes are provided: the canonical overlap at U = I (a lower
//! bound), a seeded multistart coordinate search over U(d), and for two
//! qubits the magic-basis closed form.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    c, eigvals_real_symmetric, expi_hermitian, re, ComplexMatrix, DensityMatrix, C64,
};
use crate::random;
use rand::Rng;

/// Optimizer settings for [`fef`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FefOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Target accuracy on the objective value.
    pub tol: f64,
}

impl FefOptions {
    pub const DEFAULT_TOL: f64 = 1e-8;

    /// Defaults for local dimension `d`: 20 restarts for qubits, 60 otherwise.
    pub fn for_dim(d: usize) -> Self {
        Self {
            restarts: if d == 2 { 20 } else { 60 },
            seed: 0,
            tol: Self::DEFAULT_TOL,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }
}

/// Best objective found and the local unitary achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct FefResult {
    pub value: f64,
    pub optimizer_unitary: ComplexMatrix,
    pub restarts_used: usize,
    pub converged: bool,
}

/// <ψ⁺|ρ|ψ⁺>, the objective at U = I.
pub fn fef_lower_bound(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.local_dim()?;
    let m = rho.matrix();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += m[(i * d + i, j * d + j)].re;
        }
    }
    Ok(acc / d as f64)
}

/// g(U) = <ψ⁺|(I⊗U†) ρ (I⊗U)|ψ⁺> for a d×d unitary U and a d²×d² matrix ρ.
pub fn overlap_objective(rho: &ComplexMatrix, u: &ComplexMatrix) -> f64 {
    let d = u.nrows();
    // (I⊗U)|ψ⁺> has amplitude U[j][i]/√d on |i j>.
    let amp = |a: usize| u[(a % d, a / d)];
    let n = d * d;
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..n {
        let va = amp(a).conj();
        let mut row = C64::new(0.0, 0.0);
        for b in 0..n {
            row += rho[(a, b)] * amp(b);
        }
        acc += va * row;
    }
    acc.re / d as f64
}

/// Fully entangled fraction by multistart coordinate search.
///
/// Restart 0 starts from U = I; restart r > 0 starts from exp(iH) with H drawn
/// from generator coordinates uniform in [-π, π], on its own random stream
/// `(seed, r)`. The best restart wins (ties keep the earliest), so the value
/// is nondecreasing in `restarts`.
pub fn fef(rho: &DensityMatrix, opts: &FefOptions) -> Result<FefResult> {
    let d = rho.local_dim()?;
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if opts.restarts < 1 {
        return Err(Error::Domain(
            "at least one optimizer restart is required".into(),
        ));
    }
    let generators = Generator::all(d);
    let mut best: Option<(ComplexMatrix, f64, bool)> = None;
    for restart in 0..opts.restarts {
        let start = if restart == 0 {
            ComplexMatrix::identity(d, d)
        } else {
            let mut rng = random::rng(opts.seed, restart as u64);
            random_start(d, &generators, &mut rng)
        };
        let (u, value, converged) = local_search(rho.matrix(), start, &generators, opts.tol);
        if best.as_ref().is_none_or(|(_, v, _)| value > *v) {
            best = Some((u, value, converged));
        }
    }
    let (u, _, converged) = best.expect("restarts >= 1");
    let value = overlap_objective(rho.matrix(), &u);
    Ok(FefResult {
        value,
        optimizer_unitary: u,
        restarts_used: opts.restarts,
        converged,
    })
}

/// Two-qubit closed form: largest eigenvalue of the real part of ρ in the
/// magic basis.
pub fn fef_two_qubit_closed_form(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.local_dim()?;
    if d != 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let magic = magic_basis();
    let in_magic = magic.adjoint() * rho.matrix() * &magic;
    let real_part = DMatrix::from_fn(4, 4, |i, j| {
        0.5 * (in_magic[(i, j)].re + in_magic[(j, i)].re)
    });
    Ok(eigvals_real_symmetric(&real_part)[0])
}

/// Columns e1 = (|00>+|11>)/√2, e2 = i(|00>−|11>)/√2, e3 = i(|01>+|10>)/√2, e4 = (|01>−|10>)/√2.
pub fn magic_basis() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = c(0.0, h);
    let r = re(h);
    let o = re(0.0);
    ComplexMatrix::from_row_slice(4, 4, &[r, i, o, o, o, o, i, r, o, o, i, -r, r, -i, o, o])
}

/// Hermitian generator of a one-parameter subgroup of U(d).
#[derive(Debug, Clone, Copy)]
enum Generator {
    /// E_jj
    Phase(usize),
    /// E_jk + E_kj
    Sym(usize, usize),
    /// −i E_jk + i E_kj
    Asym(usize, usize),
}

impl Generator {
    fn all(d: usize) -> Vec<Generator> {
        let mut out: Vec<Generator> = (0..d).map(Generator::Phase).collect();
        for j in 0..d {
            for k in j + 1..d {
                out.push(Generator::Sym(j, k));
                out.push(Generator::Asym(j, k));
            }
        }
        out
    }

    fn matrix(self, d: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(d, d);
        match self {
            Generator::Phase(j) => m[(j, j)] = re(1.0),
            Generator::Sym(j, k) => {
                m[(j, k)] = re(1.0);
                m[(k, j)] = re(1.0);
            }
            Generator::Asym(j, k) => {
                m[(j, k)] = c(0.0, -1.0);
                m[(k, j)] = c(0.0, 1.0);
            }
        }
        m
    }

    /// U · exp(i t G), touching only the affected columns.
    fn right_apply(self, u: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let mut out = u.clone();
        let (cos, sin) = (t.cos(), t.sin());
        match self {
            Generator::Phase(j) => {
                let phase = C64::from_polar(1.0, t);
                out.column_mut(j).iter_mut().for_each(|z| *z *= phase);
            }
            Generator::Sym(j, k) => {
                let is = c(0.0, sin);
                for row in 0..u.nrows() {
                    let (a, b) = (u[(row, j)], u[(row, k)]);
                    out[(row, j)] = a * cos + b * is;
                    out[(row, k)] = a * is + b * cos;
                }
            }
            Generator::Asym(j, k) => {
                for row in 0..u.nrows() {
                    let (a, b) = (u[(row, j)], u[(row, k)]);
                    out[(row, j)] = a * cos - b * sin;
                    out[(row, k)] = a * sin + b * cos;
                }
            }
        }
        out
    }
}

fn random_start<R: Rng>(d: usize, generators: &[Generator], rng: &mut R) -> ComplexMatrix {
    let pi = std::f64::consts::PI;
    let mut h = ComplexMatrix::zeros(d, d);
    for g in generators {
        h += g.matrix(d) * re(rng.gen_range(-pi..pi));
    }
    expi_hermitian(&h).expect("generator combination is Hermitian")
}

const MAX_EVALUATIONS: usize = 200_000;

/// Compass search in exponential coordinates centred at the current iterate:
/// each trial step multiplies U on the right by exp(±i·h·G_k). The step h
/// halves after a sweep with no improvement; the search ends once h drops
/// below 1e-3·√tol, where the remaining objective gain is far below tol.
fn local_search(
    rho: &ComplexMatrix,
    mut u: ComplexMatrix,
    generators: &[Generator],
    tol: f64,
) -> (ComplexMatrix, f64, bool) {
    let mut value = overlap_objective(rho, &u);
    let mut step = 0.5;
    let min_step = 1e-3 * tol.max(f64::EPSILON).sqrt();
    let mut evaluations = 0;
    while step >= min_step {
        let mut improved = false;
        for g in generators {
            for t in [step, -step] {
                let candidate = g.right_apply(&u, t);
                let v = overlap_objective(rho, &candidate);
                evaluations += 1;
                if v > value {
                    u = candidate;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
        if evaluations > MAX_EVALUATIONS {
            return (u, value, false);
        }
    }
    (u, value, true)
}

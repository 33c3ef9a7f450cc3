//! Absolute fully entangled fraction: deciding whether a global unitary can
//! lift the fully entangled fraction of a d⊗d state above the teleportation
//! threshold 1/d, together with the witnesses, activating unitaries, Bloch
//! criteria, purity bounds and tripartite marginals around that question.

pub mod absolute;
pub mod bloch;
pub mod error;
pub mod fef;
pub mod matcore;
pub mod random;
pub mod reproduce;
pub mod states;
pub mod tripartite;
pub mod witness;

pub use absolute::{
    activating_unitary, classify, is_absolute_fef, is_absolutely_separable_2q, max_global_fef,
    purity, purity_bounds, ClassificationReport, KCopyVerdict, Label, Membership, PurityBounds,
    BOUNDARY_TOL,
};
pub use error::{Error, Result};
pub use fef::{fef, fef_lower_bound, fef_two_qubit_closed_form, FefOptions, FefResult};
pub use matcore::{BasisKind, ComplexMatrix, DensityMatrix, Spectrum};
pub use states::{construct, fixture_unitary, Family, FixtureId, FixtureUnitary};
pub use witness::{decompose, evaluate, pullback, teleportation_witness, WitnessOperator};

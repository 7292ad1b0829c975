//! Error trade-off analysis for two-parameter unitary models with commuting
//! generators.
//!
//! A model is a full-rank reference state `ρ0` evolved as
//! `ρ_θ = e^{-i(Xθ¹+Yθ²)} ρ0 e^{i(Xθ¹+Yθ²)}` with `[X, Y] = 0`. Whether the
//! two parameters can be estimated simultaneously without penalty is decided
//! by two scalars derived from the SLD and RLD quantum Fisher information
//! matrices:
//!
//! 1. `δ = J_R,12 - J_R,21`, the antisymmetric part of the RLD matrix — if
//!    it vanishes there is no trade-off at all;
//! 2. `Δ`, measuring whether the RLD hyperbola pokes past the corner of the
//!    SLD box — if positive, the two Cramér–Rao bounds intersect and jointly
//!    shape the attainable error region.
//!
//! The crate provides:
//!
//! - [`qfi`]: the generic pipeline — SLD/RLD matrices, `δ`, `Δ`,
//!   D-invariance, bound intersection points, and a four-way
//!   [`Classification`] for any model of dimension ≤ 8;
//! - [`closed_forms`]: closed expressions for qubit models in Bloch
//!   coordinates, the qutrit `δ`, and a one-parameter qutrit family whose
//!   trade-off region is controlled by a single polynomial `F_ζ(u)` and its
//!   root `u₀(ζ)`;
//! - [`sampler`]: a seeded, byte-reproducible Monte Carlo survey over
//!   random qutrit reference states;
//! - [`linalg`]: the small dense complex-Hermitian kernel (Jacobi
//!   eigensolver) everything above rests on.
//!
//! Closed forms and the generic pipeline deliberately overlap: each result
//! is computed two independent ways and the test suite holds them to tight
//! agreement.

pub mod closed_forms;
pub mod error;
pub mod linalg;
pub mod qfi;
pub mod sampler;

pub use closed_forms::{
    build_reference_state, f_zeta, f_zeta_derivative, family_fisher_quantities,
    qubit_bound_rhs, qubit_fisher_inverses, qutrit_delta_closed, root_u0, single_u_state,
    zeta, FamilyParams, QubitModel, ReferenceStateParams,
};
pub use error::{Error, Result};
pub use linalg::{eig_hermitian, Complex, EigenDecomposition, HermitianMatrix, SquareMatrix};
pub use qfi::{
    pure_state_delta, Classification, DensityMatrix, FisherPair, Herm2, Sym2, TradeoffReport,
    UnitaryModel,
};
pub use sampler::{run_survey, sample_params, SampleConfig, SampleRecord, SampleSummary, SplitMix64};

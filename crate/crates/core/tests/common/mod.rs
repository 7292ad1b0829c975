//! Deterministic random-model generators shared by the integration suites.
//!
//! Everything draws from the crate's own `SplitMix64` so failures reproduce
//! exactly; no test depends on platform or thread-pool randomness.
#![allow(dead_code)]

use qtradeoff_core::closed_forms::QubitModel;
use qtradeoff_core::linalg::{eig_hermitian, Complex, HermitianMatrix, SquareMatrix};
use qtradeoff_core::qfi::{sld_fisher, sld_operators, DensityMatrix, Herm2, Sym2, UnitaryModel};
use qtradeoff_core::sampler::SplitMix64;

pub fn uniform(rng: &mut SplitMix64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.next_f64()
}

/// Standard normal via Box–Muller.
pub fn normal(rng: &mut SplitMix64) -> f64 {
    let r = (2.0 * rng.next_exp()).sqrt();
    r * (std::f64::consts::TAU * rng.next_f64()).cos()
}

pub fn random_complex_matrix(rng: &mut SplitMix64, dim: usize) -> SquareMatrix {
    let entries = (0..dim * dim)
        .map(|_| Complex::new(normal(rng), normal(rng)))
        .collect();
    SquareMatrix::from_entries(dim, entries).unwrap()
}

/// Random Hermitian matrix `(A + A†)/2` with entries of order `amp`.
pub fn random_hermitian(rng: &mut SplitMix64, dim: usize, amp: f64) -> HermitianMatrix {
    let a = random_complex_matrix(rng, dim);
    let sym = a.add(&a.adjoint()).scaled(Complex::new(0.5 * amp, 0.0));
    HermitianMatrix::new(sym).unwrap()
}

/// Random full-rank state: a Wishart part mixed with the maximally mixed
/// state, so every eigenvalue is at least `0.1/dim`.
pub fn random_state(rng: &mut SplitMix64, dim: usize) -> DensityMatrix {
    let a = random_complex_matrix(rng, dim);
    let w = a.mul(&a.adjoint());
    let tr = w.trace().re;
    let mixed = w
        .scaled(Complex::new(0.9 / tr, 0.0))
        .add(&SquareMatrix::identity(dim).unwrap().scaled(Complex::new(0.1 / dim as f64, 0.0)));
    DensityMatrix::new(HermitianMatrix::new(mixed).unwrap()).unwrap()
}

/// Random commuting generator pair: two random diagonals conjugated by one
/// random eigenbasis.
pub fn random_commuting_pair(
    rng: &mut SplitMix64,
    dim: usize,
    amp: f64,
) -> (HermitianMatrix, HermitianMatrix) {
    let basis = qtradeoff_core::linalg::eig_hermitian(&random_hermitian(rng, dim, 1.0))
        .unwrap()
        .eigenvectors;
    let mut diag_in_basis = |_| {
        let d: Vec<f64> = (0..dim).map(|_| uniform(rng, -amp, amp)).collect();
        let m = SquareMatrix::from_diagonal(&d).unwrap().conjugated(&basis);
        HermitianMatrix::new(m).unwrap()
    };
    (diag_in_basis(0), diag_in_basis(1))
}

/// Random full-rank model with commuting generators.
pub fn random_model(rng: &mut SplitMix64, dim: usize) -> UnitaryModel {
    let rho0 = random_state(rng, dim);
    let (x, y) = random_commuting_pair(rng, dim, 2.0);
    UnitaryModel::new(rho0, x, y).unwrap()
}

/// Random full-rank model conditioned on non-degenerate geometry
/// (`det J_S ≥ det_floor`), so inverse-based residual bounds stay meaningful.
///
/// Requires `dim ≥ 3`: a commuting pair of 2×2 Hermitian generators is always
/// affinely dependent, so `J_S` is singular and no regular model exists there.
pub fn random_regular_model(rng: &mut SplitMix64, dim: usize, det_floor: f64) -> UnitaryModel {
    assert!(dim >= 3, "commuting 2x2 generator pairs are always degenerate");
    for _ in 0..20_000 {
        let model = random_model(rng, dim);
        if let Ok(fp) = model.fisher_pair() {
            if fp.j_s.det() >= det_floor {
                return model;
            }
        }
    }
    panic!("no regular model found in 20000 draws at dim {dim}, floor {det_floor}");
}

/// Random regular qubit model lifted to the generic representation; the d = 2
/// counterpart of [`random_regular_model`] (its generators do not commute).
pub fn random_qubit_unitary_model(rng: &mut SplitMix64) -> UnitaryModel {
    random_qubit_model(rng).to_unitary_model().unwrap()
}

/// Fisher matrices computed without any inversion, so degenerate models
/// (singular `J_S`) can still be compared at the matrix level.
pub fn fisher_matrices(model: &UnitaryModel) -> (Sym2, Herm2) {
    let (d1, d2) = model.derivatives();
    let (l1, l2) = sld_operators(model.rho0(), &d1, &d2).unwrap();
    (
        sld_fisher(model.rho0(), &l1, &l2),
        model.rld_fisher().unwrap(),
    )
}

/// The model displaced to `ρ_θ = U ρ0 U†`, `U = e^{-i(Xθ¹+Yθ²)}`, rebuilt
/// from scratch as an independent route to the θ-invariance statement.
pub fn model_at_theta(model: &UnitaryModel, theta: (f64, f64)) -> UnitaryModel {
    let g = model
        .x()
        .scaled(Complex::new(theta.0, 0.0))
        .add(&model.y().scaled(Complex::new(theta.1, 0.0)));
    let eig = eig_hermitian(&HermitianMatrix::new(g).unwrap()).unwrap();
    let u = eig.map_eigenvalues(|l| Complex::from_polar(1.0, -l));
    let rho_theta = HermitianMatrix::new(model.rho0().matrix().matrix().conjugated(&u)).unwrap();
    UnitaryModel::new(
        DensityMatrix::new(rho_theta).unwrap(),
        model.x().clone(),
        model.y().clone(),
    )
    .unwrap()
}

/// Random mixed qubit model with `|s0| ∈ (0.05, 0.95)`, conditioned on
/// `det J_S ≥ 1e-2` so that inverse-level comparisons are well posed.
pub fn random_qubit_model(rng: &mut SplitMix64) -> QubitModel {
    loop {
        let dir = [normal(rng), normal(rng), normal(rng)];
        let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        if n < 1e-6 {
            continue;
        }
        let r = uniform(rng, 0.05, 0.95);
        let s0 = [r * dir[0] / n, r * dir[1] / n, r * dir[2] / n];
        let rand3 = |rng: &mut SplitMix64| {
            [
                uniform(rng, -1.0, 1.0),
                uniform(rng, -1.0, 1.0),
                uniform(rng, -1.0, 1.0),
            ]
        };
        let q = QubitModel::new(
            s0,
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
            rand3(rng),
            rand3(rng),
        )
        .unwrap();
        if q.det_j_s() >= 1e-2 {
            return q;
        }
    }
}

/// Random normalized complex vector.
pub fn random_pure_state(rng: &mut SplitMix64, dim: usize) -> Vec<Complex> {
    loop {
        let v: Vec<Complex> = (0..dim)
            .map(|_| Complex::new(normal(rng), normal(rng)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

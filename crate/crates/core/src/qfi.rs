//! SLD/RLD quantum Fisher information for two-parameter unitary models.
//!
//! A model is a full-rank reference state `ρ0` evolved by
//! `U(θ) = e^{-iXθ¹ - iYθ²}`; both Fisher matrices are evaluated at `θ = 0`,
//! which loses no generality because they are parameter-independent for this
//! family. The module computes the SLD matrix `J_S`, the RLD matrix `J_R`,
//! the asymmetry scalar `δ = J_R,12 - J_R,21`, the intersection discriminant
//! `Δ`, and classifies whether the per-parameter error bounds trade off.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, complex_serde, eig_hermitian, Complex, EigenDecomposition, HermitianMatrix,
    SquareMatrix, POSDEF_FLOOR,
};

/// |δ| below this counts as δ = 0 (Condition 1 fails).
pub const DELTA_ZERO_TOL: f64 = 1e-10;

/// Default max-abs tolerance for the D-invariance test `J_S⁻¹ = Re J_R⁻¹`.
pub const D_INVARIANCE_TOL: f64 = 1e-9;

/// Δ₁/Δ₂ denominators at or below this yield absent values, not infinities.
pub const DENOM_TOL: f64 = 1e-12;

/// 2x2 Fisher determinants at or below this flag a non-regular model.
pub const DET_FLOOR: f64 = 1e-14;

/// Relative counterpart of [`DET_FLOOR`]: determinants at or below
/// `DET_REL_FLOOR·((m11+m22)/2)²` are singular at working precision no matter
/// how large the Fisher entries are. Exactly collapsed models (parallel
/// generators) leave cancellation residue below 1e-15 on this scale, while
/// genuinely two-parameter models stay above 1e-3.
pub const DET_REL_FLOOR: f64 = 1e-12;

/// Eigenvalue-pair floor for the SLD defining equation.
pub const SLD_PAIR_FLOOR: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-10;
const NEG_EIG_TOL: f64 = 1e-12;

/// Real symmetric 2x2 matrix `[[m11, m12], [m12, m22]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl Sym2 {
    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let mid = self.m11 - self.m22;
        0.5 * (self.m11 + self.m22 - (mid * mid + 4.0 * self.m12 * self.m12).sqrt())
    }

    /// Inverse; requires positive definiteness with determinant above both
    /// [`DET_FLOOR`] and its relative form, otherwise the model is
    /// non-regular.
    pub fn inverse(&self) -> Result<Sym2> {
        let det = self.det();
        if self.m11 <= 0.0 || singular_det(det, self.m11, self.m22) {
            return Err(Error::NonRegularModel { det });
        }
        Ok(Sym2 {
            m11: self.m22 / det,
            m12: -self.m12 / det,
            m22: self.m11 / det,
        })
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Sym2) -> f64 {
        (self.m11 - other.m11)
            .abs()
            .max((self.m12 - other.m12).abs())
            .max((self.m22 - other.m22).abs())
    }
}

/// Complex Hermitian 2x2 matrix `[[m11, m12], [conj(m12), m22]]` with real
/// diagonal by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Herm2 {
    pub m11: f64,
    #[serde(with = "complex_serde")]
    pub m12: Complex,
    pub m22: f64,
}

impl Herm2 {
    /// Determinant (real for Hermitian input).
    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12.norm_sqr()
    }

    /// Real part as a symmetric matrix.
    pub fn re(&self) -> Sym2 {
        Sym2 {
            m11: self.m11,
            m12: self.m12.re,
            m22: self.m22,
        }
    }

    /// Inverse; positive definiteness required as for [`Sym2::inverse`].
    pub fn inverse(&self) -> Result<Herm2> {
        let det = self.det();
        if self.m11 <= 0.0 || singular_det(det, self.m11, self.m22) {
            return Err(Error::NonRegularModel { det });
        }
        Ok(Herm2 {
            m11: self.m22 / det,
            m12: -self.m12 / det,
            m22: self.m11 / det,
        })
    }
}

/// Singularity test shared by the 2x2 inverses: absolute floor for
/// zero-scale matrices, relative floor so that cancellation residue in an
/// exactly collapsed model never masquerades as a regular one.
fn singular_det(det: f64, m11: f64, m22: f64) -> bool {
    let mean = 0.5 * (m11 + m22);
    det <= DET_FLOOR || det <= DET_REL_FLOOR * mean * mean
}

/// Density matrix with a cached spectral decomposition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    eigen: EigenDecomposition,
}

impl DensityMatrix {
    /// Validates unit trace (within 1e-10) and positivity (eigenvalues
    /// ≥ -1e-12; small negatives are clamped to zero in the cached spectrum).
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let eigen = eig_hermitian(&matrix)?;
        Self::with_eigen(matrix, eigen)
    }

    /// As [`DensityMatrix::new`] with a precomputed decomposition.
    pub(crate) fn with_eigen(
        matrix: HermitianMatrix,
        mut eigen: EigenDecomposition,
    ) -> Result<Self> {
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NonUnitTrace { trace });
        }
        for l in &mut eigen.eigenvalues {
            if *l < -NEG_EIG_TOL {
                return Err(Error::PositivityViolation { eigenvalue: *l });
            }
            if *l < 0.0 {
                *l = 0.0;
            }
        }
        Ok(Self { matrix, eigen })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    /// Determinant as the product of eigenvalues.
    pub fn det(&self) -> f64 {
        self.eigen.eigenvalues.iter().product()
    }

    /// True when every eigenvalue clears the full-rank floor (1e-10).
    pub fn is_full_rank(&self) -> bool {
        self.eigen.min_eigenvalue() > POSDEF_FLOOR
    }

    /// Inverse from the cached spectrum; rank deficiency is an error.
    pub fn inverse(&self) -> Result<SquareMatrix> {
        let min = self.eigen.min_eigenvalue();
        if min <= POSDEF_FLOOR {
            return Err(Error::RankDeficient { eigenvalue: min });
        }
        Ok(self.eigen.map_eigenvalues(|l| Complex::new(1.0 / l, 0.0)))
    }
}

/// Trade-off classification of a regular model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// δ = 0: the RLD bound adds nothing beyond the SLD bound.
    NoTradeoff,
    /// δ ≠ 0 but Δ ≤ 0: the SLD corner dominates, no intersections.
    SldDominant,
    /// D-invariant model: the RLD bound dominates everywhere.
    RldDominant,
    /// δ ≠ 0 and Δ > 0: the bounds intersect, a non-trivial trade-off exists.
    Intersecting,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::NoTradeoff => "NO_TRADEOFF",
            Classification::SldDominant => "SLD_DOMINANT",
            Classification::RldDominant => "RLD_DOMINANT",
            Classification::Intersecting => "INTERSECTING",
        })
    }
}

/// Full analysis output of [`UnitaryModel::classify`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TradeoffReport {
    /// δ = J_R,12 - J_R,21 (purely imaginary up to numerical residue).
    #[serde(with = "complex_serde")]
    pub delta: Complex,
    /// Δ = |Im J_R^{12}|² - [J_R^{11} - J_S^{11}][J_R^{22} - J_S^{22}]
    /// (superscripts denote inverse-matrix entries).
    pub capital_delta: f64,
    /// Condition 1: δ ≠ 0.
    pub condition1: bool,
    /// Condition 2: Δ > 0.
    pub condition2: bool,
    /// Whether `J_S⁻¹ = Re J_R⁻¹` within [`D_INVARIANCE_TOL`].
    pub d_invariant: bool,
    pub classification: Classification,
    /// Trade-off strength Δ₁ = Δ/(J_S^{22} - J_R^{22}); absent when the
    /// denominator does not exceed [`DENOM_TOL`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta1: Option<f64>,
    /// Trade-off strength Δ₂ = Δ/(J_S^{11} - J_R^{11}); absent as above.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta2: Option<f64>,
    /// Intersection points (V11, V22) of the SLD and RLD bounds;
    /// empty unless the classification is `INTERSECTING`.
    pub intersections: Vec<(f64, f64)>,
}

/// SLD and RLD Fisher matrices of a model together with their inverses.
#[derive(Clone, Copy, Debug)]
pub struct FisherPair {
    pub j_s: Sym2,
    pub j_r: Herm2,
    pub j_s_inv: Sym2,
    pub j_r_inv: Herm2,
}

impl FisherPair {
    /// Assembles the pair from the Fisher matrices, inverting both.
    pub fn new(j_s: Sym2, j_r: Herm2) -> Result<Self> {
        Ok(Self {
            j_s,
            j_r,
            j_s_inv: j_s.inverse()?,
            j_r_inv: j_r.inverse()?,
        })
    }

    /// Assembles the pair from the inverse matrices (closed forms produce
    /// these directly), inverting back to the Fisher matrices.
    pub fn from_inverses(j_s_inv: Sym2, j_r_inv: Herm2) -> Result<Self> {
        Ok(Self {
            j_s: j_s_inv.inverse()?,
            j_r: j_r_inv.inverse()?,
            j_s_inv,
            j_r_inv,
        })
    }

    /// δ recovered from the RLD matrix: `J_R,12 - J_R,21 = 2i·Im J_R,12`.
    pub fn delta(&self) -> Complex {
        Complex::new(0.0, 2.0 * self.j_r.m12.im)
    }

    /// Δ per Condition 2, from the inverse-matrix entries.
    pub fn capital_delta(&self) -> f64 {
        let im = self.j_r_inv.m12.im;
        im * im
            - (self.j_r_inv.m11 - self.j_s_inv.m11) * (self.j_r_inv.m22 - self.j_s_inv.m22)
    }

    /// D-invariance test: `max-abs(J_S⁻¹ - Re J_R⁻¹) < tol`.
    pub fn d_invariance_check(&self, tol: f64) -> bool {
        self.j_s_inv.max_abs_diff(&self.j_r_inv.re()) < tol
    }

    /// Intersection points of the RLD hyperbola with the two SLD lines.
    ///
    /// Requires Condition 1, Δ > 0, and non-D-invariance; each point lies on
    /// one SLD line exactly and on the hyperbola by construction.
    pub fn bound_intersections(&self) -> Result<[(f64, f64); 2]> {
        if self.delta().norm() < DELTA_ZERO_TOL
            || self.d_invariance_check(D_INVARIANCE_TOL)
            || self.capital_delta() <= 0.0
        {
            return Err(Error::NoIntersection);
        }
        let den1 = self.j_s_inv.m11 - self.j_r_inv.m11;
        let den2 = self.j_s_inv.m22 - self.j_r_inv.m22;
        if den1 <= DENOM_TOL || den2 <= DENOM_TOL {
            return Err(Error::NoIntersection);
        }
        let im2 = self.j_r_inv.m12.im * self.j_r_inv.m12.im;
        let p1 = (self.j_s_inv.m11, self.j_r_inv.m22 + im2 / den1);
        let p2 = (self.j_r_inv.m11 + im2 / den2, self.j_s_inv.m22);
        Ok([p1, p2])
    }
}

/// SLD operators `L_i` solving `∂_iρ = ½(L_iρ + ρL_i)`, built in the
/// eigenbasis of `rho0` as `(L_i)_{jk} = 2(∂_iρ)_{jk}/(λ_j + λ_k)`.
pub fn sld_operators(
    rho0: &DensityMatrix,
    d1: &HermitianMatrix,
    d2: &HermitianMatrix,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let n = rho0.dim();
    let lam = rho0.eigenvalues();
    let mut min_pair = f64::INFINITY;
    for j in 0..n {
        for k in 0..n {
            min_pair = min_pair.min(lam[j] + lam[k]);
        }
    }
    if min_pair < SLD_PAIR_FLOOR {
        return Err(Error::RankDeficient {
            eigenvalue: min_pair,
        });
    }
    let v = &rho0.eigen().eigenvectors;
    let vh = v.adjoint();
    let solve = |d: &HermitianMatrix| {
        let mut tilde = vh.mul(d.matrix()).mul(v);
        for j in 0..n {
            for k in 0..n {
                tilde[(j, k)] *= 2.0 / (lam[j] + lam[k]);
            }
        }
        crate::linalg::symmetrize_unchecked(v.mul(&tilde).mul(&vh))
    };
    Ok((solve(d1), solve(d2)))
}

/// SLD Fisher matrix `J_S,ij = Re tr(ρ0·½{L_i, L_j})`.
pub fn sld_fisher(rho0: &DensityMatrix, l1: &HermitianMatrix, l2: &HermitianMatrix) -> Sym2 {
    let r = rho0.matrix().matrix();
    let j11 = r.mul(l1.matrix()).mul(l1.matrix()).trace();
    let j22 = r.mul(l2.matrix()).mul(l2.matrix()).trace();
    let l12 = l1.mul(l2.matrix()).add(&l2.mul(l1.matrix()));
    let j12 = r.mul(&l12).trace() * 0.5;
    let scale = (j11.norm() + j22.norm()).max(1.0);
    debug_assert!(
        j11.im.abs().max(j22.im.abs()).max(j12.im.abs()) < 1e-10 * scale,
        "imaginary residue in SLD Fisher trace"
    );
    Sym2 {
        m11: j11.re,
        m12: j12.re,
        m22: j22.re,
    }
}

/// Quadratic form `⟨ψ|M|ψ⟩`.
fn expectation(psi: &[Complex], m: &SquareMatrix) -> Complex {
    let n = m.dim();
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += psi[i].conj() * m[(i, j)] * psi[j];
        }
    }
    acc
}

/// δ for a pure reference state via the generalized RLD:
/// `δ = 4⟨ψ0|[Y, X]|ψ0⟩`.
pub fn pure_state_delta(
    psi0: &[Complex],
    x: &HermitianMatrix,
    y: &HermitianMatrix,
) -> Result<Complex> {
    if psi0.len() != x.dim() || x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: psi0.len(),
        });
    }
    let norm = psi0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let yx = commutator(y.matrix(), x.matrix())?;
    Ok(expectation(psi0, &yx) * 4.0)
}

/// Two-parameter unitary model at its reference point.
#[derive(Clone, Debug)]
pub struct UnitaryModel {
    rho0: DensityMatrix,
    x: HermitianMatrix,
    y: HermitianMatrix,
    commutation_residual: f64,
}

/// JSON wire form of a model.
#[derive(Serialize, Deserialize)]
struct ModelJson {
    rho0: HermitianMatrix,
    #[serde(rename = "X")]
    x: HermitianMatrix,
    #[serde(rename = "Y")]
    y: HermitianMatrix,
}

impl UnitaryModel {
    /// Validates dimensions and the full-rank requirement on `rho0`; the
    /// generator commutation residual `‖[X,Y]‖_max` is recorded, not policed
    /// (noncommuting generators are legitimate input at the reference point).
    pub fn new(rho0: DensityMatrix, x: HermitianMatrix, y: HermitianMatrix) -> Result<Self> {
        if x.dim() != rho0.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho0.dim(),
                found: x.dim(),
            });
        }
        if y.dim() != rho0.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho0.dim(),
                found: y.dim(),
            });
        }
        let min = rho0.eigen().min_eigenvalue();
        if min <= POSDEF_FLOOR {
            return Err(Error::RankDeficient { eigenvalue: min });
        }
        let commutation_residual = commutator(x.matrix(), y.matrix())?.max_abs();
        Ok(Self {
            rho0,
            x,
            y,
            commutation_residual,
        })
    }

    /// Parses the `{"rho0": .., "X": .., "Y": ..}` encoding and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let mj: ModelJson = serde_json::from_str(text)?;
        Self::new(DensityMatrix::new(mj.rho0)?, mj.x, mj.y)
    }

    /// Serializes to the `{"rho0": .., "X": .., "Y": ..}` encoding.
    pub fn to_json(&self) -> String {
        let mj = ModelJson {
            rho0: self.rho0.matrix().clone(),
            x: self.x.clone(),
            y: self.y.clone(),
        };
        serde_json::to_string_pretty(&mj).expect("model serialization cannot fail")
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn x(&self) -> &HermitianMatrix {
        &self.x
    }

    pub fn y(&self) -> &HermitianMatrix {
        &self.y
    }

    /// Recorded `‖[X,Y]‖_max`.
    pub fn commutation_residual(&self) -> f64 {
        self.commutation_residual
    }

    /// State derivatives at the reference point: `∂_iρ|₀ = -i[X_i, ρ0]`.
    pub fn derivatives(&self) -> (HermitianMatrix, HermitianMatrix) {
        let minus_i = Complex::new(0.0, -1.0);
        let d = |g: &HermitianMatrix| {
            let c = commutator(g.matrix(), self.rho0.matrix().matrix())
                .expect("dimensions validated at construction");
            crate::linalg::symmetrize_unchecked(c.scaled(minus_i))
        };
        (d(&self.x), d(&self.y))
    }

    /// RLD Fisher matrix `J_R,ij = -tr([X_j, ρ0][X_i, ρ0] ρ0⁻¹)`.
    pub fn rld_fisher(&self) -> Result<Herm2> {
        let r = self.rho0.matrix().matrix();
        let rinv = self.rho0.inverse()?;
        let cx = commutator(self.x.matrix(), r)?;
        let cy = commutator(self.y.matrix(), r)?;
        let entry = |a: &SquareMatrix, b: &SquareMatrix| -a.mul(b).mul(&rinv).trace();
        let j11 = entry(&cx, &cx);
        let j22 = entry(&cy, &cy);
        let j12 = entry(&cy, &cx);
        let j21 = entry(&cx, &cy);
        let scale = (j11.norm() + j22.norm()).max(1.0);
        debug_assert!(
            (j12 - j21.conj()).norm() < 1e-10 * scale,
            "RLD Fisher lost Hermiticity"
        );
        Ok(Herm2 {
            m11: j11.re,
            m12: (j12 + j21.conj()) * 0.5,
            m22: j22.re,
        })
    }

    /// δ via its defining trace, `δ = tr([[X, ρ0], [Y, ρ0]] ρ0⁻¹)`;
    /// purely imaginary up to numerical residue.
    pub fn delta(&self) -> Result<Complex> {
        let r = self.rho0.matrix().matrix();
        let rinv = self.rho0.inverse()?;
        let cx = commutator(self.x.matrix(), r)?;
        let cy = commutator(self.y.matrix(), r)?;
        Ok(commutator(&cx, &cy)?.mul(&rinv).trace())
    }

    /// Both Fisher matrices and their inverses.
    pub fn fisher_pair(&self) -> Result<FisherPair> {
        let (d1, d2) = self.derivatives();
        let (l1, l2) = sld_operators(&self.rho0, &d1, &d2)?;
        let j_s = sld_fisher(&self.rho0, &l1, &l2);
        let j_r = self.rld_fisher()?;
        FisherPair::new(j_s, j_r)
    }

    /// Conditions 1 and 2, D-invariance, classification, strengths, and
    /// intersection points in one report.
    pub fn classify(&self) -> Result<TradeoffReport> {
        let fp = self.fisher_pair()?;
        let delta = self.delta()?;
        let condition1 = delta.norm() >= DELTA_ZERO_TOL;
        let capital_delta = fp.capital_delta();
        let condition2 = capital_delta > 0.0;
        let d_invariant = fp.d_invariance_check(D_INVARIANCE_TOL);
        let classification = if !condition1 {
            Classification::NoTradeoff
        } else if d_invariant {
            Classification::RldDominant
        } else if condition2 {
            Classification::Intersecting
        } else {
            Classification::SldDominant
        };
        let den1 = fp.j_s_inv.m11 - fp.j_r_inv.m11;
        let den2 = fp.j_s_inv.m22 - fp.j_r_inv.m22;
        let delta1 = (den2 > DENOM_TOL).then(|| capital_delta / den2);
        let delta2 = (den1 > DENOM_TOL).then(|| capital_delta / den1);
        let intersections = if classification == Classification::Intersecting {
            fp.bound_intersections()?.to_vec()
        } else {
            Vec::new()
        };
        Ok(TradeoffReport {
            delta,
            capital_delta,
            condition1,
            condition2,
            d_invariant,
            classification,
            delta1,
            delta2,
            intersections,
        })
    }

    /// Fisher pair recomputed at `ρ_θ = U ρ0 U†` with `U = e^{-i(Xθ¹+Yθ²)}`
    /// evaluated by eigendecomposition (exact for commuting generators, the
    /// regime of the θ-independence property).
    pub fn fisher_theta_invariance(&self, theta: (f64, f64)) -> Result<FisherPair> {
        let g = self
            .x
            .scaled(Complex::new(theta.0, 0.0))
            .add(&self.y.scaled(Complex::new(theta.1, 0.0)));
        let eig = eig_hermitian(&crate::linalg::symmetrize_unchecked(g))?;
        let u = eig.map_eigenvalues(|l| Complex::from_polar(1.0, -l));
        let rho_theta = self.rho0.matrix().matrix().conjugated(&u);
        let dm = DensityMatrix::new(crate::linalg::symmetrize_unchecked(rho_theta))?;
        UnitaryModel::new(dm, self.x.clone(), self.y.clone())?.fisher_pair()
    }
}

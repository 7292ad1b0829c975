//! Closed-form formulas: qubit Bloch-vector Fisher inverses, the qutrit δ,
//! and the one-parameter reference family with its geometric parameter ζ,
//! polynomial `F_ζ(u)`, trade-off strengths, and root `u₀(ζ)`.
//!
//! Every formula here has a generic counterpart in [`crate::qfi`]; the two
//! routes agree to tight tolerances and cross-validate each other.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, Complex, HermitianMatrix, SquareMatrix};
use crate::qfi::{DensityMatrix, FisherPair, Herm2, Sym2, UnitaryModel, DET_FLOOR, DET_REL_FLOOR};

const ONE_VEC: [f64; 3] = [1.0, 1.0, 1.0];
const THIRD: f64 = 1.0 / 3.0;

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn all_finite(v: [f64; 3]) -> bool {
    v.iter().all(|c| c.is_finite())
}

/// Hermitian generator `c0·I + v·σ` in the Pauli basis.
pub fn pauli_operator(c0: f64, v: [f64; 3]) -> Result<HermitianMatrix> {
    if !c0.is_finite() || !all_finite(v) {
        return Err(Error::NonFinite);
    }
    HermitianMatrix::new(SquareMatrix::from_entries(
        2,
        vec![
            Complex::new(c0 + v[2], 0.0),
            Complex::new(v[0], -v[1]),
            Complex::new(v[0], v[1]),
            Complex::new(c0 - v[2], 0.0),
        ],
    )?)
}

/// Qubit state `ρ0 = (I + s0·σ)/2`; requires `|s0| < 1` strictly.
pub fn qubit_state(s0: [f64; 3]) -> Result<DensityMatrix> {
    if !all_finite(s0) {
        return Err(Error::NonFinite);
    }
    let norm = dot(s0, s0).sqrt();
    if norm >= 1.0 {
        return Err(Error::DomainViolation {
            name: "bloch vector norm",
            value: norm,
            domain: "[0, 1)",
        });
    }
    DensityMatrix::new(pauli_operator(1.0, s0)?.matrix().scaled(Complex::new(0.5, 0.0)).try_into()?)
}

/// Diagonal generator `diag(values)` as a Hermitian matrix.
pub fn diagonal_generator(values: &[f64]) -> Result<HermitianMatrix> {
    HermitianMatrix::from_diagonal(values)
}

/// Qubit model in Bloch coordinates: `ρ0 = (I + s0·σ)/2`,
/// `X = x0·I + x·σ`, `Y = y0·I + y·σ`.
#[derive(Clone, Copy, Debug)]
pub struct QubitModel {
    pub s0: [f64; 3],
    pub x0: f64,
    pub y0: f64,
    pub x: [f64; 3],
    pub y: [f64; 3],
}

impl QubitModel {
    pub fn new(s0: [f64; 3], x0: f64, y0: f64, x: [f64; 3], y: [f64; 3]) -> Result<Self> {
        if !all_finite(s0) || !all_finite(x) || !all_finite(y) || !x0.is_finite() || !y0.is_finite()
        {
            return Err(Error::NonFinite);
        }
        let norm = dot(s0, s0).sqrt();
        if norm >= 1.0 {
            return Err(Error::DomainViolation {
                name: "bloch vector norm",
                value: norm,
                domain: "[0, 1)",
            });
        }
        Ok(Self { s0, x0, y0, x, y })
    }

    /// `det J_S = 16 s0² [s0·(x×y)]²`.
    pub fn det_j_s(&self) -> f64 {
        let trip = dot(self.s0, cross(self.x, self.y));
        16.0 * dot(self.s0, self.s0) * trip * trip
    }

    /// The same model as matrices, for the generic pipeline.
    pub fn to_unitary_model(&self) -> Result<UnitaryModel> {
        UnitaryModel::new(
            qubit_state(self.s0)?,
            pauli_operator(self.x0, self.x)?,
            pauli_operator(self.y0, self.y)?,
        )
    }
}

/// Detects a collapsed qubit geometry (`x ∥ y`, `s0 ⊥ x×y`, or `s0 = 0`)
/// with the same absolute-plus-relative determinant rule the generic
/// pipeline applies, so both routes reject the same inputs. The closed
/// `J_S` diagonal is `4(x×s0)²`, `4(y×s0)²`.
fn qubit_singular_det(q: &QubitModel) -> Option<f64> {
    let det = q.det_j_s();
    let xs = cross(q.x, q.s0);
    let ys = cross(q.y, q.s0);
    let mean = 2.0 * (dot(xs, xs) + dot(ys, ys));
    (det <= DET_FLOOR || det <= DET_REL_FLOOR * mean * mean).then_some(det)
}

/// Closed-form qubit Fisher inverses.
///
/// `J_S⁻¹ = (4/det J_S)·[[(y×s0)², -(x×s0)·(y×s0)], [·, (x×s0)²]]` and
/// `J_R⁻¹ = J_S⁻¹ - (4/det J_S)·i·s0²·[s0·(x×y)]·[[0, 1], [-1, 0]]`, so
/// `Re J_R⁻¹ = J_S⁻¹` by construction (the qubit model is D-invariant).
pub fn qubit_fisher_inverses(q: &QubitModel) -> Result<FisherPair> {
    if let Some(det) = qubit_singular_det(q) {
        return Err(Error::NonRegularModel { det });
    }
    let det = q.det_j_s();
    let xs = cross(q.x, q.s0);
    let ys = cross(q.y, q.s0);
    let j_s_inv = Sym2 {
        m11: 4.0 * dot(ys, ys) / det,
        m12: -4.0 * dot(xs, ys) / det,
        m22: 4.0 * dot(xs, xs) / det,
    };
    let trip = dot(q.s0, cross(q.x, q.y));
    let im = -4.0 * dot(q.s0, q.s0) * trip / det;
    let j_r_inv = Herm2 {
        m11: j_s_inv.m11,
        m12: Complex::new(j_s_inv.m12, im),
        m22: j_s_inv.m22,
    };
    FisherPair::from_inverses(j_s_inv, j_r_inv)
}

/// Right-hand sides of the scalar bounds `V11·V22 ≥ RHS` for the qubit:
/// Nagaoka `1/det J_S` versus RLD `s0²/det J_S`. The Nagaoka bound is
/// strictly tighter since `s0² < 1`.
pub fn qubit_bound_rhs(q: &QubitModel) -> Result<(f64, f64)> {
    if let Some(det) = qubit_singular_det(q) {
        return Err(Error::NonRegularModel { det });
    }
    Ok((1.0 / q.det_j_s(), dot(q.s0, q.s0) / q.det_j_s()))
}

/// Closed-form qutrit δ for diagonal generators `X = diag(x)`, `Y = diag(y)`:
/// `δ = (det ρ0)⁻¹ (ρ12ρ23ρ31 - ρ21ρ32ρ13) [(y×x)·1]`.
pub fn qutrit_delta_closed(rho0: &DensityMatrix, x: [f64; 3], y: [f64; 3]) -> Result<Complex> {
    if rho0.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: rho0.dim(),
        });
    }
    if !rho0.is_full_rank() {
        return Err(Error::RankDeficient {
            eigenvalue: rho0.eigen().min_eigenvalue(),
        });
    }
    let m = rho0.matrix();
    let cyc = m[(0, 1)] * m[(1, 2)] * m[(2, 0)];
    // ρ12ρ23ρ31 - ρ21ρ32ρ13 = cyc - conj(cyc) = 2i·Im(cyc).
    let asym = Complex::new(0.0, 2.0 * cyc.im);
    Ok(asym * (dot(cross(y, x), ONE_VEC) / rho0.det()))
}

/// Geometric parameter `ζ = [1·(x×y)]² / ((1×x)² (1×y)²) ∈ [0, 1/3]`.
pub fn zeta(x: [f64; 3], y: [f64; 3]) -> Result<f64> {
    if !all_finite(x) || !all_finite(y) {
        return Err(Error::NonFinite);
    }
    let xi = cross(ONE_VEC, x);
    let eta = cross(ONE_VEC, y);
    let xi_sq = dot(xi, xi);
    let eta_sq = dot(eta, eta);
    if xi_sq == 0.0 || eta_sq == 0.0 {
        return Err(Error::DegenerateGeometry {
            reason: "generator proportional to (1,1,1)",
        });
    }
    let trip = dot(ONE_VEC, cross(x, y));
    let z = trip * trip / (xi_sq * eta_sq);
    debug_assert!(z < THIRD + 1e-9, "zeta exceeded its analytic bound");
    // The analytic bound ζ ≤ 1/3 can be overshot only by rounding; clamp.
    Ok(z.min(THIRD))
}

fn check_zeta_domain(z: f64) -> Result<()> {
    if !(z > 0.0 && z <= THIRD) {
        return Err(Error::DomainViolation {
            name: "zeta",
            value: z,
            domain: "(0, 1/3]",
        });
    }
    Ok(())
}

/// `F_ζ(u) = 16ζ(3u² - 7u + 2)² - u(3u² - 9u + 8)²` on the closed box
/// `0 < ζ ≤ 1/3`, `0 ≤ u ≤ 1/3`. Δ, Δ₁, Δ₂ all share its sign.
pub fn f_zeta(zeta: f64, u: f64) -> Result<f64> {
    check_zeta_domain(zeta)?;
    if !(0.0..=THIRD).contains(&u) {
        return Err(Error::DomainViolation {
            name: "u",
            value: u,
            domain: "[0, 1/3]",
        });
    }
    let a = 3.0 * u * u - 7.0 * u + 2.0;
    let b = 3.0 * u * u - 9.0 * u + 8.0;
    Ok(16.0 * zeta * a * a - u * b * b)
}

/// Derivatives `F_ζ^{(n)}(u)` for `n ∈ {1, 2, 3, 4}`.
pub fn f_zeta_derivative(n: u32, zeta: f64, u: f64) -> Result<f64> {
    check_zeta_domain(zeta)?;
    if !(0.0..=THIRD).contains(&u) {
        return Err(Error::DomainViolation {
            name: "u",
            value: u,
            domain: "[0, 1/3]",
        });
    }
    let z = zeta;
    match n {
        1 => Ok(-45.0 * u.powi(4) - 64.0 * (1.0 + 7.0 * z)
            + 72.0 * u.powi(3) * (3.0 + 8.0 * z)
            + 32.0 * u * (9.0 + 61.0 * z)
            - 9.0 * u * u * (43.0 + 224.0 * z)),
        2 => Ok(-180.0 * u.powi(3) + 216.0 * u * u * (3.0 + 8.0 * z)
            - 18.0 * u * (43.0 + 224.0 * z)
            + 32.0 * (9.0 + 61.0 * z)),
        3 => Ok(-540.0 * u * u + 432.0 * u * (3.0 + 8.0 * z) - 18.0 * (43.0 + 224.0 * z)),
        4 => Ok(-1080.0 * u + 432.0 * (3.0 + 8.0 * z)),
        _ => Err(Error::DomainViolation {
            name: "derivative order",
            value: n as f64,
            domain: "{1, 2, 3, 4}",
        }),
    }
}

/// Unique root of `F_ζ` on `(0, 1/3)` by bisection, using the guaranteed
/// bracket `F_ζ(0) = 64ζ > 0`, `F_ζ(1/3) = -256/27 < 0`.
pub fn root_u0(zeta: f64, tol: f64) -> Result<f64> {
    check_zeta_domain(zeta)?;
    if !(tol >= 1e-14) {
        return Err(Error::DomainViolation {
            name: "tol",
            value: tol,
            domain: "[1e-14, inf)",
        });
    }
    let (mut lo, mut hi) = (0.0, THIRD);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f_zeta(zeta, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One-parameter family configuration: perturbation strength `u`, diagonal
/// generator vectors, and the derived geometry `ζ`, `|ξ|² = (1×x)²`,
/// `|η|² = (1×y)²`.
#[derive(Clone, Copy, Debug)]
pub struct FamilyParams {
    pub u: f64,
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub zeta: f64,
    pub xi_sq: f64,
    pub eta_sq: f64,
}

impl FamilyParams {
    /// Validates `0 < u < 1/3` and non-degenerate geometry (`ζ > 0`).
    pub fn new(u: f64, x: [f64; 3], y: [f64; 3]) -> Result<Self> {
        if !(u > 0.0 && u < THIRD) {
            return Err(Error::DomainViolation {
                name: "u",
                value: u,
                domain: "(0, 1/3)",
            });
        }
        let z = zeta(x, y)?;
        if z == 0.0 {
            return Err(Error::DegenerateGeometry {
                reason: "zeta = 0: the model collapses to one parameter",
            });
        }
        let xi = cross(ONE_VEC, x);
        let eta = cross(ONE_VEC, y);
        Ok(Self {
            u,
            x,
            y,
            zeta: z,
            xi_sq: dot(xi, xi),
            eta_sq: dot(eta, eta),
        })
    }

    /// The family as a concrete model (single-u state, diagonal generators).
    pub fn to_unitary_model(&self) -> Result<UnitaryModel> {
        UnitaryModel::new(
            single_u_state(self.u)?,
            diagonal_generator(&self.x)?,
            diagonal_generator(&self.y)?,
        )
    }
}

/// Family trade-off quantities `(Δ, Δ₁, Δ₂)` for explicit geometry factors.
///
/// `Δ  = 9 F_ζ(u) / (16 ζ² |ξ|² |η|² (2-u)² u (u²-7u+4)²)`,
/// `Δ₁ = 3 F_ζ(u) / (4 ζ |ξ|² u (2-u) (u²-7u+4) (3u²-9u+8))`,
/// `Δ₂ = 3 F_ζ(u) / (4 ζ |η|² u (2-u) (u²-7u+4) (3u²-9u+8))`.
/// All coefficients of `F_ζ(u)` are positive and finite on `0 < u < 1/3`, so
/// the three share the sign of `F_ζ(u)` and vanish exactly at `u₀(ζ)`.
pub fn family_fisher_quantities_raw(
    zeta: f64,
    u: f64,
    xi_sq: f64,
    eta_sq: f64,
) -> Result<(f64, f64, f64)> {
    check_zeta_domain(zeta)?;
    if !(u > 0.0 && u < THIRD) {
        return Err(Error::DomainViolation {
            name: "u",
            value: u,
            domain: "(0, 1/3)",
        });
    }
    if !(xi_sq > 0.0 && eta_sq > 0.0) {
        return Err(Error::DegenerateGeometry {
            reason: "nonpositive geometry factor",
        });
    }
    let f = f_zeta(zeta, u)?;
    let p = u * u - 7.0 * u + 4.0;
    let q = 3.0 * u * u - 9.0 * u + 8.0;
    let two_u = 2.0 - u;
    let capital = 9.0 * f / (16.0 * zeta * zeta * xi_sq * eta_sq * two_u * two_u * u * p * p);
    let shared = 3.0 * f / (4.0 * zeta * u * two_u * p * q);
    Ok((capital, shared / xi_sq, shared / eta_sq))
}

/// `(Δ, Δ₁, Δ₂)` for a validated [`FamilyParams`].
pub fn family_fisher_quantities(p: &FamilyParams) -> (f64, f64, f64) {
    family_fisher_quantities_raw(p.zeta, p.u, p.xi_sq, p.eta_sq)
        .expect("FamilyParams validated at construction")
}

/// Parameters of the perturbed reference state: diagonal weights `v_i`
/// (summing to 3) and off-diagonal strengths `u_i ≥ 0`.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceStateParams {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl ReferenceStateParams {
    pub fn new(v: [f64; 3], u: [f64; 3]) -> Result<Self> {
        for (name, value) in [("v", v[0]), ("v", v[1]), ("v", v[2]), ("u", u[0]), ("u", u[1]), ("u", u[2])] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::DomainViolation {
                    name,
                    value,
                    domain: "[0, inf)",
                });
            }
        }
        let sum = v[0] + v[1] + v[2];
        if (sum - 3.0).abs() > 1e-9 {
            return Err(Error::DomainViolation {
                name: "v1+v2+v3",
                value: sum,
                domain: "3 within 1e-9",
            });
        }
        Ok(Self {
            v1: v[0],
            v2: v[1],
            v3: v[2],
            u1: u[0],
            u2: u[1],
            u3: u[2],
        })
    }

    /// Largest off-diagonal strength.
    pub fn u_max(&self) -> f64 {
        self.u1.max(self.u2).max(self.u3)
    }
}

/// Builds the perturbed reference state
/// `ρ0 = (1/3)·[[v1, -i√u1, i√u2], [i√u1, v2, -i√u3], [-i√u2, i√u3, v3]]`
/// and rejects indefinite parameter choices with `PositivityViolation`
/// (the Monte Carlo rejection signal).
pub fn build_reference_state(p: &ReferenceStateParams) -> Result<DensityMatrix> {
    let s = [p.u1.sqrt() / 3.0, p.u2.sqrt() / 3.0, p.u3.sqrt() / 3.0];
    let entries = vec![
        Complex::new(p.v1 / 3.0, 0.0),
        Complex::new(0.0, -s[0]),
        Complex::new(0.0, s[1]),
        Complex::new(0.0, s[0]),
        Complex::new(p.v2 / 3.0, 0.0),
        Complex::new(0.0, -s[2]),
        Complex::new(0.0, -s[1]),
        Complex::new(0.0, s[2]),
        Complex::new(p.v3 / 3.0, 0.0),
    ];
    let h = HermitianMatrix::new(SquareMatrix::from_entries(3, entries)?)?;
    let eigen = eig_hermitian(&h)?;
    if eigen.min_eigenvalue() <= 0.0 {
        return Err(Error::PositivityViolation {
            eigenvalue: eigen.min_eigenvalue(),
        });
    }
    DensityMatrix::with_eigen(h, eigen)
}

/// Single-`u` family state `ρ0(u) = I/3 + (√u/3)·K` with spectrum
/// `{1/3, (1 ± √(3u))/3}`; requires `0 ≤ u < 1/3`.
pub fn single_u_state(u: f64) -> Result<DensityMatrix> {
    if !(0.0..THIRD).contains(&u) {
        return Err(Error::DomainViolation {
            name: "u",
            value: u,
            domain: "[0, 1/3)",
        });
    }
    build_reference_state(&ReferenceStateParams::new([1.0, 1.0, 1.0], [u, u, u])?)
}

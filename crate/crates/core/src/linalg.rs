//! Dense complex linear algebra for small Hermitian problems.
//!
//! Everything in this crate operates on matrices of dimension 1..=8, so the
//! representation is a plain row-major buffer and the eigensolver is a cyclic
//! Jacobi iteration specialized to complex Hermitian input. No external
//! linear-algebra backend is required.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 8;

/// Admissible deviation from exact Hermitian symmetry on input.
pub const HERMITICITY_CORRECTION_MAX: f64 = 1e-9;

/// Relative off-diagonal Frobenius target for the Jacobi eigensolver.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Sweep limit for the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalue floor below which positive-definite inversion is refused.
pub const POSDEF_FLOOR: f64 = 1e-10;

/// Serde helpers encoding a [`Complex`] as `{"re": .., "im": ..}`.
pub mod complex_serde {
    use super::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(c: &Complex, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: c.re, im: c.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(Complex::new(p.re, p.im))
    }
}

/// JSON wire form of a matrix: dimension plus row-major `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

/// Dense complex square matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl SquareMatrix {
    /// Zero matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::BadDimension { dim });
        }
        Ok(Self {
            dim,
            entries: vec![Complex::new(0.0, 0.0); dim * dim],
        })
    }

    /// Identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for j in 0..dim {
            m[(j, j)] = Complex::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds from a row-major entry buffer; rejects bad dimensions,
    /// wrong-length buffers, and non-finite entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::BadDimension { dim });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    /// Real diagonal matrix from the given diagonal values.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        if !diag.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        for (j, &v) in diag.iter().enumerate() {
            m[(j, j)] = Complex::new(v, 0.0);
        }
        Ok(m)
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    /// Trace.
    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|j| self[(j, j)]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self {
            dim: self.dim,
            entries: vec![Complex::new(0.0, 0.0); self.entries.len()],
        };
        for j in 0..self.dim {
            for k in 0..self.dim {
                out[(j, k)] = self[(k, j)].conj();
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of the difference `self - other`.
    /// Panics on dimension mismatch (programming error, not input error).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self {
            dim: n,
            entries: vec![Complex::new(0.0, 0.0); n * n],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// Entrywise scaling by a complex factor.
    pub fn scaled(&self, factor: Complex) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Entrywise sum `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix sum dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Entrywise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix difference dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Unitary conjugation `u * self * u†`.
    pub fn conjugated(&self, u: &Self) -> Self {
        u.mul(self).mul(&u.adjoint())
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = Complex;
    fn index(&self, (j, k): (usize, usize)) -> &Complex {
        &self.entries[j * self.dim + k]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut Complex {
        &mut self.entries[j * self.dim + k]
    }
}

impl TryFrom<MatrixJson> for SquareMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        let entries = j
            .entries
            .iter()
            .map(|[re, im]| Complex::new(*re, *im))
            .collect();
        Self::from_entries(j.dim, entries)
    }
}

impl From<SquareMatrix> for MatrixJson {
    fn from(m: SquareMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Hermitian matrix: a [`SquareMatrix`] symmetrized on construction.
///
/// The constructor replaces the input with `(H + H†)/2` (zeroing diagonal
/// imaginary parts) and rejects inputs whose correction exceeds
/// [`HERMITICITY_CORRECTION_MAX`]. The stored matrix satisfies
/// `entries[j][k] == conj(entries[k][j])` exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SquareMatrix", into = "SquareMatrix")]
pub struct HermitianMatrix {
    matrix: SquareMatrix,
}

impl HermitianMatrix {
    /// Symmetrizes and validates the input.
    pub fn new(m: SquareMatrix) -> Result<Self> {
        let n = m.dim();
        let mut sym = m.clone();
        let mut correction: f64 = 0.0;
        for j in 0..n {
            let d = sym[(j, j)];
            correction = correction.max(d.im.abs());
            sym[(j, j)] = Complex::new(d.re, 0.0);
            for k in (j + 1)..n {
                let avg = (m[(j, k)] + m[(k, j)].conj()) * 0.5;
                correction = correction
                    .max((m[(j, k)] - avg).norm())
                    .max((m[(k, j)] - avg.conj()).norm());
                sym[(j, k)] = avg;
                sym[(k, j)] = avg.conj();
            }
        }
        if correction > HERMITICITY_CORRECTION_MAX {
            return Err(Error::NotHermitian { correction });
        }
        Ok(Self { matrix: sym })
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    /// Consumes the wrapper.
    pub fn into_matrix(self) -> SquareMatrix {
        self.matrix
    }
}

impl HermitianMatrix {
    /// Real diagonal matrix as a Hermitian wrapper.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(SquareMatrix::from_diagonal(diag)?)
    }
}

impl std::ops::Deref for HermitianMatrix {
    type Target = SquareMatrix;
    fn deref(&self) -> &SquareMatrix {
        &self.matrix
    }
}

/// Symmetrizes a matrix that is Hermitian by mathematical construction,
/// cleaning rounding noise without applying the correction bound.
pub(crate) fn symmetrize_unchecked(m: SquareMatrix) -> HermitianMatrix {
    let n = m.dim();
    let mut sym = m;
    for j in 0..n {
        sym[(j, j)] = Complex::new(sym[(j, j)].re, 0.0);
        for k in (j + 1)..n {
            let avg = (sym[(j, k)] + sym[(k, j)].conj()) * 0.5;
            sym[(j, k)] = avg;
            sym[(k, j)] = avg.conj();
        }
    }
    HermitianMatrix { matrix: sym }
}

impl TryFrom<SquareMatrix> for HermitianMatrix {
    type Error = Error;
    fn try_from(m: SquareMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HermitianMatrix> for SquareMatrix {
    fn from(h: HermitianMatrix) -> SquareMatrix {
        h.matrix
    }
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

/// Spectral decomposition of a Hermitian matrix: `H = V diag(λ) V†` with
/// eigenvalues ascending and orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: SquareMatrix,
}

impl EigenDecomposition {
    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Assembles `V f(diag) V†` for a scalar function of the eigenvalues.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> Complex) -> SquareMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mapped: Vec<Complex> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = SquareMatrix::zeros(n).expect("dimension validated at construction");
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for (k, fk) in mapped.iter().enumerate() {
                    acc += v[(i, k)] * fk * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Reconstruction `V diag(λ) V†` (testing aid).
    pub fn reconstruct(&self) -> SquareMatrix {
        self.map_eigenvalues(|l| Complex::new(l, 0.0))
    }
}

/// Diagonalizes a complex Hermitian matrix with cyclic Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal entry `H[p][q] = |a| e^{iφ}`
/// using `θ = (H[q][q] - H[p][p]) / (2|a|)`, `t = sgn(θ)/(|θ| + √(θ²+1))`,
/// `c = 1/√(1+t²)`, `σ = t·c`, `s = σ e^{-iφ}`. Sweeps stop when the
/// off-diagonal Frobenius norm drops below [`JACOBI_OFF_TOL`] relative to the
/// input norm; exceeding [`JACOBI_MAX_SWEEPS`] is a convergence failure.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let norm = h.frobenius_norm();
    let mut a = h.matrix().clone();
    // Eigenvector accumulator V, maintained so that the input equals V A V†.
    let mut v = SquareMatrix::identity(n)?;

    if norm > 0.0 {
        let target = JACOBI_OFF_TOL * norm;
        // Entries this small cannot keep the off-diagonal norm above target.
        let skip = 1e-16 * norm;
        let mut converged = off_diagonal_norm(&a) <= target;
        let mut sweeps = 0;
        while !converged {
            if sweeps == JACOBI_MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    dim: n,
                    off_diagonal: off_diagonal_norm(&a),
                });
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q, skip);
                }
            }
            sweeps += 1;
            converged = off_diagonal_norm(&a) <= target;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = SquareMatrix::zeros(n)?;
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation on rows/columns `(p, q)`; updates `a` in place and
/// accumulates the inverse rotations into the eigenvector matrix `v`.
fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize, skip: f64) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs <= skip {
        return;
    }
    let phi = apq.arg();
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * abs);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let sigma = t * c;
    let s = Complex::from_polar(sigma, -phi);
    let n = a.dim();

    // a <- U a U† with the 2x2 block of U being [[c, -conj(s)], [s, c]].
    for j in 0..n {
        let ap = a[(p, j)];
        let aq = a[(q, j)];
        a[(p, j)] = c * ap - s.conj() * aq;
        a[(q, j)] = s * ap + c * aq;
    }
    for i in 0..n {
        let ap = a[(i, p)];
        let aq = a[(i, q)];
        a[(i, p)] = c * ap - s * aq;
        a[(i, q)] = s.conj() * ap + c * aq;
    }
    // Re-pin the entries that are exact by construction.
    a[(p, q)] = Complex::new(0.0, 0.0);
    a[(q, p)] = Complex::new(0.0, 0.0);
    a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);

    // v <- v U†, keeping input = v a v†.
    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = c * vp - s * vq;
        v[(i, q)] = s.conj() * vp + c * vq;
    }
}

fn off_diagonal_norm(a: &SquareMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                acc += a[(j, k)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Inverse of a positive-definite Hermitian matrix via its eigensystem.
/// Eigenvalues at or below [`POSDEF_FLOOR`] are rejected as rank deficiency.
pub fn inverse_posdef(h: &HermitianMatrix) -> Result<SquareMatrix> {
    let eig = eig_hermitian(h)?;
    if eig.min_eigenvalue() <= POSDEF_FLOOR {
        return Err(Error::RankDeficient {
            eigenvalue: eig.min_eigenvalue(),
        });
    }
    Ok(eig.map_eigenvalues(|l| Complex::new(1.0 / l, 0.0)))
}

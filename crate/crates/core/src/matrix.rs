//! Dense complex matrices and the spectral primitives the bounds need.
//!
//! The heavy lifting (SVD, Hermitian eigensolver, complex Schur form, QR) is
//! delegated to `nalgebra`; this module owns validation, branch choices and
//! the Haar sampler.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

pub type C64 = nalgebra::Complex<f64>;

/// Default tolerance on `max |U^dagger U - I|` for [`UnitaryMatrix`].
pub const UNITARITY_TOL: f64 = 1e-8;
/// Tolerance on `max |M - M^dagger|` for [`HermitianMatrix`].
pub const HERMITICITY_TOL: f64 = 1e-10;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A finite-valued dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_nalgebra(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(invalid("ragged rows"));
        }
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| c64(x, 0.0))).collect();
        Self::from_row_major(r, c, entries)
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix has non-finite entries"));
        }
        Ok(Self(m))
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.0.len());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self(DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.0[(rows[i], cols[j])]
        }))
    }

    /// Squared moduli `|m_ij|^2`, row-major.
    pub fn abs_squared(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)].norm_sqr()).collect())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(self.0.map(|z| z * factor))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.0.shape())?;
        for i in 0..self.rows() {
            write!(f, "\n  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

/// A square matrix whose adjoint is its inverse, up to a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, UNITARITY_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.is_empty() {
            return Err(invalid(format!(
                "unitary must be square and nonempty, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > tolerance {
            return Err(Error::NotUnitary { deviation, tolerance });
        }
        Ok(Self { matrix, tolerance })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d),
            tolerance: UNITARITY_TOL,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix.get(i, j)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            tolerance: self.tolerance,
        }
    }

    /// Matrix product `self * rhs`, revalidated.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(invalid("dimension mismatch in unitary product"));
        }
        Self::with_tolerance(&self.matrix * &rhs.matrix, self.tolerance.max(rhs.tolerance))
    }

    pub fn deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }
}

/// `max |M^dagger M - I|` over entries.
pub fn unitarity_deviation(m: &ComplexMatrix) -> f64 {
    let g = m.0.adjoint() * &m.0;
    let id = DMatrix::<C64>::identity(g.nrows(), g.ncols());
    g.iter().zip(id.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// A complex matrix equal to its adjoint within [`HERMITICITY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(invalid("Hermitian matrix must be square"));
        }
        let skew = matrix.max_abs_diff(&matrix.adjoint());
        if skew > HERMITICITY_TOL {
            return Err(invalid(format!("matrix is not Hermitian (skew {skew:e})")));
        }
        Ok(Self(matrix))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// `(M + M^dagger) / 2`, exactly Hermitian in floating point.
    fn symmetrized(&self) -> DMatrix<C64> {
        let m = &self.0 .0;
        (m + m.adjoint()).map(|z| z * 0.5)
    }
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_empty() {
        return Err(invalid("operator norm of an empty matrix"));
    }
    if m.rows() == 1 || m.cols() == 1 {
        return Ok(m.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    let svd = SVD::try_new(m.0.clone(), false, false, EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::NumericFailure("SVD did not converge".into()))?;
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

/// Eigenvalues of a Hermitian matrix (given as raw storage), ascending.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let sym = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::try_new(sym, EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::NumericFailure("Hermitian eigensolver did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

pub(crate) fn max_hermitian_eigenvalue(m: &DMatrix<C64>) -> Result<f64> {
    hermitian_eigenvalues(m).map(|v| *v.last().expect("nonempty"))
}

pub fn min_eigenvalue_hermitian(m: &HermitianMatrix) -> Result<f64> {
    if m.dim() == 0 {
        return Err(invalid("empty Hermitian matrix"));
    }
    hermitian_eigenvalues(&m.symmetrized()).map(|v| v[0])
}

/// `u^beta` on the principal branch: eigenphases taken in `(-pi, pi]`.
pub fn unitary_fractional_power(u: &UnitaryMatrix, beta: f64) -> Result<UnitaryMatrix> {
    if !beta.is_finite() {
        return Err(invalid("non-finite exponent"));
    }
    let d = u.dim();
    let schur = Schur::try_new(u.matrix.0.clone(), EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::NumericFailure("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    // A normal matrix has a diagonal Schur form.
    let off_diag = (0..d)
        .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| t[(i, j)].norm())
        .fold(0.0, f64::max);
    if off_diag > 1e-8 {
        return Err(Error::NumericFailure(format!(
            "Schur form of a unitary is not diagonal (off-diagonal {off_diag:e})"
        )));
    }
    let phases: Vec<C64> = (0..d)
        .map(|i| {
            let mut theta = t[(i, i)].arg();
            if theta <= -PI + 1e-9 {
                theta += 2.0 * PI;
            }
            C64::from_polar(1.0, beta * theta)
        })
        .collect();
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    let out = &q * diag * q.adjoint();
    UnitaryMatrix::with_tolerance(ComplexMatrix::from_nalgebra(out)?, u.tolerance)
}

/// `exp(i t h)` via the Hermitian eigendecomposition of `h`.
pub fn hermitian_phase_exp(h: &HermitianMatrix, t: f64) -> Result<UnitaryMatrix> {
    if !t.is_finite() {
        return Err(invalid("non-finite time"));
    }
    let eig = SymmetricEigen::try_new(h.symmetrized(), EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::NumericFailure("Hermitian eigensolver did not converge".into()))?;
    let v = &eig.eigenvectors;
    let phases: Vec<C64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| C64::from_polar(1.0, t * lambda))
        .collect();
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
    let out = v * diag * v.adjoint();
    UnitaryMatrix::new(ComplexMatrix::from_nalgebra(out)?)
}

/// Haar-distributed unitary from a seeded ChaCha stream.
pub fn haar_random_unitary(d: usize, seed: u64) -> Result<UnitaryMatrix> {
    haar_random_unitary_with(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Ginibre matrix, QR, then columns rephased by `R_ii / |R_ii|`.
pub fn haar_random_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    let g = DMatrix::from_fn(d, d, |_, _| standard_complex_normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let phase = if n > 0.0 { rjj / n } else { c64(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(ComplexMatrix::from_nalgebra(q)?)
}

/// Complex normal with `E|z|^2 = 1`.
pub(crate) fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

//! Dense Hermitian linear algebra.
//!
//! Everything here works for complex Hermitian matrices (spectral values of
//! vector processes) and for real symmetric matrices (block-Toeplitz
//! covariances) through the [`Scalar`] trait. The eigensolver is `faer`'s
//! self-adjoint EVD; the square roots, the trace of the geometric-mean-type
//! product and the Bures form are built on top of it here.
//!
//! Tolerances are relative: [`PsdPolicy`] thresholds scale with the largest
//! eigenvalue magnitude of the matrix being processed, so every operation is
//! homogeneous under positive rescaling of its inputs.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use faer::{Mat, MatRef, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for the Hermitian symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Round-off band (relative to `tr A + tr B`) inside which a negative Bures
/// form is clamped to zero.
pub const BURES_CLAMP_BAND: f64 = 1e-10;

/// Field of matrix entries: `f64` for real symmetric, `Complex64` for
/// Hermitian matrices.
pub trait Scalar:
    faer::traits::ComplexField<Real = f64>
    + Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_real(x: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn conjugate(self) -> Self;
    fn modulus(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn conjugate(self) -> Self {
        self
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
    #[inline]
    fn conjugate(self) -> Self {
        self.conj()
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// A square matrix equal to its own conjugate transpose.
#[derive(Clone, Debug)]
pub struct Hermitian<T: Scalar = Complex64> {
    mat: Mat<T>,
}

/// Complex Hermitian matrix; carrier for spectral values.
pub type HermitianMatrix = Hermitian<Complex64>;

/// Real symmetric matrix; carrier for stacked-vector covariances.
pub type SymmetricMatrix = Hermitian<f64>;

impl<T: Scalar> Hermitian<T> {
    /// Validates `mat` and stores its exact Hermitian part.
    ///
    /// The asymmetry `max |m_jk - conj(m_kj)|` must not exceed
    /// [`HERMITIAN_TOL`] times the largest entry magnitude.
    pub fn new(mat: Mat<T>) -> Result<Self> {
        let n = mat.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
        }
        if mat.ncols() != n {
            return Err(Error::DimensionMismatch { left: n, right: mat.ncols() });
        }
        let mut scale = 0.0f64;
        let mut residual = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let v = mat[(i, j)];
                if !(v.re().is_finite() && v.im().is_finite()) {
                    return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
                }
                scale = scale.max(v.modulus());
                if i >= j {
                    residual = residual.max((v - mat[(j, i)].conjugate()).modulus());
                }
            }
        }
        let tolerance = HERMITIAN_TOL * scale;
        if residual > tolerance {
            return Err(Error::NonHermitianInput { residual, tolerance });
        }
        Ok(Self::hermitian_part(mat.as_ref()))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        Self::new(Mat::from_fn(dim, dim, f))
    }

    /// `(M + M*) / 2`, without any symmetry check.
    pub fn hermitian_part(mat: MatRef<'_, T>) -> Self {
        let n = mat.nrows();
        assert_eq!(n, mat.ncols(), "hermitian_part needs a square matrix");
        let half = T::from_real(0.5);
        let mat = Mat::from_fn(n, n, |i, j| {
            if i == j {
                T::from_real(mat[(i, i)].re())
            } else {
                (mat[(i, j)] + mat[(j, i)].conjugate()) * half
            }
        });
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_diagonal(&vec![0.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mat = Mat::from_fn(n, n, |i, j| T::from_real(if i == j { diag[i] } else { 0.0 }));
        Self { mat }
    }

    /// `V diag(values) V*` for an arbitrary (not necessarily unitary) `V`.
    pub fn from_factors(vectors: MatRef<'_, T>, values: &[f64]) -> Self {
        let n = vectors.nrows();
        assert_eq!(vectors.ncols(), values.len());
        let scaled = Mat::from_fn(n, values.len(), |i, j| vectors[(i, j)] * T::from_real(values[j]));
        let prod = scaled.as_ref() * vectors.adjoint();
        Self::hermitian_part(prod.as_ref())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.mat[(row, col)]
    }

    pub fn as_mat(&self) -> MatRef<'_, T> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<T> {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(self.as_mat())
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.mat[(i, j)].modulus());
            }
        }
        m
    }

    pub fn scaled(&self, c: f64) -> Self {
        let c = T::from_real(c);
        let n = self.dim();
        Self { mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)] * c) }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        let n = self.dim();
        Ok(Self { mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)] + other.mat[(i, j)]) })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        let n = self.dim();
        Ok(Self { mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)] - other.mat[(i, j)]) })
    }

    /// Plain transpose (entrywise conjugate for a Hermitian matrix).
    pub fn transpose(&self) -> Self {
        let n = self.dim();
        Self { mat: Mat::from_fn(n, n, |i, j| self.mat[(j, i)]) }
    }

    /// The general (non-Hermitian) product `self * other`.
    pub fn product(&self, other: &Self) -> Result<Mat<T>> {
        check_dims(self, other)?;
        Ok(self.as_mat() * other.as_mat())
    }

    /// `B A B*` where `B = self`; Hermitian by construction.
    pub fn sandwich(&self, inner: &Self) -> Result<Self> {
        check_dims(self, inner)?;
        let prod = self.as_mat() * inner.as_mat() * self.as_mat();
        Ok(Self::hermitian_part(prod.as_ref()))
    }

    pub fn to_complex(&self) -> HermitianMatrix {
        let n = self.dim();
        Hermitian { mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)].to_complex()) }
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }
}

impl HermitianMatrix {
    /// Builds a complex Hermitian matrix from row-major `(re, im)` entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("rows must form a square matrix".into()));
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("rows must form a square matrix".into()));
        }
        Self::from_fn(n, |i, j| Complex64::new(rows[i][j], 0.0))
    }
}

fn check_dims<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// Frobenius norm of an arbitrary matrix.
pub fn frobenius<T: Scalar>(m: MatRef<'_, T>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)].modulus();
            s += v * v;
        }
    }
    s.sqrt()
}

/// `||AB - BA||_F`.
pub fn commutator_norm<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>) -> Result<f64> {
    let ab = a.product(b)?;
    let ba = b.product(a)?;
    Ok(frobenius((ab - ba).as_ref()))
}

/// Real part of `tr(AB)`; real whenever both factors are Hermitian.
pub fn trace_of_product<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>) -> Result<f64> {
    check_dims(a, b)?;
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for k in 0..n {
            s += (a.get(i, k) * b.get(k, i)).re();
        }
    }
    Ok(s)
}

/// Spectral decomposition `H = V diag(eigenvalues) V*`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T: Scalar = Complex64> {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `j` pairs with `eigenvalues[j]`.
    pub eigenvectors: Mat<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Largest eigenvalue magnitude; the reference scale of [`PsdPolicy`].
    pub fn scale(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `V f(diag) V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Hermitian<T> {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        Hermitian::from_factors(self.eigenvectors.as_ref(), &values)
    }

    pub fn reconstruct(&self) -> Hermitian<T> {
        self.map(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh<T: Scalar>(h: &Hermitian<T>) -> Result<EigenDecomposition<T>> {
    let evd = h.as_mat().self_adjoint_eigen(Side::Lower).map_err(|_| Error::ConvergenceFailure)?;
    let s = evd.S().column_vector();
    let eigenvalues: Vec<f64> = (0..h.dim()).map(|i| s[i].re()).collect();
    Ok(EigenDecomposition { eigenvalues, eigenvectors: evd.U().to_owned() })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Scalar>(h: &Hermitian<T>) -> Result<Vec<f64>> {
    let vals = h.as_mat().self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::ConvergenceFailure)?;
    Ok(vals.iter().map(|v| v.re()).collect())
}

/// How eigenvalues that are (numerically) non-positive are treated.
///
/// Both fields are relative to the largest eigenvalue magnitude of the
/// matrix at hand: eigenvalues below `floor_eps * scale` are raised to that
/// floor, and an eigenvalue below `-negativity_tol * scale` is an error.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PsdPolicy {
    pub floor_eps: f64,
    pub negativity_tol: f64,
}

impl Default for PsdPolicy {
    fn default() -> Self {
        Self { floor_eps: 1e-12, negativity_tol: 1e-10 }
    }
}

impl PsdPolicy {
    pub fn new(floor_eps: f64, negativity_tol: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(floor_eps) || !ok(negativity_tol) {
            return Err(Error::InvalidArgument(format!(
                "PSD policy needs finite nonnegative tolerances (floor_eps={floor_eps}, negativity_tol={negativity_tol})"
            )));
        }
        Ok(Self { floor_eps, negativity_tol })
    }

    /// Floors `values` in place and returns how many were raised.
    ///
    /// `scale` is the reference magnitude the relative thresholds apply to.
    pub fn apply(&self, values: &mut [f64], scale: f64) -> Result<usize> {
        let tolerance = self.negativity_tol * scale;
        let floor = self.floor_eps * scale;
        let mut floored = 0;
        for v in values.iter_mut() {
            if *v < -tolerance {
                return Err(Error::IndefiniteInput { min_eigenvalue: *v, tolerance });
            }
            if *v < floor {
                *v = floor;
                floored += 1;
            }
        }
        Ok(floored)
    }
}

/// A decomposition whose eigenvalues have been floored by a [`PsdPolicy`].
#[derive(Clone, Debug)]
pub struct PsdDecomposition<T: Scalar = Complex64> {
    pub eig: EigenDecomposition<T>,
    pub floored: usize,
}

impl<T: Scalar> PsdDecomposition<T> {
    /// Floors relative to the matrix's own largest eigenvalue magnitude.
    pub fn new(h: &Hermitian<T>, policy: &PsdPolicy) -> Result<Self> {
        let eig = eigh(h)?;
        let scale = eig.scale();
        Self::from_eig(eig, policy, scale)
    }

    /// Floors relative to an external reference `scale`, e.g. the largest
    /// eigenvalue over a whole frequency grid.
    pub fn from_eig(mut eig: EigenDecomposition<T>, policy: &PsdPolicy, scale: f64) -> Result<Self> {
        let floored = policy.apply(&mut eig.eigenvalues, scale)?;
        Ok(Self { eig, floored })
    }

    pub fn sqrt(&self) -> Hermitian<T> {
        self.eig.map(|l| l.max(0.0).sqrt())
    }

    /// The floored matrix itself.
    pub fn floored_matrix(&self) -> Hermitian<T> {
        self.eig.reconstruct()
    }
}

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues below the policy floor are raised before taking the root, so
/// `sqrt_psd(H)^2` reproduces the floored matrix.
pub fn sqrt_psd<T: Scalar>(h: &Hermitian<T>, policy: &PsdPolicy) -> Result<Hermitian<T>> {
    Ok(PsdDecomposition::new(h, policy)?.sqrt())
}

/// Eigenvalues of `root * B * root` floored by `policy`, summed under a
/// square root.
pub(crate) fn trace_sqrt_of_sandwich<T: Scalar>(root: &Hermitian<T>, b: &Hermitian<T>, policy: &PsdPolicy) -> Result<f64> {
    let sandwich = root.sandwich(b)?;
    let mut vals = eigvalsh(&sandwich)?;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    policy.apply(&mut vals, scale)?;
    Ok(vals.iter().map(|v| v.sqrt()).sum())
}

/// `tr[(A^{1/2} B A^{1/2})^{1/2}]`, equal to the sum of square roots of the
/// eigenvalues of `AB`.
///
/// The product `AB` is not Hermitian; its spectrum is read off the similar
/// Hermitian matrix `A^{1/2} B A^{1/2}`.
pub fn trace_sqrt_product<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>, policy: &PsdPolicy) -> Result<f64> {
    check_dims(a, b)?;
    let root = PsdDecomposition::new(a, policy)?.sqrt();
    trace_sqrt_of_sandwich(&root, b, policy)
}

/// Same quantity as [`trace_sqrt_product`] through a second similarity:
/// with `A = L L*`, the product `AB` is similar to `L* B L`.
///
/// `A` is floored by `policy` first whenever its Cholesky factorisation fails.
pub fn trace_sqrt_product_cholesky<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>, policy: &PsdPolicy) -> Result<f64> {
    check_dims(a, b)?;
    let factor = match a.as_mat().llt(Side::Lower) {
        Ok(llt) => llt.L().to_owned(),
        Err(_) => {
            let floored = PsdDecomposition::new(a, policy)?.floored_matrix();
            floored
                .as_mat()
                .llt(Side::Lower)
                .map_err(|_| Error::NotPositiveDefinite {
                    context: "Cholesky factor of the floored matrix".into(),
                    min_eigenvalue: 0.0,
                })?
                .L()
                .to_owned()
        }
    };
    let inner = factor.adjoint() * b.as_mat() * factor.as_ref();
    let inner = Hermitian::hermitian_part(inner.as_ref());
    let mut vals = eigvalsh(&inner)?;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    policy.apply(&mut vals, scale)?;
    Ok(vals.iter().map(|v| v.sqrt()).sum())
}

/// Squared Bures–Wasserstein form `tr[A + B - 2 (A^{1/2} B A^{1/2})^{1/2}]`.
///
/// Tiny negative values inside [`BURES_CLAMP_BAND`] are clamped to zero;
/// anything below the band is reported as [`Error::NegativeDistance`].
pub fn bures_w2_squared<T: Scalar>(a: &Hermitian<T>, b: &Hermitian<T>, policy: &PsdPolicy) -> Result<f64> {
    let cross = trace_sqrt_product(a, b, policy)?;
    clamp_bures(a.trace() + b.trace(), cross)
}

/// `total_trace - 2 * cross`, clamped inside the round-off band.
pub(crate) fn clamp_bures(total_trace: f64, cross: f64) -> Result<f64> {
    let value = total_trace - 2.0 * cross;
    if value >= 0.0 {
        Ok(value)
    } else if value >= -BURES_CLAMP_BAND * total_trace.abs() {
        Ok(0.0)
    } else {
        Err(Error::NegativeDistance { value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Mat<Complex64> {
        let g = Mat::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        g.qr().compute_Q()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn eigh_identity_and_diagonal() {
        let e = eigh(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues.len(), 2);
        assert!(e.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-14));

        let e = eigh(&HermitianMatrix::from_diagonal(&[9.0, 4.0])).unwrap();
        assert!((e.eigenvalues[0] - 4.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 9.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_recovers_synthesised_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = random_unitary(3, &mut rng);
        let h = HermitianMatrix::from_factors(v.as_ref(), &[2.0, 0.5, 7.0]);
        let e = eigh(&h).unwrap();
        for (got, want) in e.eigenvalues.iter().zip([0.5, 2.0, 7.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        // V*V = I and reconstruction
        let vv = e.eigenvectors.adjoint() * e.eigenvectors.as_ref();
        let eye = Mat::<Complex64>::identity(3, 3);
        assert!(frobenius((vv - eye).as_ref()) < 1e-10);
        let diff = e.reconstruct().try_sub(&h).unwrap();
        assert!(diff.max_abs() < 1e-10 * (1.0 + 7.0));
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NonHermitianInput { .. })));
        let rect = Mat::<f64>::zeros(2, 3);
        assert!(matches!(SymmetricMatrix::new(rect), Err(Error::DimensionMismatch { .. })));
        assert!(SymmetricMatrix::new(Mat::<f64>::zeros(0, 0)).is_err());
    }

    #[test]
    fn sqrt_psd_simple_cases() {
        let p = PsdPolicy::default();
        let s = sqrt_psd(&HermitianMatrix::identity(3), &p).unwrap();
        assert!(s.max_abs_diff(&HermitianMatrix::identity(3)).unwrap() < 1e-14);
        let s = sqrt_psd(&HermitianMatrix::from_diagonal(&[4.0, 9.0]), &p).unwrap();
        assert!(s.max_abs_diff(&HermitianMatrix::from_diagonal(&[2.0, 3.0])).unwrap() < 1e-14);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Mat::from_fn(4, 4, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let a = HermitianMatrix::hermitian_part((g.as_ref() * g.adjoint() + Mat::<Complex64>::identity(4, 4) * faer::Scale(c(0.1, 0.0))).as_ref());
        let s = sqrt_psd(&a, &PsdPolicy::default()).unwrap();
        let sq = HermitianMatrix::hermitian_part(s.product(&s).unwrap().as_ref());
        assert!(sq.try_sub(&a).unwrap().frobenius_norm() <= 1e-9 * a.frobenius_norm());
    }

    #[test]
    fn sqrt_psd_floors_and_rejects() {
        let p = PsdPolicy::default();
        // tiny negative within tolerance is floored
        let h = HermitianMatrix::from_diagonal(&[1.0, -1e-13]);
        let d = PsdDecomposition::new(&h, &p).unwrap();
        assert_eq!(d.floored, 1);
        assert!(d.eig.eigenvalues[0] > 0.0);
        let h = HermitianMatrix::from_diagonal(&[1.0, -1e-3]);
        assert!(matches!(sqrt_psd(&h, &p), Err(Error::IndefiniteInput { .. })));
    }

    #[test]
    fn trace_sqrt_product_examples() {
        let p = PsdPolicy::default();
        let i2 = HermitianMatrix::identity(2);
        assert!(close(trace_sqrt_product(&i2, &i2, &p).unwrap(), 2.0, 1e-14));
        let a = HermitianMatrix::from_diagonal(&[4.0]);
        let b = HermitianMatrix::from_diagonal(&[9.0]);
        assert!(close(trace_sqrt_product(&a, &b, &p).unwrap(), 6.0, 1e-14));
        assert!(close(trace_sqrt_product_cholesky(&a, &b, &p).unwrap(), 6.0, 1e-14));
        let i3 = HermitianMatrix::identity(3);
        assert!(matches!(trace_sqrt_product(&i2, &i3, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn trace_sqrt_product_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = PsdPolicy::default();
        let mut pd = || {
            let v = random_unitary(3, &mut rng);
            let vals: Vec<f64> = (0..3).map(|_| 0.1 + 5.0 * rng.random::<f64>()).collect();
            HermitianMatrix::from_factors(v.as_ref(), &vals)
        };
        let (a, b) = (pd(), pd());
        let direct = trace_sqrt_product(&a, &b, &p).unwrap();
        let root = sqrt_psd(&a, &p).unwrap();
        let composed = sqrt_psd(&root.sandwich(&b).unwrap(), &p).unwrap().trace();
        let chol = trace_sqrt_product_cholesky(&a, &b, &p).unwrap();
        assert!(close(direct, composed, 1e-8));
        assert!(close(direct, chol, 1e-8));
    }

    #[test]
    fn bures_examples() {
        let p = PsdPolicy::default();
        let a = HermitianMatrix::from_diagonal(&[1.0]);
        let b = HermitianMatrix::from_diagonal(&[4.0]);
        assert!(close(bures_w2_squared(&a, &b, &p).unwrap(), 1.0, 1e-14));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_unitary(2, &mut rng);
        let x = HermitianMatrix::from_factors(v.as_ref(), &[0.3, 2.5]);
        let w = bures_w2_squared(&x, &x, &p).unwrap();
        assert!(w <= 1e-10 * x.trace());
    }

    #[test]
    fn clamp_band() {
        assert_eq!(clamp_bures(10.0, 5.0 + 1e-12).unwrap(), 0.0);
        assert!(matches!(clamp_bures(10.0, 5.1), Err(Error::NegativeDistance { .. })));
        assert!((clamp_bures(10.0, 4.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn policy_validation() {
        assert!(PsdPolicy::new(-1.0, 0.0).is_err());
        assert!(PsdPolicy::new(0.0, f64::NAN).is_err());
        assert!(PsdPolicy::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn real_symmetric_path() {
        let p = PsdPolicy::default();
        let a = SymmetricMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 0.5 }).unwrap();
        let b = SymmetricMatrix::from_diagonal(&[1.0, 3.0]);
        let real = bures_w2_squared(&a, &b, &p).unwrap();
        let cplx = bures_w2_squared(&a.to_complex(), &b.to_complex(), &p).unwrap();
        assert!(close(real, cplx, 1e-12));
    }
}

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frobenius tolerance on `M^H M - I` for a matrix to count as semi-unitary.
pub const SEMI_UNITARY_TOL: f64 = 1e-12;

/// An `n x k` semi-unitary matrix representing a point of `G(n, k)`.
///
/// Any matrix with the same column span represents the same subspace; the
/// routines in this crate only ever look at quantities that are invariant
/// under right multiplication by a `k x k` unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasisRecord", into = "BasisRecord")]
pub struct SubspaceBasis {
    matrix: DMatrix<Complex64>,
}

impl SubspaceBasis {
    /// Wraps `matrix` after checking `k <= n` and semi-unitarity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let (n, k) = matrix.shape();
        if k == 0 || k > n {
            return Err(Error::invalid(format!("basis shape {n}x{k} needs 1 <= k <= n")));
        }
        let basis = SubspaceBasis { matrix };
        let err = basis.semi_unitarity_error();
        if !(err <= SEMI_UNITARY_TOL) {
            return Err(Error::invalid(format!(
                "matrix is not semi-unitary: |M^H M - I|_F = {err:e}"
            )));
        }
        Ok(basis)
    }

    pub(crate) fn from_orthonormal(matrix: DMatrix<Complex64>) -> Self {
        debug_assert!(SubspaceBasis { matrix: matrix.clone() }.semi_unitarity_error() < 1e-10);
        SubspaceBasis { matrix }
    }

    /// Span of the standard basis vectors `e_i`, `i` in `coords` (0-based).
    pub fn coordinate(n: usize, coords: &[usize]) -> Result<Self> {
        let mut matrix = DMatrix::<Complex64>::zeros(n, coords.len());
        for (col, &i) in coords.iter().enumerate() {
            if i >= n {
                return Err(Error::invalid(format!("coordinate {i} out of range for n = {n}")));
            }
            matrix[(i, col)] = Complex64::new(1.0, 0.0);
        }
        Self::new(matrix)
    }

    /// The first `k` columns of the `n x n` identity.
    pub fn leading(n: usize, k: usize) -> Result<Self> {
        let coords: Vec<usize> = (0..k).collect();
        Self::coordinate(n, &coords)
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// Subspace dimension.
    pub fn k(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// `|M^H M - I_k|_F`.
    pub fn semi_unitarity_error(&self) -> f64 {
        let gram = self.matrix.adjoint() * &self.matrix;
        let k = gram.nrows();
        let mut acc = 0.0;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j { 1.0 } else { 0.0 };
                acc += (gram[(i, j)] - Complex64::new(target, 0.0)).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Orthogonal projector `M M^H`.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.matrix * self.matrix.adjoint()
    }
}

/// JSON layout: `{n, k, re, im}` with row-major real and imaginary parts.
#[derive(Serialize, Deserialize)]
struct BasisRecord {
    n: usize,
    k: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<SubspaceBasis> for BasisRecord {
    fn from(b: SubspaceBasis) -> Self {
        let (n, k) = b.matrix.shape();
        let mut re = Vec::with_capacity(n * k);
        let mut im = Vec::with_capacity(n * k);
        for i in 0..n {
            for j in 0..k {
                let z = b.matrix[(i, j)];
                re.push(z.re);
                im.push(z.im);
            }
        }
        BasisRecord { n, k, re, im }
    }
}

impl TryFrom<BasisRecord> for SubspaceBasis {
    type Error = Error;
    fn try_from(r: BasisRecord) -> Result<Self> {
        if r.re.len() != r.n * r.k || r.im.len() != r.n * r.k {
            return Err(Error::invalid(format!(
                "basis record {}x{} carries {} real and {} imaginary entries",
                r.n,
                r.k,
                r.re.len(),
                r.im.len()
            )));
        }
        let matrix = DMatrix::from_fn(r.n, r.k, |i, j| {
            Complex64::new(r.re[i * r.k + j], r.im[i * r.k + j])
        });
        SubspaceBasis::new(matrix)
    }
}

//! Dense complex vectors and matrices over `2^n`-dimensional qubit spaces.
//!
//! Basis index convention: qubit 1 is the most significant bit, so the ket
//! `|j_1 j_2 ... j_n>` has index `j_1 * 2^(n-1) + ... + j_n`. Every module in
//! the crate relies on this.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalue floor used by [`DensityMatrix::is_psd`].
pub const PSD_FLOOR: f64 = 1e-9;

/// Largest qubit count for which dense operators are built.
pub const MAX_DENSE_QUBITS: usize = 12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Returns `log2(dim)` if `dim` is a power of two.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo(dim))
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, " ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, " {:+.3}{:+.3}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix whose columns are the given kets.
    pub fn from_columns(columns: &[Ket]) -> Result<Self> {
        let rows = columns.first().map_or(0, Ket::dim);
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.dim() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: col.dim(),
                });
            }
            for (r, &z) in col.amplitudes().iter().enumerate() {
                m[(r, c)] = z;
            }
        }
        Ok(m)
    }

    /// Matrix of the linear map taking basis ket `c` to basis ket `perm[c]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len(), perm.len());
        for (c, &r) in perm.iter().enumerate() {
            m[(r, c)] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Ket {
        Ket {
            amps: (0..self.rows).map(|r| self[(r, c)]).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * rhs`, panicking on a shape mismatch.
    pub fn dot(&self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix shapes must agree")
    }

    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        let amps = (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(&v.amps)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(Ket { amps })
    }

    /// Kronecker product, `self` on the more significant qubits.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self[(ar, ac)];
                if a == ZERO {
                    continue;
                }
                for br in 0..rhs.rows {
                    for bc in 0..rhs.cols {
                        out[(ar * rhs.rows + br, ac * rhs.cols + bc)] = a * rhs[(br, bc)];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(C64, C64) -> C64) -> Result<Matrix> {
        self.check_same_shape(rhs)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    fn check_same_shape(&self, rhs: &Matrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: rhs.rows * rhs.cols,
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - rhs`; infinite on a shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        if self.check_same_shape(rhs).is_err() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// `max |U^dagger U - I|` for square `U`, `max |V^dagger V - I|` in general.
    pub fn unitarity_residual(&self) -> f64 {
        self.dagger()
            .dot(self)
            .max_abs_diff(&Matrix::identity(self.cols))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_residual() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Whether `self` is positive semidefinite with every eigenvalue above
    /// `-floor`, decided by a Cholesky factorisation of `self + floor * I`.
    pub fn is_psd(&self, floor: f64) -> bool {
        if !self.is_square() || !self.is_hermitian(floor) {
            return false;
        }
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)].re + floor;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[(j, j)] = C64::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / d;
            }
        }
        true
    }
}

/// Conjugate transpose of `a`.
pub fn dagger(a: &Matrix) -> Matrix {
    a.dagger()
}

/// State vector of dimension `2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: Vec<C64>,
}

impl Ket {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        qubits_for_dim(amps.len())?;
        Ok(Self { amps })
    }

    /// Computational basis ket `|index>` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    /// Basis ket from a bit string such as `"0110"`, leftmost bit = qubit 1.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        let index = usize::from_str_radix(bits, 2).map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        Ok(Self::basis(1 << n, index))
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn kron(&self, rhs: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * rhs.dim());
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(a * b);
            }
        }
        Ket { amps }
    }

    pub fn scale(&self, s: C64) -> Ket {
        Ket {
            amps: self.amps.iter().map(|z| z * s).collect(),
        }
    }

    /// `<self|rhs>`.
    pub fn inner(&self, rhs: &Ket) -> C64 {
        self.amps.iter().zip(&rhs.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Euclidean distance; infinite when dimensions differ.
    pub fn distance(&self, rhs: &Ket) -> f64 {
        if self.dim() != rhs.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&rhs.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, rhs: &Ket) -> f64 {
        if self.dim() != rhs.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&rhs.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|self><self|`.
    pub fn outer(&self) -> Matrix {
        Matrix::from_fn(self.dim(), self.dim(), |r, c| self.amps[r] * self.amps[c].conj())
    }
}

/// Either a state vector or an operator; the inputs of [`tensor`].
#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    Ket(Ket),
    Operator(Matrix),
}

/// Tensor product of two kets or two operators.
pub fn tensor(a: &Operand, b: &Operand) -> Result<Operand> {
    match (a, b) {
        (Operand::Ket(x), Operand::Ket(y)) => Ok(Operand::Ket(x.kron(y))),
        (Operand::Operator(x), Operand::Operator(y)) => Ok(Operand::Operator(x.kron(y))),
        _ => Err(Error::KindMismatch),
    }
}

/// Square matrix on `2^n` dimensions intended as a quantum state.
///
/// Hermiticity, unit trace and positivity are checked on demand through
/// [`DensityMatrix::validate`] and [`DensityMatrix::is_psd`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Matrix);

impl DensityMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                got: m.cols(),
            });
        }
        qubits_for_dim(m.rows())?;
        Ok(Self(m))
    }

    pub fn from_ket(v: &Ket) -> Self {
        Self(v.outer())
    }

    /// `|index><index|` on `dim` dimensions.
    pub fn basis(dim: usize, index: usize) -> Self {
        Self::from_ket(&Ket::basis(dim, index))
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self(Matrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn kron(&self, rhs: &DensityMatrix) -> DensityMatrix {
        Self(self.0.kron(&rhs.0))
    }

    /// Checks Hermiticity and unit trace within `tol`.
    pub fn validate(&self, tol: f64) -> bool {
        self.0.is_finite() && self.0.is_hermitian(tol) && (self.trace() - ONE).norm() <= tol
    }

    pub fn is_psd(&self, floor: f64) -> bool {
        self.0.is_psd(floor)
    }
}

/// Traces out the `k_qubits` most significant qubits of `rho`.
pub fn partial_trace_leading(rho: &DensityMatrix, k_qubits: usize) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if k_qubits >= n {
        return Err(Error::BadPartialTrace { k: k_qubits, n });
    }
    let keep = 1usize << (n - k_qubits);
    let m = rho.matrix();
    let out = Matrix::from_fn(keep, keep, |a, b| {
        (0..1usize << k_qubits)
            .map(|t| m[(t * keep + a, t * keep + b)])
            .sum()
    });
    Ok(DensityMatrix(out))
}

/// Traces out the `k_qubits` least significant qubits of `rho`.
pub fn partial_trace_trailing(rho: &DensityMatrix, k_qubits: usize) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if k_qubits >= n {
        return Err(Error::BadPartialTrace { k: k_qubits, n });
    }
    let block = 1usize << k_qubits;
    let keep = 1usize << (n - k_qubits);
    let m = rho.matrix();
    let out = Matrix::from_fn(keep, keep, |a, b| {
        (0..block).map(|t| m[(a * block + t, b * block + t)]).sum()
    });
    Ok(DensityMatrix(out))
}

/// A `2^n x 2^k` matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry(Matrix);

impl Isometry {
    /// Wraps `m` after checking `m^dagger m = I` within `tol`.
    pub fn new(m: Matrix, tol: f64) -> Result<Self> {
        qubits_for_dim(m.rows())?;
        qubits_for_dim(m.cols())?;
        if m.cols() > m.rows() {
            return Err(Error::NotIsometry(f64::INFINITY));
        }
        let residual = m.unitarity_residual();
        if residual > tol {
            return Err(Error::NotIsometry(residual));
        }
        Ok(Self(m))
    }

    /// The first `cols` standard basis vectors of a `rows`-dimensional space.
    pub fn leading_columns(rows: usize, cols: usize) -> Result<Self> {
        Self::new(
            Matrix::from_fn(rows, cols, |r, c| if r == c { ONE } else { ZERO }),
            0.0,
        )
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn column(&self, c: usize) -> Ket {
        self.0.column(c)
    }

    /// `max |V^dagger V - I|`.
    pub fn residual(&self) -> f64 {
        self.0.unitarity_residual()
    }

    /// Orthogonal projector `V V^dagger` onto the range.
    pub fn projector(&self) -> Projector {
        Projector {
            matrix: self.0.dot(&self.0.dagger()),
            rank: self.cols(),
        }
    }
}

/// Orthogonal projector with its rank.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: Matrix,
    rank: usize,
}

impl Projector {
    /// Checks `P^2 = P` and `P^dagger = P` within `tol`; rank is the rounded trace.
    pub fn from_matrix(m: Matrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotProjector(f64::INFINITY));
        }
        let residual = m.dot(&m).max_abs_diff(&m).max(m.hermiticity_residual());
        if residual > tol {
            return Err(Error::NotProjector(residual));
        }
        let tr = m.trace().re;
        let rank = tr.round();
        if (tr - rank).abs() > tol.max(1e-9) * m.rows() as f64 {
            return Err(Error::NotProjector((tr - rank).abs()));
        }
        Ok(Self {
            matrix: m,
            rank: rank as usize,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `P A P`.
    pub fn sandwich(&self, a: &Matrix) -> Result<Matrix> {
        self.matrix.matmul(a)?.matmul(&self.matrix)
    }
}

/// Best scalar `mu` with `a ~ mu P` and the residual `max |a - mu P|`.
///
/// `mu` is read off an entry of largest modulus in `P`.
pub fn scalar_fit(a: &Matrix, p: &Projector) -> Result<(C64, f64)> {
    let pm = p.matrix();
    if a.rows() != pm.rows() || a.cols() != pm.cols() {
        return Err(Error::DimensionMismatch {
            expected: pm.rows(),
            got: a.rows(),
        });
    }
    let (idx, pivot) = pm
        .data()
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if p.rank() == 0 || pivot < 1e-12 {
        return Err(Error::ZeroRankProjector);
    }
    let mu = a.data()[idx] / pm.data()[idx];
    let residual = a.max_abs_diff(&pm.scale(mu));
    Ok((mu, residual))
}

/// Returns `mu` if `a = mu P` entrywise within `tol`.
pub fn is_scalar_multiple_of_projector(a: &Matrix, p: &Projector, tol: f64) -> Result<Option<C64>> {
    let (mu, residual) = scalar_fit(a, p)?;
    Ok((residual <= tol).then_some(mu))
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Seeded random full-rank state `G G^dagger / tr(G G^dagger)` with `G` a
/// complex Gaussian matrix drawn from ChaCha8.
pub fn random_density(n_qubits: usize, seed: u64) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(dim, dim, &mut rng);
    let mut gg = g.dot(&g.dagger());
    // exact Hermitian symmetrisation
    for r in 0..dim {
        gg[(r, r)].im = 0.0;
        for c in r + 1..dim {
            let z = gg[(r, c)];
            gg[(c, r)] = z.conj();
        }
    }
    let tr = gg.trace().re;
    DensityMatrix(gg.scale(C64::new(1.0 / tr, 0.0)))
}

/// Seeded random isometry from `2^k` into `2^n` dimensions (Gram-Schmidt on
/// Gaussian columns).
pub fn random_isometry(n_qubits: usize, k_qubits: usize, seed: u64) -> Result<Isometry> {
    let rows = 1usize << n_qubits;
    let cols = 1usize << k_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(rows, cols, &mut rng);
    let mut basis: Vec<Ket> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut v = g.column(c);
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.inner(&v);
                v = Ket {
                    amps: v.amps.iter().zip(&b.amps).map(|(x, y)| x - overlap * y).collect(),
                };
            }
        }
        let norm = v.norm();
        basis.push(v.scale(C64::new(1.0 / norm, 0.0)));
    }
    Isometry::new(Matrix::from_columns(&basis)?, 1e-10)
}

//! Codes for fully correlated noise.
//!
//! * Odd `n`: the even-weight subspace carries `n - 1` data qubits. The
//!   encoder `R = [W | X_n W]` is a permutation matrix, and one ancilla
//!   collects the syndrome during decoding.
//! * Even `n`: the span of `(|e> + X_n|e>)/sqrt(2)` over even-weight `e`
//!   is left invariant by every error (up to a sign for `Y_n`), carrying
//!   `n - 2` data qubits with two idle ancillas.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{channel_apply, channel_compose, CorrelatedPauli, NoiseSpec};
use crate::state::{
    partial_trace_leading, partial_trace_trailing, scalar_fit, DensityMatrix, Isometry, Matrix, C64,
    MAX_DENSE_QUBITS, ONE, ZERO,
};

/// All `n`-bit strings with an even number of ones, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenWeightBasis {
    n: usize,
    members: Vec<usize>,
}

impl EvenWeightBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members rendered as bit strings, qubit 1 first.
    pub fn bit_strings(&self) -> Vec<String> {
        self.members.iter().map(|&m| format!("{m:0w$b}", w = self.n)).collect()
    }
}

pub fn even_weight_states(n: usize) -> Result<EvenWeightBasis> {
    if n == 0 || n > MAX_DENSE_QUBITS + 8 {
        return Err(Error::TooLarge {
            n,
            max: MAX_DENSE_QUBITS + 8,
        });
    }
    let members = (0..1usize << n).filter(|j| j.count_ones() % 2 == 0).collect();
    Ok(EvenWeightBasis { n, members })
}

fn check_odd(n: usize) -> Result<()> {
    if n.is_multiple_of(2) || n <= 2 || n > MAX_DENSE_QUBITS {
        return Err(Error::BadCodeSize {
            family: "odd",
            parity: "odd",
            n,
        });
    }
    Ok(())
}

fn check_even(n: usize) -> Result<()> {
    if n % 2 == 1 || n <= 2 || n > MAX_DENSE_QUBITS {
        return Err(Error::BadCodeSize {
            family: "even",
            parity: "even",
            n,
        });
    }
    Ok(())
}

/// Basis index of column `d` of `W`.
///
/// With `d = (d_1, ..., d_{n-1})` the codeword bits are `c_1 = d_1`,
/// `c_i = d_{i-1} xor d_i` and `c_n = d_{n-1}`, i.e. `c = d xor (d << 1)`.
/// Each `d_i` enters two bits, so `c` has even weight.
pub fn odd_codeword_index(d: usize) -> usize {
    d ^ (d << 1)
}

/// Encoding permutation: basis ket `|a, d>` goes to `perm[a * 2^(n-1) + d]`.
fn odd_permutation(n: usize) -> Vec<usize> {
    let half = 1usize << (n - 1);
    let mask = (1usize << n) - 1;
    (0..half)
        .map(odd_codeword_index)
        .chain((0..half).map(|d| !odd_codeword_index(d) & mask))
        .collect()
}

/// The `2^n x 2^(n-1)` encoding isometry of the odd-`n` code.
pub fn build_w(n: usize) -> Result<Isometry> {
    check_odd(n)?;
    let half = 1usize << (n - 1);
    let mut m = Matrix::zeros(1 << n, half);
    for d in 0..half {
        m[(odd_codeword_index(d), d)] = ONE;
    }
    Isometry::new(m, 0.0)
}

/// `R = [W | X_n W]`, a permutation matrix.
pub fn build_r(n: usize) -> Result<Matrix> {
    check_odd(n)?;
    Ok(Matrix::permutation(&odd_permutation(n)))
}

/// Odd-`n` code: `n - 1` data qubits, one ancilla.
#[derive(Clone, Debug, PartialEq)]
pub struct OddCode {
    n: usize,
    w: Isometry,
    r: Matrix,
}

impl OddCode {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            w: build_w(n)?,
            r: build_r(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> &Isometry {
        &self.w
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    /// `perm[c]` is the row of the single 1 in column `c` of `R`.
    pub fn permutation(&self) -> Vec<usize> {
        odd_permutation(self.n)
    }
}

/// Even-`n` decoherence-free code: `n - 2` data qubits, two ancillas.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenCode {
    n: usize,
    v: Isometry,
}

/// Leading-bit-0 representative of the complement pair for data `d`:
/// `|0, parity(d), d>`.
fn even_representative(n: usize, d: usize) -> usize {
    let p = (d.count_ones() % 2) as usize;
    (p << (n - 2)) | d
}

/// Data index `d = (d_1, ..., d_{n-2})` maps to
/// `(|0, p, d> + |1, !p, !d>)/sqrt(2)` with `p = parity(d)`.
pub fn build_even_code(n: usize) -> Result<EvenCode> {
    check_even(n)?;
    let cols = 1usize << (n - 2);
    let mask = (1usize << n) - 1;
    let amp = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut m = Matrix::zeros(1 << n, cols);
    for d in 0..cols {
        let e = even_representative(n, d);
        m[(e, d)] = amp;
        m[(!e & mask, d)] = amp;
    }
    Ok(EvenCode {
        n,
        v: Isometry::new(m, 1e-12)?,
    })
}

impl EvenCode {
    pub fn new(n: usize) -> Result<Self> {
        build_even_code(n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v(&self) -> &Isometry {
        &self.v
    }

    /// Unitary extending `V` off the `|00>`-ancilla subspace:
    /// `|a1, a2, d> -> (|0, a2^p, d> + (-1)^a1 |1, !(a2^p), !d>)/sqrt(2)`.
    pub fn completion(&self) -> Matrix {
        let n = self.n;
        let dim = 1usize << n;
        let mask = dim - 1;
        let data = 1usize << (n - 2);
        let amp = FRAC_1_SQRT_2;
        let mut u = Matrix::zeros(dim, dim);
        for col in 0..dim {
            let a1 = col >> (n - 1);
            let a2 = (col >> (n - 2)) & 1;
            let d = col & (data - 1);
            let e = even_representative(n, d) ^ (a2 << (n - 2));
            u[(e, col)] = C64::new(amp, 0.0);
            u[(!e & mask, col)] = C64::new(if a1 == 0 { amp } else { -amp }, 0.0);
        }
        u
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Odd,
    Even,
}

impl Family {
    pub fn for_n(n: usize) -> Family {
        if n % 2 == 1 {
            Family::Odd
        } else {
            Family::Even
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Odd => "odd",
            Family::Even => "even",
        })
    }
}

/// Wire form `{ "family": "odd" | "even", "n": N }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub family: Family,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Code {
    Odd(OddCode),
    Even(EvenCode),
}

impl Code {
    pub fn build(family: Family, n: usize) -> Result<Code> {
        match family {
            Family::Odd => OddCode::new(n).map(Code::Odd),
            Family::Even => EvenCode::new(n).map(Code::Even),
        }
    }

    pub fn from_descriptor(desc: &CodeDescriptor) -> Result<Code> {
        Self::build(desc.family, desc.n)
    }

    pub fn descriptor(&self) -> CodeDescriptor {
        CodeDescriptor {
            family: self.family(),
            n: self.n(),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Code::Odd(_) => Family::Odd,
            Code::Even(_) => Family::Even,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Code::Odd(c) => c.n,
            Code::Even(c) => c.n,
        }
    }

    pub fn ancillas(&self) -> usize {
        match self {
            Code::Odd(_) => 1,
            Code::Even(_) => 2,
        }
    }

    pub fn data_qubits(&self) -> usize {
        self.n() - self.ancillas()
    }

    pub fn isometry(&self) -> &Isometry {
        match self {
            Code::Odd(c) => &c.w,
            Code::Even(c) => &c.v,
        }
    }

    /// Unitary whose restriction to the all-zero ancilla subspace is the
    /// encoding isometry.
    pub fn unitary(&self) -> Matrix {
        match self {
            Code::Odd(c) => c.r.clone(),
            Code::Even(c) => c.completion(),
        }
    }
}

/// Outcome of the Knill-Laflamme test `P F_i^+ F_j P = mu_ij P`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KLReport {
    pub errors: Vec<String>,
    pub mu: Vec<Vec<C64>>,
    pub residuals: Vec<Vec<f64>>,
    pub pass: bool,
}

impl KLReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Largest `|mu_ij - conj(mu_ji)|`.
    pub fn mu_hermiticity(&self) -> f64 {
        let r = self.mu.len();
        let mut worst: f64 = 0.0;
        for i in 0..r {
            for j in 0..r {
                worst = worst.max((self.mu[i][j] - self.mu[j][i].conj()).norm());
            }
        }
        worst
    }
}

/// Knill-Laflamme check for the range of `code_isometry` against `errors`.
///
/// Failures are reported through [`KLReport::pass`]; only shape problems
/// are errors.
pub fn kl_check(code_isometry: &Isometry, errors: &[CorrelatedPauli], tol: f64) -> Result<KLReport> {
    let p = code_isometry.projector();
    let dense = errors
        .iter()
        .map(|e| {
            let m = e.matrix()?;
            if m.rows() != p.dim() {
                return Err(Error::DimensionMismatch {
                    expected: p.dim(),
                    got: m.rows(),
                });
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let r = errors.len();
    let mut mu = vec![vec![ZERO; r]; r];
    let mut residuals = vec![vec![0.0; r]; r];
    for i in 0..r {
        let fi_dag = dense[i].dagger();
        for j in 0..r {
            let sandwich = p.sandwich(&fi_dag.dot(&dense[j]))?;
            let (m, res) = scalar_fit(&sandwich, &p)?;
            mu[i][j] = m;
            residuals[i][j] = res;
        }
    }
    let pass = residuals.iter().flatten().all(|&x| x <= tol);
    Ok(KLReport {
        errors: errors.iter().map(|e| format!("{}_{}", e.kind(), e.n())).collect(),
        mu,
        residuals,
        pass,
    })
}

/// Decoded state split into ancilla and data factors.
///
/// The ancilla factor is scaled to unit trace so that `ancilla (x) data`
/// reproduces the output trace exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult {
    pub ancilla_state: DensityMatrix,
    pub data_state: DensityMatrix,
    /// `max |output - ancilla (x) data|`.
    pub product_residual: f64,
}

/// Encode, apply `channel`, decode, and factor the output.
pub fn recover_with(
    code: &Code,
    data_rho: &DensityMatrix,
    channel: impl FnOnce(&DensityMatrix) -> Result<DensityMatrix>,
) -> Result<RecoveryResult> {
    let data_qubits = code.data_qubits();
    if data_rho.n_qubits() != data_qubits || data_rho.dim() != 1 << data_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << data_qubits,
            got: data_rho.dim(),
        });
    }
    let ancillas = code.ancillas();
    let input = DensityMatrix::basis(1 << ancillas, 0).kron(data_rho);
    let u = code.unitary();
    let u_dag = u.dagger();
    let encoded = DensityMatrix::new(u.dot(input.matrix()).dot(&u_dag))?;
    let noisy = channel(&encoded)?;
    let output = DensityMatrix::new(u_dag.dot(noisy.matrix()).dot(&u))?;
    let ancilla_raw = partial_trace_trailing(&output, data_qubits)?;
    let ancilla_state = DensityMatrix::new(ancilla_raw.matrix().scale(ONE / ancilla_raw.trace()))?;
    let data_state = partial_trace_leading(&output, ancillas)?;
    let product_residual = output
        .matrix()
        .max_abs_diff(ancilla_state.kron(&data_state).matrix());
    Ok(RecoveryResult {
        ancilla_state,
        data_state,
        product_residual,
    })
}

/// `U^+ Phi(U (|0..0><0..0| (x) rho) U^+) U`, factored.
pub fn recover(code: &Code, spec: &NoiseSpec, data_rho: &DensityMatrix) -> Result<RecoveryResult> {
    recover_with(code, data_rho, |rho| channel_apply(spec, rho))
}

/// As [`recover`] with the channel applied `times` times.
pub fn recover_repeated(
    code: &Code,
    spec: &NoiseSpec,
    times: usize,
    data_rho: &DensityMatrix,
) -> Result<RecoveryResult> {
    recover_with(code, data_rho, |rho| channel_compose(spec, times, rho))
}

/// Expected decoded ancilla of the odd code:
/// `(p0 + p3)|0><0| + (p1 + p2)|1><1|`.
pub fn expected_odd_ancilla(spec: &NoiseSpec) -> DensityMatrix {
    let [p0, p1, p2, p3] = spec.probabilities();
    let m = Matrix::from_fn(2, 2, |r, c| match (r, c) {
        (0, 0) => C64::new(p0 + p3, 0.0),
        (1, 1) => C64::new(p1 + p2, 0.0),
        _ => ZERO,
    });
    DensityMatrix::new(m).expect("2x2 is a valid qubit dimension")
}

/// How an error looks after decoding: `R^+ E R = A (x) I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Syndrome {
    /// Decoded ancilla bit: 0 for a diagonal `A`, 1 for an anti-diagonal one.
    pub ancilla_bit: u8,
    /// The 2x2 block `A`.
    pub block: Matrix,
    /// `max |R^+ E R - A (x) I|`.
    pub residual: f64,
}

impl Syndrome {
    /// `A (x) I` on the full space.
    pub fn residual_action(&self, data_qubits: usize) -> Matrix {
        self.block.kron(&Matrix::identity(1 << data_qubits))
    }
}

/// Computes `R^+ E R` and factors it as a single-qubit block on the ancilla.
pub fn syndrome_of(code: &OddCode, error: &CorrelatedPauli) -> Result<Syndrome> {
    if error.n() != code.n {
        return Err(Error::DimensionMismatch {
            expected: code.n,
            got: error.n(),
        });
    }
    const TOL: f64 = 1e-12;
    let m = code.r.dagger().dot(&error.matrix()?).dot(&code.r);
    let data = 1usize << (code.n - 1);
    let block = Matrix::from_fn(2, 2, |a, b| m[(a * data, b * data)]);
    let residual = m.max_abs_diff(&block.kron(&Matrix::identity(data)));
    if residual > TOL {
        return Err(Error::SyndromeFactorization(residual));
    }
    let unit = |z: C64| (z.norm() - 1.0).abs() <= TOL;
    let small = |z: C64| z.norm() <= TOL;
    let ancilla_bit = if small(block[(0, 1)]) && small(block[(1, 0)]) && unit(block[(0, 0)]) && unit(block[(1, 1)]) {
        0
    } else if small(block[(0, 0)]) && small(block[(1, 1)]) && unit(block[(0, 1)]) && unit(block[(1, 0)]) {
        1
    } else {
        return Err(Error::SyndromeFactorization(residual));
    };
    Ok(Syndrome {
        ancilla_bit,
        block,
        residual,
    })
}

//! Fully correlated Pauli operators `X_n`, `Y_n`, `Z_n` and the mixed-unitary
//! channel they generate.
//!
//! Operators act on basis indices directly:
//!
//! * `X_n |j> = |~j>`
//! * `Z_n |j> = (-1)^popcount(j) |j>`
//! * `Y_n |j> = i^n (-1)^popcount(j) |~j>`
//!
//! where `~j` complements all `n` bits. The `Y_n` phase follows from
//! `sigma_y |0> = i|1>` and `sigma_y |1> = -i|0>` on every factor.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, Ket, Matrix, C64, MAX_DENSE_QUBITS, ONE, ZERO};

/// Tolerance on `sum(p) = 1`.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub const ALL: [PauliKind; 4] = [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z];

    /// (x, z) symplectic bits; `Y` carries both.
    fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }

    /// Index into a [`NoiseSpec`] probability vector.
    pub fn noise_index(self) -> usize {
        match self {
            PauliKind::I => 0,
            PauliKind::X => 1,
            PauliKind::Y => 2,
            PauliKind::Z => 3,
        }
    }

    /// Single-qubit product `sigma_a sigma_b = i^k sigma_c`, returning `(c, k)`.
    fn single_product(a: PauliKind, b: PauliKind) -> (PauliKind, u8) {
        use PauliKind::*;
        let (ax, az) = a.bits();
        let (bx, bz) = b.bits();
        let c = PauliKind::from_bits(ax ^ bx, az ^ bz);
        let k = match (a, b) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        };
        (c, k)
    }
}

impl fmt::Display for PauliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliKind::I => "I",
            PauliKind::X => "X",
            PauliKind::Y => "Y",
            PauliKind::Z => "Z",
        };
        f.write_str(s)
    }
}

impl FromStr for PauliKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(PauliKind::I),
            "X" => Ok(PauliKind::X),
            "Y" => Ok(PauliKind::Y),
            "Z" => Ok(PauliKind::Z),
            other => Err(Error::Parse {
                line: 1,
                msg: format!("unknown Pauli `{other}`"),
            }),
        }
    }
}

/// `i^k` as a complex number.
pub fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => ONE,
        1 => C64::new(0.0, 1.0),
        2 => -ONE,
        _ => C64::new(0.0, -1.0),
    }
}

#[inline]
fn parity_sign(j: usize) -> f64 {
    if j.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// The same Pauli on every one of `n` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrelatedPauli {
    kind: PauliKind,
    n: usize,
}

impl CorrelatedPauli {
    pub fn new(kind: PauliKind, n: usize) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize {
            return Err(Error::InvalidGate(format!("correlated Pauli on {n} qubits")));
        }
        Ok(Self { kind, n })
    }

    /// `{I, X_n, Y_n, Z_n}`, the error set of the correlated channel.
    pub fn error_set(n: usize) -> Result<Vec<Self>> {
        PauliKind::ALL.iter().map(|&k| Self::new(k, n)).collect()
    }

    pub fn kind(&self) -> PauliKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn mask(&self) -> usize {
        (1usize << self.n) - 1
    }

    /// Applies the operator to `v` by index permutation and phases.
    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        let dim = 1usize << self.n;
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
        let mask = self.mask();
        let amps = v.amplitudes();
        let mut out = vec![ZERO; dim];
        match self.kind {
            PauliKind::I => out.copy_from_slice(amps),
            PauliKind::X => {
                for (j, &a) in amps.iter().enumerate() {
                    out[!j & mask] = a;
                }
            }
            PauliKind::Z => {
                for (j, &a) in amps.iter().enumerate() {
                    out[j] = a * parity_sign(j);
                }
            }
            PauliKind::Y => {
                let global = i_pow(self.n as u32);
                for (j, &a) in amps.iter().enumerate() {
                    out[!j & mask] = a * global * parity_sign(j);
                }
            }
        }
        Ket::new(out)
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn matrix(&self) -> Result<Matrix> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                n: self.n,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.n;
        let mask = self.mask();
        let global = i_pow(self.n as u32);
        let mut m = Matrix::zeros(dim, dim);
        for j in 0..dim {
            match self.kind {
                PauliKind::I => m[(j, j)] = ONE,
                PauliKind::X => m[(!j & mask, j)] = ONE,
                PauliKind::Z => m[(j, j)] = C64::new(parity_sign(j), 0.0),
                PauliKind::Y => m[(!j & mask, j)] = global * parity_sign(j),
            }
        }
        Ok(m)
    }

    /// Returns `(c, phase)` with `self * rhs = phase * c`.
    pub fn product_phase(&self, rhs: &CorrelatedPauli) -> Result<(CorrelatedPauli, C64)> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.n,
            });
        }
        let (kind, k) = PauliKind::single_product(self.kind, rhs.kind);
        let phase = i_pow((k as u32 * (self.n as u32 % 4)) % 4);
        Ok((CorrelatedPauli { kind, n: self.n }, phase))
    }
}

/// Dense matrix of `op`.
pub fn pauli_matrix(op: &CorrelatedPauli) -> Result<Matrix> {
    op.matrix()
}

/// Applies `op` to `v` without building a matrix.
pub fn apply_correlated(op: &CorrelatedPauli, v: &Ket) -> Result<Ket> {
    op.apply(v)
}

/// `a * b = phase * c`.
pub fn product_phase(a: &CorrelatedPauli, b: &CorrelatedPauli) -> Result<(CorrelatedPauli, C64)> {
    a.product_phase(b)
}

/// Probabilities `(p0, p1, p2, p3)` of `I`, `X_n`, `Y_n`, `Z_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    p: [f64; 4],
    relaxed: bool,
}

/// Wire form `{ "p": [p0, p1, p2, p3] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpecJson {
    pub p: [f64; 4],
}

impl NoiseSpec {
    /// Strict spec: every probability must be positive.
    pub fn new(p: [f64; 4]) -> Result<Self> {
        Self::with_mode(p, false)
    }

    /// Relaxed spec: zero probabilities are allowed.
    pub fn relaxed(p: [f64; 4]) -> Result<Self> {
        Self::with_mode(p, true)
    }

    pub fn with_mode(p: [f64; 4], relaxed: bool) -> Result<Self> {
        for (i, &x) in p.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidNoise(format!("p{i} is not finite")));
            }
            if x < 0.0 || (!relaxed && x <= 0.0) {
                let bound = if relaxed { ">= 0" } else { "> 0" };
                return Err(Error::InvalidNoise(format!("p{i} = {x} must be {bound}")));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidNoise(format!("probabilities sum to {sum}")));
        }
        Ok(Self { p, relaxed })
    }

    pub fn identity() -> Self {
        Self {
            p: [1.0, 0.0, 0.0, 0.0],
            relaxed: true,
        }
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    pub fn prob(&self, kind: PauliKind) -> f64 {
        self.p[kind.noise_index()]
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    pub fn to_json(&self) -> NoiseSpecJson {
        NoiseSpecJson { p: self.p }
    }

    pub fn from_json(j: &NoiseSpecJson, relaxed: bool) -> Result<Self> {
        Self::with_mode(j.p, relaxed)
    }

    /// Effective spec of applying `self` and then `next`.
    ///
    /// The errors form the group `{I, X, Y, Z}` up to phases, and phases
    /// cancel under conjugation, so the composite channel is again of the
    /// correlated form.
    pub fn then(&self, next: &NoiseSpec) -> NoiseSpec {
        let mut q = [0.0; 4];
        for a in PauliKind::ALL {
            for b in PauliKind::ALL {
                let (c, _) = PauliKind::single_product(a, b);
                q[c.noise_index()] += self.prob(a) * next.prob(b);
            }
        }
        NoiseSpec {
            p: q,
            relaxed: self.relaxed || next.relaxed,
        }
    }

    /// Effective spec of `times` repeated applications.
    pub fn power(&self, times: usize) -> Result<NoiseSpec> {
        if times == 0 {
            return Err(Error::InvalidNoise("channel must be applied at least once".into()));
        }
        let mut acc = *self;
        for _ in 1..times {
            acc = acc.then(self);
        }
        Ok(acc)
    }
}

/// `p0 rho + p1 X rho X^+ + p2 Y rho Y^+ + p3 Z rho Z^+`, evaluated entrywise.
///
/// Entry `(j, k)` of `X rho X^+` is `rho(~j, ~k)`, of `Z rho Z^+` is
/// `s(j) s(k) rho(j, k)`, and of `Y rho Y^+` is `s(j) s(k) rho(~j, ~k)`,
/// with `s(j) = (-1)^popcount(j)`.
pub fn channel_apply(spec: &NoiseSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dim = rho.dim();
    let mask = dim - 1;
    let m = rho.matrix();
    let [p0, p1, p2, p3] = spec.p;
    let out = Matrix::from_fn(dim, dim, |j, k| {
        let direct = m[(j, k)];
        let flipped = m[(!j & mask, !k & mask)];
        let s = parity_sign(j) * parity_sign(k);
        let mut acc = direct * p0;
        acc += flipped * p1;
        acc += flipped * (p2 * s);
        acc += direct * (p3 * s);
        acc
    });
    DensityMatrix::new(out)
}

/// Applies the channel `times` times, through the effective single-step spec.
pub fn channel_compose(spec: &NoiseSpec, times: usize, rho: &DensityMatrix) -> Result<DensityMatrix> {
    channel_apply(&spec.power(times)?, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{random_density, Ket};

    fn sigma(kind: PauliKind) -> Matrix {
        let i = C64::new(0.0, 1.0);
        let data = match kind {
            PauliKind::I => vec![ONE, ZERO, ZERO, ONE],
            PauliKind::X => vec![ZERO, ONE, ONE, ZERO],
            PauliKind::Y => vec![ZERO, -i, i, ZERO],
            PauliKind::Z => vec![ONE, ZERO, ZERO, -ONE],
        };
        Matrix::from_vec(2, 2, data).unwrap()
    }

    fn kron_oracle(kind: PauliKind, n: usize) -> Matrix {
        (1..n).fold(sigma(kind), |acc, _| acc.kron(&sigma(kind)))
    }

    fn p(kind: PauliKind, n: usize) -> CorrelatedPauli {
        CorrelatedPauli::new(kind, n).unwrap()
    }

    #[test]
    fn x3_flips_all_bits() {
        let out = p(PauliKind::X, 3).apply(&Ket::from_bits("000").unwrap()).unwrap();
        assert_eq!(out, Ket::from_bits("111").unwrap());
    }

    #[test]
    fn y3_on_zero_matches_kron() {
        let v = Ket::from_bits("000").unwrap();
        let out = p(PauliKind::Y, 3).apply(&v).unwrap();
        let expected = Ket::from_bits("111").unwrap().scale(C64::new(0.0, -1.0));
        assert_eq!(out, expected);
        assert_eq!(kron_oracle(PauliKind::Y, 3).apply(&v).unwrap(), expected);
    }

    #[test]
    fn z5_odd_popcount_flips_sign() {
        let v = Ket::from_bits("01101").unwrap();
        let out = p(PauliKind::Z, 5).apply(&v).unwrap();
        assert_eq!(out, v.scale(-ONE));
        assert_eq!(kron_oracle(PauliKind::Z, 5).apply(&v).unwrap(), out);
    }

    #[test]
    fn apply_rejects_wrong_dim() {
        let err = p(PauliKind::X, 3).apply(&Ket::basis(4, 0));
        assert_eq!(err, Err(Error::DimensionMismatch { expected: 8, got: 4 }));
    }

    #[test]
    fn small_matrices() {
        assert_eq!(pauli_matrix(&p(PauliKind::Z, 1)).unwrap(), sigma(PauliKind::Z));
        assert_eq!(pauli_matrix(&p(PauliKind::Y, 1)).unwrap(), sigma(PauliKind::Y));
        let x2 = pauli_matrix(&p(PauliKind::X, 2)).unwrap();
        assert_eq!(x2, Matrix::from_fn(4, 4, |r, c| if r + c == 3 { ONE } else { ZERO }));
    }

    #[test]
    fn dense_matches_kron_and_index_action() {
        for n in 1..=8 {
            for kind in PauliKind::ALL {
                let op = p(kind, n);
                let dense = op.matrix().unwrap();
                if n <= 6 {
                    assert_eq!(dense, kron_oracle(kind, n), "{kind} n={n}");
                }
                for j in 0..1usize << n {
                    let col = op.apply(&Ket::basis(1 << n, j)).unwrap();
                    assert_eq!(dense.column(j), col, "{kind} n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn dense_is_unitary_and_hermitian() {
        for n in 1..=6 {
            for kind in PauliKind::ALL {
                let m = p(kind, n).matrix().unwrap();
                assert!(m.unitarity_residual() < 1e-12);
                assert!(m.hermiticity_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn matrix_refuses_huge_n() {
        assert!(matches!(p(PauliKind::X, 13).matrix(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn squares_are_identity() {
        for n in 3..=6 {
            for kind in PauliKind::ALL {
                let (c, phase) = p(kind, n).product_phase(&p(kind, n)).unwrap();
                assert_eq!((c.kind(), phase), (PauliKind::I, ONE));
            }
        }
    }

    #[test]
    fn xy_product_even_and_odd() {
        let (c, phase) = p(PauliKind::X, 4).product_phase(&p(PauliKind::Y, 4)).unwrap();
        assert_eq!((c.kind(), phase), (PauliKind::Z, ONE));
        let (c, phase) = p(PauliKind::X, 3).product_phase(&p(PauliKind::Y, 3)).unwrap();
        assert_eq!(c.kind(), PauliKind::Z);
        // dense 8x8 product fixes the sign: X_3 Y_3 = -i Z_3
        let dense = kron_oracle(PauliKind::X, 3).dot(&kron_oracle(PauliKind::Y, 3));
        assert_eq!(dense, kron_oracle(PauliKind::Z, 3).scale(C64::new(0.0, -1.0)));
        assert_eq!(phase, C64::new(0.0, -1.0));
    }

    #[test]
    fn product_phase_exhaustive() {
        for n in [3, 4] {
            for a in PauliKind::ALL {
                for b in PauliKind::ALL {
                    let (c, phase) = p(a, n).product_phase(&p(b, n)).unwrap();
                    let lhs = kron_oracle(a, n).dot(&kron_oracle(b, n));
                    let rhs = kron_oracle(c.kind(), n).scale(phase);
                    assert!(lhs.max_abs_diff(&rhs) < 1e-14, "{a}{b} n={n}");
                }
            }
        }
    }

    #[test]
    fn commutation_depends_on_parity() {
        // sigma_a sigma_b = -sigma_b sigma_a for a != b, so the n-fold tensor
        // powers commute for even n and anticommute for odd n.
        for n in [3, 4, 5, 6] {
            let sign = if n % 2 == 0 { ONE } else { -ONE };
            for a in [PauliKind::X, PauliKind::Y, PauliKind::Z] {
                for b in [PauliKind::X, PauliKind::Y, PauliKind::Z] {
                    if a == b {
                        continue;
                    }
                    let (ma, mb) = (p(a, n).matrix().unwrap(), p(b, n).matrix().unwrap());
                    let ab = ma.dot(&mb);
                    let ba = mb.dot(&ma).scale(sign);
                    assert!(ab.max_abs_diff(&ba) < 1e-14, "{a}{b} n={n}");
                }
            }
        }
    }

    #[test]
    fn noise_spec_validation() {
        assert!(NoiseSpec::new([0.4, 0.3, 0.2, 0.1]).is_ok());
        assert!(NoiseSpec::new([1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(NoiseSpec::relaxed([1.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(NoiseSpec::relaxed([0.5, 0.6, -0.1, 0.0]).is_err());
        assert!(NoiseSpec::new([0.4, 0.3, 0.2, 0.2]).is_err());
        assert!(NoiseSpec::new([f64::NAN, 0.3, 0.2, 0.1]).is_err());
    }

    #[test]
    fn noise_spec_json_shape() {
        let spec = NoiseSpec::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        let text = serde_json::to_string(&spec.to_json()).unwrap();
        assert_eq!(text, r#"{"p":[0.4,0.3,0.2,0.1]}"#);
        let back: NoiseSpecJson = serde_json::from_str(&text).unwrap();
        assert_eq!(NoiseSpec::from_json(&back, false).unwrap(), spec);
    }

    fn dense_channel(spec: &NoiseSpec, rho: &DensityMatrix) -> Matrix {
        let n = rho.n_qubits();
        let mut acc = Matrix::zeros(rho.dim(), rho.dim());
        for kind in PauliKind::ALL {
            let e = kron_oracle(kind, n);
            let term = e.dot(rho.matrix()).dot(&e.dagger());
            acc = acc.add(&term.scale(C64::new(spec.prob(kind), 0.0))).unwrap();
        }
        acc
    }

    #[test]
    fn channel_matches_dense_conjugation() {
        let spec = NoiseSpec::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        for n in 1..=4 {
            let rho = random_density(n, 100 + n as u64);
            let out = channel_apply(&spec, &rho).unwrap();
            assert!(out.matrix().max_abs_diff(&dense_channel(&spec, &rho)) < 1e-14);
            assert!((out.trace() - rho.trace()).norm() < 1e-12);
            assert!(out.validate(1e-12));
            assert!(out.is_psd(crate::state::PSD_FLOOR));
        }
    }

    #[test]
    fn channel_trivial_cases() {
        let rho = random_density(3, 1);
        let out = channel_apply(&NoiseSpec::identity(), &rho).unwrap();
        assert_eq!(out, rho);

        let pure_z = NoiseSpec::relaxed([0.0, 0.0, 0.0, 1.0]).unwrap();
        let even = DensityMatrix::from_ket(&Ket::from_bits("0110").unwrap());
        assert_eq!(channel_apply(&pure_z, &even).unwrap(), even);
    }

    #[test]
    fn compose_pure_x_twice_is_identity() {
        let rho = random_density(3, 2);
        let pure_x = NoiseSpec::relaxed([0.0, 1.0, 0.0, 0.0]).unwrap();
        let out = channel_compose(&pure_x, 2, &rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let once = channel_compose(&pure_x, 1, &rho).unwrap();
        assert_eq!(once, channel_apply(&pure_x, &rho).unwrap());
        assert!(channel_compose(&pure_x, 0, &rho).is_err());
    }

    #[test]
    fn compose_matches_repeated_application() {
        let spec = NoiseSpec::new([0.55, 0.2, 0.15, 0.1]).unwrap();
        for n in [2, 3, 4] {
            let rho = random_density(n, 7);
            let mut brute = rho.clone();
            for _ in 0..3 {
                brute = channel_apply(&spec, &brute).unwrap();
            }
            let fast = channel_compose(&spec, 3, &rho).unwrap();
            assert!(fast.matrix().max_abs_diff(brute.matrix()) < 1e-10);
        }
        let sum: f64 = spec.power(5).unwrap().probabilities().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }
}

//! Gate-level encoding and recovery circuits over `{X, H, CNOT}`.
//!
//! Qubits are numbered from 1 (top wire, the first ancilla), and qubit `q`
//! of an `n`-qubit register is bit `n - q` of the basis index.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{Isometry, Ket, Matrix, C64};

/// Widest circuit that [`circuit_unitary`] will expand densely.
pub const MAX_UNITARY_QUBITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    X { target: usize },
    H { target: usize },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::X { target } | Gate::H { target } | Gate::Cnot { target, .. } => target,
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    fn validate(&self, n: usize) -> Result<()> {
        let in_range = |q: usize| (1..=n).contains(&q);
        let ok = match *self {
            Gate::X { target } | Gate::H { target } => in_range(target),
            Gate::Cnot { control, target } => in_range(control) && in_range(target) && control != target,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGate(format!("`{self}` on {n} qubits")))
        }
    }

    /// Applies the gate in place to a state of `n` qubits.
    fn apply(&self, n: usize, amps: &mut [C64]) {
        let bit = |q: usize| 1usize << (n - q);
        match *self {
            Gate::X { target } => {
                let t = bit(target);
                for j in 0..amps.len() {
                    if j & t == 0 {
                        amps.swap(j, j | t);
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (bit(control), bit(target));
                for j in 0..amps.len() {
                    if j & c != 0 && j & t == 0 {
                        amps.swap(j, j | t);
                    }
                }
            }
            Gate::H { target } => {
                let t = bit(target);
                for j in 0..amps.len() {
                    if j & t == 0 {
                        let (a, b) = (amps[j], amps[j | t]);
                        amps[j] = (a + b) * FRAC_1_SQRT_2;
                        amps[j | t] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::X { target } => write!(f, "x {target}"),
            Gate::H { target } => write!(f, "h {target}"),
            Gate::Cnot { control, target } => write!(f, "cnot {control} {target}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Self { n, gates })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, gates: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }

    /// Gates in reverse order; every gate in the set is self-inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// Runs the circuit on a state vector.
    pub fn run(&self, v: &Ket) -> Result<Ket> {
        let dim = 1usize << self.n;
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
        let mut amps = v.amplitudes().to_vec();
        for g in &self.gates {
            g.apply(self.n, &mut amps);
        }
        Ket::new(amps)
    }
}

/// Dense unitary of `c`, gates applied in list order.
pub fn circuit_unitary(c: &Circuit) -> Result<Matrix> {
    if c.n > MAX_UNITARY_QUBITS {
        return Err(Error::TooLarge {
            n: c.n,
            max: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << c.n;
    let columns = (0..dim)
        .map(|j| c.run(&Ket::basis(dim, j)))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(&columns)
}

fn check_parity(n: usize, odd: bool) -> Result<()> {
    if n <= 2 || (n % 2 == 1) != odd || n > MAX_UNITARY_QUBITS + 8 {
        let (family, parity) = if odd { ("odd", "odd") } else { ("even", "even") };
        return Err(Error::BadCodeSize { family, parity, n });
    }
    Ok(())
}

/// CNOT chain `CNOT(2->1), CNOT(3->2), ..., CNOT(n->n-1)`.
///
/// Acts as `R` on inputs with the ancilla (qubit 1) in `|0>`; the gate that
/// would act on a `|1>` ancilla is left out.
pub fn encode_circuit_odd(n: usize) -> Result<Circuit> {
    check_parity(n, true)?;
    Circuit::new(n, (1..n).map(|i| Gate::cnot(i + 1, i)).collect())
}

/// Inverse chain `CNOT(n->n-1), ..., CNOT(2->1)` followed by the
/// corrections `CNOT(1->j)` for odd `j` in `3..=n`. Its unitary is `R^+`.
pub fn recovery_circuit_odd(n: usize) -> Result<Circuit> {
    check_parity(n, true)?;
    let chain = (1..n).rev().map(|i| Gate::cnot(i + 1, i));
    let fixes = (3..=n).step_by(2).map(|j| Gate::cnot(1, j));
    Circuit::new(n, chain.chain(fixes).collect())
}

/// Parity onto qubit 2, Hadamard on qubit 1, then fan-out from qubit 1.
pub fn encode_circuit_even(n: usize) -> Result<Circuit> {
    check_parity(n, false)?;
    let parity = (3..=n).map(|j| Gate::cnot(j, 2));
    let fanout = (2..=n).map(|j| Gate::cnot(1, j));
    let gates = parity.chain(std::iter::once(Gate::H { target: 1 })).chain(fanout);
    Circuit::new(n, gates.collect())
}

/// Exact inverse of [`encode_circuit_even`].
pub fn recovery_circuit_even(n: usize) -> Result<Circuit> {
    Ok(encode_circuit_even(n)?.inverse())
}

/// `max_d || U (|0^a> (x) |d>) - target_d ||`, sensitive to global phase.
pub fn verify_subspace_equivalence(c: &Circuit, target: &Isometry, ancilla_bits: usize) -> Result<f64> {
    let dim = 1usize << c.n;
    if target.rows() != dim || ancilla_bits > c.n || target.cols() != 1 << (c.n - ancilla_bits) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: target.rows(),
        });
    }
    let mut worst: f64 = 0.0;
    for d in 0..target.cols() {
        let out = c.run(&Ket::basis(dim, d))?;
        worst = worst.max(out.distance(&target.column(d)));
    }
    Ok(worst)
}

/// One gate per line: `cnot <control> <target>`, `h <q>` or `x <q>`.
pub fn export_circuit(c: &Circuit) -> String {
    c.gates.iter().map(|g| format!("{g}\n")).collect()
}

/// Parses [`export_circuit`] output. Blank lines and `#` comments are
/// skipped. The width defaults to the largest qubit index used.
pub fn parse_circuit(text: &str, n: Option<usize>) -> Result<Circuit> {
    let mut gates = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let mut parts = line.split_whitespace();
        let op = parts.next().unwrap_or_default().to_ascii_lowercase();
        let args = parts
            .map(|a| a.parse::<usize>().map_err(|e| err(format!("bad qubit `{a}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let gate = match (op.as_str(), args.as_slice()) {
            ("x", &[target]) => Gate::X { target },
            ("h", &[target]) => Gate::H { target },
            ("cnot" | "cx", &[control, target]) => Gate::Cnot { control, target },
            _ => return Err(err(format!("cannot parse `{line}`"))),
        };
        gates.push(gate);
    }
    let width = n.unwrap_or_else(|| {
        gates
            .iter()
            .map(|g| match *g {
                Gate::Cnot { control, target } => control.max(target),
                other => other.target(),
            })
            .max()
            .unwrap_or(0)
    });
    Circuit::new(width, gates)
}

/// Ket `|a> (x) |d>` with `a` on the leading `ancilla_bits` qubits.
pub fn ancilla_data_ket(n: usize, ancilla_bits: usize, a: usize, d: usize) -> Ket {
    Ket::basis(1 << n, (a << (n - ancilla_bits)) | d)
}

/// `|d>` read off a basis ket if `v` is one up to phase.
pub fn as_basis_index(v: &Ket, tol: f64) -> Option<(usize, C64)> {
    let mut hit = None;
    for (j, &z) in v.amplitudes().iter().enumerate() {
        if z.norm() > tol {
            if hit.is_some() || (z.norm() - 1.0).abs() > tol {
                return None;
            }
            hit = Some((j, z));
        }
    }
    hit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{build_even_code, build_r, build_w};
    use crate::pauli::{CorrelatedPauli, PauliKind};
    use crate::state::ZERO;

    #[test]
    fn empty_circuit_is_identity() {
        assert_eq!(circuit_unitary(&Circuit::empty(3)).unwrap(), Matrix::identity(8));
    }

    #[test]
    fn cnot_swaps_10_and_11() {
        let c = Circuit::new(2, vec![Gate::cnot(1, 2)]).unwrap();
        assert_eq!(circuit_unitary(&c).unwrap(), Matrix::permutation(&[0, 1, 3, 2]));
    }

    #[test]
    fn hadamard_squared() {
        let c = Circuit::new(1, vec![Gate::H { target: 1 }, Gate::H { target: 1 }]).unwrap();
        assert!(circuit_unitary(&c).unwrap().max_abs_diff(&Matrix::identity(2)) < 1e-12);
    }

    #[test]
    fn x_gate_targets_msb_for_qubit_1() {
        let c = Circuit::new(3, vec![Gate::X { target: 1 }]).unwrap();
        assert_eq!(c.run(&Ket::from_bits("000").unwrap()).unwrap(), Ket::from_bits("100").unwrap());
    }

    #[test]
    fn invalid_gates() {
        assert!(Circuit::new(2, vec![Gate::cnot(1, 1)]).is_err());
        assert!(Circuit::new(2, vec![Gate::X { target: 3 }]).is_err());
        assert!(Circuit::new(2, vec![Gate::H { target: 0 }]).is_err());
        assert!(circuit_unitary(&Circuit::empty(11)).is_err());
    }

    #[test]
    fn encode_odd_matches_r_on_zero_ancilla() {
        for n in [3, 5, 7] {
            let c = encode_circuit_odd(n).unwrap();
            assert_eq!(c.cnot_count(), n - 1);
            let r = build_r(n).unwrap();
            for d in 0..1usize << (n - 1) {
                let out = c.run(&ancilla_data_ket(n, 1, 0, d)).unwrap();
                assert_eq!(out, r.column(d), "n={n} d={d}");
            }
            assert_eq!(verify_subspace_equivalence(&c, &build_w(n).unwrap(), 1).unwrap(), 0.0);
        }
    }

    #[test]
    fn encode_odd_differs_from_r_on_one_ancilla() {
        let c = encode_circuit_odd(3).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let r = build_r(3).unwrap();
        assert_ne!(u, r);
        let differs = (4..8).any(|j| u.column(j) != r.column(j));
        assert!(differs);
    }

    #[test]
    fn recovery_odd_is_r_dagger() {
        let c3 = recovery_circuit_odd(3).unwrap();
        assert_eq!(c3.gates(), &[Gate::cnot(3, 2), Gate::cnot(2, 1), Gate::cnot(1, 3)]);
        for n in [3, 5, 7] {
            let c = recovery_circuit_odd(n).unwrap();
            assert_eq!(c.cnot_count(), (n - 1) + (n - 1) / 2);
            assert_eq!(circuit_unitary(&c).unwrap(), build_r(n).unwrap().dagger());
        }
    }

    #[test]
    fn odd_pipeline_flags_x_error() {
        let n = 3;
        let enc = encode_circuit_odd(n).unwrap();
        let rec = recovery_circuit_odd(n).unwrap();
        let x = CorrelatedPauli::new(PauliKind::X, n).unwrap();
        for d in 0..4 {
            let out = rec.run(&x.apply(&enc.run(&ancilla_data_ket(n, 1, 0, d)).unwrap()).unwrap()).unwrap();
            let (idx, phase) = as_basis_index(&out, 1e-12).unwrap();
            assert_eq!(idx, 4 | d);
            assert!((phase.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn encode_even_matches_v() {
        let s = FRAC_1_SQRT_2;
        let c4 = encode_circuit_even(4).unwrap();
        let out = c4.run(&ancilla_data_ket(4, 2, 0, 0b00)).unwrap();
        let mut expected = vec![ZERO; 16];
        expected[0b0000] = C64::new(s, 0.0);
        expected[0b1111] = C64::new(s, 0.0);
        assert!(out.max_abs_diff(&Ket::new(expected).unwrap()) < 1e-15);
        let out = c4.run(&ancilla_data_ket(4, 2, 0, 0b01)).unwrap();
        let mut expected = vec![ZERO; 16];
        expected[0b0101] = C64::new(s, 0.0);
        expected[0b1010] = C64::new(s, 0.0);
        assert!(out.max_abs_diff(&Ket::new(expected).unwrap()) < 1e-15);

        for n in [4, 6] {
            let c = encode_circuit_even(n).unwrap();
            assert_eq!(c.cnot_count(), (n - 2) + (n - 1));
            assert_eq!(c.count(|g| matches!(g, Gate::H { .. })), 1);
            let code = build_even_code(n).unwrap();
            assert!(verify_subspace_equivalence(&c, code.v(), 2).unwrap() < 1e-12);
            // the full unitary is the completion used by the codes module
            assert!(circuit_unitary(&c).unwrap().max_abs_diff(&code.completion()) < 1e-15);
        }
    }

    #[test]
    fn recovery_even_inverts_encode() {
        let c = encode_circuit_even(6).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let ui = circuit_unitary(&recovery_circuit_even(6).unwrap()).unwrap();
        assert!(ui.dot(&u).max_abs_diff(&Matrix::identity(64)) < 1e-12);
    }

    #[test]
    fn parity_guards() {
        assert!(encode_circuit_odd(4).is_err());
        assert!(encode_circuit_odd(1).is_err());
        assert!(recovery_circuit_odd(2).is_err());
        assert!(encode_circuit_even(5).is_err());
        assert!(encode_circuit_even(2).is_err());
    }

    #[test]
    fn scrambled_order_is_detected() {
        let mut gates = encode_circuit_odd(5).unwrap().gates().to_vec();
        gates.reverse();
        let c = Circuit::new(5, gates).unwrap();
        assert!(verify_subspace_equivalence(&c, &build_w(5).unwrap(), 1).unwrap() >= 1.0);
    }

    #[test]
    fn identity_circuit_identity_isometry() {
        let res = verify_subspace_equivalence(&Circuit::empty(2), &Isometry::leading_columns(4, 4).unwrap(), 0).unwrap();
        assert_eq!(res, 0.0);
    }

    #[test]
    fn export_format() {
        let c = Circuit::new(2, vec![Gate::cnot(2, 1)]).unwrap();
        assert_eq!(export_circuit(&c), "cnot 2 1\n");
        assert_eq!(export_circuit(&Circuit::empty(3)), "");
        let mixed = Circuit::new(4, vec![Gate::H { target: 1 }, Gate::X { target: 4 }, Gate::cnot(3, 2)]).unwrap();
        assert_eq!(export_circuit(&mixed), "h 1\nx 4\ncnot 3 2\n");
    }

    #[test]
    fn parse_roundtrip_generated() {
        let all = [
            encode_circuit_odd(5).unwrap(),
            recovery_circuit_odd(7).unwrap(),
            encode_circuit_even(6).unwrap(),
            recovery_circuit_even(4).unwrap(),
        ];
        for c in all {
            let text = export_circuit(&c);
            let back = parse_circuit(&text, Some(c.n())).unwrap();
            assert_eq!(back, c);
            assert_eq!(circuit_unitary(&back).unwrap(), circuit_unitary(&c).unwrap());
        }
    }

    #[test]
    fn parse_errors_and_comments() {
        let c = parse_circuit("# header\n\ncnot 2 1  # chain\nH 3\n", None).unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.gates().len(), 2);
        assert!(matches!(parse_circuit("cnot 2\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_circuit("x 1\nfoo 3\n", None), Err(Error::Parse { line: 2, .. })));
        assert!(parse_circuit("cnot 1 3\n", Some(2)).is_err());
    }
}

//! Verification pipelines behind the `qcorr` command-line tool.
//!
//! Each `cmd_*` function returns a [`RunReport`]; the binary prints it and
//! maps `overall` to the exit status. Parameter problems surface as
//! [`Error`]s, which the binary reports as usage errors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::circuit::{
    ancilla_data_ket, circuit_unitary, encode_circuit_even, encode_circuit_odd, export_circuit, parse_circuit,
    recovery_circuit_even, recovery_circuit_odd, verify_subspace_equivalence, Circuit,
};
use crate::codes::{expected_odd_ancilla, kl_check, recover, Code, Family};
use crate::error::{Error, Result};
use crate::geometry::{ConvexRegion, RegionKind, SNAP_TOL};
use crate::json::MatrixJson;
use crate::nrange::{
    joint_membership, pair_eigenvalues, rank_k_range_bruteforce, rank_k_range_normal, EigenMultiset,
    EIGEN_MERGE_TOL,
};
use crate::pauli::{CorrelatedPauli, NoiseSpec, PauliKind};
use crate::state::{random_density, DensityMatrix, Matrix, C64};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default number of random input states for `verify`.
pub const DEFAULT_SEEDS: usize = 20;

/// Largest `n` accepted by `nrange`.
pub const MAX_NRANGE_QUBITS: usize = 6;

/// Largest `N = 2^n` for which `nrange` runs the brute-force cross-check.
pub const NRANGE_ORACLE_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual <= tol`.
    pub fn within(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tol,
            pass: residual <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub overall: bool,
    pub outputs: BTreeMap<String, Value>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            overall: true,
            outputs: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    fn output(&mut self, key: &str, value: impl Serialize) {
        self.outputs
            .insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    fn check(&mut self, c: Check) {
        self.overall &= c.pass;
        self.checks.push(c);
    }

    pub fn exit_code(&self) -> i32 {
        if self.overall {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are serialisable")
    }

    /// Human-readable summary, one line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}:", self.command);
        for (k, v) in &self.parameters {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {tag} {} residual={:e} tol={:e}\n", c.name, c.residual, c.tol));
        }
        out.push_str(if self.overall { "overall: PASS\n" } else { "overall: FAIL\n" });
        out
    }
}

fn complex_json(z: C64) -> Value {
    let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    json!([snap(z.re), snap(z.im)])
}

fn density_json(rho: &DensityMatrix) -> MatrixJson {
    MatrixJson::from_matrix(rho.matrix())
}

/// Builds `R` (odd) or `V` (even), optionally writing it to `out`.
pub fn cmd_build(family: Family, n: usize, out: Option<&Path>, tol: f64) -> Result<RunReport> {
    let code = Code::build(family, n)?;
    let mut report = RunReport::new("build");
    report.param("family", family);
    report.param("n", n);
    let matrix = match &code {
        Code::Odd(c) => {
            report.check(Check::within("unitarity", c.r().unitarity_residual(), 0.0));
            let entries_01 = c.r().data().iter().all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0));
            report.check(Check::within("permutation_entries", if entries_01 { 0.0 } else { 1.0 }, 0.0));
            c.r().clone()
        }
        Code::Even(c) => {
            report.check(Check::within("isometry", c.v().residual(), tol.min(1e-12)));
            c.v().matrix().clone()
        }
    };
    report.output("rows", matrix.rows());
    report.output("cols", matrix.cols());
    let payload = MatrixJson::from_matrix(&matrix);
    match out {
        Some(path) => {
            let text = serde_json::to_string(&payload)?;
            std::fs::write(path, text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
            report.output("written", path.display().to_string());
        }
        None => report.output("matrix", payload),
    }
    Ok(report)
}

/// Runs the encode-noise-decode pipeline on `seeds` random states.
pub fn cmd_verify(family: Family, n: usize, spec: &NoiseSpec, seeds: usize, seed: u64, tol: f64) -> Result<RunReport> {
    let code = Code::build(family, n)?;
    if seeds == 0 {
        return Err(Error::InvalidNoise("at least one seed is required".into()));
    }
    let mut report = RunReport::new("verify");
    report.param("family", family);
    report.param("n", n);
    report.param("p", spec.probabilities());
    report.param("relaxed", spec.is_relaxed());
    report.param("seeds", seeds);
    report.param("seed", seed);
    report.param("tol", tol);

    let expected_ancilla = match family {
        Family::Odd => expected_odd_ancilla(spec),
        Family::Even => DensityMatrix::basis(4, 0),
    };
    let (mut product, mut data, mut ancilla) = (0.0f64, 0.0f64, 0.0f64);
    let mut last_ancilla = None;
    for s in 0..seeds as u64 {
        let rho = random_density(code.data_qubits(), seed.wrapping_add(s));
        let res = recover(&code, spec, &rho)?;
        product = product.max(res.product_residual);
        data = data.max(res.data_state.matrix().max_abs_diff(rho.matrix()));
        ancilla = ancilla.max(res.ancilla_state.matrix().max_abs_diff(expected_ancilla.matrix()));
        last_ancilla = Some(res.ancilla_state);
    }
    report.check(Check::within("product_residual", product, tol));
    report.check(Check::within("data_residual", data, tol));
    report.check(Check::within("ancilla_residual", ancilla, tol));

    let kl = kl_check(code.isometry(), &CorrelatedPauli::error_set(n)?, tol)?;
    report.check(Check::within("knill_laflamme", kl.max_residual(), tol));
    if let Some(a) = last_ancilla {
        report.output("ancilla_state", density_json(&a));
    }
    report.output("expected_ancilla", density_json(&expected_ancilla));
    report.output("kl_mu", kl_mu_json(&kl.errors, &kl.mu));
    Ok(report)
}

fn kl_mu_json(labels: &[String], mu: &[Vec<C64>]) -> Value {
    json!({
        "errors": labels,
        "mu": mu.iter().map(|row| row.iter().map(|&z| complex_json(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn region_residual(a: &ConvexRegion, b: &ConvexRegion) -> f64 {
    if a.kind != b.kind {
        return f64::INFINITY;
    }
    if a.approx_eq(b, SNAP_TOL) {
        // largest vertex displacement under the best matching
        let d = |p: &crate::geometry::Point2, set: &[crate::geometry::Point2]| {
            set.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min)
        };
        let ab = a.vertices.iter().map(|p| d(p, &b.vertices)).fold(0.0, f64::max);
        let ba = b.vertices.iter().map(|p| d(p, &a.vertices)).fold(0.0, f64::max);
        ab.max(ba)
    } else {
        f64::INFINITY
    }
}

/// `Lambda_k(A, B)` through the eigenvalues of `A + iB`.
pub fn cmd_nrange(a: PauliKind, b: PauliKind, n: usize, k: usize) -> Result<RunReport> {
    if n == 0 || n > MAX_NRANGE_QUBITS {
        return Err(Error::TooLarge {
            n,
            max: MAX_NRANGE_QUBITS,
        });
    }
    let (pa, pb) = (CorrelatedPauli::new(a, n)?, CorrelatedPauli::new(b, n)?);
    let eigs = EigenMultiset::from_values(&pair_eigenvalues(&pa, &pb)?, EIGEN_MERGE_TOL);
    let region = rank_k_range_normal(&eigs, k)?.cleaned();

    let mut report = RunReport::new("nrange");
    report.param("pair", format!("{a}{b}"));
    report.param("n", n);
    report.param("k", k);
    if eigs.total() <= NRANGE_ORACLE_LIMIT {
        let brute = rank_k_range_bruteforce(&eigs, k)?;
        report.check(Check::within("bruteforce_agreement", region_residual(&region, &brute), SNAP_TOL));
    }
    let spectrum: Vec<Value> = eigs
        .entries()
        .iter()
        .map(|&(v, m)| json!({ "value": complex_json(v), "multiplicity": m }))
        .collect();
    report.output("eigenvalues", spectrum);
    report.output("region", &region);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Encode,
    Recover,
}

fn roundtrip_residual(c: &Circuit) -> Result<f64> {
    let back = parse_circuit(&export_circuit(c), Some(c.n()))?;
    Ok(circuit_unitary(&back)?.max_abs_diff(&circuit_unitary(c)?))
}

/// Emits an encoding or recovery circuit and checks it against the code.
pub fn cmd_circuit(family: Family, n: usize, role: Role) -> Result<RunReport> {
    let code = Code::build(family, n)?;
    let mut report = RunReport::new("circuit");
    report.param("family", family);
    report.param("n", n);
    report.param("role", role);
    let circuit = match (&code, role) {
        (Code::Odd(c), Role::Encode) => {
            let circ = encode_circuit_odd(n)?;
            report.check(Check::within("subspace_residual", verify_subspace_equivalence(&circ, c.w(), 1)?, 0.0));
            circ
        }
        (Code::Odd(c), Role::Recover) => {
            let circ = recovery_circuit_odd(n)?;
            let res = circuit_unitary(&circ)?.max_abs_diff(&c.r().dagger());
            report.check(Check::within("unitary_vs_r_dagger", res, 0.0));
            circ
        }
        (Code::Even(c), Role::Encode) => {
            let circ = encode_circuit_even(n)?;
            report.check(Check::within("subspace_residual", verify_subspace_equivalence(&circ, c.v(), 2)?, 1e-12));
            circ
        }
        (Code::Even(c), Role::Recover) => {
            let circ = recovery_circuit_even(n)?;
            let mut worst: f64 = 0.0;
            for d in 0..c.v().cols() {
                let out = circ.run(&c.v().column(d))?;
                worst = worst.max(out.distance(&ancilla_data_ket(n, 2, 0, d)));
            }
            report.check(Check::within("decodes_v_columns", worst, 1e-12));
            circ
        }
    };
    report.check(Check::within("export_roundtrip", roundtrip_residual(&circuit)?, 0.0));
    report.output("gates", circuit.gates().len());
    report.output("cnot_count", circuit.cnot_count());
    report.output("circuit", export_circuit(&circuit));
    Ok(report)
}

/// Knill-Laflamme report for the code against `{I, X_n, Y_n, Z_n}`.
pub fn cmd_kl(family: Family, n: usize, tol: f64) -> Result<RunReport> {
    let code = Code::build(family, n)?;
    let errors = CorrelatedPauli::error_set(n)?;
    let kl = kl_check(code.isometry(), &errors, tol)?;
    let mut report = RunReport::new("kl");
    report.param("family", family);
    report.param("n", n);
    report.param("tol", tol);
    report.check(Check::within("knill_laflamme", kl.max_residual(), tol));
    report.check(Check::within("mu_hermitian", kl.mu_hermiticity(), tol));

    // P X P, P Y P, P Z P as multiples of P
    let expected: [f64; 3] = match family {
        Family::Odd => [0.0, 0.0, 1.0],
        // Y_n = (-1)^(n/2) X_n Z_n, and both X_n and Z_n are +1 on the code
        Family::Even => [1.0, if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 }, 1.0],
    };
    let ops = [PauliKind::X, PauliKind::Y, PauliKind::Z]
        .iter()
        .map(|&k| CorrelatedPauli::new(k, n)?.matrix())
        .collect::<Result<Vec<Matrix>>>()?;
    match joint_membership(code.isometry(), &ops, tol)? {
        Some(point) => {
            let dev = point
                .a
                .iter()
                .zip(expected)
                .map(|(a, e)| (a - C64::new(e, 0.0)).norm())
                .fold(0.0, f64::max);
            report.check(Check::within("joint_range_point", dev, tol));
            report.output("joint_point", point.a.iter().map(|&z| complex_json(z)).collect::<Vec<_>>());
        }
        None => report.check(Check::within("joint_range_point", f64::INFINITY, tol)),
    }
    report.output("expected_point", expected);
    report.output("kl", kl_mu_json(&kl.errors, &kl.mu));
    report.output("rank", code.isometry().cols());
    Ok(report)
}

/// Parses a pair such as `XY` or `x,y`.
pub fn parse_pair(s: &str) -> Result<(PauliKind, PauliKind)> {
    let letters: Vec<char> = s.chars().filter(|c| c.is_ascii_alphabetic()).collect();
    match letters.as_slice() {
        [a, b] => Ok((a.to_string().parse()?, b.to_string().parse()?)),
        _ => Err(Error::Parse {
            line: 1,
            msg: format!("expected two Pauli letters, got `{s}`"),
        }),
    }
}

/// Kind tag of a region, for callers that only need the shape.
pub fn region_kind_name(r: &ConvexRegion) -> &'static str {
    match r.kind {
        RegionKind::Empty => "empty",
        RegionKind::Point => "point",
        RegionKind::Segment => "segment",
        RegionKind::Polygon => "polygon",
    }
}


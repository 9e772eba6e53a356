//! Acceptance suite: one line per criterion, then a single verdict.
//!
//! Run with `cargo test -p qcorr --test acceptance -- --nocapture` to see
//! the report.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qcorr::circuit::{
    ancilla_data_ket, as_basis_index, circuit_unitary, encode_circuit_even, encode_circuit_odd, recovery_circuit_odd,
    verify_subspace_equivalence,
};
use qcorr::codes::{build_even_code, build_r, build_w, kl_check, recover, recover_repeated, syndrome_of, Code, Family, OddCode};
use qcorr::geometry::{ConvexRegion, Point2};
use qcorr::nrange::{rank_k_range_bruteforce, rank_k_range_normal, square_multiset};
use qcorr::pauli::{CorrelatedPauli, NoiseSpec, PauliKind};
use qcorr::state::{random_density, DensityMatrix, Matrix, C64};

/// `R = sum |out><in|` for n = 3, as printed with the construction.
const R3: [(&str, &str); 8] = [
    ("000", "000"), ("011", "001"), ("110", "010"), ("101", "011"),
    ("111", "100"), ("100", "101"), ("001", "110"), ("010", "111"),
];

/// Same for n = 5.
const R5: [(&str, &str); 32] = [
    ("00000", "00000"), ("00011", "00001"), ("00110", "00010"), ("00101", "00011"),
    ("01100", "00100"), ("01111", "00101"), ("01010", "00110"), ("01001", "00111"),
    ("11000", "01000"), ("11011", "01001"), ("11110", "01010"), ("11101", "01011"),
    ("10100", "01100"), ("10111", "01101"), ("10010", "01110"), ("10001", "01111"),
    ("11111", "10000"), ("11100", "10001"), ("11001", "10010"), ("11010", "10011"),
    ("10011", "10100"), ("10000", "10101"), ("10101", "10110"), ("10110", "10111"),
    ("00111", "11000"), ("00100", "11001"), ("00001", "11010"), ("00010", "11011"),
    ("01011", "11100"), ("01000", "11101"), ("01101", "11110"), ("01110", "11111"),
];

const SEEDS: u64 = 20;

fn fixture_matrix(n: usize, map: &[(&str, &str)]) -> Matrix {
    let mut perm = vec![usize::MAX; 1 << n];
    for (out, inp) in map {
        perm[usize::from_str_radix(inp, 2).unwrap()] = usize::from_str_radix(out, 2).unwrap();
    }
    Matrix::permutation(&perm)
}

fn errors(n: usize) -> Vec<CorrelatedPauli> {
    CorrelatedPauli::error_set(n).unwrap()
}

fn pure(kind: PauliKind) -> NoiseSpec {
    let mut p = [0.0; 4];
    p[kind.noise_index()] = 1.0;
    NoiseSpec::relaxed(p).unwrap()
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    assert!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
    out
}

fn criterion_1() -> String {
    let expected = fixture_matrix(3, &R3);
    let r = timed(Duration::from_millis(1), || build_r(3).unwrap());
    assert_eq!(r, expected);
    assert_eq!(r.column(0b100), expected.column(0b100));
    "build_R(3) equals the 8-term map exactly".into()
}

fn criterion_2() -> String {
    let expected = fixture_matrix(5, &R5);
    let r = timed(Duration::from_millis(10), || build_r(5).unwrap());
    assert_eq!(r, expected);
    let col = r.column(0b11010);
    assert_eq!(col.amplitudes()[0b00001], C64::new(1.0, 0.0));
    "build_R(5) equals the 32-term map exactly".into()
}

fn criterion_3() -> String {
    let spec = NoiseSpec::new([0.4, 0.3, 0.2, 0.1]).unwrap();
    let half = Matrix::identity(2).scale(C64::new(0.5, 0.0));
    let mut worst: f64 = 0.0;
    timed(Duration::from_secs(30), || {
        for n in [3, 5, 7] {
            let code = Code::build(Family::Odd, n).unwrap();
            for seed in 0..SEEDS {
                let rho = random_density(n - 1, seed);
                let res = recover(&code, &spec, &rho).unwrap();
                let product = res.ancilla_state.kron(&rho);
                // output vs rho_a (x) rho, assembled from the recovered factors
                let ancilla_err = res.ancilla_state.matrix().max_abs_diff(&half);
                let data_err = res.data_state.matrix().max_abs_diff(rho.matrix());
                let r = res.product_residual.max(ancilla_err).max(data_err);
                assert!(r <= 1e-10, "n={n} seed={seed}: {r:e}");
                assert!(product.matrix().max_abs_diff(&half.kron(rho.matrix())) <= 1e-10);
                worst = worst.max(r);
            }
        }
    });
    format!("recovery identity n in {{3,5,7}}, max residual {worst:.2e}")
}

fn circuit_syndrome(n: usize, e: &CorrelatedPauli) -> u8 {
    let enc = encode_circuit_odd(n).unwrap();
    let rec = recovery_circuit_odd(n).unwrap();
    let mut bit = None;
    for d in 0..1usize << (n - 1) {
        let out = rec.run(&e.apply(&enc.run(&ancilla_data_ket(n, 1, 0, d)).unwrap()).unwrap()).unwrap();
        let (idx, phase) = as_basis_index(&out, 0.0).expect("decoded state is a basis ket");
        assert_eq!(phase.norm(), 1.0);
        assert_eq!(idx & ((1 << (n - 1)) - 1), d, "data must come back untouched");
        let b = (idx >> (n - 1)) as u8;
        assert!(bit.is_none() || bit == Some(b));
        bit = Some(b);
    }
    bit.unwrap()
}

fn criterion_4() -> String {
    for n in [3, 5] {
        let code = OddCode::new(n).unwrap();
        for e in errors(n) {
            let expected = match e.kind() {
                PauliKind::I | PauliKind::Z => 0,
                PauliKind::X | PauliKind::Y => 1,
            };
            assert_eq!(syndrome_of(&code, &e).unwrap().ancilla_bit, expected, "matrix path {e:?}");
            assert_eq!(circuit_syndrome(n, &e), expected, "circuit path {e:?}");
        }
    }
    "ancilla bit 0 for {I, Z_n}, 1 for {X_n, Y_n}; matrix and circuit paths".into()
}

fn criterion_5() -> String {
    let zero_zero = DensityMatrix::basis(4, 0);
    let mut worst: f64 = 0.0;
    for n in [4, 6] {
        let code = Code::build(Family::Even, n).unwrap();
        let mut specs: Vec<NoiseSpec> = PauliKind::ALL.iter().map(|&k| pure(k)).collect();
        specs.push(NoiseSpec::new([0.4, 0.3, 0.2, 0.1]).unwrap());
        for spec in &specs {
            for seed in 0..SEEDS {
                let rho = random_density(n - 2, seed);
                let res = recover(&code, spec, &rho).unwrap();
                let anc = res.ancilla_state.matrix().max_abs_diff(zero_zero.matrix());
                let data = res.data_state.matrix().max_abs_diff(rho.matrix());
                let r = anc.max(data).max(res.product_residual);
                assert!(r <= 1e-10, "n={n} {spec:?} seed={seed}: {r:e}");
                worst = worst.max(r);
            }
        }
    }
    format!("even n in {{4,6}} ancilla |00><00|, max residual {worst:.2e}")
}

fn criterion_6() -> String {
    let mut worst: f64 = 0.0;
    for n in [3, 5, 7] {
        let report = kl_check(&build_w(n).unwrap(), &errors(n), 1e-12).unwrap();
        assert!(report.pass);
        let mu = &report.mu[0];
        assert!(mu[1].norm() <= 1e-12 && mu[2].norm() <= 1e-12, "PXP = PYP = 0");
        assert!((mu[3] - C64::new(1.0, 0.0)).norm() <= 1e-12, "PZP = P");
        worst = worst.max(report.max_residual());
    }
    let code = build_even_code(4).unwrap();
    let report = kl_check(code.v(), &errors(4), 1e-12).unwrap();
    assert!(report.pass);
    for j in 1..4 {
        assert!((report.mu[0][j] - C64::new(1.0, 0.0)).norm() <= 1e-12, "PEP = P for E = {}", report.errors[j]);
    }
    worst = worst.max(report.max_residual());
    format!("KL odd n in {{3,5,7}} gives (0,0,1), even n=4 gives (1,1,1), max residual {worst:.2e}")
}

fn criterion_7() -> String {
    let eigs = square_multiset(4);
    timed(Duration::from_secs(5), || {
        let center = rank_k_range_normal(&eigs, 8).unwrap();
        assert!(center.approx_eq(&ConvexRegion::point(Point2::new(0.0, 0.0)), 1e-9), "{center:?}");
        for k in 1..=15 {
            let fast = rank_k_range_normal(&eigs, k).unwrap();
            let brute = rank_k_range_bruteforce(&eigs, k).unwrap();
            assert!(fast.approx_eq(&brute, 1e-9), "k={k}: {fast:?} vs {brute:?}");
        }
    });
    "Lambda_8 of {+-1+-i}x4 is {0}; agrees with brute force for k = 1..15".into()
}

fn criterion_8() -> String {
    let spec = NoiseSpec::new([0.4, 0.3, 0.2, 0.1]).unwrap();
    let mut worst: f64 = 0.0;
    for n in [3, 4] {
        let code = Code::build(Family::for_n(n), n).unwrap();
        for times in [2, 3, 5] {
            for seed in 0..SEEDS {
                let rho = random_density(code.data_qubits(), seed);
                let res = recover_repeated(&code, &spec, times, &rho).unwrap();
                let data = res.data_state.matrix().max_abs_diff(rho.matrix());
                let r = data.max(res.product_residual);
                assert!(r <= 1e-10, "n={n} times={times} seed={seed}: {r:e}");
                worst = worst.max(r);
            }
        }
    }
    format!("repeated noise times in {{2,3,5}}, n in {{3,4}}, max residual {worst:.2e}")
}

fn criterion_9() -> String {
    for n in [3, 5, 7] {
        let u = circuit_unitary(&recovery_circuit_odd(n).unwrap()).unwrap();
        assert_eq!(u, build_r(n).unwrap().dagger(), "n={n}");
    }
    let mut worst: f64 = 0.0;
    for n in [4, 6] {
        let code = build_even_code(n).unwrap();
        let r = verify_subspace_equivalence(&encode_circuit_even(n).unwrap(), code.v(), 2).unwrap();
        let enc = encode_circuit_even(n).unwrap();
        for d in 0..code.v().cols() {
            let out = enc.run(&ancilla_data_ket(n, 2, 0, d)).unwrap();
            assert!(out.max_abs_diff(&code.v().column(d)) <= 1e-12);
        }
        assert!(r <= 1e-12);
        worst = worst.max(r);
    }
    format!("recovery odd = R^dagger exactly (n = 3,5,7); even encoder matches V, residual {worst:.2e}")
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, fn() -> String); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (id, f) in criteria {
        match catch_unwind(AssertUnwindSafe(f)) {
            Ok(msg) => println!("[PASS] criterion {id}: {msg}"),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("[FAIL] criterion {id}: {msg}");
                failed.push(id);
            }
        }
    }
    println!("[N/A ] criterion 10: emptiness for all even n and CNOT minimality are out of scope");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! C ABI for `qcorr`.
//!
//! Objects cross the boundary as opaque handles (`QcorrCode`, `QcorrMatrix`,
//! `QcorrRegion`) created by `qcorr_*_new` style functions and released with
//! the matching `*_free`. Every fallible call returns a [`QcorrStatus`];
//! on failure a message is kept per thread and can be read with
//! [`qcorr_last_error`]. Complex arrays are interleaved `re, im` doubles in
//! row-major order.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use qcorr::circuit::{encode_circuit_even, encode_circuit_odd, export_circuit, recovery_circuit_even, recovery_circuit_odd};
use qcorr::codes::{kl_check, recover, syndrome_of, Code, Family};
use qcorr::geometry::{ConvexRegion, RegionKind};
use qcorr::nrange::normal_range_of_pair;
use qcorr::pauli::{channel_apply, CorrelatedPauli, NoiseSpec, PauliKind};
use qcorr::state::{DensityMatrix, Matrix};
use qcorr::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcorrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    CheckFailed = 4,
    Internal = 5,
}

/// Code family selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcorrFamily {
    Odd = 0,
    Even = 1,
}

/// Single-qubit Pauli letter repeated on every qubit.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcorrPauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

/// Circuit role selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcorrRole {
    Encode = 0,
    Recover = 1,
}

/// Region shape reported by [`qcorr_region_kind`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcorrRegionKind {
    Empty = 0,
    Point = 1,
    Segment = 2,
    Polygon = 3,
}

/// Opaque code handle.
pub struct QcorrCode {
    inner: Code,
}

/// Opaque dense complex matrix.
pub struct QcorrMatrix {
    inner: Matrix,
}

/// Opaque planar convex region.
pub struct QcorrRegion {
    inner: ConvexRegion,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QcorrStatus {
    match err {
        Error::DimensionMismatch { .. } | Error::NotPowerOfTwo(_) | Error::BadPartialTrace { .. } => {
            QcorrStatus::DimensionMismatch
        }
        Error::SyndromeFactorization(_) | Error::NotIsometry(_) | Error::NotProjector(_) => QcorrStatus::CheckFailed,
        _ => QcorrStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (QcorrStatus, String)>) -> QcorrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcorrStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QcorrStatus::Internal
        }
    }
}

fn lift<T>(r: qcorr::Result<T>) -> Result<T, (QcorrStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (QcorrStatus, String) {
    (QcorrStatus::NullPointer, "null pointer argument".into())
}

fn family(f: QcorrFamily) -> Family {
    match f {
        QcorrFamily::Odd => Family::Odd,
        QcorrFamily::Even => Family::Even,
    }
}

fn pauli(p: QcorrPauli) -> PauliKind {
    match p {
        QcorrPauli::I => PauliKind::I,
        QcorrPauli::X => PauliKind::X,
        QcorrPauli::Y => PauliKind::Y,
        QcorrPauli::Z => PauliKind::Z,
    }
}

/// # Safety
/// `ptr` must be null or point to `len` readable doubles.
unsafe fn read_complex(ptr: *const f64, len: usize) -> Result<Vec<Complex64>, (QcorrStatus, String)> {
    if ptr.is_null() {
        return Err(null());
    }
    let raw = std::slice::from_raw_parts(ptr, 2 * len);
    Ok(raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

/// # Safety
/// `ptr` must point to `2 * data.len()` writable doubles.
unsafe fn write_complex(ptr: *mut f64, data: &[Complex64]) {
    let out = std::slice::from_raw_parts_mut(ptr, 2 * data.len());
    for (chunk, z) in out.chunks_exact_mut(2).zip(data) {
        chunk[0] = z.re;
        chunk[1] = z.im;
    }
}

/// # Safety
/// `p` must be null or point to 4 readable doubles.
unsafe fn read_spec(p: *const f64, relaxed: bool) -> Result<NoiseSpec, (QcorrStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    let s = std::slice::from_raw_parts(p, 4);
    lift(NoiseSpec::with_mode([s[0], s[1], s[2], s[3]], relaxed))
}

/// Message for the most recent failure on this thread, or NULL. Owned by the
/// library and valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qcorr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds the odd (`n` odd > 2) or even (`n` even > 2) code.
///
/// # Safety
/// `out` must be a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn qcorr_code_new(fam: QcorrFamily, n: usize, out: *mut *mut QcorrCode) -> QcorrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let code = lift(Code::build(family(fam), n))?;
        *out = Box::into_raw(Box::new(QcorrCode { inner: code }));
        Ok(())
    })
}

/// # Safety
/// `code` must be NULL or a handle from [`qcorr_code_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcorr_code_free(code: *mut QcorrCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of physical qubits, 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcorr_code_n(code: *const QcorrCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.n())
}

/// Number of data qubits, 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcorr_code_data_qubits(code: *const QcorrCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.data_qubits())
}

/// Encoding isometry (`W` or `V`) as a new matrix handle.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_code_isometry(code: *const QcorrCode, out: *mut *mut QcorrMatrix) -> QcorrStatus {
    guard(|| {
        let code = code.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let m = code.inner.isometry().matrix().clone();
        *out = Box::into_raw(Box::new(QcorrMatrix { inner: m }));
        Ok(())
    })
}

/// Full encoding unitary (`R`, or the completion of `V`) as a new handle.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_code_unitary(code: *const QcorrCode, out: *mut *mut QcorrMatrix) -> QcorrStatus {
    guard(|| {
        let code = code.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        *out = Box::into_raw(Box::new(QcorrMatrix {
            inner: code.inner.unitary(),
        }));
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a matrix handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcorr_matrix_free(m: *mut QcorrMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcorr_matrix_rows(m: *const QcorrMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.rows())
}

/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcorr_matrix_cols(m: *const QcorrMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.cols())
}

/// Copies all entries into `buf` as interleaved `re, im` pairs, row-major.
/// `len` is the capacity of `buf` in doubles and must be at least
/// `2 * rows * cols`.
///
/// # Safety
/// `m` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qcorr_matrix_copy(m: *const QcorrMatrix, buf: *mut f64, len: usize) -> QcorrStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(null)?;
        if buf.is_null() {
            return Err(null());
        }
        let need = 2 * m.inner.data().len();
        if len < need {
            return Err((QcorrStatus::DimensionMismatch, format!("buffer holds {len} doubles, need {need}")));
        }
        write_complex(buf, m.inner.data());
        Ok(())
    })
}

/// Applies the correlated channel with probabilities `p[0..4]` to a
/// `dim x dim` density matrix.
///
/// # Safety
/// `p` must hold 4 doubles; `rho` and `out` must hold `2 * dim * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn qcorr_channel_apply(
    p: *const f64,
    relaxed: bool,
    rho: *const f64,
    dim: usize,
    out: *mut f64,
) -> QcorrStatus {
    guard(|| {
        let spec = read_spec(p, relaxed)?;
        if out.is_null() {
            return Err(null());
        }
        let m = lift(Matrix::from_vec(dim, dim, read_complex(rho, dim * dim)?))?;
        let rho = lift(DensityMatrix::new(m))?;
        let res = lift(channel_apply(&spec, &rho))?;
        write_complex(out, res.matrix().data());
        Ok(())
    })
}

/// Encodes `rho` (dimension `2^data_qubits`), applies the channel, decodes,
/// and writes the decoded data factor to `data_out` (same size as `rho`),
/// the ancilla factor to `ancilla_out` (2x2 for odd codes, 4x4 for even
/// codes; may be NULL) and the product residual to `residual`.
///
/// # Safety
/// Pointers must be valid for the sizes described above.
#[no_mangle]
pub unsafe extern "C" fn qcorr_recover(
    code: *const QcorrCode,
    p: *const f64,
    relaxed: bool,
    rho: *const f64,
    dim: usize,
    data_out: *mut f64,
    ancilla_out: *mut f64,
    residual: *mut f64,
) -> QcorrStatus {
    guard(|| {
        let code = code.as_ref().ok_or_else(null)?;
        let spec = read_spec(p, relaxed)?;
        if data_out.is_null() || residual.is_null() {
            return Err(null());
        }
        let m = lift(Matrix::from_vec(dim, dim, read_complex(rho, dim * dim)?))?;
        let rho = lift(DensityMatrix::new(m))?;
        let res = lift(recover(&code.inner, &spec, &rho))?;
        write_complex(data_out, res.data_state.matrix().data());
        if !ancilla_out.is_null() {
            write_complex(ancilla_out, res.ancilla_state.matrix().data());
        }
        *residual = res.product_residual;
        Ok(())
    })
}

/// Knill-Laflamme check against `{I, X_n, Y_n, Z_n}`. Writes the verdict and
/// the largest residual; `mu_out`, if non-NULL, receives the 4x4 matrix of
/// scalars as 32 interleaved doubles.
///
/// # Safety
/// `pass` and `max_residual` must be writable; `mu_out` NULL or 32 doubles.
#[no_mangle]
pub unsafe extern "C" fn qcorr_kl_check(
    code: *const QcorrCode,
    tol: f64,
    pass: *mut bool,
    max_residual: *mut f64,
    mu_out: *mut f64,
) -> QcorrStatus {
    guard(|| {
        let code = code.as_ref().ok_or_else(null)?;
        if pass.is_null() || max_residual.is_null() {
            return Err(null());
        }
        let errors = lift(CorrelatedPauli::error_set(code.inner.n()))?;
        let report = lift(kl_check(code.inner.isometry(), &errors, tol))?;
        *pass = report.pass;
        *max_residual = report.max_residual();
        if !mu_out.is_null() {
            let flat: Vec<Complex64> = report.mu.iter().flatten().copied().collect();
            write_complex(mu_out, &flat);
        }
        Ok(())
    })
}

/// Decoded ancilla bit for error `err` on an odd code.
///
/// # Safety
/// `code` must be a live handle and `bit` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_syndrome(code: *const QcorrCode, err: QcorrPauli, bit: *mut u8) -> QcorrStatus {
    guard(|| {
        let code = code.as_ref().ok_or_else(null)?;
        if bit.is_null() {
            return Err(null());
        }
        let odd = match &code.inner {
            Code::Odd(c) => c,
            Code::Even(_) => {
                return Err((QcorrStatus::InvalidArgument, "syndromes are defined for odd codes".into()));
            }
        };
        let e = lift(CorrelatedPauli::new(pauli(err), odd.n()))?;
        *bit = lift(syndrome_of(odd, &e))?.ancilla_bit;
        Ok(())
    })
}

/// Rank-`k` numerical range of `A_n + i B_n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_nrange_pair(
    a: QcorrPauli,
    b: QcorrPauli,
    n: usize,
    k: usize,
    out: *mut *mut QcorrRegion,
) -> QcorrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let pa = lift(CorrelatedPauli::new(pauli(a), n))?;
        let pb = lift(CorrelatedPauli::new(pauli(b), n))?;
        let region = lift(normal_range_of_pair(&pa, &pb, k))?.cleaned();
        *out = Box::into_raw(Box::new(QcorrRegion { inner: region }));
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a region handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcorr_region_free(r: *mut QcorrRegion) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcorr_region_kind(r: *const QcorrRegion) -> QcorrRegionKind {
    match r.as_ref().map(|r| r.inner.kind) {
        None | Some(RegionKind::Empty) => QcorrRegionKind::Empty,
        Some(RegionKind::Point) => QcorrRegionKind::Point,
        Some(RegionKind::Segment) => QcorrRegionKind::Segment,
        Some(RegionKind::Polygon) => QcorrRegionKind::Polygon,
    }
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcorr_region_vertex_count(r: *const QcorrRegion) -> usize {
    r.as_ref().map_or(0, |r| r.inner.vertices.len())
}

/// Writes vertex `i` (counter-clockwise order) to `x`, `y`.
///
/// # Safety
/// `r` must be a live handle; `x` and `y` writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_region_vertex(r: *const QcorrRegion, i: usize, x: *mut f64, y: *mut f64) -> QcorrStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(null)?;
        if x.is_null() || y.is_null() {
            return Err(null());
        }
        let v = r
            .inner
            .vertices
            .get(i)
            .ok_or((QcorrStatus::InvalidArgument, format!("vertex {i} out of range")))?;
        *x = v.x;
        *y = v.y;
        Ok(())
    })
}

/// Encoding or recovery circuit in the line format (`cnot 2 1` ...). The
/// returned string must be released with [`qcorr_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcorr_circuit_text(
    fam: QcorrFamily,
    n: usize,
    role: QcorrRole,
    out: *mut *mut c_char,
) -> QcorrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let circ = lift(match (fam, role) {
            (QcorrFamily::Odd, QcorrRole::Encode) => encode_circuit_odd(n),
            (QcorrFamily::Odd, QcorrRole::Recover) => recovery_circuit_odd(n),
            (QcorrFamily::Even, QcorrRole::Encode) => encode_circuit_even(n),
            (QcorrFamily::Even, QcorrRole::Recover) => recovery_circuit_even(n),
        })?;
        let text = CString::new(export_circuit(&circ)).map_err(|e| (QcorrStatus::Internal, e.to_string()))?;
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcorr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

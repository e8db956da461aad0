//! C ABI over `zccs-core`.
//!
//! Matrices cross the boundary as opaque `ZccsMatrix` handles. Every fallible
//! function returns a `ZccsStatus`; on failure the message is kept per thread
//! and can be read with `zccs_last_error_message`. Strings handed out by the
//! library are NUL-terminated and must be released with `zccs_string_free`,
//! handles with `zccs_matrix_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zccs_core::bh::BhMatrix;
use zccs_core::constructions::{extend_zcz, seed_zpu};
use zccs_core::correlation::{check_optimal, is_zpu, zcz_width};
use zccs_core::io::{CodeSetDocument, Format};
use zccs_core::polymat::PolyMatrix;
use zccs_core::recipe::{evaluate, FileLoader, Recipe};
use zccs_core::report::VerifySummary;
use zccs_core::Error;

/// Outcome of a library call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZccsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Precondition = 4,
    NotUnimodular = 5,
    Overflow = 6,
    Internal = 7,
}

/// A polynomial code matrix together with the zone width its construction guarantees.
pub struct ZccsMatrix {
    matrix: PolyMatrix,
    claimed_z: Option<usize>,
}

/// Verifier verdict. `energy` is meaningful only when `energy_is_integer` is set;
/// `bound` is 0 when the matrix has no zero correlation zone.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZccsVerdict {
    pub energy_is_integer: bool,
    pub energy: i64,
    pub zcz_width: usize,
    pub is_pu: bool,
    pub bound: usize,
    pub optimal: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ZccsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => ZccsStatus::Parse,
            Error::Precondition(_) | Error::NotDivisible { .. } | Error::ZoneOutOfRange { .. } => {
                ZccsStatus::Precondition
            }
            Error::NotUnimodular(_) => ZccsStatus::NotUnimodular,
            Error::CoefficientOverflow(_) => ZccsStatus::Overflow,
            _ => ZccsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ZccsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ZccsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ZccsStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            ZccsStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ZccsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn matrix_arg<'a>(p: *const ZccsMatrix) -> Result<&'a ZccsMatrix, Failure> {
    p.as_ref().ok_or_else(|| null("matrix"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure(ZccsStatus::Internal, "string holds a NUL byte".into()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_handle(out: *mut *mut ZccsMatrix, m: ZccsMatrix) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(m)))
}

fn document_of(m: &ZccsMatrix) -> Result<CodeSetDocument, Failure> {
    Ok(CodeSetDocument::from_matrix(&m.matrix)?.with_claimed_z(m.claimed_z))
}

/// Seed ZPU matrix from two catalog BH names (for example `"F3"` and `"BH63"`).
///
/// # Safety
/// `um` and `uk` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_seed_zpu(
    um: *const c_char,
    uk: *const c_char,
    out: *mut *mut ZccsMatrix,
) -> ZccsStatus {
    guard(|| {
        let um = BhMatrix::by_name(str_arg(um, "um")?)?;
        let uk = BhMatrix::by_name(str_arg(uk, "uk")?)?;
        let matrix = seed_zpu(&um, &uk)?;
        write_handle(
            out,
            ZccsMatrix {
                matrix,
                claimed_z: Some(um.order()),
            },
        )
    })
}

/// Extends a ZPU matrix with zone width `z` by the catalog BH matrix `um`.
/// Passing `z = 0` uses the handle's recorded width, or else its achieved width.
///
/// # Safety
/// `um` must be a NUL-terminated string, `g` a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_extend_zcz(
    um: *const c_char,
    g: *const ZccsMatrix,
    z: usize,
    out: *mut *mut ZccsMatrix,
) -> ZccsStatus {
    guard(|| {
        let um = BhMatrix::by_name(str_arg(um, "um")?)?;
        let g = matrix_arg(g)?;
        let z = match (z, g.claimed_z) {
            (0, Some(c)) => c,
            (0, None) => zcz_width(&g.matrix)?,
            (z, _) => z,
        };
        let matrix = extend_zcz(&um, &g.matrix, z)?;
        write_handle(
            out,
            ZccsMatrix {
                matrix,
                claimed_z: Some(z * um.order()),
            },
        )
    })
}

/// Evaluates a JSON construction recipe. String inputs in the recipe may name
/// catalog BH matrices or document files.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_construct_from_recipe_json(
    json: *const c_char,
    out: *mut *mut ZccsMatrix,
) -> ZccsStatus {
    guard(|| {
        let recipe: Recipe = serde_json::from_str(str_arg(json, "json")?)
            .map_err(|e| Failure(ZccsStatus::Parse, format!("recipe: {e}")))?;
        let c = evaluate(&recipe, &mut FileLoader)?;
        write_handle(
            out,
            ZccsMatrix {
                matrix: c.matrix,
                claimed_z: c.claimed_z,
            },
        )
    })
}

/// Parses a code-set document in JSON or text-table form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_matrix_from_document(
    text: *const c_char,
    out: *mut *mut ZccsMatrix,
) -> ZccsStatus {
    guard(|| {
        let doc = CodeSetDocument::parse(str_arg(text, "text")?)?;
        let matrix = doc.to_matrix()?;
        write_handle(
            out,
            ZccsMatrix {
                matrix,
                claimed_z: doc.metadata.claimed_z,
            },
        )
    })
}

/// Serializes a matrix as a JSON document.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_matrix_to_document_json(
    m: *const ZccsMatrix,
    out: *mut *mut c_char,
) -> ZccsStatus {
    guard(|| write_string(out, document_of(matrix_arg(m)?)?.to_json()))
}

/// Serializes a matrix as a text table; `signs` selects `+`/`-` rows (binary only).
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_matrix_to_table(
    m: *const ZccsMatrix,
    signs: bool,
    out: *mut *mut c_char,
) -> ZccsStatus {
    guard(|| {
        let format = if signs { Format::Signs } else { Format::Table };
        write_string(out, document_of(matrix_arg(m)?)?.emit(format)?)
    })
}

/// Writes the phase modulus q, flock size M, set size K and length L.
///
/// # Safety
/// `m` must be a live handle; every output pointer must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_matrix_dims(
    m: *const ZccsMatrix,
    q: *mut u32,
    rows: *mut usize,
    cols: *mut usize,
    length: *mut usize,
) -> ZccsStatus {
    guard(|| {
        let grid = matrix_arg(m)?.matrix.to_time_domain()?;
        write_out(q, grid.modulus)?;
        write_out(rows, grid.rows)?;
        write_out(cols, grid.cols)?;
        write_out(length, grid.length)
    })
}

/// Copies the M·K·L exponents into `buf`, indexed `(k·M + m)·L + l`.
/// Fails with `InvalidArgument` when `capacity` is too small.
///
/// # Safety
/// `m` must be a live handle; `buf` must hold `capacity` writable `u32`s.
#[no_mangle]
pub unsafe extern "C" fn zccs_matrix_exponents(
    m: *const ZccsMatrix,
    buf: *mut u32,
    capacity: usize,
) -> ZccsStatus {
    guard(|| {
        let grid = matrix_arg(m)?.matrix.to_time_domain()?;
        let exps = grid.exponents();
        if capacity < exps.len() {
            return Err(Failure(
                ZccsStatus::InvalidArgument,
                format!("buffer holds {capacity} entries, {} needed", exps.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buffer"));
        }
        ptr::copy_nonoverlapping(exps.as_ptr(), buf, exps.len());
        Ok(())
    })
}

/// Writes whether the matrix is ZPU at zone width `z`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_is_zpu(m: *const ZccsMatrix, z: usize, out: *mut bool) -> ZccsStatus {
    guard(|| write_out(out, is_zpu(&matrix_arg(m)?.matrix, z)?))
}

/// Writes the achieved zero correlation zone width.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_zcz_width(m: *const ZccsMatrix, out: *mut usize) -> ZccsStatus {
    guard(|| write_out(out, zcz_width(&matrix_arg(m)?.matrix)?))
}

/// Runs the verifier and writes its verdict.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_check_optimal(
    m: *const ZccsMatrix,
    out: *mut ZccsVerdict,
) -> ZccsStatus {
    guard(|| {
        let r = check_optimal(&matrix_arg(m)?.matrix)?;
        let energy = r.energy.to_integer();
        write_out(
            out,
            ZccsVerdict {
                energy_is_integer: energy.is_some(),
                energy: energy.unwrap_or(0),
                zcz_width: r.zcz_width,
                is_pu: r.is_pu,
                bound: r.bound.unwrap_or(0),
                optimal: r.optimal,
            },
        )
    })
}

/// Full verifier report as JSON, including the first violation and the claim check.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zccs_report_json(
    m: *const ZccsMatrix,
    out: *mut *mut c_char,
) -> ZccsStatus {
    guard(|| {
        let m = matrix_arg(m)?;
        let summary = VerifySummary::new(&check_optimal(&m.matrix)?, m.claimed_z)?;
        let json = serde_json::to_string_pretty(&summary)
            .map_err(|e| Failure(ZccsStatus::Internal, e.to_string()))?;
        write_string(out, json)
    })
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next library call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn zccs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zccs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a matrix handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zccs_matrix_free(m: *mut ZccsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

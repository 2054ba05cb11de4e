//! C ABI for the surface classifier.
//!
//! Descriptors and reports are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`SsStatus`]; on failure a message is kept per thread and can be read
//! with [`ss_last_error_message`]. Strings handed out by the library are
//! released with [`ss_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use surface_semigroups::classifier::{ClassifyError, ModuliKind};
use surface_semigroups::cli::{render_machine, run_on_bytes, MachineOutput, Subcommand};
use surface_semigroups::fibration_numerics::{delta_invariant, FibrationData};
use surface_semigroups::lattice_tori::{fixed_point_count, CmScalar, FieldTag};
use surface_semigroups::ruled_numerics::{ext1_dim, intersect, is_ample, NumClass, RuledSurfaceData};
use surface_semigroups::schema::{parse_descriptor, serialize_descriptor, DescriptorError};
use surface_semigroups::{classify, explain, ClassificationReport, SurfaceDescriptor, Verdict};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    SchemaError = 4,
    InvalidDescriptor = 5,
    ActionInvalid = 6,
    InvalidArgument = 7,
    Overflow = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsVerdict {
    Yes = 0,
    No = 1,
    Conditional = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsModuliKind {
    IsolatedReducedPoints = 0,
    EllipticQuotient = 1,
    AbelianFactor = 2,
    FiniteSet = 3,
    Empty = 4,
    Unknown = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsSubcommand {
    Classify = 0,
    VerifyLaw = 1,
    Moduli = 2,
    Cone = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsField {
    Gaussian = 0,
    Eisenstein = 1,
    Generic = 2,
}

/// Opaque parsed surface descriptor.
pub struct SsDescriptor(SurfaceDescriptor);

/// Opaque classification report.
pub struct SsReport(ClassificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SsStatus, msg: impl Into<String>) -> SsStatus {
    set_last_error(msg);
    status
}

/// Runs `f`, turning a panic into [`SsStatus::Panic`].
fn guard(f: impl FnOnce() -> SsStatus) -> SsStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(SsStatus::Panic, "panic inside the library"),
    }
}

fn descriptor_status(e: &DescriptorError) -> SsStatus {
    match e {
        DescriptorError::Parse(_) => SsStatus::ParseError,
        DescriptorError::Schema { .. } => SsStatus::SchemaError,
    }
}

fn classify_status(e: &ClassifyError) -> SsStatus {
    match e {
        ClassifyError::InvalidDescriptor(_) => SsStatus::InvalidDescriptor,
        ClassifyError::ActionInvalid(_) => SsStatus::ActionInvalid,
        ClassifyError::Internal(_) => SsStatus::Internal,
    }
}

fn into_c_string(s: String) -> Result<*mut c_char, SsStatus> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(SsStatus::Internal, "output contains an interior NUL byte"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SsStatus> {
    if s.is_null() {
        return Err(fail(SsStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(SsStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(SsStatus::NullPointer, concat!("null pointer: ", stringify!($p)));
        })+
    };
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a JSON descriptor document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_descriptor_parse(json: *const c_char, out: *mut *mut SsDescriptor) -> SsStatus {
    guard(|| {
        non_null!(out);
        let text = tri!(read_str(json));
        match parse_descriptor(text.as_bytes()) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(SsDescriptor(d)));
                SsStatus::Ok
            }
            Err(e) => fail(descriptor_status(&e), e.to_string()),
        }
    })
}

/// Canonical JSON for a descriptor; free the result with [`ss_string_free`].
///
/// # Safety
/// `d` must be a live descriptor handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_descriptor_to_json(d: *const SsDescriptor, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        non_null!(d, out);
        *out = tri!(into_c_string(serialize_descriptor(&(*d).0)));
        SsStatus::Ok
    })
}

/// # Safety
/// `d` must be NULL or a handle from [`ss_descriptor_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_descriptor_free(d: *mut SsDescriptor) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live descriptor handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_classify(d: *const SsDescriptor, out: *mut *mut SsReport) -> SsStatus {
    guard(|| {
        non_null!(d, out);
        match classify(&(*d).0) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(SsReport(r)));
                SsStatus::Ok
            }
            Err(e) => fail(classify_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `r` must be NULL or a handle from [`ss_classify`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ss_report_free(r: *mut SsReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live report handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_verdict(r: *const SsReport, out: *mut SsVerdict) -> SsStatus {
    guard(|| {
        non_null!(r, out);
        *out = match (*r).0.verdict {
            Verdict::Yes => SsVerdict::Yes,
            Verdict::No => SsVerdict::No,
            Verdict::Conditional(_) => SsVerdict::Conditional,
        };
        SsStatus::Ok
    })
}

/// # Safety
/// `r` must be a live report handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_moduli_kind(r: *const SsReport, out: *mut SsModuliKind) -> SsStatus {
    guard(|| {
        non_null!(r, out);
        *out = match (*r).0.moduli.kind {
            ModuliKind::IsolatedReducedPoints => SsModuliKind::IsolatedReducedPoints,
            ModuliKind::EllipticQuotient => SsModuliKind::EllipticQuotient,
            ModuliKind::AbelianFactor => SsModuliKind::AbelianFactor,
            ModuliKind::FiniteSet => SsModuliKind::FiniteSet,
            ModuliKind::Empty => SsModuliKind::Empty,
            ModuliKind::Unknown => SsModuliKind::Unknown,
        };
        SsStatus::Ok
    })
}

/// Human-readable derivation; free the result with [`ss_string_free`].
///
/// # Safety
/// `r` must be a live report handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_explain(r: *const SsReport, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        non_null!(r, out);
        *out = tri!(into_c_string(explain(&(*r).0)));
        SsStatus::Ok
    })
}

/// Machine-format JSON for a report, as printed by `classify --format machine`.
///
/// # Safety
/// `r` must be a live report handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_report_to_json(r: *const SsReport, out: *mut *mut c_char) -> SsStatus {
    guard(|| {
        non_null!(r, out);
        *out = tri!(into_c_string(render_machine(&MachineOutput::from_report(&(*r).0))));
        SsStatus::Ok
    })
}

/// Runs a CLI subcommand on a JSON document and returns its machine output.
/// Errors in the document are reported inside the JSON and through
/// `exit_code`, not through the status.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_json` and `exit_code` must be
/// writable pointers.
#[no_mangle]
pub unsafe extern "C" fn ss_run(
    subcommand: SsSubcommand,
    json: *const c_char,
    torsion_level: u32,
    out_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> SsStatus {
    guard(|| {
        non_null!(out_json, exit_code);
        let text = tri!(read_str(json));
        let sub = match subcommand {
            SsSubcommand::Classify => Subcommand::Classify,
            SsSubcommand::VerifyLaw => Subcommand::VerifyLaw,
            SsSubcommand::Moduli => Subcommand::Moduli,
            SsSubcommand::Cone => Subcommand::Cone,
        };
        let out = run_on_bytes(sub, text.as_bytes(), torsion_level);
        *out_json = tri!(into_c_string(render_machine(&out)));
        *exit_code = out.exit_code();
        SsStatus::Ok
    })
}

/// `D₁·D₂` for `D = a·C₀ + b·f` on a ruled surface of genus `g` and invariant `e`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_ruled_intersect(
    g: u32,
    e: i64,
    a1: i64,
    b1: i64,
    a2: i64,
    b2: i64,
    out: *mut i64,
) -> SsStatus {
    guard(|| {
        non_null!(out);
        let s = tri!(RuledSurfaceData::new(g, e).map_err(|err| fail(SsStatus::InvalidArgument, err.to_string())));
        *out = intersect(NumClass::new(a1, b1), NumClass::new(a2, b2), &s);
        SsStatus::Ok
    })
}

/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_ruled_is_ample(g: u32, e: i64, a: i64, b: i64, out: *mut bool) -> SsStatus {
    guard(|| {
        non_null!(out);
        let s = tri!(RuledSurfaceData::new(g, e).map_err(|err| fail(SsStatus::InvalidArgument, err.to_string())));
        *out = is_ample(NumClass::new(a, b), &s);
        SsStatus::Ok
    })
}

/// `dim Ext¹(𝒪(−d₂), 𝒪(d₁))` on the projective line.
#[no_mangle]
pub extern "C" fn ss_ext1_dim(d1: i64, d2: i64) -> u64 {
    ext1_dim(d1, d2)
}

/// Number of fixed points of `x ↦ (re + im·τ)x` on the torus of `field`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ss_fixed_point_count(re: i64, im: i64, field: SsField, out: *mut i64) -> SsStatus {
    guard(|| {
        non_null!(out);
        let field = match field {
            SsField::Gaussian => FieldTag::Gaussian,
            SsField::Eisenstein => FieldTag::Eisenstein,
            SsField::Generic => FieldTag::Generic,
        };
        let result = CmScalar::from_ints(re, im, field).and_then(|s| fixed_point_count(&s));
        match result {
            Ok(n) => {
                *out = n;
                SsStatus::Ok
            }
            Err(err) => fail(SsStatus::InvalidArgument, err.to_string()),
        }
    })
}

/// `δ = 2g_B − 2 + χ(O_S) + Σ(1 − 1/mᵢ)` for a minimal elliptic fibration,
/// written as `num/den` in lowest terms.
///
/// # Safety
/// `multiplicities` must point to `len` readable values (or be NULL when
/// `len` is 0); `num` and `den` must be writable pointers.
#[no_mangle]
pub unsafe extern "C" fn ss_delta_invariant(
    g_b: u32,
    chi: i64,
    multiplicities: *const u32,
    len: usize,
    num: *mut i64,
    den: *mut i64,
) -> SsStatus {
    guard(|| {
        non_null!(num, den);
        let ms: &[u32] = if len == 0 {
            &[]
        } else {
            non_null!(multiplicities);
            std::slice::from_raw_parts(multiplicities, len)
        };
        let data = tri!(FibrationData::minimal_with_multiplicities(g_b, chi, ms)
            .map_err(|err| fail(SsStatus::InvalidArgument, err.to_string())));
        let delta = delta_invariant(&data);
        match (delta.numer().to_i64(), delta.denom().to_i64()) {
            (Some(n), Some(d)) => {
                *num = n;
                *den = d;
                SsStatus::Ok
            }
            _ => fail(SsStatus::Overflow, format!("delta = {delta} does not fit in 64 bits")),
        }
    })
}

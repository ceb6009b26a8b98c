//! C ABI over the workbench: parse device documents, verify them, run the
//! canonical demos, and search for intransitive families, with reports
//! returned as JSON strings.
//!
//! Conventions:
//! - Strings in are NUL-terminated UTF-8; strings out are owned by the
//!   caller and must be released with [`im_string_free`].
//! - Documents are opaque handles released with [`im_document_free`].
//! - Fallible calls return an [`ImStatus`]; on any non-OK status the
//!   thread-local message from [`im_last_error`] explains what happened.
//! - Every entry point catches panics and turns them into `Panic` status
//!   (or a null return) instead of unwinding across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use intransitive::dice::SearchSpec;
use intransitive::io::{parse_input, IoError, ParsedInput};
use intransitive::rational::rat;
use intransitive::voting::RotationDirection;
use intransitive::workbench::{
    cmd_demo, cmd_search_dice, verify_parsed, RunOptions, WorkbenchError,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImStatus {
    /// The expected intransitive structure was confirmed (or the search
    /// found at least one result).
    Ok = 0,
    /// The run completed but the structure was absent / the stream empty.
    Negative = 1,
    /// A precondition was violated (bad name, bad option, contract error).
    InvalidArgument = 2,
    /// The input was not a well-formed document.
    ParseError = 3,
    /// A required pointer was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Rotation direction selector; `Default` lets each fixture use its own
/// canonical direction.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImRotation {
    Default = 0,
    Left = 1,
    Right = 2,
}

/// Options shared by verify and demo calls. Zeroed fields mean "default".
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ImOptions {
    /// Copies per side in value-multiset duels (0 is treated as 1).
    pub copies: u32,
    /// Longest cycle to search for (0 = up to the number of players).
    pub max_cycle_len: usize,
    pub rotation: ImRotation,
    /// Ring size for the chain demo (0 is treated as 4).
    pub chain_n: usize,
    /// Append clearly marked decimal approximations to non-integer values.
    pub decimal: bool,
}

/// Bounded design space for the dice search.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ImDiceSearchSpec {
    pub sets: usize,
    pub faces: usize,
    pub value_min: i64,
    pub value_max: i64,
    /// Copies per side (0 is treated as 1).
    pub copies: u32,
    /// Required cycle length (0 = sets).
    pub cycle_len: usize,
    /// Weakest-step margin constraint num/den; den 0 means unconstrained.
    pub min_margin_num: i64,
    pub min_margin_den: i64,
}

/// Opaque parsed document handle.
pub struct ImDocument {
    input: ParsedInput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("no interior NUL"));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_for(err: &WorkbenchError) -> ImStatus {
    match err {
        WorkbenchError::Io(IoError::ParseError(_)) => ImStatus::ParseError,
        _ => ImStatus::InvalidArgument,
    }
}

fn guard_status<F: FnOnce() -> ImStatus>(f: F) -> ImStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at the C boundary");
            ImStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be a valid NUL-terminated string or null.
unsafe fn utf8_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, ImStatus> {
    if s.is_null() {
        set_error(&format!("{what} must not be null"));
        return Err(ImStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(&format!("{what} must be valid UTF-8"));
        ImStatus::InvalidUtf8
    })
}

fn run_options(options: *const ImOptions) -> RunOptions {
    let defaults = RunOptions::default();
    if options.is_null() {
        return defaults;
    }
    let o = unsafe { &*options };
    RunOptions {
        copies: if o.copies == 0 { 1 } else { o.copies },
        max_cycle_len: o.max_cycle_len,
        rotation: match o.rotation {
            ImRotation::Default => None,
            ImRotation::Left => Some(RotationDirection::Left),
            ImRotation::Right => Some(RotationDirection::Right),
        },
        decimal: o.decimal,
        n: if o.chain_n == 0 {
            defaults.n
        } else {
            o.chain_n
        },
        geometry: defaults.geometry,
    }
}

fn export_string(text: String, out: *mut *mut c_char) {
    if out.is_null() {
        return;
    }
    let c = CString::new(text.replace('\0', " ")).expect("no interior NUL");
    unsafe { *out = c.into_raw() };
}

fn report_status(
    result: Result<intransitive::workbench::RunReport, WorkbenchError>,
    report_json_out: *mut *mut c_char,
) -> ImStatus {
    match result {
        Ok(report) => {
            export_string(report.to_json(), report_json_out);
            if report.exit_code == 0 {
                ImStatus::Ok
            } else {
                ImStatus::Negative
            }
        }
        Err(e) => {
            set_error(&e.to_string());
            status_for(&e)
        }
    }
}

/// Message for the most recent failure on this thread, or null if the last
/// call succeeded. Valid until the next failing call on the same thread; do
/// not free.
#[no_mangle]
pub extern "C" fn im_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn im_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses one JSON document (dice_set, preference_profile, gear_assembly,
/// or lane_profile_set). Returns null on failure; see [`im_last_error`].
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn im_document_parse(json: *const c_char) -> *mut ImDocument {
    let result = catch_unwind(AssertUnwindSafe(|| {
        clear_error();
        let text = match utf8_arg(json, "json") {
            Ok(text) => text,
            Err(_) => return ptr::null_mut(),
        };
        match parse_input(text) {
            Ok(input) => Box::into_raw(Box::new(ImDocument { input })),
            Err(e) => {
                set_error(&e.to_string());
                ptr::null_mut()
            }
        }
    }));
    match result {
        Ok(p) => p,
        Err(_) => {
            set_error("internal panic caught at the C boundary");
            ptr::null_mut()
        }
    }
}

/// Static document kind name: "dice_set", "preference_profile",
/// "gear_assembly", or "lane_profile_set". Null for a null document. Do not
/// free.
///
/// # Safety
/// `doc` must be a live handle from [`im_document_parse`] or null.
#[no_mangle]
pub unsafe extern "C" fn im_document_kind(doc: *const ImDocument) -> *const c_char {
    if doc.is_null() {
        return ptr::null();
    }
    let kind: &'static [u8] = match (*doc).input.kind() {
        "dice_set" => b"dice_set\0",
        "preference_profile" => b"preference_profile\0",
        "gear_assembly" => b"gear_assembly\0",
        _ => b"lane_profile_set\0",
    };
    kind.as_ptr().cast()
}

/// Releases a document handle. Null is ignored.
///
/// # Safety
/// `doc` must have come from [`im_document_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn im_document_free(doc: *mut ImDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Options prefilled with the defaults.
#[no_mangle]
pub extern "C" fn im_options_default() -> ImOptions {
    ImOptions {
        copies: 1,
        max_cycle_len: 0,
        rotation: ImRotation::Default,
        chain_n: 4,
        decimal: false,
    }
}

/// Verifies a parsed document. `Ok` iff the expected intransitive structure
/// is present (for assemblies, iff the declared expectation is met);
/// `Negative` when the run completes without it. When `report_json_out` is
/// non-null it receives the full JSON report (caller frees).
///
/// # Safety
/// `doc` must be a live handle; `options` may be null for defaults;
/// `report_json_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn im_verify(
    doc: *const ImDocument,
    options: *const ImOptions,
    report_json_out: *mut *mut c_char,
) -> ImStatus {
    guard_status(|| {
        clear_error();
        if doc.is_null() {
            set_error("doc must not be null");
            return ImStatus::NullPointer;
        }
        let input = &(*doc).input;
        let options = run_options(options);
        let result = verify_parsed(input, format!("verify <{}>", input.kind()), &options);
        report_status(result, report_json_out)
    })
}

/// Runs a canonical demo by name (efron, losho-sticks, condorcet-vote,
/// gears3, gears-chain-n, levers, pulleys, towers, combs, birds).
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `options` and
/// `report_json_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn im_demo(
    name: *const c_char,
    options: *const ImOptions,
    report_json_out: *mut *mut c_char,
) -> ImStatus {
    guard_status(|| {
        clear_error();
        let name = match utf8_arg(name, "name") {
            Ok(name) => name,
            Err(status) => return status,
        };
        let options = run_options(options);
        report_status(cmd_demo(name, &options), report_json_out)
    })
}

/// Exhaustive dice search. `jsonl_out` receives the full stream (one
/// self-contained document per line, caller frees); `report_json_out`, when
/// non-null, receives the summary report. `limit` 0 means unlimited; the
/// stream is identical for every `jobs` value.
///
/// # Safety
/// `spec` and `jsonl_out` must not be null; `report_json_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn im_search_dice(
    spec: *const ImDiceSearchSpec,
    jobs: usize,
    limit: u64,
    jsonl_out: *mut *mut c_char,
    report_json_out: *mut *mut c_char,
) -> ImStatus {
    guard_status(|| {
        clear_error();
        if spec.is_null() || jsonl_out.is_null() {
            set_error("spec and jsonl_out must not be null");
            return ImStatus::NullPointer;
        }
        let c = &*spec;
        if c.min_margin_den < 0 || c.min_margin_num < 0 {
            set_error("min margin must be nonnegative");
            return ImStatus::InvalidArgument;
        }
        let spec = SearchSpec {
            n_sets: c.sets,
            n_faces: c.faces,
            value_min: c.value_min,
            value_max: c.value_max,
            copies: if c.copies == 0 { 1 } else { c.copies },
            required_cycle_len: if c.cycle_len == 0 {
                c.sets
            } else {
                c.cycle_len
            },
            min_margin: if c.min_margin_den == 0 {
                None
            } else {
                Some(rat(c.min_margin_num, c.min_margin_den))
            },
        };
        let mut buffer = Vec::new();
        let limit = if limit == 0 { None } else { Some(limit) };
        match cmd_search_dice(&spec, jobs, limit, &mut buffer) {
            Ok(report) => {
                let stream = String::from_utf8(buffer).expect("stream is UTF-8");
                export_string(stream, jsonl_out);
                export_string(report.to_json(), report_json_out);
                if report.exit_code == 0 {
                    ImStatus::Ok
                } else {
                    ImStatus::Negative
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                status_for(&e)
            }
        }
    })
}

// SPDX-License-Identifier: Apache-2.0

//! C interface to `spinbath`.
//!
//! Configurations and finished runs are opaque heap handles owned by the
//! caller and released with the matching `*_free` function. Every entry
//! point returns an [`SbStatus`]; on failure a message is kept per thread
//! and can be read with [`sb_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::OnceLock;

use nalgebra::Matrix4;
use num_complex::Complex64;
use spinbath::observables::{concurrence, ReducedDensityMatrix};
use spinbath::output::emit_csv;
use spinbath::runner::ground_reference;
use spinbath::{
    preset, run_scenario, run_sweep, Error, RunOutput, RunSummary, ScenarioConfig,
    TimeSeriesRecord, PRESETS,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    InvalidArgument = 1,
    Config = 2,
    Convergence = 3,
    Io = 4,
    Panic = 5,
}

/// Resolved scenario configuration.
pub struct SbConfig(ScenarioConfig);

/// Completed run: time series, summary and the configuration it used.
pub struct SbRun {
    config: ScenarioConfig,
    output: RunOutput,
}

/// One output time.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SbRecord {
    pub t: f64,
    pub corr: f64,
    pub concurrence: f64,
    pub e_total: f64,
    pub e_c: f64,
    pub e_e: f64,
    pub e_int: f64,
    pub purity: f64,
    pub norm_err: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SbSummary {
    pub e_psi: f64,
    pub e0: f64,
    pub min_corr: f64,
    pub t_at_min: f64,
    pub corr0: f64,
    pub max_concurrence: f64,
}

impl From<&TimeSeriesRecord> for SbRecord {
    fn from(r: &TimeSeriesRecord) -> Self {
        SbRecord {
            t: r.t,
            corr: r.corr,
            concurrence: r.concurrence,
            e_total: r.e_total,
            e_c: r.e_c,
            e_e: r.e_e,
            e_int: r.e_int,
            purity: r.purity,
            norm_err: r.norm_err,
        }
    }
}

impl From<&RunSummary> for SbSummary {
    fn from(s: &RunSummary) -> Self {
        SbSummary {
            e_psi: s.e_psi,
            e0: s.e0,
            min_corr: s.min_corr,
            t_at_min: s.t_at_min,
            corr0: s.corr0,
            max_concurrence: s.max_concurrence,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(SbStatus, String);

fn status_of(e: &Error) -> SbStatus {
    match e.exit_code() {
        3 => SbStatus::Convergence,
        4 => SbStatus::Io,
        _ => SbStatus::Config,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn invalid(message: &str) -> Failure {
    Failure(SbStatus::InvalidArgument, message.to_string())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SbStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure(SbStatus::Panic, format!("panic: {message}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            SbStatus::Ok
        }
        Err(Failure(status, message)) => {
            set_last_error(&message);
            status
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not valid UTF-8")))
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_config_from_preset(
    name: *const c_char,
    out: *mut *mut SbConfig,
) -> SbStatus {
    guard(|| {
        let config = preset(text(name, "preset name")?)?;
        store(out, SbConfig(config))
    })
}

/// Reads a `key = value` config file on top of the defaults.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_config_from_file(
    path: *const c_char,
    out: *mut *mut SbConfig,
) -> SbStatus {
    guard(|| {
        let config = ScenarioConfig::from_file(Path::new(text(path, "path")?))?;
        store(out, SbConfig(config))
    })
}

/// Sets one config key, with the same keys and syntax as config files.
///
/// # Safety
/// `config` must come from this library; `key` and `value` must be
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn sb_config_set(
    config: *mut SbConfig,
    key: *const c_char,
    value: *const c_char,
) -> SbStatus {
    guard(|| {
        let config = config.as_mut().ok_or_else(|| invalid("config is null"))?;
        config.0.set(text(key, "key")?, text(value, "value")?)?;
        Ok(())
    })
}

/// Config-file text of `config`; release it with [`sb_string_free`].
///
/// # Safety
/// `config` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_config_to_string(
    config: *const SbConfig,
    out: *mut *mut c_char,
) -> SbStatus {
    guard(|| {
        let config = reference(config, "config")?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        let s =
            CString::new(config.0.to_text()).map_err(|_| invalid("config text contains NUL"))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `config` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sb_config_free(config: *mut SbConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the scenario to completion.
///
/// # Safety
/// `config` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_run(config: *const SbConfig, out: *mut *mut SbRun) -> SbStatus {
    guard(|| {
        let config = reference(config, "config")?.0.clone();
        let output = run_scenario(&config)?;
        store(out, SbRun { config, output })
    })
}

/// Number of records in `run`, 0 for a null handle.
///
/// # Safety
/// `run` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sb_run_len(run: *const SbRun) -> usize {
    run.as_ref().map_or(0, |r| r.output.records.len())
}

/// # Safety
/// `run` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_run_record(
    run: *const SbRun,
    index: usize,
    out: *mut SbRecord,
) -> SbStatus {
    guard(|| {
        let run = reference(run, "run")?;
        let record = run
            .output
            .records
            .get(index)
            .ok_or_else(|| invalid(&format!("record {index} out of range")))?;
        *out.as_mut()
            .ok_or_else(|| invalid("output pointer is null"))? = record.into();
        Ok(())
    })
}

/// # Safety
/// `run` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_run_summary(run: *const SbRun, out: *mut SbSummary) -> SbStatus {
    guard(|| {
        let run = reference(run, "run")?;
        *out.as_mut()
            .ok_or_else(|| invalid("output pointer is null"))? = (&run.output.summary).into();
        Ok(())
    })
}

/// Writes `timeseries.csv`, `summary.csv` and `manifest.txt` into `dir`.
///
/// # Safety
/// `run` must come from this library and `dir` must be a NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn sb_run_write(run: *const SbRun, dir: *const c_char) -> SbStatus {
    guard(|| {
        let run = reference(run, "run")?;
        emit_csv(
            &run.output.records,
            &run.output.summary,
            &run.config,
            Path::new(text(dir, "directory")?),
        )?;
        Ok(())
    })
}

/// # Safety
/// `run` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sb_run_free(run: *mut SbRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Ground-state energy and central correlation of the full system.
///
/// # Safety
/// `config` must come from this library; `e0` and `corr0` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sb_ground(
    config: *const SbConfig,
    e0: *mut f64,
    corr0: *mut f64,
) -> SbStatus {
    guard(|| {
        let config = reference(config, "config")?;
        if e0.is_null() || corr0.is_null() {
            return Err(invalid("output pointer is null"));
        }
        let (e, c) = ground_reference(&config.0)?;
        *e0 = e;
        *corr0 = c;
        Ok(())
    })
}

/// Runs `config` once per seed on `workers` threads. `summaries` and
/// `statuses` receive one entry per seed; a failed seed leaves its summary
/// zeroed and does not stop the others. The return value reports argument
/// problems only.
///
/// # Safety
/// `seeds`, `summaries` and `statuses` must each point to `n_seeds`
/// elements.
#[no_mangle]
pub unsafe extern "C" fn sb_sweep(
    config: *const SbConfig,
    seeds: *const u64,
    n_seeds: usize,
    workers: usize,
    summaries: *mut SbSummary,
    statuses: *mut SbStatus,
) -> SbStatus {
    guard(|| {
        let config = reference(config, "config")?;
        if seeds.is_null() || summaries.is_null() || statuses.is_null() {
            return Err(invalid("seed or result array is null"));
        }
        let seeds = std::slice::from_raw_parts(seeds, n_seeds);
        let results = run_sweep(&config.0, seeds, workers)?;
        let summaries = std::slice::from_raw_parts_mut(summaries, n_seeds);
        let statuses = std::slice::from_raw_parts_mut(statuses, n_seeds);
        for ((result, summary), status) in results.iter().zip(summaries).zip(statuses) {
            match result {
                Ok(s) => {
                    *summary = s.into();
                    *status = SbStatus::Ok;
                }
                Err(e) => {
                    *summary = SbSummary::default();
                    *status = status_of(e);
                }
            }
        }
        Ok(())
    })
}

/// Concurrence of a 4×4 density matrix given as row-major real and
/// imaginary parts in the basis ↑↑, ↑↓, ↓↑, ↓↓.
///
/// # Safety
/// `re` and `im` must point to 16 values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sb_concurrence(re: *const f64, im: *const f64, out: *mut f64) -> SbStatus {
    guard(|| {
        if re.is_null() || im.is_null() || out.is_null() {
            return Err(invalid("matrix or output pointer is null"));
        }
        let (re, im) = (
            std::slice::from_raw_parts(re, 16),
            std::slice::from_raw_parts(im, 16),
        );
        let m = Matrix4::from_fn(|r, c| Complex64::new(re[4 * r + c], im[4 * r + c]));
        *out = concurrence(&ReducedDensityMatrix(m))?;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn sb_preset_count() -> usize {
    PRESETS.len()
}

fn preset_names() -> &'static [CString] {
    static NAMES: OnceLock<Vec<CString>> = OnceLock::new();
    NAMES.get_or_init(|| {
        PRESETS
            .iter()
            .map(|p| CString::new(p.name).unwrap())
            .collect()
    })
}

/// Name of preset `index`, or null when out of range. The string is static.
#[no_mangle]
pub extern "C" fn sb_preset_name(index: usize) -> *const c_char {
    preset_names()
        .get(index)
        .map_or(ptr::null(), |s| s.as_ptr())
}

//! C ABI over the `grovemaze` core.
//!
//! Objects cross the boundary as opaque handles, created by
//! `gm_maze_generate`, `gm_maze_parse` or `gm_solve` and released with the
//! matching `gm_*_free`. Every fallible call
//! returns a [`GmStatus`]; on failure `gm_last_error` gives a message for the
//! calling thread. Strings returned by the library are freed with
//! `gm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use grovemaze::codec::{self, PathIndex};
use grovemaze::fitness::{FitnessFormula, FitnessSpec};
use grovemaze::grover::GroverGeometry;
use grovemaze::maze::{Maze, SimMode};
use grovemaze::search::{run_adaptive, Policy, Samples, SearchConfig, SearchOutcome, Status, Strictness};
use grovemaze::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidMaze = 4,
    CapExceeded = 5,
    Degenerate = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmSearchStatus {
    ConvergedOptimal = 0,
    BudgetExhausted = 1,
    Degenerate = 2,
}

/// Opaque maze handle.
pub struct GmMaze(Maze);

/// Opaque result of a search.
pub struct GmOutcome(SearchOutcome);

/// Search options. Zero in `max_rounds` or `samples` selects the default
/// (`U − C₁ + 1` rounds, automatic shot count).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GmSearchOptions {
    pub initial_cutoff: i64,
    pub epsilon: f64,
    pub max_rounds: u32,
    /// 0 known-k, 1 guessed-k.
    pub policy: u32,
    /// 0 switch to ≥ at the optimum, 1 always strict.
    pub strict: u32,
    pub samples: u32,
    pub seed: u64,
    pub stop_at_optimum: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GmStatus {
    match e {
        Error::InvalidArgument(_) | Error::WidthMismatch { .. } | Error::Config(_) | Error::IndexOutOfRange { .. } => {
            GmStatus::InvalidArgument
        }
        Error::Parse { .. } => GmStatus::Parse,
        Error::InvalidMaze(_) => GmStatus::InvalidMaze,
        Error::CapExceeded { .. } => GmStatus::CapExceeded,
        Error::Degenerate => GmStatus::Degenerate,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => GmStatus::Io,
    }
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Result<(), (GmStatus, String)>) -> GmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GmStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GmStatus::Panic
        }
    }
}

fn lift<T>(r: grovemaze::Result<T>) -> Result<T, (GmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (GmStatus, String) {
    (GmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GmStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn formula_of(v: u32) -> Result<FitnessFormula, (GmStatus, String)> {
    match v {
        0 => Ok(FitnessFormula::MainText),
        1 => Ok(FitnessFormula::AppendixLinear),
        o => Err((GmStatus::InvalidArgument, format!("formula {o} (expected 0 or 1)"))),
    }
}

fn mode_of(v: u32) -> Result<SimMode, (GmStatus, String)> {
    match v {
        0 => Ok(SimMode::WallAware),
        1 => Ok(SimMode::BoundsOnly),
        2 => Ok(SimMode::WallBlind),
        o => Err((GmStatus::InvalidArgument, format!("mode {o} (expected 0, 1 or 2)"))),
    }
}

fn string_out(s: String, out: *mut *mut c_char) -> Result<(), (GmStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (GmStatus::Io, "string contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_maze_generate(m: usize, seed: u64, out: *mut *mut GmMaze) -> GmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let maze = lift(Maze::generate(m, seed))?;
        *out = Box::into_raw(Box::new(GmMaze(maze)));
        Ok(())
    })
}

/// Parses the maze text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_maze_parse(text: *const c_char, out: *mut *mut GmMaze) -> GmStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| (GmStatus::Parse, "maze text is not UTF-8".to_string()))?;
        let maze = lift(Maze::parse(s))?;
        *out = Box::into_raw(Box::new(GmMaze(maze)));
        Ok(())
    })
}

/// # Safety
/// `maze` must be a live handle; `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_maze_serialize(maze: *const GmMaze, out: *mut *mut c_char) -> GmStatus {
    guard(|| string_out(deref(maze, "maze")?.0.serialize(), out))
}

/// Side length, or 0 for a null handle.
///
/// # Safety
/// `maze` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_maze_size(maze: *const GmMaze) -> usize {
    maze.as_ref().map_or(0, |m| m.0.size())
}

/// Length of the unique start-to-goal path.
///
/// # Safety
/// `maze` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gm_maze_solution_length(maze: *const GmMaze, out: *mut usize) -> GmStatus {
    guard(|| {
        let m = deref(maze, "maze")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = m.0.solution_length();
        Ok(())
    })
}

/// # Safety
/// `maze` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_maze_free(maze: *mut GmMaze) {
    if !maze.is_null() {
        drop(Box::from_raw(maze));
    }
}

/// Fitness of path `index` (length `n`). `formula`: 0 power-of-two offset,
/// 1 linear. `mode`: 0 wall-aware, 1 bounds only, 2 wall-blind.
///
/// # Safety
/// `maze` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gm_path_fitness(
    maze: *const GmMaze,
    n: u32,
    index: u64,
    formula: u32,
    mode: u32,
    out: *mut i64,
) -> GmStatus {
    guard(|| {
        let m = &deref(maze, "maze")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = lift(FitnessSpec::new(m.size(), formula_of(formula)?, mode_of(mode)?))?;
        let idx = lift(PathIndex::new(index, n))?;
        *out = spec.fitness_of(m, idx);
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn gm_search_options_default() -> GmSearchOptions {
    let d = SearchConfig::default();
    GmSearchOptions {
        initial_cutoff: d.initial_cutoff,
        epsilon: d.epsilon,
        max_rounds: 0,
        policy: 0,
        strict: 0,
        samples: 0,
        seed: d.seed,
        stop_at_optimum: d.stop_at_optimum,
    }
}

fn search_config(o: &GmSearchOptions) -> Result<SearchConfig, (GmStatus, String)> {
    let policy = match o.policy {
        0 => Policy::KnownK,
        1 => Policy::GuessedK,
        p => return Err((GmStatus::InvalidArgument, format!("policy {p} (expected 0 or 1)"))),
    };
    let strictness = match o.strict {
        0 => Strictness::GreaterEqualAtMax,
        1 => Strictness::StrictGreater,
        s => return Err((GmStatus::InvalidArgument, format!("strict {s} (expected 0 or 1)"))),
    };
    let cfg = SearchConfig {
        initial_cutoff: o.initial_cutoff,
        epsilon: o.epsilon,
        max_rounds: (o.max_rounds > 0).then_some(o.max_rounds),
        policy,
        strictness,
        samples: if o.samples == 0 { Samples::Auto } else { Samples::Fixed(o.samples) },
        seed: o.seed,
        stop_at_optimum: o.stop_at_optimum,
    };
    lift(cfg.validate())?;
    Ok(cfg)
}

/// Adaptive-cutoff search over paths of length `n`. `options` may be null
/// for the defaults.
///
/// # Safety
/// `maze` must be a live handle, `options` null or valid, `out` valid for
/// one pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_solve(
    maze: *const GmMaze,
    n: u32,
    formula: u32,
    mode: u32,
    options: *const GmSearchOptions,
    out: *mut *mut GmOutcome,
) -> GmStatus {
    guard(|| {
        let m = &deref(maze, "maze")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = options.as_ref().copied().unwrap_or_else(|| gm_search_options_default());
        let cfg = search_config(&opts)?;
        let spec = lift(FitnessSpec::new(m.size(), formula_of(formula)?, mode_of(mode)?))?;
        let outcome = lift(run_adaptive(m, n, &spec, &cfg))?;
        *out = Box::into_raw(Box::new(GmOutcome(outcome)));
        Ok(())
    })
}

/// # Safety
/// `outcome` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gm_outcome_status(outcome: *const GmOutcome, out: *mut GmSearchStatus) -> GmStatus {
    guard(|| {
        let o = &deref(outcome, "outcome")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match o.trace.status {
            Status::ConvergedOptimal => GmSearchStatus::ConvergedOptimal,
            Status::BudgetExhausted => GmSearchStatus::BudgetExhausted,
            Status::Degenerate => GmSearchStatus::Degenerate,
        };
        Ok(())
    })
}

/// Best sampled path. Returns `GM_STATUS_DEGENERATE` when no round ran.
///
/// # Safety
/// `outcome` must be a live handle; `index` and `fitness` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gm_outcome_best(outcome: *const GmOutcome, index: *mut u64, fitness: *mut i64) -> GmStatus {
    guard(|| {
        let o = &deref(outcome, "outcome")?.0;
        if index.is_null() || fitness.is_null() {
            return Err(null("index or fitness"));
        }
        let b = o.best.as_ref().ok_or((GmStatus::Degenerate, "no round was run".to_string()))?;
        *index = b.index;
        *fitness = b.fitness;
        Ok(())
    })
}

/// Rounds run, or 0 for a null handle.
///
/// # Safety
/// `outcome` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_outcome_rounds(outcome: *const GmOutcome) -> usize {
    outcome.as_ref().map_or(0, |o| o.0.rounds_used())
}

/// Full outcome as JSON.
///
/// # Safety
/// `outcome` must be a live handle; `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_outcome_to_json(outcome: *const GmOutcome, out: *mut *mut c_char) -> GmStatus {
    guard(|| string_out(lift(deref(outcome, "outcome")?.0.to_json())?, out))
}

/// # Safety
/// `outcome` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gm_outcome_free(outcome: *mut GmOutcome) {
    if !outcome.is_null() {
        drop(Box::from_raw(outcome));
    }
}

/// `sin²((2r+1)θ)` with `θ = arcsin √(k/4ⁿ)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gm_success_probability(n: u32, k: u64, r: u64, out: *mut f64) -> GmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(GroverGeometry::new(n, k))?.success_probability(r);
        Ok(())
    })
}

/// `max(0, ⌊π/(4θ) − 1/2⌋)`; `GM_STATUS_DEGENERATE` for `k = 0`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn gm_optimal_rounds(n: u32, k: u64, out: *mut u64) -> GmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(lift(GroverGeometry::new(n, k))?.optimal_rounds())?;
        Ok(())
    })
}

/// Path letters (`N`, `E`, `S`, `W`) of `index` at length `n`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn gm_path_letters(index: u64, n: u32, out: *mut *mut c_char) -> GmStatus {
    guard(|| {
        let idx = lift(PathIndex::new(index, n))?;
        string_out(idx.letters(), out)
    })
}

/// Largest supported path length.
#[no_mangle]
pub extern "C" fn gm_max_path_len() -> u32 {
    codec::MAX_PATH_LEN
}

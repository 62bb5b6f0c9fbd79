//! C interface to grouphull.
//!
//! Handles are opaque and owned by the caller; release them with the
//! matching `*_free` function. Every fallible call returns a [`GhStatus`]
//! and leaves a message retrievable with [`gh_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use grouphull::group::{build_symmetry_action, coxeter_group, AnyMatGroup, CoxeterName, MatGroup, SymmetryOptions};
use grouphull::polytope::{adjacency_decomposition, verify_inequality, Control, EnumerationConfig, EnumerationError, VPolytope};
use grouphull::scalar::{Rational, Scalar, Sqrt2, Sqrt3, Sqrt5};
use grouphull::store::{load_checkpoint, read_metadata, report, save_checkpoint, CheckpointError, OrbitDatabase};
use grouphull::with_group;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Integrity = 3,
    Incomplete = 4,
    Io = 5,
    Internal = 6,
}

/// Result of checking `Tr(X·A) <= rhs` over every group element `X`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GhVerifyResult {
    pub valid: bool,
    pub is_facet: bool,
    pub incidence: usize,
    pub violations: usize,
    pub rank: usize,
}

pub struct GhGroup {
    name: String,
    group: AnyMatGroup,
}

enum AnyDatabase {
    Rational(OrbitDatabase<Rational>),
    Sqrt2(OrbitDatabase<Sqrt2>),
    Sqrt3(OrbitDatabase<Sqrt3>),
    Sqrt5(OrbitDatabase<Sqrt5>),
}

macro_rules! with_db {
    ($any:expr, $db:ident => $body:expr) => {
        match $any {
            AnyDatabase::Rational($db) => $body,
            AnyDatabase::Sqrt2($db) => $body,
            AnyDatabase::Sqrt3($db) => $body,
            AnyDatabase::Sqrt5($db) => $body,
        }
    };
}

pub struct GhDatabase {
    db: AnyDatabase,
    complete: bool,
}

struct Error(GhStatus, String);

type FfiResult<T> = Result<T, Error>;

impl From<CheckpointError> for Error {
    fn from(e: CheckpointError) -> Self {
        let status = match e {
            CheckpointError::Io(_) => GhStatus::Io,
            _ => GhStatus::Integrity,
        };
        Error(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> FfiResult<GhStatus>) -> GhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            set_error(None);
            s
        }
        Ok(Err(Error(s, msg))) => {
            set_error(Some(msg));
            s
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            GhStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Error(GhStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error(GhStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Error(GhStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T, what: &str) -> FfiResult<()> {
    if p.is_null() {
        Err(Error(GhStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn invalid(msg: impl ToString) -> Error {
    Error(GhStatus::InvalidArgument, msg.to_string())
}

fn internal(msg: impl ToString) -> Error {
    Error(GhStatus::Internal, msg.to_string())
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn into_c_string(s: String) -> FfiResult<*mut c_char> {
    CString::new(s).map(CString::into_raw).map_err(internal)
}

/// Builds a Coxeter group by name, e.g. `"F4"`, `"H4"`, `"I2(5)"`.
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_group_new(name: *const c_char, out: *mut *mut GhGroup) -> GhStatus {
    guard(|| {
        out_arg(out, "out")?;
        let name: CoxeterName = str_arg(name, "name")?.parse().map_err(invalid)?;
        let group = coxeter_group(name).map_err(invalid)?;
        *out = Box::into_raw(Box::new(GhGroup { name: name.to_string(), group }));
        Ok(GhStatus::Ok)
    })
}

/// # Safety
/// `g` must come from [`gh_group_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gh_group_free(g: *mut GhGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn gh_group_order(g: *const GhGroup) -> usize {
    g.as_ref().map_or(0, |g| g.group.order())
}

/// Matrix dimension, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn gh_group_dim(g: *const GhGroup) -> usize {
    g.as_ref().map_or(0, |g| g.group.dim())
}

/// Order of the symmetry group of the polytope as a decimal string.
///
/// # Safety
/// `g` must be a live group handle and `out` a valid pointer. Free the
/// result with [`gh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gh_group_symmetry_order(g: *const GhGroup, out: *mut *mut c_char) -> GhStatus {
    guard(|| {
        out_arg(out, "out")?;
        let g = ref_arg(g, "group")?;
        let sym = with_group!(&g.group, g => build_symmetry_action(g, SymmetryOptions::default())).map_err(internal)?;
        *out = into_c_string(sym.order().to_string())?;
        Ok(GhStatus::Ok)
    })
}

fn parse_matrix<F: Scalar>(src: &str, dim: usize) -> FfiResult<grouphull::linalg::Matrix<F>> {
    let a = grouphull::cli::parse_matrix::<F>(src).map_err(invalid)?;
    if a.rows() != dim {
        return Err(invalid(format!("matrix is {}x{}, the group acts in dimension {dim}", a.rows(), a.cols())));
    }
    Ok(a)
}

fn verify_typed<F: Scalar>(g: &MatGroup<F>, matrix: &str, rhs: &str) -> FfiResult<GhVerifyResult> {
    let a = parse_matrix::<F>(matrix, g.dim())?;
    let rhs: F = rhs.trim().parse().map_err(|e| invalid(format!("rhs: {e}")))?;
    let poly = VPolytope::from_group(g);
    let r = verify_inequality(&poly, &a, &rhs).ok_or_else(|| internal("not a matrix polytope"))?;
    Ok(GhVerifyResult {
        valid: r.valid,
        is_facet: r.is_facet,
        incidence: r.incidence_count(),
        violations: r.violations,
        rank: r.rank_of_a,
    })
}

/// Checks the inequality `Tr(X·A) <= rhs` for every element `X` of `g`.
/// `matrix` holds one row per line in the scalar text syntax.
///
/// # Safety
/// `g` must be a live group handle, `matrix` and `rhs` valid C strings and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_verify(
    g: *const GhGroup,
    matrix: *const c_char,
    rhs: *const c_char,
    out: *mut GhVerifyResult,
) -> GhStatus {
    guard(|| {
        out_arg(out, "out")?;
        let g = ref_arg(g, "group")?;
        let (matrix, rhs) = (str_arg(matrix, "matrix")?, str_arg(rhs, "rhs")?);
        *out = with_group!(&g.group, g => verify_typed(g, matrix, rhs))?;
        Ok(GhStatus::Ok)
    })
}

struct Budget(Option<usize>);

impl<F: Scalar> Control<F> for Budget {
    fn budget(&self) -> Option<usize> {
        self.0
    }
}

fn run_config() -> (EnumerationConfig, SymmetryOptions, Vec<(String, String)>) {
    let cfg = EnumerationConfig::default();
    let opts = SymmetryOptions::default();
    let mut config = vec![("method".to_string(), "adjacency".to_string())];
    config.extend(cfg.describe());
    config.push(("transpose".into(), opts.transpose.to_string()));
    config.push(("normalizer".into(), opts.normalizer.to_string()));
    (cfg, opts, config)
}

fn enumerate_typed<F: Scalar>(
    g: &MatGroup<F>,
    name: &str,
    resume: Option<OrbitDatabase<F>>,
    max_orbits: Option<usize>,
) -> FfiResult<(OrbitDatabase<F>, bool)> {
    let (cfg, opts, config) = run_config();
    let sym = build_symmetry_action(g, opts).map_err(internal)?;
    let poly = VPolytope::from_group(g);
    let mut db = match resume {
        Some(db) => {
            let m = &db.meta;
            if m.group != name || m.symmetry_order != sym.order() || m.vertex_count != poly.vertex_count() {
                return Err(Error(GhStatus::Integrity, "database was written for a different group".into()));
            }
            if m.config != config {
                return Err(invalid("database was written with different settings"));
            }
            db
        }
        None => {
            let mut db = OrbitDatabase::for_polytope(name, &poly, &sym);
            db.meta.config = config;
            db
        }
    };
    let complete = match adjacency_decomposition(&poly, &sym, &cfg, &mut db, &mut Budget(max_orbits)) {
        Ok(stop) => stop.is_finished(),
        Err(EnumerationError::Dd(_)) => false,
        Err(e) => return Err(internal(e)),
    };
    Ok((db, complete))
}

fn typed_db<F: Scalar>(any: AnyDatabase) -> FfiResult<OrbitDatabase<F>> {
    let text = with_db!(&any, db => grouphull::store::to_text(db));
    let db = grouphull::store::from_text::<F>(&text)
        .map_err(|_| Error(GhStatus::Integrity, "database field differs from the group's field".into()))?;
    Ok(db)
}

trait IntoAny: Scalar {
    fn into_any(db: OrbitDatabase<Self>) -> AnyDatabase;
}

impl IntoAny for Rational {
    fn into_any(db: OrbitDatabase<Self>) -> AnyDatabase {
        AnyDatabase::Rational(db)
    }
}

impl IntoAny for Sqrt2 {
    fn into_any(db: OrbitDatabase<Self>) -> AnyDatabase {
        AnyDatabase::Sqrt2(db)
    }
}

impl IntoAny for Sqrt3 {
    fn into_any(db: OrbitDatabase<Self>) -> AnyDatabase {
        AnyDatabase::Sqrt3(db)
    }
}

impl IntoAny for Sqrt5 {
    fn into_any(db: OrbitDatabase<Self>) -> AnyDatabase {
        AnyDatabase::Sqrt5(db)
    }
}

fn enumerate_any<F: IntoAny>(
    g: &MatGroup<F>,
    name: &str,
    resume: Option<AnyDatabase>,
    max_orbits: Option<usize>,
) -> FfiResult<GhDatabase> {
    let resume = resume.map(typed_db::<F>).transpose()?;
    let (db, complete) = enumerate_typed(g, name, resume, max_orbits)?;
    Ok(GhDatabase { db: F::into_any(db), complete })
}

fn pool(threads: usize) -> FfiResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(internal)
}

/// Enumerates facet orbits of the group's polytope by adjacency
/// decomposition. `threads == 0` uses all cores; `max_orbits == 0` means no
/// limit. Returns [`GhStatus::Incomplete`] with a valid database in `out`
/// when the run stopped early.
///
/// # Safety
/// `g` must be a live group handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_enumerate(
    g: *const GhGroup,
    threads: usize,
    max_orbits: usize,
    out: *mut *mut GhDatabase,
) -> GhStatus {
    guard(|| {
        out_arg(out, "out")?;
        let g = ref_arg(g, "group")?;
        let budget = (max_orbits > 0).then_some(max_orbits);
        let db = pool(threads)?.install(|| with_group!(&g.group, gr => enumerate_any(gr, &g.name, None, budget)))?;
        let status = if db.complete { GhStatus::Ok } else { GhStatus::Incomplete };
        *out = Box::into_raw(Box::new(db));
        Ok(status)
    })
}

/// Continues an enumeration in place. Arguments as for [`gh_enumerate`].
///
/// # Safety
/// `g` and `db` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn gh_enumerate_resume(
    g: *const GhGroup,
    db: *mut GhDatabase,
    threads: usize,
    max_orbits: usize,
) -> GhStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let db = db.as_mut().ok_or_else(|| Error(GhStatus::NullPointer, "database is null".into()))?;
        let budget = (max_orbits > 0).then_some(max_orbits);
        // Work on a copy so a failure leaves the handle untouched.
        let current = clone_any(&db.db);
        *db = pool(threads)?.install(|| with_group!(&g.group, gr => enumerate_any(gr, &g.name, Some(current), budget)))?;
        Ok(if db.complete { GhStatus::Ok } else { GhStatus::Incomplete })
    })
}

fn clone_any(any: &AnyDatabase) -> AnyDatabase {
    match any {
        AnyDatabase::Rational(d) => AnyDatabase::Rational(d.clone()),
        AnyDatabase::Sqrt2(d) => AnyDatabase::Sqrt2(d.clone()),
        AnyDatabase::Sqrt3(d) => AnyDatabase::Sqrt3(d.clone()),
        AnyDatabase::Sqrt5(d) => AnyDatabase::Sqrt5(d.clone()),
    }
}

fn is_complete<F: Scalar>(db: &OrbitDatabase<F>) -> bool {
    db.next_unprocessed().is_none() && !db.is_empty()
}

/// Loads a checkpoint file.
///
/// # Safety
/// `path` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_database_load(path: *const c_char, out: *mut *mut GhDatabase) -> GhStatus {
    guard(|| {
        out_arg(out, "out")?;
        let path = Path::new(str_arg(path, "path")?);
        let db = match read_metadata(path)?.radicand {
            None => AnyDatabase::Rational(load_checkpoint(path)?),
            Some(2) => AnyDatabase::Sqrt2(load_checkpoint(path)?),
            Some(3) => AnyDatabase::Sqrt3(load_checkpoint(path)?),
            Some(5) => AnyDatabase::Sqrt5(load_checkpoint(path)?),
            Some(d) => return Err(Error(GhStatus::Integrity, format!("unsupported field Q(sqrt {d})"))),
        };
        let complete = with_db!(&db, d => is_complete(d));
        *out = Box::into_raw(Box::new(GhDatabase { db, complete }));
        Ok(GhStatus::Ok)
    })
}

/// Writes the database atomically.
///
/// # Safety
/// `db` must be a live handle and `path` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn gh_database_save(db: *const GhDatabase, path: *const c_char) -> GhStatus {
    guard(|| {
        let db = ref_arg(db, "database")?;
        let path = Path::new(str_arg(path, "path")?);
        with_db!(&db.db, d => save_checkpoint(d, path))?;
        Ok(GhStatus::Ok)
    })
}

/// # Safety
/// `db` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gh_database_free(db: *mut GhDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Number of stored orbits, or 0 for a null handle.
///
/// # Safety
/// `db` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gh_database_orbit_count(db: *const GhDatabase) -> usize {
    db.as_ref().map_or(0, |d| with_db!(&d.db, d => d.len()))
}

/// Whether every stored orbit has been processed.
///
/// # Safety
/// `db` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gh_database_is_complete(db: *const GhDatabase) -> bool {
    db.as_ref().is_some_and(|d| d.complete)
}

/// Incidence of the orbit at `index` in database order.
///
/// # Safety
/// `db` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gh_database_orbit_incidence(db: *const GhDatabase, index: usize, out: *mut usize) -> GhStatus {
    guard(|| {
        out_arg(out, "out")?;
        let db = ref_arg(db, "database")?;
        let n = with_db!(&db.db, d => d.records().nth(index).map(|r| r.incidence_count()));
        *out = n.ok_or_else(|| invalid(format!("orbit index {index} out of range")))?;
        Ok(GhStatus::Ok)
    })
}

/// Summary report as JSON: orbit count, total facets and histograms.
///
/// # Safety
/// `db` must be a live handle and `out` a valid pointer. Free the result
/// with [`gh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gh_database_report_json(db: *const GhDatabase, out: *mut *mut c_char) -> GhStatus {
    guard(|| {
        out_arg(out, "out")?;
        let db = ref_arg(db, "database")?;
        let r = with_db!(&db.db, d => report(d));
        if !r.histograms_consistent() {
            return Err(Error(GhStatus::Integrity, "histogram totals differ from the orbit count".into()));
        }
        *out = into_c_string(r.to_json().to_string())?;
        Ok(GhStatus::Ok)
    })
}

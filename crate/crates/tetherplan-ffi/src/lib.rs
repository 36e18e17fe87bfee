//! C ABI for the tetherplan planner.
//!
//! The surface is deliberately small: load a map into an opaque world
//! handle, ask it for stats, and run plans described by JSON requests that
//! return JSON results (the same result schema the command line writes).
//! All pointers returned by this library are freed by its own `tp_*_free`
//! functions, never by the caller's allocator.
//!
//! Every call is safe against panics in the planning core: a panic is
//! caught at the boundary and surfaces as `TP_PANIC` with the message
//! available through `tp_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::Deserialize;
use tetherplan::error::PlanError;
use tetherplan::gcp::{configuration_from_path, home_configuration};
use tetherplan::gridmap::{load_map, Cell, GridWorld};
use tetherplan::planner::{
    drag_tether, min_required_tether, tmv, tp, tr, ttsp, OnUnreachable, Solution,
};
use tetherplan::scenario::{ReconfigResultFile, ResultFile, TimingsMs};

/// Opaque world handle: an inflated occupancy grid ready for planning.
#[allow(non_camel_case_types)]
pub struct tp_world {
    inner: GridWorld,
}

/// Result code of every fallible call. `TP_OK` is zero; anything else means
/// the call produced nothing and `tp_last_error` describes why.
#[allow(non_camel_case_types)]
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum tp_status {
    TP_OK = 0,
    /// Null pointer, malformed UTF-8 or JSON, or a request violating a
    /// planner precondition.
    TP_INVALID_ARGUMENT = 1,
    /// The map bytes are not a valid ASCII or PGM map, or have no free cell.
    TP_MAP_FORMAT = 2,
    /// A goal has no admissible configuration under the "fail" policy.
    TP_UNREACHABLE = 3,
    /// An internal search exceeded its node budget.
    TP_BUDGET_EXCEEDED = 4,
    /// The planning core panicked; treat the handle as poisoned.
    TP_PANIC = 5,
}

/// Map and configuration-space dimensions of a loaded world.
#[allow(non_camel_case_types)]
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct tp_stats {
    pub width: i32,
    pub height: i32,
    /// Obstacle-free cells before inflation.
    pub free_cells: usize,
    /// Collision-free cells for the inflated robot disk.
    pub collision_free_cells: usize,
    pub obstacle_components: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &PlanError) -> tp_status {
    match e {
        PlanError::MapFormat(_) | PlanError::EmptyWorld => tp_status::TP_MAP_FORMAT,
        PlanError::Unreachable(_) => tp_status::TP_UNREACHABLE,
        PlanError::BudgetExceeded(_) => tp_status::TP_BUDGET_EXCEEDED,
        _ => tp_status::TP_INVALID_ARGUMENT,
    }
}

fn fail(e: &PlanError) -> tp_status {
    set_error(&e.to_string());
    status_of(e)
}

/// Runs `body` with panics converted to `TP_PANIC`.
fn guarded(body: impl FnOnce() -> tp_status) -> tp_status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            set_error(&msg);
            tp_status::TP_PANIC
        }
    }
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing tetherplan call on the same thread; never
/// free it. Empty string when no call has failed yet.
#[no_mangle]
pub extern "C" fn tp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses map bytes (ASCII '.'/'#' or binary PGM P5), inflates them for a
/// disk robot of the given radius (in cells), and writes a fresh handle to
/// `out`. The handle is immutable and may be shared across threads; release
/// it with `tp_world_free`.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn tp_world_load(
    data: *const u8,
    len: usize,
    radius: f64,
    out: *mut *mut tp_world,
) -> tp_status {
    if data.is_null() || out.is_null() {
        set_error("tp_world_load: null pointer argument");
        return tp_status::TP_INVALID_ARGUMENT;
    }
    let bytes = unsafe { std::slice::from_raw_parts(data, len) };
    guarded(|| match load_map(bytes).and_then(|m| m.inflate(radius)) {
        Ok(world) => {
            let handle = Box::new(tp_world { inner: world });
            unsafe { out.write(Box::into_raw(handle)) };
            tp_status::TP_OK
        }
        Err(e) => fail(&e),
    })
}

/// Releases a handle from `tp_world_load`. Null is a no-op.
///
/// # Safety
/// `world` must be null or a pointer that `tp_world_load` produced and that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn tp_world_free(world: *mut tp_world) {
    if !world.is_null() {
        drop(unsafe { Box::from_raw(world) });
    }
}

/// Fills `out` with the world's dimensions and cell counts.
///
/// # Safety
/// `world` must be a live handle and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn tp_world_stats(
    world: *const tp_world,
    out: *mut tp_stats,
) -> tp_status {
    if world.is_null() || out.is_null() {
        set_error("tp_world_stats: null pointer argument");
        return tp_status::TP_INVALID_ARGUMENT;
    }
    let w = &unsafe { &*world }.inner;
    unsafe {
        out.write(tp_stats {
            width: w.width(),
            height: w.height(),
            free_cells: w.free_cells(),
            collision_free_cells: w.collision_free_cells(),
            obstacle_components: w.components().len(),
        });
    }
    tp_status::TP_OK
}

/// One planning request, mirroring the scenario file schema minus the map
/// (the handle already holds it).
#[derive(Deserialize)]
struct PlanRequest {
    /// "tp", "tmv", "ttsp", or "reconfigure".
    command: String,
    base: [i32; 2],
    tether_length: f64,
    #[serde(default)]
    goals: Vec<[i32; 2]>,
    #[serde(default)]
    on_unreachable: Option<String>,
    #[serde(default)]
    start_tether: Option<Vec<[i32; 2]>>,
    #[serde(default)]
    goal_tether: Option<Vec<[i32; 2]>>,
}

fn cells_of(pts: &[[i32; 2]]) -> Vec<Cell> {
    pts.iter().map(|p| (p[0], p[1])).collect()
}

fn policy_of(req: &PlanRequest) -> Result<OnUnreachable, PlanError> {
    match req.on_unreachable.as_deref() {
        None | Some("fail") => Ok(OnUnreachable::Fail),
        Some("skip") => Ok(OnUnreachable::Skip),
        Some(other) => Err(PlanError::Scenario(format!(
            "on_unreachable must be \"fail\" or \"skip\", got {other:?}"
        ))),
    }
}

fn run_request(world: &GridWorld, req: &PlanRequest) -> Result<String, PlanError> {
    let base = (req.base[0], req.base[1]);
    if req.tether_length < 0.0 {
        return Err(PlanError::Scenario("tether_length is negative".into()));
    }
    let json = match req.command.as_str() {
        "reconfigure" => {
            let t0 = std::time::Instant::now();
            let start = req.start_tether.as_ref().ok_or_else(|| {
                PlanError::Scenario("reconfigure needs a start_tether".into())
            })?;
            let goal = req.goal_tether.as_ref().ok_or_else(|| {
                PlanError::Scenario("reconfigure needs a goal_tether".into())
            })?;
            let c1 = configuration_from_path(world, &cells_of(start))?;
            let c2 = configuration_from_path(world, &cells_of(goal))?;
            if c1.base() != base || c2.base() != base {
                return Err(PlanError::Scenario(
                    "tethers must begin at the request base".into(),
                ));
            }
            let t1 = std::time::Instant::now();
            let route = tr(world, &c1, &c2)?;
            let (_, profile) = drag_tether(world, c1.tether(), &route.path)?;
            let ups_ms = t1.elapsed().as_secs_f64() * 1e3;
            let rf = ReconfigResultFile {
                status: "ok".into(),
                total_length: route.length,
                path: route.path.iter().map(|&(x, y)| [x as f64, y as f64]).collect(),
                min_required_tether: min_required_tether(&c1, &c2),
                profile_max: profile.iter().copied().fold(0.0, f64::max),
                start_tether: c1.tether().iter().map(|&(x, y)| [x as f64, y as f64]).collect(),
                goal_tether: c2.tether().iter().map(|&(x, y)| [x as f64, y as f64]).collect(),
                ups_calls: usize::from(c1.tether().len() > 1 && c2.tether().len() > 1),
                timings_ms: TimingsMs {
                    gcp_ms: 0.0,
                    ups_ms,
                    combinatorial_ms: 0.0,
                    total_ms: t0.elapsed().as_secs_f64() * 1e3,
                },
            };
            serde_json::to_string_pretty(&rf)
        }
        cmd @ ("tp" | "tmv" | "ttsp") => {
            let policy = policy_of(req)?;
            let start = match &req.start_tether {
                Some(pts) => configuration_from_path(world, &cells_of(pts))?,
                None => home_configuration(world, base)?,
            };
            if start.base() != base {
                return Err(PlanError::Scenario(
                    "start_tether must begin at the request base".into(),
                ));
            }
            let goals = cells_of(&req.goals);
            let sol: Solution = match cmd {
                "tp" => {
                    if goals.len() != 1 {
                        return Err(PlanError::Scenario(format!(
                            "tp expects exactly one goal, the request has {}",
                            goals.len()
                        )));
                    }
                    tp(world, &start, goals[0], req.tether_length, policy)?
                }
                "tmv" => tmv(world, &start, &goals, req.tether_length, policy)?,
                _ => ttsp(world, &start, &goals, req.tether_length, policy)?,
            };
            serde_json::to_string_pretty(&ResultFile::from_solution(&sol))
        }
        other => {
            return Err(PlanError::Scenario(format!(
                "command must be tp, tmv, ttsp, or reconfigure, got {other:?}"
            )))
        }
    };
    json.map_err(|e| PlanError::Scenario(e.to_string()))
}

/// Runs one planning request against a loaded world.
///
/// `request_json` is a NUL-terminated JSON object: {"command": "tp" |
/// "tmv" | "ttsp" | "reconfigure", "base": [x, y], "tether_length": L,
/// "goals": [[x, y], ...], "on_unreachable": "fail" | "skip",
/// "start_tether": [[x, y], ...], "goal_tether": [[x, y], ...]} with the
/// last three optional. On success `*out_json` receives the result document
/// (the planners' result-file schema; reconfigure's variant for that
/// command); free it with `tp_string_free`.
///
/// # Safety
/// `world` must be a live handle, `request_json` a NUL-terminated string,
/// and `out_json` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn tp_plan(
    world: *const tp_world,
    request_json: *const c_char,
    out_json: *mut *mut c_char,
) -> tp_status {
    if world.is_null() || request_json.is_null() || out_json.is_null() {
        set_error("tp_plan: null pointer argument");
        return tp_status::TP_INVALID_ARGUMENT;
    }
    let w = &unsafe { &*world }.inner;
    let text = match unsafe { CStr::from_ptr(request_json) }.to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("tp_plan: request is not valid UTF-8");
            return tp_status::TP_INVALID_ARGUMENT;
        }
    };
    guarded(|| {
        let req: PlanRequest = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => {
                set_error(&format!("tp_plan: bad request: {e}"));
                return tp_status::TP_INVALID_ARGUMENT;
            }
        };
        match run_request(w, &req) {
            Ok(json) => {
                let c = CString::new(json).expect("serde_json output has no NUL");
                unsafe { out_json.write(c.into_raw()) };
                tp_status::TP_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// Frees a string returned through `out_json`. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer this library returned and that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn tp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    const MAP: &str = "........\n........\n...##...\n...##...\n........\n........\n";

    unsafe fn load(map: &str, radius: f64) -> *mut tp_world {
        let mut out = ptr::null_mut();
        let st = tp_world_load(map.as_ptr(), map.len(), radius, &mut out);
        assert_eq!(st, tp_status::TP_OK, "{:?}", last_error_string());
        assert!(!out.is_null());
        out
    }

    fn last_error_string() -> String {
        unsafe { CStr::from_ptr(tp_last_error()) }
            .to_string_lossy()
            .into_owned()
    }

    unsafe fn plan(world: *const tp_world, req: &str) -> Result<serde_json::Value, tp_status> {
        let creq = CString::new(req).unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        let st = tp_plan(world, creq.as_ptr(), &mut out);
        if st != tp_status::TP_OK {
            assert!(out.is_null(), "failed calls must not hand out strings");
            return Err(st);
        }
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        tp_string_free(out);
        Ok(serde_json::from_str(&text).unwrap())
    }

    #[test]
    fn load_stats_and_free_round_trip() {
        unsafe {
            let w = load(MAP, 0.0);
            let mut stats = std::mem::MaybeUninit::<tp_stats>::uninit();
            assert_eq!(tp_world_stats(w, stats.as_mut_ptr()), tp_status::TP_OK);
            let stats = stats.assume_init();
            assert_eq!((stats.width, stats.height), (8, 6));
            assert_eq!(stats.free_cells, 44);
            assert_eq!(stats.collision_free_cells, 44);
            assert_eq!(stats.obstacle_components, 1);
            tp_world_free(w);
        }
    }

    #[test]
    fn bad_map_reports_format_error() {
        unsafe {
            let mut out = ptr::null_mut();
            let bad = "..\n...\n";
            let st = tp_world_load(bad.as_ptr(), bad.len(), 0.0, &mut out);
            assert_eq!(st, tp_status::TP_MAP_FORMAT);
            assert!(out.is_null());
            assert!(last_error_string().contains("map format"));
        }
    }

    #[test]
    fn null_arguments_are_rejected_not_crashes() {
        unsafe {
            assert_eq!(
                tp_world_load(ptr::null(), 0, 0.0, ptr::null_mut()),
                tp_status::TP_INVALID_ARGUMENT
            );
            assert_eq!(
                tp_world_stats(ptr::null(), ptr::null_mut()),
                tp_status::TP_INVALID_ARGUMENT
            );
            assert_eq!(
                tp_plan(ptr::null(), ptr::null(), ptr::null_mut()),
                tp_status::TP_INVALID_ARGUMENT
            );
            tp_world_free(ptr::null_mut());
            tp_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn tp_plans_a_straight_route() {
        unsafe {
            let w = load(MAP, 0.0);
            let v = plan(
                w,
                r#"{"command":"tp","base":[0,0],"tether_length":8,"goals":[[7,0]]}"#,
            )
            .unwrap();
            assert_eq!(v["status"], "ok");
            assert!((v["total_length"].as_f64().unwrap() - 7.0).abs() < 1e-9);
            assert_eq!(v["per_goal"][0]["n_configs"], 1);
            tp_world_free(w);
        }
    }

    #[test]
    fn ttsp_tours_and_reports_ups_calls() {
        unsafe {
            let w = load(MAP, 0.0);
            let v = plan(
                w,
                r#"{"command":"ttsp","base":[0,0],"tether_length":30,
                    "goals":[[7,0],[0,5],[7,5]]}"#,
            )
            .unwrap();
            assert_eq!(v["status"], "ok");
            assert_eq!(v["visit_order"].as_array().unwrap().len(), 3);
            tp_world_free(w);
        }
    }

    #[test]
    fn unreachable_goal_maps_to_its_status() {
        unsafe {
            let w = load(MAP, 0.0);
            let st = plan(
                w,
                r#"{"command":"tmv","base":[0,0],"tether_length":2,"goals":[[7,5]]}"#,
            )
            .unwrap_err();
            assert_eq!(st, tp_status::TP_UNREACHABLE);
            assert!(last_error_string().contains("unreachable"));
            tp_world_free(w);
        }
    }

    #[test]
    fn skip_policy_returns_partial_results() {
        unsafe {
            let w = load(MAP, 0.0);
            let v = plan(
                w,
                r#"{"command":"tmv","base":[0,0],"tether_length":8,
                    "goals":[[7,5],[3,0]],"on_unreachable":"skip"}"#,
            )
            .unwrap();
            assert_eq!(v["status"], "partial");
            assert_eq!(v["skipped"], serde_json::json!([0]));
            tp_world_free(w);
        }
    }

    #[test]
    fn reconfigure_reports_profile_and_requirement() {
        unsafe {
            let w = load(MAP, 0.0);
            let v = plan(
                w,
                r#"{"command":"reconfigure","base":[1,2],"tether_length":20,
                    "start_tether":[[1,2],[1,4],[4,5]],
                    "goal_tether":[[1,2],[4,1]]}"#,
            )
            .unwrap();
            assert_eq!(v["status"], "ok");
            let need = v["min_required_tether"].as_f64().unwrap();
            let peak = v["profile_max"].as_f64().unwrap();
            assert!(peak <= need + 2.0 * std::f64::consts::SQRT_2 + 1e-9);
            tp_world_free(w);
        }
    }

    #[test]
    fn malformed_requests_are_invalid_arguments() {
        unsafe {
            let w = load(MAP, 0.0);
            for req in [
                "{not json",
                r#"{"command":"warp","base":[0,0],"tether_length":5}"#,
                r#"{"command":"tp","base":[0,0],"tether_length":5,"goals":[]}"#,
                r#"{"command":"tp","base":[0,0],"tether_length":-1,"goals":[[1,1]]}"#,
            ] {
                let st = plan(w, req).unwrap_err();
                assert_eq!(st, tp_status::TP_INVALID_ARGUMENT, "{req}");
            }
            tp_world_free(w);
        }
    }
}

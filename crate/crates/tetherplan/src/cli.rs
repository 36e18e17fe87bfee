//! Command-line front end: scenario files in, result files and SVG
//! renderings out.
//!
//! Subcommands: `tp`, `tmv`, `ttsp`, `reconfigure`, `verify-convexity`,
//! `verify-oracle`, `workspace-stats`. Each reads a JSON scenario, runs the
//! corresponding planner or verifier, and writes a JSON result (to `--out`,
//! or standard output when omitted) plus an optional SVG rendering.
//!
//! Exit codes: 0 on success, 2 when a goal is unreachable under the strict
//! policy, 1 for usage or format errors and for verifier runs that found
//! violations. Diagnostics go to the error stream. Logging verbosity comes
//! from the TETHERPLAN_LOG environment variable (error, info, debug; quiet
//! by default for scripted use).

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::{PlanError, Result};
use crate::gcp::{configuration_from_path, gcp, home_configuration, Configuration};
use crate::gridmap::Cell;
use crate::oracle::{build_workspace, oracle_tp, verify_convexity, verify_simply_connected};
use crate::planner::{drag_tether, min_required_tether, tmv, tp, tr, OnUnreachable};
use crate::render::render_svg;
use crate::scenario::{ReconfigResultFile, ResultFile, Scenario, TimingsMs};

#[derive(Parser)]
#[command(
    name = "tetherplan",
    version,
    about = "Tethered-robot route planning on 2-D grid maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a single point-to-point query (one goal).
    Tp(PlanArgs),
    /// Plan a tour visiting the goals in scenario order.
    Tmv(PlanArgs),
    /// Plan a minimum-length tour over all goal orders.
    Ttsp(PlanArgs),
    /// Compute the taut route between the scenario's two tether states.
    Reconfigure(PlanArgs),
    /// Sample reconfigurations and check the induced-tether bound.
    VerifyConvexity(VerifyArgs),
    /// Cross-check the planner against the brute-force workspace graph.
    VerifyOracle(VerifyArgs),
    /// Build the workspace graph and report its size.
    WorkspaceStats(StatsArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Result file to write; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG rendering to write.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Override the scenario's unreachable-goal policy.
    #[arg(long, value_parser = ["fail", "skip"])]
    on_unreachable: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario file (JSON); goals are ignored, the map, base, and
    /// tether length define the workspace under test.
    #[arg(long)]
    scenario: PathBuf,
    /// Report file to write; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sample count (configuration pairs, or direct planner queries).
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Seed for the sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct StatsArgs {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Report file to write; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` and runs the selected subcommand, returning the process
/// exit code. Takes the argument iterator (including the program name) so
/// tests can drive it in-process.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // help and version requests print to stdout and succeed
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::from_env(
        env_logger::Env::default().filter_or("TETHERPLAN_LOG", "error"),
    )
    .try_init();
    let outcome = match &cli.command {
        Command::Tp(a) => run_plan(Planner::Tp, a),
        Command::Tmv(a) => run_plan(Planner::Tmv, a),
        Command::Ttsp(a) => run_plan(Planner::Ttsp, a),
        Command::Reconfigure(a) => run_reconfigure(a),
        Command::VerifyConvexity(a) => run_verify_convexity(a),
        Command::VerifyOracle(a) => run_verify_oracle(a),
        Command::WorkspaceStats(a) => run_stats(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                PlanError::Unreachable(_) => 2,
                _ => 1,
            }
        }
    }
}

enum Planner {
    Tp,
    Tmv,
    Ttsp,
}

fn cells_of(pts: &[[i32; 2]]) -> Vec<Cell> {
    pts.iter().map(|p| (p[0], p[1])).collect()
}

fn tether_points(c: &Configuration) -> Vec<[f64; 2]> {
    c.tether().iter().map(|&(x, y)| [x as f64, y as f64]).collect()
}

/// Writes `text` to the given path, or to standard output when none.
fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json_text(value: &impl serde::Serialize) -> Result<String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| PlanError::Scenario(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Renders the scene recorded in a result file. Rendering reads only the
/// result's own numbers (plus the scenario's map, base, and goal markers),
/// so reloading a result file reproduces its SVG byte for byte.
fn result_svg(sc: &Scenario, world: &crate::gridmap::GridWorld, rf: &ResultFile) -> String {
    let tethers: Vec<Vec<[f64; 2]>> = rf.per_goal.iter().map(|g| g.tether.clone()).collect();
    let path = if rf.path.len() >= 2 {
        Some(rf.path.as_slice())
    } else {
        None
    };
    render_svg(world, sc.base_cell(), &sc.goal_cells(), &tethers, path)
}

fn start_configuration(
    sc: &Scenario,
    world: &crate::gridmap::GridWorld,
) -> Result<Configuration> {
    let start = match &sc.start_tether {
        Some(pts) => configuration_from_path(world, &cells_of(pts))?,
        None => home_configuration(world, sc.base_cell())?,
    };
    if start.base() != sc.base_cell() {
        return Err(PlanError::Scenario(
            "start_tether must begin at the scenario base".into(),
        ));
    }
    Ok(start)
}

fn run_plan(kind: Planner, a: &PlanArgs) -> Result<i32> {
    let (mut sc, dir) = Scenario::load(&a.scenario)?;
    if let Some(p) = &a.on_unreachable {
        sc.on_unreachable = Some(p.clone());
    }
    let world = sc.load_world(&dir)?;
    let policy = sc.policy()?;
    let start = start_configuration(&sc, &world)?;
    let goals = sc.goal_cells();
    let sol = match kind {
        Planner::Tp => {
            if goals.len() != 1 {
                return Err(PlanError::Scenario(format!(
                    "tp expects exactly one goal, the scenario has {}",
                    goals.len()
                )));
            }
            tp(&world, &start, goals[0], sc.tether_length, policy)?
        }
        Planner::Tmv => tmv(&world, &start, &goals, sc.tether_length, policy)?,
        Planner::Ttsp => crate::planner::ttsp(&world, &start, &goals, sc.tether_length, policy)?,
    };
    let rf = ResultFile::from_solution(&sol);
    log::info!(
        "planned {} goals: length {:.3}, {} shorten calls, gcp {:.1} ms, ups {:.1} ms, \
         combinatorial {:.1} ms, total {:.1} ms",
        rf.per_goal.len(),
        rf.total_length,
        rf.ups_calls,
        rf.timings_ms.gcp_ms,
        rf.timings_ms.ups_ms,
        rf.timings_ms.combinatorial_ms,
        rf.timings_ms.total_ms,
    );
    emit(&a.out, &to_json_text(&rf)?)?;
    if let Some(svg_path) = &a.svg {
        std::fs::write(svg_path, result_svg(&sc, &world, &rf))?;
    }
    Ok(0)
}

fn run_reconfigure(a: &PlanArgs) -> Result<i32> {
    let (sc, dir) = Scenario::load(&a.scenario)?;
    let world = sc.load_world(&dir)?;
    let t0 = Instant::now();
    let start_pts = sc.start_tether.as_ref().ok_or_else(|| {
        PlanError::Scenario("reconfigure needs a start_tether in the scenario".into())
    })?;
    let goal_pts = sc.goal_tether.as_ref().ok_or_else(|| {
        PlanError::Scenario("reconfigure needs a goal_tether in the scenario".into())
    })?;
    let c1 = configuration_from_path(&world, &cells_of(start_pts))?;
    let c2 = configuration_from_path(&world, &cells_of(goal_pts))?;
    if c1.base() != sc.base_cell() {
        return Err(PlanError::Scenario(
            "start_tether must begin at the scenario base".into(),
        ));
    }
    let t1 = Instant::now();
    let route = tr(&world, &c1, &c2)?;
    let (_, profile) = drag_tether(&world, c1.tether(), &route.path)?;
    let ups_time = t1.elapsed();
    let profile_max = profile.iter().copied().fold(0.0, f64::max);
    // mirror the planner's ledger: a leg touching a trivial tether reuses
    // the taut endpoint tether and performs no shortening call
    let ups_calls = usize::from(c1.tether().len() > 1 && c2.tether().len() > 1);
    let rf = ReconfigResultFile {
        status: "ok".into(),
        total_length: route.length,
        path: route.path.iter().map(|&(x, y)| [x as f64, y as f64]).collect(),
        min_required_tether: min_required_tether(&c1, &c2),
        profile_max,
        start_tether: tether_points(&c1),
        goal_tether: tether_points(&c2),
        ups_calls,
        timings_ms: TimingsMs {
            gcp_ms: 0.0,
            ups_ms: ups_time.as_secs_f64() * 1e3,
            combinatorial_ms: 0.0,
            total_ms: t0.elapsed().as_secs_f64() * 1e3,
        },
    };
    log::info!(
        "reconfigured: route {:.3}, peak tether {:.3}, needs {:.3}",
        rf.total_length,
        rf.profile_max,
        rf.min_required_tether,
    );
    emit(&a.out, &to_json_text(&rf)?)?;
    if let Some(svg_path) = &a.svg {
        let tethers = vec![rf.start_tether.clone(), rf.goal_tether.clone()];
        let svg = render_svg(&world, sc.base_cell(), &[], &tethers, Some(&rf.path));
        std::fs::write(svg_path, svg)?;
    }
    Ok(0)
}

fn run_verify_convexity(a: &VerifyArgs) -> Result<i32> {
    let (sc, dir) = Scenario::load(&a.scenario)?;
    let world = sc.load_world(&dir)?;
    let t0 = Instant::now();
    let report = verify_convexity(&world, sc.base_cell(), sc.tether_length, a.samples, a.seed)?;
    let ok = report.violations.is_empty();
    for v in report.violations.iter().take(3) {
        eprintln!(
            "convexity violation: peak {:.6} exceeds bound for pair {:?} -> {:?}",
            v.peak, v.from_robot, v.to_robot
        );
    }
    let out = json!({
        "status": if ok { "ok" } else { "violations" },
        "seed": report.seed,
        "samples": a.samples,
        "pairs_checked": report.pairs_checked,
        "max_overshoot": report.max_overshoot,
        "max_bend_overshoot": report.max_bend_overshoot,
        "max_budget_ratio": report.max_budget_ratio,
        "violations": report.violations.len(),
        "timings_ms": {
            "gcp_ms": 0.0, "ups_ms": 0.0, "combinatorial_ms": 0.0,
            "total_ms": t0.elapsed().as_secs_f64() * 1e3,
        },
    });
    emit(&a.out, &to_json_text(&out)?)?;
    if ok {
        Ok(0)
    } else {
        eprintln!(
            "error: {} of {} sampled pairs violate the induced-tether bound",
            report.violations.len(),
            report.pairs_checked
        );
        Ok(1)
    }
}

fn run_verify_oracle(a: &VerifyArgs) -> Result<i32> {
    let (sc, dir) = Scenario::load(&a.scenario)?;
    let world = sc.load_world(&dir)?;
    let base = sc.base_cell();
    let limit = sc.tether_length;
    let t0 = Instant::now();
    let graph = build_workspace(&world, base, limit)?;
    let build = t0.elapsed();

    // Every reachable cell: admissible classes from the exhaustive graph
    // against the planner's class enumeration, in one batched search.
    let cells = graph.reachable_cells();
    let t1 = Instant::now();
    let batched = gcp(&world, base, &cells, limit)?;
    let gcp_time = t1.elapsed();
    let mut class_mismatches = 0usize;
    let mut length_mismatches = 0usize;
    for (cell, enumerated) in cells.iter().zip(&batched) {
        let slice = graph.slice(&world, *cell);
        if enumerated.len() != slice.len() {
            class_mismatches += 1;
            log::debug!(
                "cell {cell:?}: planner sees {} classes, oracle {}",
                enumerated.len(),
                slice.len()
            );
            continue;
        }
        for (p, o) in enumerated.iter().zip(&slice) {
            if p.signature() != o.signature() {
                class_mismatches += 1;
            } else if (p.length() - o.length()).abs() > 1e-6 {
                length_mismatches += 1;
            }
        }
    }

    // Sampled direct queries: full planner runs against full oracle runs.
    let home = home_configuration(&world, base)?;
    let mut rng: rand_chacha::ChaCha8Rng = rand::SeedableRng::seed_from_u64(a.seed);
    let k = a.samples.min(cells.len());
    let mut idx: Vec<usize> = (0..cells.len()).collect();
    for i in 0..k {
        let j = i + rand::Rng::random_range(&mut rng, 0..idx.len() - i);
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx.sort_unstable();
    let mut direct_mismatches = 0usize;
    for &i in &idx {
        let goal = cells[i];
        let sol = tp(&world, &home, goal, limit, OnUnreachable::Fail)?;
        let ot = oracle_tp(&world, &graph, &home, goal)?;
        let chosen = &sol.visits[0];
        let agree = chosen.configuration.signature() == ot.configuration.signature()
            && (chosen.configuration.length() - ot.configuration.length()).abs() <= 1e-6
            && (chosen.leg.length - ot.length).abs() <= 1e-6;
        if !agree {
            direct_mismatches += 1;
            log::debug!("direct query at {goal:?} disagrees with the oracle");
        }
    }

    // Independently searched reconfiguration classes.
    let homotopy = verify_simply_connected(&world, base, limit, a.samples, a.seed)?;

    let ok = class_mismatches == 0 && length_mismatches == 0 && direct_mismatches == 0
        && homotopy.violations.is_empty();
    let out = json!({
        "status": if ok { "ok" } else { "mismatches" },
        "seed": a.seed,
        "node_count": graph.node_count(),
        "settled_count": graph.settled_count(),
        "reachable_cells": cells.len(),
        "class_mismatches": class_mismatches,
        "length_mismatches": length_mismatches,
        "direct_queries": k,
        "direct_mismatches": direct_mismatches,
        "homotopy_pairs": homotopy.pairs_checked,
        "homotopy_agreements": homotopy.agreements,
        "homotopy_violations": homotopy.violations.len(),
        "timings_ms": {
            "gcp_ms": gcp_time.as_secs_f64() * 1e3,
            "ups_ms": 0.0,
            "combinatorial_ms": build.as_secs_f64() * 1e3,
            "total_ms": t0.elapsed().as_secs_f64() * 1e3,
        },
    });
    emit(&a.out, &to_json_text(&out)?)?;
    if ok {
        Ok(0)
    } else {
        eprintln!(
            "error: planner and oracle disagree ({class_mismatches} class, \
             {length_mismatches} length, {direct_mismatches} direct, {} homotopy)",
            homotopy.violations.len()
        );
        Ok(1)
    }
}

fn run_stats(a: &StatsArgs) -> Result<i32> {
    let (sc, dir) = Scenario::load(&a.scenario)?;
    let world = sc.load_world(&dir)?;
    let t0 = Instant::now();
    let graph = build_workspace(&world, sc.base_cell(), sc.tether_length)?;
    let build = t0.elapsed();
    let mut free = 0usize;
    let mut collision_free = 0usize;
    for y in 0..world.height() {
        for x in 0..world.width() {
            free += usize::from(world.is_free((x, y)));
            collision_free += usize::from(world.is_collision_free((x, y)));
        }
    }
    let out = json!({
        "status": "ok",
        "width": world.width(),
        "height": world.height(),
        "free_cells": free,
        "collision_free_cells": collision_free,
        "obstacle_components": world.components().len(),
        "tether_length": sc.tether_length,
        "node_count": graph.node_count(),
        "settled_count": graph.settled_count(),
        "reachable_cells": graph.reachable_cells().len(),
        "timings_ms": {
            "gcp_ms": 0.0, "ups_ms": 0.0,
            "combinatorial_ms": build.as_secs_f64() * 1e3,
            "total_ms": t0.elapsed().as_secs_f64() * 1e3,
        },
    });
    emit(&a.out, &to_json_text(&out)?)?;
    Ok(0)
}

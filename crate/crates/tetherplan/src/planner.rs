//! Planning on top of goal configurations: single-goal dispatch, fixed-order
//! tours, and exact best-order tours, all measured in reconfiguration length.
//!
//! A reconfiguration between two configurations anchored at the same base is
//! the route obtained by pulling the concatenation of the reversed outbound
//! tether and the inbound tether taut. Walking that route while dragging the
//! tether turns one tether class into the other, and the tether length along
//! the way never exceeds the longer of the two endpoint tethers (checked
//! against dragged profiles in the verification suite), so a feasible plan
//! never needs more cable than its endpoints do.
//!
//! Tours start at the given configuration, visit each goal's chosen class,
//! and end retracted at the base. Legs touching a fully retracted tether are
//! the tether curve itself and cost no shortening call; every other leg is
//! one call, which is what `ups_calls` counts (a mirrored leg counts too).

use std::time::{Duration, Instant};

use crate::curve::Polyline;
use crate::error::{PlanError, Result};
use crate::gcp::{gcp, home_configuration, Configuration};
use crate::gridmap::{raster_segment, Cell, GridWorld, MaskKind};
use crate::shorten::{bends_length, drag_step, shorten_cells};

/// A robot route between two configurations, as taut bend cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconfiguration {
    /// Bend cells from the outbound robot position to the inbound one.
    pub path: Vec<Cell>,
    /// Exact chord length of `path`.
    pub length: f64,
}

/// What to do with goals that admit no configuration under the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnUnreachable {
    /// Fail the whole plan, reporting the offending goal indices.
    Fail,
    /// Plan the reachable goals and report the rest as skipped.
    Skip,
}

/// One planned stop: which goal, the configuration chosen there, and the
/// route from the previous stop.
#[derive(Debug, Clone)]
pub struct GoalVisit {
    /// Index into the caller's goal list.
    pub goal_index: usize,
    pub goal: Cell,
    /// Arrival configuration (the tether class held at the goal).
    pub configuration: Configuration,
    /// Route walked from the previous stop.
    pub leg: Reconfiguration,
    /// How many admissible configurations the goal offered.
    pub n_candidates: usize,
    /// Position of the chosen one in the goal's sorted candidate list.
    pub chosen_index: usize,
}

/// Wall-clock breakdown of a planning call.
#[derive(Debug, Clone, Copy, Default)]
pub struct Timings {
    /// Enumerating goal configurations.
    pub classes: Duration,
    /// Computing reconfiguration routes.
    pub legs: Duration,
    /// Choosing among them (argmin or tour search).
    pub optimize: Duration,
    pub total: Duration,
}

/// A complete plan.
#[derive(Debug, Clone)]
pub struct Solution {
    /// The full robot route, all legs joined.
    pub path: Polyline,
    /// Sum of leg lengths, including the return leg when present.
    pub total_length: f64,
    /// Stops in the order they are visited.
    pub visits: Vec<GoalVisit>,
    /// Final leg back to the base (tours only).
    pub return_leg: Option<Reconfiguration>,
    /// Input indices of goals dropped under `OnUnreachable::Skip`.
    pub skipped: Vec<usize>,
    /// Reconfiguration routes computed; a mirrored route counts as well.
    pub ups_calls: usize,
    pub timings: Timings,
}

/// Route that reconfigures `from` into `to`: the concatenation of the
/// reversed outbound tether and the inbound tether, pulled taut. When either
/// tether is fully retracted the other tether already is that route.
pub fn tr(
    world: &GridWorld,
    from: &Configuration,
    to: &Configuration,
) -> Result<Reconfiguration> {
    let mut ups = 0usize;
    leg(world, from, to, &mut ups)
}

/// Longest tether needed at any moment while reconfiguring `from` into
/// `to` along the taut route: the longer endpoint suffices.
pub fn min_required_tether(from: &Configuration, to: &Configuration) -> f64 {
    from.length().max(to.length())
}

fn leg(
    world: &GridWorld,
    from: &Configuration,
    to: &Configuration,
    ups: &mut usize,
) -> Result<Reconfiguration> {
    if from.base() != to.base() {
        return Err(PlanError::BaseMismatch);
    }
    if from.tether().len() == 1 {
        return Ok(Reconfiguration {
            path: to.tether().to_vec(),
            length: to.length(),
        });
    }
    if to.tether().len() == 1 {
        let mut path: Vec<Cell> = from.tether().to_vec();
        path.reverse();
        return Ok(Reconfiguration {
            path,
            length: from.length(),
        });
    }
    *ups += 1;
    let mut cells: Vec<Cell> = from.tether().to_vec();
    cells.reverse();
    cells.extend_from_slice(&to.tether()[1..]);
    let path = shorten_cells(world, &cells, MaskKind::CollisionFree, None)?;
    Ok(Reconfiguration {
        length: bends_length(&path),
        path,
    })
}

fn mirrored(r: &Reconfiguration) -> Reconfiguration {
    let mut path = r.path.clone();
    path.reverse();
    Reconfiguration {
        path,
        length: r.length,
    }
}

/// Drags a taut tether along a route of bend cells, one raster cell at a
/// time. Returns the final tether and the tether length after every raster
/// step (the first entry is the starting length). The route must start at
/// the tether's free end.
pub fn drag_tether(
    world: &GridWorld,
    tether: &[Cell],
    route: &[Cell],
) -> Result<(Vec<Cell>, Vec<f64>)> {
    let mut t = shorten_cells(world, tether, MaskKind::CollisionFree, None)?;
    if route.first() != t.last() {
        return Err(PlanError::EndpointMismatch);
    }
    let mut profile = vec![bends_length(&t)];
    for w in route.windows(2) {
        for &c in &raster_segment(w[0], w[1])[1..] {
            drag_step(world, &mut t, c, MaskKind::CollisionFree)?;
            profile.push(bends_length(&t));
        }
    }
    Ok((t, profile))
}

/// Plans a single goal: enumerate its admissible classes, compute the
/// reconfiguration from `start` to each, and keep the best by
/// (route length, tether length, class letters). No return leg.
pub fn tp(
    world: &GridWorld,
    start: &Configuration,
    goal: Cell,
    max_tether: f64,
    policy: OnUnreachable,
) -> Result<Solution> {
    let t0 = Instant::now();
    let classes = gcp(world, start.base(), &[goal], max_tether)?;
    let classes_time = t0.elapsed();
    let cands = &classes[0];
    if cands.is_empty() {
        return match policy {
            OnUnreachable::Fail => Err(PlanError::Unreachable(vec![0])),
            OnUnreachable::Skip => Ok(empty_solution(start, vec![0], classes_time, t0)),
        };
    }
    let t1 = Instant::now();
    let mut ups = 0usize;
    let mut legs = Vec::with_capacity(cands.len());
    for c in cands {
        legs.push(leg(world, start, c, &mut ups)?);
    }
    let legs_time = t1.elapsed();

    let t2 = Instant::now();
    let mut best = 0usize;
    for k in 1..cands.len() {
        let better = legs[k]
            .length
            .total_cmp(&legs[best].length)
            .then_with(|| cands[k].length().total_cmp(&cands[best].length()))
            .then_with(|| cands[k].signature().cmp(cands[best].signature()))
            .is_lt();
        if better {
            best = k;
        }
    }
    let optimize_time = t2.elapsed();

    let chosen = legs[best].clone();
    Ok(Solution {
        path: Polyline::from_cells(&chosen.path)?,
        total_length: chosen.length,
        visits: vec![GoalVisit {
            goal_index: 0,
            goal,
            configuration: cands[best].clone(),
            leg: chosen,
            n_candidates: cands.len(),
            chosen_index: best,
        }],
        return_leg: None,
        skipped: Vec::new(),
        ups_calls: ups,
        timings: Timings {
            classes: classes_time,
            legs: legs_time,
            optimize: optimize_time,
            total: t0.elapsed(),
        },
    })
}

/// Plans the goals in the given order, choosing one configuration per goal
/// by dynamic programming over stages, and returns to the base afterwards.
pub fn tmv(
    world: &GridWorld,
    start: &Configuration,
    goals: &[Cell],
    max_tether: f64,
    policy: OnUnreachable,
) -> Result<Solution> {
    let t0 = Instant::now();
    let classes = gcp(world, start.base(), goals, max_tether)?;
    let classes_time = t0.elapsed();
    let (stages, kept, skipped) = partition(classes, policy)?;
    if stages.is_empty() {
        return Ok(empty_solution(start, skipped, classes_time, t0));
    }

    let t1 = Instant::now();
    let mut ups = 0usize;
    // legs[0]: start -> stage 0; legs[i]: stage i-1 -> stage i.
    let mut legs: Vec<Vec<Vec<Reconfiguration>>> = Vec::with_capacity(stages.len());
    let first: Vec<Vec<Reconfiguration>> = stages[0]
        .iter()
        .map(|c| leg(world, start, c, &mut ups).map(|l| vec![l]))
        .collect::<Result<_>>()?;
    legs.push(first);
    for i in 1..stages.len() {
        let mut block = Vec::with_capacity(stages[i - 1].len());
        for c1 in &stages[i - 1] {
            let mut row = Vec::with_capacity(stages[i].len());
            for c2 in &stages[i] {
                row.push(leg(world, c1, c2, &mut ups)?);
            }
            block.push(row);
        }
        legs.push(block);
    }
    let legs_time = t1.elapsed();

    let t2 = Instant::now();
    // cost[i][k]: best total through config k of stage i; parent is the
    // previous stage's choice. Strict improvement keeps the earliest parent.
    let mut cost: Vec<Vec<f64>> = Vec::with_capacity(stages.len());
    let mut parent: Vec<Vec<usize>> = Vec::with_capacity(stages.len());
    cost.push(legs[0].iter().map(|ls| ls[0].length).collect());
    parent.push(vec![0; stages[0].len()]);
    for i in 1..stages.len() {
        let mut c = vec![f64::INFINITY; stages[i].len()];
        let mut p = vec![0usize; stages[i].len()];
        for (k1, row) in legs[i].iter().enumerate() {
            for (k2, l) in row.iter().enumerate() {
                let total = cost[i - 1][k1] + l.length;
                if total < c[k2] {
                    c[k2] = total;
                    p[k2] = k1;
                }
            }
        }
        cost.push(c);
        parent.push(p);
    }
    let last = stages.len() - 1;
    let mut best_k = 0usize;
    let mut best_total = f64::INFINITY;
    for (k, c) in cost[last].iter().enumerate() {
        let total = c + stages[last][k].length(); // retract home
        if total < best_total {
            best_total = total;
            best_k = k;
        }
    }
    let mut picks = vec![0usize; stages.len()];
    picks[last] = best_k;
    for i in (1..stages.len()).rev() {
        picks[i - 1] = parent[i][picks[i]];
    }
    let optimize_time = t2.elapsed();

    let mut visits = Vec::with_capacity(stages.len());
    for (i, &k) in picks.iter().enumerate() {
        let l = if i == 0 {
            legs[0][k][0].clone()
        } else {
            legs[i][picks[i - 1]][k].clone()
        };
        visits.push(GoalVisit {
            goal_index: kept[i],
            goal: goals[kept[i]],
            configuration: stages[i][k].clone(),
            leg: l,
            n_candidates: stages[i].len(),
            chosen_index: k,
        });
    }
    let return_leg = {
        let mut t = 0usize;
        leg(world, &stages[last][best_k], &home_configuration(world, start.base())?, &mut t)?
    };
    assemble(
        start,
        visits,
        Some(return_leg),
        skipped,
        ups,
        Timings {
            classes: classes_time,
            legs: legs_time,
            optimize: optimize_time,
            total: t0.elapsed(),
        },
    )
}

/// Plans the goals in the best order: exact tour search over (visited set,
/// final configuration) states, returning to the base at the end. Intended
/// for modest goal counts; refuses more than 20.
pub fn ttsp(
    world: &GridWorld,
    start: &Configuration,
    goals: &[Cell],
    max_tether: f64,
    policy: OnUnreachable,
) -> Result<Solution> {
    if goals.len() > 20 {
        return Err(PlanError::Scenario(format!(
            "exact tour over {} goals is not tractable; the limit is 20",
            goals.len()
        )));
    }
    let t0 = Instant::now();
    let classes = gcp(world, start.base(), goals, max_tether)?;
    let classes_time = t0.elapsed();
    let (clusters, kept, skipped) = partition(classes, policy)?;
    if clusters.is_empty() {
        return Ok(empty_solution(start, skipped, classes_time, t0));
    }

    // Flatten configurations; node = (cluster, member).
    let m = clusters.len();
    let offsets: Vec<usize> = clusters
        .iter()
        .scan(0usize, |acc, c| {
            let o = *acc;
            *acc += c.len();
            Some(o)
        })
        .collect();
    let n_total: usize = clusters.iter().map(|c| c.len()).sum();
    let node = |i: usize, k: usize| offsets[i] + k;

    let t1 = Instant::now();
    let mut ups = 0usize;
    // Cross-cluster legs, computed once per unordered pair and mirrored.
    let mut table: Vec<Option<Reconfiguration>> = vec![None; n_total * n_total];
    for i in 0..m {
        for j in i + 1..m {
            for (k1, c1) in clusters[i].iter().enumerate() {
                for (k2, c2) in clusters[j].iter().enumerate() {
                    let before = ups;
                    let l = leg(world, c1, c2, &mut ups)?;
                    if ups > before {
                        ups += 1; // the mirrored route below
                    }
                    table[node(i, k1) * n_total + node(j, k2)] = Some(mirrored(&l));
                    table[node(j, k2) * n_total + node(i, k1)] = Some(l);
                }
            }
        }
    }
    // Start legs.
    let mut start_legs: Vec<Reconfiguration> = Vec::with_capacity(n_total);
    for cluster in &clusters {
        for c in cluster {
            start_legs.push(leg(world, start, c, &mut ups)?);
        }
    }
    let legs_time = t1.elapsed();

    let t2 = Instant::now();
    let full = (1usize << m) - 1;
    let mut cost = vec![f64::INFINITY; (full + 1) * n_total];
    let mut from = vec![usize::MAX; (full + 1) * n_total];
    for i in 0..m {
        for k in 0..clusters[i].len() {
            cost[(1 << i) * n_total + node(i, k)] = start_legs[node(i, k)].length;
        }
    }
    for mask in 1..=full {
        for i in 0..m {
            if mask & (1 << i) == 0 {
                continue;
            }
            for k in 0..clusters[i].len() {
                let c = cost[mask * n_total + node(i, k)];
                if !c.is_finite() {
                    continue;
                }
                for j in 0..m {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let nmask = mask | (1 << j);
                    for k2 in 0..clusters[j].len() {
                        let l = table[node(j, k2) * n_total + node(i, k)]
                            .as_ref()
                            .expect("cross-cluster legs are complete");
                        // table[to * n + from] holds the from -> to route.
                        let total = c + l.length;
                        let slot = nmask * n_total + node(j, k2);
                        if total < cost[slot] {
                            cost[slot] = total;
                            from[slot] = node(i, k);
                        }
                    }
                }
            }
        }
    }
    let mut best_node = 0usize;
    let mut best_total = f64::INFINITY;
    for i in 0..m {
        for k in 0..clusters[i].len() {
            let n = node(i, k);
            let total = cost[full * n_total + n] + flat(&clusters, n).length();
            if total < best_total {
                best_total = total;
                best_node = n;
            }
        }
    }
    // Walk the parents back to recover the visit sequence.
    let mut order_nodes = Vec::with_capacity(m);
    let mut mask = full;
    let mut cur = best_node;
    loop {
        order_nodes.push(cur);
        let prev = from[mask * n_total + cur];
        let ci = cluster_of(&offsets, &clusters, cur);
        mask &= !(1 << ci);
        if prev == usize::MAX {
            break;
        }
        cur = prev;
    }
    order_nodes.reverse();
    let optimize_time = t2.elapsed();

    let mut visits = Vec::with_capacity(m);
    let mut prev_node: Option<usize> = None;
    for &n in &order_nodes {
        let ci = cluster_of(&offsets, &clusters, n);
        let l = match prev_node {
            None => start_legs[n].clone(),
            Some(p) => table[n * n_total + p]
                .as_ref()
                .expect("cross-cluster legs are complete")
                .clone(),
        };
        visits.push(GoalVisit {
            goal_index: kept[ci],
            goal: goals[kept[ci]],
            configuration: flat(&clusters, n).clone(),
            leg: l,
            n_candidates: clusters[ci].len(),
            chosen_index: n - offsets[ci],
        });
        prev_node = Some(n);
    }
    let return_leg = {
        let mut t = 0usize;
        leg(
            world,
            flat(&clusters, best_node),
            &home_configuration(world, start.base())?,
            &mut t,
        )?
    };
    assemble(
        start,
        visits,
        Some(return_leg),
        skipped,
        ups,
        Timings {
            classes: classes_time,
            legs: legs_time,
            optimize: optimize_time,
            total: t0.elapsed(),
        },
    )
}

fn flat<'a>(clusters: &'a [Vec<Configuration>], mut n: usize) -> &'a Configuration {
    for c in clusters {
        if n < c.len() {
            return &c[n];
        }
        n -= c.len();
    }
    unreachable!("node index within bounds")
}

fn cluster_of(offsets: &[usize], clusters: &[Vec<Configuration>], n: usize) -> usize {
    let mut ci = 0;
    for (i, &o) in offsets.iter().enumerate() {
        if n >= o && n < o + clusters[i].len() {
            ci = i;
        }
    }
    ci
}

/// Splits per-goal configuration lists into non-empty stages, recording the
/// kept input indices and the skipped ones (or failing, per policy).
fn partition(
    classes: Vec<Vec<Configuration>>,
    policy: OnUnreachable,
) -> Result<(Vec<Vec<Configuration>>, Vec<usize>, Vec<usize>)> {
    let mut stages = Vec::new();
    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    for (i, c) in classes.into_iter().enumerate() {
        if c.is_empty() {
            skipped.push(i);
        } else {
            kept.push(i);
            stages.push(c);
        }
    }
    if !skipped.is_empty() && policy == OnUnreachable::Fail {
        return Err(PlanError::Unreachable(skipped));
    }
    Ok((stages, kept, skipped))
}

fn empty_solution(
    start: &Configuration,
    skipped: Vec<usize>,
    classes_time: Duration,
    t0: Instant,
) -> Solution {
    Solution {
        path: Polyline::from_cells(&[start.robot()]).expect("single cell"),
        total_length: 0.0,
        visits: Vec::new(),
        return_leg: None,
        skipped,
        ups_calls: 0,
        timings: Timings {
            classes: classes_time,
            total: t0.elapsed(),
            ..Timings::default()
        },
    }
}

fn assemble(
    start: &Configuration,
    visits: Vec<GoalVisit>,
    return_leg: Option<Reconfiguration>,
    skipped: Vec<usize>,
    ups: usize,
    timings: Timings,
) -> Result<Solution> {
    let mut cells: Vec<Cell> = vec![start.robot()];
    let mut total = 0.0;
    for v in &visits {
        debug_assert_eq!(v.leg.path.first(), cells.last());
        cells.extend_from_slice(&v.leg.path[1..]);
        total += v.leg.length;
    }
    if let Some(r) = &return_leg {
        debug_assert_eq!(r.path.first(), cells.last());
        cells.extend_from_slice(&r.path[1..]);
        total += r.length;
    }
    Ok(Solution {
        path: Polyline::from_cells(&cells)?,
        total_length: total,
        visits,
        return_leg,
        skipped,
        ups_calls: ups,
        timings,
    })
}

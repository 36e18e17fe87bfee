//! Brute-force ground truth: exhaustive workspace enumeration and the
//! empirical verifiers built on it.
//!
//! The planner reaches goal classes with a heuristic search over interned
//! words and never materializes the whole reachable configuration set. This
//! module does the opposite on purpose: a plain best-first settle over
//! (cell, crossing word) states with floating-point distances and explicit
//! word vectors, storing every admissible configuration it finds. It shares
//! only the primitive layers with the planner (rasterization, crossing
//! letters, tether shortening), so agreement between the two is evidence,
//! not tautology.
//!
//! On top of the enumeration sit two verifiers: one drags tethers along
//! reconfiguration routes and checks that the induced length never climbs
//! past the longer endpoint (plus a small grid allowance), the other checks
//! that independently found reconfiguration routes between the same two
//! configurations always land in the same homotopy class.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::Polyline;
use crate::error::{PlanError, Result};
use crate::gcp::{configuration_from_taut, Configuration, LENGTH_EPS};
use crate::gridmap::{raster_segment, Cell, GridWorld, MaskKind};
use crate::homotopy::signature_of_cells;
use crate::planner::{drag_tether, tr};
use crate::shorten::{bends_length, drag_step, shorten_cells};

/// Hard ceiling on settled states per search; enumeration is desk-scale
/// tooling and refuses to thrash instead of swapping.
pub const NODE_CAP: usize = 5_000_000;

/// Search budget multiplier over the tether limit. A taut curve's raster
/// walk is at most sqrt(4 - 2 sqrt(2)) ~ 1.0824 times its chord length, so
/// 1.1 times the limit reaches every admissible class with margin.
const BUDGET_FACTOR: f64 = 1.1;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Same move set and order as the planner's search: straight steps first,
/// then diagonals; diagonal steps only need the target cell free.
const NEIGHBORS: [(i32, i32); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

/// Total-order wrapper so f64 distances can key a heap.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// One settled augmented state of a fresh search. Distances live on the
/// heap keys; settled nodes only need identity and the parent chain.
#[derive(Debug, Clone)]
struct SearchNode {
    cell: Cell,
    word: Vec<i32>,
    parent: Option<u32>,
}

/// Appends crossing letters to a reduced word, cancelling as it goes.
fn word_step(word: &[i32], world: &GridWorld, a: Cell, b: Cell) -> Vec<i32> {
    let mut w = word.to_vec();
    crate::homotopy::segment_letters(world, a, b, |l| {
        if w.last() == Some(&-l) {
            w.pop();
        } else {
            w.push(l);
        }
    });
    w
}

/// Uniform-cost settle over (cell, word) states from one start state.
/// `visit` sees the settled list and the new node's index after each
/// settle and returns true to stop early. States farther than `budget`
/// are never pushed.
fn settle_states<F>(
    world: &GridWorld,
    start: Cell,
    start_word: Vec<i32>,
    budget: f64,
    mut visit: F,
) -> Result<Vec<SearchNode>>
where
    F: FnMut(&[SearchNode], u32) -> Result<bool>,
{
    struct Pending {
        cell: Cell,
        word: Vec<i32>,
        parent: Option<u32>,
    }
    let mut pending = vec![Pending {
        cell: start,
        word: start_word.clone(),
        parent: None,
    }];
    let mut best: HashMap<(Cell, Vec<i32>), f64> = HashMap::new();
    best.insert((start, start_word.clone()), 0.0);
    // Key carries (dist, y, x, word) so pops are deterministic.
    let mut heap = BinaryHeap::new();
    heap.push(std::cmp::Reverse((
        Dist(0.0),
        start.1,
        start.0,
        start_word,
        0u32,
    )));
    let mut nodes: Vec<SearchNode> = Vec::new();

    while let Some(std::cmp::Reverse((Dist(d), _y, _x, _w, pid))) = heap.pop() {
        let p = &pending[pid as usize];
        match best.get(&(p.cell, p.word.clone())) {
            Some(&b) if b < d => continue, // stale entry
            _ => {}
        }
        nodes.push(SearchNode {
            cell: p.cell,
            word: p.word.clone(),
            parent: p.parent,
        });
        let id = (nodes.len() - 1) as u32;
        if nodes.len() > NODE_CAP {
            return Err(PlanError::BudgetExceeded(NODE_CAP));
        }
        if visit(&nodes, id)? {
            break;
        }
        let (cell, dist) = (nodes[id as usize].cell, d);
        for (dx, dy) in NEIGHBORS {
            let next = (cell.0 + dx, cell.1 + dy);
            if !world.is_collision_free(next) {
                continue;
            }
            let ndist = dist + if dx != 0 && dy != 0 { SQRT_2 } else { 1.0 };
            if ndist > budget {
                continue;
            }
            let nword = word_step(&nodes[id as usize].word, world, cell, next);
            match best.get(&(next, nword.clone())) {
                Some(&b) if b <= ndist => continue,
                _ => {}
            }
            best.insert((next, nword.clone()), ndist);
            pending.push(Pending {
                cell: next,
                word: nword.clone(),
                parent: Some(id),
            });
            heap.push(std::cmp::Reverse((
                Dist(ndist),
                next.1,
                next.0,
                nword,
                (pending.len() - 1) as u32,
            )));
        }
    }
    Ok(nodes)
}

/// Cells of the settle tree path ending at `id`, start first.
fn chain_cells(nodes: &[SearchNode], id: u32) -> Vec<Cell> {
    let mut cells = Vec::new();
    let mut cur = Some(id);
    while let Some(i) = cur {
        cells.push(nodes[i as usize].cell);
        cur = nodes[i as usize].parent;
    }
    cells.reverse();
    cells
}

/// One enumerated workspace state: a reachable (cell, class) pair with its
/// taut tether, grown incrementally by dragging along the settle tree.
/// The cell is implicit (the tether's last vertex, also the `by_cell` key).
#[derive(Debug, Clone)]
struct WsNode {
    word: Vec<i32>,
    tether: Vec<Cell>,
    tether_len: f64,
}

/// The fully enumerated workspace: every (cell, class) state whose
/// class-optimal raster walk from the base fits the search budget, with
/// taut tether lengths attached. Edges are implicit: two states are
/// adjacent when their cells are 8-connected and the move's crossing
/// letters turn one word into the other; step costs are 1 and sqrt(2).
pub struct WorkspaceGraph {
    base: Cell,
    max_tether: f64,
    nodes: Vec<WsNode>,
    index: HashMap<(Cell, Vec<i32>), u32>,
    by_cell: HashMap<Cell, Vec<u32>>,
}

impl WorkspaceGraph {
    pub fn base(&self) -> Cell {
        self.base
    }

    pub fn max_tether(&self) -> f64 {
        self.max_tether
    }

    /// Admissible configurations: settled states whose taut tether is
    /// within the limit.
    pub fn node_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.tether_len <= self.max_tether + LENGTH_EPS)
            .count()
    }

    /// Everything the search settled, including states only reachable by
    /// over-length walks inside the budget margin.
    pub fn settled_count(&self) -> usize {
        self.nodes.len()
    }

    /// True when the configuration is one of this graph's states.
    pub fn contains(&self, c: &Configuration) -> bool {
        self.index
            .contains_key(&(c.robot(), c.signature().letters().to_vec()))
    }

    /// Every cell holding at least one valid configuration, in scan order.
    pub fn reachable_cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self
            .by_cell
            .iter()
            .filter(|(_, ids)| ids.iter().any(|&i| self.valid(i)))
            .map(|(&c, _)| c)
            .collect();
        cells.sort_by_key(|&(x, y)| (y, x));
        cells
    }

    /// All valid configurations at one cell, sorted by (length, word):
    /// admissible tether, no self-crossing. This is the set the planner's
    /// goal enumeration must reproduce.
    pub fn slice(&self, world: &GridWorld, cell: Cell) -> Vec<Configuration> {
        let mut ids: Vec<u32> = self
            .by_cell
            .get(&cell)
            .map(|v| v.clone())
            .unwrap_or_default();
        ids.retain(|&i| self.valid(i));
        ids.sort_by(|&a, &b| {
            let (na, nb) = (&self.nodes[a as usize], &self.nodes[b as usize]);
            na.tether_len
                .total_cmp(&nb.tether_len)
                .then_with(|| na.word.cmp(&nb.word))
        });
        ids.iter()
            .map(|&i| configuration_from_taut(world, self.nodes[i as usize].tether.clone()))
            .collect()
    }

    fn valid(&self, id: u32) -> bool {
        let n = &self.nodes[id as usize];
        n.tether_len <= self.max_tether + LENGTH_EPS
            && !Polyline::from_cells(&n.tether)
                .expect("stored tethers are cell-centered")
                .is_self_crossing()
    }

    fn valid_ids(&self) -> Vec<u32> {
        (0..self.nodes.len() as u32)
            .filter(|&i| self.valid(i))
            .collect()
    }

    fn config_at(&self, world: &GridWorld, id: u32) -> Configuration {
        configuration_from_taut(world, self.nodes[id as usize].tether.clone())
    }
}

/// Enumerates every reachable (cell, class) state from `base` within the
/// search budget for tether limit `max_tether`, dragging a taut tether
/// along the settle tree so each state carries its exact class-optimal
/// tether length.
pub fn build_workspace(world: &GridWorld, base: Cell, max_tether: f64) -> Result<WorkspaceGraph> {
    if !world.in_bounds(base) {
        return Err(PlanError::OutOfBounds {
            x: base.0,
            y: base.1,
        });
    }
    if !world.is_collision_free(base) {
        return Err(PlanError::Blocked {
            x: base.0,
            y: base.1,
        });
    }
    let budget = BUDGET_FACTOR * max_tether + LENGTH_EPS;
    let mut tethers: Vec<Vec<Cell>> = Vec::new();
    let mut lens: Vec<f64> = Vec::new();
    let nodes = settle_states(world, base, Vec::new(), budget, |nodes, id| {
        let n = &nodes[id as usize];
        let (t, l) = match n.parent {
            None => (vec![base], 0.0),
            Some(p) => {
                let mut t = tethers[p as usize].clone();
                drag_step(world, &mut t, n.cell, MaskKind::CollisionFree)?;
                let l = bends_length(&t);
                (t, l)
            }
        };
        debug_assert_eq!(
            signature_of_cells(world, &t).letters(),
            &n.word[..],
            "dragged tether stays in the state's class"
        );
        tethers.push(t);
        lens.push(l);
        Ok(false)
    })?;

    let mut index = HashMap::with_capacity(nodes.len());
    let mut by_cell: HashMap<Cell, Vec<u32>> = HashMap::new();
    let mut ws = Vec::with_capacity(nodes.len());
    for (i, n) in nodes.into_iter().enumerate() {
        index.insert((n.cell, n.word.clone()), i as u32);
        by_cell.entry(n.cell).or_default().push(i as u32);
        ws.push(WsNode {
            word: n.word,
            tether: std::mem::take(&mut tethers[i]),
            tether_len: lens[i],
        });
    }
    Ok(WorkspaceGraph {
        base,
        max_tether,
        nodes: ws,
        index,
        by_cell,
    })
}

/// A ground-truth single-goal plan.
#[derive(Debug, Clone)]
pub struct OracleTp {
    /// Grid-optimal admissible walk from the start to the chosen goal
    /// configuration, cell by cell.
    pub raw: Vec<Cell>,
    /// The same walk pulled taut.
    pub shortened: Vec<Cell>,
    /// Length of the taut walk.
    pub length: f64,
    /// The goal configuration the walk arrives in.
    pub configuration: Configuration,
}

/// Single-goal planning by exhaustive search: settle states outward from
/// the start configuration until every valid goal class is reached, then
/// pick the best by (taut route length, tether length, word), the same
/// order the planner uses.
pub fn oracle_tp(
    world: &GridWorld,
    g: &WorkspaceGraph,
    start: &Configuration,
    goal: Cell,
) -> Result<OracleTp> {
    if start.base() != g.base() {
        return Err(PlanError::BaseMismatch);
    }
    if !g.contains(start) {
        return Err(PlanError::Scenario(
            "start configuration is not a workspace state".into(),
        ));
    }
    if !world.in_bounds(goal) {
        return Err(PlanError::OutOfBounds { x: goal.0, y: goal.1 });
    }
    let cands = g.slice(world, goal);
    if cands.is_empty() {
        return Err(PlanError::Unreachable(vec![0]));
    }
    let budget = BUDGET_FACTOR * (start.length() + g.max_tether()) + 8.0;
    let mut found: Vec<Option<u32>> = vec![None; cands.len()];
    let mut remaining = cands.len();
    let nodes = settle_states(
        world,
        start.robot(),
        start.signature().letters().to_vec(),
        budget,
        |nodes, id| {
            let n = &nodes[id as usize];
            if n.cell == goal {
                for (ci, c) in cands.iter().enumerate() {
                    if found[ci].is_none() && c.signature().letters() == &n.word[..] {
                        found[ci] = Some(id);
                        remaining -= 1;
                    }
                }
            }
            Ok(remaining == 0)
        },
    )?;

    let mut best: Option<(usize, Vec<Cell>, Vec<Cell>, f64)> = None;
    for (ci, f) in found.iter().enumerate() {
        let Some(id) = *f else { continue };
        let raw = chain_cells(&nodes, id);
        let short = shorten_cells(world, &raw, MaskKind::CollisionFree, None)?;
        let len = bends_length(&short);
        let better = match &best {
            None => true,
            Some((bi, _, _, blen)) => len
                .total_cmp(blen)
                .then_with(|| cands[ci].length().total_cmp(&cands[*bi].length()))
                .then_with(|| cands[ci].signature().cmp(cands[*bi].signature()))
                .is_lt(),
        };
        if better {
            best = Some((ci, raw, short, len));
        }
    }
    match best {
        None => Err(PlanError::Unreachable(vec![0])),
        Some((ci, raw, shortened, length)) => Ok(OracleTp {
            raw,
            shortened,
            length,
            configuration: cands[ci].clone(),
        }),
    }
}

/// Which bound a sampled reconfiguration broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Peak induced length above max(endpoints) plus the grid allowance.
    Grid,
    /// Peak induced length above 1.001 times the tether limit plus the
    /// grid allowance: the robot needed meaningfully more cable than the
    /// limit mid-reconfiguration.
    Budget,
    /// Dragged tether arrived in the wrong class.
    Class,
}

/// Full repro data for one failed pair.
#[derive(Debug, Clone)]
pub struct ConvexityViolation {
    pub kind: ViolationKind,
    pub from_robot: Cell,
    pub from_word: Vec<i32>,
    pub to_robot: Cell,
    pub to_word: Vec<i32>,
    pub peak: f64,
    pub endpoint_max: f64,
}

/// Outcome of a convexity sweep. `violations` is expected to stay empty;
/// the extreme statistics are kept even on success so drift is visible.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub seed: u64,
    pub pairs_checked: usize,
    /// Worst raster-step peak minus max(endpoint lengths) over all pairs.
    /// Raster steps sit up to a cell off the taut route, so this may be
    /// slightly positive; the grid allowance bounds it.
    pub max_overshoot: f64,
    /// Worst bend-sample peak minus max(endpoint lengths). Bends sit on
    /// the route itself, so this is usually far below the raster figure,
    /// but raster-blocked shortcuts keep it from being exactly zero.
    pub max_bend_overshoot: f64,
    /// Worst peak divided by the tether limit.
    pub max_budget_ratio: f64,
    pub violations: Vec<ConvexityViolation>,
}

/// Grid allowance on the induced-length bound: the dragged profile is
/// sampled at raster cells, which sit up to a cell off the taut route, so
/// the continuous bound loosens by a small constant.
pub const GRID_ALLOWANCE: f64 = 2.0 * SQRT_2;

/// Samples admissible configuration pairs uniformly (seeded), reconfigures
/// between them, and drags the tether along each route, checking that the
/// induced tether length stays within max(endpoint lengths) plus the grid
/// allowance and within 1.001 times the limit plus the same allowance, and
/// that the dragged tether arrives in the right class.
pub fn verify_convexity(
    world: &GridWorld,
    base: Cell,
    max_tether: f64,
    samples: usize,
    seed: u64,
) -> Result<ConvexityReport> {
    let g = build_workspace(world, base, max_tether)?;
    let pool = g.valid_ids();
    let mut report = ConvexityReport {
        seed,
        pairs_checked: 0,
        max_overshoot: f64::NEG_INFINITY,
        max_bend_overshoot: f64::NEG_INFINITY,
        max_budget_ratio: f64::NEG_INFINITY,
        violations: Vec::new(),
    };
    if pool.len() < 2 {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let c1 = g.config_at(world, pool[rng.random_range(0..pool.len())]);
        let c2 = g.config_at(world, pool[rng.random_range(0..pool.len())]);
        let route = tr(world, &c1, &c2)?;
        let (final_tether, profile) = drag_tether(world, c1.tether(), &route.path)?;
        // Profile indices of the route's own vertices.
        let mut bend_at = vec![0usize];
        for w in route.path.windows(2) {
            bend_at.push(bend_at.last().unwrap() + raster_segment(w[0], w[1]).len() - 1);
        }
        let peak = profile.iter().fold(0.0f64, |a, &b| a.max(b));
        let bend_peak = bend_at
            .iter()
            .map(|&i| profile[i])
            .fold(0.0f64, |a, b| a.max(b));
        let endpoint_max = c1.length().max(c2.length());
        report.pairs_checked += 1;
        report.max_overshoot = report.max_overshoot.max(peak - endpoint_max);
        report.max_bend_overshoot = report.max_bend_overshoot.max(bend_peak - endpoint_max);
        report.max_budget_ratio = report.max_budget_ratio.max(peak / max_tether);
        let mut fail = |kind| {
            report.violations.push(ConvexityViolation {
                kind,
                from_robot: c1.robot(),
                from_word: c1.signature().letters().to_vec(),
                to_robot: c2.robot(),
                to_word: c2.signature().letters().to_vec(),
                peak,
                endpoint_max,
            });
        };
        if peak > endpoint_max + GRID_ALLOWANCE + LENGTH_EPS {
            fail(ViolationKind::Grid);
        }
        if peak > 1.001 * max_tether + GRID_ALLOWANCE + LENGTH_EPS {
            fail(ViolationKind::Budget);
        }
        if signature_of_cells(world, &final_tether) != *c2.signature() {
            fail(ViolationKind::Class);
        }
    }
    Ok(report)
}

/// One disagreement between independently found reconfiguration routes.
#[derive(Debug, Clone)]
pub struct HomotopyViolation {
    pub from_robot: Cell,
    pub from_word: Vec<i32>,
    pub to_robot: Cell,
    pub to_word: Vec<i32>,
    /// Word the tether classes dictate for any consistent route.
    pub expected: Vec<i32>,
    /// Word of the planner's taut route.
    pub via_tr: Vec<i32>,
    /// Word of the exhaustive search's route; absent when the search
    /// exhausted its budget without reaching the target state.
    pub via_search: Option<Vec<i32>>,
}

/// Outcome of a reconfiguration-homotopy sweep.
#[derive(Debug, Clone)]
pub struct SimplyConnectedReport {
    pub seed: u64,
    pub pairs_checked: usize,
    pub agreements: usize,
    pub violations: Vec<HomotopyViolation>,
}

/// Samples admissible configuration pairs uniformly (seeded) and checks
/// that the planner's reconfiguration route and an independently searched
/// route land in the homotopy class the endpoint tethers dictate: all
/// consistent reconfiguration motions between two configurations are
/// homotopic.
pub fn verify_simply_connected(
    world: &GridWorld,
    base: Cell,
    max_tether: f64,
    samples: usize,
    seed: u64,
) -> Result<SimplyConnectedReport> {
    let g = build_workspace(world, base, max_tether)?;
    let pool = g.valid_ids();
    let mut report = SimplyConnectedReport {
        seed,
        pairs_checked: 0,
        agreements: 0,
        violations: Vec::new(),
    };
    if pool.len() < 2 {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let c1 = g.config_at(world, pool[rng.random_range(0..pool.len())]);
        let c2 = g.config_at(world, pool[rng.random_range(0..pool.len())]);
        let expected = c1.signature().inverse().compose(c2.signature());
        let route = tr(world, &c1, &c2)?;
        let via_tr = signature_of_cells(world, &route.path);

        // Independent route: settle states outward from c1 until the exact
        // (cell, word) state of c2 is reached.
        let budget = BUDGET_FACTOR * (c1.length() + c2.length()) + 8.0;
        let target = (c2.robot(), c2.signature().letters().to_vec());
        let mut hit: Option<u32> = None;
        let nodes = settle_states(
            world,
            c1.robot(),
            c1.signature().letters().to_vec(),
            budget,
            |nodes, id| {
                let n = &nodes[id as usize];
                if n.cell == target.0 && n.word == target.1 {
                    hit = Some(id);
                    return Ok(true);
                }
                Ok(false)
            },
        )?;
        let via_search = hit.map(|id| signature_of_cells(world, &chain_cells(&nodes, id)));

        report.pairs_checked += 1;
        let ok = via_tr == expected
            && via_search.as_ref().is_some_and(|w| *w == expected);
        if ok {
            report.agreements += 1;
        } else {
            report.violations.push(HomotopyViolation {
                from_robot: c1.robot(),
                from_word: c1.signature().letters().to_vec(),
                to_robot: c2.robot(),
                to_word: c2.signature().letters().to_vec(),
                expected: expected.letters().to_vec(),
                via_tr: via_tr.letters().to_vec(),
                via_search: via_search.map(|w| w.letters().to_vec()),
            });
        }
    }
    Ok(report)
}

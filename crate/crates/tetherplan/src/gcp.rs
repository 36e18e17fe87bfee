//! Goal configuration planning: every admissible tether class at every goal.
//!
//! A configuration is a goal cell together with the homotopy class of the
//! tether connecting it to the base, represented by the class's taut curve.
//! The planner runs one search over (cell, class) states from the base,
//! moving through the collision-free mask with 8-connected steps weighted by
//! exact (straight, diagonal) step counts, so state costs compare without
//! rounding. The first settle of a state is optimal in grid metric; settled
//! goal states are tautened and kept when the taut tether fits the limit.
//!
//! Pruning never loses an admissible class: a taut tether of length g has an
//! 8-connected representative in its class of grid length at most
//! sqrt(4 - 2 sqrt 2) * g (about 1.0824 g, the worst octile detour), so
//! states whose lower bound exceeds 1.1 times the limit cannot lead to one.
//! Winding caps likewise discard classes that wrap a component more often
//! than the length budget allows.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use crate::curve::Polyline;
use crate::error::{PlanError, Result};
use crate::gridmap::{Cell, GridWorld, MaskKind};
use crate::homotopy::{segment_letters, signature_of_cells, HSignature};
use crate::shorten::{bends_length, shorten_cells};

/// Extra slack accepted when comparing a taut tether against the limit;
/// absorbs the rounding of summed chord lengths.
pub const LENGTH_EPS: f64 = 1e-9;

/// Ratio of the search budget to the tether limit. Must stay above the
/// worst-case octile detour factor sqrt(4 - 2 sqrt 2) for the search to be
/// exhaustive over admissible classes.
const BUDGET_FACTOR: f64 = 1.1;

/// Fixed neighbor order; part of the deterministic output contract.
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

/// A robot position with the homotopy class of its tether, carrying the
/// class's taut representative.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    robot: Cell,
    base: Cell,
    tether: Vec<Cell>,
    length: f64,
    signature: HSignature,
}

impl Configuration {
    pub fn robot(&self) -> Cell {
        self.robot
    }

    pub fn base(&self) -> Cell {
        self.base
    }

    /// Bend cells of the taut tether, base first.
    pub fn tether(&self) -> &[Cell] {
        &self.tether
    }

    pub fn tether_polyline(&self) -> Polyline {
        Polyline::from_cells(&self.tether).expect("tether bends are a valid polyline")
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn signature(&self) -> &HSignature {
        &self.signature
    }
}

/// The trivial configuration: robot parked at the base, tether fully
/// retracted.
pub fn home_configuration(world: &GridWorld, base: Cell) -> Result<Configuration> {
    configuration_from_path(world, &[base])
}

/// Configuration reached by walking `path` from its first cell while paying
/// out tether: the tether is the path pulled taut. The path must stay in the
/// collision-free mask.
pub fn configuration_from_path(world: &GridWorld, path: &[Cell]) -> Result<Configuration> {
    let tether = shorten_cells(world, path, MaskKind::CollisionFree, None)?;
    Ok(configuration_from_taut(world, tether))
}

/// Wraps an already-taut tether without re-shortening it. The caller must
/// guarantee the bends are a shortening fixpoint.
pub(crate) fn configuration_from_taut(world: &GridWorld, tether: Vec<Cell>) -> Configuration {
    Configuration {
        robot: *tether.last().expect("a tether has at least the base cell"),
        base: tether[0],
        length: bends_length(&tether),
        signature: signature_of_cells(world, &tether),
        tether,
    }
}

/// All admissible configurations per goal: for each goal cell, every tether
/// class reachable from the base whose taut curve has length at most
/// `max_tether` (plus epsilon) and does not cross itself. Configurations
/// are sorted by (tether length, class letters); goals with no admissible
/// class get an empty list.
pub fn gcp(
    world: &GridWorld,
    base: Cell,
    goals: &[Cell],
    max_tether: f64,
) -> Result<Vec<Vec<Configuration>>> {
    if !world.in_bounds(base) {
        return Err(PlanError::OutOfBounds { x: base.0, y: base.1 });
    }
    if !world.is_collision_free(base) {
        return Err(PlanError::Blocked { x: base.0, y: base.1 });
    }
    for &g in goals {
        if !world.in_bounds(g) {
            return Err(PlanError::OutOfBounds { x: g.0, y: g.1 });
        }
    }
    if goals.is_empty() {
        return Ok(Vec::new());
    }

    let budget = BUDGET_FACTOR * max_tether.max(0.0);
    // Scanning every goal for the nearest one costs O(goals) per expansion.
    // Past a handful of goals that scan dominates the search, while h = 0
    // (plain Dijkstra) settles the same states with the same optimal costs,
    // so batch callers get identical results faster.
    let use_heuristic = goals.len() <= 8;
    let mut interner = Interner::new(world, budget);
    let mut goals_at: HashMap<Cell, Vec<usize>> = HashMap::new();
    for (idx, &g) in goals.iter().enumerate() {
        goals_at.entry(g).or_default().push(idx);
    }

    let mut nodes: Vec<Node> = vec![Node {
        cell: base,
        g: Cost::ZERO,
        parent: 0,
    }];
    let mut best: HashMap<(Cell, u32), Cost> = HashMap::new();
    best.insert((base, 0), Cost::ZERO);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Cost::ZERO, base.1, base.0, 0u32, 0u32)));

    let mut hits: Vec<Vec<(u32, u32)>> = vec![Vec::new(); goals.len()];
    let mut letters: Vec<i32> = Vec::new();

    while let Some(Reverse((_f, _y, _x, sig, id))) = heap.pop() {
        let Node { cell, g, .. } = nodes[id as usize];
        match best.get(&(cell, sig)) {
            Some(&b) if b < g => continue, // stale entry
            _ => {}
        }
        if let Some(idxs) = goals_at.get(&cell) {
            for &gi in idxs {
                if hits[gi].iter().all(|&(s, _)| s != sig) {
                    hits[gi].push((sig, id));
                }
            }
        }
        for (dx, dy) in NEIGHBORS {
            let next = (cell.0 + dx, cell.1 + dy);
            if !world.is_collision_free(next) {
                continue;
            }
            letters.clear();
            segment_letters(world, cell, next, |l| letters.push(l));
            let nsig = interner.apply(sig, &letters);
            if interner.dead(nsig) {
                continue;
            }
            let ng = if dx != 0 && dy != 0 {
                g.plus_diag()
            } else {
                g.plus_straight()
            };
            let h = if use_heuristic {
                goals
                    .iter()
                    .map(|&gc| octile(next, gc))
                    .min()
                    .expect("goals is non-empty")
            } else {
                Cost::ZERO
            };
            if (ng + h).value() > budget + LENGTH_EPS {
                continue;
            }
            match best.get(&(next, nsig)) {
                Some(&b) if b <= ng => continue,
                _ => {}
            }
            best.insert((next, nsig), ng);
            nodes.push(Node {
                cell: next,
                g: ng,
                parent: id,
            });
            let nid = (nodes.len() - 1) as u32;
            if nodes.len() > 50_000_000 {
                return Err(PlanError::BudgetExceeded(nodes.len()));
            }
            heap.push(Reverse((ng + h, next.1, next.0, nsig, nid)));
        }
    }

    let mut out = Vec::with_capacity(goals.len());
    for hit in hits {
        let mut configs = Vec::new();
        for (sig, id) in hit {
            let mut path = Vec::new();
            let mut cur = id;
            loop {
                path.push(nodes[cur as usize].cell);
                if cur == 0 {
                    break;
                }
                cur = nodes[cur as usize].parent;
            }
            path.reverse();
            let cfg = configuration_from_path(world, &path)?;
            debug_assert_eq!(cfg.signature, *interner.word(sig));
            if cfg.length <= max_tether + LENGTH_EPS
                && !cfg.tether_polyline().is_self_crossing()
            {
                configs.push(cfg);
            }
        }
        configs.sort_by(|a, b| {
            a.length
                .total_cmp(&b.length)
                .then_with(|| a.signature.cmp(&b.signature))
        });
        out.push(configs);
    }
    Ok(out)
}

struct Node {
    cell: Cell,
    g: Cost,
    parent: u32,
}

/// Exact 8-connected path cost: `s` unit steps plus `d` diagonal steps.
/// Ordering compares s1 + d1 sqrt(2) against s2 + d2 sqrt(2) exactly via
/// integer squares; ties exist only for identical step counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Cost {
    s: u32,
    d: u32,
}

impl Cost {
    pub(crate) const ZERO: Cost = Cost { s: 0, d: 0 };

    pub(crate) fn plus_straight(self) -> Cost {
        Cost { s: self.s + 1, d: self.d }
    }

    pub(crate) fn plus_diag(self) -> Cost {
        Cost { s: self.s, d: self.d + 1 }
    }

    pub(crate) fn value(self) -> f64 {
        self.s as f64 + std::f64::consts::SQRT_2 * self.d as f64
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        Cost {
            s: self.s + o.s,
            d: self.d + o.d,
        }
    }
}

impl Ord for Cost {
    fn cmp(&self, o: &Self) -> Ordering {
        // sign of (ds + dd * sqrt 2); sqrt 2 is irrational, so the mixed
        // cases cannot tie.
        let ds = self.s as i64 - o.s as i64;
        let dd = self.d as i64 - o.d as i64;
        match (ds.cmp(&0), dd.cmp(&0)) {
            (Ordering::Equal, d) => d,
            (s, Ordering::Equal) => s,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Greater, Ordering::Less) => (ds * ds).cmp(&(2 * dd * dd)),
            (Ordering::Less, Ordering::Greater) => (2 * dd * dd).cmp(&(ds * ds)),
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Exact octile distance: the cheapest 8-connected step count between two
/// cells, and a lower bound on any monotone grid path between them.
pub(crate) fn octile(a: Cell, b: Cell) -> Cost {
    let adx = (b.0 - a.0).unsigned_abs();
    let ady = (b.1 - a.1).unsigned_abs();
    Cost {
        s: adx.abs_diff(ady),
        d: adx.min(ady),
    }
}

/// Most times a path within `budget` can wind around each component: any
/// enclosing loop is at least as long as the component's bounding-box
/// extent sum (and never shorter than 2).
pub(crate) fn winding_caps(world: &GridWorld, budget: f64) -> Vec<i32> {
    world
        .components()
        .iter()
        .map(|c| {
            let w = (c.max.0 - c.min.0) as f64;
            let h = (c.max.1 - c.min.1) as f64;
            let loop_lb = (w + h).max(2.0);
            ((budget / loop_lb).ceil() as i32).saturating_add(2)
        })
        .collect()
}

/// Signature interner for the search: words become dense u32 ids, single
/// crossing steps are memoized, and words that exceed the winding caps are
/// flagged dead so the search drops them on arrival.
struct Interner {
    words: Vec<HSignature>,
    dead: Vec<bool>,
    index: HashMap<HSignature, u32>,
    memo: HashMap<(u32, i32), u32>,
    caps: Vec<i32>,
}

impl Interner {
    fn new(world: &GridWorld, budget: f64) -> Self {
        let mut it = Interner {
            words: Vec::new(),
            dead: Vec::new(),
            index: HashMap::new(),
            memo: HashMap::new(),
            caps: winding_caps(world, budget),
        };
        it.intern(HSignature::trivial());
        it
    }

    fn word(&self, sig: u32) -> &HSignature {
        &self.words[sig as usize]
    }

    fn dead(&self, sig: u32) -> bool {
        self.dead[sig as usize]
    }

    fn apply(&mut self, mut sig: u32, letters: &[i32]) -> u32 {
        for &l in letters {
            sig = self.step(sig, l);
        }
        sig
    }

    fn step(&mut self, sig: u32, letter: i32) -> u32 {
        if let Some(&id) = self.memo.get(&(sig, letter)) {
            return id;
        }
        let mut word = self.words[sig as usize].clone();
        word.push(letter);
        let id = self.intern(word);
        self.memo.insert((sig, letter), id);
        id
    }

    fn intern(&mut self, word: HSignature) -> u32 {
        if let Some(&id) = self.index.get(&word) {
            return id;
        }
        let mut nets = vec![0i32; self.caps.len()];
        for &l in word.letters() {
            nets[(l.unsigned_abs() - 1) as usize] += l.signum();
        }
        let dead = nets
            .iter()
            .zip(&self.caps)
            .any(|(n, cap)| n.abs() > *cap);
        let id = self.words.len() as u32;
        self.words.push(word.clone());
        self.dead.push(dead);
        self.index.insert(word, id);
        id
    }
}

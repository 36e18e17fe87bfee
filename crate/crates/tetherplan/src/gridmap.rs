//! Occupancy grids: map parsing, disk inflation, canonical rasterization.
//!
//! Two map encodings are accepted: ASCII ('.' free, '#' obstacle, row-major,
//! first row is y = 0 at the top) and binary PGM (P5, pixel value >= 128 is
//! free). Out-of-bounds space always counts as obstacle.

use crate::curve::{Point, Polyline};
use crate::error::{PlanError, Result};

pub type Cell = (i32, i32);

/// Which occupancy mask a geometric query runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskKind {
    /// The raw free space of the map.
    Free,
    /// Free space eroded by the robot radius (the robot center's space).
    CollisionFree,
}

/// A parsed map before inflation.
#[derive(Debug, Clone)]
pub struct GridMap {
    width: i32,
    height: i32,
    free: Vec<bool>,
}

/// One 4-connected obstacle component.
#[derive(Debug, Clone)]
pub struct Component {
    /// Lexicographically smallest (x, then y) cell of the component. The
    /// homotopy module casts its reference ray upward (toward y = 0) from
    /// this cell.
    pub rep: Cell,
    pub min: Cell,
    pub max: Cell,
    pub cells: usize,
}

/// An inflated world: raw free mask, collision-free mask for the disk robot,
/// and the labeled obstacle components.
#[derive(Debug, Clone)]
pub struct GridWorld {
    width: i32,
    height: i32,
    free: Vec<bool>,
    cfree: Vec<bool>,
    radius: f64,
    components: Vec<Component>,
    /// Obstacle representatives as (column, row, component index), sorted by
    /// (column, component), so crossing-word extraction never scans columns.
    reps_flat: Vec<(i32, i32, u32)>,
    /// rep_starts[x] indexes the first entry of reps_flat in column >= x
    /// (one extra entry at width), making any column range an O(1) slice.
    rep_starts: Vec<u32>,
}

/// Parses ASCII or binary PGM map bytes.
pub fn load_map(data: &[u8]) -> Result<GridMap> {
    if data.starts_with(b"P5") {
        return parse_pgm(data);
    }
    parse_ascii(data)
}

fn parse_ascii(data: &[u8]) -> Result<GridMap> {
    let text = std::str::from_utf8(data)
        .map_err(|_| PlanError::MapFormat("map is neither ASCII nor PGM P5".into()))?;
    let mut rows: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    while rows.last().is_some_and(|l| l.is_empty()) {
        rows.pop();
    }
    if rows.is_empty() {
        return Err(PlanError::MapFormat("map has no rows".into()));
    }
    let width = rows[0].chars().count();
    if width == 0 {
        return Err(PlanError::MapFormat("map has an empty first row".into()));
    }
    let mut free = Vec::with_capacity(width * rows.len());
    for (y, row) in rows.iter().enumerate() {
        if row.chars().count() != width {
            return Err(PlanError::MapFormat(format!(
                "row {} has {} cells, expected {}",
                y,
                row.chars().count(),
                width
            )));
        }
        for (x, ch) in row.chars().enumerate() {
            match ch {
                '.' => free.push(true),
                '#' => free.push(false),
                other => {
                    return Err(PlanError::MapFormat(format!(
                        "unexpected character {:?} at ({}, {})",
                        other, x, y
                    )))
                }
            }
        }
    }
    finish_map(width as i32, rows.len() as i32, free)
}

fn parse_pgm(data: &[u8]) -> Result<GridMap> {
    let mut pos = 2usize; // past "P5"
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        *field = read_pgm_int(data, &mut pos)?;
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 255 {
        return Err(PlanError::MapFormat(format!(
            "unsupported PGM maxval {maxval}"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    let need = width
        .checked_mul(height)
        .ok_or_else(|| PlanError::MapFormat("PGM dimensions overflow".into()))?;
    if width == 0 || height == 0 {
        return Err(PlanError::MapFormat("PGM has zero dimension".into()));
    }
    if data.len() < pos + need {
        return Err(PlanError::MapFormat(format!(
            "PGM raster truncated: need {} bytes, have {}",
            need,
            data.len().saturating_sub(pos)
        )));
    }
    let free = data[pos..pos + need].iter().map(|&b| b >= 128).collect();
    finish_map(width as i32, height as i32, free)
}

fn read_pgm_int(data: &[u8], pos: &mut usize) -> Result<usize> {
    // Skip whitespace and '#' comment lines.
    loop {
        match data.get(*pos) {
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while !matches!(data.get(*pos), None | Some(b'\n')) {
                    *pos += 1;
                }
            }
            Some(b) if b.is_ascii_digit() => break,
            _ => return Err(PlanError::MapFormat("bad PGM header".into())),
        }
    }
    let mut v = 0usize;
    while let Some(b) = data.get(*pos) {
        if !b.is_ascii_digit() {
            break;
        }
        v = v * 10 + (b - b'0') as usize;
        if v > 1 << 30 {
            return Err(PlanError::MapFormat("PGM header value too large".into()));
        }
        *pos += 1;
    }
    Ok(v)
}

fn finish_map(width: i32, height: i32, free: Vec<bool>) -> Result<GridMap> {
    if !free.iter().any(|&f| f) {
        return Err(PlanError::EmptyWorld);
    }
    Ok(GridMap {
        width,
        height,
        free,
    })
}

impl GridMap {
    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn is_free(&self, c: Cell) -> bool {
        in_bounds(self.width, self.height, c) && self.free[(c.1 * self.width + c.0) as usize]
    }

    /// Erodes free space by `radius`: a cell is collision-free iff no
    /// obstacle or out-of-bounds cell center lies within Euclidean distance
    /// `radius` of its center.
    pub fn inflate(&self, radius: f64) -> Result<GridWorld> {
        if radius < 0.0 {
            return Err(PlanError::NegativeRadius(radius));
        }
        let r = radius.floor() as i32;
        let r2 = radius * radius;
        let mut offsets = Vec::new();
        for dy in -r..=r {
            for dx in -r..=r {
                if (dx * dx + dy * dy) as f64 <= r2 {
                    offsets.push((dx, dy));
                }
            }
        }
        let mut cfree = vec![false; self.free.len()];
        for y in 0..self.height {
            for x in 0..self.width {
                if !self.free[(y * self.width + x) as usize] {
                    continue;
                }
                let ok = offsets.iter().all(|&(dx, dy)| {
                    let n = (x + dx, y + dy);
                    in_bounds(self.width, self.height, n)
                        && self.free[(n.1 * self.width + n.0) as usize]
                });
                cfree[(y * self.width + x) as usize] = ok;
            }
        }
        let components = label_components(self.width, self.height, &self.free);
        let mut reps_flat: Vec<(i32, i32, u32)> = components
            .iter()
            .enumerate()
            .map(|(i, comp)| (comp.rep.0, comp.rep.1, i as u32))
            .collect();
        reps_flat.sort_unstable_by_key(|&(x, _, c)| (x, c));
        let mut rep_starts = Vec::with_capacity(self.width as usize + 1);
        let mut at = 0u32;
        for x in 0..=self.width {
            while (at as usize) < reps_flat.len() && reps_flat[at as usize].0 < x {
                at += 1;
            }
            rep_starts.push(at);
        }
        Ok(GridWorld {
            width: self.width,
            height: self.height,
            free: self.free.clone(),
            cfree,
            radius,
            components,
            reps_flat,
            rep_starts,
        })
    }
}

/// Labels obstacle cells into 4-connected components. The scan runs x-major
/// so each component is discovered at its lexicographically smallest cell.
fn label_components(width: i32, height: i32, free: &[bool]) -> Vec<Component> {
    let mut seen = vec![false; free.len()];
    let mut out = Vec::new();
    for x in 0..width {
        for y in 0..height {
            let idx = (y * width + x) as usize;
            if free[idx] || seen[idx] {
                continue;
            }
            let rep = (x, y);
            let (mut min, mut max) = (rep, rep);
            let mut cells = 0usize;
            let mut stack = vec![rep];
            seen[idx] = true;
            while let Some((cx, cy)) = stack.pop() {
                cells += 1;
                min = (min.0.min(cx), min.1.min(cy));
                max = (max.0.max(cx), max.1.max(cy));
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let n = (cx + dx, cy + dy);
                    if !in_bounds(width, height, n) {
                        continue;
                    }
                    let nidx = (n.1 * width + n.0) as usize;
                    if !free[nidx] && !seen[nidx] {
                        seen[nidx] = true;
                        stack.push(n);
                    }
                }
            }
            out.push(Component {
                rep,
                min,
                max,
                cells,
            });
        }
    }
    out
}

fn in_bounds(width: i32, height: i32, c: Cell) -> bool {
    c.0 >= 0 && c.1 >= 0 && c.0 < width && c.1 < height
}

impl GridWorld {
    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn in_bounds(&self, c: Cell) -> bool {
        in_bounds(self.width, self.height, c)
    }

    pub fn is_free(&self, c: Cell) -> bool {
        self.in_bounds(c) && self.free[(c.1 * self.width + c.0) as usize]
    }

    pub fn is_collision_free(&self, c: Cell) -> bool {
        self.in_bounds(c) && self.cfree[(c.1 * self.width + c.0) as usize]
    }

    pub fn mask(&self, c: Cell, kind: MaskKind) -> bool {
        match kind {
            MaskKind::Free => self.is_free(c),
            MaskKind::CollisionFree => self.is_collision_free(c),
        }
    }

    pub fn free_cells(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    pub fn collision_free_cells(&self) -> usize {
        self.cfree.iter().filter(|&&f| f).count()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Representatives whose reference rays sit in columns [x_lo, x_hi),
    /// ordered by (column, component id).
    pub(crate) fn reps_in_x_range(&self, x_lo: i32, x_hi: i32) -> &[(i32, i32, u32)] {
        let lo = x_lo.clamp(0, self.width) as usize;
        let hi = x_hi.clamp(0, self.width) as usize;
        if hi <= lo {
            return &[];
        }
        &self.reps_flat[self.rep_starts[lo] as usize..self.rep_starts[hi] as usize]
    }

    /// All raster cells of the segment lie inside the chosen mask.
    pub fn segment_free(&self, a: Cell, b: Cell, kind: MaskKind) -> bool {
        let mut ok = true;
        raster_walk(a, b, |c| {
            ok = self.mask(c, kind);
            ok
        });
        ok
    }

    /// Like `segment_free`, but reports a blocking raster cell (the first in
    /// canonical walk order) instead of a bare verdict.
    pub(crate) fn first_blocked(&self, a: Cell, b: Cell, kind: MaskKind) -> Option<Cell> {
        let mut hit = None;
        raster_walk(a, b, |c| {
            if self.mask(c, kind) {
                true
            } else {
                hit = Some(c);
                false
            }
        });
        hit
    }
}

/// O(1) membership test for the canonical raster: true iff `c` is one of
/// the cells `raster_segment(a, b)` contains. The arithmetic mirrors
/// `raster_walk` exactly, rounding included, but tests the rounded quotient
/// by bracketing (k = div_round_half_up(num, den) iff 0 <= 2 num + den
/// - 2 den k < 2 den) so no division runs.
pub(crate) fn raster_contains(a: Cell, b: Cell, c: Cell) -> bool {
    let (a, b) = if (b.0, b.1) < (a.0, a.1) { (b, a) } else { (a, b) };
    let dx = b.0 - a.0; // >= 0 by canonical ordering
    let dy = b.1 - a.1;
    if dx >= dy.abs() {
        if dx == 0 {
            return c == a;
        }
        let i = c.0 - a.0;
        if i < 0 || i > dx {
            return false;
        }
        let (dx, dy, i) = (dx as i64, dy as i64, i as i64);
        let t = 2 * dy * i + dx - 2 * dx * (c.1 - a.1) as i64;
        0 <= t && t < 2 * dx
    } else {
        let ady = dy.abs();
        let i = (c.1 - a.1) * dy.signum();
        if i < 0 || i > ady {
            return false;
        }
        let (dx, ady, i) = (dx as i64, ady as i64, i as i64);
        let t = 2 * dx * i + ady - 2 * ady * (c.0 - a.0) as i64;
        0 <= t && t < 2 * ady
    }
}

/// Canonical rasterization of the segment between two cell centers.
///
/// The walk always runs from the lexicographically smaller endpoint (x, then
/// y) and is reversed afterwards if the arguments came in the other way, so
/// the cell sequence of (a, b) is exactly the reverse of (b, a). Ties of the
/// midpoint rule round toward +infinity on the dependent axis. Consecutive
/// cells are 8-adjacent and both endpoints are included.
pub fn raster_segment(a: Cell, b: Cell) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(((b.0 - a.0).abs().max((b.1 - a.1).abs()) + 1) as usize);
    raster_walk(a, b, |c| {
        cells.push(c);
        true
    });
    if (b.0, b.1) < (a.0, a.1) {
        cells.reverse();
    }
    cells
}

/// Visits the canonical raster cells in canonical (lex-smaller endpoint
/// first) order; stops early when the visitor returns false. The visit order
/// may be the reverse of (a, b); use `raster_segment` when order matters.
fn raster_walk(a: Cell, b: Cell, mut visit: impl FnMut(Cell) -> bool) -> bool {
    let (a, b) = if (b.0, b.1) < (a.0, a.1) { (b, a) } else { (a, b) };
    let dx = b.0 - a.0; // >= 0 by canonical ordering
    let dy = b.1 - a.1;
    if dx >= dy.abs() {
        if dx == 0 {
            return visit(a);
        }
        for i in 0..=dx {
            let y = a.1 + div_round_half_up(dy as i64 * i as i64, dx as i64) as i32;
            if !visit((a.0 + i, y)) {
                return false;
            }
        }
    } else {
        let ady = dy.abs();
        let sy = dy.signum();
        for i in 0..=ady {
            let x = a.0 + div_round_half_up(dx as i64 * i as i64, ady as i64) as i32;
            if !visit((x, a.1 + sy * i)) {
                return false;
            }
        }
    }
    true
}

/// Nearest integer to num/den (den > 0), ties toward +infinity.
fn div_round_half_up(num: i64, den: i64) -> i64 {
    (2 * num + den).div_euclid(2 * den)
}

/// Replaces every chord of the polyline by its raster cells, yielding a
/// curve with the same geometry class whose consecutive vertices are
/// 8-adjacent cell centers. Vertices must sit on cell centers.
pub fn densify(p: &Polyline) -> Result<Polyline> {
    let cells = polyline_cells(p)?;
    let mut out: Vec<Cell> = Vec::new();
    if cells.len() == 1 {
        out.push(cells[0]);
    }
    for w in cells.windows(2) {
        let seg = raster_segment(w[0], w[1]);
        let skip = usize::from(!out.is_empty());
        out.extend_from_slice(&seg[skip..]);
    }
    Polyline::from_cells(&out)
}

/// Checks that every vertex is an exact cell center and converts to cells.
pub fn polyline_cells(p: &Polyline) -> Result<Vec<Cell>> {
    p.points()
        .iter()
        .map(|pt| {
            if pt.x.fract() != 0.0 || pt.y.fract() != 0.0 {
                Err(PlanError::OffCenter { x: pt.x, y: pt.y })
            } else {
                Ok((pt.x as i32, pt.y as i32))
            }
        })
        .collect()
}

pub fn cell_to_point(c: Cell) -> Point {
    Point::new(c.0 as f64, c.1 as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn world_from_ascii(text: &str, radius: f64) -> GridWorld {
        load_map(text.as_bytes()).unwrap().inflate(radius).unwrap()
    }

    #[test]
    fn parses_ascii() {
        let m = load_map(b"..#\n...\n#..\n").unwrap();
        assert_eq!((m.width(), m.height()), (3, 3));
        assert!(m.is_free((0, 0)));
        assert!(!m.is_free((2, 0)));
        assert!(!m.is_free((0, 2)));
        assert!(!m.is_free((3, 0)), "out of bounds is obstacle");
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(matches!(
            load_map(b"..\n...\n"),
            Err(PlanError::MapFormat(_))
        ));
    }

    #[test]
    fn rejects_unknown_characters() {
        assert!(matches!(load_map(b"..\n.x\n"), Err(PlanError::MapFormat(_))));
    }

    #[test]
    fn rejects_all_obstacle_map() {
        assert!(matches!(load_map(b"##\n##\n"), Err(PlanError::EmptyWorld)));
    }

    #[test]
    fn parses_pgm_with_threshold_128() {
        let mut data = b"P5\n# comment\n3 2\n255\n".to_vec();
        data.extend_from_slice(&[0, 127, 128, 255, 5, 200]);
        let m = load_map(&data).unwrap();
        assert_eq!((m.width(), m.height()), (3, 2));
        assert!(!m.is_free((0, 0)));
        assert!(!m.is_free((1, 0)), "127 is obstacle");
        assert!(m.is_free((2, 0)), "128 is free");
        assert!(m.is_free((0, 1)));
        assert!(!m.is_free((1, 1)));
    }

    #[test]
    fn rejects_truncated_pgm() {
        let data = b"P5\n3 2\n255\n\x00\x01".to_vec();
        assert!(matches!(load_map(&data), Err(PlanError::MapFormat(_))));
    }

    #[test]
    fn rejects_wide_pgm() {
        let data = b"P2\n3 2\n255\n0 0 0 0 0 0\n".to_vec();
        assert!(matches!(load_map(&data), Err(PlanError::MapFormat(_))));
    }

    #[test]
    fn zero_radius_keeps_masks_equal() {
        let w = world_from_ascii("....\n.#..\n....\n", 0.0);
        for y in 0..w.height() {
            for x in 0..w.width() {
                assert_eq!(w.is_free((x, y)), w.is_collision_free((x, y)));
            }
        }
    }

    #[test]
    fn inflation_blocks_border_and_obstacle_ring() {
        let w = world_from_ascii(".....\n.....\n..#..\n.....\n.....\n", 1.0);
        // Borders are within distance 1 of out-of-bounds cells.
        assert!(!w.is_collision_free((0, 0)));
        assert!(!w.is_collision_free((2, 0)));
        // 4-neighbors of the obstacle are blocked, diagonals are not.
        assert!(!w.is_collision_free((2, 1)));
        assert!(!w.is_collision_free((1, 2)));
        assert!(w.is_collision_free((1, 1)));
        assert!(w.is_collision_free((3, 3)));
        assert!(!w.is_collision_free((2, 2)), "cfree is a subset of free");
    }

    #[test]
    fn inflation_radius_closes_diagonal_gap() {
        // Obstacles at (1,1) and (3,3); the diagonal corridor through (2,2)
        // survives radius 1 (distance sqrt(2)) and closes at radius 1.5.
        let text = ".....\n.#...\n.....\n...#.\n.....\n";
        let loose = world_from_ascii(text, 1.0);
        assert!(loose.is_collision_free((2, 2)));
        let tight = world_from_ascii(text, 1.5);
        assert!(!tight.is_collision_free((2, 2)));
    }

    #[test]
    fn components_use_4_connectivity() {
        let w = world_from_ascii("#..\n.#.\n..#\n", 0.0);
        assert_eq!(w.components().len(), 3);
        assert_eq!(w.components()[0].rep, (0, 0));
        assert_eq!(w.components()[1].rep, (1, 1));
        assert_eq!(w.components()[2].rep, (2, 2));
    }

    #[test]
    fn component_rep_is_lex_smallest() {
        let w = world_from_ascii("....\n.##.\n.#..\n....\n", 0.0);
        assert_eq!(w.components().len(), 1);
        let c = &w.components()[0];
        assert_eq!(c.rep, (1, 1), "smallest x, then smallest y");
        assert_eq!(c.cells, 3);
        assert_eq!((c.min, c.max), ((1, 1), (2, 2)));
    }

    #[test]
    fn raster_matches_midpoint_oracle() {
        // Frozen from the rational midpoint rule (ties toward +infinity).
        assert_eq!(
            raster_segment((0, 0), (4, 2)),
            vec![(0, 0), (1, 1), (2, 1), (3, 2), (4, 2)]
        );
        assert_eq!(raster_segment((0, 0), (2, 2)), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(raster_segment((3, 1), (3, 1)), vec![(3, 1)]);
        assert_eq!(
            raster_segment((0, 5), (1, 0)),
            vec![(0, 5), (0, 4), (0, 3), (1, 2), (1, 1), (1, 0)]
        );
    }

    #[test]
    fn segment_free_checks_raster_cells() {
        let w = world_from_ascii(".....\n..#..\n.....\n", 0.0);
        assert!(!w.segment_free((0, 1), (4, 1), MaskKind::Free));
        assert!(w.segment_free((0, 0), (4, 0), MaskKind::Free));
        assert!(w.segment_free((0, 2), (4, 2), MaskKind::Free));
        // Degenerate segment on a free cell.
        assert!(w.segment_free((0, 0), (0, 0), MaskKind::Free));
        assert!(!w.segment_free((2, 1), (2, 1), MaskKind::Free));
    }

    #[test]
    fn densify_walks_every_chord() {
        let p = Polyline::from_cells(&[(0, 0), (4, 2), (4, 4)]).unwrap();
        let d = densify(&p).unwrap();
        assert_eq!(d.len_vertices(), 7);
        assert_eq!(d.first(), Point::new(0.0, 0.0));
        assert_eq!(d.last(), Point::new(4.0, 4.0));
        for w in d.points().windows(2) {
            assert!((w[0].x - w[1].x).abs() <= 1.0 && (w[0].y - w[1].y).abs() <= 1.0);
        }
    }

    proptest! {
        #[test]
        fn raster_is_symmetric_monotone_and_adjacent(
            ax in -20i32..20, ay in -20i32..20, bx in -20i32..20, by in -20i32..20
        ) {
            let a = (ax, ay);
            let b = (bx, by);
            let fwd = raster_segment(a, b);
            let mut bwd = raster_segment(b, a);
            bwd.reverse();
            prop_assert_eq!(&fwd, &bwd);
            prop_assert_eq!(fwd[0], a);
            prop_assert_eq!(*fwd.last().unwrap(), b);
            prop_assert_eq!(fwd.len() as i32, (bx - ax).abs().max((by - ay).abs()) + 1);
            for w in fwd.windows(2) {
                let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                prop_assert!(dx.abs() <= 1 && dy.abs() <= 1 && (dx, dy) != (0, 0));
                // Monotone along both axes.
                prop_assert!(dx * (bx - ax).signum() >= 0);
                prop_assert!(dy * (by - ay).signum() >= 0);
            }
        }

        #[test]
        fn raster_contains_matches_enumeration(
            ax in -20i32..20, ay in -20i32..20, bx in -20i32..20, by in -20i32..20
        ) {
            let a = (ax, ay);
            let b = (bx, by);
            let seg = raster_segment(a, b);
            for &(x, y) in &seg {
                prop_assert!(raster_contains(a, b, (x, y)));
                // Cells one step off the raster must be rejected.
                for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
                    let c = (x + dx, y + dy);
                    prop_assert_eq!(raster_contains(a, b, c), seg.contains(&c));
                }
            }
        }

        #[test]
        fn inflation_is_monotone_in_radius(r1 in 0.0f64..2.0, r2 in 0.0f64..2.0) {
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            let text = "........\n..#.....\n........\n.....#..\n........\n";
            let big = world_from_ascii(text, lo);
            let small = world_from_ascii(text, hi);
            for y in 0..big.height() {
                for x in 0..big.width() {
                    if small.is_collision_free((x, y)) {
                        prop_assert!(big.is_collision_free((x, y)));
                    }
                }
            }
        }
    }
}

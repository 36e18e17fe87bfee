//! Polylines over grid cell centers.
//!
//! Curves are stored as ordered vertex sequences with real coordinates; a
//! vertex at `(x, y)` is the center of cell `(x, y)`. Segments between
//! consecutive vertices are straight chords, so a curve's length is the exact
//! Euclidean polyline length rather than a staircase approximation.

use crate::error::{PlanError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Euclidean distance via sqrt of the exact squared sum. Coordinates are
/// small integers in practice, so this is deterministic across platforms
/// (unlike libm `hypot`).
pub fn dist(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    /// A polyline must contain at least one point.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(PlanError::EmptyPolyline);
        }
        Ok(Polyline { points })
    }

    pub fn single(p: Point) -> Self {
        Polyline { points: vec![p] }
    }

    pub fn from_cells(cells: &[(i32, i32)]) -> Result<Self> {
        Self::new(
            cells
                .iter()
                .map(|&(x, y)| Point::new(x as f64, y as f64))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }

    pub fn last(&self) -> Point {
        *self.points.last().expect("polyline is never empty")
    }

    pub fn len_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| dist(w[0], w[1]))
            .sum()
    }

    pub fn reverse(&self) -> Polyline {
        let mut points = self.points.clone();
        points.reverse();
        Polyline { points }
    }

    /// Joins two curves sharing a junction point (`self` ends where `other`
    /// starts). The duplicate junction vertex is kept once.
    pub fn concat(&self, other: &Polyline) -> Result<Polyline> {
        if self.last() != other.first() {
            return Err(PlanError::JunctionMismatch);
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        Ok(Polyline { points })
    }

    /// First `s + 1` vertices; `s` must be a valid vertex index.
    pub fn prefix(&self, s: usize) -> Result<Polyline> {
        if s >= self.points.len() {
            return Err(PlanError::Internal("prefix index out of range"));
        }
        Ok(Polyline {
            points: self.points[..=s].to_vec(),
        })
    }

    pub fn push(&mut self, p: Point) {
        self.points.push(p);
    }

    /// Removes repeated consecutive points and interior points that lie
    /// exactly on the straight line between their neighbors without a
    /// direction reversal. Doubling-back spikes are kept: removing them would
    /// change the curve's geometry.
    pub fn normalize(&self) -> Polyline {
        let mut pts: Vec<Point> = Vec::with_capacity(self.points.len());
        for &p in &self.points {
            if pts.last() == Some(&p) {
                continue;
            }
            loop {
                let n = pts.len();
                if n < 2 {
                    break;
                }
                let a = pts[n - 2];
                let b = pts[n - 1];
                let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
                let dot = (b.x - a.x) * (p.x - b.x) + (b.y - a.y) * (p.y - b.y);
                if cross == 0.0 && dot > 0.0 {
                    pts.pop();
                } else {
                    break;
                }
            }
            pts.push(p);
        }
        Polyline { points: pts }
    }

    /// True iff two non-adjacent segments properly intersect or are collinear
    /// with a shared extent longer than a point. Touching at a vertex does not
    /// count; a curve tracing the same chord twice does.
    pub fn is_self_crossing(&self) -> bool {
        let segs: Vec<(Point, Point)> = self
            .points
            .windows(2)
            .map(|w| (w[0], w[1]))
            .collect();
        for i in 0..segs.len() {
            for j in (i + 2)..segs.len() {
                if segments_conflict(segs[i], segs[j]) {
                    return true;
                }
            }
        }
        false
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_conflict(s: (Point, Point), t: (Point, Point)) -> bool {
    let (a, b) = s;
    let (c, d) = t;
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true; // proper crossing
    }
    if o1 == 0.0 && o2 == 0.0 && o3 == 0.0 && o4 == 0.0 {
        // Collinear: conflict iff the 1-D overlap is longer than a point.
        let axis = |p: Point| {
            if (b.x - a.x).abs() >= (b.y - a.y).abs() {
                p.x
            } else {
                p.y
            }
        };
        if a == b || c == d {
            return false; // degenerate segment cannot overlap
        }
        let (s0, s1) = minmax(axis(a), axis(b));
        let (t0, t1) = minmax(axis(c), axis(d));
        return s0.max(t0) < s1.min(t1);
    }
    false
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pl(pts: &[(f64, f64)]) -> Polyline {
        Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn rejects_empty() {
        assert!(matches!(
            Polyline::new(vec![]),
            Err(PlanError::EmptyPolyline)
        ));
    }

    #[test]
    fn length_of_single_point_is_zero() {
        assert_eq!(pl(&[(3.0, 4.0)]).length(), 0.0);
    }

    #[test]
    fn normalize_drops_duplicates_and_collinear_points() {
        let p = pl(&[(0.0, 0.0), (1.0, 1.0), (1.0, 1.0), (2.0, 2.0), (4.0, 2.0)]);
        let n = p.normalize();
        assert_eq!(n.points(), pl(&[(0.0, 0.0), (2.0, 2.0), (4.0, 2.0)]).points());
    }

    #[test]
    fn normalize_keeps_doubling_back() {
        let p = pl(&[(0.0, 0.0), (4.0, 0.0), (2.0, 0.0)]);
        assert_eq!(p.normalize().points().len(), 3);
    }

    #[test]
    fn normalize_cascades_through_removed_vertices() {
        let p = pl(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (8.0, 8.0)]);
        assert_eq!(p.normalize().points().len(), 2);
    }

    #[test]
    fn concat_needs_matching_junction() {
        let a = pl(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = pl(&[(2.0, 0.0), (3.0, 0.0)]);
        assert!(matches!(a.concat(&b), Err(PlanError::JunctionMismatch)));
        let c = pl(&[(1.0, 0.0), (3.0, 0.0)]);
        let joined = a.concat(&c).unwrap();
        assert_eq!(joined.len_vertices(), 3);
        assert!((joined.length() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn prefix_takes_leading_vertices() {
        let p = pl(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(p.prefix(0).unwrap().points(), &[Point::new(0.0, 0.0)]);
        assert_eq!(p.prefix(2).unwrap().points(), p.points());
        assert!(p.prefix(3).is_err());
    }

    #[test]
    fn crossing_segments_detected() {
        let x = pl(&[(0.0, 0.0), (4.0, 4.0), (4.0, 0.0), (0.0, 4.0)]);
        assert!(x.is_self_crossing());
        let v = pl(&[(0.0, 0.0), (2.0, 2.0), (4.0, 0.0)]);
        assert!(!v.is_self_crossing());
    }

    #[test]
    fn vertex_touch_is_not_crossing() {
        // Second pass touches the first at (2, 2) but does not cross it.
        let p = pl(&[(0.0, 0.0), (4.0, 4.0), (4.0, 2.0), (2.0, 2.0), (2.0, 4.0)]);
        assert!(!p.is_self_crossing());
    }

    #[test]
    fn repeated_chord_is_crossing() {
        let p = pl(&[(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (4.0, 0.0), (0.0, 0.0)]);
        assert!(p.is_self_crossing());
    }

    #[test]
    fn square_loop_is_not_crossing() {
        let p = pl(&[(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0), (0.0, 0.0)]);
        assert!(!p.is_self_crossing());
    }

    proptest! {
        #[test]
        fn reverse_is_involution(pts in proptest::collection::vec((0i32..32, 0i32..32), 1..12)) {
            let p = Polyline::from_cells(&pts).unwrap();
            let twice = p.reverse().reverse();
            prop_assert_eq!(twice.points(), p.points());
            prop_assert!((p.reverse().length() - p.length()).abs() <= 1e-9 * (1.0 + p.len_vertices() as f64));
        }

        #[test]
        fn normalize_preserves_length_and_is_idempotent(
            pts in proptest::collection::vec((0i32..32, 0i32..32), 1..12)
        ) {
            let p = Polyline::from_cells(&pts).unwrap();
            let n = p.normalize();
            prop_assert!((n.length() - p.length()).abs() <= 1e-9 * (1.0 + p.len_vertices() as f64));
            let again = n.normalize();
            prop_assert_eq!(again.points(), n.points());
            prop_assert_eq!(n.first(), p.first());
            prop_assert_eq!(n.last(), p.last());
        }

        #[test]
        fn concat_length_is_additive(
            a in proptest::collection::vec((0i32..32, 0i32..32), 1..10),
            b in proptest::collection::vec((0i32..32, 0i32..32), 1..10)
        ) {
            let pa = Polyline::from_cells(&a).unwrap();
            let mut bc = b.clone();
            bc.insert(0, *a.last().unwrap());
            let pb = Polyline::from_cells(&bc).unwrap();
            let joined = pa.concat(&pb).unwrap();
            let tol = 1e-9 * (1.0 + joined.len_vertices() as f64);
            prop_assert!((joined.length() - (pa.length() + pb.length())).abs() <= tol);
        }
    }
}

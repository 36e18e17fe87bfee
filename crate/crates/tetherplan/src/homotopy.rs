//! Homotopy classes of grid curves as reduced words of ray crossings.
//!
//! Every obstacle component casts a vertical reference ray from its
//! representative cell toward y = 0 and beyond the map edge. A curve's class
//! (relative to its endpoints) is the sequence of signed ray crossings,
//! reduced in the free group generated by the components: +k records curve
//! crossing component k's ray left to right, -k right to left. Two curves
//! with the same endpoints can be deformed into each other without touching
//! an obstacle iff their reduced words are equal.
//!
//! Rays sharing a column are kept disjoint by a symbolic perturbation:
//! component k's ray is shifted right by an infinitesimal that grows with k.
//! Crossing tests are exact integer comparisons, so the word of a curve
//! never depends on floating-point rounding.

use std::cmp::Ordering;
use std::fmt;

use crate::curve::Polyline;
use crate::error::{PlanError, Result};
use crate::gridmap::{polyline_cells, Cell, GridWorld};

/// A reduced crossing word. Letters are 1-based component ids, negated for
/// right-to-left crossings. The derived `Ord` (lexicographic on letters) is
/// the tie-break order used wherever classes must be enumerated
/// deterministically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HSignature(Vec<i32>);

impl HSignature {
    pub fn trivial() -> Self {
        Self(Vec::new())
    }

    /// Builds a signature from raw letters, reducing as it goes. Rejects
    /// letters that name no obstacle component.
    pub fn from_letters(letters: &[i32], component_count: usize) -> Result<Self> {
        let mut sig = Self::trivial();
        for &l in letters {
            if l == 0 || l.unsigned_abs() as usize > component_count {
                return Err(PlanError::Scenario(format!(
                    "class letter {l} names no obstacle component (map has {component_count})"
                )));
            }
            sig.push(l);
        }
        Ok(sig)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Empties the word in place, keeping the buffer for reuse.
    pub(crate) fn clear(&mut self) {
        self.0.clear();
    }

    /// Appends one crossing, cancelling an immediate backtrack. Keeps the
    /// word reduced as long as it was reduced before.
    pub fn push(&mut self, letter: i32) {
        debug_assert_ne!(letter, 0);
        if self.0.last() == Some(&-letter) {
            self.0.pop();
        } else {
            self.0.push(letter);
        }
    }

    /// Word of `self` followed by `other` (free-group product).
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &l in &other.0 {
            out.push(l);
        }
        out
    }

    /// Word of the reversed curve.
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|&l| -l).collect())
    }
}

impl fmt::Display for HSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Crossing word of a chain of cells joined by straight chords.
pub fn signature_of_cells(world: &GridWorld, cells: &[Cell]) -> HSignature {
    let mut sig = HSignature::trivial();
    for w in cells.windows(2) {
        segment_letters(world, w[0], w[1], |l| sig.push(l));
    }
    sig
}

/// Crossing word of a polyline whose vertices sit on cell centers.
pub fn signature(world: &GridWorld, p: &Polyline) -> Result<HSignature> {
    Ok(signature_of_cells(world, &polyline_cells(p)?))
}

/// Whether two curves with identical endpoints can be deformed into each
/// other without crossing an obstacle.
pub fn homotopic(world: &GridWorld, p: &Polyline, q: &Polyline) -> Result<bool> {
    if p.first() != q.first() || p.last() != q.last() {
        return Err(PlanError::EndpointMismatch);
    }
    Ok(signature(world, p)? == signature(world, q)?)
}

/// Emits the signed crossings of the directed segment a -> b in the order
/// they occur along the segment. Within one column the perturbation sorts
/// crossings by component id: ascending when moving right, descending when
/// moving left.
pub(crate) fn segment_letters(
    world: &GridWorld,
    a: Cell,
    b: Cell,
    mut emit: impl FnMut(i32),
) {
    let dx = b.0 - a.0;
    if dx == 0 {
        return;
    }
    if dx > 0 {
        for &(rx, ry, comp) in world.reps_in_x_range(a.0, b.0) {
            if ray_hit(a, b, rx, ry) {
                emit(comp as i32 + 1);
            }
        }
    } else {
        for &(rx, ry, comp) in world.reps_in_x_range(b.0, a.0).iter().rev() {
            if ray_hit(a, b, rx, ry) {
                emit(-(comp as i32 + 1));
            }
        }
    }
}

/// Exact test: does segment a -> b cross the ray x = rx + eps, y < ry?
///
/// The intersection with the vertical line sits at y* = y0 + eps * dy/dx
/// where y0 interpolates the segment at x = rx. The caller guarantees the
/// column is strictly inside the segment's x-extent once perturbed, so only
/// the height comparison remains; a tie y0 == ry resolves by the slope term.
fn ray_hit(a: Cell, b: Cell, rx: i32, ry: i32) -> bool {
    let dx = (b.0 - a.0) as i64;
    let dy = (b.1 - a.1) as i64;
    // y0 * dx and ry * dx share the sign of dx, so compare after
    // multiplying the difference back by sign(dx).
    let num = a.1 as i64 * dx + dy * (rx - a.0) as i64;
    let t = (num - ry as i64 * dx) * dx.signum();
    match t.cmp(&0) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => dy * dx < 0,
    }
}

//! Curve shortening: pulls a grid polyline taut within its homotopy class.
//!
//! A curve is kept as its bend polyline: vertices on cell centers, every
//! chord's raster free of obstacles. Shortening repeatedly splices straight
//! chords across windows of the curve's skeleton (the concatenation of the
//! chord rasters) when the splice is collision-free, preserves the crossing
//! word, and strictly shortens the curve. Windows are scanned largest first
//! and the scan restarts after every accepted splice, so the result is a
//! fixpoint: no admissible splice improves it. Moves never change the
//! endpoints, so loops pinned at a point stay loops.
//!
//! Lengths are exact chord lengths between bends, never staircase step
//! counts, and splice gains are screened with integer squared distances
//! before any square root is taken.

use crate::curve::Polyline;
use crate::error::{PlanError, Result};
use crate::gridmap::{polyline_cells, raster_contains, raster_segment, Cell, GridWorld, MaskKind};
use crate::homotopy::{segment_letters, HSignature};

/// A splice must win at least this much length to be accepted; guards
/// against cycling on floating-point noise.
const GAIN_EPS: f64 = 1e-9;

/// Pulls `curve` taut within its homotopy class, endpoints pinned, over
/// polylines with cell-center vertices and raster-free chords. The result
/// is a fixpoint of every single-splice move; exhaustive search can
/// occasionally do a hair better (under 0.2 percent in testing) by placing
/// two new bends at once, which no single straight splice produces. The
/// input must satisfy the same validity conditions.
pub fn shorten(world: &GridWorld, curve: &Polyline, mask: MaskKind) -> Result<Polyline> {
    let cells = polyline_cells(curve)?;
    Polyline::from_cells(&shorten_cells(world, &cells, mask, None)?)
}

pub(crate) fn dist_cells(a: Cell, b: Cell) -> f64 {
    let dx = (b.0 - a.0) as f64;
    let dy = (b.1 - a.1) as f64;
    (dx * dx + dy * dy).sqrt()
}

pub(crate) fn bends_length(bends: &[Cell]) -> f64 {
    bends.windows(2).map(|w| dist_cells(w[0], w[1])).sum()
}

/// Extends a tether by one robot step and re-tautens it. `bends` must be a
/// fixpoint of `shorten_cells` (which every output of this module is), so
/// only splice windows reaching the appended cell need a fresh look until
/// the first one fires.
pub(crate) fn drag_step(
    world: &GridWorld,
    bends: &mut Vec<Cell>,
    next: Cell,
    mask: MaskKind,
) -> Result<()> {
    if *bends.last().expect("tether has at least its anchor") == next {
        return Ok(());
    }
    bends.push(next);
    *bends = shorten_cells(world, bends, mask, Some(1))?;
    Ok(())
}

/// Core worker on bend cells. `fresh_cells = Some(n)` promises the curve was
/// already a fixpoint before its last `n` skeleton cells existed, so the
/// first scan only looks at windows whose right end reaches into those
/// cells. This is exact for single robot steps: a step either starts a new
/// one-cell chord or extends an axis or diagonal chord, and extending such
/// a chord keeps every older window's gain and admissibility unchanged
/// (collinear distances add exactly and both crossing words gain the same
/// suffix).
pub(crate) fn shorten_cells(
    world: &GridWorld,
    cells: &[Cell],
    mask: MaskKind,
    fresh_cells: Option<usize>,
) -> Result<Vec<Cell>> {
    validate(world, cells, mask)?;
    let mut bends = normalize_bends(cells.to_vec());
    if bends.len() < 2 {
        return Ok(bends);
    }
    let mut layout = Layout::build(&bends);
    let cap = 256.max(layout.skel.len() * layout.skel.len());
    let track_prefix = fresh_cells.is_some();
    let mut min_j = match fresh_cells {
        Some(n) => layout.skel.len().saturating_sub(n),
        None => 0,
    };
    let mut cert: Option<Cert> = None;
    let mut accepts = 0usize;
    loop {
        let Some((i, j)) = layout.find_splice(world, mask, &bends, min_j, cert) else {
            break;
        };
        accepts += 1;
        if accepts > cap {
            return Err(PlanError::BudgetExceeded(cap));
        }
        // A splice leaves bends[..=a] untouched. When everything left of
        // min_j was already a fixpoint (the drag path), windows wholly
        // inside that prefix stay non-improving, so the next scan resumes
        // from the leftmost bend any splice has touched instead of
        // rescanning the whole curve; dragging costs O(tail), not O(curve).
        // Skeleton positions up to bend a agree across the rebuild because
        // the prefix chords are untouched, so min_j carries over.
        let a = layout.pb[i] as usize;
        let b = layout.nb[j] as usize;
        let suffix_tail = layout.skel.len() - 1 - layout.bend_pos[b];
        bends = layout.apply_splice(&bends, i, j);
        if bends.len() < 2 {
            return Ok(bends);
        }
        layout = Layout::build(&bends);
        let k_new = layout.skel.len() - 1;
        cert = Some(Cert {
            span: j - i,
            t_lo: layout.bend_pos[a],
            t_hi: k_new - suffix_tail,
        });
        min_j = if track_prefix {
            min_j.min(layout.bend_pos[a])
        } else {
            0
        };
    }
    Ok(normalize_bends(bends))
}

fn validate(world: &GridWorld, cells: &[Cell], mask: MaskKind) -> Result<()> {
    if cells.is_empty() {
        return Err(PlanError::EmptyPolyline);
    }
    for w in cells.windows(2) {
        for c in raster_segment(w[0], w[1]) {
            if !world.mask(c, mask) {
                return Err(PlanError::Blocked { x: c.0, y: c.1 });
            }
        }
    }
    let c = cells[0];
    if !world.mask(c, mask) {
        return Err(PlanError::Blocked { x: c.0, y: c.1 });
    }
    Ok(())
}

/// Drops consecutive duplicates and interior bends that lie exactly on the
/// straight line of their neighbors without doubling back. Spikes (exact
/// reversals) are kept; splice moves erase them with a length gain instead.
fn normalize_bends(bends: Vec<Cell>) -> Vec<Cell> {
    let mut out: Vec<Cell> = Vec::with_capacity(bends.len());
    for c in bends {
        if out.last() == Some(&c) {
            continue;
        }
        while out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            let (ux, uy) = ((b.0 - a.0) as i64, (b.1 - a.1) as i64);
            let (vx, vy) = ((c.0 - b.0) as i64, (c.1 - b.1) as i64);
            if ux * vy - uy * vx == 0 && ux * vx + uy * vy > 0 {
                out.pop();
            } else {
                break;
            }
        }
        out.push(c);
    }
    out
}

/// What the last accepted splice certifies about the scan that found it:
/// every window wider than `span` was already visited and rejected, and a
/// splice only changes the skeleton between `t_lo` and `t_hi` (exclusive),
/// so of those windows only the ones overlapping that interval need a
/// fresh look. Windows it does not touch keep their segments and crossing
/// words, and their gain only drops by the splice's own gain, so rejected
/// ones stay rejected.
#[derive(Clone, Copy)]
struct Cert {
    span: usize,
    t_lo: usize,
    t_hi: usize,
}

/// Rejection state carried across the windows of one scan. Neighboring
/// windows usually fail the same way, so one obstacle cell (tried as is
/// and slid along with the window) short-circuits most collision walks,
/// and the crossing word of the replaced stretch is reused while the scan
/// stays between the same two bends.
struct ScanMemo {
    block: Option<Cell>,
    prev: Option<(Cell, Cell)>,
    word_key: Option<(u32, u32)>,
    word: HSignature,
    scratch: HSignature,
}

/// Per-iteration geometry of the current bend polyline.
struct Layout {
    /// Concatenated chord rasters; consecutive cells 8-adjacent.
    skel: Vec<Cell>,
    /// Skeleton index of every bend.
    bend_pos: Vec<usize>,
    /// For each skeleton cell: the bend at or before it, and at or after it.
    pb: Vec<u32>,
    nb: Vec<u32>,
    /// Cumulative chord length at each bend.
    cum: Vec<f64>,
    /// Straight distance from the pb bend / to the nb bend.
    dprev: Vec<f64>,
    dnext: Vec<f64>,
}

impl Layout {
    fn build(bends: &[Cell]) -> Self {
        let mut skel = vec![bends[0]];
        let mut bend_pos = vec![0usize];
        let mut cum = vec![0.0f64];
        for w in bends.windows(2) {
            let seg = raster_segment(w[0], w[1]);
            skel.extend_from_slice(&seg[1..]);
            bend_pos.push(skel.len() - 1);
            cum.push(cum.last().unwrap() + dist_cells(w[0], w[1]));
        }
        let n = skel.len();
        let mut pb = vec![0u32; n];
        let mut nb = vec![0u32; n];
        let mut dprev = vec![0.0f64; n];
        let mut dnext = vec![0.0f64; n];
        for k in 0..bends.len() - 1 {
            for t in bend_pos[k]..bend_pos[k + 1] {
                pb[t] = k as u32;
                nb[t] = k as u32 + 1;
                dprev[t] = dist_cells(bends[k], skel[t]);
                dnext[t] = dist_cells(skel[t], bends[k + 1]);
            }
            // The junction cell belongs to both chords but is its own bend.
            let t = bend_pos[k + 1];
            pb[t] = k as u32 + 1;
            nb[t] = k as u32 + 1;
        }
        Layout {
            skel,
            bend_pos,
            pb,
            nb,
            cum,
            dprev,
            dnext,
        }
    }

    /// First admissible splice in scan order: window span descending, then
    /// left to right. Only windows with j >= min_j are considered, and when
    /// `cert` carries the previous splice of the same call, windows wider
    /// than it are visited only where they overlap its changed interval
    /// (see `Cert`); everything else of that width was certified dead by
    /// the scan that accepted it and stays dead. Both filters skip only
    /// windows known to reject, so the returned splice is the same one a
    /// full scan would find.
    ///
    /// A window confined to one chord can never gain (the chord is already
    /// straight: slack <= d by the triangle inequality), so the scan visits
    /// only windows that strictly straddle an interior bend, jumping over
    /// the straight runs in between.
    fn find_splice(
        &self,
        world: &GridWorld,
        mask: MaskKind,
        bends: &[Cell],
        min_j: usize,
        cert: Option<Cert>,
    ) -> Option<(usize, usize)> {
        let k = self.skel.len() - 1;
        if self.bend_pos.len() < 3 {
            return None;
        }
        let mut memo = ScanMemo {
            block: None,
            prev: None,
            word_key: None,
            word: HSignature::trivial(),
            scratch: HSignature::trivial(),
        };
        for span in (2..=k).rev() {
            let lo = min_j.saturating_sub(span);
            let hi = k - span;
            match cert {
                Some(c) if span > c.span => {
                    // Interior of the changed interval, as window end or
                    // window start; ranges merge when they meet.
                    if c.t_hi < c.t_lo + 2 {
                        continue;
                    }
                    let (e1, e2) = (c.t_lo + 1, c.t_hi - 1);
                    let (s1, s2) = (e1.saturating_sub(span), e2.saturating_sub(span));
                    if s2 + 1 >= e1 {
                        let found =
                            self.scan_span(world, mask, bends, span, s1.max(lo), e2.min(hi), &mut memo);
                        if found.is_some() {
                            return found;
                        }
                    } else {
                        for (r_lo, r_hi) in [(s1, s2), (e1, e2)] {
                            let found = self
                                .scan_span(world, mask, bends, span, r_lo.max(lo), r_hi.min(hi), &mut memo);
                            if found.is_some() {
                                return found;
                            }
                        }
                    }
                }
                _ => {
                    let found = self.scan_span(world, mask, bends, span, lo, hi, &mut memo);
                    if found.is_some() {
                        return found;
                    }
                }
            }
        }
        None
    }

    /// Walks windows (i, i + span) for i in i_lo..=i_hi left to right with
    /// all admissibility tests, returning the first splice that fires.
    #[allow(clippy::too_many_arguments)]
    fn scan_span(
        &self,
        world: &GridWorld,
        mask: MaskKind,
        bends: &[Cell],
        span: usize,
        i_lo: usize,
        i_hi: usize,
        memo: &mut ScanMemo,
    ) -> Option<(usize, usize)> {
        let junctions = &self.bend_pos[1..self.bend_pos.len() - 1];
        let mut i = i_lo;
        let mut jx = junctions.partition_point(|&m| m <= i_lo);
        while i <= i_hi {
            while jx < junctions.len() && junctions[jx] <= i {
                jx += 1;
            }
            if jx == junctions.len() {
                break;
            }
            let m = junctions[jx];
            if m >= i + span {
                i = m - span + 1;
                continue;
            }
            let j = i + span;
            let a = self.pb[i] as usize;
            let b = self.nb[j] as usize;
            // Gain screen without square roots: the splice shortens by
            // more than GAIN_EPS iff d(i, j) < slack.
            let slack = self.cum[b] - self.cum[a] - self.dprev[i] - self.dnext[j] - GAIN_EPS;
            if slack <= 0.0 {
                i += 1;
                continue;
            }
            let (si, sj) = (self.skel[i], self.skel[j]);
            let d2 = {
                let dx = (sj.0 - si.0) as f64;
                let dy = (sj.1 - si.1) as f64;
                dx * dx + dy * dy
            };
            if d2 >= slack * slack {
                i += 1;
                continue;
            }
            let (pa, nbend) = (bends[a], bends[b]);
            let prev = memo.prev.replace((si, sj));
            if let Some(c) = memo.block {
                if raster_contains(si, sj, c)
                    || raster_contains(pa, si, c)
                    || raster_contains(sj, nbend, c)
                {
                    i += 1;
                    continue;
                }
                // The last blocker often slides along with the window
                // (walls do); a translated guess is verified against the
                // mask before it may reject.
                if let Some((psi, psj)) = prev {
                    let mut hit = false;
                    for d in [(si.0 - psi.0, si.1 - psi.1), (sj.0 - psj.0, sj.1 - psj.1)] {
                        let c2 = (c.0 + d.0, c.1 + d.1);
                        if !world.mask(c2, mask) && raster_contains(si, sj, c2) {
                            memo.block = Some(c2);
                            hit = true;
                            break;
                        }
                    }
                    if hit {
                        i += 1;
                        continue;
                    }
                }
            }
            // The replaced stretch must be deformable onto the splice:
            // identical crossing words. This test is a few exact ray
            // comparisons, so it runs before the cell walks and spares
            // them for almost every window.
            if memo.word_key != Some((a as u32, b as u32)) {
                memo.word.clear();
                for kk in a..b {
                    let w = &mut memo.word;
                    segment_letters(world, bends[kk], bends[kk + 1], |l| w.push(l));
                }
                memo.word_key = Some((a as u32, b as u32));
            }
            memo.scratch.clear();
            for (u, v) in [(pa, si), (si, sj), (sj, nbend)] {
                let w = &mut memo.scratch;
                segment_letters(world, u, v, |l| w.push(l));
            }
            if memo.word != memo.scratch {
                i += 1;
                continue;
            }
            if let Some(c) = world
                .first_blocked(si, sj, mask)
                .or_else(|| world.first_blocked(pa, si, mask))
                .or_else(|| world.first_blocked(sj, nbend, mask))
            {
                memo.block = Some(c);
                i += 1;
                continue;
            }
            return Some((i, j));
        }
        None
    }

    /// Rebuilds the bend polyline with the window (i, j) spliced out.
    fn apply_splice(&self, bends: &[Cell], i: usize, j: usize) -> Vec<Cell> {
        let a = self.pb[i] as usize;
        let b = self.nb[j] as usize;
        let mut out: Vec<Cell> = bends[..=a].to_vec();
        for c in [self.skel[i], self.skel[j]] {
            if *out.last().unwrap() != c {
                out.push(c);
            }
        }
        for &c in &bends[b..] {
            if *out.last().unwrap() != c {
                out.push(c);
            }
        }
        out
    }
}

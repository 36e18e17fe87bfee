//! Deterministic SVG rendering of worlds, tethers, and tour paths.
//!
//! The same inputs always produce the same bytes: every coordinate is
//! formatted with a fixed precision, iteration follows input order, and the
//! star and triangle markers use precomputed vertex offsets rather than
//! runtime trigonometry. Callers that persist a rendering next to a result
//! file can therefore re-render from the loaded result and expect a
//! byte-identical file.
//!
//! Layout: one SVG user unit per grid cell, cell centers at integer
//! coordinates, y growing downward (matching map row order). Obstacle cells
//! are dark gray, the inflation margin (free in the map, excluded by the
//! robot radius) light gray, tethers gray, the route blue, goals red stars,
//! and the base a red triangle.

use std::fmt::Write as _;

use crate::gridmap::{Cell, GridWorld};

/// Pixels per grid cell in the emitted width/height attributes. Purely a
/// default display scale; the viewBox keeps the drawing resolution-free.
const PX_PER_CELL: i64 = 8;

const OBSTACLE_FILL: &str = "#555555";
const MARGIN_FILL: &str = "#c8c8c8";
const TETHER_STROKE: &str = "#888888";
const PATH_STROKE: &str = "#2060c0";
const MARKER_FILL: &str = "#d03030";

/// Five-pointed star, point up, outer radius 0.45 and inner radius 0.18,
/// as (dx, dy) offsets from the goal center in render coordinates (y down).
const STAR: [(f64, f64); 10] = [
    (0.0, -0.45),
    (0.1058, -0.1456),
    (0.428, -0.1391),
    (0.1712, 0.0556),
    (0.2645, 0.3641),
    (0.0, 0.18),
    (-0.2645, 0.3641),
    (-0.1712, 0.0556),
    (-0.428, -0.1391),
    (-0.1058, -0.1456),
];

/// Upward-pointing triangle marking the base anchor.
const TRIANGLE: [(f64, f64); 3] = [(0.0, -0.4), (-0.35, 0.3), (0.35, 0.3)];

/// Fixed-precision coordinate formatting. Three decimals is finer than any
/// geometry the planner produces while keeping the output stable across
/// platforms; negative zero is normalized away so it cannot leak in from
/// parsed input.
fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.3}")
}

fn push_points(out: &mut String, pts: impl Iterator<Item = (f64, f64)>) {
    let mut first = true;
    for (x, y) in pts {
        if !first {
            out.push(' ');
        }
        first = false;
        out.push_str(&num(x));
        out.push(',');
        out.push_str(&num(y));
    }
}

fn push_polyline(out: &mut String, pts: &[[f64; 2]], stroke: &str, width: f64) {
    if pts.len() < 2 {
        return;
    }
    out.push_str("<polyline points=\"");
    push_points(out, pts.iter().map(|p| (p[0], p[1])));
    let _ = write!(
        out,
        "\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{}\" \
         stroke-linejoin=\"round\" stroke-linecap=\"round\"/>\n",
        num(width)
    );
}

fn push_marker(out: &mut String, center: Cell, offsets: &[(f64, f64)]) {
    let (cx, cy) = (center.0 as f64, center.1 as f64);
    out.push_str("<polygon points=\"");
    push_points(out, offsets.iter().map(|&(dx, dy)| (cx + dx, cy + dy)));
    let _ = write!(out, "\" fill=\"{MARKER_FILL}\"/>\n");
}

/// Emits maximal horizontal runs of same-fill cells as single rects, row by
/// row, so the output stays compact on large maps without changing shape.
fn push_cells(out: &mut String, world: &GridWorld) {
    #[derive(PartialEq, Clone, Copy)]
    enum Kind {
        Open,
        Margin,
        Obstacle,
    }
    for y in 0..world.height() {
        let mut run: Option<(Kind, i32, i32)> = None;
        for x in 0..=world.width() {
            let kind = if x == world.width() {
                Kind::Open // sentinel flushes the trailing run
            } else if !world.is_free((x, y)) {
                Kind::Obstacle
            } else if !world.is_collision_free((x, y)) {
                Kind::Margin
            } else {
                Kind::Open
            };
            match run {
                Some((k, _, ref mut end)) if k == kind => *end = x,
                _ => {
                    if let Some((k, start, end)) = run.take() {
                        if k != Kind::Open {
                            let fill = match k {
                                Kind::Obstacle => OBSTACLE_FILL,
                                Kind::Margin => MARGIN_FILL,
                                Kind::Open => unreachable!(),
                            };
                            let _ = write!(
                                out,
                                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"1\" \
                                 fill=\"{fill}\"/>\n",
                                num(start as f64 - 0.5),
                                num(y as f64 - 0.5),
                                end - start + 1,
                            );
                        }
                    }
                    run = Some((kind, x, x));
                }
            }
        }
    }
}

/// Renders a scene to a standalone SVG document.
///
/// `tethers` are drawn in order under `path`, so the route stays visible
/// where they overlap; goal markers and the base marker are drawn last.
/// An empty `tethers` slice with `path` absent yields a map-only picture.
pub fn render_svg(
    world: &GridWorld,
    base: Cell,
    goals: &[Cell],
    tethers: &[Vec<[f64; 2]>],
    path: Option<&[[f64; 2]]>,
) -> String {
    let (w, h) = (world.width() as i64, world.height() as i64);
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1 -1 {} {}\" \
         width=\"{}\" height=\"{}\">\n",
        w + 1,
        h + 1,
        (w + 1) * PX_PER_CELL,
        (h + 1) * PX_PER_CELL,
    );
    let _ = write!(
        out,
        "<rect x=\"-1\" y=\"-1\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        w + 1,
        h + 1,
    );
    push_cells(&mut out, world);
    for tether in tethers {
        push_polyline(&mut out, tether, TETHER_STROKE, 0.12);
    }
    if let Some(p) = path {
        push_polyline(&mut out, p, PATH_STROKE, 0.18);
    }
    for &g in goals {
        push_marker(&mut out, g, &STAR);
    }
    push_marker(&mut out, base, &TRIANGLE);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridmap::load_map;

    fn world(text: &str, radius: f64) -> GridWorld {
        load_map(text.as_bytes()).unwrap().inflate(radius).unwrap()
    }

    #[test]
    fn rendering_is_deterministic() {
        let w = world("......\n..##..\n......\n......\n", 1.0);
        let tether = vec![[0.0, 0.0], [4.0, 3.0]];
        let path = vec![[0.0, 0.0], [2.0, 3.0], [4.0, 3.0]];
        let a = render_svg(&w, (0, 0), &[(4, 3), (5, 0)], &[tether.clone()], Some(&path));
        let b = render_svg(&w, (0, 0), &[(4, 3), (5, 0)], &[tether], Some(&path));
        assert_eq!(a, b);
        assert!(a.starts_with("<svg "));
        assert!(a.ends_with("</svg>\n"));
    }

    #[test]
    fn map_only_picture_has_no_polylines() {
        let w = world("....\n.#..\n....\n", 0.0);
        let svg = render_svg(&w, (0, 0), &[], &[], None);
        assert!(!svg.contains("<polyline"));
        // base triangle is still drawn
        assert_eq!(svg.matches("<polygon").count(), 1);
    }

    #[test]
    fn cells_merge_into_row_runs() {
        // Row 1 has obstacles at x = 1..=2 and x = 4: two dark rects. With
        // radius 1 the margin forms runs on rows 0..=2 around them.
        let w = world("......\n.##.#.\n......\n", 1.0);
        let svg = render_svg(&w, (0, 2), &[(5, 2)], &[], None);
        assert_eq!(svg.matches(OBSTACLE_FILL).count(), 2);
        assert!(svg.matches(MARGIN_FILL).count() >= 3);
        assert_eq!(svg.matches("<polygon").count(), 2);
        // one rect spans the two-cell obstacle run
        assert!(svg.contains("<rect x=\"0.500\" y=\"0.500\" width=\"2\" height=\"1\""));
    }

    #[test]
    fn markers_sit_on_cell_centers() {
        let w = world("...\n...\n...\n", 0.0);
        let svg = render_svg(&w, (1, 1), &[(2, 0)], &[], None);
        // star's top point: (2, 0) + (0, -0.45)
        assert!(svg.contains("2.000,-0.450"));
        // triangle's top point: (1, 1) + (0, -0.4)
        assert!(svg.contains("1.000,0.600"));
    }
}

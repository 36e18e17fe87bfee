//! Shared fixtures for the integration suites: seeded random maps and
//! curves, so every test run sees identical inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tetherplan::gridmap::{load_map, Cell, GridWorld};

pub fn world_from(text: &str) -> GridWorld {
    load_map(text.as_bytes()).unwrap().inflate(0.0).unwrap()
}

/// Scattered-cell map: each cell is an obstacle with probability `density`,
/// except a 3x3 clearing kept around `base`. The random stream is consumed
/// uniformly (one draw per cell) so the layout depends only on the seed.
pub fn random_map(w: i32, h: i32, density: f64, base: Cell, seed: u64) -> GridWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for y in 0..h {
        for x in 0..w {
            let near_base = (x - base.0).abs() <= 1 && (y - base.1).abs() <= 1;
            let blocked = rng.random_bool(density) && !near_base;
            text.push(if blocked { '#' } else { '.' });
        }
        text.push('\n');
    }
    world_from(&text)
}

/// Room-style map: `n` solid rectangles dropped with at least a two-cell
/// gap between them and a clearing around `base`, retrying placements until
/// all fit. Obstacle sizes scale with the map so a 240x240 instance looks
/// like a floor plan rather than noise.
pub fn rectangle_map(w: i32, h: i32, n: usize, base: Cell, seed: u64) -> GridWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_side = (w.min(h) / 10).max(3);
    let max_side = (w.min(h) / 4).max(min_side + 1);
    let mut rects: Vec<(i32, i32, i32, i32)> = Vec::new();
    let mut attempts = 0;
    while rects.len() < n && attempts < 10_000 {
        attempts += 1;
        let rw = rng.random_range(min_side..=max_side);
        let rh = rng.random_range(min_side..=max_side);
        let x0 = rng.random_range(1..(w - rw - 1).max(2));
        let y0 = rng.random_range(1..(h - rh - 1).max(2));
        let candidate = (x0, y0, rw, rh);
        let clear_of_base = base.0 < x0 - 2
            || base.0 > x0 + rw + 1
            || base.1 < y0 - 2
            || base.1 > y0 + rh + 1;
        let separated = rects.iter().all(|&(ox, oy, ow, oh)| {
            x0 + rw + 2 <= ox || ox + ow + 2 <= x0 || y0 + rh + 2 <= oy || oy + oh + 2 <= y0
        });
        if clear_of_base && separated {
            rects.push(candidate);
        }
    }
    assert_eq!(rects.len(), n, "could not place {n} rectangles (seed {seed})");
    let mut grid = vec![vec!['.'; w as usize]; h as usize];
    for (x0, y0, rw, rh) in rects {
        for y in y0..y0 + rh {
            for x in x0..x0 + rw {
                grid[y as usize][x as usize] = '#';
            }
        }
    }
    let text: String = grid
        .into_iter()
        .map(|row| row.into_iter().collect::<String>() + "\n")
        .collect();
    world_from(&text)
}

/// Random collision-free walk of up to `steps` 8-connected moves from
/// `start`. Returns the visited cells (the raw, unshortened curve).
pub fn random_walk(
    world: &GridWorld,
    start: Cell,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Cell> {
    const MOVES: [(i32, i32); 8] = [
        (1, 0),
        (-1, 0),
        (0, 1),
        (0, -1),
        (1, 1),
        (1, -1),
        (-1, 1),
        (-1, -1),
    ];
    let mut walk = vec![start];
    let mut at = start;
    for _ in 0..steps {
        let (dx, dy) = MOVES[rng.random_range(0..MOVES.len())];
        let next = (at.0 + dx, at.1 + dy);
        if world.is_collision_free(next) {
            walk.push(next);
            at = next;
        }
    }
    walk
}

/// First collision-free cell scanning rows from the top, for maps where the
/// intended base may have been swallowed by an obstacle.
pub fn first_free(world: &GridWorld) -> Cell {
    for y in 0..world.height() {
        for x in 0..world.width() {
            if world.is_collision_free((x, y)) {
                return (x, y);
            }
        }
    }
    panic!("map has no collision-free cell");
}

//! One-off search for acceptance fixtures; run with --ignored --nocapture.

mod common;

use std::time::Instant;

use tetherplan::gcp::LENGTH_EPS;
use tetherplan::oracle::build_workspace;

#[test]
#[ignore]
fn search_count_fixture() {
    let base = (8, 120);
    let (hi, lo) = (250.0, 200.0);
    // goal order wants per-goal class counts (11,8,15,9,6,6) at L=250 that
    // shrink to (2,0,6,4,2,2) at L=200
    let wanted: [(usize, usize); 6] = [(11, 2), (8, 0), (15, 6), (9, 4), (6, 2), (6, 2)];
    for seed in 0..12u64 {
        let world = common::rectangle_map(240, 240, 9, base, seed);
        assert_eq!(world.components().len(), 9, "seed {seed}");
        println!("seed {seed}: building...");
        let t0 = Instant::now();
        let graph = match build_workspace(&world, base, hi) {
            Ok(g) => g,
            Err(e) => {
                println!("seed {seed}: build failed: {e}");
                continue;
            }
        };
        let build_s = t0.elapsed().as_secs_f64();
        let cells = graph.reachable_cells();
        let mut by_pair: std::collections::HashMap<(usize, usize), Vec<(i32, i32)>> =
            std::collections::HashMap::new();
        for &c in &cells {
            let slice = graph.slice(&world, c);
            let n_hi = slice.len();
            let n_lo = slice
                .iter()
                .filter(|cfg| cfg.length() <= lo + LENGTH_EPS)
                .count();
            by_pair.entry((n_hi, n_lo)).or_default().push(c);
        }
        println!(
            "seed {seed}: build {build_s:.1}s, {} states, {} cells",
            graph.node_count(),
            cells.len()
        );
        for w in wanted {
            println!(
                "  pair {w:?}: {} candidates",
                by_pair.get(&w).map_or(0, |v| v.len())
            );
        }
        // greedy scattered assignment
        let mut chosen: Vec<(i32, i32)> = Vec::new();
        let mut ok = true;
        for w in wanted {
            let cands = by_pair.get(&w).cloned().unwrap_or_default();
            let far = |c: (i32, i32), chosen: &[(i32, i32)]| {
                chosen
                    .iter()
                    .all(|&g| ((g.0 - c.0).pow(2) + (g.1 - c.1).pow(2)) >= 30 * 30)
            };
            let pick = cands
                .iter()
                .find(|&&c| far(c, &chosen) && !chosen.contains(&c))
                .or_else(|| cands.iter().find(|&&c| !chosen.contains(&c)));
            match pick {
                Some(&c) => chosen.push(c),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            println!("  GOALS {chosen:?}");
            return;
        }
    }
    panic!("no seed produced the wanted count pairs");
}

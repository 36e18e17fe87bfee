//! Scenario and result files: the JSON schemas the command line reads and
//! writes. A scenario names a map and the planning parameters; a result
//! captures a finished plan with enough geometry to re-render it exactly.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{PlanError, Result};
use crate::gridmap::{load_map, Cell, GridWorld};
use crate::planner::{OnUnreachable, Solution, Timings};

/// Planning input. `map` is resolved relative to the scenario file's
/// directory unless absolute.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    /// Path to an ASCII or PGM map file.
    pub map: String,
    /// Robot disk radius in cells; 0 plans for a point robot.
    #[serde(default)]
    pub radius: f64,
    /// Tether anchor cell.
    pub base: [i32; 2],
    /// Maximum tether length in cells.
    pub tether_length: f64,
    /// Goal cells, in visiting order where the order matters.
    #[serde(default)]
    pub goals: Vec<[i32; 2]>,
    /// "fail" (default) or "skip".
    #[serde(default)]
    pub on_unreachable: Option<String>,
    /// Walk from the base defining the starting configuration; the tether
    /// is this walk pulled taut. Defaults to the retracted home state.
    #[serde(default)]
    pub start_tether: Option<Vec<[i32; 2]>>,
    /// Walk from the base defining the target configuration of a
    /// reconfigure run.
    #[serde(default)]
    pub goal_tether: Option<Vec<[i32; 2]>>,
}

impl Scenario {
    /// Parses a scenario file.
    pub fn load(path: &Path) -> Result<(Scenario, PathBuf)> {
        let text = std::fs::read_to_string(path)?;
        let s: Scenario = serde_json::from_str(&text)
            .map_err(|e| PlanError::Scenario(format!("{}: {e}", path.display())))?;
        if s.tether_length < 0.0 {
            return Err(PlanError::Scenario("tether_length is negative".into()));
        }
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Ok((s, dir))
    }

    /// Loads and inflates the scenario's map.
    pub fn load_world(&self, dir: &Path) -> Result<GridWorld> {
        let map_path = if Path::new(&self.map).is_absolute() {
            PathBuf::from(&self.map)
        } else {
            dir.join(&self.map)
        };
        let data = std::fs::read(&map_path)?;
        load_map(&data)?.inflate(self.radius)
    }

    pub fn base_cell(&self) -> Cell {
        (self.base[0], self.base[1])
    }

    pub fn goal_cells(&self) -> Vec<Cell> {
        self.goals.iter().map(|g| (g[0], g[1])).collect()
    }

    pub fn policy(&self) -> Result<OnUnreachable> {
        match self.on_unreachable.as_deref() {
            None | Some("fail") => Ok(OnUnreachable::Fail),
            Some("skip") => Ok(OnUnreachable::Skip),
            Some(other) => Err(PlanError::Scenario(format!(
                "on_unreachable must be \"fail\" or \"skip\", got {other:?}"
            ))),
        }
    }
}

/// Wall-clock phases in milliseconds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimingsMs {
    /// Goal-configuration enumeration.
    pub gcp_ms: f64,
    /// Path-shortening work (reconfiguration legs).
    pub ups_ms: f64,
    /// Argmin, stage DP, or tour search.
    pub combinatorial_ms: f64,
    pub total_ms: f64,
}

impl From<Timings> for TimingsMs {
    fn from(t: Timings) -> Self {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        TimingsMs {
            gcp_ms: ms(t.classes),
            ups_ms: ms(t.legs),
            combinatorial_ms: ms(t.optimize),
            total_ms: ms(t.total),
        }
    }
}

/// One visited goal in a result file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoalResult {
    pub goal: [i32; 2],
    /// Index into the scenario's goal list.
    pub goal_index: usize,
    /// Admissible configurations the goal offered.
    pub n_configs: usize,
    /// Which of them the plan uses (into the sorted candidate list).
    pub chosen_index: usize,
    pub tether_length: f64,
    /// Crossing word of the chosen tether class.
    pub class: Vec<i32>,
    /// Taut tether held at this goal, as vertices.
    pub tether: Vec<[f64; 2]>,
    /// Length of the route from the previous stop.
    pub leg_length: f64,
}

/// A finished plan. Everything the renderer needs is inline, so reloading
/// a result reproduces its drawing byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultFile {
    /// "ok", or "partial" when goals were skipped.
    pub status: String,
    pub total_length: f64,
    /// Full robot route vertices.
    pub path: Vec<[f64; 2]>,
    /// Per-goal outcomes, in visiting order.
    pub per_goal: Vec<GoalResult>,
    /// Goal indices in the order visited.
    pub visit_order: Vec<usize>,
    /// Goal indices dropped as unreachable.
    pub skipped: Vec<usize>,
    /// Reconfiguration routes computed (mirrored routes counted).
    pub ups_calls: usize,
    pub timings_ms: TimingsMs,
}

impl ResultFile {
    pub fn from_solution(sol: &Solution) -> ResultFile {
        ResultFile {
            status: if sol.skipped.is_empty() { "ok" } else { "partial" }.into(),
            total_length: sol.total_length,
            path: sol.path.points().iter().map(|p| [p.x, p.y]).collect(),
            per_goal: sol
                .visits
                .iter()
                .map(|v| GoalResult {
                    goal: [v.goal.0, v.goal.1],
                    goal_index: v.goal_index,
                    n_configs: v.n_candidates,
                    chosen_index: v.chosen_index,
                    tether_length: v.configuration.length(),
                    class: v.configuration.signature().letters().to_vec(),
                    tether: v
                        .configuration
                        .tether()
                        .iter()
                        .map(|&(x, y)| [x as f64, y as f64])
                        .collect(),
                    leg_length: v.leg.length,
                })
                .collect(),
            visit_order: sol.visits.iter().map(|v| v.goal_index).collect(),
            skipped: sol.skipped.clone(),
            ups_calls: sol.ups_calls,
            timings_ms: sol.timings.into(),
        }
    }

    pub fn load(path: &Path) -> Result<ResultFile> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| PlanError::Scenario(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| PlanError::Scenario(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Result of a reconfigure run between two explicit configurations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconfigResultFile {
    pub status: String,
    /// Length of the taut reconfiguration route.
    pub total_length: f64,
    /// The route's vertices.
    pub path: Vec<[f64; 2]>,
    /// Longest tether the move needs: the longer endpoint.
    pub min_required_tether: f64,
    /// Largest induced tether length seen while dragging.
    pub profile_max: f64,
    pub start_tether: Vec<[f64; 2]>,
    pub goal_tether: Vec<[f64; 2]>,
    pub ups_calls: usize,
    pub timings_ms: TimingsMs,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_round_trips_and_validates() {
        let dir = std::env::temp_dir().join("tetherplan-scenario-test");
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("m.txt"), ".....\n.....\n.....\n").unwrap();
        let path = dir.join("s.json");
        std::fs::write(
            &path,
            r#"{"map":"m.txt","base":[0,0],"tether_length":9.5,
               "goals":[[4,2]],"on_unreachable":"skip"}"#,
        )
        .unwrap();
        let (s, d) = Scenario::load(&path).unwrap();
        assert_eq!(s.base_cell(), (0, 0));
        assert_eq!(s.goal_cells(), vec![(4, 2)]);
        assert_eq!(s.policy().unwrap(), OnUnreachable::Skip);
        assert_eq!(s.radius, 0.0, "radius defaults to a point robot");
        let w = s.load_world(&d).unwrap();
        assert_eq!((w.width(), w.height()), (5, 3));
    }

    #[test]
    fn bad_policy_and_bad_json_are_scenario_errors() {
        let dir = std::env::temp_dir().join("tetherplan-scenario-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.json");
        std::fs::write(&path, "{not json").unwrap();
        assert!(matches!(
            Scenario::load(&path),
            Err(PlanError::Scenario(_))
        ));
        let s = Scenario {
            map: "m.txt".into(),
            radius: 0.0,
            base: [0, 0],
            tether_length: 5.0,
            goals: vec![],
            on_unreachable: Some("maybe".into()),
            start_tether: None,
            goal_tether: None,
        };
        assert!(matches!(s.policy(), Err(PlanError::Scenario(_))));
    }

    #[test]
    fn result_files_round_trip() {
        let r = ResultFile {
            status: "ok".into(),
            total_length: 2.5,
            path: vec![[0.0, 0.0], [2.0, 1.5]],
            per_goal: vec![GoalResult {
                goal: [2, 1],
                goal_index: 0,
                n_configs: 2,
                chosen_index: 0,
                tether_length: 2.5,
                class: vec![1],
                tether: vec![[0.0, 0.0], [2.0, 1.5]],
                leg_length: 2.5,
            }],
            visit_order: vec![0],
            skipped: vec![],
            ups_calls: 0,
            timings_ms: TimingsMs {
                gcp_ms: 1.0,
                ups_ms: 0.5,
                combinatorial_ms: 0.1,
                total_ms: 1.7,
            },
        };
        let dir = std::env::temp_dir().join("tetherplan-scenario-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("r.json");
        r.save(&path).unwrap();
        let again = ResultFile::load(&path).unwrap();
        assert_eq!(again.path, r.path);
        assert_eq!(again.per_goal[0].class, vec![1]);
        assert_eq!(again.ups_calls, 0);
    }
}

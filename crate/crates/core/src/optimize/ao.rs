use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{boresight_vector, BoresightOrientation};

use super::{configs_from_orientations, finish, AngleGrid, ElementConfig, LocalGrid, Objective, OptResult, SearchState};

/// Starting point for alternating optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AoInit {
    Broadside,
    Provided(Vec<BoresightOrientation>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AoOptions {
    /// A cycle counts as improving only if it gains more than this fraction.
    pub rel_tol: f64,
    /// Safety bound on cycles per refinement round.
    pub max_cycles_per_round: usize,
}

impl Default for AoOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            max_cycles_per_round: 100,
        }
    }
}

/// Block-coordinate ascent over elements with per-element grid refinement.
///
/// Each cycle visits the elements in order and moves one element to the best
/// point of its local grid with the others fixed. When a cycle stops
/// improving, every local grid is refined around its element's incumbent,
/// up to `grid.max_rounds` times.
pub fn coarse_to_fine_ao(
    objective: &Objective,
    grid: &AngleGrid,
    init: &AoInit,
    options: AoOptions,
    exec: Execution,
) -> Result<OptResult> {
    grid.validate()?;
    let n = objective.len();
    let mut orientations = match init {
        AoInit::Broadside => super::broadside(n),
        AoInit::Provided(o) if o.len() == n => o.clone(),
        AoInit::Provided(o) => {
            return Err(Error::Precondition(format!("{} initial orientations for {n} elements", o.len())))
        }
    };
    let mut state = SearchState::new(objective, configs_from_orientations(objective, &orientations));
    let mut current = state.value();
    let mut trace = vec![current];
    let mut evaluations = 1u64;
    let mut grids = vec![LocalGrid::from_grid(grid); n];

    for round in 0..=grid.max_rounds {
        if round > 0 {
            for (g, o) in grids.iter_mut().zip(&orientations) {
                *g = g.refined(*o, grid.refinement_factor);
            }
        }
        for _ in 0..options.max_cycles_per_round {
            let cycle_start = current;
            for e in 0..n {
                let candidates = grids[e].orientations();
                let rest = state.sum_except(Some(e));
                let position = state.configs()[e].position;
                let cfg = |o: &BoresightOrientation| ElementConfig {
                    position,
                    boresight: boresight_vector(*o),
                };
                let best = exec.argmax(candidates.len(), |i| state.value_with(&rest, e, &cfg(&candidates[i])));
                evaluations += candidates.len() as u64;
                if let Some((i, v)) = best {
                    if improves(v, current, 0.0) {
                        state.set(e, cfg(&candidates[i]));
                        let fresh = state.value();
                        if fresh >= current {
                            orientations[e] = candidates[i];
                            current = fresh;
                        } else {
                            // rounding made the move a loss; undo it
                            state.set(e, cfg(&orientations[e]));
                        }
                    }
                }
            }
            trace.push(current);
            if !improves(current, cycle_start, options.rel_tol) {
                break;
            }
        }
    }
    finish(objective, orientations, None, current, evaluations, trace)
}

/// `candidate > current · (1 + rel_tol)`, with a sign-safe margin.
pub(crate) fn improves(candidate: f64, current: f64, rel_tol: f64) -> bool {
    candidate > current + rel_tol * current.abs()
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{boresight_vector, BoresightOrientation, Vec3};

use super::ao::improves;
use super::{finish, AoOptions, ElementConfig, Objective, OptResult, SearchState};

/// Movable-antenna slider: each element may shift along y around its lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaSegment {
    /// Half-width of the slider in meters.
    pub half_width: f64,
    /// Position resolution in meters.
    pub step: f64,
    /// Minimum pairwise element distance in meters.
    pub min_spacing: f64,
}

impl MaSegment {
    /// ±2λ in λ/8 steps with λ/2 minimum spacing.
    pub fn for_wavelength(wavelength: f64) -> Self {
        Self {
            half_width: 2.0 * wavelength,
            step: wavelength / 8.0,
            min_spacing: wavelength / 2.0,
        }
    }

    fn offsets(&self) -> Result<Vec<f64>> {
        if !(self.half_width >= 0.0) || !(self.min_spacing >= 0.0) {
            return Err(Error::Config("movable-antenna segment must have non-negative extent".into()));
        }
        if self.half_width == 0.0 {
            return Ok(vec![0.0]);
        }
        if !(self.step > 0.0) {
            return Err(Error::Config("movable-antenna step must be positive".into()));
        }
        let k = (self.half_width / self.step + 1e-9).floor() as i64;
        // ascending, so ties resolve to the most negative shift
        Ok((-k..=k).map(|i| i as f64 * self.step).collect())
    }
}

fn feasible(positions: &[Vec3], e: usize, candidate: Vec3, min_spacing: f64) -> bool {
    let limit = min_spacing * (1.0 - 1e-12);
    positions
        .iter()
        .enumerate()
        .all(|(m, p)| m == e || p.distance(candidate) >= limit)
}

/// Block-coordinate search over element y-positions with broadside boresights.
pub fn ma_position_search(
    objective: &Objective,
    segment: &MaSegment,
    options: AoOptions,
    exec: Execution,
) -> Result<OptResult> {
    let offsets = segment.offsets()?;
    let base: Vec<Vec3> = objective.base_configs().iter().map(|c| c.position).collect();
    for e in 0..base.len() {
        if !feasible(&base, e, base[e], segment.min_spacing) {
            return Err(Error::Config(format!(
                "nominal layout violates the {} m minimum spacing at element {e}",
                segment.min_spacing
            )));
        }
    }
    let broadside = boresight_vector(BoresightOrientation::BROADSIDE);
    let configs: Vec<ElementConfig> = base
        .iter()
        .map(|p| ElementConfig {
            position: *p,
            boresight: broadside,
        })
        .collect();
    let mut state = SearchState::new(objective, configs);
    let mut positions = base.clone();
    let mut current = state.value();
    let mut trace = vec![current];
    let mut evaluations = 1u64;

    for _ in 0..options.max_cycles_per_round {
        let cycle_start = current;
        for e in 0..base.len() {
            let candidates: Vec<Vec3> = offsets
                .iter()
                .map(|o| base[e] + Vec3::new(0.0, *o, 0.0))
                .filter(|c| feasible(&positions, e, *c, segment.min_spacing))
                .collect();
            let rest = state.sum_except(Some(e));
            let cfg = |p: Vec3| ElementConfig {
                position: p,
                boresight: broadside,
            };
            let best = exec.argmax(candidates.len(), |i| state.value_with(&rest, e, &cfg(candidates[i])));
            evaluations += candidates.len() as u64;
            if let Some((i, v)) = best {
                if improves(v, current, 0.0) {
                    state.set(e, cfg(candidates[i]));
                    let fresh = state.value();
                    if fresh >= current {
                        positions[e] = candidates[i];
                        current = fresh;
                    } else {
                        state.set(e, cfg(positions[e]));
                    }
                }
            }
        }
        trace.push(current);
        if !improves(current, cycle_start, options.rel_tol) {
            break;
        }
    }
    let orientations = super::broadside(base.len());
    finish(objective, orientations, Some(positions), current, evaluations, trace)
}

//! Boresight and position optimization.
//!
//! All searches maximize an [`Objective`] whose beamformer is re-derived in
//! closed form at every candidate (MRT, zero-forcing, or MRT toward the
//! target with a matched receive filter).

mod ao;
mod array_level;
mod exhaustive;
mod gradient;
pub mod grid;
mod movable;
pub mod objective;

pub use ao::{coarse_to_fine_ao, AoInit, AoOptions};
pub use array_level::array_rotation_search;
pub use exhaustive::{exhaustive_boresight, DEFAULT_COMBINATION_CAP};
pub use gradient::{fd_gradient_ascent, GradientOptions};
pub use grid::{AngleGrid, LocalGrid};
pub use movable::{ma_position_search, MaSegment};
pub use objective::{ElementConfig, Objective, ObjectiveKind, Scatterer, SceneSnapshot, SearchState};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{boresight_vector, BoresightOrientation, Vec3};
use crate::signal::BeamWeights;

/// Outcome of any optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub orientations: Vec<BoresightOrientation>,
    /// Beams for the first scene, one per served stream (a single beam except
    /// for zero-forcing). Empty when that scene's channel is degenerate under
    /// the returned configuration.
    pub weights: Vec<BeamWeights>,
    /// Linear objective value.
    pub objective: f64,
    pub evaluations: u64,
    /// Objective after each cycle or iteration, starting with the initial point.
    pub trace: Vec<f64>,
    /// Element positions, set by the movable-antenna search.
    pub positions: Option<Vec<Vec3>>,
}

impl OptResult {
    /// Element configurations described by this result on top of `objective`'s base array.
    pub fn configs(&self, objective: &Objective) -> Vec<ElementConfig> {
        objective
            .base_configs()
            .iter()
            .enumerate()
            .map(|(n, b)| ElementConfig {
                position: self.positions.as_ref().map_or(b.position, |p| p[n]),
                boresight: boresight_vector(self.orientations[n]),
            })
            .collect()
    }
}

pub(crate) fn configs_from_orientations(objective: &Objective, orientations: &[BoresightOrientation]) -> Vec<ElementConfig> {
    objective
        .base_configs()
        .iter()
        .zip(orientations)
        .map(|(b, o)| ElementConfig {
            position: b.position,
            boresight: boresight_vector(*o),
        })
        .collect()
}

pub(crate) fn finish(
    objective: &Objective,
    orientations: Vec<BoresightOrientation>,
    positions: Option<Vec<Vec3>>,
    value: f64,
    evaluations: u64,
    trace: Vec<f64>,
) -> Result<OptResult> {
    let mut result = OptResult {
        orientations,
        weights: Vec::new(),
        objective: value,
        evaluations,
        trace,
        positions,
    };
    result.weights = match objective.weights(&result.configs(objective)) {
        Ok(w) => w,
        Err(Error::DegenerateChannel(_) | Error::DegenerateEcho(_) | Error::SingularConfiguration { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(result)
}

/// Broadside orientation for every element.
pub fn broadside(n: usize) -> Vec<BoresightOrientation> {
    vec![BoresightOrientation::BROADSIDE; n]
}

//! Seeded placement in the forward half of a spherical annulus.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::optimize::{Scatterer, SceneSnapshot};

use super::config::ScenarioConfig;
use super::rng::{RngStream, CLUTTER_PHASE, PLACEMENT, STATISTICAL_CSI};

/// Volume-uniform point with `inner <= r <= outer` and `x > 0`.
pub fn sample_annulus_point<R: Rng + ?Sized>(rng: &mut R, inner: f64, outer: f64) -> Vec3 {
    let (a, b) = (inner.powi(3), outer.powi(3));
    let r = (a + rng.random::<f64>() * (b - a)).cbrt();
    // uniform on the unit hemisphere x > 0: x = cos θ uniform in (0, 1]
    let x = 1.0 - rng.random::<f64>();
    let phi = rng.random::<f64>() * TAU;
    let s = (1.0 - x * x).max(0.0).sqrt();
    Vec3::new(x, s * phi.cos(), s * phi.sin()) * r
}

/// Users, target and clutter for one Monte-Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedScenario {
    pub run_index: usize,
    pub scene: SceneSnapshot,
}

fn check_region(config: &ScenarioConfig) -> Result<(f64, f64)> {
    let p = &config.placement;
    if !(p.outer_radius_m > p.inner_radius_m && p.inner_radius_m >= 0.0) {
        return Err(Error::Config(format!(
            "placement region has zero volume (radii {} to {})",
            p.inner_radius_m, p.outer_radius_m
        )));
    }
    Ok((p.inner_radius_m, p.outer_radius_m))
}

fn draw_clutter<R: Rng>(pos_rng: &mut R, phase_rng: &mut R, config: &ScenarioConfig, inner: f64, outer: f64) -> Vec<Scatterer> {
    (0..config.placement.clutter)
        .map(|_| Scatterer {
            position: sample_annulus_point(pos_rng, inner, outer),
            rcs: config.rcs.clutter_m2,
            phase: phase_rng.random::<f64>() * TAU,
        })
        .collect()
}

/// Deterministic placement for run `run_index`.
///
/// Draw order on the placement stream: users, target, clutter.
pub fn sample_scenario(config: &ScenarioConfig, run_index: usize) -> Result<PlacedScenario> {
    let (inner, outer) = check_region(config)?;
    let streams = RngStream::new(config.seed);
    let mut rng = streams.stream(PLACEMENT, run_index as u64);
    let mut phases = streams.stream(CLUTTER_PHASE, run_index as u64);
    let users = (0..config.placement.users)
        .map(|_| sample_annulus_point(&mut rng, inner, outer))
        .collect();
    let target = (config.placement.targets > 0).then(|| Scatterer {
        position: sample_annulus_point(&mut rng, inner, outer),
        rcs: config.rcs.target_m2,
        phase: 0.0,
    });
    let clutter = draw_clutter(&mut rng, &mut phases, config, inner, outer);
    Ok(PlacedScenario {
        run_index,
        scene: SceneSnapshot { users, target, clutter },
    })
}

/// Scenes for statistical-CSI optimization: the realized target and users
/// with `draws` independent clutter fields.
pub fn statistical_scenes(config: &ScenarioConfig, placed: &PlacedScenario, draws: usize) -> Result<Vec<SceneSnapshot>> {
    let (inner, outer) = check_region(config)?;
    let mut rng = RngStream::new(config.seed).stream(STATISTICAL_CSI, placed.run_index as u64);
    Ok((0..draws)
        .map(|_| {
            let mut phase_rng = ChaCha8Rng::seed_from_u64(rng.random());
            let clutter = draw_clutter(&mut rng, &mut phase_rng, config, inner, outer);
            SceneSnapshot {
                users: placed.scene.users.clone(),
                target: placed.scene.target,
                clutter,
            }
        })
        .collect())
}

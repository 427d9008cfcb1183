//! Azimuth and transmit-power sweeps over the three schemes.

use crate::antenna::{ArrayLayout, RotationMode};
use crate::channel::{comm_channel, sensing_response, SensingResponse};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::Vec3;
use crate::optimize::{
    array_rotation_search, broadside, coarse_to_fine_ao, exhaustive_boresight, fd_gradient_ascent,
    ma_position_search, AoInit, Objective, ObjectiveKind, OptResult, SceneSnapshot,
};
use crate::signal::{dbm_to_watts, linear_to_db, mrt_weights, received_power, sensing_scnr, watts_to_dbm, MetricKind, Scheme};

use super::config::{CsiMode, OptimizerMethod, ScenarioConfig, SweepKind, SweepSpec};
use super::output::MetricRow;
use super::placement::{sample_scenario, statistical_scenes, PlacedScenario};

/// Rows plus the placements that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub spec: SweepSpec,
    pub rows: Vec<MetricRow>,
    pub placements: Vec<PlacedScenario>,
}

/// Boresight optimization with the configured method.
pub fn optimize_ras(config: &ScenarioConfig, objective: &Objective, exec: Execution) -> Result<OptResult> {
    let opt = &config.optimizer;
    let n = objective.len();
    if config.array.rotation_mode == RotationMode::ArrayLevel {
        let mut nominal = config.layout()?;
        nominal.rotation_mode = RotationMode::ElementLevel;
        return array_rotation_search(objective, &nominal, &opt.grid, exec);
    }
    match opt.method {
        OptimizerMethod::Ao => coarse_to_fine_ao(objective, &opt.grid, &AoInit::Broadside, opt.ao, exec),
        OptimizerMethod::Gradient => fd_gradient_ascent(objective, &broadside(n), opt.gradient),
        OptimizerMethod::Exhaustive => {
            let all: Vec<usize> = (0..n).collect();
            exhaustive_boresight(objective, &opt.grid, &all, &broadside(n), opt.exhaustive_cap, exec)
        }
    }
}

/// Realized array for `scheme`, optimized on `scenes` for `kind`.
pub fn scheme_layout(
    config: &ScenarioConfig,
    scheme: Scheme,
    kind: ObjectiveKind,
    p_tx: f64,
    scenes: &[SceneSnapshot],
    exec: Execution,
) -> Result<ArrayLayout> {
    let layout = config.layout()?;
    if scheme == Scheme::Fixed {
        return layout.realized();
    }
    let objective = Objective::new(kind, &layout, config.pattern()?, config.carrier_spec()?, p_tx, scenes)?;
    let result = match scheme {
        Scheme::Ras => optimize_ras(config, &objective, exec)?,
        Scheme::Ma => ma_position_search(&objective, &config.segment()?, config.optimizer.ao, exec)?,
        Scheme::Fixed => unreachable!(),
    };
    Ok(objective.layout_with(&result.configs(&objective)))
}

/// MRT power at `user`, dBm.
pub fn received_power_dbm(config: &ScenarioConfig, layout: &ArrayLayout, user: Vec3, p_tx: f64) -> Result<f64> {
    let h = comm_channel(layout, &config.pattern()?, user, &config.carrier_spec()?)?;
    let w = mrt_weights(&h)?;
    Ok(watts_to_dbm(received_power(&h, &w, p_tx)))
}

/// Target SCNR in dB with the configured receive filter.
pub fn scene_scnr_db(config: &ScenarioConfig, layout: &ArrayLayout, scene: &SceneSnapshot, p_tx: f64) -> Result<f64> {
    let pattern = config.pattern()?;
    let carrier = config.carrier_spec()?;
    let t = scene
        .target
        .ok_or_else(|| Error::Precondition("power sweep needs a sensing target".into()))?;
    let target = sensing_response(layout, &pattern, t.position, t.rcs, t.phase, &carrier)?;
    let clutter = scene
        .clutter
        .iter()
        .map(|c| sensing_response(layout, &pattern, c.position, c.rcs, c.phase, &carrier))
        .collect::<Result<Vec<SensingResponse>>>()?;
    let v = sensing_scnr(&target, &clutter, config.receive_filter, p_tx, carrier.noise_power)?;
    Ok(linear_to_db(v))
}

/// User position for azimuth `phi`: zenith measured from +z, azimuth from +x.
pub fn azimuth_user(config: &ScenarioConfig, phi: f64) -> Vec3 {
    let a = &config.azimuth_sweep;
    let (st, ct) = a.user_zenith_rad.sin_cos();
    Vec3::new(st * phi.cos(), st * phi.sin(), ct) * a.user_distance_m
}

fn schemes(config: &ScenarioConfig) -> Vec<Scheme> {
    let mut s = config.schemes.clone();
    s.sort();
    s.dedup();
    s
}

/// Received power versus user azimuth at the configured transmit power.
pub fn run_azimuth_sweep(config: &ScenarioConfig, exec: Execution) -> Result<SweepOutput> {
    config.validate()?;
    let spec = config.azimuth_spec()?;
    let phis = spec.values();
    let p_tx = config.tx_power_w();
    let schemes = schemes(config);
    let per_point = exec.map_range(phis.len(), |i| -> Result<Vec<MetricRow>> {
        let phi = phis[i];
        let scene = SceneSnapshot {
            users: vec![azimuth_user(config, phi)],
            ..Default::default()
        };
        schemes
            .iter()
            .map(|&scheme| {
                let layout = scheme_layout(
                    config,
                    scheme,
                    ObjectiveKind::ReceivedPower,
                    p_tx,
                    std::slice::from_ref(&scene),
                    Execution::Sequential,
                )?;
                Ok(MetricRow {
                    sweep_kind: SweepKind::Azimuth,
                    swept_value: phi,
                    scheme,
                    metric: MetricKind::ReceivedPower,
                    value_db: received_power_dbm(config, &layout, scene.users[0], p_tx)?,
                    seed: config.seed,
                    run_index: Some(0),
                })
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(phis.len() * schemes.len());
    let mut placements = Vec::with_capacity(phis.len());
    for (i, r) in per_point.into_iter().enumerate() {
        rows.extend(r?);
        placements.push(PlacedScenario {
            run_index: i,
            scene: SceneSnapshot {
                users: vec![azimuth_user(config, phis[i])],
                ..Default::default()
            },
        });
    }
    Ok(SweepOutput { spec, rows, placements })
}

/// SCNR of every scheme at every transmit power for one seeded placement.
pub fn power_run(
    config: &ScenarioConfig,
    placed: &PlacedScenario,
    powers_dbm: &[f64],
    schemes: &[Scheme],
    exec: Execution,
) -> Result<Vec<MetricRow>> {
    let scenes = match config.power_sweep.csi {
        CsiMode::Instantaneous => vec![placed.scene.clone()],
        CsiMode::Statistical => statistical_scenes(config, placed, config.optimizer.statistical_draws)?,
    };
    let mut rows = Vec::with_capacity(powers_dbm.len() * schemes.len());
    let mut fixed: Option<ArrayLayout> = None;
    for &p_dbm in powers_dbm {
        let p_tx = dbm_to_watts(p_dbm);
        for &scheme in schemes {
            let layout = match (scheme, &fixed) {
                (Scheme::Fixed, Some(l)) => l.clone(),
                _ => scheme_layout(config, scheme, ObjectiveKind::Scnr, p_tx, &scenes, exec)?,
            };
            let value_db = scene_scnr_db(config, &layout, &placed.scene, p_tx)?;
            if scheme == Scheme::Fixed {
                fixed = Some(layout);
            }
            rows.push(MetricRow {
                sweep_kind: SweepKind::Power,
                swept_value: p_dbm,
                scheme,
                metric: MetricKind::Scnr,
                value_db,
                seed: config.seed,
                run_index: Some(placed.run_index),
            });
        }
    }
    Ok(rows)
}

/// Per-run and mean SCNR versus transmit power over `monte_carlo_runs` placements.
///
/// The mean row is the arithmetic mean of the per-run dB values.
pub fn run_power_sweep(config: &ScenarioConfig, exec: Execution) -> Result<SweepOutput> {
    config.validate()?;
    let spec = config.power_spec()?;
    if config.placement.targets != 1 {
        return Err(Error::Config("power sweep needs exactly one sensing target".into()));
    }
    let powers = spec.values();
    let schemes = schemes(config);
    let runs = spec.monte_carlo_runs;
    let results = exec.map_range(runs, |r| -> Result<(PlacedScenario, Vec<MetricRow>)> {
        let placed = sample_scenario(config, r)?;
        let rows = power_run(config, &placed, &powers, &schemes, Execution::Sequential)?;
        Ok((placed, rows))
    });
    let mut rows = Vec::with_capacity(runs * powers.len() * (schemes.len() + 1));
    let mut placements = Vec::with_capacity(runs);
    for r in results {
        let (p, rs) = r?;
        placements.push(p);
        rows.extend(rs);
    }
    let mut means = Vec::with_capacity(powers.len() * schemes.len());
    for &p in &powers {
        for &scheme in &schemes {
            let vals: Vec<f64> = rows
                .iter()
                .filter(|r| r.swept_value == p && r.scheme == scheme)
                .map(|r| r.value_db)
                .collect();
            means.push(MetricRow {
                sweep_kind: SweepKind::Power,
                swept_value: p,
                scheme,
                metric: MetricKind::Scnr,
                value_db: vals.iter().sum::<f64>() / vals.len() as f64,
                seed: config.seed,
                run_index: None,
            });
        }
    }
    rows.extend(means);
    Ok(SweepOutput { spec, rows, placements })
}

/// Single optimization on run 0 of the configured scenario.
pub fn optimize_scenario(config: &ScenarioConfig, exec: Execution) -> Result<(PlacedScenario, OptResult)> {
    config.validate()?;
    let placed = sample_scenario(config, 0)?;
    let objective = Objective::new(
        config.optimizer.objective,
        &config.layout()?,
        config.pattern()?,
        config.carrier_spec()?,
        config.tx_power_w(),
        std::slice::from_ref(&placed.scene),
    )?;
    let result = optimize_ras(config, &objective, exec)?;
    Ok((placed, result))
}

use crate::antenna::ArrayLayout;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::BoresightOrientation;

use super::ao::improves;
use super::{finish, AngleGrid, ElementConfig, LocalGrid, Objective, OptResult};

fn rotated_configs(nominal: &ArrayLayout, o: BoresightOrientation) -> Result<Vec<ElementConfig>> {
    let l = nominal.clone().with_array_rotation(o).realized()?;
    Ok(l.elements.iter().map(ElementConfig::from).collect())
}

/// Coarse-to-fine search over one rigid rotation of the whole array.
///
/// `nominal` is the unrotated lattice; each candidate orientation turns it
/// (positions and boresights) so that its broadside points along the candidate.
pub fn array_rotation_search(
    objective: &Objective,
    nominal: &ArrayLayout,
    grid: &AngleGrid,
    exec: Execution,
) -> Result<OptResult> {
    grid.validate()?;
    if nominal.len() != objective.len() {
        return Err(Error::Precondition(format!(
            "nominal array has {} elements, objective {}",
            nominal.len(),
            objective.len()
        )));
    }
    let eval = |o: BoresightOrientation| -> f64 {
        rotated_configs(nominal, o).map_or(f64::NEG_INFINITY, |c| objective.evaluate(&c))
    };
    let mut best = BoresightOrientation::BROADSIDE;
    let mut current = eval(best);
    let mut trace = vec![current];
    let mut evaluations = 1u64;
    let mut local = LocalGrid::from_grid(grid);
    for round in 0..=grid.max_rounds {
        if round > 0 {
            local = local.refined(best, grid.refinement_factor);
        }
        let candidates = local.orientations();
        evaluations += candidates.len() as u64;
        if let Some((i, v)) = exec.argmax(candidates.len(), |i| eval(candidates[i])) {
            if improves(v, current, 0.0) {
                best = candidates[i];
                current = v;
            }
        }
        trace.push(current);
    }
    let configs = rotated_configs(nominal, best)?;
    let orientations = configs
        .iter()
        .map(|c| BoresightOrientation::from_direction(c.boresight))
        .collect::<Result<Vec<_>>>()?;
    let positions = configs.iter().map(|c| c.position).collect();
    finish(objective, orientations, Some(positions), current, evaluations, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::{build_upa, RadiationPattern};
    use crate::channel::CarrierSpec;
    use crate::geometry::{boresight_from_angles, Vec3};
    use crate::optimize::{ObjectiveKind, SceneSnapshot};

    #[test]
    fn rotation_points_array_at_user() {
        let carrier = CarrierSpec::with_wavelength(2.4e9, 0.125, 1e-11).unwrap();
        let nominal = build_upa(2, 2, 0.0625, 0.125, BoresightOrientation::BROADSIDE).unwrap();
        let user = boresight_from_angles(0.6, 1.1) * 100.0;
        let scene = SceneSnapshot {
            users: vec![user],
            ..Default::default()
        };
        let obj = Objective::new(ObjectiveKind::ReceivedPower, &nominal, RadiationPattern::default(), carrier, 1.0, &[scene])
            .unwrap();
        let r = array_rotation_search(&obj, &nominal, &AngleGrid::default(), Execution::Sequential).unwrap();
        let b = crate::geometry::boresight_vector(r.orientations[0]);
        assert!(b.angle_to(user) < 0.02);
        assert!(r.objective >= r.trace[0]);
        let pos = r.positions.unwrap();
        // rigid: pairwise distances preserved
        let d = |p: &[Vec3]| p[0].distance(p[3]);
        assert!((d(&pos) - d(&nominal.positions())).abs() < 1e-12);
    }
}

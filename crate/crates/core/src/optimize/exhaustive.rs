use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{boresight_vector, BoresightOrientation};

use super::{configs_from_orientations, finish, AngleGrid, ElementConfig, Objective, OptResult};

pub const DEFAULT_COMBINATION_CAP: u64 = 1_000_000;

/// Exact argmax over the Cartesian product of `grid` for the elements in `tune`.
///
/// Untuned elements keep their `init` orientation. Ties resolve to the
/// lexicographically smallest tuple of (zenith, azimuth) indices, taken in
/// the order the elements appear in `tune`.
pub fn exhaustive_boresight(
    objective: &Objective,
    grid: &AngleGrid,
    tune: &[usize],
    init: &[BoresightOrientation],
    cap: u64,
    exec: Execution,
) -> Result<OptResult> {
    grid.validate()?;
    if init.len() != objective.len() {
        return Err(Error::Precondition(format!(
            "{} initial orientations for {} elements",
            init.len(),
            objective.len()
        )));
    }
    if let Some(bad) = tune.iter().find(|&&n| n >= objective.len()) {
        return Err(Error::Precondition(format!("element index {bad} out of range")));
    }
    if let Some((i, n)) = tune.iter().enumerate().find(|(i, n)| tune[..*i].contains(n)) {
        return Err(Error::Precondition(format!("element {n} listed twice (position {i})")));
    }
    let points = grid.orientations();
    let per = points.len();
    let combinations = (per as f64).powi(tune.len() as i32);
    if combinations > cap as f64 {
        return Err(Error::Capacity { combinations, cap });
    }
    let total = combinations as usize;

    let configs = configs_from_orientations(objective, init);
    // rest = Σ over untuned elements, in element order
    let acc_len = objective.acc_len();
    let mut rest = vec![Complex64::new(0.0, 0.0); acc_len];
    let mut term = vec![Complex64::new(0.0, 0.0); acc_len];
    for (n, cfg) in configs.iter().enumerate() {
        if tune.contains(&n) {
            continue;
        }
        objective.contribution(n, cfg, &mut term);
        for (r, t) in rest.iter_mut().zip(&term) {
            *r += t;
        }
    }
    // table[e][p]: terms of tuned element e at grid point p
    let table: Vec<Vec<Vec<Complex64>>> = tune
        .iter()
        .map(|&n| {
            points
                .iter()
                .map(|o| {
                    let cfg = ElementConfig {
                        position: configs[n].position,
                        boresight: boresight_vector(*o),
                    };
                    let mut t = vec![Complex64::new(0.0, 0.0); acc_len];
                    objective.contribution(n, &cfg, &mut t);
                    t
                })
                .collect()
        })
        .collect();

    let m = tune.len();
    let decode = |mut idx: usize, out: &mut [usize]| {
        for slot in out.iter_mut().rev() {
            *slot = idx % per;
            idx /= per;
        }
    };
    let (best, value) = exec
        .argmax(total, |i| {
            let mut digits = vec![0usize; m];
            decode(i, &mut digits);
            let mut acc = rest.clone();
            for (e, &p) in digits.iter().enumerate() {
                for (a, t) in acc.iter_mut().zip(&table[e][p]) {
                    *a += t;
                }
            }
            objective.value_from_acc(&acc)
        })
        .ok_or_else(|| Error::Config("empty search space".into()))?;

    let mut digits = vec![0usize; m];
    decode(best, &mut digits);
    let mut orientations = init.to_vec();
    for (e, &n) in tune.iter().enumerate() {
        orientations[n] = points[digits[e]];
    }
    finish(objective, orientations, None, value, total as u64, vec![value])
}

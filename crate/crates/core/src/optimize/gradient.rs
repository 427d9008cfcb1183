use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{boresight_from_angles, BoresightOrientation, Vec3};

use super::{finish, Objective, OptResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GradientOptions {
    /// Central-difference step (rad).
    pub fd_step: f64,
    /// First trial step along the relative gradient.
    pub initial_step: f64,
    pub max_step: f64,
    pub max_halvings: usize,
    /// Stop when the relative gradient's ∞-norm falls below this.
    pub gradient_tol: f64,
    /// Stop when an accepted step gains less than this fraction.
    pub improvement_tol: f64,
    pub max_iterations: usize,
}

impl Default for GradientOptions {
    fn default() -> Self {
        Self {
            fd_step: 1e-5,
            initial_step: 0.1,
            max_step: 1.0,
            max_halvings: 30,
            gradient_tol: 1e-7,
            improvement_tol: 1e-12,
            max_iterations: 500,
        }
    }
}

/// Tilt coordinates `(θ cos φ, θ sin φ)`: smooth through broadside, where
/// the raw angle pair is singular.
fn to_tilt(o: &BoresightOrientation) -> [f64; 2] {
    let (s, c) = o.azimuth().sin_cos();
    [o.zenith() * c, o.zenith() * s]
}

fn tilt_boresight(t: [f64; 2]) -> Vec3 {
    let r = t[0].hypot(t[1]);
    if r == 0.0 {
        return Vec3::X;
    }
    boresight_from_angles(r, t[1].atan2(t[0]))
}

/// Keeps the zenith within `[0, π/2]`; azimuth wraps implicitly.
fn project(t: [f64; 2]) -> [f64; 2] {
    let r = t[0].hypot(t[1]);
    if r > FRAC_PI_2 {
        let s = FRAC_PI_2 / r;
        [t[0] * s, t[1] * s]
    } else {
        t
    }
}

fn to_orientation(t: [f64; 2]) -> BoresightOrientation {
    let r = t[0].hypot(t[1]).min(FRAC_PI_2);
    let a = if r == 0.0 { 0.0 } else { t[1].atan2(t[0]) };
    let a = if a >= PI { -PI } else { a };
    BoresightOrientation::new(r, a).expect("projected tilt is a valid orientation")
}

/// Projected gradient ascent with central finite differences and backtracking.
///
/// The gradient is taken relative to the objective value (the gradient of
/// its logarithm) so the tolerances are independent of the power scale.
pub fn fd_gradient_ascent(
    objective: &Objective,
    init: &[BoresightOrientation],
    options: GradientOptions,
) -> Result<OptResult> {
    let n = objective.len();
    if init.len() != n {
        return Err(Error::Precondition(format!("{} initial orientations for {n} elements", init.len())));
    }
    let eval = |x: &[[f64; 2]]| -> f64 {
        let b: Vec<Vec3> = x.iter().map(|t| tilt_boresight(*t)).collect();
        objective.evaluate_boresights(&b)
    };
    let mut x: Vec<[f64; 2]> = init.iter().map(to_tilt).collect();
    let mut f = eval(&x);
    if !f.is_finite() {
        return Err(Error::Domain(format!("objective not finite at the initial point ({f})")));
    }
    let mut evaluations = 1u64;
    let mut trace = vec![f];
    let mut step = options.initial_step;
    let h = options.fd_step;

    for _ in 0..options.max_iterations {
        if !(f > 0.0) {
            break;
        }
        let mut grad = vec![[0.0f64; 2]; n];
        let mut probe = x.clone();
        for e in 0..n {
            for k in 0..2 {
                let orig = x[e][k];
                probe[e][k] = orig + h;
                let up = eval(&probe);
                probe[e][k] = orig - h;
                let down = eval(&probe);
                probe[e][k] = orig;
                grad[e][k] = (up - down) / (2.0 * h * f);
            }
        }
        evaluations += 4 * n as u64;
        let gmax = grad.iter().flat_map(|g| g.iter()).fold(0.0f64, |m, g| m.max(g.abs()));
        if gmax < options.gradient_tol {
            break;
        }
        let mut accepted = None;
        let mut s = step;
        for _ in 0..=options.max_halvings {
            let trial: Vec<[f64; 2]> = x
                .iter()
                .zip(&grad)
                .map(|(t, g)| project([t[0] + s * g[0], t[1] + s * g[1]]))
                .collect();
            let ft = eval(&trial);
            evaluations += 1;
            if ft > f {
                accepted = Some((trial, ft));
                break;
            }
            s *= 0.5;
        }
        let Some((trial, ft)) = accepted else {
            break;
        };
        let gain = (ft - f) / f.abs();
        x = trial;
        f = ft;
        trace.push(f);
        step = (s * 2.0).min(options.max_step);
        if gain < options.improvement_tol {
            break;
        }
    }
    let orientations = x.iter().map(|t| to_orientation(*t)).collect();
    finish(objective, orientations, None, f, evaluations, trace)
}

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, BoresightOrientation};

/// Discrete rotation levels for boresight search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleGrid {
    pub zenith_levels: Vec<f64>,
    pub azimuth_levels: Vec<f64>,
    pub refinement_factor: usize,
    pub max_rounds: usize,
}

impl Default for AngleGrid {
    /// 7 zenith levels (π/12 apart) × 16 azimuth levels, refined 3×3 times.
    fn default() -> Self {
        Self::uniform(7, 16, 3, 3)
    }
}

impl AngleGrid {
    /// `zenith_count` levels spanning `[0, π/2]` and `azimuth_count` levels from −π.
    pub fn uniform(zenith_count: usize, azimuth_count: usize, refinement_factor: usize, max_rounds: usize) -> Self {
        let zenith_levels = if zenith_count <= 1 {
            vec![0.0]
        } else {
            (0..zenith_count)
                .map(|i| FRAC_PI_2 * i as f64 / (zenith_count - 1) as f64)
                .collect()
        };
        let azimuth_levels = (0..azimuth_count.max(1))
            .map(|i| -PI + TAU * i as f64 / azimuth_count.max(1) as f64)
            .collect();
        Self {
            zenith_levels,
            azimuth_levels,
            refinement_factor,
            max_rounds,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.zenith_levels.is_empty() || self.azimuth_levels.is_empty() {
            return Err(Error::Config("angle grid must not be empty".into()));
        }
        if self.refinement_factor < 2 {
            return Err(Error::Config(format!(
                "refinement factor must be at least 2, got {}",
                self.refinement_factor
            )));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&self.zenith_levels) || !increasing(&self.azimuth_levels) {
            return Err(Error::Config("grid levels must be strictly increasing".into()));
        }
        if self.zenith_levels.iter().any(|z| !(0.0..=FRAC_PI_2).contains(z)) {
            return Err(Error::Config("zenith levels must lie in [0, pi/2]".into()));
        }
        if self.azimuth_levels.iter().any(|a| !(-PI..PI).contains(a)) {
            return Err(Error::Config("azimuth levels must lie in [-pi, pi)".into()));
        }
        Ok(())
    }

    /// Number of (zenith, azimuth) points.
    pub fn len(&self) -> usize {
        self.zenith_levels.len() * self.azimuth_levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in lexicographic (zenith index, azimuth index) order.
    pub fn orientations(&self) -> Vec<BoresightOrientation> {
        LocalGrid::from_grid(self).orientations()
    }
}

/// Per-element grid that shrinks around the incumbent on refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGrid {
    pub zeniths: Vec<f64>,
    pub azimuths: Vec<f64>,
    zenith_step: f64,
    azimuth_step: f64,
}

impl LocalGrid {
    pub fn from_grid(g: &AngleGrid) -> Self {
        let zenith_step = g
            .zenith_levels
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max);
        let a = &g.azimuth_levels;
        let azimuth_step = if a.len() < 2 {
            0.0
        } else {
            let wrap_gap = a[0] + TAU - a[a.len() - 1];
            a.windows(2).map(|w| w[1] - w[0]).fold(wrap_gap, f64::max)
        };
        Self {
            zeniths: g.zenith_levels.clone(),
            azimuths: g.azimuth_levels.clone(),
            zenith_step,
            azimuth_step,
        }
    }

    pub fn len(&self) -> usize {
        self.zeniths.len() * self.azimuths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn orientations(&self) -> Vec<BoresightOrientation> {
        let mut out = Vec::with_capacity(self.len());
        for &z in &self.zeniths {
            for &a in &self.azimuths {
                out.push(BoresightOrientation::new(z, a).expect("grid levels validated"));
            }
        }
        out
    }

    /// Levels `incumbent ± k·step/factor` for `|k| < factor`; zenith levels outside `[0, π/2]` are dropped.
    ///
    /// Azimuths are only narrowed once the incumbent is at least one zenith
    /// step away from broadside.
    pub fn refined(&self, incumbent: BoresightOrientation, factor: usize) -> LocalGrid {
        let f = factor as f64;
        let zs = self.zenith_step / f;
        let az = self.azimuth_step / f;
        let span = factor as i64 - 1;
        let mut zeniths: Vec<f64> = if zs > 0.0 {
            (-span..=span)
                .map(|k| incumbent.zenith() + k as f64 * zs)
                .filter(|z| (0.0..=FRAC_PI_2).contains(z))
                .collect()
        } else {
            vec![incumbent.zenith()]
        };
        zeniths.dedup();
        // near the pole every azimuth is close in angle, so keep the full circle
        if incumbent.zenith() < self.zenith_step {
            return LocalGrid {
                zeniths,
                azimuths: self.azimuths.clone(),
                zenith_step: zs,
                azimuth_step: self.azimuth_step,
            };
        }
        let mut azimuths: Vec<f64> = if az > 0.0 {
            (-span..=span)
                .map(|k| wrap_angle(incumbent.azimuth() + k as f64 * az))
                .collect()
        } else {
            vec![incumbent.azimuth()]
        };
        azimuths.sort_by(f64::total_cmp);
        azimuths.dedup();
        LocalGrid {
            zeniths,
            azimuths,
            zenith_step: zs,
            azimuth_step: az,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = AngleGrid::default();
        g.validate().unwrap();
        assert_eq!(g.zenith_levels.len(), 7);
        assert_eq!(g.azimuth_levels.len(), 16);
        assert_eq!(g.len(), 112);
        assert!((g.zenith_levels[1] - PI / 12.0).abs() < 1e-15);
        assert_eq!(g.azimuth_levels[0], -PI);
        assert_eq!(g.azimuth_levels[8], 0.0);
    }

    #[test]
    fn invalid_grids_rejected() {
        let mut g = AngleGrid::default();
        g.refinement_factor = 1;
        assert!(g.validate().is_err());
        let mut g = AngleGrid::default();
        g.zenith_levels = vec![0.2, 0.1];
        assert!(g.validate().is_err());
        let mut g = AngleGrid::default();
        g.azimuth_levels.clear();
        assert!(g.validate().is_err());
        let mut g = AngleGrid::default();
        g.zenith_levels.push(2.0);
        assert!(g.validate().is_err());
    }

    #[test]
    fn orientations_are_lexicographic() {
        let g = AngleGrid::uniform(3, 2, 2, 0);
        let o = g.orientations();
        assert_eq!(o.len(), 6);
        assert_eq!(o[0].zenith(), 0.0);
        assert_eq!(o[1].zenith(), 0.0);
        assert_eq!(o[2].zenith(), g.zenith_levels[1]);
        assert_eq!(o[1].azimuth(), g.azimuth_levels[1]);
    }

    #[test]
    fn refinement_shrinks() {
        let g = AngleGrid::default();
        let l = LocalGrid::from_grid(&g);
        let inc = BoresightOrientation::new(PI / 6.0, 0.0).unwrap();
        let r = l.refined(inc, 3);
        assert_eq!(r.zeniths.len(), 5);
        assert_eq!(r.azimuths.len(), 5);
        assert!(r.zeniths.contains(&(PI / 6.0)));
        assert!((r.zeniths[1] - r.zeniths[0] - PI / 36.0).abs() < 1e-12);
        // near the boundary levels are dropped, not clamped
        let r = l.refined(BoresightOrientation::BROADSIDE, 3);
        assert_eq!(r.zeniths.len(), 3);
        assert_eq!(r.zeniths[0], 0.0);
    }
}

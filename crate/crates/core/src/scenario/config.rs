//! JSON scenario configuration.
//!
//! Every field has a default; unknown keys are rejected. The defaults
//! describe a 2.4 GHz (λ = 0.125 m) 4×4 half-wavelength UPA, −80 dBm noise
//! and users/targets/clutter in a 30–150 m annulus.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::antenna::{build_upa, ArrayLayout, RadiationPattern, RotationMode};
use crate::channel::CarrierSpec;
use crate::error::{Error, Result};
use crate::geometry::BoresightOrientation;
use crate::optimize::{AngleGrid, AoOptions, GradientOptions, MaSegment, ObjectiveKind, DEFAULT_COMBINATION_CAP};
use crate::signal::{dbm_to_watts, ReceiveFilter, Scheme};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CarrierConfig {
    pub frequency_hz: f64,
    /// Authoritative when set; otherwise `c / frequency`.
    pub wavelength_m: Option<f64>,
    pub noise_power_dbm: f64,
}

impl Default for CarrierConfig {
    fn default() -> Self {
        Self {
            frequency_hz: 2.4e9,
            wavelength_m: Some(0.125),
            noise_power_dbm: -80.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArrayConfig {
    pub rows: usize,
    pub cols: usize,
    /// Element spacing; half a wavelength when absent.
    pub spacing_m: Option<f64>,
    pub rotation_mode: RotationMode,
    pub array_rotation: BoresightOrientation,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self {
            rows: 4,
            cols: 4,
            spacing_m: None,
            rotation_mode: RotationMode::ElementLevel,
            array_rotation: BoresightOrientation::BROADSIDE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PatternConfig {
    pub peak_gain: f64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self { peak_gain: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlacementConfig {
    pub inner_radius_m: f64,
    pub outer_radius_m: f64,
    pub users: usize,
    pub targets: usize,
    pub clutter: usize,
}

impl Default for PlacementConfig {
    fn default() -> Self {
        Self {
            inner_radius_m: 30.0,
            outer_radius_m: 150.0,
            users: 1,
            targets: 1,
            clutter: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RcsConfig {
    pub target_m2: f64,
    pub clutter_m2: f64,
}

impl Default for RcsConfig {
    fn default() -> Self {
        Self {
            target_m2: 1.0,
            clutter_m2: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerMethod {
    /// Coarse-to-fine alternating optimization.
    Ao,
    /// Finite-difference gradient ascent from broadside.
    Gradient,
    Exhaustive,
}

/// Channel knowledge used when optimizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsiMode {
    /// Optimize on the realized placement.
    Instantaneous,
    /// Optimize the mean objective over drawn clutter fields; the target
    /// position is the realized one.
    Statistical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerConfig {
    pub method: OptimizerMethod,
    /// Objective for the `optimize` subcommand.
    pub objective: ObjectiveKind,
    pub grid: AngleGrid,
    pub statistical_draws: usize,
    pub exhaustive_cap: u64,
    pub ao: AoOptions,
    pub gradient: GradientOptions,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: OptimizerMethod::Ao,
            objective: ObjectiveKind::Scnr,
            grid: AngleGrid::default(),
            statistical_draws: 64,
            exhaustive_cap: DEFAULT_COMBINATION_CAP,
            ao: AoOptions::default(),
            gradient: GradientOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MovableConfig {
    pub half_width_wavelengths: f64,
    pub step_wavelengths: f64,
    pub min_spacing_wavelengths: f64,
}

impl Default for MovableConfig {
    fn default() -> Self {
        Self {
            half_width_wavelengths: 2.0,
            step_wavelengths: 0.125,
            min_spacing_wavelengths: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AzimuthSweepConfig {
    pub start_rad: f64,
    pub stop_rad: f64,
    pub step_rad: f64,
    pub user_distance_m: f64,
    /// User zenith measured from the vertical (+z); π/2 is the horizon.
    pub user_zenith_rad: f64,
}

impl Default for AzimuthSweepConfig {
    fn default() -> Self {
        Self {
            start_rad: -FRAC_PI_3,
            stop_rad: FRAC_PI_3,
            step_rad: PI / 36.0,
            user_distance_m: 100.0,
            user_zenith_rad: FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerSweepConfig {
    pub start_dbm: f64,
    pub stop_dbm: f64,
    pub step_dbm: f64,
    pub csi: CsiMode,
}

impl Default for PowerSweepConfig {
    fn default() -> Self {
        Self {
            start_dbm: 0.0,
            stop_dbm: 30.0,
            step_dbm: 5.0,
            csi: CsiMode::Statistical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub carrier: CarrierConfig,
    pub array: ArrayConfig,
    pub pattern: PatternConfig,
    pub placement: PlacementConfig,
    pub rcs: RcsConfig,
    /// Transmit power for single-power runs (azimuth sweep, `optimize`).
    pub tx_power_dbm: f64,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    pub optimizer: OptimizerConfig,
    pub movable: MovableConfig,
    pub azimuth_sweep: AzimuthSweepConfig,
    pub power_sweep: PowerSweepConfig,
    pub monte_carlo_runs: usize,
    pub receive_filter: ReceiveFilter,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            carrier: CarrierConfig::default(),
            array: ArrayConfig::default(),
            pattern: PatternConfig::default(),
            placement: PlacementConfig::default(),
            rcs: RcsConfig::default(),
            tx_power_dbm: 30.0,
            seed: 2025,
            schemes: Scheme::ALL.to_vec(),
            optimizer: OptimizerConfig::default(),
            movable: MovableConfig::default(),
            azimuth_sweep: AzimuthSweepConfig::default(),
            power_sweep: PowerSweepConfig::default(),
            monte_carlo_runs: 100,
            receive_filter: ReceiveFilter::Matched,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Fills derived fields (wavelength, spacing) so the echo is self-contained.
    pub fn resolved(mut self) -> Result<Self> {
        let carrier = self.carrier_spec()?;
        self.carrier.wavelength_m = Some(carrier.wavelength);
        self.array.spacing_m = Some(self.array.spacing_m.unwrap_or(carrier.wavelength / 2.0));
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.carrier_spec()?;
        self.layout()?;
        RadiationPattern::new(self.pattern.peak_gain)?;
        let p = &self.placement;
        if !(p.inner_radius_m >= 0.0 && p.inner_radius_m < p.outer_radius_m && p.outer_radius_m.is_finite()) {
            return Err(Error::Config(format!(
                "annulus needs 0 <= inner < outer radius, got {} and {}",
                p.inner_radius_m, p.outer_radius_m
            )));
        }
        if p.targets > 1 {
            return Err(Error::Config(format!("at most one sensing target is supported, got {}", p.targets)));
        }
        if p.users > self.array.rows * self.array.cols {
            return Err(Error::Config(format!(
                "{} users exceed {} elements for zero-forcing",
                p.users,
                self.array.rows * self.array.cols
            )));
        }
        if !(self.rcs.target_m2 >= 0.0) || !(self.rcs.clutter_m2 >= 0.0) {
            return Err(Error::Config("radar cross-sections must be non-negative".into()));
        }
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::Config("tx_power_dbm must be finite".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("scheme list is empty".into()));
        }
        self.optimizer.grid.validate()?;
        if self.optimizer.statistical_draws == 0 {
            return Err(Error::Config("statistical_draws must be positive".into()));
        }
        let m = &self.movable;
        if !(m.half_width_wavelengths >= 0.0 && m.step_wavelengths > 0.0 && m.min_spacing_wavelengths >= 0.0) {
            return Err(Error::Config("movable-antenna segment parameters out of range".into()));
        }
        self.azimuth_spec()?;
        self.power_spec()?;
        if !(self.azimuth_sweep.user_distance_m > 0.0) {
            return Err(Error::Config("azimuth sweep user distance must be positive".into()));
        }
        if self.monte_carlo_runs == 0 {
            return Err(Error::Config("monte_carlo_runs must be positive".into()));
        }
        Ok(())
    }

    pub fn carrier_spec(&self) -> Result<CarrierSpec> {
        let c = &self.carrier;
        let noise = dbm_to_watts(c.noise_power_dbm);
        match c.wavelength_m {
            Some(l) => CarrierSpec::with_wavelength(c.frequency_hz, l, noise),
            None => CarrierSpec::from_frequency(c.frequency_hz, noise),
        }
    }

    pub fn pattern(&self) -> Result<RadiationPattern> {
        RadiationPattern::new(self.pattern.peak_gain)
    }

    /// Array as configured (array-level layouts not yet rotated).
    pub fn layout(&self) -> Result<ArrayLayout> {
        let carrier = self.carrier_spec()?;
        let spacing = self.array.spacing_m.unwrap_or(carrier.wavelength / 2.0);
        let layout = build_upa(
            self.array.rows,
            self.array.cols,
            spacing,
            carrier.wavelength,
            BoresightOrientation::BROADSIDE,
        )?;
        Ok(match self.array.rotation_mode {
            RotationMode::ArrayLevel => layout.with_array_rotation(self.array.array_rotation),
            RotationMode::ElementLevel => layout,
        })
    }

    pub fn segment(&self) -> Result<MaSegment> {
        let l = self.carrier_spec()?.wavelength;
        Ok(MaSegment {
            half_width: self.movable.half_width_wavelengths * l,
            step: self.movable.step_wavelengths * l,
            min_spacing: self.movable.min_spacing_wavelengths * l,
        })
    }

    pub fn tx_power_w(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }

    pub fn azimuth_spec(&self) -> Result<SweepSpec> {
        let a = &self.azimuth_sweep;
        let spec = SweepSpec {
            kind: SweepKind::Azimuth,
            start: a.start_rad,
            stop: a.stop_rad,
            step: a.step_rad,
            monte_carlo_runs: 1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn power_spec(&self) -> Result<SweepSpec> {
        let p = &self.power_sweep;
        let spec = SweepSpec {
            kind: SweepKind::Power,
            start: p.start_dbm,
            stop: p.stop_dbm,
            step: p.step_dbm,
            monte_carlo_runs: self.monte_carlo_runs,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Azimuth,
    Power,
}

impl SweepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepKind::Azimuth => "azimuth",
            SweepKind::Power => "power",
        }
    }
}

/// A swept variable: radians for azimuth, dBm for power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub monte_carlo_runs: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) {
            return Err(Error::Config(format!("sweep step must be positive, got {}", self.step)));
        }
        if !(self.start < self.stop) {
            return Err(Error::Config(format!(
                "sweep start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.kind == SweepKind::Azimuth && (self.start < -FRAC_PI_2 || self.stop > FRAC_PI_2) {
            return Err(Error::Config("azimuth sweep must stay within [-pi/2, pi/2]".into()));
        }
        if self.monte_carlo_runs == 0 {
            return Err(Error::Config("monte_carlo_runs must be positive".into()));
        }
        Ok(())
    }

    /// Inclusive grid `start + (stop − start)·i/n`, `n = round((stop − start)/step)`.
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let n = (span / self.step).round().max(1.0) as usize;
        (0..=n).map(|i| self.start + span * (i as f64 / n as f64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setup() {
        let c = ScenarioConfig::default().resolved().unwrap();
        let carrier = c.carrier_spec().unwrap();
        assert_eq!(carrier.wavelength, 0.125);
        assert!((carrier.noise_power - 1e-11).abs() < 1e-24);
        assert_eq!(c.array.spacing_m, Some(0.0625));
        assert_eq!(c.layout().unwrap().len(), 16);
        assert_eq!(c.placement.inner_radius_m, 30.0);
        assert_eq!(c.placement.outer_radius_m, 150.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(ScenarioConfig::from_json(r#"{"sede": 3}"#), Err(Error::Config(_))));
        assert!(matches!(
            ScenarioConfig::from_json(r#"{"carrier": {"frequncy_hz": 1e9}}"#),
            Err(Error::Config(_))
        ));
        let c = ScenarioConfig::from_json(r#"{"seed": 3, "array": {"rows": 2}}"#).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.array.rows, 2);
        assert_eq!(c.array.cols, 4);
    }

    #[test]
    fn invalid_values_rejected() {
        for bad in [
            r#"{"placement": {"inner_radius_m": 150, "outer_radius_m": 30}}"#,
            r#"{"array": {"spacing_m": 0.01}}"#,
            r#"{"power_sweep": {"step_dbm": 0}}"#,
            r#"{"azimuth_sweep": {"start_rad": -2.0}}"#,
            r#"{"placement": {"users": 17}}"#,
            r#"{"array": {"array_rotation": {"zenith": 2.0, "azimuth": 0}}}"#,
            r#"{"monte_carlo_runs": 0}"#,
        ] {
            assert!(ScenarioConfig::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_values_hit_endpoints_and_zero() {
        let c = ScenarioConfig::default();
        let a = c.azimuth_spec().unwrap().values();
        assert_eq!(a.len(), 25);
        assert_eq!(a[0], -FRAC_PI_3);
        assert_eq!(a[12], 0.0);
        assert!((a[24] - FRAC_PI_3).abs() < 1e-15);
        let p = c.power_spec().unwrap().values();
        assert_eq!(p, vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
    }

    #[test]
    fn json_round_trip() {
        let c = ScenarioConfig::default().resolved().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ScenarioConfig::from_json(&text).unwrap(), c);
    }
}

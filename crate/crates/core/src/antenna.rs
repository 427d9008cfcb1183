//! Element radiation pattern, UPA construction and rotation modes.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{boresight_vector, rotation_from_angles, BoresightOrientation, RotationMatrix, Vec3};

/// Cosine front-lobe pattern `G0 cos(ε)`, zero behind the element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationPattern {
    peak_gain: f64,
}

impl Default for RadiationPattern {
    /// `G0 = 4` normalizes the cosine lobe to 4π over the sphere.
    fn default() -> Self {
        Self { peak_gain: 4.0 }
    }
}

impl RadiationPattern {
    pub fn new(peak_gain: f64) -> Result<Self> {
        if !(peak_gain > 0.0 && peak_gain.is_finite()) {
            return Err(Error::Config(format!(
                "peak gain must be positive and finite, got {peak_gain}"
            )));
        }
        Ok(Self { peak_gain })
    }

    pub fn peak_gain(&self) -> f64 {
        self.peak_gain
    }

    /// Linear power gain at off-boresight angle `epsilon` in `[0, π]`.
    pub fn effective_gain(&self, epsilon: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&epsilon) {
            return Err(Error::Domain(format!("incidence angle {epsilon} outside [0, pi]")));
        }
        if epsilon >= FRAC_PI_2 {
            return Ok(0.0);
        }
        Ok(self.peak_gain * epsilon.cos())
    }

    /// Gain from `cos ε` directly (the boresight–direction dot product).
    #[inline]
    pub fn gain_from_cosine(&self, cos_epsilon: f64) -> f64 {
        if cos_epsilon > 0.0 {
            self.peak_gain * cos_epsilon.min(1.0)
        } else {
            0.0
        }
    }
}

/// Wrapper so `effective_gain` reads like the free function in formulas.
pub fn effective_gain(pattern: &RadiationPattern, epsilon: f64) -> Result<f64> {
    pattern.effective_gain(epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaElement {
    pub position: Vec3,
    /// Unit pointing direction in the global frame.
    pub boresight: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationMode {
    #[default]
    ElementLevel,
    ArrayLevel,
}

/// Rectangular array of directional elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayLayout {
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
    /// Row-major.
    pub elements: Vec<AntennaElement>,
    pub rotation_mode: RotationMode,
    pub array_rotation: BoresightOrientation,
    /// Phase centre used as the reference distance for echo amplitudes.
    pub reference_point: Vec3,
}

/// Centred `rows × cols` lattice in the y-z plane; rows along z, columns along y.
pub fn build_upa(
    rows: usize,
    cols: usize,
    spacing: f64,
    wavelength: f64,
    default_orientation: BoresightOrientation,
) -> Result<ArrayLayout> {
    if rows == 0 || cols == 0 {
        return Err(Error::Config(format!("array must have at least one element, got {rows}x{cols}")));
    }
    if !(wavelength > 0.0) {
        return Err(Error::Config(format!("wavelength must be positive, got {wavelength}")));
    }
    // relative slack so that spacing = λ/2 stated in decimal passes
    if !(spacing >= wavelength / 2.0 * (1.0 - 1e-12)) {
        return Err(Error::Config(format!(
            "element spacing {spacing} m below half wavelength {} m",
            wavelength / 2.0
        )));
    }
    let boresight = boresight_vector(default_orientation);
    let r0 = (rows as f64 - 1.0) / 2.0;
    let c0 = (cols as f64 - 1.0) / 2.0;
    let elements = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .map(|(r, c)| AntennaElement {
            position: Vec3::new(0.0, (c as f64 - c0) * spacing, (r as f64 - r0) * spacing),
            boresight,
        })
        .collect();
    Ok(ArrayLayout {
        rows,
        cols,
        spacing,
        elements,
        rotation_mode: RotationMode::ElementLevel,
        array_rotation: BoresightOrientation::BROADSIDE,
        reference_point: Vec3::ZERO,
    })
}

impl ArrayLayout {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn with_array_rotation(mut self, rotation: BoresightOrientation) -> Self {
        self.rotation_mode = RotationMode::ArrayLevel;
        self.array_rotation = rotation;
        self
    }

    /// Points every element according to `orientations` (global frame).
    pub fn with_orientations(mut self, orientations: &[BoresightOrientation]) -> Result<Self> {
        if orientations.len() != self.elements.len() {
            return Err(Error::Precondition(format!(
                "{} orientations for {} elements",
                orientations.len(),
                self.elements.len()
            )));
        }
        for (e, o) in self.elements.iter_mut().zip(orientations) {
            e.boresight = boresight_vector(*o);
        }
        Ok(self)
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.elements.iter().map(|e| e.position).collect()
    }

    pub fn centroid(&self) -> Vec3 {
        let n = self.elements.len() as f64;
        self.elements
            .iter()
            .fold(Vec3::ZERO, |acc, e| acc + e.position)
            * (1.0 / n)
    }

    /// Rigidly rotates the whole array by its `array_rotation`.
    ///
    /// The result carries the rotated geometry and is in element-level mode,
    /// so further steering acts on individual elements.
    pub fn apply_array_rotation(&self) -> Result<ArrayLayout> {
        if self.rotation_mode != RotationMode::ArrayLevel {
            return Err(Error::Mode("array rotation requested on an element-level layout".into()));
        }
        let r = rotation_from_angles(self.array_rotation);
        let boresight = r.apply(Vec3::X);
        let mut out = self.transformed(&r);
        for e in &mut out.elements {
            e.boresight = boresight;
        }
        out.rotation_mode = RotationMode::ElementLevel;
        Ok(out)
    }

    /// The same array after an arbitrary rigid rotation of positions and boresights.
    pub fn transformed(&self, r: &RotationMatrix) -> ArrayLayout {
        let mut out = self.clone();
        for e in &mut out.elements {
            e.position = r.apply(e.position);
            e.boresight = r.apply(e.boresight);
        }
        out.reference_point = r.apply(self.reference_point);
        out
    }

    /// Physical layout: array-level layouts are rotated, others returned as is.
    pub fn realized(&self) -> Result<ArrayLayout> {
        match self.rotation_mode {
            RotationMode::ArrayLevel => self.apply_array_rotation(),
            RotationMode::ElementLevel => Ok(self.clone()),
        }
    }
}

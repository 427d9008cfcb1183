//! Line-of-sight channels and two-way echo responses.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antenna::{ArrayLayout, RadiationPattern};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Largest relative mismatch tolerated between an explicit wavelength and `c/f`.
const WAVELENGTH_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierSpec {
    pub frequency: f64,
    pub wavelength: f64,
    /// Receiver noise power in watts.
    pub noise_power: f64,
}

impl CarrierSpec {
    pub fn from_frequency(frequency: f64, noise_power: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::Config(format!("carrier frequency must be positive, got {frequency}")));
        }
        Self::with_wavelength(frequency, SPEED_OF_LIGHT / frequency, noise_power)
    }

    /// Explicit wavelength, authoritative over `c/f` (accepts rounded pairs such as 2.4 GHz / 0.125 m).
    pub fn with_wavelength(frequency: f64, wavelength: f64, noise_power: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::Config(format!("carrier frequency must be positive, got {frequency}")));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::Config(format!("wavelength must be positive, got {wavelength}")));
        }
        let nominal = SPEED_OF_LIGHT / frequency;
        if ((wavelength - nominal) / nominal).abs() > WAVELENGTH_SLACK {
            return Err(Error::Config(format!(
                "wavelength {wavelength} m inconsistent with {frequency} Hz (c/f = {nominal} m)"
            )));
        }
        if !(noise_power > 0.0 && noise_power.is_finite()) {
            return Err(Error::Config(format!("noise power must be positive, got {noise_power}")));
        }
        Ok(Self {
            frequency,
            wavelength,
            noise_power,
        })
    }

    #[inline]
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }
}

/// Per-element complex channel; the received signal for weights `w` is `Σ h_n w_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelVector(pub Vec<Complex64>);

impl ChannelVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|h| h.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Bilinear response `hᵀw`.
    pub fn response(&self, w: &[Complex64]) -> Complex64 {
        self.0.iter().zip(w).map(|(h, w)| h * w).sum()
    }
}

/// Monostatic echo of one scatterer: `A = α a_rx a_txᵀ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensingResponse {
    pub a_tx: Vec<Complex64>,
    pub a_rx: Vec<Complex64>,
    pub alpha: Complex64,
}

impl SensingResponse {
    /// `A w`.
    pub fn apply(&self, w: &[Complex64]) -> Vec<Complex64> {
        let s: Complex64 = self.a_tx.iter().zip(w).map(|(a, w)| a * w).sum();
        let s = self.alpha * s;
        self.a_rx.iter().map(|a| a * s).collect()
    }

    /// `vᴴ A w`.
    pub fn filtered(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        let tx: Complex64 = self.a_tx.iter().zip(w).map(|(a, w)| a * w).sum();
        let rx: Complex64 = v.iter().zip(&self.a_rx).map(|(v, a)| v.conj() * a).sum();
        self.alpha * rx * tx
    }
}

/// One-way free-space voltage attenuation `λ / (4π d)`.
pub fn free_space_amplitude(distance: f64, wavelength: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {distance}")));
    }
    Ok(wavelength / (4.0 * PI * distance))
}

/// Element gain and phase toward `point`: `sqrt(G(ε)) e^{-j k d}`, plus the distance.
#[inline]
pub fn element_steering(
    pattern: &RadiationPattern,
    position: Vec3,
    boresight: Vec3,
    point: Vec3,
    wavenumber: f64,
) -> Option<(Complex64, f64)> {
    let offset = point - position;
    let d = offset.norm();
    if !(d > 0.0) {
        return None;
    }
    let cos_eps = boresight.dot(offset) / d;
    let amp = pattern.gain_from_cosine(cos_eps).sqrt();
    Some((Complex64::from_polar(amp, -wavenumber * d), d))
}

fn colocated(point: Vec3) -> Error {
    Error::Domain(format!(
        "point ({}, {}, {}) coincides with an array element",
        point.x, point.y, point.z
    ))
}

/// Downlink channel from every element to an isotropic user.
pub fn comm_channel(
    layout: &ArrayLayout,
    pattern: &RadiationPattern,
    user: Vec3,
    carrier: &CarrierSpec,
) -> Result<ChannelVector> {
    let k = carrier.wavenumber();
    layout
        .elements
        .iter()
        .map(|e| {
            let (a, d) =
                element_steering(pattern, e.position, e.boresight, user, k).ok_or_else(|| colocated(user))?;
            Ok(a * free_space_amplitude(d, carrier.wavelength)?)
        })
        .collect::<Result<Vec<_>>>()
        .map(ChannelVector)
}

/// Two-way point-scatterer amplitude `sqrt(σ/4π) λ / (4π d0²) e^{jψ}`.
pub fn echo_amplitude(rcs: f64, d0: f64, wavelength: f64, phase: f64) -> Complex64 {
    let mag = (rcs / (4.0 * PI)).sqrt() * wavelength / (4.0 * PI * d0 * d0);
    Complex64::from_polar(mag, phase)
}

/// Echo of a point scatterer with radar cross-section `rcs` (m²) and echo phase `phase`.
pub fn sensing_response(
    layout: &ArrayLayout,
    pattern: &RadiationPattern,
    scatterer: Vec3,
    rcs: f64,
    phase: f64,
    carrier: &CarrierSpec,
) -> Result<SensingResponse> {
    if !(rcs >= 0.0 && rcs.is_finite()) {
        return Err(Error::Domain(format!("radar cross-section must be non-negative, got {rcs}")));
    }
    let k = carrier.wavenumber();
    let a = layout
        .elements
        .iter()
        .map(|e| {
            element_steering(pattern, e.position, e.boresight, scatterer, k)
                .map(|(a, _)| a)
                .ok_or_else(|| colocated(scatterer))
        })
        .collect::<Result<Vec<_>>>()?;
    let d0 = layout.reference_point.distance(scatterer);
    if !(d0 > 0.0) {
        return Err(colocated(scatterer));
    }
    Ok(SensingResponse {
        a_tx: a.clone(),
        a_rx: a,
        alpha: echo_amplitude(rcs, d0, carrier.wavelength, phase),
    })
}

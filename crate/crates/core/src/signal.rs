//! Transmit beamforming, receive filtering and link metrics.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelVector, SensingResponse};
use crate::error::{Error, Result};

/// Condition number above which zero-forcing refuses to invert.
pub const ZF_CONDITION_LIMIT: f64 = 1e12;

/// Unit-norm complex transmit weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamWeights(Vec<Complex64>);

impl BeamWeights {
    /// Normalizes `w`; fails on the zero vector.
    pub fn from_unnormalized(w: Vec<Complex64>) -> Result<Self> {
        let n = norm(&w);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::DegenerateChannel("cannot normalize a zero weight vector".into()));
        }
        Ok(Self(w.into_iter().map(|x| x / n).collect()))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Same beam times a unit-modulus phase.
    pub fn rotated(&self, phase: f64) -> BeamWeights {
        let r = Complex64::from_polar(1.0, phase);
        BeamWeights(self.0.iter().map(|w| w * r).collect())
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    ReceivedPower,
    Sinr,
    Scnr,
    Snr,
}

impl MetricKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricKind::ReceivedPower => "received_power",
            MetricKind::Sinr => "sinr",
            MetricKind::Scnr => "scnr",
            MetricKind::Snr => "snr",
        }
    }
}

/// Antenna architecture being compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Ras,
    Fixed,
    Ma,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Ras, Scheme::Fixed, Scheme::Ma];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Ras => "ras",
            Scheme::Fixed => "fixed",
            Scheme::Ma => "ma",
        }
    }
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w) + 30.0
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// Maximum-ratio transmission `w = h* / ‖h‖`.
pub fn mrt_weights(h: &ChannelVector) -> Result<BeamWeights> {
    if !(h.norm() > 0.0) {
        return Err(Error::DegenerateChannel("MRT on an all-zero channel".into()));
    }
    BeamWeights::from_unnormalized(h.0.iter().map(|x| x.conj()).collect())
}

/// Zero-forcing beam for user `k`: normalized k-th column of `G^H (G G^H)^{-1}`, `G = [h_1 … h_K]ᵀ`.
pub fn zf_weights(channels: &[ChannelVector], k: usize) -> Result<BeamWeights> {
    Ok(zf_all(channels)?.swap_remove(k))
}

/// Zero-forcing beams for every user at once.
pub fn zf_all(channels: &[ChannelVector]) -> Result<Vec<BeamWeights>> {
    let users = channels.len();
    if users == 0 {
        return Err(Error::Precondition("zero-forcing needs at least one user".into()));
    }
    let n = channels[0].len();
    if channels.iter().any(|h| h.len() != n) {
        return Err(Error::Precondition("channel vectors differ in length".into()));
    }
    if users > n {
        return Err(Error::SingularConfiguration {
            condition: f64::INFINITY,
            limit: ZF_CONDITION_LIMIT,
        });
    }
    let g = DMatrix::from_fn(users, n, |r, c| channels[r].0[c]);
    let sv = g.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= ZF_CONDITION_LIMIT) {
        return Err(Error::SingularConfiguration {
            condition,
            limit: ZF_CONDITION_LIMIT,
        });
    }
    let gh = g.adjoint();
    let gram = &g * &gh;
    let inv = gram.try_inverse().ok_or(Error::SingularConfiguration {
        condition,
        limit: ZF_CONDITION_LIMIT,
    })?;
    let w = gh * inv;
    (0..users)
        .map(|k| BeamWeights::from_unnormalized(w.column(k).iter().cloned().collect()))
        .collect()
}

/// `p_tx |hᵀw|²` in watts.
pub fn received_power(h: &ChannelVector, w: &BeamWeights, p_tx: f64) -> f64 {
    p_tx * h.response(w.as_slice()).norm_sqr()
}

/// SINR of user `k` given every user's beam and power.
pub fn sinr(k: usize, weights: &[BeamWeights], channels: &[ChannelVector], powers: &[f64], noise: f64) -> f64 {
    let h = &channels[k];
    let signal = powers[k] * h.response(weights[k].as_slice()).norm_sqr();
    let interference: f64 = weights
        .iter()
        .zip(powers)
        .enumerate()
        .filter(|(j, _)| *j != k)
        .map(|(_, (w, p))| p * h.response(w.as_slice()).norm_sqr())
        .sum();
    signal / (interference + noise)
}

/// Signal-to-clutter-plus-noise ratio after transmit beam `w` and receive filter `v`.
pub fn scnr(
    target: &SensingResponse,
    clutter: &[SensingResponse],
    w: &BeamWeights,
    v: &[Complex64],
    p_tx: f64,
    noise: f64,
) -> Result<f64> {
    let vn = norm(v);
    if !(vn > 0.0) {
        return Err(Error::Precondition("receive filter must be non-zero".into()));
    }
    let w = w.as_slice();
    let signal = p_tx * target.filtered(v, w).norm_sqr();
    let clutter_power: f64 = clutter.iter().map(|c| p_tx * c.filtered(v, w).norm_sqr()).sum();
    Ok(signal / (clutter_power + noise * vn * vn))
}

/// Matched receive filter `v = A_t w / ‖A_t w‖`.
pub fn matched_receive_filter(target: &SensingResponse, w: &BeamWeights) -> Result<Vec<Complex64>> {
    let aw = target.apply(w.as_slice());
    let n = norm(&aw);
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::DegenerateEcho("target echo vanishes under the transmit beam".into()));
    }
    Ok(aw.into_iter().map(|x| x / n).collect())
}

/// MVDR receive filter `v ∝ R⁻¹ a_rx,t`, normalized to unit norm.
///
/// `R = Σ_c p |a_tx,cᵀ w|² |α_c|² a_rx,c a_rx,cᴴ + σ² I`.
pub fn mvdr_receive_filter(
    target: &SensingResponse,
    clutter: &[SensingResponse],
    w: &BeamWeights,
    p_tx: f64,
    noise: f64,
) -> Result<Vec<Complex64>> {
    let n = target.a_rx.len();
    let mut r = DMatrix::<Complex64>::identity(n, n) * Complex64::from(noise);
    for c in clutter {
        let tx: Complex64 = c.a_tx.iter().zip(w.as_slice()).map(|(a, w)| a * w).sum();
        let scale = p_tx * tx.norm_sqr() * c.alpha.norm_sqr();
        for i in 0..n {
            for j in 0..n {
                r[(i, j)] += c.a_rx[i] * c.a_rx[j].conj() * scale;
            }
        }
    }
    let a = nalgebra::DVector::from_column_slice(&target.a_rx);
    let v = r
        .lu()
        .solve(&a)
        .ok_or_else(|| Error::DegenerateEcho("clutter covariance is singular".into()))?;
    let v: Vec<Complex64> = v.iter().cloned().collect();
    let vn = norm(&v);
    if !(vn > 0.0 && vn.is_finite()) {
        return Err(Error::DegenerateEcho("target steering vector vanishes".into()));
    }
    Ok(v.into_iter().map(|x| x / vn).collect())
}

/// Receive strategy for sensing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReceiveFilter {
    #[default]
    Matched,
    Mvdr,
}

/// SCNR with MRT toward the target and the selected receive filter.
pub fn sensing_scnr(
    target: &SensingResponse,
    clutter: &[SensingResponse],
    filter: ReceiveFilter,
    p_tx: f64,
    noise: f64,
) -> Result<f64> {
    let w = mrt_weights(&ChannelVector(target.a_tx.clone()))
        .map_err(|_| Error::DegenerateEcho("target lies outside every element's front lobe".into()))?;
    let v = match filter {
        ReceiveFilter::Matched => matched_receive_filter(target, &w)?,
        ReceiveFilter::Mvdr => mvdr_receive_filter(target, clutter, &w, p_tx, noise)?,
    };
    scnr(target, clutter, &w, &v, p_tx, noise)
}

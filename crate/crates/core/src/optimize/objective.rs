//! Scenario-bound objectives expressed as sums of per-element terms.
//!
//! Each objective accumulates a small vector of complex sums over elements
//! (channel energy, Gram entries, target/clutter cross-correlations) and maps
//! the totals to a scalar. Changing one element therefore only needs that
//! element's terms, which is what the block-coordinate searches exploit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antenna::{AntennaElement, ArrayLayout, RadiationPattern};
use crate::channel::{comm_channel, echo_amplitude, free_space_amplitude, CarrierSpec, ChannelVector};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::signal::{mrt_weights, zf_all, BeamWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// MRT power at the first user, watts.
    ReceivedPower,
    /// Worst user SINR under zero-forcing with an equal power split.
    MinUserSinr,
    /// Target SCNR with MRT toward the target and a matched receive filter.
    Scnr,
}

/// Point scatterer with radar cross-section (m²) and echo phase (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scatterer {
    pub position: Vec3,
    pub rcs: f64,
    pub phase: f64,
}

/// One realization of users, target and clutter.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SceneSnapshot {
    pub users: Vec<Vec3>,
    pub target: Option<Scatterer>,
    pub clutter: Vec<Scatterer>,
}

/// Position and pointing of one element (global frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementConfig {
    pub position: Vec3,
    pub boresight: Vec3,
}

impl From<&AntennaElement> for ElementConfig {
    fn from(e: &AntennaElement) -> Self {
        Self {
            position: e.position,
            boresight: e.boresight,
        }
    }
}

#[derive(Debug, Clone)]
struct SceneTerms {
    /// Offset of this scene's points in the flattened point list.
    first_point: usize,
    n_users: usize,
    /// Offset of this scene's accumulators.
    first_acc: usize,
    target_alpha_sqr: f64,
    clutter_alpha_sqr: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct CachedPath {
    direction: Vec3,
    /// `e^{-jkd}` times the free-space amplitude for communication points.
    propagation: Complex64,
}

/// An objective bound to an array, a pattern, a carrier and one or more scenes.
///
/// With several scenes the value is their mean (statistical CSI).
#[derive(Debug, Clone)]
pub struct Objective {
    kind: ObjectiveKind,
    pattern: RadiationPattern,
    carrier: CarrierSpec,
    p_tx: f64,
    layout: ArrayLayout,
    base: Vec<ElementConfig>,
    points: Vec<Vec3>,
    /// Whether a point is a communication user (includes free-space loss).
    is_comm: Vec<bool>,
    scenes: Vec<SceneTerms>,
    acc_len: usize,
    cache: Vec<Vec<CachedPath>>,
    primary_scene: SceneSnapshot,
}

impl Objective {
    pub fn new(
        kind: ObjectiveKind,
        layout: &ArrayLayout,
        pattern: RadiationPattern,
        carrier: CarrierSpec,
        p_tx: f64,
        scenes: &[SceneSnapshot],
    ) -> Result<Self> {
        if scenes.is_empty() {
            return Err(Error::Precondition("objective needs at least one scene".into()));
        }
        if !(p_tx > 0.0 && p_tx.is_finite()) {
            return Err(Error::Config(format!("transmit power must be positive, got {p_tx}")));
        }
        let layout = layout.realized()?;
        let mut points = Vec::new();
        let mut is_comm = Vec::new();
        let mut terms = Vec::with_capacity(scenes.len());
        let mut acc_len = 0;
        for (i, s) in scenes.iter().enumerate() {
            let first_point = points.len();
            let first_acc = acc_len;
            let (n_users, target_alpha_sqr, clutter_alpha_sqr) = match kind {
                ObjectiveKind::ReceivedPower => {
                    let u = s.users.first().ok_or_else(|| {
                        Error::Precondition(format!("scene {i} has no user for the power objective"))
                    })?;
                    points.push(*u);
                    is_comm.push(true);
                    acc_len += 1;
                    (1, 0.0, Vec::new())
                }
                ObjectiveKind::MinUserSinr => {
                    if s.users.is_empty() {
                        return Err(Error::Precondition(format!("scene {i} has no users")));
                    }
                    if s.users.len() > layout.len() {
                        return Err(Error::Config(format!(
                            "{} users exceed {} elements for zero-forcing",
                            s.users.len(),
                            layout.len()
                        )));
                    }
                    points.extend(&s.users);
                    is_comm.extend(std::iter::repeat_n(true, s.users.len()));
                    acc_len += s.users.len() * s.users.len();
                    (s.users.len(), 0.0, Vec::new())
                }
                ObjectiveKind::Scnr => {
                    let t = s.target.ok_or_else(|| {
                        Error::Precondition(format!("scene {i} has no sensing target"))
                    })?;
                    let alpha = |sc: &Scatterer| -> Result<f64> {
                        if !(sc.rcs >= 0.0) {
                            return Err(Error::Domain(format!("negative radar cross-section {}", sc.rcs)));
                        }
                        let d0 = layout.reference_point.distance(sc.position);
                        if !(d0 > 0.0) {
                            return Err(Error::Domain("scatterer at the array reference point".into()));
                        }
                        Ok(echo_amplitude(sc.rcs, d0, carrier.wavelength, 0.0).norm_sqr())
                    };
                    let ta = alpha(&t)?;
                    let ca = s.clutter.iter().map(alpha).collect::<Result<Vec<_>>>()?;
                    points.push(t.position);
                    points.extend(s.clutter.iter().map(|c| c.position));
                    is_comm.extend(std::iter::repeat_n(false, 1 + s.clutter.len()));
                    acc_len += 1 + s.clutter.len();
                    (0, ta, ca)
                }
            };
            terms.push(SceneTerms {
                first_point,
                n_users,
                first_acc,
                target_alpha_sqr,
                clutter_alpha_sqr,
            });
        }
        let base: Vec<ElementConfig> = layout.elements.iter().map(ElementConfig::from).collect();
        let k = carrier.wavenumber();
        let cache = base
            .iter()
            .map(|e| {
                points
                    .iter()
                    .zip(&is_comm)
                    .map(|(p, comm)| {
                        let off = *p - e.position;
                        let d = off.norm();
                        if !(d > 0.0) {
                            return Err(Error::Domain("scene point coincides with an array element".into()));
                        }
                        let amp = if *comm { free_space_amplitude(d, carrier.wavelength)? } else { 1.0 };
                        Ok(CachedPath {
                            direction: off * (1.0 / d),
                            propagation: Complex64::from_polar(amp, -k * d),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind,
            pattern,
            carrier,
            p_tx,
            layout,
            base,
            points,
            is_comm,
            scenes: terms,
            acc_len,
            cache,
            primary_scene: scenes[0].clone(),
        })
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn acc_len(&self) -> usize {
        self.acc_len
    }

    pub fn p_tx(&self) -> f64 {
        self.p_tx
    }

    pub fn carrier(&self) -> &CarrierSpec {
        &self.carrier
    }

    pub fn pattern(&self) -> &RadiationPattern {
        &self.pattern
    }

    /// The realized array the objective was built from.
    pub fn layout(&self) -> &ArrayLayout {
        &self.layout
    }

    pub fn base_configs(&self) -> &[ElementConfig] {
        &self.base
    }

    /// Steering entries of element `n` toward every scene point.
    fn steering(&self, n: usize, cfg: &ElementConfig, out: &mut Vec<Complex64>) {
        out.clear();
        if cfg.position == self.base[n].position {
            for path in &self.cache[n] {
                let g = self.pattern.gain_from_cosine(cfg.boresight.dot(path.direction));
                out.push(path.propagation * g.sqrt());
            }
        } else {
            let k = self.carrier.wavenumber();
            for (p, comm) in self.points.iter().zip(&self.is_comm) {
                let off = *p - cfg.position;
                let d = off.norm();
                let g = self.pattern.gain_from_cosine(cfg.boresight.dot(off) / d);
                let amp = if *comm { self.carrier.wavelength / (4.0 * std::f64::consts::PI * d) } else { 1.0 };
                out.push(Complex64::from_polar(amp * g.sqrt(), -k * d));
            }
        }
    }

    /// Per-element accumulator terms, written into `out` (length `acc_len`).
    pub fn contribution(&self, n: usize, cfg: &ElementConfig, out: &mut [Complex64]) {
        let mut s = Vec::with_capacity(self.points.len());
        self.steering(n, cfg, &mut s);
        for sc in &self.scenes {
            let pts = &s[sc.first_point..];
            let acc = &mut out[sc.first_acc..];
            match self.kind {
                ObjectiveKind::ReceivedPower => acc[0] = Complex64::from(pts[0].norm_sqr()),
                ObjectiveKind::MinUserSinr => {
                    let k = sc.n_users;
                    for i in 0..k {
                        for j in 0..k {
                            acc[i * k + j] = pts[i] * pts[j].conj();
                        }
                    }
                }
                ObjectiveKind::Scnr => {
                    let t = pts[0];
                    acc[0] = Complex64::from(t.norm_sqr());
                    for c in 0..sc.clutter_alpha_sqr.len() {
                        acc[1 + c] = t.conj() * pts[1 + c];
                    }
                }
            }
        }
    }

    /// Maps accumulated sums to the objective value (mean over scenes).
    pub fn value_from_acc(&self, acc: &[Complex64]) -> f64 {
        let noise = self.carrier.noise_power;
        let mut total = 0.0;
        for sc in &self.scenes {
            let a = &acc[sc.first_acc..];
            total += match self.kind {
                ObjectiveKind::ReceivedPower => self.p_tx * a[0].re,
                ObjectiveKind::MinUserSinr => min_zf_sinr(&a[..sc.n_users * sc.n_users], sc.n_users, self.p_tx, noise),
                ObjectiveKind::Scnr => {
                    let t = a[0].re;
                    if t > 0.0 {
                        let signal = self.p_tx * sc.target_alpha_sqr * t * t;
                        let clutter: f64 = sc
                            .clutter_alpha_sqr
                            .iter()
                            .zip(&a[1..])
                            .map(|(al, c)| al * c.norm_sqr() * c.norm_sqr())
                            .sum::<f64>()
                            / (t * t);
                        signal / (self.p_tx * clutter + noise)
                    } else {
                        0.0
                    }
                }
            };
        }
        total / self.scenes.len() as f64
    }

    /// Objective at a full element configuration.
    pub fn evaluate(&self, configs: &[ElementConfig]) -> f64 {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.acc_len];
        let mut term = vec![Complex64::new(0.0, 0.0); self.acc_len];
        for (n, cfg) in configs.iter().enumerate() {
            self.contribution(n, cfg, &mut term);
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
        }
        self.value_from_acc(&acc)
    }

    /// Objective with only the boresights replaced.
    pub fn evaluate_boresights(&self, boresights: &[Vec3]) -> f64 {
        let cfgs: Vec<ElementConfig> = self
            .base
            .iter()
            .zip(boresights)
            .map(|(b, d)| ElementConfig {
                position: b.position,
                boresight: *d,
            })
            .collect();
        self.evaluate(&cfgs)
    }

    /// Layout with the given element configurations.
    pub fn layout_with(&self, configs: &[ElementConfig]) -> ArrayLayout {
        let mut l = self.layout.clone();
        for (e, c) in l.elements.iter_mut().zip(configs) {
            e.position = c.position;
            e.boresight = c.boresight;
        }
        l
    }

    pub fn primary_scene(&self) -> &SceneSnapshot {
        &self.primary_scene
    }

    /// Beams realizing the objective in the first scene.
    pub fn weights(&self, configs: &[ElementConfig]) -> Result<Vec<BeamWeights>> {
        let scene = &self.primary_scene;
        let layout = self.layout_with(configs);
        match self.kind {
            ObjectiveKind::ReceivedPower => {
                let h = comm_channel(&layout, &self.pattern, scene.users[0], &self.carrier)?;
                Ok(vec![mrt_weights(&h)?])
            }
            ObjectiveKind::MinUserSinr => {
                let hs = scene
                    .users
                    .iter()
                    .map(|u| comm_channel(&layout, &self.pattern, *u, &self.carrier))
                    .collect::<Result<Vec<_>>>()?;
                zf_all(&hs)
            }
            ObjectiveKind::Scnr => {
                let t = scene.target.ok_or_else(|| Error::Precondition("no target".into()))?;
                let s = crate::channel::sensing_response(&layout, &self.pattern, t.position, t.rcs, t.phase, &self.carrier)?;
                Ok(vec![mrt_weights(&ChannelVector(s.a_tx))?])
            }
        }
    }
}

/// `min_k (p/K) / (σ² [(G Gᴴ)⁻¹]_kk)` from the row-major Gram matrix.
fn min_zf_sinr(gram: &[Complex64], k: usize, p_tx: f64, noise: f64) -> f64 {
    let m = DMatrix::from_row_slice(k, k, gram);
    let Some(inv) = m.try_inverse() else {
        return 0.0;
    };
    let per_user = p_tx / k as f64;
    let mut worst = f64::INFINITY;
    for i in 0..k {
        let d = inv[(i, i)].re;
        let s = if d > 0.0 && d.is_finite() { per_user / (noise * d) } else { 0.0 };
        worst = worst.min(s);
    }
    worst
}

/// Running per-element terms for block-coordinate search.
#[derive(Debug, Clone)]
pub struct SearchState<'a> {
    objective: &'a Objective,
    configs: Vec<ElementConfig>,
    terms: Vec<Vec<Complex64>>,
}

impl<'a> SearchState<'a> {
    pub fn new(objective: &'a Objective, configs: Vec<ElementConfig>) -> Self {
        let terms = configs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let mut t = vec![Complex64::new(0.0, 0.0); objective.acc_len()];
                objective.contribution(n, c, &mut t);
                t
            })
            .collect();
        Self {
            objective,
            configs,
            terms,
        }
    }

    pub fn configs(&self) -> &[ElementConfig] {
        &self.configs
    }

    /// Sum of all terms except element `skip` (if any), in element order.
    pub fn sum_except(&self, skip: Option<usize>) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.objective.acc_len()];
        for (n, t) in self.terms.iter().enumerate() {
            if Some(n) == skip {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(t) {
                *a += x;
            }
        }
        acc
    }

    pub fn value(&self) -> f64 {
        self.objective.value_from_acc(&self.sum_except(None))
    }

    /// Value with element `n` replaced, given `rest = sum_except(Some(n))`.
    pub fn value_with(&self, rest: &[Complex64], n: usize, cfg: &ElementConfig) -> f64 {
        let mut t = vec![Complex64::new(0.0, 0.0); self.objective.acc_len()];
        self.objective.contribution(n, cfg, &mut t);
        for (x, r) in t.iter_mut().zip(rest) {
            *x += r;
        }
        self.objective.value_from_acc(&t)
    }

    pub fn set(&mut self, n: usize, cfg: ElementConfig) {
        self.objective.contribution(n, &cfg, &mut self.terms[n]);
        self.configs[n] = cfg;
    }
}

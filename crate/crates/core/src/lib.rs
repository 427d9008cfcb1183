//! Rotatable-antenna integrated sensing and communication simulator.
//!
//! The crate models a base-station uniform planar array whose elements can
//! each steer their boresight, and compares it against a fixed broadside
//! array and a movable-antenna (position-sliding) array on two workloads:
//! single-user received power versus user azimuth, and radar SCNR versus
//! transmit power in the presence of clutter.
//!
//! Modules, bottom-up:
//! - [`geometry`]: vectors, the boresight angle convention, rotations
//! - [`antenna`]: cosine element pattern, UPA layout, rotation modes
//! - [`channel`]: line-of-sight channels and two-way echo responses
//! - [`signal`]: MRT/ZF beams, matched/MVDR filters, power, SINR, SCNR
//! - [`optimize`]: exhaustive, alternating, gradient and movable-antenna searches
//! - [`scenario`]: configuration, seeded placement, sweeps and result files

pub mod antenna;
pub mod channel;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod optimize;
pub mod scenario;
pub mod signal;

pub use error::{Error, Result};
pub use exec::Execution;

//! Aerial base station (ABS) placement toolbox.
//!
//! The crate models the placement of UAV-mounted base stations serving
//! ground terminals (GTs). It provides:
//!
//! - interchangeable air-to-ground channel models (free space, empirical
//!   LoS-probability model, radio tomographic model),
//! - QoS evaluation (per-GT Shannon rates, sum rate, min rate, coverage),
//! - fixed-altitude placement algorithms (K-means, spiral disc cover,
//!   sparse virtual-ABS placement, virtual forces) plus an exact
//!   disc-cover oracle for small instances,
//! - 3D placement (channel-agnostic load balancing, PSO under the
//!   empirical model, radio-map set cover over a fly grid),
//! - spatial loss field (SLF) grids, voxel line integrals and SLF
//!   estimation from pairwise attenuation measurements,
//! - adaptive placement for moving GTs (1D sector rule, stochastic
//!   gradient tracking),
//! - a benchmark harness (`skyplace` binary) that writes CSV and SVG
//!   result files.
//!
//! All randomized routines take an explicit 64-bit seed and use the
//! ChaCha12 generator, so identical inputs reproduce bit-identical
//! outputs.

pub mod adaptive;
pub mod bench;
pub mod channel;
pub mod error;
pub mod geo;
pub mod io;
pub mod metrics;
pub mod place2d;
pub mod place3d;
pub mod radiomap;
pub mod scenario;
pub mod svg;

pub use channel::{ChannelModel, EmpiricalLoSParams, RadioConfig};
pub use error::{Error, Result};
pub use geo::{Box3, Point3, Region};
pub use metrics::{Placement, QosReport};
pub use radiomap::SlfGrid;
pub use scenario::{FlyGrid, GroundTerminal, Scenario};

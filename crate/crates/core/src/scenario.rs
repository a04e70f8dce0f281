//! Scenario types and deterministic generators.
//!
//! Every generator is a pure function of its arguments and a 64-bit seed,
//! driven by ChaCha12. Calling a generator twice with equal arguments
//! yields bit-identical scenarios.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelModel, RadioConfig};
use crate::error::{Error, Result};
use crate::geo::{Box3, Point3, Region};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTerminal {
    pub id: u32,
    pub pos: Point3,
    pub indoor: bool,
}

/// Discretized set of admissible ABS positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlyGrid {
    pub spacing: f64,
    pub points: Vec<Point3>,
    pub allowed: Vec<bool>,
}

impl FlyGrid {
    /// Indices of allowed points.
    pub fn allowed_indices(&self) -> Vec<usize> {
        self.allowed
            .iter()
            .enumerate()
            .filter_map(|(i, &ok)| ok.then_some(i))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub terminals: Vec<GroundTerminal>,
    pub region: Region,
    pub radio: RadioConfig,
    pub channel: ChannelModel,
    pub flygrid: Option<FlyGrid>,
    pub seed: u64,
}

impl Scenario {
    pub fn n_gt(&self) -> usize {
        self.terminals.len()
    }
}

/// Default link budget used by the generators; the caller overrides it for
/// calibrated experiments.
pub fn default_radio() -> RadioConfig {
    RadioConfig {
        carrier_freq_hz: 2.4e9,
        bandwidth_hz: 20e6,
        noise_power_dbm: RadioConfig::thermal_noise_dbm(20e6),
        tx_power_dbm: 10.0,
        min_rate_bps: 1e6,
    }
}

/// GTs at uniformly random positions on a straight road segment along the
/// x axis.
pub fn gen_road(n_gt: usize, length_m: f64, seed: u64) -> Result<Scenario> {
    if n_gt == 0 {
        return Err(Error::InvalidArgument("n_gt must be >= 1".into()));
    }
    if length_m <= 0.0 {
        return Err(Error::InvalidArgument("road length must be positive".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let terminals = (0..n_gt)
        .map(|id| GroundTerminal {
            id: id as u32,
            pos: Point3::ground(rng.gen_range(0.0..length_m), 0.0),
            indoor: false,
        })
        .collect();
    Ok(Scenario {
        terminals,
        region: Region::new(0.0, length_m, -0.5 * length_m, 0.5 * length_m, 0.0, 500.0),
        radio: default_radio(),
        channel: ChannelModel::FreeSpace,
        flygrid: None,
        seed,
    })
}

/// GTs Gaussian-clustered around uniformly placed hotspot centers, clipped
/// to the region so the GT count stays exact.
pub fn gen_clustered(
    n_gt: usize,
    n_hotspots: usize,
    spread_m: f64,
    region: Region,
    seed: u64,
) -> Result<Scenario> {
    if n_hotspots == 0 || n_gt < n_hotspots {
        return Err(Error::InvalidArgument("need n_gt >= n_hotspots >= 1".into()));
    }
    if spread_m < 0.0 {
        return Err(Error::InvalidArgument("spread must be non-negative".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let centers: Vec<(f64, f64)> = (0..n_hotspots)
        .map(|_| (rng.gen_range(region.x_min..region.x_max), rng.gen_range(region.y_min..region.y_max)))
        .collect();
    let normal = Normal::new(0.0, spread_m.max(f64::MIN_POSITIVE))
        .expect("spread validated above");
    let terminals = (0..n_gt)
        .map(|id| {
            let (cx, cy) = centers[rng.gen_range(0..n_hotspots)];
            let (dx, dy) = if spread_m == 0.0 {
                // Keep the RNG stream aligned with the spread > 0 path.
                let _ = (normal.sample(&mut rng), normal.sample(&mut rng));
                (0.0, 0.0)
            } else {
                (normal.sample(&mut rng), normal.sample(&mut rng))
            };
            let pos = region.clamp_xy(Point3::ground(cx + dx, cy + dy));
            GroundTerminal { id: id as u32, pos, indoor: false }
        })
        .collect();
    Ok(Scenario {
        terminals,
        region,
        radio: default_radio(),
        channel: ChannelModel::FreeSpace,
        flygrid: None,
        seed,
    })
}

/// Regular lattice of candidate ABS positions over the region's altitude
/// band, with points inside any no-fly box masked out.
pub fn build_flygrid(region: &Region, spacing: f64, no_fly: &[Box3]) -> Result<FlyGrid> {
    if spacing <= 0.0 {
        return Err(Error::InvalidArgument("spacing must be positive".into()));
    }
    let ext_x = region.x_max - region.x_min;
    let ext_y = region.y_max - region.y_min;
    let ext_z = region.z_max - region.z_min;
    if spacing > ext_x || spacing > ext_y || spacing > ext_z {
        return Err(Error::EmptyFlyGrid { spacing });
    }
    let nx = (ext_x / spacing).floor() as usize + 1;
    let ny = (ext_y / spacing).floor() as usize + 1;
    let nz = (ext_z / spacing).floor() as usize + 1;
    let mut points = Vec::with_capacity(nx * ny * nz);
    let mut allowed = Vec::with_capacity(nx * ny * nz);
    for iz in 0..nz {
        for iy in 0..ny {
            for ix in 0..nx {
                let p = Point3::new(
                    region.x_min + ix as f64 * spacing,
                    region.y_min + iy as f64 * spacing,
                    region.z_min + iz as f64 * spacing,
                );
                let blocked = no_fly.iter().any(|b| b.contains(&p));
                points.push(p);
                allowed.push(!blocked);
            }
        }
    }
    Ok(FlyGrid { spacing, points, allowed })
}

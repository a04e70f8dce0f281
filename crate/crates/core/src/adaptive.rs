//! Adaptive placement for moving GTs: a 1D sector rule and stochastic
//! gradient tracking of a smoothed min-rate utility.

use std::collections::BTreeMap;

use crate::channel::{db_to_linear, RadioConfig, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::geo::{Point3, Region};
use crate::metrics::{evaluate, Placement, QosReport};
use crate::scenario::Scenario;

/// Piecewise-linear waypoint motion, one track per GT id.
#[derive(Debug, Clone, Default)]
pub struct MotionModel {
    pub tracks: BTreeMap<u32, Vec<(f64, Point3)>>,
}

impl MotionModel {
    /// Motion model that keeps every GT at its scenario position.
    pub fn static_model() -> Self {
        Self::default()
    }

    pub fn with_track(mut self, gt_id: u32, waypoints: Vec<(f64, Point3)>) -> Self {
        assert!(
            waypoints.windows(2).all(|w| w[0].0 < w[1].0),
            "waypoint times must be strictly increasing"
        );
        self.tracks.insert(gt_id, waypoints);
        self
    }

    /// Position of a GT at time `t`; GTs without a track keep `fallback`.
    pub fn position_at(&self, gt_id: u32, t: f64, fallback: Point3) -> Point3 {
        let Some(wps) = self.tracks.get(&gt_id) else {
            return fallback;
        };
        if wps.is_empty() {
            return fallback;
        }
        if t <= wps[0].0 {
            return wps[0].1;
        }
        if t >= wps[wps.len() - 1].0 {
            return wps[wps.len() - 1].1;
        }
        for w in wps.windows(2) {
            let (t0, p0) = w[0];
            let (t1, p1) = w[1];
            if t >= t0 && t <= t1 {
                let f = (t - t0) / (t1 - t0);
                return Point3 {
                    x: p0.x + f * (p1.x - p0.x),
                    y: p0.y + f * (p1.y - p0.y),
                    z: p0.z + f * (p1.z - p0.z),
                };
            }
        }
        wps[wps.len() - 1].1
    }
}

/// One 1D sector-rule update. The ABS moves `delta` toward the side with
/// strictly more GTs; GTs exactly at the ABS position count to neither
/// side. Only side counts enter this function, never distances or channel
/// values.
pub fn sector_rule_step(abs_x: f64, gt_xs: &[f64], delta: f64) -> f64 {
    assert!(delta > 0.0, "delta must be positive");
    let right = gt_xs.iter().filter(|&&x| x > abs_x).count();
    let left = gt_xs.iter().filter(|&&x| x < abs_x).count();
    if right > left {
        abs_x + delta
    } else if left > right {
        abs_x - delta
    } else {
        abs_x
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SgdConfig {
    /// Gradient-ascent step size in m per (bit/s/m).
    pub step_size: f64,
    /// Soft-min smoothing, per bit/s. Larger values approach the hard min.
    pub alpha: f64,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self { step_size: 2e-6, alpha: 1e-6 }
    }
}

/// Horizontal gradient of the soft-min utility of one ABS over its GTs
/// under free-space propagation.
///
/// The utility is `U = -(1/alpha) ln sum_g exp(-alpha * rate_g)` with
/// `rate_g = B log2(1 + C / d_g^2)`; the gradient is evaluated in closed
/// form over (x, y).
pub fn softmin_utility_and_gradient(
    abs: &Point3,
    gts: &[Point3],
    radio: &RadioConfig,
    alpha: f64,
) -> (f64, [f64; 2]) {
    assert!(!gts.is_empty());
    // rate = B log2(1 + C/u) with u = d^2.
    let wavelength_factor = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * radio.carrier_freq_hz);
    let c_lin = db_to_linear(radio.tx_power_dbm - radio.noise_power_dbm) * wavelength_factor * wavelength_factor;
    let b_ln2 = radio.bandwidth_hz / std::f64::consts::LN_2;

    let rates: Vec<f64> = gts
        .iter()
        .map(|g| {
            let u = abs.dist(g).powi(2).max(1e-12);
            radio.bandwidth_hz * (1.0 + c_lin / u).log2()
        })
        .collect();
    let r_min = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    // Stable log-sum-exp around the minimum rate.
    let weights_unnorm: Vec<f64> = rates.iter().map(|&r| (-alpha * (r - r_min)).exp()).collect();
    let z: f64 = weights_unnorm.iter().sum();
    let utility = r_min - z.ln() / alpha;

    let mut gx = 0.0;
    let mut gy = 0.0;
    for ((g, &r), &wu) in gts.iter().zip(&rates).zip(&weights_unnorm) {
        let _ = r;
        let w = wu / z;
        let u = abs.dist(g).powi(2).max(1e-12);
        // d rate / d u = -B/ln2 * C / (u (u + C)); d u / d p = 2 (p - g).
        let drate_du = -b_ln2 * c_lin / (u * (u + c_lin));
        gx += w * drate_du * 2.0 * (abs.x - g.x);
        gy += w * drate_du * 2.0 * (abs.y - g.y);
    }
    (utility, [gx, gy])
}

/// One stochastic-gradient tracking step. Each ABS independently ascends
/// the gradient of its own soft-min utility over the GTs associated with
/// it (nearest ABS in 3D, the strongest-channel rule under free space);
/// no inter-ABS communication takes place. Positions are projected into
/// the region.
pub fn sgd_track_step(
    abs_positions: &[Point3],
    gt_positions: &[Point3],
    radio: &RadioConfig,
    region: &Region,
    cfg: &SgdConfig,
) -> Vec<Point3> {
    let mut per_abs: Vec<Vec<Point3>> = vec![Vec::new(); abs_positions.len()];
    for g in gt_positions {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, a) in abs_positions.iter().enumerate() {
            let d = a.dist(g);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        per_abs[best].push(*g);
    }
    abs_positions
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if per_abs[i].is_empty() {
                return *a;
            }
            let (_, grad) = softmin_utility_and_gradient(a, &per_abs[i], radio, cfg.alpha);
            region.clamp_xy(Point3 {
                x: a.x + cfg.step_size * grad[0],
                y: a.y + cfg.step_size * grad[1],
                z: a.z,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum Policy {
    /// 1D single-ABS sector rule; moves the ABS along x by `delta` per tick.
    Sector { delta: f64 },
    Sgd { cfg: SgdConfig },
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub abs_positions: Vec<Point3>,
    pub qos: QosReport,
}

#[derive(Debug, Clone, Default)]
pub struct TrajectoryLog {
    pub records: Vec<TrajectoryRecord>,
}

#[derive(Debug, Clone)]
pub struct AdaptiveRun {
    pub steps: usize,
    pub dt: f64,
    /// Remove the ABS with this index at the given tick, if any.
    pub remove_abs_at: Option<(usize, usize)>,
}

/// Advance GT positions along the motion model, apply one policy step per
/// tick and log the QoS of the resulting placement at every tick.
pub fn run_adaptive(
    scenario: &Scenario,
    motion: &MotionModel,
    policy: &Policy,
    initial_abs: Vec<Point3>,
    run: &AdaptiveRun,
) -> Result<TrajectoryLog> {
    if run.steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    if initial_abs.is_empty() {
        return Err(Error::EmptyAbsList);
    }
    if let Policy::Sector { .. } = policy {
        if initial_abs.len() != 1 {
            return Err(Error::InvalidArgument("the sector rule drives a single ABS".into()));
        }
    }
    let mut abs = initial_abs;
    let mut log = TrajectoryLog::default();
    let mut sim = scenario.clone();
    for step in 0..run.steps {
        let t = step as f64 * run.dt;
        for gt in sim.terminals.iter_mut() {
            let fallback = scenario
                .terminals
                .iter()
                .find(|g| g.id == gt.id)
                .map(|g| g.pos)
                .expect("terminal ids stable");
            gt.pos = motion.position_at(gt.id, t, fallback);
        }
        if let Some((tick, idx)) = run.remove_abs_at {
            if step == tick && abs.len() > 1 && idx < abs.len() {
                abs.remove(idx);
            }
        }
        abs = match policy {
            Policy::Sector { delta } => {
                let gt_xs: Vec<f64> = sim.terminals.iter().map(|g| g.pos.x).collect();
                let x = sector_rule_step(abs[0].x, &gt_xs, *delta);
                vec![Point3 { x, ..abs[0] }]
            }
            Policy::Sgd { cfg } => {
                let gt_positions: Vec<Point3> = sim.terminals.iter().map(|g| g.pos).collect();
                sgd_track_step(&abs, &gt_positions, &sim.radio, &sim.region, cfg)
            }
        };
        let placement = Placement::with_strongest(&sim, abs.clone())?;
        let qos = evaluate(&sim, &placement)?;
        log.records.push(TrajectoryRecord { t, abs_positions: abs.clone(), qos });
    }
    Ok(log)
}

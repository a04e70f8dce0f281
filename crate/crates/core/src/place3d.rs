//! 3D placement: channel-agnostic load balancing, PSO under the empirical
//! model, and radio-map set-cover placement over a fly grid.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::channel::{mean_path_loss_empirical, EmpiricalLoSParams};
use crate::error::{Error, Result};
use crate::geo::{Point3, Region};
use crate::metrics::{associate_strongest, Placement};
use crate::scenario::{FlyGrid, Scenario};

// ---------------------------------------------------------------------------
// Channel-agnostic load-balancing forces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct AgnosticConfig {
    pub min_sep: f64,
    /// Horizontal step per iteration.
    pub step_xy: f64,
    /// Vertical step per iteration.
    pub step_z: f64,
    /// Load hysteresis: an ABS ascends above load mean*(1+delta) and
    /// descends below mean*(1-delta).
    pub delta: f64,
    /// Attraction gain toward overloaded ABSs, per unit load difference.
    pub k_load: f64,
    pub max_iter: usize,
}

impl Default for AgnosticConfig {
    fn default() -> Self {
        Self { min_sep: 50.0, step_xy: 2.0, step_z: 2.0, delta: 0.2, k_load: 0.05, max_iter: 500 }
    }
}

/// One update of the channel-agnostic scheme. Inputs are deliberately
/// narrowed to the per-ABS load counts and the ABS positions themselves:
/// no GT positions and no channel values enter this function.
pub fn agnostic_step(
    positions: &[Point3],
    loads: &[usize],
    region: &Region,
    cfg: &AgnosticConfig,
) -> Vec<Point3> {
    let n = positions.len();
    let mean_load = loads.iter().sum::<usize>() as f64 / n.max(1) as f64;
    let mut out = positions.to_vec();
    for i in 0..n {
        let mut fx = 0.0;
        let mut fy = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = positions[i].dist_xy(&positions[j]);
            let (ux, uy) = if d > 1e-9 {
                ((positions[j].x - positions[i].x) / d, (positions[j].y - positions[i].y) / d)
            } else {
                (if i < j { 1.0 } else { -1.0 }, 0.0)
            };
            // Repulsion inside min_sep.
            if d < cfg.min_sep {
                fx -= ux;
                fy -= uy;
            }
            // Attraction toward ABSs with a larger load, proportional to
            // the load difference.
            let diff = loads[j] as f64 - loads[i] as f64;
            if diff > 0.0 {
                fx += cfg.k_load * diff * ux;
                fy += cfg.k_load * diff * uy;
            }
        }
        let mag = (fx * fx + fy * fy).sqrt();
        let mut p = positions[i];
        if mag > 1e-9 {
            p.x += cfg.step_xy * fx / mag;
            p.y += cfg.step_xy * fy / mag;
        }
        // Altitude rule: overloaded ABSs ascend (shrinking their coverage
        // circle), underloaded ones descend.
        if (loads[i] as f64) > mean_load * (1.0 + cfg.delta) {
            p.z += cfg.step_z;
        } else if (loads[i] as f64) < mean_load * (1.0 - cfg.delta) {
            p.z -= cfg.step_z;
        }
        out[i] = region.clamp(p);
    }
    out
}

/// Channel-agnostic 3D placement. The outer loop measures the strongest
/// association to obtain per-ABS loads, then feeds only those counts and
/// the ABS positions to [`agnostic_step`]. Stops when the loads have been
/// stable for 10 iterations or after `max_iter`.
pub fn agnostic_force_place(
    scenario: &Scenario,
    n_abs: usize,
    cfg: &AgnosticConfig,
    seed: u64,
) -> Result<Placement> {
    if n_abs == 0 {
        return Err(Error::InvalidArgument("n_abs must be >= 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let reg = &scenario.region;
    let mut positions: Vec<Point3> = (0..n_abs)
        .map(|_| {
            Point3::new(
                rng.gen_range(reg.x_min..reg.x_max),
                rng.gen_range(reg.y_min..reg.y_max),
                rng.gen_range(reg.z_min..reg.z_max),
            )
        })
        .collect();

    let mut stable = 0usize;
    let mut prev_loads: Option<Vec<usize>> = None;
    for _ in 0..cfg.max_iter {
        let assoc = associate_strongest(scenario, &positions)?;
        let mut loads = vec![0usize; n_abs];
        for &a in assoc.values() {
            loads[a] += 1;
        }
        if prev_loads.as_deref() == Some(&loads[..]) {
            stable += 1;
            if stable >= 10 {
                break;
            }
        } else {
            stable = 0;
        }
        prev_loads = Some(loads.clone());
        positions = agnostic_step(&positions, &loads, reg, cfg);
    }
    let association = associate_strongest(scenario, &positions)?;
    Ok(Placement { abs_positions: positions, association })
}

// ---------------------------------------------------------------------------
// PSO under the empirical model
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub c_cognitive: f64,
    pub c_social: f64,
    pub seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self { swarm_size: 50, iterations: 200, inertia: 0.7, c_cognitive: 1.5, c_social: 1.5, seed: 0 }
    }
}

/// Minimum per-GT spectral efficiency (bit/s/Hz) of `k` ABSs at the given
/// coordinates, with each GT served by its best ABS under the mean
/// empirical path loss.
fn min_se(coords: &[f64], scenario: &Scenario, params: &EmpiricalLoSParams) -> f64 {
    let k = coords.len() / 3;
    let f = scenario.radio.carrier_freq_hz;
    let mut worst = f64::INFINITY;
    for gt in &scenario.terminals {
        let mut best = f64::NEG_INFINITY;
        for a in 0..k {
            let abs = Point3 {
                x: coords[3 * a],
                y: coords[3 * a + 1],
                z: coords[3 * a + 2].max(0.0),
            };
            let pl = match mean_path_loss_empirical(&abs, &gt.pos, f, params) {
                Ok(pl) => pl,
                Err(_) => continue,
            };
            let snr = crate::channel::db_to_linear(
                scenario.radio.tx_power_dbm - pl - scenario.radio.noise_power_dbm,
            );
            best = best.max((1.0 + snr).log2());
        }
        worst = worst.min(best);
    }
    worst
}

/// Minimize the number of ABSs subject to a minimum per-GT spectral
/// efficiency under the mean empirical path loss. For k = 1, 2, ... a PSO
/// over the 3k coordinates maximizes the minimum SE; the first k whose best
/// particle reaches `se_min` is returned.
pub fn pso_min_abs(
    scenario: &Scenario,
    params: &EmpiricalLoSParams,
    pso: &PsoConfig,
    se_min: f64,
) -> Result<Placement> {
    let max_k = scenario.n_gt();
    for k in 1..=max_k {
        let (best_coords, best_obj) = pso_maximize_min_se(scenario, params, pso, k);
        if best_obj >= se_min {
            let abs_positions: Vec<Point3> = (0..k)
                .map(|a| Point3::new(best_coords[3 * a], best_coords[3 * a + 1], best_coords[3 * a + 2]))
                .collect();
            let association = associate_strongest(scenario, &abs_positions)?;
            return Ok(Placement { abs_positions, association });
        }
    }
    Err(Error::Infeasible { max_abs: max_k })
}

fn pso_maximize_min_se(
    scenario: &Scenario,
    params: &EmpiricalLoSParams,
    pso: &PsoConfig,
    k: usize,
) -> (Vec<f64>, f64) {
    let reg = &scenario.region;
    let dim = 3 * k;
    let lo: Vec<f64> = (0..dim)
        .map(|d| match d % 3 {
            0 => reg.x_min,
            1 => reg.y_min,
            _ => reg.z_min,
        })
        .collect();
    let hi: Vec<f64> = (0..dim)
        .map(|d| match d % 3 {
            0 => reg.x_max,
            1 => reg.y_max,
            _ => reg.z_max,
        })
        .collect();
    let mut rng = ChaCha12Rng::seed_from_u64(pso.seed.wrapping_add(k as u64));
    let mut positions: Vec<Vec<f64>> = (0..pso.swarm_size)
        .map(|_| (0..dim).map(|d| rng.gen_range(lo[d]..hi[d])).collect())
        .collect();
    let mut velocities: Vec<Vec<f64>> = (0..pso.swarm_size)
        .map(|_| (0..dim).map(|d| rng.gen_range(-(hi[d] - lo[d])..(hi[d] - lo[d])) * 0.1).collect())
        .collect();
    let mut pbest = positions.clone();
    let mut pbest_obj: Vec<f64> = positions.iter().map(|p| min_se(p, scenario, params)).collect();
    let (mut gbest_idx, _) = pbest_obj
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
        .unwrap();
    let mut gbest = pbest[gbest_idx].clone();
    let mut gbest_obj = pbest_obj[gbest_idx];

    for _ in 0..pso.iterations {
        for i in 0..pso.swarm_size {
            for d in 0..dim {
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                velocities[i][d] = pso.inertia * velocities[i][d]
                    + pso.c_cognitive * r1 * (pbest[i][d] - positions[i][d])
                    + pso.c_social * r2 * (gbest[d] - positions[i][d]);
                positions[i][d] = (positions[i][d] + velocities[i][d]).clamp(lo[d], hi[d]);
            }
            let obj = min_se(&positions[i], scenario, params);
            if obj > pbest_obj[i] {
                pbest_obj[i] = obj;
                pbest[i] = positions[i].clone();
            }
        }
        // Reduce to the global best in fixed index order (elitism: the
        // global best is retained, so the best objective never decreases).
        for i in 0..pso.swarm_size {
            if pbest_obj[i] > gbest_obj {
                gbest_obj = pbest_obj[i];
                gbest = pbest[i].clone();
                gbest_idx = i;
            }
        }
        let _ = gbest_idx;
    }
    (gbest, gbest_obj)
}

// ---------------------------------------------------------------------------
// Radio-map set cover
// ---------------------------------------------------------------------------

/// Boolean coverage of each GT from each allowed fly-grid point.
#[derive(Debug, Clone)]
pub struct CoverageMatrix {
    pub gt_ids: Vec<u32>,
    /// Indices into the fly grid's point list (allowed points only).
    pub grid_indices: Vec<usize>,
    /// `entries[g][k]` is true iff grid point k serves GT g at min_rate.
    pub entries: Vec<Vec<bool>>,
    /// GTs with an all-false row.
    pub uncoverable: Vec<u32>,
}

/// Evaluate `link_rate >= min_rate` for every (GT, allowed grid point)
/// pair under the scenario's channel model.
pub fn build_coverage_matrix(scenario: &Scenario, flygrid: &FlyGrid) -> Result<CoverageMatrix> {
    let grid_indices = flygrid.allowed_indices();
    if grid_indices.is_empty() {
        return Err(Error::InvalidArgument("fly grid has no allowed points".into()));
    }
    let gt_ids: Vec<u32> = scenario.terminals.iter().map(|t| t.id).collect();
    let mut entries = Vec::with_capacity(gt_ids.len());
    let mut uncoverable = Vec::new();
    for gt in &scenario.terminals {
        let mut row = Vec::with_capacity(grid_indices.len());
        for &gi in &grid_indices {
            let rate =
                crate::channel::link_rate(&flygrid.points[gi], gt, &scenario.radio, &scenario.channel)?;
            row.push(rate >= scenario.radio.min_rate_bps);
        }
        if row.iter().all(|&b| !b) {
            uncoverable.push(gt.id);
        }
        entries.push(row);
    }
    Ok(CoverageMatrix { gt_ids, grid_indices, entries, uncoverable })
}

/// Greedy set cover over the fly grid: repeatedly pick the grid point
/// covering the most still-uncovered GTs (ties toward the lowest grid
/// index).
pub fn radio_map_place(matrix: &CoverageMatrix, flygrid: &FlyGrid) -> Result<Placement> {
    if !matrix.uncoverable.is_empty() {
        return Err(Error::UncoverableGts(matrix.uncoverable.clone()));
    }
    let n_gt = matrix.gt_ids.len();
    let n_pts = matrix.grid_indices.len();
    let mut covered = vec![false; n_gt];
    let mut chosen: Vec<usize> = Vec::new();
    let mut assignment = vec![usize::MAX; n_gt];
    while covered.iter().any(|&c| !c) {
        let mut best_col = usize::MAX;
        let mut best_count = 0usize;
        for col in 0..n_pts {
            let count = (0..n_gt).filter(|&g| !covered[g] && matrix.entries[g][col]).count();
            if count > best_count {
                best_count = count;
                best_col = col;
            }
        }
        if best_col == usize::MAX {
            // Unreachable when uncoverable is empty, kept as a guard.
            return Err(Error::UncoverableGts(
                (0..n_gt).filter(|&g| !covered[g]).map(|g| matrix.gt_ids[g]).collect(),
            ));
        }
        let abs_idx = chosen.len();
        chosen.push(best_col);
        for g in 0..n_gt {
            if !covered[g] && matrix.entries[g][best_col] {
                covered[g] = true;
                assignment[g] = abs_idx;
            }
        }
    }
    let abs_positions: Vec<Point3> =
        chosen.iter().map(|&col| flygrid.points[matrix.grid_indices[col]]).collect();
    let association: BTreeMap<u32, usize> =
        matrix.gt_ids.iter().zip(&assignment).map(|(&id, &a)| (id, a)).collect();
    Ok(Placement { abs_positions, association })
}

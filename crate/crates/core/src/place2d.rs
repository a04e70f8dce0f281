//! Fixed-altitude placement: K-means clustering, spiral disc cover, sparse
//! virtual-ABS placement, virtual forces, and an exact disc-cover oracle
//! for small instances.
//!
//! The disc-cover algorithms operate on ground coordinates with a coverage
//! radius derived from the link budget (see [`invert_coverage_radius`]);
//! the resulting ABSs are placed at the instance altitude.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::channel::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::geo::Point3;
use crate::metrics::{associate_strongest, Placement};
use crate::channel::RadioConfig;
use crate::scenario::Scenario;

const COVER_TOL: f64 = 1e-9;

/// A geometric disc-cover instance: GT ground positions, the coverage
/// radius on the ground and the altitude at which ABSs fly.
#[derive(Debug, Clone)]
pub struct DiscCoverInstance {
    pub gt_ids: Vec<u32>,
    pub gt_xy: Vec<[f64; 2]>,
    pub radius: f64,
    pub altitude: f64,
}

impl DiscCoverInstance {
    pub fn new(gt_xy: Vec<[f64; 2]>, radius: f64, altitude: f64) -> Self {
        assert!(radius > 0.0, "coverage radius must be positive");
        let gt_ids = (0..gt_xy.len() as u32).collect();
        Self { gt_ids, gt_xy, radius, altitude }
    }

    pub fn from_scenario(scenario: &Scenario, radius: f64, altitude: f64) -> Self {
        assert!(radius > 0.0, "coverage radius must be positive");
        Self {
            gt_ids: scenario.terminals.iter().map(|t| t.id).collect(),
            gt_xy: scenario.terminals.iter().map(|t| [t.pos.x, t.pos.y]).collect(),
            radius,
            altitude,
        }
    }

    pub fn n(&self) -> usize {
        self.gt_xy.len()
    }

    /// Check that every GT lies within `radius` (ground distance) of some
    /// center, with a small floating-point tolerance.
    pub fn is_valid_cover(&self, centers: &[[f64; 2]]) -> bool {
        self.gt_xy.iter().all(|g| {
            centers.iter().any(|c| dist2(*g, *c) <= (self.radius + 1e-6).powi(2))
        })
    }
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    dist2(a, b).sqrt()
}

fn placement_from_centers(
    instance: &DiscCoverInstance,
    centers: &[[f64; 2]],
    assignment: &[usize],
) -> Placement {
    let abs_positions = centers
        .iter()
        .map(|c| Point3::new(c[0], c[1], instance.altitude))
        .collect();
    let association = instance
        .gt_ids
        .iter()
        .zip(assignment)
        .map(|(&id, &a)| (id, a))
        .collect::<BTreeMap<_, _>>();
    Placement { abs_positions, association }
}

// ---------------------------------------------------------------------------
// K-means
// ---------------------------------------------------------------------------

/// Output of the Lloyd iteration, including the per-iteration objective
/// (within-cluster sum of squared ground distances).
#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub centroids: Vec<[f64; 2]>,
    pub assignment: Vec<usize>,
    pub objective_history: Vec<f64>,
}

/// Lloyd's algorithm on the GT ground coordinates. Initial centroids are k
/// distinct GTs chosen by the seeded RNG; empty clusters are re-seeded at
/// the GT farthest from every centroid.
pub fn kmeans_run(points: &[[f64; 2]], k: usize, seed: u64) -> Result<KmeansResult> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k must satisfy 1 <= k <= {n}, got {k}")));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut centroids: Vec<[f64; 2]> =
        sample(&mut rng, n, k).iter().map(|i| points[i]).collect();
    let mut assignment = vec![0usize; n];
    let mut history = Vec::new();

    for _ in 0..500 {
        // Assignment step (ties toward the lowest centroid index).
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, cen) in centroids.iter().enumerate() {
                let d = dist2(*p, *cen);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if assignment[i] != best {
                assignment[i] = best;
                changed = true;
            }
        }
        history.push(
            points.iter().zip(&assignment).map(|(p, &a)| dist2(*p, centroids[a])).sum(),
        );
        if !changed && history.len() > 1 {
            break;
        }
        // Update step.
        let mut sums = vec![[0.0f64; 2]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignment) {
            sums[a][0] += p[0];
            sums[a][1] += p[1];
            counts[a] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = [sums[c][0] / counts[c] as f64, sums[c][1] / counts[c] as f64];
            } else {
                // Re-seed at the GT farthest from any centroid.
                let far = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let d = centroids.iter().map(|c| dist2(*p, *c)).fold(f64::INFINITY, f64::min);
                        (i, d)
                    })
                    .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i)
                    .unwrap();
                centroids[c] = points[far];
            }
        }
    }
    Ok(KmeansResult { centroids, assignment, objective_history: history })
}

/// K-means placement: cluster the GTs on the ground and hover one ABS over
/// each centroid at the given altitude. The returned association follows
/// the strongest-channel rule under the scenario's channel model.
pub fn kmeans_place(scenario: &Scenario, k: usize, altitude: f64, seed: u64) -> Result<Placement> {
    let points: Vec<[f64; 2]> =
        scenario.terminals.iter().map(|t| [t.pos.x, t.pos.y]).collect();
    let res = kmeans_run(&points, k, seed)?;
    let abs_positions: Vec<Point3> =
        res.centroids.iter().map(|c| Point3::new(c[0], c[1], altitude)).collect();
    let association = associate_strongest(scenario, &abs_positions)?;
    Ok(Placement { abs_positions, association })
}

// ---------------------------------------------------------------------------
// Coverage radius
// ---------------------------------------------------------------------------

/// Ground radius at which the free-space link rate from an ABS at the
/// given altitude drops to `radio.min_rate_bps`. Closed-form inversion of
/// the free-space link budget.
pub fn invert_coverage_radius(radio: &RadioConfig, altitude: f64) -> Result<f64> {
    if radio.min_rate_bps <= 0.0 {
        return Err(Error::InvalidArgument("min_rate must be positive to define a coverage radius".into()));
    }
    if altitude <= 0.0 {
        return Err(Error::InvalidArgument("altitude must be positive".into()));
    }
    let snr_req = 2f64.powf(radio.min_rate_bps / radio.bandwidth_hz) - 1.0;
    let budget_db = radio.tx_power_dbm - radio.noise_power_dbm - 10.0 * snr_req.log10();
    let d_max = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * radio.carrier_freq_hz)
        * 10f64.powf(budget_db / 20.0);
    if d_max < altitude {
        return Err(Error::MinRateUnachievable { min_rate_bps: radio.min_rate_bps, altitude_m: altitude });
    }
    Ok((d_max * d_max - altitude * altitude).sqrt())
}

// ---------------------------------------------------------------------------
// Convex hull (monotone chain)
// ---------------------------------------------------------------------------

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull vertices in counterclockwise order. Collinear input returns
/// the two extreme points; a single point returns itself.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * n);
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

// ---------------------------------------------------------------------------
// Spiral disc cover
// ---------------------------------------------------------------------------

/// Sequential inward-spiral disc cover: at each round, search candidate
/// centers along the convex-hull boundary of the uncovered GTs for the disc
/// covering the most uncovered GTs (only uncovered GTs count), requiring
/// that at least one uncovered hull vertex falls inside. Candidates are the
/// hull vertices themselves plus points at distance exactly `radius` from
/// each hull vertex at 2 degree steps.
pub fn spiral_place(instance: &DiscCoverInstance) -> Result<Placement> {
    if instance.n() == 0 {
        return Err(Error::InvalidArgument("empty disc-cover instance".into()));
    }
    let r = instance.radius;
    let r2 = (r + COVER_TOL) * (r + COVER_TOL);
    let n = instance.n();
    let mut covered = vec![false; n];
    let mut assignment = vec![usize::MAX; n];
    let mut centers: Vec<[f64; 2]> = Vec::new();

    while covered.iter().any(|&c| !c) {
        let uncovered: Vec<usize> = (0..n).filter(|&i| !covered[i]).collect();
        let unc_pts: Vec<[f64; 2]> = uncovered.iter().map(|&i| instance.gt_xy[i]).collect();
        let hull = convex_hull(&unc_pts);

        let mut candidates: Vec<[f64; 2]> = Vec::with_capacity(hull.len() * 181);
        for v in &hull {
            candidates.push(*v);
            for step in 0..180 {
                let ang = (step as f64) * 2.0f64.to_radians();
                candidates.push([v[0] + r * ang.cos(), v[1] + r * ang.sin()]);
            }
        }

        let mut best: Option<([f64; 2], usize)> = None;
        for c in &candidates {
            let covers_hull_vertex = hull.iter().any(|v| dist2(*v, *c) <= r2);
            if !covers_hull_vertex {
                continue;
            }
            let count = unc_pts.iter().filter(|g| dist2(**g, *c) <= r2).count();
            if count > best.map_or(0, |(_, k)| k) {
                best = Some((*c, count));
            }
        }
        let (center, _) = best.expect("hull vertices always cover themselves");
        let disc_idx = centers.len();
        centers.push(center);
        for &i in &uncovered {
            if dist2(instance.gt_xy[i], center) <= r2 {
                covered[i] = true;
                assignment[i] = disc_idx;
            }
        }
    }
    Ok(placement_from_centers(instance, &centers, &assignment))
}

// ---------------------------------------------------------------------------
// Sparse virtual-ABS placement
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct SparseConfig {
    /// Virtual ABSs closer than this are merged into one actual ABS.
    pub merge_tol: f64,
    /// Reweighting offset: w_ij = 1 / (d_ij + eps).
    pub eps: f64,
    pub outer_rounds: usize,
    pub inner_steps: usize,
}

impl Default for SparseConfig {
    fn default() -> Self {
        Self { merge_tol: 0.1, eps: 1e-6, outer_rounds: 30, inner_steps: 60 }
    }
}

/// Sparse placement: one virtual ABS per GT, pulled together by an
/// iteratively reweighted pairwise-distance penalty while each stays within
/// the coverage radius of its GT (projection onto that ball). Virtual ABSs
/// that end up within `merge_tol` of each other collapse into one actual
/// ABS, placed at the minimal enclosing circle center of the merged GTs so
/// the cover stays valid.
pub fn sparse_place(instance: &DiscCoverInstance, cfg: &SparseConfig) -> Result<Placement> {
    let n = instance.n();
    if n == 0 {
        return Err(Error::InvalidArgument("empty disc-cover instance".into()));
    }
    let r = instance.radius;
    let mut pos: Vec<[f64; 2]> = instance.gt_xy.clone();

    'outer: for _ in 0..cfg.outer_rounds {
        // Refresh weights from the current distances.
        let mut weights = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = 1.0 / (dist(pos[i], pos[j]) + cfg.eps);
                weights[i][j] = w;
                weights[j][i] = w;
            }
        }
        for _ in 0..cfg.inner_steps {
            let old = pos.clone();
            for i in 0..n {
                let total: f64 = (0..n).filter(|&j| j != i).map(|j| weights[i][j]).sum();
                if total == 0.0 {
                    continue;
                }
                // Move halfway toward the weight-averaged neighbor position.
                let mut tx = 0.0;
                let mut ty = 0.0;
                for j in 0..n {
                    if j != i {
                        tx += weights[i][j] * old[j][0];
                        ty += weights[i][j] * old[j][1];
                    }
                }
                let target = [tx / total, ty / total];
                let mut p = [
                    0.5 * (old[i][0] + target[0]),
                    0.5 * (old[i][1] + target[1]),
                ];
                // Project onto the ball of radius r around the GT.
                let g = instance.gt_xy[i];
                let d = dist(p, g);
                if d > r {
                    let s = r / d;
                    p = [g[0] + (p[0] - g[0]) * s, g[1] + (p[1] - g[1]) * s];
                }
                pos[i] = p;
            }
        }
        // Stop once every pair has either merged or separated cleanly.
        let settled = (0..n).all(|i| {
            ((i + 1)..n).all(|j| {
                let d = dist(pos[i], pos[j]);
                d < cfg.merge_tol || d > r
            })
        });
        if settled {
            break 'outer;
        }
    }

    // Merge virtual ABSs within merge_tol (transitively).
    let mut group = (0..n).collect::<Vec<usize>>();
    fn find(group: &mut Vec<usize>, i: usize) -> usize {
        if group[i] != i {
            let root = find(group, group[i]);
            group[i] = root;
        }
        group[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if dist(pos[i], pos[j]) < cfg.merge_tol {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut group, i);
        members.entry(root).or_default().push(i);
    }

    // Each merged group becomes one ABS if its GTs fit in one disc of
    // radius r; otherwise the group is greedily subdivided.
    let mut centers: Vec<[f64; 2]> = Vec::new();
    let mut assignment = vec![usize::MAX; n];
    for (_, ms) in members {
        let mut subgroups: Vec<Vec<usize>> = Vec::new();
        for &m in &ms {
            let mut placed = false;
            for sg in subgroups.iter_mut() {
                let mut pts: Vec<[f64; 2]> = sg.iter().map(|&i| instance.gt_xy[i]).collect();
                pts.push(instance.gt_xy[m]);
                let (_, rad) = min_enclosing_circle(&pts);
                if rad <= r + COVER_TOL {
                    sg.push(m);
                    placed = true;
                    break;
                }
            }
            if !placed {
                subgroups.push(vec![m]);
            }
        }
        for sg in subgroups {
            let pts: Vec<[f64; 2]> = sg.iter().map(|&i| instance.gt_xy[i]).collect();
            let (center, _) = min_enclosing_circle(&pts);
            let idx = centers.len();
            centers.push(center);
            for &m in &sg {
                assignment[m] = idx;
            }
        }
    }
    Ok(placement_from_centers(instance, &centers, &assignment))
}

/// Exact minimal enclosing circle of a small point set (brute force over
/// pair and triple supports). Returns (center, radius).
pub fn min_enclosing_circle(points: &[[f64; 2]]) -> ([f64; 2], f64) {
    assert!(!points.is_empty());
    let n = points.len();
    if n == 1 {
        return (points[0], 0.0);
    }
    let contains_all = |c: [f64; 2], r: f64| points.iter().all(|p| dist(*p, c) <= r + 1e-9);
    let mut best: Option<([f64; 2], f64)> = None;
    let mut consider = |c: [f64; 2], r: f64| {
        if contains_all(c, r) && best.map_or(true, |(_, br)| r < br) {
            best = Some((c, r));
        }
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let c = [(points[i][0] + points[j][0]) / 2.0, (points[i][1] + points[j][1]) / 2.0];
            consider(c, dist(points[i], c));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if let Some(c) = circumcenter(points[i], points[j], points[k]) {
                    consider(c, dist(points[i], c));
                }
            }
        }
    }
    best.expect("a pair-diameter circle always exists")
}

fn circumcenter(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<[f64; 2]> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-12 {
        return None;
    }
    let a2 = a[0] * a[0] + a[1] * a[1];
    let b2 = b[0] * b[0] + b[1] * b[1];
    let c2 = c[0] * c[0] + c[1] * c[1];
    let ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    let uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    Some([ux, uy])
}

// ---------------------------------------------------------------------------
// Virtual forces
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct ForceConfig {
    /// Attraction magnitude per associated GT.
    pub k_attract: f64,
    /// Repulsion coefficient; the pairwise force is k_repel / d^2 inside
    /// min_sep.
    pub k_repel: f64,
    pub min_sep: f64,
    /// Distance moved per iteration along the net force direction.
    pub step: f64,
    pub max_iter: usize,
    /// Stop when the largest net-force magnitude falls below this.
    pub tol: f64,
}

impl Default for ForceConfig {
    fn default() -> Self {
        Self { k_attract: 1.0, k_repel: 500.0, min_sep: 50.0, step: 2.0, max_iter: 500, tol: 1e-3 }
    }
}

/// One synchronous force update. `per_abs_gts[i]` holds the ground
/// positions of the GTs currently associated with ABS i. Returns the new
/// positions and the largest net-force magnitude.
pub fn force_step(
    positions: &[[f64; 2]],
    per_abs_gts: &[Vec<[f64; 2]>],
    cfg: &ForceConfig,
) -> (Vec<[f64; 2]>, f64) {
    let n = positions.len();
    let mut forces = vec![[0.0f64; 2]; n];
    for i in 0..n {
        for g in &per_abs_gts[i] {
            let d = dist(positions[i], *g);
            if d > 1e-12 {
                forces[i][0] += cfg.k_attract * (g[0] - positions[i][0]) / d;
                forces[i][1] += cfg.k_attract * (g[1] - positions[i][1]) / d;
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dist(positions[i], positions[j]);
            if d >= cfg.min_sep {
                continue;
            }
            let (ux, uy) = if d > 1e-9 {
                ((positions[i][0] - positions[j][0]) / d, (positions[i][1] - positions[j][1]) / d)
            } else {
                (1.0, 0.0) // coincident ABSs repel along +x/-x deterministically
            };
            let mag = cfg.k_repel / d.max(1e-3).powi(2);
            forces[i][0] += mag * ux;
            forces[i][1] += mag * uy;
            forces[j][0] -= mag * ux;
            forces[j][1] -= mag * uy;
        }
    }
    let mut max_force: f64 = 0.0;
    let mut out = positions.to_vec();
    for i in 0..n {
        let mag = (forces[i][0] * forces[i][0] + forces[i][1] * forces[i][1]).sqrt();
        max_force = max_force.max(mag);
        if mag > 1e-12 {
            out[i][0] += cfg.step * forces[i][0] / mag;
            out[i][1] += cfg.step * forces[i][1] / mag;
        }
    }
    (out, max_force)
}

/// Virtual-force placement: ABSs start uniformly at random in the region,
/// then repeatedly move one `step` along the net of GT attraction and
/// inter-ABS repulsion. Association is refreshed (strongest channel) every
/// iteration.
pub fn virtual_force_place(
    scenario: &Scenario,
    n_abs: usize,
    altitude: f64,
    cfg: &ForceConfig,
    seed: u64,
) -> Result<Placement> {
    if n_abs == 0 {
        return Err(Error::InvalidArgument("n_abs must be >= 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let reg = &scenario.region;
    let mut positions: Vec<[f64; 2]> = (0..n_abs)
        .map(|_| [rng.gen_range(reg.x_min..reg.x_max), rng.gen_range(reg.y_min..reg.y_max)])
        .collect();

    for _ in 0..cfg.max_iter {
        let abs_positions: Vec<Point3> =
            positions.iter().map(|p| Point3::new(p[0], p[1], altitude)).collect();
        let assoc = associate_strongest(scenario, &abs_positions)?;
        let mut per_abs_gts: Vec<Vec<[f64; 2]>> = vec![Vec::new(); n_abs];
        for gt in &scenario.terminals {
            per_abs_gts[assoc[&gt.id]].push([gt.pos.x, gt.pos.y]);
        }
        let (next, max_force) = force_step(&positions, &per_abs_gts, cfg);
        positions = next.into_iter().map(|p| {
            [p[0].clamp(reg.x_min, reg.x_max), p[1].clamp(reg.y_min, reg.y_max)]
        }).collect();
        if max_force < cfg.tol {
            break;
        }
    }
    let abs_positions: Vec<Point3> =
        positions.iter().map(|p| Point3::new(p[0], p[1], altitude)).collect();
    let association = associate_strongest(scenario, &abs_positions)?;
    Ok(Placement { abs_positions, association })
}

// ---------------------------------------------------------------------------
// Exact disc-cover oracle
// ---------------------------------------------------------------------------

const ORACLE_LIMIT: usize = 12;

/// Exact minimum disc cover by branch and bound over the classical
/// candidate set: the GT points themselves plus the intersection points of
/// radius-r circles around GT pairs. Limited to 12 GTs.
pub fn disc_cover_oracle(instance: &DiscCoverInstance) -> Result<Placement> {
    let n = instance.n();
    if n == 0 {
        return Err(Error::InvalidArgument("empty disc-cover instance".into()));
    }
    if n > ORACLE_LIMIT {
        return Err(Error::InstanceTooLarge { n, limit: ORACLE_LIMIT });
    }
    let r = instance.radius;
    let r2 = (r + COVER_TOL) * (r + COVER_TOL);

    let mut candidates: Vec<[f64; 2]> = instance.gt_xy.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let a = instance.gt_xy[i];
            let b = instance.gt_xy[j];
            let d = dist(a, b);
            if d > 2.0 * r || d < 1e-12 {
                continue;
            }
            let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            let h = (r * r - d * d / 4.0).max(0.0).sqrt();
            let ux = (b[0] - a[0]) / d;
            let uy = (b[1] - a[1]) / d;
            candidates.push([mid[0] - h * uy, mid[1] + h * ux]);
            candidates.push([mid[0] + h * uy, mid[1] - h * ux]);
        }
    }

    // Coverage bitmasks, dominated candidates removed.
    let mut cands: Vec<([f64; 2], u32)> = candidates
        .into_iter()
        .map(|c| {
            let mask = instance
                .gt_xy
                .iter()
                .enumerate()
                .filter(|(_, g)| dist2(**g, c) <= r2)
                .fold(0u32, |m, (i, _)| m | (1 << i));
            (c, mask)
        })
        .filter(|&(_, m)| m != 0)
        .collect();
    cands.sort_by(|a, b| b.1.count_ones().cmp(&a.1.count_ones()));
    let mut kept: Vec<([f64; 2], u32)> = Vec::new();
    for (c, m) in cands {
        if !kept.iter().any(|&(_, km)| km & m == m && km != m) && !kept.iter().any(|&(_, km)| km == m) {
            kept.push((c, m));
        }
    }

    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };

    fn search(
        covered: u32,
        full: u32,
        chosen: &mut Vec<usize>,
        best: &mut Option<Vec<usize>>,
        cands: &[([f64; 2], u32)],
        n: usize,
    ) {
        if covered == full {
            if best.as_ref().map_or(true, |b| chosen.len() < b.len()) {
                *best = Some(chosen.clone());
            }
            return;
        }
        if let Some(b) = best {
            // Lower bound: remaining GTs / largest candidate coverage.
            let remaining = (full & !covered).count_ones() as usize;
            let max_cover = cands
                .iter()
                .map(|&(_, m)| (m & !covered).count_ones() as usize)
                .max()
                .unwrap_or(0);
            if max_cover == 0 || chosen.len() + remaining.div_ceil(max_cover) >= b.len() {
                return;
            }
        }
        // Branch on the uncovered GT with the fewest covering candidates.
        let mut pick = usize::MAX;
        let mut pick_count = usize::MAX;
        for g in 0..n {
            if covered & (1 << g) != 0 {
                continue;
            }
            let count = cands.iter().filter(|&&(_, m)| m & (1 << g) != 0).count();
            if count < pick_count {
                pick_count = count;
                pick = g;
            }
        }
        if pick == usize::MAX {
            return;
        }
        for (ci, &(_, m)) in cands.iter().enumerate() {
            if m & (1 << pick) == 0 {
                continue;
            }
            chosen.push(ci);
            search(covered | m, full, chosen, best, cands, n);
            chosen.pop();
        }
    }

    // Seed the bound with a greedy cover.
    let mut best: Option<Vec<usize>> = {
        let mut covered = 0u32;
        let mut chosen = Vec::new();
        while covered != full {
            let (ci, _) = kept
                .iter()
                .enumerate()
                .max_by_key(|(_, &(_, m))| (m & !covered).count_ones())
                .expect("candidates cover all GTs");
            chosen.push(ci);
            covered |= kept[ci].1;
        }
        Some(chosen)
    };
    let mut chosen = Vec::new();
    search(0, full, &mut chosen, &mut best, &kept, n);

    let chosen = best.expect("search always yields a cover");
    let centers: Vec<[f64; 2]> = chosen.iter().map(|&ci| kept[ci].0).collect();
    let mut assignment = vec![usize::MAX; n];
    for (g, gt) in instance.gt_xy.iter().enumerate() {
        for (k, c) in centers.iter().enumerate() {
            if dist2(*gt, *c) <= r2 {
                assignment[g] = k;
                break;
            }
        }
    }
    Ok(placement_from_centers(instance, &centers, &assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::gen_road;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn kmeans_matches_brute_force_on_line() {
        let pts = vec![[0.0, 0.0], [2.0, 0.0], [10.0, 0.0], [12.0, 0.0]];
        let res = kmeans_run(&pts, 2, 0).unwrap();
        let mut xs: Vec<f64> = res.centroids.iter().map(|c| c[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Brute force over all 2-partitions gives centroids {1, 11}.
        assert_relative_eq!(xs[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(xs[1], 11.0, epsilon = 1e-9);
    }

    #[test]
    fn kmeans_k_equals_n_gives_zero_objective() {
        let pts = vec![[0.0, 1.0], [5.0, 2.0], [9.0, 3.0]];
        let res = kmeans_run(&pts, 3, 7).unwrap();
        assert!(res.objective_history.last().unwrap() < &1e-18);
    }

    #[test]
    fn kmeans_objective_non_increasing() {
        let s = gen_road(50, 1000.0, 3).unwrap();
        let pts: Vec<[f64; 2]> = s.terminals.iter().map(|t| [t.pos.x, t.pos.y]).collect();
        for seed in 0..20 {
            let res = kmeans_run(&pts, 5, seed).unwrap();
            for w in res.objective_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "objective increased: {:?}", w);
            }
        }
    }

    #[test]
    fn kmeans_rejects_k_larger_than_n() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0]];
        assert!(kmeans_run(&pts, 3, 0).is_err());
    }

    #[test]
    fn invert_radius_zero_at_exact_budget() {
        // Construct a radio where min_rate is the rate at distance = altitude.
        let mut radio = crate::scenario::default_radio();
        let alt = 50.0;
        let pl = crate::channel::free_space_path_loss(alt, radio.carrier_freq_hz).unwrap();
        let rate = crate::channel::rate_from_path_loss(pl, &radio);
        // Exactly at the budget, rounding may land either side of zero;
        // back off by a relative 1e-9 and expect a centimeter-scale radius.
        radio.min_rate_bps = rate * (1.0 - 1e-9);
        let r = invert_coverage_radius(&radio, alt).unwrap();
        assert!(r < 0.1, "expected r ~ 0, got {r}");
        radio.min_rate_bps = rate * (1.0 + 1e-6);
        assert!(matches!(
            invert_coverage_radius(&radio, alt),
            Err(crate::error::Error::MinRateUnachievable { .. })
        ));
    }

    #[test]
    fn invert_radius_increases_when_min_rate_halves() {
        let mut radio = crate::scenario::default_radio();
        radio.min_rate_bps = 5e6;
        let r1 = invert_coverage_radius(&radio, 50.0).unwrap();
        radio.min_rate_bps = 2.5e6;
        let r2 = invert_coverage_radius(&radio, 50.0).unwrap();
        assert!(r2 > r1);
    }

    #[test]
    fn invert_radius_matches_bisection_oracle() {
        let mut radio = crate::scenario::default_radio();
        radio.min_rate_bps = 5e6;
        let alt = 50.0;
        let r = invert_coverage_radius(&radio, alt).unwrap();
        // Bisection on link rate vs. ground radius.
        let rate_at = |ground_r: f64| {
            let d = (alt * alt + ground_r * ground_r).sqrt();
            let pl = crate::channel::free_space_path_loss(d, radio.carrier_freq_hz).unwrap();
            crate::channel::rate_from_path_loss(pl, &radio)
        };
        let (mut lo, mut hi) = (0.0f64, 1e6f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if rate_at(mid) >= radio.min_rate_bps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((r - lo).abs() < 0.01, "closed form {r} vs bisection {lo}");
    }

    #[test]
    fn invert_radius_unachievable_is_error() {
        let mut radio = crate::scenario::default_radio();
        radio.min_rate_bps = 1e12;
        assert!(matches!(
            invert_coverage_radius(&radio, 100.0),
            Err(Error::MinRateUnachievable { .. })
        ));
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let pts = vec![[0.0, 0.0], [4.0, 0.0], [4.0, 4.0], [0.0, 4.0], [2.0, 2.0]];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains(&[2.0, 2.0]));
    }

    #[test]
    fn spiral_single_disc_when_all_close() {
        let pts = vec![[0.0, 0.0], [3.0, 1.0], [1.0, 3.0], [2.0, 2.0]];
        let inst = DiscCoverInstance::new(pts, 10.0, 60.0);
        let p = spiral_place(&inst).unwrap();
        assert_eq!(p.n_abs(), 1);
    }

    #[test]
    fn spiral_two_distant_gts_need_two_discs() {
        let inst = DiscCoverInstance::new(vec![[0.0, 0.0], [100.0, 0.0]], 10.0, 60.0);
        let p = spiral_place(&inst).unwrap();
        assert_eq!(p.n_abs(), 2);
    }

    #[test]
    fn spiral_output_is_valid_cover() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..30 {
            let pts: Vec<[f64; 2]> =
                (0..15).map(|_| [rng.gen_range(0.0..300.0), rng.gen_range(0.0..300.0)]).collect();
            let inst = DiscCoverInstance::new(pts, 40.0, 60.0);
            let p = spiral_place(&inst).unwrap();
            let centers: Vec<[f64; 2]> = p.abs_positions.iter().map(|q| [q.x, q.y]).collect();
            assert!(inst.is_valid_cover(&centers));
        }
    }

    #[test]
    fn sparse_single_gt() {
        let inst = DiscCoverInstance::new(vec![[5.0, 7.0]], 10.0, 60.0);
        let p = sparse_place(&inst, &SparseConfig::default()).unwrap();
        assert_eq!(p.n_abs(), 1);
        assert_relative_eq!(p.abs_positions[0].x, 5.0, epsilon = 1e-9);
        assert_relative_eq!(p.abs_positions[0].y, 7.0, epsilon = 1e-9);
    }

    #[test]
    fn sparse_two_close_gts_merge_to_midpoint() {
        let inst = DiscCoverInstance::new(vec![[0.0, 0.0], [15.0, 0.0]], 10.0, 60.0);
        let p = sparse_place(&inst, &SparseConfig::default()).unwrap();
        assert_eq!(p.n_abs(), 1);
        assert!((p.abs_positions[0].x - 7.5).abs() <= 0.2, "got x={}", p.abs_positions[0].x);
    }

    #[test]
    fn sparse_two_far_gts_stay_separate() {
        let inst = DiscCoverInstance::new(vec![[0.0, 0.0], [25.0, 0.0]], 10.0, 60.0);
        let p = sparse_place(&inst, &SparseConfig::default()).unwrap();
        assert_eq!(p.n_abs(), 2);
    }

    #[test]
    fn sparse_output_is_valid_cover() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pts: Vec<[f64; 2]> =
                (0..10).map(|_| [rng.gen_range(0.0..200.0), rng.gen_range(0.0..200.0)]).collect();
            let inst = DiscCoverInstance::new(pts, 35.0, 60.0);
            let p = sparse_place(&inst, &SparseConfig::default()).unwrap();
            let centers: Vec<[f64; 2]> = p.abs_positions.iter().map(|q| [q.x, q.y]).collect();
            assert!(inst.is_valid_cover(&centers));
        }
    }

    #[test]
    fn mec_of_triangle() {
        let pts = vec![[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]];
        let (c, r) = min_enclosing_circle(&pts);
        assert_relative_eq!(c[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(c[1], 0.0, epsilon = 1e-9);
        assert_relative_eq!(r, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn oracle_line_of_separated_gts() {
        // 4 GTs spaced just over 2r apart: each needs its own disc.
        let r = 10.0;
        let pts: Vec<[f64; 2]> = (0..4).map(|i| [i as f64 * (2.0 * r + 0.5), 0.0]).collect();
        let inst = DiscCoverInstance::new(pts, r, 60.0);
        let p = disc_cover_oracle(&inst).unwrap();
        assert_eq!(p.n_abs(), 4);
    }

    #[test]
    fn oracle_triangle_within_circumradius() {
        // Equilateral triangle with circumradius < r: one disc suffices.
        let side = 10.0;
        let circ = side / 3f64.sqrt();
        let pts = vec![
            [0.0, 0.0],
            [side, 0.0],
            [side / 2.0, side * 3f64.sqrt() / 2.0],
        ];
        let inst = DiscCoverInstance::new(pts, circ + 0.1, 60.0);
        let p = disc_cover_oracle(&inst).unwrap();
        assert_eq!(p.n_abs(), 1);
    }

    #[test]
    fn oracle_rejects_large_instances() {
        let pts: Vec<[f64; 2]> = (0..13).map(|i| [i as f64, 0.0]).collect();
        let inst = DiscCoverInstance::new(pts, 5.0, 60.0);
        assert!(matches!(disc_cover_oracle(&inst), Err(Error::InstanceTooLarge { .. })));
    }

    #[test]
    fn oracle_lower_bounds_heuristics() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(3..=8);
            let pts: Vec<[f64; 2]> =
                (0..n).map(|_| [rng.gen_range(0.0..120.0), rng.gen_range(0.0..120.0)]).collect();
            let inst = DiscCoverInstance::new(pts, 25.0, 60.0);
            let oracle = disc_cover_oracle(&inst).unwrap().n_abs();
            let spiral = spiral_place(&inst).unwrap().n_abs();
            let sparse = sparse_place(&inst, &SparseConfig::default()).unwrap().n_abs();
            assert!(oracle <= spiral, "oracle {oracle} > spiral {spiral}");
            assert!(oracle <= sparse, "oracle {oracle} > sparse {sparse}");
        }
    }

    #[test]
    fn force_step_pure_repulsion_separates() {
        let cfg = ForceConfig::default();
        let mut pos = vec![[0.0, 0.0], [10.0, 0.0]];
        let gts: Vec<Vec<[f64; 2]>> = vec![Vec::new(), Vec::new()];
        for _ in 0..200 {
            let (next, f) = force_step(&pos, &gts, &cfg);
            pos = next;
            if f < cfg.tol {
                break;
            }
        }
        assert!(dist(pos[0], pos[1]) >= cfg.min_sep - cfg.step);
    }

    #[test]
    fn single_abs_converges_over_single_gt() {
        let mut s = gen_road(1, 100.0, 2).unwrap();
        s.terminals[0].pos = Point3::ground(60.0, 0.0);
        let cfg = ForceConfig { step: 1.0, ..ForceConfig::default() };
        let p = virtual_force_place(&s, 1, 40.0, &cfg, 4).unwrap();
        assert!(p.abs_positions[0].dist_xy(&s.terminals[0].pos) <= cfg.step + 1e-6);
    }

    #[test]
    fn two_abs_split_two_clusters() {
        use crate::geo::Region;
        use crate::scenario::gen_clustered;
        let region = Region::new(0.0, 1000.0, 0.0, 100.0, 10.0, 150.0);
        let mut s = gen_clustered(20, 2, 1.0, region, 9).unwrap();
        // Force well-separated clusters.
        for (i, t) in s.terminals.iter_mut().enumerate() {
            let cx = if i < 10 { 100.0 } else { 900.0 };
            t.pos = Point3::ground(cx + (i % 10) as f64, 50.0);
        }
        let cfg = ForceConfig { step: 5.0, max_iter: 1000, ..ForceConfig::default() };
        let p = virtual_force_place(&s, 2, 60.0, &cfg, 1).unwrap();
        let km = kmeans_place(&s, 2, 60.0, 1).unwrap();
        for abs in &p.abs_positions {
            let near = km.abs_positions.iter().map(|c| abs.dist_xy(c)).fold(f64::INFINITY, f64::min);
            assert!(near <= 2.0 * cfg.step + 15.0, "ABS far from any centroid: {near}");
        }
    }

    #[test]
    fn placements_are_deterministic() {
        let s = gen_road(20, 1000.0, 8).unwrap();
        let a = kmeans_place(&s, 4, 60.0, 3).unwrap();
        let b = kmeans_place(&s, 4, 60.0, 3).unwrap();
        assert_eq!(a, b);
        let cfg = ForceConfig::default();
        let a = virtual_force_place(&s, 3, 60.0, &cfg, 3).unwrap();
        let b = virtual_force_place(&s, 3, 60.0, &cfg, 3).unwrap();
        assert_eq!(a, b);
    }
}

//! Spatial loss fields (SLF), voxel line integrals, synthetic urban ground
//! truth and SLF estimation from pairwise attenuation measurements.
//!
//! The tomographic channel model reads the excess attenuation between two
//! points as the line integral of the SLF along the segment joining them.
//! The SLF is stored as a piecewise-constant voxel grid in dB per meter, so
//! the line integral reduces to a weighted sum of chord lengths.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{Box3, Point3, Region};
use crate::scenario::{GroundTerminal, Scenario};
use crate::channel::{ChannelModel, RadioConfig};

/// Piecewise-constant spatial loss field. Values are in dB per meter and
/// stored x-fastest: `idx = ix + nx * (iy + ny * iz)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlfGrid {
    pub origin: Point3,
    pub voxel_size: [f64; 3],
    pub dims: [usize; 3],
    pub values: Vec<f64>,
}

impl SlfGrid {
    pub fn zeros(origin: Point3, voxel_size: [f64; 3], dims: [usize; 3]) -> Self {
        assert!(voxel_size.iter().all(|&v| v > 0.0), "voxel size must be positive");
        let n = dims[0] * dims[1] * dims[2];
        Self { origin, voxel_size, dims, values: vec![0.0; n] }
    }

    pub fn idx(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.dims[0] * (iy + self.dims[1] * iz)
    }

    pub fn n_voxels(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn voxel_center(&self, ix: usize, iy: usize, iz: usize) -> Point3 {
        Point3 {
            x: self.origin.x + (ix as f64 + 0.5) * self.voxel_size[0],
            y: self.origin.y + (iy as f64 + 0.5) * self.voxel_size[1],
            z: self.origin.z + (iz as f64 + 0.5) * self.voxel_size[2],
        }
    }

    fn max_corner(&self) -> [f64; 3] {
        [
            self.origin.x + self.voxel_size[0] * self.dims[0] as f64,
            self.origin.y + self.voxel_size[1] * self.dims[1] as f64,
            self.origin.z + self.voxel_size[2] * self.dims[2] as f64,
        ]
    }
}

/// Voxels traversed by the segment `a -> b`, with the chord length through
/// each. Chord lengths sum to the length of the segment clipped to the grid
/// domain. The traversal canonicalizes the segment orientation so that
/// `voxel_traversal(g, a, b) == voxel_traversal(g, b, a)` bit-exactly.
pub fn voxel_traversal(grid: &SlfGrid, a: &Point3, b: &Point3) -> Vec<(usize, f64)> {
    assert!(a != b, "traversal endpoints must differ");
    // Canonical orientation: lexicographically smaller endpoint first.
    let (p, q) = if (a.x, a.y, a.z) <= (b.x, b.y, b.z) { (a, b) } else { (b, a) };
    let len = p.dist(q);
    let pv = [p.x, p.y, p.z];
    let d = [q.x - p.x, q.y - p.y, q.z - p.z];
    let lo = [grid.origin.x, grid.origin.y, grid.origin.z];
    let hi = grid.max_corner();

    // Clip the parameter range [0,1] to the grid box (slab method).
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for ax in 0..3 {
        if d[ax] == 0.0 {
            if pv[ax] < lo[ax] || pv[ax] > hi[ax] {
                return Vec::new();
            }
        } else {
            let ta = (lo[ax] - pv[ax]) / d[ax];
            let tb = (hi[ax] - pv[ax]) / d[ax];
            let (tmin, tmax) = if ta <= tb { (ta, tb) } else { (tb, ta) };
            t0 = t0.max(tmin);
            t1 = t1.min(tmax);
        }
    }
    if t1 <= t0 {
        return Vec::new();
    }

    // Parameters at which the segment crosses a voxel face.
    let mut ts = Vec::new();
    ts.push(t0);
    ts.push(t1);
    for ax in 0..3 {
        if d[ax] == 0.0 {
            continue;
        }
        let n = grid.dims[ax];
        for k in 0..=n {
            let plane = lo[ax] + k as f64 * grid.voxel_size[ax];
            let t = (plane - pv[ax]) / d[ax];
            if t > t0 && t < t1 {
                ts.push(t);
            }
        }
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut out: Vec<(usize, f64)> = Vec::new();
    for w in ts.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        let chord = (tb - ta) * len;
        if chord <= 0.0 {
            continue;
        }
        let tm = 0.5 * (ta + tb);
        let mid = [pv[0] + tm * d[0], pv[1] + tm * d[1], pv[2] + tm * d[2]];
        let mut iv = [0usize; 3];
        for ax in 0..3 {
            let f = ((mid[ax] - lo[ax]) / grid.voxel_size[ax]).floor();
            iv[ax] = (f.max(0.0) as usize).min(grid.dims[ax] - 1);
        }
        let idx = grid.idx(iv[0], iv[1], iv[2]);
        match out.last_mut() {
            Some(last) if last.0 == idx => last.1 += chord,
            _ => out.push((idx, chord)),
        }
    }
    out
}

/// Line integral of the SLF along the segment `a -> b`, in dB.
pub fn line_integral(grid: &SlfGrid, a: &Point3, b: &Point3) -> f64 {
    voxel_traversal(grid, a, b).iter().map(|&(i, c)| grid.values[i] * c).sum()
}

/// A building: axis-aligned box plus a loss density applied inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Building {
    pub shape: Box3,
    pub loss_db_per_m: f64,
}

/// Synthetic city map used as tomographic ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct UrbanMap {
    pub buildings: Vec<Building>,
}

impl UrbanMap {
    pub fn building_containing(&self, p: &Point3) -> Option<usize> {
        self.buildings.iter().position(|b| b.shape.contains(p))
    }

    /// Boxes to exclude from a fly grid (the airspace the buildings occupy).
    pub fn no_fly_boxes(&self) -> Vec<Box3> {
        self.buildings.iter().map(|b| b.shape).collect()
    }
}

/// Rasterize an urban map into an SLF: each voxel takes the loss density of
/// the building containing its center, 0 elsewhere.
pub fn slf_from_urban(map: &UrbanMap, origin: Point3, voxel_size: [f64; 3], dims: [usize; 3]) -> SlfGrid {
    let mut grid = SlfGrid::zeros(origin, voxel_size, dims);
    for iz in 0..dims[2] {
        for iy in 0..dims[1] {
            for ix in 0..dims[0] {
                let c = grid.voxel_center(ix, iy, iz);
                if let Some(b) = map.building_containing(&c) {
                    let idx = grid.idx(ix, iy, iz);
                    grid.values[idx] = map.buildings[b].loss_db_per_m;
                }
            }
        }
    }
    grid
}

/// A pairwise excess-attenuation measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographicMeasurement {
    pub tx: Point3,
    pub rx: Point3,
    pub excess_loss_db: f64,
}

/// Least-squares SLF estimate from pairwise measurements.
///
/// Solves `min_w ||A w - y||^2 + ridge * ||w||^2` where row i of `A` holds
/// the chord lengths of measurement i through each voxel. The normal
/// equations are solved with conjugate gradients from the zero vector, so a
/// rank-deficient unregularized system yields the minimum-norm solution.
/// Negative estimates are clipped to zero after solving.
pub fn estimate_slf(
    measurements: &[TomographicMeasurement],
    origin: Point3,
    voxel_size: [f64; 3],
    dims: [usize; 3],
    ridge: f64,
) -> Result<SlfGrid> {
    if measurements.is_empty() {
        return Err(Error::InvalidArgument("at least one measurement required".into()));
    }
    if ridge < 0.0 {
        return Err(Error::InvalidArgument("ridge must be non-negative".into()));
    }
    let mut grid = SlfGrid::zeros(origin, voxel_size, dims);
    let n = grid.n_voxels();

    let rows: Vec<Vec<(usize, f64)>> =
        measurements.iter().map(|m| voxel_traversal(&grid, &m.tx, &m.rx)).collect();
    let y: Vec<f64> = measurements.iter().map(|m| m.excess_loss_db).collect();

    // b = A^T y
    let mut b = vec![0.0f64; n];
    for (row, &yi) in rows.iter().zip(&y) {
        for &(j, c) in row {
            b[j] += c * yi;
        }
    }

    let apply = |w: &[f64], out: &mut [f64]| {
        // out = (A^T A + ridge I) w
        out.iter_mut().for_each(|v| *v = 0.0);
        for row in &rows {
            let mut dot = 0.0;
            for &(j, c) in row {
                dot += c * w[j];
            }
            for &(j, c) in row {
                out[j] += c * dot;
            }
        }
        for j in 0..out.len() {
            out[j] += ridge * w[j];
        }
    };

    // Conjugate gradients on the normal equations.
    let mut w = vec![0.0f64; n];
    let mut r = b.clone();
    let mut p = b.clone();
    let mut rs: f64 = r.iter().map(|v| v * v).sum();
    let b_norm = rs.sqrt().max(f64::MIN_POSITIVE);
    let mut ap = vec![0.0f64; n];
    let max_iter = 20 * n + 100;
    for _ in 0..max_iter {
        if rs.sqrt() / b_norm < 1e-12 {
            break;
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rs / pap;
        for j in 0..n {
            w[j] += alpha * p[j];
            r[j] -= alpha * ap[j];
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rs_new / rs;
        rs = rs_new;
        for j in 0..n {
            p[j] = r[j] + beta * p[j];
        }
    }

    for v in &mut w {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    grid.values = w;
    Ok(grid)
}

/// Configuration of the synthetic urban scenario generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UrbanConfig {
    pub n_gt: usize,
    pub n_buildings: usize,
    /// Fraction of GTs placed inside a building (the `indoor` flag is set).
    pub indoor_frac: f64,
    pub region: Region,
    pub building_side_m: (f64, f64),
    pub building_height_m: (f64, f64),
    pub loss_db_per_m: f64,
    pub voxel_size_m: [f64; 3],
    pub radio: RadioConfig,
}

/// Generate a synthetic urban scenario: random non-degenerate buildings,
/// outdoor GTs on the streets and a configurable fraction of indoor GTs,
/// with the ground-truth SLF as the scenario channel.
pub fn gen_urban(cfg: &UrbanConfig, seed: u64) -> Result<(Scenario, UrbanMap)> {
    if cfg.n_gt == 0 {
        return Err(Error::InvalidArgument("n_gt must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.indoor_frac) {
        return Err(Error::InvalidArgument("indoor_frac must lie in [0,1]".into()));
    }
    if cfg.n_buildings == 0 && cfg.indoor_frac > 0.0 {
        return Err(Error::InvalidArgument("indoor GTs require at least one building".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let r = &cfg.region;

    let mut buildings = Vec::with_capacity(cfg.n_buildings);
    for _ in 0..cfg.n_buildings {
        let sx = rng.gen_range(cfg.building_side_m.0..=cfg.building_side_m.1);
        let sy = rng.gen_range(cfg.building_side_m.0..=cfg.building_side_m.1);
        let h = rng.gen_range(cfg.building_height_m.0..=cfg.building_height_m.1);
        let x0 = rng.gen_range(r.x_min..(r.x_max - sx).max(r.x_min + 1e-9));
        let y0 = rng.gen_range(r.y_min..(r.y_max - sy).max(r.y_min + 1e-9));
        buildings.push(Building {
            shape: Box3 { x_min: x0, x_max: x0 + sx, y_min: y0, y_max: y0 + sy, z_min: 0.0, z_max: h },
            loss_db_per_m: cfg.loss_db_per_m,
        });
    }
    let map = UrbanMap { buildings };

    let n_indoor = (cfg.indoor_frac * cfg.n_gt as f64).round() as usize;
    let mut terminals = Vec::with_capacity(cfg.n_gt);
    for id in 0..cfg.n_gt {
        let indoor = id < n_indoor;
        let pos = if indoor {
            let b = &map.buildings[rng.gen_range(0..map.buildings.len())].shape;
            // Keep indoor GTs away from the walls so they sit strictly inside.
            let mx = 0.1 * (b.x_max - b.x_min);
            let my = 0.1 * (b.y_max - b.y_min);
            Point3::ground(rng.gen_range(b.x_min + mx..b.x_max - mx), rng.gen_range(b.y_min + my..b.y_max - my))
        } else {
            // Rejection-sample a street position.
            loop {
                let p = Point3::ground(rng.gen_range(r.x_min..r.x_max), rng.gen_range(r.y_min..r.y_max));
                if map.building_containing(&p).is_none() {
                    break p;
                }
            }
        };
        terminals.push(GroundTerminal { id: id as u32, pos, indoor });
    }

    let dims = [
        ((r.x_max - r.x_min) / cfg.voxel_size_m[0]).ceil() as usize,
        ((r.y_max - r.y_min) / cfg.voxel_size_m[1]).ceil() as usize,
        ((cfg.building_height_m.1) / cfg.voxel_size_m[2]).ceil() as usize,
    ];
    let slf = slf_from_urban(&map, Point3::new(r.x_min, r.y_min, 0.0), cfg.voxel_size_m, dims);

    let scenario = Scenario {
        terminals,
        region: *r,
        radio: cfg.radio,
        channel: ChannelModel::Tomographic { slf },
        flygrid: None,
        seed,
    };
    Ok((scenario, map))
}

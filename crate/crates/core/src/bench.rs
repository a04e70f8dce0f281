//! Benchmark experiments behind the CLI: configuration types, the four
//! experiment drivers and the one-time link-budget calibration.
//!
//! Each driver is a pure function of (config, seed) and writes its CSVs in
//! a deterministic row order, so re-running with the same inputs yields
//! bit-identical files. The only exception is the `wall_ms` timing column
//! of `compare.csv`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::RadioConfig;
use crate::error::{Error, Result};
use crate::geo::{Point3, Region};
use crate::io::{fmt_sig9, load_scenario, CsvWriter};
use crate::metrics::{evaluate, Placement};
use crate::place2d::{invert_coverage_radius, kmeans_place, kmeans_run, spiral_place, DiscCoverInstance};
use crate::place3d::{build_coverage_matrix, radio_map_place};
use crate::radiomap::{gen_urban, UrbanConfig, UrbanMap};
use crate::scenario::{build_flygrid, gen_clustered, gen_road, Scenario};
use crate::svg::{bar_chart, line_plot, scatter_plot, Series};
use crate::adaptive::{run_adaptive, AdaptiveRun, MotionModel, Policy, SgdConfig, TrajectoryLog};

/// Where the experiment's scenario comes from: a file on disk or one of
/// the deterministic generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ScenarioSource {
    File { path: String },
    Road { n_gt: usize, length_m: f64, seed: u64 },
    Clustered { n_gt: usize, n_hotspots: usize, spread_m: f64, region: Region, seed: u64 },
    Urban { config: UrbanConfig, seed: u64 },
}

impl ScenarioSource {
    /// Materialize the scenario. File paths resolve relative to `base_dir`
    /// (the config file's directory). `seed_override` replaces the
    /// generator seed when given.
    pub fn resolve(&self, base_dir: &Path, seed_override: Option<u64>) -> Result<(Scenario, Option<UrbanMap>)> {
        match self {
            ScenarioSource::File { path } => {
                if seed_override.is_some() {
                    return Err(Error::Config("--seed cannot override a scenario loaded from file".into()));
                }
                Ok((load_scenario(&base_dir.join(path))?, None))
            }
            ScenarioSource::Road { n_gt, length_m, seed } => {
                Ok((gen_road(*n_gt, *length_m, seed_override.unwrap_or(*seed))?, None))
            }
            ScenarioSource::Clustered { n_gt, n_hotspots, spread_m, region, seed } => Ok((
                gen_clustered(*n_gt, *n_hotspots, *spread_m, *region, seed_override.unwrap_or(*seed))?,
                None,
            )),
            ScenarioSource::Urban { config, seed } => {
                let (s, map) = gen_urban(config, seed_override.unwrap_or(*seed))?;
                Ok((s, Some(map)))
            }
        }
    }
}

fn default_heights() -> Vec<f64> {
    vec![20.0, 40.0, 80.0, 120.0]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Toy1dConfig {
    pub scenario: ScenarioSource,
    /// Heights for the position sweep.
    #[serde(default = "default_heights")]
    pub heights: Vec<f64>,
    /// Replaces the scenario's link budget (used by the calibrated config).
    #[serde(default)]
    pub radio: Option<RadioConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClustersConfig {
    pub scenario: ScenarioSource,
    pub k: usize,
    pub altitude_m: f64,
    #[serde(default)]
    pub algo_seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareConfig {
    pub urban: UrbanConfig,
    pub n_seeds: u64,
    pub base_seed: u64,
    pub flygrid_spacing_m: f64,
    /// Flight altitude used by the 2D algorithms.
    pub altitude_m: f64,
    /// Link-budget margin subtracted from tx power when the spiral
    /// algorithm sizes its coverage radius; compensates for building
    /// shadowing the free-space radius cannot see.
    pub spiral_fade_margin_db: f64,
    pub roster: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PolicySpec {
    Sector { delta: f64 },
    Sgd {
        #[serde(default)]
        step_size: Option<f64>,
        #[serde(default)]
        alpha: Option<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaptiveConfig {
    pub scenario: ScenarioSource,
    pub policy: PolicySpec,
    pub steps: usize,
    pub dt: f64,
    pub n_abs: usize,
    pub altitude_m: f64,
    /// Top speed of the GT random-velocity motion model.
    pub max_speed_mps: f64,
    #[serde(default)]
    pub motion_seed: u64,
    #[serde(default)]
    pub remove_abs_at: Option<(usize, usize)>,
}

/// Top-level config file contents, dispatched on the `experiment` tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum BenchConfig {
    Toy1d(Toy1dConfig),
    Clusters(ClustersConfig),
    Compare(CompareConfig),
    Adaptive(AdaptiveConfig),
}

pub fn load_bench_config(path: &Path) -> Result<BenchConfig> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn sweep_xs(region: &Region) -> Vec<f64> {
    let n = (region.x_max - region.x_min).floor() as usize;
    (0..=n).map(|i| region.x_min + i as f64).collect()
}

fn eval_single_abs(scenario: &Scenario, pos: Point3) -> Result<(f64, f64)> {
    let placement = Placement::with_strongest(scenario, vec![pos])?;
    let qos = evaluate(scenario, &placement)?;
    Ok((qos.sum_rate_bps, qos.min_rate_bps))
}

#[derive(Debug, Clone)]
pub struct Toy1dSummary {
    /// One (x, sum, min) curve per height, in the config's height order.
    pub position_curves: Vec<(f64, Vec<(f64, f64, f64)>)>,
    /// x maximizing the sum rate at the first height.
    pub peak_x: f64,
    pub peak_sum_rate: f64,
    pub min_rate_at_peak: f64,
    /// (h, sum, min) at the fixed peak x.
    pub height_curve: Vec<(f64, f64, f64)>,
}

/// Fig. 2 sweep: ABS position along the road at several heights, then a
/// height sweep at the sum-rate-optimal position of the first height.
pub fn cmd_toy1d(cfg: &Toy1dConfig, base_dir: &Path, out: &Path) -> Result<Toy1dSummary> {
    if cfg.heights.is_empty() {
        return Err(Error::Config("heights must be non-empty".into()));
    }
    let (mut scenario, _) = cfg.scenario.resolve(base_dir, None)?;
    if let Some(radio) = cfg.radio {
        scenario.radio = radio;
    }
    if scenario.terminals.iter().any(|t| t.pos.y != 0.0 || t.pos.z != 0.0) {
        return Err(Error::Config("toy1d needs a 1D scenario (all GTs on the x axis)".into()));
    }
    std::fs::create_dir_all(out)?;

    let xs = sweep_xs(&scenario.region);
    let mut pos_csv = CsvWriter::new(&out.join("toy1d_position.csv"), &["x", "height", "sum_rate", "min_rate"]);
    let mut position_curves = Vec::with_capacity(cfg.heights.len());
    for &h in &cfg.heights {
        let mut curve = Vec::with_capacity(xs.len());
        for &x in &xs {
            let (sum, min) = eval_single_abs(&scenario, Point3::new(x, 0.0, h))?;
            pos_csv.row(&[fmt_sig9(x), fmt_sig9(h), fmt_sig9(sum), fmt_sig9(min)]);
            curve.push((x, sum, min));
        }
        position_curves.push((h, curve));
    }
    pos_csv.finish()?;

    let first = &position_curves[0].1;
    let (peak_x, peak_sum_rate, min_rate_at_peak) = first
        .iter()
        .fold((first[0].0, f64::NEG_INFINITY, 0.0), |acc, &(x, s, m)| if s > acc.1 { (x, s, m) } else { acc });

    let mut h_csv = CsvWriter::new(&out.join("toy1d_height.csv"), &["height", "sum_rate", "min_rate"]);
    let mut height_curve = Vec::new();
    for h in 10..=500 {
        let h = h as f64;
        let (sum, min) = eval_single_abs(&scenario, Point3::new(peak_x, 0.0, h))?;
        h_csv.row(&[fmt_sig9(h), fmt_sig9(sum), fmt_sig9(min)]);
        height_curve.push((h, sum, min));
    }
    h_csv.finish()?;

    let sum_series: Vec<Series> = position_curves
        .iter()
        .map(|(h, c)| Series { label: format!("h = {h} m"), points: c.iter().map(|&(x, s, _)| (x, s / 1e6)).collect() })
        .collect();
    line_plot(&out.join("toy1d_sum_rate.svg"), "Sum rate vs ABS position", "x (m)", "sum rate (Mbps)", &sum_series)?;
    let min_series: Vec<Series> = position_curves
        .iter()
        .map(|(h, c)| Series { label: format!("h = {h} m"), points: c.iter().map(|&(x, _, m)| (x, m / 1e6)).collect() })
        .collect();
    line_plot(&out.join("toy1d_min_rate.svg"), "Min rate vs ABS position", "x (m)", "min rate (Mbps)", &min_series)?;
    let h_series = [
        Series { label: "sum rate".into(), points: height_curve.iter().map(|&(h, s, _)| (h, s / 1e6)).collect() },
        Series { label: "min rate".into(), points: height_curve.iter().map(|&(h, _, m)| (h, m / 1e6)).collect() },
    ];
    line_plot(&out.join("toy1d_height.svg"), "Rates vs ABS height", "h (m)", "rate (Mbps)", &h_series)?;

    Ok(Toy1dSummary { position_curves, peak_x, peak_sum_rate, min_rate_at_peak, height_curve })
}

#[derive(Debug, Clone)]
pub struct ClustersSummary {
    pub centroids: Vec<[f64; 2]>,
    pub assignment: Vec<usize>,
    pub objective_history: Vec<f64>,
    pub qos_min_rate_bps: f64,
}

/// Fig. 3 regeneration: K-means clustering of the GT set plus the QoS of
/// the resulting placement.
pub fn cmd_clusters(cfg: &ClustersConfig, base_dir: &Path, out: &Path, seed_override: Option<u64>) -> Result<ClustersSummary> {
    let (scenario, _) = cfg.scenario.resolve(base_dir, seed_override)?;
    std::fs::create_dir_all(out)?;
    let points: Vec<[f64; 2]> = scenario.terminals.iter().map(|t| [t.pos.x, t.pos.y]).collect();
    let km = kmeans_run(&points, cfg.k, cfg.algo_seed)?;

    let placement = kmeans_place(&scenario, cfg.k, cfg.altitude_m, cfg.algo_seed)?;
    let qos = evaluate(&scenario, &placement)?;

    let mut gt_csv = CsvWriter::new(&out.join("clusters_points.csv"), &["gt_id", "x", "y", "cluster"]);
    for (t, &c) in scenario.terminals.iter().zip(&km.assignment) {
        gt_csv.row(&[t.id.to_string(), fmt_sig9(t.pos.x), fmt_sig9(t.pos.y), c.to_string()]);
    }
    gt_csv.finish()?;
    let mut c_csv = CsvWriter::new(&out.join("clusters_centroids.csv"), &["cluster", "x", "y"]);
    for (i, c) in km.centroids.iter().enumerate() {
        c_csv.row(&[i.to_string(), fmt_sig9(c[0]), fmt_sig9(c[1])]);
    }
    c_csv.finish()?;
    let mut o_csv = CsvWriter::new(&out.join("clusters_objective.csv"), &["iteration", "objective"]);
    for (i, obj) in km.objective_history.iter().enumerate() {
        o_csv.row(&[i.to_string(), fmt_sig9(*obj)]);
    }
    o_csv.finish()?;

    let mut series: Vec<Series> = (0..cfg.k)
        .map(|c| Series {
            label: format!("cluster {c}"),
            points: scenario
                .terminals
                .iter()
                .zip(&km.assignment)
                .filter(|&(_, &a)| a == c)
                .map(|(t, _)| (t.pos.x, t.pos.y))
                .collect(),
        })
        .collect();
    series.push(Series { label: "centroids".into(), points: km.centroids.iter().map(|c| (c[0], c[1])).collect() });
    scatter_plot(&out.join("clusters.svg"), "K-means GT clustering", "x (m)", "y (m)", &series)?;

    Ok(ClustersSummary {
        centroids: km.centroids,
        assignment: km.assignment,
        objective_history: km.objective_history,
        qos_min_rate_bps: qos.min_rate_bps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub algo: String,
    pub seed: u64,
    pub n_abs: usize,
    pub feasible: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct CompareSummary {
    pub rows: Vec<CompareRow>,
}

impl CompareSummary {
    pub fn mean_n_abs(&self, algo: &str) -> f64 {
        let counts: Vec<usize> = self.rows.iter().filter(|r| r.algo == algo).map(|r| r.n_abs).collect();
        counts.iter().sum::<usize>() as f64 / counts.len().max(1) as f64
    }
}

/// Smallest k for which the K-means placement meets the min rate under the
/// ground-truth channel.
fn kmeans_incremental(scenario: &Scenario, altitude: f64, seed: u64) -> Result<(usize, bool)> {
    for k in 1..=scenario.n_gt() {
        let placement = kmeans_place(scenario, k, altitude, seed)?;
        let qos = evaluate(scenario, &placement)?;
        if qos.min_rate_bps >= scenario.radio.min_rate_bps {
            return Ok((k, true));
        }
    }
    Ok((scenario.n_gt(), false))
}

fn spiral_entry(scenario: &Scenario, altitude: f64, fade_margin_db: f64) -> Result<(usize, bool)> {
    let mut radio = scenario.radio;
    radio.tx_power_dbm -= fade_margin_db;
    let r = match invert_coverage_radius(&radio, altitude) {
        Ok(r) => r,
        Err(Error::MinRateUnachievable { .. }) => return Ok((0, false)),
        Err(e) => return Err(e),
    };
    let instance = DiscCoverInstance::from_scenario(scenario, r, altitude);
    let placement = spiral_place(&instance)?;
    let qos = evaluate(scenario, &placement)?;
    Ok((placement.n_abs(), qos.min_rate_bps >= scenario.radio.min_rate_bps))
}

fn radio_map_entry(scenario: &Scenario, map: &UrbanMap, spacing: f64) -> Result<(usize, bool)> {
    let flygrid = build_flygrid(&scenario.region, spacing, &map.no_fly_boxes())?;
    let matrix = build_coverage_matrix(scenario, &flygrid)?;
    let placement = match radio_map_place(&matrix, &flygrid) {
        Ok(p) => p,
        Err(Error::UncoverableGts(_)) => return Ok((0, false)),
        Err(e) => return Err(e),
    };
    let qos = evaluate(scenario, &placement)?;
    Ok((placement.n_abs(), qos.min_rate_bps >= scenario.radio.min_rate_bps))
}

/// Fig. 5 benchmark: minimum ABS counts of the roster algorithms over a
/// batch of seeded urban scenarios, feasibility re-checked under the
/// ground-truth tomographic channel.
pub fn cmd_compare(cfg: &CompareConfig, out: &Path, seed_override: Option<u64>) -> Result<CompareSummary> {
    if cfg.roster.is_empty() {
        return Err(Error::Config("roster must be non-empty".into()));
    }
    for algo in &cfg.roster {
        if !matches!(algo.as_str(), "kmeans_incremental" | "spiral" | "radio_map") {
            return Err(Error::Config(format!("unknown algorithm '{algo}'")));
        }
    }
    if cfg.n_seeds == 0 {
        return Err(Error::Config("n_seeds must be >= 1".into()));
    }
    std::fs::create_dir_all(out)?;
    let base_seed = seed_override.unwrap_or(cfg.base_seed);

    let mut jobs: Vec<(String, u64)> = Vec::new();
    for algo in &cfg.roster {
        for i in 0..cfg.n_seeds {
            jobs.push((algo.clone(), base_seed + i));
        }
    }
    // Deterministic row order regardless of scheduling.
    jobs.sort();

    let rows: Result<Vec<CompareRow>> = jobs
        .par_iter()
        .map(|(algo, seed)| {
            let (scenario, map) = gen_urban(&cfg.urban, *seed)?;
            let t0 = Instant::now();
            let (n_abs, feasible) = match algo.as_str() {
                "kmeans_incremental" => kmeans_incremental(&scenario, cfg.altitude_m, *seed)?,
                "spiral" => spiral_entry(&scenario, cfg.altitude_m, cfg.spiral_fade_margin_db)?,
                "radio_map" => radio_map_entry(&scenario, &map, cfg.flygrid_spacing_m)?,
                _ => unreachable!("roster validated above"),
            };
            let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
            Ok(CompareRow { algo: algo.clone(), seed: *seed, n_abs, feasible, wall_ms })
        })
        .collect();
    let rows = rows?;

    let mut csv = CsvWriter::new(&out.join("compare.csv"), &["algo", "seed", "n_abs", "feasible", "wall_ms"]);
    for r in &rows {
        csv.row(&[
            r.algo.clone(),
            r.seed.to_string(),
            r.n_abs.to_string(),
            r.feasible.to_string(),
            fmt_sig9(r.wall_ms),
        ]);
    }
    csv.finish()?;

    let summary = CompareSummary { rows };
    let bars: Vec<(String, f64)> = cfg.roster.iter().map(|a| (a.clone(), summary.mean_n_abs(a))).collect();
    bar_chart(&out.join("compare.svg"), "Mean ABS count per algorithm", "mean ABS count", &bars)?;
    Ok(summary)
}

/// Random constant-velocity tracks for every GT over the run's horizon.
fn random_motion(scenario: &Scenario, max_speed: f64, horizon: f64, seed: u64) -> MotionModel {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut motion = MotionModel::static_model();
    for t in &scenario.terminals {
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let speed = rng.gen_range(0.0..=max_speed);
        let end = scenario.region.clamp_xy(Point3 {
            x: t.pos.x + speed * angle.cos() * horizon,
            y: t.pos.y + speed * angle.sin() * horizon,
            z: t.pos.z,
        });
        motion = motion.with_track(t.id, vec![(0.0, t.pos), (horizon, end)]);
    }
    motion
}

/// Thin wrapper over the adaptive simulator with a random-walk motion
/// model; logs per-tick ABS positions and QoS.
pub fn cmd_adaptive(cfg: &AdaptiveConfig, base_dir: &Path, out: &Path, seed_override: Option<u64>) -> Result<TrajectoryLog> {
    let (scenario, _) = cfg.scenario.resolve(base_dir, None)?;
    std::fs::create_dir_all(out)?;
    let motion_seed = seed_override.unwrap_or(cfg.motion_seed);
    let horizon = cfg.steps as f64 * cfg.dt;
    let motion = random_motion(&scenario, cfg.max_speed_mps, horizon, motion_seed);

    let policy = match &cfg.policy {
        PolicySpec::Sector { delta } => Policy::Sector { delta: *delta },
        PolicySpec::Sgd { step_size, alpha } => {
            let mut sgd = SgdConfig::default();
            if let Some(s) = step_size {
                sgd.step_size = *s;
            }
            if let Some(a) = alpha {
                sgd.alpha = *a;
            }
            Policy::Sgd { cfg: sgd }
        }
    };
    let initial_abs = if cfg.n_abs == 1 {
        let r = &scenario.region;
        vec![Point3::new(0.5 * (r.x_min + r.x_max), 0.5 * (r.y_min + r.y_max), cfg.altitude_m)]
    } else {
        kmeans_place(&scenario, cfg.n_abs, cfg.altitude_m, motion_seed)?.abs_positions
    };
    let run = AdaptiveRun { steps: cfg.steps, dt: cfg.dt, remove_abs_at: cfg.remove_abs_at };
    let log = run_adaptive(&scenario, &motion, &policy, initial_abs, &run)?;

    let mut csv = CsvWriter::new(&out.join("adaptive.csv"), &["t", "abs_id", "x", "y", "z", "sum_rate", "min_rate"]);
    for rec in &log.records {
        for (i, p) in rec.abs_positions.iter().enumerate() {
            csv.row(&[
                fmt_sig9(rec.t),
                i.to_string(),
                fmt_sig9(p.x),
                fmt_sig9(p.y),
                fmt_sig9(p.z),
                fmt_sig9(rec.qos.sum_rate_bps),
                fmt_sig9(rec.qos.min_rate_bps),
            ]);
        }
    }
    csv.finish()?;

    let series = [
        Series {
            label: "min rate".into(),
            points: log.records.iter().map(|r| (r.t, r.qos.min_rate_bps / 1e6)).collect(),
        },
        Series {
            label: "sum rate / n_gt".into(),
            points: log.records.iter().map(|r| (r.t, r.qos.sum_rate_bps / scenario.n_gt() as f64 / 1e6)).collect(),
        },
    ];
    line_plot(&out.join("adaptive_rates.svg"), "Rates over time", "t (s)", "rate (Mbps)", &series)?;
    Ok(log)
}

/// Dispatch a loaded config to its driver, discarding the summary.
pub fn run(cfg: &BenchConfig, base_dir: &Path, out: &Path, seed_override: Option<u64>) -> Result<()> {
    match cfg {
        BenchConfig::Toy1d(c) => {
            if seed_override.is_some() {
                let mut c = c.clone();
                if let ScenarioSource::Road { seed, .. } = &mut c.scenario {
                    *seed = seed_override.unwrap();
                }
                cmd_toy1d(&c, base_dir, out)?;
            } else {
                cmd_toy1d(c, base_dir, out)?;
            }
        }
        BenchConfig::Clusters(c) => {
            cmd_clusters(c, base_dir, out, seed_override)?;
        }
        BenchConfig::Compare(c) => {
            cmd_compare(c, out, seed_override)?;
        }
        BenchConfig::Adaptive(c) => {
            cmd_adaptive(c, base_dir, out, seed_override)?;
        }
    }
    Ok(())
}

/// The canonical road scenario of the calibrated toy example.
pub const FIG2_N_GT: usize = 10;
pub const FIG2_ROAD_LENGTH_M: f64 = 1000.0;
pub const FIG2_SEED: u64 = 1;
pub const FIG2_TARGET_SUM_BPS: f64 = 350e6;

/// Solve for the tx power putting the h = 20 m peak sum rate of the
/// canonical road scenario at the target, by bisection (the peak is
/// monotone in tx power). Returns the calibrated link budget.
pub fn calibrate_fig2() -> Result<RadioConfig> {
    let mut scenario = gen_road(FIG2_N_GT, FIG2_ROAD_LENGTH_M, FIG2_SEED)?;
    let bandwidth = 20e6;
    let mut radio = RadioConfig {
        carrier_freq_hz: 2.4e9,
        bandwidth_hz: bandwidth,
        noise_power_dbm: RadioConfig::thermal_noise_dbm(bandwidth),
        tx_power_dbm: 0.0,
        min_rate_bps: 1e6,
    };
    let xs = sweep_xs(&scenario.region);
    let peak = |tx: f64, scenario: &mut Scenario| -> Result<f64> {
        scenario.radio = RadioConfig { tx_power_dbm: tx, ..radio };
        let mut best = f64::NEG_INFINITY;
        for &x in &xs {
            let (sum, _) = eval_single_abs(scenario, Point3::new(x, 0.0, 20.0))?;
            best = best.max(sum);
        }
        Ok(best)
    };
    let (mut lo, mut hi) = (-60.0, 60.0);
    if peak(lo, &mut scenario)? > FIG2_TARGET_SUM_BPS || peak(hi, &mut scenario)? < FIG2_TARGET_SUM_BPS {
        return Err(Error::Config("calibration target outside the bisection bracket".into()));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if peak(mid, &mut scenario)? < FIG2_TARGET_SUM_BPS {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    radio.tx_power_dbm = 0.5 * (lo + hi);
    Ok(radio)
}

/// The calibrated toy-example config; written to `configs/fig2.json`.
pub fn fig2_bench_config(radio: RadioConfig) -> BenchConfig {
    BenchConfig::Toy1d(Toy1dConfig {
        scenario: ScenarioSource::Road { n_gt: FIG2_N_GT, length_m: FIG2_ROAD_LENGTH_M, seed: FIG2_SEED },
        heights: default_heights(),
        radio: Some(radio),
    })
}

/// Locate the repo's canonical config directory from a test or binary.
pub fn repo_config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use skyplace::adaptive::softmin_utility_and_gradient;
use skyplace::bench::{
    cmd_clusters, cmd_compare, cmd_toy1d, load_bench_config, repo_config_path, BenchConfig, Toy1dSummary,
};
use skyplace::channel::{mean_path_loss_empirical, rate_from_path_loss, EmpiricalLoSParams};
use skyplace::geo::Point3;
use skyplace::metrics::Placement;
use skyplace::place2d::{disc_cover_oracle, sparse_place, spiral_place, DiscCoverInstance, SparseConfig};
use skyplace::radiomap::{estimate_slf, line_integral, SlfGrid, TomographicMeasurement};
use skyplace::scenario::{default_radio, gen_clustered, gen_road};

fn check(n: usize, desc: &str, f: impl FnOnce() + UnwindSafe) {
    match catch_unwind(f) {
        Ok(()) => println!("ACCEPTANCE {n}: PASS - {desc}"),
        Err(e) => {
            println!("ACCEPTANCE {n}: FAIL - {desc}");
            resume_unwind(e);
        }
    }
}

fn fig2_toy1d_config() -> skyplace::bench::Toy1dConfig {
    match load_bench_config(&repo_config_path("fig2.json")).expect("configs/fig2.json loads") {
        BenchConfig::Toy1d(c) => c,
        _ => panic!("fig2.json is not a toy1d config"),
    }
}

fn fig2_summary() -> &'static Toy1dSummary {
    static SUMMARY: OnceLock<Toy1dSummary> = OnceLock::new();
    SUMMARY.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        cmd_toy1d(&fig2_toy1d_config(), dir.path(), dir.path()).unwrap()
    })
}

#[test]
fn criterion_01_fig2a_calibrated_peak() {
    check(1, "Fig. 2a peak sum rate 350 Mbps +/- 10%, min rate in [0.5, 8] Mbps, < 5 s", || {
        let dir = tempfile::tempdir().unwrap();
        let t0 = Instant::now();
        let s = cmd_toy1d(&fig2_toy1d_config(), dir.path(), dir.path()).unwrap();
        let elapsed = t0.elapsed().as_secs_f64();
        assert!(elapsed < 5.0, "toy1d took {elapsed:.1} s");
        assert_eq!(s.position_curves[0].0, 20.0, "first sweep height must be 20 m");
        assert!(
            (s.peak_sum_rate - 350e6).abs() <= 35e6,
            "peak sum rate {:.1} Mbps",
            s.peak_sum_rate / 1e6
        );
        assert!(
            s.min_rate_at_peak >= 0.5e6 && s.min_rate_at_peak <= 8e6,
            "min rate at peak {:.2} Mbps",
            s.min_rate_at_peak / 1e6
        );
    });
}

#[test]
fn criterion_02_fig2b_strictly_decreasing() {
    check(2, "Fig. 2b sum and min rate strictly decreasing over h in [10, 500] m", || {
        let s = fig2_summary();
        for w in s.height_curve.windows(2) {
            assert!(w[1].1 < w[0].1, "sum rate not decreasing at h = {}", w[1].0);
            assert!(w[1].2 < w[0].2, "min rate not decreasing at h = {}", w[1].0);
        }
    });
}

/// Number of local-maximum plateaus of a sampled curve (runs of equal
/// values higher than both neighboring runs).
fn local_max_plateaus(v: &[f64]) -> usize {
    let mut runs: Vec<(f64, usize)> = Vec::new();
    for &x in v {
        match runs.last_mut() {
            Some((val, len)) if *val == x => *len += 1,
            _ => runs.push((x, 1)),
        }
    }
    (0..runs.len())
        .filter(|&i| {
            let left_ok = i == 0 || runs[i - 1].0 < runs[i].0;
            let right_ok = i + 1 == runs.len() || runs[i + 1].0 < runs[i].0;
            left_ok && right_ok
        })
        .count()
}

#[test]
fn criterion_03_min_rate_unimodal_midpoint() {
    check(3, "min-rate curve has one local-max plateau at the extreme-GT midpoint (100 seeds)", || {
        let radio = fig2_toy1d_config().radio.expect("fig2 config pins the link budget");
        for seed in 0..100u64 {
            let mut s = gen_road(10, 1000.0, seed).unwrap();
            s.radio = radio;
            let mut curve = Vec::with_capacity(1001);
            for x in 0..=1000 {
                let abs = Point3::new(x as f64, 0.0, 20.0);
                let placement = Placement::with_strongest(&s, vec![abs]).unwrap();
                let qos = skyplace::metrics::evaluate(&s, &placement).unwrap();
                curve.push(qos.min_rate_bps);
            }
            assert_eq!(local_max_plateaus(&curve), 1, "seed {seed}");
            let argmax = curve
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0 as f64;
            let xs: Vec<f64> = s.terminals.iter().map(|t| t.pos.x).collect();
            let midpoint = 0.5
                * (xs.iter().cloned().fold(f64::INFINITY, f64::min)
                    + xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            assert!((argmax - midpoint).abs() <= 1.0, "seed {seed}: argmax {argmax}, midpoint {midpoint}");
        }
    });
}

#[test]
fn criterion_04_sum_rate_flattens_with_height() {
    check(4, "sum-rate spread over x smaller at h = 120 m than at h = 20 m", || {
        let s = fig2_summary();
        let spread = |h: f64| {
            let curve = &s.position_curves.iter().find(|(hh, _)| *hh == h).expect("height swept").1;
            let max = curve.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
            let min = curve.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
            max - min
        };
        assert!(spread(120.0) < spread(20.0));
    });
}

#[test]
fn criterion_05_empirical_model_interior_optimum() {
    check(5, "empirical-model rate vs height has an interior maximizer at 200 m offset", || {
        let params = EmpiricalLoSParams::urban();
        let radio = default_radio();
        let gt = Point3::ground(200.0, 0.0);
        let mut best_h = 0usize;
        let mut best_rate = f64::NEG_INFINITY;
        for h in 1..=500usize {
            let abs = Point3::new(0.0, 0.0, h as f64);
            let pl = mean_path_loss_empirical(&abs, &gt, radio.carrier_freq_hz, &params).unwrap();
            let rate = rate_from_path_loss(pl, &radio);
            if rate > best_rate {
                best_rate = rate;
                best_h = h;
            }
        }
        assert!(best_h > 1 && best_h < 500, "maximizer at boundary h = {best_h}");
    });
}

#[test]
fn criterion_06_disc_cover_vs_oracle() {
    check(6, "spiral/sparse valid and >= oracle on 200 instances; spiral <= 2x oracle on >= 95%", || {
        let t0 = Instant::now();
        let mut within_2x = 0usize;
        let n_instances = 200usize;
        for seed in 0..n_instances as u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=10);
            let gt_xy: Vec<[f64; 2]> =
                (0..n).map(|_| [rng.gen_range(0.0..400.0), rng.gen_range(0.0..400.0)]).collect();
            let instance = DiscCoverInstance::new(gt_xy, 100.0, 50.0);
            let centers = |p: &Placement| -> Vec<[f64; 2]> {
                p.abs_positions.iter().map(|q| [q.x, q.y]).collect()
            };
            let oracle = disc_cover_oracle(&instance).unwrap();
            let spiral = spiral_place(&instance).unwrap();
            let sparse = sparse_place(&instance, &SparseConfig::default()).unwrap();
            assert!(instance.is_valid_cover(&centers(&oracle)), "seed {seed}: oracle cover invalid");
            assert!(instance.is_valid_cover(&centers(&spiral)), "seed {seed}: spiral cover invalid");
            assert!(instance.is_valid_cover(&centers(&sparse)), "seed {seed}: sparse cover invalid");
            assert!(spiral.n_abs() >= oracle.n_abs(), "seed {seed}: spiral beat the oracle");
            assert!(sparse.n_abs() >= oracle.n_abs(), "seed {seed}: sparse beat the oracle");
            if spiral.n_abs() <= 2 * oracle.n_abs() {
                within_2x += 1;
            }
        }
        assert!(
            within_2x * 100 >= 95 * n_instances,
            "spiral within 2x oracle on only {within_2x}/{n_instances}"
        );
        let elapsed = t0.elapsed().as_secs_f64();
        assert!(elapsed < 60.0, "oracle comparison took {elapsed:.1} s");
    });
}

#[test]
fn criterion_07_kmeans_properties() {
    check(7, "K-means objective non-increasing (100 runs); 7-cluster regeneration is a Voronoi fit", || {
        let region = skyplace::geo::Region::new(0.0, 1000.0, 0.0, 1000.0, 0.0, 300.0);
        let s = gen_clustered(100, 7, 60.0, region, 3).unwrap();
        let pts: Vec<[f64; 2]> = s.terminals.iter().map(|t| [t.pos.x, t.pos.y]).collect();
        for seed in 0..100u64 {
            let res = skyplace::place2d::kmeans_run(&pts, 7, seed).unwrap();
            for w in res.objective_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "seed {seed}: objective increased");
            }
        }
        let cfg = match load_bench_config(&repo_config_path("clusters.json")).unwrap() {
            BenchConfig::Clusters(c) => c,
            _ => panic!("clusters.json is not a clusters config"),
        };
        let dir = tempfile::tempdir().unwrap();
        let summary = cmd_clusters(&cfg, dir.path(), dir.path(), None).unwrap();
        assert_eq!(summary.centroids.len(), 7);
        for (g, &assigned) in pts.iter().zip(&summary.assignment) {
            let nearest = summary
                .centroids
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    let da = (g[0] - a.1[0]).powi(2) + (g[1] - a.1[1]).powi(2);
                    let db = (g[0] - b.1[0]).powi(2) + (g[1] - b.1[1]).powi(2);
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap()
                .0;
            let d_near = (g[0] - summary.centroids[nearest][0]).powi(2)
                + (g[1] - summary.centroids[nearest][1]).powi(2);
            let d_own =
                (g[0] - summary.centroids[assigned][0]).powi(2) + (g[1] - summary.centroids[assigned][1]).powi(2);
            assert!(d_own <= d_near + 1e-9, "GT not nearest its own centroid");
        }
    });
}

#[test]
fn criterion_08_slf_recovery_and_prediction() {
    check(8, "noiseless SLF recovery within 1e-6 dB/m; held-out prediction within 5%", || {
        let dims = [4usize, 4, 2];
        let voxel = [5.0f64, 5.0, 5.0];
        let origin = Point3::new(0.0, 0.0, 0.0);
        let mut truth = SlfGrid::zeros(origin, voxel, dims);
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for v in truth.values.iter_mut() {
            *v = rng.gen_range(0.5..2.0);
        }
        let random_endpoint = |rng: &mut ChaCha12Rng, side: usize| -> Point3 {
            // A point just outside one of the four vertical faces.
            let (x, y) = match side {
                0 => (-1.0, rng.gen_range(0.0..20.0)),
                1 => (21.0, rng.gen_range(0.0..20.0)),
                2 => (rng.gen_range(0.0..20.0), -1.0),
                _ => (rng.gen_range(0.0..20.0), 21.0),
            };
            Point3::new(x, y, rng.gen_range(0.5..9.5))
        };
        let mut pairs = Vec::new();
        for _ in 0..800 {
            let side_a = rng.gen_range(0..4);
            let a = random_endpoint(&mut rng, side_a);
            let side_b = rng.gen_range(0..4);
            let b = random_endpoint(&mut rng, side_b);
            if a.dist(&b) < 1.0 {
                continue;
            }
            pairs.push((a, b));
        }
        let measurements: Vec<TomographicMeasurement> = pairs
            .iter()
            .map(|(a, b)| TomographicMeasurement { tx: *a, rx: *b, excess_loss_db: line_integral(&truth, a, b) })
            .collect();
        let (train, held_out) = measurements.split_at(measurements.len() - 50);
        let est = estimate_slf(train, origin, voxel, dims, 0.0).unwrap();
        for (e, t) in est.values.iter().zip(&truth.values) {
            assert!((e - t).abs() < 1e-6, "voxel error {}", (e - t).abs());
        }
        for m in held_out {
            let pred = line_integral(&est, &m.tx, &m.rx);
            let rel = (pred - m.excess_loss_db).abs() / m.excess_loss_db.max(1e-9);
            assert!(rel < 0.05, "held-out relative error {rel}");
        }
    });
}

#[test]
fn criterion_09_fig5_ordering() {
    check(9, "mean ABS count radio_map <= spiral <= kmeans_incremental; strictly smallest on >= 80%", || {
        let cfg = match load_bench_config(&repo_config_path("compare.json")).unwrap() {
            BenchConfig::Compare(c) => c,
            _ => panic!("compare.json is not a compare config"),
        };
        let dir = tempfile::tempdir().unwrap();
        let t0 = Instant::now();
        let s = cmd_compare(&cfg, dir.path(), None).unwrap();
        let elapsed = t0.elapsed().as_secs_f64();
        assert!(elapsed < 300.0, "compare took {elapsed:.1} s");
        let rm = s.mean_n_abs("radio_map");
        let sp = s.mean_n_abs("spiral");
        let km = s.mean_n_abs("kmeans_incremental");
        assert!(rm <= sp && sp <= km, "mean ordering violated: {rm} {sp} {km}");
        let seeds: std::collections::BTreeSet<u64> = s.rows.iter().map(|r| r.seed).collect();
        let mut strict = 0usize;
        for seed in &seeds {
            let count = |algo: &str| {
                s.rows.iter().find(|r| r.algo == algo && r.seed == *seed).unwrap().n_abs
            };
            if count("radio_map") < count("spiral") && count("radio_map") < count("kmeans_incremental") {
                strict += 1;
            }
        }
        assert!(
            strict * 100 >= 80 * seeds.len(),
            "radio_map strictly smallest on only {strict}/{} seeds",
            seeds.len()
        );
    });
}

#[test]
fn criterion_10_sgd_gradient_check() {
    check(10, "analytic soft-min gradient matches central differences to 1e-5 (100 states)", || {
        let radio = default_radio();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for _ in 0..100 {
            let abs = Point3::new(rng.gen_range(0.0..500.0), rng.gen_range(0.0..500.0), rng.gen_range(20.0..150.0));
            let n = rng.gen_range(1..=8);
            let gts: Vec<Point3> = (0..n)
                .map(|_| Point3::ground(rng.gen_range(0.0..500.0), rng.gen_range(0.0..500.0)))
                .collect();
            let alpha = 1e-6;
            let (_, grad) = softmin_utility_and_gradient(&abs, &gts, &radio, alpha);
            let h = 1e-4;
            let u = |p: Point3| softmin_utility_and_gradient(&p, &gts, &radio, alpha).0;
            let fd = [
                (u(Point3 { x: abs.x + h, ..abs }) - u(Point3 { x: abs.x - h, ..abs })) / (2.0 * h),
                (u(Point3 { y: abs.y + h, ..abs }) - u(Point3 { y: abs.y - h, ..abs })) / (2.0 * h),
            ];
            let scale = (grad[0].powi(2) + grad[1].powi(2)).sqrt().max(1e-9);
            let err = ((grad[0] - fd[0]).powi(2) + (grad[1] - fd[1]).powi(2)).sqrt() / scale;
            assert!(err < 1e-5, "relative gradient error {err}");
        }
    });
}

fn run_cli(subcommand: &str, config: &Path, out: &Path) {
    let status = Command::new(env!("CARGO_BIN_EXE_skyplace"))
        .args([
            subcommand,
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .expect("CLI runs");
    assert!(status.success(), "{subcommand} exited with {status}");
}

/// CSV bytes with the named column removed from every row.
fn strip_column(text: &str, name: &str) -> String {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let drop = header.iter().position(|h| *h == name);
    let keep = |fields: Vec<&str>| -> String {
        fields
            .into_iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != drop)
            .map(|(_, f)| f)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = keep(header);
    for line in lines {
        out.push('\n');
        out.push_str(&keep(line.split(',').collect()));
    }
    out
}

#[test]
fn criterion_11_end_to_end_determinism() {
    check(11, "re-running every CLI experiment yields bit-identical CSVs", || {
        let cases = [
            ("toy1d", "fig2.json"),
            ("clusters", "clusters.json"),
            ("compare", "compare.json"),
            ("adaptive", "adaptive.json"),
        ];
        for (sub, cfg) in cases {
            let config = repo_config_path(cfg);
            let d1 = tempfile::tempdir().unwrap();
            let d2 = tempfile::tempdir().unwrap();
            run_cli(sub, &config, d1.path());
            run_cli(sub, &config, d2.path());
            let mut names: Vec<String> = std::fs::read_dir(d1.path())
                .unwrap()
                .filter_map(|e| {
                    let name = e.unwrap().file_name().into_string().unwrap();
                    name.ends_with(".csv").then_some(name)
                })
                .collect();
            names.sort();
            assert!(!names.is_empty(), "{sub} wrote no CSVs");
            for name in names {
                let a = std::fs::read_to_string(d1.path().join(&name)).unwrap();
                let b = std::fs::read_to_string(d2.path().join(&name)).unwrap();
                // Wall-clock timings cannot be reproducible; every other
                // byte must be.
                let (a, b) = if name == "compare.csv" {
                    (strip_column(&a, "wall_ms"), strip_column(&b, "wall_ms"))
                } else {
                    (a, b)
                };
                assert_eq!(a, b, "{sub}/{name} differs between runs");
            }
        }
    });
}

//! Air-to-ground channel models and the link-rate function.
//!
//! Three models are supported:
//!
//! - [`ChannelModel::FreeSpace`]: free-space path loss only.
//! - [`ChannelModel::EmpiricalLos`]: free-space loss plus an excess loss
//!   averaged over the LoS/NLoS categories, with the LoS probability an
//!   increasing sigmoid of the link elevation angle.
//! - [`ChannelModel::Tomographic`]: free-space loss plus the line integral
//!   of a spatial loss field (see [`crate::radiomap`]).
//!
//! Rates are Shannon AWGN capacities over a per-GT bandwidth.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::Point3;
use crate::radiomap::{line_integral, SlfGrid};
use crate::scenario::GroundTerminal;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Link-budget inputs shared by every placement algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub carrier_freq_hz: f64,
    /// Bandwidth allocated to each GT (orthogonal allocation).
    pub bandwidth_hz: f64,
    pub tx_power_dbm: f64,
    pub noise_power_dbm: f64,
    /// Minimum per-GT rate used for coverage counts and disc radii.
    pub min_rate_bps: f64,
}

impl RadioConfig {
    /// Thermal noise power for a given bandwidth: -174 dBm/Hz + 10 log10(B).
    pub fn thermal_noise_dbm(bandwidth_hz: f64) -> f64 {
        -174.0 + 10.0 * bandwidth_hz.log10()
    }
}

/// Parameters of the elevation-dependent LoS-probability model.
///
/// `prob_los(theta) = 1 / (1 + a * exp(-b * (theta - a)))` with `theta` in
/// degrees. `eta_los_db` and `eta_nlos_db` are the mean excess losses of
/// the two link categories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalLoSParams {
    pub a: f64,
    pub b: f64,
    pub eta_los_db: f64,
    pub eta_nlos_db: f64,
    pub environment: String,
}

impl EmpiricalLoSParams {
    /// Reference urban parameter set.
    pub fn urban() -> Self {
        Self { a: 9.61, b: 0.16, eta_los_db: 1.0, eta_nlos_db: 20.0, environment: "urban".into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModel {
    FreeSpace,
    EmpiricalLos { params: EmpiricalLoSParams },
    Tomographic { slf: SlfGrid },
}

impl ChannelModel {
    pub fn path_loss_db(&self, abs: &Point3, gt: &Point3, freq_hz: f64) -> Result<f64> {
        match self {
            ChannelModel::FreeSpace => free_space_path_loss(abs.dist(gt), freq_hz),
            ChannelModel::EmpiricalLos { params } => {
                mean_path_loss_empirical(abs, gt, freq_hz, params)
            }
            ChannelModel::Tomographic { slf } => tomographic_path_loss(abs, gt, freq_hz, slf),
        }
    }
}

/// Free-space path loss in dB: `20 log10(4 pi d f / c)`.
pub fn free_space_path_loss(dist_m: f64, freq_hz: f64) -> Result<f64> {
    if dist_m <= 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * dist_m * freq_hz / SPEED_OF_LIGHT).log10())
}

/// Elevation angle of the `gt -> abs` link in degrees. Defined as 90° when
/// the horizontal offset is zero.
pub fn elevation_deg(abs: &Point3, gt: &Point3) -> f64 {
    let horiz = abs.dist_xy(gt);
    if horiz == 0.0 {
        return 90.0;
    }
    ((abs.z - gt.z) / horiz).atan().to_degrees()
}

/// Probability that the link is LoS at the given elevation angle (degrees).
pub fn prob_los(elevation_deg: f64, params: &EmpiricalLoSParams) -> f64 {
    1.0 / (1.0 + params.a * (-params.b * (elevation_deg - params.a)).exp())
}

/// Mean path loss under the empirical model: free-space loss plus the
/// category excess losses weighted by the LoS probability.
pub fn mean_path_loss_empirical(
    abs: &Point3,
    gt: &Point3,
    freq_hz: f64,
    params: &EmpiricalLoSParams,
) -> Result<f64> {
    let d = abs.dist(gt);
    let fspl = free_space_path_loss(d, freq_hz)?;
    let p_los = prob_los(elevation_deg(abs, gt), params);
    Ok(fspl + p_los * params.eta_los_db + (1.0 - p_los) * params.eta_nlos_db)
}

/// One random path-loss draw under the empirical model, for Monte-Carlo
/// evaluation. The per-category shadowing standard deviations are not part
/// of [`EmpiricalLoSParams`] and must be supplied explicitly.
pub fn sample_path_loss_empirical<R: Rng>(
    abs: &Point3,
    gt: &Point3,
    freq_hz: f64,
    params: &EmpiricalLoSParams,
    sigma_los_db: f64,
    sigma_nlos_db: f64,
    rng: &mut R,
) -> Result<f64> {
    let d = abs.dist(gt);
    let fspl = free_space_path_loss(d, freq_hz)?;
    let p_los = prob_los(elevation_deg(abs, gt), params);
    let los = rng.gen::<f64>() < p_los;
    let (eta, sigma) = if los {
        (params.eta_los_db, sigma_los_db)
    } else {
        (params.eta_nlos_db, sigma_nlos_db)
    };
    let normal = Normal::new(eta, sigma)
        .map_err(|e| Error::InvalidArgument(format!("bad shadowing sigma: {e}")))?;
    Ok(fspl + normal.sample(rng))
}

/// Path loss under the tomographic model: free-space loss plus the line
/// integral of the spatial loss field along the link.
pub fn tomographic_path_loss(abs: &Point3, gt: &Point3, freq_hz: f64, slf: &SlfGrid) -> Result<f64> {
    let d = abs.dist(gt);
    let fspl = free_space_path_loss(d, freq_hz)?;
    Ok(fspl + line_integral(slf, abs, gt))
}

/// Shannon rate for a given path loss: `B log2(1 + SNR)`.
pub fn rate_from_path_loss(path_loss_db: f64, radio: &RadioConfig) -> f64 {
    let snr = db_to_linear(radio.tx_power_dbm - path_loss_db - radio.noise_power_dbm);
    radio.bandwidth_hz * (1.0 + snr).log2()
}

/// Shannon AWGN rate of the ABS → GT link under the given channel model.
pub fn link_rate(
    abs: &Point3,
    gt: &GroundTerminal,
    radio: &RadioConfig,
    channel: &ChannelModel,
) -> Result<f64> {
    let pl = channel.path_loss_db(abs, &gt.pos, radio.carrier_freq_hz)?;
    Ok(rate_from_path_loss(pl, radio))
}

/// Rate under full frequency reuse: interference from all other ABSs is
/// added to the noise in linear power.
pub fn link_rate_sinr(
    serving_idx: usize,
    abs_positions: &[Point3],
    gt: &GroundTerminal,
    radio: &RadioConfig,
    channel: &ChannelModel,
) -> Result<f64> {
    let f = radio.carrier_freq_hz;
    let signal_pl = channel.path_loss_db(&abs_positions[serving_idx], &gt.pos, f)?;
    let signal = db_to_linear(radio.tx_power_dbm - signal_pl);
    let mut interference = 0.0;
    for (i, p) in abs_positions.iter().enumerate() {
        if i == serving_idx {
            continue;
        }
        let pl = channel.path_loss_db(p, &gt.pos, f)?;
        interference += db_to_linear(radio.tx_power_dbm - pl);
    }
    let noise = db_to_linear(radio.noise_power_dbm);
    let sinr = signal / (noise + interference);
    Ok(radio.bandwidth_hz * (1.0 + sinr).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fspl_doubling_distance_adds_six_db() {
        let f = 2.4e9;
        for d in [1.0, 10.0, 250.0] {
            let l1 = free_space_path_loss(d, f).unwrap();
            let l2 = free_space_path_loss(2.0 * d, f).unwrap();
            assert_relative_eq!(l2 - l1, 20.0 * 2f64.log10(), epsilon = 1e-9);
        }
    }

    #[test]
    fn fspl_identity_point() {
        // d = 1 m at f = c / (4 pi) makes the argument of the log equal 1.
        let f = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI);
        assert_relative_eq!(free_space_path_loss(1.0, f).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn fspl_hand_evaluation() {
        // 20*log10(4*pi*100*2.4e9 / 299792458) computed independently with
        // high-precision arithmetic.
        let l = free_space_path_loss(100.0, 2.4e9).unwrap();
        assert_relative_eq!(l, 80.0520080561155, epsilon = 1e-9);
    }

    #[test]
    fn fspl_rejects_zero_distance() {
        assert!(free_space_path_loss(0.0, 2.4e9).is_err());
    }

    #[test]
    fn prob_los_endpoint_values() {
        let p = EmpiricalLoSParams::urban();
        // Closed-form evaluations: 1/(1+9.61*exp(-0.16*(90-9.61))) and
        // 1/(1+9.61*exp(-0.16*(0-9.61))).
        assert_relative_eq!(prob_los(90.0, &p), 0.9999750551, epsilon = 1e-7);
        assert_relative_eq!(prob_los(0.0, &p), 0.021872259, epsilon = 1e-6);
    }

    #[test]
    fn prob_los_monotone() {
        let p = EmpiricalLoSParams::urban();
        let mut prev = prob_los(0.0, &p);
        for deg in 1..=90 {
            let cur = prob_los(deg as f64, &p);
            assert!(cur > prev, "prob_los must increase with elevation");
            prev = cur;
        }
    }

    #[test]
    fn empirical_degenerates_to_free_space() {
        let mut p = EmpiricalLoSParams::urban();
        p.eta_los_db = 0.0;
        p.eta_nlos_db = 0.0;
        let abs = Point3::new(0.0, 0.0, 100.0);
        let gt = Point3::ground(30.0, 40.0);
        let got = mean_path_loss_empirical(&abs, &gt, 2.4e9, &p).unwrap();
        let want = free_space_path_loss(abs.dist(&gt), 2.4e9).unwrap();
        assert_relative_eq!(got, want, epsilon = 1e-12);
    }

    #[test]
    fn empirical_overhead_is_near_los() {
        let p = EmpiricalLoSParams::urban();
        let abs = Point3::new(0.0, 0.0, 120.0);
        let gt = Point3::ground(0.0, 0.0);
        let got = mean_path_loss_empirical(&abs, &gt, 2.4e9, &p).unwrap();
        let fspl = free_space_path_loss(120.0, 2.4e9).unwrap();
        assert_relative_eq!(got, fspl + p.eta_los_db, epsilon = 1e-3);
    }

    #[test]
    fn empirical_has_interior_optimal_altitude() {
        // Fixed 200 m horizontal offset: rate vs. height must peak strictly
        // inside (0, 500].
        let p = EmpiricalLoSParams::urban();
        let gt = Point3::ground(0.0, 0.0);
        let mut best_h = 0.0;
        let mut best_loss = f64::INFINITY;
        for h in 1..=500 {
            let abs = Point3::new(200.0, 0.0, h as f64);
            let l = mean_path_loss_empirical(&abs, &gt, 2.4e9, &p).unwrap();
            if l < best_loss {
                best_loss = l;
                best_h = h as f64;
            }
        }
        assert!(best_h > 1.0 && best_h < 500.0, "interior optimum, got h={best_h}");
    }

    #[test]
    fn rate_at_unit_snr_equals_bandwidth() {
        let radio = RadioConfig {
            carrier_freq_hz: 2.4e9,
            bandwidth_hz: 20e6,
            tx_power_dbm: 10.0,
            noise_power_dbm: -90.0,
            min_rate_bps: 0.0,
        };
        // SNR = 1 (0 dB) when path loss = tx - noise.
        let pl = radio.tx_power_dbm - radio.noise_power_dbm;
        assert_relative_eq!(rate_from_path_loss(pl, &radio), radio.bandwidth_hz, epsilon = 1e-6);
    }

    #[test]
    fn free_space_rate_decreasing_in_height() {
        let radio = RadioConfig {
            carrier_freq_hz: 2.4e9,
            bandwidth_hz: 20e6,
            tx_power_dbm: 10.0,
            noise_power_dbm: -100.0,
            min_rate_bps: 0.0,
        };
        let gt = GroundTerminal { id: 0, pos: Point3::ground(50.0, 0.0), indoor: false };
        let mut prev = f64::INFINITY;
        for h in 1..=500 {
            let abs = Point3::new(0.0, 0.0, h as f64);
            let r = link_rate(&abs, &gt, &radio, &ChannelModel::FreeSpace).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn pythagorean_distance() {
        let abs = Point3::new(10.0, 0.0, 30.0);
        let gt = Point3::ground(50.0, 30.0);
        let d = abs.dist(&gt);
        let horiz = abs.dist_xy(&gt);
        assert_relative_eq!(d * d, 30.0 * 30.0 + horiz * horiz, epsilon = 1e-9);
    }
}

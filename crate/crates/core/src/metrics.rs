//! QoS evaluation of a placement: association, per-GT rates and aggregates.

use std::collections::BTreeMap;

use crate::channel::{link_rate, link_rate_sinr};
use crate::error::{Error, Result};
use crate::geo::Point3;
use crate::scenario::Scenario;

/// Ordered ABS positions plus the GT → ABS association.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub abs_positions: Vec<Point3>,
    pub association: BTreeMap<u32, usize>,
}

impl Placement {
    /// Build a placement with strongest-channel association.
    pub fn with_strongest(scenario: &Scenario, abs_positions: Vec<Point3>) -> Result<Self> {
        let association = associate_strongest(scenario, &abs_positions)?;
        Ok(Self { abs_positions, association })
    }

    pub fn n_abs(&self) -> usize {
        self.abs_positions.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QosReport {
    pub per_gt_rate: BTreeMap<u32, f64>,
    pub sum_rate_bps: f64,
    pub min_rate_bps: f64,
    pub n_covered: usize,
}

/// How rates are computed during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Orthogonal per-GT bandwidth, no inter-ABS interference.
    #[default]
    Orthogonal,
    /// Full frequency reuse: other ABSs interfere in linear power.
    FullReuse,
}

/// Associate each GT with the ABS of maximum received power under the
/// scenario's channel model. Ties break toward the lowest ABS index.
pub fn associate_strongest(scenario: &Scenario, abs_positions: &[Point3]) -> Result<BTreeMap<u32, usize>> {
    if abs_positions.is_empty() {
        return Err(Error::EmptyAbsList);
    }
    let f = scenario.radio.carrier_freq_hz;
    let mut assoc = BTreeMap::new();
    for gt in &scenario.terminals {
        let mut best = 0usize;
        let mut best_loss = f64::INFINITY;
        for (i, p) in abs_positions.iter().enumerate() {
            let loss = scenario.channel.path_loss_db(p, &gt.pos, f)?;
            if loss < best_loss {
                best_loss = loss;
                best = i;
            }
        }
        assoc.insert(gt.id, best);
    }
    Ok(assoc)
}

pub fn evaluate(scenario: &Scenario, placement: &Placement) -> Result<QosReport> {
    evaluate_with_mode(scenario, placement, EvalMode::Orthogonal)
}

pub fn evaluate_with_mode(
    scenario: &Scenario,
    placement: &Placement,
    mode: EvalMode,
) -> Result<QosReport> {
    if placement.abs_positions.is_empty() {
        return Err(Error::EmptyAbsList);
    }
    if scenario.terminals.is_empty() {
        return Err(Error::InvalidArgument("cannot evaluate an empty terminal set".into()));
    }
    let mut per_gt_rate = BTreeMap::new();
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut covered = 0usize;
    for gt in &scenario.terminals {
        let idx = *placement
            .association
            .get(&gt.id)
            .ok_or_else(|| Error::InvalidArgument(format!("GT {} has no associated ABS", gt.id)))?;
        if idx >= placement.abs_positions.len() {
            return Err(Error::InvalidArgument(format!("GT {} associated to invalid ABS index {idx}", gt.id)));
        }
        let rate = match mode {
            EvalMode::Orthogonal => {
                link_rate(&placement.abs_positions[idx], gt, &scenario.radio, &scenario.channel)?
            }
            EvalMode::FullReuse => {
                link_rate_sinr(idx, &placement.abs_positions, gt, &scenario.radio, &scenario.channel)?
            }
        };
        sum += rate;
        if rate < min {
            min = rate;
        }
        if rate >= scenario.radio.min_rate_bps {
            covered += 1;
        }
        per_gt_rate.insert(gt.id, rate);
    }
    Ok(QosReport { per_gt_rate, sum_rate_bps: sum, min_rate_bps: min, n_covered: covered })
}

//! Closed-form strategy values and an exact solver for static instances.
//!
//! Patient strategies flip a Bernoulli coin every `t_wait` at one lot; the
//! cluster strategy cycles among mutually close lots. `value_iteration`
//! solves the full stochastic shortest path for static probabilities and is
//! the reference the closed forms are checked against.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::model::{LotIndex, ParkingNetwork};

/// How the first attempt after arriving at a lot is charged.
///
/// `ChargeFirstFlip` counts `t_wait` for every flip including the first,
/// which is the textbook geometric form `t_wait / p`. `FreeFirstFlip`
/// follows the MDP reward table, where a move-and-park leg charges no wait,
/// giving `t_wait * (1/p - 1)`. The two differ by exactly `t_wait`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaitConvention {
    #[default]
    ChargeFirstFlip,
    FreeFirstFlip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyTarget {
    Lot(LotIndex),
    Cluster(Vec<LotIndex>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyValue {
    pub expected_time: f64,
    pub target: StrategyTarget,
    pub convention: WaitConvention,
}

/// Expected time-to-arrive of driving to `lot` and waiting there until parked.
pub fn patient_expected_time(net: &ParkingNetwork, lot: LotIndex, convention: WaitConvention) -> Result<f64> {
    net.check_target(lot)?;
    let p = check_probability(format!("lot {lot}"), net.prob(lot))?;
    let base = net.drive(LotIndex::ORIGIN, lot) + net.walk(lot);
    let flips = match convention {
        WaitConvention::ChargeFirstFlip => 1.0 / p,
        WaitConvention::FreeFirstFlip => 1.0 / p - 1.0,
    };
    Ok(base + net.wait_time() * flips)
}

pub fn patient_value(net: &ParkingNetwork, lot: LotIndex, convention: WaitConvention) -> Result<StrategyValue> {
    Ok(StrategyValue {
        expected_time: patient_expected_time(net, lot, convention)?,
        target: StrategyTarget::Lot(lot),
        convention,
    })
}

/// Lot with the smallest patient expected time, ties to the lowest index.
pub fn best_patient_lot(net: &ParkingNetwork) -> Result<(LotIndex, f64)> {
    best_patient_lot_with(net, WaitConvention::default())
}

pub fn best_patient_lot_with(net: &ParkingNetwork, convention: WaitConvention) -> Result<(LotIndex, f64)> {
    let mut best: Option<(LotIndex, f64)> = None;
    for lot in net.lots() {
        let t = patient_expected_time(net, lot, convention)?;
        if best.is_none_or(|(_, b)| t < b) {
            best = Some((lot, t));
        }
    }
    best.ok_or_else(|| Error::InvalidNetwork("network has no lots".into()))
}

/// A user-declared set of mutually close lots cycled until one admits parking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub members: BTreeSet<LotIndex>,
    /// Time to move between members.
    pub cycle_time: f64,
    pub t_to_cluster: f64,
    pub t_cluster_to_dest: f64,
}

impl Cluster {
    pub fn new(
        members: impl IntoIterator<Item = LotIndex>,
        cycle_time: f64,
        t_to_cluster: f64,
        t_cluster_to_dest: f64,
    ) -> Self {
        Cluster {
            members: members.into_iter().collect(),
            cycle_time,
            t_to_cluster,
            t_cluster_to_dest,
        }
    }

    /// Checks the declaration against a network: at least two members, all
    /// inside the network, pairwise drive times below `t_wait` both ways.
    pub fn violations(&self, net: &ParkingNetwork) -> Vec<String> {
        let mut out = Vec::new();
        if self.members.len() < 2 {
            out.push(format!("cluster needs at least 2 members, has {}", self.members.len()));
        }
        for &m in &self.members {
            if net.check_target(m).is_err() {
                out.push(format!("cluster member {m} is not a lot of the network"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for &a in &self.members {
            for &b in &self.members {
                if a != b && net.drive(a, b) >= net.wait_time() {
                    out.push(format!(
                        "drive {a}->{b} = {} is not below t_wait = {}",
                        net.drive(a, b),
                        net.wait_time()
                    ));
                }
            }
        }
        if self.cycle_time < 0.0 || self.t_to_cluster < 0.0 || self.t_cluster_to_dest < 0.0 {
            out.push("cluster times must be nonnegative".into());
        }
        out
    }
}

/// Expected time of cycling a cluster, each cycle treated as one joint trial
/// that succeeds with `1 - prod(1 - p_i)`. `probs` is indexed by lot
/// (`probs[lot - 1]`).
pub fn cluster_expected_time(cluster: &Cluster, probs: &[f64], wait_time: f64) -> Result<f64> {
    if cluster.members.is_empty() {
        return Err(Error::InvalidParameter("cluster has no members".into()));
    }
    let mut miss_all = 1.0;
    for &m in &cluster.members {
        if m.is_origin() {
            return Err(Error::OriginTarget);
        }
        let p = *probs.get(m.slot()).ok_or(Error::LotOutOfRange {
            index: m.0,
            n_lots: probs.len(),
        })?;
        miss_all *= 1.0 - check_probability(format!("lot {m}"), p)?;
    }
    let joint = 1.0 - miss_all;
    Ok(cluster.t_to_cluster + cluster.t_cluster_to_dest + wait_time.min(cluster.cycle_time) / joint)
}

/// Whether patient-at-`i_star` stays at least as good as patient-at-`j`:
/// `t_wait (1/p_j - 1/p_i*) >= (t_0i* - t_0j) + (t_i*D - t_jD)`.
pub fn sensitivity_holds(net: &ParkingNetwork, i_star: LotIndex, j: LotIndex) -> Result<bool> {
    net.check_target(i_star)?;
    net.check_target(j)?;
    if i_star == j {
        return Ok(true);
    }
    let pi = check_probability(format!("lot {i_star}"), net.prob(i_star))?;
    let pj = check_probability(format!("lot {j}"), net.prob(j))?;
    let lhs = net.wait_time() * (1.0 / pj - 1.0 / pi);
    let rhs = (net.drive(LotIndex::ORIGIN, i_star) - net.drive(LotIndex::ORIGIN, j)) + (net.walk(i_star) - net.walk(j));
    Ok(lhs >= rhs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub lot: LotIndex,
    pub patient_time: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// One row per lot comparing it against the current best lot.
pub fn sensitivity_table(net: &ParkingNetwork) -> Result<(LotIndex, Vec<SensitivityRow>)> {
    let (best, _) = best_patient_lot(net)?;
    let rows = net
        .lots()
        .map(|j| {
            let lhs = net.wait_time() * (1.0 / net.prob(j) - 1.0 / net.prob(best));
            let rhs =
                (net.drive(LotIndex::ORIGIN, best) - net.drive(LotIndex::ORIGIN, j)) + (net.walk(best) - net.walk(j));
            Ok(SensitivityRow {
                lot: j,
                patient_time: patient_expected_time(net, j, WaitConvention::default())?,
                lhs,
                rhs,
                holds: sensitivity_holds(net, best, j)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((best, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueIteration {
    /// Value (negated expected time-to-arrive) of `(i, Unparked)`, i = 0..=N.
    pub values: Vec<f64>,
    /// Greedy action in `(i, Unparked)`.
    pub policy: Vec<LotIndex>,
    pub sweeps: usize,
    /// `max_i |T V - V|` at the returned values.
    pub residual: f64,
}

impl ValueIteration {
    pub fn expected_time(&self, state: LotIndex) -> f64 {
        -self.values[state.0]
    }
}

const MAX_SWEEPS: usize = 5_000_000;

fn q_value(net: &ParkingNetwork, values: &[f64], from: usize, to: LotIndex) -> f64 {
    let p = net.prob(to);
    -net.step_time(LotIndex(from), to) - p * net.walk(to) + (1.0 - p) * values[to.0]
}

fn greedy(net: &ParkingNetwork, values: &[f64], from: usize) -> (LotIndex, f64) {
    let mut best = (LotIndex(1), q_value(net, values, from, LotIndex(1)));
    for to in net.lots().skip(1) {
        let q = q_value(net, values, from, to);
        // lowest index wins ties up to rounding
        if q > best.1 + 1e-12 * best.1.abs().max(1.0) {
            best = (to, q);
        }
    }
    best
}

fn bellman(net: &ParkingNetwork, values: &[f64]) -> Vec<f64> {
    (0..=net.n_lots()).map(|i| greedy(net, values, i).1).collect()
}

/// `max_i |T V - V|` for an arbitrary value vector.
pub fn bellman_residual(net: &ParkingNetwork, values: &[f64]) -> f64 {
    bellman(net, values)
        .iter()
        .zip(values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Synchronous value iteration from zero on the static-probability SSP.
///
/// Converges because every action terminates with probability at least
/// `min p_j > 0`; stops when the largest value change drops below `tol`.
pub fn value_iteration(net: &ParkingNetwork, tol: f64) -> Result<ValueIteration> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    for lot in net.lots() {
        check_probability(format!("lot {lot}"), net.prob(lot))?;
    }
    let mut values = vec![0.0; net.n_lots() + 1];
    let mut delta = f64::INFINITY;
    for sweep in 1..=MAX_SWEEPS {
        let next = bellman(net, &values);
        delta = next.iter().zip(&values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        values = next;
        if delta < tol {
            let policy = (0..=net.n_lots()).map(|i| greedy(net, &values, i).0).collect();
            let residual = bellman_residual(net, &values);
            return Ok(ValueIteration {
                values,
                policy,
                sweeps: sweep,
                residual,
            });
        }
    }
    Err(Error::NotConverged {
        sweeps: MAX_SWEEPS,
        delta,
    })
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

//! MDP domain types, the four-case reward and time-to-arrive accounting.
//!
//! States are `(location, status)` pairs where location 0 is the origin and
//! 1..=N are parking lots. An action is an attempt to park at a lot; the
//! origin is never a target. Times are real-valued minutes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Index into the network: 0 is the origin, 1..=N are lots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LotIndex(pub usize);

impl LotIndex {
    pub const ORIGIN: LotIndex = LotIndex(0);

    pub fn is_origin(self) -> bool {
        self.0 == 0
    }

    /// Zero-based position in per-lot vectors. Panics on the origin.
    pub fn slot(self) -> usize {
        assert!(self.0 > 0, "origin has no per-lot slot");
        self.0 - 1
    }
}

impl fmt::Display for LotIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Static time costs and prior probabilities for one origin/destination pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParkingNetwork {
    n_lots: usize,
    /// (N+1)x(N+1), row/column 0 is the origin.
    drive_time: Vec<Vec<f64>>,
    walk_time: Vec<f64>,
    wait_time: f64,
    initial_probs: Vec<f64>,
}

/// Serialized form of a network. Every field is checked by
/// [`NetworkConfig::violations`] before a [`ParkingNetwork`] is built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    #[serde(default)]
    pub n_lots: Option<usize>,
    pub drive_time: Vec<Vec<f64>>,
    pub walk_time: Vec<f64>,
    pub wait_time: f64,
    pub initial_probs: Vec<f64>,
}

impl NetworkConfig {
    /// Every schema or model-assumption violation, in a stable order.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n_lots.unwrap_or(self.walk_time.len());
        if n == 0 {
            out.push("n_lots must be at least 1".to_string());
        }
        if let Some(declared) = self.n_lots {
            if declared != self.walk_time.len() {
                out.push(format!(
                    "walk_time has {} entries, expected n_lots = {declared}",
                    self.walk_time.len()
                ));
            }
        }
        if self.initial_probs.len() != n {
            out.push(format!(
                "initial_probs has {} entries, expected {n}",
                self.initial_probs.len()
            ));
        }
        let rows = self.drive_time.len();
        let bad_cols = self.drive_time.iter().any(|r| r.len() != n + 1);
        if rows != n + 1 || bad_cols {
            let cols: Vec<usize> = self.drive_time.iter().map(Vec::len).collect();
            out.push(format!(
                "drive_time must be {0}x{0} (origin plus {n} lots), got {rows} rows with lengths {cols:?}",
                n + 1
            ));
        }
        for (i, row) in self.drive_time.iter().enumerate() {
            for (j, &t) in row.iter().enumerate() {
                if !(t.is_finite() && t >= 0.0) {
                    out.push(format!(
                        "drive_time[{i}][{j}] = {t} must be a nonnegative number of minutes"
                    ));
                }
            }
        }
        for (j, &t) in self.walk_time.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                out.push(format!(
                    "walk_time[{}] = {t} must be a nonnegative number of minutes",
                    j + 1
                ));
            }
        }
        if !(self.wait_time.is_finite() && self.wait_time > 0.0) {
            out.push(format!(
                "wait_time = {} must be a positive number of minutes",
                self.wait_time
            ));
        }
        for (j, &p) in self.initial_probs.iter().enumerate() {
            if !(p > 0.0 && p <= 1.0) {
                out.push(format!(
                    "initial_probs[{}] = {p} violates the model assumption p in (0, 1]",
                    j + 1
                ));
            }
        }
        out
    }
}

impl TryFrom<NetworkConfig> for ParkingNetwork {
    type Error = Error;

    fn try_from(cfg: NetworkConfig) -> Result<Self> {
        let violations = cfg.violations();
        if !violations.is_empty() {
            return Err(Error::InvalidNetwork(violations.join("; ")));
        }
        Ok(ParkingNetwork {
            n_lots: cfg.walk_time.len(),
            drive_time: cfg.drive_time,
            walk_time: cfg.walk_time,
            wait_time: cfg.wait_time,
            initial_probs: cfg.initial_probs,
        })
    }
}

impl<'de> Deserialize<'de> for ParkingNetwork {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cfg = NetworkConfig::deserialize(d)?;
        ParkingNetwork::try_from(cfg).map_err(serde::de::Error::custom)
    }
}

impl ParkingNetwork {
    pub fn new(
        drive_time: Vec<Vec<f64>>,
        walk_time: Vec<f64>,
        wait_time: f64,
        initial_probs: Vec<f64>,
    ) -> Result<Self> {
        NetworkConfig {
            n_lots: None,
            drive_time,
            walk_time,
            wait_time,
            initial_probs,
        }
        .try_into()
    }

    /// Network where the origin is `origin_drive[j]` from each lot (both
    /// directions) and lots are `between[i][j]` apart.
    pub fn from_parts(
        origin_drive: &[f64],
        between: &[Vec<f64>],
        walk_time: Vec<f64>,
        wait_time: f64,
        initial_probs: Vec<f64>,
    ) -> Result<Self> {
        let n = origin_drive.len();
        let mut drive = vec![vec![0.0; n + 1]; n + 1];
        for j in 0..n {
            drive[0][j + 1] = origin_drive[j];
            drive[j + 1][0] = origin_drive[j];
            for k in 0..n {
                drive[j + 1][k + 1] = between
                    .get(j)
                    .and_then(|r| r.get(k))
                    .copied()
                    .ok_or_else(|| Error::InvalidNetwork(format!("between-lot matrix must be {n}x{n}")))?;
            }
        }
        Self::new(drive, walk_time, wait_time, initial_probs)
    }

    pub fn to_config(&self) -> NetworkConfig {
        NetworkConfig {
            n_lots: Some(self.n_lots),
            drive_time: self.drive_time.clone(),
            walk_time: self.walk_time.clone(),
            wait_time: self.wait_time,
            initial_probs: self.initial_probs.clone(),
        }
    }

    pub fn n_lots(&self) -> usize {
        self.n_lots
    }

    pub fn lots(&self) -> impl Iterator<Item = LotIndex> + Clone {
        (1..=self.n_lots).map(LotIndex)
    }

    pub fn wait_time(&self) -> f64 {
        self.wait_time
    }

    pub fn drive(&self, from: LotIndex, to: LotIndex) -> f64 {
        self.drive_time[from.0][to.0]
    }

    pub fn walk(&self, lot: LotIndex) -> f64 {
        self.walk_time[lot.slot()]
    }

    pub fn prob(&self, lot: LotIndex) -> f64 {
        self.initial_probs[lot.slot()]
    }

    pub fn initial_probs(&self) -> &[f64] {
        &self.initial_probs
    }

    pub fn walk_times(&self) -> &[f64] {
        &self.walk_time
    }

    /// Travel cost of moving `from -> to`: drive time, or the wait period
    /// when staying put.
    pub fn step_time(&self, from: LotIndex, to: LotIndex) -> f64 {
        if from == to {
            self.wait_time
        } else {
            self.drive(from, to)
        }
    }

    pub fn check_target(&self, lot: LotIndex) -> Result<LotIndex> {
        if lot.is_origin() {
            Err(Error::OriginTarget)
        } else if lot.0 > self.n_lots {
            Err(Error::LotOutOfRange {
                index: lot.0,
                n_lots: self.n_lots,
            })
        } else {
            Ok(lot)
        }
    }

    pub fn check_location(&self, lot: LotIndex) -> Result<LotIndex> {
        if lot.0 > self.n_lots {
            Err(Error::LotOutOfRange {
                index: lot.0,
                n_lots: self.n_lots,
            })
        } else {
            Ok(lot)
        }
    }

    /// Copy with the prior probabilities replaced.
    pub fn with_probs(&self, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != self.n_lots {
            return Err(Error::InvalidParameter(format!(
                "expected {} probabilities, got {}",
                self.n_lots,
                probs.len()
            )));
        }
        for (j, &p) in probs.iter().enumerate() {
            check_probability(format!("lot {}", j + 1), p)?;
        }
        Ok(ParkingNetwork {
            initial_probs: probs,
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParkStatus {
    Unparked,
    Parked,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VehicleState {
    pub location: LotIndex,
    pub status: ParkStatus,
    /// Lots attempted in the current search cycle.
    pub visited: BTreeSet<LotIndex>,
    /// Minutes since departure.
    pub clock: f64,
}

impl VehicleState {
    pub fn at_origin() -> Self {
        VehicleState {
            location: LotIndex::ORIGIN,
            status: ParkStatus::Unparked,
            visited: BTreeSet::new(),
            clock: 0.0,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.status == ParkStatus::Parked
    }
}

/// Minutes charged by one transition. `total` is the negated reward.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub drive: f64,
    pub wait: f64,
    pub walk: f64,
    pub total: f64,
}

impl RewardBreakdown {
    fn new(drive: f64, wait: f64, walk: f64) -> Self {
        RewardBreakdown {
            drive,
            wait,
            walk,
            total: drive + wait + walk,
        }
    }

    /// The MDP reward for this transition (nonpositive).
    pub fn reward(&self) -> f64 {
        -self.total
    }
}

/// Four-case reward of attempting `to` from `from`.
///
/// | case            | charged                      |
/// |-----------------|------------------------------|
/// | move and park   | `t(from->to) + t(to->D)`     |
/// | move and fail   | `t(from->to)`                |
/// | wait and park   | `t_wait + t(to->D)`          |
/// | wait and fail   | `t_wait`                     |
pub fn reward(from: LotIndex, to: LotIndex, parked: bool, net: &ParkingNetwork) -> Result<RewardBreakdown> {
    net.check_target(to)?;
    net.check_location(from)?;
    let walk = if parked { net.walk(to) } else { 0.0 };
    Ok(if from == to {
        RewardBreakdown::new(0.0, net.wait_time(), walk)
    } else {
        RewardBreakdown::new(net.drive(from, to), 0.0, walk)
    })
}

/// Magnitude of the cumulative reward over a trajectory.
pub fn time_to_arrive(legs: &[RewardBreakdown]) -> Result<f64> {
    if legs.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    Ok(-legs.iter().map(RewardBreakdown::reward).sum::<f64>())
}

/// Naive estimate: origin straight to `target`, no search or walk.
pub fn time_to_drive(net: &ParkingNetwork, target: LotIndex) -> Result<f64> {
    net.check_target(target)?;
    Ok(net.drive(LotIndex::ORIGIN, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_lots() -> ParkingNetwork {
        // origin -> lots 10, lot1 <-> lot2 6
        ParkingNetwork::from_parts(
            &[10.0, 10.0],
            &[vec![0.0, 6.0], vec![6.0, 0.0]],
            vec![5.0, 8.0],
            5.0,
            vec![0.5, 0.9],
        )
        .unwrap()
    }

    #[test]
    fn reward_cases() {
        let net = two_lots();
        let r = reward(LotIndex(0), LotIndex(1), true, &net).unwrap();
        assert_eq!((r.drive, r.wait, r.walk, r.total), (10.0, 0.0, 5.0, 15.0));
        let r = reward(LotIndex(1), LotIndex(1), false, &net).unwrap();
        assert_eq!((r.drive, r.wait, r.walk, r.total), (0.0, 5.0, 0.0, 5.0));
        let r = reward(LotIndex(2), LotIndex(1), false, &net).unwrap();
        assert_eq!((r.drive, r.wait, r.walk, r.total), (6.0, 0.0, 0.0, 6.0));
        let r = reward(LotIndex(2), LotIndex(2), true, &net).unwrap();
        assert_eq!(r.total, 13.0);
    }

    #[test]
    fn origin_is_not_a_target() {
        let net = two_lots();
        assert!(matches!(
            reward(LotIndex(1), LotIndex(0), true, &net),
            Err(Error::OriginTarget)
        ));
        assert!(matches!(
            reward(LotIndex(0), LotIndex(3), true, &net),
            Err(Error::LotOutOfRange { index: 3, .. })
        ));
        assert!(time_to_drive(&net, LotIndex(0)).is_err());
    }

    #[test]
    fn time_to_arrive_sums_legs() {
        let net = two_lots();
        let single = [reward(LotIndex(0), LotIndex(1), true, &net).unwrap()];
        assert_eq!(time_to_arrive(&single).unwrap(), 15.0);

        let legs = [
            RewardBreakdown::new(10.0, 0.0, 0.0),
            RewardBreakdown::new(0.0, 5.0, 0.0),
            RewardBreakdown::new(0.0, 5.0, 5.0),
        ];
        assert_eq!(time_to_arrive(&legs).unwrap(), 25.0);
        assert!(matches!(time_to_arrive(&[]), Err(Error::EmptyTrajectory)));
    }

    #[test]
    fn time_to_drive_is_origin_leg() {
        let net = two_lots();
        assert_eq!(time_to_drive(&net, LotIndex(1)).unwrap(), 10.0);
        let zero = ParkingNetwork::from_parts(&[0.0], &[vec![0.0]], vec![3.0], 5.0, vec![1.0]).unwrap();
        assert_eq!(time_to_drive(&zero, LotIndex(1)).unwrap(), 0.0);
    }

    #[test]
    fn config_violations_are_reported() {
        let mut cfg = two_lots().to_config();
        assert!(cfg.violations().is_empty());
        cfg.initial_probs[1] = 0.0;
        cfg.wait_time = -1.0;
        cfg.drive_time.pop();
        let v = cfg.violations();
        assert!(
            v.iter().any(|m| m.contains("initial_probs[2]") && m.contains("(0, 1]")),
            "{v:?}"
        );
        assert!(v.iter().any(|m| m.contains("wait_time")), "{v:?}");
        assert!(v.iter().any(|m| m.contains("drive_time must be 3x3")), "{v:?}");
        assert!(ParkingNetwork::try_from(cfg).is_err());
    }

    #[test]
    fn network_parses_from_toml() {
        let text = r#"
            wait_time = 5.0
            drive_time = [[0, 10, 10], [10, 0, 6], [10, 6, 0]]
            walk_time = [5, 8]
            initial_probs = [0.5, 0.9]
        "#;
        let net: ParkingNetwork = toml::from_str(text).unwrap();
        assert_eq!(net, two_lots());
        let bad = text.replace("0.9]", "1.5]");
        assert!(toml::from_str::<ParkingNetwork>(&bad).is_err());
    }

    proptest! {
        #[test]
        fn reward_cases_are_total_and_nonnegative(
            from in 0usize..3, to in 1usize..3, parked: bool,
            d in 0.0f64..30.0, w in 0.0f64..15.0, wait in 0.1f64..10.0,
        ) {
            let net = ParkingNetwork::from_parts(
                &[d, d + 1.0], &[vec![0.0, d], vec![d, 0.0]], vec![w, w], wait, vec![0.5, 0.5]).unwrap();
            let r = reward(LotIndex(from), LotIndex(to), parked, &net).unwrap();
            prop_assert!(r.drive >= 0.0 && r.wait >= 0.0 && r.walk >= 0.0);
            prop_assert!((r.total - (r.drive + r.wait + r.walk)).abs() < 1e-12);
            // exactly one of drive/wait is charged
            prop_assert_eq!(from == to, r.drive == 0.0 && r.wait == wait);
            prop_assert_eq!(parked, r.walk == w && (w > 0.0 || !parked));
        }

        #[test]
        fn arrive_never_beats_drive(extra in proptest::collection::vec(0.0f64..20.0, 0..6)) {
            let net = two_lots();
            let mut legs = vec![reward(LotIndex(0), LotIndex(1), extra.is_empty(), &net).unwrap()];
            legs.extend(extra.iter().map(|&e| RewardBreakdown::new(0.0, e, 0.0)));
            let arrive = time_to_arrive(&legs).unwrap();
            prop_assert!(arrive >= time_to_drive(&net, LotIndex(1)).unwrap());
        }
    }
}

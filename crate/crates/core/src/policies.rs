//! Decision rules: probability-aware lookahead (PA 1/2/3-step) and the
//! patient and impatient baselines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::model::{LotIndex, ParkingNetwork, VehicleState};

/// Floor applied to believed probabilities so the `1/p` terms stay finite.
pub const BELIEF_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BeliefSource {
    Observed,
    OracleTrue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Belief {
    probs: Vec<f64>,
    source: BeliefSource,
}

impl Belief {
    pub fn new(probs: Vec<f64>, source: BeliefSource) -> Result<Self> {
        for (j, &p) in probs.iter().enumerate() {
            check_probability(format!("belief for lot {}", j + 1), p)?;
        }
        Ok(Belief { probs, source })
    }

    /// Clamps raw estimates into `[BELIEF_FLOOR, 1]`.
    pub fn floored(raw: impl IntoIterator<Item = f64>, source: BeliefSource) -> Self {
        Belief {
            probs: raw.into_iter().map(|p| p.clamp(BELIEF_FLOOR, 1.0)).collect(),
            source,
        }
    }

    pub fn prob(&self, lot: LotIndex) -> f64 {
        self.probs[lot.slot()]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn source(&self) -> BeliefSource {
        self.source
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PolicyKind {
    Pa {
        steps: u8,
    },
    /// Waits at the lot closest to the destination; search capped at `cap` minutes.
    BaselinePatient {
        cap: f64,
    },
    BaselineImpatient,
}

pub const DEFAULT_PATIENT_CAP: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    /// Decide on true current probabilities instead of observations.
    #[serde(default)]
    pub oracle: bool,
    /// After a full impatient cycle, skip the lot that just failed.
    #[serde(default = "default_true")]
    pub skip_failed_on_reset: bool,
}

fn default_true() -> bool {
    true
}

impl PolicySpec {
    pub fn pa(steps: u8) -> Result<Self> {
        if !(1..=3).contains(&steps) {
            return Err(Error::InvalidParameter(format!("PA steps must be 1..=3, got {steps}")));
        }
        Ok(Self::with_kind(PolicyKind::Pa { steps }))
    }

    pub fn baseline_patient(cap: f64) -> Result<Self> {
        if !(cap > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "patient cap must be positive, got {cap}"
            )));
        }
        Ok(Self::with_kind(PolicyKind::BaselinePatient { cap }))
    }

    pub fn baseline_impatient() -> Self {
        Self::with_kind(PolicyKind::BaselineImpatient)
    }

    fn with_kind(kind: PolicyKind) -> Self {
        PolicySpec {
            kind,
            oracle: false,
            skip_failed_on_reset: true,
        }
    }

    pub fn oracle(mut self) -> Self {
        self.oracle = true;
        self
    }

    pub fn belief_source(&self) -> BeliefSource {
        if self.oracle {
            BeliefSource::OracleTrue
        } else {
            BeliefSource::Observed
        }
    }

    /// Config name without the oracle suffix.
    pub fn base_name(&self) -> &'static str {
        match self.kind {
            PolicyKind::Pa { steps: 1 } => "pa1",
            PolicyKind::Pa { steps: 2 } => "pa2",
            PolicyKind::Pa { .. } => "pa3",
            PolicyKind::BaselinePatient { .. } => "baseline-patient",
            PolicyKind::BaselineImpatient => "baseline-impatient",
        }
    }

    pub fn name(&self) -> String {
        if self.oracle {
            format!("{}-oracle", self.base_name())
        } else {
            self.base_name().to_string()
        }
    }

    pub fn is_pa(&self) -> bool {
        matches!(self.kind, PolicyKind::Pa { .. })
    }

    pub fn cap(&self) -> Option<f64> {
        match self.kind {
            PolicyKind::BaselinePatient { cap } => Some(cap),
            _ => None,
        }
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Parses `pa1`..`pa3`, `baseline-patient`, `baseline-impatient`, each
/// optionally suffixed `-oracle`.
impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, oracle) = match s.strip_suffix("-oracle") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let spec = match base {
            "pa1" => PolicySpec::pa(1)?,
            "pa2" => PolicySpec::pa(2)?,
            "pa3" => PolicySpec::pa(3)?,
            "baseline-patient" => PolicySpec::baseline_patient(DEFAULT_PATIENT_CAP)?,
            "baseline-impatient" => PolicySpec::baseline_impatient(),
            other => return Err(Error::Parse(format!("unknown policy `{other}`"))),
        };
        Ok(if oracle { spec.oracle() } else { spec })
    }
}

/// Config-file form: `{ name = "pa2", oracle = true }`, optional `cap` for
/// the patient baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyEntry {
    pub name: String,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub cap: Option<f64>,
    #[serde(default)]
    pub skip_failed_on_reset: Option<bool>,
}

impl TryFrom<&PolicyEntry> for PolicySpec {
    type Error = Error;

    fn try_from(e: &PolicyEntry) -> Result<Self> {
        let mut spec: PolicySpec = e.name.parse()?;
        if e.oracle {
            spec = spec.oracle();
        }
        if let Some(cap) = e.cap {
            if !matches!(spec.kind, PolicyKind::BaselinePatient { .. }) {
                return Err(Error::Parse(format!(
                    "`cap` only applies to baseline-patient, not {}",
                    e.name
                )));
            }
            spec = PolicySpec {
                kind: PolicySpec::baseline_patient(cap)?.kind,
                ..spec
            };
        }
        if let Some(skip) = e.skip_failed_on_reset {
            spec.skip_failed_on_reset = skip;
        }
        Ok(spec)
    }
}

fn one_step(net: &ParkingNetwork, belief: &Belief, from: LotIndex, to: LotIndex) -> f64 {
    net.step_time(from, to) / belief.prob(to) + net.walk(to)
}

fn lookahead(net: &ParkingNetwork, belief: &Belief, steps: u8, from: LotIndex, to: LotIndex) -> f64 {
    if steps <= 1 {
        return one_step(net, belief, from, to);
    }
    let p = belief.prob(to);
    let fallback = net
        .lots()
        .map(|k| lookahead(net, belief, steps - 1, to, k))
        .fold(f64::INFINITY, f64::min);
    net.step_time(from, to) + p * net.walk(to) + (1.0 - p) * fallback
}

/// Risk-adjusted cost of attempting `to` from `from` with `steps` of lookahead.
///
/// One step: `t(i,j)/p_j + t(j->D)`. Deeper: `t(i,j) + p_j t(j->D) +
/// (1-p_j) min_k c_{steps-1}(j,k)`, where `t(i,i) = t_wait`.
pub fn pa_cost(steps: u8, from: LotIndex, to: LotIndex, net: &ParkingNetwork, belief: &Belief) -> Result<f64> {
    if !(1..=3).contains(&steps) {
        return Err(Error::InvalidParameter(format!("PA steps must be 1..=3, got {steps}")));
    }
    net.check_target(to)?;
    net.check_location(from)?;
    if belief.probs().len() != net.n_lots() {
        return Err(Error::InvalidParameter("belief length does not match network".into()));
    }
    for (j, &p) in belief.probs().iter().enumerate() {
        check_probability(format!("belief for lot {}", j + 1), p)?;
    }
    Ok(lookahead(net, belief, steps, from, to))
}

fn argmin_by(lots: impl Iterator<Item = LotIndex>, cost: impl Fn(LotIndex) -> f64) -> Option<LotIndex> {
    let mut best: Option<(LotIndex, f64)> = None;
    for lot in lots {
        let c = cost(lot);
        if best.is_none_or(|(_, b)| c < b) {
            best = Some((lot, c));
        }
    }
    best.map(|b| b.0)
}

fn closest_to_destination(net: &ParkingNetwork) -> LotIndex {
    argmin_by(net.lots(), |j| net.walk(j)).expect("network has lots")
}

/// Next lot to attempt. Pure in its inputs; ties go to the lowest index.
///
/// For the impatient baseline the caller owns the visited set: when every
/// lot is visited the rule falls back to all lots (minus the current one if
/// `skip_failed_on_reset`), and the caller should start a new cycle.
pub fn decide(spec: &PolicySpec, state: &VehicleState, net: &ParkingNetwork, belief: &Belief) -> Result<LotIndex> {
    net.check_location(state.location)?;
    match spec.kind {
        PolicyKind::Pa { steps } => {
            // validates steps and belief once
            pa_cost(steps, state.location, LotIndex(1), net, belief)?;
            Ok(argmin_by(net.lots(), |j| lookahead(net, belief, steps, state.location, j)).expect("network has lots"))
        }
        PolicyKind::BaselinePatient { .. } => Ok(closest_to_destination(net)),
        PolicyKind::BaselineImpatient => {
            let here = state.location;
            if here.is_origin() {
                return Ok(closest_to_destination(net));
            }
            let unvisited = net.lots().filter(|j| !state.visited.contains(j));
            if let Some(next) = argmin_by(unvisited, |j| net.step_time(here, j)) {
                return Ok(next);
            }
            let pool = net.lots().filter(|&j| !(spec.skip_failed_on_reset && j == here));
            Ok(argmin_by(pool, |j| net.step_time(here, j)).unwrap_or(here))
        }
    }
}

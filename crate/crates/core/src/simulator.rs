//! Seeded episodes of the parking MDP against time-varying probabilities.
//!
//! Each attempt succeeds by a Bernoulli draw against the true trace value at
//! the attempt instant; policies decide on beliefs refreshed at every
//! decision epoch. Batch runs key every random stream by
//! `(master seed, departure, episode index)` plus the policy name, so
//! results do not depend on listing order or on parallel scheduling.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{reward, LotIndex, ParkStatus, ParkingNetwork, RewardBreakdown, VehicleState};
use crate::observer::{self, InitialEstimate, ObservationStream, ProbabilityTrace};
use crate::policies::{decide, Belief, BeliefSource, PolicyKind, PolicySpec};
use crate::seeds::{self, tags};

pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

/// Where non-oracle policies get their beliefs from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum ObservationModel {
    /// Beliefs equal the true values (no observation error).
    Truth,
    /// Fixed pre-recorded streams, one per lot.
    Streams { streams: Vec<ObservationStream> },
    /// Poisson connected-user reports, resampled per episode.
    Poisson { lambda_per_hour: Vec<f64>, adoption: f64 },
    /// Recorded arrival instants per lot, thinned to a fraction `adoption`
    /// per episode.
    Arrivals { times: Vec<Vec<f64>>, adoption: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub network: ParkingNetwork,
    /// True probability per lot (`traces[lot - 1]`).
    pub traces: Vec<ProbabilityTrace>,
    pub observation: ObservationModel,
    /// Clock (minutes) at which single episodes start.
    pub departure: f64,
    pub max_attempts: usize,
}

impl ScenarioConfig {
    pub fn new(network: ParkingNetwork, traces: Vec<ProbabilityTrace>, observation: ObservationModel) -> Result<Self> {
        if traces.len() != network.n_lots() {
            return Err(Error::InvalidParameter(format!(
                "{} traces for {} lots",
                traces.len(),
                network.n_lots()
            )));
        }
        let n = network.n_lots();
        let ok = match &observation {
            ObservationModel::Truth => true,
            ObservationModel::Streams { streams } => streams.len() == n,
            ObservationModel::Poisson {
                lambda_per_hour,
                adoption,
            } => {
                if !(*adoption > 0.0 && *adoption <= 1.0) {
                    return Err(Error::InvalidParameter(format!("adoption {adoption} outside (0, 1]")));
                }
                lambda_per_hour.len() == n
            }
            ObservationModel::Arrivals { times, adoption } => {
                if !(*adoption > 0.0 && *adoption <= 1.0) {
                    return Err(Error::InvalidParameter(format!("adoption {adoption} outside (0, 1]")));
                }
                times.len() == n
            }
        };
        if !ok {
            return Err(Error::InvalidParameter(
                "observation model needs one entry per lot".into(),
            ));
        }
        let departure = traces
            .iter()
            .map(ProbabilityTrace::start)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(ScenarioConfig {
            network,
            traces,
            observation,
            departure,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        })
    }

    pub fn with_departure(mut self, departure: f64) -> Self {
        self.departure = departure;
        self
    }

    fn true_prob(&self, lot: LotIndex, clock: f64) -> Result<f64> {
        let tr = &self.traces[lot.slot()];
        tr.value_at(clock).ok_or(Error::TraceExhausted {
            lot: lot.0,
            clock,
            start: tr.start(),
            end: tr.end(),
        })
    }

    fn streams_for(&self, seed: u64) -> Result<Option<Vec<ObservationStream>>> {
        let per_lot = |lot: usize| seeds::derive(seed, &[tags::OBSERVATION, lot as u64]);
        Ok(match &self.observation {
            ObservationModel::Truth => None,
            ObservationModel::Streams { streams } => Some(streams.clone()),
            ObservationModel::Poisson {
                lambda_per_hour,
                adoption,
            } => Some(
                self.traces
                    .iter()
                    .zip(lambda_per_hour)
                    .enumerate()
                    .map(|(k, (tr, &lam))| observer::observe(tr, lam, *adoption, per_lot(k)))
                    .collect::<Result<_>>()?,
            ),
            ObservationModel::Arrivals { times, adoption } => Some(
                self.traces
                    .iter()
                    .zip(times)
                    .enumerate()
                    .map(|(k, (tr, arrivals))| {
                        let mut rng = seeds::rng(per_lot(k));
                        let kept = observer::thin_arrivals(arrivals, *adoption, &mut rng);
                        let span = (tr.end() - tr.start()).max(f64::MIN_POSITIVE) / 60.0;
                        let rate = kept.len() as f64 / span;
                        observer::stream_at_times(tr, &kept, rate, InitialEstimate::TrueInitial)
                    })
                    .collect::<Result<_>>()?,
            ),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub lot: LotIndex,
    pub parked: bool,
    pub reward: RewardBreakdown,
    /// Clock at the attempt.
    pub clock: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub legs: Vec<Leg>,
    pub total_minutes: f64,
    pub capped: bool,
    pub policy: String,
    pub seed: u64,
    pub departure: f64,
}

impl EpisodeResult {
    pub fn first_target(&self) -> LotIndex {
        self.legs[0].lot
    }
}

/// One episode for `policy`, starting at `cfg.departure`.
///
/// `seed` fans out to the attempt stream (keyed by policy name) and the
/// observation stream (shared by every policy under the same seed).
pub fn run_episode(cfg: &ScenarioConfig, policy: &PolicySpec, seed: u64) -> Result<EpisodeResult> {
    let name = policy.name();
    let mut attempts = seeds::rng_for(seed, &[tags::ATTEMPTS, seeds::name_key(&name)]);
    let streams = if policy.oracle {
        None
    } else {
        cfg.streams_for(seeds::derive(seed, &[tags::OBSERVATION]))?
    };
    let net = &cfg.network;
    let departure = cfg.departure;
    let mut state = VehicleState {
        clock: departure,
        ..VehicleState::at_origin()
    };
    let mut legs = Vec::new();
    let mut capped = false;

    while !state.is_terminal() {
        if legs.len() >= cfg.max_attempts {
            return Err(Error::EpisodeLimit {
                attempts: cfg.max_attempts,
            });
        }
        let belief = match &streams {
            Some(s) => Belief::floored(s.iter().map(|st| st.estimate_at(state.clock)), BeliefSource::Observed),
            None => Belief::floored(
                net.lots()
                    .map(|j| cfg.true_prob(j, state.clock))
                    .collect::<Result<Vec<_>>>()?,
                policy.belief_source(),
            ),
        };
        let target = decide(policy, &state, net, &belief)?;
        let clock = state.clock + net.step_time(state.location, target);
        let p = cfg.true_prob(target, clock)?;
        let parked = attempts.gen::<f64>() < p;
        let leg_reward = reward(state.location, target, parked, net)?;
        legs.push(Leg {
            lot: target,
            parked,
            reward: leg_reward,
            clock,
        });

        if state.visited.len() == net.n_lots() {
            state.visited.clear();
        }
        state.visited.insert(target);
        state.location = target;
        state.clock = clock;
        if parked {
            state.status = ParkStatus::Parked;
        } else if let PolicyKind::BaselinePatient { cap } = policy.kind {
            if clock - departure >= cap {
                capped = true;
                break;
            }
        }
    }

    let total_minutes = if capped {
        policy.cap().unwrap_or_default() + net.walk(state.location)
    } else {
        crate::model::time_to_arrive(&legs.iter().map(|l| l.reward).collect::<Vec<_>>())?
    };
    Ok(EpisodeResult {
        legs,
        total_minutes,
        capped,
        policy: name,
        seed,
        departure,
    })
}

/// Base seed of episode `index` at `departure`; independent of policy.
pub fn episode_seed(master: u64, departure: f64, index: u32) -> u64 {
    seeds::derive(master, &[departure.to_bits(), index as u64])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub setting: String,
    pub policy: String,
    pub episodes: usize,
    pub mean: f64,
    pub std: f64,
    pub capped: usize,
    /// Percent, `100 * (1 - mean / mean_baseline_patient)`.
    pub gain_vs_bl_pat: Option<f64>,
    pub gain_vs_bl_imp: Option<f64>,
    /// Percent, `100 * (1 - mean / mean_oracle_twin)`.
    pub perf_vs_oracle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchResult {
    pub setting: String,
    pub episodes: Vec<EpisodeResult>,
    pub aggregates: Vec<AggregateRow>,
}

/// Stable presentation order: baselines, PA by depth, then oracle twins.
fn policy_rank(name: &str) -> (bool, u8, String) {
    let oracle = name.ends_with("-oracle");
    let base = name.trim_end_matches("-oracle");
    let rank = match base {
        "baseline-patient" => 0,
        "baseline-impatient" => 1,
        "pa1" => 2,
        "pa2" => 3,
        "pa3" => 4,
        _ => 5,
    };
    (oracle, rank, name.to_string())
}

/// Sample mean and standard deviation (n - 1 denominator).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Percent improvement of `mean` over `reference`; negative values are losses.
pub fn gain_percent(mean: f64, reference: f64) -> f64 {
    100.0 * (1.0 - mean / reference)
}

/// Reduces episodes to one row per policy name, in canonical order.
pub fn aggregate(setting: &str, episodes: &[EpisodeResult]) -> Vec<AggregateRow> {
    let mut by_policy: BTreeMap<(bool, u8, String), Vec<&EpisodeResult>> = BTreeMap::new();
    for e in episodes {
        by_policy.entry(policy_rank(&e.policy)).or_default().push(e);
    }
    let mut rows: Vec<AggregateRow> = by_policy
        .into_iter()
        .map(|((_, _, name), eps)| {
            let totals: Vec<f64> = eps.iter().map(|e| e.total_minutes).collect();
            let (mean, std) = mean_std(&totals);
            AggregateRow {
                setting: setting.to_string(),
                policy: name,
                episodes: eps.len(),
                mean,
                std,
                capped: eps.iter().filter(|e| e.capped).count(),
                gain_vs_bl_pat: None,
                gain_vs_bl_imp: None,
                perf_vs_oracle: None,
            }
        })
        .collect();
    let mean_of = |rows: &[AggregateRow], name: &str| rows.iter().find(|r| r.policy == name).map(|r| r.mean);
    let pat = mean_of(&rows, "baseline-patient");
    let imp = mean_of(&rows, "baseline-impatient");
    let twins: Vec<Option<f64>> = rows
        .iter()
        .map(|r| mean_of(&rows, &format!("{}-oracle", r.policy)))
        .collect();
    for (row, twin) in rows.iter_mut().zip(twins) {
        if row.policy.ends_with("-oracle") {
            continue;
        }
        let is_pa = row.policy.starts_with("pa");
        if row.policy != "baseline-patient" {
            row.gain_vs_bl_pat = pat.map(|m| gain_percent(row.mean, m));
        }
        if is_pa {
            row.gain_vs_bl_imp = imp.map(|m| gain_percent(row.mean, m));
            row.perf_vs_oracle = twin.map(|m| gain_percent(row.mean, m));
        }
    }
    rows
}

/// Runs every `(policy, departure, episode)` cell and aggregates per policy.
/// Policies listed more than once run once.
pub fn run_batch(
    cfg: &ScenarioConfig,
    setting: &str,
    policies: &[PolicySpec],
    seeds_per_departure: u32,
    departures: &[f64],
    master_seed: u64,
) -> Result<BatchResult> {
    if policies.is_empty() || departures.is_empty() || seeds_per_departure == 0 {
        return Err(Error::InvalidParameter(
            "batch needs policies, departures and seeds".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    let mut unique: Vec<PolicySpec> = policies.iter().filter(|p| seen.insert(p.name())).copied().collect();
    unique.sort_by_key(|p| policy_rank(&p.name()));

    let mut cells = Vec::new();
    for policy in &unique {
        for &dep in departures {
            for idx in 0..seeds_per_departure {
                cells.push((policy, dep, idx));
            }
        }
    }
    let run = |&(policy, dep, idx): &(&PolicySpec, f64, u32)| {
        let scenario = ScenarioConfig {
            departure: dep,
            ..cfg.clone()
        };
        run_episode(&scenario, policy, episode_seed(master_seed, dep, idx))
    };
    #[cfg(feature = "parallel")]
    let episodes: Vec<EpisodeResult> = {
        use rayon::prelude::*;
        cells.par_iter().map(run).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let episodes: Vec<EpisodeResult> = cells.iter().map(run).collect::<Result<_>>()?;

    let aggregates = aggregate(setting, &episodes);
    Ok(BatchResult {
        setting: setting.to_string(),
        episodes,
        aggregates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub setting: String,
    pub policy: String,
    pub mean: f64,
    pub drive_gap_min: f64,
    pub drive_gap_pct: f64,
    pub transit_gap_min: f64,
    pub transit_gap_pct: f64,
}

fn gap_row(setting: &str, policy: &str, mean: f64, drive: f64, transit: f64) -> GapRow {
    GapRow {
        setting: setting.to_string(),
        policy: policy.to_string(),
        mean,
        drive_gap_min: mean - drive,
        drive_gap_pct: 100.0 * (mean - drive) / drive,
        transit_gap_min: mean - transit,
        transit_gap_pct: 100.0 * (mean - transit) / transit,
    }
}

/// Time-to-arrive gaps against time-to-drive and a transit estimate, one row
/// per non-oracle policy plus a `best-pa` row for the lowest-mean PA policy.
pub fn compare_modes(results: &[AggregateRow], time_to_drive: f64, transit_time: f64) -> Result<Vec<GapRow>> {
    if results.is_empty() {
        return Err(Error::InvalidParameter("no aggregate rows to compare".into()));
    }
    if !(time_to_drive > 0.0) || !(transit_time > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference times must be positive (time-to-drive {time_to_drive}, transit {transit_time})"
        )));
    }
    let mut out = Vec::new();
    let mut settings: Vec<&str> = Vec::new();
    for r in results {
        if !settings.contains(&r.setting.as_str()) {
            settings.push(&r.setting);
        }
    }
    for setting in settings {
        let rows: Vec<&AggregateRow> = results
            .iter()
            .filter(|r| r.setting == setting && !r.policy.ends_with("-oracle"))
            .collect();
        for r in &rows {
            out.push(gap_row(setting, &r.policy, r.mean, time_to_drive, transit_time));
        }
        let best = rows
            .iter()
            .filter(|r| r.policy.starts_with("pa"))
            .min_by(|a, b| a.mean.total_cmp(&b.mean));
        if let Some(best) = best {
            out.push(gap_row(setting, "best-pa", best.mean, time_to_drive, transit_time));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_lot(p: f64) -> ScenarioConfig {
        let net = ParkingNetwork::from_parts(&[10.0], &[vec![0.0]], vec![5.0], 5.0, vec![p]).unwrap();
        let tr = ProbabilityTrace::constant(p, 0.0, 1e7).unwrap();
        ScenarioConfig::new(net, vec![tr], ObservationModel::Truth).unwrap()
    }

    fn three_lots(p: [f64; 3]) -> ScenarioConfig {
        let net = ParkingNetwork::from_parts(
            &[10.0, 11.0, 12.0],
            &[vec![0.0, 3.0, 4.0], vec![3.0, 0.0, 3.0], vec![4.0, 3.0, 0.0]],
            vec![2.0, 5.0, 8.0],
            5.0,
            p.to_vec(),
        )
        .unwrap();
        let traces = p
            .iter()
            .map(|&q| ProbabilityTrace::constant(q, 0.0, 1e6).unwrap())
            .collect();
        ScenarioConfig::new(net, traces, ObservationModel::Truth).unwrap()
    }

    fn all_policies() -> Vec<PolicySpec> {
        ["pa1", "pa2", "pa3", "baseline-patient", "baseline-impatient"]
            .iter()
            .map(|n| n.parse().unwrap())
            .collect()
    }

    #[test]
    fn certain_parking_is_first_attempt() {
        let cfg = three_lots([1.0; 3]);
        for policy in all_policies() {
            let e = run_episode(&cfg, &policy, 42).unwrap();
            assert_eq!(e.legs.len(), 1);
            let j = e.first_target();
            assert_eq!(e.total_minutes, cfg.network.drive(LotIndex(0), j) + cfg.network.walk(j));
        }
        // all PA depths agree when nothing is uncertain
        let targets: Vec<_> = all_policies()[..3]
            .iter()
            .map(|p| run_episode(&cfg, p, 1).unwrap().first_target())
            .collect();
        assert!(targets.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn episode_is_deterministic() {
        let cfg = three_lots([0.3, 0.5, 0.7]);
        for policy in all_policies() {
            assert_eq!(
                run_episode(&cfg, &policy, 7).unwrap(),
                run_episode(&cfg, &policy, 7).unwrap()
            );
        }
    }

    #[test]
    fn accounting_identity() {
        let cfg = three_lots([0.2, 0.3, 0.4]);
        for policy in all_policies() {
            for seed in 0..50 {
                let e = run_episode(&cfg, &policy, seed).unwrap();
                let sum: f64 = e.legs.iter().map(|l| l.reward.total).sum();
                if e.capped {
                    assert!(!e.legs.last().unwrap().parked);
                    assert_eq!(e.total_minutes, 60.0 + cfg.network.walk(e.legs.last().unwrap().lot));
                } else {
                    assert!(e.legs.last().unwrap().parked);
                    assert!((e.total_minutes - sum).abs() < 1e-9);
                }
                // clocks advance by the charged drive or wait
                let mut clock = e.departure;
                for l in &e.legs {
                    clock += l.reward.drive + l.reward.wait;
                    assert!((clock - l.clock).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn patient_cap_triggers() {
        let mut cfg = single_lot(0.001);
        cfg.traces = vec![ProbabilityTrace::constant(0.0, 0.0, 1e6).unwrap()];
        let spec = PolicySpec::baseline_patient(60.0).unwrap();
        let e = run_episode(&cfg, &spec, 3).unwrap();
        assert!(e.capped);
        assert_eq!(e.total_minutes, 65.0);
        // first attempt at 10, then every 5 minutes until 60 elapsed
        assert_eq!(e.legs.len(), 11);
    }

    #[test]
    fn trace_exhaustion_is_reported() {
        let mut cfg = single_lot(0.5);
        cfg.traces = vec![ProbabilityTrace::constant(0.0, 0.0, 30.0).unwrap()];
        let err = run_episode(&cfg, &PolicySpec::pa(1).unwrap(), 1).unwrap_err();
        assert!(matches!(err, Error::TraceExhausted { lot: 1, .. }), "{err}");
    }

    #[test]
    fn attempt_limit() {
        let mut cfg = single_lot(0.5);
        cfg.traces = vec![ProbabilityTrace::constant(0.0, 0.0, 1e12).unwrap()];
        cfg.max_attempts = 50;
        assert!(matches!(
            run_episode(&cfg, &PolicySpec::pa(1).unwrap(), 1),
            Err(Error::EpisodeLimit { attempts: 50 })
        ));
    }

    #[test]
    fn impatient_cycles_through_lots() {
        let cfg = three_lots([0.001; 3]);
        let mut cfg = cfg;
        cfg.traces = (0..3)
            .map(|_| ProbabilityTrace::constant(0.0, 0.0, 200.0).unwrap())
            .collect();
        let err = run_episode(&cfg, &PolicySpec::baseline_impatient(), 1);
        assert!(err.is_err());
        cfg.traces[1] = ProbabilityTrace::new(
            vec![(0.0, 0.0), (40.0, 1.0)],
            200.0,
            crate::observer::TraceKind::Empirical,
        )
        .unwrap();
        let e = run_episode(&cfg, &PolicySpec::baseline_impatient(), 1).unwrap();
        let lots: Vec<usize> = e.legs.iter().map(|l| l.lot.0).collect();
        // 1 (closest walk), 2 (3 min), 3 (3 min), reset: 2 (3 min from 3), ...
        assert_eq!(&lots[..4], &[1, 2, 3, 2]);
        assert!(e.legs.last().unwrap().parked);
        assert_eq!(e.legs.last().unwrap().lot, LotIndex(2));
    }

    #[test]
    fn batch_order_invariance_and_duplicates() {
        let cfg = three_lots([0.3, 0.5, 0.7]);
        let mut pols = all_policies();
        let a = run_batch(&cfg, "s", &pols, 5, &[0.0, 60.0], 11).unwrap();
        pols.reverse();
        pols.push(pols[0]);
        let b = run_batch(&cfg, "s", &pols, 5, &[0.0, 60.0], 11).unwrap();
        assert_eq!(a.aggregates, b.aggregates);
        assert_eq!(a.aggregates.len(), 5);
        assert_eq!(a.aggregates[0].episodes, 10);
    }

    #[test]
    fn gain_formula_matches_means() {
        let cfg = three_lots([0.2, 0.5, 0.7]);
        let mut pols = all_policies();
        pols.push("pa1-oracle".parse().unwrap());
        let r = run_batch(&cfg, "s", &pols, 20, &[0.0], 5).unwrap();
        let m = |n: &str| r.aggregates.iter().find(|a| a.policy == n).unwrap().clone();
        let pa1 = m("pa1");
        let gain = 100.0 * (1.0 - pa1.mean / m("baseline-patient").mean);
        assert_eq!(pa1.gain_vs_bl_pat, Some(gain));
        assert_eq!(
            pa1.gain_vs_bl_imp,
            Some(100.0 * (1.0 - pa1.mean / m("baseline-impatient").mean))
        );
        assert_eq!(
            pa1.perf_vs_oracle,
            Some(100.0 * (1.0 - pa1.mean / m("pa1-oracle").mean))
        );
        assert!(m("pa2").perf_vs_oracle.is_none());
        assert!(m("baseline-patient").gain_vs_bl_pat.is_none());
        assert!(m("baseline-impatient").gain_vs_bl_pat.is_some());
    }

    #[test]
    fn mean_std_sample() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
    }

    fn row(policy: &str, mean: f64) -> AggregateRow {
        AggregateRow {
            setting: "weekday".into(),
            policy: policy.into(),
            episodes: 1,
            mean,
            std: 0.0,
            capped: 0,
            gain_vs_bl_pat: None,
            gain_vs_bl_imp: None,
            perf_vs_oracle: None,
        }
    }

    #[test]
    fn compare_gaps() {
        let rows = [
            row("baseline-patient", 44.6),
            row("pa3", 19.0),
            row("pa1", 20.0),
            row("pa3-oracle", 18.0),
        ];
        let gaps = compare_modes(&rows, 10.0, 20.0).unwrap();
        assert_eq!(gaps.len(), 4);
        assert!((gaps[0].drive_gap_min - 34.6).abs() < 1e-9);
        assert!((gaps[0].drive_gap_pct - 346.0).abs() < 1e-9);
        let best = gaps.iter().find(|g| g.policy == "best-pa").unwrap();
        assert_eq!(best.mean, 19.0);
        assert!((best.transit_gap_min + 1.0).abs() < 1e-9);
        assert!((best.transit_gap_pct + 5.0).abs() < 1e-9);
        let eq = compare_modes(&[row("pa1", 10.0)], 10.0, 10.0).unwrap();
        assert_eq!((eq[0].drive_gap_min, eq[0].drive_gap_pct), (0.0, 0.0));
        assert!(compare_modes(&rows, 0.0, 20.0).is_err());
        assert!(compare_modes(&rows, 10.0, -1.0).is_err());
        assert!(compare_modes(&[], 10.0, 20.0).is_err());
    }

    #[test]
    fn oracle_twin_and_observed_share_world() {
        let net = ParkingNetwork::from_parts(&[10.0], &[vec![0.0]], vec![5.0], 5.0, vec![0.5]).unwrap();
        let walk = crate::observer::bounded_random_walk(0.5, 720, 3).unwrap();
        let cfg = ScenarioConfig::new(
            net,
            vec![walk],
            ObservationModel::Poisson {
                lambda_per_hour: vec![20.0],
                adoption: 0.2,
            },
        )
        .unwrap();
        // same seed -> same observation stream for whichever policy observes
        let s1 = cfg.streams_for(9).unwrap().unwrap();
        let s2 = cfg.streams_for(9).unwrap().unwrap();
        assert_eq!(s1, s2);
        assert!(ScenarioConfig::new(
            cfg.network.clone(),
            cfg.traces.clone(),
            ObservationModel::Poisson {
                lambda_per_hour: vec![20.0],
                adoption: 0.0
            }
        )
        .is_err());
    }
}

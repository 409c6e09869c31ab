//! True probability traces, connected-user observation streams and the
//! error laws of hold-last estimation.
//!
//! Connected users arrive as a Poisson process of rate `lambda * r` and each
//! reports the lot's current probability; the estimate holds the latest
//! report until the next one. Rates are configured per hour and converted to
//! per-minute internally.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::closed_form::{patient_expected_time, WaitConvention};
use crate::error::{check_probability, Error, Result};
use crate::mc::{self, Estimate};
use crate::model::{LotIndex, ParkingNetwork};
use crate::seeds;

/// Random-walk step, one percentage point.
pub const WALK_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TraceKind {
    /// Slope in probability per minute.
    Linear {
        slope: f64,
    },
    Exponential {
        exponent: f64,
    },
    RandomWalk,
    Empirical,
}

/// Piecewise-constant probability over `[start, end]`: the value at `t` is
/// the latest sample at or before `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityTrace {
    samples: Vec<(f64, f64)>,
    end: f64,
    kind: TraceKind,
}

impl ProbabilityTrace {
    pub fn new(samples: Vec<(f64, f64)>, end: f64, kind: TraceKind) -> Result<Self> {
        let Some(&(_, _)) = samples.first() else {
            return Err(Error::InvalidParameter("trace needs at least one sample".into()));
        };
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidParameter(format!(
                    "trace times must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(t, p) in &samples {
            if !t.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "trace sample ({t}, {p}) outside [0, 1]"
                )));
            }
        }
        let last = samples[samples.len() - 1].0;
        if !(end >= last) {
            return Err(Error::InvalidParameter(format!(
                "trace end {end} precedes last sample {last}"
            )));
        }
        Ok(ProbabilityTrace { samples, end, kind })
    }

    pub fn constant(p: f64, start: f64, end: f64) -> Result<Self> {
        Self::new(vec![(start, p)], end, TraceKind::Empirical)
    }

    /// `p0 + slope * (t - start)` sampled every `step` minutes, clamped to [0, 1].
    pub fn linear(p0: f64, slope: f64, start: f64, end: f64, step: f64) -> Result<Self> {
        Self::sampled(start, end, step, TraceKind::Linear { slope }, |dt| p0 + slope * dt)
    }

    /// `p0 + scale * (t - start)^exponent` sampled every `step` minutes.
    pub fn power(p0: f64, scale: f64, exponent: f64, start: f64, end: f64, step: f64) -> Result<Self> {
        Self::sampled(start, end, step, TraceKind::Exponential { exponent }, |dt| {
            p0 + scale * dt.powf(exponent)
        })
    }

    fn sampled(start: f64, end: f64, step: f64, kind: TraceKind, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(step > 0.0) || !(end >= start) {
            return Err(Error::InvalidParameter("need step > 0 and end >= start".into()));
        }
        let n = ((end - start) / step).floor() as usize;
        let samples = (0..=n)
            .map(|k| {
                let dt = k as f64 * step;
                (start + dt, f(dt).clamp(0.0, 1.0))
            })
            .collect();
        Self::new(samples, end, kind)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn kind(&self) -> TraceKind {
        self.kind
    }

    pub fn start(&self) -> f64 {
        self.samples[0].0
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn initial(&self) -> f64 {
        self.samples[0].1
    }

    pub fn covers(&self, t: f64) -> bool {
        t >= self.start() && t <= self.end
    }

    /// Step lookup; `None` outside `[start, end]`.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if !self.covers(t) {
            return None;
        }
        let idx = self.samples.partition_point(|&(s, _)| s <= t);
        Some(self.samples[idx - 1].1)
    }
}

/// Estimate held before the first observation arrives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialEstimate {
    #[default]
    TrueInitial,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationStream {
    observations: Vec<(f64, f64)>,
    rate_per_hour: f64,
    initial: f64,
    start: f64,
    end: f64,
}

impl ObservationStream {
    /// Observations must be sorted by time (ties allowed) and lie in `[start, end]`.
    pub fn new(observations: Vec<(f64, f64)>, rate_per_hour: f64, initial: f64, start: f64, end: f64) -> Result<Self> {
        if observations.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::InvalidParameter(
                "observation times must be nondecreasing".into(),
            ));
        }
        if observations
            .iter()
            .any(|&(t, p)| t < start || t > end || !(0.0..=1.0).contains(&p))
        {
            return Err(Error::InvalidParameter(
                "observation outside stream span or [0, 1]".into(),
            ));
        }
        Ok(ObservationStream {
            observations,
            rate_per_hour,
            initial,
            start,
            end,
        })
    }

    pub fn observations(&self) -> &[(f64, f64)] {
        &self.observations
    }

    pub fn rate_per_hour(&self) -> f64 {
        self.rate_per_hour
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn span(&self) -> (f64, f64) {
        (self.start, self.end)
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Hold-last estimate at `t`.
    pub fn estimate_at(&self, t: f64) -> f64 {
        let idx = self.observations.partition_point(|&(s, _)| s <= t);
        if idx == 0 {
            self.initial
        } else {
            self.observations[idx - 1].1
        }
    }
}

fn positive_rate(lambda_per_hour: f64, r: f64) -> Result<f64> {
    let rate = lambda_per_hour * r;
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "observation rate lambda * r = {lambda_per_hour} * {r} must be positive"
        )));
    }
    Ok(rate)
}

/// Poisson observation times over `(start, end]` at `rate_per_min`.
pub fn poisson_times(start: f64, end: f64, rate_per_min: f64, rng: &mut seeds::Rng) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = start;
    loop {
        t += seeds::exponential(rng, rate_per_min);
        if t > end {
            return out;
        }
        out.push(t);
    }
}

/// Keeps each arrival independently with probability `r`.
pub fn thin_arrivals(times: &[f64], r: f64, rng: &mut seeds::Rng) -> Vec<f64> {
    times.iter().copied().filter(|_| rng.gen::<f64>() < r).collect()
}

/// Connected-user view of `trace`: arrivals at `lambda` per hour, a fraction
/// `r` of them reporting.
pub fn observe(trace: &ProbabilityTrace, lambda_per_hour: f64, r: f64, seed: u64) -> Result<ObservationStream> {
    observe_with(trace, lambda_per_hour, r, seed, InitialEstimate::default())
}

pub fn observe_with(
    trace: &ProbabilityTrace,
    lambda_per_hour: f64,
    r: f64,
    seed: u64,
    initial: InitialEstimate,
) -> Result<ObservationStream> {
    let rate = positive_rate(lambda_per_hour, r)?;
    let mut rng = seeds::rng(seed);
    let times = poisson_times(trace.start(), trace.end(), rate / 60.0, &mut rng);
    stream_at_times(trace, &times, rate, initial)
}

/// Stream whose observations read `trace` at the given instants.
pub fn stream_at_times(
    trace: &ProbabilityTrace,
    times: &[f64],
    rate_per_hour: f64,
    initial: InitialEstimate,
) -> Result<ObservationStream> {
    let observations = times
        .iter()
        .filter_map(|&t| trace.value_at(t).map(|p| (t, p)))
        .collect();
    let initial = match initial {
        InitialEstimate::TrueInitial => trace.initial(),
        InitialEstimate::Fixed(p) => p,
    };
    ObservationStream::new(observations, rate_per_hour, initial, trace.start(), trace.end())
}

/// Time-weighted mean of `|true - estimate|` over the trace span.
pub fn mae(trace: &ProbabilityTrace, stream: &ObservationStream) -> f64 {
    let (start, end) = (trace.start(), trace.end());
    if end <= start {
        return (trace.initial() - stream.estimate_at(start)).abs();
    }
    let mut cuts: Vec<f64> = trace
        .samples()
        .iter()
        .map(|s| s.0)
        .chain(stream.observations().iter().map(|o| o.0))
        .filter(|&t| t > start && t < end)
        .collect();
    cuts.push(start);
    cuts.push(end);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let area: f64 = cuts
        .windows(2)
        .map(|w| {
            let t = w[0];
            let p = trace.value_at(t).unwrap_or(0.0);
            (p - stream.estimate_at(t)).abs() * (w[1] - w[0])
        })
        .sum();
    area / (end - start)
}

/// Integrated `|true - estimate|` over each complete inter-observation
/// interval (the shaded regions between consecutive reports).
pub fn interval_errors(trace: &ProbabilityTrace, stream: &ObservationStream) -> Vec<f64> {
    let obs = stream.observations();
    obs.windows(2)
        .map(|w| {
            let (a, b) = (w[0].0, w[1].0);
            let held = w[0].1;
            let lo = trace.samples().partition_point(|s| s.0 <= a);
            let mut cuts = vec![a];
            cuts.extend(trace.samples()[lo..].iter().map(|s| s.0).take_while(|&t| t < b));
            cuts.push(b);
            cuts.windows(2)
                .map(|c| (trace.value_at(c[0]).unwrap_or(held) - held).abs() * (c[1] - c[0]))
                .sum()
        })
        .collect()
}

/// Per-interval integrated error for a linear trend, `m / rate^2`, with
/// slope and rate in the same time unit.
pub fn linear_error_law(slope: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter("observation rate must be positive".into()));
    }
    if slope < 0.0 {
        return Err(Error::InvalidParameter("slope magnitude must be nonnegative".into()));
    }
    Ok(slope / (rate * rate))
}

/// [`linear_error_law`] with slope per minute and `lambda` per hour.
pub fn linear_error_expectation(slope_per_min: f64, lambda_per_hour: f64, r: f64) -> Result<f64> {
    linear_error_law(slope_per_min, positive_rate(lambda_per_hour, r)? / 60.0)
}

fn check_exponent(b: f64) -> Result<()> {
    if b >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("exponent must be >= 1, got {b}")))
    }
}

/// Printed law for a power-law trend: `b / rate^(b+1)`.
pub fn exponential_error_law(b: f64, rate: f64) -> Result<f64> {
    check_exponent(b)?;
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter("observation rate must be positive".into()));
    }
    Ok(b / rate.powf(b + 1.0))
}

/// `E[int_0^T s^b ds]` for `T ~ Exp(rate)`, i.e. `Gamma(b+1) / rate^(b+1)`.
pub fn exponential_error_moment(b: f64, rate: f64) -> Result<f64> {
    check_exponent(b)?;
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter("observation rate must be positive".into()));
    }
    Ok(gamma(b + 1.0) / rate.powf(b + 1.0))
}

/// [`exponential_error_law`] with `lambda` per hour (time in minutes).
pub fn exponential_error_expectation(b: f64, lambda_per_hour: f64, r: f64) -> Result<f64> {
    exponential_error_law(b, positive_rate(lambda_per_hour, r)? / 60.0)
}

/// Lanczos approximation (g = 7, n = 9), accurate to ~1e-15 for x > 0.5.
fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Composite Simpson rule on `[0, upper]`.
fn simpson(f: &impl Fn(f64) -> f64, upper: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = upper / n as f64;
    let inner: f64 = (1..n)
        .map(|k| f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(0.0) + inner + f(upper)) * h / 3.0
}

/// Renewal-interval oracle: draws `T ~ Exp(rate)` and integrates the
/// estimate's drift `excess(s)` over `[0, T]` by quadrature.
pub fn integrated_error_oracle<F>(excess: F, rate: f64, draws: u64, seed: u64) -> Result<Estimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter("observation rate must be positive".into()));
    }
    Ok(mc::estimate_mean(draws.max(1), seed, |rng| {
        let t = seeds::exponential(rng, rate);
        simpson(&excess, t, 64)
    }))
}

/// Symmetric ±1 point per minute walk, forced inward at 0 and 1.
pub fn bounded_random_walk(start: f64, minutes: u32, seed: u64) -> Result<ProbabilityTrace> {
    if !(0.0..=1.0).contains(&start) {
        return Err(Error::InvalidParameter(format!("walk start {start} outside [0, 1]")));
    }
    let mut rng = seeds::rng(seed);
    let mut k: i64 = 0;
    let mut samples = Vec::with_capacity(minutes as usize + 1);
    samples.push((0.0, start));
    let slack = 1e-9;
    for minute in 1..=minutes {
        let v = start + k as f64 * WALK_STEP;
        let up = if v + WALK_STEP > 1.0 + slack {
            false
        } else if v - WALK_STEP < -slack {
            true
        } else {
            rng.gen::<bool>()
        };
        k += if up { 1 } else { -1 };
        let value = (start + k as f64 * WALK_STEP).clamp(0.0, 1.0);
        samples.push((minute as f64, value));
    }
    ProbabilityTrace::new(samples, minutes as f64, TraceKind::RandomWalk)
}

/// Patient-strategy travel-time error from acting on `p_obs` when the truth
/// is `p_true`: `t_wait * |1/p_true - 1/p_obs|`.
pub fn expected_time_error(p_true: f64, p_obs: f64, net: &ParkingNetwork, lot: LotIndex) -> Result<f64> {
    check_probability("p_true", p_true)?;
    check_probability("p_obs", p_obs)?;
    let mut probs = net.initial_probs().to_vec();
    net.check_target(lot)?;
    probs[lot.slot()] = p_true;
    let truth = patient_expected_time(&net.with_probs(probs.clone())?, lot, WaitConvention::ChargeFirstFlip)?;
    probs[lot.slot()] = p_obs;
    let believed = patient_expected_time(&net.with_probs(probs)?, lot, WaitConvention::ChargeFirstFlip)?;
    Ok((truth - believed).abs())
}

/// Per-seed MAEs of hold-last estimation of bounded random walks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkExperiment {
    pub start: f64,
    pub minutes: u32,
    pub lambda_per_hour: f64,
    pub adoption: f64,
    pub seeds: u32,
    pub master_seed: u64,
}

impl WalkExperiment {
    pub fn walk_seed(&self, index: u32) -> u64 {
        seeds::derive(self.master_seed, &[seeds::name_key("walk"), index as u64])
    }

    /// Observation stream seed; keyed by the rate so each grid cell draws
    /// its own arrivals while sharing the walk.
    pub fn observation_seed(&self, index: u32) -> u64 {
        seeds::derive(
            self.master_seed,
            &[
                seeds::tags::OBSERVATION,
                index as u64,
                self.lambda_per_hour.to_bits(),
                self.adoption.to_bits(),
            ],
        )
    }

    pub fn run_seed(&self, index: u32) -> Result<(ProbabilityTrace, ObservationStream, f64)> {
        let walk = bounded_random_walk(self.start, self.minutes, self.walk_seed(index))?;
        let stream = observe(&walk, self.lambda_per_hour, self.adoption, self.observation_seed(index))?;
        let err = mae(&walk, &stream);
        Ok((walk, stream, err))
    }

    pub fn maes(&self) -> Result<Vec<f64>> {
        let run = |i: u32| self.run_seed(i).map(|r| r.2);
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..self.seeds).into_par_iter().map(run).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..self.seeds).map(run).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_lookup_is_stepwise() {
        let tr = ProbabilityTrace::new(vec![(0.0, 0.2), (10.0, 0.6)], 20.0, TraceKind::Empirical).unwrap();
        assert_eq!(tr.value_at(0.0), Some(0.2));
        assert_eq!(tr.value_at(9.999), Some(0.2));
        assert_eq!(tr.value_at(10.0), Some(0.6));
        assert_eq!(tr.value_at(20.0), Some(0.6));
        assert_eq!(tr.value_at(20.001), None);
        assert_eq!(tr.value_at(-1.0), None);
        assert!(ProbabilityTrace::new(vec![(0.0, 0.2), (0.0, 0.3)], 1.0, TraceKind::Empirical).is_err());
        assert!(ProbabilityTrace::new(vec![(0.0, 1.2)], 1.0, TraceKind::Empirical).is_err());
    }

    #[test]
    fn walk_steps() {
        let w = bounded_random_walk(0.5, 1, 1).unwrap();
        let v = w.value_at(1.0).unwrap();
        assert!((v - 0.49).abs() < 1e-12 || (v - 0.51).abs() < 1e-12, "{v}");
        let top = bounded_random_walk(1.0, 1, 1).unwrap();
        assert!((top.value_at(1.0).unwrap() - 0.99).abs() < 1e-12);
        let bottom = bounded_random_walk(0.0, 1, 1).unwrap();
        assert!((bottom.value_at(1.0).unwrap() - 0.01).abs() < 1e-12);
        assert!(bounded_random_walk(1.5, 1, 1).is_err());
    }

    #[test]
    fn walk_stays_in_bounds_with_unit_steps() {
        for seed in 0..20 {
            let w = bounded_random_walk(0.97, 2000, seed).unwrap();
            for pair in w.samples().windows(2) {
                assert!((0.0..=1.0).contains(&pair[1].1));
                assert!(((pair[1].1 - pair[0].1).abs() - WALK_STEP).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn constant_trace_has_no_error() {
        let tr = ProbabilityTrace::constant(0.4, 0.0, 720.0).unwrap();
        let s = observe(&tr, 20.0, 0.2, 3).unwrap();
        assert!(s.observations().iter().all(|o| o.1 == 0.4));
        assert_eq!(mae(&tr, &s), 0.0);
    }

    #[test]
    fn minute_observations_track_walk() {
        let w = bounded_random_walk(0.5, 720, 9).unwrap();
        let times: Vec<f64> = (0..=720).map(f64::from).collect();
        let s = stream_at_times(&w, &times, 60.0, InitialEstimate::TrueInitial).unwrap();
        assert!(mae(&w, &s) <= 0.01);
    }

    #[test]
    fn hand_computed_mae() {
        // truth 0.2 on [0,10), 0.6 on [10,20]; one report at t=15
        let tr = ProbabilityTrace::new(vec![(0.0, 0.2), (10.0, 0.6)], 20.0, TraceKind::Empirical).unwrap();
        let s = ObservationStream::new(vec![(15.0, 0.6)], 1.0, 0.2, 0.0, 20.0).unwrap();
        assert!((mae(&tr, &s) - 0.4 * 5.0 / 20.0).abs() < 1e-12);
        let dup = ObservationStream::new(vec![(15.0, 0.6), (15.0, 0.6)], 1.0, 0.2, 0.0, 20.0).unwrap();
        assert_eq!(mae(&tr, &s), mae(&tr, &dup));
        let fixed = stream_at_times(&tr, &[15.0], 1.0, InitialEstimate::Fixed(0.5)).unwrap();
        assert!((mae(&tr, &fixed) - (0.3 * 10.0 + 0.1 * 5.0) / 20.0).abs() < 1e-12);
    }

    #[test]
    fn estimate_jumps_only_at_observations() {
        let w = bounded_random_walk(0.5, 300, 2).unwrap();
        let s = observe(&w, 20.0, 0.5, 2).unwrap();
        let obs_times: Vec<f64> = s.observations().iter().map(|o| o.0).collect();
        let mut prev = s.estimate_at(0.0);
        for k in 1..=3000 {
            let t = k as f64 * 0.1;
            let cur = s.estimate_at(t);
            if cur != prev {
                assert!(obs_times.iter().any(|&o| o > t - 0.1 && o <= t));
            }
            prev = cur;
        }
    }

    #[test]
    fn only_product_of_rate_matters() {
        let w = bounded_random_walk(0.5, 720, 4).unwrap();
        let a = observe(&w, 20.0, 0.5, 77).unwrap();
        let b = observe(&w, 40.0, 0.25, 77).unwrap();
        assert_eq!(a.observations(), b.observations());
    }

    #[test]
    fn rate_must_be_positive() {
        let w = ProbabilityTrace::constant(0.5, 0.0, 10.0).unwrap();
        assert!(observe(&w, 20.0, 0.0, 1).is_err());
        assert!(linear_error_expectation(0.01, 0.0, 0.5).is_err());
        assert!(exponential_error_expectation(2.0, 10.0, 0.0).is_err());
    }

    #[test]
    fn error_laws() {
        assert_eq!(linear_error_law(1.0, 2.0).unwrap(), 0.25);
        assert_eq!(linear_error_law(0.0, 2.0).unwrap(), 0.0);
        // 30 per hour at full adoption is 0.5 per minute
        assert!((linear_error_expectation(0.01, 30.0, 1.0).unwrap() - 0.04).abs() < 1e-15);
        assert_eq!(exponential_error_law(1.0, 2.0).unwrap(), 0.25);
        assert_eq!(exponential_error_law(2.0, 1.0).unwrap(), 2.0);
        assert!((exponential_error_moment(2.0, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((exponential_error_moment(3.0, 1.0).unwrap() - 6.0).abs() < 1e-12);
        assert!((exponential_error_moment(1.0, 2.0).unwrap() - 0.25).abs() < 1e-14);
        assert!(exponential_error_law(0.5, 1.0).is_err());
    }

    #[test]
    fn gamma_matches_factorials() {
        let mut fact = 1.0;
        for n in 1..15 {
            fact *= n as f64;
            assert!((gamma(n as f64 + 1.0) / fact - 1.0).abs() < 1e-13, "{n}");
        }
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn linear_oracle_agrees() {
        let law = linear_error_law(0.01, 0.5).unwrap();
        let est = integrated_error_oracle(|s| 0.01 * s, 0.5, 100_000, 21).unwrap();
        assert!((est.mean / law - 1.0).abs() < 0.05, "{est:?} vs {law}");
    }

    #[test]
    fn oracle_error_shrinks_like_inverse_sqrt() {
        let law = linear_error_law(1.0, 2.0).unwrap();
        let mut prev_se = f64::INFINITY;
        for (n, seed) in [(1_000u64, 1u64), (10_000, 2), (100_000, 3)] {
            let est = integrated_error_oracle(|s| s, 2.0, n, seed).unwrap();
            assert!(est.within(law, 4.0), "n={n} {est:?}");
            // relative spread of T^2/2 is sqrt(5), so se ~ sqrt(5) * law / sqrt(n)
            let expected_se = 5f64.sqrt() * law / (n as f64).sqrt();
            assert!((est.std_err / expected_se - 1.0).abs() < 0.35, "n={n} {est:?}");
            assert!(est.std_err < prev_se);
            prev_se = est.std_err;
        }
    }

    #[test]
    fn ramp_interval_errors_average_linear_law() {
        // slope and rate per minute; ramp stays inside [0, 1]
        let slope = 2.5e-5;
        let rate_per_min = 0.5;
        let ramp = ProbabilityTrace::linear(0.1, slope, 0.0, 20_000.0, 0.01).unwrap();
        let stream = observe(&ramp, rate_per_min * 60.0, 1.0, 12).unwrap();
        let errs = interval_errors(&ramp, &stream);
        let mean = errs.iter().sum::<f64>() / errs.len() as f64;
        let law = linear_error_law(slope, rate_per_min).unwrap();
        assert!(
            (mean / law - 1.0).abs() < 0.08,
            "mean {mean} law {law} over {}",
            errs.len()
        );
    }

    #[test]
    fn time_error_examples() {
        let net = ParkingNetwork::from_parts(&[15.0], &[vec![0.0]], vec![10.0], 5.0, vec![0.45]).unwrap();
        let e = expected_time_error(0.45, 0.50, &net, LotIndex(1)).unwrap();
        assert!((e - 5.0 * (1.0 / 0.45 - 1.0 / 0.5)).abs() < 1e-12);
        assert!((e - 1.111_111).abs() < 1e-6);
        assert_eq!(expected_time_error(0.3, 0.3, &net, LotIndex(1)).unwrap(), 0.0);
        assert!((expected_time_error(0.5, 0.25, &net, LotIndex(1)).unwrap() - 10.0).abs() < 1e-12);
        assert!(expected_time_error(0.0, 0.25, &net, LotIndex(1)).is_err());
    }
}

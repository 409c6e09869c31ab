//! Occupancy and payment-transaction files to traces and connected-user
//! streams, plus a synthetic generator with the same file layout.
//!
//! Default layout (header row required):
//!
//! ```text
//! occupancy:    timestamp,lot_id,occupied,capacity
//! transactions: timestamp,lot_id
//! ```
//!
//! Timestamps are ISO-8601 local times. Other layouts (SDOT exports) are
//! read through a [`ColumnMap`]. Trace time is minutes since midnight of the
//! earliest record's date.

use std::io::Read;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observer::{self, InitialEstimate, ObservationStream, ProbabilityTrace, TraceKind};
use crate::seeds;

/// Lower clamp on inverse-occupancy probabilities.
pub const EPSILON: f64 = 1e-3;

const ISO_FORMATS: [&str; 3] = ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M"];
const WRITE_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupancyRecord {
    pub timestamp: NaiveDateTime,
    pub lot_id: String,
    pub occupied: u32,
    pub capacity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionRecord {
    pub timestamp: NaiveDateTime,
    pub lot_id: String,
}

/// Column names (and optional timestamp format) of an input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub timestamp: String,
    pub lot_id: String,
    pub occupied: String,
    pub capacity: String,
    /// chrono format string; ISO-8601 variants are tried when absent.
    pub timestamp_format: Option<String>,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            timestamp: "timestamp".into(),
            lot_id: "lot_id".into(),
            occupied: "occupied".into(),
            capacity: "capacity".into(),
            timestamp_format: None,
        }
    }
}

impl ColumnMap {
    /// SDOT paid-occupancy export.
    pub fn sdot_occupancy() -> Self {
        ColumnMap {
            timestamp: "OccupancyDateTime".into(),
            lot_id: "SourceElementKey".into(),
            occupied: "PaidOccupancy".into(),
            capacity: "ParkingSpaceCount".into(),
            timestamp_format: Some("%m/%d/%Y %I:%M:%S %p".into()),
        }
    }

    /// SDOT pay-station transaction export.
    pub fn sdot_transactions() -> Self {
        ColumnMap {
            timestamp: "TransactionDateTime".into(),
            lot_id: "ElementKey".into(),
            timestamp_format: Some("%m/%d/%Y %I:%M:%S %p".into()),
            ..Self::default()
        }
    }

    fn parse_time(&self, s: &str) -> Result<NaiveDateTime> {
        let s = s.trim();
        if let Some(fmt) = &self.timestamp_format {
            return NaiveDateTime::parse_from_str(s, fmt)
                .map_err(|e| Error::Parse(format!("timestamp {s:?} does not match {fmt:?}: {e}")));
        }
        ISO_FORMATS
            .iter()
            .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
            .ok_or_else(|| Error::Parse(format!("timestamp {s:?} is not ISO-8601")))
    }
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::Parse(format!("missing column {name:?}")))
}

fn field(rec: &csv::StringRecord, idx: usize, line: u64) -> Result<&str> {
    rec.get(idx)
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing field {idx}")))
}

fn count(s: &str, what: &str, line: u64) -> Result<u32> {
    // exports sometimes carry counts as "45.0"
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: {what} {s:?} is not a number")))?;
    if !(v >= 0.0) || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(Error::Parse(format!(
            "line {line}: {what} {s:?} is not a nonnegative integer"
        )));
    }
    Ok(v as u32)
}

pub fn read_occupancy<R: Read>(reader: R, map: &ColumnMap) -> Result<Vec<OccupancyRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let (ts, lot, occ, cap) = (
        column(&headers, &map.timestamp)?,
        column(&headers, &map.lot_id)?,
        column(&headers, &map.occupied)?,
        column(&headers, &map.capacity)?,
    );
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i as u64 + 2;
        let capacity = count(field(&rec, cap, line)?, "capacity", line)?;
        if capacity == 0 {
            return Err(Error::Parse(format!("line {line}: capacity must be at least 1")));
        }
        out.push(OccupancyRecord {
            timestamp: map.parse_time(field(&rec, ts, line)?)?,
            lot_id: field(&rec, lot, line)?.to_string(),
            occupied: count(field(&rec, occ, line)?, "occupied", line)?,
            capacity,
        });
    }
    Ok(out)
}

pub fn read_transactions<R: Read>(reader: R, map: &ColumnMap) -> Result<Vec<TransactionRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let (ts, lot) = (column(&headers, &map.timestamp)?, column(&headers, &map.lot_id)?);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i as u64 + 2;
        out.push(TransactionRecord {
            timestamp: map.parse_time(field(&rec, ts, line)?)?,
            lot_id: field(&rec, lot, line)?.to_string(),
        });
    }
    Ok(out)
}

/// Midnight of the earliest timestamp.
pub fn time_origin<'a>(timestamps: impl IntoIterator<Item = &'a NaiveDateTime>) -> Option<NaiveDateTime> {
    timestamps.into_iter().min().map(|t| t.date().and_time(NaiveTime::MIN))
}

pub fn minutes_since(origin: NaiveDateTime, t: NaiveDateTime) -> f64 {
    (t - origin).num_milliseconds() as f64 / 60_000.0
}

/// Inverse occupancy `1 - occupied / capacity`, clamped to `[EPSILON, 1]`.
pub fn inverse_occupancy(occupied: u32, capacity: u32) -> f64 {
    if occupied > capacity {
        log::warn!("occupied {occupied} exceeds capacity {capacity}; clamping to {EPSILON}");
    }
    (1.0 - occupied as f64 / capacity as f64).clamp(EPSILON, 1.0)
}

/// Trace for `lot_id` with times relative to the midnight before the
/// earliest record of any lot in `records`.
pub fn occupancy_to_trace(records: &[OccupancyRecord], lot_id: &str) -> Result<ProbabilityTrace> {
    let origin = time_origin(records.iter().map(|r| &r.timestamp))
        .ok_or_else(|| Error::MissingData(format!("no occupancy records for lot {lot_id:?}")))?;
    occupancy_to_trace_from(records, lot_id, origin)
}

/// As [`occupancy_to_trace`] with an explicit time origin. The trace ends one
/// record interval after the last record; records sharing a timestamp keep
/// the last one.
pub fn occupancy_to_trace_from(
    records: &[OccupancyRecord],
    lot_id: &str,
    origin: NaiveDateTime,
) -> Result<ProbabilityTrace> {
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut last: Option<NaiveDateTime> = None;
    for r in records.iter().filter(|r| r.lot_id == lot_id) {
        if let Some(prev) = last {
            if r.timestamp < prev {
                return Err(Error::Parse(format!(
                    "lot {lot_id:?}: timestamps go backwards ({prev} then {})",
                    r.timestamp
                )));
            }
        }
        let t = minutes_since(origin, r.timestamp);
        let p = inverse_occupancy(r.occupied, r.capacity);
        match samples.last_mut() {
            Some(s) if s.0 == t => s.1 = p,
            _ => samples.push((t, p)),
        }
        last = Some(r.timestamp);
    }
    if samples.is_empty() {
        return Err(Error::MissingData(format!("no occupancy records for lot {lot_id:?}")));
    }
    let interval = samples
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .fold(f64::INFINITY, f64::min);
    let interval = if interval.is_finite() { interval } else { 1.0 };
    let end = samples[samples.len() - 1].0 + interval;
    ProbabilityTrace::new(samples, end, TraceKind::Empirical)
}

/// Lot ids in first-appearance order.
pub fn lot_ids(records: &[OccupancyRecord]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in records {
        if !out.contains(&r.lot_id) {
            out.push(r.lot_id.clone());
        }
    }
    out
}

/// Retains each transaction independently with probability `r`.
pub fn sample_connected_users(txns: &[TransactionRecord], r: f64, seed: u64) -> Result<Vec<TransactionRecord>> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidParameter(format!("adoption fraction {r} outside (0, 1]")));
    }
    let mut rng = seeds::rng(seed);
    Ok(txns.iter().filter(|_| rng.gen::<f64>() < r).cloned().collect())
}

/// Arrival instants of `lot_id` in trace minutes, sorted.
pub fn arrival_minutes(txns: &[TransactionRecord], lot_id: &str, origin: NaiveDateTime) -> Vec<f64> {
    let mut out: Vec<f64> = txns
        .iter()
        .filter(|t| t.lot_id == lot_id)
        .map(|t| minutes_since(origin, t.timestamp))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Connected-user stream: each retained arrival reads the trace.
pub fn transactions_to_stream(
    trace: &ProbabilityTrace,
    retained: &[TransactionRecord],
    lot_id: &str,
    origin: NaiveDateTime,
) -> Result<ObservationStream> {
    let times = arrival_minutes(retained, lot_id, origin);
    let hours = (trace.end() - trace.start()) / 60.0;
    let rate = if hours > 0.0 { times.len() as f64 / hours } else { 0.0 };
    observer::stream_at_times(trace, &times, rate, InitialEstimate::TrueInitial)
}

/// Piecewise-linear rate curve through `(hour, events per hour)` knots,
/// constant beyond the end knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve(pub Vec<(f64, f64)>);

impl RateCurve {
    pub fn constant(rate: f64) -> Self {
        RateCurve(vec![(0.0, rate)])
    }

    pub fn at_hour(&self, h: f64) -> f64 {
        let k = &self.0;
        if k.is_empty() {
            return 0.0;
        }
        if h <= k[0].0 {
            return k[0].1;
        }
        for w in k.windows(2) {
            if h <= w[1].0 {
                let f = (h - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + f * (w[1].1 - w[0].1);
            }
        }
        k[k.len() - 1].1
    }

    pub fn max(&self) -> f64 {
        self.0.iter().map(|k| k.1).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthLot {
    pub id: String,
    pub capacity: u32,
    pub initial_occupied: u32,
    /// Arrivals per hour; arrivals that find the lot full leave no record.
    pub arrivals: RateCurve,
    /// Per-vehicle departure hazard, per hour.
    pub departures: RateCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthProfile {
    pub name: String,
    pub date: NaiveDate,
    /// Window in minutes since midnight.
    pub start_minute: u32,
    pub end_minute: u32,
    pub record_interval: u32,
    pub lots: Vec<SynthLot>,
}

impl SynthProfile {
    fn lot(id: &str, capacity: u32, initial: u32, arrivals: &[(f64, f64)], stay_hours: f64) -> SynthLot {
        SynthLot {
            id: id.into(),
            capacity,
            initial_occupied: initial,
            arrivals: RateCurve(arrivals.to_vec()),
            departures: RateCurve::constant(1.0 / stay_hours),
        }
    }

    fn base(name: &str, lots: Vec<SynthLot>) -> Self {
        SynthProfile {
            name: name.into(),
            date: NaiveDate::from_ymd_opt(2024, 6, 15).expect("valid date"),
            start_minute: 7 * 60,
            end_minute: 21 * 60,
            record_interval: 1,
            lots,
        }
    }

    /// Busy weekend: the lot nearest the destination saturates through the
    /// afternoon while the farther lots keep room.
    pub fn high_demand() -> Self {
        Self::base(
            "high-demand",
            vec![
                Self::lot(
                    "A",
                    61,
                    25,
                    &[(7.0, 20.0), (10.0, 50.0), (17.0, 50.0), (21.0, 20.0)],
                    1.5,
                ),
                Self::lot(
                    "B",
                    40,
                    15,
                    &[(7.0, 12.0), (11.0, 26.0), (17.0, 26.0), (21.0, 10.0)],
                    1.5,
                ),
                Self::lot("C", 30, 4, &[(7.0, 3.0), (12.0, 6.0), (18.0, 6.0), (21.0, 3.0)], 1.5),
            ],
        )
    }

    /// Moderate weekday demand.
    pub fn moderate_demand() -> Self {
        Self::base(
            "moderate-demand",
            vec![
                Self::lot(
                    "A",
                    61,
                    15,
                    &[(7.0, 15.0), (12.0, 35.0), (16.0, 30.0), (21.0, 12.0)],
                    1.5,
                ),
                Self::lot("B", 40, 8, &[(7.0, 8.0), (12.0, 18.0), (16.0, 16.0), (21.0, 6.0)], 1.5),
                Self::lot("C", 30, 3, &[(7.0, 3.0), (12.0, 7.0), (16.0, 6.0), (21.0, 3.0)], 1.5),
            ],
        )
    }

    /// Nearly empty lots.
    pub fn low_demand() -> Self {
        Self::base(
            "low-demand",
            vec![
                Self::lot("A", 61, 0, &[(7.0, 0.3)], 0.5),
                Self::lot("B", 40, 0, &[(7.0, 0.15)], 0.5),
                Self::lot("C", 30, 0, &[(7.0, 0.05)], 0.5),
            ],
        )
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "high-demand" => Ok(Self::high_demand()),
            "moderate-demand" => Ok(Self::moderate_demand()),
            "low-demand" => Ok(Self::low_demand()),
            _ => Err(Error::InvalidParameter(format!(
                "unknown profile {name:?} (expected high-demand, moderate-demand or low-demand)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub occupancy_csv: String,
    pub transactions_csv: String,
    pub origin: NaiveDateTime,
    pub lot_ids: Vec<String>,
    /// Generator-side traces, equal to what the occupancy file parses into.
    pub traces: Vec<ProbabilityTrace>,
    /// Recorded arrival minutes per lot.
    pub arrivals: Vec<Vec<f64>>,
}

/// Simulates arrivals and departures per lot as inhomogeneous Poisson events
/// (thinning against the peak rate) and snapshots occupancy every record
/// interval. Event times are rounded to whole seconds so the files carry
/// them exactly.
pub fn synth_dataset(profile: &SynthProfile, seed: u64) -> Result<SynthDataset> {
    if profile.end_minute <= profile.start_minute || profile.record_interval == 0 {
        return Err(Error::InvalidParameter(
            "profile window or record interval is empty".into(),
        ));
    }
    let origin = profile.date.and_time(NaiveTime::MIN);
    let start_s = profile.start_minute as i64 * 60;
    let end_s = profile.end_minute as i64 * 60;
    let step_s = profile.record_interval as i64 * 60;
    let stamp = |sec: i64| {
        (origin + chrono::Duration::seconds(sec))
            .format(WRITE_FORMAT)
            .to_string()
    };

    let mut occ_rows: Vec<(i64, usize, u32, u32)> = Vec::new();
    let mut txn_rows: Vec<(i64, usize)> = Vec::new();
    let mut traces = Vec::new();
    let mut arrivals = Vec::new();
    for (k, lot) in profile.lots.iter().enumerate() {
        if lot.capacity == 0 || lot.initial_occupied > lot.capacity {
            return Err(Error::InvalidParameter(format!(
                "lot {}: bad capacity or initial count",
                lot.id
            )));
        }
        let mut rng = seeds::rng_for(seed, &[seeds::name_key(&lot.id), k as u64]);
        let peak_in = lot.arrivals.max() / 3600.0;
        let peak_out = lot.departures.max() * lot.capacity as f64 / 3600.0;
        let bound = peak_in + peak_out;
        let mut occupied = lot.initial_occupied;
        let mut lot_arrivals = Vec::new();
        let mut samples = Vec::new();
        let mut t = start_s as f64;
        let mut next_record = start_s;
        loop {
            let dt = if bound > 0.0 {
                seeds::exponential(&mut rng, bound)
            } else {
                f64::INFINITY
            };
            let event = t + dt;
            while (next_record as f64) <= event.min(end_s as f64) && next_record < end_s {
                occ_rows.push((next_record, k, occupied, lot.capacity));
                samples.push((next_record as f64 / 60.0, inverse_occupancy(occupied, lot.capacity)));
                next_record += step_s;
            }
            if event >= end_s as f64 {
                break;
            }
            t = event;
            let hour = t / 3600.0;
            let u = rng.gen::<f64>() * bound;
            let a = lot.arrivals.at_hour(hour) / 3600.0;
            let d = lot.departures.at_hour(hour) * occupied as f64 / 3600.0;
            if u < a {
                if occupied < lot.capacity {
                    occupied += 1;
                    let sec = t.round() as i64;
                    txn_rows.push((sec, k));
                    lot_arrivals.push(sec as f64 / 60.0);
                }
            } else if u < a + d {
                occupied -= 1;
            }
        }
        traces.push(ProbabilityTrace::new(
            samples,
            end_s as f64 / 60.0,
            TraceKind::Empirical,
        )?);
        arrivals.push(lot_arrivals);
    }

    occ_rows.sort_by_key(|&(s, k, _, _)| (s, k));
    txn_rows.sort_by_key(|&(s, k)| (s, k));
    let mut occupancy_csv = String::from("timestamp,lot_id,occupied,capacity\n");
    for (s, k, o, c) in occ_rows {
        occupancy_csv.push_str(&format!("{},{},{o},{c}\n", stamp(s), profile.lots[k].id));
    }
    let mut transactions_csv = String::from("timestamp,lot_id\n");
    for (s, k) in txn_rows {
        transactions_csv.push_str(&format!("{},{}\n", stamp(s), profile.lots[k].id));
    }
    for a in &mut arrivals {
        a.sort_by(f64::total_cmp);
    }
    Ok(SynthDataset {
        occupancy_csv,
        transactions_csv,
        origin,
        lot_ids: profile.lots.iter().map(|l| l.id.clone()).collect(),
        traces,
        arrivals,
    })
}

/// Traces and arrival minutes for `lots`, with a shared time origin.
pub fn load_lots(
    occupancy: &[OccupancyRecord],
    txns: &[TransactionRecord],
    lots: &[String],
) -> Result<(NaiveDateTime, Vec<ProbabilityTrace>, Vec<Vec<f64>>)> {
    let origin = time_origin(occupancy.iter().map(|r| &r.timestamp))
        .ok_or_else(|| Error::MissingData("occupancy file has no records".into()))?;
    let traces = lots
        .iter()
        .map(|id| occupancy_to_trace_from(occupancy, id, origin))
        .collect::<Result<Vec<_>>>()?;
    let arrivals = lots.iter().map(|id| arrival_minutes(txns, id, origin)).collect();
    Ok((origin, traces, arrivals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(ts: &str, lot: &str, occupied: u32, capacity: u32) -> OccupancyRecord {
        OccupancyRecord {
            timestamp: ColumnMap::default().parse_time(ts).unwrap(),
            lot_id: lot.into(),
            occupied,
            capacity,
        }
    }

    #[test]
    fn inverse_occupancy_examples() {
        assert!((inverse_occupancy(45, 61) - 16.0 / 61.0).abs() < 1e-15);
        assert!((inverse_occupancy(45, 61) - 0.262).abs() < 5e-4);
        assert_eq!(inverse_occupancy(0, 61), 1.0);
        assert_eq!(inverse_occupancy(61, 61), EPSILON);
        assert_eq!(inverse_occupancy(70, 61), EPSILON);
    }

    #[test]
    fn trace_from_records() {
        let records = vec![
            rec("2024-06-15T08:00:00", "A", 45, 61),
            rec("2024-06-15T08:00:00", "B", 0, 10),
            rec("2024-06-15T08:05:00", "A", 61, 61),
            rec("2024-06-15T08:10:00", "A", 0, 61),
        ];
        let tr = occupancy_to_trace(&records, "A").unwrap();
        assert_eq!(tr.start(), 480.0);
        assert_eq!(tr.end(), 495.0);
        assert!((tr.value_at(483.0).unwrap() - 0.262).abs() < 5e-4);
        assert_eq!(tr.value_at(485.0), Some(EPSILON));
        assert_eq!(tr.value_at(494.0), Some(1.0));
        assert!(occupancy_to_trace(&records, "Z").is_err());
        let backwards = vec![
            rec("2024-06-15T08:05:00", "A", 1, 2),
            rec("2024-06-15T08:00:00", "A", 1, 2),
        ];
        assert!(occupancy_to_trace(&backwards, "A").is_err());
    }

    #[test]
    fn reads_default_and_sdot_layouts() {
        let csv = "timestamp,lot_id,occupied,capacity\n2024-06-15T08:00:00,A,45,61\n2024-06-15 08:01:00,A,46.0,61\n";
        let r = read_occupancy(csv.as_bytes(), &ColumnMap::default()).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].occupied, 46);
        let sdot = "OccupancyDateTime,PaidOccupancy,BlockfaceName,SourceElementKey,ParkingSpaceCount\n\
                    06/15/2024 02:01:00 PM,12,PIKE ST,1234,20\n";
        let r = read_occupancy(sdot.as_bytes(), &ColumnMap::sdot_occupancy()).unwrap();
        assert_eq!(r[0].lot_id, "1234");
        assert_eq!(r[0].timestamp.format("%H:%M").to_string(), "14:01");
        let bad = "timestamp,lot_id,occupied\n2024-06-15T08:00:00,A,4\n";
        assert!(read_occupancy(bad.as_bytes(), &ColumnMap::default()).is_err());
        let zero_cap = "timestamp,lot_id,occupied,capacity\n2024-06-15T08:00:00,A,0,0\n";
        assert!(read_occupancy(zero_cap.as_bytes(), &ColumnMap::default()).is_err());
        let tx = "timestamp,lot_id\n2024-06-15T08:00:30,A\n";
        assert_eq!(
            read_transactions(tx.as_bytes(), &ColumnMap::default()).unwrap().len(),
            1
        );
    }

    fn txns(n: usize) -> Vec<TransactionRecord> {
        let t0 = ColumnMap::default().parse_time("2024-06-15T08:00:00").unwrap();
        (0..n)
            .map(|i| TransactionRecord {
                timestamp: t0 + chrono::Duration::seconds(i as i64 * 30),
                lot_id: "A".into(),
            })
            .collect()
    }

    #[test]
    fn connected_user_sampling() {
        let all = txns(1000);
        assert_eq!(sample_connected_users(&all, 1.0, 3).unwrap(), all);
        assert!(sample_connected_users(&all, 0.0, 3).is_err());
        assert!(sample_connected_users(&all, -0.1, 3).is_err());
        assert!(sample_connected_users(&[], 0.3, 3).unwrap().is_empty());
        // binomial(1000, 0.3): 99% interval is about 300 +- 37.3
        for seed in 0..20 {
            let k = sample_connected_users(&all, 0.3, seed).unwrap().len();
            assert!((262..=338).contains(&k), "seed {seed}: {k}");
        }
        assert_eq!(
            sample_connected_users(&all, 0.3, 9).unwrap(),
            sample_connected_users(&all, 0.3, 9).unwrap()
        );
    }

    #[test]
    fn empty_stream_holds_initial() {
        let tr = ProbabilityTrace::new(vec![(480.0, 0.7), (490.0, 0.2)], 500.0, TraceKind::Empirical).unwrap();
        let origin = ColumnMap::default().parse_time("2024-06-15T00:00:00").unwrap();
        let s = transactions_to_stream(&tr, &[], "A", origin).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.estimate_at(495.0), 0.7);
        let kept = txns(1);
        let s = transactions_to_stream(&tr, &kept, "A", origin).unwrap();
        assert_eq!(s.observations(), &[(480.0, 0.7)]);
    }

    #[test]
    fn synthetic_round_trip() {
        let profile = SynthProfile::high_demand();
        let ds = synth_dataset(&profile, 5).unwrap();
        let occ = read_occupancy(ds.occupancy_csv.as_bytes(), &ColumnMap::default()).unwrap();
        let tx = read_transactions(ds.transactions_csv.as_bytes(), &ColumnMap::default()).unwrap();
        let (origin, traces, arrivals) = load_lots(&occ, &tx, &ds.lot_ids).unwrap();
        assert_eq!(origin, ds.origin);
        for (a, b) in traces.iter().zip(&ds.traces) {
            assert_eq!(a.samples(), b.samples());
        }
        assert_eq!(arrivals, ds.arrivals);
        assert_eq!(synth_dataset(&profile, 5).unwrap(), ds);
    }

    #[test]
    fn high_demand_dips() {
        let ds = synth_dataset(&SynthProfile::high_demand(), 1).unwrap();
        let min = ds.traces[0].samples().iter().map(|s| s.1).fold(1.0, f64::min);
        assert!(min < 0.2, "lot A minimum {min}");
        let far = ds.traces[2].samples().iter().map(|s| s.1).fold(1.0, f64::min);
        assert!(far > 0.3, "lot C minimum {far}");
    }

    #[test]
    fn zero_arrivals_keep_occupancy() {
        let mut p = SynthProfile::low_demand();
        for lot in &mut p.lots {
            lot.arrivals = RateCurve::constant(0.0);
            lot.initial_occupied = 7;
            lot.departures = RateCurve::constant(0.0);
        }
        let ds = synth_dataset(&p, 2).unwrap();
        assert_eq!(ds.transactions_csv, "timestamp,lot_id\n");
        for tr in &ds.traces {
            let first = tr.initial();
            assert!(tr.samples().iter().all(|s| s.1 == first));
        }
    }

    #[test]
    fn rate_curve_interpolates() {
        let c = RateCurve(vec![(8.0, 10.0), (10.0, 30.0)]);
        assert_eq!(c.at_hour(7.0), 10.0);
        assert_eq!(c.at_hour(9.0), 20.0);
        assert_eq!(c.at_hour(12.0), 30.0);
        assert_eq!(c.max(), 30.0);
    }
}

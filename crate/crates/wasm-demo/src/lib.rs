//! Browser bindings for the demo page in `www/`.

use park_core::cascade;
use park_core::closed_form::{self, Cluster, WaitConvention};
use park_core::harness::synthetic_network;
use park_core::observer::{self, WalkExperiment};
use park_core::LotIndex;
use wasm_bindgen::prelude::*;

fn js(e: park_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// One walk with its hold-last estimate, sampled once per minute.
#[wasm_bindgen]
pub struct WalkView {
    truth: Vec<f64>,
    estimate: Vec<f64>,
    observed_at: Vec<f64>,
    mae: f64,
}

#[wasm_bindgen]
impl WalkView {
    pub fn truth(&self) -> Vec<f64> {
        self.truth.clone()
    }

    pub fn estimate(&self) -> Vec<f64> {
        self.estimate.clone()
    }

    /// Minutes at which a connected user reported.
    pub fn observed_at(&self) -> Vec<f64> {
        self.observed_at.clone()
    }

    pub fn mae(&self) -> f64 {
        self.mae
    }
}

pub fn walk_view(start: f64, minutes: u32, lambda: f64, adoption: f64, seed: u64) -> park_core::Result<WalkView> {
    let exp = WalkExperiment {
        start,
        minutes,
        lambda_per_hour: lambda,
        adoption,
        seeds: 1,
        master_seed: seed,
    };
    let (walk, stream, mae) = exp.run_seed(0)?;
    let grid = (0..=minutes).map(f64::from);
    Ok(WalkView {
        truth: grid.clone().map(|t| walk.value_at(t).unwrap_or(f64::NAN)).collect(),
        estimate: grid.map(|t| stream.estimate_at(t)).collect(),
        observed_at: stream.observations().iter().map(|o| o.0).collect(),
        mae,
    })
}

#[wasm_bindgen]
pub fn observe_walk(start: f64, minutes: u32, lambda: f64, adoption: f64, seed: u64) -> Result<WalkView, JsError> {
    walk_view(start, minutes, lambda, adoption, seed).map_err(js)
}

/// Strategy values on the three-lot demo network for chosen probabilities.
#[wasm_bindgen]
pub struct LotChoice {
    patient: Vec<f64>,
    best_patient: usize,
    cluster: f64,
    mdp_first: usize,
    mdp_time: f64,
}

#[wasm_bindgen]
impl LotChoice {
    /// Patient expected time for lots 1..=3.
    pub fn patient(&self) -> Vec<f64> {
        self.patient.clone()
    }

    pub fn best_patient(&self) -> usize {
        self.best_patient
    }

    /// Cycling lots 2 and 3 as one cluster.
    pub fn cluster(&self) -> f64 {
        self.cluster
    }

    /// First lot of the optimal (value iteration) policy.
    pub fn mdp_first(&self) -> usize {
        self.mdp_first
    }

    pub fn mdp_time(&self) -> f64 {
        self.mdp_time
    }
}

pub fn lot_choice_for(probs: [f64; 3]) -> park_core::Result<LotChoice> {
    let net = synthetic_network().with_probs(probs.to_vec())?;
    let patient = net
        .lots()
        .map(|l| closed_form::patient_expected_time(&net, l, WaitConvention::ChargeFirstFlip))
        .collect::<park_core::Result<Vec<_>>>()?;
    let (best, _) = closed_form::best_patient_lot(&net)?;
    let (a, b) = (LotIndex(2), LotIndex(3));
    let cluster = Cluster::new([a, b], net.drive(a, b), net.drive(LotIndex(0), a), net.walk(b));
    let vi = closed_form::value_iteration(&net, 1e-9)?;
    Ok(LotChoice {
        patient,
        best_patient: best.0,
        cluster: closed_form::cluster_expected_time(&cluster, &probs, net.wait_time())?,
        mdp_first: vi.policy[0].0,
        mdp_time: vi.expected_time(LotIndex(0)),
    })
}

#[wasm_bindgen]
pub fn lot_choice(p1: f64, p2: f64, p3: f64) -> Result<LotChoice, JsError> {
    lot_choice_for([p1, p2, p3]).map_err(js)
}

/// `[formula, oracle]` pairs for n = 1..=max_n vehicles heading to one lot.
pub fn cascade_pairs(p1: f64, max_n: u32, samples: u64, seed: u64) -> park_core::Result<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * max_n as usize);
    for n in 1..=max_n {
        out.push(cascade::first_order(p1, n)?);
        out.push(cascade::first_order_sim(p1, n, samples, seed ^ u64::from(n))?.mean);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn cascade_curve(p1: f64, max_n: u32, samples: u64, seed: u64) -> Result<Vec<f64>, JsError> {
    cascade_pairs(p1, max_n, samples, seed).map_err(js)
}

/// Interval error constant of a linear trend, for the page's readout.
#[wasm_bindgen]
pub fn linear_error(slope_per_min: f64, lambda: f64, adoption: f64) -> f64 {
    observer::linear_error_expectation(slope_per_min, lambda, adoption).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_view_lines_up() {
        let v = walk_view(0.5, 120, 20.0, 0.5, 1).unwrap();
        assert_eq!(v.truth.len(), 121);
        assert_eq!(v.estimate.len(), 121);
        assert_eq!(v.estimate[0], 0.5);
        assert!(v.mae >= 0.0 && v.mae < 0.2);
        assert!(walk_view(1.5, 10, 20.0, 0.5, 1).is_err());
    }

    #[test]
    fn lot_choice_prefers_certain_lot() {
        let c = lot_choice_for([0.1, 0.1, 1.0]).unwrap();
        assert_eq!(c.best_patient, 3);
        assert_eq!(c.mdp_first, 3);
        assert!(c.mdp_time <= c.patient[2] + 1e-9);
        assert!(lot_choice_for([0.0, 0.5, 0.5]).is_err());
    }

    #[test]
    fn cascade_pairs_track_formula() {
        let v = cascade_pairs(0.5, 4, 20_000, 9).unwrap();
        assert_eq!(v.len(), 8);
        for pair in v.chunks(2) {
            assert!((pair[0] - pair[1]).abs() < 0.02, "{pair:?}");
        }
    }
}

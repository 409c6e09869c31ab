//! Ego parking probability when other vehicles arrive first.
//!
//! Three mechanisms: competitors at the ego's lot (first order), competitors
//! diverted from nearby lots (second order) and a knock-on chain through an
//! intervening lot (third order). Each closed form has a behavioral Monte
//! Carlo counterpart that simulates the coin flips directly.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::mc::{self, Estimate};
use crate::seeds::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CascadeCase {
    FirstOrder,
    SecondOrder,
    ThirdOrder,
}

/// `probs[0]` is the ego's lot. For `FirstOrder`, `n_vehicles` counts every
/// flip at lot 1 including the ego's own; the other cases derive it from
/// `probs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeScenario {
    pub case: CascadeCase,
    pub probs: Vec<f64>,
    #[serde(default)]
    pub n_vehicles: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeReport {
    pub case: CascadeCase,
    pub probs: Vec<f64>,
    pub n_vehicles: u32,
    pub formula: f64,
    pub oracle: Estimate,
    pub abs_gap: f64,
    pub gap_in_std_errs: f64,
}

fn check_all(probs: &[f64]) -> Result<()> {
    for (k, &p) in probs.iter().enumerate() {
        check_probability(format!("p{}", k + 1), p)?;
    }
    Ok(())
}

fn flip(rng: &mut Rng, p: f64) -> bool {
    rng.gen::<f64>() < p
}

/// The ego is the `n`th of `n` flips at lot 1 and parks only if all succeed.
pub fn first_order(p1: f64, n: u32) -> Result<f64> {
    check_probability("p1", p1)?;
    if n < 1 {
        return Err(Error::InvalidParameter("first-order case needs n >= 1".into()));
    }
    Ok(p1.powi(n as i32))
}

pub fn first_order_sim(p1: f64, n: u32, samples: u64, seed: u64) -> Result<Estimate> {
    first_order(p1, n)?;
    Ok(mc::estimate_probability(samples.max(1), seed, |rng| {
        (0..n).all(|_| flip(rng, p1))
    }))
}

/// `prod_j p_j + sum_{k=2..n} p1^k (1 - p_k) prod_{l>k} p_l`.
pub fn second_order_formula(probs: &[f64]) -> Result<f64> {
    if probs.len() < 2 {
        return Err(Error::InvalidParameter(
            "second-order case needs at least 2 lots".into(),
        ));
    }
    check_all(probs)?;
    let n = probs.len();
    let p1 = probs[0];
    let all: f64 = probs.iter().product();
    let diverted: f64 = (2..=n)
        .map(|k| {
            let tail: f64 = probs[k..].iter().product();
            p1.powi(k as i32) * (1.0 - probs[k - 1]) * tail
        })
        .sum();
    Ok(all + diverted)
}

/// Vehicles 2..n flip at their own lot; each failure moves to lot 1 and
/// flips there ahead of the ego, who arrives last.
pub fn second_order_sim(probs: &[f64], samples: u64, seed: u64) -> Result<Estimate> {
    if probs.is_empty() {
        return Err(Error::InvalidParameter("second-order case needs the ego lot".into()));
    }
    check_all(probs)?;
    let p1 = probs[0];
    let others = probs[1..].to_vec();
    Ok(mc::estimate_probability(samples.max(1), seed, move |rng| {
        let mut ok = true;
        for &pk in &others {
            if !flip(rng, pk) {
                ok &= flip(rng, p1);
            }
        }
        ok & flip(rng, p1)
    }))
}

/// Knock-on chain: vehicle 3 tries lot 3 then lot 2, vehicle 2 tries lot 2
/// then lot 1, the ego is last at lot 1.
pub fn third_order(p1: f64, p2: f64, p3: f64) -> Result<f64> {
    check_all(&[p1, p2, p3])?;
    let either = 1.0 - p2 * p2 - (1.0 - p2).powi(2);
    Ok(p3 * (p2 * p1 + (1.0 - p2) * p1 * p1)
        + (1.0 - p3) * (p1 * p2 * p2 + p1 * p1 * either + (1.0 - p2).powi(2) * p1.powi(3)))
}

pub fn third_order_sim(p1: f64, p2: f64, p3: f64, samples: u64, seed: u64) -> Result<Estimate> {
    check_all(&[p1, p2, p3])?;
    Ok(mc::estimate_probability(samples.max(1), seed, move |rng| {
        let mut at_lot2 = 1; // vehicle 2
        if !flip(rng, p3) {
            at_lot2 += 1; // vehicle 3 spills over
        }
        let mut ok = true;
        for _ in 0..at_lot2 {
            if !flip(rng, p2) {
                ok &= flip(rng, p1);
            }
        }
        ok & flip(rng, p1)
    }))
}

/// Formula, behavioral oracle and their gap for one scenario.
pub fn evaluate(scenario: &CascadeScenario, samples: u64, seed: u64) -> Result<CascadeReport> {
    let probs = &scenario.probs;
    let need = |k: usize| -> Result<()> {
        if probs.len() < k {
            Err(Error::InvalidParameter(format!(
                "case needs {k} probabilities, got {}",
                probs.len()
            )))
        } else {
            Ok(())
        }
    };
    let (formula, oracle, n) = match scenario.case {
        CascadeCase::FirstOrder => {
            need(1)?;
            let n = scenario
                .n_vehicles
                .ok_or_else(|| Error::InvalidParameter("first-order case needs n".into()))?;
            (
                first_order(probs[0], n)?,
                first_order_sim(probs[0], n, samples, seed)?,
                n,
            )
        }
        CascadeCase::SecondOrder => (
            second_order_formula(probs)?,
            second_order_sim(probs, samples, seed)?,
            probs.len() as u32,
        ),
        CascadeCase::ThirdOrder => {
            need(3)?;
            if probs.len() != 3 {
                return Err(Error::InvalidParameter("third-order case fixes three lots".into()));
            }
            (
                third_order(probs[0], probs[1], probs[2])?,
                third_order_sim(probs[0], probs[1], probs[2], samples, seed)?,
                3,
            )
        }
    };
    let abs_gap = (formula - oracle.mean).abs();
    Ok(CascadeReport {
        case: scenario.case,
        probs: probs.clone(),
        n_vehicles: n,
        formula,
        oracle,
        abs_gap,
        gap_in_std_errs: if oracle.std_err > 0.0 {
            abs_gap / oracle.std_err
        } else {
            0.0
        },
    })
}

use park_core::closed_form::{self, WaitConvention};
use park_core::harness;
use park_core::ingest::{self, SynthProfile};
use park_core::model::VehicleState;
use park_core::observer::{self, ObservationStream, ProbabilityTrace};
use park_core::policies::{decide, Belief, BeliefSource, PolicySpec};
use park_core::seeds;
use park_core::{LotIndex, ParkingNetwork};
use rand::Rng;

#[test]
fn poisson_observation_count_in_99_percent_interval() {
    // 20/h * 0.2 over 12 h: Poisson(48), central 99% interval [31, 66]
    let trace = ProbabilityTrace::constant(0.4, 0.0, 720.0).unwrap();
    for seed in 0..30 {
        let s = observer::observe(&trace, 20.0, 0.2, seed).unwrap();
        assert!((31..=66).contains(&s.len()), "seed {seed}: {}", s.len());
        assert!(s.observations().iter().all(|o| o.1 == 0.4));
        assert_eq!(observer::mae(&trace, &s), 0.0);
    }
}

#[test]
fn duplicate_observations_leave_mae_unchanged() {
    let walk = observer::bounded_random_walk(0.5, 240, 3).unwrap();
    let s = observer::observe(&walk, 30.0, 0.5, 4).unwrap();
    let mut doubled: Vec<(f64, f64)> = Vec::new();
    for &o in s.observations() {
        doubled.push(o);
        doubled.push(o);
    }
    let (start, end) = s.span();
    let d = ObservationStream::new(doubled, s.rate_per_hour(), s.initial(), start, end).unwrap();
    assert_eq!(observer::mae(&walk, &s), observer::mae(&walk, &d));
}

#[test]
fn swapping_lambda_and_adoption_keeps_statistics() {
    // only lambda * r matters: 40 * 0.1 and 20 * 0.2 give the same mean MAE
    let maes = |lam: f64, r: f64| {
        let e = observer::WalkExperiment {
            start: 0.5,
            minutes: 720,
            lambda_per_hour: lam,
            adoption: r,
            seeds: 200,
            master_seed: 8,
        };
        let m = e.maes().unwrap();
        m.iter().sum::<f64>() / m.len() as f64
    };
    let (a, b) = (maes(40.0, 0.1), maes(20.0, 0.2));
    assert!((a - b).abs() < 0.1 * a, "{a} vs {b}");
}

#[test]
fn connected_user_mae_falls_with_adoption() {
    let ds = ingest::synth_dataset(&SynthProfile::high_demand(), 17).unwrap();
    for (k, (trace, arrivals)) in ds.traces.iter().zip(&ds.arrivals).enumerate() {
        let means: Vec<f64> = [0.1, 0.2, 0.3, 0.5]
            .iter()
            .map(|&r| {
                let total: f64 = (0..100u64)
                    .map(|i| {
                        let mut rng = seeds::rng_for(99, &[k as u64, i, (r * 100.0) as u64]);
                        let kept = observer::thin_arrivals(arrivals, r, &mut rng);
                        let s = observer::stream_at_times(trace, &kept, 0.0, Default::default()).unwrap();
                        observer::mae(trace, &s)
                    })
                    .sum();
                total / 100.0
            })
            .collect();
        assert!(means.windows(2).all(|w| w[1] <= w[0]), "lot {}: {means:?}", k + 1);
    }
}

#[test]
fn full_adoption_observes_every_transaction() {
    let ds = ingest::synth_dataset(&SynthProfile::moderate_demand(), 2).unwrap();
    let txns = ingest::read_transactions(ds.transactions_csv.as_bytes(), &Default::default()).unwrap();
    let kept = ingest::sample_connected_users(&txns, 1.0, 5).unwrap();
    assert_eq!(kept.len(), txns.len());
    let s = ingest::transactions_to_stream(&ds.traces[0], &kept, &ds.lot_ids[0], ds.origin).unwrap();
    assert_eq!(s.len(), ds.arrivals[0].len());
}

fn premise_instance(rng: &mut seeds::Rng, n: usize) -> ParkingNetwork {
    let mut between = vec![vec![0.0; n]; n];
    for (i, row) in between.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            if i != j {
                *c = rng.gen_range(5.0..20.0);
            }
        }
    }
    let walks = (0..n).map(|_| rng.gen_range(0.0..15.0)).collect();
    let probs = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    ParkingNetwork::from_parts(&vec![10.0; n], &between, walks, 5.0, probs).unwrap()
}

#[test]
fn value_iteration_first_action_on_four_lots() {
    let mut rng = seeds::rng(404);
    for _ in 0..25 {
        let net = premise_instance(&mut rng, 4);
        let vi = closed_form::value_iteration(&net, closed_form::DEFAULT_TOLERANCE).unwrap();
        let (best, value) = closed_form::best_patient_lot(&net).unwrap();
        assert_eq!(vi.policy[0], best);
        // reward semantics charge no wait on the first attempt
        assert!((vi.expected_time(LotIndex::ORIGIN) - (value - 5.0)).abs() < 1e-6);
        assert!(closed_form::bellman_residual(&net, &vi.values) < 1e-9);
    }
}

#[test]
fn pa1_origin_choice_is_near_best_patient() {
    // PA-1 charges t(0,j)/p_j instead of t(0,j) + t_wait/p_j; count how often
    // its pick stays within one wait of the best patient value
    let mut rng = seeds::rng(405);
    let mut within = 0;
    let trials = 200;
    for _ in 0..trials {
        let n = rng.gen_range(1..=4);
        let net = premise_instance(&mut rng, n);
        let belief = Belief::new(net.initial_probs().to_vec(), BeliefSource::OracleTrue).unwrap();
        let pick = decide(&PolicySpec::pa(1).unwrap(), &VehicleState::at_origin(), &net, &belief).unwrap();
        let (_, best) = closed_form::best_patient_lot(&net).unwrap();
        let got = closed_form::patient_expected_time(&net, pick, WaitConvention::ChargeFirstFlip).unwrap();
        assert!(got >= best - 1e-9);
        if got - best <= net.wait_time() {
            within += 1;
        }
    }
    // equal origin drives make t(0,j)/p_j track t_wait/p_j closely
    assert!(within * 10 >= trials * 8, "{within}/{trials}");
}

#[test]
fn table_summary_matches_episode_file() {
    let opts = harness::PresetOptions {
        synthetic: true,
        params: harness::Params::parse(["seeds=2"]).unwrap(),
        ..harness::PresetOptions::new("unused")
    };
    let art = harness::preset_artifacts("table1", &opts).unwrap();
    let episodes = std::str::from_utf8(art.get("episodes.csv").unwrap()).unwrap();
    let summary: serde_json::Value = serde_json::from_slice(art.get("summary.json").unwrap()).unwrap();
    let rows = harness::read_episode_totals(episodes).unwrap();
    for agg in summary["results"]["aggregates"].as_array().unwrap() {
        let (setting, policy) = (agg["setting"].as_str().unwrap(), agg["policy"].as_str().unwrap());
        let totals: Vec<f64> = rows
            .iter()
            .filter(|r| r.0 == setting && r.1 == policy)
            .map(|r| r.2)
            .collect();
        let mean = totals.iter().sum::<f64>() / totals.len() as f64;
        assert_eq!(mean, agg["mean"].as_f64().unwrap(), "{setting} {policy}");
        assert_eq!(totals.len() as u64, agg["episodes"].as_u64().unwrap());
    }
}

#[test]
fn error_curve_summary_matches_mae_file() {
    let opts = harness::PresetOptions {
        params: harness::Params::parse(["seeds=20"]).unwrap(),
        ..harness::PresetOptions::new("unused")
    };
    let art = harness::preset_artifacts("fig-error-curves", &opts).unwrap();
    let summary: serde_json::Value = serde_json::from_slice(art.get("summary.json").unwrap()).unwrap();
    let csv = std::str::from_utf8(art.get("mae_by_rate.csv").unwrap()).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[3].parse().unwrap())
        })
        .collect();
    for cell in summary["results"]["by_rate"].as_array().unwrap() {
        let lam = cell["lambda_per_hour"].as_f64().unwrap();
        let v: Vec<f64> = rows.iter().filter(|r| r.0 == lam).map(|r| r.1).collect();
        assert_eq!(
            v.iter().sum::<f64>() / v.len() as f64,
            cell["mean_mae"].as_f64().unwrap()
        );
    }
    for cell in summary["results"]["by_rate"].as_array().unwrap() {
        let lam = cell["lambda_per_hour"].as_f64().unwrap();
        let mean = cell["mean_mae"].as_f64().unwrap();
        if lam >= 10.0 {
            assert!(mean < 0.05, "lambda {lam}: {mean}");
        }
    }
}

#[test]
fn walk_mae_follows_diffusion_estimate() {
    // unbounded +-0.01/min walk, Poisson sampling with mean gap mu minutes:
    // time-weighted E|W| = 0.01 sqrt(2/pi) E[T^1.5] (2/3) / E[T] = 0.01 sqrt(mu / 2)
    for (lam, r) in [(5.0, 0.2), (20.0, 0.2), (30.0, 0.5)] {
        let mu = 60.0 / (lam * r);
        let expected = 0.01 * (mu / 2.0f64).sqrt();
        let e = observer::WalkExperiment {
            start: 0.5,
            minutes: 720,
            lambda_per_hour: lam,
            adoption: r,
            seeds: 300,
            master_seed: 77,
        };
        let m = e.maes().unwrap();
        let mean = m.iter().sum::<f64>() / m.len() as f64;
        assert!(
            (mean - expected).abs() < 0.1 * expected,
            "lambda {lam}, r {r}: {mean} vs {expected}"
        );
    }
}

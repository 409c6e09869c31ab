use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chrono::NaiveDateTime;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use park_core::cascade::{self, CascadeCase, CascadeScenario};
use park_core::harness::{self, Artifacts, Params, PresetOptions, DEFAULT_MASTER_SEED, PRESETS};
use park_core::ingest::{self, ColumnMap, SynthProfile};
use park_core::observer::{self, WalkExperiment};
use park_core::simulator;

/// Probability-aware parking selection experiments.
#[derive(Debug, Parser)]
#[command(name = "park-sim", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Network or simulation config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, env = "PARK_SIM_OUT", default_value = "park-sim-out")]
    out: PathBuf,
    /// Use generated data where recorded data files would be read.
    #[arg(long, global = true)]
    synthetic: bool,
}

impl Global {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_MASTER_SEED)
    }

    fn config(&self, what: &str) -> Result<&Path> {
        self.config
            .as_deref()
            .with_context(|| format!("{what} needs --config FILE"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Patient values, best lot, sensitivity table and value-iteration policy.
    ClosedForm {
        /// Also solve the MDP by value iteration.
        #[arg(long)]
        value_iteration: bool,
    },
    /// Cascade closed form against its behavioral Monte Carlo oracle.
    Cascade {
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Comma-separated lot probabilities, ego lot first.
        #[arg(long, value_delimiter = ',', required = true)]
        probs: Vec<f64>,
        /// Total flips at the ego lot (first order).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Observation error laws and their renewal-interval oracle.
    ObserveError {
        #[arg(long, value_enum)]
        law: LawArg,
        /// Trend slope per minute (linear law).
        #[arg(long, default_value_t = 0.01)]
        slope: f64,
        /// Exponent (power law).
        #[arg(long, default_value_t = 2.0)]
        exponent: f64,
        /// Vehicle arrivals per hour.
        #[arg(long, default_value_t = 20.0)]
        lambda: f64,
        /// Connected-user adoption fraction.
        #[arg(long, default_value_t = 0.2)]
        adoption: f64,
        #[arg(long, default_value_t = 100_000)]
        draws: u64,
    },
    /// Bounded random walks observed by connected users; per-seed MAEs.
    RandomWalk {
        #[arg(long, default_value_t = 0.5)]
        start: f64,
        #[arg(long, default_value_t = 720)]
        minutes: u32,
        #[arg(long, default_value_t = 20.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.2)]
        adoption: f64,
        #[arg(long, default_value_t = 100)]
        seeds: u32,
    },
    /// Occupancy and transaction files to traces and observation streams.
    Ingest {
        #[arg(long)]
        occupancy: Option<PathBuf>,
        #[arg(long)]
        transactions: Option<PathBuf>,
        /// TOML with `[occupancy]` and `[transactions]` column maps.
        #[arg(long, conflicts_with = "sdot")]
        columns: Option<PathBuf>,
        /// Use SDOT export column names.
        #[arg(long)]
        sdot: bool,
        /// Lot ids to keep, in network order (default: all, first-seen order).
        #[arg(long, value_delimiter = ',')]
        lots: Vec<String>,
        /// Synthetic profile with --synthetic.
        #[arg(long, default_value = "high-demand")]
        profile: String,
        #[arg(long, default_value_t = 0.3)]
        adoption: f64,
        /// Keep records at or after this time (e.g. 2024-06-15T08:00:00).
        #[arg(long)]
        from: Option<NaiveDateTime>,
        /// Keep records before this time.
        #[arg(long)]
        to: Option<NaiveDateTime>,
    },
    /// Policy batch over a simulation config.
    Simulate,
    /// Time-to-arrive gaps against time-to-drive and transit.
    Compare {
        /// Aggregate CSV written by `simulate` or a table preset.
        #[arg(long)]
        aggregates: PathBuf,
        #[arg(long)]
        time_to_drive: f64,
        #[arg(long)]
        transit: f64,
    },
    /// Named experiment preset.
    Preset {
        /// One of the preset names; omit with --list.
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// Parameter override `key=value` (repeatable).
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        #[arg(long)]
        list: bool,
    },
    /// Check a config file against the schema and model assumptions.
    Validate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LawArg {
    Linear,
    Exponential,
}

fn write_artifacts(out: &Path, sub: &str, art: &Artifacts) -> Result<()> {
    let dir = out.join(sub);
    let files = art
        .write_to(&dir)
        .with_context(|| format!("writing to {}", dir.display()))?;
    for f in files {
        log::info!("wrote {}", f.display());
    }
    Ok(())
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn column_maps(columns: Option<&Path>, sdot: bool) -> Result<(ColumnMap, ColumnMap)> {
    if sdot {
        return Ok((ColumnMap::sdot_occupancy(), ColumnMap::sdot_transactions()));
    }
    let Some(path) = columns else {
        return Ok((ColumnMap::default(), ColumnMap::default()));
    };
    #[derive(serde::Deserialize)]
    struct Maps {
        #[serde(default)]
        occupancy: ColumnMap,
        #[serde(default)]
        transactions: ColumnMap,
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let maps: Maps = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((maps.occupancy, maps.transactions))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match cli.command {
        Command::ClosedForm { value_iteration } => {
            let net = harness::load_network(g.config("closed-form")?)?;
            print!("{}", harness::closed_form_csv(&net, value_iteration)?);
        }
        Command::Cascade {
            case,
            probs,
            n,
            samples,
        } => {
            let case = match case {
                CaseArg::First => CascadeCase::FirstOrder,
                CaseArg::Second => CascadeCase::SecondOrder,
                CaseArg::Third => CascadeCase::ThirdOrder,
            };
            let scenario = CascadeScenario {
                case,
                probs,
                n_vehicles: n,
            };
            let report = cascade::evaluate(&scenario, samples, g.seed())?;
            print_json(&serde_json::to_value(report)?)?;
        }
        Command::ObserveError {
            law,
            slope,
            exponent,
            lambda,
            adoption,
            draws,
        } => {
            let rate = lambda * adoption / 60.0;
            let v = match law {
                LawArg::Linear => {
                    let closed = observer::linear_error_expectation(slope, lambda, adoption)?;
                    let est = observer::integrated_error_oracle(|s| slope * s, rate, draws, g.seed())?;
                    json!({
                        "law": "linear", "slope_per_min": slope, "rate_per_min": rate,
                        "closed_form": closed, "oracle": est,
                    })
                }
                LawArg::Exponential => {
                    let printed = observer::exponential_error_expectation(exponent, lambda, adoption)?;
                    let moment = observer::exponential_error_moment(exponent, rate)?;
                    let est = observer::integrated_error_oracle(|s| s.powf(exponent), rate, draws, g.seed())?;
                    json!({
                        "law": "exponential", "exponent": exponent, "rate_per_min": rate,
                        "printed_constant": printed, "moment_constant": moment, "oracle": est,
                        "matches": harness::power_law_match(est.mean, printed, moment),
                    })
                }
            };
            print_json(&v)?;
        }
        Command::RandomWalk {
            start,
            minutes,
            lambda,
            adoption,
            seeds,
        } => {
            let exp = WalkExperiment {
                start,
                minutes,
                lambda_per_hour: lambda,
                adoption,
                seeds,
                master_seed: g.seed(),
            };
            let maes = exp.maes()?;
            let mut art = Artifacts::default();
            let mut csv = String::from("seed,mae\n");
            for (i, m) in maes.iter().enumerate() {
                csv.push_str(&format!("{i},{m}\n"));
            }
            art.add("mae.csv", csv);
            if seeds > 0 {
                let (walk, stream, _) = exp.run_seed(0)?;
                art.add("trace_seed0.csv", harness::traces_csv(&[walk]));
                art.add(
                    "observations_seed0.csv",
                    harness::observations_csv(&[stream], "observed"),
                );
            }
            let (mean, std) = simulator::mean_std(&maes);
            let summary = json!({ "seeds": maes.len(), "mean_mae": mean, "std_mae": std, "experiment": exp });
            art.add_json("summary.json", &summary)?;
            write_artifacts(&g.out, "random-walk", &art)?;
            print_json(&summary)?;
        }
        Command::Ingest {
            occupancy,
            transactions,
            columns,
            sdot,
            lots,
            profile,
            adoption,
            from,
            to,
        } => {
            let mut art = Artifacts::default();
            let (occ, txns) = if g.synthetic {
                let ds = ingest::synth_dataset(&SynthProfile::by_name(&profile)?, g.seed())?;
                let occ = ingest::read_occupancy(ds.occupancy_csv.as_bytes(), &ColumnMap::default())?;
                let tx = ingest::read_transactions(ds.transactions_csv.as_bytes(), &ColumnMap::default())?;
                art.add("occupancy.csv", ds.occupancy_csv);
                art.add("transactions.csv", ds.transactions_csv);
                (occ, tx)
            } else {
                let (om, tm) = column_maps(columns.as_deref(), sdot)?;
                let (Some(op), Some(tp)) = (occupancy, transactions) else {
                    bail!("ingest needs --occupancy and --transactions, or --synthetic");
                };
                let occ = ingest::read_occupancy(
                    fs::File::open(&op).with_context(|| format!("opening {}", op.display()))?,
                    &om,
                )?;
                let tx = ingest::read_transactions(
                    fs::File::open(&tp).with_context(|| format!("opening {}", tp.display()))?,
                    &tm,
                )?;
                (occ, tx)
            };
            let keep = |t: &NaiveDateTime| from.is_none_or(|f| *t >= f) && to.is_none_or(|e| *t < e);
            let occ: Vec<_> = occ.into_iter().filter(|r| keep(&r.timestamp)).collect();
            let txns: Vec<_> = txns.into_iter().filter(|r| keep(&r.timestamp)).collect();
            let lots = if lots.is_empty() { ingest::lot_ids(&occ) } else { lots };
            let (origin, traces, arrivals) = ingest::load_lots(&occ, &txns, &lots)?;
            let kept = ingest::sample_connected_users(&txns, adoption, park_core::seeds::derive(g.seed(), &[1]))?;
            let streams = traces
                .iter()
                .zip(&lots)
                .map(|(tr, id)| ingest::transactions_to_stream(tr, &kept, id, origin))
                .collect::<park_core::Result<Vec<_>>>()?;
            let maes: Vec<f64> = traces.iter().zip(&streams).map(|(t, s)| observer::mae(t, s)).collect();
            art.add("traces.csv", harness::traces_csv(&traces));
            art.add("arrivals.csv", harness::arrivals_csv(&arrivals));
            art.add(
                "observations.csv",
                harness::observations_csv(&streams, "connected-user"),
            );
            let summary = json!({
                "origin": origin.to_string(), "lots": lots, "adoption": adoption,
                "transactions": txns.len(), "retained": kept.len(), "mae": maes,
            });
            art.add_json("summary.json", &summary)?;
            write_artifacts(&g.out, "ingest", &art)?;
            print_json(&summary)?;
        }
        Command::Simulate => {
            let loaded = harness::load_config(g.config("simulate")?)?;
            let seed = g.seed.or(loaded.config.master_seed).unwrap_or(DEFAULT_MASTER_SEED);
            let (batch, art) = harness::simulate(&loaded, seed)?;
            write_artifacts(&g.out, "simulate", &art)?;
            print!("{}", harness::aggregates_csv(&batch.aggregates));
        }
        Command::Compare {
            aggregates,
            time_to_drive,
            transit,
        } => {
            let text = fs::read_to_string(&aggregates).with_context(|| format!("reading {}", aggregates.display()))?;
            let rows = harness::read_aggregates_csv(&text)?;
            let gaps = simulator::compare_modes(&rows, time_to_drive, transit)?;
            let csv = harness::gaps_csv(&gaps);
            let mut art = Artifacts::default();
            art.add("gaps.csv", csv.clone());
            write_artifacts(&g.out, "compare", &art)?;
            print!("{csv}");
        }
        Command::Preset { name, params, list } => {
            if list {
                for p in PRESETS {
                    println!("{p}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let name = name.expect("required by clap");
            let opts = PresetOptions {
                master_seed: g.seed(),
                out_dir: g.out.clone(),
                synthetic: g.synthetic,
                config: g.config.clone(),
                params: Params::parse(params.iter().map(String::as_str))?,
            };
            let run = harness::run_preset(&name, &opts)?;
            for f in &run.files {
                log::info!("wrote {}", f.display());
            }
            println!("{}", run.dir.join("summary.json").display());
        }
        Command::Validate => {
            let path = g.config("validate")?;
            let report = harness::validate_config(path)?;
            if report.is_valid() {
                println!("{}: ok", path.display());
            } else {
                for v in &report.violations {
                    println!("{}: {v}", path.display());
                }
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(park_core::Error::MissingData(_)) = e.downcast_ref::<park_core::Error>() {
                return ExitCode::from(3);
            }
            ExitCode::FAILURE
        }
    }
}

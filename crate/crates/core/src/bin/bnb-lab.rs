use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand};
use serde_json::json;

use bnb_lab::bounds::{self, AlphaFunction};
use bnb_lab::harness::{self, SolveOptions, Strategy, SweepConfig};
use bnb_lab::knapsack::{dp_optimum, knapsack_oracle, KnapsackInstance};
use bnb_lab::quantum::{GrayZonePolicy, QbbConfig};
use bnb_lab::sk::SkInstance;
use bnb_lab::{best_first, Cost};

/// Branch-and-bound experiments on spin glasses and knapsack instances.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write random spin-glass instance files.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        p_bits: Option<u32>,
        /// Output directory.
        #[arg(long, default_value = "instances")]
        out: PathBuf,
    },
    /// Find the ground state of one instance file.
    Solve {
        instance: PathBuf,
        /// best-first or dfs.
        #[arg(long, default_value = "dfs")]
        strategy: Strategy,
        /// Overrides the precision stored in the file.
        #[arg(long)]
        p_bits: Option<u32>,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        fix_first_spin: bool,
        /// Also count the tree truncated at the optimum.
        #[arg(long)]
        exact_tmin: bool,
    },
    /// Solve a batch of random instances by depth-first search and write a
    /// CSV row per instance. Defaults: n = 16..34 (even), 25 per n.
    Sweep {
        #[command(flatten)]
        batch: Batch,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        fix_first_spin: bool,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Least-squares fit of log2(median tree size) against n.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value_t = 16)]
        n_min: usize,
    },
    /// Modeled quantum query cost of branch-and-bound, with the analytic bound.
    Qcost {
        /// Instance file; omit to run a batch.
        instance: Option<PathBuf>,
        /// Built-in fixture instead of a spin glass (`fig1`).
        #[arg(long, conflicts_with = "instance")]
        fixture: Option<String>,
        #[command(flatten)]
        batch: Batch,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// truthful, always-exceeds, always-estimate, random or random:<seed>.
        #[arg(long, default_value = "truthful")]
        policy: GrayZonePolicy,
        #[arg(long = "K", default_value_t = 10.0)]
        k_const: f64,
        /// Write the JSON report (with per-call ledgers for single runs) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the numerical claims of the tree-size analysis.
    VerifyBounds {
        #[arg(long, default_value_t = 100_000)]
        grid: usize,
        #[arg(long)]
        no_refine: bool,
        /// Monte Carlo samples per n for the expectation bound.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Trials for the concentration check.
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory for CSV tables.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a knapsack instance file and cross-check by dynamic programming.
    Knapsack { instance: PathBuf },
}

#[derive(Args)]
struct Batch {
    /// Sizes: `a..b` (inclusive, step 2) or a comma list.
    #[arg(long, default_value = "16..34")]
    n: String,
    #[arg(long, default_value_t = 25)]
    per_n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    p_bits: Option<u32>,
}

impl Batch {
    fn config(&self, fix_first_spin: bool) -> Result<SweepConfig> {
        Ok(SweepConfig {
            ns: parse_ns(&self.n)?,
            per_n: self.per_n,
            base_seed: self.seed,
            p_bits: self.p_bits,
            fix_first_spin,
            exact_tmin: true,
        })
    }
}

fn parse_ns(s: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().context("range start")?;
        let b: usize = b.trim().trim_start_matches('=').parse().context("range end")?;
        if a > b {
            bail!("empty range {s}");
        }
        return Ok((a..=b).step_by(2).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().with_context(|| format!("bad size {x:?}")))
        .collect()
}

fn print(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen {
            n,
            count,
            seed,
            p_bits,
            out,
        } => {
            let files = harness::generate_instances(&out, n, count, seed, p_bits)?;
            for f in files {
                println!("{}", f.display());
            }
        }
        Cmd::Solve {
            instance,
            strategy,
            p_bits,
            fix_first_spin,
            exact_tmin,
        } => {
            let (inst, p) = SkInstance::load(&instance)?;
            let r = harness::solve_instance(
                &inst,
                SolveOptions {
                    strategy,
                    p_bits: Some(p_bits.unwrap_or(p)),
                    fix_first_spin,
                    exact_tmin,
                },
            )?;
            print(&r)?;
        }
        Cmd::Sweep {
            batch,
            fix_first_spin,
            out,
        } => {
            let records = harness::run_sweep(&batch.config(fix_first_spin)?)?;
            harness::write_sweep_csv(&out, &records)?;
            eprintln!("{} instances written to {}", records.len(), out.display());
        }
        Cmd::Fit { csv, n_min } => {
            let records = harness::read_sweep_csv(&csv)?;
            print(&harness::fit_records(&records, n_min)?)?;
        }
        Cmd::Qcost {
            instance,
            fixture,
            batch,
            eps,
            policy,
            k_const,
            out,
        } => {
            let config = QbbConfig {
                eps,
                k_const,
                policy,
                ..QbbConfig::default()
            };
            let single = match (fixture.as_deref(), instance) {
                (Some("fig1"), _) => Some(harness::fig1_qcost(config)?),
                (Some(other), _) => bail!("unknown fixture {other:?}"),
                (None, Some(path)) => {
                    let (inst, p) = SkInstance::load(&path)?;
                    Some(harness::qcost_instance(&inst, 0, Some(p), config)?)
                }
                (None, None) => None,
            };
            let report = match single {
                Some((outcome, record)) => json!({
                    "schema_version": harness::REPORT_SCHEMA_VERSION,
                    "record": record,
                    "ledger": outcome.ledger_json(),
                }),
                None => {
                    let records = harness::qcost_sweep(&batch.config(true)?, config)?;
                    let ratios = records.iter().map(|r| r.ratio);
                    let max = ratios.clone().fold(f64::NEG_INFINITY, f64::max);
                    let min = ratios.fold(f64::INFINITY, f64::min);
                    json!({
                        "schema_version": harness::REPORT_SCHEMA_VERSION,
                        "ratio_max": max,
                        "ratio_min": min,
                        "records": records,
                    })
                }
            };
            match out {
                Some(path) => harness::write_atomic(&path, serde_json::to_string_pretty(&report)?.as_bytes())?,
                None => print(&report)?,
            }
        }
        Cmd::VerifyBounds {
            grid,
            no_refine,
            samples,
            trials,
            seed,
            out,
        } => {
            let claims = bounds::verify_alpha_claims(grid, !no_refine);
            let lemma3: Vec<_> = [8, 10, 12]
                .iter()
                .map(|&n| bounds::lemma3_check(n, samples, seed))
                .collect();
            let conc = bounds::concentration_check(10, trials, &bounds::default_t_grid(10), seed);
            let pass = claims.iter().all(|c| c.pass) && lemma3.iter().all(|r| r.pass) && conc.pass();
            if let Some(dir) = out {
                write_tables(&dir, &conc)?;
            }
            print(&json!({
                "schema_version": harness::REPORT_SCHEMA_VERSION,
                "pass": pass,
                "alpha_claims": claims,
                "lemma3": lemma3,
                "concentration": conc,
            }))?;
            return Ok(pass);
        }
        Cmd::Knapsack { instance } => {
            let inst = KnapsackInstance::load(&instance)?;
            let oracle = knapsack_oracle(&inst);
            let out = best_first(&oracle)?;
            let Cost::Finite(cost) = out.cost else {
                bail!("the empty packing is always feasible, yet no solution was found");
            };
            let value = inst.total_value() - cost;
            let items: Vec<usize> = out
                .solution
                .map(|p| oracle.inner().packed_items(&p).iter().map(|k| k + 1).collect())
                .unwrap_or_default();
            let dp = dp_optimum(&inst).ok();
            print(&json!({
                "schema_version": harness::REPORT_SCHEMA_VERSION,
                "value": value,
                "items": items,
                "explored": out.explored_nodes,
                "dp_value": dp,
            }))?;
            if dp.is_some_and(|d| d != value) {
                bail!("branch-and-bound value {value} differs from the dynamic-programming optimum");
            }
        }
    }
    Ok(true)
}

fn write_tables(dir: &std::path::Path, conc: &bounds::ConcentrationReport) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for f in AlphaFunction::ALL {
        let mut w = csv::Writer::from_path(dir.join(format!("{f}.csv")))?;
        w.write_record(["alpha", "value"])?;
        for (a, v) in bounds::alpha_table(f, 0.0, 1.0, 1001)? {
            w.write_record([a.to_string(), v.to_string()])?;
        }
        w.flush()?;
    }
    let mut w = csv::Writer::from_path(dir.join("tails.csv"))?;
    w.write_record(["t", "upper_tail", "lower_tail", "bound"])?;
    for r in &conc.rows {
        w.write_record([r.t, r.upper_tail, r.lower_tail, r.bound].map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! `stickydisc`: build, check and measure sticky-disc ground states.
//!
//! Exit codes: 0 success, 1 validation violations, 2 usage or input errors,
//! 3 oracle budget exhausted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stickydisc_core::harness::{k_values, run_scaling_experiment, Progression};
use stickydisc_core::oracle::{self, DEFAULT_BUDGET};
use stickydisc_core::shape::flat_norm_proxy;
use stickydisc_core::validators::{self, DEFAULT_THRESHOLD};
use stickydisc_core::{
    degenerate, fit_hexagon, hexagon, normalize, spiral, ConfigFile, Configuration, Error, Family,
};

#[derive(Parser)]
#[command(name = "stickydisc", version, about = "Sticky-disc ground states on the triangular lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructFamily {
    Spiral,
    Hexagon,
    Degenerate,
    Normalized,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingFamily {
    Spiral,
    Degenerate,
}

#[derive(Subcommand)]
enum Command {
    /// Write a constructed configuration to a file.
    Construct {
        #[arg(long, value_enum)]
        family: ConstructFamily,
        /// Atom count (spiral, normalized).
        #[arg(long)]
        n: Option<u64>,
        /// Hexagon radius (hexagon, degenerate).
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print atom count, bond count and energy.
    Energy { file: PathBuf },
    /// Check boundary angles and hull sides.
    Validate {
        file: PathBuf,
        /// One JSON object per finding.
        #[arg(long)]
        json: bool,
        /// Findings below this atom count are informational.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: usize,
    },
    /// Exhaustive maximum bond count for small N.
    Oracle {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        list_maximizers: bool,
    },
    /// Distance to the best-fitting lattice hexagon.
    Deviation {
        file: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Deviation against N across a family.
    Scaling {
        #[arg(long, value_enum)]
        family: ScalingFamily,
        #[arg(long)]
        k_min: i64,
        #[arg(long)]
        k_max: i64,
        #[arg(long)]
        csv: PathBuf,
        /// Only k_min, 2 k_min, 4 k_min, ...
        #[arg(long)]
        doubling: bool,
        /// Record wall time per row (makes the CSV run-dependent).
        #[arg(long)]
        timing: bool,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("STICKYDISC_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: STICKYDISC_THREADS must be a positive integer, got '{t}'");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load(path: &PathBuf) -> Result<Configuration, Failure> {
    let file = ConfigFile::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(file.configuration()?)
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Construct { family, n, k, out } => {
            let need_n = || n.ok_or_else(|| Failure::Usage("this family needs --n".into()));
            let need_k = || k.ok_or_else(|| Failure::Usage("this family needs --k".into()));
            let (config, name, param) = match family {
                ConstructFamily::Spiral => (spiral(need_n()?)?, "spiral", ("N", need_n()? as i64)),
                ConstructFamily::Hexagon => (hexagon(need_k()?)?, "hexagon", ("k", need_k()?)),
                ConstructFamily::Degenerate => (degenerate(need_k()?)?.config, "degenerate", ("k", need_k()?)),
                ConstructFamily::Normalized => {
                    (normalize(&spiral(need_n()?)?)?.config, "normalized", ("N", need_n()? as i64))
                }
            };
            ConfigFile::new(&config)
                .with_meta("family", name)
                .with_meta(param.0, param.1)
                .write(&out)
                .map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
            println!("wrote {} N={} bonds={}", out.display(), config.len(), config.bond_count());
            Ok(0)
        }
        Command::Energy { file } => {
            let c = load(&file)?;
            println!("N={} bonds={} energy={}", c.len(), c.bond_count(), c.energy());
            Ok(0)
        }
        Command::Validate { file, json, threshold } => {
            let c = load(&file)?;
            let v = validators::validate(&c, threshold)?;
            for r in &v.reports {
                if json {
                    println!("{}", serde_json::to_string(r).expect("reports serialize"));
                } else {
                    let sev = if r.is_violation() { "violation" } else { "info" };
                    println!("{} {sev}: {}", r.rule, r.message);
                }
            }
            let bad = v.has_violations();
            if !json {
                let verdict = if bad { "FAIL" } else { "ok" };
                println!("{verdict} N={} bonds={} formula_bonds={} findings={}", v.n, v.bonds, v.formula_bonds, v.reports.len());
            }
            Ok(if bad { 1 } else { 0 })
        }
        Command::Oracle { n, budget, list_maximizers } => {
            let r = oracle::max_bonds(n, budget)?;
            let tag = if r.complete { "" } else { " incomplete" };
            println!("N={} max_bonds={} maximizers={}{tag}", r.n, r.max_bonds, r.maximizer_count);
            if list_maximizers {
                for (i, c) in r.maximizers.iter().enumerate() {
                    print!("{}", ConfigFile::new(c).with_meta("maximizer", i + 1).serialize());
                }
            }
            if !r.complete {
                return Err(Failure::Budget(format!("budget of {budget} nodes exhausted after {} nodes", r.nodes_explored)));
            }
            Ok(0)
        }
        Command::Deviation { file, csv } => {
            let c = load(&file)?;
            let fit = fit_hexagon(&c)?;
            let proxy = flat_norm_proxy(&c, &fit)?;
            let (cm, cn) = (fit.center.0 as f64 / 2.0, fit.center.1 as f64 / 2.0);
            if csv {
                println!("N,deviation_count,side,center_m,center_n,flat_norm_proxy,boundary_term");
                println!(
                    "{},{},{},{cm},{cn},{:.9},{:.9}",
                    c.len(),
                    fit.deviation_count,
                    fit.side,
                    proxy.value,
                    proxy.boundary_term
                );
            } else {
                println!(
                    "N={} deviation_count={} side={} center=({cm}, {cn}) flat_norm_proxy={:.9}",
                    c.len(),
                    fit.deviation_count,
                    fit.side,
                    proxy.value
                );
            }
            Ok(0)
        }
        Command::Scaling { family, k_min, k_max, csv, doubling, timing } => {
            if !(2 <= k_min && k_min <= k_max) {
                return Err(Failure::Usage(format!("need 2 <= k_min <= k_max, got {k_min}..{k_max}")));
            }
            let family = match family {
                ScalingFamily::Spiral => Family::Spiral,
                ScalingFamily::Degenerate => Family::Degenerate,
            };
            let progression = if doubling { Progression::Doubling } else { Progression::Every };
            let report = run_scaling_experiment(family, &k_values(k_min, k_max, progression), timing)?;
            for (k, row) in &report.rows {
                if let Err(reason) = row {
                    eprintln!("k={k}: skipped: {reason}");
                }
            }
            std::fs::write(&csv, report.to_csv()).map_err(|e| Failure::Usage(format!("{}: {e}", csv.display())))?;
            println!("{}", report.summary());
            Ok(0)
        }
    }
}

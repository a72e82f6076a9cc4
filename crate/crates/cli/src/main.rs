use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kappa_cli::config::RunConfig;
use kappa_cli::parse::parse;
use kappa_cli::report::{records, to_json, to_markdown};
use kappa_cli::suites::{exit_code, run_suite, uncertainty, SuiteRun};
use kappa_double::hopf::{Pairing, PairingStrategy};
use kappa_double::kappa::double::build_full_double;
use kappa_double::kappa::dual::{check_dual_basis, solve_dual_basis};
use kappa_double::kappa::phase::build_phase_space;
use kappa_double::kappa::presentations::build_weyl;
use kappa_double::kappa::{relation_entries, IndexMode, SignPolicy};
use kappa_double::ncalg::{Gen, NCPoly, NormalOrderer, RewriteSystem};
use kappa_double::numrep::write_csv;
use kappa_double::scalars::with_truncation;

#[derive(Parser)]
#[command(name = "kappa", version, about = "Exact checks for the kappa-Poincare Heisenberg double")]
struct Cli {
    #[command(flatten)]
    opts: Overrides,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Overrides {
    /// Config file (key = value); defaults to $KAPPA_CONFIG when unset
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    profile: Option<Profile>,
    #[arg(long, global = true, value_enum)]
    index_mode: Option<Index>,
    /// Truncation order N
    #[arg(long, short = 'N', global = true)]
    order: Option<i32>,
    #[arg(long, global = true)]
    floor: Option<i32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    states: Option<usize>,
    #[arg(long, global = true)]
    n_levels: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Record suite wall-clock times
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Default,
    PaperLiteral,
}

#[derive(Clone, Copy, ValueEnum)]
enum Index {
    Lowered,
    Plain,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Md,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Normal-order an expression
    NormalOrder { expr: String },
    /// Normal-ordered commutator [a, b]
    Commutator { a: String, b: String },
    /// Duality pairing <group element, algebra element>
    Pair { group: String, algebra: String },
    /// Derive the cross relations and print the relation table
    DeriveCross {
        /// Full double instead of the translation sector
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a check suite and write its JSON report
    Check { suite: String },
    /// Solve for the coordinates dual to the classical momenta
    SolveDual {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Uncertainty relations in the oscillator representation
    Uncertainty {
        #[arg(long = "kappa-hbar")]
        kappa_hbar: Vec<f64>,
        /// CSV file for the per-state bounds
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run suites and render a summary
    Report {
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn config(o: &Overrides) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::resolve(o.config.as_deref()).map_err(|e| e.to_string())?;
    if let Some(p) = o.profile {
        cfg.sign_policy = match p {
            Profile::Default => SignPolicy::Derive,
            Profile::PaperLiteral => SignPolicy::PaperLiteral,
        };
    }
    if let Some(i) = o.index_mode {
        cfg.index_mode = match i {
            Index::Lowered => IndexMode::Lowered,
            Index::Plain => IndexMode::Plain,
        };
    }
    cfg.truncation_order = o.order.unwrap_or(cfg.truncation_order);
    cfg.lambda_floor = o.floor.unwrap_or(cfg.lambda_floor);
    cfg.seed = o.seed.unwrap_or(cfg.seed);
    cfg.states = o.states.unwrap_or(cfg.states);
    cfg.n_levels = o.n_levels.unwrap_or(cfg.n_levels);
    cfg.report_path = o.output.clone().or(cfg.report_path);
    cfg.timing |= o.timing;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Rewrite system for the generators that occur: Weyl symbols, the full double, or the phase
/// space.
fn system_for(polys: &[&NCPoly], cfg: &RunConfig) -> Result<RewriteSystem, String> {
    let gens: Vec<Gen> = polys.iter().flat_map(|p| p.generators()).collect();
    if gens.iter().any(|g| matches!(g, Gen::Xh(_) | Gen::Ph(_))) {
        if gens.iter().any(|g| !matches!(g, Gen::Xh(_) | Gen::Ph(_))) {
            return Err("Weyl symbols cannot be mixed with other generators".into());
        }
        return Ok(build_weyl());
    }
    if gens.iter().any(|g| matches!(g, Gen::M(..) | Gen::Lambda(..))) {
        return Ok(build_full_double(&cfg.profile()).map_err(|e| e.to_string())?.rewrite);
    }
    Ok(build_phase_space(&cfg.profile()).map_err(|e| e.to_string())?.rewrite)
}

fn emit(text: &str, cfg: &RunConfig) -> Result<(), String> {
    match &cfg.report_path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(runs: &[SuiteRun], cfg: &RunConfig, format: Format) -> Result<i32, String> {
    let text = match format {
        Format::Md | Format::Text => to_markdown(runs, cfg),
        Format::Json => to_json(&records(runs, cfg)),
    };
    emit(&text, cfg)?;
    if let Some(p) = &cfg.csv_path {
        let rows: Vec<_> = runs.iter().flat_map(|r| r.rows.clone()).collect();
        if !rows.is_empty() {
            let f = std::fs::File::create(p).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
            write_csv(&rows, f).map_err(|e| e.to_string())?;
        }
    }
    Ok(exit_code(runs))
}

fn run(cli: Cli) -> Result<i32, String> {
    let cfg = config(&cli.opts)?;
    with_truncation(cfg.truncation(), || match cli.cmd {
        Command::NormalOrder { expr } => {
            let p = parse(&expr).map_err(|e| e.to_string())?;
            let rs = system_for(&[&p], &cfg)?;
            println!("{}", NormalOrderer::new(&rs).normal_order(&p).map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::Commutator { a, b } => {
            let a = parse(&a).map_err(|e| e.to_string())?;
            let b = parse(&b).map_err(|e| e.to_string())?;
            let rs = system_for(&[&a, &b], &cfg)?;
            println!("{}", NormalOrderer::new(&rs).commutator(&a, &b).map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::Pair { group, algebra } => {
            let g = parse(&group).map_err(|e| e.to_string())?;
            let a = parse(&algebra).map_err(|e| e.to_string())?;
            let full = [&g, &a].iter().flat_map(|p| p.generators()).any(|x| matches!(x, Gen::M(..) | Gen::Lambda(..)));
            let value = if full {
                let d = build_full_double(&cfg.profile()).map_err(|e| e.to_string())?;
                Pairing::new(&d.group, &d.algebra, &d.pairing, PairingStrategy::AlgebraFirst).pair(&g, &a)
            } else {
                let ps = build_phase_space(&cfg.profile()).map_err(|e| e.to_string())?;
                Pairing::new(&ps.coords, &ps.momenta, &ps.pairing, PairingStrategy::GroupFirst).pair(&g, &a)
            };
            println!("{}", value.map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::DeriveCross { full, format } => {
            let rs = if full {
                build_full_double(&cfg.profile()).map_err(|e| e.to_string())?.rewrite
            } else {
                build_phase_space(&cfg.profile()).map_err(|e| e.to_string())?.rewrite
            };
            let entries = relation_entries(&rs);
            let text = if format == Format::Json {
                serde_json::to_string_pretty(&entries).map_err(|e| e.to_string())? + "\n"
            } else {
                entries.iter().map(|e| format!("[{}, {}] = {}\n", e.left, e.right, e.remainder)).collect()
            };
            emit(&text, &cfg)?;
            Ok(0)
        }
        Command::Check { suite } => {
            let runs = run_suite(&suite, &cfg).map_err(|e| e.to_string())?;
            finish(&runs, &cfg, Format::Json)
        }
        Command::SolveDual { degree } => {
            let d = degree.unwrap_or(cfg.dual_degree);
            let ps = build_phase_space(&cfg.profile()).map_err(|e| e.to_string())?;
            let sol = solve_dual_basis(&ps, d).map_err(|e| e.to_string())?;
            for (mu, f) in sol.f.iter().enumerate() {
                println!("F{mu} = {f}");
            }
            let report = check_dual_basis(&sol, d).map_err(|e| e.to_string())?;
            for item in report.items.iter().filter(|i| !i.passed()) {
                println!("{} {}: {}", item.status, item.id, item.residual);
            }
            let runs = [SuiteRun { suite: "dual-basis".into(), reports: vec![report], rows: vec![], duration_ms: 0 }];
            Ok(exit_code(&runs))
        }
        Command::Uncertainty { kappa_hbar, csv } => {
            let mut cfg = cfg.clone();
            if !kappa_hbar.is_empty() {
                cfg.kappa_hbar = kappa_hbar;
                cfg.validate().map_err(|e| e.to_string())?;
            }
            cfg.csv_path = csv.or(cfg.csv_path);
            let (reports, rows) = uncertainty(&cfg, &cfg.kappa_hbar).map_err(|e| e.to_string())?;
            let runs = [SuiteRun { suite: "uncertainty".into(), reports, rows, duration_ms: 0 }];
            finish(&runs, &cfg, Format::Md)
        }
        Command::Report { format, suite } => {
            let runs = run_suite(&suite, &cfg).map_err(|e| e.to_string())?;
            finish(&runs, &cfg, format)
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("kappa: {e}");
            ExitCode::from(4)
        }
    }
}

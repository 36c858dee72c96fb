use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jc_quasiflow::harness::{
    compare, emit_run, hbar_scan, read_csv, run_scenario, run_validation, ComparisonReport, Observable, Provenance,
    ScenarioConfig, VALIDATE_B_R, VALIDATE_N_MAX,
};
use jc_quasiflow::semiclassics::PhaseSpaceQuadrature;
use jc_quasiflow::{Error, Result};

#[derive(Parser)]
#[command(name = "jcq", version, about = "Jaynes-Cummings wave-packet dynamics: exact oracle vs semiclassics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the operator identities and Heisenberg flows on the truncated space.
    Validate {
        #[arg(long, default_value_t = VALIDATE_N_MAX)]
        n_max: usize,
    },
    /// Run a scenario and write its series.
    Run {
        /// Built-in scenario: fig1-top, fig1-bottom, fig2-top, fig2-bottom.
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        /// TOML scenario file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: the config's output.dir, else ./out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG chart.
        #[arg(long)]
        svg: bool,
    },
    /// Fit scaling exponents over a list of hbar values at fixed mean action.
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated hbar values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        hbar: Vec<f64>,
        /// Seed for Monte-Carlo quadrature.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare series from two CSV files; `b` is the reference.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Window `T0,T1` in the files' time unit.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
    },
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected T0,T1")?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn print_report(label: &str, r: &ComparisonReport) {
    print!(
        "{label:<40} re: max {:.4e} span {:.4e} normalized {:.4}",
        r.real.max_abs, r.real.span, r.real.normalized
    );
    if let Some(im) = r.imag {
        print!("  im: max {:.4e} normalized {:.4}", im.max_abs, im.normalized);
    }
    println!();
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { n_max } => {
            let report = run_validation(n_max, &VALIDATE_B_R)?;
            print!("{report}");
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Run {
            preset,
            config,
            out,
            svg,
        } => {
            let cfg = match (preset, config) {
                (Some(name), _) => ScenarioConfig::preset(&name)?,
                (None, Some(path)) => ScenarioConfig::from_path(&path)?,
                (None, None) => return Err(Error::Config {
                    field: "preset".into(),
                    message: "give --preset or --config".into(),
                }),
            };
            let run = run_scenario(&cfg)?;
            println!(
                "{}: n_max {}, rabi period {:.6}, t_collapse {:.6}, t_heisenberg {:.6}",
                cfg.name, run.n_max, run.window.rabi_period, run.window.t_collapse, run.window.t_heisenberg
            );
            for observable in [Observable::Sigma3, Observable::Field] {
                let Some(oracle) = run.find(observable, Provenance::Oracle) else { continue };
                for s in run.series.iter().filter(|s| s.observable == observable && s.provenance != Provenance::Oracle) {
                    print_report(&format!("{} vs oracle", s.label()), &compare(s, oracle, None)?);
                }
            }
            let dir = out
                .or_else(|| cfg.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            for path in emit_run(&run, &dir, svg || cfg.output.svg)? {
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { config, hbar, seed } => {
            let mut cfg = ScenarioConfig::from_path(&config)?;
            if let (Some(seed), PhaseSpaceQuadrature::MonteCarlo { samples, .. }) = (seed, cfg.quadrature) {
                cfg.quadrature = PhaseSpaceQuadrature::MonteCarlo { samples, seed };
            }
            let report = hbar_scan(&cfg, &hbar)?;
            println!(
                "{:>10} {:>10} {:>16} {:>16} {:>14} {:>14}",
                "hbar", "n_mean", "t_c/period fit", "t_c/period thy", "dressed peak", "field error"
            );
            for p in &report.points {
                println!(
                    "{:>10.5} {:>10.2} {:>16.5} {:>16.5} {:>14.5e} {:>14.5e}",
                    p.hbar, p.mean_photons, p.collapse_periods, p.collapse_theory_periods, p.dressed_peak, p.field_error
                );
            }
            for (label, fit) in [
                ("collapse time", report.collapse),
                ("dressed peak", report.dressed_peak),
                ("field error", report.field_error),
            ] {
                let se = fit.exponent_stderr.map_or_else(|| "n/a".to_string(), |s| format!("{s:.3}"));
                println!("exponent {label:<14} {:+.4} (stderr {se})", fit.exponent);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { a, b, window } => {
            let sa = read_csv(&a)?;
            let sb = read_csv(&b)?;
            let pairs: Vec<_> = if sa.len() == 1 && sb.len() == 1 {
                vec![(&sa[0], &sb[0])]
            } else {
                sa.iter()
                    .filter_map(|x| {
                        sb.iter()
                            .find(|y| y.observable == x.observable && y.provenance == x.provenance)
                            .map(|y| (x, y))
                    })
                    .collect()
            };
            if pairs.is_empty() {
                return Err(Error::Config {
                    field: "b".into(),
                    message: "no series in common with --a".into(),
                });
            }
            for (x, y) in pairs {
                print_report(&format!("{} vs {}", x.label(), y.label()), &compare(x, y, window)?);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

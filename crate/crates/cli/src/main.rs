mod config;
mod error;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use config::Config;
use error::CliError;
use sudlerlab::cfrac::{cf_expand, ConvergentTable, TableConfig};
use sudlerlab::dist::{
    distribution_report, estimate_d_from_sweep, farey_size, farey_sweep, ks_compare,
    log_j_statistic, pq_statistic, EmpiricalDist, StableLaw,
};
use sudlerlab::jones::{h_eval, h_model};
use sudlerlab::verify::{
    calibrate, h_pq, run_suite, write_csv, Suite, SuiteConfig, DENOMINATOR_CAP, ENUMERATION_CAP,
    FROZEN,
};
use sudlerlab::{CFExpansion, Rational};

/// Sudler products, the figure-eight Kashaev invariant and Zagier's h.
#[derive(Parser, Debug)]
#[command(name = "sudlerlab", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Precision target for irrational convergent tables, in bits.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Extra partial quotients used beyond the requested depth.
    #[arg(long, global = true)]
    guard_depth: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate log J, h, psi and psi* at a rational, a digit list or a preset.
    Eval {
        /// `p/q`, `cf:a1,a2,...`, or one of golden, sqrt2inv, e-2 (evaluated at
        /// the convergent of depth guard_depth).
        x: String,
    },
    /// Tabulate h over the Farey fractions of order qmax.
    Scan {
        /// Largest denominator (default: ncap from the config).
        #[arg(long)]
        qmax: Option<u64>,
        /// Centre of a window; requires --radius.
        #[arg(long, requires = "radius")]
        near: Option<f64>,
        /// Half-width of the window.
        #[arg(long)]
        radius: Option<f64>,
        /// CSV output (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite against the frozen constants.
    Verify {
        /// identities, epsilon, cotangent, local56, concentration, factor, tail,
        /// continuity, th3, or all.
        #[arg(long)]
        suite: String,
        /// Denominator cap of the oscillation samples.
        #[arg(long)]
        qcap: Option<u64>,
        /// Farey order of the scan.
        #[arg(long)]
        ncap: Option<u64>,
        /// CSV output (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Farey sweep of a statistic and its comparison with the stable law.
    Dist {
        /// Farey order of the sweep (default: ncap from the config).
        #[arg(long = "N")]
        n: Option<u64>,
        #[arg(long, value_enum)]
        stat: Stat,
        /// Sweep CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Empirical against stable CDF on a grid.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Refit the implied constants on the calibration corpus.
    Calibrate {
        /// CSV output (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Stat {
    #[value(name = "logJ", alias = "logj")]
    LogJ,
    #[value(name = "pq")]
    Pq,
}

fn real(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.16e}")
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(p.display().to_string(), e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Io(path.map_or("stdout".into(), |p| p.display().to_string()), e)
}

fn cmd_eval(x: &str, cfg: &Config) -> Result<(), CliError> {
    let cf: CFExpansion = x.parse()?;
    let (r, note) = match cf.value() {
        Some(r) => (r, String::new()),
        None => {
            let tc = TableConfig {
                precision_bits: cfg.precision_bits,
                guard_depth: cfg.guard_depth,
            };
            let t = ConvergentTable::new(&cf, cfg.guard_depth, tc)?;
            let k = t.depth();
            (
                Rational::new(t.p(k).clone(), t.q(k).clone())?,
                format!(" (convergent {k} of {cf})"),
            )
        }
    };
    let v = h_eval(&r)?;
    println!("x = {r}{note}");
    println!("q = {}", r.den());
    println!("cf = {}", cf_expand(&r)?);
    println!("log_J = {}", real(v.log_j_x.ln()));
    println!("log_J_inv = {}", real(v.log_j_inv.ln()));
    println!("h = {}", real(v.h));
    println!("psi = {}", real(v.psi));
    println!("psi_star = {}", real(v.psi_star));
    Ok(())
}

fn cmd_scan(qmax: u64, window: Option<(f64, f64)>, out: Option<&Path>) -> Result<(), CliError> {
    if qmax < 2 {
        return Err(sudlerlab::Error::Precondition(format!("qmax = {qmax} < 2")).into());
    }
    if qmax > DENOMINATOR_CAP {
        return Err(sudlerlab::Error::EnumerationCap {
            requested: format!("denominators up to {qmax}"),
            cap: DENOMINATOR_CAP,
        }
        .into());
    }
    let keep = |p: u64, q: u64| window.is_none_or(|(x0, r)| (p as f64 / q as f64 - x0).abs() <= r);
    let pts: Vec<(u64, u64)> = (2..=qmax)
        .flat_map(|q| {
            (1..q)
                .filter(move |&p| num_integer::gcd(p, q) == 1)
                .map(move |p| (p, q))
        })
        .filter(|&(p, q)| keep(p, q))
        .collect();
    let rows: Vec<String> = pts
        .par_iter()
        .map(|&(p, q)| {
            let x = p as f64 / q as f64;
            let h = h_pq(p, q);
            let model = h_model(x);
            format!(
                "{p},{q},{},{},{},{}",
                real(x),
                real(h),
                real(h - model),
                real(model)
            )
        })
        .collect();
    let mut w = open_out(out)?;
    let e = io_err(out);
    writeln!(w, "p,q,x,h,psi,h_model").map_err(&e)?;
    for row in rows {
        writeln!(w, "{row}").map_err(&e)?;
    }
    w.flush().map_err(&e)?;
    eprintln!("{} rows", pts.len());
    Ok(())
}

fn cmd_verify(suite: &str, scfg: &SuiteConfig, out: Option<&Path>) -> Result<(), CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let mut reports = Vec::new();
    for s in suites {
        let o = run_suite(s, scfg)?;
        for line in &o.notes {
            eprintln!("{line}");
        }
        for r in &o.reports {
            eprintln!("{}", r.summary());
        }
        reports.extend(o.reports);
    }
    let mut w = open_out(out)?;
    let e = io_err(out);
    write_csv(&reports, &mut w).map_err(&e)?;
    w.flush().map_err(&e)?;
    match reports.iter().filter(|r| !r.passed).count() {
        0 => Ok(()),
        n => Err(CliError::ChecksFailed(n)),
    }
}

fn cmd_dist(n: u64, stat: Stat, out: Option<&Path>, report: Option<&Path>) -> Result<(), CliError> {
    if n < 50 {
        return Err(sudlerlab::Error::Precondition(format!("N = {n} < 50")).into());
    }
    let size = farey_size(n);
    if size > ENUMERATION_CAP {
        return Err(sudlerlab::Error::EnumerationCap {
            requested: format!("|F_{n}| = {size}"),
            cap: ENUMERATION_CAP,
        }
        .into());
    }
    let with_j = stat == Stat::LogJ;
    let rows = farey_sweep(n, with_j)?;
    let d = if with_j {
        Some(estimate_d_from_sweep(&rows)?)
    } else {
        None
    };
    let stat_pq: Vec<f64> = rows
        .iter()
        .map(|r| pq_statistic(r.sum_partial_quotients, n))
        .collect();
    let stat_lj: Vec<f64> = match d {
        Some(d) => rows
            .iter()
            .map(|r| log_j_statistic(r.log_j.unwrap_or(f64::NAN), n, d.d))
            .collect(),
        None => vec![f64::NAN; rows.len()],
    };
    if let Some(path) = out {
        let mut w = open_out(Some(path))?;
        let e = io_err(Some(path));
        writeln!(w, "p,q,sum_partial_quotients,logJ,stat_logJ,stat_pq").map_err(&e)?;
        for (i, r) in rows.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.p,
                r.q,
                r.sum_partial_quotients,
                real(r.log_j.unwrap_or(f64::NAN)),
                real(stat_lj[i]),
                real(stat_pq[i])
            )
            .map_err(&e)?;
        }
        w.flush().map_err(&e)?;
    }
    let law = StableLaw::default();
    let emp = EmpiricalDist::new(if with_j { stat_lj } else { stat_pq })?;
    let ks = ks_compare(&emp, &law)?;
    println!(
        "N = {n}, fractions = {}, stat = {}",
        rows.len(),
        if with_j { "logJ" } else { "pq" }
    );
    if let Some(d) = d {
        println!(
            "D = {:.6} (integral {:.6}, half-sample D {:.6}, sensitivity {:.3e})",
            d.d, d.integral, d.d_half, d.sensitivity
        );
    }
    println!("KS = {ks:.6}");
    if let Some(path) = report {
        let grid: Vec<f64> = (-40..=200).map(|i| f64::from(i) / 10.0).collect();
        let pts = distribution_report(&emp, &law, &grid)?;
        let mut w = open_out(Some(path))?;
        let e = io_err(Some(path));
        writeln!(w, "y,emp_cdf,stable_cdf").map_err(&e)?;
        for (y, a, b) in pts {
            writeln!(w, "{},{},{}", real(y), real(a), real(b)).map_err(&e)?;
        }
        w.flush().map_err(&e)?;
    }
    Ok(())
}

fn cmd_calibrate(out: Option<&Path>) -> Result<(), CliError> {
    let (c, reports) = calibrate(&SuiteConfig::calibration())?;
    for r in &reports {
        eprintln!("{}", r.summary());
    }
    let mut w = open_out(out)?;
    let e = io_err(out);
    writeln!(w, "check_id,calibrated,frozen").map_err(&e)?;
    for ((id, v), (_, f)) in c.entries().into_iter().zip(FROZEN.entries()) {
        writeln!(w, "{id},{},{}", real(v), real(f)).map_err(&e)?;
    }
    w.flush().map_err(&e)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = Config::from_env()?;
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(b) = cli.precision_bits {
        cfg.precision_bits = b;
    }
    if let Some(g) = cli.guard_depth {
        cfg.guard_depth = g;
    }
    match &cli.command {
        Command::Verify { qcap, ncap, .. } => {
            cfg.qcap = qcap.unwrap_or(cfg.qcap);
            cfg.ncap = ncap.unwrap_or(cfg.ncap);
        }
        Command::Scan { qmax: Some(q), .. } | Command::Dist { n: Some(q), .. } => cfg.ncap = *q,
        _ => {}
    }
    cfg.validate()?;
    if let Some(t) = cfg.threads {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let default_out = cfg.output_path.clone();
    let pick = |o: &Option<PathBuf>| o.clone().or_else(|| default_out.clone());
    match cli.command {
        Command::Eval { x } => cmd_eval(&x, &cfg),
        Command::Scan {
            near, radius, out, ..
        } => {
            let window = near.zip(radius);
            cmd_scan(cfg.ncap, window, pick(&out).as_deref())
        }
        Command::Verify { suite, out, .. } => {
            let scfg = SuiteConfig {
                qcap: cfg.qcap,
                ncap: cfg.ncap,
                ..SuiteConfig::standard()
            };
            cmd_verify(&suite, &scfg, pick(&out).as_deref())
        }
        Command::Dist {
            stat, out, report, ..
        } => cmd_dist(cfg.ncap, stat, pick(&out).as_deref(), report.as_deref()),
        Command::Calibrate { out } => cmd_calibrate(pick(&out).as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

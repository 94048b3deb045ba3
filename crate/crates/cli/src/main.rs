//! Command-line harness: eigenfunction sweeps, restriction experiments, the
//! kappa scan, the perturbation-series report, and the verification suite.

// `!(x > 0.0)` guards reject NaN along with the out-of-domain sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use eigenmeans::manifold::{make_manifold, ManifoldId};
use eigenmeans::perturb::{eps_order_sweep, kappa_scan};
use eigenmeans_cli::config::{SuiteConfig, S2_DEGREES, S3_DEGREES, SERIES_LAMBDAS, T2_FREQS};
use eigenmeans_cli::experiments::{
    freq_family, freq_family_up_to, run_sweep, zonal_family, ExperimentParams,
};
use eigenmeans_cli::report::{fmt_float, records_to_csv, records_to_json, RecordsReport};
use eigenmeans_cli::suite::run_suite;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "eigenmeans",
    about = "Eigenfunction sweeps, spherical-mean comparisons, and restriction experiments on model manifolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sup-norm over L2 ratios with the frequency normalization.
    Hormander(SweepArgs),
    /// Lp norms on geodesic spheres of radius kappa/lambda.
    Restrict(SweepArgs),
    /// The mean-comparison engine: 2 I(x_max, kappa/lambda) vs sup^2.
    Equiv(SweepArgs),
    /// Scan the universal profile for the threshold radius kappa*.
    Kappa(KappaArgs),
    /// Perturbation-series errors and norms across a frequency sweep.
    Series(SeriesArgs),
    /// Run every verification check and emit reports.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// t2, s2 or s3.
    #[arg(long, default_value = "s2")]
    manifold: String,
    /// zonal (spheres) or freq (torus).
    #[arg(long, default_value = "zonal")]
    family: String,
    /// Smallest zonal degree (zonal family only).
    #[arg(long)]
    lmin: Option<u32>,
    /// Largest zonal degree (zonal family only).
    #[arg(long)]
    lmax: Option<u32>,
    /// Largest frequency magnitude (freq family only).
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Restriction exponent, at least 2.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Quadrature nodes per sphere; 0 = automatic.
    #[arg(long, default_value_t = 0)]
    nodes: usize,
    /// Coarse scan resolution for maxima.
    #[arg(long, default_value_t = 64)]
    coarse: usize,
    /// Sphere center: "max" (located maximum) or "base" (canonical point).
    #[arg(long, default_value = "max")]
    center: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct KappaArgs {
    #[arg(long, default_value_t = 0.75)]
    threshold: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct SeriesArgs {
    /// t2, s2 or s3.
    #[arg(long, default_value = "s2")]
    manifold: String,
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    #[arg(long, default_value_t = 1.5)]
    rho_max: f64,
    /// Comma-separated frequency sweep.
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Extra restriction exponent checked next to p = 2.
    #[arg(long, default_value_t = 4.0)]
    p: f64,
    #[arg(long, default_value_t = 3)]
    order: usize,
    /// Quadrature nodes per sphere.
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    /// Output directory for report.json and the record CSVs.
    #[arg(long, default_value = "suite_out")]
    out: PathBuf,
}

#[derive(Serialize)]
struct SweepEcho {
    manifold: String,
    family: String,
    kappa: f64,
    p: f64,
    nodes: usize,
    count: usize,
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn run_sweep_command(args: &SweepArgs) -> Result<i32, String> {
    let id = ManifoldId::parse(&args.manifold).map_err(|e| e.to_string())?;
    if !(args.p >= 2.0) {
        return Err(format!("p = {} must be at least 2", args.p));
    }
    if !(args.kappa > 0.0) {
        return Err(format!("kappa = {} must be positive", args.kappa));
    }
    let family = match (args.family.as_str(), id) {
        ("zonal", ManifoldId::S2 | ManifoldId::S3) => {
            let degrees: Vec<u32> = match (args.lmin, args.lmax) {
                (Some(a), Some(b)) => (a..=b).collect(),
                (Some(a), None) => vec![a],
                (None, Some(b)) => (1..=b).collect(),
                (None, None) => {
                    if id == ManifoldId::S2 {
                        S2_DEGREES.to_vec()
                    } else {
                        S3_DEGREES.to_vec()
                    }
                }
            };
            zonal_family(id, &degrees).map_err(|e| e.to_string())?
        }
        ("freq", ManifoldId::T2) => match args.kmax {
            Some(kmax) => freq_family_up_to(kmax).map_err(|e| e.to_string())?,
            None => freq_family(T2_FREQS).map_err(|e| e.to_string())?,
        },
        (fam, _) => {
            return Err(format!(
                "family {fam:?} is not defined on manifold {:?}",
                args.manifold
            ));
        }
    };

    let center_at_max = match args.center.as_str() {
        "max" => true,
        "base" => false,
        other => return Err(format!("unknown center mode {other:?}")),
    };
    let params = ExperimentParams {
        kappa: args.kappa,
        p: args.p,
        nodes: args.nodes,
        coarse: args.coarse,
        series_grid: 2048,
        center_at_max,
    };
    let outcome = run_sweep(id, &family, &params).map_err(|e| e.to_string())?;
    if outcome.records.is_empty() {
        eprintln!("warning: empty index range, emitting header only");
    }
    for s in &outcome.skipped {
        eprintln!("warning: skipped {s}");
    }

    let text = match args.format.as_str() {
        "csv" => records_to_csv(&outcome.records),
        "json" => records_to_json(&RecordsReport {
            config: SweepEcho {
                manifold: args.manifold.clone(),
                family: args.family.clone(),
                kappa: args.kappa,
                p: args.p,
                nodes: args.nodes,
                count: outcome.records.len(),
            },
            records: &outcome.records,
            skipped: &outcome.skipped,
        }),
        other => return Err(format!("unknown format {other:?}")),
    };
    emit(&text, &args.out).map_err(|e| e.to_string())?;
    Ok(0)
}

fn run_kappa(args: &KappaArgs) -> Result<i32, String> {
    let mut rows = Vec::new();
    for n in 2..=5u32 {
        let k = kappa_scan(n, args.threshold).map_err(|e| e.to_string())?;
        rows.push(k);
    }
    let text = match args.format.as_str() {
        "csv" => {
            let mut out = String::from("n,threshold,kappa_star,degenerate\n");
            for k in &rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    k.n,
                    fmt_float(k.threshold),
                    fmt_float(k.kappa_star),
                    k.degenerate
                ));
            }
            out
        }
        "json" => {
            #[derive(Serialize)]
            struct Row {
                n: u32,
                threshold: f64,
                kappa_star: f64,
                degenerate: bool,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|k| Row {
                    n: k.n,
                    threshold: k.threshold,
                    kappa_star: k.kappa_star,
                    degenerate: k.degenerate,
                })
                .collect();
            serde_json::to_string_pretty(&rows).unwrap()
        }
        other => return Err(format!("unknown format {other:?}")),
    };
    emit(&text, &args.out).map_err(|e| e.to_string())?;
    Ok(0)
}

fn run_series(args: &SeriesArgs) -> Result<i32, String> {
    let id = ManifoldId::parse(&args.manifold).map_err(|e| e.to_string())?;
    let lambdas: Vec<f64> = match &args.lambdas {
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?,
        None => SERIES_LAMBDAS.to_vec(),
    };
    let m = make_manifold(id);
    let report = eps_order_sweep(m.geometry(), &lambdas, args.order, args.grid, args.rho_max)
        .map_err(|e| e.to_string())?;

    let text = match args.format.as_str() {
        "csv" => {
            let mut out = String::from(
                "lambda,epsilon,k_sup,order,sup_v,sup_dv,partial_sum_error,residual_max\n",
            );
            for row in &report.rows {
                for order in 0..row.errors_by_order.len() {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        fmt_float(row.lambda),
                        fmt_float(row.epsilon),
                        fmt_float(row.k_sup),
                        order,
                        fmt_float(row.sup_v[order]),
                        fmt_float(row.sup_dv[order]),
                        fmt_float(row.errors_by_order[order]),
                        fmt_float(row.residual_max),
                    ));
                }
            }
            out
        }
        "json" => {
            #[derive(Serialize)]
            struct Row {
                lambda: f64,
                epsilon: f64,
                k_sup: f64,
                sup_v: Vec<f64>,
                sup_dv: Vec<f64>,
                errors_by_order: Vec<f64>,
                residual_max: f64,
            }
            #[derive(Serialize)]
            struct SeriesReport {
                order: usize,
                slope_order_1: f64,
                max_norm_ratio: f64,
                rows: Vec<Row>,
            }
            let rows: Vec<Row> = report
                .rows
                .iter()
                .map(|r| Row {
                    lambda: r.lambda,
                    epsilon: r.epsilon,
                    k_sup: r.k_sup,
                    sup_v: r.sup_v.clone(),
                    sup_dv: r.sup_dv.clone(),
                    errors_by_order: r.errors_by_order.clone(),
                    residual_max: r.residual_max,
                })
                .collect();
            serde_json::to_string_pretty(&SeriesReport {
                order: args.order,
                slope_order_1: report.slope_for_order(1),
                max_norm_ratio: report.max_norm_ratio(),
                rows,
            })
            .unwrap()
        }
        other => return Err(format!("unknown format {other:?}")),
    };
    emit(&text, &args.out).map_err(|e| e.to_string())?;
    Ok(0)
}

fn run_suite_command(args: &SuiteArgs) -> Result<i32, String> {
    if !(args.kappa > 0.0) {
        return Err(format!("kappa = {} must be positive", args.kappa));
    }
    if !(args.p >= 2.0) {
        return Err(format!("p = {} must be at least 2", args.p));
    }
    let config = SuiteConfig {
        kappa: args.kappa,
        p_extra: args.p,
        order: args.order,
        nodes: args.nodes,
        ..SuiteConfig::default()
    };
    let report = run_suite(&config).map_err(|e| e.to_string())?;

    for check in &report.checks {
        println!("{}", check.line());
    }
    for s in &report.skipped {
        eprintln!("warning: skipped {s}");
    }

    std::fs::create_dir_all(&args.out).map_err(|e| e.to_string())?;
    write_split_csvs(&report.records, &args.out).map_err(|e| e.to_string())?;
    std::fs::write(args.out.join("report.json"), report.to_json()).map_err(|e| e.to_string())?;
    println!(
        "suite: {} ({} checks, {:.1}s), reports in {}",
        if report.all_pass() { "PASS" } else { "FAIL" },
        report.checks.len(),
        report.runtime_seconds,
        args.out.display()
    );
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn write_split_csvs(
    records: &[eigenmeans_cli::experiments::ExperimentRecord],
    dir: &Path,
) -> std::io::Result<()> {
    let mut groups: Vec<(String, Vec<eigenmeans_cli::experiments::ExperimentRecord>)> = Vec::new();
    for r in records {
        let key = format!("{}_{}_p{}", r.manifold, r.family, r.p as u32);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r.clone()),
            None => groups.push((key, vec![r.clone()])),
        }
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    for (key, group) in groups {
        std::fs::write(
            dir.join(format!("records_{key}.csv")),
            records_to_csv(&group),
        )?;
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Hormander(args) | Command::Restrict(args) | Command::Equiv(args) => {
            run_sweep_command(args)
        }
        Command::Kappa(args) => run_kappa(args),
        Command::Series(args) => run_series(args),
        Command::Suite(args) => run_suite_command(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}

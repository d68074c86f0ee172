//! Thin command-line front end over the library. Subcommands mirror the
//! library capabilities one-to-one; all options are flat config keys that
//! can live in a file (`--config path`) or be passed as `--key value` flags.

use backheat::basis::GridSpec;
use backheat::config::KvConfig;
use backheat::error::Error;
use backheat::estimate::{classical_estimator, qbv_estimator, truncated_estimator};
use backheat::experiment::{
    bias_study, fmt_sig6, illposedness_demo, rmse, run_monte_carlo, write_bias_csv,
    write_estimate_csv, write_illposed_csv, ClassicalAverage,
};
use backheat::noise::{synthesize_dataset, NoiseSpec, NoisyDataset};
use backheat::quadrature::TimeGrid;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
backheat <command> [--config FILE] [--key value]...

Commands:
  simulate       draw one noisy dataset and write it as CSV
  estimate       reconstruct the initial state from one dataset (all methods)
  benchmark      Monte Carlo RMSE table over seeded trials
  demo-illposed  pure-noise instability demonstration
  bias-study     discretization-bias decay curves over grid sizes

Common keys (defaults in parentheses):
  example (1) | n, m (21) | sigma2 (0.1,0.01) | trials (30) | base_seed (11)
  truncation numeric|theorem:w1,w2|manual:N,M (numeric)
  qbv_epsilon (= sigma2) | classical_cap (20) | time_segments (100)
  noise_convention paper|equal-amplitude (paper) | output_dir (out)
  parallel (true) | data_dir (none; `estimate` reads a simulated dataset)
Custom problems: example = custom with profile, t_final, theta_coeffs, f_coeffs.
demo-illposed keys: sizes (4,6,8), demo_t (0.05), vartheta (0.1)
bias-study keys:    sizes (16,32,64), bias_modes (3), tail_caps (8), bias_time (0.5)
";

fn load_config(args: &[String]) -> backheat::Result<KvConfig> {
    let mut file: Option<PathBuf> = None;
    let mut rest: Vec<String> = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            let v = it
                .next()
                .ok_or_else(|| Error::Config("--config is missing its value".into()))?;
            file = Some(PathBuf::from(v));
        } else {
            rest.push(a.clone());
        }
    }
    let mut kv = match file {
        Some(p) => KvConfig::from_file(&p)?,
        None => KvConfig::default(),
    };
    kv.apply_flags(&rest)?;
    Ok(kv)
}

fn cmd_simulate(kv: &KvConfig) -> backheat::Result<()> {
    let cfg = kv.experiment()?;
    let grid = GridSpec::new(cfg.n, cfg.m)?;
    let tg = TimeGrid::new(cfg.problem.t_final(), cfg.time_segments)?;
    let spec = NoiseSpec::from_level(cfg.sigma2_levels[0], cfg.convention, cfg.base_seed)?;
    let ds = synthesize_dataset(&cfg.problem, &grid, &tg, &spec);
    let dir = cfg.output_dir.join("dataset");
    ds.write_csv(&dir)?;
    println!(
        "wrote {}x{} dataset ({} time nodes, sigma={}, vartheta={}, seed={}) to {}",
        cfg.n,
        cfg.m,
        tg.points().len(),
        spec.sigma,
        spec.vartheta,
        spec.seed,
        dir.display()
    );
    Ok(())
}

fn cmd_estimate(kv: &KvConfig) -> backheat::Result<()> {
    let cfg = kv.experiment()?;
    let ds: NoisyDataset = match kv.get("data_dir") {
        Some(dir) => NoisyDataset::read_csv(Path::new(dir))?,
        None => {
            let grid = GridSpec::new(cfg.n, cfg.m)?;
            let tg = TimeGrid::new(cfg.problem.t_final(), cfg.time_segments)?;
            let spec =
                NoiseSpec::from_level(cfg.sigma2_levels[0], cfg.convention, cfg.base_seed)?;
            synthesize_dataset(&cfg.problem, &grid, &tg, &spec)
        }
    };
    let truth = ds.grid.sample(|x, y| cfg.problem.theta(x, y));
    let dir = cfg.output_dir.join("estimates");
    let profile = cfg.problem.profile();

    let t_est = truncated_estimator(&ds, profile, &cfg.truncation)?;
    write_estimate_csv(&t_est, &ds.grid, &dir, "truncated")?;
    println!(
        "truncated ({}x{} modes): rmse {}",
        t_est.coeffs.p_max(),
        t_est.coeffs.q_max(),
        fmt_sig6(rmse(&t_est.field, &truth)?)
    );

    let q_est = qbv_estimator(&ds, profile, cfg.qbv_epsilons[0], cfg.classical_cap, cfg.classical_cap)?;
    write_estimate_csv(&q_est, &ds.grid, &dir, "qbv")?;
    println!(
        "qbv (eps = {}): rmse {}",
        cfg.qbv_epsilons[0],
        fmt_sig6(rmse(&q_est.field, &truth)?)
    );

    match classical_estimator(&ds, profile, cfg.classical_cap, cfg.classical_cap) {
        Ok(c) => {
            write_estimate_csv(&c.estimate, &ds.grid, &dir, "classical")?;
            println!(
                "classical: rmse {} (peak coefficient ~1e{:.0})",
                fmt_sig6(rmse(&c.estimate.field, &truth)?),
                c.log10_peak
            );
        }
        Err(Error::BlowUp(report)) => {
            println!(
                "classical: blow-up at mode ({},{}), magnitude ~1e{:.0}",
                report.mode.0, report.mode.1, report.log10_magnitude
            );
        }
        Err(other) => return Err(other),
    }
    println!("estimates written to {}", dir.display());
    Ok(())
}

fn cmd_benchmark(kv: &KvConfig) -> backheat::Result<()> {
    let cfg = kv.experiment()?;
    let report = run_monte_carlo(&cfg)?;
    let table = cfg.output_dir.join("benchmark.csv");
    report.write_table_csv(&table)?;
    report.write_plot_csv(cfg.n, &cfg.output_dir.join("benchmark_long.csv"))?;
    for (li, s2) in report.sigma2_levels.iter().enumerate() {
        let classical = match report.classical_avg[li] {
            ClassicalAverage::Divergence => "divergence".to_string(),
            ClassicalAverage::Value(v) => fmt_sig6(v),
        };
        println!(
            "sigma2 = {s2}: truncated avg {}, qbv avg {} (eps = {}), classical {}",
            fmt_sig6(report.truncated_avg[li]),
            fmt_sig6(report.qbv_avg[li]),
            report.qbv_epsilons[li],
            classical
        );
    }
    println!("table written to {}", table.display());
    Ok(())
}

fn cmd_demo_illposed(kv: &KvConfig) -> backheat::Result<()> {
    let sizes = kv.get_usize_list("sizes", &[4, 6, 8])?;
    let trials = kv.get_usize("trials", 30)?;
    let seed = kv.get_u64("base_seed", 11)?;
    let t_final = kv.get_f64("demo_t", 0.05)?;
    let vartheta = kv.get_f64("vartheta", 0.1)?;
    let segments = kv.get_usize("time_segments", 100)?;
    let rows = illposedness_demo(&sizes, trials, seed, t_final, vartheta, segments)?;
    let out = PathBuf::from(kv.get("output_dir").unwrap_or("out")).join("illposed.csv");
    write_illposed_csv(&rows, &out)?;
    println!("n    E|noise-projection|^2   predicted       log10 E|reconstruction|^2");
    for r in &rows {
        println!(
            "{:<4} {:<22} {:<15} {}",
            r.n,
            fmt_sig6(r.h_norm2_mean),
            fmt_sig6(r.h_norm2_predicted),
            fmt_sig6(r.log10_theta_norm2_mean)
        );
    }
    println!("written to {}", out.display());
    Ok(())
}

fn cmd_bias_study(kv: &KvConfig) -> backheat::Result<()> {
    let problem = kv.problem()?;
    let sizes = kv.get_usize_list("sizes", &[16, 32, 64])?;
    let modes = kv.get_usize("bias_modes", 3)?;
    let caps = kv.get_usize("tail_caps", 8)?;
    let t = kv.get_f64("bias_time", 0.5)?;
    let rows = bias_study(&problem, &sizes, modes, caps, t)?;
    let out = PathBuf::from(kv.get("output_dir").unwrap_or("out")).join("bias_study.csv");
    write_bias_csv(&rows, &out)?;
    for r in rows.iter().filter(|r| r.p == 1 && r.q == 1) {
        println!(
            "n = {:<4} gamma(1,1) direct {:<13} tail {:<13} eta(1,1) direct {:<13} tail {}",
            r.n,
            fmt_sig6(r.gamma_direct),
            fmt_sig6(r.gamma_tail),
            fmt_sig6(r.eta_direct),
            fmt_sig6(r.eta_tail)
        );
    }
    println!("written to {}", out.display());
    Ok(())
}

fn run() -> backheat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        eprint!("{USAGE}");
        return Err(Error::Config("missing command".into()));
    };
    if command == "--help" || command == "-h" || command == "help" {
        print!("{USAGE}");
        return Ok(());
    }
    let kv = load_config(&args[1..])?;
    match command.as_str() {
        "simulate" => cmd_simulate(&kv),
        "estimate" => cmd_estimate(&kv),
        "benchmark" => cmd_benchmark(&kv),
        "demo-illposed" => cmd_demo_illposed(&kv),
        "bias-study" => cmd_bias_study(&kv),
        other => {
            eprint!("{USAGE}");
            Err(Error::Config(format!("unknown command `{other}`")))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                Error::BlowUp(_) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

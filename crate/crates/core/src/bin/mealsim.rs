use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mealsim::catalog::ModelId;
use mealsim::delay::{delay_demo, step_comparison, DelayKind, DelaySpec};
use mealsim::discretization::Scheme;
use mealsim::engine::IntegratorOptions;
use mealsim::scenario::{self, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "mealsim",
    version,
    about = "Simulate glucose rate of appearance after meals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (TOML)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSTR-PFR discretization
    #[arg(long, value_parser = ["fv", "sg"])]
    scheme: Option<String>,
    /// Cells (fv) or polynomial order (sg)
    #[arg(long)]
    resolution: Option<usize>,
    /// Report R_A per kg body weight
    #[arg(long)]
    per_kg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the configured meal schedule and write one CSV per model
    Run(Common),
    /// Simulate every model for every meal size; write a CSV, a summary and a gnuplot script
    Compare(Common),
    /// Check whether R_A scales with the meal size
    CheckLinearity(Common),
    /// Step responses of the delay approximations
    DelayDemo {
        #[command(flatten)]
        common: Common,
        /// Delay, min
        #[arg(long, default_value_t = 10.0)]
        tau_d: f64,
        /// Number of stages
        #[arg(long, default_value_t = 8)]
        stages: usize,
        /// Steepness of the algebraic lag, 1/min
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
    },
    /// Print the structural summary of the built-in models
    ListModels,
}

fn load(common: &Common) -> mealsim::Result<ScenarioConfig> {
    let mut cfg = match &common.config {
        Some(p) => scenario::load_config(p)?,
        None => ScenarioConfig::default(),
    };
    let scheme = common
        .scheme
        .as_deref()
        .map(str::parse::<Scheme>)
        .transpose()?;
    cfg.set_discretization(scheme, common.resolution);
    if common.per_kg {
        cfg.per_kg = true;
    }
    Ok(cfg)
}

fn out_dir(common: &Common) -> mealsim::Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn run(common: &Common) -> mealsim::Result<()> {
    let cfg = load(common)?;
    let dir = out_dir(common)?;
    for traj in scenario::run_scenario(&cfg)? {
        let path = dir.join(format!("{}.csv", traj.model));
        let traj = if cfg.per_kg {
            traj
        } else {
            mealsim::engine::Trajectory {
                per_kg_outputs: None,
                ..traj
            }
        };
        scenario::write_trajectory_csv(&traj, &path)?;
        let (peak, t) = traj.peak().unwrap_or((0.0, 0.0));
        println!(
            "{:<18} peak {peak:>10.3} mg/min at {t:>7.1} min  -> {}",
            traj.model,
            path.display()
        );
    }
    Ok(())
}

fn compare(common: &Common) -> mealsim::Result<()> {
    let cfg = load(common)?;
    let dir = out_dir(common)?;
    let opts = IntegratorOptions::default().with_output_interval(cfg.output_interval);
    let report = scenario::run_comparison(
        &cfg.models,
        &cfg.carbs,
        cfg.meal_duration,
        cfg.horizon,
        &opts,
        cfg.per_kg,
    )?;
    let csv = dir.join("comparison.csv");
    scenario::write_report_csv(&report, &csv)?;
    scenario::write_summary_csv(&report, &dir.join("summary.csv"))?;
    scenario::emit_plot_script(&report, &dir.join("comparison.gp"), "comparison.csv")?;
    println!("{}", report.summary());
    println!("wrote {}", csv.display());
    Ok(())
}

fn check_linearity(common: &Common) -> mealsim::Result<bool> {
    let cfg = load(common)?;
    let mut all_ok = true;
    for report in scenario::check_linearity(&cfg)? {
        println!("{report}");
        let claimed = report
            .model
            .parse::<ModelId>()
            .map(|id| id.info().linear_in_d)
            .unwrap_or(true);
        all_ok &= claimed == report.is_linear();
    }
    Ok(all_ok)
}

fn delay(common: &Common, tau_d: f64, stages: usize, sigma: f64) -> mealsim::Result<()> {
    let spec = DelaySpec::new(tau_d, stages)?;
    let horizon = 3.0 * tau_d;
    let dt = tau_d / 200.0;
    println!("{:<10} {:>6} {:>12}", "kind", "M", "L2 error");
    for kind in DelayKind::ALL {
        for m in [1, 2, 4, 8, 16] {
            let c = step_comparison(kind, &DelaySpec::new(tau_d, m)?, sigma, horizon, dt)?;
            println!("{:<10} {m:>6} {:>12.4e}", kind.name(), c.l2_error());
        }
    }
    if common.out.is_some() {
        let demo = delay_demo(&spec, sigma, horizon, dt)?;
        let path = out_dir(common)?.join("delay_demo.csv");
        scenario::write_delay_demo_csv(&demo, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn list_models() {
    println!(
        "{:<18} {:<14} {:>8} {:>7} {:>12}",
        "model", "equations", "states", "linear", "linear in D"
    );
    let yn = |b: bool| if b { "yes" } else { "no" };
    for id in ModelId::ALL {
        let i = id.info();
        println!(
            "{:<18} {:<14} {:>8} {:>7} {:>12}",
            id.as_str(),
            i.equations,
            i.states,
            yn(i.linear),
            yn(i.linear_in_d)
        );
    }
    println!("M: finite-volume cells or spectral order (--scheme, --resolution)");
}

fn report(r: mealsim::Result<()>) -> ExitCode {
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(c) => report(run(c)),
        Command::Compare(c) => report(compare(c)),
        Command::CheckLinearity(c) => match check_linearity(c) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => {
                eprintln!("a model's linearity in D differs from its catalog entry");
                ExitCode::from(2)
            }
            Err(e) => report(Err(e)),
        },
        Command::DelayDemo {
            common,
            tau_d,
            stages,
            sigma,
        } => report(delay(common, *tau_d, *stages, *sigma)),
        Command::ListModels => {
            list_models();
            ExitCode::SUCCESS
        }
    }
}

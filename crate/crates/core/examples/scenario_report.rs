//! Load a scenario, compare models on several meal sizes and write the CSV,
//! summary and gnuplot script to a temporary directory.

use mealsim::engine::IntegratorOptions;
use mealsim::scenario::{self, parse_config};

const CONFIG: &str = r#"
[scenario]
models = ["hovorka", "dalla_man", "simo", "alskar", "cstr_pfr_open"]
horizon = 480
per_kg = true
carbs = [45, 90]

[simo]
f = 0.9
"#;

fn main() -> mealsim::Result<()> {
    let cfg = parse_config(CONFIG)?;
    let opts = IntegratorOptions::default().with_output_interval(cfg.output_interval);
    let report = scenario::run_comparison(
        &cfg.models,
        &cfg.carbs,
        cfg.meal_duration,
        cfg.horizon,
        &opts,
        cfg.per_kg,
    )?;
    println!("{}", report.summary());

    let dir = std::env::temp_dir().join("mealsim-example");
    std::fs::create_dir_all(&dir)?;
    scenario::write_report_csv(&report, &dir.join("comparison.csv"))?;
    scenario::write_summary_csv(&report, &dir.join("summary.csv"))?;
    scenario::emit_plot_script(&report, &dir.join("comparison.gp"), "comparison.csv")?;
    println!("wrote {}", dir.display());
    Ok(())
}

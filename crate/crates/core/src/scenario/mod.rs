//! Scenario execution: single runs, multi-model comparisons and linearity
//! checks driven by a [`ScenarioConfig`].

pub mod config;
pub mod report;

pub use config::{load_config, parse_config, ScenarioConfig, MG_PER_G};
pub use report::{
    count_local_maxima, emit_plot_script, plot_script, write_delay_demo_csv, write_report_csv,
    write_summary_csv, write_trajectory_csv, ComparisonReport, Series, PEAK_DEADBAND,
};

use crate::catalog::ModelSpec;
use crate::engine::{
    simulate_meals, steady_state, IntegratorOptions, MealEvent, MealSchedule, Trajectory,
};
use crate::error::Result;
use crate::linearity::{verify_d_linearity, LinearityReport, ScheduleShape};

/// Simulate `schedule` for one model from its zero steady state.
pub fn run_model(
    spec: &ModelSpec,
    schedule: &MealSchedule,
    horizon: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    let model = spec.build()?;
    let x0 = steady_state(model.as_ref())?;
    let traj = simulate_meals(model.as_ref(), &x0, schedule, horizon, opts)?;
    Ok(traj.with_per_kg(model.body_weight()))
}

/// Every configured model on the configured meal schedule.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<Trajectory>> {
    let opts = IntegratorOptions::default().with_output_interval(cfg.output_interval);
    std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .models
            .iter()
            .map(|m| s.spawn(move || run_model(m, &cfg.meals, cfg.horizon, &opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    })
}

/// The meal used for a comparison: an impulse at `t = 0`, or a step over
/// `duration` minutes.
pub fn comparison_meal(carbs: f64, duration: f64) -> MealSchedule {
    if duration > 0.0 {
        MealSchedule::single(MealEvent::step(0.0, carbs, duration))
    } else {
        MealSchedule::single(MealEvent::impulse(0.0, carbs))
    }
}

/// Simulate every `(model, D)` pair concurrently.
pub fn run_comparison(
    models: &[ModelSpec],
    carbs: &[f64],
    meal_duration: f64,
    horizon: f64,
    opts: &IntegratorOptions,
    per_kg: bool,
) -> Result<ComparisonReport> {
    let pairs: Vec<(&ModelSpec, f64)> = models
        .iter()
        .flat_map(|m| carbs.iter().map(move |&d| (m, d)))
        .collect();
    let runs: Vec<Result<(Series, Vec<f64>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|&(m, d)| {
                s.spawn(move || {
                    let model = m.build()?;
                    let x0 = steady_state(model.as_ref())?;
                    let traj = simulate_meals(
                        model.as_ref(),
                        &x0,
                        &comparison_meal(d, meal_duration),
                        horizon,
                        opts,
                    )?;
                    let name = format!("{}_{}g", m.id, d / MG_PER_G);
                    Ok((
                        Series::from_trajectory(name, d, model.body_weight(), &traj),
                        traj.times,
                    ))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    let mut report = ComparisonReport::new(Vec::new(), per_kg);
    for (k, run) in runs.into_iter().enumerate() {
        let (series, times) = run?;
        if k == 0 {
            report.times = times;
        }
        report.push(series)?;
    }
    Ok(report)
}

/// Linearity reports for every configured model on the configured meal
/// sizes and meal duration.
pub fn check_linearity(cfg: &ScenarioConfig) -> Result<Vec<LinearityReport>> {
    let opts = IntegratorOptions::default().with_output_interval(cfg.output_interval);
    let shape = if cfg.meal_duration > 0.0 {
        ScheduleShape::step_at(0.0, cfg.meal_duration)
    } else {
        ScheduleShape::impulse_at(0.0)
    };
    cfg.models
        .iter()
        .map(|m| {
            let model = m.build()?;
            verify_d_linearity(model.as_ref(), &shape, &cfg.carbs, cfg.horizon, &opts)
        })
        .collect()
}

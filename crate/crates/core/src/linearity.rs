//! Normalized simulation and checks of linearity in the meal size `D`.
//!
//! For a model that is linear in `D`, the response to a meal with `D` mg of
//! carbohydrate is `D` times the response to the same schedule shape scaled
//! to 1 mg.

use std::fmt;

use crate::engine::{
    simulate_meals, steady_state, IntegratorOptions, MealEvent, MealModel, MealSchedule, Trajectory,
};
use crate::error::{Error, Result};

/// Relative deviation above which a model is reported as nonlinear in `D`.
pub const NONLINEAR_THRESHOLD: f64 = 1e-3;

/// Event times and durations with carbohydrate fractions summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleShape {
    unit: MealSchedule,
    /// Meal durations grow in proportion to `D` (eating at a fixed rate).
    /// The input is then no longer linear in `D` and scaling is refused.
    pub duration_grows_with_meal: bool,
}

impl ScheduleShape {
    pub fn from_schedule(schedule: &MealSchedule) -> Result<Self> {
        let total = schedule.total_carbs();
        if !(total > 0.0) {
            return Err(Error::InvalidSchedule(
                "schedule shape needs a positive carbohydrate total".into(),
            ));
        }
        Ok(Self {
            unit: schedule.scaled(1.0 / total),
            duration_grows_with_meal: false,
        })
    }

    pub fn impulse_at(time: f64) -> Self {
        Self {
            unit: MealSchedule::single(MealEvent::impulse(time, 1.0)),
            duration_grows_with_meal: false,
        }
    }

    pub fn step_at(time: f64, duration: f64) -> Self {
        Self {
            unit: MealSchedule::single(MealEvent::step(time, 1.0, duration)),
            duration_grows_with_meal: false,
        }
    }

    pub fn with_duration_growth(mut self, on: bool) -> Self {
        self.duration_grows_with_meal = on;
        self
    }

    pub fn unit(&self) -> &MealSchedule {
        &self.unit
    }

    /// The schedule for a meal of `d` mg.
    pub fn for_meal(&self, d: f64) -> Result<MealSchedule> {
        if !self.duration_grows_with_meal {
            return Ok(self.unit.scaled(d));
        }
        MealSchedule::new(
            self.unit
                .events()
                .iter()
                .map(|e| MealEvent {
                    carbs: e.carbs * d,
                    duration: e.duration * d,
                    ..*e
                })
                .collect(),
        )
    }
}

/// The response to the unit-carbohydrate schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedRun {
    pub model: String,
    pub shape: ScheduleShape,
    pub base: Trajectory,
    linear_in_meal_size: bool,
}

pub fn normalized_run(
    model: &dyn MealModel,
    shape: &ScheduleShape,
    horizon: f64,
    opts: &IntegratorOptions,
) -> Result<NormalizedRun> {
    let x0 = steady_state(model)?;
    let base = simulate_meals(model, &x0, &shape.for_meal(1.0)?, horizon, opts)?;
    Ok(NormalizedRun {
        model: model.name().to_string(),
        shape: shape.clone(),
        base,
        linear_in_meal_size: model.linear_in_meal_size(),
    })
}

/// `D` times the normalized run.
pub fn scale_response(run: &NormalizedRun, d: f64) -> Result<Trajectory> {
    if !run.linear_in_meal_size {
        return Err(Error::NotLinearInMealSize {
            model: run.model.clone(),
            reason: "its response is not proportional to the meal size".into(),
        });
    }
    if run.shape.duration_grows_with_meal {
        return Err(Error::NotLinearInMealSize {
            model: run.model.clone(),
            reason: "meal durations grow with the meal size, so the input is not linear in D"
                .into(),
        });
    }
    Ok(run.base.scaled(d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearityRow {
    pub meal: f64,
    /// `max_t |R_A(t; D) − D·R_A(t; 1)| / max_t |R_A(t; D)|`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearityReport {
    pub model: String,
    pub rows: Vec<LinearityRow>,
    pub threshold: f64,
}

impl LinearityReport {
    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.deviation).fold(0.0, f64::max)
    }

    pub fn is_linear(&self) -> bool {
        self.max_deviation() <= self.threshold
    }
}

impl fmt::Display for LinearityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<18} {:>10} {:>14}", "model", "D [g]", "max rel dev")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<18} {:>10.1} {:>14.3e}",
                self.model,
                r.meal / 1000.0,
                r.deviation
            )?;
        }
        let verdict = if self.is_linear() {
            "LINEAR"
        } else {
            "NONLINEAR"
        };
        write!(
            f,
            "{:<18} {verdict} (threshold {:.0e})",
            self.model, self.threshold
        )
    }
}

/// Relative sup-norm distance of `approx` from `reference`.
pub fn relative_sup_deviation(reference: &[f64], approx: &[f64]) -> f64 {
    let scale = reference.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let diff = reference
        .iter()
        .zip(approx)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Simulate every meal size directly and compare with the scaled unit run.
/// Meal sizes are simulated concurrently.
pub fn verify_d_linearity(
    model: &dyn MealModel,
    shape: &ScheduleShape,
    meals: &[f64],
    horizon: f64,
    opts: &IntegratorOptions,
) -> Result<LinearityReport> {
    if meals.len() < 2 {
        return Err(Error::invalid("meals", "need at least two meal sizes"));
    }
    if shape.duration_grows_with_meal {
        return Err(Error::NotLinearInMealSize {
            model: model.name().to_string(),
            reason: "meal durations grow with the meal size".into(),
        });
    }
    let x0 = steady_state(model)?;
    let base = simulate_meals(model, &x0, &shape.for_meal(1.0)?, horizon, opts)?;
    let results: Vec<Result<LinearityRow>> = std::thread::scope(|s| {
        let handles: Vec<_> = meals
            .iter()
            .map(|&d| {
                let (x0, base) = (&x0, &base);
                s.spawn(move || {
                    let direct = simulate_meals(model, x0, &shape.for_meal(d)?, horizon, opts)?;
                    let scaled: Vec<f64> = base.outputs.iter().map(|y| y * d).collect();
                    Ok(LinearityRow {
                        meal: d,
                        deviation: relative_sup_deviation(&direct.outputs, &scaled),
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    Ok(LinearityReport {
        model: model.name().to_string(),
        rows: results.into_iter().collect::<Result<_>>()?,
        threshold: NONLINEAR_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{hovorka, Alskar, AlskarParams, HovorkaParams};

    #[test]
    fn scaling_identity_and_zero() {
        let m = hovorka(&HovorkaParams::default()).unwrap();
        let run = normalized_run(
            &m,
            &ScheduleShape::impulse_at(0.0),
            100.0,
            &IntegratorOptions::default(),
        )
        .unwrap();
        assert_eq!(scale_response(&run, 1.0).unwrap().outputs, run.base.outputs);
        assert!(scale_response(&run, 0.0)
            .unwrap()
            .outputs
            .iter()
            .all(|&y| y == 0.0));
    }

    #[test]
    fn nonlinear_model_rejected() {
        let m = Alskar::new(AlskarParams::default()).unwrap();
        let run = normalized_run(
            &m,
            &ScheduleShape::impulse_at(0.0),
            60.0,
            &IntegratorOptions::default(),
        )
        .unwrap();
        assert!(matches!(
            scale_response(&run, 2.0),
            Err(Error::NotLinearInMealSize { .. })
        ));
    }

    #[test]
    fn growing_durations_disable_scaling() {
        let shape = ScheduleShape::step_at(0.0, 1e-3).with_duration_growth(true);
        let s = shape.for_meal(5000.0).unwrap();
        assert_eq!(s.events()[0].duration, 5.0);
        let m = hovorka(&HovorkaParams::default()).unwrap();
        assert!(
            verify_d_linearity(&m, &shape, &[1.0, 2.0], 10.0, &IntegratorOptions::default())
                .is_err()
        );
    }

    #[test]
    fn shape_from_schedule_is_normalized() {
        let s = MealSchedule::new(vec![
            MealEvent::impulse(0.0, 30.0),
            MealEvent::step(60.0, 10.0, 5.0),
        ])
        .unwrap();
        let shape = ScheduleShape::from_schedule(&s).unwrap();
        assert!((shape.unit().total_carbs() - 1.0).abs() < 1e-15);
        assert!(ScheduleShape::from_schedule(&MealSchedule::empty()).is_err());
    }
}

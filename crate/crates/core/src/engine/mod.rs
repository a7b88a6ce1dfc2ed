//! Initial value problems for meal models.
//!
//! A model is integrated between input breakpoints with an adaptive
//! Dormand–Prince 5(4) scheme. Two meal-input semantics are supported:
//!
//! * **step meals**: the carbohydrate mass `D` of an event is delivered at the
//!   constant rate `D / duration` over `[t, t + duration)`;
//! * **impulse meals**: at the event time the state jumps by `f_d(x⁻)·D`, where
//!   `f_d` is the model's input-affine injection map, and the autonomous system
//!   is integrated between events.
//!
//! The integrator never steps across a breakpoint; every segment is a fresh
//! IVP started from the state handed over by the previous one.

mod dopri;
pub mod expm;
pub mod linear;

use crate::error::{Error, Result};

pub use linear::{linear_step, LinearModel, LinearRealization};

/// A meal-absorption model producing the glucose rate of appearance `R_A`.
///
/// Implementors are immutable once constructed; all per-run mutable state is
/// held by the engine, so one instance can drive concurrent simulations.
pub trait MealModel: Send + Sync {
    fn name(&self) -> &str;

    fn state_labels(&self) -> Vec<String>;

    fn n_states(&self) -> usize {
        self.state_labels().len()
    }

    /// `dx = f(t, x, d)`; `memory` carries the information the model kept from
    /// the most recent meal event.
    fn rhs(&self, t: f64, x: &[f64], d: f64, memory: &MealMemory, dx: &mut [f64]);

    /// Rate of appearance `R_A` in mg/min.
    fn output(&self, x: &[f64]) -> f64;

    /// The injection map `f_d(x)` of an input-affine model, if it has one.
    fn injection(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// Update the meal memory when a meal starts. `x` is the state just
    /// before the meal.
    fn remember_meal(&self, memory: &mut MealMemory, _x: &[f64], event: &MealEvent) {
        memory.last_meal = Some(event.time);
        memory.meal_size = event.carbs;
    }

    fn linear_realization(&self) -> Option<LinearRealization> {
        None
    }

    /// Whether `R_A` scales linearly with the meal carbohydrate content.
    fn linear_in_meal_size(&self) -> bool;

    /// Body weight in kg used for per-kg normalization.
    fn body_weight(&self) -> f64;
}

/// Per-run information retained from the latest meal.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MealMemory {
    pub last_meal: Option<f64>,
    /// Carbohydrate mass in mg governing the current meal.
    pub meal_size: f64,
}

impl MealMemory {
    /// Minutes since the most recent meal, or since `t = 0` if none occurred.
    pub fn time_since_meal(&self, t: f64) -> f64 {
        t - self.last_meal.unwrap_or(0.0)
    }
}

/// One meal: `carbs` mg at `time` min, ingested over `duration` min
/// (`duration == 0` means instantaneous).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MealEvent {
    pub time: f64,
    pub carbs: f64,
    pub duration: f64,
}

impl MealEvent {
    pub fn impulse(time: f64, carbs: f64) -> Self {
        Self {
            time,
            carbs,
            duration: 0.0,
        }
    }

    pub fn step(time: f64, carbs: f64, duration: f64) -> Self {
        Self {
            time,
            carbs,
            duration,
        }
    }

    pub fn is_impulse(&self) -> bool {
        self.duration == 0.0
    }
}

/// Meal events with strictly increasing times.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MealSchedule {
    events: Vec<MealEvent>,
}

impl MealSchedule {
    pub fn new(events: Vec<MealEvent>) -> Result<Self> {
        for (k, e) in events.iter().enumerate() {
            if !(e.time >= 0.0 && e.carbs >= 0.0 && e.duration >= 0.0)
                || !(e.time.is_finite() && e.carbs.is_finite() && e.duration.is_finite())
            {
                return Err(Error::InvalidSchedule(format!(
                    "event {k} must have finite, non-negative time, carbs and duration"
                )));
            }
            if k > 0 {
                let prev = &events[k - 1];
                if e.time <= prev.time {
                    return Err(Error::InvalidSchedule(format!(
                        "event times must be strictly increasing (event {k} at {} after {})",
                        e.time, prev.time
                    )));
                }
                if prev.time + prev.duration > e.time {
                    return Err(Error::InvalidSchedule(format!(
                        "step interval of event {} overlaps event {k}",
                        k - 1
                    )));
                }
            }
        }
        Ok(Self { events })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(event: MealEvent) -> Self {
        Self {
            events: vec![event],
        }
    }

    pub fn events(&self) -> &[MealEvent] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn total_carbs(&self) -> f64 {
        self.events.iter().map(|e| e.carbs).sum()
    }

    /// Same times and durations, every carbohydrate mass multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            events: self
                .events
                .iter()
                .map(|e| MealEvent {
                    carbs: e.carbs * factor,
                    ..*e
                })
                .collect(),
        }
    }

    /// The piecewise-constant rate `d(t)` of the schedule read as step meals.
    pub fn step_input(&self) -> Result<InputSignal> {
        let mut changes = Vec::with_capacity(2 * self.events.len());
        for e in &self.events {
            if e.duration <= 0.0 {
                return Err(Error::InvalidSchedule(format!(
                    "step meal at t = {} needs a positive duration",
                    e.time
                )));
            }
            changes.push((e.time, e.carbs / e.duration));
            changes.push((e.time + e.duration, 0.0));
        }
        // A meal ending exactly where the next starts: keep the later rate.
        changes.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 = later.1;
                true
            } else {
                false
            }
        });
        InputSignal::piecewise(0.0, changes)
    }
}

/// Piecewise-constant input: `initial` before the first change, then the
/// value of the latest `(time, value)` change.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSignal {
    initial: f64,
    changes: Vec<(f64, f64)>,
}

impl InputSignal {
    pub fn constant(value: f64) -> Self {
        Self {
            initial: value,
            changes: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn piecewise(initial: f64, changes: Vec<(f64, f64)>) -> Result<Self> {
        if changes.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidSchedule(
                "input breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { initial, changes })
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.changes
            .iter()
            .take_while(|(tc, _)| *tc <= t)
            .last()
            .map_or(self.initial, |c| c.1)
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.changes.iter().map(|c| c.0)
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let mut pts: Vec<f64> = vec![a];
        pts.extend(self.breakpoints().filter(|&t| t > a && t < b));
        pts.push(b);
        pts.windows(2)
            .map(|w| (w[1] - w[0]) * self.value_at(w[0]))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    /// Absolute tolerance in state units.
    pub abs_tol: f64,
    /// Largest step in minutes.
    pub max_step: f64,
    /// Spacing of the stored output grid in minutes.
    pub output_interval: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: 10.0,
            output_interval: 1.0,
        }
    }
}

impl IntegratorOptions {
    pub fn with_output_interval(mut self, dt: f64) -> Self {
        self.output_interval = dt;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("output_interval", self.output_interval),
        ] {
            if !(v > 0.0) {
                return Err(Error::invalid(name, "must be strictly positive"));
            }
        }
        Ok(())
    }
}

/// State right before and right after an impulse meal.
#[derive(Debug, Clone, PartialEq)]
pub struct StateJump {
    pub time: f64,
    pub carbs: f64,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
}

/// Sampled solution of a meal model.
///
/// `states[i]` and `outputs[i]` belong to `times[i]`. At impulse times the
/// grid stores the post-jump state; both sides of every jump are kept in
/// `jumps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: String,
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `R_A` in mg/min.
    pub outputs: Vec<f64>,
    /// `R_A` in mg/(kg·min), when normalized.
    pub per_kg_outputs: Option<Vec<f64>>,
    pub jumps: Vec<StateJump>,
}

impl Trajectory {
    fn new(model: &dyn MealModel) -> Self {
        Self {
            model: model.name().to_string(),
            labels: model.state_labels(),
            times: Vec::new(),
            states: Vec::new(),
            outputs: Vec::new(),
            per_kg_outputs: None,
            jumps: Vec::new(),
        }
    }

    fn push(&mut self, model: &dyn MealModel, t: f64, x: &[f64]) {
        self.times.push(t);
        self.states.push(x.to_vec());
        self.outputs.push(model.output(x));
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    /// Divide the output by a body weight in kg.
    pub fn with_per_kg(mut self, body_weight: f64) -> Self {
        self.per_kg_outputs = Some(self.outputs.iter().map(|r| r / body_weight).collect());
        self
    }

    /// Multiply states and outputs by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |v: &Vec<f64>| v.iter().map(|x| x * factor).collect::<Vec<_>>();
        Self {
            model: self.model.clone(),
            labels: self.labels.clone(),
            times: self.times.clone(),
            states: self.states.iter().map(scale).collect(),
            outputs: scale(&self.outputs),
            per_kg_outputs: self.per_kg_outputs.as_ref().map(scale),
            jumps: self
                .jumps
                .iter()
                .map(|j| StateJump {
                    time: j.time,
                    carbs: j.carbs * factor,
                    before: scale(&j.before),
                    after: scale(&j.after),
                })
                .collect(),
        }
    }

    /// Peak output and its time.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.outputs
            .iter()
            .zip(&self.times)
            .fold(None, |best: Option<(f64, f64)>, (&r, &t)| match best {
                Some((b, _)) if b >= r => best,
                _ => Some((r, t)),
            })
    }

    /// Trapezoidal integral of `R_A` over the stored grid, in mg.
    pub fn output_integral(&self) -> f64 {
        trapezoid(&self.times, &self.outputs)
    }
}

pub fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum()
}

#[derive(Debug, Clone)]
enum ActionKind {
    SetInput(f64),
    Impulse(MealEvent),
    Remember(MealEvent),
}

#[derive(Debug, Clone)]
struct Action {
    time: f64,
    kind: ActionKind,
}

fn output_grid(t_a: f64, t_b: f64, dt: f64) -> Vec<f64> {
    let n = ((t_b - t_a) / dt + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| t_a + k as f64 * dt).collect();
    let last = *grid.last().expect("grid has at least t_a");
    if (t_b - last).abs() <= 1e-9 * dt {
        *grid.last_mut().unwrap() = t_b;
    } else {
        grid.push(t_b);
    }
    grid
}

fn check_state(model: &dyn MealModel, x0: &[f64]) -> Result<()> {
    if x0.len() != model.n_states() {
        return Err(Error::DimensionMismatch {
            what: "initial state",
            expected: model.n_states(),
            found: x0.len(),
        });
    }
    Ok(())
}

/// Shared driver: apply the actions in time order and integrate in between.
fn run(
    model: &dyn MealModel,
    x0: &[f64],
    span: (f64, f64),
    initial_input: f64,
    mut actions: Vec<Action>,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    let (t_a, t_b) = span;
    if !(t_a < t_b) || !t_a.is_finite() || !t_b.is_finite() {
        return Err(Error::InvalidSpan {
            start: t_a,
            end: t_b,
        });
    }
    opts.validate()?;
    check_state(model, x0)?;
    actions.retain(|a| a.time >= t_a && a.time <= t_b);
    actions.sort_by(|a, b| a.time.total_cmp(&b.time));

    let grid = output_grid(t_a, t_b, opts.output_interval);
    let snap = 1e-9 * opts.output_interval;
    let mut traj = Trajectory::new(model);
    let mut x = x0.to_vec();
    let mut d = initial_input;
    let mut memory = MealMemory::default();
    let mut gi = 0;
    let mut ai = 0;
    let mut t = t_a;

    loop {
        // Everything scheduled at the current time happens before sampling.
        while ai < actions.len() && actions[ai].time <= t + snap {
            match &actions[ai].kind {
                ActionKind::SetInput(v) => d = *v,
                ActionKind::Remember(e) => model.remember_meal(&mut memory, &x, e),
                ActionKind::Impulse(e) => {
                    model.remember_meal(&mut memory, &x, e);
                    let fd = model
                        .injection(&x)
                        .ok_or_else(|| Error::MissingInjection(model.name().to_string()))?;
                    let before = x.clone();
                    for (xi, fi) in x.iter_mut().zip(&fd) {
                        *xi += fi * e.carbs;
                    }
                    traj.jumps.push(StateJump {
                        time: t,
                        carbs: e.carbs,
                        before,
                        after: x.clone(),
                    });
                }
            }
            ai += 1;
        }
        while gi < grid.len() && grid[gi] <= t + snap {
            traj.push(model, grid[gi], &x);
            gi += 1;
        }
        if t >= t_b {
            break;
        }
        let t_next = actions.get(ai).map_or(t_b, |a| a.time.min(t_b));
        let end = gi
            + grid[gi..]
                .iter()
                .take_while(|&&g| g < t_next - snap)
                .count();
        let emit_at = &grid[gi..end];
        let mem = memory;
        let d_seg = d;
        let mut samples: Vec<(f64, Vec<f64>)> = Vec::with_capacity(emit_at.len());
        dopri::integrate_segment(
            |tt, xx, dx| model.rhs(tt, xx, d_seg, &mem, dx),
            t,
            t_next,
            &mut x,
            opts,
            emit_at,
            |te, xe| samples.push((te, xe.to_vec())),
        )?;
        for (te, xe) in samples {
            traj.push(model, te, &xe);
        }
        gi = end;
        t = t_next;
    }
    Ok(traj)
}

/// Integrate `model` over `span` under a piecewise-constant input.
pub fn integrate(
    model: &dyn MealModel,
    x0: &[f64],
    input: &InputSignal,
    span: (f64, f64),
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    let actions = input
        .changes
        .iter()
        .map(|&(time, v)| Action {
            time,
            kind: ActionKind::SetInput(v),
        })
        .collect();
    run(model, x0, span, input.value_at(span.0), actions, opts)
}

/// Simulate meals delivered at constant rate `D/Δt` over their durations.
pub fn simulate_step_meals(
    model: &dyn MealModel,
    x0: &[f64],
    schedule: &MealSchedule,
    horizon: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    let input = schedule.step_input()?;
    let mut actions: Vec<Action> = schedule
        .events()
        .iter()
        .map(|e| Action {
            time: e.time,
            kind: ActionKind::Remember(*e),
        })
        .collect();
    actions.extend(input.changes.iter().map(|&(time, v)| Action {
        time,
        kind: ActionKind::SetInput(v),
    }));
    run(model, x0, (0.0, horizon), 0.0, actions, opts)
}

/// Simulate instantaneous meals as state jumps `x⁺ = x⁻ + f_d(x⁻)·D`.
pub fn simulate_impulse_meals(
    model: &dyn MealModel,
    x0: &[f64],
    schedule: &MealSchedule,
    horizon: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    if let Some(e) = schedule.events().iter().find(|e| !e.is_impulse()) {
        return Err(Error::InvalidSchedule(format!(
            "impulse meal at t = {} has non-zero duration",
            e.time
        )));
    }
    if !schedule.is_empty() && model.injection(&vec![0.0; model.n_states()]).is_none() {
        return Err(Error::MissingInjection(model.name().to_string()));
    }
    let actions = schedule
        .events()
        .iter()
        .map(|e| Action {
            time: e.time,
            kind: ActionKind::Impulse(*e),
        })
        .collect();
    run(model, x0, (0.0, horizon), 0.0, actions, opts)
}

/// Simulate a mixed schedule: zero-duration events as impulses, the rest as steps.
pub fn simulate_meals(
    model: &dyn MealModel,
    x0: &[f64],
    schedule: &MealSchedule,
    horizon: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    let mut actions = Vec::new();
    for e in schedule.events() {
        if e.is_impulse() {
            actions.push(Action {
                time: e.time,
                kind: ActionKind::Impulse(*e),
            });
        } else {
            actions.push(Action {
                time: e.time,
                kind: ActionKind::Remember(*e),
            });
            actions.push(Action {
                time: e.time,
                kind: ActionKind::SetInput(e.carbs / e.duration),
            });
            actions.push(Action {
                time: e.time + e.duration,
                kind: ActionKind::SetInput(0.0),
            });
        }
    }
    // A step meal ending at the instant the next one starts stops first.
    actions.sort_by(|a, b| {
        a.time.total_cmp(&b.time).then_with(|| {
            let rank = |k: &ActionKind| match k {
                ActionKind::SetInput(v) if *v == 0.0 => 0,
                _ => 1,
            };
            rank(&a.kind).cmp(&rank(&b.kind))
        })
    });
    run(model, x0, (0.0, horizon), 0.0, actions, opts)
}

/// The zero state, checked to satisfy `‖f_x(0)‖ ≤ abs_tol`.
pub fn steady_state(model: &dyn MealModel) -> Result<Vec<f64>> {
    let n = model.n_states();
    let x = vec![0.0; n];
    let mut dx = vec![0.0; n];
    model.rhs(0.0, &x, 0.0, &MealMemory::default(), &mut dx);
    let residual = dx.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if residual > IntegratorOptions::default().abs_tol {
        return Err(Error::invalid(
            "steady_state",
            format!(
                "zero state is not stationary for `{}` (residual {residual:e})",
                model.name()
            ),
        ));
    }
    Ok(x)
}

//! Acceptance criteria, one PASS/FAIL line each. Exit status is non-zero if
//! any criterion fails.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mealsim::catalog::{ModelId, ModelSpec};
use mealsim::cstr_pfr::PylorusMode;
use mealsim::delay::{
    algebraic_lag, lag_chain, realize, step_comparison, transport_chain, DelayKind, DelaySpec,
};
use mealsim::discretization::quadrature::{gauss_legendre_on, nodes_weights};
use mealsim::discretization::{fv_semidiscretize, Family, FvGrid, LagrangeBasis, Rule, Scheme};
use mealsim::engine::{
    integrate, linear_step, simulate_meals, steady_state, InputSignal, IntegratorOptions,
    LinearModel, LinearRealization, MealEvent, MealMemory, MealModel, MealSchedule, Trajectory,
};
use mealsim::kinetics::PfrFluxSpec;
use mealsim::linearity::{relative_sup_deviation, verify_d_linearity, ScheduleShape};
use mealsim::models::{
    dalla_man_kempt, hovorka, hovorka_impulse_response, DallaManParams, HovorkaParams,
};
use mealsim::scenario::{count_local_maxima, PEAK_DEADBAND};

const G: f64 = 1000.0;

type Check = (bool, String);

fn simulate(model: &dyn MealModel, schedule: &MealSchedule, horizon: f64, dt: f64) -> Trajectory {
    let x0 = steady_state(model).unwrap();
    simulate_meals(
        model,
        &x0,
        schedule,
        horizon,
        &IntegratorOptions::default().with_output_interval(dt),
    )
    .unwrap()
}

fn impulse(carbs: f64) -> MealSchedule {
    MealSchedule::single(MealEvent::impulse(0.0, carbs))
}

fn build(id: ModelId) -> Box<dyn MealModel> {
    ModelSpec::new(id).build().unwrap()
}

fn c1_linearity_in_d() -> Check {
    let start = Instant::now();
    let opts = IntegratorOptions::default();
    let shape = ScheduleShape::impulse_at(0.0);
    let meals = [45.0 * G, 90.0 * G, 180.0 * G];
    let mut pass = true;
    let mut parts = Vec::new();
    for (id, tol) in [
        (ModelId::Hovorka, 1e-5),
        (ModelId::DallaMan, 1e-5),
        (ModelId::Simo, 1e-5),
        (ModelId::CstrPfrOpen, 1e-4),
    ] {
        let spec = ModelSpec::new(id).with_scheme(Scheme::FiniteVolume, Some(100));
        let model = spec.build().unwrap();
        let r = verify_d_linearity(model.as_ref(), &shape, &meals, 720.0, &opts).unwrap();
        pass &= r.max_deviation() <= tol;
        parts.push(format!("{id} {:.1e}", r.max_deviation()));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 30.0;
    (
        pass,
        format!(
            "{} (limits 1e-5 / 1e-4); {secs:.2} s < 30 s",
            parts.join(", ")
        ),
    )
}

fn c2_hovorka_oracle() -> Check {
    let p = HovorkaParams::default();
    let m = hovorka(&p).unwrap();
    let d = 90.0 * G;
    let traj = simulate(&m, &impulse(d), 400.0, 0.01);
    let exact: Vec<f64> = traj
        .times
        .iter()
        .map(|&t| hovorka_impulse_response(&p, d, t))
        .collect();
    let dev = relative_sup_deviation(&exact, &traj.outputs);
    let (_, t_peak) = traj.peak().unwrap();
    let pass = dev <= 1e-6 && (t_peak - 40.0).abs() <= 0.1;
    (
        pass,
        format!("rel sup {dev:.2e} <= 1e-6; peak at {t_peak:.2} min (40 ± 0.1)"),
    )
}

fn random_system(rng: &mut ChaCha8Rng, k: usize) -> LinearRealization {
    let n = rng.random_range(1..=5);
    let mut a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    match k % 4 {
        // zero column: singular
        1 => a.column_mut(n - 1).fill(0.0),
        // dependent rows: singular
        2 if n > 1 => {
            let r = a.row(0) * rng.random_range(-2.0..2.0);
            a.row_mut(n - 1).copy_from(&r);
        }
        3 if k % 8 == 3 => a.fill(0.0),
        _ => {}
    }
    let b = DMatrix::from_fn(n, 1, |_, _| rng.random_range(-1.0..1.0));
    let c = DMatrix::from_fn(1, n, |_, _| rng.random_range(-1.0..1.0));
    LinearRealization::new(a, b, c, DMatrix::zeros(1, 1)).unwrap()
}

fn c3_linear_step() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let opts = IntegratorOptions::default().with_tolerances(1e-13, 1e-15);
    let mut worst = 0.0_f64;
    let mut singular = 0;
    for k in 0..100 {
        let r = random_system(&mut rng, k);
        if r.a.clone().lu().determinant().abs() < 1e-14 {
            singular += 1;
        }
        let n = r.n_states();
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let u = rng.random_range(-2.0..2.0);
        let dt = rng.random_range(0.1..3.0);
        let exact = linear_step(&r, &x0, &[u], dt).unwrap();
        let model = LinearModel::new("random", r, 1.0).unwrap();
        let traj = integrate(
            &model,
            &x0,
            &InputSignal::constant(u),
            (0.0, dt),
            &opts.with_output_interval(dt),
        )
        .unwrap();
        let num = traj.final_state().unwrap();
        let scale = exact.iter().chain(&x0).fold(0.0_f64, |m, v| m.max(v.abs()));
        let err = exact
            .iter()
            .zip(num)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
            / scale;
        worst = worst.max(err);
    }
    (
        worst <= 1e-8,
        format!("worst rel {worst:.2e} <= 1e-8 over 100 systems ({singular} singular A)"),
    )
}

fn c4_mass_accounting() -> Check {
    let d = 90.0 * G;
    let mut pass = true;
    let mut parts = Vec::new();
    for (id, fraction) in [
        (ModelId::Hovorka, 0.8),
        (ModelId::DallaMan, 0.9),
        (ModelId::Simo, 1.0),
        (ModelId::Alskar, 1.0),
    ] {
        let traj = simulate(build(id).as_ref(), &impulse(d), 1440.0, 0.1);
        let rel = (traj.output_integral() - fraction * d).abs() / d;
        pass &= rel <= 5e-3;
        parts.push(format!("{id} {rel:.1e}"));
    }
    for (scheme, tol) in [
        (Scheme::FiniteVolume, 5e-3),
        (Scheme::SpectralGalerkin, 1e-2),
    ] {
        let m = ModelSpec::new(ModelId::CstrPfrOpen)
            .with_scheme(scheme, None)
            .build_cstr_pfr()
            .unwrap()
            .with_accounting(true);
        let traj = simulate(&m, &impulse(d), 1440.0, 10.0);
        let x = traj.final_state().unwrap();
        let (absorbed, outflow) = m.accumulated(x).unwrap();
        let total = x[0] + m.intestine_mass(m.intestine(x)) + absorbed + outflow;
        let rel = (total - d).abs() / d;
        pass &= rel <= tol;
        parts.push(format!("cstr_pfr_open/{} {rel:.1e}", scheme.name()));
    }
    (
        pass,
        format!(
            "relative imbalance: {} (limits 5e-3, sg 1e-2)",
            parts.join(", ")
        ),
    )
}

fn c5_kempt_invariance() -> Check {
    let p = DallaManParams::default();
    let (d1, d2) = (10.0 * G, 100.0 * G);
    let worst = (0..=20)
        .map(|i| {
            let q = i as f64 * 0.1;
            (dalla_man_kempt(q * d1, d1, &p).unwrap() - dalla_man_kempt(q * d2, d2, &p).unwrap())
                .abs()
        })
        .fold(0.0, f64::max);
    (
        worst <= 1e-12 * p.k_max,
        format!("max |Δk_empt| {worst:.2e} <= {:.2e}", 1e-12 * p.k_max),
    )
}

/// `∫ x^k w(x) dx` on `[−1, 1]`.
fn moment(family: Family, k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    match family {
        Family::Legendre => 2.0 / (k as f64 + 1.0),
        Family::Chebyshev => (2..=k)
            .step_by(2)
            .fold(std::f64::consts::PI, |m, j| m * (j as f64 - 1.0) / j as f64),
    }
}

fn c6_quadrature() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0_f64;
    for family in [Family::Legendre, Family::Chebyshev] {
        for rule in [Rule::Gauss, Rule::GaussLobatto] {
            for m in 1..=10 {
                let (z, w) = nodes_weights(family, m, rule).unwrap();
                let degree = if rule == Rule::Gauss {
                    2 * m + 1
                } else {
                    2 * m - 1
                };
                for _ in 0..20 {
                    let a: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let exact: f64 = a
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c * moment(family, k))
                        .sum();
                    let quad: f64 = z
                        .iter()
                        .zip(&w)
                        .map(|(x, wi)| wi * a.iter().rev().fold(0.0, |s, c| s * x + c))
                        .sum();
                    let scale: f64 = z
                        .iter()
                        .zip(&w)
                        .map(|(x, wi)| {
                            wi * a
                                .iter()
                                .enumerate()
                                .map(|(k, c)| c.abs() * x.abs().powi(k as i32))
                                .sum::<f64>()
                        })
                        .sum();
                    worst = worst.max((quad - exact).abs() / scale.max(exact.abs()));
                }
            }
        }
    }
    let (z, w) = nodes_weights(Family::Chebyshev, 4, Rule::GaussLobatto).unwrap();
    let h = 2f64.sqrt() / 2.0;
    let pi = std::f64::consts::PI;
    let closed =
        z == [-1.0, -h, 0.0, h, 1.0] && w == [pi / 8.0, pi / 4.0, pi / 4.0, pi / 4.0, pi / 8.0];
    (
        worst <= 1e-12 && closed,
        format!(
            "worst rel {worst:.2e} <= 1e-12; Chebyshev GL M=4 closed form {}",
            if closed { "exact" } else { "MISMATCH" }
        ),
    )
}

fn c7_differentiation() -> Check {
    let mut worst = 0.0_f64;
    for m in [4usize, 8, 16, 32] {
        let (z, _) = nodes_weights(Family::Legendre, m, Rule::GaussLobatto).unwrap();
        let basis = LagrangeBasis::new(&z).unwrap();
        for k in 0..=m as i32 {
            let f: Vec<f64> = z.iter().map(|x| x.powi(k)).collect();
            let d1: Vec<f64> = z
                .iter()
                .map(|x| {
                    if k >= 1 {
                        k as f64 * x.powi(k - 1)
                    } else {
                        0.0
                    }
                })
                .collect();
            let d2: Vec<f64> = z
                .iter()
                .map(|x| {
                    if k >= 2 {
                        (k * (k - 1)) as f64 * x.powi(k - 2)
                    } else {
                        0.0
                    }
                })
                .collect();
            for (num, exact) in [
                (basis.differentiate(&f), d1),
                (basis.differentiate2(&f), d2),
            ] {
                let scale = exact.iter().fold(1.0_f64, |s, v| s.max(v.abs()));
                let err = num
                    .iter()
                    .zip(&exact)
                    .fold(0.0_f64, |e, (a, b)| e.max((a - b).abs()));
                worst = worst.max(err / scale);
            }
        }
    }
    (
        worst <= 1e-8,
        format!("worst scaled error {worst:.2e} <= 1e-8"),
    )
}

/// Pure advection of a Gaussian on the unit interval.
struct Advected {
    grid: FvGrid,
    spec: PfrFluxSpec,
}

const ADV_CENTER: f64 = 0.3;
const ADV_WIDTH: f64 = 0.08;
const ADV_TIME: f64 = 0.3;

fn gaussian(z: f64, t: f64) -> f64 {
    (-(z - ADV_CENTER - t).powi(2) / (2.0 * ADV_WIDTH * ADV_WIDTH)).exp()
}

fn cell_masses(grid: &FvGrid, t: f64) -> Vec<f64> {
    grid.edges
        .windows(2)
        .map(|e| {
            let (z, w) = gauss_legendre_on(8, e[0], e[1]).unwrap();
            grid.area
                * z.iter()
                    .zip(&w)
                    .map(|(z, w)| w * gaussian(*z, t))
                    .sum::<f64>()
        })
        .collect()
}

impl MealModel for Advected {
    fn name(&self) -> &str {
        "advected_gaussian"
    }
    fn state_labels(&self) -> Vec<String> {
        (0..self.grid.cells()).map(|i| format!("m_{i}")).collect()
    }
    fn rhs(&self, t: f64, x: &[f64], _d: f64, _m: &MealMemory, dx: &mut [f64]) {
        let inlet = self.grid.area * self.spec.v * gaussian(0.0, t);
        fv_semidiscretize(&self.grid, &self.spec, inlet, &vec![0.0; x.len()], x, dx);
    }
    fn output(&self, _x: &[f64]) -> f64 {
        0.0
    }
    fn linear_in_meal_size(&self) -> bool {
        true
    }
    fn body_weight(&self) -> f64 {
        1.0
    }
}

fn c8_fv_convergence() -> Check {
    let opts = IntegratorOptions::default()
        .with_tolerances(1e-10, 1e-13)
        .with_output_interval(ADV_TIME);
    let errors: Vec<f64> = [50usize, 100, 200, 400]
        .iter()
        .map(|&cells| {
            let model = Advected {
                grid: FvGrid::uniform(0.0, 1.0, cells, 1.0).unwrap(),
                spec: PfrFluxSpec::new(1.0, 0.0).unwrap(),
            };
            let x0 = cell_masses(&model.grid, 0.0);
            let traj =
                integrate(&model, &x0, &InputSignal::zero(), (0.0, ADV_TIME), &opts).unwrap();
            let exact = cell_masses(&model.grid, ADV_TIME);
            traj.final_state()
                .unwrap()
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .sum()
        })
        .collect();
    let ratios: Vec<f64> = errors.windows(2).map(|e| e[0] / e[1]).collect();
    let pass = ratios.iter().all(|r| (1.6..=2.4).contains(r));
    let fmt = |v: &[f64], p: usize| {
        v.iter()
            .map(|x| format!("{x:.prec$e}", prec = p))
            .collect::<Vec<_>>()
            .join(", ")
    };
    (
        pass,
        format!(
            "L1 errors [{}], ratios [{}] in [1.6, 2.4]",
            fmt(&errors, 2),
            fmt(&ratios, 3)
        ),
    )
}

fn c9_cross_scheme() -> Check {
    let start = Instant::now();
    let run = |scheme, resolution| {
        let m = ModelSpec::new(ModelId::CstrPfrOpen)
            .with_scheme(scheme, Some(resolution))
            .build()
            .unwrap();
        simulate(m.as_ref(), &impulse(90.0 * G), 600.0, 1.0).outputs
    };
    let fv = run(Scheme::FiniteVolume, 400);
    let sg = run(Scheme::SpectralGalerkin, 32);
    let dev = relative_sup_deviation(&fv, &sg);
    let secs = start.elapsed().as_secs_f64();
    (
        dev <= 0.02 && secs < 120.0,
        format!("FV(400) vs SG(32) rel sup {dev:.2e} <= 2e-2; {secs:.2} s < 120 s"),
    )
}

fn c10_qualitative() -> Check {
    let mut pass = true;
    let mut parts = Vec::new();
    for (id, want) in [
        (ModelId::DallaMan, 2),
        (ModelId::Hovorka, 1),
        (ModelId::Simo, 1),
        (ModelId::CstrPfrOpen, 1),
    ] {
        let traj = simulate(build(id).as_ref(), &impulse(90.0 * G), 720.0, 1.0);
        let n = count_local_maxima(&traj.outputs, PEAK_DEADBAND);
        pass &= n == want;
        parts.push(format!("{id} {n} maxima"));
    }
    let peak = |id: ModelId, d: f64| {
        simulate(build(id).as_ref(), &impulse(d), 720.0, 0.5)
            .peak()
            .unwrap()
            .0
    };
    let ratio = peak(ModelId::Alskar, 180.0 * G) / peak(ModelId::Alskar, 90.0 * G);
    pass &= ratio <= 1.15;
    parts.push(format!("alskar peak 180g/90g {ratio:.3} <= 1.15"));

    // At 45 g the sigmoid sits at its plateau k_sd_max, so Moxon behaves
    // like an open pylorus emptying at that same rate.
    let PylorusMode::Moxon {
        k_sd_max, r_a_max, ..
    } = PylorusMode::moxon()
    else {
        unreachable!()
    };
    let moxon = simulate(
        build(ModelId::CstrPfrMoxon).as_ref(),
        &impulse(45.0 * G),
        720.0,
        1.0,
    );
    let open_same = ModelSpec::new(ModelId::CstrPfrOpen)
        .with_override("k_sd", k_sd_max)
        .build()
        .unwrap();
    let open_same = simulate(open_same.as_ref(), &impulse(45.0 * G), 720.0, 1.0);
    let dev = relative_sup_deviation(&open_same.outputs, &moxon.outputs);
    pass &= dev <= 0.01;
    parts.push(format!(
        "moxon vs open(k_sd={k_sd_max}) at 45g {dev:.1e} <= 1e-2"
    ));
    let open_default = simulate(
        build(ModelId::CstrPfrOpen).as_ref(),
        &impulse(45.0 * G),
        720.0,
        1.0,
    );
    let dev_default = relative_sup_deviation(&open_default.outputs, &moxon.outputs);
    parts.push(format!("[info: vs open(k_sd=0.06) {dev_default:.1e}]"));

    let big = simulate(
        build(ModelId::CstrPfrMoxon).as_ref(),
        &impulse(180.0 * G),
        720.0,
        0.5,
    )
    .peak()
    .unwrap()
    .0;
    pass &= big <= 1.1 * r_a_max;
    parts.push(format!("moxon 180g peak {big:.1} <= {:.0}", 1.1 * r_a_max));
    (pass, parts.join("; "))
}

fn c11_impulse_vs_step() -> Check {
    let d = 90.0 * G;
    let mut pass = true;
    let mut parts = Vec::new();
    for id in [
        ModelId::Hovorka,
        ModelId::DallaMan,
        ModelId::Simo,
        ModelId::Alskar,
    ] {
        let m = build(id);
        let imp = simulate(m.as_ref(), &impulse(d), 720.0, 0.1);
        let s5 = simulate(
            m.as_ref(),
            &MealSchedule::single(MealEvent::step(0.0, d, 5.0)),
            720.0,
            0.1,
        );
        let s30 = simulate(
            m.as_ref(),
            &MealSchedule::single(MealEvent::step(0.0, d, 30.0)),
            720.0,
            0.1,
        );
        let (peak, t_imp) = imp.peak().unwrap();
        let diff = imp
            .outputs
            .iter()
            .zip(&s5.outputs)
            .fold(0.0_f64, |e, (a, b)| e.max((a - b).abs()))
            / peak;
        let t30 = s30.peak().unwrap().1;
        pass &= diff <= 0.05 && t30 > t_imp;
        parts.push(format!(
            "{id} 5-min {:.1}% / t_peak {t_imp:.1} < {t30:.1}",
            100.0 * diff
        ));
    }
    // Closed-form Hovorka responses, independent of the integrator.
    let p = HovorkaParams::default();
    let k = p.f * p.a_g * d / (p.tau_d * p.tau_d);
    let cumulative = |t: f64| k * p.tau_d * (p.tau_d - (t + p.tau_d) * (-t / p.tau_d).exp());
    let exact_diff = (0..=7200)
        .map(|i| i as f64 * 0.1)
        .map(|t| {
            (hovorka_impulse_response(&p, d, t)
                - (cumulative(t) - cumulative((t - 5.0).max(0.0))) / 5.0)
                .abs()
        })
        .fold(0.0, f64::max)
        / (k * p.tau_d / std::f64::consts::E);
    parts.push(format!(
        "[hovorka closed form 5-min {:.1}%]",
        100.0 * exact_diff
    ));
    (
        pass,
        format!("{} (limit 5% of impulse peak)", parts.join(", ")),
    )
}

fn c12_delays() -> Check {
    let tau = 10.0;
    let sigma = 2.0;
    let mut worst_gain = 0.0_f64;
    for m in [1usize, 2, 4, 8, 16] {
        let spec = DelaySpec::new(tau, m).unwrap();
        for kind in DelayKind::ALL {
            let gain = match realize(kind, &spec, sigma).unwrap().linear() {
                Some(r) => r.dc_gain().unwrap()[(0, 0)],
                None => algebraic_lag(tau + 1e3, sigma, tau),
            };
            worst_gain = worst_gain.max((gain - 1.0).abs());
        }
    }
    let mut decreasing = true;
    for kind in [DelayKind::Lag, DelayKind::Transport] {
        let errs: Vec<f64> = [1usize, 2, 4, 8, 16]
            .iter()
            .map(|&m| {
                step_comparison(
                    kind,
                    &DelaySpec::new(tau, m).unwrap(),
                    sigma,
                    3.0 * tau,
                    tau / 200.0,
                )
                .unwrap()
                .l2_error()
            })
            .collect();
        decreasing &= errs.windows(2).all(|e| e[1] < e[0]);
    }
    let mut structural = true;
    for m in 1..=16 {
        let spec = DelaySpec::new(tau, m).unwrap();
        let lag = lag_chain(&spec).unwrap();
        let tr = transport_chain(&spec).unwrap();
        let (l, t) = (lag.linear().unwrap(), tr.linear().unwrap());
        for (a, b) in [(&l.a, &t.a), (&l.b, &t.b), (&l.c, &t.c), (&l.d, &t.d)] {
            structural &= a.shape() == b.shape()
                && a.iter()
                    .zip(b.iter())
                    .all(|(x, y)| (*x == 0.0) == (*y == 0.0) && (x - y).abs() <= 1e-15 * x.abs());
        }
    }
    (
        worst_gain <= 1e-12 && decreasing && structural,
        format!(
            "max |DC gain - 1| {worst_gain:.1e} <= 1e-12; L2 error decreasing in M (lag, transport): {decreasing}; transport == lag: {structural}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("linearity in D", c1_linearity_in_d),
        ("Hovorka analytic impulse response", c2_hovorka_oracle),
        ("linear_step vs adaptive integration", c3_linear_step),
        ("mass accounting at 1440 min", c4_mass_accounting),
        ("k_empt invariance in D", c5_kempt_invariance),
        ("quadrature exactness", c6_quadrature),
        ("differentiation matrices", c7_differentiation),
        ("finite-volume first-order convergence", c8_fv_convergence),
        ("FV vs spectral CSTR-PFR", c9_cross_scheme),
        ("qualitative comparison claims", c10_qualitative),
        ("impulse vs step meals", c11_impulse_vs_step),
        ("delay approximations", c12_delays),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = check();
        let secs = start.elapsed().as_secs_f64();
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{secs:.2} s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

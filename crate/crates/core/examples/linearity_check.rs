//! Which models respond proportionally to the meal size?

use mealsim::catalog::{ModelId, ModelSpec};
use mealsim::engine::IntegratorOptions;
use mealsim::linearity::{normalized_run, scale_response, verify_d_linearity, ScheduleShape};

fn main() -> mealsim::Result<()> {
    let shape = ScheduleShape::impulse_at(0.0);
    let opts = IntegratorOptions::default();
    for id in ModelId::ALL {
        let model = ModelSpec::new(id).build()?;
        let report = verify_d_linearity(
            model.as_ref(),
            &shape,
            &[45_000.0, 90_000.0, 180_000.0],
            600.0,
            &opts,
        )?;
        println!("{report}\n");
    }

    let model = ModelSpec::new(ModelId::Alskar).build()?;
    let run = normalized_run(model.as_ref(), &shape, 600.0, &opts)?;
    if let Err(e) = scale_response(&run, 90_000.0) {
        println!("scaling refused: {e}");
    }
    Ok(())
}

//! Glucose-absorption meal models.
//!
//! Every model produces the glucose rate of appearance `R_A` (mg/min) in
//! response to a meal schedule. Models implement [`engine::MealModel`] and are
//! simulated by the functions in [`engine`].

pub mod catalog;
pub mod cstr_pfr;
pub mod delay;
pub mod discretization;
pub mod engine;
pub mod error;
pub mod kinetics;
pub mod linearity;
pub mod models;
pub mod scenario;

pub use error::{Error, Result};

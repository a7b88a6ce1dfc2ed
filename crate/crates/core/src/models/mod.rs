//! Built-in meal models with their published default parameters.

pub mod alskar;
pub mod dalla_man;
pub mod hovorka;
pub(crate) mod params;
pub mod simo;

pub use alskar::{Alskar, AlskarParams};
pub use dalla_man::{dalla_man_kempt, DallaMan, DallaManParams};
pub use hovorka::{hovorka, hovorka_impulse_response, hovorka_realization, HovorkaParams};
pub use params::{nearest_key, ParameterSet};
pub use simo::{simo, simo_realization, SimoParams};

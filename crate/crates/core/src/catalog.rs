//! Model identifiers, default parameters and construction with overrides.

use std::fmt;
use std::str::FromStr;

use crate::cstr_pfr::{CstrPfr, CstrPfrParams, PylorusMode};
use crate::discretization::Scheme;
use crate::engine::MealModel;
use crate::error::{Error, Result};
use crate::models::{
    hovorka, nearest_key, simo, Alskar, AlskarParams, DallaMan, DallaManParams, HovorkaParams,
    ParameterSet, SimoParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    Hovorka,
    DallaMan,
    Simo,
    Alskar,
    CstrPfrOpen,
    CstrPfrMoxon,
    CstrPfrAlskar,
}

/// Structural summary shown by `list-models`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelInfo {
    pub id: ModelId,
    pub equations: &'static str,
    pub states: String,
    pub linear: bool,
    pub linear_in_d: bool,
}

impl ModelId {
    pub const ALL: [ModelId; 7] = [
        ModelId::Hovorka,
        ModelId::DallaMan,
        ModelId::Simo,
        ModelId::Alskar,
        ModelId::CstrPfrOpen,
        ModelId::CstrPfrMoxon,
        ModelId::CstrPfrAlskar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Hovorka => "hovorka",
            ModelId::DallaMan => "dalla_man",
            ModelId::Simo => "simo",
            ModelId::Alskar => "alskar",
            ModelId::CstrPfrOpen => "cstr_pfr_open",
            ModelId::CstrPfrMoxon => "cstr_pfr_moxon",
            ModelId::CstrPfrAlskar => "cstr_pfr_alskar",
        }
    }

    pub fn is_cstr_pfr(self) -> bool {
        matches!(
            self,
            ModelId::CstrPfrOpen | ModelId::CstrPfrMoxon | ModelId::CstrPfrAlskar
        )
    }

    fn pylorus(self) -> Option<PylorusMode> {
        match self {
            ModelId::CstrPfrOpen => Some(PylorusMode::open()),
            ModelId::CstrPfrMoxon => Some(PylorusMode::moxon()),
            ModelId::CstrPfrAlskar => Some(PylorusMode::alskar()),
            _ => None,
        }
    }

    pub fn info(self) -> ModelInfo {
        let (equations, states, linear, linear_in_d) = match self {
            ModelId::Hovorka => ("ODEs", "2", true, true),
            ModelId::DallaMan => ("ODEs", "3", false, true),
            ModelId::Simo => ("ODEs", "4", true, true),
            ModelId::Alskar => ("ODEs", "4", false, false),
            ModelId::CstrPfrOpen => ("ODEs and PDEs", "1 + M", true, true),
            ModelId::CstrPfrMoxon | ModelId::CstrPfrAlskar => {
                ("ODEs and PDEs", "1 + M", false, false)
            }
        };
        ModelInfo {
            id: self,
            equations,
            states: states.to_string(),
            linear,
            linear_in_d,
        }
    }

    /// Parameter keys accepted as overrides.
    pub fn parameter_keys(self) -> Vec<&'static str> {
        match self {
            ModelId::Hovorka => HovorkaParams::keys().to_vec(),
            ModelId::DallaMan => DallaManParams::keys().to_vec(),
            ModelId::Simo => SimoParams::keys().to_vec(),
            ModelId::Alskar => AlskarParams::keys().to_vec(),
            _ => {
                let mut k = CstrPfrParams::keys().to_vec();
                k.extend(self.pylorus().expect("cstr-pfr").keys());
                k
            }
        }
    }

    pub fn default_parameters(self) -> Vec<(&'static str, f64)> {
        match self {
            ModelId::Hovorka => HovorkaParams::default().entries(),
            ModelId::DallaMan => DallaManParams::default().entries(),
            ModelId::Simo => SimoParams::default().entries(),
            ModelId::Alskar => AlskarParams::default().entries(),
            _ => {
                let mut e = CstrPfrParams::default().entries();
                e.extend(self.pylorus().expect("cstr-pfr").entries());
                e
            }
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == key)
            .ok_or_else(|| {
                let ids: Vec<&str> = ModelId::ALL.iter().map(|m| m.as_str()).collect();
                Error::UnknownModel {
                    suggestion: nearest_key(&key, &ids),
                    id: s.to_string(),
                }
            })
    }
}

/// A model id with parameter overrides and, for CSTR-PFR, the spatial
/// discretization.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub id: ModelId,
    pub overrides: Vec<(String, f64)>,
    pub scheme: Scheme,
    pub resolution: Option<usize>,
}

impl ModelSpec {
    pub fn new(id: ModelId) -> Self {
        Self {
            id,
            overrides: Vec::new(),
            scheme: Scheme::FiniteVolume,
            resolution: None,
        }
    }

    pub fn with_override(mut self, key: impl Into<String>, value: f64) -> Self {
        self.overrides.push((key.into(), value));
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme, resolution: Option<usize>) -> Self {
        self.scheme = scheme;
        self.resolution = resolution;
        self
    }

    pub fn resolution(&self) -> usize {
        self.resolution
            .unwrap_or_else(|| self.scheme.default_resolution())
    }

    /// Check every override key without building the model.
    pub fn check_keys(&self) -> Result<()> {
        let keys = self.id.parameter_keys();
        for (k, _) in &self.overrides {
            let k = k.to_ascii_lowercase();
            if !keys.contains(&k.as_str()) {
                return Err(Error::UnknownParameter {
                    section: self.id.as_str().to_string(),
                    suggestion: nearest_key(&k, &keys),
                    key: k,
                });
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Box<dyn MealModel>> {
        self.check_keys()?;
        let ov = || self.overrides.iter().map(|(k, v)| (k.as_str(), *v));
        Ok(match self.id {
            ModelId::Hovorka => Box::new(hovorka(&HovorkaParams::default().with_overrides(ov())?)?),
            ModelId::DallaMan => Box::new(DallaMan::new(
                DallaManParams::default().with_overrides(ov())?,
            )?),
            ModelId::Simo => Box::new(simo(&SimoParams::default().with_overrides(ov())?)?),
            ModelId::Alskar => {
                Box::new(Alskar::new(AlskarParams::default().with_overrides(ov())?)?)
            }
            _ => Box::new(self.build_cstr_pfr()?),
        })
    }

    /// The concrete CSTR-PFR model, for callers that need its diagnostics.
    pub fn build_cstr_pfr(&self) -> Result<CstrPfr> {
        let mut mode = self.id.pylorus().ok_or_else(|| {
            Error::invalid("model", format!("`{}` is not a CSTR-PFR model", self.id))
        })?;
        self.check_keys()?;
        let mut params = CstrPfrParams::default();
        for (k, v) in &self.overrides {
            let k = k.to_ascii_lowercase();
            if !params.set_field(&k, *v) {
                mode.set(self.id.as_str(), &k, *v)?;
            }
        }
        params.validate()?;
        CstrPfr::new(params, mode, self.scheme, self.resolution())
    }
}

//! TOML scenario files.
//!
//! ```toml
//! [scenario]
//! models = ["hovorka", "cstr_pfr_open"]   # or: model = "hovorka"
//! horizon = 720            # min
//! output_interval = 1      # min
//! per_kg = true
//! scheme = "fv"            # CSTR-PFR only: fv | sg
//! resolution = 100
//! carbs = [45, 90, 180]    # g, used by `compare`
//! meal_duration = 0        # min, used by `compare`; 0 = impulse
//!
//! [[meal]]
//! time = 0                 # min
//! carbs = 90               # g
//! duration = 0             # min
//!
//! [hovorka]
//! tau_d = 40
//! ```

use std::path::Path;

use toml::{Table, Value};

use crate::catalog::{ModelId, ModelSpec};
use crate::discretization::Scheme;
use crate::engine::{MealEvent, MealSchedule};
use crate::error::{Error, Result};
use crate::models::nearest_key;

pub const MG_PER_G: f64 = 1000.0;

const SCENARIO_KEYS: &[&str] = &[
    "model",
    "models",
    "horizon",
    "output_interval",
    "per_kg",
    "scheme",
    "resolution",
    "carbs",
    "meal_duration",
];
const MEAL_KEYS: &[&str] = &["time", "carbs", "duration"];

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub models: Vec<ModelSpec>,
    /// Carbohydrate masses in mg.
    pub meals: MealSchedule,
    pub horizon: f64,
    pub output_interval: f64,
    pub per_kg: bool,
    /// Meal sizes for comparisons, mg.
    pub carbs: Vec<f64>,
    pub meal_duration: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            models: ModelId::ALL.into_iter().map(ModelSpec::new).collect(),
            meals: MealSchedule::single(MealEvent::impulse(0.0, 90.0 * MG_PER_G)),
            horizon: 720.0,
            output_interval: 1.0,
            per_kg: false,
            carbs: vec![45.0 * MG_PER_G, 90.0 * MG_PER_G, 180.0 * MG_PER_G],
            meal_duration: 0.0,
        }
    }
}

impl ScenarioConfig {
    /// Set the discretization of every CSTR-PFR model.
    pub fn set_discretization(&mut self, scheme: Option<Scheme>, resolution: Option<usize>) {
        for m in self.models.iter_mut().filter(|m| m.id.is_cstr_pfr()) {
            if let Some(s) = scheme {
                if s != m.scheme {
                    m.resolution = None;
                }
                m.scheme = s;
            }
            if resolution.is_some() {
                m.resolution = resolution;
            }
        }
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Config { location, message } => Error::Config {
            location: format!("{}:{location}", path.display()),
            message,
        },
        other => other,
    })
}

/// 1-based line of `key` inside `[section]` (or of the section header).
fn line_of(text: &str, section: &str, key: Option<&str>) -> Option<usize> {
    let mut in_section = section.is_empty();
    for (i, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.starts_with('[') {
            let name = l.trim_matches(|c| c == '[' || c == ']').trim();
            in_section = name == section;
            if in_section && key.is_none() {
                return Some(i + 1);
            }
            continue;
        }
        if let (true, Some(k)) = (in_section, key) {
            if l.split('=').next().map(str::trim) == Some(k) {
                return Some(i + 1);
            }
        }
    }
    None
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, section: &str, key: Option<&str>, message: impl Into<String>) -> Error {
        let field = match key {
            Some(k) if section.is_empty() => k.to_string(),
            Some(k) => format!("[{section}].{k}"),
            None => format!("[{section}]"),
        };
        let location = match line_of(self.text, section, key) {
            Some(n) => format!("line {n}: {field}"),
            None => field,
        };
        Error::Config {
            location,
            message: message.into(),
        }
    }

    fn number(&self, section: &str, key: &str, v: &Value) -> Result<f64> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            other => Err(self.err(
                section,
                Some(key),
                format!("expected a number, found {}", other.type_str()),
            )),
        }
    }

    fn unknown(&self, section: &str, key: &str, known: &[&str]) -> Error {
        let hint = nearest_key(key, known)
            .map(|s| format!("; did you mean `{s}`?"))
            .unwrap_or_default();
        self.err(section, Some(key), format!("unknown key `{key}`{hint}"))
    }
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        let location = e
            .span()
            .map(|s| format!("line {}", text[..s.start].lines().count().max(1)))
            .unwrap_or_else(|| "toml".into());
        Error::Config {
            location,
            message: e.message().to_string(),
        }
    })?;
    let cx = Ctx { text };
    let mut cfg = ScenarioConfig::default();
    let mut scheme = None;
    let mut resolution = None;
    let mut model_ids: Option<Vec<ModelId>> = None;

    if let Some(v) = table.get("scenario") {
        let Value::Table(s) = v else {
            return Err(cx.err("", Some("scenario"), "expected a table"));
        };
        for (k, v) in s {
            let sec = "scenario";
            match k.as_str() {
                "model" => {
                    let id = v
                        .as_str()
                        .ok_or_else(|| cx.err(sec, Some(k), "expected a model id string"))?;
                    model_ids = Some(vec![parse_model(&cx, sec, k, id)?]);
                }
                "models" => {
                    let arr = v
                        .as_array()
                        .ok_or_else(|| cx.err(sec, Some(k), "expected an array of model ids"))?;
                    let ids = arr
                        .iter()
                        .map(|x| {
                            let id = x
                                .as_str()
                                .ok_or_else(|| cx.err(sec, Some(k), "expected model id strings"))?;
                            parse_model(&cx, sec, k, id)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if ids.is_empty() {
                        return Err(cx.err(sec, Some(k), "at least one model is required"));
                    }
                    model_ids = Some(ids);
                }
                "horizon" => cfg.horizon = cx.number(sec, k, v)?,
                "output_interval" => cfg.output_interval = cx.number(sec, k, v)?,
                "meal_duration" => cfg.meal_duration = cx.number(sec, k, v)?,
                "per_kg" => {
                    cfg.per_kg = v
                        .as_bool()
                        .ok_or_else(|| cx.err(sec, Some(k), "expected true or false"))?
                }
                "scheme" => {
                    let s = v
                        .as_str()
                        .ok_or_else(|| cx.err(sec, Some(k), "expected `fv` or `sg`"))?;
                    scheme = Some(
                        s.parse::<Scheme>()
                            .map_err(|e| cx.err(sec, Some(k), e.to_string()))?,
                    );
                }
                "resolution" => {
                    let r = v.as_integer().filter(|&r| r > 0);
                    resolution = Some(
                        r.ok_or_else(|| cx.err(sec, Some(k), "expected a positive integer"))?
                            as usize,
                    );
                }
                "carbs" => {
                    let arr = v
                        .as_array()
                        .ok_or_else(|| cx.err(sec, Some(k), "expected an array of grams"))?;
                    cfg.carbs = arr
                        .iter()
                        .map(|x| Ok(cx.number(sec, k, x)? * MG_PER_G))
                        .collect::<Result<_>>()?;
                    if cfg.carbs.iter().any(|&c| !(c >= 0.0)) {
                        return Err(cx.err(
                            sec,
                            Some(k),
                            "carbohydrate masses must be non-negative",
                        ));
                    }
                }
                other => return Err(cx.unknown(sec, other, SCENARIO_KEYS)),
            }
        }
    }
    if !(cfg.horizon > 0.0) {
        return Err(cx.err("scenario", Some("horizon"), "horizon must be positive"));
    }
    if !(cfg.output_interval > 0.0) {
        return Err(cx.err(
            "scenario",
            Some("output_interval"),
            "output interval must be positive",
        ));
    }
    if !(cfg.meal_duration >= 0.0) {
        return Err(cx.err(
            "scenario",
            Some("meal_duration"),
            "meal duration must be non-negative",
        ));
    }

    if let Some(v) = table.get("meal") {
        let arr = v
            .as_array()
            .ok_or_else(|| cx.err("", Some("meal"), "use [[meal]] tables"))?;
        let mut events = Vec::with_capacity(arr.len());
        for item in arr {
            let t = item
                .as_table()
                .ok_or_else(|| cx.err("meal", None, "expected a table"))?;
            let mut e = MealEvent::impulse(0.0, 0.0);
            for (k, v) in t {
                match k.as_str() {
                    "time" => e.time = cx.number("meal", k, v)?,
                    "carbs" => e.carbs = cx.number("meal", k, v)? * MG_PER_G,
                    "duration" => e.duration = cx.number("meal", k, v)?,
                    other => return Err(cx.unknown("meal", other, MEAL_KEYS)),
                }
            }
            events.push(e);
        }
        cfg.meals = MealSchedule::new(events).map_err(|e| cx.err("meal", None, e.to_string()))?;
    }

    let ids = model_ids.unwrap_or_else(|| ModelId::ALL.to_vec());
    cfg.models = ids.iter().map(|&id| ModelSpec::new(id)).collect();

    let mut sections: Vec<&str> = vec!["scenario", "meal"];
    sections.extend(ModelId::ALL.iter().map(|m| m.as_str()));
    for (name, v) in &table {
        if name == "scenario" || name == "meal" {
            continue;
        }
        let id: ModelId = match name.parse() {
            Ok(id) => id,
            Err(_) => {
                let hint = nearest_key(name, &sections)
                    .map(|s| format!("; did you mean `[{s}]`?"))
                    .unwrap_or_default();
                return Err(cx.err(name, None, format!("unknown section `{name}`{hint}")));
            }
        };
        let Value::Table(t) = v else {
            return Err(cx.err("", Some(name), "expected a table of parameter overrides"));
        };
        let keys = id.parameter_keys();
        for (k, v) in t {
            if !keys.contains(&k.to_ascii_lowercase().as_str()) {
                return Err(cx.unknown(name, k, &keys));
            }
            let x = cx.number(name, k, v)?;
            for m in cfg.models.iter_mut().filter(|m| m.id == id) {
                m.overrides.push((k.to_ascii_lowercase(), x));
            }
        }
    }
    cfg.set_discretization(scheme, resolution);
    for m in &cfg.models {
        if let Err(e) = m.build() {
            return Err(cx.err(m.id.as_str(), None, e.to_string()));
        }
    }
    Ok(cfg)
}

fn parse_model(cx: &Ctx, section: &str, key: &str, id: &str) -> Result<ModelId> {
    id.parse()
        .map_err(|e: Error| cx.err(section, Some(key), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg =
            parse_config("[scenario]\nmodel = \"hovorka\"\n\n[[meal]]\ntime = 0\ncarbs = 90\n")
                .unwrap();
        assert_eq!(cfg.models, vec![ModelSpec::new(ModelId::Hovorka)]);
        assert_eq!(cfg.meals.events(), &[MealEvent::impulse(0.0, 90_000.0)]);
        assert_eq!(cfg.horizon, 720.0);
    }

    #[test]
    fn misspelled_parameter() {
        let text = "[scenario]\nmodel = \"hovorka\"\n\n[hovorka]\ntau_d_ = 30\n";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("line 5"), "{err}");
        assert!(err.contains("did you mean `tau_d`"), "{err}");
    }

    #[test]
    fn override_reaches_realization() {
        let cfg = parse_config("[scenario]\nmodel = \"hovorka\"\n[hovorka]\nf = 0.5\n").unwrap();
        let m = cfg.models[0].build().unwrap();
        assert!((m.linear_realization().unwrap().c[(0, 1)] - 0.5 / 40.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse_config("[scenario]\nhorizon = -5\n").is_err());
        assert!(parse_config("[scenario]\nmodel = \"hovorca\"\n")
            .unwrap_err()
            .to_string()
            .contains("hovorka"));
        assert!(parse_config("[hovorkaa]\nf = 1\n")
            .unwrap_err()
            .to_string()
            .contains("[hovorka]"));
        assert!(parse_config("[scenario]\nmodels = []\n").is_err());
        assert!(parse_config("[scenario\n")
            .unwrap_err()
            .to_string()
            .contains("line 1"));
        assert!(parse_config("[hovorka]\nf = -1\n").is_err());
    }

    #[test]
    fn discretization_applies_to_cstr_only() {
        let cfg = parse_config(
            "[scenario]\nmodels = [\"simo\", \"cstr_pfr_moxon\"]\nscheme = \"sg\"\nresolution = 16\n[cstr_pfr_moxon]\nsigma = 0.2\n",
        )
        .unwrap();
        assert_eq!(cfg.models[0], ModelSpec::new(ModelId::Simo));
        assert_eq!(cfg.models[1].scheme, Scheme::SpectralGalerkin);
        assert_eq!(cfg.models[1].resolution(), 16);
        assert_eq!(cfg.models[1].overrides, vec![("sigma".to_string(), 0.2)]);
    }
}

use crate::error::{Error, Result};

/// Named, overridable parameter set. Keys are the snake-case symbols of the
/// published parameter tables (`tau_d`, `k_max`, `ig_d50`, ...), matched
/// case-insensitively.
pub trait ParameterSet: Sized {
    const SECTION: &'static str;

    fn keys() -> &'static [&'static str];

    fn get(&self, key: &str) -> Option<f64>;

    fn set_field(&mut self, key: &str, value: f64) -> bool;

    fn validate(&self) -> Result<()>;

    fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let key = key.to_ascii_lowercase();
        if self.set_field(&key, value) {
            Ok(())
        } else {
            Err(Error::UnknownParameter {
                section: Self::SECTION.to_string(),
                suggestion: nearest_key(&key, Self::keys()),
                key,
            })
        }
    }

    /// Apply overrides and validate the result.
    fn with_overrides<'a>(
        mut self,
        overrides: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<Self> {
        for (k, v) in overrides {
            self.set(k, v)?;
        }
        self.validate()?;
        Ok(self)
    }

    fn entries(&self) -> Vec<(&'static str, f64)> {
        Self::keys()
            .iter()
            .map(|k| (*k, self.get(k).expect("listed key")))
            .collect()
    }
}

/// Closest candidate by edit distance, if reasonably close.
pub fn nearest_key(key: &str, candidates: &[&str]) -> Option<String> {
    candidates
        .iter()
        .map(|c| (strsim::damerau_levenshtein(key, c), *c))
        .min()
        .filter(|(d, c)| *d <= 2.max(c.len() / 3))
        .map(|(_, c)| c.to_string())
}

pub(crate) fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

pub(crate) fn fraction(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must lie in (0, 1], got {v}")))
    }
}

macro_rules! parameter_set {
    ($ty:ty, $section:literal, { $($key:literal => $field:ident),* $(,)? }) => {
        impl $crate::models::ParameterSet for $ty {
            const SECTION: &'static str = $section;

            fn keys() -> &'static [&'static str] {
                &[$($key),*]
            }

            fn get(&self, key: &str) -> Option<f64> {
                match key.to_ascii_lowercase().as_str() {
                    $($key => Some(self.$field),)*
                    _ => None,
                }
            }

            fn set_field(&mut self, key: &str, value: f64) -> bool {
                match key {
                    $($key => { self.$field = value; true })*
                    _ => false,
                }
            }

            fn validate(&self) -> $crate::error::Result<()> {
                self.check()
            }
        }
    };
}
pub(crate) use parameter_set;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suggestion_for_typo() {
        assert_eq!(
            nearest_key("tau_d_", &["a_g", "tau_d", "f", "bw"]).as_deref(),
            Some("tau_d")
        );
        assert_eq!(
            nearest_key("kmax", &["k_max", "k_min"]).as_deref(),
            Some("k_max")
        );
        assert_eq!(nearest_key("completely_unrelated", &["f", "bw"]), None);
    }
}

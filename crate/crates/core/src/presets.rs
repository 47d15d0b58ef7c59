//! Summary-statistics input: the `key = value` file format and named presets.
//!
//! Recognised keys (case-sensitive):
//!
//! | key | meaning |
//! |-----|---------|
//! | `N`, `n` | population and sample size |
//! | `y_bar`, `x_bar`, `z_bar` | means |
//! | `c_y`, `c_x`, `c_z` | coefficients of variation |
//! | `rho_yx`, `rho_yz`, `rho_xz` | correlations |
//! | `w_bar`, `c_w`, `rho_yw` | first-component mean, CV and correlation with `y` |
//! | `s_w` | component standard deviation (optional; defaults to `c_w·|w_bar|`) |
//! | `beta2_x`, `beta2_z`, `beta2_w` | kurtosis, only needed for `psi = kurtosis` |
//!
//! Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pca::ComponentSummary;
use crate::population::{Kurtosis, PopulationSummary, SummaryStatistics};

pub const MADDALA_LAHIRI: &str = "maddala-lahiri";

/// Imports/GDP/consumption dataset (N = 18, n = 10) as summary statistics.
pub const MADDALA_LAHIRI_TEXT: &str = "\
# Y: imports, X: gross domestic product, Z: consumption
# (millions of New Francs at 1959 prices)
N = 18
n = 10
y_bar = 30.078
x_bar = 237.517
z_bar = 167.378
w_bar = 0.0015
c_y = 0.4033
c_x = 0.2599
c_z = 0.2414
c_w = 914.8534
rho_yx = 0.9842
rho_yz = 0.9848
rho_xz = 0.9989
rho_yw = 0.9847
";

const REQUIRED: [&str; 11] = [
    "N", "n", "y_bar", "x_bar", "z_bar", "c_y", "c_x", "c_z", "rho_yx", "rho_yz", "rho_xz",
];
const COMPONENT: [&str; 3] = ["w_bar", "c_w", "rho_yw"];
const OPTIONAL: [&str; 4] = ["s_w", "beta2_x", "beta2_z", "beta2_w"];

/// Parsed `key = value` summary, not yet validated for completeness.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SummaryInput {
    values: BTreeMap<&'static str, f64>,
}

fn known_key(key: &str) -> Option<&'static str> {
    REQUIRED
        .iter()
        .chain(COMPONENT.iter())
        .chain(OPTIONAL.iter())
        .find(|k| **k == key)
        .copied()
}

impl SummaryInput {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config {
                line: i + 1,
                message,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let key = known_key(k.trim()).ok_or_else(|| err(format!("unknown key `{}`", k.trim())))?;
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|_| err(format!("`{}` is not a number", v.trim())))?;
            if values.insert(key, value).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { values })
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            MADDALA_LAHIRI => Some(Self::parse(MADDALA_LAHIRI_TEXT).expect("preset parses")),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// Keys absent from the input; component keys only if `with_component`.
    pub fn missing(&self, with_component: bool) -> Vec<&'static str> {
        let extra: &[&'static str] = if with_component { &COMPONENT } else { &[] };
        REQUIRED
            .iter()
            .chain(extra)
            .filter(|k| !self.values.contains_key(*k))
            .copied()
            .collect()
    }

    /// Validates and converts. Component fields become mandatory when
    /// `require_component` is set, and are otherwise used if all present.
    pub fn to_summary(&self, require_component: bool) -> Result<PopulationSummary> {
        let missing = self.missing(require_component);
        if !missing.is_empty() {
            return Err(Error::IncompleteSummary(missing));
        }
        let get = |k: &str| self.values[k];
        let count = |k: &'static str| -> Result<usize> {
            let v = get(k);
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(Error::Config {
                    line: 0,
                    message: format!("`{k}` must be a nonnegative integer, got {v}"),
                })
            }
        };
        let has_component = COMPONENT.iter().all(|k| self.values.contains_key(k));
        let component = has_component.then(|| {
            let mut c = ComponentSummary::from_cv(get("w_bar"), get("c_w"), get("rho_yw"));
            if let Some(s_w) = self.get("s_w") {
                c.s_w = s_w;
            }
            c
        });
        let mut summary = PopulationSummary::from_statistics(&SummaryStatistics {
            population_size: count("N")?,
            sample_size: count("n")?,
            y_bar: get("y_bar"),
            x_bar: get("x_bar"),
            z_bar: get("z_bar"),
            c_y: get("c_y"),
            c_x: get("c_x"),
            c_z: get("c_z"),
            rho_yx: get("rho_yx"),
            rho_yz: get("rho_yz"),
            rho_xz: get("rho_xz"),
            component,
        })?;
        summary.kurtosis = Kurtosis {
            x: self.get("beta2_x"),
            z: self.get("beta2_z"),
            w: self.get("beta2_w"),
        };
        Ok(summary)
    }
}

/// The imports/GDP/consumption summary as a [`PopulationSummary`].
pub fn maddala_lahiri() -> PopulationSummary {
    SummaryInput::preset(MADDALA_LAHIRI)
        .expect("preset exists")
        .to_summary(true)
        .expect("preset is complete")
}

//! Scenario configuration: one JSON document describing a full experiment.
//!
//! The same document drives the command-line front end and the browser demo.
//! Leaf fields can be overridden with dotted paths ("grid.n=4096"), which is
//! how the CLI's repeatable `--set` flag works.

use serde::{Deserialize, Serialize};

use crate::dynamics::{Grid, InitialData, Nonlinearity};
use crate::env::{Coefficient, LeastMeanEstimate};
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::speed::{check_assumptions, minimize_speed, AssumptionReport, SpeedCurve};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearitySpec {
    Logistic,
    LogisticH { h: f64 },
}

impl NonlinearitySpec {
    pub fn build(&self, mu: &Coefficient) -> Result<Nonlinearity> {
        match self {
            NonlinearitySpec::Logistic => Nonlinearity::logistic(mu.clone()),
            NonlinearitySpec::LogisticH { h } => Nonlinearity::logistic_h(mu.clone(), *h),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.x_min, self.x_max, self.n)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct LeastMeanParams {
    pub t_max: f64,
    pub s_max: f64,
}

impl Default for LeastMeanParams {
    fn default() -> Self {
        LeastMeanParams { t_max: 128.0, s_max: 16.0 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Assumptions,
    Speeds,
    Simulate,
    Verify,
    Persistence,
}

fn default_thresholds() -> Vec<f64> {
    vec![0.5]
}
fn default_stride() -> usize {
    20
}
fn default_seed() -> u64 {
    1
}
fn default_eta_fraction() -> f64 {
    0.1
}
fn default_tolerance_fraction() -> f64 {
    0.05
}
fn default_level_tolerance() -> f64 {
    0.05
}
fn default_lambda_grid() -> usize {
    256
}
fn default_checks() -> Vec<CheckKind> {
    vec![CheckKind::Assumptions, CheckKind::Speeds, CheckKind::Simulate]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub kernel: KernelSpec,
    pub coefficient: Coefficient,
    pub nonlinearity: NonlinearitySpec,
    pub initial: InitialData,
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// η = eta_fraction · c* in the upper-bound checks.
    #[serde(default = "default_eta_fraction")]
    pub eta_fraction: f64,
    /// Slope tolerance = tolerance_fraction · c*.
    #[serde(default = "default_tolerance_fraction")]
    pub tolerance_fraction: f64,
    /// Saturation tolerance for the inner check (u >= 1 − level_tolerance).
    #[serde(default = "default_level_tolerance")]
    pub level_tolerance: f64,
    #[serde(default)]
    pub least_mean: LeastMeanParams,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: usize,
    #[serde(default)]
    pub snapshots: bool,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
    #[serde(default)]
    pub output: Option<String>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(text)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        self.initial.validate()?;
        self.grid.build()?;
        if !(self.dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if self.t_end < 0.0 {
            return Err(Error::InvalidInput(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        for &theta in &self.thresholds {
            if !(theta > 0.0 && theta < 1.0) {
                return Err(Error::InvalidInput(format!("threshold {theta} outside (0,1)")));
            }
        }
        Ok(())
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity> {
        self.nonlinearity.build(&self.coefficient)
    }
}

/// Apply dotted-path overrides ("grid.n=4096", "kernel.scale=2") to a raw
/// JSON scenario document. Values parse as JSON when possible, else as
/// strings.
pub fn apply_overrides(doc: &mut serde_json::Value, sets: &[String]) -> Result<()> {
    for set in sets {
        let (path, raw) = set.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("override '{set}' is not of the form key=value"))
        })?;
        let value: serde_json::Value = match raw.parse::<serde_json::Value>() {
            Ok(v) => v,
            Err(_) => serde_json::Value::String(raw.to_string()),
        };
        let mut cursor = &mut *doc;
        let parts: Vec<&str> = path.split('.').collect();
        for (i, part) in parts.iter().enumerate() {
            let last = i == parts.len() - 1;
            if last {
                match cursor {
                    serde_json::Value::Object(map) => {
                        map.insert(part.to_string(), value.clone());
                    }
                    serde_json::Value::Array(arr) => {
                        let idx: usize = part.parse().map_err(|_| {
                            Error::InvalidInput(format!("bad array index '{part}' in '{path}'"))
                        })?;
                        if idx >= arr.len() {
                            return Err(Error::InvalidInput(format!(
                                "index {idx} out of bounds in '{path}'"
                            )));
                        }
                        arr[idx] = value.clone();
                    }
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "cannot set '{path}': parent is not an object"
                        )))
                    }
                }
            } else {
                cursor = match cursor {
                    serde_json::Value::Object(map) => map
                        .entry(part.to_string())
                        .or_insert_with(|| serde_json::Value::Object(Default::default())),
                    serde_json::Value::Array(arr) => {
                        let idx: usize = part.parse().map_err(|_| {
                            Error::InvalidInput(format!("bad array index '{part}' in '{path}'"))
                        })?;
                        arr.get_mut(idx).ok_or_else(|| {
                            Error::InvalidInput(format!("index {idx} out of bounds in '{path}'"))
                        })?
                    }
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "cannot descend into '{part}' in '{path}'"
                        )))
                    }
                };
            }
        }
    }
    Ok(())
}

/// Prepared analysis objects shared by every front end.
pub struct Lab {
    pub scenario: Scenario,
    pub nl: Nonlinearity,
    pub least_mean: LeastMeanEstimate,
    pub assumptions: AssumptionReport,
    /// Present when the least mean exceeds the kernel mass.
    pub curve: Option<SpeedCurve>,
}

impl Lab {
    pub fn prepare(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let nl = scenario.nonlinearity()?;
        let least_mean = scenario
            .coefficient
            .least_mean(scenario.least_mean.t_max, scenario.least_mean.s_max)?;
        let assumptions = check_assumptions(&scenario.kernel, &scenario.coefficient, &least_mean);
        let curve = if least_mean.value > scenario.kernel.mass() {
            Some(minimize_speed(&scenario.kernel, least_mean.value, scenario.lambda_grid)?)
        } else {
            None
        };
        Ok(Lab { scenario, nl, least_mean, assumptions, curve })
    }

    /// The speed curve, or the assumption-violation error naming the gap.
    pub fn curve(&self) -> Result<&SpeedCurve> {
        self.curve.as_ref().ok_or_else(|| {
            Error::AssumptionViolation(format!(
                "least mean of the growth rate must exceed the kernel mass: {} <= {}",
                self.least_mean.value,
                self.scenario.kernel.mass()
            ))
        })
    }
}

/// Reference configuration: unit Gaussian kernel, constant growth rate 2,
/// compact bump released well left of a wide domain.
pub fn reference_scenario() -> Scenario {
    Scenario {
        name: "reference".into(),
        kernel: KernelSpec::gaussian(1.0, 1.0).expect("valid"),
        coefficient: Coefficient::constant(2.0),
        nonlinearity: NonlinearitySpec::Logistic,
        initial: InitialData::compact_bump(10.0, 0.5),
        grid: GridSpec { x_min: -100.0, x_max: 500.0, n: 8192 },
        dt: 0.05,
        t_end: 120.0,
        thresholds: default_thresholds(),
        stride: default_stride(),
        seed: default_seed(),
        eta_fraction: default_eta_fraction(),
        tolerance_fraction: default_tolerance_fraction(),
        level_tolerance: default_level_tolerance(),
        least_mean: LeastMeanParams::default(),
        lambda_grid: default_lambda_grid(),
        snapshots: false,
        checks: default_checks(),
        output: None,
    }
}

//! Named, seeded scenarios with canonical JSON reports.

mod scenarios;

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use scenarios::SCENARIOS;

pub const SCHEMA_VERSION: u32 = 1;

/// Seed used when neither `--seed` nor `PREQUANT_SEED` is given.
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Clone, Copy, Debug)]
pub struct ScenarioInfo {
    pub name: &'static str,
    pub summary: &'static str,
    /// Overridable parameters with their defaults.
    pub defaults: &'static [(&'static str, &'static str)],
    run: fn(&mut Run) -> Result<()>,
}

/// Scenarios in a fixed order.
pub fn list_scenarios() -> Vec<ScenarioInfo> {
    SCENARIOS.to_vec()
}

fn find(name: &str) -> Result<ScenarioInfo> {
    SCENARIOS
        .iter()
        .find(|s| s.name == name)
        .copied()
        .ok_or_else(|| Error::UnknownScenario(name.into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `0` when every check passes, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "seed": self.seed,
            "params": self.params,
            "checks": self.checks,
            "passed": self.passed(),
            "data": self.data,
        })
    }
}

/// Canonical bytes: sorted keys, two-space indentation, trailing newline.
pub fn emit_report(report: &Report) -> Vec<u8> {
    emit_value(&report.to_json())
}

/// The schema skeleton of a run with no results.
pub fn empty_report() -> Vec<u8> {
    emit_value(&json!({
        "schema_version": SCHEMA_VERSION,
        "scenario": null,
        "seed": null,
        "params": {},
        "checks": [],
        "passed": true,
        "data": {},
    }))
}

fn emit_value(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("JSON values serialize");
    out.push(b'\n');
    out
}

/// Parameter access for a running scenario.
pub struct Run {
    seed: u64,
    params: BTreeMap<String, String>,
    checks: Vec<Check>,
    data: BTreeMap<String, Value>,
}

impl Run {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self
            .params
            .get(key)
            .ok_or_else(|| Error::InvalidOverride(format!("no parameter `{key}`")))?;
        raw.parse()
            .map_err(|e| Error::InvalidOverride(format!("{key}={raw}: {e}")))
    }

    pub fn raw(&self, key: &str) -> &str {
        self.params.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: Value) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail,
        });
    }

    pub fn record(&mut self, key: &str, v: Value) {
        self.data.insert(key.into(), v);
    }
}

/// Runs `name` with the given overrides, which must name known parameters.
pub fn run_scenario(name: &str, overrides: &BTreeMap<String, String>, seed: u64) -> Result<Report> {
    let info = find(name)?;
    let mut params: BTreeMap<String, String> = info
        .defaults
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    for (k, v) in overrides {
        match params.get_mut(k) {
            Some(slot) => *slot = v.clone(),
            None => {
                let known: Vec<&str> = info.defaults.iter().map(|(k, _)| *k).collect();
                return Err(Error::InvalidOverride(format!(
                    "`{k}` is not a parameter of {name} (known: {known:?})"
                )));
            }
        }
    }
    let mut run = Run {
        seed,
        params,
        checks: Vec::new(),
        data: BTreeMap::new(),
    };
    (info.run)(&mut run)?;
    Ok(Report {
        scenario: name.into(),
        seed,
        params: run.params,
        checks: run.checks,
        data: run.data,
    })
}

/// Parses `key=value` overrides.
pub fn parse_overrides(items: &[String]) -> Result<BTreeMap<String, String>> {
    items
        .iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::InvalidOverride(format!("expected key=value, got `{s}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    #[test]
    fn listing() {
        let names: Vec<&str> = list_scenarios().iter().map(|s| s.name).collect();
        for n in ["classical-poisson-r2", "string-su2", "torus-prequantization"] {
            assert!(names.contains(&n));
        }
        let mut sorted = names.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn overrides_and_errors() {
        assert!(matches!(
            run_scenario("nope", &BTreeMap::new(), 1),
            Err(Error::UnknownScenario(_))
        ));
        let bad = parse_overrides(&["q=1".into()]).unwrap();
        assert!(matches!(
            run_scenario("torus-prequantization", &bad, 1),
            Err(Error::InvalidOverride(_))
        ));
        assert!(parse_overrides(&["novalue".into()]).is_err());
        let half = parse_overrides(&["k=1/2".into()]).unwrap();
        let r = run_scenario("torus-prequantization", &half, 1).unwrap();
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn canonical_rendering() {
        let s = &Scalar::ratio(1, 2) * &Scalar::tau();
        assert_eq!(serde_json::to_value(&s).unwrap(), json!("1/2*tau^1"));
        let skeleton: Value = serde_json::from_slice(&empty_report()).unwrap();
        assert_eq!(skeleton["schema_version"], json!(SCHEMA_VERSION));
        assert_eq!(skeleton["checks"], json!([]));
    }

    #[test]
    fn byte_stable() {
        let r1 = emit_report(&run_scenario("string-su2", &BTreeMap::new(), 3).unwrap());
        let r2 = emit_report(&run_scenario("string-su2", &BTreeMap::new(), 3).unwrap());
        assert_eq!(r1, r2);
    }
}

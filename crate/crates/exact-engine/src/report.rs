use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One verification record: which check ran, on what instance, the values it
/// produced, and whether the hard assertion passed at the given tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub instance: String,
    pub values: BTreeMap<String, f64>,
    pub pass: bool,
    pub tolerance: f64,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, instance: impl Into<String>, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            instance: instance.into(),
            values: BTreeMap::new(),
            pass: true,
            tolerance,
        }
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn passing(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

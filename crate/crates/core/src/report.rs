use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Outcome of one statistical or numerical check.
///
/// `details` holds auxiliary named quantities (per-point gaps, sample sizes,
/// route used) and serializes with sorted keys so reports are reproducible
/// byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub name: String,
    pub statistic: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Whether `threshold` bounds `value` from below.
    #[serde(default)]
    pub lower_bound: bool,
    pub n: usize,
    pub seed: Option<u64>,
    pub details: BTreeMap<String, serde_json::Value>,
}

impl ComparisonReport {
    /// Builds a report that passes when `value <= threshold`.
    pub fn upper(
        name: impl Into<String>,
        statistic: impl Into<String>,
        value: f64,
        threshold: f64,
    ) -> Self {
        ComparisonReport {
            name: name.into(),
            statistic: statistic.into(),
            value,
            threshold,
            passed: value.is_finite() && value <= threshold,
            lower_bound: false,
            n: 0,
            seed: None,
            details: BTreeMap::new(),
        }
    }

    /// Builds a report that passes when `value >= threshold`.
    pub fn lower(
        name: impl Into<String>,
        statistic: impl Into<String>,
        value: f64,
        threshold: f64,
    ) -> Self {
        ComparisonReport {
            passed: value.is_finite() && value >= threshold,
            lower_bound: true,
            ..Self::upper(name, statistic, value, threshold)
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn detail(mut self, key: &str, v: impl Serialize) -> Self {
        self.insert(key, v);
        self
    }

    pub fn insert(&mut self, key: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).unwrap_or(serde_json::Value::Null);
        self.details.insert(key.to_string(), v);
    }

    /// Folds sub-reports into one that passes only if all of them do.
    pub fn all(name: impl Into<String>, parts: Vec<ComparisonReport>) -> Self {
        let passed = !parts.is_empty() && parts.iter().all(|p| p.passed);
        let worst = parts
            .iter()
            .map(|p| match (p.lower_bound, p.threshold > 0.0) {
                (false, true) => p.value / p.threshold,
                (false, false) => p.value,
                (true, _) => p.threshold / p.value,
            })
            .fold(0.0_f64, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        let n = parts.iter().map(|p| p.n).sum();
        let seed = parts.iter().find_map(|p| p.seed);
        let mut r = ComparisonReport {
            name: name.into(),
            statistic: "max_relative_to_threshold".into(),
            value: worst,
            threshold: 1.0,
            passed,
            lower_bound: false,
            n,
            seed,
            details: BTreeMap::new(),
        };
        r.insert("parts", &parts);
        r
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{} [{}] {} = {:.6e} (threshold {:.6e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.statistic,
            self.value,
            self.threshold
        )
    }
}

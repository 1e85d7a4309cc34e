use serde::{Deserialize, Serialize};

/// How an identity was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Both sides reduced to the same canonical rational function.
    Canonical,
    /// Exact agreement at more points than the degree of the cleared identity.
    Sampled,
    /// Pure combinatorics (for instance an empty set of tableaux).
    Combinatorial,
    /// Floating-point check against a tolerance.
    Numeric,
}

/// Outcome of one verified identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub method: Method,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Certificate {
    pub fn new(name: impl Into<String>, method: Method, passed: bool) -> Self {
        Certificate {
            name: name.into(),
            method,
            passed,
            samples: None,
            degree_bound: None,
            defect: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_defect(mut self, defect: f64) -> Self {
        self.defect = Some(defect);
        self
    }
}

pub fn all_passed<'a>(certs: impl IntoIterator<Item = &'a Certificate>) -> bool {
    certs.into_iter().all(|c| c.passed)
}

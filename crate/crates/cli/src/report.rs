//! Verification reports: one run per claim or proof step, plus metadata.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use pedlab_core::dissection::StepOutcome;
use pedlab_core::partitions::{ClaimCheck, ClaimStatus, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    Claim,
    ProofStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Pass,
    Fail,
    EmpiricalPass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimTier {
    Theorem,
    Conjecture,
}

/// Where a run failed: the index `n` (claims) or exponent (proof steps), and
/// the residue or difference found there, in decimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub n: u64,
    pub residue: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Run {
    pub label: String,
    pub kind: RunKind,
    pub status: RunStatus,
    /// Only for claims.
    pub claim_status: Option<ClaimTier>,
    /// Claims: scanned `0 <= n <= n_limit`.
    pub n_limit: Option<u64>,
    /// Proof steps: series compared below this exponent.
    pub order: Option<u64>,
    pub modulus: Option<u64>,
    pub witness: Option<Witness>,
    pub note: String,
}

impl Run {
    pub fn from_claim(check: &ClaimCheck, modulus: u64) -> Self {
        let (status, witness) = match check.verdict {
            Verdict::Pass => (RunStatus::Pass, None),
            Verdict::EmpiricalPass => (RunStatus::EmpiricalPass, None),
            Verdict::Fail(w) => (
                RunStatus::Fail,
                Some(Witness {
                    n: w.n,
                    residue: w.residue.to_string(),
                }),
            ),
        };
        Run {
            label: check.label.clone(),
            kind: RunKind::Claim,
            status,
            claim_status: Some(match check.status {
                ClaimStatus::Theorem => ClaimTier::Theorem,
                ClaimStatus::Conjecture => ClaimTier::Conjecture,
            }),
            n_limit: Some(check.n_limit),
            order: None,
            modulus: Some(modulus),
            witness,
            note: check.note(),
        }
    }

    pub fn from_step(outcome: &StepOutcome) -> Self {
        let (status, witness, note) = match &outcome.failure {
            None => (
                RunStatus::Pass,
                None,
                format!("verified to order {}, not a proof for all n", outcome.order),
            ),
            Some(f) => (
                RunStatus::Fail,
                Some(Witness {
                    n: f.exponent as u64,
                    residue: f.difference.clone(),
                }),
                format!("sides differ at q^{}", f.exponent),
            ),
        };
        Run {
            label: outcome.label.clone(),
            kind: RunKind::ProofStep,
            status,
            claim_status: None,
            n_limit: None,
            order: Some(outcome.order as u64),
            modulus: outcome.modulus,
            witness,
            note,
        }
    }

    /// Failures count unless they belong to a conjecture.
    pub fn is_blocking_failure(&self) -> bool {
        self.status == RunStatus::Fail && self.claim_status != Some(ClaimTier::Conjecture)
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            RunStatus::Pass => "PASS",
            RunStatus::Fail => "FAIL",
            RunStatus::EmpiricalPass => "EMPIRICAL",
        };
        write!(f, "{tag:<9} {}  [{}]", self.label, self.note)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub wall_time_ms: u64,
    pub parameters: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Meta {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            wall_time_ms: 0,
            parameters: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub meta: Meta,
    pub runs: Vec<Run>,
}

impl VerificationReport {
    /// Nonzero iff a theorem claim or proof step failed.
    pub fn exit_code(&self) -> i32 {
        if self.runs.iter().any(Run::is_blocking_failure) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn count(&self, status: RunStatus) -> usize {
        self.runs.iter().filter(|r| r.status == status).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.meta.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for run in &self.runs {
            writeln!(f, "{run}")?;
        }
        write!(
            f,
            "{} runs: {} pass, {} empirical, {} fail ({} ms)",
            self.runs.len(),
            self.count(RunStatus::Pass),
            self.count(RunStatus::EmpiricalPass),
            self.count(RunStatus::Fail),
            self.meta.wall_time_ms
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(status: RunStatus, tier: Option<ClaimTier>) -> Run {
        Run {
            label: "x".into(),
            kind: if tier.is_some() {
                RunKind::Claim
            } else {
                RunKind::ProofStep
            },
            status,
            claim_status: tier,
            n_limit: None,
            order: None,
            modulus: None,
            witness: None,
            note: String::new(),
        }
    }

    #[test]
    fn exit_code_ignores_conjectures() {
        let mut r = VerificationReport {
            meta: Meta::new("verify"),
            runs: vec![
                run(RunStatus::Pass, Some(ClaimTier::Theorem)),
                run(RunStatus::Fail, Some(ClaimTier::Conjecture)),
            ],
        };
        assert_eq!(r.exit_code(), 0);
        r.runs.push(run(RunStatus::Fail, None));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn serialized_names() {
        let json = serde_json::to_value(run(RunStatus::EmpiricalPass, Some(ClaimTier::Conjecture)))
            .unwrap();
        assert_eq!(json["status"], "empirical-pass");
        assert_eq!(json["kind"], "claim");
        assert_eq!(json["claim_status"], "conjecture");
        let step = serde_json::to_value(run(RunStatus::Pass, None)).unwrap();
        assert_eq!(step["kind"], "proof-step");
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"meta":{"tool":"t","version":"v","command":"c","wall_time_ms":0,"parameters":{},"warnings":[]},"runs":[],"extra":1}"#;
        assert!(VerificationReport::from_json(text).is_err());
    }
}

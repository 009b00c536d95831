//! Verdicts on resolution triples, Morita data and exceptional collections.
//!
//! Every check produces a [`CheckReport`] made of per-condition sub-reports.
//! A sub-report carries the numbers its verdict was read off from, so
//! [`CheckReport::reverify`] can confirm the verdict without recomputation.

mod certificate;
mod exceptional;
mod transport;
mod triple;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basechange::BaseChangeError;
use crate::perf::PerfError;
use crate::resolve::{ResolutionStatus, ResolveError, ResolveOptions};

pub use certificate::{
    verify_generation_certificate, CertificateError, Claim, GenerationCertificate, NamedStep, Step,
};
pub use exceptional::{check_exceptional_collection, check_full_exceptional_collection};
pub use transport::{
    transport_and_recheck, CheckTask, Conformance, MoritaEvidence, TransportReport,
};
pub use triple::{check_morita, check_resolution_triple};

#[cfg(test)]
mod tests;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("inputs do not fit together: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Perf(#[from] PerfError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    BaseChange(#[from] BaseChangeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Ext degrees `-window..=window` are examined when support is not known to be finite.
    pub window: i32,
    pub resolve: ResolveOptions,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            window: 10,
            resolve: ResolveOptions::default(),
        }
    }
}

/// Evidence that some object is nonzero yet invisible to `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Witness {
    pub object: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology_total: Option<usize>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "degree_keys::option"
    )]
    pub ext: Option<BTreeMap<i32, usize>>,
    #[serde(default)]
    pub exhaustive: bool,
}

impl Witness {
    /// A nonzero object with vanishing Ext in an exhaustive range.
    pub fn is_vanishing_witness(&self) -> bool {
        self.exhaustive
            && self.cohomology_total.is_some_and(|c| c > 0)
            && self
                .ext
                .as_ref()
                .is_some_and(|e| e.values().all(|d| *d == 0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Pass,
    Fail {
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
    },
    Undetermined {
        missing: String,
    },
}

impl Verdict {
    pub fn fail(reason: impl Into<String>) -> Verdict {
        Verdict::Fail {
            reason: reason.into(),
            witness: None,
        }
    }

    pub fn undetermined(missing: impl Into<String>) -> Verdict {
        Verdict::Undetermined {
            missing: missing.into(),
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    /// First failure, else first undetermined, else pass.
    pub fn combine<'a>(verdicts: impl IntoIterator<Item = &'a Verdict> + Clone) -> Verdict {
        if let Some(v) = verdicts.clone().into_iter().find(|v| v.is_fail()) {
            return v.clone();
        }
        verdicts
            .into_iter()
            .find(|v| matches!(v, Verdict::Undetermined { .. }))
            .cloned()
            .unwrap_or(Verdict::Pass)
    }
}

/// `observed` should equal `expected` degree by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimClaim {
    pub label: String,
    #[serde(with = "degree_keys")]
    pub observed: BTreeMap<i32, usize>,
    #[serde(with = "degree_keys")]
    pub expected: BTreeMap<i32, usize>,
}

impl DimClaim {
    pub fn new(
        label: impl Into<String>,
        observed: BTreeMap<i32, usize>,
        expected: BTreeMap<i32, usize>,
    ) -> DimClaim {
        DimClaim {
            label: label.into(),
            observed,
            expected,
        }
    }

    pub fn holds(&self) -> bool {
        self.observed == self.expected
    }

    /// First degree where the claim breaks, with the observed value.
    pub fn first_mismatch(&self) -> Option<(i32, usize)> {
        let degrees: std::collections::BTreeSet<i32> = self
            .observed
            .keys()
            .chain(self.expected.keys())
            .copied()
            .collect();
        degrees.into_iter().find_map(|i| {
            let (o, e) = (
                self.observed.get(&i).copied().unwrap_or(0),
                self.expected.get(&i).copied().unwrap_or(0),
            );
            (o != e).then_some((i, o))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ResolutionEvidence {
    Finite { length: usize, cells: usize },
    Periodic { period: usize, syzygy: usize },
    Truncated { depth: usize },
}

impl ResolutionEvidence {
    pub fn from_status(status: ResolutionStatus, cells: usize) -> ResolutionEvidence {
        match status {
            ResolutionStatus::Finite { length } => ResolutionEvidence::Finite { length, cells },
            ResolutionStatus::Periodic { period, syzygy } => {
                ResolutionEvidence::Periodic { period, syzygy }
            }
            ResolutionStatus::Truncated { depth } => ResolutionEvidence::Truncated { depth },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(i32, i32)>,
    /// The examined degrees cover the whole support.
    pub exhaustive: bool,
    pub claims: Vec<DimClaim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionEvidence>,
    pub values: BTreeMap<String, i64>,
}

impl ConditionReport {
    pub fn new(condition: &str, verdict: Verdict) -> ConditionReport {
        ConditionReport {
            condition: condition.into(),
            verdict,
            window: None,
            exhaustive: false,
            claims: Vec::new(),
            resolution: None,
            values: BTreeMap::new(),
        }
    }

    /// Whether the verdict follows from the recorded numbers.
    pub fn consistent(&self) -> Result<(), String> {
        let broken = self.claims.iter().find(|c| !c.holds());
        let periodic = matches!(self.resolution, Some(ResolutionEvidence::Periodic { .. }));
        if let Some(total) = self.values.get("total") {
            let sum: usize = self.claims.first().map_or(0, |c| c.observed.values().sum());
            if *total != sum as i64 {
                return Err(format!(
                    "{}: total {total} disagrees with the listed dimensions",
                    self.condition
                ));
            }
        }
        let ok = match &self.verdict {
            Verdict::Pass => {
                broken.is_none()
                    && !matches!(
                        self.resolution,
                        Some(
                            ResolutionEvidence::Periodic { .. }
                                | ResolutionEvidence::Truncated { .. }
                        )
                    )
            }
            Verdict::Fail { witness, .. } => {
                broken.is_some()
                    || periodic
                    || self.values.contains_key("malformed_step")
                    || witness.as_ref().is_some_and(Witness::is_vanishing_witness)
            }
            Verdict::Undetermined { .. } => broken.is_none() && !periodic,
        };
        if ok {
            Ok(())
        } else {
            Err(format!(
                "{}: verdict does not follow from its evidence",
                self.condition
            ))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub field: String,
    pub verdict: Verdict,
    pub conditions: Vec<ConditionReport>,
    #[serde(default)]
    pub certificate_hashes: Vec<String>,
}

impl CheckReport {
    pub fn new(
        check: &str,
        field: &crate::field::Field,
        conditions: Vec<ConditionReport>,
    ) -> CheckReport {
        let verdict = Verdict::combine(conditions.iter().map(|c| &c.verdict).collect::<Vec<_>>());
        CheckReport {
            check: check.into(),
            field: field.to_string(),
            verdict,
            conditions,
            certificate_hashes: Vec::new(),
        }
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.condition == name)
    }

    /// Checks every sub-verdict against its evidence and the overall verdict
    /// against the sub-verdicts.
    pub fn reverify(&self) -> Result<(), String> {
        for c in &self.conditions {
            c.consistent()?;
        }
        let combined = Verdict::combine(
            self.conditions
                .iter()
                .map(|c| &c.verdict)
                .collect::<Vec<_>>(),
        );
        if combined != self.verdict {
            return Err(format!(
                "{}: overall verdict does not match its conditions",
                self.check
            ));
        }
        Ok(())
    }
}

/// Maps keyed by degree. JSON keys are strings, and serde hands them over as
/// strings when the map sits inside a tagged enum, so parse them by hand.
pub(crate) mod degree_keys {
    use std::collections::BTreeMap;

    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<i32, usize>, s: S) -> Result<S::Ok, S::Error> {
        m.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i32, usize>, D::Error> {
        let raw = BTreeMap::<String, usize>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(D::Error::custom))
            .collect()
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(
            m: &Option<BTreeMap<i32, usize>>,
            s: S,
        ) -> Result<S::Ok, S::Error> {
            m.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<BTreeMap<i32, usize>>, D::Error> {
            let raw = Option::<BTreeMap<String, usize>>::deserialize(d)?;
            raw.map(|m| {
                m.into_iter()
                    .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(D::Error::custom))
                    .collect()
            })
            .transpose()
        }
    }
}

pub(crate) fn window_of(options: &CheckOptions) -> (i32, i32) {
    (-options.window, options.window)
}

use serde::{Deserialize, Serialize};

use super::{
    check_exceptional_collection, check_full_exceptional_collection, check_morita,
    check_resolution_triple, CheckError, CheckOptions, CheckReport, GenerationCertificate,
};
use crate::basechange::ExtensionMap;
use crate::dg::{Algebra, DGBimodule};
use crate::perf::PerfObject;

pub use super::triple::MoritaEvidence;

/// The inputs of one checker call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckTask {
    Triple {
        a: Algebra,
        b: Algebra,
        t: DGBimodule,
    },
    Morita {
        a: Algebra,
        b: Algebra,
        t: DGBimodule,
        evidence: MoritaEvidence,
    },
    Exceptional {
        b: Algebra,
        objects: Vec<(String, PerfObject)>,
        window: (i32, i32),
    },
    FullExceptional {
        b: Algebra,
        objects: Vec<(String, PerfObject)>,
        certificate: GenerationCertificate,
        window: (i32, i32),
    },
}

impl CheckTask {
    pub fn run(&self, options: &CheckOptions) -> Result<CheckReport, CheckError> {
        match self {
            CheckTask::Triple { a, b, t } => check_resolution_triple(a, b, t, options),
            CheckTask::Morita { a, b, t, evidence } => check_morita(a, b, t, evidence, options),
            CheckTask::Exceptional { b, objects, window } => {
                check_exceptional_collection(b, objects, *window)
            }
            CheckTask::FullExceptional {
                b,
                objects,
                certificate,
                window,
            } => check_full_exceptional_collection(b, objects, certificate, *window),
        }
    }

    /// Every input, certificates and witnesses included, extended along `e`.
    pub fn extend(&self, e: &ExtensionMap) -> Result<CheckTask, CheckError> {
        let objects = |b: &Algebra,
                       xs: &[(String, PerfObject)]|
         -> Result<Vec<(String, PerfObject)>, CheckError> {
            xs.iter()
                .map(|(n, x)| Ok((n.clone(), e.perf_over(x, b)?)))
                .collect()
        };
        Ok(match self {
            CheckTask::Triple { a, b, t } => {
                let (a, b) = (e.algebra(a)?, e.algebra(b)?);
                let t = e.bimodule_over(t, &a, &b)?;
                CheckTask::Triple { a, b, t }
            }
            CheckTask::Morita { a, b, t, evidence } => {
                let (a2, b2) = (e.algebra(a)?, e.algebra(b)?);
                let t = e.bimodule_over(t, &a2, &b2)?;
                let evidence = match evidence {
                    MoritaEvidence::None => MoritaEvidence::None,
                    MoritaEvidence::Certificate(c) => MoritaEvidence::Certificate(c.extend(e)?),
                    MoritaEvidence::Witness { name, module } => MoritaEvidence::Witness {
                        name: name.clone(),
                        module: e.module_over(module, &b2)?,
                    },
                };
                CheckTask::Morita {
                    a: a2,
                    b: b2,
                    t,
                    evidence,
                }
            }
            CheckTask::Exceptional {
                b,
                objects: xs,
                window,
            } => {
                let b = e.algebra(b)?;
                CheckTask::Exceptional {
                    objects: objects(&b, xs)?,
                    b,
                    window: *window,
                }
            }
            CheckTask::FullExceptional {
                b,
                objects: xs,
                certificate,
                window,
            } => {
                let b = e.algebra(b)?;
                CheckTask::FullExceptional {
                    objects: objects(&b, xs)?,
                    certificate: certificate.extend(e)?,
                    b,
                    window: *window,
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conformance {
    /// Pass over `k` and over `k′`.
    Preserved,
    /// The check did not pass over `k`; nothing is predicted.
    NotApplicable,
    /// Pass over `k`, undetermined over `k′` (bounds ran out).
    Weakened,
    /// Pass over `k`, fail over `k′`: scalar extension should never do this.
    Anomaly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportReport {
    pub base: CheckReport,
    pub extended: CheckReport,
    pub conformance: Conformance,
}

/// Runs `task`, extends all of its inputs along `e` and runs it again.
pub fn transport_and_recheck(
    task: &CheckTask,
    e: &ExtensionMap,
    options: &CheckOptions,
) -> Result<TransportReport, CheckError> {
    let base = task.run(options)?;
    let extended = task.extend(e)?.run(options)?;
    let conformance = match (base.verdict.is_pass(), &extended.verdict) {
        (false, _) => Conformance::NotApplicable,
        (true, v) if v.is_pass() => Conformance::Preserved,
        (true, v) if v.is_fail() => Conformance::Anomaly,
        _ => Conformance::Weakened,
    };
    Ok(TransportReport {
        base,
        extended,
        conformance,
    })
}

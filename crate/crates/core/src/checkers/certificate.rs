use std::collections::BTreeMap;

use thiserror::Error;

use super::{CheckReport, ConditionReport, DimClaim, Verdict};
use crate::basechange::{BaseChangeError, ExtensionMap};
use crate::dg::Algebra;
use crate::perf::{AlgMatrix, Morphism, PerfObject};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Shift {
        of: String,
        by: i32,
    },
    Sum {
        left: String,
        right: String,
    },
    /// Cone of a closed degree-zero morphism `source → target`.
    Cone {
        source: String,
        target: String,
        matrix: AlgMatrix,
    },
    Summand {
        of: String,
        idempotent: AlgMatrix,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedStep {
    pub name: String,
    pub step: Step,
}

/// A degree-zero morphism from a built object to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub from: String,
    pub matrix: AlgMatrix,
}

/// A replayable construction of `target`, up to homotopy, from `starts`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationCertificate {
    pub algebra: Algebra,
    pub starts: Vec<(String, PerfObject)>,
    pub steps: Vec<NamedStep>,
    pub target: PerfObject,
    pub claim: Claim,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    /// `index` counts starts, then steps; the claim comes last.
    #[error("step {index}: {reason}")]
    MalformedStep { index: usize, reason: String },
}

impl GenerationCertificate {
    /// Rebuilds every object and the claimed morphism.
    pub fn replay(&self) -> Result<(BTreeMap<String, PerfObject>, Morphism), CertificateError> {
        let mut built: BTreeMap<String, PerfObject> = BTreeMap::new();
        let bad = |index: usize, reason: String| CertificateError::MalformedStep { index, reason };
        for (index, (name, x)) in self.starts.iter().enumerate() {
            if x.algebra() != &self.algebra {
                return Err(bad(
                    index,
                    format!("start `{name}` lives over another algebra"),
                ));
            }
            if built.insert(name.clone(), x.clone()).is_some() {
                return Err(bad(index, format!("`{name}` defined twice")));
            }
        }
        let offset = self.starts.len();
        for (i, s) in self.steps.iter().enumerate() {
            let index = offset + i;
            let get = |n: &String| {
                built
                    .get(n)
                    .ok_or_else(|| bad(index, format!("`{n}` is not built yet")))
            };
            let x = match &s.step {
                Step::Shift { of, by } => get(of)?.shift(*by),
                Step::Sum { left, right } => get(left)?
                    .direct_sum(get(right)?)
                    .map_err(|e| bad(index, e.to_string()))?,
                Step::Cone {
                    source,
                    target,
                    matrix,
                } => {
                    let f = Morphism::new(get(source)?, get(target)?, 0, matrix.clone())
                        .map_err(|e| bad(index, e.to_string()))?;
                    PerfObject::cone(&f).map_err(|e| bad(index, e.to_string()))?
                }
                Step::Summand { of, idempotent } => get(of)?
                    .summand(idempotent)
                    .map_err(|e| bad(index, e.to_string()))?,
            };
            if built.insert(s.name.clone(), x).is_some() {
                return Err(bad(index, format!("`{}` defined twice", s.name)));
            }
        }
        let index = offset + self.steps.len();
        if self.target.algebra() != &self.algebra {
            return Err(bad(index, "target lives over another algebra".into()));
        }
        let from = built
            .get(&self.claim.from)
            .ok_or_else(|| bad(index, format!("`{}` is not built", self.claim.from)))?;
        let f = Morphism::new(from, &self.target, 0, self.claim.matrix.clone())
            .map_err(|e| bad(index, e.to_string()))?;
        if !f.is_closed() {
            return Err(bad(index, "claimed morphism is not closed".into()));
        }
        Ok((built, f))
    }

    pub fn extend(&self, e: &ExtensionMap) -> Result<GenerationCertificate, BaseChangeError> {
        let a = e.algebra(&self.algebra)?;
        let m = |x: &AlgMatrix| -> Result<AlgMatrix, BaseChangeError> {
            let entries = x
                .entries()
                .iter()
                .map(|v| e.vector(v))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AlgMatrix::from_entries(x.rows(), x.cols(), entries)?)
        };
        let starts = self
            .starts
            .iter()
            .map(|(n, x)| Ok((n.clone(), e.perf_over(x, &a)?)))
            .collect::<Result<Vec<_>, BaseChangeError>>()?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let step = match &s.step {
                    Step::Shift { of, by } => Step::Shift {
                        of: of.clone(),
                        by: *by,
                    },
                    Step::Sum { left, right } => Step::Sum {
                        left: left.clone(),
                        right: right.clone(),
                    },
                    Step::Cone {
                        source,
                        target,
                        matrix,
                    } => Step::Cone {
                        source: source.clone(),
                        target: target.clone(),
                        matrix: m(matrix)?,
                    },
                    Step::Summand { of, idempotent } => Step::Summand {
                        of: of.clone(),
                        idempotent: m(idempotent)?,
                    },
                };
                Ok(NamedStep {
                    name: s.name.clone(),
                    step,
                })
            })
            .collect::<Result<Vec<_>, BaseChangeError>>()?;
        Ok(GenerationCertificate {
            starts,
            steps,
            target: e.perf_over(&self.target, &a)?,
            claim: Claim {
                from: self.claim.from.clone(),
                matrix: m(&self.claim.matrix)?,
            },
            algebra: a,
        })
    }
}

pub(crate) fn generation_condition(cert: &GenerationCertificate) -> ConditionReport {
    let mut c = ConditionReport::new("generation", Verdict::Pass);
    c.values.insert("steps".into(), cert.steps.len() as i64);
    match cert.replay() {
        Err(CertificateError::MalformedStep { index, reason }) => {
            c.values.insert("malformed_step".into(), index as i64);
            c.verdict = Verdict::fail(format!("malformed step {index}: {reason}"));
        }
        Ok((_, f)) => match PerfObject::is_homotopy_iso(&f) {
            Ok(iso) => {
                c.exhaustive = true;
                c.claims.push(DimClaim::new(
                    "End(cone of claim)",
                    iso.cone_endomorphism_dims,
                    BTreeMap::new(),
                ));
                if !iso.iso {
                    c.verdict = Verdict::fail("claimed morphism is not a homotopy equivalence");
                }
            }
            Err(e) => {
                c.values.insert(
                    "malformed_step".into(),
                    (cert.starts.len() + cert.steps.len()) as i64,
                );
                c.verdict = Verdict::fail(format!("claim: {e}"));
            }
        },
    }
    c
}

/// Replays the certificate; passes iff the claimed morphism has acyclic cone.
pub fn verify_generation_certificate(cert: &GenerationCertificate) -> CheckReport {
    CheckReport::new(
        "generation-certificate",
        cert.algebra.field(),
        vec![generation_condition(cert)],
    )
}

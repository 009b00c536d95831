use std::collections::BTreeMap;

use super::certificate::generation_condition;
use super::{
    window_of, CheckError, CheckOptions, CheckReport, ConditionReport, DimClaim,
    ResolutionEvidence, Verdict, Witness,
};
use crate::dg::{Algebra, DGBimodule, DGModule};
use crate::perf::{hom_into_module, PerfObject};
use crate::resolve::{
    action_quasi_iso_with, minimal_resolution, smoothness_probe, Resolution, ResolutionStatus,
    ResolveError, SmoothnessVerdict,
};

use super::GenerationCertificate;

/// Evidence for the generation condition of the Morita criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoritaEvidence {
    /// Builds `B` from the model of `T`.
    Certificate(GenerationCertificate),
    /// A nonzero module with `Ext(T, N) = 0`.
    Witness {
        name: String,
        module: DGModule,
    },
    None,
}

fn check_inputs(a: &Algebra, b: &Algebra, t: &DGBimodule) -> Result<(), CheckError> {
    if t.left() != a || t.right() != b {
        return Err(CheckError::Mismatch(
            "bimodule is not an A-B bimodule".into(),
        ));
    }
    Ok(())
}

fn gave_up(name: &str, e: &ResolveError) -> Result<ConditionReport, CheckError> {
    match e {
        ResolveError::SizeBoundExceeded { .. } | ResolveError::WindowNotGuaranteed { .. } => Ok(
            ConditionReport::new(name, Verdict::undetermined(e.to_string())),
        ),
        other => Err(other.clone().into()),
    }
}

fn smoothness(b: &Algebra, options: &CheckOptions) -> Result<ConditionReport, CheckError> {
    let s = match smoothness_probe(b, options.resolve) {
        Ok(s) => s,
        Err(e) => return gave_up("smoothness", &e),
    };
    let mut c = ConditionReport::new("smoothness", Verdict::Pass);
    c.resolution = Some(ResolutionEvidence::from_status(
        s.resolution.status(),
        s.resolution.total_cells(),
    ));
    match s.verdict {
        SmoothnessVerdict::Smooth { .. } => {}
        SmoothnessVerdict::NotSmooth { period, .. } => {
            c.verdict = Verdict::fail(format!(
                "a syzygy of the diagonal repeats with period {period}"
            ))
        }
        SmoothnessVerdict::Undetermined { depth } => {
            c.verdict =
                Verdict::undetermined(format!("diagonal resolution truncated at depth {depth}"))
        }
    }
    Ok(c)
}

fn compactness(res: &Result<Resolution, ResolveError>) -> Result<ConditionReport, CheckError> {
    let res = match res {
        Ok(r) => r,
        Err(e) => return gave_up("compactness", e),
    };
    let mut c = ConditionReport::new("compactness", Verdict::Pass);
    c.resolution = Some(ResolutionEvidence::from_status(
        res.status(),
        res.total_cells(),
    ));
    match res.status() {
        ResolutionStatus::Finite { .. } => {}
        ResolutionStatus::Periodic { period, .. } => {
            c.verdict = Verdict::fail(format!(
                "T has a periodic minimal resolution of period {period}"
            ))
        }
        ResolutionStatus::Truncated { depth } => {
            c.verdict = Verdict::undetermined(format!("resolution of T truncated at depth {depth}"))
        }
    }
    Ok(c)
}

fn degree_hull(dims: impl Iterator<Item = i32>, window: (i32, i32)) -> (i32, i32) {
    dims.fold(window, |(lo, hi), d| (lo.min(d), hi.max(d)))
}

/// `H^i(A) → Ext^i_B(T, T)` is bijective. With a finite model of `T` the
/// examined range covers every degree where either side can be nonzero.
fn action(
    a: &Algebra,
    t: &DGBimodule,
    res: &Result<Resolution, ResolveError>,
    options: &CheckOptions,
) -> Result<ConditionReport, CheckError> {
    let name = "action";
    let res = match res {
        Ok(r) => r.clone(),
        Err(e) => return gave_up(name, e),
    };
    let mut window = window_of(options);
    let finite = matches!(res.status(), ResolutionStatus::Finite { .. });
    if finite {
        let hom = hom_into_module(&res.model()?, &t.right_module())?;
        window = degree_hull(
            hom.complex
                .dims()
                .keys()
                .copied()
                .chain(a.basis().degrees.iter().copied()),
            window,
        );
    }
    let report = match action_quasi_iso_with(a, t, res, window) {
        Ok(r) => r,
        Err(e) => return gave_up(name, &e),
    };
    let mut c = ConditionReport::new(name, Verdict::Pass);
    c.window = Some(window);
    c.exhaustive = finite;
    let pick = |f: fn(&crate::resolve::DegreeCheck) -> usize| {
        report
            .degrees
            .iter()
            .map(|d| (d.degree, f(d)))
            .collect::<BTreeMap<_, _>>()
    };
    let (alg, ext, rank) = (
        pick(|d| d.algebra_dim),
        pick(|d| d.ext_dim),
        pick(|d| d.rank),
    );
    c.claims
        .push(DimClaim::new("dim H(A) = dim Ext(T, T)", alg.clone(), ext));
    c.claims
        .push(DimClaim::new("rank of H(A) → Ext(T, T)", rank, alg));
    if let Some(bad) = c.claims.iter().find(|x| !x.holds()) {
        let (degree, dim) = bad.first_mismatch().unwrap();
        c.verdict = Verdict::Fail {
            reason: format!("{} fails in degree {degree}", bad.label),
            witness: Some(Witness {
                object: "T".into(),
                degree: Some(degree),
                dim: Some(dim),
                ..Witness::default()
            }),
        };
    } else if !finite {
        c.verdict = Verdict::undetermined(format!(
            "no finite model of T; degrees outside {window:?} unchecked"
        ));
    }
    Ok(c)
}

/// `⊕_i Hom(T, B[i])` is finite-dimensional; exact when `T` has a finite model.
fn hom_to_free(
    b: &Algebra,
    res: &Result<Resolution, ResolveError>,
) -> Result<ConditionReport, CheckError> {
    let name = "hom-to-B";
    let res = match res {
        Ok(r) => r,
        Err(e) => return gave_up(name, e),
    };
    if !matches!(res.status(), ResolutionStatus::Finite { .. }) {
        return Ok(ConditionReport::new(
            name,
            Verdict::undetermined("no finite model of T, support of Hom(T, B[*]) unknown"),
        ));
    }
    let hom = hom_into_module(&res.model()?, &DGModule::free(b))?;
    let dims = hom
        .complex
        .cohomology()
        .map_err(crate::perf::PerfError::from)?
        .support();
    let mut c = ConditionReport::new(name, Verdict::Pass);
    c.exhaustive = true;
    c.values
        .insert("total".into(), dims.values().sum::<usize>() as i64);
    c.claims
        .push(DimClaim::new("dim Hom(T, B[i])", dims.clone(), dims));
    Ok(c)
}

/// Smoothness of `B` and the three conditions on `T`.
pub fn check_resolution_triple(
    a: &Algebra,
    b: &Algebra,
    t: &DGBimodule,
    options: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    check_inputs(a, b, t)?;
    let res = minimal_resolution(&t.right_module(), options.resolve);
    let conditions = vec![
        smoothness(b, options)?,
        action(a, t, &res, options)?,
        compactness(&res)?,
        hom_to_free(b, &res)?,
    ];
    Ok(CheckReport::new("check-triple", a.field(), conditions))
}

fn starts_are_models(
    cert: &GenerationCertificate,
    model: &PerfObject,
    b: &Algebra,
) -> Option<String> {
    if cert.algebra != *b || cert.target != PerfObject::free(b) {
        return Some("certificate does not target B".into());
    }
    for (name, x) in &cert.starts {
        let shift = x
            .cells()
            .first()
            .zip(model.cells().first())
            .map(|(s, m)| s - m)
            .unwrap_or(0);
        if model.shift(shift) != *x {
            return Some(format!("start `{name}` is not a shift of the model of T"));
        }
    }
    None
}

fn generation(
    t: &DGBimodule,
    res: &Result<Resolution, ResolveError>,
    evidence: &MoritaEvidence,
) -> Result<ConditionReport, CheckError> {
    let name = "generation";
    match evidence {
        MoritaEvidence::None => Ok(ConditionReport::new(
            name,
            Verdict::undetermined("no certificate or witness supplied"),
        )),
        MoritaEvidence::Certificate(cert) => {
            let res = match res {
                Ok(r) => r,
                Err(e) => return gave_up(name, e),
            };
            if let Some(reason) = starts_are_models(cert, &res.model()?, t.right()) {
                let mut c = ConditionReport::new(name, Verdict::fail(reason));
                c.values.insert("malformed_step".into(), 0);
                return Ok(c);
            }
            Ok(generation_condition(cert))
        }
        MoritaEvidence::Witness {
            name: wname,
            module,
        } => {
            if module.algebra() != t.right() {
                return Err(CheckError::Mismatch("witness is not a B-module".into()));
            }
            let res = match res {
                Ok(r) => r,
                Err(e) => return gave_up(name, e),
            };
            if !matches!(res.status(), ResolutionStatus::Finite { .. }) {
                return Ok(ConditionReport::new(
                    name,
                    Verdict::undetermined(
                        "witness needs a finite model of T to make Ext vanishing exhaustive",
                    ),
                ));
            }
            let total = module
                .cohomology()
                .map_err(crate::perf::PerfError::from)?
                .total_dim();
            let hom = hom_into_module(&res.model()?, module)?;
            let ext: BTreeMap<i32, usize> = hom
                .complex
                .cohomology()
                .map_err(crate::perf::PerfError::from)?
                .dims;
            let witness = Witness {
                object: wname.clone(),
                cohomology_total: Some(total),
                ext: Some(ext.clone()),
                exhaustive: true,
                ..Witness::default()
            };
            let mut c = ConditionReport::new(name, Verdict::Pass);
            c.exhaustive = true;
            c.values.insert("witness_cohomology".into(), total as i64);
            if witness.is_vanishing_witness() {
                c.verdict = Verdict::Fail {
                    reason: format!("`{wname}` is nonzero but Hom(T, {wname}[i]) = 0 for all i"),
                    witness: Some(witness),
                };
            } else {
                let why = if total == 0 {
                    "witness is acyclic"
                } else {
                    "witness sees T"
                };
                c.verdict = Verdict::undetermined(format!(
                    "{why}; generation neither certified nor refuted"
                ));
            }
            Ok(c)
        }
    }
}

/// Compactness, generation and the action isomorphism for `- ⊗ T`.
pub fn check_morita(
    a: &Algebra,
    b: &Algebra,
    t: &DGBimodule,
    evidence: &MoritaEvidence,
    options: &CheckOptions,
) -> Result<CheckReport, CheckError> {
    check_inputs(a, b, t)?;
    let res = minimal_resolution(&t.right_module(), options.resolve);
    let conditions = vec![
        compactness(&res)?,
        generation(t, &res, evidence)?,
        action(a, t, &res, options)?,
    ];
    Ok(CheckReport::new("check-morita", a.field(), conditions))
}

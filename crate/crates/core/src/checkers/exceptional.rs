use std::collections::BTreeMap;

use super::certificate::generation_condition;
use super::{
    CheckError, CheckReport, ConditionReport, DimClaim, GenerationCertificate, Verdict, Witness,
};
use crate::dg::Algebra;
use crate::perf::PerfObject;

fn conditions(
    b: &Algebra,
    objects: &[(String, PerfObject)],
    window: (i32, i32),
) -> Result<Vec<ConditionReport>, CheckError> {
    if let Some((name, _)) = objects.iter().find(|(_, x)| x.algebra() != b) {
        return Err(CheckError::Mismatch(format!(
            "`{name}` is not over the given algebra"
        )));
    }
    let mut own = ConditionReport::new("endomorphisms", Verdict::Pass);
    let mut order = ConditionReport::new("ordering", Verdict::Pass);
    for c in [&mut own, &mut order] {
        c.window = Some(window);
        c.exhaustive = true;
    }
    for (i, (name, x)) in objects.iter().enumerate() {
        let dims = x.ext_dims(x)?;
        let claim = DimClaim::new(
            format!("Ext({name}, {name})"),
            dims,
            BTreeMap::from([(0, 1)]),
        );
        if own.verdict.is_pass() {
            if let Some((degree, dim)) = claim.first_mismatch() {
                own.verdict = Verdict::Fail {
                    reason: format!("Ext^{degree}({name}, {name}) has dimension {dim}"),
                    witness: Some(Witness {
                        object: name.clone(),
                        pair: Some((i, i)),
                        degree: Some(degree),
                        dim: Some(dim),
                        exhaustive: true,
                        ..Witness::default()
                    }),
                };
            }
        }
        own.claims.push(claim);
    }
    for (i, (ni, xi)) in objects.iter().enumerate() {
        for (j, (nj, xj)) in objects.iter().enumerate().skip(i + 1) {
            let claim = DimClaim::new(
                format!("Ext({nj}, {ni})"),
                xj.ext_dims(xi)?,
                BTreeMap::new(),
            );
            if order.verdict.is_pass() {
                if let Some((degree, dim)) = claim.first_mismatch() {
                    order.verdict = Verdict::Fail {
                        reason: format!("Ext^{degree}({nj}, {ni}) ≠ 0 although {nj} comes later"),
                        witness: Some(Witness {
                            object: format!("({nj}, {ni})"),
                            pair: Some((j, i)),
                            degree: Some(degree),
                            dim: Some(dim),
                            exhaustive: true,
                            ..Witness::default()
                        }),
                    };
                }
            }
            order.claims.push(claim);
        }
    }
    Ok(vec![own, order])
}

/// Each object has Ext concentrated in degree zero and equal to the ground
/// field; no nonzero Ext from a later object to an earlier one. Hom complexes
/// of perfect objects are finite, so the whole support is examined and the
/// window is recorded only.
pub fn check_exceptional_collection(
    b: &Algebra,
    objects: &[(String, PerfObject)],
    window: (i32, i32),
) -> Result<CheckReport, CheckError> {
    Ok(CheckReport::new(
        "check-exc",
        b.field(),
        conditions(b, objects, window)?,
    ))
}

fn starts_are_listed(
    cert: &GenerationCertificate,
    b: &Algebra,
    objects: &[(String, PerfObject)],
) -> Option<String> {
    if cert.algebra != *b || cert.target != PerfObject::free(b) {
        return Some("certificate does not target B".into());
    }
    for (name, x) in &cert.starts {
        let listed = objects.iter().any(|(_, y)| {
            let shift = x
                .cells()
                .first()
                .zip(y.cells().first())
                .map(|(s, m)| s - m)
                .unwrap_or(0);
            y.shift(shift) == *x
        });
        if !listed {
            return Some(format!(
                "start `{name}` is not one of the listed objects up to shift"
            ));
        }
    }
    None
}

/// The exceptional-collection check plus a certificate building `B` from the
/// listed objects.
pub fn check_full_exceptional_collection(
    b: &Algebra,
    objects: &[(String, PerfObject)],
    cert: &GenerationCertificate,
    window: (i32, i32),
) -> Result<CheckReport, CheckError> {
    let mut conds = conditions(b, objects, window)?;
    let gen = match starts_are_listed(cert, b, objects) {
        Some(reason) => {
            let mut c = ConditionReport::new("generation", Verdict::fail(reason));
            c.values.insert("malformed_step".into(), 0);
            c
        }
        None => generation_condition(cert),
    };
    conds.push(gen);
    Ok(CheckReport::new("check-full-exc", b.field(), conds))
}

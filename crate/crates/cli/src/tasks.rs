//! Task entries: parsing, printing and execution against a workspace.

use dgw_core::basechange::{
    check_adjunction_dims, check_hom_base_change, AdjunctionReport, BaseChangeReport, ExtensionMap,
};
use dgw_core::checkers::{
    transport_and_recheck, CheckOptions, CheckReport, CheckTask, Conformance,
    GenerationCertificate, MoritaEvidence, TransportReport, Verdict,
};
use dgw_core::dg::Algebra;
use dgw_core::field::Field;
use dgw_core::perf::sample::{random_module, random_perf};
use dgw_core::perf::PerfObject;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::document::{Ctx, DocError, TaskEntry, Workspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Certificate(String),
    Witness(String),
    None,
}

/// A task with every argument given by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskSpec {
    CheckTriple {
        a: String,
        b: String,
        t: String,
    },
    CheckMorita {
        a: String,
        b: String,
        t: String,
        evidence: Evidence,
    },
    CheckExc {
        algebra: String,
        objects: Vec<String>,
    },
    CheckFullExc {
        algebra: String,
        objects: Vec<String>,
        certificate: String,
    },
    Transport {
        task: Box<TaskSpec>,
        extension: String,
    },
    BaseChange {
        object: String,
        extension: String,
    },
    CheckHomBc {
        complex: String,
        module: String,
        extension: String,
    },
    CheckAdjunction {
        module: String,
        target: String,
        extension: String,
    },
    SweepHomBc {
        algebra: String,
        extension: String,
        pairs: usize,
        cells: usize,
    },
}

impl TaskSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskSpec::CheckTriple { .. } => "check-triple",
            TaskSpec::CheckMorita { .. } => "check-morita",
            TaskSpec::CheckExc { .. } => "check-exc",
            TaskSpec::CheckFullExc { .. } => "check-full-exc",
            TaskSpec::Transport { .. } => "transport",
            TaskSpec::BaseChange { .. } => "base-change",
            TaskSpec::CheckHomBc { .. } => "check-hom-bc",
            TaskSpec::CheckAdjunction { .. } => "check-adjunction",
            TaskSpec::SweepHomBc { .. } => "sweep-hom-bc",
        }
    }

    fn is_checker(&self) -> bool {
        matches!(
            self,
            TaskSpec::CheckTriple { .. }
                | TaskSpec::CheckMorita { .. }
                | TaskSpec::CheckExc { .. }
                | TaskSpec::CheckFullExc { .. }
        )
    }

    /// The same task with every object list reversed.
    pub fn reversed(&self) -> TaskSpec {
        let rev = |xs: &[String]| xs.iter().rev().cloned().collect();
        match self {
            TaskSpec::CheckExc { algebra, objects } => TaskSpec::CheckExc {
                algebra: algebra.clone(),
                objects: rev(objects),
            },
            TaskSpec::CheckFullExc {
                algebra,
                objects,
                certificate,
            } => TaskSpec::CheckFullExc {
                algebra: algebra.clone(),
                objects: rev(objects),
                certificate: certificate.clone(),
            },
            TaskSpec::Transport { task, extension } => TaskSpec::Transport {
                task: Box::new(task.reversed()),
                extension: extension.clone(),
            },
            other => other.clone(),
        }
    }
}

fn name_arg(ctx: &Ctx, args: &Map<String, Value>, key: &str) -> Result<String, DocError> {
    Ok(ctx.str(ctx.field(args, key)?, key)?.to_string())
}

fn names_arg(ctx: &Ctx, args: &Map<String, Value>, key: &str) -> Result<Vec<String>, DocError> {
    ctx.arr(ctx.field(args, key)?, key)?
        .iter()
        .map(|v| ctx.str(v, "object name").map(str::to_string))
        .collect()
}

fn require<T>(map: &indexmap::IndexMap<String, T>, name: &str) -> Result<(), DocError> {
    if map.contains_key(name) {
        Ok(())
    } else {
        Err(DocError::UnknownReference(name.to_string()))
    }
}

fn parse_spec(ctx: &Ctx, kind: &str, args: &Value, ws: &Workspace) -> Result<TaskSpec, DocError> {
    let args = ctx.obj(args, "args")?;
    let spec = match kind {
        "check-triple" | "check-morita" => {
            let allowed: &[&str] = if kind == "check-triple" {
                &["a", "b", "t"]
            } else {
                &["a", "b", "t", "certificate", "witness"]
            };
            ctx.only(args, allowed)?;
            let (a, b, t) = (
                name_arg(ctx, args, "a")?,
                name_arg(ctx, args, "b")?,
                name_arg(ctx, args, "t")?,
            );
            require(&ws.algebras, &a)?;
            require(&ws.algebras, &b)?;
            require(&ws.bimodules, &t)?;
            let entry = &ws.bimodules[&t];
            if entry.left != a || entry.right != b {
                return Err(ctx.err(format!(
                    "`{t}` is a {}-{} bimodule",
                    entry.left, entry.right
                )));
            }
            if kind == "check-triple" {
                TaskSpec::CheckTriple { a, b, t }
            } else {
                let evidence = match (args.get("certificate"), args.get("witness")) {
                    (Some(_), Some(_)) => {
                        return Err(ctx.err("give a certificate or a witness, not both"))
                    }
                    (Some(c), None) => {
                        let c = ctx.str(c, "certificate")?.to_string();
                        require(&ws.certificates, &c)?;
                        Evidence::Certificate(c)
                    }
                    (None, Some(w)) => {
                        let w = ctx.str(w, "witness")?.to_string();
                        require(&ws.modules, &w)?;
                        Evidence::Witness(w)
                    }
                    (None, None) => Evidence::None,
                };
                TaskSpec::CheckMorita { a, b, t, evidence }
            }
        }
        "check-exc" | "check-full-exc" => {
            let allowed: &[&str] = if kind == "check-exc" {
                &["algebra", "objects"]
            } else {
                &["algebra", "objects", "certificate"]
            };
            ctx.only(args, allowed)?;
            let algebra = name_arg(ctx, args, "algebra")?;
            require(&ws.algebras, &algebra)?;
            let objects = names_arg(ctx, args, "objects")?;
            for o in &objects {
                require(&ws.complexes, o)?;
                if ws.complexes[o].over.algebra != algebra {
                    return Err(ctx.err(format!("`{o}` is not over `{algebra}`")));
                }
            }
            if kind == "check-exc" {
                TaskSpec::CheckExc { algebra, objects }
            } else {
                let certificate = name_arg(ctx, args, "certificate")?;
                require(&ws.certificates, &certificate)?;
                TaskSpec::CheckFullExc {
                    algebra,
                    objects,
                    certificate,
                }
            }
        }
        "transport" => {
            ctx.only(args, &["task", "extension"])?;
            let extension = name_arg(ctx, args, "extension")?;
            require(&ws.fields, &extension)?;
            let inner = ctx.obj(ctx.field(args, "task")?, "task")?;
            ctx.only(inner, &["task", "args"])?;
            let inner_kind = ctx.str(ctx.field(inner, "task")?, "task")?;
            let task = parse_spec(ctx, inner_kind, ctx.field(inner, "args")?, ws)?;
            if !task.is_checker() {
                return Err(ctx.err(format!("cannot transport a `{inner_kind}` task")));
            }
            TaskSpec::Transport {
                task: Box::new(task),
                extension,
            }
        }
        "base-change" => {
            ctx.only(args, &["object", "extension"])?;
            let (object, extension) = (
                name_arg(ctx, args, "object")?,
                name_arg(ctx, args, "extension")?,
            );
            require(&ws.fields, &extension)?;
            if !(ws.algebras.contains_key(&object)
                || ws.modules.contains_key(&object)
                || ws.bimodules.contains_key(&object)
                || ws.complexes.contains_key(&object)
                || ws.certificates.contains_key(&object))
            {
                return Err(DocError::UnknownReference(object));
            }
            TaskSpec::BaseChange { object, extension }
        }
        "check-hom-bc" => {
            ctx.only(args, &["complex", "module", "extension"])?;
            let (complex, module, extension) = (
                name_arg(ctx, args, "complex")?,
                name_arg(ctx, args, "module")?,
                name_arg(ctx, args, "extension")?,
            );
            require(&ws.complexes, &complex)?;
            require(&ws.modules, &module)?;
            require(&ws.fields, &extension)?;
            TaskSpec::CheckHomBc {
                complex,
                module,
                extension,
            }
        }
        "check-adjunction" => {
            ctx.only(args, &["module", "target", "extension"])?;
            let (module, target, extension) = (
                name_arg(ctx, args, "module")?,
                name_arg(ctx, args, "target")?,
                name_arg(ctx, args, "extension")?,
            );
            require(&ws.modules, &module)?;
            require(&ws.modules, &target)?;
            require(&ws.fields, &extension)?;
            TaskSpec::CheckAdjunction {
                module,
                target,
                extension,
            }
        }
        "sweep-hom-bc" => {
            ctx.only(args, &["algebra", "extension", "pairs", "cells"])?;
            let (algebra, extension) = (
                name_arg(ctx, args, "algebra")?,
                name_arg(ctx, args, "extension")?,
            );
            require(&ws.algebras, &algebra)?;
            require(&ws.fields, &extension)?;
            let pairs = ctx.index(ctx.field(args, "pairs")?, "pairs")?;
            let cells = args
                .get("cells")
                .map(|c| ctx.index(c, "cells"))
                .transpose()?
                .unwrap_or(2);
            TaskSpec::SweepHomBc {
                algebra,
                extension,
                pairs,
                cells,
            }
        }
        other => return Err(ctx.err(format!("unknown task kind `{other}`"))),
    };
    Ok(spec)
}

pub(crate) fn parse_task(ctx: &Ctx, v: &Value, ws: &Workspace) -> Result<TaskEntry, DocError> {
    let m = ctx.obj(v, "a task")?;
    ctx.only(m, &["task", "name", "window", "args"])?;
    let kind = ctx.str(ctx.field(m, "task")?, "task")?;
    let name = m
        .get("name")
        .map(|n| ctx.str(n, "name").map(str::to_string))
        .transpose()?;
    let window = m
        .get("window")
        .map(|w| ctx.int(w, "window").map(|x| x as i32))
        .transpose()?;
    if window.is_some_and(|w| w < 0) {
        return Err(ctx.err("window must be non-negative"));
    }
    let spec = parse_spec(ctx, kind, ctx.field(m, "args")?, ws)?;
    Ok(TaskEntry { name, window, spec })
}

fn print_args(spec: &TaskSpec) -> Value {
    match spec {
        TaskSpec::CheckTriple { a, b, t } => json!({"a": a, "b": b, "t": t}),
        TaskSpec::CheckMorita { a, b, t, evidence } => {
            let mut m = json!({"a": a, "b": b, "t": t});
            match evidence {
                Evidence::Certificate(c) => m["certificate"] = json!(c),
                Evidence::Witness(w) => m["witness"] = json!(w),
                Evidence::None => {}
            }
            m
        }
        TaskSpec::CheckExc { algebra, objects } => json!({"algebra": algebra, "objects": objects}),
        TaskSpec::CheckFullExc {
            algebra,
            objects,
            certificate,
        } => json!({"algebra": algebra, "objects": objects, "certificate": certificate}),
        TaskSpec::Transport { task, extension } => {
            json!({"task": {"task": task.kind(), "args": print_args(task)}, "extension": extension})
        }
        TaskSpec::BaseChange { object, extension } => {
            json!({"object": object, "extension": extension})
        }
        TaskSpec::CheckHomBc {
            complex,
            module,
            extension,
        } => json!({"complex": complex, "module": module, "extension": extension}),
        TaskSpec::CheckAdjunction {
            module,
            target,
            extension,
        } => json!({"module": module, "target": target, "extension": extension}),
        TaskSpec::SweepHomBc {
            algebra,
            extension,
            pairs,
            cells,
        } => json!({"algebra": algebra, "extension": extension, "pairs": pairs, "cells": cells}),
    }
}

pub(crate) fn print_task(t: &TaskEntry) -> Value {
    let mut m = Map::new();
    m.insert("task".into(), json!(t.spec.kind()));
    if let Some(n) = &t.name {
        m.insert("name".into(), json!(n));
    }
    if let Some(w) = t.window {
        m.insert("window".into(), json!(w));
    }
    m.insert("args".into(), print_args(&t.spec));
    Value::Object(m)
}

// ---------------------------------------------------------------------------
// Execution

/// Flag-level settings shared by every task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub window: i32,
    pub depth: usize,
    pub size: usize,
    pub seed: u64,
    pub reversed: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            window: 10,
            depth: 24,
            size: 2000,
            seed: 0,
            reversed: false,
        }
    }
}

impl RunOptions {
    fn check(&self, window: Option<i32>) -> CheckOptions {
        let mut o = CheckOptions {
            window: window.unwrap_or(self.window),
            ..CheckOptions::default()
        };
        o.resolve.depth_bound = self.depth;
        o.resolve.size_bound = self.size;
        o
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeSummary {
    pub entity: String,
    pub source_field: String,
    pub target_field: String,
    pub source_dim: usize,
    pub target_dim: usize,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub pairs: usize,
    pub agreeing: usize,
    /// Index and dims of the first disagreeing pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_disagreement: Option<(usize, BaseChangeReport)>,
}

/// The structured outcome of one task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Detail {
    Check { report: CheckReport },
    Transport { report: TransportReport },
    BaseChange { summary: BaseChangeSummary },
    HomBaseChange { report: BaseChangeReport },
    Adjunction { report: AdjunctionReport },
    Sweep { report: SweepReport },
    Error { message: String },
}

/// A certificate used by a task, kept for the report.
#[derive(Debug, Clone)]
pub struct UsedCertificate {
    pub role: &'static str,
    pub name: String,
    pub certificate: GenerationCertificate,
}

pub struct Outcome {
    pub verdict: Verdict,
    pub detail: Detail,
    pub certificates: Vec<UsedCertificate>,
}

impl Detail {
    /// The verdict implied by the detail alone.
    pub fn verdict(&self) -> Verdict {
        match self {
            Detail::Check { report } => report.verdict.clone(),
            Detail::Transport { report } => match report.conformance {
                Conformance::Anomaly => Verdict::fail("a passing check fails after extension"),
                _ => report.base.verdict.clone(),
            },
            Detail::BaseChange { summary }
                if summary.valid && summary.source_dim == summary.target_dim =>
            {
                Verdict::Pass
            }
            Detail::BaseChange { .. } => {
                Verdict::fail("extended object is invalid or changed dimension")
            }
            Detail::HomBaseChange { report } if report.agree => Verdict::Pass,
            Detail::HomBaseChange { .. } => Verdict::fail("Ext dimensions change under extension"),
            Detail::Adjunction { report } if report.agree => Verdict::Pass,
            Detail::Adjunction { .. } => Verdict::fail("adjunction dimensions disagree"),
            Detail::Sweep { report } if report.agreeing == report.pairs => Verdict::Pass,
            Detail::Sweep { .. } => Verdict::fail("Ext dimensions change under extension"),
            Detail::Error { message } => Verdict::undetermined(message.clone()),
        }
    }

    /// Process exit code for this task alone.
    pub fn exit_code(&self) -> i32 {
        match self {
            Detail::Error { .. } => 3,
            Detail::Transport { report } if report.conformance == Conformance::Anomaly => 4,
            _ => match self.verdict() {
                Verdict::Pass => 0,
                Verdict::Fail { .. } => 1,
                Verdict::Undetermined { .. } => 2,
            },
        }
    }

    /// Recomputation-free consistency of the recorded evidence.
    pub fn reverify(&self) -> Result<(), String> {
        match self {
            Detail::Check { report } => report.reverify(),
            Detail::Transport { report } => {
                report.base.reverify()?;
                report.extended.reverify()?;
                let expected = match (report.base.verdict.is_pass(), &report.extended.verdict) {
                    (false, _) => Conformance::NotApplicable,
                    (true, v) if v.is_pass() => Conformance::Preserved,
                    (true, v) if v.is_fail() => Conformance::Anomaly,
                    _ => Conformance::Weakened,
                };
                if expected != report.conformance {
                    return Err("conformance does not match the paired verdicts".into());
                }
                Ok(())
            }
            Detail::BaseChange { .. } | Detail::Error { .. } => Ok(()),
            Detail::HomBaseChange { report } => {
                agree_matches(report.agree, report.source_dims == report.target_dims)
            }
            Detail::Adjunction { report } => {
                agree_matches(report.agree, report.extended_side == report.restricted_side)
            }
            Detail::Sweep { report } => {
                if report.agreeing > report.pairs
                    || (report.agreeing < report.pairs) != report.first_disagreement.is_some()
                {
                    return Err("sweep counts do not add up".into());
                }
                match &report.first_disagreement {
                    Some((_, r)) if r.agree || r.source_dims == r.target_dims => {
                        Err("recorded disagreement agrees".into())
                    }
                    _ => Ok(()),
                }
            }
        }
    }
}

fn agree_matches(flag: bool, actual: bool) -> Result<(), String> {
    if flag == actual {
        Ok(())
    } else {
        Err("agreement flag does not match the listed dimensions".into())
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn complex_objects(ws: &Workspace, names: &[String]) -> Vec<(String, PerfObject)> {
    names
        .iter()
        .map(|n| (n.clone(), ws.complexes[n].object.clone()))
        .collect()
}

/// The algebra of the objects, or the named algebra when there are none.
fn objects_algebra(ws: &Workspace, algebra: &str, objects: &[(String, PerfObject)]) -> Algebra {
    objects
        .first()
        .map(|(_, x)| x.algebra().clone())
        .unwrap_or_else(|| ws.algebras[algebra].algebra.clone())
}

fn check_task(
    ws: &Workspace,
    spec: &TaskSpec,
    window: (i32, i32),
) -> Result<(CheckTask, Vec<UsedCertificate>), String> {
    Ok(match spec {
        TaskSpec::CheckTriple { t, .. } => {
            let t = ws.bimodules[t].bimodule.clone();
            (
                CheckTask::Triple {
                    a: t.left().clone(),
                    b: t.right().clone(),
                    t,
                },
                Vec::new(),
            )
        }
        TaskSpec::CheckMorita { t, evidence, .. } => {
            let t = ws.bimodules[t].bimodule.clone();
            let mut used = Vec::new();
            let evidence = match evidence {
                Evidence::None => MoritaEvidence::None,
                Evidence::Certificate(c) => {
                    let cert = ws.certificates[c].certificate.clone();
                    used.push(UsedCertificate {
                        role: "generation",
                        name: c.clone(),
                        certificate: cert.clone(),
                    });
                    MoritaEvidence::Certificate(cert)
                }
                Evidence::Witness(w) => MoritaEvidence::Witness {
                    name: w.clone(),
                    module: ws.modules[w].module.clone(),
                },
            };
            (
                CheckTask::Morita {
                    a: t.left().clone(),
                    b: t.right().clone(),
                    t,
                    evidence,
                },
                used,
            )
        }
        TaskSpec::CheckExc { algebra, objects } => {
            let objects = complex_objects(ws, objects);
            (
                CheckTask::Exceptional {
                    b: objects_algebra(ws, algebra, &objects),
                    objects,
                    window,
                },
                Vec::new(),
            )
        }
        TaskSpec::CheckFullExc {
            algebra,
            objects,
            certificate,
        } => {
            let objects = complex_objects(ws, objects);
            let cert = ws.certificates[certificate].certificate.clone();
            let used = vec![UsedCertificate {
                role: "generation",
                name: certificate.clone(),
                certificate: cert.clone(),
            }];
            (
                CheckTask::FullExceptional {
                    b: objects_algebra(ws, algebra, &objects),
                    objects,
                    certificate: cert,
                    window,
                },
                used,
            )
        }
        other => return Err(format!("`{}` is not a checker task", other.kind())),
    })
}

fn field(ws: &Workspace, name: &str) -> Field {
    ws.fields[name].clone()
}

fn extension_to(from: &Field, ws: &Workspace, to: &str) -> Result<ExtensionMap, String> {
    ExtensionMap::new(from, &field(ws, to)).map_err(err)
}

fn base_change(ws: &Workspace, object: &str, extension: &str) -> Result<BaseChangeSummary, String> {
    let target = field(ws, extension);
    let summary = |entity: &str, k: &Field, source_dim: usize, target_dim: usize, valid: bool| {
        BaseChangeSummary {
            entity: format!("{entity}.{object}"),
            source_field: k.to_string(),
            target_field: target.to_string(),
            source_dim,
            target_dim,
            valid,
        }
    };
    if let Some(e) = ws.algebras.get(object) {
        let a = &e.algebra;
        let x = extension_to(a.field(), ws, extension)?;
        let b = x.algebra(a).map_err(err)?;
        return Ok(summary(
            "algebras",
            a.field(),
            a.dim(),
            b.dim(),
            b.validate().passed(),
        ));
    }
    if let Some(e) = ws.modules.get(object) {
        let m = &e.module;
        let x = extension_to(m.field(), ws, extension)?;
        let n = x.module(m).map_err(err)?;
        return Ok(summary(
            "modules",
            m.field(),
            m.dim(),
            n.dim(),
            n.validate().passed(),
        ));
    }
    if let Some(e) = ws.bimodules.get(object) {
        let t = &e.bimodule;
        let x = extension_to(t.field(), ws, extension)?;
        let u = x.bimodule(t).map_err(err)?;
        return Ok(summary(
            "bimodules",
            t.field(),
            t.dim(),
            u.dim(),
            u.validate().passed(),
        ));
    }
    if let Some(e) = ws.complexes.get(object) {
        let o = &e.object;
        let x = extension_to(o.algebra().field(), ws, extension)?;
        let p = x.perf(o).map_err(err)?;
        return Ok(summary(
            "complexes",
            o.algebra().field(),
            o.cells().len(),
            p.cells().len(),
            true,
        ));
    }
    let c = &ws.certificates[object].certificate;
    let x = extension_to(c.algebra.field(), ws, extension)?;
    let d = c.extend(&x).map_err(err)?;
    let valid = d.replay().is_ok();
    Ok(summary(
        "certificates",
        c.algebra.field(),
        c.steps.len(),
        d.steps.len(),
        valid,
    ))
}

fn sweep(
    ws: &Workspace,
    algebra: &str,
    extension: &str,
    pairs: usize,
    cells: usize,
    window: (i32, i32),
    seed: u64,
) -> Result<SweepReport, String> {
    let a = ws.algebras[algebra].algebra.clone();
    let e = extension_to(a.field(), ws, extension)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SweepReport {
        seed,
        pairs,
        agreeing: 0,
        first_disagreement: None,
    };
    for i in 0..pairs {
        let x = random_perf(&mut rng, &a, cells).map_err(err)?;
        let f = random_module(&mut rng, &a, cells).map_err(err)?;
        let r = check_hom_base_change(&x, &f, &e, window).map_err(err)?;
        if r.agree {
            report.agreeing += 1;
        } else if report.first_disagreement.is_none() {
            report.first_disagreement = Some((i, r));
        }
    }
    Ok(report)
}

fn execute(
    ws: &Workspace,
    entry: &TaskEntry,
    spec: &TaskSpec,
    options: &RunOptions,
) -> Result<(Detail, Vec<UsedCertificate>), String> {
    let opts = options.check(entry.window);
    let window = (-opts.window, opts.window);
    match spec {
        TaskSpec::CheckTriple { .. }
        | TaskSpec::CheckMorita { .. }
        | TaskSpec::CheckExc { .. }
        | TaskSpec::CheckFullExc { .. } => {
            let (task, used) = check_task(ws, spec, window)?;
            let mut report = task.run(&opts).map_err(err)?;
            report.certificate_hashes = used
                .iter()
                .map(|u| crate::report::certificate_hash(ws, &u.name, &u.certificate))
                .collect();
            Ok((Detail::Check { report }, used))
        }
        TaskSpec::Transport { task, extension } => {
            let (inner, mut used) = check_task(ws, task, window)?;
            let base_field = match &inner {
                CheckTask::Triple { a, .. } | CheckTask::Morita { a, .. } => a.field().clone(),
                CheckTask::Exceptional { b, .. } | CheckTask::FullExceptional { b, .. } => {
                    b.field().clone()
                }
            };
            let e = extension_to(&base_field, ws, extension)?;
            let mut report = transport_and_recheck(&inner, &e, &opts).map_err(err)?;
            let extended: Vec<UsedCertificate> = used
                .iter()
                .map(|u| {
                    Ok(UsedCertificate {
                        role: "extended-generation",
                        name: u.name.clone(),
                        certificate: u.certificate.extend(&e).map_err(err)?,
                    })
                })
                .collect::<Result<_, String>>()?;
            report.base.certificate_hashes = used
                .iter()
                .map(|u| crate::report::certificate_hash(ws, &u.name, &u.certificate))
                .collect();
            report.extended.certificate_hashes = extended
                .iter()
                .map(|u| crate::report::certificate_hash(ws, &u.name, &u.certificate))
                .collect();
            used.extend(extended);
            Ok((Detail::Transport { report }, used))
        }
        TaskSpec::BaseChange { object, extension } => Ok((
            Detail::BaseChange {
                summary: base_change(ws, object, extension)?,
            },
            Vec::new(),
        )),
        TaskSpec::CheckHomBc {
            complex,
            module,
            extension,
        } => {
            let x = &ws.complexes[complex].object;
            let f = &ws.modules[module].module;
            let e = extension_to(x.algebra().field(), ws, extension)?;
            Ok((
                Detail::HomBaseChange {
                    report: check_hom_base_change(x, f, &e, window).map_err(err)?,
                },
                Vec::new(),
            ))
        }
        TaskSpec::CheckAdjunction {
            module,
            target,
            extension,
        } => {
            let x = &ws.modules[module].module;
            let f = &ws.modules[target].module;
            let e = extension_to(x.field(), ws, extension)?;
            let w = entry.window.map_or((0, 6), |w| (0, w));
            Ok((
                Detail::Adjunction {
                    report: check_adjunction_dims(x, f, &e, w, opts.resolve).map_err(err)?,
                },
                Vec::new(),
            ))
        }
        TaskSpec::SweepHomBc {
            algebra,
            extension,
            pairs,
            cells,
        } => Ok((
            Detail::Sweep {
                report: sweep(ws, algebra, extension, *pairs, *cells, window, options.seed)?,
            },
            Vec::new(),
        )),
    }
}

/// Runs one task; failures of the machinery become an `Error` detail.
pub fn run_task(ws: &Workspace, entry: &TaskEntry, options: &RunOptions) -> Outcome {
    let spec = if options.reversed {
        entry.spec.reversed()
    } else {
        entry.spec.clone()
    };
    let (detail, certificates) = match execute(ws, entry, &spec, options) {
        Ok(x) => x,
        Err(message) => (Detail::Error { message }, Vec::new()),
    };
    Outcome {
        verdict: detail.verdict(),
        detail,
        certificates,
    }
}

/// Whether a task is picked by a `--task` selector (kind or name).
pub fn selected(entry: &TaskEntry, selector: &[String]) -> bool {
    selector.is_empty()
        || selector
            .iter()
            .any(|s| s == entry.spec.kind() || entry.name.as_deref() == Some(s.as_str()))
}

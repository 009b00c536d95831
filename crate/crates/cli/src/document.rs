//! The `.dgw` document: one JSON object naming fields, algebras, modules,
//! bimodules, perfect complexes, certificates and tasks.
//!
//! Scalars are string literals in the grammar of the owning field. Structure
//! constants are lists of `[basis name, literal]` terms; omitted entries are
//! zero.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use dgw_core::basechange::ExtensionMap;
use dgw_core::checkers::{Claim, GenerationCertificate, NamedStep, Step};
use dgw_core::dg::{
    to_sparse, Algebra, DGAlgebra, DGBimodule, DGModule, GradedBasis, Sparse, ValidationReport,
};
use dgw_core::field::{BaseField, Field};
use dgw_core::linalg::Vector;
use dgw_core::perf::{AlgMatrix, PerfObject, TwistedComplex};
use dgw_core::resolve::{minimal_resolution, ResolutionStatus, ResolveOptions};
use indexmap::IndexMap;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::tasks::TaskSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("{entity}: {axiom}")]
    Validation { entity: String, axiom: String },
}

pub(crate) fn invalid(entity: &str, axiom: impl Into<String>) -> DocError {
    DocError::Validation {
        entity: entity.to_string(),
        axiom: axiom.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraEntry {
    pub field: String,
    pub algebra: Algebra,
}

/// An object over a named algebra, optionally extended to a larger field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Over {
    pub algebra: String,
    pub field: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleEntry {
    pub over: Over,
    pub module: DGModule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleEntry {
    pub left: String,
    pub right: String,
    pub field: Option<String>,
    pub bimodule: DGBimodule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexEntry {
    pub over: Over,
    pub object: PerfObject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Start {
    Complex {
        name: String,
        complex: String,
    },
    /// The finite semifree model of a bimodule viewed as a right module.
    ModelOf {
        name: String,
        bimodule: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateEntry {
    pub over: Over,
    pub starts: Vec<Start>,
    /// A complex name; the free module when absent.
    pub target: Option<String>,
    pub certificate: GenerationCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskEntry {
    pub name: Option<String>,
    pub window: Option<i32>,
    pub spec: TaskSpec,
}

/// A parsed and validated document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Workspace {
    pub fields: IndexMap<String, Field>,
    pub algebras: IndexMap<String, AlgebraEntry>,
    pub modules: IndexMap<String, ModuleEntry>,
    pub bimodules: IndexMap<String, BimoduleEntry>,
    pub complexes: IndexMap<String, ComplexEntry>,
    pub certificates: IndexMap<String, CertificateEntry>,
    pub tasks: Vec<TaskEntry>,
}

const TOP_LEVEL: [&str; 7] = [
    "fields",
    "algebras",
    "modules",
    "bimodules",
    "complexes",
    "certificates",
    "tasks",
];

// ---------------------------------------------------------------------------
// JSON access helpers

pub(crate) struct Ctx<'a> {
    pub entity: &'a str,
}

impl Ctx<'_> {
    pub fn err(&self, msg: impl Into<String>) -> DocError {
        invalid(self.entity, msg)
    }

    pub fn obj<'v>(&self, v: &'v Value, what: &str) -> Result<&'v Map<String, Value>, DocError> {
        v.as_object()
            .ok_or_else(|| self.err(format!("{what} must be an object")))
    }

    pub fn arr<'v>(&self, v: &'v Value, what: &str) -> Result<&'v Vec<Value>, DocError> {
        v.as_array()
            .ok_or_else(|| self.err(format!("{what} must be an array")))
    }

    pub fn str<'v>(&self, v: &'v Value, what: &str) -> Result<&'v str, DocError> {
        v.as_str()
            .ok_or_else(|| self.err(format!("{what} must be a string")))
    }

    pub fn int(&self, v: &Value, what: &str) -> Result<i64, DocError> {
        v.as_i64()
            .ok_or_else(|| self.err(format!("{what} must be an integer")))
    }

    pub fn index(&self, v: &Value, what: &str) -> Result<usize, DocError> {
        v.as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| self.err(format!("{what} must be a non-negative integer")))
    }

    pub fn field<'v>(&self, m: &'v Map<String, Value>, key: &str) -> Result<&'v Value, DocError> {
        m.get(key)
            .ok_or_else(|| self.err(format!("missing key \"{key}\"")))
    }

    pub fn only(&self, m: &Map<String, Value>, allowed: &[&str]) -> Result<(), DocError> {
        match m.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(self.err(format!("unexpected key \"{k}\""))),
            None => Ok(()),
        }
    }
}

fn scalar_literal(ctx: &Ctx, k: &Field, v: &Value) -> Result<dgw_core::field::Scalar, DocError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() => n.to_string(),
        _ => return Err(ctx.err("scalars must be string literals")),
    };
    k.parse(&text)
        .map_err(|e| ctx.err(format!("bad scalar `{text}`: {e}")))
}

/// `[[name, literal], ...]` into a dense vector over `basis`.
fn terms(ctx: &Ctx, k: &Field, basis: &GradedBasis, v: &Value) -> Result<Vector, DocError> {
    let mut out = vec![k.zero(); basis.len()];
    for t in ctx.arr(v, "term list")? {
        let pair = ctx.arr(t, "term")?;
        if pair.len() != 2 {
            return Err(ctx.err("a term is [basis name, scalar]"));
        }
        let name = ctx.str(&pair[0], "basis name")?;
        let i = basis
            .index_of(name)
            .map_err(|_| DocError::UnknownReference(name.to_string()))?;
        let c = scalar_literal(ctx, k, &pair[1])?;
        out[i] = k.add(&out[i], &c);
    }
    Ok(out)
}

fn print_terms(k: &Field, basis: &GradedBasis, v: &[dgw_core::field::Scalar]) -> Value {
    Value::Array(
        to_sparse(v)
            .into_iter()
            .map(|(i, c)| json!([basis.names[i], k.format(&c)]))
            .collect(),
    )
}

fn print_sparse(k: &Field, basis: &GradedBasis, s: &Sparse) -> Value {
    Value::Array(
        s.iter()
            .map(|(i, c)| json!([basis.names[*i], k.format(c)]))
            .collect(),
    )
}

fn parse_basis(ctx: &Ctx, v: &Value) -> Result<GradedBasis, DocError> {
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    for b in ctx.arr(v, "basis")? {
        let m = ctx.obj(b, "basis entry")?;
        ctx.only(m, &["name", "deg"])?;
        names.push(ctx.str(ctx.field(m, "name")?, "basis name")?.to_string());
        degrees.push(ctx.int(ctx.field(m, "deg")?, "degree")? as i32);
    }
    GradedBasis::new(names, degrees).map_err(|e| ctx.err(e.to_string()))
}

fn print_basis(b: &GradedBasis) -> Value {
    Value::Array(
        b.names
            .iter()
            .zip(&b.degrees)
            .map(|(n, d)| json!({"name": n, "deg": d}))
            .collect(),
    )
}

fn check_report(entity: &str, r: ValidationReport) -> Result<(), DocError> {
    match r.violation {
        None => Ok(()),
        Some(v) => Err(invalid(
            entity,
            format!("{:?} fails at ({})", v.axiom, v.witness.join(", ")),
        )),
    }
}

/// `[[row, col, terms], ...]` into a `rows × cols` matrix over `a`.
fn parse_alg_matrix(
    ctx: &Ctx,
    a: &Algebra,
    rows: usize,
    cols: usize,
    v: &Value,
) -> Result<AlgMatrix, DocError> {
    let mut m = AlgMatrix::zeros(a, rows, cols);
    let mut seen = HashSet::new();
    for e in ctx.arr(v, "matrix")? {
        let e = ctx.arr(e, "matrix entry")?;
        if e.len() != 3 {
            return Err(ctx.err("a matrix entry is [row, col, terms]"));
        }
        let (i, j) = (ctx.index(&e[0], "row")?, ctx.index(&e[1], "column")?);
        if i >= rows || j >= cols {
            return Err(ctx.err(format!("entry ({i}, {j}) outside a {rows}×{cols} matrix")));
        }
        if !seen.insert((i, j)) {
            return Err(ctx.err(format!("entry ({i}, {j}) given twice")));
        }
        m.set(i, j, terms(ctx, a.field(), a.basis(), &e[2])?);
    }
    Ok(m)
}

fn print_alg_matrix(a: &Algebra, m: &AlgMatrix) -> Value {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if v.iter().any(|x| !x.is_zero()) {
                out.push(json!([i, j, print_terms(a.field(), a.basis(), v)]));
            }
        }
    }
    Value::Array(out)
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'d> {
    doc: &'d Map<String, Value>,
    ws: Workspace,
    extended: HashMap<(String, String), Algebra>,
}

/// Parses and validates a document.
pub fn parse_document(text: &str) -> Result<Workspace, DocError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DocError::Syntax {
        line: e.line(),
        col: e.column(),
        message: e.to_string(),
    })?;
    parse_value(&value)
}

pub fn parse_value(value: &Value) -> Result<Workspace, DocError> {
    let ctx = Ctx { entity: "document" };
    let doc = ctx.obj(value, "the document")?;
    ctx.only(doc, &TOP_LEVEL)?;
    let mut p = Parser {
        doc,
        ws: Workspace::default(),
        extended: HashMap::new(),
    };
    p.fields()?;
    p.algebras()?;
    p.modules()?;
    p.bimodules()?;
    p.complexes()?;
    p.certificates()?;
    p.tasks()?;
    Ok(p.ws)
}

impl<'d> Parser<'d> {
    fn section(&self, key: &str) -> Result<Vec<(&'d String, &'d Value)>, DocError> {
        match self.doc.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Object(m)) => Ok(m.iter().collect()),
            Some(_) => Err(invalid(key, "section must be an object keyed by name")),
        }
    }

    fn fields(&mut self) -> Result<(), DocError> {
        let entries: IndexMap<&String, &Value> = self.section("fields")?.into_iter().collect();
        fn build(
            name: &str,
            entries: &IndexMap<&String, &Value>,
            done: &mut IndexMap<String, Field>,
            visiting: &mut Vec<String>,
        ) -> Result<Field, DocError> {
            if let Some(f) = done.get(name) {
                return Ok(f.clone());
            }
            let entity = format!("fields.{name}");
            let ctx = Ctx { entity: &entity };
            if visiting.iter().any(|v| v == name) {
                return Err(ctx.err("cyclic definition"));
            }
            let v = entries
                .get(&name.to_string())
                .ok_or_else(|| DocError::UnknownReference(name.to_string()))?;
            let m = ctx.obj(v, "a field")?;
            let field = if let Some(base) = m.get("base") {
                ctx.only(m, &["base"])?;
                match ctx.str(base, "base")? {
                    "Q" => Field::rationals(),
                    s if s.starts_with('F') => {
                        let p: u64 = s[1..]
                            .parse()
                            .map_err(|_| ctx.err(format!("bad base field `{s}`")))?;
                        Field::prime_field(p).map_err(|e| ctx.err(e.to_string()))?
                    }
                    s => return Err(ctx.err(format!("bad base field `{s}`"))),
                }
            } else {
                ctx.only(m, &["over", "generator", "minpoly"])?;
                let over = ctx.str(ctx.field(m, "over")?, "over")?;
                visiting.push(name.to_string());
                let parent = build(over, entries, done, visiting)?;
                visiting.pop();
                let generator = ctx.str(ctx.field(m, "generator")?, "generator")?;
                let minpoly = ctx
                    .arr(ctx.field(m, "minpoly")?, "minpoly")?
                    .iter()
                    .map(|c| scalar_literal(&ctx, &parent, c))
                    .collect::<Result<Vec<_>, _>>()?;
                parent
                    .extend(generator, minpoly)
                    .map_err(|e| ctx.err(e.to_string()))?
            };
            done.insert(name.to_string(), field.clone());
            Ok(field)
        }
        let mut done = IndexMap::new();
        for name in entries.keys() {
            build(name, &entries, &mut done, &mut Vec::new())?;
        }
        // keep document order
        for name in entries.keys() {
            let f = done[name.as_str()].clone();
            self.ws.fields.insert(name.to_string(), f);
        }
        Ok(())
    }

    fn field_ref(&self, name: &str) -> Result<Field, DocError> {
        self.ws
            .fields
            .get(name)
            .cloned()
            .ok_or_else(|| DocError::UnknownReference(name.to_string()))
    }

    fn algebras(&mut self) -> Result<(), DocError> {
        for (name, v) in self.section("algebras")? {
            let entity = format!("algebras.{name}");
            let ctx = Ctx { entity: &entity };
            let m = ctx.obj(v, "an algebra")?;
            ctx.only(m, &["field", "basis", "unit", "mul", "diff"])?;
            let fname = ctx.str(ctx.field(m, "field")?, "field")?;
            let k = self.field_ref(fname)?;
            let basis = parse_basis(&ctx, ctx.field(m, "basis")?)?;
            let n = basis.len();
            let unit = match ctx.field(m, "unit")? {
                Value::String(s) => terms(&ctx, &k, &basis, &json!([[s, "1"]]))?,
                Value::Array(items) if items.iter().all(Value::is_string) => terms(
                    &ctx,
                    &k,
                    &basis,
                    &Value::Array(items.iter().map(|s| json!([s, "1"])).collect()),
                )?,
                other => terms(&ctx, &k, &basis, other)?,
            };
            let mut mul: Vec<Sparse> = vec![Vec::new(); n * n];
            let mut seen = HashSet::new();
            for e in m
                .get("mul")
                .map(|v| ctx.arr(v, "mul"))
                .transpose()?
                .into_iter()
                .flatten()
            {
                let e = ctx.arr(e, "mul entry")?;
                if e.len() != 3 {
                    return Err(ctx.err("a mul entry is [left, right, terms]"));
                }
                let (l, r) = (
                    ctx.str(&e[0], "left factor")?,
                    ctx.str(&e[1], "right factor")?,
                );
                let i = basis
                    .index_of(l)
                    .map_err(|_| DocError::UnknownReference(l.to_string()))?;
                let j = basis
                    .index_of(r)
                    .map_err(|_| DocError::UnknownReference(r.to_string()))?;
                if !seen.insert((i, j)) {
                    return Err(ctx.err(format!("product {l}·{r} given twice")));
                }
                mul[i * n + j] = to_sparse(&terms(&ctx, &k, &basis, &e[2])?);
            }
            let diff = self.diff_table(&ctx, &k, &basis, m.get("diff"))?;
            let a =
                DGAlgebra::new(&k, basis, unit, mul, diff).map_err(|e| ctx.err(e.to_string()))?;
            check_report(&entity, a.validate())?;
            self.ws.algebras.insert(
                name.clone(),
                AlgebraEntry {
                    field: fname.to_string(),
                    algebra: Arc::new(a),
                },
            );
        }
        Ok(())
    }

    fn diff_table(
        &self,
        ctx: &Ctx,
        k: &Field,
        basis: &GradedBasis,
        v: Option<&Value>,
    ) -> Result<Vec<Sparse>, DocError> {
        let mut diff: Vec<Sparse> = vec![Vec::new(); basis.len()];
        let mut seen = HashSet::new();
        for e in v
            .map(|v| ctx.arr(v, "diff"))
            .transpose()?
            .into_iter()
            .flatten()
        {
            let e = ctx.arr(e, "diff entry")?;
            if e.len() != 2 {
                return Err(ctx.err("a diff entry is [from, terms]"));
            }
            let s = ctx.str(&e[0], "basis name")?;
            let i = basis
                .index_of(s)
                .map_err(|_| DocError::UnknownReference(s.to_string()))?;
            if !seen.insert(i) {
                return Err(ctx.err(format!("differential of {s} given twice")));
            }
            diff[i] = to_sparse(&terms(ctx, k, basis, &e[1])?);
        }
        Ok(diff)
    }

    /// The named algebra, extended to `field` when one is given.
    fn over(
        &mut self,
        ctx: &Ctx,
        m: &Map<String, Value>,
        key: &str,
    ) -> Result<(Over, Algebra), DocError> {
        let aname = ctx.str(ctx.field(m, key)?, key)?.to_string();
        let field = m
            .get("field")
            .map(|f| ctx.str(f, "field").map(str::to_string))
            .transpose()?;
        let a = self.algebra_over(ctx, &aname, field.as_deref())?;
        Ok((
            Over {
                algebra: aname,
                field,
            },
            a,
        ))
    }

    fn algebra_over(
        &mut self,
        ctx: &Ctx,
        aname: &str,
        field: Option<&str>,
    ) -> Result<Algebra, DocError> {
        let base = self
            .ws
            .algebras
            .get(aname)
            .ok_or_else(|| DocError::UnknownReference(aname.to_string()))?
            .algebra
            .clone();
        let Some(f) = field else { return Ok(base) };
        let key = (aname.to_string(), f.to_string());
        if let Some(a) = self.extended.get(&key) {
            return Ok(a.clone());
        }
        let target = self.field_ref(f)?;
        let e = ExtensionMap::new(base.field(), &target).map_err(|e| ctx.err(e.to_string()))?;
        let a = e.algebra(&base).map_err(|e| ctx.err(e.to_string()))?;
        self.extended.insert(key, a.clone());
        Ok(a)
    }

    fn action_table(
        &self,
        ctx: &Ctx,
        basis: &GradedBasis,
        outer: &GradedBasis,
        k: &Field,
        v: Option<&Value>,
        module_first: bool,
    ) -> Result<Vec<Sparse>, DocError> {
        let (n, na) = (basis.len(), outer.len());
        let mut table: Vec<Sparse> = vec![Vec::new(); n * na];
        let mut seen = HashSet::new();
        for e in v
            .map(|v| ctx.arr(v, "action"))
            .transpose()?
            .into_iter()
            .flatten()
        {
            let e = ctx.arr(e, "action entry")?;
            if e.len() != 3 {
                return Err(ctx.err("an action entry is [left, right, terms]"));
            }
            let (l, r) = (
                ctx.str(&e[0], "left factor")?,
                ctx.str(&e[1], "right factor")?,
            );
            let (mname, aname) = if module_first { (l, r) } else { (r, l) };
            let t = basis
                .index_of(mname)
                .map_err(|_| DocError::UnknownReference(mname.to_string()))?;
            let i = outer
                .index_of(aname)
                .map_err(|_| DocError::UnknownReference(aname.to_string()))?;
            let slot = if module_first { t * na + i } else { i * n + t };
            if !seen.insert(slot) {
                return Err(ctx.err(format!("action {l}·{r} given twice")));
            }
            table[slot] = to_sparse(&terms(ctx, k, basis, &e[2])?);
        }
        Ok(table)
    }

    fn modules(&mut self) -> Result<(), DocError> {
        for (name, v) in self.section("modules")? {
            let entity = format!("modules.{name}");
            let ctx = Ctx { entity: &entity };
            let m = ctx.obj(v, "a module")?;
            ctx.only(m, &["algebra", "field", "basis", "action", "diff"])?;
            let (over, a) = self.over(&ctx, m, "algebra")?;
            let basis = parse_basis(&ctx, ctx.field(m, "basis")?)?;
            let action =
                self.action_table(&ctx, &basis, a.basis(), a.field(), m.get("action"), true)?;
            let diff = self.diff_table(&ctx, a.field(), &basis, m.get("diff"))?;
            let module =
                DGModule::new(&a, basis, action, diff).map_err(|e| ctx.err(e.to_string()))?;
            check_report(&entity, module.validate())?;
            self.ws
                .modules
                .insert(name.clone(), ModuleEntry { over, module });
        }
        Ok(())
    }

    fn bimodules(&mut self) -> Result<(), DocError> {
        for (name, v) in self.section("bimodules")? {
            let entity = format!("bimodules.{name}");
            let ctx = Ctx { entity: &entity };
            let m = ctx.obj(v, "a bimodule")?;
            ctx.only(
                m,
                &[
                    "left",
                    "right",
                    "field",
                    "basis",
                    "left_action",
                    "right_action",
                    "diff",
                ],
            )?;
            let (lo, left) = self.over(&ctx, m, "left")?;
            let (ro, right) = self.over(&ctx, m, "right")?;
            let basis = parse_basis(&ctx, ctx.field(m, "basis")?)?;
            let k = left.field().clone();
            let la =
                self.action_table(&ctx, &basis, left.basis(), &k, m.get("left_action"), false)?;
            let ra =
                self.action_table(&ctx, &basis, right.basis(), &k, m.get("right_action"), true)?;
            let diff = self.diff_table(&ctx, &k, &basis, m.get("diff"))?;
            let bimodule = DGBimodule::new(&left, &right, basis, la, ra, diff)
                .map_err(|e| ctx.err(e.to_string()))?;
            check_report(&entity, bimodule.validate())?;
            self.ws.bimodules.insert(
                name.clone(),
                BimoduleEntry {
                    left: lo.algebra,
                    right: ro.algebra,
                    field: lo.field,
                    bimodule,
                },
            );
        }
        Ok(())
    }

    fn complexes(&mut self) -> Result<(), DocError> {
        for (name, v) in self.section("complexes")? {
            let entity = format!("complexes.{name}");
            let ctx = Ctx { entity: &entity };
            let m = ctx.obj(v, "a complex")?;
            ctx.only(m, &["algebra", "field", "cells", "twist", "idempotent"])?;
            let (over, a) = self.over(&ctx, m, "algebra")?;
            let cells = ctx
                .arr(ctx.field(m, "cells")?, "cells")?
                .iter()
                .map(|c| ctx.int(c, "cell").map(|x| x as i32))
                .collect::<Result<Vec<_>, _>>()?;
            let r = cells.len();
            let twist = match m.get("twist") {
                Some(t) => parse_alg_matrix(&ctx, &a, r, r, t)?,
                None => AlgMatrix::zeros(&a, r, r),
            };
            let idempotent = m
                .get("idempotent")
                .map(|e| parse_alg_matrix(&ctx, &a, r, r, e))
                .transpose()?;
            let tc = TwistedComplex::new(&a, cells, twist).map_err(|e| ctx.err(e.to_string()))?;
            let object = PerfObject::new(tc, idempotent).map_err(|e| ctx.err(e.to_string()))?;
            self.ws
                .complexes
                .insert(name.clone(), ComplexEntry { over, object });
        }
        Ok(())
    }

    fn certificates(&mut self) -> Result<(), DocError> {
        for (name, v) in self.section("certificates")? {
            let entity = format!("certificates.{name}");
            let ctx = Ctx { entity: &entity };
            let m = ctx.obj(v, "a certificate")?;
            ctx.only(
                m,
                &["algebra", "field", "starts", "steps", "target", "claim"],
            )?;
            let (over, a) = self.over(&ctx, m, "algebra")?;
            let mut starts = Vec::new();
            let mut objects = Vec::new();
            let mut sizes: HashMap<String, usize> = HashMap::new();
            for s in ctx.arr(ctx.field(m, "starts")?, "starts")? {
                let s = ctx.obj(s, "start")?;
                ctx.only(s, &["name", "complex", "model_of"])?;
                let sname = ctx.str(ctx.field(s, "name")?, "start name")?.to_string();
                let (start, object) = if let Some(c) = s.get("complex") {
                    let c = ctx.str(c, "complex")?;
                    let entry = self
                        .ws
                        .complexes
                        .get(c)
                        .ok_or_else(|| DocError::UnknownReference(c.to_string()))?;
                    (
                        Start::Complex {
                            name: sname.clone(),
                            complex: c.to_string(),
                        },
                        entry.object.clone(),
                    )
                } else {
                    let t = ctx.str(ctx.field(s, "model_of")?, "model_of")?;
                    let entry = self
                        .ws
                        .bimodules
                        .get(t)
                        .ok_or_else(|| DocError::UnknownReference(t.to_string()))?;
                    let res = minimal_resolution(
                        &entry.bimodule.right_module(),
                        ResolveOptions::default(),
                    )
                    .map_err(|e| ctx.err(e.to_string()))?;
                    if !matches!(res.status(), ResolutionStatus::Finite { .. }) {
                        return Err(ctx.err(format!("`{t}` has no finite model")));
                    }
                    (
                        Start::ModelOf {
                            name: sname.clone(),
                            bimodule: t.to_string(),
                        },
                        res.model().map_err(|e| ctx.err(e.to_string()))?,
                    )
                };
                if object.algebra() != &a {
                    return Err(ctx.err(format!("start `{sname}` is over another algebra")));
                }
                sizes.insert(sname.clone(), object.cells().len());
                starts.push(start);
                objects.push((sname, object));
            }
            let size = |n: &str, sizes: &HashMap<String, usize>| {
                sizes
                    .get(n)
                    .copied()
                    .ok_or_else(|| DocError::UnknownReference(n.to_string()))
            };
            let mut steps = Vec::new();
            for s in m
                .get("steps")
                .map(|v| ctx.arr(v, "steps"))
                .transpose()?
                .into_iter()
                .flatten()
            {
                let s = ctx.obj(s, "step")?;
                let sname = ctx.str(ctx.field(s, "name")?, "step name")?.to_string();
                let kinds: Vec<&String> = s.keys().filter(|k| *k != "name").collect();
                if kinds.len() != 1 {
                    return Err(ctx.err(format!(
                        "step `{sname}` must have exactly one of shift, sum, cone, summand"
                    )));
                }
                let body = &s[kinds[0].as_str()];
                let (step, cells) = match kinds[0].as_str() {
                    "shift" => {
                        let b = ctx.obj(body, "shift")?;
                        ctx.only(b, &["of", "by"])?;
                        let of = ctx.str(ctx.field(b, "of")?, "of")?.to_string();
                        let by = ctx.int(ctx.field(b, "by")?, "by")? as i32;
                        let c = size(&of, &sizes)?;
                        (Step::Shift { of, by }, c)
                    }
                    "sum" => {
                        let b = ctx.arr(body, "sum")?;
                        if b.len() != 2 {
                            return Err(ctx.err("sum takes two names"));
                        }
                        let (l, r) = (
                            ctx.str(&b[0], "summand")?.to_string(),
                            ctx.str(&b[1], "summand")?.to_string(),
                        );
                        let c = size(&l, &sizes)? + size(&r, &sizes)?;
                        (Step::Sum { left: l, right: r }, c)
                    }
                    "cone" => {
                        let b = ctx.obj(body, "cone")?;
                        ctx.only(b, &["source", "target", "matrix"])?;
                        let source = ctx.str(ctx.field(b, "source")?, "source")?.to_string();
                        let target = ctx.str(ctx.field(b, "target")?, "target")?.to_string();
                        let (cs, ct) = (size(&source, &sizes)?, size(&target, &sizes)?);
                        let matrix = parse_alg_matrix(&ctx, &a, ct, cs, ctx.field(b, "matrix")?)?;
                        (
                            Step::Cone {
                                source,
                                target,
                                matrix,
                            },
                            cs + ct,
                        )
                    }
                    "summand" => {
                        let b = ctx.obj(body, "summand")?;
                        ctx.only(b, &["of", "idempotent"])?;
                        let of = ctx.str(ctx.field(b, "of")?, "of")?.to_string();
                        let c = size(&of, &sizes)?;
                        let idempotent =
                            parse_alg_matrix(&ctx, &a, c, c, ctx.field(b, "idempotent")?)?;
                        (Step::Summand { of, idempotent }, c)
                    }
                    other => return Err(ctx.err(format!("unknown step kind `{other}`"))),
                };
                sizes.insert(sname.clone(), cells);
                steps.push(NamedStep { name: sname, step });
            }
            let target_name = m
                .get("target")
                .map(|t| ctx.str(t, "target").map(str::to_string))
                .transpose()?;
            let target = match &target_name {
                None => PerfObject::free(&a),
                Some(t) => self
                    .ws
                    .complexes
                    .get(t)
                    .ok_or_else(|| DocError::UnknownReference(t.clone()))?
                    .object
                    .clone(),
            };
            let c = ctx.obj(ctx.field(m, "claim")?, "claim")?;
            ctx.only(c, &["from", "matrix"])?;
            let from = ctx.str(ctx.field(c, "from")?, "from")?.to_string();
            let matrix = parse_alg_matrix(
                &ctx,
                &a,
                target.cells().len(),
                size(&from, &sizes)?,
                ctx.field(c, "matrix")?,
            )?;
            let certificate = GenerationCertificate {
                algebra: a,
                starts: objects,
                steps,
                target,
                claim: Claim { from, matrix },
            };
            self.ws.certificates.insert(
                name.clone(),
                CertificateEntry {
                    over,
                    starts,
                    target: target_name,
                    certificate,
                },
            );
        }
        Ok(())
    }

    fn tasks(&mut self) -> Result<(), DocError> {
        let ctx = Ctx { entity: "tasks" };
        let Some(v) = self.doc.get("tasks") else {
            return Ok(());
        };
        for (i, t) in ctx.arr(v, "tasks")?.iter().enumerate() {
            let entity = format!("tasks[{i}]");
            let entry = crate::tasks::parse_task(&Ctx { entity: &entity }, t, &self.ws)?;
            self.ws.tasks.push(entry);
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Printing

fn print_over(out: &mut Map<String, Value>, key: &str, over: &Over) {
    out.insert(key.into(), json!(over.algebra));
    if let Some(f) = &over.field {
        out.insert("field".into(), json!(f));
    }
}

fn print_action(
    basis: &GradedBasis,
    outer: &GradedBasis,
    k: &Field,
    table: impl Fn(usize, usize) -> Sparse,
    module_first: bool,
) -> Value {
    let mut out = Vec::new();
    let (n, na) = (basis.len(), outer.len());
    let pairs: Vec<(usize, usize)> = if module_first {
        (0..n).flat_map(|t| (0..na).map(move |i| (t, i))).collect()
    } else {
        (0..na).flat_map(|i| (0..n).map(move |t| (t, i))).collect()
    };
    for (t, i) in pairs {
        let s = table(t, i);
        if !s.is_empty() {
            let (l, r) = if module_first {
                (&basis.names[t], &outer.names[i])
            } else {
                (&outer.names[i], &basis.names[t])
            };
            out.push(json!([l, r, print_sparse(k, basis, &s)]));
        }
    }
    Value::Array(out)
}

fn print_diff(basis: &GradedBasis, k: &Field, d: impl Fn(usize) -> Sparse) -> Value {
    Value::Array(
        (0..basis.len())
            .filter_map(|t| {
                Some(d(t))
                    .filter(|s| !s.is_empty())
                    .map(|s| json!([basis.names[t], print_sparse(k, basis, &s)]))
            })
            .collect(),
    )
}

impl Workspace {
    pub fn field_name(&self, k: &Field) -> Option<&str> {
        self.fields
            .iter()
            .find(|(_, f)| *f == k)
            .map(|(n, _)| n.as_str())
    }

    pub fn print(&self) -> Value {
        let mut doc = Map::new();
        let mut fields = Map::new();
        for (name, k) in &self.fields {
            let v = match k.parent() {
                None => match k.base_field() {
                    BaseField::Rationals => json!({"base": "Q"}),
                    BaseField::PrimeField(p) => json!({"base": format!("F{p}")}),
                },
                Some(parent) => {
                    let step = k.steps().last().expect("extension has a step");
                    json!({
                        "over": self.field_name(parent).expect("parent field is declared"),
                        "generator": step.generator,
                        "minpoly": step.minpoly.iter().map(|c| parent.format(c)).collect::<Vec<_>>(),
                    })
                }
            };
            fields.insert(name.clone(), v);
        }
        doc.insert("fields".into(), Value::Object(fields));

        let mut algebras = Map::new();
        for (name, e) in &self.algebras {
            let a = &e.algebra;
            let (k, b, n) = (a.field(), a.basis(), a.dim());
            let unit: Vec<Value> = to_sparse(a.unit())
                .into_iter()
                .map(|(i, c)| {
                    if k.is_one(&c) {
                        json!(b.names[i])
                    } else {
                        json!([b.names[i], k.format(&c)])
                    }
                })
                .collect();
            let unit = if unit.len() == 1 && unit[0].is_string() {
                unit[0].clone()
            } else if unit.iter().all(Value::is_string) {
                json!(unit)
            } else {
                json!(to_sparse(a.unit())
                    .into_iter()
                    .map(|(i, c)| json!([b.names[i], k.format(&c)]))
                    .collect::<Vec<_>>())
            };
            let mul: Vec<Value> = (0..n * n)
                .filter(|ij| !a.product(ij / n, ij % n).is_empty())
                .map(|ij| {
                    json!([
                        b.names[ij / n],
                        b.names[ij % n],
                        print_sparse(k, b, a.product(ij / n, ij % n))
                    ])
                })
                .collect();
            algebras.insert(
                name.clone(),
                json!({
                    "field": e.field,
                    "basis": print_basis(b),
                    "unit": unit,
                    "mul": mul,
                    "diff": print_diff(b, k, |i| a.differential(i).clone()),
                }),
            );
        }
        doc.insert("algebras".into(), Value::Object(algebras));

        let mut modules = Map::new();
        for (name, e) in &self.modules {
            let m = &e.module;
            let mut out = Map::new();
            print_over(&mut out, "algebra", &e.over);
            out.insert("basis".into(), print_basis(m.basis()));
            out.insert(
                "action".into(),
                print_action(
                    m.basis(),
                    m.algebra().basis(),
                    m.field(),
                    |t, i| m.action(t, i).clone(),
                    true,
                ),
            );
            out.insert(
                "diff".into(),
                print_diff(m.basis(), m.field(), |t| m.differential(t).clone()),
            );
            modules.insert(name.clone(), Value::Object(out));
        }
        doc.insert("modules".into(), Value::Object(modules));

        let mut bimodules = Map::new();
        for (name, e) in &self.bimodules {
            let t = &e.bimodule;
            let mut out = Map::new();
            out.insert("left".into(), json!(e.left));
            out.insert("right".into(), json!(e.right));
            if let Some(f) = &e.field {
                out.insert("field".into(), json!(f));
            }
            out.insert("basis".into(), print_basis(t.basis()));
            out.insert(
                "left_action".into(),
                print_action(
                    t.basis(),
                    t.left().basis(),
                    t.field(),
                    |s, i| t.left_action(i, s).clone(),
                    false,
                ),
            );
            out.insert(
                "right_action".into(),
                print_action(
                    t.basis(),
                    t.right().basis(),
                    t.field(),
                    |s, j| t.right_action(s, j).clone(),
                    true,
                ),
            );
            out.insert(
                "diff".into(),
                print_diff(t.basis(), t.field(), |s| t.differential(s).clone()),
            );
            bimodules.insert(name.clone(), Value::Object(out));
        }
        doc.insert("bimodules".into(), Value::Object(bimodules));

        let mut complexes = Map::new();
        for (name, e) in &self.complexes {
            complexes.insert(name.clone(), print_complex(&e.over, &e.object));
        }
        doc.insert("complexes".into(), Value::Object(complexes));

        let mut certificates = Map::new();
        for (name, e) in &self.certificates {
            certificates.insert(name.clone(), print_certificate(e));
        }
        doc.insert("certificates".into(), Value::Object(certificates));
        doc.insert(
            "tasks".into(),
            Value::Array(self.tasks.iter().map(crate::tasks::print_task).collect()),
        );
        Value::Object(doc)
    }

    /// Canonical text: objects one key per line, arrays without objects on one line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        layout(&self.print(), 0, &mut s);
        s.push('\n');
        s
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Object(m) => format!(
            "{{{}}}",
            m.iter()
                .map(|(k, x)| format!("{}: {}", Value::String(k.clone()), inline(x)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Values that fit in 100 columns stay on one line; larger ones get one
/// entry per line.
fn layout(v: &Value, indent: usize, out: &mut String) {
    let flat = inline(v);
    if 2 * indent + flat.len() <= 100 {
        out.push_str(&flat);
        return;
    }
    let pad = |n: usize| "  ".repeat(n);
    let (open, close, items): (char, char, Vec<(Option<&String>, &Value)>) = match v {
        Value::Object(m) => ('{', '}', m.iter().map(|(k, x)| (Some(k), x)).collect()),
        Value::Array(xs) => ('[', ']', xs.iter().map(|x| (None, x)).collect()),
        _ => {
            out.push_str(&flat);
            return;
        }
    };
    out.push(open);
    out.push('\n');
    for (i, (k, x)) in items.iter().enumerate() {
        out.push_str(&pad(indent + 1));
        if let Some(k) = k {
            out.push_str(&Value::String((*k).clone()).to_string());
            out.push_str(": ");
        }
        layout(x, indent + 1, out);
        out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
    }
    out.push_str(&pad(indent));
    out.push(close);
}

pub(crate) fn print_complex(over: &Over, x: &PerfObject) -> Value {
    let a = x.algebra();
    let mut out = Map::new();
    print_over(&mut out, "algebra", over);
    out.insert("cells".into(), json!(x.cells()));
    out.insert("twist".into(), print_alg_matrix(a, x.complex().twist()));
    if let Some(e) = x.idempotent() {
        out.insert("idempotent".into(), print_alg_matrix(a, e));
    }
    Value::Object(out)
}

pub(crate) fn print_certificate(e: &CertificateEntry) -> Value {
    let a = &e.certificate.algebra;
    let mut out = Map::new();
    print_over(&mut out, "algebra", &e.over);
    let starts: Vec<Value> = e
        .starts
        .iter()
        .map(|s| match s {
            Start::Complex { name, complex } => json!({"name": name, "complex": complex}),
            Start::ModelOf { name, bimodule } => json!({"name": name, "model_of": bimodule}),
        })
        .collect();
    out.insert("starts".into(), Value::Array(starts));
    let steps: Vec<Value> = e
        .certificate
        .steps
        .iter()
        .map(|s| match &s.step {
            Step::Shift { of, by } => json!({"name": s.name, "shift": {"of": of, "by": by}}),
            Step::Sum { left, right } => json!({"name": s.name, "sum": [left, right]}),
            Step::Cone { source, target, matrix } => json!({"name": s.name, "cone": {"source": source, "target": target, "matrix": print_alg_matrix(a, matrix)}}),
            Step::Summand { of, idempotent } => json!({"name": s.name, "summand": {"of": of, "idempotent": print_alg_matrix(a, idempotent)}}),
        })
        .collect();
    out.insert("steps".into(), Value::Array(steps));
    if let Some(t) = &e.target {
        out.insert("target".into(), json!(t));
    }
    out.insert("claim".into(), json!({"from": e.certificate.claim.from, "matrix": print_alg_matrix(a, &e.certificate.claim.matrix)}));
    Value::Object(out)
}

/// A self-contained document holding one certificate, its algebra, the
/// fields it needs and its start objects as explicit complexes.
pub fn certificate_document(ws: &Workspace, name: &str, cert: &GenerationCertificate) -> Value {
    let mut sub = Workspace::default();
    let k = cert.algebra.field();
    let mut chain = vec![k.clone()];
    while let Some(p) = chain.last().unwrap().parent().cloned() {
        chain.push(p);
    }
    let mut field_names = Vec::new();
    for (i, f) in chain.iter().rev().enumerate() {
        let n = ws
            .field_name(f)
            .map(str::to_string)
            .unwrap_or_else(|| format!("k{i}"));
        sub.fields.insert(n.clone(), f.clone());
        field_names.push(n);
    }
    let alg_name = "B".to_string();
    sub.algebras.insert(
        alg_name.clone(),
        AlgebraEntry {
            field: field_names.last().unwrap().clone(),
            algebra: cert.algebra.clone(),
        },
    );
    let over = Over {
        algebra: alg_name,
        field: None,
    };
    let mut starts = Vec::new();
    for (sname, x) in &cert.starts {
        let cname = format!("start:{sname}");
        sub.complexes.insert(
            cname.clone(),
            ComplexEntry {
                over: over.clone(),
                object: x.clone(),
            },
        );
        starts.push(Start::Complex {
            name: sname.clone(),
            complex: cname,
        });
    }
    let target = if cert.target == PerfObject::free(&cert.algebra) {
        None
    } else {
        sub.complexes.insert(
            "target".into(),
            ComplexEntry {
                over: over.clone(),
                object: cert.target.clone(),
            },
        );
        Some("target".to_string())
    };
    sub.certificates.insert(
        name.to_string(),
        CertificateEntry {
            over,
            starts,
            target,
            certificate: cert.clone(),
        },
    );
    sub.print()
}

pub fn is_top_level_key(k: &str) -> bool {
    TOP_LEVEL.contains(&k)
}

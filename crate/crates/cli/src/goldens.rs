//! The example documents shipped in `examples/`, built from library objects.

use std::sync::Arc;

use dgw_core::basechange::ExtensionMap;
use dgw_core::checkers::{Claim, GenerationCertificate, NamedStep, Step};
use dgw_core::dg::{library, Algebra, DGAlgebra, DGBimodule, DGModule};
use dgw_core::field::Field;
use dgw_core::perf::{AlgMatrix, Morphism, PerfObject};
use dgw_core::resolve::{minimal_resolution, ResolveOptions};

use crate::document::{
    AlgebraEntry, BimoduleEntry, CertificateEntry, ComplexEntry, ModuleEntry, Over, Start,
    TaskEntry, Workspace,
};
use crate::tasks::{Evidence, TaskSpec};

pub const NAMES: [&str; 5] = ["auslander", "dual_numbers", "kronecker", "morita", "a2"];

pub fn rationals_sqrt2() -> (Field, Field) {
    let q = Field::rationals();
    let s = q
        .extend("s", vec![q.from_int(-2), q.zero(), q.one()])
        .expect("x^2 - 2 is irreducible");
    (q, s)
}

pub fn rationals_i() -> Field {
    let q = Field::rationals();
    q.extend("i", vec![q.one(), q.zero(), q.one()])
        .expect("x^2 + 1 is irreducible")
}

pub fn f2_f4() -> (Field, Field) {
    let f2 = Field::prime_field(2).expect("2 is prime");
    let f4 = f2
        .extend("g", vec![f2.one(), f2.one(), f2.one()])
        .expect("x^2 + x + 1 is irreducible over F2");
    (f2, f4)
}

fn el(a: &Algebra, name: &str) -> Vec<dgw_core::field::Scalar> {
    a.element(&[(name, a.field().one())])
        .expect("basis element exists")
}

fn row(a: &Algebra, names: &[&str]) -> AlgMatrix {
    AlgMatrix::from_entries(1, names.len(), names.iter().map(|n| el(a, n)).collect())
        .expect("row shape")
}

fn over(a: &str) -> Over {
    Over {
        algebra: a.into(),
        field: None,
    }
}

fn over_field(a: &str, f: &str) -> Over {
    Over {
        algebra: a.into(),
        field: Some(f.into()),
    }
}

fn task(name: &str, spec: TaskSpec) -> TaskEntry {
    TaskEntry {
        name: Some(name.into()),
        window: None,
        spec,
    }
}

fn transport(spec: TaskSpec, extension: &str) -> TaskSpec {
    TaskSpec::Transport {
        task: Box::new(spec),
        extension: extension.into(),
    }
}

fn add_algebra(ws: &mut Workspace, name: &str, field: &str, a: DGAlgebra) -> Algebra {
    let a = Arc::new(a);
    ws.algebras.insert(
        name.into(),
        AlgebraEntry {
            field: field.into(),
            algebra: a.clone(),
        },
    );
    a
}

fn add_bimodule(ws: &mut Workspace, name: &str, left: &str, right: &str, t: DGBimodule) {
    ws.bimodules.insert(
        name.into(),
        BimoduleEntry {
            left: left.into(),
            right: right.into(),
            field: None,
            bimodule: t,
        },
    );
}

fn model(t: &DGBimodule) -> PerfObject {
    minimal_resolution(&t.right_module(), ResolveOptions::default())
        .expect("resolves")
        .model()
        .expect("finite model")
}

/// Starts from the model of `t` and claims the identity onto `B`.
fn model_certificate(
    b: &Algebra,
    algebra: &str,
    t: &str,
    bimodule: &DGBimodule,
) -> CertificateEntry {
    let start = model(bimodule);
    let p = start.projector();
    let diag = (0..start.cells().len())
        .map(|i| p.get(i, i).clone())
        .collect::<Vec<_>>();
    let certificate = GenerationCertificate {
        algebra: b.clone(),
        starts: vec![("T".into(), start)],
        steps: Vec::new(),
        target: PerfObject::free(b),
        claim: Claim {
            from: "T".into(),
            matrix: AlgMatrix::from_entries(1, diag.len(), diag).expect("row shape"),
        },
    };
    CertificateEntry {
        over: over(algebra),
        starts: vec![Start::ModelOf {
            name: "T".into(),
            bimodule: t.into(),
        }],
        target: None,
        certificate,
    }
}

/// Dual numbers `R` with its Auslander algebra `Λ` and `T = e1Λ`.
pub fn auslander() -> Workspace {
    let (q, s) = rationals_sqrt2();
    let mut ws = Workspace::default();
    ws.fields.insert("Q".into(), q.clone());
    ws.fields.insert("Qs".into(), s);
    ws.fields.insert("Qi".into(), rationals_i());
    let (r, lambda, t) = library::auslander_triple(&q);
    ws.algebras.insert(
        "R".into(),
        AlgebraEntry {
            field: "Q".into(),
            algebra: r,
        },
    );
    ws.algebras.insert(
        "L".into(),
        AlgebraEntry {
            field: "Q".into(),
            algebra: lambda.clone(),
        },
    );
    ws.modules.insert(
        "S2".into(),
        ModuleEntry {
            over: over("L"),
            module: library::simple(&lambda, "e2").expect("vertex"),
        },
    );
    ws.modules.insert(
        "S1".into(),
        ModuleEntry {
            over: over("L"),
            module: library::simple(&lambda, "e1").expect("vertex"),
        },
    );
    add_bimodule(&mut ws, "T", "R", "L", t);
    let triple = TaskSpec::CheckTriple {
        a: "R".into(),
        b: "L".into(),
        t: "T".into(),
    };
    let witness = TaskSpec::CheckMorita {
        a: "R".into(),
        b: "L".into(),
        t: "T".into(),
        evidence: Evidence::Witness("S2".into()),
    };
    ws.tasks = vec![
        task("auslander-triple", triple.clone()),
        task("auslander-witness", witness.clone()),
        task("auslander-triple-sqrt2", transport(triple, "Qs")),
        task("auslander-witness-i", transport(witness, "Qi")),
        task(
            "lambda-sweep-sqrt2",
            TaskSpec::SweepHomBc {
                algebra: "L".into(),
                extension: "Qs".into(),
                pairs: 100,
                cells: 2,
            },
        ),
    ];
    ws
}

/// `k[ε]/ε²` over ℚ: non-smoothness, periodic Ext and base change.
pub fn dual_numbers() -> Workspace {
    let (q, s) = rationals_sqrt2();
    let mut ws = Workspace::default();
    ws.fields.insert("Q".into(), q.clone());
    ws.fields.insert("Qs".into(), s.clone());
    let r = add_algebra(&mut ws, "R", "Q", library::dual_numbers(&q));
    let e = ExtensionMap::new(&q, &s).expect("prefix");
    let rs = e.algebra(&r).expect("extends");
    let k = library::simple(&r, "1").expect("unit acts");
    ws.modules.insert(
        "k".into(),
        ModuleEntry {
            over: over("R"),
            module: k,
        },
    );
    ws.modules.insert(
        "ks".into(),
        ModuleEntry {
            over: over_field("R", "Qs"),
            module: library::simple(&rs, "1").expect("unit acts"),
        },
    );
    ws.modules.insert(
        "free".into(),
        ModuleEntry {
            over: over("R"),
            module: DGModule::free(&r),
        },
    );
    ws.certificates.insert(
        "trivial".into(),
        model_certificate(&r, "R", "D", &DGBimodule::diagonal(&r)),
    );
    add_bimodule(&mut ws, "D", "R", "R", DGBimodule::diagonal(&r));
    ws.complexes.insert(
        "R".into(),
        ComplexEntry {
            over: over("R"),
            object: PerfObject::free(&r),
        },
    );
    let a = PerfObject::free(&r);
    let eps = Morphism::new(
        &a,
        &a,
        0,
        AlgMatrix::from_entries(1, 1, vec![el(&r, "eps")]).expect("1x1"),
    )
    .expect("closed");
    ws.complexes.insert(
        "cone_eps".into(),
        ComplexEntry {
            over: over("R"),
            object: PerfObject::cone(&eps).expect("cone"),
        },
    );
    ws.tasks = vec![
        task(
            "diagonal-triple",
            TaskSpec::CheckTriple {
                a: "R".into(),
                b: "R".into(),
                t: "D".into(),
            },
        ),
        task(
            "diagonal-morita",
            TaskSpec::CheckMorita {
                a: "R".into(),
                b: "R".into(),
                t: "D".into(),
                evidence: Evidence::Certificate("trivial".into()),
            },
        ),
        task(
            "cone-hom-bc",
            TaskSpec::CheckHomBc {
                complex: "cone_eps".into(),
                module: "k".into(),
                extension: "Qs".into(),
            },
        ),
        task(
            "adjunction",
            TaskSpec::CheckAdjunction {
                module: "k".into(),
                target: "ks".into(),
                extension: "Qs".into(),
            },
        ),
        task(
            "extend-R",
            TaskSpec::BaseChange {
                object: "R".into(),
                extension: "Qs".into(),
            },
        ),
        task(
            "dual-sweep-sqrt2",
            TaskSpec::SweepHomBc {
                algebra: "R".into(),
                extension: "Qs".into(),
                pairs: 100,
                cells: 2,
            },
        ),
    ];
    ws
}

/// The Kronecker quiver over 𝔽₂ with the exceptional pair `(P1, P2)`.
pub fn kronecker() -> Workspace {
    let (f2, f4) = f2_f4();
    let mut ws = Workspace::default();
    ws.fields.insert("F2".into(), f2.clone());
    ws.fields.insert("F4".into(), f4);
    let b = add_algebra(&mut ws, "K", "F2", library::kronecker(&f2));
    let p1 = PerfObject::projective(&b, &el(&b, "e1"), 0).expect("idempotent");
    let p2 = PerfObject::projective(&b, &el(&b, "e2"), 0).expect("idempotent");
    ws.complexes.insert(
        "P1".into(),
        ComplexEntry {
            over: over("K"),
            object: p1.clone(),
        },
    );
    ws.complexes.insert(
        "P2".into(),
        ComplexEntry {
            over: over("K"),
            object: p2.clone(),
        },
    );
    ws.modules.insert(
        "S1".into(),
        ModuleEntry {
            over: over("K"),
            module: library::simple(&b, "e1").expect("vertex"),
        },
    );
    let certificate = GenerationCertificate {
        algebra: b.clone(),
        starts: vec![("P1".into(), p1), ("P2".into(), p2)],
        steps: vec![NamedStep {
            name: "S".into(),
            step: Step::Sum {
                left: "P1".into(),
                right: "P2".into(),
            },
        }],
        target: PerfObject::free(&b),
        claim: Claim {
            from: "S".into(),
            matrix: row(&b, &["e1", "e2"]),
        },
    };
    let starts = vec![
        Start::Complex {
            name: "P1".into(),
            complex: "P1".into(),
        },
        Start::Complex {
            name: "P2".into(),
            complex: "P2".into(),
        },
    ];
    ws.certificates.insert(
        "split".into(),
        CertificateEntry {
            over: over("K"),
            starts,
            target: None,
            certificate,
        },
    );
    let objects = vec!["P1".to_string(), "P2".to_string()];
    let full = TaskSpec::CheckFullExc {
        algebra: "K".into(),
        objects: objects.clone(),
        certificate: "split".into(),
    };
    ws.tasks = vec![
        task(
            "pair",
            TaskSpec::CheckExc {
                algebra: "K".into(),
                objects,
            },
        ),
        task("full-pair", full.clone()),
        task("full-pair-f4", transport(full, "F4")),
        task(
            "p1-simple-hom-bc",
            TaskSpec::CheckHomBc {
                complex: "P2".into(),
                module: "S1".into(),
                extension: "F4".into(),
            },
        ),
        task(
            "kronecker-sweep-f4",
            TaskSpec::SweepHomBc {
                algebra: "K".into(),
                extension: "F4".into(),
                pairs: 100,
                cells: 2,
            },
        ),
    ];
    ws
}

/// `k` and `M₂(k)` related by the row module.
pub fn morita() -> Workspace {
    let (q, s) = rationals_sqrt2();
    let mut ws = Workspace::default();
    ws.fields.insert("Q".into(), q.clone());
    ws.fields.insert("Qs".into(), s);
    let (a, b, t) = library::row_triple(&q);
    ws.algebras.insert(
        "k".into(),
        AlgebraEntry {
            field: "Q".into(),
            algebra: a,
        },
    );
    ws.algebras.insert(
        "M2".into(),
        AlgebraEntry {
            field: "Q".into(),
            algebra: b.clone(),
        },
    );
    let certificate = GenerationCertificate {
        algebra: b.clone(),
        starts: vec![("T".into(), model(&t))],
        steps: vec![NamedStep {
            name: "TT".into(),
            step: Step::Sum {
                left: "T".into(),
                right: "T".into(),
            },
        }],
        target: PerfObject::free(&b),
        claim: Claim {
            from: "TT".into(),
            matrix: row(&b, &["e11", "e21"]),
        },
    };
    add_bimodule(&mut ws, "T", "k", "M2", t);
    ws.certificates.insert(
        "rows".into(),
        CertificateEntry {
            over: over("M2"),
            starts: vec![Start::ModelOf {
                name: "T".into(),
                bimodule: "T".into(),
            }],
            target: None,
            certificate,
        },
    );
    let triple = TaskSpec::CheckTriple {
        a: "k".into(),
        b: "M2".into(),
        t: "T".into(),
    };
    let morita = TaskSpec::CheckMorita {
        a: "k".into(),
        b: "M2".into(),
        t: "T".into(),
        evidence: Evidence::Certificate("rows".into()),
    };
    ws.tasks = vec![
        task("row-triple", triple.clone()),
        task("row-morita", morita.clone()),
        task("row-triple-sqrt2", transport(triple, "Qs")),
        task("row-morita-sqrt2", transport(morita, "Qs")),
        task(
            "m2-sweep-sqrt2",
            TaskSpec::SweepHomBc {
                algebra: "M2".into(),
                extension: "Qs".into(),
                pairs: 100,
                cells: 2,
            },
        ),
    ];
    ws
}

/// The `A₂` quiver `2 → 1` over 𝔽₂: a smooth algebra and the pair `(P2, S2)`.
pub fn a2() -> Workspace {
    let (f2, f4) = f2_f4();
    let mut ws = Workspace::default();
    ws.fields.insert("F2".into(), f2.clone());
    ws.fields.insert("F4".into(), f4);
    let b = add_algebra(&mut ws, "A2", "F2", library::a2(&f2));
    let p1 = PerfObject::projective(&b, &el(&b, "e1"), 0).expect("idempotent");
    let p2 = PerfObject::projective(&b, &el(&b, "e2"), 0).expect("idempotent");
    // S2 = cone(P1 → P2) where the map is left multiplication by alpha
    let alpha = Morphism::new(
        &p1,
        &p2,
        0,
        AlgMatrix::from_entries(1, 1, vec![el(&b, "alpha")]).expect("1x1"),
    )
    .expect("closed");
    let s2 = PerfObject::cone(&alpha).expect("cone");
    ws.complexes.insert(
        "P1".into(),
        ComplexEntry {
            over: over("A2"),
            object: p1,
        },
    );
    ws.complexes.insert(
        "P2".into(),
        ComplexEntry {
            over: over("A2"),
            object: p2,
        },
    );
    ws.complexes.insert(
        "S2".into(),
        ComplexEntry {
            over: over("A2"),
            object: s2,
        },
    );
    ws.certificates.insert(
        "trivial".into(),
        model_certificate(&b, "A2", "D", &DGBimodule::diagonal(&b)),
    );
    add_bimodule(&mut ws, "D", "A2", "A2", DGBimodule::diagonal(&b));
    let triple = TaskSpec::CheckTriple {
        a: "A2".into(),
        b: "A2".into(),
        t: "D".into(),
    };
    ws.tasks = vec![
        task("diagonal-triple", triple.clone()),
        task(
            "diagonal-morita",
            TaskSpec::CheckMorita {
                a: "A2".into(),
                b: "A2".into(),
                t: "D".into(),
                evidence: Evidence::Certificate("trivial".into()),
            },
        ),
        task(
            "p2-s2",
            TaskSpec::CheckExc {
                algebra: "A2".into(),
                objects: vec!["P2".into(), "S2".into()],
            },
        ),
        task(
            "p1-p2",
            TaskSpec::CheckExc {
                algebra: "A2".into(),
                objects: vec!["P1".into(), "P2".into()],
            },
        ),
        task("diagonal-triple-f4", transport(triple, "F4")),
        task(
            "a2-sweep-f4",
            TaskSpec::SweepHomBc {
                algebra: "A2".into(),
                extension: "F4".into(),
                pairs: 100,
                cells: 2,
            },
        ),
    ];
    ws
}

pub fn build(name: &str) -> Option<Workspace> {
    Some(match name {
        "auslander" => auslander(),
        "dual_numbers" => dual_numbers(),
        "kronecker" => kronecker(),
        "morita" => morita(),
        "a2" => a2(),
        _ => return None,
    })
}

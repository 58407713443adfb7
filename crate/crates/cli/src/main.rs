//! mackeykit: a deterministic JSON-in/JSON-out command line over the
//! engine. Every verb reads one JSON document (file or stdin) and prints
//! one canonical JSON document; exit code 0 means success, 1 means a
//! verification verb found a failure (the witness is in the output), and
//! 2 means the input was malformed.

use clap::Parser;
use mackeykit_core::chains::{
    compact_generation_probe, cp_example, fixed_point_complex, is_contractible, is_gamma_acyclic,
    ChainMap,
};
use mackeykit_core::error::{Error, Result};
use mackeykit_core::group::{all_subgroups, configured_max_group, double_cosets};
use mackeykit_core::gset::GSet;
use mackeykit_core::io::{
    canonical_json, error_code, from_json, mat_entries, mat_from_entries, subgroup_from_elements,
    ComplexDoc, FunctorDoc, GSetDoc, GroupDoc, InvariantsDoc, SpanSumDoc,
};
use mackeykit_core::mackey::{
    fp_functor, nat_transforms, rho, sigma, tau, GModule, MackeyAlgebra,
};
use mackeykit_core::perm::{
    hom_basis, linearize, mackey_formula_set_check, quotient_equivalence_check, tensor_decompose,
};
use mackeykit_core::ring::Ring;
use mackeykit_core::span::{canonicalize, compose, omega_hom_basis, Span};
use mackeykit_core::suite::run_suite;
use serde::Deserialize;
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

const VERBS: &[&str] = &[
    "group",
    "subgroups",
    "double-cosets",
    "gset",
    "orbits",
    "span-canon",
    "span-compose",
    "omega-basis",
    "perm-hom",
    "linearize",
    "tensor-decompose",
    "mackey-check",
    "quotient-check",
    "fp",
    "yoneda",
    "nat-hom",
    "rho-tau-sigma",
    "algebra",
    "complex-homology",
    "gamma-acyclic",
    "qis",
    "contractible",
    "cp-example",
    "probe",
    "suite",
];

#[derive(Parser)]
#[command(name = "mackeykit", version, about = "exact engine for permutation modules over finite groups")]
struct Args {
    /// verb to run (see --help for the list)
    #[arg(help = "one of: group, subgroups, double-cosets, gset, orbits, span-canon, span-compose, omega-basis, perm-hom, linearize, tensor-decompose, mackey-check, quotient-check, fp, yoneda, nat-hom, rho-tau-sigma, algebra, complex-homology, gamma-acyclic, qis, contractible, cp-example, probe, suite")]
    verb: String,
    /// input document path; - reads stdin
    #[arg(long, default_value = "-")]
    input: String,
    /// seed for the randomized batteries
    #[arg(long, default_value_t = 1729)]
    seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupIn {
    group: GroupDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairIn {
    group: GroupDoc,
    k: Vec<usize>,
    h: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GSetIn {
    group: GroupDoc,
    #[serde(default)]
    subgroup: Option<Vec<usize>>,
    #[serde(default)]
    gset: Option<GSetDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitsIn {
    group: GroupDoc,
    gset: GSetDoc,
    #[serde(default)]
    under: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpanCanonIn {
    group: GroupDoc,
    ring: String,
    source: GSetDoc,
    target: GSetDoc,
    apex: GSetDoc,
    left: Vec<usize>,
    right: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpanComposeIn {
    first: SpanSumDoc,
    second: SpanSumDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingPairIn {
    group: GroupDoc,
    ring: String,
    k: Vec<usize>,
    h: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PermHomIn {
    group: GroupDoc,
    ring: String,
    source: GSetDoc,
    target: GSetDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearizeIn {
    span: SpanSumDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingIn {
    group: GroupDoc,
    ring: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleDoc {
    #[serde(default)]
    gset: Option<GSetDoc>,
    #[serde(default)]
    matrices: Option<Vec<Vec<Vec<String>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FpIn {
    group: GroupDoc,
    ring: String,
    module: ModuleDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct YonedaIn {
    group: GroupDoc,
    ring: String,
    gset: GSetDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NatIn {
    m: FunctorDoc,
    n: FunctorDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RtsIn {
    functor: FunctorDoc,
    op: String,
    #[serde(default)]
    subgroup: Option<Vec<usize>>,
    #[serde(default)]
    gamma: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomologyIn {
    complex: ComplexDoc,
    #[serde(default)]
    subgroup: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexIn {
    complex: ComplexDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QisIn {
    source: ComplexDoc,
    target: ComplexDoc,
    components: Vec<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CpIn {
    p: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteIn {
    group: GroupDoc,
    ring: String,
    #[serde(default)]
    label: Option<String>,
}

fn parse<T: for<'a> Deserialize<'a>>(doc: &str) -> Result<T> {
    from_json(doc)
}

fn run(verb: &str, doc: &str, seed: u64) -> Result<(Value, u8)> {
    let value = match verb {
        "group" => {
            let input: GroupIn = parse(doc)?;
            let g = input.group.build()?;
            let table = GroupDoc::from_group(&g)
                .cayley
                .expect("explicit table");
            return Ok((
                json!({"order": g.order(), "abelian": g.is_abelian(), "cayley": table}),
                0,
            ));
        }
        "subgroups" => {
            let input: GroupIn = parse(doc)?;
            let g = input.group.build()?;
            let lat = all_subgroups(&g, configured_max_group())?;
            let subgroups: Vec<Vec<usize>> =
                lat.subgroups.iter().map(|s| s.elements().to_vec()).collect();
            json!({
                "count": subgroups.len(),
                "subgroups": subgroups,
                "class_reps": lat.class_reps,
                "class_of": lat.class_of,
            })
        }
        "double-cosets" => {
            let input: PairIn = parse(doc)?;
            let g = input.group.build()?;
            let k = subgroup_from_elements(&g, &input.k)?;
            let h = subgroup_from_elements(&g, &input.h)?;
            json!({"reps": double_cosets(&k, &h).reps})
        }
        "gset" => {
            let input: GSetIn = parse(doc)?;
            let g = input.group.build()?;
            let x = match (&input.subgroup, &input.gset) {
                (Some(elems), None) => {
                    let h = subgroup_from_elements(&g, elems)?;
                    GSet::transitive(Arc::clone(&g), &h)
                }
                (None, Some(d)) => d.build(&g)?,
                _ => {
                    return Err(Error::MalformedInput(
                        "need exactly one of subgroup, gset".into(),
                    ))
                }
            };
            json!({
                "gset": GSetDoc::from_gset(&x),
                "orbits": x.orbits().len(),
            })
        }
        "orbits" => {
            let input: OrbitsIn = parse(doc)?;
            let g = input.group.build()?;
            let x = input.gset.build(&g)?;
            let under = match &input.under {
                Some(elems) => subgroup_from_elements(&g, elems)?,
                None => mackeykit_core::group::Subgroup::full(Arc::clone(&g)),
            };
            let orbits: Vec<Value> = x
                .orbits_under(&under)
                .into_iter()
                .map(|o| {
                    json!({
                        "rep": o.rep,
                        "points": o.points,
                        "stabilizer": o.stabilizer.elements(),
                    })
                })
                .collect();
            json!({"orbits": orbits})
        }
        "span-canon" => {
            let input: SpanCanonIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let source = input.source.build(&g)?;
            let target = input.target.build(&g)?;
            let apex = input.apex.build(&g)?;
            let span = Span::new(source, target, apex, input.left, input.right)?;
            let sum = canonicalize(&span, ring)?;
            serde_json::to_value(SpanSumDoc::from_sum(&input.group, &sum))
                .map_err(|e| Error::MalformedInput(e.to_string()))?
        }
        "span-compose" => {
            let input: SpanComposeIn = parse(doc)?;
            let first = input.first.build()?;
            let second = input.second.build()?;
            let sum = compose(&first, &second)?;
            serde_json::to_value(SpanSumDoc::from_sum(&input.first.group, &sum))
                .map_err(|e| Error::MalformedInput(e.to_string()))?
        }
        "omega-basis" => {
            let input: PairIn = parse(doc)?;
            let g = input.group.build()?;
            let k = subgroup_from_elements(&g, &input.k)?;
            let h = subgroup_from_elements(&g, &input.h)?;
            let basis: Vec<Value> = omega_hom_basis(&k, &h)
                .into_iter()
                .map(|(g, l)| json!({"g": g, "l": l.elements()}))
                .collect();
            json!({"basis": basis})
        }
        "perm-hom" => {
            let input: PermHomIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let source = input.source.build(&g)?;
            let target = input.target.build(&g)?;
            let basis = hom_basis(&source, &target, &ring);
            let elements: Vec<Value> = basis
                .iter()
                .map(|el| {
                    json!({
                        "src_orbit": el.src_orbit,
                        "tgt_orbit": el.tgt_orbit,
                        "g": el.g,
                        "mat": mat_entries(&el.morphism.mat),
                    })
                })
                .collect();
            json!({"rank": basis.len(), "basis": elements})
        }
        "linearize" => {
            let input: LinearizeIn = parse(doc)?;
            let sum = input.span.build()?;
            let m = linearize(&sum);
            json!({
                "rows": m.mat.rows,
                "cols": m.mat.cols,
                "entries": mat_entries(&m.mat),
            })
        }
        "tensor-decompose" => {
            let input: RingPairIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let k = subgroup_from_elements(&g, &input.k)?;
            let h = subgroup_from_elements(&g, &input.h)?;
            let dec = tensor_decompose(&k, &h)?;
            let iso = dec.iso_morphism(ring);
            let summands: Vec<Value> = dec
                .summands
                .iter()
                .map(|(g, m)| json!({"g": g, "stabilizer": m.elements()}))
                .collect();
            json!({
                "summands": summands,
                "iso": {"rows": iso.mat.rows, "cols": iso.mat.cols, "entries": mat_entries(&iso.mat)},
            })
        }
        "mackey-check" => {
            let input: GroupIn = parse(doc)?;
            let g = input.group.build()?;
            let lat = all_subgroups(&g, configured_max_group())?;
            let reps = lat.rep_subgroups();
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for (ki, k) in reps.iter().enumerate() {
                for (hi, h) in reps.iter().enumerate() {
                    let (hgroup, _) = h.as_group();
                    let pt = GSet::one_point(Arc::clone(&hgroup));
                    let free = GSet::transitive(
                        Arc::clone(&hgroup),
                        &mackeykit_core::group::Subgroup::trivial(hgroup),
                    );
                    for x in [pt, free] {
                        if !mackey_formula_set_check(k, h, &x)? {
                            failures.push(json!({"k_class": ki, "h_class": hi}));
                        }
                        cases += 1;
                    }
                }
            }
            let pass = failures.is_empty();
            return Ok((
                json!({"pass": pass, "cases": cases, "failures": failures}),
                u8::from(!pass),
            ));
        }
        "quotient-check" => {
            let input: RingIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let report = quotient_equivalence_check(&g, &ring)?;
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| {
                    json!({
                        "k_class": p.k_class,
                        "h_class": p.h_class,
                        "hom_rank": p.hom_rank,
                        "span_rank": p.span_rank,
                        "surjective": p.surjective,
                        "kernel_matches": p.kernel_matches,
                    })
                })
                .collect();
            return Ok((
                json!({"holds": report.holds, "pairs": pairs}),
                u8::from(!report.holds),
            ));
        }
        "fp" => {
            let input: FpIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let module = match (&input.module.gset, &input.module.matrices) {
                (Some(d), None) => GModule::of_gset(ring, &d.build(&g)?),
                (None, Some(tables)) => {
                    if tables.is_empty() {
                        return Err(Error::MalformedInput("no action matrices".into()));
                    }
                    let rank = tables[0].len();
                    let mats = tables
                        .iter()
                        .map(|t| mat_from_entries(&ring, rank, rank, t))
                        .collect::<Result<Vec<_>>>()?;
                    GModule::from_matrices(ring, Arc::clone(&g), mats)?
                }
                _ => {
                    return Err(Error::MalformedInput(
                        "need exactly one of gset, matrices".into(),
                    ))
                }
            };
            let functor = fp_functor(&module)?;
            serde_json::to_value(FunctorDoc::from_functor(&input.group, &functor))
                .map_err(|e| Error::MalformedInput(e.to_string()))?
        }
        "yoneda" => {
            let input: YonedaIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let x = input.gset.build(&g)?;
            let functor = mackeykit_core::mackey::yoneda(&x, &ring)?;
            serde_json::to_value(FunctorDoc::from_functor(&input.group, &functor))
                .map_err(|e| Error::MalformedInput(e.to_string()))?
        }
        "nat-hom" => {
            let input: NatIn = parse(doc)?;
            let m = input.m.build()?;
            let n = input.n.build()?;
            let basis = nat_transforms(&m, &n)?;
            json!({"rank": basis.len()})
        }
        "rho-tau-sigma" => {
            let input: RtsIn = parse(doc)?;
            let m = input.functor.build()?;
            let group = Arc::clone(m.w.group());
            let result = match input.op.as_str() {
                "rho" => {
                    let elems = input.subgroup.ok_or_else(|| {
                        Error::MalformedInput("rho needs a subgroup".into())
                    })?;
                    rho(&m, &subgroup_from_elements(&group, &elems)?)?
                }
                "tau" => {
                    let elems = input.subgroup.ok_or_else(|| {
                        Error::MalformedInput("tau needs a subgroup".into())
                    })?;
                    tau(&m, &subgroup_from_elements(&group, &elems)?)?
                }
                "sigma" => {
                    let gamma = input.gamma.ok_or_else(|| {
                        Error::MalformedInput("sigma needs a group element gamma".into())
                    })?;
                    if gamma >= group.order() {
                        return Err(Error::MalformedInput(format!(
                            "gamma {gamma} out of range"
                        )));
                    }
                    sigma(&m, gamma)?
                }
                other => {
                    return Err(Error::MalformedInput(format!(
                        "op must be rho, tau or sigma, got {other:?}"
                    )))
                }
            };
            serde_json::to_value(FunctorDoc::from_functor(&input.functor.group, &result))
                .map_err(|e| Error::MalformedInput(e.to_string()))?
        }
        "algebra" => {
            let input: RingIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let algebra = MackeyAlgebra::new(&g, &ring)?;
            let basis: Vec<Value> = algebra
                .basis
                .iter()
                .map(|(k, h, g)| json!({"k": k, "h": h, "g": g}))
                .collect();
            json!({"dimension": algebra.dimension, "basis": basis})
        }
        "complex-homology" => {
            let input: HomologyIn = parse(doc)?;
            let x = input.complex.build()?;
            let group = Arc::clone(x.group());
            let sub = match &input.subgroup {
                Some(elems) => subgroup_from_elements(&group, elems)?,
                None => mackeykit_core::group::Subgroup::trivial(group),
            };
            let fixed = fixed_point_complex(&x, &sub);
            let homology: Vec<Value> = x
                .degrees()
                .into_iter()
                .map(|n| {
                    json!({
                        "degree": n,
                        "invariants": InvariantsDoc::from_invariants(&fixed.homology(n)),
                    })
                })
                .collect();
            json!({"homology": homology})
        }
        "gamma-acyclic" => {
            let input: ComplexIn = parse(doc)?;
            let x = input.complex.build()?;
            let report = is_gamma_acyclic(&x)?;
            let witnesses: Vec<Value> = report
                .witnesses
                .iter()
                .map(|(sub, n)| json!({"subgroup": sub, "degree": n}))
                .collect();
            json!({"acyclic": report.acyclic, "witnesses": witnesses})
        }
        "qis" => {
            let input: QisIn = parse(doc)?;
            let source = input.source.build()?;
            let target = input.target.build()?;
            let ring = source.ring.clone();
            if input.components.len() != source.modules.len() {
                return Err(Error::MalformedInput(format!(
                    "expected {} components",
                    source.modules.len()
                )));
            }
            let mats = input
                .components
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    mat_from_entries(
                        &ring,
                        target.modules[i].size(),
                        source.modules[i].size(),
                        t,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let f = ChainMap::new(source, target, mats)?;
            json!({"qis": mackeykit_core::chains::is_gamma_qis(&f)?})
        }
        "contractible" => {
            let input: ComplexIn = parse(doc)?;
            let x = input.complex.build()?;
            json!({"contractible": is_contractible(&x)?})
        }
        "cp-example" => {
            let input: CpIn = parse(doc)?;
            let ring = Ring::PrimeField(input.p);
            ring.validate()?;
            let x = cp_example(input.p, &ring)?;
            let group_doc = GroupDoc::named(&format!("C{}", input.p));
            json!({"complex": ComplexDoc::from_complex(&group_doc, &x)})
        }
        "probe" => {
            let input: ComplexIn = parse(doc)?;
            let x = input.complex.build()?;
            json!({"orthogonal": compact_generation_probe(&x)?})
        }
        "suite" => {
            let input: SuiteIn = parse(doc)?;
            let g = input.group.build()?;
            let ring = Ring::parse(&input.ring)?;
            let label = input
                .label
                .or(input.group.name.clone())
                .unwrap_or_else(|| "custom".into());
            let report = run_suite(&label, &g, &ring, seed)?;
            let code = u8::from(!report.pass);
            return Ok((
                serde_json::to_value(&report).map_err(|e| Error::MalformedInput(e.to_string()))?,
                code,
            ));
        }
        other => {
            return Err(Error::MalformedInput(format!(
                "unknown verb {other:?}; expected one of {}",
                VERBS.join(", ")
            )))
        }
    };
    Ok((value, 0))
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::MalformedInput(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::MalformedInput(format!("cannot read {path}: {e}")))
    }
}

fn emit(value: &Value) {
    use std::io::Write;
    let text = canonical_json(value).expect("canonical output");
    // Tolerate downstream consumers that close the pipe early.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = read_input(&args.input).and_then(|doc| run(&args.verb, &doc, args.seed));
    match outcome {
        Ok((value, code)) => {
            emit(&value);
            ExitCode::from(code)
        }
        Err(e) => {
            emit(&json!({"error": {"code": error_code(&e), "message": e.to_string()}}));
            ExitCode::from(2)
        }
    }
}

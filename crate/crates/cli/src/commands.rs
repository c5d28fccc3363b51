use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use opalg::algebra_complexes::{chain_complex, cochain_complex, DEGREE_SHIFT};
use opalg::exactalg::{check_field, SVec};
use opalg::koszul_machine::koszulness_certificate;
use opalg::operad_core::{quotient_presentation, ClassicalOperad};
use opalg::palgebra::{validate_algebra, validate_module, PAlgebra};
use opalg::relhom::{compare_with_koszul, relative_cohomology, relative_homology, RelativeHomology, RightModule};
use opalg::seminf::{semiinfinite_homology, validate_semiinfinite, Status, HOM_ACTION_CONVENTION};
use opalg::Scalar;

use crate::input::{load_operad, InputError, Session};
use crate::report::Report;

#[derive(Clone, Debug)]
pub struct Config {
    pub max_arity: usize,
    pub max_weight: i64,
    pub max_level: usize,
    pub window: (i64, i64),
    pub weight: Option<i64>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckAlgebra,
    OperadDims,
    KoszulCheck,
    Homology,
    Cohomology,
    RelativeHomology,
    RelativeCohomology,
    CompareKoszul,
    SeminfCheck,
    SeminfHomology,
}

pub fn conventions() -> Value {
    json!({
        "operadic_to_classical_degree_shift": DEGREE_SHIFT,
        "relative_to_operadic_degree_shift": 0,
        "hom_action": HOM_ACTION_CONVENTION,
    })
}

fn map_json<K: ToString, V: serde::Serialize>(m: &BTreeMap<K, V>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn nested_json(m: &BTreeMap<i64, BTreeMap<i64, usize>>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), map_json(v))).collect())
}

pub fn run<F: Scalar>(command: Command, target: &str, cfg: &Config) -> Result<Report, InputError> {
    check_field::<F>(cfg.max_arity)?;
    match command {
        Command::OperadDims => operad_dims::<F>(target, cfg),
        Command::KoszulCheck => koszul_check::<F>(target, cfg),
        _ => {
            let session = Session::<F>::load(Path::new(target))?;
            match command {
                Command::CheckAlgebra => check_algebra(&session, cfg),
                Command::Homology => homology(&session, cfg),
                Command::Cohomology => cohomology(&session, cfg),
                Command::RelativeHomology => relative(&session, cfg, false),
                Command::RelativeCohomology => relative(&session, cfg, true),
                Command::CompareKoszul => compare(&session, cfg),
                Command::SeminfCheck => seminf_check(&session, cfg),
                Command::SeminfHomology => seminf_homology(&session, cfg),
                Command::OperadDims | Command::KoszulCheck => unreachable!(),
            }
        }
    }
}

fn operad_dims<F: Scalar>(target: &str, cfg: &Config) -> Result<Report, InputError> {
    let pres = load_operad::<F>(target)?;
    let q = quotient_presentation(&pres, cfg.max_arity)?;
    let dims: Vec<usize> = (1..=cfg.max_arity).map(|n| q.operad.dim(n)).collect();
    let text: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    Ok(Report::new(
        true,
        json!({
            "verdict": format!("{} dimensions, arities 1..{}: {}", pres.name, cfg.max_arity, text.join(",")),
            "operad": pres.name,
            "dims": dims,
        }),
    ))
}

fn koszul_check<F: Scalar>(target: &str, cfg: &Config) -> Result<Report, InputError> {
    let pres = load_operad::<F>(target)?;
    if !pres.is_binary_quadratic() {
        return Err(InputError(format!("{} is not binary quadratic", pres.name)));
    }
    let r = koszulness_certificate(&pres, cfg.max_arity)?;
    let verdict = if r.verified() {
        format!("acyclic up to arity {}", cfg.max_arity)
    } else {
        let bad = r.arities.iter().find(|a| !(a.left_acyclic && a.right_acyclic && a.inclusion_quasi_iso)).map_or(0, |a| a.arity);
        format!("not acyclic: first failure in arity {}", bad)
    };
    let arities: Vec<Value> = r
        .arities
        .iter()
        .map(|a| {
            json!({
                "arity": a.arity,
                "left_acyclic": a.left_acyclic,
                "right_acyclic": a.right_acyclic,
                "koszul_inclusion_quasi_iso": a.inclusion_quasi_iso,
                "left_homology": map_json(&a.left_homology),
                "right_homology": map_json(&a.right_homology),
            })
        })
        .collect();
    Ok(Report::new(r.verified(), json!({ "verdict": verdict, "operad": r.name, "arities": arities })))
}

fn random_vector<F: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> SVec<F> {
    (0..dim).map(|i| (i, F::from_i64(rng.gen_range(-3..=3)))).filter(|(_, x)| !x.is_zero()).collect()
}

fn sub<F: Scalar>(a: &SVec<F>, b: &SVec<F>) -> SVec<F> {
    let mut m: BTreeMap<usize, F> = a.iter().cloned().collect();
    for (i, x) in b {
        let e = m.entry(*i).or_insert_with(F::zero);
        *e -= x.clone();
    }
    m.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// The defining identity on random combinations, as an independent spot check of the exhaustive
/// validator.
fn sampled_identity<F: Scalar>(a: &PAlgebra<F>, seed: u64, samples: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    if a.dim() == 0 {
        return failures;
    }
    for s in 0..samples {
        let (x, y, z) = (random_vector::<F>(&mut rng, a.dim()), random_vector::<F>(&mut rng, a.dim()), random_vector::<F>(&mut rng, a.dim()));
        let m = |u: &SVec<F>, v: &SVec<F>| a.mul_vec(u, v);
        let defect = match a.kind {
            ClassicalOperad::Lie => {
                let j = [m(&m(&x, &y), &z), m(&m(&y, &z), &x), m(&m(&z, &x), &y)];
                let sum = sub(&sub(&j[0], &j[1].iter().map(|(i, c)| (*i, -c.clone())).collect()), &j[2].iter().map(|(i, c)| (*i, -c.clone())).collect());
                let skew = sub(&m(&x, &y), &m(&y, &x).iter().map(|(i, c)| (*i, -c.clone())).collect());
                if !sum.is_empty() {
                    Some("Jacobi identity")
                } else if !skew.is_empty() {
                    Some("antisymmetry")
                } else {
                    None
                }
            }
            ClassicalOperad::Com | ClassicalOperad::Asc => {
                if !sub(&m(&m(&x, &y), &z), &m(&x, &m(&y, &z))).is_empty() {
                    Some("associativity")
                } else if a.kind == ClassicalOperad::Com && !sub(&m(&x, &y), &m(&y, &x)).is_empty() {
                    Some("commutativity")
                } else {
                    None
                }
            }
        };
        if let Some(what) = defect {
            failures.push(format!("sample {}: {} fails", s, what));
        }
    }
    failures
}

fn check_algebra<F: Scalar>(s: &Session<F>, cfg: &Config) -> Result<Report, InputError> {
    let a = &s.algebra;
    let violations: Vec<String> = validate_algebra(a).iter().map(|v| v.to_string()).collect();
    let module: Vec<String> = validate_module(a, &s.module);
    let sampled = sampled_identity(a, cfg.seed, 16);
    let ok = violations.is_empty() && module.is_empty() && sampled.is_empty();
    let verdict = if ok {
        format!("valid {} algebra of dimension {}", a.kind, a.dim())
    } else {
        format!("invalid: {} violation(s)", violations.len() + module.len() + sampled.len())
    };
    let weights: BTreeMap<i64, usize> = a.weights.iter().fold(BTreeMap::new(), |mut m, w| {
        *m.entry(*w).or_insert(0) += 1;
        m
    });
    Ok(Report::new(
        ok,
        json!({
            "verdict": verdict,
            "operad": a.kind.name(),
            "dimension": a.dim(),
            "weight_dims": map_json(&weights),
            "violations": violations,
            "module_dimension": s.module.dim(),
            "module_violations": module,
            "sampled_checks": { "seed": cfg.seed, "samples": 16, "failures": sampled },
        }),
    ))
}

fn homology<F: Scalar>(s: &Session<F>, cfg: &Config) -> Result<Report, InputError> {
    let c = chain_complex(&s.algebra, cfg.max_level)?;
    let dims: BTreeMap<i64, usize> = (0..=cfg.max_level as i64).map(|n| (n, c.complex.dim(n))).collect();
    Ok(Report::new(
        true,
        json!({
            "verdict": format!("operadic homology certified in degrees 0..{}", cfg.max_level as i64 - 1),
            "chain_dims": map_json(&dims),
            "betti": map_json(&c.homology()),
            "betti_by_weight": nested_json(&c.weight_homology()),
            "unverified": [cfg.max_level],
        }),
    ))
}

fn cohomology<F: Scalar>(s: &Session<F>, cfg: &Config) -> Result<Report, InputError> {
    let c = cochain_complex(&s.algebra, &s.module, cfg.max_level)?;
    let dims: BTreeMap<i64, usize> = (0..=cfg.max_level as i64).map(|n| (n, c.complex.dim(n))).collect();
    Ok(Report::new(
        true,
        json!({
            "verdict": format!("operadic cohomology certified in degrees 0..{}", cfg.max_level as i64 - 1),
            "cochain_dims": map_json(&dims),
            "betti": map_json(&c.cohomology()),
            "betti_by_weight": nested_json(&c.weight_cohomology()),
            "unverified": [cfg.max_level],
        }),
    ))
}

fn relative_json(h: &RelativeHomology) -> Value {
    json!({
        "totals": map_json(&h.totals()),
        "by_weight": nested_json(&h.by_weight),
        "certified_degrees": h.certified_degrees,
        "unverified": h.unverified,
        "truncation": format!("{:?}", h.truncation),
        "notes": h.notes,
    })
}

fn relative<F: Scalar>(s: &Session<F>, cfg: &Config, cohomology: bool) -> Result<Report, InputError> {
    let f = s.morphism()?;
    let h = if cohomology {
        relative_cohomology(&f, &s.module, cfg.max_level, cfg.max_weight)?
    } else {
        relative_homology(&f, &RightModule::from_left(&s.module), cfg.max_level, cfg.max_weight)?
    };
    let what = if cohomology { "relative cohomology" } else { "relative homology" };
    let mut body = relative_json(&h);
    body["verdict"] = json!(format!("{} over a {}-dimensional base, certified in degrees 0..{}", what, f.source.dim(), h.certified_degrees as i64 - 1));
    body["base_dimension"] = json!(f.source.dim());
    Ok(Report::new(true, body))
}

fn compare<F: Scalar>(s: &Session<F>, cfg: &Config) -> Result<Report, InputError> {
    let c = compare_with_koszul(&s.algebra, &s.module, cfg.max_level, cfg.max_weight)?;
    let rows = |v: &[opalg::relhom::DegreeMatch]| -> Vec<Value> {
        v.iter().map(|d| json!({ "degree": d.degree, "relative": d.relative, "operadic": d.operadic })).collect()
    };
    let mismatches = c.mismatches();
    let verdict = if c.agrees() { "relative and operadic sides agree".to_string() } else { format!("{} mismatch(es)", mismatches.len()) };
    Ok(Report::new(
        c.agrees(),
        json!({
            "verdict": verdict,
            "operad": c.kind.name(),
            "homology": rows(&c.homology),
            "cohomology": rows(&c.cohomology),
            "mismatches": mismatches,
            "koszul_certificate_arity": c.koszulness.max_arity,
            "koszul_certificate_verified": c.koszulness.verified(),
            "notes": c.notes,
        }),
    ))
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::NotEvaluated => "not evaluated",
    }
}

fn seminf_check<F: Scalar>(s: &Session<F>, cfg: &Config) -> Result<Report, InputError> {
    let st = s.seminf()?;
    let cert = validate_semiinfinite(&st, cfg.max_weight);
    let verdict = match cert.first_violation() {
        None => format!("semi-infinite structure certified up to weight {}", cfg.max_weight),
        Some(v) => format!("condition ({}) fails: {}", v.index, v.witness.clone().unwrap_or_else(|| v.detail.clone())),
    };
    let conditions: Vec<Value> = cert
        .conditions
        .iter()
        .map(|c| json!({ "index": c.index, "status": status(c.status), "detail": c.detail, "witness": c.witness }))
        .collect();
    let table: Vec<Value> = cert
        .k_table
        .iter()
        .map(|b| {
            json!({
                "base_weight": b.base_weight,
                "complement_weight": b.complement_weight,
                "k_min": b.k_min,
                "k_max": b.k_max,
                "witness_min": b.witness_min,
                "witness_max": b.witness_max,
            })
        })
        .collect();
    Ok(Report::new(
        cert.passed(),
        json!({
            "verdict": verdict,
            "violated": cert.violated(),
            "conditions": conditions,
            "pbw_length": cert.pbw_length,
            "algebra_dims": map_json(&cert.algebra_dims),
            "base_dims": map_json(&cert.base_dims),
            "complement_dims": map_json(&cert.complement_dims),
            "k_table": table,
            "notes": cert.notes,
        }),
    ))
}

fn seminf_homology<F: Scalar>(s: &Session<F>, cfg: &Config) -> Result<Report, InputError> {
    let st = s.seminf()?;
    let weights: Vec<i64> = match cfg.weight {
        Some(w) => vec![w],
        None => (-cfg.max_weight..=cfg.max_weight).collect(),
    };
    let mut per_weight = serde_json::Map::new();
    let mut totals: BTreeMap<i64, usize> = BTreeMap::new();
    let mut notes: Vec<String> = Vec::new();
    for w in weights {
        let h = semiinfinite_homology(&st, &s.module, w, cfg.window, cfg.max_weight)?;
        for (n, d) in &h.dims {
            *totals.entry(*n).or_insert(0) += d;
        }
        for note in &h.notes {
            if !notes.contains(note) {
                notes.push(note.clone());
            }
        }
        per_weight.insert(w.to_string(), json!({ "dims": map_json(&h.dims), "unverified": h.unverified }));
    }
    Ok(Report::new(
        true,
        json!({
            "verdict": format!("semi-infinite homology, window [{}, {}]", cfg.window.0, cfg.window.1),
            "window": [cfg.window.0, cfg.window.1],
            "totals": map_json(&totals),
            "by_weight": Value::Object(per_weight),
            "notes": notes,
        }),
    ))
}

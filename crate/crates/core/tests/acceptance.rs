//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; any failure exits with 1.

use std::process::ExitCode;

use cqg_core::analysis::{check_norm_inequalities, cstar_norm, l2_norm, operator_norm};
use cqg_core::conv::{check_approximate_unit, convolve, intertwiner_space, Multiplicities};
use cqg_core::group::{
    build_function_hopf, comodule_of_irrep, fourier, group_convolution, instance_from_group,
    left_convolution_matrix, load_group, random_function, save_group, BUILTIN_GROUPS,
};
use cqg_core::model::{
    load_instance, random_element, random_window, save_instance, BlockLabel, ConvElement, Filtration, InstanceSpec,
    TruncationWindow,
};
use cqg_core::oracle::{load_hopf, save_hopf, HopfOracle, WindowProjector};
use cqg_core::scalar::{c, max_abs_diff, C};
use cqg_core::suites::{run_suite, NamedGroup, NamedHopf, NamedInstance, Suite, SuiteConfig};
use cqg_core::synthetic::synthetic_instances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 20_240_601;

const FOURIER_PAIRS: usize = 500;
const FOURIER_TOL: f64 = 1e-10;
const CLASSICAL_TOL: f64 = 1e-13;
const ASSOC_TRIPLES: usize = 1000;
const ASSOC_TOL: f64 = 1e-12;
const NORM_PAIRS: usize = 1000;
const SLACK_TOL: f64 = -1e-12;
const CSTAR_IDENTITY_TOL: f64 = 1e-10;
const REGULAR_SAMPLES: usize = 200;
const REGULAR_TOL: f64 = 1e-8;
const DUAL_LAW_TOL: f64 = 1e-12;
const DUAL_PAIRS: usize = 200;
const DUAL_MULT_TOL: f64 = 1e-10;
const ANTIPODE_TOL: f64 = 1e-10;
const Q_IDENTITY_TOL: f64 = 1e-12;
const ORTHOGONALITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-12;
const UNIT_SAMPLES: usize = 50;
const INTERTWINER_PATTERNS: usize = 20;
const ROUND_TRIP_TOL: f64 = 1e-10;
const CONDITION_LIMIT: f64 = 1e6;
const PERTURBATION: f64 = 1e-3;
const FAULT_SAMPLES: usize = 20;

type Outcome = Result<String, String>;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn bound(what: &str, value: f64, limit: f64) -> Outcome {
    let line = format!("{what} {value:.3e} (limit {limit:.0e})");
    if value < limit {
        Ok(line)
    } else {
        Err(line)
    }
}

/// Joins sub-results; the first failure fails the criterion.
fn all(parts: Vec<Outcome>) -> Outcome {
    let failed: Vec<String> = parts.iter().filter_map(|p| p.clone().err()).collect();
    if failed.is_empty() {
        Ok(parts.into_iter().map(Result::unwrap).collect::<Vec<_>>().join("; "))
    } else {
        Err(failed.join("; "))
    }
}

fn group(name: &str) -> NamedGroup {
    NamedGroup::builtin(name).expect("built-in group")
}

fn oracle_of(g: &NamedGroup) -> HopfOracle<f64> {
    let (pres, haar) = build_function_hopf::<f64>(&g.table);
    HopfOracle::new(pres, haar).expect("C(G) oracle")
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<C<f64>> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn random_pair_element(spec: &InstanceSpec<f64>, rng: &mut ChaCha8Rng) -> ConvElement<f64> {
    let window = random_window(spec, rng);
    random_element(spec, &window, rng.gen()).expect("window inside the instance")
}

fn fourier_convolution() -> Outcome {
    let mut parts = Vec::new();
    for name in ["z6", "s3", "d4"] {
        let g = group(name);
        let spec = instance_from_group(&g.table, &g.irreps).unwrap();
        let n = g.table.order() as f64;
        let norm = |x: &[C<f64>]| (x.iter().map(|z| z.norm_sqr()).sum::<f64>() / n).sqrt();
        let mut rng = rng(1);
        let mut worst = 0f64;
        for _ in 0..FOURIER_PAIRS {
            let f = random_function::<f64>(&g.table, rng.gen());
            let h = random_function::<f64>(&g.table, rng.gen());
            let lhs = fourier(&g.table, &g.irreps, &group_convolution(&g.table, &f, &h)).unwrap();
            let rhs = convolve(
                &spec,
                &fourier(&g.table, &g.irreps, &f).unwrap(),
                &fourier(&g.table, &g.irreps, &h).unwrap(),
            )
            .unwrap();
            let diff = l2_norm(&spec, &lhs.sub(&rhs)).unwrap();
            worst = worst.max(diff / (1.0 + norm(&f) * norm(&h)));
        }
        parts.push(bound(&format!("{name} theorem"), worst, FOURIER_TOL));

        let oracle = oracle_of(&g);
        let mut classical = 0f64;
        for i in 0..oracle.dim() {
            for j in 0..oracle.dim() {
                let (a, b) = (oracle.presentation().basis_vector(i), oracle.presentation().basis_vector(j));
                classical = classical.max(max_abs_diff(&oracle.conv_abstract(&a, &b), &group_convolution(&g.table, &a, &b)));
            }
        }
        parts.push(bound(&format!("{name} abstract"), classical, CLASSICAL_TOL));
    }
    all(parts)
}

fn block_instances() -> Vec<(String, InstanceSpec<f64>)> {
    synthetic_instances::<f64>()
}

fn associativity() -> Outcome {
    let mut parts = Vec::new();
    for (name, spec) in block_instances() {
        let mut rng = rng(2);
        let mut worst = 0f64;
        for _ in 0..ASSOC_TRIPLES {
            let f = random_pair_element(&spec, &mut rng);
            let g = random_pair_element(&spec, &mut rng);
            let h = random_pair_element(&spec, &mut rng);
            let lhs = convolve(&spec, &convolve(&spec, &f, &g).unwrap(), &h).unwrap();
            let rhs = convolve(&spec, &f, &convolve(&spec, &g, &h).unwrap()).unwrap();
            let l2 = |x: &ConvElement<f64>| l2_norm(&spec, x).unwrap();
            worst = worst.max(l2(&lhs.sub(&rhs)) / (1.0 + l2(&f) * l2(&g) * l2(&h)));
        }
        parts.push(bound(&name, worst, ASSOC_TOL));
    }
    all(parts)
}

fn norm_inequalities() -> Outcome {
    let s3 = group("s3");
    let mut sources = block_instances();
    sources.push(("s3".into(), instance_from_group(&s3.table, &s3.irreps).unwrap()));
    let mut parts = Vec::new();
    for (name, spec) in sources {
        let report = check_norm_inequalities(&spec, SEED, NORM_PAIRS).unwrap();
        let (submult, dominated, _) = report.min_slacks();
        let slack = submult.min(dominated);
        parts.push(if slack >= SLACK_TOL {
            Ok(format!("{name} min slack {slack:.3e}"))
        } else {
            Err(format!("{name} min slack {slack:.3e} (limit {SLACK_TOL:.0e})"))
        });
        parts.push(bound(&format!("{name} C*-identity"), report.max_identity_rel(), CSTAR_IDENTITY_TOL));
    }
    all(parts)
}

fn regular_representation() -> Outcome {
    let mut parts = Vec::new();
    for name in ["s3", "d4"] {
        let g = group(name);
        let spec = instance_from_group(&g.table, &g.irreps).unwrap();
        let mut rng = rng(4);
        let mut worst = 0f64;
        for _ in 0..REGULAR_SAMPLES {
            let f = random_function::<f64>(&g.table, rng.gen());
            let block = cstar_norm(&spec, &fourier(&g.table, &g.irreps, &f).unwrap()).unwrap();
            let direct = operator_norm(&left_convolution_matrix(&g.table, &f)).unwrap();
            worst = worst.max((block - direct).abs());
        }
        parts.push(bound(name, worst, REGULAR_TOL));
    }
    all(parts)
}

fn hopf_axioms() -> Outcome {
    let mut parts = Vec::new();
    for name in ["z6", "s3"] {
        let oracle = oracle_of(&group(name));
        let n = oracle.dim();
        let (coassoc, counit) = oracle.coproduct_star_laws().unwrap();
        parts.push(bound(&format!("{name} laws"), coassoc.max(counit), DUAL_LAW_TOL));
        let mut rng = rng(5);
        let mut mult = 0f64;
        for _ in 0..DUAL_PAIRS {
            let (f, h) = (random_vector(n, &mut rng), random_vector(n, &mut rng));
            mult = mult.max(oracle.coproduct_star_multiplicativity(&f, &h).unwrap());
        }
        parts.push(bound(&format!("{name} multiplicative"), mult, DUAL_MULT_TOL));
        let antipode = oracle.approximate_antipode_residual(&WindowProjector::full(n)).unwrap();
        parts.push(bound(&format!("{name} antipode"), antipode, ANTIPODE_TOL));
    }
    all(parts)
}

fn reflection_matrices() -> Outcome {
    let (mut q_err, mut trace) = (0f64, 0f64);
    let mut orthogonality = f64::INFINITY;
    for name in BUILTIN_GROUPS {
        let g = group(name);
        let oracle = oracle_of(&g);
        for irrep in &g.irreps.irreps {
            let data = oracle.reflection_matrices(&comodule_of_irrep(irrep)).unwrap();
            q_err = q_err.max(data.q.max_abs_diff(&cqg_core::CMatrix::identity(irrep.dim())));
            trace = trace.max(data.trace_minus_dim.norm());
            if name == "s3" && irrep.label == BlockLabel::new("std") {
                orthogonality = data.int_residual.max(data.int2_residual);
            }
        }
    }
    all(vec![
        bound("Q = I", q_err, Q_IDENTITY_TOL),
        bound("s3 std orthogonality", orthogonality, ORTHOGONALITY_TOL),
        bound("trace identity", trace, TRACE_TOL),
    ])
}

fn approximate_unit() -> Outcome {
    let mut parts = Vec::new();
    let d4 = group("d4");
    let mut sources = block_instances();
    sources.push(("d4".into(), instance_from_group(&d4.table, &d4.irreps).unwrap()));
    for (name, spec) in sources {
        let labels: Vec<BlockLabel> = spec.labels().filter(|l| !l.is_zero()).cloned().collect();
        // Four steps: the trivial window, one more label, half, everything.
        let cut = |k: usize| TruncationWindow::new(labels[..k].iter().cloned().chain([BlockLabel::zero()])).unwrap();
        let half = (labels.len() / 2).max(2);
        let chain = Filtration::new(vec![cut(0), cut(1), cut(half), cut(labels.len())]).unwrap();
        let mut rng = rng(7);
        let samples: Vec<_> = (0..UNIT_SAMPLES).map(|_| random_pair_element(&spec, &mut rng)).collect();
        let report = check_approximate_unit(&spec, &chain, &samples, UNIT_TOL);
        parts.push(if report.passed() {
            Ok(format!("{name} over {} windows", chain.len()))
        } else {
            Err(format!("{name}:\n{report}"))
        });
    }
    all(parts)
}

fn category_equivalence() -> Outcome {
    let mut parts = Vec::new();
    let (name, spec) = block_instances().remove(0);
    let labels: Vec<BlockLabel> = spec.labels().cloned().collect();
    let mut rng = rng(8);
    let mut mismatches = 0;
    for _ in 0..INTERTWINER_PATTERNS {
        let (mut source, mut target) = (Multiplicities::new(), Multiplicities::new());
        for _ in 0..3 {
            let l = labels[rng.gen_range(0..labels.len())].clone();
            *source.entry(l.clone()).or_insert(0) += rng.gen_range(0..=2);
            *target.entry(l).or_insert(0) += rng.gen_range(0..=2);
        }
        let expected: usize = source.iter().map(|(l, s)| s * target.get(l).copied().unwrap_or(0)).sum();
        if intertwiner_space(&spec, &source, &target).unwrap().dim() != expected {
            mismatches += 1;
        }
    }
    parts.push(if mismatches == 0 {
        Ok(format!("{name} {INTERTWINER_PATTERNS} patterns"))
    } else {
        Err(format!("{name} {mismatches} dimension mismatches"))
    });

    let s3 = group("s3");
    let oracle = oracle_of(&s3);
    let irrep = s3.irreps.irreps.iter().find(|r| r.label == BlockLabel::new("std")).unwrap();
    let comodule = comodule_of_irrep(irrep);
    let mut generator = vec![c(0., 0.); irrep.dim()];
    generator[0] = c(1., 0.);
    let (back, _) = oracle.action_to_coaction(&oracle.module_of(&comodule), &generator).unwrap();
    let mut round = 0f64;
    for (x, y) in back.coefficient_vectors().iter().zip(comodule.coefficient_vectors()) {
        round = round.max(max_abs_diff(x, y));
    }
    parts.push(bound("s3 std round trip", round, ROUND_TRIP_TOL));
    all(parts)
}

fn non_degeneracy() -> Outcome {
    all(BUILTIN_GROUPS
        .iter()
        .map(|name| {
            let oracle = oracle_of(&group(name));
            let cond = oracle.pairing_condition();
            if cond.is_finite() && cond < CONDITION_LIMIT {
                Ok(format!("{name} cond {cond:.3}"))
            } else {
                Err(format!("{name} cond {cond:.3e}"))
            }
        })
        .collect())
}

fn float_leaves(v: &Value, path: &mut Vec<Value>, found: &mut Vec<Vec<Value>>) {
    match v {
        Value::Number(n) if n.is_f64() => found.push(path.clone()),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                path.push(Value::from(i));
                float_leaves(item, path, found);
                path.pop();
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                path.push(Value::from(k.as_str()));
                float_leaves(item, path, found);
                path.pop();
            }
        }
        _ => {}
    }
}

/// Every copy of `document` with one floating-point constant moved by
/// [`PERTURBATION`].
fn perturbations(document: &str) -> Vec<String> {
    let original: Value = serde_json::from_str(document).unwrap();
    let mut leaves = Vec::new();
    float_leaves(&original, &mut Vec::new(), &mut leaves);
    leaves
        .iter()
        .map(|leaf| {
            let mut doc = original.clone();
            let x = leaf.iter().fold(&mut doc, |v, key| match key {
                Value::String(k) => &mut v[k.as_str()],
                Value::Number(i) => &mut v[i.as_u64().unwrap() as usize],
                _ => unreachable!(),
            });
            *x = Value::from(x.as_f64().unwrap() + PERTURBATION);
            serde_json::to_string(&doc).unwrap()
        })
        .collect()
}

fn fault_config(groups: Vec<NamedGroup>) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(SEED, FAULT_SAMPLES, 1e-10).unwrap();
    cfg.synthetic = false;
    cfg.groups = groups;
    cfg
}

fn fault_sensitivity() -> Outcome {
    let mut parts = Vec::new();
    for name in ["z2", "s3"] {
        let g = group(name);
        let clean = |cfg: &SuiteConfig, suite| run_suite(suite, cfg).passed();

        let (pres, _) = build_function_hopf::<f64>(&g.table);
        let (mut total, mut missed) = (0, 0);
        for doc in perturbations(&save_hopf(&pres)) {
            let mut cfg = fault_config(vec![g.clone()]);
            cfg.hopfs.push(NamedHopf {
                name: "fixture".into(),
                presentation: load_hopf(doc.as_bytes()).unwrap(),
            });
            total += 1;
            missed += usize::from(clean(&cfg, Suite::Hopf));
        }
        parts.push(detected(&format!("{name} hopf"), total, missed));

        let (mut total, mut missed) = (0, 0);
        for doc in perturbations(&save_group(&g.table, Some(&g.irreps))) {
            let (table, irreps) = load_group::<f64>(doc.as_bytes()).unwrap();
            let cfg = fault_config(vec![NamedGroup {
                name: name.into(),
                table,
                irreps: irreps.unwrap(),
            }]);
            total += 1;
            missed += usize::from(clean(&cfg, Suite::All));
        }
        parts.push(detected(&format!("{name} group"), total, missed));

        let spec = instance_from_group(&g.table, &g.irreps).unwrap();
        let (mut total, mut missed) = (0, 0);
        for doc in perturbations(&save_instance(&spec)) {
            let mut cfg = fault_config(vec![g.clone()]);
            // Rejected at load time counts as detected.
            let Ok(spec) = load_instance::<f64>(doc.as_bytes()) else {
                total += 1;
                continue;
            };
            cfg.instances.push(NamedInstance {
                name: "fixture".into(),
                spec,
            });
            total += 1;
            missed += usize::from(clean(&cfg, Suite::All));
        }
        parts.push(detected(&format!("{name} instance"), total, missed));
    }
    all(parts)
}

fn detected(what: &str, total: usize, missed: usize) -> Outcome {
    if missed == 0 && total > 0 {
        Ok(format!("{what} {total}/{total}"))
    } else {
        Err(format!("{what} {}/{total} detected", total - missed))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 Fourier-convolution theorem", fourier_convolution),
        ("2 associativity", associativity),
        ("3 norm inequalities", norm_inequalities),
        ("4 regular-representation norm", regular_representation),
        ("5 Hopf axioms of the dual", hopf_axioms),
        ("6 reflection-matrix identities", reflection_matrices),
        ("7 approximate unit", approximate_unit),
        ("8 category equivalence", category_equivalence),
        ("9 non-degeneracy", non_degeneracy),
        ("10 fault sensitivity", fault_sensitivity),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

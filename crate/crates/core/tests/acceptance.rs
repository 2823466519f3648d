//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 3 compares the as-printed multilinear coefficient condition
//! with the Euler verdict. It is expected to print FAIL: the condition is
//! refuted by explicit zero-integral operators in three dimensions, which are
//! written to the target directory and shipped in `fixtures/binomial_condition`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cclab::criteria::random::{random_bilinear_shape, random_multilinear, trilinear_survey};
use cclab::criteria::{
    analyze, bilinear_criterion, binomial_product_condition, homogeneous_criterion, parity_classify, parity_spec, scaling_decompose,
    zero_integral, ParityShape, Theorem,
};
use cclab::multiindex::{enumerate, EnumerationMode, MultiIndex};
use cclab::opdsl::{parse, parse_file, pretty_print, CoefficientTable, OperatorSpec, ParseErrorKind};
use cclab::spectral::quadrature::{perturbation_cutoff, random_fields, variation_check};
use cclab::spectral::{numeric_check, run_experiment, ExperimentConfig, ExperimentResult, Grid, NumericOptions};
use cclab::{corpus, Rational, Symbol};

/// Criteria whose FAIL is a documented finding rather than an engine error.
const KNOWN_FINDINGS: [usize; 1] = [3];

struct Outcome {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn report(id: usize, title: &'static str, start: Instant, result: Result<(bool, String), String>) -> Outcome {
    let (pass, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    let o = Outcome {
        id,
        title,
        pass,
        detail: format!("{detail} [{:.1}s]", start.elapsed().as_secs_f64()),
    };
    println!(
        "criterion {:>2} {:<44} {}  {}",
        o.id,
        o.title,
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    o
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn corpus_specs() -> Vec<OperatorSpec> {
    corpus::load().expect("corpus parses")
}

fn check_experiment(r: &ExperimentResult) -> (bool, String) {
    let failed: Vec<String> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    let detail = if failed.is_empty() {
        format!("{}: {} checks", r.id, r.checks.len())
    } else {
        format!("{}: failed {}", r.id, failed.join(", "))
    };
    (failed.is_empty(), detail)
}

// 1. Corpus classification.
fn corpus_classification() -> Result<(bool, String), String> {
    let zero: [(&str, Theorem); 10] = [
        ("jacobian2", Theorem::HomogeneousMultilinear),
        ("jacobian3", Theorem::HomogeneousMultilinear),
        ("hessian2", Theorem::HomogeneousPolynomial),
        ("hessian3", Theorem::HomogeneousPolynomial),
        ("monge_ampere", Theorem::HomogeneousMultilinear),
        ("div_curl", Theorem::HomogeneousMultilinear),
        ("gradient_transport", Theorem::HomogeneousMultilinear),
        ("convective", Theorem::HomogeneousMultilinear),
        ("divergence_free_gradient", Theorem::HomogeneousMultilinear),
        ("second_jacobian", Theorem::HomogeneousMultilinear),
    ];
    let nonzero = ["product", "cross_derivatives", "wronskian"];
    let mut bad = Vec::new();
    for (name, theorem) in zero {
        let spec = corpus::operator(name).ok_or(format!("missing {name}"))?;
        let r = analyze(&spec).map_err(|e| e.to_string())?;
        if !(r.zero_integral.value && r.h1.regular == Some(true) && r.h1.theorem == Some(theorem)) {
            bad.push(name.to_string());
        }
    }
    for name in nonzero {
        let spec = corpus::operator(name).ok_or(format!("missing {name}"))?;
        let r = analyze(&spec).map_err(|e| e.to_string())?;
        let sound = r.zero_integral.witness.as_ref().is_some_and(|w| w.recheck());
        if r.zero_integral.value || !sound {
            bad.push(name.to_string());
        }
    }
    // Every recorded expectation in the corpus holds.
    for spec in corpus_specs() {
        let r = analyze(&spec).map_err(|e| e.to_string())?;
        if !r.inconsistencies().is_empty() {
            bad.push(format!("{}: {:?}", spec.name, r.inconsistencies()));
        }
    }
    Ok((bad.is_empty(), format!("{} true, {} false classified; problems: {bad:?}", zero.len(), nonzero.len())))
}

// 2. Bilinear criterion equivalence.
fn bilinear_equivalence() -> Result<(bool, String), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut total, mut homogeneous, mut zeros, mut bad) = (0, 0, 0, 0);
    for k in 0..520 {
        let shape = random_bilinear_shape(&mut rng, 3, 2, 2);
        let spec = random_multilinear(&mut rng, &shape, 4, k % 2 == 0);
        let table = CoefficientTable::from_spec(&spec).map_err(|e| e.to_string())?;
        let euler = zero_integral(&spec).map_err(|e| e.to_string())?.value;
        total += 1;
        zeros += usize::from(euler);
        if bilinear_criterion(&table).map_err(|e| e.to_string())?.value != euler {
            bad += 1;
        }
        if table.is_slot_homogeneous() {
            homogeneous += 1;
            if homogeneous_criterion(&table).map_err(|e| e.to_string())?.value != euler {
                bad += 1;
            }
        }
    }
    Ok((
        bad == 0,
        format!("{total} specs ({zeros} zero-integral, {homogeneous} slot-homogeneous), {bad} disagreements"),
    ))
}

// 3. The multilinear coefficient condition.
fn multilinear_condition() -> Result<(bool, String), String> {
    let survey = trilinear_survey(7, 120).map_err(|e| e.to_string())?;
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("binomial_condition");
    std::fs::create_dir_all(&out).map_err(|e| e.to_string())?;
    for spec in &survey.counterexamples {
        std::fs::write(out.join(format!("{}.op", spec.name)), pretty_print(spec)).map_err(|e| e.to_string())?;
    }
    // The shipped counterexamples must still be zero-integral operators on
    // which the condition fails; confirm a few numerically as well.
    let mut shipped = 0;
    let mut confirmed = true;
    let dir = fixtures().join("binomial_condition");
    let mut paths: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.flatten().map(|e| e.path()).collect();
    paths.sort();
    let opts = NumericOptions {
        grid: Some(32),
        trials: 2,
        ..NumericOptions::default()
    };
    for p in &paths {
        let spec = parse(&std::fs::read_to_string(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let table = CoefficientTable::from_spec(&spec).map_err(|e| e.to_string())?;
        let euler = zero_integral(&spec).map_err(|e| e.to_string())?.value;
        let printed = binomial_product_condition(&table).map_err(|e| e.to_string())?.value;
        confirmed &= euler && !printed;
        if shipped < 3 {
            confirmed &= numeric_check(&spec, &opts).map_err(|e| e.to_string())?.max_rel_integral <= 1e-8;
        }
        shipped += 1;
    }
    let engine_ok = survey.leibniz_disagreements.is_empty() && confirmed && shipped > 0;
    if !engine_ok {
        return Err(format!(
            "engine inconsistency: {} Leibniz disagreements, shipped fixtures confirmed: {confirmed}",
            survey.leibniz_disagreements.len()
        ));
    }
    Ok((
        survey.counterexamples.is_empty(),
        format!(
            "{} specs ({} zero-integral): condition disagrees on {} (written to {}); exact criterion agrees on all; {} shipped counterexamples re-verified",
            survey.checked,
            survey.zero_integral,
            survey.counterexamples.len(),
            out.display(),
            shipped
        ),
    ))
}

// 4. Parity laws.
fn parity_laws() -> Result<(bool, String), String> {
    let alphas = enumerate(2, 3, EnumerationMode::UpTo).map_err(|e| e.to_string())?;
    let mut operators: Vec<Vec<(MultiIndex, Rational)>> =
        alphas.iter().map(|a| vec![(*a, Rational::from_integer(1.into()))]).collect();
    for (i, a) in alphas.iter().enumerate() {
        for b in &alphas[i + 1..] {
            operators.push(vec![
                (*a, Rational::from_integer(1.into())),
                (*b, Rational::new((-2).into(), 3.into())),
            ]);
        }
    }
    let (mut cases, mut bad) = (0, 0);
    for p in &operators {
        for shape in [ParityShape::Difference, ParityShape::Sum, ParityShape::Product] {
            let rule = match shape {
                ParityShape::Difference => p.iter().all(|(a, _)| a.order() % 2 == 0),
                ParityShape::Sum => p.iter().all(|(a, _)| a.order() % 2 == 1),
                ParityShape::Product => p.iter().all(|(a, _)| !a.is_zero()),
            };
            let spec = parity_spec(shape, 2, p);
            let euler = zero_integral(&spec).map_err(|e| e.to_string())?.value;
            let table_verdict = match CoefficientTable::from_spec(&spec) {
                Ok(t) => bilinear_criterion(&t).map_err(|e| e.to_string())?.value,
                // The difference shape of a pure order-zero P is identically 0.
                Err(_) => spec.body.is_zero(),
            };
            let parity = if spec.body.is_zero() {
                true
            } else {
                parity_classify(&spec).map_err(|e| e.to_string())?.value
            };
            cases += 1;
            if !(rule == euler && euler == table_verdict && table_verdict == parity) {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("{cases} cases over {} operators, {bad} mismatches", operators.len())))
}

// 5. Scaling decomposition.
fn scaling_decomposition() -> Result<(bool, String), String> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for spec in corpus_specs() {
        if !zero_integral(&spec).map_err(|e| e.to_string())?.value {
            continue;
        }
        checked += 1;
        for (level, piece) in scaling_decompose(&spec) {
            let ok = if level == 0 {
                piece.body.is_zero()
            } else {
                zero_integral(&piece).map_err(|e| e.to_string())?.value
            };
            if !ok {
                bad.push(format!("{} level {level}", spec.name));
            }
        }
    }
    Ok((bad.is_empty(), format!("{checked} zero-integral operators; failing pieces: {bad:?}")))
}

// 6. Spectral identities.
fn spectral_identities() -> Result<(bool, String), String> {
    let cfg = ExperimentConfig::with_seed(42);
    let mut pass = true;
    let mut details = Vec::new();
    for (name, trials) in [("beurling", 20), ("kb", 50), ("potentials", 10)] {
        let cfg = ExperimentConfig {
            trials: Some(trials),
            ..cfg.clone()
        };
        let r = run_experiment(name, &cfg).map_err(|e| e.to_string())?;
        let (p, d) = check_experiment(&r);
        pass &= p;
        details.push(d);
    }
    Ok((pass, details.join("; ")))
}

// 7. Symbolic/numeric soundness.
fn numeric_soundness() -> Result<(bool, String), String> {
    let opts = NumericOptions::default();
    let mut bad = Vec::new();
    let (mut worst_true, mut weakest_false): (f64, f64) = (0.0, f64::INFINITY);
    let specs = corpus_specs();
    for spec in &specs {
        let n = numeric_check(spec, &opts).map_err(|e| format!("{}: {e}", spec.name))?;
        match n.witness_rel_integral {
            None => worst_true = worst_true.max(n.max_rel_integral),
            Some(w) => weakest_false = weakest_false.min(w),
        }
        if !n.agrees {
            bad.push(spec.name.clone());
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{} operators x {} samples: max true-verdict |int|/scale {worst_true:.1e}, min witness {weakest_false:.2e}; disagreeing: {bad:?}",
            specs.len(),
            opts.trials
        ),
    ))
}

fn experiment(name: &str) -> Result<(bool, String), String> {
    run_experiment(name, &ExperimentConfig::with_seed(42))
        .map(|r| check_experiment(&r))
        .map_err(|e| e.to_string())
}

// 9. Scaling, both normalizations.
fn scaling() -> Result<(bool, String), String> {
    let (a, da) = experiment("scaling")?;
    let (b, db) = experiment("scaling-lp")?;
    Ok((a && b, format!("{da}; {db}")))
}

// 11. Audit of the published cubic operator.
fn cubic_audit() -> Result<(bool, String), String> {
    let spec = corpus::operator("oscillating_cubic").ok_or("missing operator")?;
    let r1 = analyze(&spec).map_err(|e| e.to_string())?;
    let r2 = analyze(&spec).map_err(|e| e.to_string())?;
    let deterministic = r1.to_json() == r2.to_json();
    let grid = Grid::new(3, 32).map_err(|e| e.to_string())?;
    let fields = random_fields(&spec, &grid, 62).map_err(|e| e.to_string())?;
    let psi = perturbation_cutoff().field(&grid, "psi");
    let mut worst: f64 = 0.0;
    let mut nonzero = false;
    for sym in ["u", "v"] {
        let c = variation_check(&spec.body, &fields, &Symbol::new(sym), 1, &psi).map_err(|e| e.to_string())?;
        worst = worst.max(c.relative_error);
        nonzero |= c.symbolic.abs() > 1e-6;
    }
    let flagged = r1.claim_disagreement() && !r1.claims.is_empty();
    Ok((
        worst <= 1e-8 && deterministic && flagged && !r1.zero_integral.value && nonzero,
        format!(
            "variation vs Euler pairing rel. error {worst:.1e}; zero_integral={}, claim flag={flagged}, deterministic={deterministic}",
            r1.zero_integral.value
        ),
    ))
}

// 12. DSL round trip and error fixtures.
fn dsl_round_trip() -> Result<(bool, String), String> {
    let mut bad = Vec::new();
    let mut files = 0;
    for (name, text) in corpus::FILES {
        files += 1;
        for spec in parse_file(text).map_err(|e| format!("{name}: {e}"))? {
            match parse(&pretty_print(&spec)) {
                Ok(again) if again == spec => {}
                _ => bad.push(name.to_string()),
            }
        }
    }
    let mut kinds = BTreeMap::new();
    for kind in ParseErrorKind::all() {
        let path = fixtures().join("errors").join(format!("{}.op", kind.code()));
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let got = parse(&text).err().map(|e| e.kind);
        kinds.insert(kind.code(), got == Some(kind));
    }
    let errors_ok = kinds.values().all(|v| *v);
    Ok((
        bad.is_empty() && errors_ok && files >= 20,
        format!("{files} corpus files round-trip (failures {bad:?}); {} error fixtures ok: {errors_ok}", kinds.len()),
    ))
}

fn main() {
    type Criterion = (usize, &'static str, fn() -> Result<(bool, String), String>);
    let criteria: [Criterion; 12] = [
        (1, "corpus classification", corpus_classification),
        (2, "bilinear criterion equivalence", bilinear_equivalence),
        (3, "multilinear coefficient condition", multilinear_condition),
        (4, "parity laws", parity_laws),
        (5, "scaling decomposition", scaling_decomposition),
        (6, "spectral identities", spectral_identities),
        (7, "symbolic/numeric soundness", numeric_soundness),
        (8, "Hardy-space estimate surrogate", || experiment("hardy")),
        (9, "scaling non-surjectivity", scaling),
        (10, "oscillation", || experiment("oscillation")),
        (11, "published cubic operator audit", cubic_audit),
        (12, "DSL round trip and diagnostics", dsl_round_trip),
    ];
    let outcomes: Vec<Outcome> = criteria
        .iter()
        .map(|(id, title, f)| {
            let start = Instant::now();
            report(*id, title, start, f())
        })
        .collect();
    let unexpected: Vec<usize> = outcomes
        .iter()
        .filter(|o| !o.pass && !KNOWN_FINDINGS.contains(&o.id))
        .map(|o| o.id)
        .collect();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass", outcomes.len());
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
    // An engine error in the survey is reported as an error detail, not as
    // the documented finding.
    for o in &outcomes {
        assert!(!o.detail.starts_with("error:"), "criterion {} errored: {}", o.id, o.detail);
    }
}

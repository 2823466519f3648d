//! Per-operator analysis reports and their JSON form.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{
    bilinear_criterion, binomial_product_condition, h1_verdict, homogeneous_criterion, leibniz_multilinear_criterion,
    null_lagrangian, parity_classify, scaling_decompose, zero_integral, CriteriaError, H1Verdict, Method, Verdict,
    Witness,
};
use crate::diffpoly::render::render_rational;
use crate::diffpoly::Homogeneity;
use crate::opdsl::{CoefficientTable, OperatorSpec};

/// Outcome of the numeric quadrature cross-check for one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSummary {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Largest `|∫ L| / scale` over the random samples.
    pub max_rel_integral: f64,
    /// `|∫ L| / scale` of the witness-guided sample, when the verdict is false.
    pub witness_rel_integral: Option<f64>,
    /// Whether the numbers are consistent with the symbolic verdict.
    pub agrees: bool,
}

/// A `key=value` expectation compared with the computed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimCheck {
    pub key: String,
    pub claimed: String,
    pub computed: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub name: String,
    pub dim: usize,
    pub shape: String,
    pub slot_homogeneous: bool,
    pub homogeneity: Homogeneity,
    pub levels: Vec<u32>,
    pub zero_integral: Verdict,
    pub null_lagrangian: Verdict,
    pub h1: H1Verdict,
    /// Every applicable shape-specific criterion and its verdict.
    pub criteria: Vec<Verdict>,
    /// Expectations recorded with the operator (`# expect: key=value`).
    pub expectations: Vec<ClaimCheck>,
    /// Published claims (`# expect: claimed.key=value`); disagreement is a
    /// finding, not a failure.
    pub claims: Vec<ClaimCheck>,
    pub numeric: Option<NumericSummary>,
}

const CLAIM_PREFIX: &str = "claimed.";

/// Runs every symbolic decision on `spec`.
pub fn analyze(spec: &OperatorSpec) -> Result<AnalysisReport, CriteriaError> {
    let zi = zero_integral(spec)?;
    let nl = null_lagrangian(spec)?;
    let h1 = h1_verdict(spec)?;
    let table = CoefficientTable::from_spec(spec).ok();
    let shape = match &table {
        _ if spec.body.is_zero() => "zero".to_string(),
        Some(t) if t.rank() == 2 => "bilinear".to_string(),
        Some(t) => format!("{}-linear", t.rank()),
        None => "polynomial".to_string(),
    };
    let slot_homogeneous = table.as_ref().is_some_and(|t| t.is_slot_homogeneous());

    let mut criteria = Vec::new();
    if let Some(t) = &table {
        if t.is_unconstrained() {
            if t.rank() == 2 {
                criteria.push(bilinear_criterion(t)?);
                if t.is_slot_homogeneous() {
                    criteria.push(homogeneous_criterion(t)?);
                }
            }
            if t.rank() >= 3 && t.is_slot_homogeneous() {
                criteria.push(binomial_product_condition(t)?);
            }
            if t.rank() >= 2 {
                criteria.push(leibniz_multilinear_criterion(t)?);
            }
        }
    }
    if let Ok(v) = parity_classify(spec) {
        criteria.push(v);
    }

    let mut report = AnalysisReport {
        name: spec.name.clone(),
        dim: spec.dim,
        shape,
        slot_homogeneous,
        homogeneity: spec.body.homogeneity(),
        levels: scaling_decompose(spec).into_iter().map(|(l, _)| l).collect(),
        zero_integral: zi,
        null_lagrangian: nl,
        h1,
        criteria,
        expectations: Vec::new(),
        claims: Vec::new(),
        numeric: None,
    };
    for (key, value) in &spec.expectations {
        let (bare, is_claim) = match key.strip_prefix(CLAIM_PREFIX) {
            Some(k) => (k, true),
            None => (key.as_str(), false),
        };
        let computed = report.computed(bare).unwrap_or_else(|| "<unknown key>".to_string());
        let check = ClaimCheck {
            key: bare.to_string(),
            claimed: value.clone(),
            agrees: &computed == value,
            computed,
        };
        if is_claim {
            report.claims.push(check);
        } else {
            report.expectations.push(check);
        }
    }
    Ok(report)
}

impl AnalysisReport {
    /// Computed value for an expectation key.
    pub fn computed(&self, key: &str) -> Option<String> {
        Some(match key {
            "zero_integral" => self.zero_integral.value.to_string(),
            "null_lagrangian" => self.null_lagrangian.value.to_string(),
            "h1_regular" => self.h1.regular.map_or("none".to_string(), |b| b.to_string()),
            "theorem" => self.h1.theorem.map_or("none".to_string(), |t| t.to_string()),
            "shape" => self.shape.clone(),
            "homogeneous" => self.homogeneity.is_homogeneous.to_string(),
            "degree" => self.homogeneity.degree.to_string(),
            "levels" => self.levels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","),
            "method" => self.zero_integral.method.to_string(),
            _ => return None,
        })
    }

    /// Criteria that are theorems and disagree with the Euler verdict.
    /// (The as-printed multilinear condition is excluded: it is an
    /// unproved conjecture, and disagreement is reported as a finding.)
    pub fn criterion_disagreements(&self) -> Vec<Method> {
        self.criteria
            .iter()
            .filter(|v| v.method != Method::BinomialProductCondition && v.value != self.zero_integral.value)
            .map(|v| v.method)
            .collect()
    }

    /// Findings that do not indicate an engine error.
    pub fn findings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for v in &self.criteria {
            if v.method == Method::BinomialProductCondition && v.value != self.zero_integral.value {
                out.push(format!(
                    "the as-printed multilinear coefficient condition gives {} but the Euler verdict is {}",
                    v.value, self.zero_integral.value
                ));
            }
        }
        for c in self.claims.iter().filter(|c| !c.agrees) {
            out.push(format!("claimed {}={} but computed {}", c.key, c.claimed, c.computed));
        }
        out
    }

    /// Reasons this report indicates an internal inconsistency.
    pub fn inconsistencies(&self) -> Vec<String> {
        let mut out = Vec::new();
        for m in self.criterion_disagreements() {
            out.push(format!("{m} disagrees with the Euler verdict"));
        }
        if let Some(w) = &self.zero_integral.witness {
            if !w.recheck() {
                out.push("witness does not re-evaluate to a nonzero residual".into());
            }
        }
        for e in self.expectations.iter().filter(|e| !e.agrees) {
            out.push(format!("expected {}={} but computed {}", e.key, e.claimed, e.computed));
        }
        if let Some(n) = &self.numeric {
            if !n.agrees {
                out.push("numeric quadrature disagrees with the symbolic verdict".into());
            }
        }
        out
    }

    pub fn claim_disagreement(&self) -> bool {
        self.claims.iter().any(|c| !c.agrees)
    }

    /// JSON with sorted keys and rationals as strings.
    pub fn to_json(&self) -> Value {
        let mut details = Map::new();
        for v in std::iter::once(&self.zero_integral).chain(&self.criteria) {
            for (k, c) in &v.details {
                details.insert(format!("{}: {}", v.method, k), Value::String(render_rational(c)));
            }
        }
        let criteria: Map<String, Value> = self
            .criteria
            .iter()
            .map(|v| (v.method.to_string(), Value::Bool(v.value)))
            .collect();
        let checks = |cs: &[ClaimCheck]| -> Value {
            cs.iter()
                .map(|c| json!({"key": c.key, "expected": c.claimed, "computed": c.computed, "agrees": c.agrees}))
                .collect()
        };
        let mut zi = json!({
            "value": self.zero_integral.value,
            "method": self.zero_integral.method.to_string(),
        });
        if let Some(w) = &self.zero_integral.witness {
            zi["witness"] = witness_json(w);
        }
        let mut nl = json!({"value": self.null_lagrangian.value});
        if let Some(w) = &self.null_lagrangian.witness {
            nl["residual"] = Value::String(format!("E[{}[{}]] = {}", w.residual_symbol, w.residual_component, w.residual));
        }
        let numeric = match &self.numeric {
            None => Value::Null,
            Some(n) => json!({
                "trials": n.trials,
                "seed": n.seed,
                "tol": n.tol,
                "max_rel_integral": n.max_rel_integral,
                "witness_rel_integral": n.witness_rel_integral,
                "agrees": n.agrees,
            }),
        };
        json!({
            "name": self.name,
            "n": self.dim,
            "shape": self.shape,
            "slot_homogeneous": self.slot_homogeneous,
            "homogeneous": {"is": self.homogeneity.is_homogeneous, "degree": self.homogeneity.degree},
            "levels": self.levels,
            "zero_integral": zi,
            "null_lagrangian": nl,
            "h1_regular": {
                "value": self.h1.regular,
                "theorem": self.h1.theorem.map_or("none".to_string(), |t| t.to_string()),
                "note": self.h1.note,
            },
            "criteria": criteria,
            "criterion_details": details,
            "numeric_check": numeric,
            "expectations": checks(&self.expectations),
            "claims": checks(&self.claims),
            "flags": {
                "claim_disagreement": self.claim_disagreement(),
                "internal_inconsistency": self.inconsistencies(),
                "findings": self.findings(),
            },
        })
    }
}

fn witness_json(w: &Witness) -> Value {
    let assignment: Map<String, Value> = w
        .assignment
        .iter()
        .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
        .map(|(k, v)| (crate::diffpoly::render::render_jet_var(k, w.residual.arity(&k.symbol).unwrap_or(1)), Value::String(render_rational(v))))
        .collect();
    let coefficient_map: BTreeMap<String, String> = w
        .taylor_coefficients()
        .into_iter()
        .flat_map(|((s, i), terms)| {
            terms
                .into_iter()
                .map(move |(a, c)| (format!("{s}[{i}] {a}"), render_rational(&c)))
        })
        .collect();
    json!({
        "symbol": w.residual_symbol.to_string(),
        "component": w.residual_component,
        "residual": w.residual.to_string(),
        "value": render_rational(&w.value),
        "jet": assignment,
        "taylor": coefficient_map,
        "realization": w.realization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opdsl::parse;

    #[test]
    fn report_for_failing_bilinear() {
        let s = parse(
            r#"operator "s" {
                 # expect: zero_integral=false
                 # expect: claimed.zero_integral=true
                 dims 2; functions u: R^1, v: R^1; expr = dx(u)*dy(v); }"#,
        )
        .unwrap();
        let r = analyze(&s).unwrap();
        assert!(r.inconsistencies().is_empty());
        assert!(r.claim_disagreement());
        let j = r.to_json();
        assert_eq!(j["zero_integral"]["value"], Value::Bool(false));
        assert_eq!(j["zero_integral"]["witness"]["residual"], "-dxy(v)");
        assert_eq!(j["h1_regular"]["theorem"], "homogeneous_multilinear");
        assert_eq!(j["criteria"]["coefficient_criterion"], Value::Bool(false));
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.find("\"claims\"").unwrap() < text.find("\"criteria\"").unwrap());
    }
}

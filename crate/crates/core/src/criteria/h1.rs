//! Zero-integral, null-Lagrangian and Hardy-space (H¹) verdicts.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{first_nonzero_residual, spec_body_for_euler, CriteriaError, Method, Verdict, Witness};
use crate::diffpoly::Rational;
use crate::opdsl::{CoefficientTable, OperatorSpec};

/// `∫ L = 0` for all compactly supported admissible inputs, decided by the
/// vanishing of every Euler residual (after potential substitution for
/// constrained slots).
pub fn zero_integral(spec: &OperatorSpec) -> Result<Verdict, CriteriaError> {
    let (body, method) = spec_body_for_euler(spec)?;
    Ok(match first_nonzero_residual(&body)? {
        None => Verdict::holds(method),
        Some(((s, i), r)) => {
            let details = residual_details(&s.to_string(), i, &r);
            Verdict {
                value: false,
                method,
                witness: Some(Witness::from_residual(s, i, r)),
                details,
            }
        }
    })
}

fn residual_details(symbol: &str, component: usize, r: &crate::DiffPolynomial) -> BTreeMap<String, Rational> {
    r.terms()
        .map(|(m, c)| (format!("E[{symbol}[{component}]] {}", r.render_monomial(m)), c.clone()))
        .collect()
}

/// Null Lagrangian: every Euler–Lagrange expression of the body vanishes
/// identically (all symbols are varied freely, constraints are ignored).
pub fn null_lagrangian(spec: &OperatorSpec) -> Result<Verdict, CriteriaError> {
    Ok(match first_nonzero_residual(&spec.body)? {
        None => Verdict::holds(Method::EulerOracle),
        Some(((s, i), r)) => Verdict {
            value: false,
            method: Method::EulerOracle,
            details: residual_details(&s.to_string(), i, &r),
            witness: Some(Witness::from_residual(s, i, r)),
        },
    })
}

/// The result family that justifies an H¹ verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// The zero operator.
    Trivial,
    /// Bilinear, inhomogeneous orders, first slot free, curl-free or
    /// divergence-free.
    Bilinear,
    /// Multilinear with one derivative order per slot.
    HomogeneousMultilinear,
    /// Polynomial in the order-`k` jets of the (combined) unknowns.
    HomogeneousPolynomial,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit enum serializes");
        f.write_str(s.as_str().expect("string"))
    }
}

/// H¹ regularity with attribution; `theorem = None` means no covered shape
/// applies and `regular` is then `None` as well.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Verdict {
    pub regular: Option<bool>,
    pub theorem: Option<Theorem>,
    pub zero_integral: Verdict,
    pub note: String,
}

pub fn h1_verdict(spec: &OperatorSpec) -> Result<H1Verdict, CriteriaError> {
    let zi = zero_integral(spec)?;
    let covered = |theorem: Theorem, regular: bool, note: String| H1Verdict {
        regular: Some(regular),
        theorem: Some(theorem),
        zero_integral: zi.clone(),
        note,
    };
    if spec.body.is_zero() {
        return Ok(covered(Theorem::Trivial, true, "zero operator".into()));
    }
    if let Ok(table) = CoefficientTable::from_spec(spec) {
        let r = table.rank();
        if r >= 2 && table.is_slot_homogeneous() {
            return Ok(covered(
                Theorem::HomogeneousMultilinear,
                zi.value,
                format!("{r}-linear, one derivative order per slot"),
            ));
        }
        if r == 2 {
            return Ok(covered(Theorem::Bilinear, zi.value, "bilinear with mixed orders".into()));
        }
        if r >= 3 {
            return Ok(uncovered(zi, format!("{r}-linear with mixed orders in a slot")));
        }
    }
    if spec.is_constrained() {
        return Ok(uncovered(zi, "constrained and not multilinear".into()));
    }
    let orders: std::collections::BTreeSet<u32> = spec.body.jet_vars().iter().map(|v| v.order()).collect();
    let h = spec.body.homogeneity();
    if orders.len() == 1 && h.degree >= 2 {
        let homogeneous = h.is_homogeneous;
        let note = if homogeneous {
            format!("{}-homogeneous polynomial in order-{} jets", h.degree, orders.iter().next().unwrap())
        } else {
            format!("polynomial of degree {} in one jet order but not homogeneous", h.degree)
        };
        return Ok(covered(Theorem::HomogeneousPolynomial, zi.value && homogeneous, note));
    }
    Ok(uncovered(zi, "not multilinear and not a polynomial in one jet order".into()))
}

fn uncovered(zi: Verdict, note: String) -> H1Verdict {
    H1Verdict {
        regular: None,
        theorem: None,
        zero_integral: zi,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::int;
    use crate::opdsl::parse;

    fn spec(text: &str) -> OperatorSpec {
        parse(text).unwrap()
    }

    #[test]
    fn zero_integral_examples() {
        let j = spec(r#"operator "j" { dims 2; functions u: R^2; expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]); }"#);
        assert!(zero_integral(&j).unwrap().value);

        let s = spec(r#"operator "s" { dims 2; functions u: R^1, v: R^1; expr = dx(u)*dy(v); }"#);
        let v = zero_integral(&s).unwrap();
        assert!(!v.value);
        assert_eq!(v.method, Method::EulerOracle);
        let w = v.witness.unwrap();
        assert!(w.recheck());
        assert_eq!(w.residual.to_string(), "-dxy(v)");

        let eb = spec(
            r#"operator "eb" { dims 3; functions E: R^3 constraint div0, B: R^3 constraint curl0;
               expr = E[1]*B[1] + E[2]*B[2] + E[3]*B[3]; }"#,
        );
        let v = zero_integral(&eb).unwrap();
        assert!(v.value);
        assert_eq!(v.method, Method::PotentialSubstitutionEuler);
    }

    #[test]
    fn null_lagrangian_examples() {
        let sq = spec(r#"operator "sq" { dims 2; functions u: R^1; expr = dx(u)^2; }"#);
        let v = null_lagrangian(&sq).unwrap();
        assert!(!v.value);
        assert_eq!(v.witness.unwrap().residual.to_string(), "-2*dxx(u)");
        assert_eq!(v.details.values().next(), Some(&int(-2)));
    }

    #[test]
    fn h1_attributions() {
        let hess = spec(r#"operator "h" { dims 2; functions u: R^1; expr = dxx(u)*dyy(u) - dxy(u)^2; }"#);
        let h = h1_verdict(&hess).unwrap();
        assert_eq!((h.regular, h.theorem), (Some(true), Some(Theorem::HomogeneousPolynomial)));

        let uv = spec(r#"operator "uv" { dims 2; functions u: R^1, v: R^1; expr = u*v; }"#);
        let h = h1_verdict(&uv).unwrap();
        assert_eq!(h.regular, Some(false));

        let prod = spec(r#"operator "p" { dims 2; functions u: R^1, v: R^1; expr = dx(u)*v + u*dx(v); }"#);
        let h = h1_verdict(&prod).unwrap();
        assert_eq!((h.regular, h.theorem), (Some(true), Some(Theorem::Bilinear)));

        let mixed = spec(
            r#"operator "t" { dims 2; functions u: R^1, v: R^1, w: R^1; expr = dx(u)*v*w + u*dx(v)*w + u*v*dx(w); }"#,
        );
        let h = h1_verdict(&mixed).unwrap();
        assert_eq!((h.regular, h.theorem), (None, None));

        let inhom = spec(r#"operator "i" { dims 2; functions u: R^1; expr = dxx(u)*dyy(u) - dxy(u)^2 + dxx(u); }"#);
        let h = h1_verdict(&inhom).unwrap();
        assert_eq!((h.regular, h.theorem), (Some(false), Some(Theorem::HomogeneousPolynomial)));
    }
}
